//! Dense integer matrices over arbitrary-precision integers, plus the
//! plain-text matrix format shared by every tool in this workspace.
//!
//! The text layout is the de-facto 4ti2 one: a first line `R C`, then R rows
//! of C whitespace-separated integers.  A move set is one move per row.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = IMat::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        IMat { rows: r, cols: c, data }
    }

    pub fn from_columns(cols: &[Vec<BigInt>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = IMat::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[BigInt]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = IMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "vector length");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Stack `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.cols, "column counts");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IMat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> IMat {
        IMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Remove rows that are exact duplicates of an earlier row.
    pub fn dedup_rows(&self) -> IMat {
        let mut seen: Vec<Vec<BigInt>> = Vec::new();
        for r in self.rows_iter() {
            if !seen.iter().any(|s| s.as_slice() == r) {
                seen.push(r.to_vec());
            }
        }
        IMat::from_big_rows(seen)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<IMat> {
        let mut toks = text.split_whitespace();
        let rows: usize = toks
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad row count: {e}")))?;
        let cols: usize = toks
            .next()
            .ok_or_else(|| Error::Parse("missing column count".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad column count: {e}")))?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let t = toks.next().ok_or_else(|| Error::Parse("too few entries".into()))?;
            let v: BigInt =
                t.parse().map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))?;
            data.push(v);
        }
        if toks.next().is_some() {
            return Err(Error::Parse("trailing entries after matrix".into()));
        }
        Ok(IMat { rows, cols, data })
    }

    pub fn read_file(path: &Path) -> Result<IMat> {
        let text = std::fs::read_to_string(path)?;
        IMat::parse_text(&text)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

pub fn vec_is_zero(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|x| -x).collect()
}

pub fn vec_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_one_norm(a: &[BigInt]) -> BigInt {
    a.iter().map(|x| x.abs()).sum()
}

pub fn vec_from_i64(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let m = IMat::from_rows(&[vec![1, -2, 3], vec![0, 5, -6]]);
        let back = IMat::parse_text(&m.to_text()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(IMat::parse_text("2 2\n1 2 3").is_err());
        assert!(IMat::parse_text("2 2\n1 2 3 4 5").is_err());
        assert!(IMat::parse_text("x 2\n").is_err());
    }

    #[test]
    fn mul_matches_hand_value() {
        let a = IMat::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = IMat::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), IMat::from_rows(&[vec![2, 1], vec![4, 3]]));
    }
}
