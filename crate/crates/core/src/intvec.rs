//! Exact integer moves, additive preorders, and tableau rendering.
//!
//! A move is a vector in Z^n.  Its positive and negative parts have disjoint
//! support and satisfy m = m+ - m-, and deg(m) = max(|m+|_1, |m-|_1).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    entries: Vec<BigInt>,
}

impl Move {
    pub fn new(entries: Vec<BigInt>) -> Self {
        Move { entries }
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Move::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Move::new(vec![BigInt::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn neg(&self) -> Move {
        Move::new(self.entries.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Move) -> Move {
        Move::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Move) -> Move {
        Move::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect())
    }

    /// (m+, m-): disjoint-support split with m = m+ - m-.
    pub fn pos_neg_parts(&self) -> (Move, Move) {
        let pos = self.entries.iter().map(|x| if x.is_positive() { x.clone() } else { BigInt::zero() });
        let neg = self.entries.iter().map(|x| if x.is_negative() { -x } else { BigInt::zero() });
        (Move::new(pos.collect()), Move::new(neg.collect()))
    }

    /// deg(m) = max(|m+|_1, |m-|_1).
    pub fn degree(&self) -> BigInt {
        let mut p = BigInt::zero();
        let mut n = BigInt::zero();
        for x in &self.entries {
            if x.is_positive() {
                p += x;
            } else {
                n -= x;
            }
        }
        p.max(n)
    }

    /// Canonical representative of {m, -m}: first nonzero entry positive.
    pub fn canonical_sign(&self) -> Move {
        match self.entries.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// True when the two moves never disagree in sign on a coordinate.
    pub fn sign_consistent(&self, other: &Move) -> bool {
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| (a * b) >= BigInt::zero())
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Outcome of comparing two vectors under an additive preorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Greater,
    Less,
    Equivalent,
}

/// An additive preorder given by a cascade of rational weight vectors.
/// The empty cascade is the trivial preorder that compares every pair both
/// ways; it makes the Groebner machinery degenerate to plain Markov bases.
#[derive(Debug, Clone, PartialEq)]
pub struct Preorder {
    weights: Vec<Vec<BigRational>>,
}

impl Preorder {
    pub fn trivial() -> Self {
        Preorder { weights: Vec::new() }
    }

    pub fn from_weights(weights: Vec<Vec<BigRational>>) -> Self {
        Preorder { weights }
    }

    pub fn from_integer_weights(weights: &[Vec<i64>]) -> Self {
        Preorder {
            weights: weights
                .iter()
                .map(|w| w.iter().map(|&x| BigRational::from(BigInt::from(x))).collect())
                .collect(),
        }
    }

    /// Degree first, then graded reverse lexicographic tiebreaks, as a
    /// weight cascade: (1,...,1), then -e_n, -e_{n-1}, ..., -e_2.
    pub fn grevlex(n: usize) -> Self {
        let mut weights = vec![vec![BigRational::from(BigInt::from(1)); n]];
        for i in (1..n).rev() {
            let mut w = vec![BigRational::zero(); n];
            w[i] = -BigRational::from(BigInt::from(1));
            weights.push(w);
        }
        Preorder { weights }
    }

    pub fn is_trivial(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Vec<BigRational>] {
        &self.weights
    }

    /// Append the weights of `other` as tiebreaks after our own.
    pub fn then(&self, other: &Preorder) -> Preorder {
        let mut weights = self.weights.clone();
        weights.extend(other.weights.iter().cloned());
        Preorder { weights }
    }

    /// Pull the cascade back along a linear map given by its matrix rows
    /// acting on Z^n (weight w becomes w . map).
    pub fn pullback(&self, map: &crate::matrix::IMat) -> Preorder {
        let weights = self
            .weights
            .iter()
            .map(|w| {
                (0..map.ncols())
                    .map(|j| {
                        (0..map.nrows())
                            .map(|i| &w[i] * BigRational::from(map.get(i, j).clone()))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Preorder { weights }
    }

    pub fn compare_vec(&self, u: &[BigInt], v: &[BigInt]) -> Result<Comparison> {
        for w in &self.weights {
            if w.len() != u.len() || w.len() != v.len() {
                return Err(Error::DimensionMismatch { expected: w.len(), got: u.len().max(v.len()) });
            }
            let mut acc = BigRational::zero();
            for i in 0..w.len() {
                acc += &w[i] * BigRational::from(&u[i] - &v[i]);
            }
            match acc.cmp(&BigRational::zero()) {
                Ordering::Greater => return Ok(Comparison::Greater),
                Ordering::Less => return Ok(Comparison::Less),
                Ordering::Equal => {}
            }
        }
        Ok(Comparison::Equivalent)
    }

    pub fn compare(&self, u: &Move, v: &Move) -> Result<Comparison> {
        if u.dim() != v.dim() {
            return Err(Error::DimensionMismatch { expected: u.dim(), got: v.dim() });
        }
        self.compare_vec(u.entries(), v.entries())
    }

    /// u >= v (possibly both ways).
    pub fn geq(&self, u: &[BigInt], v: &[BigInt]) -> bool {
        !matches!(self.compare_vec(u, v), Ok(Comparison::Less))
    }
}

/// Product index-set descriptor: levels per axis, columns ordered
/// lexicographically with the leftmost axis most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexShape {
    pub levels: Vec<usize>,
}

impl IndexShape {
    pub fn new(levels: Vec<usize>) -> Self {
        IndexShape { levels }
    }

    pub fn cardinality(&self) -> usize {
        self.levels.iter().product()
    }

    /// 1-based index tuple of the column at `rank` (lex order).
    pub fn tuple_of(&self, rank: usize) -> Vec<usize> {
        let mut rest = rank;
        let mut tuple = vec![0usize; self.levels.len()];
        for (axis, &d) in self.levels.iter().enumerate().rev() {
            tuple[axis] = rest % d + 1;
            rest /= d;
        }
        tuple
    }

    pub fn rank_of(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.levels.len() {
            return Err(Error::ShapeMismatch(format!(
                "tuple length {} vs {} axes",
                tuple.len(),
                self.levels.len()
            )));
        }
        let mut rank = 0usize;
        for (axis, &d) in self.levels.iter().enumerate() {
            let i = tuple[axis];
            if i == 0 || i > d {
                return Err(Error::ShapeMismatch(format!("index {i} out of 1..{d}")));
            }
            rank = rank * d + (i - 1);
        }
        Ok(rank)
    }
}

/// A move written as the difference of two matrices of indices: one row per
/// unit of m+ and m-.  Rows are kept sorted for canonical printing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    pub plus_rows: Vec<Vec<usize>>,
    pub minus_rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn is_empty(&self) -> bool {
        self.plus_rows.is_empty() && self.minus_rows.is_empty()
    }

    pub fn render(&self, zero_based: bool) -> String {
        let fmt_rows = |rows: &[Vec<usize>]| {
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&i| (if zero_based { i - 1 } else { i }).to_string())
                        .collect::<Vec<_>>()
                        .join("")
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("[{}] - [{}]", fmt_rows(&self.plus_rows), fmt_rows(&self.minus_rows))
    }
}

pub fn tableau_of(m: &Move, shape: &IndexShape) -> Result<Tableau> {
    if m.dim() != shape.cardinality() {
        return Err(Error::ShapeMismatch(format!(
            "move has dimension {} but index set has cardinality {}",
            m.dim(),
            shape.cardinality()
        )));
    }
    let mut plus_rows = Vec::new();
    let mut minus_rows = Vec::new();
    for (rank, x) in m.entries().iter().enumerate() {
        let tuple = shape.tuple_of(rank);
        let mut count = x.abs();
        while count.is_positive() {
            if x.is_positive() {
                plus_rows.push(tuple.clone());
            } else {
                minus_rows.push(tuple.clone());
            }
            count -= 1;
        }
    }
    plus_rows.sort();
    minus_rows.sort();
    Ok(Tableau { plus_rows, minus_rows })
}

pub fn move_of(t: &Tableau, shape: &IndexShape) -> Result<Move> {
    let mut entries = vec![BigInt::zero(); shape.cardinality()];
    for row in &t.plus_rows {
        entries[shape.rank_of(row)?] += 1;
    }
    for row in &t.minus_rows {
        entries[shape.rank_of(row)?] -= 1;
    }
    Ok(Move::new(entries))
}

/// Canonicalize a set of moves: canonical sign, dedupe, sort, drop zeros.
pub fn canonical_move_set(moves: impl IntoIterator<Item = Move>) -> Vec<Move> {
    let mut out: Vec<Move> = moves
        .into_iter()
        .filter(|m| !m.is_zero())
        .map(|m| m.canonical_sign())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Set equality modulo per-move sign.
pub fn same_move_set_up_to_sign(a: &[Move], b: &[Move]) -> bool {
    canonical_move_set(a.to_vec()) == canonical_move_set(b.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pos_neg_parts_split() {
        let m = Move::from_i64(&[2, 0, -1, -1, -1, 1]);
        let (p, n) = m.pos_neg_parts();
        assert_eq!(p, Move::from_i64(&[2, 0, 0, 0, 0, 1]));
        assert_eq!(n, Move::from_i64(&[0, 0, 1, 1, 1, 0]));
        let z = Move::zero(3);
        assert_eq!(z.pos_neg_parts(), (Move::zero(3), Move::zero(3)));
        let m = Move::from_i64(&[1, -2]);
        assert_eq!(m.pos_neg_parts(), (Move::from_i64(&[1, 0]), Move::from_i64(&[0, 2])));
    }

    #[test]
    fn degree_values() {
        assert_eq!(Move::from_i64(&[1, -1, 0, 0]).degree(), BigInt::from(1));
        // hand evaluation of the formula on a degree-4 glue move
        assert_eq!(Move::from_i64(&[2, -2, -1, 2, -1]).degree(), BigInt::from(4));
        assert_eq!(Move::zero(4).degree(), BigInt::zero());
        let m = Move::from_i64(&[3, -1]);
        assert_eq!(m.degree(), m.neg().degree());
    }

    #[test]
    fn compare_cascades() {
        let p = Preorder::trivial();
        assert_eq!(
            p.compare(&Move::from_i64(&[3, -1]), &Move::from_i64(&[0, 0])).unwrap(),
            Comparison::Equivalent
        );
        let p = Preorder::from_integer_weights(&[vec![1, 0]]);
        assert_eq!(
            p.compare(&Move::from_i64(&[2, 5]), &Move::from_i64(&[1, 9])).unwrap(),
            Comparison::Greater
        );
        let p = Preorder::from_integer_weights(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(
            p.compare(&Move::from_i64(&[1, 1]), &Move::from_i64(&[2, 0])).unwrap(),
            Comparison::Less
        );
        assert!(p
            .compare(&Move::from_i64(&[1]), &Move::from_i64(&[1, 2]))
            .is_err());
    }

    #[test]
    fn tableau_round_trip() {
        // 2 e_111 + e_222 - e_112 - e_121 - e_211 over a 2x2x2 index set
        let shape = IndexShape::new(vec![2, 2, 2]);
        let mut m = Move::zero(8);
        let mut set = |t: &[usize], v: i64| {
            let r = shape.rank_of(t).unwrap();
            m = Move::new({
                let mut e = m.entries().to_vec();
                e[r] = BigInt::from(v);
                e
            });
        };
        set(&[1, 1, 1], 2);
        set(&[2, 2, 2], 1);
        set(&[1, 1, 2], -1);
        set(&[1, 2, 1], -1);
        set(&[2, 1, 1], -1);
        let t = tableau_of(&m, &shape).unwrap();
        assert_eq!(t.plus_rows, vec![vec![1, 1, 1], vec![1, 1, 1], vec![2, 2, 2]]);
        assert_eq!(t.minus_rows, vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
        assert_eq!(move_of(&t, &shape).unwrap(), m);

        let z = tableau_of(&Move::zero(8), &shape).unwrap();
        assert!(z.is_empty());

        let shape2 = IndexShape::new(vec![2, 2]);
        let m2 = Move::from_i64(&[0, 1, -1, 0]);
        let t2 = tableau_of(&m2, &shape2).unwrap();
        assert_eq!(t2.plus_rows, vec![vec![1, 2]]);
        assert_eq!(t2.minus_rows, vec![vec![2, 1]]);
        assert!(tableau_of(&Move::zero(5), &shape2).is_err());
    }

    #[test]
    fn canonical_sign_flips_leading_negative() {
        let m = Move::from_i64(&[0, -2, 1]);
        assert_eq!(m.canonical_sign(), Move::from_i64(&[0, 2, -1]));
        assert_eq!(m.neg().canonical_sign(), Move::from_i64(&[0, 2, -1]));
    }
}
