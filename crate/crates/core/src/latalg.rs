//! Exact lattice linear algebra: column Hermite normal form, Smith normal
//! form, integer kernels, membership, intersections, and preimages.
//!
//! Everything here is exact; there is no floating point in this module.

use crate::error::{Error, Result};
use crate::intvec::Move;
use crate::matrix::{vec_is_zero, IMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Column Hermite normal form H = A U with U unimodular.
///
/// H is in column echelon form with positive pivots; entries of a pivot row
/// in earlier columns are reduced into [0, pivot).  Pivot columns come first,
/// zero columns last.
pub struct Hnf {
    pub h: IMat,
    pub u: IMat,
    /// (row, col) of each pivot, ascending in both.
    pub pivots: Vec<(usize, usize)>,
}

pub fn column_hnf(a: &IMat) -> Hnf {
    let n = a.nrows();
    let m = a.ncols();
    let mut h = a.clone();
    let mut u = IMat::identity(m);

    let col_addmul = |h: &mut IMat, u: &mut IMat, dst: usize, src: usize, q: &BigInt| {
        for i in 0..n {
            let v = h.get(i, dst) - q * h.get(i, src);
            h.set(i, dst, v);
        }
        for i in 0..m {
            let v = u.get(i, dst) - q * u.get(i, src);
            u.set(i, dst, v);
        }
    };
    let col_swap = |h: &mut IMat, u: &mut IMat, x: usize, y: usize| {
        if x == y {
            return;
        }
        for i in 0..n {
            let (a, b) = (h.get(i, x).clone(), h.get(i, y).clone());
            h.set(i, x, b);
            h.set(i, y, a);
        }
        for i in 0..m {
            let (a, b) = (u.get(i, x).clone(), u.get(i, y).clone());
            u.set(i, x, b);
            u.set(i, y, a);
        }
    };
    let col_neg = |h: &mut IMat, u: &mut IMat, x: usize| {
        for i in 0..n {
            let v = -h.get(i, x);
            h.set(i, x, v);
        }
        for i in 0..m {
            let v = -u.get(i, x);
            u.set(i, x, v);
        }
    };

    let mut pivots = Vec::new();
    let mut col = 0usize;
    for row in 0..n {
        if col == m {
            break;
        }
        // Euclidean elimination across columns col..m in this row.
        loop {
            let mut best: Option<usize> = None;
            for j in col..m {
                if !h.get(row, j).is_zero() {
                    best = match best {
                        None => Some(j),
                        Some(b) if h.get(row, j).abs() < h.get(row, b).abs() => Some(j),
                        keep => keep,
                    };
                }
            }
            let Some(j) = best else { break };
            col_swap(&mut h, &mut u, col, j);
            let mut done = true;
            for j in col + 1..m {
                if !h.get(row, j).is_zero() {
                    let q = h.get(row, j).div_floor(h.get(row, col));
                    col_addmul(&mut h, &mut u, j, col, &q);
                    if !h.get(row, j).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !h.get(row, col).is_zero() {
            if h.get(row, col).is_negative() {
                col_neg(&mut h, &mut u, col);
            }
            let pivot = h.get(row, col).clone();
            for j in 0..col {
                let q = h.get(row, j).div_floor(&pivot);
                if !q.is_zero() {
                    col_addmul(&mut h, &mut u, j, col, &q);
                }
            }
            pivots.push((row, col));
            col += 1;
        }
    }
    Hnf { h, u, pivots }
}

/// Smith normal form A = U S V with U, V unimodular and S diagonal with
/// divisibility d_1 | d_2 | ...  Returns (u, s, v).
pub fn smith_normal_form(a: &IMat) -> (IMat, IMat, IMat) {
    let n = a.nrows();
    let m = a.ncols();
    let mut s = a.clone();
    let mut u = IMat::identity(n);
    let mut v = IMat::identity(m);

    fn row_addmul(s: &mut IMat, u: &mut IMat, dst: usize, src: usize, q: &BigInt) {
        for j in 0..s.ncols() {
            let val = s.get(dst, j) - q * s.get(src, j);
            s.set(dst, j, val);
        }
        // track inverse op on u: we maintain a = u s v, so row op on s means
        // compensating column op on u: col_src += q * col_dst
        for i in 0..u.nrows() {
            let val = u.get(i, src) + q * u.get(i, dst);
            u.set(i, src, val);
        }
    }
    fn col_addmul(s: &mut IMat, v: &mut IMat, dst: usize, src: usize, q: &BigInt) {
        for i in 0..s.nrows() {
            let val = s.get(i, dst) - q * s.get(i, src);
            s.set(i, dst, val);
        }
        for j in 0..v.ncols() {
            let val = v.get(src, j) + q * v.get(dst, j);
            v.set(src, j, val);
        }
    }
    fn row_swap(s: &mut IMat, u: &mut IMat, x: usize, y: usize) {
        if x == y {
            return;
        }
        for j in 0..s.ncols() {
            let (a, b) = (s.get(x, j).clone(), s.get(y, j).clone());
            s.set(x, j, b);
            s.set(y, j, a);
        }
        for i in 0..u.nrows() {
            let (a, b) = (u.get(i, x).clone(), u.get(i, y).clone());
            u.set(i, x, b);
            u.set(i, y, a);
        }
    }
    fn col_swap(s: &mut IMat, v: &mut IMat, x: usize, y: usize) {
        if x == y {
            return;
        }
        for i in 0..s.nrows() {
            let (a, b) = (s.get(i, x).clone(), s.get(i, y).clone());
            s.set(i, x, b);
            s.set(i, y, a);
        }
        for j in 0..v.ncols() {
            let (a, b) = (v.get(x, j).clone(), v.get(y, j).clone());
            v.set(x, j, b);
            v.set(y, j, a);
        }
    }
    fn row_neg(s: &mut IMat, u: &mut IMat, x: usize) {
        for j in 0..s.ncols() {
            let val = -s.get(x, j);
            s.set(x, j, val);
        }
        for i in 0..u.nrows() {
            let val = -u.get(i, x);
            u.set(i, x, val);
        }
    }

    let rank_bound = n.min(m);
    'diag: for k in 0..rank_bound {
        'pivot: loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..m {
                    if !s.get(i, j).is_zero() {
                        best = match best {
                            None => Some((i, j)),
                            Some((bi, bj)) if s.get(i, j).abs() < s.get(bi, bj).abs() => {
                                Some((i, j))
                            }
                            keep => keep,
                        };
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'diag };
            row_swap(&mut s, &mut u, k, pi);
            col_swap(&mut s, &mut v, k, pj);
            let mut dirty = false;
            for i in k + 1..n {
                if !s.get(i, k).is_zero() {
                    let q = s.get(i, k).div_floor(s.get(k, k));
                    row_addmul(&mut s, &mut u, i, k, &q);
                    dirty |= !s.get(i, k).is_zero();
                }
            }
            for j in k + 1..m {
                if !s.get(k, j).is_zero() {
                    let q = s.get(k, j).div_floor(s.get(k, k));
                    col_addmul(&mut s, &mut v, j, k, &q);
                    dirty |= !s.get(k, j).is_zero();
                }
            }
            if dirty {
                continue 'pivot;
            }
            // divisibility d_k | trailing entries; fix by mixing in a bad row
            for i in k + 1..n {
                for j in k + 1..m {
                    if !(s.get(i, j) % s.get(k, k)).is_zero() {
                        let minus_one = BigInt::from(-1);
                        row_addmul(&mut s, &mut u, k, i, &minus_one);
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if s.get(k, k).is_negative() {
            row_neg(&mut s, &mut u, k);
        }
    }
    (u, s, v)
}

/// A sublattice of Z^n given by a canonical (column HNF) basis matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    basis: IMat,
    ambient: usize,
}

impl Lattice {
    pub fn zero(ambient: usize) -> Self {
        Lattice { basis: IMat::zero(ambient, 0), ambient }
    }

    pub fn full(ambient: usize) -> Self {
        Lattice { basis: IMat::identity(ambient), ambient }
    }

    pub fn from_generators(ambient: usize, gens: &[Vec<BigInt>]) -> Self {
        for g in gens {
            assert_eq!(g.len(), ambient, "generator dimension");
        }
        let mat = IMat::from_columns(gens);
        Lattice::from_matrix_columns(&mat, ambient)
    }

    /// Lattice spanned by the columns of `m`.
    pub fn from_matrix_columns(m: &IMat, ambient: usize) -> Self {
        if m.ncols() == 0 {
            return Lattice::zero(ambient);
        }
        let hnf = column_hnf(m);
        let rank = hnf.pivots.len();
        let cols: Vec<Vec<BigInt>> = (0..rank).map(|j| hnf.h.col(j)).collect();
        Lattice { basis: IMat::from_columns(&cols), ambient }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &IMat {
        &self.basis
    }

    pub fn basis_moves(&self) -> Vec<Move> {
        (0..self.rank()).map(|j| Move::new(self.basis.col(j))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// Exact membership: v in the lattice iff the integer system Bx = v is
    /// solvable.
    pub fn member(&self, v: &[BigInt]) -> bool {
        self.solve(v).is_some()
    }

    /// Coefficients of v in the stored basis, if v lies in the lattice.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        solve_columns(&self.basis, v)
    }

    /// True when the all-ones functional vanishes on the lattice.
    pub fn is_degree_graded(&self) -> bool {
        (0..self.rank()).all(|j| self.basis.col(j).iter().sum::<BigInt>().is_zero())
    }
}

/// Solve M x = v exactly over the integers, with M of full column rank or
/// not; returns one solution if it exists.
pub fn solve_columns(m: &IMat, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.nrows(), v.len(), "rhs length");
    let hnf = column_hnf(m);
    let mut residual = v.to_vec();
    let mut z = vec![BigInt::zero(); m.ncols()];
    for &(row, col) in &hnf.pivots {
        let pivot = hnf.h.get(row, col);
        let (q, r) = residual[row].div_rem(pivot);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for i in 0..m.nrows() {
                let val = &residual[i] - &q * hnf.h.get(i, col);
                residual[i] = val;
            }
        }
        z[col] = q;
    }
    if !vec_is_zero(&residual) {
        return None;
    }
    Some(hnf.u.mul_vec(&z))
}

/// Integer kernel of B as a lattice: {v : Bv = 0}, basis in column HNF.
pub fn kernel_lattice(b: &IMat) -> Lattice {
    let n = b.ncols();
    let hnf = column_hnf(b);
    let rank = hnf.pivots.len();
    let gens: Vec<Vec<BigInt>> = (rank..n).map(|j| hnf.u.col(j)).collect();
    Lattice::from_generators(n, &gens)
}

/// Rank of an integer matrix.
pub fn rank(m: &IMat) -> usize {
    column_hnf(m).pivots.len()
}

pub fn intersect(l1: &Lattice, l2: &Lattice) -> Result<Lattice> {
    if l1.ambient_dim() != l2.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: l1.ambient_dim(), got: l2.ambient_dim() });
    }
    let n = l1.ambient_dim();
    if l1.is_zero() || l2.is_zero() {
        return Ok(Lattice::zero(n));
    }
    // ker [B1 | -B2]; intersection is B1 applied to the x-parts.
    let stacked = {
        let mut cols: Vec<Vec<BigInt>> = (0..l1.rank()).map(|j| l1.basis().col(j)).collect();
        for j in 0..l2.rank() {
            cols.push(l2.basis().col(j).iter().map(|x| -x).collect());
        }
        IMat::from_columns(&cols)
    };
    let ker = kernel_lattice(&stacked);
    let mut gens = Vec::new();
    for j in 0..ker.rank() {
        let xy = ker.basis().col(j);
        let x = &xy[0..l1.rank()];
        gens.push(l1.basis().mul_vec(x));
    }
    Ok(Lattice::from_generators(n, &gens))
}

/// {v in domain : map v in target}.
pub fn preimage_lattice(map: &IMat, target: &Lattice, domain: &Lattice) -> Result<Lattice> {
    if map.ncols() != domain.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: map.ncols(), got: domain.ambient_dim() });
    }
    if map.nrows() != target.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: map.nrows(), got: target.ambient_dim() });
    }
    let n = domain.ambient_dim();
    if domain.is_zero() {
        return Ok(Lattice::zero(n));
    }
    let md = map.mul(domain.basis());
    // (x, y) with (map . domain-basis) x = target-basis y
    let mut cols: Vec<Vec<BigInt>> = (0..md.ncols()).map(|j| md.col(j)).collect();
    for j in 0..target.rank() {
        cols.push(target.basis().col(j).iter().map(|x| -x).collect());
    }
    let ker = kernel_lattice(&IMat::from_columns(&cols));
    let mut gens = Vec::new();
    for j in 0..ker.rank() {
        let xy = ker.basis().col(j);
        gens.push(domain.basis().mul_vec(&xy[0..md.ncols()]));
    }
    Ok(Lattice::from_generators(n, &gens))
}

/// The image of a lattice under an integer linear map.
pub fn image_lattice(map: &IMat, domain: &Lattice) -> Lattice {
    let md = map.mul(domain.basis());
    Lattice::from_matrix_columns(&md, map.nrows())
}

/// A direct-sum decomposition L = L' x K for a saturated sublattice K of L.
///
/// `complement` holds a basis of L', `sub` the given K; `into_parts` writes a
/// lattice element as (complement part, K part) with exact integer
/// coefficients, and `from_parts` inverts it.
#[derive(Debug, Clone)]
pub struct SplitLattice {
    pub complement_basis: IMat,
    pub sub_basis: IMat,
    combined: IMat,
}

impl SplitLattice {
    pub fn into_parts(&self, v: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
        let coeffs = solve_columns(&self.combined, v)?;
        let s = self.complement_basis.ncols();
        Some((coeffs[0..s].to_vec(), coeffs[s..].to_vec()))
    }

    pub fn from_parts(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut coeffs = a.to_vec();
        coeffs.extend(b.iter().cloned());
        self.combined.mul_vec(&coeffs)
    }
}

/// Split L as L' x K.  K must be a sublattice of L; the decomposition
/// requires K saturated in L (true for K = L âˆ© ker D, the use case here).
pub fn split_off(l: &Lattice, k: &Lattice) -> Result<SplitLattice> {
    if l.ambient_dim() != k.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: l.ambient_dim(), got: k.ambient_dim() });
    }
    let t = l.rank();
    let s = k.rank();
    // coefficients of K's basis inside L
    let mut xcols = Vec::new();
    for j in 0..s {
        let col = k.basis().col(j);
        let x = l
            .solve(&col)
            .ok_or_else(|| Error::NotSublattice("K".into(), "L".into()))?;
        xcols.push(x);
    }
    if s == 0 {
        return Ok(SplitLattice {
            complement_basis: l.basis().clone(),
            sub_basis: k.basis().clone(),
            combined: l.basis().clone(),
        });
    }
    let x = IMat::from_columns(&xcols); // t x s
    let (u, snf, _v) = smith_normal_form(&x);
    for i in 0..s {
        if snf.get(i, i).abs() != BigInt::from(1) {
            return Err(Error::NotSublattice(
                "K".into(),
                "L (K is not saturated in L)".into(),
            ));
        }
    }
    // columns of L-basis * U: first s span K, the rest span a complement
    let lb = l.basis().mul(&u);
    let sub_cols: Vec<Vec<BigInt>> = (0..s).map(|j| lb.col(j)).collect();
    let comp_cols: Vec<Vec<BigInt>> = (s..t).map(|j| lb.col(j)).collect();
    let complement_basis = IMat::from_columns(&comp_cols);
    let sub_basis = IMat::from_columns(&sub_cols);
    let mut all = comp_cols;
    all.extend(sub_cols);
    let combined = IMat::from_columns(&all);
    Ok(SplitLattice { complement_basis, sub_basis, combined })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_from_i64;

    #[test]
    fn kernel_of_two_row_matrix() {
        let b = IMat::from_rows(&[vec![1, 1, 1, 1], vec![0, 0, 1, 2]]);
        let k = kernel_lattice(&b);
        assert_eq!(k.rank(), 2);
        assert!(k.member(&vec_from_i64(&[1, -1, 0, 0])));
        assert!(k.member(&vec_from_i64(&[1, 0, -2, 1])));
        for j in 0..k.rank() {
            assert!(vec_is_zero(&b.mul_vec(&k.basis().col(j))));
        }
        assert_eq!(k.rank() + rank(&b), 4);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let k = kernel_lattice(&IMat::identity(3));
        assert!(k.is_zero());
    }

    #[test]
    fn kernel_of_difference_row() {
        let k = kernel_lattice(&IMat::from_rows(&[vec![1, -1]]));
        assert_eq!(k.rank(), 1);
        assert!(k.member(&vec_from_i64(&[1, 1])));
        assert!(!k.member(&vec_from_i64(&[1, 0])));
    }

    #[test]
    fn membership_and_solve() {
        let l = Lattice::from_generators(2, &[vec_from_i64(&[2, 0])]);
        assert!(!l.member(&vec_from_i64(&[1, 0])));
        let c = l.solve(&vec_from_i64(&[4, 0])).unwrap();
        assert_eq!(c, vec_from_i64(&[2]));
        let k = kernel_lattice(&IMat::from_rows(&[vec![1, 1]]));
        assert!(k.member(&vec_from_i64(&[3, -3])));
    }

    #[test]
    fn intersect_cases() {
        let z2 = Lattice::full(2);
        let diag = Lattice::from_generators(2, &[vec_from_i64(&[1, 1])]);
        let i = intersect(&z2, &diag).unwrap();
        assert_eq!(i, diag);
        let same = intersect(&diag, &diag).unwrap();
        assert_eq!(same, diag);
    }

    #[test]
    fn preimage_basics() {
        let l = Lattice::full(2);
        let id = IMat::identity(2);
        let p = preimage_lattice(&id, &l, &l).unwrap();
        assert_eq!(p, l);
        // target {0}: preimage = kernel of map restricted to domain
        let map = IMat::from_rows(&[vec![1, 1]]);
        let p = preimage_lattice(&map, &Lattice::zero(1), &Lattice::full(2)).unwrap();
        assert_eq!(p, kernel_lattice(&map));
    }

    #[test]
    fn hnf_canonical_kernel_basis_of_sum_row() {
        // kernel of (1 1 1): canonical basis (1,0,-1), (0,1,-1)
        let k = kernel_lattice(&IMat::from_rows(&[vec![1, 1, 1]]));
        assert_eq!(
            k.basis(),
            &IMat::from_rows(&[vec![1, 0], vec![0, 1], vec![-1, -1]])
        );
    }

    #[test]
    fn split_off_projects_away_coordinate() {
        // L = Z^2, K = Z.(0,1): complement is Z.(1,0)-ish
        let l = Lattice::full(2);
        let k = Lattice::from_generators(2, &[vec_from_i64(&[0, 1])]);
        let split = split_off(&l, &k).unwrap();
        assert_eq!(split.complement_basis.ncols(), 1);
        let v = vec_from_i64(&[3, 5]);
        let (a, b) = split.into_parts(&v).unwrap();
        assert_eq!(split.from_parts(&a, &b), v);
    }

    #[test]
    fn split_rejects_non_sublattice() {
        let l = Lattice::from_generators(2, &[vec_from_i64(&[2, 0])]);
        let k = Lattice::from_generators(2, &[vec_from_i64(&[1, 0])]);
        assert!(split_off(&l, &k).is_err());
    }

    #[test]
    fn snf_diagonalizes() {
        let a = IMat::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let (u, s, v) = smith_normal_form(&a);
        assert_eq!(u.mul(&s).mul(&v), a);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(s.get(i, j).is_zero());
                }
            }
        }
        for i in 0..2 {
            if !s.get(i + 1, i + 1).is_zero() {
                assert!((s.get(i + 1, i + 1) % s.get(i, i)).is_zero());
            }
        }
    }
}
