//! The completion engine: Markov bases, preorder-directed Groebner bases,
//! and Graver bases of integer lattices.
//!
//! The core is a critical-pair completion on vectors (binomials with
//! disjoint support).  A lattice basis alone does not generate the lattice
//! ideal, so the engine runs one completion round per coordinate under a
//! reverse-lexicographic order making that coordinate cheapest; each round
//! saturates the generated ideal with respect to its coordinate, and the
//! chain of rounds reaches the full lattice ideal.  Lattices that are not
//! orthogonal to the all-ones functional are homogenized with a slack
//! coordinate first, which keeps every round degree-bounded and terminating.

use crate::error::{Error, Result};
use crate::intvec::{canonical_move_set, Move, Preorder};
use crate::latalg::Lattice;
use crate::matrix::vec_is_zero;
use crate::verify::{
    connects_within_fiber, enumerate_fiber, markov_oracle, FiberFamily, SweepConfig,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
pub enum BasisKind {
    Markov,
    Groebner(Preorder),
    Graver,
}

#[derive(Debug, Clone)]
pub struct BasisResult {
    pub moves: Vec<Move>,
    pub kind: BasisKind,
    pub lattice: Lattice,
}

impl BasisResult {
    /// Every move must lie in the source lattice.
    pub fn validate(&self) -> Result<()> {
        for m in &self.moves {
            if !self.lattice.member(m.entries()) {
                return Err(Error::OracleFailure(format!("move {m} is not in the lattice")));
            }
        }
        Ok(())
    }
}

/// A term order on monomials of Z^dim used inside the engine: an optional
/// weight cascade refined by graded reverse lex with a designated cheapest
/// variable.
#[derive(Debug, Clone)]
struct EngineOrder {
    weights: Vec<Vec<BigRational>>,
    /// grevlex scan order: first entry is compared first (the cheapest
    /// variable comes first here)
    scan: Vec<usize>,
}

impl EngineOrder {
    fn grevlex_last(dim: usize, last: usize) -> Self {
        let mut scan = vec![last];
        scan.extend((0..dim).rev().filter(|&j| j != last));
        EngineOrder { weights: Vec::new(), scan }
    }

    fn with_weights(dim: usize, weights: Vec<Vec<BigRational>>) -> Self {
        let mut o = EngineOrder::grevlex_last(dim, dim - 1);
        o.weights = weights;
        o
    }

    /// Compare monomials (nonnegative exponent vectors).
    fn cmp_monomial(&self, a: &[BigInt], b: &[BigInt]) -> Ordering {
        for w in &self.weights {
            let mut acc = BigRational::zero();
            for i in 0..a.len() {
                acc += &w[i] * BigRational::from(&a[i] - &b[i]);
            }
            match acc.cmp(&BigRational::zero()) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        let da: BigInt = a.iter().sum();
        let db: BigInt = b.iter().sum();
        match da.cmp(&db) {
            Ordering::Equal => {}
            other => return other,
        }
        for &j in &self.scan {
            match a[j].cmp(&b[j]) {
                Ordering::Equal => {}
                // more of a cheap variable means smaller
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
            }
        }
        Ordering::Equal
    }
}

type Mask = u128;

#[derive(Debug, Clone)]
struct Elem {
    v: Vec<BigInt>,
    pos: Vec<BigInt>,
    neg: Vec<BigInt>,
    pos_mask: Mask,
}

fn split_parts(v: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>, Mask) {
    let mut pos = vec![BigInt::zero(); v.len()];
    let mut neg = vec![BigInt::zero(); v.len()];
    let mut mask: Mask = 0;
    for (i, x) in v.iter().enumerate() {
        if x.is_positive() {
            pos[i] = x.clone();
            mask |= 1 << i;
        } else if x.is_negative() {
            neg[i] = -x;
        }
    }
    (pos, neg, mask)
}

impl Elem {
    /// Orient so the positive part is the order-leading monomial.
    fn oriented(v: Vec<BigInt>, order: &EngineOrder) -> Option<Elem> {
        if vec_is_zero(&v) {
            return None;
        }
        let (pos, neg, mask) = split_parts(&v);
        match order.cmp_monomial(&pos, &neg) {
            Ordering::Greater => Some(Elem { v, pos, neg, pos_mask: mask }),
            Ordering::Less => {
                let nv: Vec<BigInt> = v.iter().map(|x| -x).collect();
                let (pos, neg, mask) = split_parts(&nv);
                Some(Elem { v: nv, pos, neg, pos_mask: mask })
            }
            Ordering::Equal => unreachable!("distinct monomials always compare strictly"),
        }
    }

    /// Does our positive part divide the given monomial?
    fn divides(&self, mono: &[BigInt], mono_mask: Mask) -> bool {
        if self.pos_mask & !mono_mask != 0 {
            return false;
        }
        for i in 0..mono.len() {
            if self.pos_mask & (1 << i) != 0 && self.pos[i] > mono[i] {
                return false;
            }
        }
        true
    }
}

/// Fully reduce a vector: head reduction to a fixpoint, then one tail pass.
fn reduce(mut v: Vec<BigInt>, set: &[Elem], order: &EngineOrder) -> Option<Elem> {
    let mut e = Elem::oriented(v, order)?;
    'head: loop {
        for g in set {
            if g.divides(&e.pos, e.pos_mask) {
                v = e.v.iter().zip(&g.v).map(|(a, b)| a - b).collect();
                match Elem::oriented(v, order) {
                    Some(ne) => {
                        e = ne;
                        continue 'head;
                    }
                    None => return None,
                }
            }
        }
        break;
    }
    // tail reduction keeps the leading side fixed and shrinks the trailing
    // monomial; one pass to a fixpoint
    'tail: loop {
        let (_, neg, neg_mask) = {
            let m = split_parts(&e.v.iter().map(|x| -x).collect::<Vec<_>>());
            (m.1, m.0, m.2)
        };
        for g in set {
            if g.divides(&neg, neg_mask) {
                let v: Vec<BigInt> = e.v.iter().zip(&g.v).map(|(a, b)| a + b).collect();
                let (pos, neg2, mask) = split_parts(&v);
                debug_assert_eq!(order.cmp_monomial(&pos, &neg2), Ordering::Greater);
                e = Elem { v, pos, neg: neg2, pos_mask: mask };
                continue 'tail;
            }
        }
        break;
    }
    Some(e)
}

/// Critical-pair completion with in-place inter-reduction, iterated until
/// both are stable.  The result is a Groebner basis (for the given order) of
/// the binomial ideal it generates.
fn complete(input: Vec<Vec<BigInt>>, order: &EngineOrder) -> Vec<Vec<BigInt>> {
    let mut set: Vec<Elem> = Vec::new();
    for v in input {
        if let Some(e) = Elem::oriented(v, order) {
            if !set.iter().any(|x| x.v == e.v) {
                set.push(e);
            }
        }
    }
    for round in 0.. {
        assert!(round < 64, "completion failed to stabilize");
        // exhaust critical pairs
        let mut queue: BTreeSet<(BigInt, Vec<BigInt>, usize, usize)> = BTreeSet::new();
        let mut push_pairs =
            |queue: &mut BTreeSet<(BigInt, Vec<BigInt>, usize, usize)>, set: &[Elem], k: usize| {
                for i in 0..k {
                    if set[i].pos_mask & set[k].pos_mask == 0 {
                        continue; // disjoint leading supports reduce to zero
                    }
                    let lcm: Vec<BigInt> = set[i]
                        .pos
                        .iter()
                        .zip(&set[k].pos)
                        .map(|(a, b)| a.max(b).clone())
                        .collect();
                    let deg: BigInt = lcm.iter().sum();
                    queue.insert((deg, lcm, i, k));
                }
            };
        for k in 0..set.len() {
            push_pairs(&mut queue, &set, k);
        }
        while let Some((_, _, i, j)) = queue.pop_first() {
            let s: Vec<BigInt> = set[i].v.iter().zip(&set[j].v).map(|(a, b)| a - b).collect();
            if let Some(e) = reduce(s, &set, order) {
                set.push(e);
                push_pairs(&mut queue, &set, set.len() - 1);
            }
        }
        // inter-reduce; if nothing changes the set is final
        let mut changed = false;
        let mut idx = 0;
        while idx < set.len() {
            let e = set.remove(idx);
            match reduce(e.v.clone(), &set, order) {
                None => changed = true,
                Some(r) => {
                    if r.v != e.v {
                        changed = true;
                    }
                    set.insert(idx, r);
                    idx += 1;
                }
            }
        }
        if !changed {
            break;
        }
    }
    set.into_iter().map(|e| e.v).collect()
}

/// Saturation chain plus an optional final round under the user preorder.
/// Returns moves in the lattice's own ambient space, canonical sign.
fn lattice_completion(lattice: &Lattice, user: Option<&Preorder>) -> Vec<Move> {
    if lattice.rank() == 0 {
        return Vec::new();
    }
    let n = lattice.ambient_dim();
    let graded = lattice.is_degree_graded();
    let dim = if graded { n } else { n + 1 };
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..lattice.rank() {
        let mut col = lattice.basis().col(j);
        if !graded {
            let s: BigInt = col.iter().sum();
            col.push(-s);
        }
        gens.push(col);
    }
    // descending, so the chain ends on the round with the first coordinate
    // cheapest; that round fixes the shape of the reduced output
    let mut set = gens;
    for i in (0..dim).rev() {
        set = complete(set, &EngineOrder::grevlex_last(dim, i));
    }
    if let Some(p) = user {
        if !p.is_trivial() {
            let mut weights: Vec<Vec<BigRational>> = Vec::new();
            for w in p.weights() {
                let mut row = w.clone();
                if !graded {
                    row.push(BigRational::zero());
                }
                weights.push(row);
            }
            set = complete(set, &EngineOrder::with_weights(dim, weights));
        }
    }
    let moves = set.into_iter().map(|mut v| {
        if !graded {
            v.pop();
        }
        Move::new(v)
    });
    canonical_move_set(moves)
}

/// Markov basis of a lattice: a set of moves connecting every fiber
/// (u + lattice) intersected with the nonnegative orthant.
pub fn markov_basis(lattice: &Lattice) -> BasisResult {
    let moves = lattice_completion(lattice, None);
    BasisResult { moves, kind: BasisKind::Markov, lattice: lattice.clone() }
}

/// Preorder-directed Groebner basis of a lattice.  With the trivial
/// preorder this is exactly a Markov basis; otherwise the completion is run
/// under an internal term-order refinement of the preorder, which yields a
/// valid (possibly non-minimal) Groebner basis for the preorder itself.
pub fn groebner_basis(lattice: &Lattice, preorder: &Preorder) -> BasisResult {
    if preorder.is_trivial() {
        let mut r = markov_basis(lattice);
        r.kind = BasisKind::Groebner(preorder.clone());
        return r;
    }
    let moves = lattice_completion(lattice, Some(preorder));
    BasisResult { moves, kind: BasisKind::Groebner(preorder.clone()), lattice: lattice.clone() }
}

/// Graver basis: all primitive vectors of the lattice, computed as the
/// minimal Markov basis of the Lawrence-type doubling {(u, -u)}.
pub fn graver_basis(lattice: &Lattice) -> Result<BasisResult> {
    if lattice.rank() == 0 {
        return Ok(BasisResult {
            moves: Vec::new(),
            kind: BasisKind::Graver,
            lattice: lattice.clone(),
        });
    }
    let n = lattice.ambient_dim();
    let mut gens = Vec::new();
    for j in 0..lattice.rank() {
        let col = lattice.basis().col(j);
        let mut doubled = col.clone();
        doubled.extend(col.iter().map(|x| -x));
        gens.push(doubled);
    }
    let lawrence = Lattice::from_generators(2 * n, &gens);
    let markov = markov_basis(&lawrence);
    let family = FiberFamily::Lattice(lawrence.clone());
    let minimal = minimize_unchecked(&family, markov.moves, usize::MAX)?;
    let mut moves = Vec::new();
    for m in minimal {
        let e = m.entries();
        let (u, w) = e.split_at(n);
        debug_assert!(u.iter().zip(w).all(|(a, b)| *a == -b));
        moves.push(Move::new(u.to_vec()));
    }
    Ok(BasisResult {
        moves: canonical_move_set(moves),
        kind: BasisKind::Graver,
        lattice: lattice.clone(),
    })
}

/// Drop moves that are conformal sums of two other moves of the set; the
/// remainder is still a Groebner basis for the same preorder.
pub fn remove_conformal_redundant(result: &BasisResult) -> BasisResult {
    let mut moves = canonical_move_set(result.moves.clone());
    'scan: loop {
        for (idx, v) in moves.iter().enumerate() {
            let others: Vec<&Move> = moves
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != idx)
                .map(|(_, m)| m)
                .collect();
            for o in &others {
                for v1 in [(*o).clone(), o.neg()] {
                    // v1 a conformal piece of v, remainder also in the set
                    let piece = v1
                        .entries()
                        .iter()
                        .zip(v.entries())
                        .all(|(a, b)| (a * b) >= BigInt::zero() && a.abs() <= b.abs());
                    if !piece || v1.is_zero() {
                        continue;
                    }
                    let v2 = v.sub(&v1);
                    if v2.is_zero() {
                        continue;
                    }
                    let v2c = v2.canonical_sign();
                    if others.iter().any(|m| **m == v2c) {
                        moves.remove(idx);
                        continue 'scan;
                    }
                }
            }
        }
        break;
    }
    BasisResult { moves, kind: result.kind.clone(), lattice: result.lattice.clone() }
}

/// Greedy single-move removal.  A move may go when its own fiber still
/// connects its positive and negative parts through the remaining set; for
/// a genuine Markov basis this is exactly removability.
fn minimize_unchecked(
    family: &FiberFamily,
    moves: Vec<Move>,
    guard: usize,
) -> Result<Vec<Move>> {
    let mut current = canonical_move_set(moves);
    // attempt big moves first, lexicographic among equals
    let mut order: Vec<Move> = current.clone();
    order.sort_by(|a, b| b.degree().cmp(&a.degree()).then(a.cmp(b)));
    for m in order {
        let Some(idx) = current.iter().position(|x| *x == m) else { continue };
        let others: Vec<Move> = current
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .map(|(_, x)| x.clone())
            .collect();
        let (pos, neg) = m.pos_neg_parts();
        let fiber = enumerate_fiber(&family.fiber_of(pos.entries()), guard)?;
        if connects_within_fiber(&fiber, &others, pos.entries(), neg.entries()) {
            current.remove(idx);
        }
    }
    Ok(current)
}

/// Minimize a Markov basis against a fiber family: the input must pass the
/// connectivity oracle up to the bound, and afterwards no single move can be
/// removed without breaking it.
pub fn minimize_markov(
    family: &FiberFamily,
    result: &BasisResult,
    cfg: &SweepConfig,
) -> Result<BasisResult> {
    let report = markov_oracle(family, &result.moves, cfg)?;
    if !report.pass {
        return Err(Error::OracleFailure(format!(
            "input basis fails connectivity on {} fibers (first: {:?})",
            report.failures.len(),
            report.failures[0].rhs
        )));
    }
    let moves = minimize_unchecked(family, result.moves.clone(), cfg.guard)?;
    Ok(BasisResult { moves, kind: result.kind.clone(), lattice: result.lattice.clone() })
}

/// Minimal Markov basis of the lattice, validated fiber-wise as it shrinks.
pub fn minimal_markov_basis(lattice: &Lattice) -> Result<BasisResult> {
    let base = markov_basis(lattice);
    let family = FiberFamily::Lattice(lattice.clone());
    let moves = minimize_unchecked(&family, base.moves, usize::MAX)?;
    Ok(BasisResult { moves, kind: BasisKind::Markov, lattice: lattice.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latalg::kernel_lattice;
    use crate::matrix::{vec_from_i64, IMat};
    use crate::verify::basis_oracle;

    #[test]
    fn markov_of_rank_one_diagonal() {
        let l = Lattice::from_generators(2, &[vec_from_i64(&[1, -1])]);
        let r = markov_basis(&l);
        assert_eq!(r.moves, vec![Move::from_i64(&[1, -1])]);
        r.validate().unwrap();
    }

    #[test]
    fn markov_of_zero_lattice_empty() {
        assert!(markov_basis(&Lattice::zero(3)).moves.is_empty());
    }

    #[test]
    fn markov_of_full_line_lattice() {
        // non-graded: fibers are whole integer rays, connected by (1)
        let l = Lattice::full(1);
        let r = markov_basis(&l);
        assert_eq!(r.moves, vec![Move::from_i64(&[1])]);
    }

    #[test]
    fn markov_of_kernel_matches_known_basis() {
        let b = IMat::from_rows(&[vec![1, 1, 1, 1], vec![0, 0, 1, 2]]);
        let l = kernel_lattice(&b);
        let r = minimal_markov_basis(&l).unwrap();
        assert_eq!(
            r.moves,
            vec![Move::from_i64(&[1, -1, 0, 0]), Move::from_i64(&[1, 0, -2, 1])]
        );
        let family = FiberFamily::Matrix(b);
        let report = markov_oracle(&family, &r.moves, &SweepConfig::with_bound(6)).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn markov_of_column_span_lattice() {
        // lattice spanned by the columns of the 4x2 inequality matrix
        let d = IMat::from_rows(&[vec![1, 0], vec![-1, -1], vec![1, 1], vec![-2, -1]]);
        let l = Lattice::from_matrix_columns(&d, 4);
        let r = minimal_markov_basis(&l).unwrap();
        assert_eq!(
            r.moves,
            vec![Move::from_i64(&[1, 0, 0, -1]), Move::from_i64(&[1, 1, -1, 0])]
        );
    }

    #[test]
    fn groebner_trivial_equals_markov() {
        let b = IMat::from_rows(&[vec![1, 1, 1, 1], vec![0, 0, 1, 2]]);
        let l = kernel_lattice(&b);
        let g = groebner_basis(&l, &Preorder::trivial());
        assert_eq!(g.moves, markov_basis(&l).moves);
    }

    #[test]
    fn groebner_directs_line_to_minimum() {
        let l = Lattice::from_generators(2, &[vec_from_i64(&[1, -1])]);
        let p = Preorder::from_integer_weights(&[vec![1, 0]]);
        let g = groebner_basis(&l, &p);
        assert_eq!(g.moves, vec![Move::from_i64(&[1, -1])]);
        let family = FiberFamily::Lattice(l);
        let report = basis_oracle(&family, &g.moves, &p, &SweepConfig::with_bound(6)).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn graver_of_diagonal() {
        let l = Lattice::from_generators(2, &[vec_from_i64(&[1, 1])]);
        let g = graver_basis(&l).unwrap();
        assert_eq!(g.moves, vec![Move::from_i64(&[1, 1])]);
    }

    #[test]
    fn graver_matches_oracle_on_small_kernel() {
        let b = IMat::from_rows(&[vec![1, 2, 3]]);
        let l = kernel_lattice(&b);
        let g = graver_basis(&l).unwrap();
        let report = crate::verify::graver_oracle(&l, &g.moves, 6, 1_000_000).unwrap();
        assert!(report.pass, "failures: {:?}", report.failures);
    }

    #[test]
    fn conformal_redundant_sum_removed() {
        let a = Move::from_i64(&[1, 0, -1, 0]);
        let b = Move::from_i64(&[0, 1, 0, -1]);
        let c = a.add(&b);
        let l = Lattice::from_generators(4, &[a.entries().to_vec(), b.entries().to_vec()]);
        let r = BasisResult {
            moves: vec![a.clone(), b.clone(), c],
            kind: BasisKind::Markov,
            lattice: l,
        };
        let pruned = remove_conformal_redundant(&r);
        assert_eq!(pruned.moves, canonical_move_set(vec![a, b]));
        let again = remove_conformal_redundant(&pruned);
        assert_eq!(again.moves, pruned.moves);
    }

    #[test]
    fn minimize_validates_input() {
        let b = IMat::from_rows(&[vec![1, 1, 1, 1], vec![0, 0, 1, 2]]);
        let l = kernel_lattice(&b);
        let family = FiberFamily::Matrix(b);
        let bogus = BasisResult {
            moves: vec![Move::from_i64(&[1, -1, 0, 0])],
            kind: BasisKind::Markov,
            lattice: l,
        };
        assert!(minimize_markov(&family, &bogus, &SweepConfig::with_bound(4)).is_err());
    }
}
