//! Brute-force oracles: exhaustive fiber enumeration, fiber-graph
//! connectivity and sink analysis, lift contracts, Graver primitivity, and
//! semigroup holes.
//!
//! Oracles are falsifiers, not proofs: every check is exhaustive up to a
//! degree bound and exact within it.

use crate::cone::{facet_description, polytope_shape, rational_solve_any};
use crate::error::{Error, Result};
use crate::intvec::{Move, Preorder};
use crate::latalg::{kernel_lattice, solve_columns, Lattice};
use crate::matrix::{vec_dot, vec_is_zero, IMat};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Right-hand sides with degree (1-norm of a witness point) up to this
    /// bound are checked.
    pub degree_bound: u32,
    /// Hard cap on enumerated points per fiber sweep.
    pub guard: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { degree_bound: 6, guard: 1_000_000 }
    }
}

impl SweepConfig {
    pub fn with_bound(degree_bound: u32) -> Self {
        SweepConfig { degree_bound, ..Default::default() }
    }
}

/// One fiber: a set of nonnegative integer points cut out by a matrix, a
/// lattice coset, or an inequality system on a lattice coset.
#[derive(Debug, Clone)]
pub enum FiberSpec {
    /// {v in N^n : mat v = rhs}
    Matrix { mat: IMat, rhs: Vec<BigInt> },
    /// {v in N^n : v - shift in lattice}
    LatticeCoset { lattice: Lattice, shift: Vec<BigInt> },
    /// {u in lattice + shift : d u >= c}
    Inequality { lattice: Lattice, shift: Vec<BigInt>, d: IMat, c: Vec<BigInt> },
}

/// A family of fibers swept by the oracles.
#[derive(Debug, Clone)]
pub enum FiberFamily {
    Matrix(IMat),
    Lattice(Lattice),
}

impl FiberFamily {
    pub fn ambient_dim(&self) -> usize {
        match self {
            FiberFamily::Matrix(m) => m.ncols(),
            FiberFamily::Lattice(l) => l.ambient_dim(),
        }
    }

    /// The lattice whose cosets the fibers live on.
    pub fn move_lattice(&self) -> Lattice {
        match self {
            FiberFamily::Matrix(m) => kernel_lattice(m),
            FiberFamily::Lattice(l) => l.clone(),
        }
    }

    pub fn fiber_of(&self, point: &[BigInt]) -> FiberSpec {
        match self {
            FiberFamily::Matrix(m) => {
                FiberSpec::Matrix { mat: m.clone(), rhs: m.mul_vec(point) }
            }
            FiberFamily::Lattice(l) => {
                FiberSpec::LatticeCoset { lattice: l.clone(), shift: point.to_vec() }
            }
        }
    }
}

/// Exhaustively enumerate a fiber.  Errors on unbounded fibers and when the
/// cardinality guard trips.
pub fn enumerate_fiber(spec: &FiberSpec, guard: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut points = match spec {
        FiberSpec::Matrix { mat, rhs } => {
            let nonneg = (0..mat.nrows())
                .all(|i| (0..mat.ncols()).all(|j| !mat.get(i, j).is_negative()));
            if nonneg && rhs.iter().all(|x| !x.is_negative()) {
                enumerate_nonneg_budget(mat, rhs, guard)?
            } else {
                let Some(v0) = solve_columns(mat, rhs) else { return Ok(Vec::new()) };
                let kernel = kernel_lattice(mat);
                enumerate_coset_nonneg(&kernel, &v0, guard)?
            }
        }
        FiberSpec::LatticeCoset { lattice, shift } => {
            enumerate_coset_nonneg(lattice, shift, guard)?
        }
        FiberSpec::Inequality { lattice, shift, d, c } => {
            if lattice.rank() == 0 {
                let du = d.mul_vec(shift);
                if du.iter().zip(c).all(|(x, y)| x >= y) {
                    vec![shift.clone()]
                } else {
                    Vec::new()
                }
            } else {
                let a = d.mul(lattice.basis());
                let dshift = d.mul_vec(shift);
                let b: Vec<BigInt> = c.iter().zip(&dshift).map(|(ci, s)| ci - s).collect();
                let ys = enumerate_integer_polytope(&a, &b, guard)?;
                ys.into_iter()
                    .map(|y| {
                        let ly = lattice.basis().mul_vec(&y);
                        ly.iter().zip(shift).map(|(a, b)| a + b).collect()
                    })
                    .collect()
            }
        }
    };
    points.sort();
    points.dedup();
    Ok(points)
}

/// {v >= 0 : v in shift + lattice}, via the bounded polytope in coefficient
/// space.
fn enumerate_coset_nonneg(
    lattice: &Lattice,
    shift: &[BigInt],
    guard: usize,
) -> Result<Vec<Vec<BigInt>>> {
    if lattice.rank() == 0 {
        return Ok(if shift.iter().all(|x| !x.is_negative()) {
            vec![shift.to_vec()]
        } else {
            Vec::new()
        });
    }
    let a = lattice.basis().clone();
    let b: Vec<BigInt> = shift.iter().map(|x| -x).collect();
    let ys = enumerate_integer_polytope(&a, &b, guard)?;
    Ok(ys
        .into_iter()
        .map(|y| {
            let ly = lattice.basis().mul_vec(&y);
            ly.iter().zip(shift).map(|(a, b)| a + b).collect()
        })
        .collect())
}

/// Budget DFS for {v >= 0 : mat v = rhs} with mat entrywise nonnegative.
fn enumerate_nonneg_budget(mat: &IMat, rhs: &[BigInt], guard: usize) -> Result<Vec<Vec<BigInt>>> {
    let n = mat.ncols();
    let h = mat.nrows();
    // all-zero columns make any nonempty fiber infinite
    let zero_cols: Vec<usize> =
        (0..n).filter(|&j| (0..h).all(|i| mat.get(i, j).is_zero())).collect();
    if !zero_cols.is_empty() {
        let keep: Vec<usize> = (0..n).filter(|j| !zero_cols.contains(j)).collect();
        let sub = IMat::from_columns(&keep.iter().map(|&j| mat.col(j)).collect::<Vec<_>>());
        let sub_points = enumerate_nonneg_budget(&sub, rhs, guard)?;
        if sub_points.is_empty() {
            return Ok(Vec::new());
        }
        return Err(Error::UnboundedFiber);
    }
    let mut residual = rhs.to_vec();
    let mut current = vec![BigInt::zero(); n];
    let mut out = Vec::new();
    // columns of the suffix that can still feed each row
    let mut suffix_support = vec![vec![false; h]; n + 1];
    for j in (0..n).rev() {
        for i in 0..h {
            suffix_support[j][i] =
                suffix_support[j + 1][i] || !mat.get(i, j).is_zero();
        }
    }
    fn dfs(
        mat: &IMat,
        suffix_support: &[Vec<bool>],
        residual: &mut Vec<BigInt>,
        current: &mut Vec<BigInt>,
        level: usize,
        out: &mut Vec<Vec<BigInt>>,
        guard: usize,
    ) -> Result<()> {
        let h = mat.nrows();
        let n = mat.ncols();
        if level == n {
            if residual.iter().all(|x| x.is_zero()) {
                if out.len() >= guard {
                    return Err(Error::CardinalityGuard { guard });
                }
                out.push(current.clone());
            }
            return Ok(());
        }
        for i in 0..h {
            if residual[i].is_positive() && !suffix_support[level][i] {
                return Ok(());
            }
        }
        let mut ub: Option<BigInt> = None;
        for i in 0..h {
            let a = mat.get(i, level);
            if a.is_positive() {
                let q = &residual[i] / a;
                ub = Some(match ub {
                    None => q,
                    Some(u) => u.min(q),
                });
            }
        }
        let ub = ub.expect("no all-zero columns here");
        let mut k = BigInt::zero();
        while k <= ub {
            if !k.is_zero() {
                for i in 0..h {
                    let v = &residual[i] - mat.get(i, level);
                    residual[i] = v;
                }
            }
            current[level] = k.clone();
            dfs(mat, suffix_support, residual, current, level + 1, out, guard)?;
            k += 1;
        }
        // undo: we subtracted column `level` exactly ub times
        for i in 0..h {
            let v = &residual[i] + mat.get(i, level) * &ub;
            residual[i] = v;
        }
        current[level] = BigInt::zero();
        Ok(())
    }
    dfs(mat, &suffix_support, &mut residual, &mut current, 0, &mut out, guard)?;
    Ok(out)
}

/// Integer points of {y : a y >= b}, exact: vertex box plus interval-pruned
/// DFS.  Errors on unbounded polytopes.
pub fn enumerate_integer_polytope(
    a: &IMat,
    b: &[BigInt],
    guard: usize,
) -> Result<Vec<Vec<BigInt>>> {
    let k = a.ncols();
    let shape = polytope_shape(a, b);
    if shape.is_empty() {
        return Ok(Vec::new());
    }
    if shape.is_unbounded() {
        return Err(Error::UnboundedFiber);
    }
    let (lo, hi) = shape.integer_box().expect("nonempty shape has a box");
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(Vec::new());
    }
    // max residual contribution of levels > l, per row
    let rows = a.nrows();
    let mut maxrest = vec![vec![BigInt::zero(); rows]; k + 1];
    for l in (0..k).rev() {
        for r in 0..rows {
            let coef = a.get(r, l);
            let best = if coef.is_negative() { coef * &lo[l] } else { coef * &hi[l] };
            maxrest[l][r] = &maxrest[l + 1][r] + best;
        }
    }
    let mut out = Vec::new();
    let mut acc = vec![BigInt::zero(); rows];
    let mut current = vec![BigInt::zero(); k];
    fn dfs(
        a: &IMat,
        b: &[BigInt],
        lo: &[BigInt],
        hi: &[BigInt],
        maxrest: &[Vec<BigInt>],
        acc: &mut Vec<BigInt>,
        current: &mut Vec<BigInt>,
        level: usize,
        out: &mut Vec<Vec<BigInt>>,
        guard: usize,
    ) -> Result<()> {
        let rows = a.nrows();
        for r in 0..rows {
            if &acc[r] + &maxrest[level][r] < b[r] {
                return Ok(());
            }
        }
        if level == a.ncols() {
            if out.len() >= guard {
                return Err(Error::CardinalityGuard { guard });
            }
            out.push(current.clone());
            return Ok(());
        }
        let mut y = lo[level].clone();
        while y <= hi[level] {
            for r in 0..rows {
                let v = &acc[r] + a.get(r, level) * &y;
                acc[r] = v;
            }
            current[level] = y.clone();
            dfs(a, b, lo, hi, maxrest, acc, current, level + 1, out, guard)?;
            for r in 0..rows {
                let v = &acc[r] - a.get(r, level) * &y;
                acc[r] = v;
            }
            y += 1;
        }
        current[level] = BigInt::zero();
        Ok(())
    }
    dfs(a, b, &lo, &hi, &maxrest, &mut acc, &mut current, 0, &mut out, guard)?;
    Ok(out)
}

/// Directed fiber graph: edge u -> v iff v - u in +-M and u >= v.
pub struct FiberGraph {
    pub points: Vec<Vec<BigInt>>,
    /// adjacency by index, directed
    pub succ: Vec<Vec<usize>>,
}

impl FiberGraph {
    pub fn build(points: Vec<Vec<BigInt>>, moves: &[Move], preorder: &Preorder) -> FiberGraph {
        let index: HashMap<&[BigInt], usize> =
            points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut succ = vec![Vec::new(); points.len()];
        let mut signed: Vec<Vec<BigInt>> = Vec::new();
        for m in moves {
            signed.push(m.entries().to_vec());
            signed.push(m.neg().into_entries());
        }
        signed.sort();
        signed.dedup();
        for (i, p) in points.iter().enumerate() {
            for m in &signed {
                let q: Vec<BigInt> = p.iter().zip(m).map(|(a, b)| a + b).collect();
                if let Some(&j) = index.get(q.as_slice()) {
                    if i != j && preorder.geq(p, &q) {
                        succ[i].push(j);
                    }
                }
            }
        }
        FiberGraph { points, succ }
    }

    pub fn is_weakly_connected(&self) -> bool {
        let n = self.points.len();
        if n <= 1 {
            return true;
        }
        let mut undirected = vec![Vec::new(); n];
        for (i, out) in self.succ.iter().enumerate() {
            for &j in out {
                undirected[i].push(j);
                undirected[j].push(i);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &j in &undirected[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == n
    }

    /// Strongly connected components, as a component id per vertex.
    pub fn scc_ids(&self) -> Vec<usize> {
        // iterative Tarjan
        let n = self.points.len();
        let mut ids = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut disc = vec![usize::MAX; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut next_disc = 0usize;
        let mut next_id = 0usize;
        #[allow(clippy::type_complexity)]
        let mut call: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            call.push((root, 0));
            while let Some(&mut (v, ref mut ei)) = call.last_mut() {
                if *ei == 0 {
                    disc[v] = next_disc;
                    low[v] = next_disc;
                    next_disc += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if *ei < self.succ[v].len() {
                    let w = self.succ[v][*ei];
                    *ei += 1;
                    if disc[w] == usize::MAX {
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    if low[v] == disc[v] {
                        while let Some(w) = stack.pop() {
                            on_stack[w] = false;
                            ids[w] = next_id;
                            if w == v {
                                break;
                            }
                        }
                        next_id += 1;
                    }
                    call.pop();
                    if let Some(&mut (u, _)) = call.last_mut() {
                        low[u] = low[u].min(low[v]);
                    }
                }
            }
        }
        ids
    }

    /// (number of sink classes in the condensation, every sink vertex is a
    /// preorder minimum of the fiber).
    pub fn sink_classes(&self, preorder: &Preorder) -> (usize, bool) {
        let n = self.points.len();
        if n == 0 {
            return (0, true);
        }
        let ids = self.scc_ids();
        let classes = ids.iter().max().unwrap() + 1;
        let mut has_out = vec![false; classes];
        for (i, out) in self.succ.iter().enumerate() {
            for &j in out {
                if ids[i] != ids[j] {
                    has_out[ids[i]] = true;
                }
            }
        }
        let sink_count = has_out.iter().filter(|x| !**x).count();
        // a global minimum by tournament, then the minima class
        let mut cand = 0usize;
        for i in 1..n {
            if !preorder.geq(&self.points[i], &self.points[cand]) {
                cand = i;
            }
        }
        let minima: Vec<bool> = (0..n)
            .map(|i| preorder.geq(&self.points[cand], &self.points[i]))
            .collect();
        let sinks_minimal = (0..n).all(|i| has_out[ids[i]] || minima[i]);
        (sink_count, sinks_minimal)
    }
}

pub fn is_connected(g: &FiberGraph) -> bool {
    g.is_weakly_connected()
}

/// Per-fiber Groebner-basis conditions: weak connectivity, at most one sink
/// class, sinks are minima.  Returns a failure description, if any.
pub fn fiber_verdict(
    points: Vec<Vec<BigInt>>,
    moves: &[Move],
    preorder: &Preorder,
) -> Option<String> {
    if points.len() <= 1 {
        return None;
    }
    let g = FiberGraph::build(points, moves, preorder);
    if !g.is_weakly_connected() {
        return Some("fiber graph is not connected".into());
    }
    if preorder.is_trivial() {
        return None;
    }
    let (sinks, minimal) = g.sink_classes(preorder);
    if sinks > 1 {
        return Some(format!("fiber graph has {sinks} sink classes"));
    }
    if !minimal {
        return Some("a sink is not a preorder minimum".into());
    }
    None
}

#[derive(Debug, Clone)]
pub struct FailureWitness {
    pub rhs: Vec<BigInt>,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub pass: bool,
    pub fibers_checked: usize,
    pub failures: Vec<FailureWitness>,
}

fn one_in_rowspace(m: &IMat) -> bool {
    let ones = vec![BigInt::from(1); m.ncols()];
    rational_solve_any(&m.transpose(), &ones).is_some()
}

/// Enumerate every fiber of the family whose right-hand side has a witness
/// point of 1-norm <= bound; returns complete fibers.
pub fn sweep_fibers(
    family: &FiberFamily,
    cfg: &SweepConfig,
) -> Result<Vec<(Vec<BigInt>, Vec<Vec<BigInt>>)>> {
    let n = family.ambient_dim();
    let bound = cfg.degree_bound as i64;
    // fast path: fibers have constant 1-norm, so the norm-bounded sweep
    // already produces complete fibers
    let graded = match family {
        FiberFamily::Matrix(m) => one_in_rowspace(m),
        FiberFamily::Lattice(l) => l.is_degree_graded(),
    };
    let mut groups: HashMap<Vec<BigInt>, Vec<Vec<BigInt>>> = HashMap::new();
    let mut total = 0usize;
    let mut current = vec![0i64; n];
    // DFS over v in N^n with |v|_1 <= bound
    fn rec(
        family: &FiberFamily,
        current: &mut Vec<i64>,
        level: usize,
        left: i64,
        groups: &mut HashMap<Vec<BigInt>, Vec<Vec<BigInt>>>,
        total: &mut usize,
        guard: usize,
        graded: bool,
    ) -> Result<()> {
        if level == current.len() {
            if *total >= guard {
                return Err(Error::CardinalityGuard { guard });
            }
            *total += 1;
            let point: Vec<BigInt> = current.iter().map(|&x| BigInt::from(x)).collect();
            let key = match family {
                FiberFamily::Matrix(m) => m.mul_vec(&point),
                FiberFamily::Lattice(l) => coset_representative(l, &point),
            };
            if graded {
                groups.entry(key).or_default().push(point);
            } else {
                groups.entry(key).or_default();
            }
            return Ok(());
        }
        for k in 0..=left {
            current[level] = k;
            rec(family, current, level + 1, left - k, groups, total, guard, graded)?;
        }
        current[level] = 0;
        Ok(())
    }
    rec(family, &mut current, 0, bound, &mut groups, &mut total, cfg.guard, graded)?;
    let mut out: Vec<(Vec<BigInt>, Vec<Vec<BigInt>>)> = if graded {
        groups
            .into_iter()
            .map(|(k, mut pts)| {
                pts.sort();
                pts.dedup();
                (k, pts)
            })
            .collect()
    } else {
        // complete each fiber exactly
        let keys: Vec<Vec<BigInt>> = groups.into_keys().collect();
        let fibers: Result<Vec<_>> = keys
            .par_iter()
            .map(|k| {
                let spec = match family {
                    FiberFamily::Matrix(m) => {
                        FiberSpec::Matrix { mat: m.clone(), rhs: k.clone() }
                    }
                    FiberFamily::Lattice(l) => {
                        FiberSpec::LatticeCoset { lattice: l.clone(), shift: k.clone() }
                    }
                };
                enumerate_fiber(&spec, cfg.guard).map(|pts| (k.clone(), pts))
            })
            .collect();
        fibers?
    };
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Canonical representative of point + lattice, by pivot-row reduction of
/// the column HNF basis.
pub fn coset_representative(lattice: &Lattice, point: &[BigInt]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut v = point.to_vec();
    let basis = lattice.basis();
    // basis is column HNF: pivot rows ascending per column
    let mut pivot_rows = Vec::new();
    for j in 0..basis.ncols() {
        let r = (0..basis.nrows())
            .find(|&i| !basis.get(i, j).is_zero())
            .expect("basis columns nonzero");
        pivot_rows.push((r, j));
    }
    for &(r, j) in &pivot_rows {
        let q = v[r].div_floor(basis.get(r, j));
        if !q.is_zero() {
            for i in 0..basis.nrows() {
                let x = &v[i] - &q * basis.get(i, j);
                v[i] = x;
            }
        }
    }
    v
}

/// Markov / Groebner oracle over a fiber family: with the trivial preorder
/// this checks connectivity, otherwise the full three-condition verdict.
pub fn basis_oracle(
    family: &FiberFamily,
    moves: &[Move],
    preorder: &Preorder,
    cfg: &SweepConfig,
) -> Result<OracleReport> {
    let fibers = sweep_fibers(family, cfg)?;
    let fibers_checked = fibers.len();
    let mut failures: Vec<FailureWitness> = fibers
        .into_par_iter()
        .filter_map(|(rhs, points)| {
            fiber_verdict(points, moves, preorder).map(|reason| FailureWitness { rhs, reason })
        })
        .collect();
    failures.sort_by(|a, b| a.rhs.cmp(&b.rhs));
    Ok(OracleReport { pass: failures.is_empty(), fibers_checked, failures })
}

pub fn markov_oracle(family: &FiberFamily, moves: &[Move], cfg: &SweepConfig) -> Result<OracleReport> {
    basis_oracle(family, moves, &Preorder::trivial(), cfg)
}

/// Can `target` be reached from `start` inside the given fiber using moves
/// from +-set?
pub fn connects_within_fiber(
    fiber: &[Vec<BigInt>],
    set: &[Move],
    start: &[BigInt],
    target: &[BigInt],
) -> bool {
    if start == target {
        return true;
    }
    let index: HashMap<&[BigInt], usize> =
        fiber.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let (Some(&s), Some(&t)) = (index.get(start), index.get(target)) else {
        return false;
    };
    let mut signed: Vec<Vec<BigInt>> = Vec::new();
    for m in set {
        signed.push(m.entries().to_vec());
        signed.push(m.neg().into_entries());
    }
    let mut seen = vec![false; fiber.len()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(i) = stack.pop() {
        if i == t {
            return true;
        }
        for m in &signed {
            let q: Vec<BigInt> = fiber[i].iter().zip(m).map(|(a, b)| a + b).collect();
            if let Some(&j) = index.get(q.as_slice()) {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    false
}

/// The lift contract: for every fiber up to the bound and every in-fiber
/// pair v >= v' with phi(v - v') = g, some kernel hop followed by one lift
/// move realizes the g-step non-increasingly.
#[allow(clippy::too_many_arguments)]
pub fn lift_oracle(
    family: &FiberFamily,
    phi: &IMat,
    lift_set: &[Move],
    g_set: &[Move],
    preorder: &Preorder,
    cfg: &SweepConfig,
) -> Result<OracleReport> {
    let fibers = sweep_fibers(family, cfg)?;
    let fibers_checked = fibers.len();
    let g_images: HashSet<Vec<BigInt>> =
        g_set.iter().map(|g| g.entries().to_vec()).collect();
    let mut failures = Vec::new();
    for (rhs, points) in fibers {
        let images: Vec<Vec<BigInt>> = points.iter().map(|p| phi.mul_vec(p)).collect();
        for (vi, v) in points.iter().enumerate() {
            for (wi, v2) in points.iter().enumerate() {
                if vi == wi || !preorder.geq(v, v2) {
                    continue;
                }
                let diff: Vec<BigInt> =
                    images[vi].iter().zip(&images[wi]).map(|(a, b)| a - b).collect();
                if !g_images.contains(&diff) {
                    continue;
                }
                // witness: w in fiber with phi(w) = phi(v), v >= w, and a
                // lift move m with w + m in fiber, w >= w + m,
                // phi(w + m) = phi(v')
                let mut ok = false;
                'outer: for (ui, w) in points.iter().enumerate() {
                    if images[ui] != images[vi] || !preorder.geq(v, w) {
                        continue;
                    }
                    for m in lift_set {
                        let q: Vec<BigInt> =
                            w.iter().zip(m.entries()).map(|(a, b)| a + b).collect();
                        if q.iter().any(|x| x.is_negative()) {
                            continue;
                        }
                        if let Some(qi) = points.iter().position(|p| *p == q) {
                            if images[qi] == images[wi] && preorder.geq(w, &q) {
                                ok = true;
                                break 'outer;
                            }
                        }
                    }
                }
                if !ok {
                    failures.push(FailureWitness {
                        rhs: rhs.clone(),
                        reason: format!(
                            "pair {:?} -> {:?} admits no non-increasing kernel-hop + lift step",
                            v, v2
                        ),
                    });
                }
            }
        }
    }
    Ok(OracleReport { pass: failures.is_empty(), fibers_checked, failures })
}

/// All primitive vectors of the lattice with degree at most the bound, by
/// exhaustive conformal-decomposition search.
pub fn primitive_vectors(lattice: &Lattice, degree_bound: u32, guard: usize) -> Result<Vec<Move>> {
    if lattice.rank() == 0 {
        return Ok(Vec::new());
    }
    let n = lattice.ambient_dim();
    let bound = BigInt::from(degree_bound);
    // all lattice vectors with every entry in [-bound, bound]
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut b: Vec<BigInt> = Vec::new();
    let basis = lattice.basis();
    for i in 0..n {
        rows.push(basis.row(i));
        b.push(-&bound);
        rows.push(basis.row(i).iter().map(|x| -x).collect());
        b.push(-&bound);
    }
    let a = IMat::from_big_rows(rows);
    let ys = enumerate_integer_polytope(&a, &b, guard)?;
    let mut vectors: Vec<Vec<BigInt>> = ys
        .iter()
        .map(|y| basis.mul_vec(y))
        .filter(|v| !vec_is_zero(v) && Move::new(v.clone()).degree() <= bound)
        .collect();
    vectors.sort();
    vectors.dedup();
    let moves: Vec<Move> = vectors.iter().map(|v| Move::new(v.clone())).collect();
    let mut primitive = Vec::new();
    for v in &moves {
        let mut reducible = false;
        for u in &moves {
            if u == v || u.entries() == v.neg().entries() {
                continue;
            }
            // u conformal piece of v: sign-consistent and |u_i| <= |v_i|
            let piece = u.entries().iter().zip(v.entries()).all(|(a, b)| {
                (a * b) >= BigInt::zero() && a.abs() <= b.abs()
            });
            if piece {
                reducible = true;
                break;
            }
        }
        if !reducible {
            primitive.push(v.clone());
        }
    }
    Ok(primitive)
}

/// Verdict: does the candidate equal the primitive vectors of the lattice
/// up to the bound?
pub fn graver_oracle(
    lattice: &Lattice,
    candidate: &[Move],
    degree_bound: u32,
    guard: usize,
) -> Result<OracleReport> {
    let expected = crate::intvec::canonical_move_set(primitive_vectors(lattice, degree_bound, guard)?);
    let got: Vec<Move> = crate::intvec::canonical_move_set(
        candidate
            .iter()
            .filter(|m| m.degree() <= BigInt::from(degree_bound))
            .cloned(),
    );
    let mut failures = Vec::new();
    for m in &expected {
        if !got.contains(m) {
            failures.push(FailureWitness {
                rhs: m.entries().to_vec(),
                reason: "primitive vector missing from candidate".into(),
            });
        }
    }
    for m in &got {
        if !expected.contains(m) {
            failures.push(FailureWitness {
                rhs: m.entries().to_vec(),
                reason: "candidate vector is not primitive".into(),
            });
        }
    }
    Ok(OracleReport { pass: failures.is_empty(), fibers_checked: expected.len(), failures })
}

/// Holes of the affine semigroup generated by the columns of `v`: points of
/// (lattice span intersect cone) minus the semigroup, up to the stated
/// degree in the normalized grading.
pub fn holes(v: &IMat, degree_bound: u32, dim_gate: usize, guard: usize) -> Result<Vec<Vec<BigInt>>> {
    let d = v.nrows();
    let m = v.ncols();
    if m == 0 {
        return Ok(Vec::new());
    }
    // normalized grading: a rational row with value 1 on every column
    let ones = vec![BigInt::from(1); m];
    let lam = rational_solve_any(&v.transpose(), &ones).ok_or_else(|| {
        Error::GradingViolation("columns admit no common degree-1 grading functional".into())
    })?;
    let lam_int = crate::cone::clear_denominators(&lam);
    let kappa = vec_dot(&lam_int, &v.col(0));
    let fd = facet_description(v, dim_gate)?;
    let hnf = crate::latalg::column_hnf(v);
    let r = hnf.pivots.len();
    let w = IMat::from_columns(&(0..r).map(|j| hnf.h.col(j)).collect::<Vec<_>>());
    // facet and grading rows in coefficient space
    let fw = fd.facets.mul(&w);
    let lam_w: Vec<BigInt> = (0..r).map(|j| vec_dot(&lam_int, &w.col(j))).collect();
    // semigroup elements by degree
    let mut semigroup: HashSet<Vec<BigInt>> = HashSet::new();
    let mut layer: HashSet<Vec<BigInt>> = HashSet::new();
    layer.insert(vec![BigInt::zero(); d]);
    semigroup.insert(vec![BigInt::zero(); d]);
    for _ in 0..degree_bound {
        let mut next = HashSet::new();
        for x in &layer {
            for j in 0..m {
                let col = v.col(j);
                let y: Vec<BigInt> = x.iter().zip(&col).map(|(a, b)| a + b).collect();
                if semigroup.insert(y.clone()) {
                    next.insert(y.clone());
                } else {
                    next.insert(y);
                }
            }
        }
        layer = next;
        if semigroup.len() > guard {
            return Err(Error::CardinalityGuard { guard });
        }
    }
    // normalization points per degree, in coefficient space
    let mut holes = Vec::new();
    for deg in 1..=degree_bound {
        let target = BigInt::from(deg) * &kappa;
        let mut rows: Vec<Vec<BigInt>> = fw.rows_iter().map(|x| x.to_vec()).collect();
        let mut b: Vec<BigInt> = vec![BigInt::zero(); rows.len()];
        rows.push(lam_w.clone());
        b.push(target.clone());
        rows.push(lam_w.iter().map(|x| -x).collect());
        b.push(-&target);
        let a = IMat::from_big_rows(rows);
        let cs = enumerate_integer_polytope(&a, &b, guard)?;
        for c in cs {
            let x = w.mul_vec(&c);
            if !semigroup.contains(&x) {
                holes.push(x);
            }
        }
    }
    holes.sort();
    holes.dedup();
    Ok(holes)
}

/// Oracle-equivalence of two candidate bases: identical fiber-by-fiber
/// connectivity verdicts, and each basis walks the other's moves within
/// their own fibers.
pub fn compare_bases(
    family: &FiberFamily,
    m1: &[Move],
    m2: &[Move],
    cfg: &SweepConfig,
) -> Result<bool> {
    let fibers = sweep_fibers(family, cfg)?;
    for (_, points) in &fibers {
        let c1 = fiber_verdict(points.clone(), m1, &Preorder::trivial()).is_none();
        let c2 = fiber_verdict(points.clone(), m2, &Preorder::trivial()).is_none();
        if c1 != c2 {
            return Ok(false);
        }
    }
    for (a, b) in [(m1, m2), (m2, m1)] {
        for mv in a {
            let (pos, neg) = mv.pos_neg_parts();
            let spec = family.fiber_of(pos.entries());
            let fiber = enumerate_fiber(&spec, cfg.guard)?;
            if !connects_within_fiber(&fiber, b, pos.entries(), neg.entries()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Unboundedness test for a whole matrix family: a nonzero nonnegative
/// kernel vector makes every nonempty fiber infinite.
pub fn has_nonneg_kernel_ray(mat: &IMat) -> bool {
    let kernel = kernel_lattice(mat);
    if kernel.rank() == 0 {
        return false;
    }
    // rays of {y : basis y >= 0}, nonzero iff a nonnegative ray exists
    let cone = crate::cone::dd_from_constraints(
        kernel.rank(),
        &(0..mat.ncols()).map(|i| kernel.basis().row(i)).collect::<Vec<_>>(),
    );
    let nonzero_dir = |y: &Vec<BigInt>| {
        let v = kernel.basis().mul_vec(y);
        !vec_is_zero(&v)
    };
    cone.rays.iter().any(nonzero_dir) || cone.lineality.iter().any(nonzero_dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_from_i64;

    #[test]
    fn simple_line_fiber() {
        let spec = FiberSpec::Matrix {
            mat: IMat::from_rows(&[vec![1, 1]]),
            rhs: vec_from_i64(&[2]),
        };
        let pts = enumerate_fiber(&spec, 1000).unwrap();
        assert_eq!(
            pts,
            vec![vec_from_i64(&[0, 2]), vec_from_i64(&[1, 1]), vec_from_i64(&[2, 0])]
        );
    }

    #[test]
    fn unbounded_fiber_detected() {
        // kernel contains (1,1) >= 0
        let spec = FiberSpec::Matrix {
            mat: IMat::from_rows(&[vec![1, -1]]),
            rhs: vec_from_i64(&[0]),
        };
        assert!(matches!(enumerate_fiber(&spec, 1000), Err(Error::UnboundedFiber)));
        assert!(has_nonneg_kernel_ray(&IMat::from_rows(&[vec![1, -1]])));
        assert!(!has_nonneg_kernel_ray(&IMat::from_rows(&[vec![1, 1]])));
    }

    #[test]
    fn lattice_coset_fiber() {
        // v in (1,0) + Z(1,-1), v >= 0: the diagonal strip
        let l = Lattice::from_generators(2, &[vec_from_i64(&[1, -1])]);
        let spec = FiberSpec::LatticeCoset { lattice: l, shift: vec_from_i64(&[1, 0]) };
        let pts = enumerate_fiber(&spec, 1000).unwrap();
        assert_eq!(pts, vec![vec_from_i64(&[0, 1]), vec_from_i64(&[1, 0])]);
    }

    #[test]
    fn inequality_fiber_polytope() {
        // y1 >= 0, y1 + y2 <= 5, y1 + y2 >= 3, 2 y1 + y2 <= 6 over Z^2
        let d = IMat::from_rows(&[vec![1, 0], vec![-1, -1], vec![1, 1], vec![-2, -1]]);
        let spec = FiberSpec::Inequality {
            lattice: Lattice::full(2),
            shift: vec_from_i64(&[0, 0]),
            d,
            c: vec_from_i64(&[0, -5, 3, -6]),
        };
        let pts = enumerate_fiber(&spec, 1000).unwrap();
        // exhaustive cross-check by rejection over a box
        let mut expected = Vec::new();
        for y1 in 0..=3i64 {
            for y2 in -1..=6i64 {
                if y1 + y2 <= 5 && y1 + y2 >= 3 && 2 * y1 + y2 <= 6 {
                    expected.push(vec_from_i64(&[y1, y2]));
                }
            }
        }
        expected.sort();
        assert_eq!(pts, expected);
        assert_eq!(pts.len(), 9);
    }

    #[test]
    fn connectivity_and_sinks() {
        let pts = vec![vec_from_i64(&[2, 0]), vec_from_i64(&[1, 1]), vec_from_i64(&[0, 2])];
        let moves = vec![Move::from_i64(&[1, -1])];
        let g = FiberGraph::build(pts.clone(), &moves, &Preorder::trivial());
        assert!(g.is_weakly_connected());
        // directed by weight (1,0): unique sink at (0,2)
        let p = Preorder::from_integer_weights(&[vec![1, 0]]);
        let g = FiberGraph::build(pts.clone(), &moves, &p);
        let (sinks, minimal) = g.sink_classes(&p);
        assert_eq!(sinks, 1);
        assert!(minimal);
        // single vertex fiber
        let g = FiberGraph::build(vec![vec_from_i64(&[1])], &[], &p);
        assert!(g.is_weakly_connected());
        // two points differing by an absent move: disconnected
        assert_eq!(
            fiber_verdict(
                vec![vec_from_i64(&[2, 0]), vec_from_i64(&[0, 2])],
                &[Move::from_i64(&[1, -1])],
                &Preorder::trivial()
            ),
            Some("fiber graph is not connected".into())
        );
    }

    #[test]
    fn markov_oracle_flags_empty_basis() {
        let family = FiberFamily::Matrix(IMat::from_rows(&[vec![1, 1]]));
        let report = markov_oracle(&family, &[], &SweepConfig::with_bound(3)).unwrap();
        assert!(!report.pass);
        let report =
            markov_oracle(&family, &[Move::from_i64(&[1, -1])], &SweepConfig::with_bound(4))
                .unwrap();
        assert!(report.pass);
    }

    #[test]
    fn graver_oracle_diagonal_lattice() {
        let l = Lattice::from_generators(2, &[vec_from_i64(&[1, 1])]);
        let prim = primitive_vectors(&l, 4, 100000).unwrap();
        let canon = crate::intvec::canonical_move_set(prim);
        assert_eq!(canon, vec![Move::from_i64(&[1, 1])]);
        let report = graver_oracle(&l, &[Move::from_i64(&[1, 1])], 4, 100000).unwrap();
        assert!(report.pass);
        // planted reducible vector is rejected
        let report = graver_oracle(
            &l,
            &[Move::from_i64(&[1, 1]), Move::from_i64(&[2, 2])],
            4,
            100000,
        )
        .unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn holes_of_unimodular_matrix_empty() {
        let h = holes(&IMat::identity(3), 4, 12, 100000).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn holes_of_gapped_segment() {
        // generators (1,0), (1,2), (1,3): the lattice is all of Z^2, and
        // (1,1) and (2,1) lie in the cone but not in the semigroup
        let v = IMat::from_columns(&[
            vec_from_i64(&[1, 0]),
            vec_from_i64(&[1, 2]),
            vec_from_i64(&[1, 3]),
        ]);
        let h = holes(&v, 2, 12, 100000).unwrap();
        assert_eq!(h, vec![vec_from_i64(&[1, 1]), vec_from_i64(&[2, 1])]);
    }

    #[test]
    fn coset_representative_is_canonical() {
        let l = Lattice::from_generators(2, &[vec_from_i64(&[2, 0])]);
        let a = coset_representative(&l, &vec_from_i64(&[5, 3]));
        let b = coset_representative(&l, &vec_from_i64(&[1, 3]));
        assert_eq!(a, b);
        assert_eq!(a, vec_from_i64(&[1, 3]));
    }
}
