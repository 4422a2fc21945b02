//! Exact polyhedral cone computations by the double description method:
//! generator representations of halfspace intersections, facet descriptions
//! of finitely generated cones, and polytope vertex enumeration.
//!
//! All arithmetic is over arbitrary-precision integers and rationals.

use crate::error::{Error, Result};
use crate::latalg::{column_hnf, kernel_lattice, solve_columns};
use crate::matrix::{vec_dot, IMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn primitive(v: &mut Vec<BigInt>) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        g = g.gcd(x);
    }
    if g > BigInt::from(1) {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Generators of a polyhedral cone: a lineality basis plus extreme rays.
#[derive(Debug, Clone)]
pub struct GeneratorCone {
    pub lineality: Vec<Vec<BigInt>>,
    pub rays: Vec<Vec<BigInt>>,
}

/// Intersect halfspaces {x : <row, x> >= 0} starting from all of R^d.
pub fn dd_from_constraints(dim: usize, rows: &[Vec<BigInt>]) -> GeneratorCone {
    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let mut processed: Vec<Vec<BigInt>> = Vec::new();

    for a in rows {
        assert_eq!(a.len(), dim, "constraint dimension");
        if a.iter().all(|x| x.is_zero()) {
            continue;
        }
        let in_lineality = lineality.iter().position(|l| !vec_dot(a, l).is_zero());
        if let Some(idx) = in_lineality {
            let l0 = lineality.remove(idx);
            let s0 = vec_dot(a, &l0);
            for l in lineality.iter_mut() {
                let s = vec_dot(a, l);
                if !s.is_zero() {
                    let mut nl: Vec<BigInt> =
                        l.iter().zip(&l0).map(|(x, y)| &s0 * x - &s * y).collect();
                    primitive(&mut nl);
                    *l = nl;
                }
            }
            for r in rays.iter_mut() {
                let s = vec_dot(a, r);
                if !s.is_zero() {
                    // positive multiple of r shifted along l0 into the hyperplane
                    let scale = s0.abs();
                    let shift = if s0.is_positive() { s.clone() } else { -&s };
                    let mut nr: Vec<BigInt> =
                        r.iter().zip(&l0).map(|(x, y)| &scale * x - &shift * y).collect();
                    primitive(&mut nr);
                    *r = nr;
                }
            }
            let mut new_ray: Vec<BigInt> =
                if s0.is_positive() { l0 } else { l0.iter().map(|x| -x).collect() };
            primitive(&mut new_ray);
            rays.push(new_ray);
        } else {
            let vals: Vec<BigInt> = rays.iter().map(|r| vec_dot(a, r)).collect();
            let has_neg = vals.iter().any(|v| v.is_negative());
            if has_neg {
                let mut next: Vec<Vec<BigInt>> = Vec::new();
                for (r, v) in rays.iter().zip(&vals) {
                    if !v.is_negative() {
                        next.push(r.clone());
                    }
                }
                for (ri, vi) in rays.iter().zip(&vals) {
                    if !vi.is_positive() {
                        continue;
                    }
                    for (rj, vj) in rays.iter().zip(&vals) {
                        if !vj.is_negative() {
                            continue;
                        }
                        if adjacent(&processed, ri, rj, &rays) {
                            let mut comb: Vec<BigInt> = ri
                                .iter()
                                .zip(rj)
                                .map(|(x, y)| vi * y - vj * x)
                                .collect();
                            primitive(&mut comb);
                            next.push(comb);
                        }
                    }
                }
                next.sort();
                next.dedup();
                rays = next;
            }
        }
        processed.push(a.clone());
    }
    GeneratorCone { lineality, rays }
}

/// Combinatorial adjacency: r1, r2 are adjacent extreme rays iff no third
/// ray is tight on every processed constraint tight at both of them.
fn adjacent(
    processed: &[Vec<BigInt>],
    r1: &[BigInt],
    r2: &[BigInt],
    all_rays: &[Vec<BigInt>],
) -> bool {
    let tight: Vec<&Vec<BigInt>> = processed
        .iter()
        .filter(|a| vec_dot(a, r1).is_zero() && vec_dot(a, r2).is_zero())
        .collect();
    for r in all_rays {
        if r.as_slice() == r1 || r.as_slice() == r2 {
            continue;
        }
        if tight.iter().all(|a| vec_dot(a, r).is_zero()) {
            return false;
        }
    }
    true
}

/// Facet/equation description of the cone generated by the columns of `v`.
#[derive(Debug, Clone)]
pub struct FacetDescription {
    /// Rows f with <f, x> >= 0 for every x in the cone.
    pub facets: IMat,
    /// Rows e with <e, x> = 0 on the linear span of the cone.
    pub equations: IMat,
}

impl FacetDescription {
    /// All rows as inequalities (equations expanded into +/- pairs).
    pub fn inequality_rows(&self) -> Vec<Vec<BigInt>> {
        let mut rows: Vec<Vec<BigInt>> = self.facets.rows_iter().map(|r| r.to_vec()).collect();
        for e in self.equations.rows_iter() {
            rows.push(e.to_vec());
            rows.push(e.iter().map(|x| -x).collect());
        }
        rows
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.facets.rows_iter().all(|f| !vec_dot(f, x).is_negative())
            && self.equations.rows_iter().all(|e| vec_dot(e, x).is_zero())
    }
}

/// Compute the facets of cone(columns of v) exactly.  Works in the intrinsic
/// dimension (the rank of v), which must be at most `dim_gate`.
pub fn facet_description(v: &IMat, dim_gate: usize) -> Result<FacetDescription> {
    let d = v.nrows();
    let equations = {
        let ker = kernel_lattice(&v.transpose());
        ker.basis().transpose()
    };
    let hnf = column_hnf(v);
    let r = hnf.pivots.len();
    if r > dim_gate {
        return Err(Error::FacetsUnavailable(format!(
            "cone has intrinsic dimension {r}, above the built-in gate {dim_gate}; supply facets in a file"
        )));
    }
    if r == 0 {
        return Ok(FacetDescription { facets: IMat::zero(0, d), equations });
    }
    let w = IMat::from_columns(&(0..r).map(|j| hnf.h.col(j)).collect::<Vec<_>>());
    // intrinsic coordinates of the generators
    let mut coords: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..v.ncols() {
        let c = solve_columns(&w, &v.col(j)).expect("columns lie in their own span");
        coords.push(c);
    }
    // dual cone in intrinsic space: {y : <y, c_j> >= 0}
    let dual = dd_from_constraints(r, &coords);
    // each dual ray maps back to an ambient facet normal
    let wt = w.transpose();
    let mut facet_rows: Vec<Vec<BigInt>> = Vec::new();
    for ray in &dual.rays {
        let y = rational_solve_any(&wt, ray)
            .expect("transpose system is solvable at full row rank");
        facet_rows.push(clear_denominators(&y));
    }
    facet_rows.sort();
    facet_rows.dedup();
    let facets = if facet_rows.is_empty() {
        IMat::zero(0, d)
    } else {
        IMat::from_big_rows(facet_rows)
    };
    Ok(FacetDescription { facets, equations })
}

/// One rational solution of A x = b, if any.
pub fn rational_solve_any(a: &IMat, b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = a.nrows();
    let m = a.ncols();
    assert_eq!(b.len(), n);
    let mut tab: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                (0..m).map(|j| BigRational::from(a.get(i, j).clone())).collect();
            row.push(BigRational::from(b[i].clone()));
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prow = 0usize;
    for col in 0..m {
        let Some(sel) = (prow..n).find(|&i| !tab[i][col].is_zero()) else { continue };
        tab.swap(prow, sel);
        let p = tab[prow][col].clone();
        for x in tab[prow].iter_mut() {
            *x /= p.clone();
        }
        for i in 0..n {
            if i != prow && !tab[i][col].is_zero() {
                let f = tab[i][col].clone();
                for j in 0..=m {
                    let sub = &f * &tab[prow][j];
                    tab[i][j] -= sub;
                }
            }
        }
        pivots.push((prow, col));
        prow += 1;
        if prow == n {
            break;
        }
    }
    for i in prow..n {
        if !tab[i][m].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); m];
    for &(r, c) in &pivots {
        x[c] = tab[r][m].clone();
    }
    Some(x)
}

pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::from(1);
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    primitive(&mut out);
    out
}

/// Shape of a rational polytope {x : A x >= b}.
#[derive(Debug, Clone)]
pub struct PolytopeShape {
    pub vertices: Vec<Vec<BigRational>>,
    pub recession_rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

impl PolytopeShape {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_unbounded(&self) -> bool {
        !self.lineality.is_empty() || !self.recession_rays.is_empty()
    }

    /// Component-wise integer bounding box [lo, hi] over the vertices.
    pub fn integer_box(&self) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
        let first = self.vertices.first()?;
        let d = first.len();
        let mut lo = vec![BigInt::zero(); d];
        let mut hi = vec![BigInt::zero(); d];
        for j in 0..d {
            let mut mn = self.vertices[0][j].clone();
            let mut mx = mn.clone();
            for v in &self.vertices {
                if v[j] < mn {
                    mn = v[j].clone();
                }
                if v[j] > mx {
                    mx = v[j].clone();
                }
            }
            lo[j] = mn.ceil().to_integer();
            hi[j] = mx.floor().to_integer();
        }
        Some((lo, hi))
    }
}

/// Vertex/ray shape of {x in R^d : A x >= b} via the homogenization cone
/// {(x, s) : A x - b s >= 0, s >= 0}.
pub fn polytope_shape(a: &IMat, b: &[BigInt]) -> PolytopeShape {
    let d = a.ncols();
    assert_eq!(a.nrows(), b.len());
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..a.nrows() {
        let mut row = a.row(i);
        row.push(-&b[i]);
        rows.push(row);
    }
    let mut s_row = vec![BigInt::zero(); d];
    s_row.push(BigInt::from(1));
    rows.push(s_row);
    let cone = dd_from_constraints(d + 1, &rows);
    let mut vertices = Vec::new();
    let mut recession = Vec::new();
    let mut lineality = Vec::new();
    for l in cone.lineality {
        // s >= 0 forces lineality s-components to zero
        lineality.push(l[0..d].to_vec());
    }
    for r in cone.rays {
        let s = &r[d];
        if s.is_zero() {
            if r[0..d].iter().any(|x| !x.is_zero()) {
                recession.push(r[0..d].to_vec());
            }
        } else {
            let vert: Vec<BigRational> = r[0..d]
                .iter()
                .map(|x| BigRational::new(x.clone(), s.clone()))
                .collect();
            vertices.push(vert);
        }
    }
    vertices.sort();
    vertices.dedup();
    PolytopeShape { vertices, recession_rays: recession, lineality }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_from_i64;

    fn facet_rows_sorted(fd: &FacetDescription) -> Vec<Vec<BigInt>> {
        let mut rows: Vec<Vec<BigInt>> = fd.facets.rows_iter().map(|r| r.to_vec()).collect();
        rows.sort();
        rows
    }

    #[test]
    fn positive_orthant_facets() {
        let v = IMat::identity(3);
        let fd = facet_description(&v, 12).unwrap();
        assert_eq!(fd.equations.nrows(), 0);
        assert_eq!(
            facet_rows_sorted(&fd),
            vec![vec_from_i64(&[0, 0, 1]), vec_from_i64(&[0, 1, 0]), vec_from_i64(&[1, 0, 0])]
        );
    }

    #[test]
    fn planar_cone_in_three_space_has_equation() {
        // cone spanned by (1,0,0) and (1,1,0): z = 0 plane
        let v = IMat::from_columns(&[vec_from_i64(&[1, 0, 0]), vec_from_i64(&[1, 1, 0])]);
        let fd = facet_description(&v, 12).unwrap();
        assert_eq!(fd.equations.nrows(), 1);
        assert!(fd.contains(&vec_from_i64(&[2, 1, 0])));
        assert!(!fd.contains(&vec_from_i64(&[0, 0, 1])));
        assert!(!fd.contains(&vec_from_i64(&[-1, 0, 0])));
        assert!(!fd.contains(&vec_from_i64(&[0, 1, 0])) || fd.contains(&vec_from_i64(&[0, 1, 0])));
        // boundary membership: both generators satisfy the description
        assert!(fd.contains(&vec_from_i64(&[1, 0, 0])));
        assert!(fd.contains(&vec_from_i64(&[1, 1, 0])));
    }

    #[test]
    fn dual_of_halfplane_keeps_lineality() {
        // {x : x_1 >= 0} in R^2: lineality e_2, single ray e_1
        let cone = dd_from_constraints(2, &[vec_from_i64(&[1, 0])]);
        assert_eq!(cone.lineality.len(), 1);
        assert_eq!(cone.rays.len(), 1);
    }

    #[test]
    fn simplex_vertices() {
        // x >= 0, y >= 0, x + y <= 3
        let a = IMat::from_rows(&[vec![1, 0], vec![0, 1], vec![-1, -1]]);
        let shape = polytope_shape(&a, &vec_from_i64(&[0, 0, -3]));
        assert!(!shape.is_unbounded());
        assert_eq!(shape.vertices.len(), 3);
        let (lo, hi) = shape.integer_box().unwrap();
        assert_eq!(lo, vec_from_i64(&[0, 0]));
        assert_eq!(hi, vec_from_i64(&[3, 3]));
    }

    #[test]
    fn unbounded_and_empty_shapes() {
        // x >= 1 in R^1: unbounded
        let a = IMat::from_rows(&[vec![1]]);
        let shape = polytope_shape(&a, &vec_from_i64(&[1]));
        assert!(shape.is_unbounded());
        // x >= 1, x <= 0: empty
        let a = IMat::from_rows(&[vec![1], vec![-1]]);
        let shape = polytope_shape(&a, &vec_from_i64(&[1, 0]));
        assert!(shape.is_empty());
        assert!(!shape.is_unbounded());
    }

    #[test]
    fn octant_cross_section() {
        // x,y,z >= 0, x+y+z = 2 (as two inequalities): triangle with 3 vertices
        let a = IMat::from_rows(&[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1],
            vec![-1, -1, -1],
        ]);
        let shape = polytope_shape(&a, &vec_from_i64(&[0, 0, 0, 2, -2]));
        assert_eq!(shape.vertices.len(), 3);
        assert!(!shape.is_unbounded());
    }
}
