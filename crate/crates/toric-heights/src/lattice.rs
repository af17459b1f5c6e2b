//! Exact lattice polytopes: canonical vertex lists, half-space descriptions,
//! Minkowski sums, normalized volumes, mixed volumes and support functions.
//!
//! Volumes are normalized so that ℤⁿ has covolume 1; the mixed volume is
//! normalized so that `MV(Q, …, Q) = n!·vol(Q)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::hull::Hull;
use crate::num::{Q, dot, q};
use crate::{Error, Result};

/// Half-space description: `c·x = e` for every equation and `a·x ≥ b` for
/// every inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpaces {
    pub equations: Vec<(Vec<Q>, Q)>,
    pub inequalities: Vec<(Vec<Q>, Q)>,
}

impl HalfSpaces {
    pub fn contains(&self, x: &[Q]) -> bool {
        self.equations.iter().all(|(c, e)| &dot(c, x) == e)
            && self.inequalities.iter().all(|(a, b)| &dot(a, x) >= b)
    }
}

/// Convex hull of finitely many points of ℤⁿ, stored by its extreme points in
/// lexicographic order together with a cached half-space description.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    affine_dim: usize,
    halfspaces: HalfSpaces,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    /// Convex hull of integer points, all of ambient dimension `dim ≥ 1`.
    pub fn from_points(dim: usize, points: &[Vec<i64>]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("ambient dimension must be at least 1".into()));
        }
        if points.is_empty() {
            return Err(Error::Empty("polytope needs at least one point"));
        }
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
        }
        let qpts = points.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect();
        Ok(Self::from_hull(&Hull::new(qpts)))
    }

    fn from_hull(h: &Hull) -> Self {
        let vertices = h
            .vertex_points()
            .into_iter()
            .map(|v| v.iter().map(|x| x.to_integer().to_i64().expect("vertex fits in i64")).collect())
            .collect();
        let inequalities = h
            .facet_planes()
            .into_iter()
            .map(|(n, b)| {
                let mut a = alloc::vec![Q::zero(); h.ambient];
                for (k, &c) in h.pivots.iter().enumerate() {
                    a[c] = n[k].clone();
                }
                (a, b)
            })
            .collect();
        LatticePolytope {
            dim: h.ambient,
            vertices,
            affine_dim: h.dim,
            halfspaces: HalfSpaces { equations: h.affine_equations(), inequalities },
        }
    }

    pub fn point(m: &[i64]) -> Self {
        Self::from_points(m.len(), &[m.to_vec()]).expect("valid point")
    }

    /// The standard simplex conv{0, e_1, …, e_n}.
    pub fn unit_simplex(n: usize) -> Self {
        let mut pts = alloc::vec![alloc::vec![0; n]];
        for i in 0..n {
            let mut e = alloc::vec![0; n];
            e[i] = 1;
            pts.push(e);
        }
        Self::from_points(n, &pts).expect("valid simplex")
    }

    /// The cube [0, s]ⁿ.
    pub fn cube(n: usize, s: i64) -> Self {
        let mut pts = Vec::new();
        for mask in 0..(1u32 << n) {
            pts.push((0..n).map(|i| if mask >> i & 1 == 1 { s } else { 0 }).collect());
        }
        Self::from_points(n, &pts).expect("valid cube")
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn rational_vertices(&self) -> Vec<Vec<Q>> {
        self.vertices.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect()
    }

    pub fn halfspaces(&self) -> &HalfSpaces {
        &self.halfspaces
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.halfspaces.contains(x)
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        let xq: Vec<Q> = x.iter().map(|&v| q(v)).collect();
        self.contains(&xq)
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn translate(&self, m: &[i64]) -> Self {
        let pts: Vec<Vec<i64>> = self.vertices.iter().map(|v| v.iter().zip(m).map(|(a, b)| a + b).collect()).collect();
        Self::from_points(self.dim, &pts).expect("translate")
    }

    pub fn scale(&self, k: i64) -> Self {
        let pts: Vec<Vec<i64>> = self.vertices.iter().map(|v| v.iter().map(|a| a * k).collect()).collect();
        Self::from_points(self.dim, &pts).expect("scale")
    }

    /// Integer points in the polytope, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        let lo: Vec<i64> = (0..self.dim).map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..self.dim).map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.contains_int(&cur) {
                out.push(cur.clone());
            }
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    for j in i + 1..self.dim {
                        cur[j] = lo[j];
                    }
                    break;
                }
            }
        }
    }

    /// Edge directions with lattice lengths (polygons only): primitive edge
    /// vectors traversed around the boundary.
    pub fn edge_vectors_2d(&self) -> Vec<(Vec<i64>, i64)> {
        assert_eq!(self.dim, 2);
        let v = &self.vertices;
        if v.len() == 1 {
            return Vec::new();
        }
        if self.affine_dim == 1 {
            let d = [v[1][0] - v[0][0], v[1][1] - v[0][1]];
            let g = d[0].gcd(&d[1]);
            return alloc::vec![(alloc::vec![d[0] / g, d[1] / g], g), (alloc::vec![-d[0] / g, -d[1] / g], g)];
        }
        let cyc = self.cyclic_vertices_2d();
        let mut out = Vec::new();
        for i in 0..cyc.len() {
            let a = &cyc[i];
            let b = &cyc[(i + 1) % cyc.len()];
            let d = [b[0] - a[0], b[1] - a[1]];
            let g = d[0].gcd(&d[1]);
            out.push((alloc::vec![d[0] / g, d[1] / g], g));
        }
        out
    }

    /// Vertices of a full-dimensional polygon in counter-clockwise order,
    /// starting at the lexicographically smallest vertex.
    pub fn cyclic_vertices_2d(&self) -> Vec<Vec<i64>> {
        assert_eq!(self.dim, 2);
        let v0 = self.vertices[0].clone();
        let mut rest: Vec<Vec<i64>> = self.vertices[1..].to_vec();
        // v0 is lexicographically smallest, so every other vertex lies in a
        // half-plane and angular order is a cross-product order.
        rest.sort_by(|a, b| {
            let (ax, ay) = (a[0] - v0[0], a[1] - v0[1]);
            let (bx, by) = (b[0] - v0[0], b[1] - v0[1]);
            let cross = ax as i128 * by as i128 - ay as i128 * bx as i128;
            0i128.cmp(&cross)
        });
        let mut out = alloc::vec![v0];
        out.extend(rest);
        out
    }
}

pub fn minkowski_sum(p: &LatticePolytope, q_: &LatticePolytope) -> Result<LatticePolytope> {
    if p.dim != q_.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, got: q_.dim });
    }
    let mut pts = Vec::with_capacity(p.vertices.len() * q_.vertices.len());
    for a in &p.vertices {
        for b in &q_.vertices {
            pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    LatticePolytope::from_points(p.dim, &pts)
}

/// Minkowski sum of a nonempty list.
pub fn minkowski_sum_all(ps: &[&LatticePolytope]) -> Result<LatticePolytope> {
    let mut acc = (*ps.first().ok_or(Error::Empty("Minkowski sum of nothing"))?).clone();
    for p in &ps[1..] {
        acc = minkowski_sum(&acc, p)?;
    }
    Ok(acc)
}

/// Lebesgue volume with ℤⁿ of covolume 1; lower-dimensional polytopes give 0.
pub fn normalized_volume(p: &LatticePolytope) -> Q {
    if p.affine_dim < p.dim {
        return Q::zero();
    }
    Hull::new(p.rational_vertices()).volume()
}

/// `MV(P_1,…,P_n) = Σ_{∅≠J} (−1)^{n−|J|} vol(Σ_{j∈J} P_j)`.
pub fn mixed_volume(ps: &[&LatticePolytope]) -> Result<Q> {
    let n = ps.first().ok_or(Error::Empty("mixed volume of nothing"))?.dim;
    if ps.len() != n {
        return Err(Error::Arity { expected: n, got: ps.len() });
    }
    for p in ps {
        if p.dim != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.dim });
        }
    }
    // Sums are built incrementally over subsets in increasing mask order.
    let mut sums: BTreeMap<u32, LatticePolytope> = BTreeMap::new();
    let mut total = Q::zero();
    for mask in 1u32..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let s = if rest == 0 { ps[low].clone() } else { minkowski_sum(&sums[&rest], ps[low])? };
        let v = normalized_volume(&s);
        if (n - mask.count_ones() as usize) % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
        sums.insert(mask, s);
    }
    Ok(total)
}

/// `Ψ_P(u) = min_{x∈P} ⟨u, x⟩`.
pub fn support_value(p: &LatticePolytope, u: &[Q]) -> Result<Q> {
    if u.len() != p.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, got: u.len() });
    }
    Ok(p.rational_vertices().iter().map(|v| dot(u, v)).min().expect("nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::qvec;

    fn poly(pts: &[[i64; 2]]) -> LatticePolytope {
        LatticePolytope::from_points(2, &pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn canonical_vertices_drop_redundant_points() {
        let p = poly(&[[0, 0], [2, 0], [1, 0], [0, 2], [1, 1], [0, 1]]);
        assert_eq!(p.vertices(), &[alloc::vec![0, 0], alloc::vec![0, 2], alloc::vec![2, 0]]);
        assert_eq!(p.halfspaces().inequalities.len(), 3);
        for v in p.rational_vertices() {
            assert!(p.contains(&v));
        }
    }

    #[test]
    fn simplex_sums_and_volumes() {
        let d = LatticePolytope::unit_simplex(2);
        let s = minkowski_sum(&d, &d).unwrap();
        assert_eq!(s, poly(&[[0, 0], [2, 0], [0, 2]]));
        assert_eq!(normalized_volume(&s), q(2));
        assert_eq!(normalized_volume(&d), crate::num::qf(1, 2));
        assert_eq!(mixed_volume(&[&d, &d]).unwrap(), q(1));
        let sq = LatticePolytope::cube(2, 1);
        assert_eq!(mixed_volume(&[&sq, &sq]).unwrap(), q(2));
        assert_eq!(mixed_volume(&[&sq, &LatticePolytope::point(&[3, 1])]).unwrap(), q(0));
    }

    #[test]
    fn support_values() {
        let d = LatticePolytope::unit_simplex(2);
        assert_eq!(support_value(&d, &qvec(&[1, 1])).unwrap(), q(0));
        assert_eq!(support_value(&d, &qvec(&[-1, -2])).unwrap(), q(-2));
    }

    #[test]
    fn lattice_points_of_triangle() {
        let p = poly(&[[0, 0], [2, 0], [0, 2]]);
        assert_eq!(p.lattice_points().len(), 6);
        assert_eq!(p.cyclic_vertices_2d(), alloc::vec![alloc::vec![0, 0], alloc::vec![2, 0], alloc::vec![0, 2]]);
    }
}
