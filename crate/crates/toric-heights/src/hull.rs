//! Exact convex hulls in any dimension.
//!
//! Points are projected onto coordinates of their affine hull, then a placing
//! triangulation is built by inserting points in lexicographic order and
//! coning every strictly visible boundary facet to the new point. The final
//! boundary facets give vertices, facet inequalities and the volume.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg;
use crate::num::{Q, dot, factorial, lex_cmp, primitive_ray};

#[derive(Clone, Debug)]
pub(crate) struct Facet {
    /// Point indices spanning the facet (sorted).
    pub idx: Vec<usize>,
    /// Primitive integer inward normal in projected coordinates.
    pub normal: Vec<Q>,
    /// Inside is `normal · y ≥ offset`.
    pub offset: Q,
}

#[derive(Clone, Debug)]
pub(crate) struct Hull {
    pub ambient: usize,
    /// Affine dimension of the point set.
    pub dim: usize,
    /// Deduplicated points, sorted lexicographically.
    pub points: Vec<Vec<Q>>,
    /// Coordinates onto which projection is injective on the affine hull.
    pub pivots: Vec<usize>,
    pub proj: Vec<Vec<Q>>,
    pub simplices: Vec<Vec<usize>>,
    pub facets: Vec<Facet>,
    pub vertices: Vec<usize>,
}

impl Hull {
    pub fn new(mut points: Vec<Vec<Q>>) -> Hull {
        assert!(!points.is_empty(), "hull of an empty set");
        let ambient = points[0].len();
        points.sort_by(|a, b| lex_cmp(a, b));
        points.dedup();
        let diffs: Vec<Vec<Q>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
            .collect();
        let pivots = if diffs.is_empty() { Vec::new() } else { linalg::rref(&diffs).1 };
        let dim = pivots.len();
        let proj: Vec<Vec<Q>> = points.iter().map(|p| pivots.iter().map(|&c| p[c].clone()).collect()).collect();
        let mut h = Hull {
            ambient,
            dim,
            points,
            pivots,
            proj,
            simplices: Vec::new(),
            facets: Vec::new(),
            vertices: Vec::new(),
        };
        if dim == 0 {
            h.vertices = alloc::vec![0];
        } else {
            h.place();
            h.find_vertices();
        }
        h
    }

    fn hyperplane(&self, idx: &[usize], inside: usize) -> (Vec<Q>, Q) {
        let y0 = &self.proj[idx[0]];
        let rows: Vec<Vec<Q>> = idx[1..]
            .iter()
            .map(|&i| self.proj[i].iter().zip(y0).map(|(a, b)| a - b).collect())
            .collect();
        let ns = if rows.is_empty() {
            alloc::vec![alloc::vec![Q::from_integer(BigInt::from(1))]]
        } else {
            linalg::nullspace(&rows, self.dim)
        };
        debug_assert_eq!(ns.len(), 1, "degenerate facet");
        let (ints, _) = primitive_ray(&ns[0]);
        let mut normal: Vec<Q> = ints.into_iter().map(Q::from_integer).collect();
        let mut offset = dot(&normal, y0);
        if dot(&normal, &self.proj[inside]) < offset {
            for x in normal.iter_mut() {
                *x = -x.clone();
            }
            offset = -offset;
        }
        (normal, offset)
    }

    fn place(&mut self) {
        let d = self.dim;
        // Initial simplex: greedy in lexicographic order.
        let mut chosen = alloc::vec![0usize];
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for i in 1..self.proj.len() {
            if chosen.len() == d + 1 {
                break;
            }
            let row: Vec<Q> = self.proj[i].iter().zip(&self.proj[0]).map(|(a, b)| a - b).collect();
            rows.push(row);
            if linalg::rank(&rows) == rows.len() {
                chosen.push(i);
            } else {
                rows.pop();
            }
        }
        debug_assert_eq!(chosen.len(), d + 1);
        let mut boundary: BTreeMap<Vec<usize>, Facet> = BTreeMap::new();
        for (k, &opp) in chosen.iter().enumerate() {
            let mut idx = chosen.clone();
            idx.remove(k);
            let (normal, offset) = self.hyperplane(&idx, opp);
            boundary.insert(idx.clone(), Facet { idx, normal, offset });
        }
        self.simplices.push(chosen.clone());
        for p in 0..self.proj.len() {
            if chosen.contains(&p) {
                continue;
            }
            let y = &self.proj[p];
            let visible: Vec<Vec<usize>> = boundary
                .values()
                .filter(|f| dot(&f.normal, y) < f.offset)
                .map(|f| f.idx.clone())
                .collect();
            if visible.is_empty() {
                continue;
            }
            for key in &visible {
                boundary.remove(key);
                let mut s = key.clone();
                s.push(p);
                self.simplices.push(s);
            }
            for key in &visible {
                for (k, &w) in key.iter().enumerate() {
                    let mut ridge = key.clone();
                    ridge.remove(k);
                    ridge.push(p);
                    ridge.sort_unstable();
                    if boundary.remove(&ridge).is_none() {
                        let (normal, offset) = self.hyperplane(&ridge, w);
                        boundary.insert(ridge.clone(), Facet { idx: ridge, normal, offset });
                    }
                }
            }
        }
        self.facets = boundary.into_values().collect();
    }

    fn find_vertices(&mut self) {
        let mut normals: BTreeMap<usize, Vec<Vec<Q>>> = BTreeMap::new();
        for f in &self.facets {
            for &i in &f.idx {
                let e = normals.entry(i).or_default();
                if !e.contains(&f.normal) {
                    e.push(f.normal.clone());
                }
            }
        }
        self.vertices = normals
            .into_iter()
            .filter(|(_, ns)| linalg::rank(ns) == self.dim)
            .map(|(i, _)| i)
            .collect();
    }

    /// Vertex coordinates in lexicographic order.
    pub fn vertex_points(&self) -> Vec<Vec<Q>> {
        self.vertices.iter().map(|&i| self.points[i].clone()).collect()
    }

    /// Volume in projected coordinates; equals the Lebesgue volume when the
    /// hull is full-dimensional.
    pub fn projected_volume(&self) -> Q {
        if self.dim == 0 {
            return Q::zero();
        }
        let mut total = Q::zero();
        for s in &self.simplices {
            let y0 = &self.proj[s[0]];
            let m: Vec<Vec<Q>> = s[1..]
                .iter()
                .map(|&i| self.proj[i].iter().zip(y0).map(|(a, b)| a - b).collect())
                .collect();
            total += linalg::det(m).abs();
        }
        total / Q::from_integer(factorial(self.dim))
    }

    /// Lebesgue volume in the ambient space (zero if not full-dimensional).
    pub fn volume(&self) -> Q {
        if self.dim < self.ambient { Q::zero() } else { self.projected_volume() }
    }

    /// Distinct facet hyperplanes `(normal, offset)` in projected coordinates.
    pub fn facet_planes(&self) -> Vec<(Vec<Q>, Q)> {
        let mut out: Vec<(Vec<Q>, Q)> = Vec::new();
        for f in &self.facets {
            if !out.iter().any(|(n, o)| n == &f.normal && o == &f.offset) {
                out.push((f.normal.clone(), f.offset.clone()));
            }
        }
        out.sort_by(|a, b| lex_cmp(&a.0, &b.0).then_with(|| a.1.cmp(&b.1)));
        out
    }

    /// Orthogonal equations `c · x = e` cutting out the affine hull.
    pub fn affine_equations(&self) -> Vec<(Vec<Q>, Q)> {
        let diffs: Vec<Vec<Q>> = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(&self.points[0]).map(|(a, b)| a - b).collect())
            .collect();
        let basis = if diffs.is_empty() {
            (0..self.ambient)
                .map(|i| {
                    let mut v = alloc::vec![Q::zero(); self.ambient];
                    v[i] = Q::from_integer(BigInt::from(1));
                    v
                })
                .collect()
        } else {
            linalg::nullspace(&diffs, self.ambient)
        };
        basis
            .into_iter()
            .map(|c| {
                let (ints, _) = primitive_ray(&c);
                let c: Vec<Q> = ints.into_iter().map(Q::from_integer).collect();
                let e = dot(&c, &self.points[0]);
                (c, e)
            })
            .collect()
    }

    /// Projects an ambient point onto the pivot coordinates.
    pub fn project(&self, x: &[Q]) -> Vec<Q> {
        self.pivots.iter().map(|&c| x[c].clone()).collect()
    }

    /// Membership test for an ambient point.
    pub fn contains(&self, x: &[Q]) -> bool {
        if !self.affine_equations().iter().all(|(c, e)| &dot(c, x) == e) {
            return false;
        }
        if self.dim == 0 {
            return true;
        }
        let y = self.project(x);
        self.facets.iter().all(|f| dot(&f.normal, &y) >= f.offset)
    }
}
