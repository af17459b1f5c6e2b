//! Legendre dual of the Archimedean Ronkin function of a bivariate
//! polynomial, as a two-sided grid.
//!
//! Every evaluation of `ρ` at `u` (value and gradient `g`) gives
//!
//! - a tangent plane `x ↦ ⟨u,x⟩ − ρ(u)`, which lies above `ρ^∨`;
//! - a graph point `(g, ⟨u,g⟩ − ρ(u))` of `ρ^∨`.
//!
//! On each edge of the Newton polygon `ρ^∨` is the dual of the edge
//! polynomial, known exactly from its roots, so the boundary contributes
//! exact graph points. Lower node values are the upper hull of the graph
//! points. Upper node values are the minimum of the tangent planes, lifted
//! on every grid triangle by the largest gap between that minimum and its
//! linear interpolant, so that the hull of the upper samples dominates
//! `ρ^∨`. New `u` are taken from the facet slopes of the lower hull wherever
//! the two sides disagree.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use super::arch::{Fibered, Univariate};
use crate::concave::GridConcave;
use crate::concave::hull3::hull_faces;
use crate::cyclotomic::LaurentPoly;
use crate::lattice::{LatticePolytope, normalized_volume};
use crate::num::{Q, q, to_f64};
use crate::{Error, Result};

/// Tuning for [`sandwich_dual`].
#[derive(Clone, Copy, Debug)]
pub struct SandwichOptions {
    /// Grid resolution `r` (nodes on `(1/r)ℤ²`).
    pub resolution: u32,
    /// Maximal number of Ronkin evaluations.
    pub budget: usize,
    /// Node gap below which no refinement is requested.
    pub tolerance: f64,
    pub max_rounds: usize,
}

impl SandwichOptions {
    pub fn new(resolution: u32, budget: usize) -> Self {
        SandwichOptions { resolution, budget, tolerance: 1e-4, max_rounds: 8 }
    }
}

/// Result of the construction.
#[derive(Clone, Debug)]
pub struct Sandwich {
    pub grid: GridConcave,
    pub evaluations: usize,
    pub rounds: usize,
}

#[derive(Clone, Copy)]
struct Plane {
    u: [f64; 2],
    c: f64,
}

impl Plane {
    fn at(&self, x: [f64; 2]) -> f64 {
        self.u[0] * x[0] + self.u[1] * x[1] + self.c
    }
}

/// Which diagonal splits each grid square.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Split {
    /// Diagonal from `(i+1, j)` to `(i, j+1)`.
    Anti,
    /// Diagonal from `(i, j)` to `(i+1, j+1)`.
    Main,
}

fn choose_split(p: &LatticePolytope) -> Result<Split> {
    let dirs: Vec<(i64, i64)> = p.edge_vectors_2d().iter().map(|(e, _)| (e[0], e[1])).collect();
    let axis = |d: &(i64, i64)| d.0 == 0 || d.1 == 0;
    if dirs.iter().all(|d| axis(d) || d.0 == -d.1) {
        Ok(Split::Anti)
    } else if dirs.iter().all(|d| axis(d) || d.0 == d.1) {
        Ok(Split::Main)
    } else {
        Err(Error::Unsupported(
            "grid duals need Newton polygon edges parallel to (1,0), (0,1) and one diagonal".into(),
        ))
    }
}

/// Exact graph points of `ρ^∨` along the boundary of the Newton polygon.
fn edge_points(f: &LaurentPoly, p: &LatticePolytope) -> Vec<([f64; 2], f64, f64)> {
    let terms = f.embedded_terms(1);
    let coeff = |m: [i64; 2]| -> Complex64 {
        terms.iter().find(|(e, _)| e[0] == m[0] && e[1] == m[1]).map(|(_, c)| *c).unwrap_or(Complex64::zero())
    };
    let cyc = p.cyclic_vertices_2d();
    let mut out = Vec::new();
    for (k, (v, len)) in p.edge_vectors_2d().iter().enumerate() {
        let a = &cyc[k];
        let c: Vec<Complex64> =
            (0..=*len).map(|j| coeff([a[0] + j * v[0], a[1] + j * v[1]])).collect();
        let uni = Univariate::from_coeffs(0, &c);
        for (j, val) in uni.dual_values().into_iter().enumerate() {
            let j = j as i64;
            out.push(([(a[0] + j * v[0]) as f64, (a[1] + j * v[1]) as f64], val, uni.error));
        }
    }
    out
}

/// Upper hull of lifted points as affine pieces `z = s·x + c`.
fn upper_hull(points: &[[f64; 3]], domain: &LatticePolytope) -> Vec<Plane> {
    let base = points.iter().map(|p| p[2]).fold(f64::INFINITY, f64::min) - 1.0;
    let mut pts = points.to_vec();
    for v in domain.vertices() {
        pts.push([v[0] as f64, v[1] as f64, base]);
    }
    let mut planes = Vec::new();
    for f in hull_faces(&pts) {
        let (a, b, c) = (pts[f[0]], pts[f[1]], pts[f[2]]);
        let e1 = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let e2 = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let n = [e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]];
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if n[2] <= 1e-12 * len {
            continue;
        }
        let s = [-n[0] / n[2], -n[1] / n[2]];
        planes.push(Plane { u: s, c: a[2] - s[0] * a[0] - s[1] * a[1] });
    }
    planes
}

fn min_plane(planes: &[Plane], x: [f64; 2]) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (k, p) in planes.iter().enumerate() {
        let v = p.at(x);
        if v < best.0 {
            best = (v, k);
        }
    }
    best
}

/// Indices of the `K` smallest planes at `x`.
fn smallest_planes<const K: usize>(planes: &[Plane], x: [f64; 2]) -> [usize; K] {
    let mut best = [(f64::INFINITY, 0usize); K];
    for (k, p) in planes.iter().enumerate() {
        let v = p.at(x);
        if v < best[K - 1].0 {
            let mut i = K - 1;
            while i > 0 && best[i - 1].0 > v {
                best[i] = best[i - 1];
                i -= 1;
            }
            best[i] = (v, k);
        }
    }
    best.map(|b| b.1)
}

/// `max_{x∈T} (min_{k∈A} P_k(x) − I(x))` where `I` interpolates `vals` at the
/// corners of `T`. The function is concave and piecewise affine, so its
/// maximum sits at a corner, on an edge where two planes cross, or where
/// three planes meet.
fn triangle_gap(t: [[f64; 2]; 3], vals: [f64; 3], planes: &[Plane]) -> f64 {
    let det = (t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (t[1][1] - t[0][1]);
    let bary = |x: [f64; 2]| -> [f64; 3] {
        let l1 = ((x[0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (x[1] - t[0][1])) / det;
        let l2 = ((t[1][0] - t[0][0]) * (x[1] - t[0][1]) - (x[0] - t[0][0]) * (t[1][1] - t[0][1])) / det;
        [1.0 - l1 - l2, l1, l2]
    };
    let gap = |x: [f64; 2]| -> f64 {
        let l = bary(x);
        let interp = l[0] * vals[0] + l[1] * vals[1] + l[2] * vals[2];
        planes.iter().map(|p| p.at(x)).fold(f64::INFINITY, f64::min) - interp
    };
    let mut best = 0.0f64;
    for (i, pi) in planes.iter().enumerate() {
        for (j, pj) in planes.iter().enumerate().skip(i + 1) {
            // Where P_i = P_j along each edge.
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                let da = pi.at(a) - pj.at(a);
                let db = pi.at(b) - pj.at(b);
                if da != db {
                    let s = da / (da - db);
                    if (0.0..=1.0).contains(&s) {
                        best = best.max(gap([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]));
                    }
                }
            }
            for pk in planes.iter().skip(j + 1) {
                let (a1, b1, c1) = (pi.u[0] - pj.u[0], pi.u[1] - pj.u[1], pj.c - pi.c);
                let (a2, b2, c2) = (pi.u[0] - pk.u[0], pi.u[1] - pk.u[1], pk.c - pi.c);
                let d = a1 * b2 - a2 * b1;
                if d.abs() < 1e-14 {
                    continue;
                }
                let x = [(c1 * b2 - c2 * b1) / d, (a1 * c2 - a2 * c1) / d];
                if bary(x).iter().all(|&l| l >= -1e-12) {
                    best = best.max(gap(x));
                }
            }
        }
    }
    best
}

struct Sampler<'a> {
    fib: &'a Fibered,
    seen: BTreeSet<(i64, i64)>,
    evaluations: usize,
    planes: Vec<Plane>,
    graph: Vec<[f64; 3]>,
}

impl Sampler<'_> {
    /// Evaluates `ρ` at `u` unless already done; returns whether it was new.
    fn add(&mut self, u: [f64; 2]) -> Result<bool> {
        let key = ((u[0] * 1e7).round() as i64, (u[1] * 1e7).round() as i64);
        if !self.seen.insert(key) {
            return Ok(false);
        }
        let mut s = self.fib.eval(u);
        // The fiber met a zero of the polynomial: nudge u.
        let mut k = 0;
        while s.is_err() && k < 4 {
            k += 1;
            s = self.fib.eval([u[0] + 1e-7 * k as f64, u[1] - 1.3e-7 * k as f64]);
        }
        let s = s?;
        self.evaluations += 1;
        let g = s.gradient;
        let v = u[0] * g[0] + u[1] * g[1] - s.value;
        self.planes.push(Plane { u, c: -s.value + s.error });
        self.graph.push([g[0], g[1], v - s.error - s.gradient_error * (u[0].abs() + u[1].abs())]);
        Ok(true)
    }
}

/// Two-sided grid for `ρ_f^∨`, `f` bivariate with a full-dimensional Newton
/// polygon.
pub fn sandwich_dual(f: &LaurentPoly, opts: &SandwichOptions) -> Result<Sandwich> {
    let np = f.newton_polytope()?;
    if np.ambient_dim() != 2 || np.affine_dim() != 2 {
        return Err(Error::Invalid("sandwich duals need a full-dimensional Newton polygon".into()));
    }
    let split = choose_split(&np)?;
    let fib = Fibered::new(f)?;
    let r = opts.resolution as i64;
    let rf = opts.resolution as f64;

    // Grid nodes (integer indices) and triangles.
    let rq = q(r);
    let vs = np.vertices();
    let lo = [vs.iter().map(|v| v[0]).min().unwrap() * r, vs.iter().map(|v| v[1]).min().unwrap() * r];
    let hi = [vs.iter().map(|v| v[0]).max().unwrap() * r, vs.iter().map(|v| v[1]).max().unwrap() * r];
    let w = (hi[1] - lo[1] + 1) as usize;
    let idx = |i: i64, j: i64| (i - lo[0]) as usize * w + (j - lo[1]) as usize;
    let size = (hi[0] - lo[0] + 1) as usize * w;
    let mut inside = alloc::vec![false; size];
    let mut nodes: Vec<[i64; 2]> = Vec::new();
    for i in lo[0]..=hi[0] {
        for j in lo[1]..=hi[1] {
            if np.contains(&[Q::new(i.into(), rq.numer().clone()), Q::new(j.into(), rq.numer().clone())]) {
                inside[idx(i, j)] = true;
                nodes.push([i, j]);
            }
        }
    }
    let mut tris: Vec<[[i64; 2]; 3]> = Vec::new();
    for i in lo[0]..hi[0] {
        for j in lo[1]..hi[1] {
            let cands = match split {
                Split::Anti => [[[i, j], [i + 1, j], [i, j + 1]], [[i + 1, j], [i + 1, j + 1], [i, j + 1]]],
                Split::Main => [[[i, j], [i + 1, j], [i + 1, j + 1]], [[i, j], [i + 1, j + 1], [i, j + 1]]],
            };
            for t in cands {
                if t.iter().all(|v| inside[idx(v[0], v[1])]) {
                    tris.push(t);
                }
            }
        }
    }
    let area = to_f64(&normalized_volume(&np));
    if (tris.len() as f64 - 2.0 * area * rf * rf).abs() > 0.5 {
        return Err(Error::Numerical("grid triangles do not cover the Newton polygon".into()));
    }
    let xy = |v: [i64; 2]| [v[0] as f64 / rf, v[1] as f64 / rf];

    // Samples.
    let fixed = edge_points(f, &np);
    let mut smp = Sampler {
        fib: &fib,
        seen: BTreeSet::new(),
        evaluations: 0,
        planes: Vec::new(),
        graph: fixed.iter().map(|(x, v, e)| [x[0], x[1], v - e]).collect(),
    };
    let mut a = -6.0;
    while a <= 6.0 + 1e-9 {
        let mut b = -6.0;
        while b <= 6.0 + 1e-9 {
            smp.add([a, b])?;
            b += 0.5;
        }
        a += 0.5;
    }

    let mut rounds = 0;
    let (lower, upper_min) = loop {
        let hull = upper_hull(&smp.graph, &np);
        let lower: Vec<(f64, usize)> = nodes.iter().map(|&v| min_plane(&hull, xy(v))).collect();
        let upper: Vec<f64> = nodes.iter().map(|&v| min_plane(&smp.planes, xy(v)).0).collect();
        if rounds >= opts.max_rounds {
            break (lower, upper);
        }
        let mut want: Vec<[f64; 2]> = Vec::new();
        for (k, (l, face)) in lower.iter().enumerate() {
            if upper[k] - l > opts.tolerance {
                let s = hull[*face].u;
                if s[0].abs() <= 30.0 && s[1].abs() <= 30.0 {
                    want.push(s);
                }
            }
        }
        if want.is_empty() || smp.evaluations >= opts.budget {
            break (lower, upper);
        }
        rounds += 1;
        let mut added = 0;
        for u in want {
            if smp.evaluations >= opts.budget {
                break;
            }
            if smp.add(u)? {
                added += 1;
            }
        }
        if added == 0 {
            rounds -= 1;
            let hull = upper_hull(&smp.graph, &np);
            let lower = nodes.iter().map(|&v| min_plane(&hull, xy(v))).collect();
            break (lower, upper);
        }
    };

    // Triangle lifts.
    let mut lift = alloc::vec![0.0f64; size];
    let planes = &smp.planes;
    let near: Vec<[usize; 3]> = nodes.iter().map(|&v| smallest_planes::<3>(planes, xy(v))).collect();
    let mut node_pos = alloc::vec![usize::MAX; size];
    for (k, v) in nodes.iter().enumerate() {
        node_pos[idx(v[0], v[1])] = k;
    }
    for t in &tris {
        let ks = t.map(|v| node_pos[idx(v[0], v[1])]);
        let mut active: Vec<usize> = ks.iter().flat_map(|&k| near[k]).collect();
        active.sort_unstable();
        active.dedup();
        let ps: Vec<Plane> = active.iter().map(|&i| planes[i]).collect();
        let d = triangle_gap(t.map(xy), ks.map(|k| upper_min[k]), &ps);
        for v in t {
            let s = &mut lift[idx(v[0], v[1])];
            *s = s.max(d);
        }
    }

    let mut lo_vals = alloc::vec![0.0f64; size];
    let mut hi_vals = alloc::vec![0.0f64; size];
    for (k, v) in nodes.iter().enumerate() {
        let l = lower[k].0;
        let u = upper_min[k] + lift[idx(v[0], v[1])] + 1e-12 * (1.0 + upper_min[k].abs());
        if l > u + 1e-9 {
            return Err(Error::Numerical("lower and upper dual bounds cross".into()));
        }
        lo_vals[idx(v[0], v[1])] = l.min(u);
        hi_vals[idx(v[0], v[1])] = u;
    }
    let grid = GridConcave::from_fn(&np, opts.resolution, |x| {
        let (i, j) = ((x[0] * rf).round() as i64, (x[1] * rf).round() as i64);
        let k = idx(i, j);
        Ok((lo_vals[k], hi_vals[k]))
    })?;
    Ok(Sandwich { grid, evaluations: smp.evaluations, rounds })
}
