//! Sampled concave functions of two variables.
//!
//! A [`GridConcave`] stores two values at every node of `(1/r)ℤ²` inside a
//! lattice polygon: a lower sample and an upper sample. The function it
//! stands for lies between the upper concave hulls of the two sample sets.
//! Sup-convolution of such hulls is again the hull of the max-plus
//! convolution of the samples, so `⊞` stays inside the grid without loss, and
//! the mixed integral is bracketed by evaluating it on both sample sets
//! (the mixed integral is monotone in every argument).

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::Estimate;
use super::hull3::hull_volume;
use super::pa::PaConcave;
use crate::lattice::{LatticePolytope, minkowski_sum, normalized_volume};
use crate::num::{Q, q, to_f64};
use crate::{Error, Result};

/// Concave function on a lattice polygon, sampled on `(1/r)ℤ²` with a lower
/// and an upper value per node.
#[derive(Clone, Debug)]
pub struct GridConcave {
    domain: LatticePolytope,
    r: u32,
    /// Index of the box corner: node `(i, j)` sits at `(i/r, j/r)`.
    origin: [i64; 2],
    size: [usize; 2],
    lower: Vec<f64>,
    upper: Vec<f64>,
}

/// Integer form of the domain constraints, scaled to node indices.
struct IndexConstraints {
    equations: Vec<([i64; 2], i64)>,
    inequalities: Vec<([i64; 2], i64)>,
}

impl IndexConstraints {
    fn new(p: &LatticePolytope, r: u32) -> Self {
        let conv = |v: &[(Vec<Q>, Q)]| -> Vec<([i64; 2], i64)> {
            v.iter()
                .map(|(a, b)| {
                    // Clear denominators so the test is integral.
                    let den = a.iter().chain(core::iter::once(b)).fold(num_bigint::BigInt::from(1), |acc, x| {
                        acc.lcm(x.denom())
                    });
                    let d = Q::from_integer(den);
                    let ai = |x: &Q| (x * &d).to_integer().to_i64().expect("small constraint");
                    ([ai(&a[0]), ai(&a[1])], ai(b) * r as i64)
                })
                .collect()
        };
        let hs = p.halfspaces();
        IndexConstraints { equations: conv(&hs.equations), inequalities: conv(&hs.inequalities) }
    }

    fn contains(&self, i: i64, j: i64) -> bool {
        self.equations.iter().all(|(a, b)| a[0] * i + a[1] * j == *b)
            && self.inequalities.iter().all(|(a, b)| a[0] * i + a[1] * j >= *b)
    }
}

impl GridConcave {
    /// Samples `sample(x) = (lower, upper)` at every node of the domain.
    pub fn from_fn<F>(domain: &LatticePolytope, r: u32, mut sample: F) -> Result<Self>
    where
        F: FnMut([f64; 2]) -> Result<(f64, f64)>,
    {
        if domain.ambient_dim() != 2 {
            return Err(Error::Unsupported("grid functions are implemented in dimension 2".into()));
        }
        if r == 0 {
            return Err(Error::Invalid("grid resolution must be positive".into()));
        }
        let mut g = Self::empty(domain, r);
        let cons = IndexConstraints::new(domain, r);
        for a in 0..g.size[0] {
            for b in 0..g.size[1] {
                let (i, j) = (g.origin[0] + a as i64, g.origin[1] + b as i64);
                if cons.contains(i, j) {
                    let (lo, hi) = sample([i as f64 / r as f64, j as f64 / r as f64])?;
                    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                        return Err(Error::Numerical("grid sample not finite or inverted".into()));
                    }
                    let k = a * g.size[1] + b;
                    g.lower[k] = lo;
                    g.upper[k] = hi;
                }
            }
        }
        Ok(g)
    }

    fn empty(domain: &LatticePolytope, r: u32) -> Self {
        let vs = domain.vertices();
        let rr = r as i64;
        let lo = [vs.iter().map(|v| v[0]).min().unwrap() * rr, vs.iter().map(|v| v[1]).min().unwrap() * rr];
        let hi = [vs.iter().map(|v| v[0]).max().unwrap() * rr, vs.iter().map(|v| v[1]).max().unwrap() * rr];
        let size = [(hi[0] - lo[0] + 1) as usize, (hi[1] - lo[1] + 1) as usize];
        GridConcave {
            domain: domain.clone(),
            r,
            origin: lo,
            size,
            lower: alloc::vec![f64::NEG_INFINITY; size[0] * size[1]],
            upper: alloc::vec![f64::NEG_INFINITY; size[0] * size[1]],
        }
    }

    /// Samples an exact PA function. Lower samples are exact values (to
    /// rounding); upper samples add `2·D·L/r`, where `L` is the slope bound
    /// and `D` the longest primitive edge in sup-norm, unless every lifted
    /// point is a node, in which case the hull of the samples is the function.
    pub fn from_pa(f: &PaConcave, r: u32) -> Result<Self> {
        let domain = f.domain().ok_or(Error::Unsupported("grid sampling needs a lattice polytope domain".into()))?;
        let rq = q(r as i64);
        let on_grid = f
            .lifted_points()
            .expect("lattice domain implies lifted form")
            .iter()
            .all(|p| p.point.iter().all(|x| (x * &rq).is_integer()));
        let slack = if on_grid {
            0.0
        } else {
            let d = if domain.affine_dim() == 2 {
                domain.edge_vectors_2d().iter().map(|(e, _)| e[0].abs().max(e[1].abs())).max().unwrap_or(1)
            } else {
                1
            };
            2.0 * d as f64 * to_f64(&f.lipschitz_l1()) / r as f64
        };
        let up = f.upper()?;
        Self::from_fn(&domain, r, |x| {
            let xq = [Q::from_float(x[0]).unwrap(), Q::from_float(x[1]).unwrap()];
            let v = up.pieces.iter().map(|a| a.eval(&xq)).min().expect("pieces");
            let v = to_f64(&v);
            Ok((v, v + slack))
        })
    }

    pub fn domain(&self) -> &LatticePolytope {
        &self.domain
    }

    pub fn resolution(&self) -> u32 {
        self.r
    }

    /// Number of nodes inside the domain.
    pub fn node_count(&self) -> usize {
        self.lower.iter().filter(|v| v.is_finite()).count()
    }

    /// `(lower, upper)` samples at the node `(i/r, j/r)`, if it is in the domain.
    pub fn node(&self, i: i64, j: i64) -> Option<(f64, f64)> {
        let a = i - self.origin[0];
        let b = j - self.origin[1];
        if a < 0 || b < 0 || a as usize >= self.size[0] || b as usize >= self.size[1] {
            return None;
        }
        let k = a as usize * self.size[1] + b as usize;
        self.lower[k].is_finite().then(|| (self.lower[k], self.upper[k]))
    }

    /// `(lower, upper)` at the node equal to the rational point `x`.
    pub fn value_at(&self, x: &[Q]) -> Option<(f64, f64)> {
        let rq = q(self.r as i64);
        let i = (&x[0] * &rq).to_integer().to_i64()?;
        let j = (&x[1] * &rq).to_integer().to_i64()?;
        if !(&x[0] * &rq).is_integer() || !(&x[1] * &rq).is_integer() {
            return None;
        }
        self.node(i, j)
    }

    /// Iterator over `((i, j), lower, upper)` for nodes in the domain.
    pub fn nodes(&self) -> impl Iterator<Item = ([i64; 2], f64, f64)> + '_ {
        (0..self.lower.len()).filter(|&k| self.lower[k].is_finite()).map(move |k| {
            let (a, b) = (k / self.size[1], k % self.size[1]);
            ([self.origin[0] + a as i64, self.origin[1] + b as i64], self.lower[k], self.upper[k])
        })
    }

    /// Largest gap between upper and lower samples.
    pub fn max_gap(&self) -> f64 {
        self.nodes().map(|(_, lo, hi)| hi - lo).fold(0.0, f64::max)
    }

    pub fn add_constant(&self, c: f64) -> Self {
        let mut g = self.clone();
        for v in g.lower.iter_mut().chain(g.upper.iter_mut()) {
            *v += c;
        }
        g
    }

    /// Max-plus convolution of the samples: the grid form of `⊞`.
    pub fn sup_convolution(&self, other: &GridConcave) -> Result<GridConcave> {
        if self.r != other.r {
            return Err(Error::Invalid("grid resolutions differ".into()));
        }
        let domain = minkowski_sum(&self.domain, &other.domain)?;
        let mut out = Self::empty(&domain, self.r);
        let a: Vec<_> = self.nodes().collect();
        let b: Vec<_> = other.nodes().collect();
        let (oi, oj, h) = (out.origin[0], out.origin[1], out.size[1]);
        for (p, plo, phi) in &a {
            for (s, slo, shi) in &b {
                let k = (p[0] + s[0] - oi) as usize * h + (p[1] + s[1] - oj) as usize;
                let lo = plo + slo;
                let hi = phi + shi;
                if lo > out.lower[k] {
                    out.lower[k] = lo;
                }
                if hi > out.upper[k] {
                    out.upper[k] = hi;
                }
            }
        }
        Ok(out)
    }

    fn hull_integral(&self, upper: bool) -> f64 {
        if self.domain.affine_dim() < 2 {
            return 0.0;
        }
        let vals = if upper { &self.upper } else { &self.lower };
        let base = vals.iter().copied().filter(|v| v.is_finite()).fold(f64::INFINITY, f64::min) - 1.0;
        let mut pts: Vec<[f64; 3]> = Vec::with_capacity(self.node_count() + self.domain.vertices().len());
        for (k, &v) in vals.iter().enumerate() {
            if v.is_finite() {
                let (a, b) = (k / self.size[1], k % self.size[1]);
                pts.push([(self.origin[0] + a as i64) as f64, (self.origin[1] + b as i64) as f64, v]);
            }
        }
        let r = self.r as f64;
        for v in self.domain.vertices() {
            pts.push([v[0] as f64 * r, v[1] as f64 * r, base]);
        }
        hull_volume(&pts) / (r * r) + base * to_f64(&normalized_volume(&self.domain))
    }

    /// Integral of the lower hull and of the upper hull.
    pub fn integral_bounds(&self) -> (f64, f64) {
        (self.hull_integral(false), self.hull_integral(true))
    }

    /// Integral with the bracket width as error.
    pub fn integrate(&self) -> Estimate {
        let (lo, hi) = self.integral_bounds();
        Estimate::from_bounds(lo, hi)
    }

    /// Lower (or upper) samples as a grid with no gap.
    pub fn side(&self, upper: bool) -> GridConcave {
        let mut g = self.clone();
        if upper {
            g.lower = g.upper.clone();
        } else {
            g.upper = g.lower.clone();
        }
        g
    }

    /// True when lower and upper samples coincide.
    pub fn is_sharp(&self) -> bool {
        self.lower == self.upper
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_on_square_and_sums() {
        let sq = LatticePolytope::cube(2, 1);
        let g = GridConcave::from_pa(&PaConcave::zero_on(&sq), 8).unwrap();
        assert_eq!(g.node_count(), 81);
        let e = g.integrate();
        assert!(e.value.abs() < 1e-12 && e.error < 1e-12);
        let s = g.sup_convolution(&g).unwrap();
        assert_eq!(s.node_count(), 17 * 17);
        assert!(s.integrate().value.abs() < 1e-12);
    }

    #[test]
    fn constant_on_triangle() {
        let t = LatticePolytope::unit_simplex(2);
        let g = GridConcave::from_pa(&PaConcave::constant_on(&t, q(3)), 16).unwrap();
        assert!((g.integrate().value - 1.5).abs() < 1e-12);
    }
}
