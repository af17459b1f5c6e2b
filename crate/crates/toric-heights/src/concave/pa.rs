//! Piecewise-affine concave functions with exact rational data.
//!
//! Two representations are kept, and they are exchanged by Legendre duality:
//!
//! - *lifted*: the upper concave hull of finitely many points `(m_i, c_i)`
//!   over the polytope `conv{m_i}` (value `−∞` outside);
//! - *min-affine*: `u ↦ min_i (⟨m_i, u⟩ − c_i)` on all of ℝⁿ.
//!
//! Both are stored canonically (only hull-contributing data, sorted), so
//! equality of values is equality of functions.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::hull::Hull;
use crate::lattice::LatticePolytope;
use crate::linalg;
use crate::num::{Q, dot, from_f64, lex_cmp, q, to_f64};
use crate::{Error, Result};

/// `x ↦ ⟨slope, x⟩ + intercept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePiece {
    pub slope: Vec<Q>,
    pub intercept: Q,
}

impl AffinePiece {
    pub fn new(slope: Vec<Q>, intercept: Q) -> Self {
        AffinePiece { slope, intercept }
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        dot(&self.slope, x) + &self.intercept
    }
}

/// A point of the graph: value `value` at position `point`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedPoint {
    pub point: Vec<Q>,
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Lifted(Vec<LiftedPoint>),
    MinAffine(Vec<AffinePiece>),
}

/// Piecewise-affine concave function, either on a polytope (lifted form) or
/// on all of ℝⁿ (min-affine form).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaConcave {
    dim: usize,
    repr: Repr,
    /// False when some datum was converted from a float.
    exact: bool,
}

/// Upper-hull structure of a lifted function.
pub(crate) struct Upper {
    pub domain: Hull,
    /// Affine pieces of the graph, in ambient coordinates.
    pub pieces: Vec<AffinePiece>,
    /// Value below every lifted value, used to close the hypograph.
    pub base: Q,
    /// Hull of the lifted points and the base points (projected coordinates).
    pub graph: Hull,
}

fn check_dims(dim: usize, v: &[Q]) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
    }
    Ok(())
}

/// Keeps the lifted points that are vertices of the upper hull, sorted by
/// position.
fn canonical_lifted(mut pts: Vec<LiftedPoint>) -> Vec<LiftedPoint> {
    pts.sort_by(|a, b| lex_cmp(&a.point, &b.point).then_with(|| b.value.cmp(&a.value)));
    pts.dedup_by(|a, b| a.point == b.point);
    if pts.len() <= 1 {
        return pts;
    }
    let up = upper_of(&pts);
    let keep: Vec<Vec<Q>> = up.graph.vertex_points();
    pts.into_iter()
        .filter(|lp| {
            let mut y = up.domain.project(&lp.point);
            y.push(lp.value.clone());
            keep.binary_search_by(|k| lex_cmp(k, &y)).is_ok()
        })
        .collect()
}

fn upper_of(pts: &[LiftedPoint]) -> Upper {
    let domain = Hull::new(pts.iter().map(|p| p.point.clone()).collect());
    let base = pts.iter().map(|p| &p.value).min().expect("nonempty").clone() - Q::one();
    let mut aug: Vec<Vec<Q>> = pts
        .iter()
        .map(|p| {
            let mut y = domain.project(&p.point);
            y.push(p.value.clone());
            y
        })
        .collect();
    for v in domain.vertex_points() {
        let mut y = domain.project(&v);
        y.push(base.clone());
        aug.push(y);
    }
    let graph = Hull::new(aug);
    let k = domain.dim;
    let mut pieces = Vec::new();
    if k == 0 {
        let v = pts.iter().map(|p| &p.value).max().unwrap().clone();
        pieces.push(AffinePiece::new(alloc::vec![Q::zero(); domain.ambient], v));
    } else {
        for (n, off) in graph.facet_planes() {
            // Inward normal with negative last entry: an upper facet
            // `n_x·y + n_t·t ≥ off` ⇔ `t ≤ (off − n_x·y)/n_t`.
            let nt = n[k].clone();
            if !nt.is_negative() {
                continue;
            }
            let mut slope = alloc::vec![Q::zero(); domain.ambient];
            for (j, &c) in domain.pivots.iter().enumerate() {
                slope[c] = -n[j].clone() / &nt;
            }
            pieces.push(AffinePiece::new(slope, off / &nt));
        }
    }
    Upper { domain, pieces, base, graph }
}

impl PaConcave {
    /// Upper concave hull of `(point, value)` pairs over their convex hull.
    pub fn lifted(dim: usize, pts: Vec<(Vec<Q>, Q)>) -> Result<Self> {
        if pts.is_empty() {
            return Err(Error::Empty("lifted function needs at least one point"));
        }
        for (p, _) in &pts {
            check_dims(dim, p)?;
        }
        let pts = pts.into_iter().map(|(point, value)| LiftedPoint { point, value }).collect();
        Ok(PaConcave { dim, repr: Repr::Lifted(canonical_lifted(pts)), exact: true })
    }

    /// Lifted form from integer positions and float values (converted
    /// exactly; the result is flagged inexact).
    pub fn lifted_f64(dim: usize, pts: &[(Vec<i64>, f64)]) -> Result<Self> {
        let v = pts.iter().map(|(p, c)| (p.iter().map(|&x| q(x)).collect(), from_f64(*c))).collect();
        Ok(Self::lifted(dim, v)?.with_exact(false))
    }

    /// `u ↦ min_i piece_i(u)` on all of ℝⁿ.
    pub fn min_affine(dim: usize, pieces: Vec<AffinePiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Empty("min-affine function needs at least one piece"));
        }
        for p in &pieces {
            check_dims(dim, &p.slope)?;
        }
        let dual: Vec<LiftedPoint> =
            pieces.into_iter().map(|p| LiftedPoint { point: p.slope, value: -p.intercept }).collect();
        let canon = canonical_lifted(dual);
        Ok(PaConcave { dim, repr: Repr::MinAffine(Self::pieces_from_dual(canon)), exact: true })
    }

    fn pieces_from_dual(pts: Vec<LiftedPoint>) -> Vec<AffinePiece> {
        pts.into_iter().map(|lp| AffinePiece::new(lp.point, -lp.value)).collect()
    }

    /// Restriction of `min_i piece_i` to a polytope, converted to lifted form
    /// by enumerating the vertices of the induced cell complex.
    pub fn min_affine_on(domain: &LatticePolytope, pieces: &[AffinePiece]) -> Result<Self> {
        let n = domain.ambient_dim();
        if pieces.is_empty() {
            return Err(Error::Empty("min-affine function needs at least one piece"));
        }
        for p in pieces {
            check_dims(n, &p.slope)?;
        }
        let hs = domain.halfspaces();
        let mut planes: Vec<(Vec<Q>, Q)> = hs.equations.clone();
        planes.extend(hs.inequalities.iter().cloned());
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                let a: Vec<Q> = pieces[i].slope.iter().zip(&pieces[j].slope).map(|(x, y)| x - y).collect();
                if a.iter().all(|x| x.is_zero()) {
                    continue;
                }
                planes.push((a, &pieces[j].intercept - &pieces[i].intercept));
            }
        }
        let eval = |x: &[Q]| pieces.iter().map(|p| p.eval(x)).min().unwrap();
        let mut pts: Vec<(Vec<Q>, Q)> = domain
            .rational_vertices()
            .into_iter()
            .map(|v| {
                let c = eval(&v);
                (v, c)
            })
            .collect();
        let mut choice: Vec<usize> = (0..n).collect();
        if planes.len() >= n {
            loop {
                let a: Vec<Vec<Q>> = choice.iter().map(|&i| planes[i].0.clone()).collect();
                let b: Vec<Q> = choice.iter().map(|&i| planes[i].1.clone()).collect();
                if let Some(x) = linalg::solve(&a, &b) {
                    if domain.contains(&x) {
                        let c = eval(&x);
                        pts.push((x, c));
                    }
                }
                if !next_combination(&mut choice, planes.len()) {
                    break;
                }
            }
        }
        Self::lifted(n, pts)
    }

    /// `0` on the polytope `p`.
    pub fn zero_on(p: &LatticePolytope) -> Self {
        Self::constant_on(p, Q::zero())
    }

    pub fn constant_on(p: &LatticePolytope, c: Q) -> Self {
        let pts = p.rational_vertices().into_iter().map(|v| (v, c.clone())).collect();
        Self::lifted(p.ambient_dim(), pts).expect("nonempty polytope")
    }

    /// `ι_{{m}} + c`: value `c` at `m`, `−∞` elsewhere.
    pub fn indicator(m: &[i64], c: Q) -> Self {
        Self::lifted(m.len(), alloc::vec![(m.iter().map(|&x| q(x)).collect(), c)]).expect("one point")
    }

    pub fn with_exact(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_lifted(&self) -> bool {
        matches!(self.repr, Repr::Lifted(_))
    }

    /// Lifted points of a function on a polytope (`None` for min-affine form).
    pub fn lifted_points(&self) -> Option<&[LiftedPoint]> {
        match &self.repr {
            Repr::Lifted(v) => Some(v),
            Repr::MinAffine(_) => None,
        }
    }

    /// Defining pieces of a min-affine function (`None` for lifted form).
    pub fn min_pieces(&self) -> Option<&[AffinePiece]> {
        match &self.repr {
            Repr::Lifted(_) => None,
            Repr::MinAffine(v) => Some(v),
        }
    }

    pub(crate) fn upper(&self) -> Result<Upper> {
        match &self.repr {
            Repr::Lifted(v) => Ok(upper_of(v)),
            Repr::MinAffine(_) => Err(Error::Unbounded),
        }
    }

    /// Affine pieces of the graph over the domain (lifted form), or the
    /// defining pieces (min-affine form).
    pub fn pieces(&self) -> Vec<AffinePiece> {
        match &self.repr {
            Repr::Lifted(v) => upper_of(v).pieces,
            Repr::MinAffine(p) => p.clone(),
        }
    }

    /// Vertices of the domain, or `None` when the domain is all of ℝⁿ.
    pub fn domain_vertices(&self) -> Option<Vec<Vec<Q>>> {
        match &self.repr {
            Repr::Lifted(v) => {
                Some(Hull::new(v.iter().map(|p| p.point.clone()).collect()).vertex_points())
            }
            Repr::MinAffine(_) => None,
        }
    }

    /// The domain as a lattice polytope, if its vertices are integral.
    pub fn domain(&self) -> Option<LatticePolytope> {
        let vs = self.domain_vertices()?;
        let mut ints = Vec::with_capacity(vs.len());
        for v in vs {
            if !v.iter().all(|x| x.is_integer()) {
                return None;
            }
            ints.push(v.iter().map(|x| i64::try_from(x.to_integer()).ok()).collect::<Option<Vec<i64>>>()?);
        }
        LatticePolytope::from_points(self.dim, &ints).ok()
    }

    /// Value at `x`; `None` stands for `−∞` (outside the domain).
    pub fn evaluate(&self, x: &[Q]) -> Result<Option<Q>> {
        check_dims(self.dim, x)?;
        match &self.repr {
            Repr::MinAffine(p) => Ok(p.iter().map(|a| a.eval(x)).min()),
            Repr::Lifted(v) => {
                let up = upper_of(v);
                if !up.domain.contains(x) {
                    return Ok(None);
                }
                Ok(up.pieces.iter().map(|a| a.eval(x)).min())
            }
        }
    }

    pub fn evaluate_f64(&self, x: &[Q]) -> Result<f64> {
        Ok(self.evaluate(x)?.map_or(f64::NEG_INFINITY, |v| to_f64(&v)))
    }

    /// `f^∨(x) = inf_u (⟨u, x⟩ − f(u))`.
    pub fn legendre_dual(&self) -> PaConcave {
        let repr = match &self.repr {
            Repr::Lifted(v) => Repr::MinAffine(Self::pieces_from_dual(v.clone())),
            Repr::MinAffine(p) => Repr::Lifted(
                p.iter().map(|a| LiftedPoint { point: a.slope.clone(), value: -a.intercept.clone() }).collect(),
            ),
        };
        PaConcave { dim: self.dim, repr, exact: self.exact }
    }

    /// `(f ⊞ g)(x) = sup_{x₁+x₂=x} f(x₁) + g(x₂)` for functions on polytopes.
    pub fn sup_convolution(&self, other: &PaConcave) -> Result<PaConcave> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let (Repr::Lifted(a), Repr::Lifted(b)) = (&self.repr, &other.repr) else {
            return Err(Error::Unbounded);
        };
        let mut pts = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                pts.push(LiftedPoint {
                    point: x.point.iter().zip(&y.point).map(|(s, t)| s + t).collect(),
                    value: &x.value + &y.value,
                });
            }
        }
        Ok(PaConcave { dim: self.dim, repr: Repr::Lifted(canonical_lifted(pts)), exact: self.exact && other.exact })
    }

    /// Pointwise sum of two functions on all of ℝⁿ (dual to `⊞`).
    pub fn add(&self, other: &PaConcave) -> Result<PaConcave> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let (Repr::MinAffine(a), Repr::MinAffine(b)) = (&self.repr, &other.repr) else {
            return Err(Error::Unsupported("pointwise sums are implemented for min-affine functions".into()));
        };
        let mut pieces = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                pieces.push(AffinePiece::new(
                    x.slope.iter().zip(&y.slope).map(|(s, t)| s + t).collect(),
                    &x.intercept + &y.intercept,
                ));
            }
        }
        Ok(PaConcave::min_affine(self.dim, pieces)?.with_exact(self.exact && other.exact))
    }

    pub fn add_constant(&self, c: &Q) -> PaConcave {
        let repr = match &self.repr {
            Repr::Lifted(v) => Repr::Lifted(
                v.iter().map(|p| LiftedPoint { point: p.point.clone(), value: &p.value + c }).collect(),
            ),
            Repr::MinAffine(p) => {
                Repr::MinAffine(p.iter().map(|a| AffinePiece::new(a.slope.clone(), &a.intercept + c)).collect())
            }
        };
        PaConcave { dim: self.dim, repr, exact: self.exact }
    }

    /// Multiplies all values by `λ > 0`.
    pub fn scale_values(&self, lambda: &Q) -> Result<PaConcave> {
        if !lambda.is_positive() {
            return Err(Error::Invalid("value scaling must be positive".into()));
        }
        Ok(match &self.repr {
            Repr::Lifted(v) => PaConcave {
                dim: self.dim,
                repr: Repr::Lifted(
                    v.iter().map(|p| LiftedPoint { point: p.point.clone(), value: &p.value * lambda }).collect(),
                ),
                exact: self.exact,
            },
            Repr::MinAffine(p) => PaConcave::min_affine(
                self.dim,
                p.iter()
                    .map(|a| AffinePiece::new(a.slope.iter().map(|s| s * lambda).collect(), &a.intercept * lambda))
                    .collect(),
            )?
            .with_exact(self.exact),
        })
    }

    /// Integral over the domain (zero when the domain is lower-dimensional).
    pub fn integrate(&self) -> Result<Q> {
        let Repr::Lifted(v) = &self.repr else {
            return Err(Error::Unbounded);
        };
        if v.len() <= self.dim {
            return Ok(Q::zero());
        }
        let up = upper_of(v);
        if up.domain.dim < self.dim {
            return Ok(Q::zero());
        }
        Ok(up.graph.volume() + up.base * up.domain.volume())
    }

    /// Largest ℓ¹ norm of a slope of the graph; a Lipschitz constant for the
    /// sup-norm on displacements.
    pub fn lipschitz_l1(&self) -> Q {
        self.pieces()
            .iter()
            .map(|p| p.slope.iter().fold(Q::zero(), |acc, s| acc + s.abs()))
            .max()
            .unwrap_or_else(Q::zero)
    }
}

/// Advances `c` to the next `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
