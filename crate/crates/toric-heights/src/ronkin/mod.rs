//! Ronkin functions `ρ_{f,v}` and their Legendre duals.
//!
//! At a prime `p`, `ρ_{f,p}(u) = min_m (⟨m,u⟩ − log|α_m|_p)` and the dual is the
//! upper hull of `(m, log|α_m|_p)`. Both scale with `log p`, so they are kept
//! as exact functions in units of `log p`: the stored `ρ̃` satisfies
//! `ρ(u) = log p · ρ̃(u / log p)`, and `ρ^∨ = log p · ρ̃^∨`.
//!
//! At the Archimedean place the coefficients are embedded by
//! `ζ_N ↦ e^{2πi/N}`; see [`arch`] and [`dual`] for the evaluators.

pub mod arch;
pub mod dual;

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

pub use arch::{Fibered, RonkinSample, Univariate, ronkin_arch, ronkin_arch_fibered};
pub use dual::{Sandwich, SandwichOptions, sandwich_dual};

use crate::concave::{AffinePiece, ConcaveFn, PaConcave};
use crate::cyclotomic::LaurentPoly;
use crate::lattice::LatticePolytope;
use crate::num::{Q, is_prime_u64, ord_p, q};
use crate::{Error, Result};

/// A place of ℚ. Every weight `n_v` is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Archimedean,
    Prime(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime_u64(p) { Ok(Place::Prime(p)) } else { Err(Error::BadPlace(p)) }
    }

    pub fn weight(&self) -> Q {
        q(1)
    }

    /// `log p` at a prime, 1 at infinity.
    pub fn log_unit(&self) -> f64 {
        match self {
            Place::Archimedean => 1.0,
            Place::Prime(p) => (*p as f64).ln(),
        }
    }
}

/// How a dual was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualMethod {
    /// Exact tropical hull (finite places, monomials).
    Exact,
    /// From the roots of a univariate restriction.
    Roots,
    /// Two-sided grid from fibered evaluations.
    Sandwich,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Provenance {
    pub method: DualMethod,
    /// Evaluation budget requested (0 when not applicable).
    pub budget: u64,
    pub resolution: u32,
    /// Ronkin evaluations actually used.
    pub evaluations: usize,
    /// Bound on the pointwise error of the stored values (in natural
    /// units); for grids, the largest gap between the two sides.
    pub error: f64,
}

impl Provenance {
    fn exact() -> Self {
        Provenance { method: DualMethod::Exact, budget: 0, resolution: 0, evaluations: 0, error: 0.0 }
    }
}

/// `ρ_{f,v}^∨` on `NP(f)`: the function stored in `function` times `unit`.
#[derive(Clone, Debug)]
pub struct RonkinDual {
    pub place: Place,
    pub function: ConcaveFn,
    pub unit: f64,
    pub provenance: Provenance,
}

impl RonkinDual {
    pub fn domain(&self) -> Option<LatticePolytope> {
        self.function.domain()
    }
}

fn rational_terms(f: &LaurentPoly) -> Result<Vec<(Vec<i64>, Q)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    f.rational_terms().ok_or(Error::NonRationalCoefficient)
}

/// `ρ̃_{f,p}(w) = min_m (⟨m,w⟩ + ord_p α_m)`, i.e. `ρ_{f,p}` in units of
/// `log p`.
pub fn ronkin_nonarch(f: &LaurentPoly, p: u64) -> Result<PaConcave> {
    Place::prime(p)?;
    let terms = rational_terms(f)?;
    let pieces = terms
        .iter()
        .map(|(m, c)| AffinePiece::new(m.iter().map(|&x| q(x)).collect(), q(ord_p(c, p))))
        .collect();
    PaConcave::min_affine(f.dim(), pieces)
}

/// `ρ_{f,p}(u)` in natural units.
pub fn ronkin_nonarch_value(f: &LaurentPoly, p: u64, u: &[f64]) -> Result<f64> {
    Place::prime(p)?;
    if u.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: u.len() });
    }
    let lp = (p as f64).ln();
    let terms = rational_terms(f)?;
    Ok(terms
        .iter()
        .map(|(m, c)| m.iter().zip(u).map(|(&a, &b)| a as f64 * b).sum::<f64>() + ord_p(c, p) as f64 * lp)
        .fold(f64::INFINITY, f64::min))
}

/// Upper hull of `(m, −ord_p α_m)`, in units of `log p`.
pub fn ronkin_dual_nonarch(f: &LaurentPoly, p: u64) -> Result<RonkinDual> {
    let place = Place::prime(p)?;
    let terms = rational_terms(f)?;
    let pts = terms.iter().map(|(m, c)| (m.iter().map(|&x| q(x)).collect(), q(-ord_p(c, p)))).collect();
    Ok(RonkinDual {
        place,
        function: PaConcave::lifted(f.dim(), pts)?.into(),
        unit: place.log_unit(),
        provenance: Provenance::exact(),
    })
}

/// `ρ_{f,∞}^∨` on `NP(f)`. Monomials and polynomials with a segment as
/// Newton polytope are handled exactly (up to root isolation); bivariate
/// polynomials with a full Newton polygon go through [`sandwich_dual`] with
/// at most `budget` Ronkin evaluations.
pub fn ronkin_dual_arch(f: &LaurentPoly, resolution: u32, budget: u64) -> Result<RonkinDual> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let np = f.newton_polytope()?;
    let n = f.dim();
    let terms = f.embedded_terms(1);
    let done = |function: ConcaveFn, provenance| RonkinDual { place: Place::Archimedean, function, unit: 1.0, provenance };
    match np.affine_dim() {
        0 => {
            let (m, c) = &terms[0];
            let pa = PaConcave::lifted_f64(n, &[(m.clone(), c.norm().ln())])?;
            Ok(done(pa.into(), Provenance::exact()))
        }
        1 => {
            // f = Σ_j c_j χ^{a + j·v} along the primitive direction v.
            let vs = np.vertices();
            let d: Vec<i64> = vs[1].iter().zip(&vs[0]).map(|(x, y)| x - y).collect();
            let g = d.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
            let v: Vec<i64> = d.iter().map(|x| x / g).collect();
            let a = &vs[0];
            let mut c = alloc::vec![num_complex::Complex64::new(0.0, 0.0); g as usize + 1];
            for (m, z) in &terms {
                let j = m.iter().zip(a).zip(&v).find(|(_, vi)| **vi != 0).map(|((x, y), vi)| (x - y) / vi).unwrap();
                c[j as usize] = *z;
            }
            let uni = Univariate::from_coeffs(0, &c);
            let pts: Vec<(Vec<i64>, f64)> = uni
                .dual_values()
                .into_iter()
                .enumerate()
                .map(|(j, val)| (a.iter().zip(&v).map(|(x, y)| x + j as i64 * y).collect(), val))
                .collect();
            let pa = PaConcave::lifted_f64(n, &pts)?;
            let prov = Provenance { method: DualMethod::Roots, budget: 0, resolution: 0, evaluations: 0, error: uni.error };
            Ok(done(pa.into(), prov))
        }
        2 if n == 2 => {
            let s = sandwich_dual(f, &SandwichOptions::new(resolution, budget as usize))?;
            let prov = Provenance {
                method: DualMethod::Sandwich,
                budget,
                resolution,
                evaluations: s.evaluations,
                error: s.grid.max_gap(),
            };
            Ok(done(s.grid.into(), prov))
        }
        _ => Err(Error::Unsupported("Archimedean duals are implemented for Newton polytopes of dimension ≤ 2".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{qf, to_f64};

    #[test]
    fn nonarch_examples() {
        let f = LaurentPoly::from_rational(1, &[(alloc::vec![0], q(1)), (alloc::vec![1], qf(1, 2))]).unwrap();
        let r = ronkin_nonarch(&f, 2).unwrap();
        // min(0, w − 1) in units of log 2.
        assert_eq!(r.evaluate(&[q(3)]).unwrap(), Some(q(0)));
        assert_eq!(r.evaluate(&[q(0)]).unwrap(), Some(q(-1)));
        let v = ronkin_nonarch_value(&f, 2, &[0.0]).unwrap();
        assert!((v + 2f64.ln()).abs() < 1e-15);
        assert!(matches!(ronkin_nonarch(&f, 4), Err(Error::BadPlace(4))));
    }

    #[test]
    fn nonarch_dual_hull() {
        // 1 + x + 3x² at p = 3: hull of (0,0), (1,0), (2,−1).
        let f = LaurentPoly::from_ints(&[(&[0], 1), (&[1], 1), (&[2], 3)]).unwrap();
        let d = ronkin_dual_nonarch(&f, 3).unwrap();
        let pa = d.function.as_pa().unwrap();
        assert_eq!(pa.evaluate(&[q(2)]).unwrap(), Some(q(-1)));
        assert_eq!(pa.evaluate(&[q(1)]).unwrap(), Some(q(0)));
        assert!((d.unit - 3f64.ln()).abs() < 1e-15);
        // Good place: the zero function.
        let g = LaurentPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        let d = ronkin_dual_nonarch(&g, 5).unwrap();
        assert_eq!(d.function.as_pa().unwrap().integrate().unwrap(), q(0));
    }

    #[test]
    fn arch_dual_small_cases() {
        let f = LaurentPoly::from_ints(&[(&[2, 1], -7)]).unwrap();
        let d = ronkin_dual_arch(&f, 8, 100).unwrap();
        let pa = d.function.as_pa().unwrap();
        assert!((pa.evaluate_f64(&[q(2), q(1)]).unwrap() - 7f64.ln()).abs() < 1e-12);
        // x − 2 in two variables: dual on [0, 1] × {0} with values log 2, 0.
        let g = LaurentPoly::from_ints(&[(&[0, 0], -2), (&[1, 0], 1)]).unwrap();
        let d = ronkin_dual_arch(&g, 8, 100).unwrap();
        let pa = d.function.as_pa().unwrap();
        assert!((pa.evaluate_f64(&[q(0), q(0)]).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!(pa.evaluate_f64(&[q(1), q(0)]).unwrap().abs() < 1e-12);
        assert!(to_f64(&pa.integrate().unwrap()).abs() < 1e-15);
    }
}
