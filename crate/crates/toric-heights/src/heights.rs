//! Adelic height predictions: sums over places of mixed integrals of roof
//! functions and Ronkin duals.
//!
//! Per place, a slot is a concave function together with a unit: the
//! function stands for `unit × function`. Exact slots at a prime carry the
//! unit `log p`. The mixed integral is jointly 1-homogeneous in the values,
//! so when every nonzero slot shares a unit the integral is computed exactly
//! and multiplied by that unit once.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::concave::{ConcaveFn, Estimate, PaConcave, mixed_integral, mixed_integral_exact, perturbation_constant};
use crate::cyclotomic::LaurentPoly;
use crate::lattice::{LatticePolytope, mixed_volume};
use crate::num::{Q, from_f64, to_f64};
use crate::ronkin::{DualMethod, Place, RonkinDual, ronkin_dual_arch, ronkin_dual_nonarch};
use crate::{Error, Result};

/// A concave function at one place, standing for `unit × function`, with a
/// pointwise error bound in natural units.
#[derive(Clone, Debug)]
pub struct PlaceFunction {
    pub function: ConcaveFn,
    pub unit: f64,
    pub error: f64,
}

impl PlaceFunction {
    pub fn natural(function: ConcaveFn) -> Self {
        PlaceFunction { function, unit: 1.0, error: 0.0 }
    }

    fn is_zero(&self) -> bool {
        match &self.function {
            ConcaveFn::Pa(p) => p.lifted_points().is_some_and(|v| v.iter().all(|lp| lp.value.is_zero())),
            ConcaveFn::Grid(_) => false,
        }
    }
}

impl From<RonkinDual> for PlaceFunction {
    fn from(d: RonkinDual) -> Self {
        // A grid carries both sides of its bracket, and the mixed integral of a
        // grid slot already brackets the result; only pointwise errors remain.
        let error = match (&d.function, d.provenance.method) {
            (ConcaveFn::Grid(_), DualMethod::Sandwich) => 0.0,
            _ => d.provenance.error,
        };
        PlaceFunction { function: d.function, unit: d.unit, error }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisorLabel {
    Canonical,
    Ronkin,
    Custom,
}

/// A polytope with a roof function at finitely many places (zero elsewhere).
#[derive(Clone, Debug)]
pub struct MetrizedToricDivisor {
    polytope: LatticePolytope,
    roofs: BTreeMap<Place, PlaceFunction>,
    label: DivisorLabel,
}

impl MetrizedToricDivisor {
    pub fn canonical(polytope: LatticePolytope) -> Self {
        MetrizedToricDivisor { polytope, roofs: BTreeMap::new(), label: DivisorLabel::Canonical }
    }

    /// Arbitrary roofs; each must live on `polytope`. Zero roofs are dropped.
    pub fn custom(polytope: LatticePolytope, roofs: Vec<(Place, PlaceFunction)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (place, roof) in roofs {
            if roof.function.domain().as_ref() != Some(&polytope) {
                return Err(Error::Invalid("roof domain differs from the divisor polytope".into()));
            }
            if !roof.is_zero() {
                map.insert(place, roof);
            }
        }
        Ok(MetrizedToricDivisor { polytope, roofs: map, label: DivisorLabel::Custom })
    }

    /// The Ronkin metric of `f`: polytope `NP(f)`, roof `ρ_{f,v}^∨` at every
    /// relevant place of `f`.
    pub fn ronkin(f: &LaurentPoly, arch: &ArchOptions) -> Result<Self> {
        let polytope = f.newton_polytope()?;
        let mut roofs = BTreeMap::new();
        for place in relevant_places(&[], &[f])? {
            let d = ronkin_dual(f, place, arch)?;
            let pf = PlaceFunction::from(d);
            if !pf.is_zero() {
                roofs.insert(place, pf);
            }
        }
        Ok(MetrizedToricDivisor { polytope, roofs, label: DivisorLabel::Ronkin })
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    pub fn label(&self) -> &DivisorLabel {
        &self.label
    }

    /// Places with a nonzero roof.
    pub fn places(&self) -> impl Iterator<Item = &Place> {
        self.roofs.keys()
    }

    /// Roof at `place` (the zero function if none is stored).
    pub fn roof(&self, place: &Place) -> PlaceFunction {
        self.roofs
            .get(place)
            .cloned()
            .unwrap_or_else(|| PlaceFunction::natural(PaConcave::zero_on(&self.polytope).into()))
    }
}

/// Settings for Archimedean Ronkin duals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArchOptions {
    pub resolution: u32,
    pub budget: u64,
}

impl Default for ArchOptions {
    fn default() -> Self {
        ArchOptions { resolution: 64, budget: 20_000 }
    }
}

fn ronkin_dual(f: &LaurentPoly, place: Place, arch: &ArchOptions) -> Result<RonkinDual> {
    match place {
        Place::Archimedean => ronkin_dual_arch(f, arch.resolution, arch.budget),
        Place::Prime(p) => ronkin_dual_nonarch(f, p),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightReport {
    /// `n_v · MI(…)` per place, in place order (∞ first, then primes
    /// ascending).
    pub contributions: Vec<(Place, Estimate)>,
    pub total: Estimate,
}

impl HeightReport {
    pub fn places(&self) -> Vec<Place> {
        self.contributions.iter().map(|(p, _)| *p).collect()
    }

    /// Whether the total is within `tol` of `x`. Asking for a tolerance
    /// tighter than the report's own error bound is an error.
    pub fn agrees_with(&self, x: f64, tol: f64) -> Result<bool> {
        if tol < self.total.error {
            return Err(Error::Invalid(alloc::format!(
                "tolerance {tol:e} is below the report's error bound {:e}",
                self.total.error
            )));
        }
        Ok((self.total.value - x).abs() <= tol)
    }
}

/// `∞` plus every prime dividing a coefficient of some `f`, plus every place
/// where some divisor has a nonzero roof; ascending.
pub fn relevant_places(divisors: &[&MetrizedToricDivisor], fs: &[&LaurentPoly]) -> Result<Vec<Place>> {
    let mut places = alloc::collections::BTreeSet::new();
    places.insert(Place::Archimedean);
    for f in fs {
        for p in f.coefficient_primes()? {
            places.insert(Place::Prime(p));
        }
    }
    for d in divisors {
        places.extend(d.places().copied());
    }
    Ok(places.into_iter().collect())
}

/// `MI` of slots at one place, with its error.
fn place_integral(slots: &[PlaceFunction]) -> Result<Estimate> {
    let nonzero: Vec<&PlaceFunction> = slots.iter().filter(|s| !s.is_zero()).collect();
    if nonzero.is_empty() {
        // All roofs vanish: MI is exactly zero.
        return Ok(Estimate::exact(0.0));
    }
    let unit = nonzero[0].unit;
    let shared = nonzero.iter().all(|s| s.unit == unit);
    let domains: Vec<LatticePolytope> =
        slots.iter().map(|s| s.function.domain().ok_or(Error::Unbounded)).collect::<Result<_>>()?;
    let drefs: Vec<&LatticePolytope> = domains.iter().collect();
    // Pointwise slot errors move MI by at most C·Σε.
    let eps: f64 = slots.iter().map(|s| s.error).sum();
    let stability = if eps > 0.0 { to_f64(&perturbation_constant(&drefs)?) * eps } else { 0.0 };
    let pas: Option<Vec<&PaConcave>> = slots.iter().map(|s| s.function.as_pa()).collect();
    if let (Some(pas), true) = (pas, shared) {
        let v = to_f64(&mixed_integral_exact(&pas)?) * unit;
        return Ok(Estimate { value: v, error: stability + 1e-15 * v.abs() });
    }
    // Bring every slot to natural units.
    let scaled: Vec<ConcaveFn> = slots
        .iter()
        .map(|s| -> Result<ConcaveFn> {
            if s.unit == 1.0 || s.is_zero() {
                return Ok(s.function.clone());
            }
            match &s.function {
                ConcaveFn::Pa(p) => Ok(p.scale_values(&from_f64(s.unit))?.into()),
                ConcaveFn::Grid(_) => Err(Error::Unsupported("grid roofs must be in natural units".into())),
            }
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&ConcaveFn> = scaled.iter().collect();
    let e = mixed_integral(&refs)?;
    Ok(Estimate { value: e.value, error: e.error + stability })
}

/// `Σ_v n_v MI(ϑ_{0,v}, …, ϑ_{n−k,v}, ρ_{f_1,v}^∨, …, ρ_{f_k,v}^∨)`.
pub fn limit_height(fs: &[&LaurentPoly], divisors: &[&MetrizedToricDivisor], arch: &ArchOptions) -> Result<HeightReport> {
    let n = divisors
        .first()
        .map(|d| d.polytope.ambient_dim())
        .or_else(|| fs.first().map(|f| f.dim()))
        .ok_or(Error::Empty("no divisors and no polynomials"))?;
    if fs.len() > n {
        return Err(Error::Invalid(alloc::format!("{} polynomials in dimension {n}", fs.len())));
    }
    if divisors.len() + fs.len() != n + 1 {
        return Err(Error::Arity { expected: n + 1 - fs.len(), got: divisors.len() });
    }
    for d in divisors {
        if d.polytope.ambient_dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: d.polytope.ambient_dim() });
        }
    }
    for f in fs {
        if f.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: f.dim() });
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
    }
    let mut contributions = Vec::new();
    let mut total = Estimate::exact(0.0);
    for place in relevant_places(divisors, fs)? {
        let mut slots: Vec<PlaceFunction> = divisors.iter().map(|d| d.roof(&place)).collect();
        for f in fs {
            slots.push(ronkin_dual(f, place, arch)?.into());
        }
        let e = place_integral(&slots)?.scale(to_f64(&place.weight()));
        total = total + e;
        contributions.push((place, e));
    }
    Ok(HeightReport { contributions, total })
}

/// Height of the toric variety: `Σ_v n_v MI(ϑ_{0,v}, …, ϑ_{n,v})`.
pub fn torus_height(divisors: &[&MetrizedToricDivisor]) -> Result<HeightReport> {
    limit_height(&[], divisors, &ArchOptions::default())
}

/// Height of the hypersurface `Z(f)`: `Σ_v n_v MI(ϑ_0, …, ϑ_{n−1}, ρ_{f,v}^∨)`.
pub fn hypersurface_height(f: &LaurentPoly, divisors: &[&MetrizedToricDivisor], arch: &ArchOptions) -> Result<HeightReport> {
    limit_height(&[f], divisors, arch)
}

/// `MV(Δ_1, …, Δ_{n−k}, NP f_1, …, NP f_k)`, the degree of the cycle.
pub fn degree_prediction(fs: &[&LaurentPoly], polytopes: &[&LatticePolytope]) -> Result<Q> {
    let nps: Vec<LatticePolytope> = fs.iter().map(|f| f.newton_polytope()).collect::<Result<_>>()?;
    let mut all: Vec<&LatticePolytope> = polytopes.to_vec();
    all.extend(nps.iter());
    mixed_volume(&all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qf};

    fn line() -> LaurentPoly {
        LaurentPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]).unwrap()
    }

    #[test]
    fn places() {
        let f = LaurentPoly::from_rational(1, &[(alloc::vec![0], q(1)), (alloc::vec![1], qf(6, 5))]).unwrap();
        assert_eq!(
            relevant_places(&[], &[&f]).unwrap(),
            alloc::vec![Place::Archimedean, Place::Prime(2), Place::Prime(3), Place::Prime(5)]
        );
        assert_eq!(relevant_places(&[], &[&line()]).unwrap(), alloc::vec![Place::Archimedean]);
    }

    #[test]
    fn canonical_torus_height_vanishes() {
        let sq = MetrizedToricDivisor::canonical(LatticePolytope::cube(2, 1));
        let r = torus_height(&[&sq, &sq, &sq]).unwrap();
        assert_eq!(r.total, Estimate::exact(0.0));
    }

    #[test]
    fn constant_roof_shift() {
        // Shifting one roof by c at one place adds c·MV of the others.
        let sq = LatticePolytope::cube(2, 1);
        let c = qf(3, 7);
        let shifted = MetrizedToricDivisor::custom(
            sq.clone(),
            alloc::vec![(Place::Prime(3), PlaceFunction::natural(PaConcave::constant_on(&sq, c).into()))],
        )
        .unwrap();
        let canon = MetrizedToricDivisor::canonical(sq);
        let r = torus_height(&[&shifted, &canon, &canon]).unwrap();
        assert!((r.total.value - 3.0 / 7.0 * 2.0).abs() < 1e-15);
        assert_eq!(r.places(), alloc::vec![Place::Archimedean, Place::Prime(3)]);
    }

    #[test]
    fn monomial_limit_height_cancels() {
        let f = LaurentPoly::from_rational(2, &[(alloc::vec![1, 0], qf(6, 5))]).unwrap();
        let sq = MetrizedToricDivisor::canonical(LatticePolytope::cube(2, 1));
        let r = limit_height(&[&f, &line()], &[&sq], &ArchOptions { resolution: 8, budget: 1000 }).unwrap();
        assert_eq!(r.contributions.len(), 4);
        // MV(square, simplex) = 2; log(6/5)·2 at ∞ cancels against the primes.
        assert!((r.contributions[0].1.value - 2.0 * 1.2f64.ln()).abs() < 1e-12);
        assert!(r.total.value.abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn degrees() {
        assert_eq!(degree_prediction(&[&line(), &line()], &[]).unwrap(), q(1));
        let sq2 = LaurentPoly::from_ints(&[(&[0, 0], 1), (&[2, 0], 1), (&[0, 2], 1), (&[2, 2], 1)]).unwrap();
        assert_eq!(degree_prediction(&[&sq2, &sq2], &[]).unwrap(), q(8));
        let pt = LatticePolytope::point(&[1, 1]);
        assert_eq!(degree_prediction(&[&line()], &[&pt]).unwrap(), q(0));
    }
}
