//! Exact heights of twisted intersection 0-cycles on `P¹ × P¹` with the
//! canonical metric of `O(1,1)`, and the experiments comparing them with
//! the predicted limits.
//!
//! With that model a point has height `h(x) + h(y)`. If `S_x` is the
//! primitive Galois norm of the torus part of `Res_y(f, g)`, the sum of
//! `h(x_P)` over the cycle, with multiplicities, is `m(S_x)/φ(N)`; likewise
//! for `y`.

pub mod equidist;
pub mod local;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::concave::Estimate;
use crate::cyclotomic::resultant::norm_mahler_measure;
use crate::cyclotomic::{Axis, LaurentPoly, SequenceTerm, TorsionPoint, resultant_eliminate, upsilon_test};
use crate::heights::{ArchOptions, HeightReport, MetrizedToricDivisor, degree_prediction, limit_height};
use crate::lattice::LatticePolytope;
use crate::num::{euler_phi, to_f64};
use crate::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

pub use equidist::{EquidistRow, equidistribution_demo, equidistribution_demo_1d, mahler_measure_laurent, orbit_average, resultant_q};
pub use local::{LocalTerm, TailRow, adelic_tail, is_good_prime, local_error_term, tail_constant};

/// Height of a 0-cycle with its ingredients.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleHeight {
    pub height: Estimate,
    /// Number of points in the torus, with multiplicity.
    pub degree: usize,
    /// Conductor of the field the cycle is defined over.
    pub conductor: u64,
    /// `m(S_x)` and `m(S_y)`.
    pub mahler: [Estimate; 2],
}

/// `h(Z_𝕋(ω₁*f, ω₂*g))` on `P¹ × P¹` with the canonical `O(1,1)`.
pub fn cycle_height_exact(f: &LaurentPoly, g: &LaurentPoly, omega: (&TorsionPoint, &TorsionPoint)) -> Result<CycleHeight> {
    for h in [f, g] {
        if h.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: h.dim() });
        }
    }
    if upsilon_test(f, g, omega)? {
        return Err(Error::Upsilon);
    }
    let a = f.twist(omega.0)?;
    let b = g.twist(omega.1)?;
    let ex = resultant_eliminate(&a, &b, Axis::Y)?;
    let ey = resultant_eliminate(&a, &b, Axis::X)?;
    if ex.artifact_degree > 0 || ey.artifact_degree > 0 {
        return Err(Error::BoundaryIntersection);
    }
    let degree = ex.torus_part.degree().unwrap_or(0);
    if ey.torus_part.degree().unwrap_or(0) != degree {
        return Err(Error::Numerical("x- and y-eliminations disagree on the cycle degree".into()));
    }
    if degree == 0 {
        return Err(Error::Empty("the intersection cycle is empty"));
    }
    let (_, mx) = norm_mahler_measure(&ex.torus_part)?;
    let (_, my) = norm_mahler_measure(&ey.torus_part)?;
    let conductor = ex.torus_part.field().conductor();
    let phi = euler_phi(conductor) as f64;
    Ok(CycleHeight { height: (mx + my).scale(1.0 / phi), degree, conductor, mahler: [mx, my] })
}

/// `lim h = MI(0_{[0,1]²}, ρ_f^∨, ρ_g^∨)` summed over places.
pub fn desk_rhs(f: &LaurentPoly, g: &LaurentPoly, arch: &ArchOptions) -> Result<HeightReport> {
    let d0 = MetrizedToricDivisor::canonical(LatticePolytope::cube(2, 1));
    limit_height(&[f, g], &[&d0], arch)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// The cycle degree differs from the mixed volume.
    DegreeMismatch,
    Error(String),
}

impl RowStatus {
    pub fn label(&self) -> String {
        match self {
            RowStatus::Ok => "ok".into(),
            RowStatus::DegreeMismatch => "degree_mismatch".into(),
            RowStatus::Error(e) => alloc::format!("error: {e}"),
        }
    }
}

/// One row of a convergence experiment; timing is added by the caller.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub order: u64,
    pub s: u64,
    pub lhs: Option<Estimate>,
    pub rhs: Estimate,
    pub abs_dev: Option<f64>,
    pub degree: Option<usize>,
    pub status: RowStatus,
}

/// LHS for `ω = term.omega` against the given RHS.
pub fn convergence_row(f: &LaurentPoly, g: &LaurentPoly, term: &SequenceTerm, rhs: Estimate, expected_degree: usize) -> ConvergenceRow {
    let mut row = ConvergenceRow {
        order: term.order,
        s: term.s,
        lhs: None,
        rhs,
        abs_dev: None,
        degree: None,
        status: RowStatus::Ok,
    };
    match cycle_height_exact(f, g, (&term.omega.0, &term.omega.1)) {
        Ok(c) => {
            row.abs_dev = Some((c.height.value - rhs.value).abs());
            row.lhs = Some(c.height);
            row.degree = Some(c.degree);
            if c.degree != expected_degree {
                row.status = RowStatus::DegreeMismatch;
            }
        }
        Err(e) => row.status = RowStatus::Error(e.to_string()),
    }
    row
}

/// Rows for every term, in order. Row-level failures are recorded in the row.
pub fn convergence_experiment(f: &LaurentPoly, g: &LaurentPoly, terms: &[SequenceTerm], rhs: Estimate) -> Result<Vec<ConvergenceRow>> {
    let expected = expected_degree(f, g)?;
    Ok(terms.iter().map(|t| convergence_row(f, g, t, rhs, expected)).collect())
}

/// `MV(NP f, NP g)` as an integer.
pub fn expected_degree(f: &LaurentPoly, g: &LaurentPoly) -> Result<usize> {
    let mv = degree_prediction(&[f, g], &[])?;
    if !mv.is_integer() {
        return Err(Error::Numerical("mixed volume of lattice polygons is not an integer".into()));
    }
    Ok(to_f64(&mv) as usize)
}
