//! Galois-orbit averages of `log|h|` at torsion points against `m(h)`.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::concave::Estimate;
use crate::cyclotomic::{LaurentPoly, SequenceTerm, TorsionPoint, cyclotomic_polynomial};
use crate::num::{Q, euler_phi, ln_abs_int, q};
use crate::ronkin::{Univariate, ronkin_arch_fibered};
use crate::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

/// Values of `|h|` below this on the orbit flag the row.
pub const ZERO_GUARD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct EquidistRow {
    pub order: u64,
    /// Exponent of the second coordinate (0 in one variable).
    pub s: u64,
    pub average: f64,
    pub mahler: Estimate,
    pub deviation: f64,
    /// The orbit met a zero of `h`, or came closer than [`ZERO_GUARD`].
    pub flagged: bool,
}

fn degree(p: &[Q]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let db = degree(b).expect("nonzero divisor");
    let mut r = a.to_vec();
    while let Some(dr) = degree(&r).filter(|&d| d >= db) {
        let c = &r[dr] / &b[db];
        for (j, x) in b[..=db].iter().enumerate() {
            r[dr - db + j] -= &c * x;
        }
        r.truncate(dr);
    }
    r
}

/// `Res(a, b)` over ℚ by the Euclidean algorithm (lowest coefficient first).
pub fn resultant_q(a: &[Q], b: &[Q]) -> Q {
    let (Some(m), Some(n)) = (degree(a), degree(b)) else {
        return Q::zero();
    };
    if n == 0 {
        return num_traits::pow(b[0].clone(), m);
    }
    if m == 0 {
        return num_traits::pow(a[0].clone(), n);
    }
    let r = rem(a, b);
    let Some(k) = degree(&r) else {
        return Q::zero();
    };
    // Res(a, b) = (−1)^{mn} Res(b, a) = (−1)^{mn} lc(b)^{m−k} Res(b, r).
    let sign = if m * n % 2 == 1 { -Q::one() } else { Q::one() };
    sign * num_traits::pow(b[n].clone(), m - k) * resultant_q(b, &r[..=k])
}

/// Average of `log|h|` over the Galois orbit of `t`, and whether the orbit
/// came within [`ZERO_GUARD`] of the zero set. One-variable polynomials
/// with rational coefficients are handled exactly through `Res(Φ_N, h)`.
pub fn orbit_average(h: &LaurentPoly, t: &TorsionPoint) -> Result<(f64, bool)> {
    if h.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: t.dim() });
    }
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = t.order();
    if h.dim() == 1
        && let Some(terms) = h.rational_terms()
    {
        // The orbit of a point of exact order N is every primitive N-th root.
        let low = terms.iter().map(|(m, _)| m[0]).min().unwrap();
        let high = terms.iter().map(|(m, _)| m[0]).max().unwrap();
        let mut p = alloc::vec![Q::zero(); (high - low) as usize + 1];
        for (m, c) in terms {
            p[(m[0] - low) as usize] = c;
        }
        let phi: Vec<Q> = cyclotomic_polynomial(n).into_iter().map(q).collect();
        let r = resultant_q(&phi, &p);
        if r.is_zero() {
            return Ok((f64::NEG_INFINITY, true));
        }
        let ln = ln_abs_int(r.numer()) - ln_abs_int(r.denom());
        return Ok((ln / euler_phi(n) as f64, false));
    }
    let mut sum = 0.0;
    let mut flagged = false;
    let units: Vec<u64> = (1..=n).filter(|&u| num_integer::gcd(u, n) == 1).collect();
    for &u in &units {
        let z: Vec<Complex64> = t
            .exps()
            .iter()
            .map(|&e| Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * ((e * u) % n) as f64 / n as f64))
            .collect();
        let a = h.eval_complex(u, &z).norm();
        if a < ZERO_GUARD {
            flagged = true;
            if a == 0.0 {
                return Ok((f64::NEG_INFINITY, true));
            }
        }
        sum += a.ln();
    }
    Ok((sum / units.len() as f64, flagged))
}

/// `m(h)` for `h` in one or two variables.
pub fn mahler_measure_laurent(h: &LaurentPoly) -> Result<Estimate> {
    if h.is_monomial() {
        let (_, c) = h.embedded_terms(1).pop().ok_or(Error::ZeroPolynomial)?;
        return Ok(Estimate::exact(c.norm().ln()));
    }
    match h.dim() {
        1 => {
            let u = Univariate::from_laurent(h)?;
            Ok(Estimate { value: -u.value(0.0), error: u.error })
        }
        2 => {
            let s = ronkin_arch_fibered(h, [0.0, 0.0])?;
            Ok(Estimate { value: -s.value, error: s.error })
        }
        d => Err(Error::Unsupported(alloc::format!("Mahler measure in {d} variables"))),
    }
}

fn row(h: &LaurentPoly, t: &TorsionPoint, s: u64, mahler: Estimate) -> Result<EquidistRow> {
    let (average, flagged) = if h.is_monomial() { (mahler.value, false) } else { orbit_average(h, t)? };
    let deviation = if h.is_monomial() { 0.0 } else { average - mahler.value };
    Ok(EquidistRow { order: t.order(), s, average, mahler, deviation, flagged })
}

/// Rows at the points `(ζ_N, ζ_N^s)` of a sequence.
pub fn equidistribution_demo(h: &LaurentPoly, terms: &[SequenceTerm]) -> Result<Vec<EquidistRow>> {
    let mahler = mahler_measure_laurent(h)?;
    terms.iter().map(|term| row(h, &term.omega.1, term.s, mahler)).collect()
}

/// Rows at `ζ_N` for a one-variable `h`.
pub fn equidistribution_demo_1d(h: &LaurentPoly, orders: &[u64]) -> Result<Vec<EquidistRow>> {
    let mahler = mahler_measure_laurent(h)?;
    orders
        .iter()
        .map(|&n| row(h, &TorsionPoint::new(n, &[1])?, 0, mahler))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{Cyclotomic, CyclotomicField};
    use crate::num::qf;

    fn poly(t: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_ints(t).unwrap()
    }

    #[test]
    fn resultants() {
        // Res(x² − 1, x − 2) = 3, Res(x − 2, x² − 1) = 3.
        let a = [q(-1), q(0), q(1)];
        let b = [q(-2), q(1)];
        assert_eq!(resultant_q(&a, &b), q(3));
        assert_eq!(resultant_q(&b, &a), q(3));
        // Res(x² + 1, 2x + 1) = 5; common root gives 0.
        assert_eq!(resultant_q(&[q(1), q(0), q(1)], &[q(1), q(2)]), q(5));
        assert_eq!(resultant_q(&a, &[q(1), q(1)]), q(0));
        assert_eq!(resultant_q(&[qf(1, 2)], &a), qf(1, 4));
    }

    #[test]
    fn exact_average_matches_the_norm() {
        let field = CyclotomicField::new(9);
        let u = Cyclotomic::monomial(&field, q(1), 1).sub(&Cyclotomic::from_rational(&field, q(2)));
        let norm = u.norm();
        let h = poly(&[(&[1], 1), (&[0], -2)]);
        let (avg, flagged) = orbit_average(&h, &TorsionPoint::new(9, &[2]).unwrap()).unwrap();
        assert!(!flagged);
        let want = (crate::num::to_f64(&norm)).abs().ln() / 6.0;
        assert!((avg - want).abs() < 1e-14);
        // Numeric path agrees.
        let h2 = poly(&[(&[1, 0], 1), (&[0, 0], -2)]);
        let (avg2, _) = orbit_average(&h2, &TorsionPoint::new(9, &[2, 1]).unwrap()).unwrap();
        assert!((avg - avg2).abs() < 1e-12);
    }

    #[test]
    fn monomials_and_zeros() {
        let m = poly(&[(&[2, -1], -3)]);
        let seq = crate::cyclotomic::quasi_strict_sequence(
            &crate::cyclotomic::SequenceKind::Explicit(alloc::vec![(7, 3), (11, 2)]),
            2,
        )
        .unwrap();
        for r in equidistribution_demo(&m, &seq).unwrap() {
            assert_eq!(r.deviation, 0.0);
        }
        // 1 + x vanishes at x = −1, a primitive square root of unity.
        let h = poly(&[(&[0], 1), (&[1], 1)]);
        let rows = equidistribution_demo_1d(&h, &[2, 3]).unwrap();
        assert!(rows[0].flagged && !rows[1].flagged);
        // Φ_6(−1)·… : average over primitive cube roots of log|1 + ζ| is 0.
        assert!(rows[1].average.abs() < 1e-15);
    }

    #[test]
    fn x_minus_two_converges_monotonically() {
        let h = poly(&[(&[1], 1), (&[0], -2)]);
        let rows = equidistribution_demo_1d(&h, &[5, 7, 11, 13, 17]).unwrap();
        let devs: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
        assert!(devs.windows(2).all(|w| w[1].abs() < w[0].abs()), "{devs:?}");
        assert!((rows[0].mahler.value - 2f64.ln()).abs() < 1e-12);
    }
}
