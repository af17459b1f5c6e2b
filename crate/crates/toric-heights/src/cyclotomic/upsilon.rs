//! The locus of twists for which two curves coincide up to a monomial.

use super::laurent::LaurentPoly;
use super::torsion::TorsionPoint;
use crate::{Error, Result};

/// Whether `t₁*f` and `t₂*g` agree up to a factor `c·χ^{m₀}`: the supports are
/// translates by `m₀` and every `α_m β'_{m'+m₀} − α'_{m'} β_{m+m₀}` vanishes,
/// where primes denote twisted coefficients.
pub fn upsilon_test(f: &LaurentPoly, g: &LaurentPoly, t: (&TorsionPoint, &TorsionPoint)) -> Result<bool> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: g.dim() });
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.len() != g.len() {
        return Ok(false);
    }
    let a = f.twist(t.0)?;
    let b = g.twist(t.1)?;
    let (fm, fc) = a.terms().next().unwrap();
    let (gm, gc) = b.terms().next().unwrap();
    let shift: alloc::vec::Vec<i64> = gm.iter().zip(fm).map(|(x, y)| x - y).collect();
    for (m, c) in a.terms() {
        let m2: alloc::vec::Vec<i64> = m.iter().zip(&shift).map(|(x, y)| x + y).collect();
        let Some(d) = b.coefficient(&m2) else {
            return Ok(false);
        };
        // c/fc = d/gc, cross-multiplied.
        if c.mul(gc) != d.mul(fc) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> LaurentPoly {
        LaurentPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]).unwrap()
    }

    #[test]
    fn identity_pair_on_equal_curves() {
        let id = TorsionPoint::identity(2);
        assert!(upsilon_test(&line(), &line(), (&id, &id)).unwrap());
        let shifted = line().shift(&[2, -1]).scale(&crate::cyclotomic::Cyclotomic::from_rational(
            line().field(),
            crate::num::q(-3),
        ));
        assert!(upsilon_test(&line(), &shifted.unwrap(), (&id, &id)).unwrap());
    }

    #[test]
    fn nontrivial_twist_leaves_the_locus() {
        let id = TorsionPoint::identity(2);
        let t = TorsionPoint::new(5, &[1, 1]).unwrap();
        assert!(!upsilon_test(&line(), &line(), (&id, &t)).unwrap());
        // Twisting both sides equally stays inside.
        assert!(upsilon_test(&line(), &line(), (&t, &t)).unwrap());
        // Supports that are not translates.
        let g = LaurentPoly::from_ints(&[(&[0, 0], 1), (&[2, 0], 1), (&[0, 1], 1)]).unwrap();
        assert!(!upsilon_test(&line(), &g, (&id, &id)).unwrap());
    }
}
