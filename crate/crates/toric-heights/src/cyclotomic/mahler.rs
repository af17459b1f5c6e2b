//! Polynomial roots with inclusion radii, and Mahler measures.
//!
//! Roots come from Aberth–Ehrlich iteration started on the circles given by
//! the Newton polygon of the coefficient moduli. After convergence every
//! approximation `z_i` gets the inclusion disk of radius `n·|W_i|` (with `W_i`
//! the Weierstrass correction, inflated by a bound on the evaluation
//! rounding); a connected cluster of `k` disks holds exactly `k` roots. The
//! error reported for `Σ log⁺|z|` follows from the disk radii.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{ToPrimitive, Zero};

use crate::concave::Estimate;
use crate::num::ln_abs_int;

/// Approximate roots with inclusion radii.
#[derive(Clone, Debug)]
pub struct Roots {
    pub roots: Vec<Complex64>,
    pub radii: Vec<f64>,
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Newton correction `p(z)/p'(z)`, evaluated through the reversed polynomial
/// outside the unit disk.
fn newton_ratio(c: &[Complex64], rev: &[Complex64], z: Complex64) -> Complex64 {
    if z.norm() <= 1.0 {
        let (p, dp) = horner(c, z);
        return p / dp;
    }
    let n = (c.len() - 1) as f64;
    let w = z.inv();
    let (q, dq) = horner(rev, w);
    // p(z) = z^n q(1/z) ⇒ p'/p = n/z − q'(w)/q(w)·w².
    let ratio = n * w - dq / q * w * w;
    ratio.inv()
}

fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    // Upper hull of (k, log|a_k|).
    let pts: Vec<(usize, f64)> =
        c.iter().enumerate().filter(|(_, a)| a.norm() > 0.0).map(|(k, a)| (k, a.norm().ln())).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(n);
    let mut count = 0usize;
    for w in hull.windows(2) {
        let (k0, l0) = w[0];
        let (k1, l1) = w[1];
        let m = k1 - k0;
        let radius = ((l0 - l1) / m as f64).exp();
        for j in 0..m {
            let ang = 2.0 * core::f64::consts::PI * (j as f64 + 0.25) / m as f64 + 0.7 * count as f64 / n as f64 + 0.4;
            out.push(Complex64::from_polar(radius, ang));
        }
        count += m;
    }
    out
}

/// Roots of `Σ c_k x^k` (lowest degree first, nonzero leading and constant
/// coefficients). `err` holds absolute error bounds already present in the
/// coefficients (empty for exact input); they are folded into the radii.
pub fn polynomial_roots(c: &[Complex64], err: &[f64]) -> Roots {
    let n = c.len() - 1;
    assert!(n >= 1 && c[n].norm() > 0.0 && c[0].norm() > 0.0);
    let e = |k: usize| err.get(k).copied().unwrap_or(0.0);
    if n == 1 {
        let z = -c[0] / c[1];
        let slack = (e(0) + e(1) * z.norm()) / (c[1].norm() - e(1)).max(f64::MIN_POSITIVE);
        let rad = slack + 4.0 * f64::EPSILON * z.norm();
        return Roots { roots: alloc::vec![z], radii: alloc::vec![rad] };
    }
    let rev: Vec<Complex64> = c.iter().rev().copied().collect();
    let mut z = initial_guesses(c);
    let mut done = alloc::vec![false; n];
    for _ in 0..2000 {
        let mut moved = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let ratio = newton_ratio(c, &rev, z[i]);
            let mut s = Complex64::zero();
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let errs: Vec<f64> = (0..=n).map(e).collect();
    let radii = inclusion_radii(c, &z, &errs);
    Roots { roots: z, radii }
}

fn inclusion_radii(c: &[Complex64], z: &[Complex64], err: &[f64]) -> Vec<f64> {
    let n = c.len() - 1;
    let gamma = 4.0 * (n as f64 + 2.0) * f64::EPSILON;
    let rev: Vec<Complex64> = c.iter().rev().copied().collect();
    let rev_err: Vec<f64> = err.iter().rev().copied().collect();
    // The exact leading coefficient may be smaller than the stored one.
    let ln_lead = (c[n].norm() - err[n]).max(f64::MIN_POSITIVE).ln();
    (0..n)
        .map(|i| {
            let r = z[i].norm();
            // Work with |p(z)| / |z|^n outside the unit disk; the product of
            // distances is scaled by |z| per factor to match.
            let (ln_p, scale) = if r <= 1.0 {
                let (p, _) = horner(c, z[i]);
                let s: f64 = c.iter().rev().fold(0.0, |acc, a| acc * r + a.norm());
                let d: f64 = err.iter().rev().fold(0.0, |acc, a| acc * r + a);
                ((p.norm() + gamma * s + d).ln(), 1.0)
            } else {
                let (qv, _) = horner(&rev, z[i].inv());
                let s: f64 = rev.iter().rev().fold(0.0, |acc, a| acc / r + a.norm());
                let d: f64 = rev_err.iter().rev().fold(0.0, |acc, a| acc / r + a);
                ((qv.norm() + gamma * s + d).ln(), r)
            };
            let ln_prod: f64 = (0..n).filter(|&j| j != i).map(|j| ((z[i] - z[j]).norm() / scale).ln()).sum();
            (n as f64).ln() + ln_p - ln_lead - ln_prod + scale.ln()
        })
        .map(f64::exp)
        .collect()
}

/// `Σ log⁺|z|` over the roots, with an error bound from the inclusion disks.
pub fn log_plus_sum(r: &Roots) -> Estimate {
    let n = r.roots.len();
    // Union-find over overlapping disks.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (r.roots[i] - r.roots[j]).norm() <= r.radii[i] + r.radii[j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let lp = |x: f64| if x > 1.0 { x.ln() } else { 0.0 };
    let mut value = 0.0;
    let mut error = 0.0;
    let mut groups: alloc::collections::BTreeMap<usize, Vec<usize>> = alloc::collections::BTreeMap::new();
    for i in 0..n {
        groups.entry(find(&mut parent, i)).or_default().push(i);
    }
    for members in groups.values() {
        let lo = members.iter().map(|&i| (r.roots[i].norm() - r.radii[i]).max(0.0)).fold(f64::INFINITY, f64::min);
        let hi = members.iter().map(|&i| r.roots[i].norm() + r.radii[i]).fold(0.0, f64::max);
        for &i in members {
            let v = lp(r.roots[i].norm());
            value += v;
            error += (lp(hi) - v).max(v - lp(lo));
        }
    }
    Estimate { value, error }
}

fn scaled_coeffs(s: &[BigInt]) -> Vec<Complex64> {
    let top = s.iter().filter(|c| !c.is_zero()).map(|c| c.bits()).max().unwrap_or(0);
    let shift = top.saturating_sub(900);
    s.iter()
        .map(|c| {
            let v = if shift == 0 {
                c.to_f64().unwrap()
            } else {
                let e = ln_abs_int(c).max(-1e300);
                if c.is_zero() {
                    0.0
                } else {
                    let mag = (e - shift as f64 * core::f64::consts::LN_2).exp();
                    if c.sign() == num_bigint::Sign::Minus { -mag } else { mag }
                }
            };
            Complex64::new(v, 0.0)
        })
        .collect()
}

/// Mahler measure `m(S) = log|lead S| + Σ log⁺|roots|` of a nonzero integer
/// polynomial (lowest degree first).
pub fn mahler_measure(s: &[BigInt]) -> Estimate {
    let mut s: Vec<BigInt> = s.to_vec();
    while s.last().is_some_and(|c| c.is_zero()) {
        s.pop();
    }
    assert!(!s.is_empty(), "Mahler measure of the zero polynomial");
    let lead = ln_abs_int(s.last().unwrap());
    let k = s.iter().position(|c| !c.is_zero()).unwrap();
    let core = &s[k..];
    if core.len() == 1 {
        return Estimate::exact(lead);
    }
    let c = scaled_coeffs(core);
    let err: Vec<f64> = c.iter().map(|a| 2.0 * f64::EPSILON * a.norm()).collect();
    let e = log_plus_sum(&polynomial_roots(&c, &err));
    Estimate { value: lead + e.value, error: e.error }
}

/// `Σ log⁺|roots|` of a complex polynomial with absolute coefficient errors
/// `err` (the leading-coefficient term of the Mahler measure is left to the
/// caller).
pub fn log_plus_roots(c: &[Complex64], err: &[f64]) -> Estimate {
    let mut n = c.len();
    while n > 0 && c[n - 1].norm() == 0.0 {
        n -= 1;
    }
    assert!(n > 0, "roots of the zero polynomial");
    let k = c.iter().position(|a| a.norm() != 0.0).unwrap();
    if n - k == 1 {
        return Estimate::exact(0.0);
    }
    let e: Vec<f64> = (k..n).map(|i| err.get(i).copied().unwrap_or(0.0)).collect();
    log_plus_sum(&polynomial_roots(&c[k..n], &e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        assert!(mahler_measure(&big(&[0, 1])).value.abs() < 1e-15);
        let m = mahler_measure(&big(&[-1, 2]));
        assert!((m.value - 2f64.ln()).abs() < 1e-12 && m.error < 1e-9);
        let m = mahler_measure(&big(&[1, 1, 1]));
        assert!(m.value.abs() < 1e-12 && m.error < 1e-6, "{m:?}");
        // Lehmer's polynomial.
        let m = mahler_measure(&big(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]));
        assert!((m.value - 0.162357612007738).abs() < 1e-10 && m.error < 1e-6, "{m:?}");
    }

    #[test]
    fn multiplicative_on_products() {
        let a = big(&[3, -1, 4, 1, -5]);
        let b = big(&[2, 7, 1, 8]);
        let mut ab = alloc::vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                ab[i + j] += x * y;
            }
        }
        let lhs = mahler_measure(&ab).value;
        let rhs = mahler_measure(&a).value + mahler_measure(&b).value;
        assert!((lhs - rhs).abs() < 1e-10);
    }
}
