//! Archimedean Ronkin functions.
//!
//! Three evaluators:
//!
//! - one variable: exact from the roots (Jensen's formula), with the Legendre
//!   dual as an explicit lifted-point function;
//! - two variables, fibered: Jensen's formula in `y` turns the torus average
//!   into a one-dimensional integral over `arg x` whose integrand is
//!   analytic between the angles where a root crosses the circle `|y| = b`.
//!   Those angles are located by bisection and each piece is integrated by
//!   Gauss–Legendre. The same pass returns the gradient;
//! - any dimension ≤ 2, rank-1 lattice quasi-Monte Carlo with two random
//!   shifts.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::{RngCore, SeedableRng};

use crate::concave::Estimate;
use crate::cyclotomic::LaurentPoly;
use crate::cyclotomic::mahler::polynomial_roots;
use crate::{Error, Result};

const TAU: f64 = 2.0 * core::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs.push(x);
        ws.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (xs, ws)
}

/// Roots of `Σ c_k y^k` (lowest first, nonzero constant and top terms).
fn roots_of(c: &[Complex64]) -> Vec<Complex64> {
    match c.len() {
        0 | 1 => Vec::new(),
        2 => alloc::vec![-c[0] / c[1]],
        3 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = (b * b - 4.0 * a * cc).sqrt();
            // Avoid cancellation: pick the sign making |b + s·disc| large.
            let s = if (b.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
            let q = -(b + disc * s) / 2.0;
            if q.norm() == 0.0 {
                return alloc::vec![Complex64::zero(), Complex64::zero()];
            }
            alloc::vec![q / a, cc / q]
        }
        _ => polynomial_roots(c, &[]).roots,
    }
}

fn horner(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * x + a)
}

/// `ρ` and its gradient at one point, with a quadrature error estimate on
/// the value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RonkinSample {
    pub value: f64,
    pub gradient: [f64; 2],
    pub error: f64,
    /// Quadrature error estimate on each gradient entry.
    pub gradient_error: f64,
}

/// A bivariate Laurent polynomial prepared for fibered evaluation:
/// `F = χ^s·f = Σ_j c_j(x) y^j` with polynomial `c_j`.
#[derive(Clone, Debug)]
pub struct Fibered {
    shift: [i64; 2],
    c: Vec<Vec<Complex64>>,
    dc: Vec<Vec<Complex64>>,
    nodes: (Vec<f64>, Vec<f64>),
    coarse: (Vec<f64>, Vec<f64>),
}

/// Fiber data at one angle.
struct FiberPoint {
    value: f64,
    d1: f64,
    below: usize,
}

impl Fibered {
    pub fn new(f: &LaurentPoly) -> Result<Self> {
        if f.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: f.dim() });
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let terms = f.embedded_terms(1);
        let mx = terms.iter().map(|(m, _)| m[0]).min().unwrap();
        let my = terms.iter().map(|(m, _)| m[1]).min().unwrap();
        let dx = terms.iter().map(|(m, _)| m[0] - mx).max().unwrap() as usize;
        let dy = terms.iter().map(|(m, _)| m[1] - my).max().unwrap() as usize;
        let mut c = alloc::vec![alloc::vec![Complex64::zero(); dx + 1]; dy + 1];
        for (m, a) in &terms {
            c[(m[1] - my) as usize][(m[0] - mx) as usize] = *a;
        }
        let dc = c.iter().map(|p| p.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect()).collect();
        Ok(Fibered { shift: [-mx, -my], c, dc, nodes: gauss_legendre(16), coarse: gauss_legendre(8) })
    }

    fn fiber(&self, theta: f64, a: f64, b: f64) -> FiberPoint {
        let x = Complex64::from_polar(a, theta);
        let p: Vec<Complex64> = self.c.iter().map(|cj| horner(cj, x)).collect();
        let dp: Vec<Complex64> = self.dc.iter().map(|cj| horner(cj, x)).collect();
        let top = p.len() - 1;
        let lead = p[top];
        let low = p.iter().position(|z| z.norm() != 0.0).unwrap_or(top);
        // Zero roots from vanishing low coefficients are below the circle.
        let rs = roots_of(&p[low..]);
        let mut value = lead.norm().ln();
        let mut d1 = (x * dp[top] / lead).re;
        let mut below = low;
        for y in rs {
            if y.norm() < b {
                below += 1;
            } else {
                // y' = −F_x / F_y at the root.
                let fx = dp.iter().rev().fold(Complex64::zero(), |acc, &d| acc * y + d);
                let fy = p.iter().enumerate().skip(1).rev().fold(Complex64::zero(), |acc, (k, &c)| acc * y + c * k as f64);
                let dy = -fx / fy;
                value += y.norm().ln();
                d1 += (x * dy / y).re;
            }
        }
        value += below as f64 * b.ln();
        FiberPoint { value, d1, below }
    }

    fn count(&self, theta: f64, a: f64, b: f64) -> usize {
        let x = Complex64::from_polar(a, theta);
        let p: Vec<Complex64> = self.c.iter().map(|cj| horner(cj, x)).collect();
        let low = p.iter().position(|z| z.norm() != 0.0).unwrap_or(p.len() - 1);
        low + roots_of(&p[low..]).iter().filter(|y| y.norm() < b).count()
    }

    /// Angles in `(lo, hi)` where the count of roots inside `|y| < b` changes.
    fn crossings(&self, lo: f64, clo: usize, hi: f64, chi: usize, a: f64, b: f64, out: &mut Vec<f64>, depth: u32) {
        if clo == chi && depth > 0 {
            return;
        }
        if hi - lo < 1e-13 || depth > 60 {
            out.push(0.5 * (lo + hi));
            return;
        }
        let mid = 0.5 * (lo + hi);
        let cm = self.count(mid, a, b);
        self.crossings(lo, clo, mid, cm, a, b, out, depth + 1);
        self.crossings(mid, cm, hi, chi, a, b, out, depth + 1);
    }

    /// Value and gradient of `ρ_f` at `u`.
    pub fn eval(&self, u: [f64; 2]) -> Result<RonkinSample> {
        let a = (-u[0]).exp();
        let b = (-u[1]).exp();
        const M: usize = 64;
        let grid: Vec<f64> = (0..=M).map(|j| TAU * j as f64 / M as f64).collect();
        let counts: Vec<usize> = grid.iter().map(|&t| self.count(t, a, b)).collect();
        let mut brk = grid.clone();
        for j in 0..M {
            if counts[j] != counts[j + 1] {
                self.crossings(grid[j], counts[j], grid[j + 1], counts[j + 1], a, b, &mut brk, 1);
            }
        }
        brk.sort_by(|x, y| x.partial_cmp(y).unwrap());
        brk.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        let (mut v, mut g1, mut g2, mut err, mut gerr) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for w in brk.windows(2) {
            let (l, r) = (w[0], w[1]);
            let half = 0.5 * (r - l);
            let mid = 0.5 * (r + l);
            let (mut sv, mut s1, mut s2) = (0.0, 0.0, 0.0);
            for (x, wt) in self.nodes.0.iter().zip(&self.nodes.1) {
                let p = self.fiber(mid + half * x, a, b);
                sv += wt * p.value;
                s1 += wt * p.d1;
                s2 += wt * p.below as f64;
            }
            let (mut cv, mut c1) = (0.0, 0.0);
            for (x, wt) in self.coarse.0.iter().zip(&self.coarse.1) {
                let p = self.fiber(mid + half * x, a, b);
                cv += wt * p.value;
                c1 += wt * p.d1;
            }
            v += half * sv;
            g1 += half * s1;
            g2 += half * s2;
            err += half * (sv - cv).abs();
            gerr += half * (s1 - c1).abs();
        }
        if !(v.is_finite() && g1.is_finite()) {
            return Err(Error::Numerical("fiber integral hit a zero of the polynomial".into()));
        }
        let s = self.shift;
        Ok(RonkinSample {
            value: -v / TAU - (s[0] as f64 * u[0] + s[1] as f64 * u[1]),
            gradient: [g1 / TAU - s[0] as f64, g2 / TAU - s[1] as f64],
            error: err / TAU + 1e-14 * (1.0 + v.abs() / TAU),
            gradient_error: gerr / TAU + 1e-13,
        })
    }
}

/// `ρ_f(u)` for a bivariate `f` by the fibered evaluator.
pub fn ronkin_arch_fibered(f: &LaurentPoly, u: [f64; 2]) -> Result<RonkinSample> {
    Fibered::new(f)?.eval(u)
}

/// Univariate data: `f = c·x^k·∏(x − r_i)` under the embedding `ζ ↦ e^{2πi/N}`.
#[derive(Clone, Debug)]
pub struct Univariate {
    pub low: i64,
    pub ln_lead: f64,
    /// `log|r_i|`, decreasing.
    pub ln_roots: Vec<f64>,
    /// Bound on the error of every partial sum of `ln_roots`.
    pub error: f64,
}

impl Univariate {
    /// From complex coefficients of `Σ c_j x^{low + j}` (nonzero ends).
    pub fn from_coeffs(low: i64, c: &[Complex64]) -> Self {
        let n = c.len() - 1;
        let ln_lead = c[n].norm().ln();
        if n == 0 {
            return Univariate { low, ln_lead, ln_roots: Vec::new(), error: 0.0 };
        }
        let r = polynomial_roots(c, &[]);
        let mut ln_roots: Vec<f64> = r.roots.iter().map(|z| z.norm().ln()).collect();
        let error = r.roots.iter().zip(&r.radii).map(|(z, rad)| {
            let m = z.norm();
            if *rad >= m { f64::INFINITY } else { -(1.0 - rad / m).ln() }
        }).sum::<f64>() + 1e-15 * n as f64;
        ln_roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Univariate { low, ln_lead, ln_roots, error }
    }

    pub fn from_laurent(f: &LaurentPoly) -> Result<Self> {
        if f.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: f.dim() });
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let terms = f.embedded_terms(1);
        let low = terms.iter().map(|(m, _)| m[0]).min().unwrap();
        let high = terms.iter().map(|(m, _)| m[0]).max().unwrap();
        let mut c = alloc::vec![Complex64::zero(); (high - low) as usize + 1];
        for (m, a) in terms {
            c[(m[0] - low) as usize] = a;
        }
        Ok(Self::from_coeffs(low, &c))
    }

    pub fn degree(&self) -> usize {
        self.ln_roots.len()
    }

    /// `ρ(u) = k·u − log|c| + Σ min(u, −log|r_i|)`.
    pub fn value(&self, u: f64) -> f64 {
        self.low as f64 * u - self.ln_lead + self.ln_roots.iter().map(|&l| u.min(-l)).sum::<f64>()
    }

    /// Dual values at `low + j`, `j = 0..=d`: `log|c|` plus the `d − j`
    /// largest `log|r_i|`.
    pub fn dual_values(&self) -> Vec<f64> {
        let d = self.degree();
        (0..=d).map(|j| self.ln_lead + self.ln_roots[..d - j].iter().sum::<f64>()).collect()
    }
}

/// Largest Fibonacci pair `(F_{k−1}, F_k)` with `F_k ≤ n`.
fn fibonacci_below(n: u64) -> (u64, u64) {
    let (mut a, mut b) = (1u64, 2u64);
    while a + b <= n {
        let c = a + b;
        a = b;
        b = c;
    }
    (a, b)
}

/// `ρ_f(u)` by rank-1 lattice quasi-Monte Carlo (`n ≤ 2`): two independent
/// randomly shifted rules of `budget/2` nodes each; the error is twice their
/// difference. Nodes where `|f| < 10⁻¹⁵` are moved by `10⁻⁶` in a seeded
/// random direction.
pub fn ronkin_arch(f: &LaurentPoly, u: &[f64], budget: u64, seed: u64) -> Result<Estimate> {
    let n = f.dim();
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: u.len() });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if n > 2 {
        return Err(Error::Unsupported("lattice rules are implemented for n ≤ 2".into()));
    }
    if budget < 16 {
        return Err(Error::Invalid("budget too small".into()));
    }
    let terms = f.embedded_terms(1);
    let radii: Vec<f64> = u.iter().map(|&x| (-x).exp()).collect();
    let eval = |theta: &[f64]| -> f64 {
        let z: Vec<Complex64> = theta.iter().zip(&radii).map(|(&t, &r)| Complex64::from_polar(r, TAU * t)).collect();
        let mut s = Complex64::zero();
        for (m, c) in &terms {
            let mut t = *c;
            for (zi, &e) in z.iter().zip(m) {
                t *= zi.powi(e as i32);
            }
            s += t;
        }
        s.norm()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let half = budget / 2;
    let mut estimates = [0.0f64; 2];
    for est in estimates.iter_mut() {
        let shift: Vec<f64> = (0..n).map(|_| unit()).collect();
        let (m, step) = if n == 1 { (half, 0) } else { let (a, b) = fibonacci_below(half); (b, a) };
        let mut acc = 0.0;
        for k in 0..m {
            let mut th: Vec<f64> = if n == 1 {
                alloc::vec![(k as f64 / m as f64 + shift[0]).fract()]
            } else {
                alloc::vec![
                    (k as f64 / m as f64 + shift[0]).fract(),
                    (((k * step) % m) as f64 / m as f64 + shift[1]).fract(),
                ]
            };
            let mut v = eval(&th);
            let mut tries = 0;
            while v < 1e-15 {
                for t in th.iter_mut() {
                    *t += 1e-6 * (2.0 * unit() - 1.0);
                }
                v = eval(&th);
                tries += 1;
                if tries > 16 {
                    return Err(Error::Numerical("lattice node stuck on the zero set".into()));
                }
            }
            acc += v.ln();
        }
        *est = -acc / m as f64;
    }
    let value = 0.5 * (estimates[0] + estimates[1]);
    Ok(Estimate { value, error: 2.0 * (estimates[0] - estimates[1]).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    const M_LINE: f64 = 0.3230659472194505;

    fn line() -> LaurentPoly {
        LaurentPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]).unwrap()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn fibered_line_at_origin() {
        let r = ronkin_arch_fibered(&line(), [0.0, 0.0]).unwrap();
        assert!((r.value + M_LINE).abs() < 1e-10, "{r:?}");
        // By symmetry the gradient is (1/3, 1/3).
        assert!((r.gradient[0] - 1.0 / 3.0).abs() < 1e-8 && (r.gradient[1] - 1.0 / 3.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn fibered_far_out_is_tropical() {
        let f = LaurentPoly::from_ints(&[(&[0, 0], 3), (&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        let r = ronkin_arch_fibered(&f, [9.0, 9.0]).unwrap();
        assert!((r.value + 3f64.ln()).abs() < 1e-3);
        assert!(r.gradient[0].abs() < 1e-3 && r.gradient[1].abs() < 1e-3);
        let r = ronkin_arch_fibered(&f, [-9.0, 5.0]).unwrap();
        assert!((r.value + 9.0).abs() < 1e-3 && (r.gradient[0] - 1.0).abs() < 1e-3);
        // Gradient against central differences.
        let u = [0.3, -0.7];
        let h = 1e-5;
        let r = ronkin_arch_fibered(&f, u).unwrap();
        for k in 0..2 {
            let mut up = u;
            let mut dn = u;
            up[k] += h;
            dn[k] -= h;
            let fd = (ronkin_arch_fibered(&f, up).unwrap().value - ronkin_arch_fibered(&f, dn).unwrap().value) / (2.0 * h);
            assert!((fd - r.gradient[k]).abs() < 1e-6, "{k}: {fd} vs {:?}", r.gradient);
        }
    }

    #[test]
    fn shifted_laurent_input() {
        let f = line().shift(&[-2, 1]);
        let u = [0.4, 0.1];
        let a = ronkin_arch_fibered(&line(), u).unwrap();
        let b = ronkin_arch_fibered(&f, u).unwrap();
        assert!((b.value - (a.value - 2.0 * u[0] + u[1])).abs() < 1e-12);
        assert!((b.gradient[0] - (a.gradient[0] - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn univariate_exact() {
        // 1 + x at |x| = 2, i.e. u = −log 2.
        let f = LaurentPoly::from_ints(&[(&[0], 1), (&[1], 1)]).unwrap();
        let g = Univariate::from_laurent(&f).unwrap();
        assert!((g.value(-2f64.ln()) + 2f64.ln()).abs() < 1e-12);
        assert!(g.value(0.0).abs() < 1e-12);
        // 2 − 3x + x²: roots 1 and 2.
        let f = LaurentPoly::from_ints(&[(&[0], 2), (&[1], -3), (&[2], 1)]).unwrap();
        let g = Univariate::from_laurent(&f).unwrap();
        let d = g.dual_values();
        assert!((d[0] - 2f64.ln()).abs() < 1e-12 && (d[1] - 2f64.ln()).abs() < 1e-12 && d[2].abs() < 1e-12);
    }

    #[test]
    fn lattice_rule() {
        let f = LaurentPoly::from_ints(&[(&[0], 1), (&[1], 1)]).unwrap();
        let e = ronkin_arch(&f, &[0.0], 1 << 14, 1).unwrap();
        assert!(e.value.abs() < 1e-3, "{e:?}");
        let e = ronkin_arch(&line(), &[0.0, 0.0], 1 << 14, 1).unwrap();
        assert!((e.value + M_LINE).abs() < 5e-3, "{e:?}");
    }
}
