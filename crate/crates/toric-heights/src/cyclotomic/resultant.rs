//! Resultants of bivariate Laurent polynomials over ℚ(ζ_N), Galois norms down
//! to ℤ[x], and Mahler measures of those norms.
//!
//! Everything is computed multimodularly. For a prime `q ≡ 1 (mod N)` with a
//! primitive `N`-th root `r`, the embeddings `ζ ↦ r^u` (u a unit) are the
//! reductions of all Galois conjugates at once; Sylvester determinants are
//! taken at integer abscissae and interpolated in `x`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{Cyclotomic, CyclotomicField};
use super::laurent::LaurentPoly;
use super::mahler::log_plus_roots;
use super::modp::{self, Crt, SplitPrimes};
use crate::concave::Estimate;
use crate::num::{Q, ln_abs_int, to_f64};
use crate::{Error, Result};

/// The variable eliminated by a resultant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// Eliminate `x`; the result is a polynomial in `y`.
    X,
    /// Eliminate `y`; the result is a polynomial in `x`.
    Y,
}

/// Univariate polynomial over ℚ(ζ_N), lowest degree first, trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct CycPoly {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Cyclotomic>,
}

impl CycPoly {
    pub fn new(field: &Arc<CyclotomicField>, coeffs: Vec<Cyclotomic>) -> Self {
        let mut coeffs: Vec<Cyclotomic> = coeffs.iter().map(|c| c.lift(field)).collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CycPoly { field: field.clone(), coeffs }
    }

    pub fn from_rational(c: &[Q]) -> Self {
        let field = CyclotomicField::new(1);
        let coeffs = c.iter().map(|x| Cyclotomic::from_rational(&field, x.clone())).collect();
        Self::new(&field, coeffs)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree (`None` for the zero polynomial).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiplicity of the root `x = 0`.
    pub fn x_order(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Divides out the largest power of `x`; returns the exponent removed.
    pub fn strip_x(&self) -> (usize, CycPoly) {
        let k = self.x_order();
        (k, CycPoly { field: self.field.clone(), coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn galois(&self, u: u64) -> Self {
        CycPoly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c.galois(u)).collect() }
    }

    /// Complex coefficients under `ζ ↦ e^{2πiu/N}` with absolute error bounds.
    pub fn embed(&self, u: u64) -> (Vec<Complex64>, Vec<f64>) {
        let phi = self.field.degree() as f64;
        self.coeffs
            .iter()
            .map(|c| {
                let abs: f64 = c.coeffs().iter().map(|x| to_f64(x).abs()).sum();
                (c.embed(u), 4.0 * (phi + 4.0) * f64::EPSILON * abs)
            })
            .unzip()
    }

    /// Least common denominator of all coordinates.
    fn denominator(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator()))
    }

    /// Coordinates of `d·self` as integers, with `d` the common denominator.
    fn integral_coords(&self) -> Vec<Vec<BigInt>> {
        let d = Q::from(self.denominator());
        self.coeffs.iter().map(|c| c.coeffs().iter().map(|x| (x * &d).to_integer()).collect()).collect()
    }
}

/// One polynomial of a pair with integral coordinates and nonnegative
/// exponents `(x, y)`.
#[derive(Clone, Debug)]
struct Side {
    terms: Vec<((usize, usize), Vec<BigInt>)>,
    dx: usize,
    dy: usize,
}

impl Side {
    fn new(f: &LaurentPoly, field: &Arc<CyclotomicField>, swap: bool) -> Side {
        let f = f.lift(field);
        let pts: Vec<(i64, i64)> =
            f.terms().map(|(m, _)| if swap { (m[1], m[0]) } else { (m[0], m[1]) }).collect();
        let mx = pts.iter().map(|p| p.0).min().unwrap();
        let my = pts.iter().map(|p| p.1).min().unwrap();
        let den = f.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(&c.denominator()));
        let den = Q::from(den);
        let terms: Vec<((usize, usize), Vec<BigInt>)> = f
            .terms()
            .zip(&pts)
            .map(|((_, c), p)| {
                let e = ((p.0 - mx) as usize, (p.1 - my) as usize);
                (e, c.coeffs().iter().map(|x| (x * &den).to_integer()).collect())
            })
            .collect();
        let dx = terms.iter().map(|t| t.0.0).max().unwrap();
        let dy = terms.iter().map(|t| t.0.1).max().unwrap();
        Side { terms, dx, dy }
    }

    /// Coordinates reduced mod `q`.
    fn reduce(&self, q: u64) -> Vec<((usize, usize), Vec<u64>)> {
        let qb = BigInt::from(q);
        self.terms
            .iter()
            .map(|(e, c)| (*e, c.iter().map(|x| u64::try_from(x.mod_floor(&qb)).unwrap()).collect()))
            .collect()
    }

    /// `[y-degree][x-degree]` coefficient table under `ζ ↦ root`.
    fn table(reduced: &[((usize, usize), Vec<u64>)], dx: usize, dy: usize, root: u64, q: u64) -> Vec<Vec<u64>> {
        let mut t = alloc::vec![alloc::vec![0u64; dx + 1]; dy + 1];
        for ((i, j), c) in reduced {
            t[*j][*i] = modp::poly_eval(c, root, q);
        }
        t
    }
}

/// A pair prepared for elimination of `y` (after swapping coordinates when
/// `x` is to be eliminated).
#[derive(Clone, Debug)]
struct Pair {
    field: Arc<CyclotomicField>,
    units: Vec<u64>,
    f: Side,
    g: Side,
}

impl Pair {
    fn new(f: &LaurentPoly, g: &LaurentPoly, axis: Axis) -> Result<Pair> {
        for h in [f, g] {
            if h.dim() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, got: h.dim() });
            }
            if h.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
        }
        let l = f.conductor().lcm(&g.conductor());
        let field = if l == f.conductor() {
            f.field().clone()
        } else if l == g.conductor() {
            g.field().clone()
        } else {
            CyclotomicField::new(l)
        };
        let swap = axis == Axis::X;
        Ok(Pair {
            units: field.units(),
            f: Side::new(f, &field, swap),
            g: Side::new(g, &field, swap),
            field,
        })
    }

    fn degree_bound(&self) -> usize {
        self.f.dx * self.g.dy + self.g.dx * self.f.dy
    }

    /// Scalar relating `Res(F̃, G̃)` to `Res(F, G)`.
    fn clearing_factor(&self, fd: &BigInt, gd: &BigInt) -> BigInt {
        num_traits::pow(fd.clone(), self.g.dy) * num_traits::pow(gd.clone(), self.f.dy)
    }

    /// Per-prime data: the coefficient tables under each embedding.
    fn tables(&self, q: u64) -> (Vec<Vec<Vec<u64>>>, Vec<Vec<Vec<u64>>>, Vec<u64>) {
        let r = modp::root_of_unity(self.field.conductor(), q);
        let fr = self.f.reduce(q);
        let gr = self.g.reduce(q);
        let nodes: Vec<u64> = self.units.iter().map(|&u| modp::pow_mod(r, u, q)).collect();
        let ft = nodes.iter().map(|&z| Side::table(&fr, self.f.dx, self.f.dy, z, q)).collect();
        let gt = nodes.iter().map(|&z| Side::table(&gr, self.g.dx, self.g.dy, z, q)).collect();
        (ft, gt, nodes)
    }
}

/// `Res_y` of two polynomials given as `[y-degree][x-degree]` tables, as a
/// vector of `D + 1` coefficients mod `q`.
fn resultant_mod(f: &[Vec<u64>], g: &[Vec<u64>], d: usize, q: u64) -> Vec<u64> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let xs: Vec<u64> = (0..=d as u64).collect();
    let ys: Vec<u64> = xs
        .iter()
        .map(|&x| {
            if size == 0 {
                return 1;
            }
            let fv: Vec<u64> = f.iter().map(|c| modp::poly_eval(c, x, q)).collect();
            let gv: Vec<u64> = g.iter().map(|c| modp::poly_eval(c, x, q)).collect();
            let mut mat = alloc::vec![alloc::vec![0u64; size]; size];
            for i in 0..n {
                for k in 0..=m {
                    mat[i][i + k] = fv[m - k];
                }
            }
            for i in 0..m {
                for k in 0..=n {
                    mat[n + i][i + k] = gv[n - k];
                }
            }
            modp::det_mod(mat, q)
        })
        .collect();
    let mut r = modp::interpolate(&xs, &ys, q);
    r.resize(d + 1, 0);
    r
}

/// Resultant polynomial `R̃_u mod q` for every embedding `u`.
fn resultants_mod(p: &Pair, q: u64) -> (Vec<Vec<u64>>, Vec<u64>) {
    let d = p.degree_bound();
    let (ft, gt, nodes) = p.tables(q);
    let rs = ft.iter().zip(&gt).map(|(f, g)| resultant_mod(f, g, d, q)).collect();
    (rs, nodes)
}

/// Exact `Res(F, G)` by Chinese remaindering until the symmetric lift is
/// stable under one more prime.
fn exact_resultant(p: &Pair, fd: &BigInt, gd: &BigInt) -> CycPoly {
    let phi = p.field.degree();
    let d = p.degree_bound();
    let mut crt = Crt::new((d + 1) * phi);
    let mut prev: Option<Vec<BigInt>> = None;
    for q in SplitPrimes::new(p.field.conductor()) {
        let (rs, nodes) = resultants_mod(p, q);
        let mut flat = Vec::with_capacity((d + 1) * phi);
        for j in 0..=d {
            let vals: Vec<u64> = rs.iter().map(|r| r[j]).collect();
            let mut coords = modp::interpolate(&nodes, &vals, q);
            coords.resize(phi, 0);
            flat.extend(coords);
        }
        crt.add(q, &flat);
        let cur = crt.symmetric();
        if prev.as_ref() == Some(&cur) {
            break;
        }
        prev = Some(cur);
    }
    let lifted = prev.expect("at least one prime");
    let scale = Q::from(p.clearing_factor(fd, gd));
    let coeffs = lifted
        .chunks(phi)
        .map(|c| Cyclotomic::from_coeffs(&p.field, c.iter().map(|x| Q::from(x.clone()) / &scale).collect()))
        .collect();
    CycPoly::new(&p.field, coeffs)
}

fn side_denominator(f: &LaurentPoly) -> BigInt {
    f.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(&c.denominator()))
}

/// `Res(f, g)` with respect to the eliminated variable, after shifting both
/// polynomials to have nonnegative exponents and no monomial factor.
pub fn resultant(f: &LaurentPoly, g: &LaurentPoly, axis: Axis) -> Result<CycPoly> {
    let p = Pair::new(f, g, axis)?;
    Ok(exact_resultant(&p, &side_denominator(f), &side_denominator(g)))
}

/// Outcome of eliminating one variable from a pair of curves.
#[derive(Clone, Debug)]
pub struct Elimination {
    /// The full resultant.
    pub resultant: CycPoly,
    /// Multiplicity of the root 0 removed from it.
    pub zero_order: usize,
    /// The resultant with the root 0 removed.
    pub torus_part: CycPoly,
    /// Degree of the common factors of the leading forms and of the
    /// constant forms in the eliminated variable (with roots at 0 removed);
    /// nonzero means some roots of `torus_part` come from intersections on
    /// the boundary rather than in the torus.
    pub artifact_degree: usize,
}

fn strip_zero_roots(mut p: Vec<u64>) -> Vec<u64> {
    modp::trim(&mut p);
    let k = p.iter().position(|&c| c != 0).unwrap_or(0);
    p.drain(..k);
    p
}

fn artifact_degree_mod(f: &[Vec<u64>], g: &[Vec<u64>], q: u64) -> usize {
    let lead = modp::poly_gcd(&strip_zero_roots(f[f.len() - 1].clone()), &strip_zero_roots(g[g.len() - 1].clone()), q);
    let base = modp::poly_gcd(&strip_zero_roots(f[0].clone()), &strip_zero_roots(g[0].clone()), q);
    lead.len().saturating_sub(1) + base.len().saturating_sub(1)
}

/// Whether the other resultant vanishes modulo both probe primes.
fn other_resultant_vanishes(f: &LaurentPoly, g: &LaurentPoly, axis: Axis) -> Result<bool> {
    let other = if axis == Axis::Y { Axis::X } else { Axis::Y };
    let p = Pair::new(f, g, other)?;
    let d = p.degree_bound();
    let one = p.units.iter().position(|&u| u <= 1).unwrap_or(0);
    for q in SplitPrimes::new(p.field.conductor()).take(2) {
        let (ft, gt, _) = p.tables(q);
        if resultant_mod(&ft[one], &gt[one], d, q).iter().any(|&c| c != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Eliminates one variable; fails if the curves share a component.
pub fn resultant_eliminate(f: &LaurentPoly, g: &LaurentPoly, axis: Axis) -> Result<Elimination> {
    let p = Pair::new(f, g, axis)?;
    let res = exact_resultant(&p, &side_denominator(f), &side_denominator(g));
    if res.is_zero() || other_resultant_vanishes(f, g, axis)? {
        return Err(Error::ImproperIntersection("the curves share a component".into()));
    }
    let one = p.units.iter().position(|&u| u <= 1).unwrap_or(0);
    let artifact_degree = SplitPrimes::new(p.field.conductor())
        .take(2)
        .map(|q| {
            let (ft, gt, _) = p.tables(q);
            artifact_degree_mod(&ft[one], &gt[one], q)
        })
        .min()
        .unwrap_or(0);
    let (zero_order, torus_part) = res.strip_x();
    Ok(Elimination { resultant: res, zero_order, torus_part, artifact_degree })
}

/// `(a, b) ↦ (a, b + k·a)`, a unimodular change of coordinates of the torus.
fn shear(f: &LaurentPoly, k: i64) -> Result<LaurentPoly> {
    f.transform(&[alloc::vec![1, 0], alloc::vec![k, 1]])
}

/// Number of intersection points of `f = g = 0` in the torus, counted with
/// multiplicity. Boundary artifacts are removed by shearing, up to
/// `MAX_SHEARS` attempts.
pub fn torus_solution_count(f: &LaurentPoly, g: &LaurentPoly) -> Result<usize> {
    for k in 0..=MAX_SHEARS as i64 {
        let e = resultant_eliminate(&shear(f, k)?, &shear(g, k)?, Axis::Y)?;
        if e.artifact_degree == 0 {
            return Ok(e.torus_part.degree().unwrap_or(0));
        }
    }
    Err(Error::BoundaryArtifact(MAX_SHEARS))
}

/// Coordinate changes tried before giving up on boundary artifacts.
pub const MAX_SHEARS: usize = 5;

/// Primitive integer polynomial `∏_u σ_u(R)` normalized to positive leading
/// coefficient and unit content.
pub fn galois_norm_poly(r: &CycPoly) -> Result<Vec<BigInt>> {
    if r.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let coords = r.integral_coords();
    let field = r.field.clone();
    let units = field.units();
    let phi = field.degree();
    let deg = r.coeffs.len() - 1;
    // Every embedded coefficient is bounded by the coordinate length L, so
    // each conjugate has length ≤ L and the product has coefficients ≤ L^φ.
    let length: BigInt = coords.iter().flat_map(|c| c.iter()).map(|x| x.abs()).sum();
    let bits = phi as u64 * length.bits() + 2;
    let out_len = deg * phi + 1;
    let mut crt = Crt::new(out_len);
    for q in SplitPrimes::new(field.conductor()) {
        let root = modp::root_of_unity(field.conductor(), q);
        let qb = BigInt::from(q);
        let red: Vec<Vec<u64>> =
            coords.iter().map(|c| c.iter().map(|x| u64::try_from(x.mod_floor(&qb)).unwrap()).collect()).collect();
        let mut prod = alloc::vec![1u64];
        for &u in &units {
            let z = modp::pow_mod(root, u, q);
            let conj: Vec<u64> = red.iter().map(|c| modp::poly_eval(c, z, q)).collect();
            prod = modp::poly_mul(&prod, &conj, q);
        }
        prod.resize(out_len, 0);
        crt.add(q, &prod);
        if crt.modulus.bits() > bits {
            break;
        }
    }
    Ok(primitive_part(crt.symmetric()))
}

fn primitive_part(mut s: Vec<BigInt>) -> Vec<BigInt> {
    while s.last().is_some_and(|c| c.is_zero()) {
        s.pop();
    }
    let content = s.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if s.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    let content = content * sign;
    s.iter().map(|c| c / &content).collect()
}

/// Mahler measure of `galois_norm_poly(r)`, computed from the roots of the
/// complex conjugates of `r` and the exact leading coefficient of the norm.
/// Returns the norm as well.
pub fn norm_mahler_measure(r: &CycPoly) -> Result<(Vec<BigInt>, Estimate)> {
    let s = galois_norm_poly(r)?;
    let lead = ln_abs_int(s.last().unwrap());
    let (_, core) = r.strip_x();
    let mut est = Estimate::exact(lead);
    if core.coeffs.len() > 1 {
        for u in core.field.units() {
            let (c, err) = core.embed(u);
            est = est + log_plus_roots(&c, &err);
        }
    }
    Ok((s, est))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::TorsionPoint;
    use crate::num::q;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn split_system() {
        let f = LaurentPoly::from_ints(&[(&[1, 0], 1), (&[0, 0], -2)]).unwrap();
        let g = LaurentPoly::from_ints(&[(&[0, 1], 1), (&[0, 0], -3)]).unwrap();
        let r = resultant(&f, &g, Axis::Y).unwrap();
        assert_eq!(r, CycPoly::from_rational(&[q(-2), q(1)]));
        let r = resultant(&f, &g, Axis::X).unwrap();
        assert_eq!(r, CycPoly::from_rational(&[q(-3), q(1)]));
    }

    #[test]
    fn parallel_lines_meet_only_on_the_boundary() {
        let f = LaurentPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        let g = LaurentPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 2), (&[0, 1], 1)]).unwrap();
        let e = resultant_eliminate(&f, &g, Axis::Y).unwrap();
        assert_eq!(e.resultant.degree(), Some(1));
        assert_eq!(e.zero_order, 1);
        assert_eq!(e.torus_part.degree(), Some(0));
        assert_eq!(torus_solution_count(&f, &g).unwrap(), 0);
    }

    #[test]
    fn twisted_line() {
        let f = LaurentPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        let t = TorsionPoint::new(5, &[1, 2]).unwrap();
        let g = f.twist(&t).unwrap();
        let r = resultant(&f, &g, Axis::Y).unwrap();
        let k = CyclotomicField::new(5);
        let z = |e: i64| Cyclotomic::monomial(&k, q(1), e);
        // Res_y(1 + x + y, 1 + ζx + ζ²y) = (ζ² − 1) + (ζ² − ζ)x up to sign.
        let c0 = z(2).sub(&z(0));
        let c1 = z(2).sub(&z(1));
        let expect = CycPoly::new(&k, alloc::vec![c0.clone(), c1.clone()]);
        let neg = CycPoly::new(&k, alloc::vec![c0.neg(), c1.neg()]);
        assert!(r == expect || r == neg, "{r:?}");
        assert_eq!(torus_solution_count(&f, &g).unwrap(), 1);
    }

    #[test]
    fn common_component_is_rejected() {
        let f = LaurentPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        let h = LaurentPoly::from_ints(&[(&[0, 0], 2), (&[1, 1], 1)]).unwrap();
        let g = f.mul(&h).unwrap();
        assert!(matches!(resultant_eliminate(&f, &g, Axis::Y), Err(Error::ImproperIntersection(_))));
        // A shared factor in x alone only shows up in the other resultant.
        let c = LaurentPoly::from_ints(&[(&[0, 0], -2), (&[1, 0], 1)]).unwrap();
        let g2 = LaurentPoly::from_ints(&[(&[0, 0], 3), (&[0, 1], 1)]).unwrap();
        let a = f.mul(&c).unwrap();
        let b = g2.mul(&c).unwrap();
        assert!(matches!(resultant_eliminate(&a, &b, Axis::Y), Err(Error::ImproperIntersection(_))));
    }

    #[test]
    fn norms() {
        let k3 = CyclotomicField::new(3);
        let r = CycPoly::new(&k3, alloc::vec![Cyclotomic::monomial(&k3, q(-1), 1), Cyclotomic::one(&k3)]);
        assert_eq!(galois_norm_poly(&r).unwrap(), ints(&[1, 1, 1]));
        let k4 = CyclotomicField::new(4);
        let r = CycPoly::new(&k4, alloc::vec![Cyclotomic::monomial(&k4, q(-1), 1), Cyclotomic::from_rational(&k4, q(2))]);
        assert_eq!(galois_norm_poly(&r).unwrap(), ints(&[1, 0, 4]));
        let r = CycPoly::from_rational(&[q(-3), q(6)]);
        assert_eq!(galois_norm_poly(&r).unwrap(), ints(&[-1, 2]));
        // Galois stability.
        let k7 = CyclotomicField::new(7);
        let r = CycPoly::new(
            &k7,
            alloc::vec![Cyclotomic::monomial(&k7, q(3), 2).add(&Cyclotomic::one(&k7)), Cyclotomic::monomial(&k7, q(-2), 5)],
        );
        assert_eq!(galois_norm_poly(&r).unwrap(), galois_norm_poly(&r.galois(3)).unwrap());
    }

    #[test]
    fn structured_mahler_measure_matches_generic() {
        let k7 = CyclotomicField::new(7);
        let r = CycPoly::new(
            &k7,
            alloc::vec![
                Cyclotomic::monomial(&k7, q(3), 2).add(&Cyclotomic::one(&k7)),
                Cyclotomic::monomial(&k7, q(-2), 5),
                Cyclotomic::from_rational(&k7, q(5)),
            ],
        );
        let (s, m) = norm_mahler_measure(&r).unwrap();
        let generic = super::super::mahler::mahler_measure(&s);
        assert!((m.value - generic.value).abs() < 1e-9, "{m:?} {generic:?}");
        assert!(m.error < 1e-9);
    }
}
