//! Local error terms at good primes and the adelic tail.
//!
//! For `t = (t₁, t₂)` put `a = t₁*f`, `b = t₂*g`. If `supp b = supp a + m₀`
//! the error term at a place `v` is
//! `deg · log max_{m<m'} |a_{m−m₀} b_{m'} − a_{m'−m₀} b_m|_v`, and 0 otherwise.
//! Its value depends on the place of `ℚ(ζ_L)` above `p`; averaging over the
//! Galois orbit of `t` gives
//! `−deg · v_p([ℤ[ζ_L] : I]) · log p / φ(L)`, where `I` is the ideal generated
//! by the differences (`p ∤ L`, so every place above `p` is unramified). That
//! average is what [`local_error_term`] returns.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::cyclotomic::modp::{self, inv_mod, poly_gcd, reduce, trim};
use crate::cyclotomic::{Cyclotomic, CyclotomicField, LaurentPoly, SequenceTerm, TorsionPoint};
use crate::lattice::{LatticePolytope, mixed_volume};
use crate::num::{Q, euler_phi, is_prime_u64, q, to_f64};
use crate::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

/// Galois-orbit average of the local error term at one prime.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalTerm {
    pub prime: u64,
    /// Conductor `L` of the field of the twisted pair.
    pub order: u64,
    /// `deg_{D₀}(Z(f))`.
    pub degree: Q,
    /// `v_p` of the index of the ideal of differences.
    pub index_valuation: u64,
    pub value: f64,
}

impl LocalTerm {
    /// The exact rational `c` with `value = c · log p`.
    pub fn log_coefficient(&self) -> Q {
        -&self.degree * q(self.index_valuation as i64) / q(euler_phi(self.order) as i64)
    }
}

fn exps_bounds(f: &LaurentPoly, axis: usize) -> (i64, i64) {
    let e: Vec<i64> = f.terms().map(|(m, _)| m[axis]).collect();
    (*e.iter().min().unwrap(), *e.iter().max().unwrap())
}

/// Coefficients mod `p` of the slice `{m[axis] = level}` as a polynomial in
/// the other variable, shifted to start at exponent 0.
fn slice_mod(terms: &[(Vec<i64>, Q)], axis: usize, level: i64, low: i64, p: u64) -> Vec<u64> {
    let other = 1 - axis;
    let mut out = Vec::new();
    for (m, c) in terms.iter().filter(|(m, _)| m[axis] == level) {
        let k = (m[other] - low) as usize;
        if out.len() <= k {
            out.resize(k + 1, 0);
        }
        out[k] = reduce(c, p).expect("p-unit coefficient");
    }
    out
}

fn strip_low(mut v: Vec<u64>) -> Vec<u64> {
    trim(&mut v);
    let k = v.iter().position(|&c| c != 0).unwrap_or(0);
    v.drain(..k);
    v
}

/// Whether the reduction of `f` mod `p` is irreducible in `𝔽̄_p[x^±, y^±]`,
/// for polynomials of degree ≤ 1 in one of the variables. Others are
/// reported as unsupported.
fn reduction_irreducible(f: &LaurentPoly, p: u64) -> Result<bool> {
    let terms = f.rational_terms().ok_or(Error::NonRationalCoefficient)?;
    for axis in [1, 0] {
        let (lo, hi) = exps_bounds(f, axis);
        let (olo, _) = exps_bounds(f, 1 - axis);
        match hi - lo {
            0 => return Ok(strip_low(slice_mod(&terms, axis, lo, olo, p)).len() <= 2),
            1 => {
                let a = slice_mod(&terms, axis, hi, olo, p);
                let b = slice_mod(&terms, axis, lo, olo, p);
                return Ok(strip_low(poly_gcd(&a, &b, p)).len() == 1);
            }
            _ => {}
        }
    }
    Err(Error::Unsupported("irreducibility probe needs degree ≤ 1 in some variable".into()))
}

/// Whether `p` is outside the bad set for `(f, g)` twisted by points of
/// order dividing `n`: `p` odd, `p ∤ n`, every coefficient a `p`-unit, and
/// both reductions irreducible in the torus.
pub fn is_good_prime(f: &LaurentPoly, g: &LaurentPoly, n: u64, p: u64) -> Result<bool> {
    if !is_prime_u64(p) {
        return Err(Error::BadPlace(p));
    }
    if p == 2 || n % p == 0 {
        return Ok(false);
    }
    for h in [f, g] {
        if h.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: h.dim() });
        }
        let terms = h.rational_terms().ok_or(Error::NonRationalCoefficient)?;
        let pb = BigInt::from(p);
        if terms.iter().any(|(_, c)| c.is_zero() || c.numer().is_multiple_of(&pb) || c.denom().is_multiple_of(&pb)) {
            return Ok(false);
        }
    }
    Ok(reduction_irreducible(f, p)? && reduction_irreducible(g, p)?)
}

/// Generators of the ideal of differences, or `None` if the supports are not
/// translates.
fn differences(a: &LaurentPoly, b: &LaurentPoly) -> Option<Vec<Cyclotomic>> {
    if a.len() != b.len() {
        return None;
    }
    let (fm, _) = a.terms().next()?;
    let (gm, _) = b.terms().next()?;
    let m0: Vec<i64> = gm.iter().zip(fm).map(|(x, y)| x - y).collect();
    let back = |m: &[i64]| -> Vec<i64> { m.iter().zip(&m0).map(|(x, y)| x - y).collect() };
    let supp: Vec<(Vec<i64>, Cyclotomic)> = b.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    if supp.iter().any(|(m, _)| a.coefficient(&back(m)).is_none()) {
        return None;
    }
    let mut out = Vec::new();
    for (i, (m, bm)) in supp.iter().enumerate() {
        for (m2, bm2) in &supp[i + 1..] {
            let u = a.coefficient(&back(m)).unwrap().mul(bm2).sub(&a.coefficient(&back(m2)).unwrap().mul(bm));
            if !u.is_zero() {
                out.push(u);
            }
        }
    }
    Some(out)
}

/// Largest `k` with `p^k < 2^62`.
fn precision(p: u64) -> (u32, u64) {
    let mut k = 0;
    let mut m: u64 = 1;
    while let Some(next) = m.checked_mul(p).filter(|&x| x < 1 << 62) {
        m = next;
        k += 1;
    }
    (k, m)
}

fn mulm(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn val(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v.min(cap)
}

/// Inverse of a unit modulo `m = p^k` by Newton lifting.
fn inv_pk(a: u64, p: u64, m: u64) -> u64 {
    let mut x = inv_mod(a % p, p);
    let mut prec = p;
    while prec < m {
        prec = prec.saturating_mul(prec).min(m);
        // x ← x(2 − a x)
        let ax = mulm(a % prec, x, prec);
        x = mulm(x, (2 + prec - ax) % prec, prec);
    }
    x % m
}

/// `v_p([ℤ[ζ_L] : I])` for the ideal generated by `gens` (`p ∤ L`, every
/// denominator a `p`-unit).
fn index_valuation(field: &CyclotomicField, gens: &[Cyclotomic], p: u64) -> Result<u64> {
    let phi_l: Vec<u64> = field
        .modulus()
        .iter()
        .map(|&c| c.rem_euclid(p as i64) as u64)
        .collect();
    let mut g = phi_l;
    for u in gens {
        let r: Vec<u64> = u.coeffs().iter().map(|c| reduce(c, p).expect("p-integral")).collect();
        g = poly_gcd(&g, &r, p);
        if g.len() <= 1 {
            return Ok(0);
        }
    }
    let (kmax, m) = precision(p);
    let d = field.degree();
    let modulus: Vec<u64> = field.modulus().iter().map(|&c| c.rem_euclid(m as i64) as u64).collect();
    let mb = BigInt::from(m);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(gens.len() * d);
    for u in gens {
        let den = u.denominator();
        let mut r: Vec<u64> = u
            .coeffs()
            .iter()
            .map(|c| (c.numer() * (&den / c.denom())).mod_floor(&mb).to_u64().unwrap())
            .collect();
        for _ in 0..d {
            rows.push(r.clone());
            // r ← ζ·r mod Φ_L (monic).
            let top = r[d - 1];
            r.rotate_right(1);
            r[0] = 0;
            for j in 0..d {
                r[j] = (r[j] + m - mulm(top, modulus[j], m)) % m;
            }
        }
    }
    // Full-pivot elimination over ℤ/p^k; precision drops by each pivot's valuation.
    let mut used_rows = alloc::vec![false; rows.len()];
    let mut used_cols = alloc::vec![false; d];
    let mut total = 0u32;
    for _ in 0..d {
        let prec = kmax - total;
        let mut best: Option<(u32, usize, usize)> = None;
        'scan: for (i, row) in rows.iter().enumerate() {
            if used_rows[i] {
                continue;
            }
            for (c, &x) in row.iter().enumerate() {
                if used_cols[c] {
                    continue;
                }
                let v = val(x, p, prec);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, c));
                    if v == 0 {
                        break 'scan;
                    }
                }
            }
        }
        let Some((v, i, c)) = best.filter(|b| b.0 < prec) else {
            return Err(Error::Unsupported(format!("index valuation at {p} exceeds the working precision p^{kmax}")));
        };
        total += v;
        used_rows[i] = true;
        used_cols[c] = true;
        let pv = modp::pow_mod(p, v as u64, m);
        let unit_inv = inv_pk(rows[i][c] / pv, p, m);
        let pivot = rows[i].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if used_rows[k] || row[c] == 0 {
                continue;
            }
            let factor = mulm(row[c] / pv, unit_inv, m);
            for (x, &y) in row.iter_mut().zip(&pivot) {
                *x = (*x + m - mulm(factor, y, m)) % m;
            }
        }
    }
    Ok(total as u64)
}

/// Orbit-averaged local error term of `(f, g)` at the good prime `p`, with
/// the degree taken against the polytope `d0`.
pub fn local_error_term(
    f: &LaurentPoly,
    g: &LaurentPoly,
    t: (&TorsionPoint, &TorsionPoint),
    p: u64,
    d0: &LatticePolytope,
) -> Result<LocalTerm> {
    let n = t.0.order().lcm(&t.1.order());
    if !is_good_prime(f, g, n, p)? {
        return Err(Error::Invalid(format!("{p} is a bad prime for this pair")));
    }
    let degree = mixed_volume(&[d0, &f.newton_polytope()?])?;
    let a = f.twist(t.0)?;
    let b = g.twist(t.1)?;
    let l = a.conductor().lcm(&b.conductor());
    let field = CyclotomicField::new(l);
    let (a, b) = (a.lift(&field), b.lift(&field));
    let zero = LocalTerm { prime: p, order: l, degree: degree.clone(), index_valuation: 0, value: 0.0 };
    let Some(gens) = differences(&a, &b) else {
        return Ok(zero);
    };
    if gens.is_empty() {
        return Err(Error::Upsilon);
    }
    let v = index_valuation(&field, &gens, p)?;
    let value = -to_f64(&degree) * v as f64 * (p as f64).ln() / euler_phi(l) as f64;
    Ok(LocalTerm { index_valuation: v, value, ..zero })
}

/// The constant in the tail bound `C · log N / φ(N)`: the degree of `Z(f)`.
/// Every difference is `c·(ζ^i − ζ^j)` up to units, and `|N(1 − ζ^k)| ≤ N`.
pub fn tail_constant(f: &LaurentPoly, d0: &LatticePolytope) -> Result<f64> {
    Ok(to_f64(&mixed_volume(&[d0, &f.newton_polytope()?])?))
}

/// One row of the adelic tail: the sum of the local terms over good primes.
#[derive(Clone, Debug, PartialEq)]
pub struct TailRow {
    pub order: u64,
    pub s: u64,
    pub value: f64,
    pub bound: f64,
    pub terms: Vec<LocalTerm>,
    /// Primes up to the bound that were excluded as bad.
    pub skipped: Vec<u64>,
    pub within_bound: bool,
}

/// Tail rows for each term of a sequence, over good primes `p ≤ prime_bound`.
pub fn adelic_tail(
    f: &LaurentPoly,
    g: &LaurentPoly,
    terms: &[SequenceTerm],
    prime_bound: u64,
    d0: &LatticePolytope,
) -> Result<Vec<TailRow>> {
    let c = tail_constant(f, d0)?;
    let mut rows = Vec::with_capacity(terms.len());
    for term in terms {
        let t = (&term.omega.0, &term.omega.1);
        let n = t.0.order().lcm(&t.1.order());
        let mut local = Vec::new();
        let mut skipped = Vec::new();
        for p in (2..=prime_bound).filter(|&p| is_prime_u64(p)) {
            if is_good_prime(f, g, n, p)? {
                local.push(local_error_term(f, g, t, p, d0)?);
            } else {
                skipped.push(p);
            }
        }
        let value: f64 = local.iter().map(|x| x.value).sum();
        let bound = c * (n as f64).ln() / euler_phi(n) as f64;
        rows.push(TailRow {
            order: term.order,
            s: term.s,
            value,
            bound,
            within_bound: value <= 0.0 && -value <= bound,
            terms: local,
            skipped,
        });
    }
    Ok(rows)
}
