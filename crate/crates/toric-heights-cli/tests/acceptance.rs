//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_heights::concave::{LiftedPoint, PaConcave, mixed_integral_exact, uniform_perturbation_bound};
use toric_heights::cyclotomic::{
    Cyclotomic, CyclotomicField, ExponentRule, LaurentPoly, SequenceKind, TorsionPoint, quasi_strict_sequence,
    torus_solution_count,
};
use toric_heights::heights::{ArchOptions, MetrizedToricDivisor, limit_height};
use toric_heights::lattice::{LatticePolytope, mixed_volume};
use toric_heights::num::{Q, euler_phi, ord_p, q, qf, to_f64};
use toric_heights::ronkin::{ronkin_arch, ronkin_arch_fibered, ronkin_dual_nonarch};
use toric_heights::verify::{self, adelic_tail, equidistribution_demo, equidistribution_demo_1d, local_error_term};
use toric_heights_cli::{ExperimentConfig, PrimeRange, Problem, fixtures, run};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok { Ok(detail) } else { Err(detail) }
}

fn line() -> LaurentPoly {
    LaurentPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng) -> LaurentPoly {
    loop {
        let k = rng.gen_range(2..=6);
        let mut terms: Vec<(Vec<i64>, Q)> = Vec::new();
        while terms.len() < k {
            let m = vec![rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
            if terms.iter().all(|(e, _)| *e != m) {
                let mut c = 0;
                while c == 0 {
                    c = rng.gen_range(-9..=9);
                }
                terms.push((m, q(c)));
            }
        }
        let f = LaurentPoly::from_rational(2, &terms).unwrap();
        if f.newton_polytope().unwrap().affine_dim() == 2 {
            return f;
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let primes: Vec<u64> = (11..=47).filter(|&p| toric_heights::num::is_prime_u64(p)).collect();
    let mut failures = Vec::new();
    for i in 0..25 {
        let f = random_poly(&mut rng);
        let g = random_poly(&mut rng);
        let n = primes[rng.gen_range(0..primes.len())];
        let t1 = TorsionPoint::new(n, &[rng.gen_range(0..n as i64), rng.gen_range(0..n as i64)]).unwrap();
        let t2 = TorsionPoint::new(n, &[rng.gen_range(1..n as i64), rng.gen_range(0..n as i64)]).unwrap();
        let mv = mixed_volume(&[&f.newton_polytope().unwrap(), &g.newton_polytope().unwrap()]).unwrap();
        let count = torus_solution_count(&f.twist(&t1).unwrap(), &g.twist(&t2).unwrap());
        match count {
            Ok(c) if q(c as i64) == mv => {}
            other => failures.push(format!("pair {i}: MV {mv}, count {other:?}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        failures.is_empty() && secs < 30.0,
        format!("{}/25 pairs with torus count == MV, {secs:.1} s (< 30 s) {}", 25 - failures.len(), failures.join("; ")),
    )
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Q {
    qf(rng.gen_range(-bound * 4..=bound * 4), rng.gen_range(1..=4))
}

fn random_lifted(rng: &mut ChaCha8Rng, n: usize) -> PaConcave {
    let mut pts: Vec<(Vec<Q>, Q)> = Vec::new();
    // Keep most domains full-dimensional.
    if rng.gen_bool(0.8) {
        let base: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
        pts.push((base.iter().map(|&x| q(x)).collect(), random_rational(rng, 2)));
        for i in 0..n {
            let mut v = base.clone();
            v[i] += 1;
            pts.push((v.iter().map(|&x| q(x)).collect(), random_rational(rng, 2)));
        }
    }
    for _ in 0..rng.gen_range(1..=3) {
        pts.push(((0..n).map(|_| q(rng.gen_range(0..=2))).collect(), random_rational(rng, 2)));
    }
    PaConcave::lifted(n, pts).unwrap()
}

fn sample_points(rng: &mut ChaCha8Rng, n: usize, bound: i64, count: usize) -> Vec<Vec<Q>> {
    (0..count).map(|_| (0..n).map(|_| random_rational(rng, bound)).collect()).collect()
}

fn same_values(f: &PaConcave, g: &PaConcave, pts: &[Vec<Q>]) -> bool {
    pts.iter().all(|x| f.evaluate(x).unwrap() == g.evaluate(x).unwrap())
}

fn pa_instance(rng: &mut ChaCha8Rng) -> Vec<String> {
    let n = rng.gen_range(1..=3);
    let mut fails = Vec::new();
    let slots: Vec<PaConcave> = (0..=n).map(|_| random_lifted(rng, n)).collect();
    let f = &slots[0];
    let g = &slots[1];
    let inside = sample_points(rng, n, 3, 12);
    let everywhere = sample_points(rng, n, 4, 12);

    if !same_values(&f.legendre_dual().legendre_dual(), f, &inside) {
        fails.push("involution (lifted)".into());
    }
    let fd = f.legendre_dual();
    if !same_values(&fd.legendre_dual().legendre_dual(), &fd, &everywhere) {
        fails.push("involution (min-affine)".into());
    }
    let lhs = f.sup_convolution(g).unwrap().legendre_dual();
    let rhs = fd.add(&g.legendre_dual()).unwrap();
    if !same_values(&lhs, &rhs, &everywhere) {
        fails.push("dual of sup-convolution".into());
    }

    let refs: Vec<&PaConcave> = slots.iter().collect();
    let mi = mixed_integral_exact(&refs).unwrap();
    let mut perm = refs.clone();
    perm.reverse();
    perm.rotate_left(1);
    if mixed_integral_exact(&perm).unwrap() != mi {
        fails.push("symmetry".into());
    }

    let extra = random_lifted(rng, n);
    let conv = slots[0].sup_convolution(&extra).unwrap();
    let mut with_conv = refs.clone();
    with_conv[0] = &conv;
    let mut with_extra = refs.clone();
    with_extra[0] = &extra;
    if mixed_integral_exact(&with_conv).unwrap() != mi.clone() + mixed_integral_exact(&with_extra).unwrap() {
        fails.push("sup-convolution linearity".into());
    }

    let m: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
    let c = random_rational(rng, 3);
    let point = PaConcave::indicator(&m, c.clone());
    let mut with_point = refs.clone();
    with_point[0] = &point;
    let domains: Vec<LatticePolytope> = slots[1..].iter().map(|s| s.domain().unwrap()).collect();
    let drefs: Vec<&LatticePolytope> = domains.iter().collect();
    if mixed_integral_exact(&with_point).unwrap() != c * mixed_volume(&drefs).unwrap() {
        fails.push("point slot".into());
    }
    fails
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut failures = Vec::new();
    for i in 0..50 {
        for f in pa_instance(&mut rng) {
            failures.push(format!("instance {i}: {f}"));
        }
    }
    check(
        failures.is_empty(),
        format!("50 instances (n <= 3), 6 identities each, {} failures {}", failures.len(), failures.join("; ")),
    )
}

fn jitter(rng: &mut ChaCha8Rng, f: &PaConcave, eps: &Q) -> PaConcave {
    let pts = f
        .lifted_points()
        .unwrap()
        .iter()
        .map(|LiftedPoint { point, value }| (point.clone(), value + eps * qf(rng.gen_range(-1000..=1000), 1000)))
        .collect();
    PaConcave::lifted(f.dim(), pts).unwrap()
}

fn criterion_3() -> Outcome {
    let fx = fixtures();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..20 {
        let n = rng.gen_range(1..=2);
        let slots: Vec<PaConcave> = (0..=n).map(|_| random_lifted(&mut rng, n)).collect();
        for &e in &fx.thresholds.stability_epsilons {
            let eps = toric_heights::num::from_f64(e);
            let moved: Vec<PaConcave> = slots.iter().map(|s| jitter(&mut rng, s, &eps)).collect();
            let a: Vec<&PaConcave> = slots.iter().collect();
            let b: Vec<&PaConcave> = moved.iter().collect();
            let c = uniform_perturbation_bound(&a, &b, &eps).unwrap();
            if !c.holds {
                failures += 1;
            }
            if c.bound > q(0) {
                worst = worst.max(to_f64(&c.difference) / to_f64(&c.bound));
            }
        }
    }
    check(failures == 0, format!("20 instances x eps {{1e-2, 1e-3}}: |dMI| <= C*eps in all cases, worst ratio {worst:.3}"))
}

fn criterion_4() -> Outcome {
    let fx = fixtures();
    let start = Instant::now();
    // (a) Exact dual values at hull vertices.
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut vertex_checks = 0;
    let mut vertex_fail = 0;
    for _ in 0..20 {
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let n = rng.gen_range(1..=2);
        let mut terms: Vec<(Vec<i64>, Q)> = Vec::new();
        for _ in 0..rng.gen_range(2..=5) {
            let m: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            if terms.iter().any(|(e, _)| *e == m) {
                continue;
            }
            let num = (p as i64).pow(rng.gen_range(0..=3)) * rng.gen_range(1..=4);
            let den = (p as i64).pow(rng.gen_range(0..=2));
            terms.push((m, qf(num, den)));
        }
        let f = LaurentPoly::from_rational(n, &terms).unwrap();
        let d = ronkin_dual_nonarch(&f, p).unwrap();
        for lp in d.function.as_pa().unwrap().lifted_points().unwrap() {
            let m: Vec<i64> = lp.point.iter().map(|x| x.to_integer().try_into().unwrap()).collect();
            let c = f.rational_terms().unwrap().into_iter().find(|(e, _)| *e == m).unwrap().1;
            vertex_checks += 1;
            // log|α|_p = −ord_p(α)·log p, in units of log p.
            if lp.value != q(-ord_p(&c, p)) {
                vertex_fail += 1;
            }
        }
    }
    // (b) Archimedean values at the origin, QMC with 2^18 nodes.
    let budget = 1u64 << 18;
    let seg = LaurentPoly::from_ints(&[(&[0], 1), (&[1], 1)]).unwrap();
    let r1 = ronkin_arch(&seg, &[0.0], budget, 4).unwrap();
    let r2 = ronkin_arch(&line(), &[0.0, 0.0], budget, 4).unwrap();
    let m = fx.oracles.mahler_line.value;
    let fib = ronkin_arch_fibered(&line(), [0.0, 0.0]).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok_a = vertex_fail == 0;
    let ok_b1 = r1.value.abs() <= fx.thresholds.ronkin_segment;
    let ok_b2 = (r2.value + m).abs() <= fx.thresholds.ronkin_line;
    check(
        ok_a && ok_b1 && ok_b2 && secs < 60.0,
        format!(
            "(a) {vertex_checks} hull vertices exact, {vertex_fail} mismatches; (b) rho_(1+x)(0) = {:.2e} (tol 1e-4), \
             rho_(1+x+y)(0) + m = {:.2e} (tol 1e-3, QMC err {:.1e}; fibered route {:.2e}); {secs:.1} s",
            r1.value,
            r2.value + m,
            r2.error,
            fib.value + m
        ),
    )
}

fn criterion_5() -> Outcome {
    let fx = fixtures();
    let start = Instant::now();
    let config = ExperimentConfig::new(PrimeRange { start: 101, end: 401 }, fx.pilot.seed);
    let (rows, summary) = run::convergence(&Problem::line_pair(), &config).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let tail = summary.tail_max_abs_dev.unwrap_or(f64::INFINITY);
    let oracle = &fx.oracles.desk_limit;
    let rhs_contains_oracle = (summary.rhs - oracle.value).abs() <= summary.rhs_error + oracle.error;
    let regression = fx.pilot.last_rows.iter().all(|p| {
        rows.iter().any(|r| r.n == p.n && r.s == p.s && r.lhs.is_some_and(|l| (l - p.lhs).abs() <= fx.pilot.lhs_regression_tolerance))
    });
    check(
        rows.len() == 54
            && summary.failed_rows == 0
            && summary.degrees_match
            && tail <= fx.thresholds.convergence_tail
            && summary.rhs_error <= fx.thresholds.rhs_error
            && rhs_contains_oracle
            && regression
            && secs < 600.0,
        format!(
            "{} rows N in 101..401; max |LHS-RHS| over last 3 = {tail:.4} (tol {}); RHS = {:.4} +- {:.4} (tol {}), \
             oracle {} inside: {rhs_contains_oracle}; pilot LHS reproduced: {regression}; {secs:.0} s (< 600 s)",
            rows.len(),
            fx.thresholds.convergence_tail,
            summary.rhs,
            summary.rhs_error,
            fx.thresholds.rhs_error,
            oracle.value
        ),
    )
}

fn criterion_6() -> Outcome {
    let fx = fixtures();
    let arch = ArchOptions::default();
    let d0 = MetrizedToricDivisor::canonical(LatticePolytope::cube(2, 1));
    let mono = LaurentPoly::from_rational(2, &[(vec![2, -1], qf(-6, 5))]).unwrap();
    let a = limit_height(&[&mono, &line()], &[&d0], &arch).unwrap();
    let b = limit_height(&[&line(), &mono], &[&d0], &arch).unwrap();
    let mono_ok = a.total.value.abs() <= fx.thresholds.monomial_limit && b.total.value.abs() <= fx.thresholds.monomial_limit;

    let h = LaurentPoly::from_ints(&[(&[1, 0], 1), (&[0, 0], -2)]).unwrap();
    let fh = line().mul(&h).unwrap();
    let g = line();
    let l_fh = limit_height(&[&fh, &g], &[&d0], &arch).unwrap().total;
    let l_f = limit_height(&[&line(), &g], &[&d0], &arch).unwrap().total;
    let l_h = limit_height(&[&h, &g], &[&d0], &arch).unwrap().total;
    let diff = l_fh.value - l_f.value - l_h.value;
    let tol = l_fh.error + l_f.error + l_h.error;
    check(
        mono_ok && diff.abs() <= tol,
        format!(
            "monomial -6/5 x^2 y^-1: totals {:.1e}, {:.1e} over {} places (tol 1e-9); \
             L(fh,g) - L(f,g) - L(h,g) = {diff:.2e} within combined error {tol:.2e} (f = 1+x+y, h = x-2, g = 1+x+y)",
            a.total.value,
            b.total.value,
            a.contributions.len()
        ),
    )
}

fn seeded_term(n: u64, seed: u64) -> toric_heights::cyclotomic::SequenceTerm {
    quasi_strict_sequence(&SequenceKind::Primes { start: n, end: Some(n), rule: ExponentRule::Seeded(seed) }, 1)
        .unwrap()
        .remove(0)
}

fn criterion_7() -> Outcome {
    let fx = fixtures();
    let terms: Vec<_> = [211, 307, 503].iter().map(|&n| seeded_term(n, fx.pilot.seed)).collect();
    let rows = equidistribution_demo(&line(), &terms).unwrap();
    let m_ok = (rows[0].mahler.value - fx.oracles.mahler_line.value).abs() <= 1e-9;
    let worst = rows.iter().map(|r| r.deviation.abs()).fold(0.0, f64::max);
    let flagged = rows.iter().any(|r| r.flagged);
    let h = LaurentPoly::from_ints(&[(&[1], 1), (&[0], -2)]).unwrap();
    let orders: Vec<u64> = (5..=199).filter(|&n| toric_heights::num::is_prime_u64(n)).collect();
    let one_d = equidistribution_demo_1d(&h, &orders).unwrap();
    let devs: Vec<f64> = one_d.iter().map(|r| r.deviation.abs()).collect();
    let monotone = devs.windows(2).all(|w| w[1] < w[0]);
    let detail: Vec<String> = rows.iter().map(|r| format!("N={} s={} dev={:+.4}", r.order, r.s, r.deviation)).collect();
    check(
        worst <= fx.thresholds.equidist && !flagged && m_ok && monotone,
        format!(
            "1+x+y: {} (tol {}), m(h) matches oracle: {m_ok}; x-2 over {} prime orders 5..199: |dev| strictly decreasing \
             {monotone}, {:.2e} -> {:.2e}",
            detail.join(", "),
            fx.thresholds.equidist,
            orders.len(),
            devs[0],
            devs[devs.len() - 1]
        ),
    )
}

fn criterion_8() -> Outcome {
    let fx = fixtures();
    let d0 = LatticePolytope::cube(2, 1);
    let config = ExperimentConfig::new(PrimeRange { start: 101, end: 401 }, fx.pilot.seed);
    let seq = config.sequence().unwrap();
    let rows = adelic_tail(&line(), &line(), &seq, 100, &d0).unwrap();
    let mut group_ok = true;
    let mut nonpositive = true;
    let mut bounded = true;
    let mut terms = 0;
    for r in &rows {
        bounded &= r.within_bound;
        nonpositive &= r.value <= 0.0;
        for t in &r.terms {
            terms += 1;
            let c = t.log_coefficient();
            let scaled = c.clone() * q(euler_phi(t.order) as i64) / t.degree.clone();
            group_ok &= scaled.is_integer() && (t.value - to_f64(&c) * (t.prime as f64).ln()).abs() <= 1e-12;
            nonpositive &= t.value <= 0.0;
        }
    }
    let zero_rows = rows.iter().filter(|r| r.value == 0.0).count();
    // A pair with nonzero local terms, against the integer norm.
    let g = LaurentPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 4), (&[0, 1], 4)]).unwrap();
    let t5 = TorsionPoint::new(5, &[1, 1]).unwrap();
    let id = TorsionPoint::identity(2);
    let field = CyclotomicField::new(5);
    let u = Cyclotomic::monomial(&field, q(4), 1).sub(&Cyclotomic::one(&field));
    let mut norm_ok = true;
    for p in [3u64, 11, 31] {
        let t = local_error_term(&line(), &g, (&id, &t5), p, &d0).unwrap();
        norm_ok &= t.index_valuation == ord_p(&u.norm(), p) as u64;
    }
    check(
        group_ok && nonpositive && bounded && norm_ok,
        format!(
            "{} rows, {terms} local terms at good p <= 100: all rows <= C log N / phi(N) (C = {}), nonpositive, value group exact; \
             {zero_rows} rows identically 0 (zeta_N - 1 is a unit away from N); nonzero case 1+4x+4y vs ord_p N(4 zeta_5 - 1): {norm_ok}",
            rows.len(),
            verify::tail_constant(&line(), &d0).unwrap()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("BKK degree", criterion_1),
        ("convex calculus", criterion_2),
        ("mixed-integral stability", criterion_3),
        ("Ronkin consistency", criterion_4),
        ("desk-scale limit", criterion_5),
        ("monomial and product laws", criterion_6),
        ("equidistribution", criterion_7),
        ("adelic tail", criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| id.contains(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("{id} PASS ({name}, {secs:.1} s): {d}"),
            Err(d) => {
                failed += 1;
                println!("{id} FAIL ({name}, {secs:.1} s): {d}");
            }
        }
    }
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
