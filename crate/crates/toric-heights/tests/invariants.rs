use proptest::prelude::*;
use toric_heights::concave::{PaConcave, mixed_integral_exact};
use toric_heights::cyclotomic::{LaurentPoly, TorsionPoint};
use toric_heights::lattice::{LatticePolytope, minkowski_sum, mixed_volume};
use toric_heights::num::{Q, q, qf};
use toric_heights::verify::cycle_height_exact;

fn polygon() -> impl Strategy<Value = LatticePolytope> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 3..7)
        .prop_filter_map("flat", |pts| LatticePolytope::from_points(2, &pts).ok().filter(|p| p.affine_dim() == 2))
}

fn lifted() -> impl Strategy<Value = PaConcave> {
    (prop::collection::vec(-8i64..=8, 4), prop::collection::vec(prop::collection::vec(0i64..=2, 2), 0..3)).prop_map(
        |(vals, extra)| {
            let mut pts: Vec<(Vec<Q>, Q)> = vec![
                (vec![q(0), q(0)], qf(vals[0], 2)),
                (vec![q(1), q(0)], qf(vals[1], 2)),
                (vec![q(0), q(1)], qf(vals[2], 2)),
            ];
            for e in extra {
                pts.push((vec![q(e[0]), q(e[1])], qf(vals[3], 3)));
            }
            PaConcave::lifted(2, pts).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mixed_volume_is_symmetric_and_additive(a in polygon(), b in polygon(), c in polygon()) {
        let ab = mixed_volume(&[&a, &b]).unwrap();
        prop_assert_eq!(&ab, &mixed_volume(&[&b, &a]).unwrap());
        let bc = minkowski_sum(&b, &c).unwrap();
        prop_assert_eq!(mixed_volume(&[&a, &bc]).unwrap(), ab + mixed_volume(&[&a, &c]).unwrap());
    }

    #[test]
    fn mixed_volume_ignores_translation(a in polygon(), b in polygon(), m in prop::collection::vec(-4i64..=4, 2)) {
        prop_assert_eq!(mixed_volume(&[&a.translate(&m), &b]).unwrap(), mixed_volume(&[&a, &b]).unwrap());
        prop_assert_eq!(mixed_volume(&[&a.scale(2), &b]).unwrap(), q(2) * mixed_volume(&[&a, &b]).unwrap());
    }

    #[test]
    fn mixed_integral_shifts_by_constants(f in lifted(), g in lifted(), h in lifted(), c in -6i64..=6) {
        let base = mixed_integral_exact(&[&f, &g, &h]).unwrap();
        let moved = f.add_constant(&q(c));
        let shifted = mixed_integral_exact(&[&moved, &g, &h]).unwrap();
        let mv = mixed_volume(&[&g.domain().unwrap(), &h.domain().unwrap()]).unwrap();
        prop_assert_eq!(shifted, base + q(c) * mv);
    }

    #[test]
    fn legendre_dual_is_an_involution(f in lifted(), x in prop::collection::vec(0i64..=4, 2)) {
        let x = vec![qf(x[0], 4), qf(x[1], 4)];
        prop_assert_eq!(f.legendre_dual().legendre_dual().evaluate(&x).unwrap(), f.evaluate(&x).unwrap());
    }
}

#[test]
fn cycle_height_is_galois_invariant() {
    let f = LaurentPoly::from_ints(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]).unwrap();
    let g = LaurentPoly::from_ints(&[(&[0, 0], 2), (&[1, 0], -1), (&[0, 1], 3)]).unwrap();
    let id = TorsionPoint::identity(2);
    let heights: Vec<f64> = [1, 2, 3]
        .iter()
        .map(|&u| {
            let t = TorsionPoint::new(7, &[u, 2 * u]).unwrap();
            cycle_height_exact(&f, &g, (&id, &t)).unwrap().height.value
        })
        .collect();
    for h in &heights[1..] {
        assert!((h - heights[0]).abs() < 1e-9, "{heights:?}");
    }
}
