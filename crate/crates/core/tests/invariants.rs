use mslv::io::{Column, CurveSeries};
use mslv::{gases, Branch, Mslv, MslvError};
use proptest::prelude::*;

fn methane() -> Mslv {
    Mslv::reduced(&gases::methane_reduced()).unwrap()
}

/// Volume on either branch, parametrized by a unit draw.
fn volume(e: &Mslv, solid: bool, u: f64) -> f64 {
    if solid {
        let (lo, hi) = e.branch_interval(Branch::Solid);
        lo + (hi - lo) * u
    } else {
        e.fluid_limit() + 10f64.powf(-3.0 + 4.5 * u)
    }
}

proptest! {
    #[test]
    fn gap_is_never_evaluated(u in 0.0f64..=1.0, t in 0.1f64..5.0) {
        let e = methane();
        let v = e.solid_limit() + (e.fluid_limit() - e.solid_limit()) * u;
        prop_assert!(matches!(e.pressure(v, t), Err(MslvError::ForbiddenRegion(_))));
        prop_assert!(e.potential_bundle(v, t).is_err());
        prop_assert!(e.spinodal_sqrt_t(v).is_err());
    }

    #[test]
    fn phi_v_is_pressure_over_rt(solid: bool, u in 0.0f64..1.0, t in 0.2f64..4.0) {
        let e = methane();
        let v = volume(&e, solid, u);
        let p = e.pressure(v, t).unwrap();
        let phi_v = e.potential_bundle(v, t).unwrap().phi_v;
        let rt = e.gas_constant() * t;
        prop_assert!((phi_v * rt - p).abs() <= 1e-12 * p.abs().max(1.0));
    }

    #[test]
    fn state_gibbs_is_consistent(solid: bool, u in 0.0f64..1.0, t in 0.2f64..4.0) {
        let e = methane();
        let v = volume(&e, solid, u);
        let s = e.state(v, t).unwrap();
        prop_assert_eq!(s.branch, if solid { Branch::Solid } else { Branch::Fluid });
        let gamma = s.epsilon + s.p * v - t * s.sigma;
        prop_assert!((gamma - s.gamma).abs() <= 1e-12 * gamma.abs().max(1.0));
    }

    #[test]
    fn h_slope_is_symmetric(u1 in 0.0f64..1.0, u2 in 0.0f64..1.0) {
        let e = methane();
        let (v1, v2) = (volume(&e, false, u1), volume(&e, false, u2));
        prop_assume!((v1 - v2).abs() > 1e-6);
        let (a, b) = (e.h_slope(v1, v2).unwrap(), e.h_slope(v2, v1).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn tau_root_reproduces_equal_pressures(u1 in 0.0f64..1.0, u2 in 0.0f64..1.0) {
        let e = methane();
        let (v1, v2) = (volume(&e, false, u1), volume(&e, false, u2));
        prop_assume!((v1 - v2).abs() > 1e-3);
        let roots = e.tau_from_h(e.h_slope(v1, v2).unwrap()).unwrap();
        prop_assume!(roots.tau1_valid);
        let t = roots.tau1 * roots.tau1;
        let (p1, p2) = (e.pressure(v1, t).unwrap(), e.pressure(v2, t).unwrap());
        let scale = e.gas_constant() * t / v1.min(v2);
        prop_assert!((p1 - p2).abs() <= 1e-9 * scale, "p1 = {p1}, p2 = {p2}");
    }

    #[test]
    fn csv_and_json_round_trip_bits(rows in prop::collection::vec(prop::array::uniform3(any::<f64>()), 0..20)) {
        let mut s = CurveSeries::new("prop", vec![Column::new("a", "1"), Column::new("b", "K"), Column::new("c", "MPa")]);
        s.meta("seed", 7);
        let finite: Vec<Vec<f64>> = rows.iter().filter(|r| r.iter().all(|x| x.is_finite())).map(|r| r.to_vec()).collect();
        s.push_segment(finite.clone()).unwrap();
        s.push_segment(finite).unwrap();
        for back in [CurveSeries::from_csv(&s.to_csv()).unwrap(), CurveSeries::from_json(&s.to_json()).unwrap()] {
            prop_assert_eq!(back.segments.len(), s.segments.len());
            for (x, y) in back.rows().zip(s.rows()) {
                prop_assert!(x.iter().zip(y).all(|(p, q)| p.to_bits() == q.to_bits()));
            }
        }
    }
}
