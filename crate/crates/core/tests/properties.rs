use descent_roots::bounds::{grid_min, search_radius};
use descent_roots::descent::{build_step, residual_tail, DEFAULT_SHRINK};
use descent_roots::verify::separated_roots;
use descent_roots::{find_all_roots, find_root, ComplexNumber, Polynomial, SolverConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn complex(range: f64) -> impl Strategy<Value = ComplexNumber> {
    (-range..range, -range..range).prop_map(|(re, im)| ComplexNumber::new(re, im))
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(complex(10.0), 2..=max_degree + 1)
        .prop_filter("nonzero leading coefficient", |c| {
            c.last().unwrap().norm() > 1e-3
        })
        .prop_map(Polynomial::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn taylor_shift_matches_shifted_evaluation(p in polynomial(12), a in complex(2.0), z in complex(2.0)) {
        let exact = p.eval(z + a);
        let s = p.taylor_shift(a);
        // componentwise scale of the shifted evaluation: sum |s_j| |z|^j
        let magnitude: f64 = s.coeffs().iter().rev().fold(0.0, |acc, c| acc * z.norm() + c.norm());
        prop_assert!((s.eval(z) - exact).norm() <= 1e-9 * exact.norm().max(magnitude).max(1.0));
    }

    #[test]
    fn normalized_constant_is_exactly_one(p in polynomial(12), a in complex(3.0)) {
        prop_assume!(p.eval(a).norm() > 0.0);
        prop_assert_eq!(p.normalize_at(a).unwrap().coeffs()[0], ComplexNumber::new(1.0, 0.0));
    }

    #[test]
    fn deflating_a_generating_root_leaves_no_remainder(
        roots in prop::collection::vec(complex(2.0), 1..10),
        lead in complex(5.0),
        pick in any::<prop::sample::Index>(),
    ) {
        prop_assume!(lead.norm() > 1e-3);
        let p = Polynomial::from_roots(&roots, lead);
        let r = roots[pick.index(roots.len())];
        let max_coeff = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let (q, rem) = p.deflate(r);
        prop_assert_eq!(q.degree(), p.degree() - 1);
        prop_assert!(rem.norm() <= 1e-9 * (1.0 + max_coeff));
    }

    #[test]
    fn horner_vanishes_at_single_root(r in complex(100.0)) {
        let p = Polynomial::from_roots(&[r], ComplexNumber::new(1.0, 0.0));
        prop_assert!(p.eval(r).norm() <= 1e-12 * (1.0 + r.norm()));
    }

    #[test]
    fn step_descends_with_certified_bound(p in polynomial(12), a in complex(3.0)) {
        prop_assume!(p.eval(a).norm() > 0.0);
        let step = build_step(&p, a, DEFAULT_SHRINK).unwrap();
        prop_assert!(p.eval(step.landing).norm() < p.eval(a).norm());
        prop_assert!(step.rho > 0.0 && step.rho < step.rho1.min(step.rho2).min(1.0));
        prop_assert!(step.predicted_bound < 1.0);

        let q = p.normalize_at(a).unwrap();
        let w = step.offset();
        let pull = step.pull();
        let tail = residual_tail(&q, step.m, w).norm();
        prop_assert!(tail < pull);
        let turned = step.a_m * step.zeta.powu(step.m as u32);
        prop_assert!((turned + step.a_m.norm()).norm() <= 1e-12 * step.a_m.norm());
        let x = step.remark_center();
        prop_assert!((q.eval(w) - x).norm() < 1.0 - x);
    }

    #[test]
    fn landing_ignores_overall_scale(p in polynomial(8), a in complex(2.0), k in complex(5.0)) {
        prop_assume!(p.eval(a).norm() > 0.0 && k.norm() > 1e-2);
        let plain = build_step(&p, a, DEFAULT_SHRINK).unwrap();
        let scaled = build_step(&p.scaled(k), a, DEFAULT_SHRINK).unwrap();
        prop_assert_eq!(plain.m, scaled.m);
        prop_assert!((plain.landing - scaled.landing).norm() <= 1e-9 * (1.0 + plain.landing.norm()));
    }

    #[test]
    fn boundary_floor_exceeds_center_value(p in polynomial(12)) {
        let region = search_radius(&p).unwrap();
        prop_assert!(region.boundary_floor > region.center_value);
        prop_assert!(region.radius >= 1.0);
    }
}

#[test]
fn solver_traces_decrease_and_stay_near_the_search_disc() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let cfg = SolverConfig {
        record_trace: true,
        ..Default::default()
    };
    for degree in (1..=10).cycle().take(60) {
        let roots = separated_roots(&mut rng, degree);
        let p = Polynomial::from_roots(&roots, ComplexNumber::new(1.0, 0.0));
        let region = search_radius(&p).unwrap();
        let start = grid_min(&p, &region, cfg.resolution);
        let search = find_root(&p, start, &cfg).unwrap();
        let trace = search.trace.unwrap();
        assert_eq!(trace.iterates.first().unwrap().0, start);
        assert!(trace.iterates.windows(2).all(|w| w[1].1 < w[0].1));
        assert!(trace
            .iterates
            .iter()
            .all(|(z, _)| z.norm() <= region.radius + 1.0));

        let report = find_all_roots(&p, &cfg).unwrap();
        assert_eq!(report.roots.len(), degree);
        assert_eq!(report.traces.len(), degree);
        for t in &report.traces {
            assert!(t.iterates.windows(2).all(|w| w[1].1 < w[0].1));
        }
        let cap = cfg.tol_residual * p.scale() * 10.0;
        assert!(report.residuals.iter().all(|&r| r <= cap));
    }
}

#[test]
fn solver_is_deterministic() {
    let p = Polynomial::from_pairs(&[[1.0, 2.0], [0.0, 0.0], [-3.0, 1.0], [0.5, 0.0], [2.0, -1.0]]);
    let cfg = SolverConfig::default();
    assert_eq!(
        find_all_roots(&p, &cfg).unwrap(),
        find_all_roots(&p, &cfg).unwrap()
    );
}

#[test]
fn unpolished_roots_are_still_close() {
    let p = Polynomial::from_real(&[-120.0, 274.0, -225.0, 85.0, -15.0, 1.0]);
    let cfg = SolverConfig {
        polish: false,
        ..Default::default()
    };
    let report = find_all_roots(&p, &cfg).unwrap();
    for k in 1..=5 {
        let target = ComplexNumber::new(k as f64, 0.0);
        assert!(report.roots.iter().any(|r| (r - target).norm() <= 1e-6));
    }
}
