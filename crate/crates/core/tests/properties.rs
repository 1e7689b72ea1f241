use lqg_ri::disclosure::{chi, optimal_disclosure, optimal_tag, welfare_gap, OptimalTag};
use lqg_ri::equilibrium::{
    self, branch_set, count_equilibria, f_of_gamma, max_precision, peak_fraction, Branch,
};
use lqg_ri::information::{info_breakdown, mrs_of_gamma};
use lqg_ri::oracle::finite_difference;
use lqg_ri::oracle::fixed_point::{best_response_fixed_points, DEFAULT_SEEDS};
use lqg_ri::params::{welfare_coeffs_from_raw, RawWelfare};
use lqg_ri::variants::{
    calibrate_rigid, fisher_cost, fisher_cost_from_target, rigid_total_info, FisherParams,
};
use lqg_ri::welfare::{self, gamma_star, w_plus, w_zero};
use lqg_ri::{GameParams, Precision, WelfareCoeffs};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = GameParams> {
    (-3.0..0.95f64, 0.2..3.0f64, 0.2..3.0f64, 1e-4..0.5f64)
        .prop_map(|(a, b, l, frac)| GameParams::new(a, b, l, frac * 2.0 * b * b / l).unwrap())
}

fn weights() -> impl Strategy<Value = WelfareCoeffs> {
    (-4.0..6.0f64, -4.0..4.0f64).prop_map(|(z, e)| WelfareCoeffs::new(z, e))
}

proptest! {
    #[test]
    fn branch_inverts_f(p in params(), g in 0.0..0.999f64) {
        let t = f_of_gamma(g, &p).unwrap();
        let set = branch_set(Precision::Finite(t), &p);
        let branch = if g >= peak_fraction(p.alpha) { Branch::Hi } else { Branch::Lo };
        let got = set.get(branch);
        prop_assert!(got.is_some(), "{set:?} missing {branch:?} for gamma {g}");
        prop_assert!((got.unwrap() - g).abs() <= 1e-10 * g.max(1e-3), "{got:?} vs {g}");
    }

    #[test]
    fn branches_straddle_peak(p in params(), u in 0.0..1.0f64) {
        let t = max_precision(&p) * u;
        let set = branch_set(Precision::Finite(t), &p);
        let peak = peak_fraction(p.alpha);
        if let (Some(lo), Some(hi)) = (set.phi_lo, set.phi_hi) {
            prop_assert!(lo <= peak + 1e-12 && peak <= hi + 1e-12);
        }
    }

    #[test]
    fn f_shape(p in params(), x in 0.0..0.998f64, y in 0.0..0.998f64) {
        let (x, y) = if x < y { (x, y) } else { (y, x) };
        prop_assume!(y - x > 1e-6);
        let (fx, fy) = (f_of_gamma(x, &p).unwrap(), f_of_gamma(y, &p).unwrap());
        let peak = peak_fraction(p.alpha);
        if p.alpha <= 0.5 || x >= peak {
            prop_assert!(fy < fx);
        } else if y <= peak {
            prop_assert!(fy > fx);
        }
    }

    #[test]
    fn fixed_points_match_count(p in params(), u in 0.01..1.5f64) {
        let t = u * max_precision(&p);
        let (n, _) = count_equilibria(Precision::Finite(t), &p);
        let fps = best_response_fixed_points(t, &p, &DEFAULT_SEEDS);
        prop_assert_eq!(n, fps.len(), "tau {} fixed points {:?}", t, fps);
    }

    #[test]
    fn moment_identity(p in params(), u in 0.01..1.5f64) {
        for e in equilibrium::equilibria(Precision::Finite(u * max_precision(&p)), &p) {
            let lhs = e.cov_ai_theta * p.beta + p.alpha * e.cov_ai_a;
            prop_assert!((lhs - e.var_ai).abs() <= 1e-12 * e.var_ai.max(1.0));
        }
    }

    #[test]
    fn chain_rule(p in params(), u in 0.01..0.99f64) {
        let t = u * max_precision(&p) + p.tau_theta;
        for g in branch_set(Precision::Finite(t), &p).acquiring() {
            let b = info_breakdown(Precision::Finite(t), g, &p).unwrap();
            prop_assert_eq!(b.total_nats, b.public_nats + b.private_nats);
        }
    }

    #[test]
    fn mrs_increasing_in_alpha(a in -3.0..0.4f64, g in 0.0..0.99f64) {
        let da = 1e-3;
        prop_assert!(mrs_of_gamma(a + da, g).unwrap() > mrs_of_gamma(a, g).unwrap());
    }

    #[test]
    fn welfare_single_peaked(p in params(), w in weights()) {
        let gs = gamma_star(&w, p.alpha).value;
        let mut prev = w_plus(0.0, &w, &p);
        for i in 1..1000 {
            let g = i as f64 / 1000.0;
            let cur = w_plus(g, &w, &p);
            if g <= gs {
                prop_assert!(cur > prev, "rising part at {g}");
            } else if g - 1e-3 >= gs {
                prop_assert!(cur < prev, "falling part at {g}");
            }
            prev = cur;
        }
        if w.harm_criterion(p.alpha) <= 100.0 {
            prop_assert!(w_plus(1.0 - 1e-8, &w, &p) < w_plus(0.9, &w, &p));
        }
        // Past γ* the tail keeps falling all the way to 1.
        let tail: Vec<f64> = (1..=15)
            .map(|k| 1.0 - 10f64.powi(-k))
            .filter(|g| *g > gs)
            .map(|g| w_plus(g, &w, &p))
            .collect();
        prop_assert!(tail.windows(2).all(|x| x[1] < x[0]));
    }

    #[test]
    fn regime_continuity(p in params(), w in weights()) {
        let a = w_plus(0.0, &w, &p);
        let b = w_zero(Precision::Finite(p.f_zero()), &w, &p);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn dispersion_and_volatility_slopes(p in params(), u in 0.05..0.95f64) {
        let t = u * p.f_zero().min(max_precision(&p));
        let phi = |x: f64| equilibrium::branch_value(Branch::Hi, Precision::Finite(x), &p).unwrap();
        let d = finite_difference(|x| welfare::dispersion_plus(phi(x), &p), t, 1e-5 * t);
        prop_assert!(d < 0.0);
        let v = finite_difference(|x| welfare::volatility_plus(phi(x), &p), t, 1e-5 * t);
        if (p.alpha - 0.5).abs() > 1e-3 {
            prop_assert_eq!(v > 0.0, p.alpha < 0.5, "volatility slope {}", v);
        }
    }

    #[test]
    fn chi_rule_matches_direct_comparison(p in params(), w in weights()) {
        let gs = gamma_star(&w, p.alpha);
        let tp = equilibrium::f_of_gamma(gs.value, &p).unwrap();
        let env = if gs.interior {
            w_plus(gs.value, &w, &p)
        } else {
            w_zero(Precision::Finite(tp), &w, &p)
        };
        let direct = env - w_zero(Precision::Infinite, &w, &p);
        let gap = welfare_gap(&w, &p);
        prop_assert!((direct - gap).abs() <= 1e-10 * direct.abs().max(1.0), "{direct} vs {gap}");
        match optimal_tag(&w, p.alpha) {
            OptimalTag::Partial => prop_assert!(direct > 0.0),
            OptimalTag::Full => prop_assert!(direct < 0.0),
            OptimalTag::KnifeEdge => prop_assert!(direct.abs() <= 1e-8),
        }
    }

    #[test]
    fn chi_sign_algebra(w in weights(), a in -3.0..0.95f64) {
        let gs = gamma_star(&w, a);
        if !gs.interior && w.eta > 0.0 {
            prop_assert!(-w.eta < 0.0);
        }
        if gs.interior && w.eta <= 0.0 {
            prop_assert!(chi(&w, a) > 0.0);
        }
    }

    #[test]
    fn optimum_never_prior(p in params(), w in weights()) {
        let sol = optimal_disclosure(&w, &p);
        prop_assume!(!sol.assumption_violated);
        prop_assert!(!sol.optimum.contains(Precision::Finite(p.tau_theta)));
    }

    #[test]
    fn raw_round_trip(p in params(), c1 in -2.0..2.0f64, c2 in -2.0..2.0f64, c3 in -2.0..2.0f64) {
        let raw = RawWelfare { c1, c2, c3, c4: 3.0, c5: -1.0 };
        let via_raw = welfare_coeffs_from_raw(&raw, &p);
        let direct = WelfareCoeffs::new(c1 + c3 / p.beta, c1 + c2 + (1.0 - p.alpha) * c3 / p.beta);
        for g in [0.0, 0.3, 0.9] {
            prop_assert_eq!(w_plus(g, &via_raw, &p), w_plus(g, &direct, &p));
        }
    }

    #[test]
    fn fisher_cost_forms_agree(p in params(), g in 0.01..0.99f64) {
        let fp = FisherParams::from_lambda(p.lambda).unwrap();
        prop_assert_eq!(fp.lambda_equiv * fp.lambda_equiv, fp.c);
        let t = f_of_gamma(g, &p).unwrap();
        let a = fisher_cost(g, &fp);
        let b = fisher_cost_from_target(g, t, &fp, &p);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn rigid_calibration_round_trip(p in params(), u in 0.02..0.98f64) {
        prop_assume!(p.alpha.abs() > 1e-3);
        let t = u * p.f_zero().min(max_precision(&p));
        let tau = Precision::Finite(t);
        let rp = calibrate_rigid(tau, &p).unwrap();
        let phi = equilibrium::branch_value(Branch::Hi, tau, &p).unwrap();
        let flexible = 0.5 * (t / p.tau_theta).ln() - 0.5 * (1.0 - phi).ln();
        let rigid = rigid_total_info(tau, &rp, &p).nats;
        prop_assert!((flexible - rigid).abs() < 1e-12 * flexible.abs().max(1.0));
    }
}

#[test]
fn infinite_precision_is_zero_variance() {
    let p = GameParams::new(0.3, 1.5, 1.0, 0.2).unwrap();
    let expected = 1.5 * 1.5 / (0.7 * 0.7 * 0.2);
    assert_eq!(welfare::volatility_zero(Precision::Infinite, &p), expected);
}

#[test]
fn rigid_slope_decreasing_in_alpha() {
    let rp = lqg_ri::variants::RigidParams::new(0.04, 1.0).unwrap();
    let slopes: Vec<f64> = (0..50)
        .map(|i| {
            let p = GameParams::new(-3.0 + 0.079 * i as f64, 1.0, 1.0, 0.1).unwrap();
            let psi =
                |t: f64| lqg_ri::variants::rigid_private_precision(Precision::Finite(t), &rp, &p);
            (psi(2.0) - psi(1.0)) / 1.0
        })
        .collect();
    assert!(slopes.windows(2).all(|s| s[1] < s[0]), "{slopes:?}");
}
