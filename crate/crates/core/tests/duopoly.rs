use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use underreport::{
    Company, DuopolyParams, EquilibriumOptions, MixedLoss, PremiumOrdering, Side, ThetaBound,
};

fn base() -> DuopolyParams {
    let loss = MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap();
    DuopolyParams::new(1.25, 0.97, 0.015, 0.8, 35.853, loss, ThetaBound::CapM).unwrap()
}

fn random_params(rng: &mut ChaCha8Rng) -> DuopolyParams {
    let loss = MixedLoss::gamma(
        rng.random_range(0.5..0.95),
        rng.random_range(0.6..3.0),
        10f64.powf(rng.random_range(-2.5..-1.3)),
    )
    .unwrap();
    let cap = loss.mean() * rng.random_range(1.5..3.5);
    DuopolyParams::new(
        rng.random_range(1.05..1.9),
        rng.random_range(0.5..0.99),
        10f64.powf(rng.random_range(-2.5..-0.7)),
        rng.random_range(0.05..0.95),
        cap,
        loss,
        ThetaBound::CapM,
    )
    .unwrap()
}

fn profit(p: &DuopolyParams, company: Company, t1: f64, t2: f64) -> f64 {
    p.with_premiums(t1, t2).unwrap().reduced_profit(company)
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for side in [Side::Below, Side::Above] {
        let mut done = 0;
        while done < 200 {
            let p = random_params(&mut rng);
            let (lo, hi) = p.theta_range();
            let company = if done % 2 == 0 { Company::One } else { Company::Two };
            let own = rng.random_range(lo + h..hi - h);
            let opp = rng.random_range(lo..hi);
            let below = own < opp;
            if (below != (side == Side::Below)) || (own - opp).abs() < 10.0 * h {
                continue;
            }
            let (t1, t2) = match company {
                Company::One => (own, opp),
                Company::Two => (opp, own),
            };
            let at = p.with_premiums(t1, t2).unwrap();
            let g = at.profit_gradient(company, None).unwrap();
            let fd = match company {
                Company::One => (profit(&p, company, t1 + h, t2) - profit(&p, company, t1 - h, t2)) / (2.0 * h),
                Company::Two => (profit(&p, company, t1, t2 + h) - profit(&p, company, t1, t2 - h)) / (2.0 * h),
            };
            let scale = g.abs().max(fd.abs()).max(1e-3);
            worst = worst.max((g - fd).abs() / scale);
            assert!((g - fd).abs() <= 1e-4 * scale, "{company:?} {side:?} at ({t1}, {t2}): {g} vs {fd}");
            done += 1;
        }
    }
    eprintln!("worst relative gradient error {worst:.2e}");
}

#[test]
fn first_order_residual_is_scaled_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let p = random_params(&mut rng);
        let (lo, hi) = p.theta_range();
        let (t1, t2) = (rng.random_range(lo..hi), rng.random_range(lo..hi));
        if t1 == t2 {
            continue;
        }
        let at = p.with_premiums(t1, t2).unwrap();
        let g = at.profit_gradient(Company::One, None).unwrap();
        let r = at.first_order_residual(None).unwrap();
        // above the kink the residual is the gradient divided by the share
        let expected = if t1 < t2 { g } else { g / at.prob_company_one() };
        assert!((r - expected).abs() <= 1e-10 * (1.0 + expected.abs()), "{r} vs {expected}");
        assert_eq!(r > 0.0, g > 0.0);
    }
}

#[test]
fn one_sided_derivatives_at_the_kink() {
    let p = base().with_premiums(30.0, 30.0).unwrap();
    let h = 1e-6;
    let below = p.profit_gradient(Company::One, Some(Side::Below)).unwrap();
    let above = p.profit_gradient(Company::One, Some(Side::Above)).unwrap();
    let left = (profit(&p, Company::One, 30.0, 30.0) - profit(&p, Company::One, 30.0 - h, 30.0)) / h;
    let right = (profit(&p, Company::One, 30.0 + h, 30.0) - profit(&p, Company::One, 30.0, 30.0)) / h;
    assert!((below - left).abs() < 1e-4 * (1.0 + left.abs()));
    assert!((above - right).abs() < 1e-4 * (1.0 + right.abs()));
    assert!((below - above).abs() > 1e-3, "the kink is genuine away from k2 = 1/2");
}

#[test]
fn stationary_law_is_product_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let (lo, hi) = p.theta_range();
        let at = p.with_premiums(rng.random_range(lo..hi), rng.random_range(lo..hi)).unwrap();
        let d = at.stationary_distribution().unwrap();
        let eta = at.prob_company_one();
        let a = at.loss().cdf(at.closed_form_barrier()).unwrap();
        let expected = [eta * a, eta * (1.0 - a), (1.0 - eta) * a, (1.0 - eta) * (1.0 - a)];
        for (x, e) in d.p.iter().zip(expected) {
            assert!((x - e).abs() < 1e-12);
        }
        assert!(d.residual <= 1e-12);
        for c in [Company::One, Company::Two] {
            let j = at.expected_profit(c).unwrap();
            assert!((j - at.reduced_profit(c)).abs() <= 1e-10 * (1.0 + j.abs()));
        }
    }
}

#[test]
fn best_response_matches_brute_force_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 10_000;
    for _ in 0..50 {
        let p = random_params(&mut rng);
        let (lo, hi) = p.theta_range();
        let opp = rng.random_range(lo..hi);
        let company = if rng.random_bool(0.5) { Company::One } else { Company::Two };
        let step = (hi - lo) / (n - 1) as f64;
        let f = |x: f64| match company {
            Company::One => profit(&p, company, x, opp),
            Company::Two => profit(&p, company, opp, x),
        };
        let (grid_x, grid_f) = (0..n)
            .map(|k| lo + step * k as f64)
            .map(|x| (x, f(x)))
            .fold((lo, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best });
        let br = p.best_response(company, opp).unwrap();
        assert!(f(br) >= grid_f - 1e-12 * (1.0 + grid_f.abs()), "grid beats best response");
        assert!((br - grid_x).abs() <= step * (1.0 + 1e-9), "{company:?} vs {opp}: {br} vs {grid_x}");
    }
}

#[test]
fn interior_best_response_is_stationary_to_rounding() {
    // a BR resolved only to golden-section accuracy jitters at 1e-6 and
    // stalls the damped iteration
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..40 {
        let p = random_params(&mut rng);
        let (lo, hi) = p.theta_range();
        let opp = rng.random_range(lo..hi);
        let br = p.best_response(Company::One, opp).unwrap();
        if br <= lo + 1e-9 || br >= hi - 1e-9 || (br - opp).abs() < 1e-9 {
            continue;
        }
        let g = p.with_premiums(br, opp).unwrap().profit_gradient(Company::One, None).unwrap();
        assert!(g.abs() < 1e-8, "gradient {g:e} at BR {br}");
    }
}

#[test]
fn equilibrium_converges_across_price_sensitivity() {
    let loss = MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap();
    for k in 0..30 {
        let k1 = 0.001 * 200f64.powf(k as f64 / 29.0);
        let p = DuopolyParams::new(1.25, 0.97, k1, 0.8, 35.853, loss, ThetaBound::CapM).unwrap();
        let r = p.nash_equilibrium(EquilibriumOptions::default()).unwrap();
        assert!(r.converged && r.iterations < 100, "k1 = {k1}: {} iterations", r.iterations);
    }
}

#[test]
fn base_equilibrium_matches_reference() {
    let r = base().nash_equilibrium(EquilibriumOptions::default()).unwrap();
    assert!(r.converged && r.residual <= 1e-8);
    assert!((r.theta1 / 35.8293 - 1.0).abs() < 5e-3, "{}", r.theta1);
    assert!((r.theta2 / 33.4501 - 1.0).abs() < 5e-3, "{}", r.theta2);
    assert_eq!(r.ordering, PremiumOrdering::FirstHigher);
    // each premium is a best response to the other
    let at = base();
    assert!((at.best_response(Company::One, r.theta2).unwrap() - r.theta1).abs() < 1e-7);
    assert!((at.best_response(Company::Two, r.theta1).unwrap() - r.theta2).abs() < 1e-7);
}

#[test]
fn equal_preference_gives_symmetric_equilibrium() {
    let loss = MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap();
    let p = DuopolyParams::new(1.25, 0.97, 0.015, 0.5, 35.853, loss, ThetaBound::CapM).unwrap();
    let r = p.nash_equilibrium(EquilibriumOptions::default()).unwrap();
    assert!((r.theta1 - r.theta2).abs() <= 1e-6);
    assert_eq!(r.ordering, PremiumOrdering::Symmetric);
}

#[test]
fn mirrored_preference_swaps_premiums() {
    let loss = MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap();
    let mk = |k2| DuopolyParams::new(1.25, 0.97, 0.03, k2, 40.0, loss, ThetaBound::CapM).unwrap();
    let a = mk(0.2).nash_equilibrium(EquilibriumOptions::default()).unwrap();
    let b = mk(0.8).nash_equilibrium(EquilibriumOptions::default()).unwrap();
    assert!(a.theta1 <= a.theta2 + 1e-6);
    assert!((a.theta1 - b.theta2).abs() < 1e-6 && (a.theta2 - b.theta1).abs() < 1e-6);
    assert!(a.ordering.consistent_with_preference(0.2));
}

#[test]
fn tight_cap_convention_changes_the_equilibrium() {
    let loss = MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap();
    let p = DuopolyParams::new(1.25, 0.97, 0.015, 0.8, 35.853, loss, ThetaBound::CapMOverKappa).unwrap();
    let r = p.nash_equilibrium(EquilibriumOptions::default()).unwrap();
    assert!(r.theta1 <= 35.853 / 1.25 + 1e-12 && r.theta2 <= 35.853 / 1.25 + 1e-12);
}

#[test]
fn non_convergence_is_reported() {
    let r = base()
        .nash_equilibrium(EquilibriumOptions { max_iterations: 2, ..EquilibriumOptions::default() })
        .unwrap();
    assert!(!r.converged);
    assert_eq!(r.iterations, 2);
    assert!(r.residual > 1e-8);
}

#[test]
fn simulation_agrees_with_stationary_law() {
    let p = base().with_premiums(30.0, 27.0).unwrap();
    let b = p.closed_form_barrier();
    let d = p.stationary_distribution().unwrap();
    let sim = p.simulate_chain(b, 1_000_000, 42).unwrap();
    for s in 0..4 {
        let z = (sim.frequencies[s] - d.p[s]) / sim.frequency_se[s];
        assert!(z.abs() < 4.0, "state {s}: z = {z}");
    }
    for (k, c) in [Company::One, Company::Two].into_iter().enumerate() {
        let z = (sim.profits[k] - p.reduced_profit(c)) / sim.profit_se[k];
        assert!(z.abs() < 4.0, "profit {k}: z = {z}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn barrier_lies_between_scaled_premiums(t1 in 14.2..35.8f64, t2 in 14.2..35.8f64, k2 in 0.01..0.99f64) {
        let loss = MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap();
        let p = DuopolyParams::new(1.25, 0.97, 0.015, k2, 35.853, loss, ThetaBound::CapM)
            .unwrap().with_premiums(t1, t2).unwrap();
        let b = p.closed_form_barrier();
        let s = 0.97 * 0.25;
        prop_assert!(b >= s * t1.min(t2) - 1e-12 && b <= s * t1.max(t2) + 1e-12);
        let eta = p.prob_company_one();
        prop_assert!(eta > 0.0 && eta < 1.0);
        let d = p.stationary_distribution().unwrap();
        prop_assert!((d.p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(d.p.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn best_response_is_admissible(opp in 14.2..35.8f64, k2 in 0.05..0.95f64, k1 in 0.002..0.2f64) {
        let loss = MixedLoss::gamma(0.9, 1.2, 0.0085).unwrap();
        let p = DuopolyParams::new(1.25, 0.97, k1, k2, 35.853, loss, ThetaBound::CapM).unwrap();
        let (lo, hi) = p.theta_range();
        for c in [Company::One, Company::Two] {
            let br = p.best_response(c, opp.clamp(lo, hi)).unwrap();
            prop_assert!(br >= lo && br <= hi);
        }
    }
}
