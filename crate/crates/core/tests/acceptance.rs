//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the checked tolerances (run with `--nocapture` to see
//! them). Criterion 10 (CLI determinism and exit codes) lives in the CLI
//! crate's acceptance suite.

use eva_triage_core::analysis::{
    chi_squared_gof, cumulative_to_disjoint, return_curve, return_level,
};
use eva_triage_core::blocking::{
    aggregate_subperiods, extract_block_maxima, ArrivalSeries, BlockConfig, PartialPolicy,
};
use eva_triage_core::distributions::{GevParams, NormalParams, PoissonParams};
use eva_triage_core::estimation::{fit_mle, fit_pwm, pwm_b};
use eva_triage_core::rng;
use eva_triage_core::triage_sim::{
    generate_arrivals, perceived_quality, run_simulation, run_simulation_with,
    ArrivalAttributes, Core, Policy, SimConfig,
};

fn frechet_fit() -> GevParams {
    GevParams::new(8.3540, 4.2832, 0.8903).unwrap()
}

fn assert_close(label: &str, actual: f64, expected: f64, tol: f64) {
    assert!(
        (actual - expected).abs() <= tol,
        "{label}: {actual} vs {expected} (tol {tol})"
    );
}

#[test]
fn criterion_1_gev_cumulative_probabilities() {
    let p = frechet_fit();
    let expected = [
        (25.0, 0.8298),
        (50.0, 0.9263),
        (75.0, 0.9542),
        (100.0, 0.9672),
        (125.0, 0.9746),
        (150.0, 0.9794),
        (175.0, 0.9827),
        (200.0, 0.9852),
    ];
    for (z, want) in expected {
        assert_close(&format!("gev cdf at {z}"), p.cdf(z), want, 0.005);
    }
    println!("criterion 1 PASS: GEV CDF matches the predicted cumulative probabilities at 8 thresholds (+/- 0.005)");
}

#[test]
fn criterion_2_central_tendency_baselines() {
    let n = NormalParams::new(11.84, 17.44).unwrap();
    assert_close("normal cdf at 25", n.cdf(25.0), 0.7747, 0.005);
    assert_close("normal cdf at 50", n.cdf(50.0), 0.9876, 0.005);
    let p = PoissonParams::new(11.84).unwrap();
    assert_close("poisson cdf at 25", p.cdf(25), 0.99987, 5e-4);
    println!("criterion 2 PASS: Normal(11.84, 17.44) and Poisson(11.84) baselines match (+/- 0.005 / 5e-4)");
}

#[test]
fn criterion_3_blocking_pipeline_counts() {
    // 476 synthetic days with some variation.
    let counts: Vec<u64> = (0..476).map(|i| (i * 7 % 23) as u64).collect();
    let series = ArrivalSeries::new(counts, None).unwrap();

    let promote = BlockConfig::default();
    let agg = aggregate_subperiods(&series, &promote);
    assert_eq!(agg.values.len(), 158, "sub-period count");
    assert_eq!(agg.dropped_tail_days, 2);
    let bm = extract_block_maxima(&agg.values, &promote).unwrap();
    assert_eq!(bm.n_blocks(), 40, "blocks under promote");

    let drop = BlockConfig {
        partial_policy: PartialPolicy::Drop,
        ..BlockConfig::default()
    };
    let bm_drop = extract_block_maxima(&agg.values, &drop).unwrap();
    assert_eq!(bm_drop.n_blocks(), 39, "blocks under drop");
    println!("criterion 3 PASS: 476 days -> 158 sub-periods; 40 block maxima (promote) / 39 (drop)");
}

#[test]
fn criterion_4_estimator_recovery() {
    let truth = frechet_fit();
    let data = truth.sample(2000, 7);
    let mle = fit_mle(&data).unwrap();
    assert_close("MLE shape", mle.params.shape(), 0.8903, 0.10);
    assert!(
        (mle.params.scale() - 4.2832).abs() / 4.2832 <= 0.10,
        "MLE scale {} off by more than 10%",
        mle.params.scale()
    );
    assert_close("MLE location", mle.params.location(), 8.3540, 0.5);

    let pwm_truth = GevParams::new(0.0, 1.0, 0.2).unwrap();
    let pwm_data = pwm_truth.sample(5000, 21);
    let pwm = fit_pwm(&pwm_data).unwrap();
    assert_close("PWM location", pwm.params.location(), 0.0, 0.05);
    assert_close("PWM scale", pwm.params.scale(), 1.0, 0.05);
    assert_close("PWM shape", pwm.params.shape(), 0.2, 0.05);
    println!("criterion 4 PASS: MLE recovery at n=2000 (xi +/- 0.10, sigma +/- 10%, mu +/- 0.5); PWM recovery at n=5000 (+/- 0.05 each)");
}

#[test]
fn criterion_5_pwm_moments() {
    let data = [1.0, 2.0, 3.0, 4.0];
    // Hand-computed plotting weights: b1 = (1/4)(0 + (1/3)*2 + (2/3)*3 + 4)
    // = 5/3; the 1.666667 in the criterion text is that value rounded.
    assert_close("b0", pwm_b(&data, 0).unwrap(), 2.5, 1e-9);
    assert_close("b1", pwm_b(&data, 1).unwrap(), 5.0 / 3.0, 1e-9);
    assert_close("b2", pwm_b(&data, 2).unwrap(), 1.25, 1e-9);
    println!("criterion 5 PASS: probability-weighted moments of [1,2,3,4] are (2.5, 5/3, 1.25) to 1e-9");
}

#[test]
fn criterion_6_quantile_round_trip_and_gumbel_limit() {
    for &xi in &[-0.4, 0.0, 0.8903] {
        let p = GevParams::new(8.3540, 4.2832, xi).unwrap();
        let mut q = 0.001;
        while q < 0.999 {
            let z = p.quantile(q).unwrap();
            assert!(
                (p.cdf(z) - q).abs() < 1e-9,
                "round trip at q={q}, xi={xi}: {}",
                p.cdf(z)
            );
            q += 0.0005;
        }
    }
    let near = GevParams::new(8.3540, 4.2832, 1e-9).unwrap();
    let exact = GevParams::new(8.3540, 4.2832, 0.0).unwrap();
    let mut z = -10.0;
    while z <= 60.0 {
        assert!(
            (near.cdf(z) - exact.cdf(z)).abs() < 1e-6,
            "Gumbel-limit gap at z={z}"
        );
        z += 0.1;
    }
    println!("criterion 6 PASS: quantile/CDF round trip < 1e-9 for xi in {{-0.4, 0, 0.8903}}; xi->0 continuity gap < 1e-6");
}

#[test]
fn criterion_7_return_levels() {
    let p = frechet_fit();
    let decade = return_level(&p, 10.0).unwrap();
    assert_close("closed-form level at T=10", decade.level, 39.218, 0.01);

    // Independent bisection on the CDF.
    let (mut lo, mut hi) = (4.0, 1.0e5);
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if p.cdf(mid) < 0.9 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert_close("bisection agreement", decade.level, 0.5 * (lo + hi), 1e-6);

    let grid: Vec<f64> = (0..200).map(|i| 1.1 + i as f64 * 2.0).collect();
    let curve = return_curve(&p, &grid).unwrap();
    for w in curve.windows(2) {
        assert!(w[0].period < w[1].period && w[0].level < w[1].level);
    }
    println!("criterion 7 PASS: T=10 level 39.218 +/- 0.01, bisection agreement to 1e-6, curve strictly monotone");
}

#[test]
fn criterion_8_gof_oracle() {
    let report = chi_squared_gof(&[30, 8, 2], &[0.70, 0.25, 0.05], 40, 0).unwrap();
    // chi2 = 4/28 + 4/10 = 19/35 by hand.
    assert_close("chi2", report.chi2, 19.0 / 35.0, 1e-12);
    assert_close("chi2 (rounded form)", report.chi2, 0.542857, 1e-6);
    assert_eq!(report.dof, 2);
    // dof-2 survival oracle: exp(-chi2/2) = 0.7622898 (the criterion's
    // printed 0.76231 rounds an intermediate; the oracle value is frozen
    // here and the p-value must match it).
    let oracle = (-report.chi2 / 2.0).exp();
    assert_close("p against exp(-chi2/2)", report.p_value, oracle, 1e-12);
    assert_close("p frozen value", report.p_value, 0.7622898, 1e-5);

    let perfect = chi_squared_gof(&[28, 10, 2], &[0.70, 0.25, 0.05], 40, 0).unwrap();
    assert_eq!(perfect.chi2, 0.0);
    assert_eq!(perfect.p_value, 1.0);

    // The cumulative observed column differences cleanly; the CLI-level
    // refusal of cumulative edge specs is exercised in the CLI acceptance
    // suite.
    let (_, counts) = cumulative_to_disjoint(
        &[25.0, 50.0, 75.0, 100.0, 125.0, 150.0, 175.0, 200.0],
        &[34, 35, 37, 37, 40, 40, 40, 40],
        40,
    )
    .unwrap();
    assert_eq!(counts, vec![34, 1, 2, 0, 3, 0, 0, 0, 0]);
    println!("criterion 8 PASS: chi2 = 19/35, p matches exp(-chi2/2) to 1e-12 (0.7622898 +/- 1e-5), chi2=0 -> p=1");
}

fn sim_cfg(seed: u64, policy: Policy) -> SimConfig {
    SimConfig {
        horizon_days: 30,
        capacity_per_day: 10.0,
        baseline_rate: 5.0,
        shock_prob: 0.1,
        shock_law: frechet_fit(),
        policy,
        triage_trigger_multiple: 3.0,
        triage_trigger_return_period: None,
        accurate_sort_cost: 0.2,
        triage_sort_cost: 0.05,
        assessment_noise: 0.0,
        attributes: ArrivalAttributes::default(),
        seed,
    }
}

#[test]
fn criterion_9_simulator_guarantees() {
    // Conservation across 1000 randomized configurations.
    let policies = [
        Policy::Traditional,
        Policy::Larrey,
        Policy::Wilson { threshold: 0.35 },
        Policy::Fcfs,
        Policy::Gggn,
        Policy::Lsft,
        Policy::Mfs,
    ];
    for i in 0..1000u64 {
        let mut cfg = sim_cfg(rng::derive_seed(3000, i), policies[(i % 7) as usize]);
        cfg.horizon_days = 1 + (i % 37) as u32;
        cfg.capacity_per_day = 0.5 + (i % 11) as f64 * 2.0;
        cfg.baseline_rate = (i % 9) as f64;
        cfg.shock_prob = (i % 10) as f64 / 10.0;
        cfg.assessment_noise = if i % 3 == 0 { 0.2 } else { 0.0 };
        let report = run_simulation(&cfg).unwrap();
        assert_eq!(
            report.processed + report.discarded + report.final_backlog,
            report.total_arrivals,
            "conservation violated for config {i}"
        );
    }

    // Identical seeds give byte-identical serialized reports.
    let cfg = sim_cfg(77, Policy::Wilson { threshold: 0.3 });
    let a = serde_json::to_string(&run_simulation(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_simulation(&cfg).unwrap()).unwrap();
    assert_eq!(a, b, "reports differ between identical runs");

    // GGGN processes at least as many cores as every policy on exhaustively
    // checkable single-day overload instances, and exactly the brute-force
    // subset optimum.
    for instance in 0..60u64 {
        let mut stream = rng::stream(9000, 0, instance);
        let n = 3 + (rand::RngCore::next_u64(&mut stream) % 13) as usize; // <= 15
        let cores: Vec<Core> = (0..n)
            .map(|i| {
                let r = rand::RngCore::next_u64(&mut stream);
                Core {
                    id: i as u64,
                    arrival_day: 1,
                    quality: ((r >> 8) % 1000) as f64 / 1000.0,
                    defects: (r % 5) as u32,
                    demand: ((r >> 20) % 1000) as f64 / 1000.0,
                    proc_time: 0.5 + (r % 16) as f64 * 0.5,
                }
            })
            .collect();
        let capacity = 2.0 + (instance % 9) as f64 * 1.5;

        let run_policy = |policy: Policy| {
            let mut cfg = sim_cfg(1, policy);
            cfg.horizon_days = 1;
            cfg.capacity_per_day = capacity;
            cfg.accurate_sort_cost = 0.0;
            cfg.triage_sort_cost = 0.0;
            run_simulation_with(&cfg, |_| cores.clone()).unwrap().processed
        };

        let gggn = run_policy(Policy::Gggn);
        for policy in [
            Policy::Traditional,
            Policy::Larrey,
            Policy::Wilson { threshold: 0.0 },
            Policy::Fcfs,
            Policy::Lsft,
            Policy::Mfs,
        ] {
            let other = run_policy(policy);
            assert!(
                gggn >= other,
                "GGGN {gggn} < {} {other} on instance {instance}",
                policy.name()
            );
        }

        let mut best = 0u64;
        for mask in 0u32..(1 << n) {
            let mut total = 0.0;
            let mut count = 0u64;
            for (i, c) in cores.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    total += c.proc_time;
                    count += 1;
                }
            }
            if total <= capacity {
                best = best.max(count);
            }
        }
        assert_eq!(gggn, best, "GGGN not subset-optimal on instance {instance}");
    }

    // Error-proof inspection: perceived quality is bitwise the true quality.
    let cfg = sim_cfg(5, Policy::Fcfs);
    for day in 1..=10 {
        for core in generate_arrivals(&cfg, day) {
            assert_eq!(
                perceived_quality(&cfg, &core).to_bits(),
                core.quality.to_bits()
            );
        }
    }
    println!("criterion 9 PASS: conservation on 1000 configs, byte-identical reports, GGGN subset-optimal on 60 exhaustive instances, noise-free perception bitwise exact");
}
