//! Acceptance gate: one test per criterion, each printing a PASS line with
//! its measured numbers (a failed assert is the FAIL line). Criterion 5 is
//! long-running and ignored by default; criterion 6 needs a local copy of
//! the email-Eu-core dataset and skips with instructions when absent.
//!
//! Run: cargo test --test acceptance -- --nocapture

use std::path::Path;
use std::time::Instant;

use lsmcd::certificate::{certify, expected_matrix_lambda2};
use lsmcd::harness::{
    ingest_edge_list, monotone_trend_violations, replicate_appendix_d, run_sweep, score_real,
    GridRange, ReplicationConfig, SweepSpec,
};
use lsmcd::mle::{brute_force_mle, mle_objective};
use lsmcd::model::{generate, ModelParams};
use lsmcd::moments::{closed_form, monte_carlo, GaussianMoments};
use lsmcd::regimes::{check_impossible, check_mle, check_sdp, Constants, Verdict};
use lsmcd::rng::{self, tag};
use lsmcd::solver::{solve, success_test, SolverConfig};

/// Criterion 1: every closed-form moment matches its Monte-Carlo estimate
/// (1e6 samples) within 4 standard errors over the 18-point grid.
#[test]
fn criterion_1_moments_oracle_equivalence() {
    let start = Instant::now();
    let mut worst: (f64, String) = (0.0, String::new());
    let mut checked = 0usize;
    for d in [1usize, 2, 3] {
        for mu in [0.5f64, 1.0] {
            for sigma in [0.2f64, 0.3, 0.5] {
                let params = ModelParams::new(4, d, mu, sigma).unwrap();
                let exact = closed_form(d, mu, sigma).unwrap();
                let mc = monte_carlo(&params, 1_000_000, 20_615).unwrap();
                let pairs: [(f64, &str, f64, f64); 7] = [
                    (exact.p, "p", mc.p.value, mc.p.std_error),
                    (exact.p_prime, "p_prime", mc.p_prime.value, mc.p_prime.std_error),
                    (exact.q, "q", mc.q.value, mc.q.std_error),
                    (exact.q_prime, "q_prime", mc.q_prime.value, mc.q_prime.std_error),
                    (exact.r, "r", mc.r.value, mc.r.std_error),
                    (exact.s0, "s0", mc.s0.value, mc.s0.std_error),
                    (exact.s1, "s1", mc.s1.value, mc.s1.std_error),
                ];
                for (truth, name, est, se) in pairs {
                    let sigmas = (est - truth).abs() / se;
                    checked += 1;
                    if sigmas > worst.0 {
                        worst = (sigmas, format!("{name} at d={d} mu={mu} sigma={sigma}"));
                    }
                    assert!(
                        sigmas <= 4.0,
                        "moment {name} at d={d} mu={mu} sigma={sigma}: \
                         closed form {truth} vs MC {est} (SE {se}) is {sigmas:.2} SEs off"
                    );
                }
            }
        }
    }
    println!(
        "PASS: criterion 1 (moments oracle) — {checked} comparisons, worst {:.2} SE ({}), {:.1?}",
        worst.0, worst.1, start.elapsed()
    );
}

/// Criterion 2: over >= 100 trials spanning n in {50, 100, 200}, every
/// certificate with psd and lambda_2 > eig_tol implies SDP success by the
/// 0.001 entrywise criterion. Zero counterexamples allowed.
#[test]
fn criterion_2_certificate_soundness() {
    let start = Instant::now();
    // Sigma values straddle the recovery boundary so both certified and
    // uncertified instances occur; the implication is only testable on the
    // certified ones.
    let plan: &[(usize, usize)] = &[(50, 40), (100, 40), (200, 20)];
    let sigmas = [0.05f64, 0.15, 0.3, 0.5];
    let mut trials = 0usize;
    let mut certified = 0usize;
    let mut counterexamples = 0usize;
    let config = SolverConfig::default();
    for &(n, count) in plan {
        let params_of = |sigma: f64| ModelParams::new(n, 2, 1.0, sigma).unwrap();
        for t in 0..count {
            let sigma = sigmas[t % sigmas.len()];
            let seed = rng::derive(
                criterion_seed(2),
                &[tag::TRIAL, n as u64, rng::f64_tag(sigma), t as u64],
            );
            let instance = generate(&params_of(sigma), seed).unwrap();
            trials += 1;
            let report = certify(&instance.adjacency, &instance.labels, None).unwrap();
            if !(report.psd && report.unique) {
                continue;
            }
            certified += 1;
            let solution = solve(&instance.adjacency, &config).unwrap();
            // The criterion is the 0.001 entrywise test; convergence of the
            // residuals is not required for it (the best iterate is scored).
            let ok = success_test(&solution.y, &instance.labels).unwrap();
            if !ok {
                counterexamples += 1;
                eprintln!(
                    "counterexample: n={n} sigma={sigma} trial={t} \
                     (converged={}, residuals {:.2e}/{:.2e})",
                    solution.converged, solution.primal_residual, solution.dual_residual
                );
            }
        }
    }
    assert!(trials >= 100);
    assert_eq!(
        counterexamples, 0,
        "{counterexamples} certified trials failed the SDP success criterion"
    );
    println!(
        "PASS: criterion 2 (certificate soundness) — {trials} trials, \
         {certified} certified, 0 counterexamples, {:.1?}",
        start.elapsed()
    );
}

/// Criterion 3: on 50 small instances, exact_flag implies the rounded labels
/// attain the brute-force MLE optimum.
#[test]
fn criterion_3_solver_oracle_agreement() {
    let start = Instant::now();
    let mut exact_count = 0usize;
    let mut trials = 0usize;
    for (i, n) in [4usize, 6, 8, 10, 12].iter().enumerate() {
        for t in 0..10u64 {
            // Spread over signal strengths; some solves are exact, some not.
            let mu = [0.5, 1.0, 2.0][(t % 3) as usize];
            let sigma = [0.1, 0.3, 0.6][((t / 3) % 3) as usize];
            let params = ModelParams::new(*n, 2, mu, sigma).unwrap();
            let seed = rng::derive(criterion_seed(3), &[tag::TRIAL, i as u64, t]);
            let instance = generate(&params, seed).unwrap();
            trials += 1;
            let solution = solve(&instance.adjacency, &SolverConfig::default()).unwrap();
            if !solution.exact_flag {
                continue;
            }
            exact_count += 1;
            let oracle = brute_force_mle(&instance.adjacency, false).unwrap();
            let attained =
                mle_objective(&instance.adjacency, &solution.rounded_labels).unwrap();
            assert_eq!(
                attained, oracle.best_objective,
                "n={n} trial={t}: exact_flag solution scores {attained}, \
                 oracle optimum is {}",
                oracle.best_objective
            );
        }
    }
    assert_eq!(trials, 50);
    println!(
        "PASS: criterion 3 (solver-oracle agreement) — 50 instances, \
         {exact_count} exact, all optima matched, {:.1?}",
        start.elapsed()
    );
}

/// Criterion 4: the expectation-matrix second eigenvalue equals np(1-q)
/// within 1e-8*n wherever p(1+q) <= 1.
#[test]
fn criterion_4_expectation_matrix_lambda2() {
    let start = Instant::now();
    let mut checked = 0usize;
    for n in [10usize, 50, 100, 300] {
        for p in [0.1f64, 0.3, 0.5, 0.8] {
            for q in [0.0f64, 0.2, 0.5, 0.9] {
                if p * (1.0 + q) > 1.0 {
                    continue;
                }
                let moments = GaussianMoments {
                    p,
                    p_prime: p * p,
                    q,
                    q_prime: q * q,
                    r: p * p,
                    s0: q * q,
                    s1: q * q,
                };
                let out = expected_matrix_lambda2(n, &moments).unwrap();
                checked += 1;
                assert!(
                    out.agrees,
                    "n={n} p={p} q={q}: claimed {} vs numeric {}",
                    out.claimed, out.numeric
                );
                assert!((out.claimed - n as f64 * p * (1.0 - q)).abs() < 1e-12);
            }
        }
    }
    assert!(checked >= 30);
    println!(
        "PASS: criterion 4 (expectation-matrix lambda2) — {checked} grid points, {:.1?}",
        start.elapsed()
    );
}

/// Criterion 5: full-scale replication at n = 5000 (hours of eigensolves).
/// Run with: cargo test --test acceptance criterion_5 -- --ignored --nocapture
#[test]
#[ignore = "n=5000 eigendecompositions run for hours; criterion allows running by flag"]
fn criterion_5_large_n_replication() {
    let start = Instant::now();
    let config = ReplicationConfig {
        seed: criterion_seed(5),
        ..ReplicationConfig::default()
    };
    let out = replicate_appendix_d(&config).unwrap();
    let low_sigma = &out[0];
    let high_sigma = &out[1];
    // Allowed deviation: at most one trial per condition.
    assert!(
        low_sigma.positive_lambda2 >= 9,
        "sigma=0.05: {}/10 certified, expected 10/10 (9 allowed)",
        low_sigma.positive_lambda2
    );
    assert!(
        high_sigma.positive_lambda2 <= 1,
        "sigma=0.3: {}/10 certified, expected 0/10 (1 allowed)",
        high_sigma.positive_lambda2
    );
    println!(
        "PASS: criterion 5 (n=5000 replication) — sigma 0.05: {}/10, sigma 0.3: {}/10, {:.1?}",
        low_sigma.positive_lambda2,
        high_sigma.positive_lambda2,
        start.elapsed()
    );
}

/// Criterion 6: email-Eu-core (two largest departments, n = 201) scores
/// flip-maximized accuracy >= 0.95. Needs the dataset on disk.
#[test]
fn criterion_6_email_eu_core() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/email-eu-core");
    let edges = dir.join("email-Eu-core.txt");
    let labels = dir.join("email-Eu-core-department-labels.txt");
    if !edges.exists() || !labels.exists() {
        println!(
            "SKIP: criterion 6 (email-Eu-core) — dataset not present.\n\
             To run it, place the SNAP files at:\n\
             {}\n  {}\n\
             from https://snap.stanford.edu/data/email-Eu-core.html\n\
             (download email-Eu-core.txt.gz and \
             email-Eu-core-department-labels.txt.gz, gunzip both).",
            edges.display(),
            labels.display()
        );
        return;
    }
    let start = Instant::now();
    let graph = ingest_edge_list(&edges, Some(&labels)).unwrap();
    assert_eq!(graph.n(), 201, "two largest clusters should give n=201");
    assert_eq!(
        graph.cluster_sizes,
        Some((109, 92)),
        "expected cluster sizes 109 and 92"
    );
    let result = score_real(&graph, &SolverConfig::default()).unwrap();
    assert!(
        result.accuracy >= 0.95,
        "accuracy {} below 0.95",
        result.accuracy
    );
    let target = 0.9552;
    println!(
        "PASS: criterion 6 (email-Eu-core) — n={}, accuracy {:.4} \
         (target {target} +- 0.01: {}), signed_rank_one={}, {:.1?}",
        result.n,
        result.accuracy,
        if (result.accuracy - target).abs() <= 0.01 {
            "hit"
        } else {
            "missed"
        },
        result.signed_rank_one,
        start.elapsed()
    );
}

/// Criterion 7: 5x5 phase-diagram sweep at n=300 — SDP success
/// non-increasing in sigma at each mu (99% trend test), high success in the
/// small-sigma / large-mu corner.
///
/// Solver budget: the iteration cap and tolerance are sized so the whole
/// 150-solve sweep finishes well inside the hour. At n=300 every measured
/// instance that reaches the entrywise success threshold does so thousands
/// of iterations before the residuals reach 1e-3, so the looser tolerance
/// changes which solves are labeled converged, not which succeed. Six SDP
/// trials per cell keep the corner and trend checks decisive while staying
/// within budget on a single-core runner.
#[test]
fn criterion_7_phase_diagram_shape() {
    let start = Instant::now();
    let spec = SweepSpec {
        n: 300,
        d: 2,
        mu_grid: GridRange::new(0.2, 1.0, 0.2).unwrap(),
        sigma_grid: GridRange::new(0.1, 0.5, 0.1).unwrap(),
        trials_cert: 10,
        trials_sdp: 6,
        seed: criterion_seed(7),
        constants: Constants::default(),
        solver: SolverConfig {
            max_iters: 3000,
            feas_tol: 1e-3,
            ..SolverConfig::default()
        },
    };
    let cells = run_sweep(&spec).unwrap();
    assert_eq!(cells.len(), 25);

    for mu in spec.mu_grid.values() {
        let row: Vec<(usize, usize)> = cells
            .iter()
            .filter(|c| c.mu_norm == mu)
            .map(|c| (c.sdp_successes, c.trials_sdp))
            .collect();
        assert_eq!(row.len(), 5);
        let violations = monotone_trend_violations(&row);
        assert!(
            violations.is_empty(),
            "mu={mu}: success rate rises with sigma: {violations:?} (row {row:?})"
        );
    }

    let corner = |mu: f64, sigma: f64| {
        cells
            .iter()
            .find(|c| c.mu_norm == mu && c.sigma == sigma)
            .unwrap()
    };
    let best = corner(1.0, 0.1);
    let worst = corner(0.2, 0.5);
    assert!(
        best.sdp_successes >= 5,
        "large-mu/small-sigma corner succeeded only {}/{}",
        best.sdp_successes,
        best.trials_sdp
    );
    assert!(
        worst.sdp_successes <= 1,
        "small-mu/large-sigma corner succeeded {}/{}",
        worst.sdp_successes,
        worst.trials_sdp
    );
    let total_violations: usize = cells.iter().map(|c| c.consistency_violations).sum();
    assert_eq!(total_violations, 0, "certificate/SDP consistency broke");
    println!(
        "PASS: criterion 7 (phase diagram) — 25 cells, corners {}/{} vs {}/{}, \
         monotone per row, {:.1?}",
        best.sdp_successes,
        best.trials_sdp,
        worst.sdp_successes,
        worst.trials_sdp,
        start.elapsed()
    );
}

/// Criterion 8: regime formulas reproduce hand-evaluated sides to 1e-12
/// relative on the documented fixture points.
#[test]
fn criterion_8_regime_formula_regression() {
    let start = Instant::now();
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);

    // Impossibility at n=10, p=0.5: q=0.99 holds, q=0.1 fails.
    let m = |p: f64, q: f64| GaussianMoments {
        p,
        p_prime: p * p,
        q,
        q_prime: q * q,
        r: p * p,
        s0: q * q,
        s1: q * q,
    };
    let imp = check_impossible(10, &m(0.5, 0.99)).unwrap();
    assert!(rel(imp.condition.lhs, 0.005025167926750725) < 1e-12);
    assert!(rel(imp.condition.rhs, 0.020794415416798356) < 1e-12);
    assert!(imp.condition.holds);
    let imp = check_impossible(10, &m(0.5, 0.1)).unwrap();
    assert!(rel(imp.condition.lhs, 1.1512925464970227) < 1e-12);
    assert!(!imp.condition.holds);
    // Zero separation (q = 1): lhs is exactly 0, always impossible.
    let imp = check_impossible(10, &m(0.5, 1.0)).unwrap();
    assert_eq!(imp.condition.lhs, 0.0);
    assert!(imp.condition.holds);

    // Closed-form moments at the documented reference point d=2, mu=1,
    // sigma=0.3, then the MLE and SDP condition sides at n=300 with default
    // constants. All reference numbers are independent hand evaluations of
    // the documented formulas.
    let moments = closed_form(2, 1.0, 0.3).unwrap();
    assert!(rel(moments.p, 0.735_294_117_647_058_9) < 1e-12);
    assert!(rel(moments.p_prime, 0.581_395_348_837_209_3) < 1e-12);
    assert!(rel(moments.q, 0.052_803_570_334_300_51) < 1e-12);
    assert!(rel(moments.q_prime, 0.009_550_490_250_295_01) < 1e-12);
    assert!(rel(moments.r, 0.550_297_160_466_652) < 1e-12);
    assert!(rel(moments.s0, 0.005_545_296_462_337_091) < 1e-12);
    assert!(rel(moments.s1, 0.050_105_898_016_576_236) < 1e-12);

    let mle = check_mle(300, &moments, 13.0, 500.0).unwrap();
    assert!(rel(mle.signal_condition.lhs, 0.4850676234707227) < 1e-12);
    assert!(rel(mle.signal_condition.rhs, 64.17735801817058) < 1e-12);
    assert!(rel(mle.variance_condition.lhs, 2.9543459954259745) < 1e-12);
    assert!(rel(mle.variance_condition.rhs, 0.005555555555555556) < 1e-12);
    assert!(rel(mle.success_bound, -0.71) < 1e-12);

    let sdp = check_sdp(300, &moments, 1.0, 500.0, 500.0).unwrap();
    assert!(rel(sdp.precondition.lhs, 0.7741202723046329) < 1e-12);
    assert!(sdp.precondition.holds);
    assert!(rel(sdp.c0_condition.rhs, 9.73445542341325) < 1e-12);
    assert!(rel(sdp.d_condition.lhs, 1488450.4902548874) < 1e-12);
    assert!(rel(sdp.a_condition.lhs, 886.3037986277928) < 1e-12);
    assert!(rel(sdp.success_bound, -2.34) < 1e-12);

    // At sigma = 0.05 the SDP precondition fails: p(1+q) > 1.
    let tight = closed_form(2, 1.0, 0.05).unwrap();
    let sdp = check_sdp(300, &tight, 1.0, 500.0, 500.0).unwrap();
    assert!(rel(sdp.precondition.lhs, 1.0089659069684946) < 1e-12);
    assert!(!sdp.precondition.holds);
    assert_eq!(sdp.verdict, Verdict::PreconditionViolated);

    println!(
        "PASS: criterion 8 (regime formula regression) — all fixtures at 1e-12, {:.1?}",
        start.elapsed()
    );
}

/// Distinct master seed per criterion so runs stay independent.
fn criterion_seed(k: u64) -> u64 {
    0xACCE_0000 + k
}
