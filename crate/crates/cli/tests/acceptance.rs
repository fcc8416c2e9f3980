//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Criteria (tolerances pinned in code):
//! 1. Calibration table reproduction, m = 2 row (n = 600, five signal
//!    levels, 500 reps/cell): size within ±0.03 of the published row,
//!    power ≥ 0.99.
//! 2. Same table, m = 28 at Δ = 0.3: size within ±0.03 of 0.054, power
//!    within ±0.1 of 0.752.
//! 3. Error-curve shape on the Δ grid {0, 0.1, …, 0.8} for both the
//!    same-community and equal-sizes tests at n ∈ {200, 600}.
//! 4. Oracle certification of every closed form on the full n ≤ 12 grid.
//! 5. Shadowing symmetry: exact covariance spectra across all null shadows
//!    at small n; two-shadow W_n distributions pass a 1% two-sample KS test
//!    at n = 200 with B = 2000.
//! 6. Boundary restriction fidelity at n = 8 under strong signal.
//! 7. Two-point risk against its normal approximation.
//! 8. Byte-identical outputs for every command under a fixed seed.

use std::process::Command;

use sbmtest::bootstrap::{exact_boundary_covariance, sample_wn_batch};
use sbmtest::likelihood::estimate_pq;
use sbmtest::oracle::{brute_c1_argmax, certify, enumerate_class, two_point_risk};
use sbmtest::properties::{PropertyPair, SizeRegime};
use sbmtest::rng::derive_seed;
use sbmtest::sbm::{sample_sbm, Assignment, SbmModel};
use sbmtest::stats::{ks_critical_value, symmetric_eigenvalues, two_sample_ks};
use sbmtest_cli::simulate::{run_grid, SimGrid};

const MASTER_SEED: u64 = 20260810;
const ALPHA: f64 = 0.05;
const CELL_REPS: usize = 60; // REHEARSAL
const BOOTSTRAP_REPS: usize = 500;

struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        if !ok {
            self.failures.push(detail);
        }
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("{}: PASS", self.name);
        } else {
            println!("{}: FAIL\n  {}", self.name, self.failures.join("\n  "));
            panic!("{} failed:\n  {}", self.name, self.failures.join("\n  "));
        }
    }
}

fn table_grid(m: usize, deltas: Vec<f64>) -> SimGrid {
    SimGrid {
        pair_kind: "same-community",
        n_values: vec![600],
        k: 2,
        delta_values: deltas,
        rho_exponent: 0.3,
        m_values: vec![m],
        m_exponents: vec![],
        m_prime: 1,
        reps: CELL_REPS,
        bootstrap_reps: BOOTSTRAP_REPS,
        alpha: ALPHA,
        radius_constant: 1.0,
        c_k: 2,
        master_seed: MASTER_SEED,
    }
}

#[test]
fn criterion_1_calibration_table_m2() {
    let grid = table_grid(2, vec![0.3, 0.4, 0.5, 0.6, 0.7]);
    let cells = run_grid(&grid).expect("grid runs");
    let published = [0.056, 0.040, 0.060, 0.048, 0.056];
    let mut crit = Criterion::new("criterion 1 (calibration table, m=2)");
    for (cell, &expect) in cells.iter().zip(&published) {
        crit.check(
            (cell.type1 - expect).abs() <= 0.03,
            format!(
                "delta {}: size {} vs published {expect} (tol 0.03)",
                cell.delta, cell.type1
            ),
        );
        let power = 1.0 - cell.type2;
        crit.check(
            power >= 0.99,
            format!("delta {}: power {power} < 0.99", cell.delta),
        );
    }
    crit.finish();
}

#[test]
fn criterion_2_calibration_table_m28() {
    let grid = table_grid(28, vec![0.3]);
    let cells = run_grid(&grid).expect("grid runs");
    let cell = &cells[0];
    let mut crit = Criterion::new("criterion 2 (calibration table, m=28)");
    crit.check(
        (cell.type1 - 0.054).abs() <= 0.03,
        format!("size {} vs published 0.054 (tol 0.03)", cell.type1),
    );
    let power = 1.0 - cell.type2;
    crit.check(
        (power - 0.752).abs() <= 0.1,
        format!("power {power} vs published 0.752 (tol 0.1)"),
    );
    crit.finish();
}

#[test]
fn criterion_3_error_curve_shape() {
    let deltas: Vec<f64> = (0..=8).map(|i| i as f64 / 10.0).collect();
    let mut crit = Criterion::new("criterion 3 (error-curve shape)");
    for kind in ["same-community", "equal-sizes"] {
        let grid = SimGrid {
            pair_kind: kind,
            n_values: vec![200, 600],
            k: 2,
            delta_values: deltas.clone(),
            rho_exponent: 0.3,
            m_values: vec![],
            // The figure's rule m = ⌈(n/K)^0.5 / 2⌉: m = 5 at n = 200,
            // m = 9 at n = 600.
            m_exponents: vec![0.5],
            m_prime: 1,
            reps: CELL_REPS,
            bootstrap_reps: BOOTSTRAP_REPS,
            alpha: ALPHA,
            radius_constant: 1.0,
            c_k: 2,
            master_seed: derive_seed(MASTER_SEED, &[3, kind.len() as u64]),
        };
        let cells = run_grid(&grid).expect("grid runs");
        for cell in &cells {
            let tag = format!("{kind} n={} delta={}", cell.n, cell.delta);
            if cell.delta == 0.0 {
                // Vanishing signal: the test is non-calibrated and rejects
                // far above the nominal level.
                crit.check(
                    cell.type1 >= 0.2,
                    format!("{tag}: size {} not inflated at delta 0", cell.type1),
                );
            }
            if cell.delta >= 0.4 {
                crit.check(
                    (0.02..=0.08).contains(&cell.type1),
                    format!("{tag}: size {} outside [0.02, 0.08]", cell.type1),
                );
            }
            if cell.delta >= 0.5 {
                // "Type-II error goes to zero": at 500 reps, at most 5%.
                crit.check(
                    cell.type2 <= 0.05,
                    format!("{tag}: type2 {} above 0.05", cell.type2),
                );
            }
        }
    }
    crit.finish();
}

#[test]
fn criterion_4_oracle_certification() {
    let report = certify(12, false).expect("grid within guards");
    let mut crit = Criterion::new("criterion 4 (oracle certification, n <= 12)");
    crit.check(
        report.checks.len() > 100,
        format!("only {} checks ran", report.checks.len()),
    );
    for check in &report.checks {
        crit.check(check.passed, format!("{} [{}]", check.name, check.detail));
    }
    crit.finish();
}

#[test]
fn criterion_5_shadowing_symmetry() {
    let mut crit = Criterion::new("criterion 5 (shadowing symmetry)");

    // (a) Exact covariance spectra identical across *all* null shadows on
    // small instances.
    let instances = [
        PropertyPair::same_community(2, 8, 2, SizeRegime::Even).unwrap(),
        PropertyPair::equal_sizes(8, 2, 2).unwrap(),
        PropertyPair::group_community(2, 1, 9, 3, SizeRegime::Uneven { c_k: 2 }).unwrap(),
    ];
    for pair in instances {
        let classes = enumerate_class(&pair).unwrap();
        let d = pair.class_distance().unwrap();
        let (p, q) = (0.6, 0.2);
        let mut reference: Option<(usize, Vec<f64>)> = None;
        for z0 in &classes.c0_members {
            let boundary = pair.boundary(z0, d).unwrap();
            let cov = exact_boundary_covariance(z0, &boundary, p, q).unwrap();
            let spec = symmetric_eigenvalues(&cov, boundary.len());
            match &reference {
                None => reference = Some((boundary.len(), spec)),
                Some((size, ref_spec)) => {
                    crit.check(
                        boundary.len() == *size,
                        format!("{pair:?}: boundary size varies across shadows"),
                    );
                    let close = ref_spec
                        .iter()
                        .zip(&spec)
                        .all(|(a, b)| (a - b).abs() <= 1e-9);
                    crit.check(
                        close,
                        format!("{pair:?}: covariance spectra differ across shadows"),
                    );
                }
            }
        }
    }

    // (b) W_n distributions under two different shadows at n = 200, B = 2000,
    // on the same fitted (p̂, q̂): two-sample KS below the 1% critical value.
    let n = 200;
    let pair = PropertyPair::same_community(2, n, 2, SizeRegime::Even).unwrap();
    let rho = (n as f64 / 2.0).powf(-0.3);
    let truth = pair.shadow_assignment().unwrap();
    let graph = sample_sbm(
        &SbmModel::from_signal(rho, 0.5, truth).unwrap(),
        derive_seed(MASTER_SEED, &[5, 1]),
    );
    let fit = estimate_pq(&graph, &pair, derive_seed(MASTER_SEED, &[5, 2])).unwrap();
    let shadow_a = pair.shadow_assignment().unwrap();
    let mut labels = vec![2u8; n];
    labels[0] = 1;
    labels[1] = 1;
    for l in labels.iter_mut().skip(102) {
        *l = 1;
    }
    let shadow_b = Assignment::new(labels, 2).unwrap();
    assert_eq!(
        pair.membership(&shadow_b).unwrap(),
        sbmtest::properties::Membership::InC0
    );
    let d = pair.class_distance().unwrap();
    let draw = |z0: &Assignment, tag: u64| -> Vec<f64> {
        let a_hat = sample_sbm(
            &SbmModel::new(fit.p_hat, fit.q_hat, z0.clone()).unwrap(),
            derive_seed(MASTER_SEED, &[5, 10 + tag]),
        );
        let boundary = pair.boundary(z0, d).unwrap();
        sample_wn_batch(
            &a_hat,
            z0,
            &boundary,
            fit.p_hat,
            fit.q_hat,
            derive_seed(MASTER_SEED, &[5, 20 + tag]),
            2000,
        )
        .unwrap()
    };
    let wa = draw(&shadow_a, 0);
    let wb = draw(&shadow_b, 1);
    let ks = two_sample_ks(&wa, &wb);
    let critical = ks_critical_value(0.01, wa.len(), wb.len());
    crit.check(
        ks < critical,
        format!("two-shadow KS {ks} at or above 1% critical value {critical}"),
    );
    crit.finish();
}

#[test]
fn criterion_6_boundary_restriction_fidelity() {
    // n = 8, K = 2, strong signal Δ = 0.8 around ρ = 0.5 (p = 0.9, q = 0.1):
    // the enumerated C1 likelihood argmax falls inside the constructed
    // boundary around the null truth in at least 95% of 200 seeded sims.
    let pair = PropertyPair::same_community(2, 8, 2, SizeRegime::Even).unwrap();
    let z_star = pair.shadow_assignment().unwrap();
    let (p, q) = (0.9, 0.1);
    let model = SbmModel::new(p, q, z_star.clone()).unwrap();
    let d = pair.class_distance().unwrap();
    let boundary = pair.boundary(&z_star, d).unwrap();
    let boundary_canon: Vec<Assignment> = boundary
        .members()
        .iter()
        .map(|m| m.assignment.canonical_form())
        .collect();
    let sims = 200;
    let mut hits = 0;
    for s in 0..sims {
        let graph = sample_sbm(&model, derive_seed(MASTER_SEED, &[6, s]));
        let argmax = brute_c1_argmax(&graph, &pair, p, q).unwrap();
        if boundary_canon.contains(&argmax.canonical_form()) {
            hits += 1;
        }
    }
    let mut crit = Criterion::new("criterion 6 (boundary restriction fidelity)");
    crit.check(
        hits * 100 >= sims * 95,
        format!("argmax inside boundary in {hits}/{sims} sims (< 95%)"),
    );
    crit.finish();
}

#[test]
fn criterion_7_two_point_risk() {
    // Balanced construction with n1 = n2 = 200: blocked halves on n = 202,
    // alternative swaps node 0 with node 101.
    let z0 = Assignment::blocked(202, 2).unwrap();
    let mut labels = z0.labels().to_vec();
    labels[0] = 2;
    labels[101] = 1;
    let z1 = Assignment::new(labels, 2).unwrap();
    let me = sbmtest::properties::misaligned_edge_sets(&z0, &z1).unwrap();
    assert_eq!((me.n1(), me.n2()), (200, 200));

    let mut crit = Criterion::new("criterion 7 (two-point risk)");
    let risk = two_point_risk(&z0, &z1, 0.3, 0.2, 10_000, derive_seed(MASTER_SEED, &[7])).unwrap();
    // Normal approximation: 2(1 − Φ(√200·0.1/√0.37)) = 0.0201.
    crit.check(
        (risk.padded - 0.0201).abs() <= 0.01,
        format!("padded risk {} vs normal approximation 0.0201", risk.padded),
    );
    let flat = two_point_risk(&z0, &z1, 0.25, 0.25, 10_000, derive_seed(MASTER_SEED, &[8])).unwrap();
    crit.check(
        (flat.padded - 1.0).abs() <= 0.05,
        format!("p = q risk {} differs from 1", flat.padded),
    );
    crit.finish();
}

#[test]
fn criterion_8_byte_identical_reruns() {
    let bin = env!("CARGO_BIN_EXE_sbmtest");
    let dir = std::env::temp_dir().join(format!("sbmtest-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    // Fixtures: a small planted graph and a score network with groups.
    let z = Assignment::blocked(20, 2).unwrap();
    let graph = sample_sbm(&SbmModel::new(0.9, 0.1, z).unwrap(), 7);
    let mut edges = String::new();
    for (i, j) in graph.edges() {
        edges.push_str(&format!("v{i} v{j}\n"));
    }
    let edge_path = dir.join("edges.txt");
    std::fs::write(&edge_path, edges).unwrap();

    let mut scores = String::new();
    let score_graph = sample_sbm(
        &SbmModel::new(0.9, 0.15, Assignment::blocked(24, 2).unwrap()).unwrap(),
        11,
    );
    for i in 0..24 {
        for j in (i + 1)..24 {
            let s = if score_graph.has_edge(i, j) { 0.99 } else { 0.3 };
            scores.push_str(&format!("p{i} p{j} {s}\n"));
        }
    }
    let score_path = dir.join("scores.txt");
    std::fs::write(&score_path, scores).unwrap();
    let mut groups = String::new();
    for i in 0..4 {
        groups.push_str(&format!("p{i} ga\n"));
    }
    for i in 12..15 {
        groups.push_str(&format!("p{i} gb\n"));
    }
    let group_path = dir.join("groups.txt");
    std::fs::write(&group_path, groups).unwrap();

    let grid_cfg = dir.join("grid.cfg");
    std::fs::write(
        &grid_cfg,
        "pair = same-community\nn_values = 20\nk = 2\ndelta_values = 0.5,0.7\n\
         m_values = 2\nreps = 3\nbootstrap_reps = 100\nseed = 33\n",
    )
    .unwrap();

    let run = |args: &[&str]| -> Vec<u8> {
        let out = Command::new(bin).args(args).output().expect("binary runs");
        assert!(
            out.status.success(),
            "command {:?} failed: {}",
            args,
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };

    let mut crit = Criterion::new("criterion 8 (byte-identical reruns)");
    let commands: Vec<Vec<String>> = vec![
        vec![
            "simulate".into(),
            "--config".into(),
            grid_cfg.display().to_string(),
        ],
        vec![
            "test".into(),
            edge_path.display().to_string(),
            "--pair".into(),
            "same-community".into(),
            "--m".into(),
            "2".into(),
            "--k".into(),
            "2".into(),
            "--reps".into(),
            "200".into(),
            "--seed".into(),
            "9".into(),
        ],
        vec![
            "ingest".into(),
            score_path.display().to_string(),
            group_path.display().to_string(),
            "--threshold".into(),
            "0.95".into(),
            "--reps".into(),
            "150".into(),
            "--seed".into(),
            "4".into(),
        ],
        vec!["oracle-check".into(), "--max-n".into(), "6".into()],
    ];
    for args in &commands {
        let strs: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&strs);
        let second = run(&strs);
        crit.check(
            first == second,
            format!("command {:?} differs between reruns", args[0]),
        );
        crit.check(
            !first.is_empty(),
            format!("command {:?} produced no output", args[0]),
        );
    }
    std::fs::remove_dir_all(&dir).ok();
    crit.finish();
}
