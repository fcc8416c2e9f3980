//! The shadowing Gaussian-multiplier bootstrap: quantile estimation, test
//! decision, and p-value.
//!
//! Procedure for one test: fit `(p̂, q̂, ẑ)`, compute the plug-in LRT, pick
//! the canonical shadow assignment `z0 ∈ C0`, sample one synthetic adjacency
//! `Â ~ M(n, K, p̂, q̂, z0)`, construct the boundary ball around `z0`, draw
//! `B` independent standard-normal multiplier sets, and for each compute
//!
//! `W_n = sup_z Σ_{i<j} (Â_ij − Ê_ij)(1[(i,j)∈E2(z0,z)] − 1[(i,j)∈E1(z0,z)]) e_ij`.
//!
//! The test quantile is `q_α = g(p̂,q̂)·C_W(α) + g(p̂,q̂)·μ̂0` with
//! `μ̂0 = d(C0,C1)(q̂ − p̂)`; reject when `LRT ≥ q_α`.

use rand::distributions::Distribution;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::likelihood::{estimate_pq, lrt_statistic, MleFit};
use crate::properties::{Boundary, Membership, MoveOp, PropertyPair};
use crate::rng::{derive_seed, SplitMixStream};
use crate::sbm::{log_odds_gap, sample_sbm, Assignment, Graph, SbmModel};
use crate::stats::upper_quantile;
use crate::Result;

const SEED_FIT: u64 = 0xb007_0001;
const SEED_AHAT: u64 = 0xb007_0002;
const SEED_REPLICATE: u64 = 0xb007_0003;

/// Bootstrap configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Significance level in (0,1).
    pub alpha: f64,
    /// Bootstrap sample count B (>= 100).
    pub reps: usize,
    /// Master seed; everything in the run derives from it.
    pub seed: u64,
    /// Radius-rule constant C for the uneven regime.
    pub radius_constant: f64,
}

impl BootstrapConfig {
    pub fn new(alpha: f64, reps: usize, seed: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) || alpha == 0.0 {
            return Err(Error::Domain(format!("alpha = {alpha} outside (0,1)")));
        }
        if reps < 100 {
            return Err(Error::Domain(format!("reps = {reps} below minimum 100")));
        }
        Ok(Self {
            alpha,
            reps,
            seed,
            radius_constant: 1.0,
        })
    }
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            reps: 500,
            seed: 0,
            radius_constant: 1.0,
        }
    }
}

/// Full record of one test run. Serializes as a flat JSON object; the fixed
/// CSV row carries the subset of fields named in [`TestReport::CSV_HEADER`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TestReport {
    pub lrt: f64,
    pub q_alpha: f64,
    pub p_value: f64,
    pub reject: bool,
    pub p_hat: f64,
    pub q_hat: f64,
    pub d_class: usize,
    pub boundary_size: usize,
    pub radius: usize,
    pub mu0_hat: f64,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl TestReport {
    pub const CSV_HEADER: &'static str =
        "lrt,q_alpha,p_value,reject,p_hat,q_hat,d_class,boundary_size,radius,seed";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.lrt,
            self.q_alpha,
            self.p_value,
            self.reject,
            self.p_hat,
            self.q_hat,
            self.d_class,
            self.boundary_size,
            self.radius,
            self.seed
        )
    }
}

/// Standard-normal multipliers indexed by unordered node pair, in the same
/// row-major upper-triangular order the graph uses.
#[derive(Debug, Clone)]
pub struct PairMultipliers {
    n: usize,
    values: Vec<f64>,
}

impl PairMultipliers {
    /// Draw one multiplier per pair from the seeded stream.
    pub fn standard_normal(n: usize, seed: u64) -> Self {
        let mut rng = SplitMixStream::new(seed);
        let count = n * n.saturating_sub(1) / 2;
        let values = (0..count)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        Self { n, values }
    }

    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        let count = n * n.saturating_sub(1) / 2;
        if values.len() != count {
            return Err(Error::DimensionMismatch(format!(
                "expected {count} pair multipliers for n = {n}, got {}",
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < j && j < self.n);
        self.values[i * (2 * self.n - i - 1) / 2 + (j - i - 1)]
    }
}

/// One multiplier-bootstrap statistic `W_n` over the boundary, evaluated by
/// the sparse per-member edge-set path. The centering `Ê_ij` is `p̂` on
/// within-pairs of `z0` and `q̂` on between-pairs.
pub fn bootstrap_wn(
    a_hat: &Graph,
    z0: &Assignment,
    boundary: &Boundary,
    p_hat: f64,
    q_hat: f64,
    multipliers: &PairMultipliers,
) -> Result<f64> {
    if boundary.is_empty() {
        return Err(Error::InvalidPair("bootstrap over empty boundary".into()));
    }
    if boundary.center != *z0 {
        return Err(Error::InvalidPair(
            "boundary center differs from supplied z0".into(),
        ));
    }
    if a_hat.n() != z0.len() || multipliers.n() != z0.len() {
        return Err(Error::DimensionMismatch(format!(
            "n mismatch: graph {}, z0 {}, multipliers {}",
            a_hat.n(),
            z0.len(),
            multipliers.n()
        )));
    }
    let centered = |i: usize, j: usize| -> f64 {
        let ehat = if z0.label(i) == z0.label(j) { p_hat } else { q_hat };
        (f64::from(u8::from(a_hat.has_edge(i, j))) - ehat) * multipliers.get(i, j)
    };
    let mut sup = f64::NEG_INFINITY;
    for k in 0..boundary.len() {
        let me = boundary.misaligned(k);
        let mut s = 0.0;
        for &(i, j) in &me.e2 {
            s += centered(i as usize, j as usize);
        }
        for &(i, j) in &me.e1 {
            s -= centered(i as usize, j as usize);
        }
        sup = sup.max(s);
    }
    Ok(sup)
}

/// Batch of `reps` independent `W_n` draws over one boundary, sharing the
/// single `Â` realization. Replicates are seeded independently from
/// `(seed, replicate index)`, so the batch is deterministic and
/// schedule-independent; the inner evaluation aggregates per-node rows
/// instead of touching each member's edge set.
pub fn sample_wn_batch(
    a_hat: &Graph,
    z0: &Assignment,
    boundary: &Boundary,
    p_hat: f64,
    q_hat: f64,
    seed: u64,
    reps: usize,
) -> Result<Vec<f64>> {
    if boundary.is_empty() {
        return Err(Error::InvalidPair("bootstrap over empty boundary".into()));
    }
    if a_hat.n() != z0.len() {
        return Err(Error::DimensionMismatch(format!(
            "graph n = {} vs z0 n = {}",
            a_hat.n(),
            z0.len()
        )));
    }
    let n = z0.len();
    let k = z0.k();

    // Per-pair centered adjacency (Â_ij − Ê_ij), flattened row-major.
    let mut lut = vec![0.0f64; n * (n - 1) / 2];
    {
        let mut idx = 0usize;
        for i in 0..n {
            let li = z0.label(i);
            for j in (i + 1)..n {
                let ehat = if li == z0.label(j) { p_hat } else { q_hat };
                lut[idx] = f64::from(u8::from(a_hat.has_edge(i, j))) - ehat;
                idx += 1;
            }
        }
    }

    // Which extra per-pair values each member formula needs. O(1) lookup
    // tables keep the per-pair replicate loop branch-cheap.
    let mut head_rows: Vec<u32> = Vec::new(); // swap anchors: full row each
    let mut block_nodes: Vec<u32> = Vec::new(); // moving-block nodes
    let mut generic_fallback = false;
    for mem in boundary.members() {
        match &mem.op {
            MoveOp::Relabel { .. } => {}
            MoveOp::Swap { a, .. } => {
                if !head_rows.contains(a) {
                    head_rows.push(*a);
                }
            }
            MoveOp::BlockMove { block, .. } => {
                for &u in block {
                    if !block_nodes.contains(&u) {
                        block_nodes.push(u);
                    }
                }
            }
            MoveOp::BlockExchange { .. } => generic_fallback = true,
        }
    }
    head_rows.sort_unstable();
    block_nodes.sort_unstable();
    let w = block_nodes.len();
    // Node → slot maps (u32::MAX = absent).
    let mut head_slot = vec![u32::MAX; n];
    for (h, &a) in head_rows.iter().enumerate() {
        head_slot[a as usize] = h as u32;
    }
    let mut block_slot = vec![u32::MAX; n];
    for (b, &u) in block_nodes.iter().enumerate() {
        block_slot[u as usize] = b as u32;
    }

    // Edge sets materialized only for the generic path (small boundaries).
    let edge_sets: Option<Vec<crate::properties::MisalignedEdges>> = generic_fallback
        .then(|| (0..boundary.len()).map(|k| boundary.misaligned(k)).collect());

    let labels: Vec<u8> = (0..n).map(|i| z0.label(i) - 1).collect();
    let ws: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|b| {
            let mut rng = SplitMixStream::new(derive_seed(seed, &[SEED_REPLICATE, b as u64]));
            let mut rows = vec![0.0f64; n * k];
            let mut head_c = vec![0.0f64; head_rows.len() * n];
            let mut block_c = vec![0.0f64; w * w];
            let mut c_all: Vec<f64> = Vec::new();
            if generic_fallback {
                c_all.resize(n * (n - 1) / 2, 0.0);
            }
            let mut idx = 0usize;
            let mut acc = [0.0f64; crate::sbm::MAX_COMMUNITIES];
            for i in 0..n {
                let li = labels[i] as usize;
                let hi = head_slot[i];
                let bi = block_slot[i];
                let len = n - 1 - i;
                let lut_row = &lut[idx..idx + len];
                let lab_row = &labels[i + 1..n];
                acc[..k].iter_mut().for_each(|a| *a = 0.0);
                for (off, (&lv, &lj)) in lut_row.iter().zip(lab_row).enumerate() {
                    let j = i + 1 + off;
                    let e: f64 = StandardNormal.sample(&mut rng);
                    let c = lv * e;
                    acc[lj as usize] += c;
                    rows[j * k + li] += c;
                    if hi != u32::MAX {
                        head_c[hi as usize * n + j] = c;
                    }
                    let hj = head_slot[j];
                    if hj != u32::MAX {
                        head_c[hj as usize * n + i] = c;
                    }
                    if bi != u32::MAX {
                        let bj = block_slot[j];
                        if bj != u32::MAX {
                            block_c[bi as usize * w + bj as usize] = c;
                        }
                    }
                    if generic_fallback {
                        c_all[idx + off] = c;
                    }
                }
                for (c, a) in acc[..k].iter().enumerate() {
                    rows[i * k + c] += a;
                }
                idx += len;
            }
            let row = |v: u32, lab: crate::sbm::Label| rows[v as usize * k + lab as usize - 1];
            let mut sup = f64::NEG_INFINITY;
            for (mi, mem) in boundary.members().iter().enumerate() {
                let s = match &mem.op {
                    MoveOp::Relabel { node, from, to } => row(*node, *to) - row(*node, *from),
                    MoveOp::Swap { a, b } => {
                        let la = z0.label(*a as usize);
                        let lb = z0.label(*b as usize);
                        let h = head_rows.binary_search(a).expect("anchor row stored");
                        let c_ab = head_c[h * n + *b as usize];
                        row(*a, lb) + row(*b, la) - row(*a, la) - row(*b, lb) - 2.0 * c_ab
                    }
                    MoveOp::BlockMove { block, from, to } => {
                        let mut s = 0.0;
                        for &v in block {
                            s += row(v, *to) - row(v, *from);
                        }
                        for (x, &u) in block.iter().enumerate() {
                            for &v in &block[x + 1..] {
                                let (bu, bv) = (block_slot[u as usize], block_slot[v as usize]);
                                let (bu, bv) = (bu.min(bv) as usize, bu.max(bv) as usize);
                                s += 2.0 * block_c[bu * w + bv];
                            }
                        }
                        s
                    }
                    MoveOp::BlockExchange { .. } => {
                        let me = &edge_sets.as_ref().expect("generic path")[mi];
                        let c_at = |i: u32, j: u32| {
                            c_all[i as usize * (2 * n - i as usize - 1) / 2
                                + (j as usize - i as usize - 1)]
                        };
                        let mut s = 0.0;
                        for &(i, j) in &me.e2 {
                            s += c_at(i, j);
                        }
                        for &(i, j) in &me.e1 {
                            s -= c_at(i, j);
                        }
                        s
                    }
                };
                sup = sup.max(s);
            }
            sup
        })
        .collect();
    Ok(ws)
}

/// Exact covariance matrix of the boundary process vector `L_{z0}` under the
/// model `(p, q)` with truth `z0`:
/// `Cov_kl = g(p,q)² (|E2_k ∩ E2_l| q(1−q) + |E1_k ∩ E1_l| p(1−p))`.
/// Returned row-major, `|B| × |B|`.
pub fn exact_boundary_covariance(
    z0: &Assignment,
    boundary: &Boundary,
    p: f64,
    q: f64,
) -> Result<Vec<f64>> {
    if boundary.is_empty() {
        return Err(Error::InvalidPair("covariance of empty boundary".into()));
    }
    if boundary.center != *z0 {
        return Err(Error::InvalidPair(
            "boundary center differs from supplied z0".into(),
        ));
    }
    let g = log_odds_gap(p, q)?;
    let b = boundary.len();
    let sets: Vec<crate::properties::MisalignedEdges> =
        (0..b).map(|k| boundary.misaligned(k)).collect();
    let inter = |a: &[(u32, u32)], b: &[(u32, u32)]| -> usize {
        // Both sorted by construction (row-major pair scan).
        let (mut i, mut j, mut c) = (0usize, 0usize, 0usize);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    };
    let mut cov = vec![0.0f64; b * b];
    for k in 0..b {
        for l in k..b {
            let e2 = inter(&sets[k].e2, &sets[l].e2) as f64;
            let e1 = inter(&sets[k].e1, &sets[l].e1) as f64;
            let v = g * g * (e2 * q * (1.0 - q) + e1 * p * (1.0 - p));
            cov[k * b + l] = v;
            cov[l * b + k] = v;
        }
    }
    Ok(cov)
}

/// Run the full shadowing-bootstrap test on a graph.
pub fn run_test(graph: &Graph, pair: &PropertyPair, cfg: &BootstrapConfig) -> Result<TestReport> {
    if graph.n() != pair.n {
        return Err(Error::DimensionMismatch(format!(
            "graph n = {} vs pair n = {}",
            graph.n(),
            pair.n
        )));
    }
    let fit = estimate_pq(graph, pair, derive_seed(cfg.seed, &[SEED_FIT]))?;
    run_test_with_fit(graph, pair, cfg, &fit)
}

/// Test pipeline after the fit stage; exposed so harnesses can reuse a fit.
pub fn run_test_with_fit(
    _graph: &Graph,
    pair: &PropertyPair,
    cfg: &BootstrapConfig,
    fit: &MleFit,
) -> Result<TestReport> {
    if fit.p_hat <= fit.q_hat {
        return Err(Error::AssortativityViolation {
            p_hat: fit.p_hat,
            q_hat: fit.q_hat,
        });
    }
    let mut warnings: Vec<String> = Vec::new();
    if !fit.converged {
        warnings.push("fit did not converge within the sweep budget".into());
    }
    if fit.membership == Membership::InC1 {
        warnings.push("fitted assignment lies in C1; LRT is exactly zero".into());
    }

    let lrt = lrt_statistic(_graph, pair, fit, cfg.radius_constant)?;
    let z0 = pair.shadow_assignment()?;
    let model = SbmModel::new(fit.p_hat, fit.q_hat, z0.clone())?;
    let a_hat = sample_sbm(&model, derive_seed(cfg.seed, &[SEED_AHAT]));
    let radius = pair.radius_rule(fit.p_hat, fit.q_hat, cfg.radius_constant)?;
    let boundary = pair.boundary(&z0, radius)?;
    if boundary.is_empty() {
        return Err(Error::InfeasiblePair(
            "empty shadow boundary; the pair admits no minimal alternatives".into(),
        ));
    }
    let ws = sample_wn_batch(
        &a_hat,
        &z0,
        &boundary,
        fit.p_hat,
        fit.q_hat,
        cfg.seed,
        cfg.reps,
    )?;
    let c_w = upper_quantile(&ws, cfg.alpha);
    let g = log_odds_gap(fit.p_hat, fit.q_hat)?;
    let d_class = pair.class_distance()?;
    let mu0_hat = d_class as f64 * (fit.q_hat - fit.p_hat);
    let q_alpha = g * c_w + g * mu0_hat;
    let reject = lrt >= q_alpha;
    let exceed = ws.iter().filter(|&&w| g * (w + mu0_hat) >= lrt).count();
    let p_value = (1 + exceed) as f64 / (cfg.reps + 1) as f64;

    Ok(TestReport {
        lrt,
        q_alpha,
        p_value,
        reject,
        p_hat: fit.p_hat,
        q_hat: fit.q_hat,
        d_class,
        boundary_size: boundary.len(),
        radius,
        mu0_hat,
        seed: cfg.seed,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::SizeRegime;

    fn shadow_setup(
        pair: &PropertyPair,
        p: f64,
        q: f64,
        seed: u64,
    ) -> (Assignment, Graph, Boundary) {
        let z0 = pair.shadow_assignment().unwrap();
        let a_hat = sample_sbm(&SbmModel::new(p, q, z0.clone()).unwrap(), seed);
        let radius = pair.radius_rule(p, q, 1.0).unwrap();
        let boundary = pair.boundary(&z0, radius).unwrap();
        (z0, a_hat, boundary)
    }

    #[test]
    fn zero_multipliers_give_zero() {
        let pair = PropertyPair::same_community(2, 8, 2, SizeRegime::Even).unwrap();
        let (z0, a_hat, boundary) = shadow_setup(&pair, 0.7, 0.2, 3);
        let zeros = PairMultipliers::from_values(8, vec![0.0; 28]).unwrap();
        let w = bootstrap_wn(&a_hat, &z0, &boundary, 0.7, 0.2, &zeros).unwrap();
        assert_eq!(w, 0.0);
    }

    #[test]
    fn singleton_boundary_all_ones_closed_form() {
        // 4-node instance with a deterministic all-ones Â and p̂ = q̂ = 0.5:
        // each member sum is 0.5·(|E2| − |E1|) = 0 since |E1| = |E2|.
        let pair = PropertyPair::same_community(2, 4, 2, SizeRegime::Even).unwrap();
        let z0 = pair.shadow_assignment().unwrap();
        let boundary = pair.boundary(&z0, 2).unwrap();
        let mut ones = Graph::empty(4);
        for i in 0..4 {
            for j in (i + 1)..4 {
                ones.add_edge(i, j).unwrap();
            }
        }
        let mult = PairMultipliers::from_values(4, vec![1.0; 6]).unwrap();
        let w = bootstrap_wn(&ones, &z0, &boundary, 0.5, 0.5, &mult).unwrap();
        assert!(w.abs() < 1e-12, "w = {w}");
    }

    #[test]
    fn naive_double_loop_matches_sparse_path() {
        for (pair, seed) in [
            (
                PropertyPair::same_community(2, 12, 2, SizeRegime::Even).unwrap(),
                1u64,
            ),
            (
                PropertyPair::same_community(3, 15, 3, SizeRegime::Uneven { c_k: 2 }).unwrap(),
                2,
            ),
            (PropertyPair::equal_sizes(12, 2, 2).unwrap(), 3),
            (
                PropertyPair::group_community(3, 2, 18, 3, SizeRegime::Uneven { c_k: 2 }).unwrap(),
                4,
            ),
            (
                PropertyPair::group_community(2, 1, 12, 2, SizeRegime::Even).unwrap(),
                5,
            ),
        ] {
            let (p, q) = (0.6, 0.25);
            let (z0, a_hat, boundary) = shadow_setup(&pair, p, q, seed);
            let mult = PairMultipliers::standard_normal(pair.n, derive_seed(seed, &[7]));
            let sparse = bootstrap_wn(&a_hat, &z0, &boundary, p, q, &mult).unwrap();
            // Naive double loop over all pairs for every member.
            let mut naive = f64::NEG_INFINITY;
            for k in 0..boundary.len() {
                let member = &boundary.members()[k].assignment;
                let mut s = 0.0;
                for i in 0..pair.n {
                    for j in (i + 1)..pair.n {
                        let same0 = z0.label(i) == z0.label(j);
                        let same1 = member.label(i) == member.label(j);
                        let ind = match (same0, same1) {
                            (false, true) => 1.0,  // E2
                            (true, false) => -1.0, // E1
                            _ => 0.0,
                        };
                        if ind != 0.0 {
                            let ehat = if same0 { p } else { q };
                            let a = f64::from(u8::from(a_hat.has_edge(i, j)));
                            s += (a - ehat) * ind * mult.get(i, j);
                        }
                    }
                }
                naive = naive.max(s);
            }
            assert!(
                (sparse - naive).abs() < 1e-12,
                "{pair:?}: sparse {sparse} vs naive {naive}"
            );
        }
    }

    #[test]
    fn batch_aggregates_match_sparse_path() {
        for (pair, seed) in [
            (
                PropertyPair::same_community(2, 14, 2, SizeRegime::Even).unwrap(),
                11u64,
            ),
            (PropertyPair::equal_sizes(12, 3, 2).unwrap(), 12),
            (
                PropertyPair::group_community(4, 2, 16, 2, SizeRegime::Uneven { c_k: 2 }).unwrap(),
                13,
            ),
            (
                PropertyPair::group_community(2, 1, 12, 2, SizeRegime::Even).unwrap(),
                14,
            ),
        ] {
            let (p, q) = (0.55, 0.2);
            let (z0, a_hat, boundary) = shadow_setup(&pair, p, q, seed);
            let batch = sample_wn_batch(&a_hat, &z0, &boundary, p, q, 99, 8).unwrap();
            for (b, &w_fast) in batch.iter().enumerate() {
                // Rebuild the same multipliers the batch used for replicate b
                // and push them through the sparse reference path.
                let mut rng =
                    SplitMixStream::new(derive_seed(99, &[SEED_REPLICATE, b as u64]));
                let count = pair.n * (pair.n - 1) / 2;
                let values: Vec<f64> =
                    (0..count).map(|_| StandardNormal.sample(&mut rng)).collect();
                let mult = PairMultipliers::from_values(pair.n, values).unwrap();
                let w_ref = bootstrap_wn(&a_hat, &z0, &boundary, p, q, &mult).unwrap();
                assert!(
                    (w_fast - w_ref).abs() < 1e-9,
                    "{pair:?} rep {b}: {w_fast} vs {w_ref}"
                );
            }
        }
    }

    #[test]
    fn covariance_diagonal_closed_form_and_psd() {
        let pair = PropertyPair::same_community(2, 10, 2, SizeRegime::Even).unwrap();
        let z0 = pair.shadow_assignment().unwrap();
        let boundary = pair.boundary(&z0, pair.class_distance().unwrap()).unwrap();
        let (p, q) = (0.7, 0.3);
        let cov = exact_boundary_covariance(&z0, &boundary, p, q).unwrap();
        let g = log_odds_gap(p, q).unwrap();
        let b = boundary.len();
        for (k, mem) in boundary.members().iter().enumerate() {
            let expect =
                g * g * (mem.n2 as f64 * q * (1.0 - q) + mem.n1 as f64 * p * (1.0 - p));
            assert!((cov[k * b + k] - expect).abs() < 1e-12);
        }
        let eig = crate::stats::symmetric_eigenvalues(&cov, b);
        assert!(eig[0] > -1e-9, "min eigenvalue {}", eig[0]);
    }

    #[test]
    fn covariance_zero_when_p_equals_q() {
        let pair = PropertyPair::equal_sizes(8, 2, 2).unwrap();
        let z0 = pair.shadow_assignment().unwrap();
        let boundary = pair.boundary(&z0, pair.class_distance().unwrap()).unwrap();
        let cov = exact_boundary_covariance(&z0, &boundary, 0.4, 0.4).unwrap();
        assert!(cov.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn run_test_deterministic_and_consistent() {
        let pair = PropertyPair::same_community(2, 60, 2, SizeRegime::Even).unwrap();
        let z = Assignment::blocked(60, 2).unwrap();
        let g = sample_sbm(&SbmModel::new(0.8, 0.15, z).unwrap(), 42);
        let cfg = BootstrapConfig::new(0.05, 200, 7).unwrap();
        let r1 = run_test(&g, &pair, &cfg).unwrap();
        let r2 = run_test(&g, &pair, &cfg).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
        assert_eq!(r1.reject, r1.lrt >= r1.q_alpha);
        assert!((0.0..=1.0).contains(&r1.p_value) && r1.p_value > 0.0);
        assert!((r1.mu0_hat - r1.d_class as f64 * (r1.q_hat - r1.p_hat)).abs() < 1e-12);
    }

    #[test]
    fn quantile_monotone_in_alpha() {
        let pair = PropertyPair::same_community(2, 40, 2, SizeRegime::Even).unwrap();
        let (z0, a_hat, boundary) = shadow_setup(&pair, 0.6, 0.2, 9);
        let ws = sample_wn_batch(&a_hat, &z0, &boundary, 0.6, 0.2, 5, 500).unwrap();
        let c1 = upper_quantile(&ws, 0.01);
        let c5 = upper_quantile(&ws, 0.05);
        let c10 = upper_quantile(&ws, 0.10);
        assert!(c1 >= c5 && c5 >= c10);
        let g = log_odds_gap(0.6, 0.2).unwrap();
        let mu0 = -(pair.class_distance().unwrap() as f64) * 0.4;
        let q = |c: f64| g * c + g * mu0;
        assert!(q(c1) > q(c5) && q(c5) > q(c10));
    }

    #[test]
    fn p_value_consistent_with_rejection() {
        let pair = PropertyPair::same_community(2, 60, 2, SizeRegime::Even).unwrap();
        for seed in 0..6u64 {
            // Alternate null and alternative truths.
            let z = if seed % 2 == 0 {
                Assignment::blocked(60, 2).unwrap()
            } else {
                let mut l = Assignment::blocked(60, 2).unwrap().labels().to_vec();
                l[0] = 2;
                l[30] = 1;
                Assignment::new(l, 2).unwrap()
            };
            let g = sample_sbm(&SbmModel::new(0.7, 0.15, z).unwrap(), 100 + seed);
            let cfg = BootstrapConfig::new(0.05, 200, seed).unwrap();
            let r = run_test(&g, &pair, &cfg).unwrap();
            let slack = 1.0 / (cfg.reps + 1) as f64 + 1e-12;
            if r.reject {
                assert!(
                    r.p_value <= cfg.alpha + slack,
                    "reject but p = {}",
                    r.p_value
                );
            } else {
                assert!(
                    r.p_value >= cfg.alpha - slack,
                    "accept but p = {}",
                    r.p_value
                );
            }
        }
    }

    #[test]
    fn assortativity_violation_refused() {
        // Disassortative truth: within probability below between.
        let pair = PropertyPair::same_community(2, 40, 2, SizeRegime::Even).unwrap();
        let z = Assignment::blocked(40, 2).unwrap();
        let g = sample_sbm(&SbmModel::new(0.1, 0.8, z).unwrap(), 1);
        let cfg = BootstrapConfig::new(0.05, 200, 1).unwrap();
        match run_test(&g, &pair, &cfg) {
            Err(Error::AssortativityViolation { .. }) => {}
            other => panic!("expected AssortativityViolation, got {other:?}"),
        }
    }
}
