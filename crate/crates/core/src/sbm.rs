//! Model parameters, assignments, graph storage, sampling, and the two
//! scalar divergences used throughout: `g(p,q)` and the Renyi divergence
//! `I(p,q)`.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rng::pair_uniform;
use crate::Result;

/// Community labels are 1-based: each entry of an [`Assignment`] lies in
/// `1..=K`.
pub type Label = u8;

/// Soft cap on the number of communities. The theory treats K as bounded;
/// the artifact refuses anything larger.
pub const MAX_COMMUNITIES: usize = 16;

/// A community assignment `z ∈ [K]^n`, one label per node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    labels: Vec<Label>,
    k: usize,
}

impl Assignment {
    /// Build from 1-based labels. Every label must lie in `1..=k`.
    pub fn new(labels: Vec<Label>, k: usize) -> Result<Self> {
        if k < 2 || k > MAX_COMMUNITIES {
            return Err(Error::Domain(format!(
                "community count K = {k} outside supported range 2..={MAX_COMMUNITIES}"
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l as usize > k) {
            return Err(Error::Domain(format!(
                "label {bad} outside 1..={k} in assignment"
            )));
        }
        Ok(Self { labels, k })
    }

    /// Canonical blocked assignment: community 1 takes the first chunk of
    /// nodes, community 2 the next, and so on. When `K ∤ n` the first
    /// `n mod K` communities take the larger size `⌈n/K⌉`.
    pub fn blocked(n: usize, k: usize) -> Result<Self> {
        if k < 2 || k > MAX_COMMUNITIES {
            return Err(Error::Domain(format!(
                "community count K = {k} outside supported range 2..={MAX_COMMUNITIES}"
            )));
        }
        if n < k {
            return Err(Error::Domain(format!("n = {n} smaller than K = {k}")));
        }
        let base = n / k;
        let rem = n % k;
        let mut labels = Vec::with_capacity(n);
        for c in 0..k {
            let size = base + usize::from(c < rem);
            labels.extend(std::iter::repeat((c + 1) as Label).take(size));
        }
        Ok(Self { labels, k })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Label of node `i` (0-based node index, 1-based label).
    #[inline]
    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    #[inline]
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Number of nodes in each community; length K, sums to n.
    pub fn community_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &l in &self.labels {
            sizes[l as usize - 1] += 1;
        }
        sizes
    }

    /// Number of unordered within-community pairs, `Σ_k s_k (s_k − 1) / 2`.
    pub fn within_pair_count(&self) -> usize {
        self.community_sizes()
            .iter()
            .map(|&s| s * s.saturating_sub(1) / 2)
            .sum()
    }

    /// True when the two assignments induce the same partition, i.e. they are
    /// equal up to a permutation of the community labels.
    pub fn same_partition(&self, other: &Assignment) -> bool {
        if self.len() != other.len() {
            return false;
        }
        // Inject the label map in both directions.
        let mut fwd = [0u8; MAX_COMMUNITIES + 1];
        let mut bwd = [0u8; MAX_COMMUNITIES + 1];
        for (&a, &b) in self.labels.iter().zip(&other.labels) {
            let (a, b) = (a as usize, b as usize);
            if fwd[a] == 0 && bwd[b] == 0 {
                fwd[a] = b as u8;
                bwd[b] = a as u8;
            } else if fwd[a] != b as u8 || bwd[b] != a as u8 {
                return false;
            }
        }
        true
    }

    /// Canonical representative of the label-permutation orbit: communities
    /// renumbered in first-occurrence order. Two assignments are equivalent
    /// (induce the same partition) iff their canonical forms are equal.
    pub fn canonical_form(&self) -> Assignment {
        let mut map = [0u8; MAX_COMMUNITIES + 1];
        let mut next: Label = 1;
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                if map[l as usize] == 0 {
                    map[l as usize] = next;
                    next += 1;
                }
                map[l as usize]
            })
            .collect();
        Assignment {
            labels,
            k: self.k,
        }
    }

    /// Replace the label of one node, consuming and returning the assignment.
    pub(crate) fn with_label(mut self, node: usize, label: Label) -> Self {
        self.labels[node] = label;
        self
    }

    pub(crate) fn set_label(&mut self, node: usize, label: Label) {
        self.labels[node] = label;
    }
}

/// Fixed-assignment stochastic block model `M(n, K, p, q, z)`.
///
/// Within-community node pairs are connected with probability `p`,
/// between-community pairs with probability `q`, independently.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SbmModel {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub q: f64,
    pub z: Assignment,
    /// Optional record of the sparsity reparametrization p = ρ_n λ1,
    /// q = ρ_n λ2 when the model was built from one.
    signal: Option<(f64, f64, f64)>,
}

impl SbmModel {
    pub fn new(p: f64, q: f64, z: Assignment) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
            return Err(Error::Domain(format!(
                "edge probabilities must lie in [0,1]; got p = {p}, q = {q}"
            )));
        }
        Ok(Self {
            n: z.len(),
            k: z.k(),
            p,
            q,
            z,
            signal: None,
        })
    }

    /// Build from the simulation reparametrization `p = (1+Δ)ρ_n`,
    /// `q = (1−Δ)ρ_n`.
    pub fn from_signal(rho: f64, delta: f64, z: Assignment) -> Result<Self> {
        if !(0.0..1.0).contains(&delta.abs()) && delta != 0.0 {
            return Err(Error::Domain(format!("delta = {delta} outside [0,1)")));
        }
        let (l1, l2) = (1.0 + delta, 1.0 - delta);
        let mut m = Self::new((rho * l1).min(1.0), (rho * l2).max(0.0), z)?;
        m.signal = Some((rho, l1, l2));
        Ok(m)
    }

    /// The `(ρ_n, λ1, λ2)` triple when the model was built from one.
    pub fn signal_params(&self) -> Option<(f64, f64, f64)> {
        self.signal
    }
}

/// Symmetric, hollow-diagonal binary adjacency structure, bit-packed in
/// upper-triangular row-major order: `n(n−1)/2` bits total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    bits: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let npairs = n * n.saturating_sub(1) / 2;
        Self {
            n,
            bits: vec![0u64; npairs.div_ceil(64)],
            edge_count: 0,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Flat index of the unordered pair (i, j), i < j, in row-major
    /// upper-triangular order.
    #[inline]
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        // Offset of row i is i*n − i(i+3)/2 − ... ; derived once, used hot.
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let idx = self.pair_index(i, j);
        self.bits[idx >> 6] >> (idx & 63) & 1 == 1
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::Domain(format!("self-loop at node {i} rejected")));
        }
        if i >= self.n || j >= self.n {
            return Err(Error::DimensionMismatch(format!(
                "edge ({i}, {j}) outside graph on {} nodes",
                self.n
            )));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let idx = self.pair_index(i, j);
        let mask = 1u64 << (idx & 63);
        if self.bits[idx >> 6] & mask == 0 {
            self.bits[idx >> 6] |= mask;
            self.edge_count += 1;
        }
        Ok(())
    }

    /// All edges as (i, j) with i < j, in row-major order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(i, j) {
                    out.push((i as u32, j as u32));
                }
            }
        }
        out
    }

    /// Relabel nodes: node `i` of the output is node `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "permutation length {} != n = {}",
                perm.len(),
                self.n
            )));
        }
        let mut g = Graph::empty(self.n);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(perm[i], perm[j]) {
                    g.add_edge(i, j)?;
                }
            }
        }
        Ok(g)
    }
}

/// Sample a graph from the model. Each unordered pair is an independent
/// Bernoulli draw keyed by `(seed, i, j)`, so the output is reproducible
/// pair-by-pair and independent of traversal order.
pub fn sample_sbm(model: &SbmModel, seed: u64) -> Graph {
    let n = model.n;
    let mut g = Graph::empty(n);
    for i in 0..n {
        let li = model.z.label(i);
        for j in (i + 1)..n {
            let prob = if li == model.z.label(j) {
                model.p
            } else {
                model.q
            };
            if pair_uniform(seed, i as u32, j as u32) < prob {
                g.add_edge(i, j).expect("in-range pair");
            }
        }
    }
    g
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Domain(format!("{name} = {v} outside (0,1)")));
    }
    Ok(())
}

/// Renyi divergence of order 1/2 between Bernoulli(p) and Bernoulli(q):
/// `I(p,q) = −2 log(√(pq) + √((1−p)(1−q)))`.
pub fn renyi_divergence(p: f64, q: f64) -> Result<f64> {
    check_open_unit("p", p)?;
    check_open_unit("q", q)?;
    Ok(-2.0 * ((p * q).sqrt() + ((1.0 - p) * (1.0 - q)).sqrt()).ln())
}

/// Log-odds gap `g(p,q) = log[p(1−q) / (q(1−p))]`, the per-edge weight of the
/// likelihood-ratio leading term.
pub fn log_odds_gap(p: f64, q: f64) -> Result<f64> {
    check_open_unit("p", p)?;
    check_open_unit("q", q)?;
    Ok((p * (1.0 - q) / (q * (1.0 - p))).ln())
}

/// Edge/pair counts of a graph split by an assignment:
/// (within_edges, within_pairs, between_edges, between_pairs).
pub fn count_statistics(graph: &Graph, z: &Assignment) -> Result<(usize, usize, usize, usize)> {
    if graph.n() != z.len() {
        return Err(Error::DimensionMismatch(format!(
            "graph has {} nodes, assignment {}",
            graph.n(),
            z.len()
        )));
    }
    let within_pairs = z.within_pair_count();
    let between_pairs = graph.pair_count() - within_pairs;
    let mut within_edges = 0usize;
    for &(i, j) in &graph.edges() {
        if z.label(i as usize) == z.label(j as usize) {
            within_edges += 1;
        }
    }
    let between_edges = graph.edge_count() - within_edges;
    Ok((within_edges, within_pairs, between_edges, between_pairs))
}

/// Log-likelihood of the SBM: Bernoulli log-mass with parameter `p` on
/// within-community pairs and `q` on between-community pairs.
pub fn log_likelihood(graph: &Graph, z: &Assignment, p: f64, q: f64) -> Result<f64> {
    check_open_unit("p", p)?;
    check_open_unit("q", q)?;
    let (we, wp, be, bp) = count_statistics(graph, z)?;
    Ok(we as f64 * p.ln()
        + (wp - we) as f64 * (1.0 - p).ln()
        + be as f64 * q.ln()
        + (bp - be) as f64 * (1.0 - q).ln())
}

/// Clamp an empirical density into the open unit interval before it is
/// logged: `[1/(2·pairs), 1 − 1/(2·pairs)]`. Avoids −∞ on degenerate samples.
pub fn clamp_density(edges: usize, pairs: usize) -> f64 {
    if pairs == 0 {
        return 0.5;
    }
    let eps = 1.0 / (2.0 * pairs as f64);
    (edges as f64 / pairs as f64).clamp(eps, 1.0 - eps)
}
