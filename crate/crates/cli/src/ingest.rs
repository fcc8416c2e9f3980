//! Score-network ingestion: threshold a weighted score file into a binary
//! graph and run the pairwise group-community test for every unordered pair
//! of node groups, emitting a symmetric p-value matrix.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use sbmtest::bootstrap::{run_test, BootstrapConfig};
use sbmtest::properties::{PropertyPair, SizeRegime};
use sbmtest::rng::derive_seed;
use sbmtest::sbm::Graph;

/// Parsed score network: node names in first-seen order plus the
/// thresholded graph (edge iff score strictly above the threshold).
pub struct ScoreNetwork {
    pub names: Vec<String>,
    pub graph: Graph,
}

pub fn parse_score_file(text: &str, threshold: f64) -> Result<ScoreNetwork> {
    if !(0.0..1.0).contains(&threshold) || threshold == 0.0 {
        bail!("threshold {threshold} outside (0,1)");
    }
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_num = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks.len() != 3 {
            bail!("score file line {line_num}: expected \"id1 id2 score\", got {trimmed:?}");
        }
        let score: f64 = toks[2]
            .parse()
            .with_context(|| format!("score file line {line_num}: bad score {:?}", toks[2]))?;
        if !(0.0..=1.0).contains(&score) {
            bail!("score file line {line_num}: score {score} outside [0,1]");
        }
        let mut intern = |tok: &str| -> usize {
            *ids.entry(tok.to_string()).or_insert_with(|| {
                names.push(tok.to_string());
                names.len() - 1
            })
        };
        let u = intern(toks[0]);
        let v = intern(toks[1]);
        if u == v {
            bail!("score file line {line_num}: self-score on {:?}", toks[0]);
        }
        // Strict threshold: only scores above it become edges.
        if score > threshold {
            edges.push((u, v));
        }
    }
    let mut graph = Graph::empty(names.len());
    for (u, v) in edges {
        graph
            .add_edge(u, v)
            .map_err(|e| anyhow!("building thresholded graph: {e}"))?;
    }
    if graph.edge_count() == 0 {
        bail!("no edge survives the threshold {threshold}; graph is empty");
    }
    Ok(ScoreNetwork { names, graph })
}

/// Node groups in file order: `(group name, member node indices)`.
pub fn parse_group_file(text: &str, names: &[String]) -> Result<Vec<(String, Vec<usize>)>> {
    let index: BTreeMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut assigned = vec![false; names.len()];
    for (lineno, line) in text.lines().enumerate() {
        let line_num = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        if toks.len() != 2 {
            bail!("group file line {line_num}: expected \"id group\", got {trimmed:?}");
        }
        let node = *index.get(toks[0]).ok_or_else(|| {
            anyhow!("group file line {line_num}: node {:?} not present in the score network", toks[0])
        })?;
        if assigned[node] {
            bail!("group file line {line_num}: node {:?} listed twice (groups must be disjoint)", toks[0]);
        }
        assigned[node] = true;
        if !groups.contains_key(toks[1]) {
            order.push(toks[1].to_string());
        }
        groups.entry(toks[1].to_string()).or_default().push(node);
    }
    if order.len() < 2 {
        bail!("need at least two groups, got {}", order.len());
    }
    Ok(order
        .into_iter()
        .map(|name| {
            let members = groups.remove(&name).expect("ordered key");
            (name, members)
        })
        .collect())
}

pub struct IngestOutcome {
    pub group_names: Vec<String>,
    /// Row-major symmetric p-value matrix, `None` on the diagonal.
    pub p_values: Vec<Option<f64>>,
}

/// Run the pairwise group-community test `H0,ij: groups i and j share a
/// community` for every unordered pair. Each test permutes the graph so the
/// two groups occupy the leading node positions the pair construction
/// expects; nodes outside the two groups are unconstrained.
pub fn run_ingest(
    network: &ScoreNetwork,
    groups: &[(String, Vec<usize>)],
    k: usize,
    alpha: f64,
    reps: usize,
    radius_constant: f64,
    seed: u64,
) -> Result<IngestOutcome> {
    let n = network.graph.n();
    let g = groups.len();
    let mut p_values: Vec<Option<f64>> = vec![None; g * g];
    for i in 0..g {
        for j in (i + 1)..g {
            let (gi, gj) = (&groups[i], &groups[j]);
            let (m, m_prime) = (gi.1.len(), gj.1.len());
            // Permutation placing group i first, group j second.
            let mut perm: Vec<usize> = Vec::with_capacity(n);
            perm.extend(&gi.1);
            perm.extend(&gj.1);
            let mut in_front = vec![false; n];
            for &v in perm.iter() {
                in_front[v] = true;
            }
            perm.extend((0..n).filter(|&v| !in_front[v]));
            let graph = network
                .graph
                .permuted(&perm)
                .map_err(|e| anyhow!("permuting graph for ({}, {}): {e}", gi.0, gj.0))?;
            // The uneven regime with c_k at least the smaller group keeps the
            // collective block move inside the alternative class, so the
            // boundary stays K−1 members regardless of group size.
            let c_k = 2.max(m.min(m_prime));
            let pair = PropertyPair::group_community(
                m,
                m_prime,
                n,
                k,
                SizeRegime::Uneven { c_k },
            )
            .map_err(|e| anyhow!("pair ({}, {}): {e}", gi.0, gj.0))?;
            let cfg = BootstrapConfig {
                alpha,
                reps,
                seed: derive_seed(seed, &[i as u64, j as u64]),
                radius_constant,
            };
            let report = run_test(&graph, &pair, &cfg)
                .map_err(|e| anyhow!("test ({}, {}): {e}", gi.0, gj.0))?;
            p_values[i * g + j] = Some(report.p_value);
            p_values[j * g + i] = Some(report.p_value);
        }
    }
    Ok(IngestOutcome {
        group_names: groups.iter().map(|(n, _)| n.clone()).collect(),
        p_values,
    })
}

/// Render the p-value matrix as CSV: header row of group names, diagonal
/// blank, symmetric entries bit-identical.
pub fn matrix_csv(outcome: &IngestOutcome) -> String {
    let g = outcome.group_names.len();
    let mut out = String::from("group");
    for name in &outcome.group_names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for i in 0..g {
        out.push_str(&outcome.group_names[i]);
        for j in 0..g {
            out.push(',');
            if let Some(p) = outcome.p_values[i * g + j] {
                out.push_str(&format!("{p}"));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_is_strict() {
        let net = parse_score_file("a b 0.94\nb c 0.95\nc d 0.951\n", 0.95).unwrap();
        // Only the 0.951 pair becomes an edge.
        assert_eq!(net.graph.edge_count(), 1);
        assert!(net.graph.has_edge(2, 3));
    }

    #[test]
    fn group_file_rejects_unknown_nodes() {
        let net = parse_score_file("a b 0.99\n", 0.5).unwrap();
        let err = parse_group_file("a g1\nzzz g2\n", &net.names).unwrap_err();
        assert!(err.to_string().contains("zzz"));
    }

    #[test]
    fn group_file_orders_first_seen() {
        let net = parse_score_file("a b 0.99\nc d 0.99\n", 0.5).unwrap();
        let groups = parse_group_file("c g2\na g1\nd g2\n", &net.names).unwrap();
        assert_eq!(groups[0].0, "g2");
        assert_eq!(groups[0].1, vec![2, 3]);
        assert_eq!(groups[1].0, "g1");
    }
}
