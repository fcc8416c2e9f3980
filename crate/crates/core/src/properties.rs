//! Community property pairs (C0, C1) and their combinatorics: membership,
//! misaligned edge sets, distances, shadow assignments, boundary
//! construction, and closed-form packing numbers.
//!
//! Three canonical tests are supported:
//! - `SameCommunity(m)` — null: nodes `1..m` share a community;
//! - `GroupCommunity(m, m′)` — null: node blocks `[m]` and `{m+1..m+m′}`
//!   share a community; alternative: each block is label-constant but the
//!   two labels differ;
//! - `EqualSizes` — null: all community sizes equal `n/K`.
//!
//! Size regimes: in the `Even` regime every class member has all community
//! sizes exactly `n/K` (requires `K | n`). In the `Uneven` regime the null
//! class is pinned to minimally imbalanced size profiles (sizes in
//! `{⌊n/K⌋, ⌈n/K⌉}`) while the alternative admits any profile within `c_K`
//! of `n/K`. Pinning the null profile is what makes the closed-form class
//! distances, boundary cardinalities, and packing numbers below exact at
//! finite `n`, not just in rate; the brute-force oracle certifies them.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::sbm::{Assignment, Label};
use crate::Result;

/// Which canonical property is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PropertyKind {
    SameCommunity { m: usize },
    GroupCommunity { m: usize, m_prime: usize },
    EqualSizes,
}

/// Community-size discipline of the class pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "regime")]
pub enum SizeRegime {
    Even,
    /// `c_k` bounds how far any alternative member's community sizes may
    /// drift from `n/K`.
    Uneven { c_k: usize },
}

/// Result of a membership query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    InC0,
    InC1,
    Neither,
}

/// A declarative property pair on `n` nodes with `K` communities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyPair {
    pub kind: PropertyKind,
    pub n: usize,
    pub k: usize,
    pub regime: SizeRegime,
}

/// The two sets of misaligned edges between assignments `z0` and `z1`:
/// `e1` holds pairs joined under `z0` but separated under `z1`, `e2` the
/// reverse. Pairs are `(i, j)` with `i < j`, 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MisalignedEdges {
    pub e1: Vec<(u32, u32)>,
    pub e2: Vec<(u32, u32)>,
}

impl MisalignedEdges {
    #[inline]
    pub fn n1(&self) -> usize {
        self.e1.len()
    }

    #[inline]
    pub fn n2(&self) -> usize {
        self.e2.len()
    }

    /// `max(n1, n2)`, the assignment distance contribution.
    #[inline]
    pub fn distance(&self) -> usize {
        self.n1().max(self.n2())
    }
}

/// The single-step rewrite that produced a boundary member from the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveOp {
    /// One node reassigned to a different label.
    Relabel { node: u32, from: Label, to: Label },
    /// Two nodes from different communities exchange labels.
    Swap { a: u32, b: u32 },
    /// A node block moved collectively to a different label.
    BlockMove { block: Vec<u32>, from: Label, to: Label },
    /// A node block exchanged with an equally sized set from another
    /// community.
    BlockExchange { block: Vec<u32>, counterpart: Vec<u32> },
}

/// One boundary member: the assignment, the op that produced it, and its
/// misaligned-edge cardinalities against the center.
#[derive(Debug, Clone)]
pub struct BoundaryMember {
    pub assignment: Assignment,
    pub op: MoveOp,
    pub n1: usize,
    pub n2: usize,
}

impl BoundaryMember {
    #[inline]
    pub fn distance(&self) -> usize {
        self.n1.max(self.n2)
    }
}

/// The boundary of C1 around a null center: every alternative assignment
/// reachable by the canonical minimal rewrite, within the given radius.
/// Members are sorted lexicographically by label vector.
#[derive(Debug, Clone)]
pub struct Boundary {
    pub center: Assignment,
    pub radius: usize,
    members: Vec<BoundaryMember>,
}

impl Boundary {
    #[inline]
    pub fn members(&self) -> &[BoundaryMember] {
        &self.members
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Misaligned edge sets of member `k` against the center, computed on
    /// demand (counts are cached in the member, the sets are not).
    pub fn misaligned(&self, k: usize) -> MisalignedEdges {
        misaligned_edge_sets(&self.center, &self.members[k].assignment)
            .expect("center and member share n")
    }
}

impl PropertyPair {
    pub fn new(kind: PropertyKind, n: usize, k: usize, regime: SizeRegime) -> Result<Self> {
        if k < 2 || k > crate::sbm::MAX_COMMUNITIES {
            return Err(Error::InvalidPair(format!(
                "community count K = {k} outside 2..={}",
                crate::sbm::MAX_COMMUNITIES
            )));
        }
        if n < k {
            return Err(Error::InvalidPair(format!("n = {n} smaller than K = {k}")));
        }
        match regime {
            SizeRegime::Even => {
                if n % k != 0 {
                    return Err(Error::InvalidPair(format!(
                        "even regime requires K | n; got n = {n}, K = {k}"
                    )));
                }
                if matches!(kind, PropertyKind::EqualSizes) {
                    return Err(Error::InvalidPair(
                        "EqualSizes is only meaningful in the uneven regime \
                         (its alternative has uneven sizes by definition)"
                            .into(),
                    ));
                }
            }
            SizeRegime::Uneven { c_k } => {
                if c_k == 0 {
                    return Err(Error::InvalidPair(
                        "uneven regime needs c_k >= 1 so single-node moves stay in C1".into(),
                    ));
                }
                if matches!(kind, PropertyKind::EqualSizes) && n % k != 0 {
                    return Err(Error::InvalidPair(format!(
                        "EqualSizes requires K | n for a nonempty null class; got n = {n}, K = {k}"
                    )));
                }
            }
        }
        match kind {
            PropertyKind::SameCommunity { m } => {
                if m == 0 || m > n {
                    return Err(Error::InvalidPair(format!("m = {m} outside 1..={n}")));
                }
            }
            PropertyKind::GroupCommunity { m, m_prime } => {
                if m == 0 || m_prime == 0 || m + m_prime > n {
                    return Err(Error::InvalidPair(format!(
                        "group sizes m = {m}, m' = {m_prime} infeasible on n = {n}"
                    )));
                }
            }
            PropertyKind::EqualSizes => {}
        }
        Ok(Self { kind, n, k, regime })
    }

    /// Convenience constructors.
    pub fn same_community(m: usize, n: usize, k: usize, regime: SizeRegime) -> Result<Self> {
        Self::new(PropertyKind::SameCommunity { m }, n, k, regime)
    }

    pub fn group_community(
        m: usize,
        m_prime: usize,
        n: usize,
        k: usize,
        regime: SizeRegime,
    ) -> Result<Self> {
        Self::new(PropertyKind::GroupCommunity { m, m_prime }, n, k, regime)
    }

    pub fn equal_sizes(n: usize, k: usize, c_k: usize) -> Result<Self> {
        Self::new(PropertyKind::EqualSizes, n, k, SizeRegime::Uneven { c_k })
    }

    #[inline]
    fn base_size(&self) -> usize {
        self.n / self.k
    }

    /// Largest community size of the canonical (minimally imbalanced) null
    /// profile.
    #[inline]
    fn capacity(&self) -> usize {
        self.n.div_ceil(self.k)
    }

    fn sizes_canonical(&self, sizes: &[usize]) -> bool {
        let lo = self.base_size();
        let hi = self.capacity();
        sizes.iter().all(|&s| s == lo || s == hi)
    }

    fn sizes_within_ck(&self, sizes: &[usize]) -> bool {
        match self.regime {
            SizeRegime::Even => sizes.iter().all(|&s| s == self.base_size()),
            SizeRegime::Uneven { c_k } => {
                let target = self.n as f64 / self.k as f64;
                sizes
                    .iter()
                    .all(|&s| (s as f64 - target).abs() <= c_k as f64)
            }
        }
    }

    fn null_profile_ok(&self, sizes: &[usize]) -> bool {
        match self.regime {
            SizeRegime::Even => sizes.iter().all(|&s| s == self.base_size()),
            SizeRegime::Uneven { .. } => match self.kind {
                // The equal-size null is exactly even by definition.
                PropertyKind::EqualSizes => sizes.iter().all(|&s| s == self.base_size()),
                _ => self.sizes_canonical(sizes),
            },
        }
    }

    /// Exact class membership of `z`, including the size-regime constraint.
    pub fn membership(&self, z: &Assignment) -> Result<Membership> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "assignment length {} != pair n = {}",
                z.len(),
                self.n
            )));
        }
        if z.k() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "assignment K = {} != pair K = {}",
                z.k(),
                self.k
            )));
        }
        let sizes = z.community_sizes();
        let verdict = |null_pred: bool, alt_pred: bool| {
            if null_pred && self.null_profile_ok(&sizes) {
                Membership::InC0
            } else if alt_pred && self.sizes_within_ck(&sizes) {
                Membership::InC1
            } else {
                Membership::Neither
            }
        };
        Ok(match self.kind {
            PropertyKind::SameCommunity { m } => {
                let together = z.labels()[..m].iter().all(|&l| l == z.label(0));
                verdict(together, !together)
            }
            PropertyKind::GroupCommunity { m, m_prime } => {
                let const_label = |range: std::ops::Range<usize>| -> Option<Label> {
                    let first = z.label(range.start);
                    z.labels()[range].iter().all(|&l| l == first).then_some(first)
                };
                match (const_label(0..m), const_label(m..m + m_prime)) {
                    (Some(a), Some(b)) if a == b => verdict(true, false),
                    (Some(_), Some(_)) => verdict(false, true),
                    _ => Membership::Neither,
                }
            }
            PropertyKind::EqualSizes => {
                let even = sizes.iter().all(|&s| s == self.base_size());
                verdict(even, !even)
            }
        })
    }

    /// Closed-form `d(C0, C1)`, the minimal misaligned-edge distance between
    /// the classes. Certified against exhaustive search by the oracle module.
    pub fn class_distance(&self) -> Result<usize> {
        let b = self.base_size();
        match (self.kind, self.regime) {
            (PropertyKind::SameCommunity { m }, _) if m < 2 => Err(Error::InfeasiblePair(
                format!("SameCommunity with m = {m} has an empty alternative"),
            )),
            (PropertyKind::SameCommunity { m }, _) if m > self.capacity() => {
                Err(Error::InfeasiblePair(format!(
                    "m = {m} exceeds community capacity {}",
                    self.capacity()
                )))
            }
            (PropertyKind::SameCommunity { .. }, SizeRegime::Even) => Ok(2 * (b - 1)),
            (PropertyKind::SameCommunity { .. }, SizeRegime::Uneven { .. }) => Ok(b),
            (PropertyKind::GroupCommunity { m, m_prime }, regime) => {
                if m + m_prime > self.capacity() {
                    return Err(Error::InfeasiblePair(format!(
                        "m + m' = {} exceeds community capacity {}",
                        m + m_prime,
                        self.capacity()
                    )));
                }
                let w = m.min(m_prime);
                match regime {
                    SizeRegime::Uneven { c_k } if w <= c_k => Ok(w * b),
                    _ => Ok(2 * w * (b - w)),
                }
            }
            (PropertyKind::EqualSizes, _) => Ok(b),
        }
    }

    /// Canonical null member: blocked consecutive communities with the
    /// constrained node sets in community 1. In the uneven regime the split
    /// is `⌊n/K⌋`/`⌈n/K⌉` with the larger residuals on the lowest labels.
    pub fn shadow_assignment(&self) -> Result<Assignment> {
        let constrained = match self.kind {
            PropertyKind::SameCommunity { m } => m,
            PropertyKind::GroupCommunity { m, m_prime } => m + m_prime,
            PropertyKind::EqualSizes => 0,
        };
        if constrained > self.capacity() {
            return Err(Error::InfeasiblePair(format!(
                "constrained node set of size {constrained} exceeds community capacity {}",
                self.capacity()
            )));
        }
        let z = Assignment::blocked(self.n, self.k)?;
        debug_assert_eq!(self.membership(&z)?, Membership::InC0);
        Ok(z)
    }

    /// Bootstrap radius: the class distance in the even regime, plus the
    /// assortativity-dependent slack `⌈C·p̂·K/(p̂−q̂)⌉` in the uneven regime.
    pub fn radius_rule(&self, p_hat: f64, q_hat: f64, c: f64) -> Result<usize> {
        if p_hat <= q_hat {
            return Err(Error::AssortativityViolation { p_hat, q_hat });
        }
        let d = self.class_distance()?;
        Ok(match self.regime {
            SizeRegime::Even => d,
            SizeRegime::Uneven { .. } => {
                d + (c * p_hat * self.k as f64 / (p_hat - q_hat)).ceil() as usize
            }
        })
    }

    /// Closed-form packing number of the boundary at tolerance
    /// `ε = ⌊√d(z0, C1)⌋`: `m` for SameCommunity, `1` for GroupCommunity,
    /// `n` for EqualSizes.
    pub fn packing_number(&self, z0: &Assignment) -> Result<usize> {
        if self.membership(z0)? != Membership::InC0 {
            return Err(Error::InvalidPair("packing center must lie in C0".into()));
        }
        self.class_distance()?; // surfaces infeasible pairs
        Ok(match self.kind {
            PropertyKind::SameCommunity { m } => m,
            PropertyKind::GroupCommunity { .. } => 1,
            PropertyKind::EqualSizes => self.n,
        })
    }

    /// The node block that moves in GroupCommunity constructions: the smaller
    /// of the two groups, roles swapped internally when `m < m'`.
    fn moving_block(&self) -> Option<Vec<u32>> {
        match self.kind {
            PropertyKind::GroupCommunity { m, m_prime } => {
                let range = if m_prime <= m {
                    m..m + m_prime
                } else {
                    0..m
                };
                Some(range.map(|v| v as u32).collect())
            }
            _ => None,
        }
    }

    /// Constructive boundary generation around a null center.
    ///
    /// - SameCommunity, even: exchange one node of `[m]` with a node of
    ///   another community (`|B| = m(n/K)(K−1)`);
    /// - SameCommunity, uneven: reassign one node of `[m]`
    ///   (`|B| = m(K−1)`);
    /// - GroupCommunity, uneven with small block: move the block to another
    ///   label (`|B| = K−1`); otherwise exchange it with an equal-sized set
    ///   from another community (`|B| = (K−1)·C(n/K, m∧m′)`);
    /// - EqualSizes: reassign any single node (`|B| = n(K−1)`).
    ///
    /// Members are verified against C1 membership and the radius, and come
    /// back lexicographically sorted by label vector.
    pub fn boundary(&self, z0: &Assignment, radius: usize) -> Result<Boundary> {
        if self.membership(z0)? != Membership::InC0 {
            return Err(Error::InvalidPair("boundary center must lie in C0".into()));
        }
        let d = self.class_distance()?;
        if radius < d {
            return Err(Error::InvalidPair(format!(
                "radius {radius} below class distance {d}"
            )));
        }
        let sizes = z0.community_sizes();
        let mut members: Vec<BoundaryMember> = Vec::new();

        let mut push = |assignment: Assignment, op: MoveOp, n1: usize, n2: usize| {
            members.push(BoundaryMember {
                assignment,
                op,
                n1,
                n2,
            });
        };

        match self.kind {
            PropertyKind::SameCommunity { m } => {
                if m < 2 {
                    return Err(Error::InfeasiblePair(
                        "SameCommunity with m < 2 has an empty alternative".into(),
                    ));
                }
                match self.regime {
                    SizeRegime::Even => {
                        for s in 0..m {
                            let ls = z0.label(s);
                            for t in 0..self.n {
                                let lt = z0.label(t);
                                if lt == ls {
                                    continue;
                                }
                                let za = z0.clone().with_label(s, lt).with_label(t, ls);
                                let n1 = sizes[ls as usize - 1] - 1 + sizes[lt as usize - 1] - 1;
                                push(
                                    za,
                                    MoveOp::Swap {
                                        a: s as u32,
                                        b: t as u32,
                                    },
                                    n1,
                                    n1,
                                );
                            }
                        }
                    }
                    SizeRegime::Uneven { .. } => {
                        for s in 0..m {
                            let from = z0.label(s);
                            for to in 1..=self.k as Label {
                                if to == from {
                                    continue;
                                }
                                let za = z0.clone().with_label(s, to);
                                let n1 = sizes[from as usize - 1] - 1;
                                let n2 = sizes[to as usize - 1];
                                push(
                                    za,
                                    MoveOp::Relabel {
                                        node: s as u32,
                                        from,
                                        to,
                                    },
                                    n1,
                                    n2,
                                );
                            }
                        }
                    }
                }
            }
            PropertyKind::GroupCommunity { m, m_prime } => {
                let block = self.moving_block().expect("group kind");
                let w = m.min(m_prime);
                let host = z0.label(block[0] as usize);
                let small_block = match self.regime {
                    SizeRegime::Uneven { c_k } => w <= c_k,
                    SizeRegime::Even => false,
                };
                if small_block {
                    for to in 1..=self.k as Label {
                        if to == host {
                            continue;
                        }
                        let mut za = z0.clone();
                        for &v in &block {
                            za.set_label(v as usize, to);
                        }
                        let n1 = w * (sizes[host as usize - 1] - w);
                        let n2 = w * sizes[to as usize - 1];
                        push(
                            za,
                            MoveOp::BlockMove {
                                block: block.clone(),
                                from: host,
                                to,
                            },
                            n1,
                            n2,
                        );
                    }
                } else {
                    // Exchange the block with every w-subset of every other
                    // community.
                    for to in 1..=self.k as Label {
                        if to == host {
                            continue;
                        }
                        let pool: Vec<u32> = (0..self.n)
                            .filter(|&v| z0.label(v) == to)
                            .map(|v| v as u32)
                            .collect();
                        if pool.len() < w {
                            continue;
                        }
                        for subset in k_subsets(&pool, w) {
                            let mut za = z0.clone();
                            for &v in &block {
                                za.set_label(v as usize, to);
                            }
                            for &v in &subset {
                                za.set_label(v as usize, host);
                            }
                            let n1 = w * (sizes[host as usize - 1] - w)
                                + w * (sizes[to as usize - 1] - w);
                            push(
                                za,
                                MoveOp::BlockExchange {
                                    block: block.clone(),
                                    counterpart: subset,
                                },
                                n1,
                                n1,
                            );
                        }
                    }
                }
            }
            PropertyKind::EqualSizes => {
                for v in 0..self.n {
                    let from = z0.label(v);
                    for to in 1..=self.k as Label {
                        if to == from {
                            continue;
                        }
                        let za = z0.clone().with_label(v, to);
                        let n1 = sizes[from as usize - 1] - 1;
                        let n2 = sizes[to as usize - 1];
                        push(
                            za,
                            MoveOp::Relabel {
                                node: v as u32,
                                from,
                                to,
                            },
                            n1,
                            n2,
                        );
                    }
                }
            }
        }

        // Drop anything outside the radius or (for tight c_k configurations)
        // outside C1, then order lexicographically for deterministic argmax
        // tie-breaking downstream.
        let mut kept = Vec::with_capacity(members.len());
        for mem in members {
            if mem.distance() > radius {
                continue;
            }
            if self.membership(&mem.assignment)? != Membership::InC1 {
                continue;
            }
            kept.push(mem);
        }
        kept.sort_by(|a, b| a.assignment.labels().cmp(b.assignment.labels()));
        Ok(Boundary {
            center: z0.clone(),
            radius,
            members: kept,
        })
    }
}

/// All w-subsets of a slice, in lexicographic index order.
fn k_subsets(pool: &[u32], w: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..w).collect();
    if w == 0 || w > pool.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| pool[i]).collect());
        // Advance the combination odometer.
        let mut i = w;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + pool.len() - w {
                break;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..w {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact misaligned edge sets between two equal-length assignments.
pub fn misaligned_edge_sets(z0: &Assignment, z1: &Assignment) -> Result<MisalignedEdges> {
    if z0.len() != z1.len() {
        return Err(Error::DimensionMismatch(format!(
            "assignment lengths {} vs {}",
            z0.len(),
            z1.len()
        )));
    }
    let n = z0.len();
    let mut e1 = Vec::new();
    let mut e2 = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let same0 = z0.label(i) == z0.label(j);
            let same1 = z1.label(i) == z1.label(j);
            match (same0, same1) {
                (true, false) => e1.push((i as u32, j as u32)),
                (false, true) => e2.push((i as u32, j as u32)),
                _ => {}
            }
        }
    }
    Ok(MisalignedEdges { e1, e2 })
}

/// `d(z0, z1) = max(n1, n2)` without materializing the edge sets.
pub fn assignment_distance(z0: &Assignment, z1: &Assignment) -> Result<usize> {
    if z0.len() != z1.len() {
        return Err(Error::DimensionMismatch(format!(
            "assignment lengths {} vs {}",
            z0.len(),
            z1.len()
        )));
    }
    let n = z0.len();
    let (mut n1, mut n2) = (0usize, 0usize);
    for i in 0..n {
        let (a0, a1) = (z0.label(i), z1.label(i));
        for j in (i + 1)..n {
            let same0 = a0 == z0.label(j);
            let same1 = a1 == z1.label(j);
            if same0 && !same1 {
                n1 += 1;
            } else if !same0 && same1 {
                n2 += 1;
            }
        }
    }
    Ok(n1.max(n2))
}

/// `assignment_distance` with an early exit: returns `None` as soon as the
/// distance is known to reach `cap`. Exhaustive scans over large classes use
/// this to prune far members.
pub fn assignment_distance_bounded(
    z0: &Assignment,
    z1: &Assignment,
    cap: usize,
) -> Option<usize> {
    debug_assert_eq!(z0.len(), z1.len());
    let n = z0.len();
    let (mut n1, mut n2) = (0usize, 0usize);
    for i in 0..n {
        let (a0, a1) = (z0.label(i), z1.label(i));
        for j in (i + 1)..n {
            let same0 = a0 == z0.label(j);
            let same1 = a1 == z1.label(j);
            if same0 && !same1 {
                n1 += 1;
            } else if !same0 && same1 {
                n2 += 1;
            }
        }
        if n1.max(n2) >= cap {
            return None;
        }
    }
    let d = n1.max(n2);
    (d < cap).then_some(d)
}

/// Apply a label permutation `sigma ∈ S_K` and node permutation `tau ∈ S_n`:
/// `output(i) = sigma(z(tau(i)))`.
pub fn permute_assignment(z: &Assignment, sigma: &[Label], tau: &[usize]) -> Result<Assignment> {
    let k = z.k();
    if sigma.len() != k {
        return Err(Error::MalformedPermutation(format!(
            "sigma length {} != K = {k}",
            sigma.len()
        )));
    }
    let mut seen_label = vec![false; k];
    for &l in sigma {
        if l == 0 || l as usize > k || std::mem::replace(&mut seen_label[l as usize - 1], true) {
            return Err(Error::MalformedPermutation(format!(
                "sigma is not a bijection on 1..={k}"
            )));
        }
    }
    if tau.len() != z.len() {
        return Err(Error::MalformedPermutation(format!(
            "tau length {} != n = {}",
            tau.len(),
            z.len()
        )));
    }
    let mut seen_node = vec![false; z.len()];
    for &i in tau {
        if i >= z.len() || std::mem::replace(&mut seen_node[i], true) {
            return Err(Error::MalformedPermutation(format!(
                "tau is not a bijection on 0..{}",
                z.len()
            )));
        }
    }
    let labels = tau
        .iter()
        .map(|&i| sigma[z.label(i) as usize - 1])
        .collect();
    Assignment::new(labels, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn asg(labels: &[Label], k: usize) -> Assignment {
        Assignment::new(labels.to_vec(), k).unwrap()
    }

    fn even(kind: PropertyKind, n: usize, k: usize) -> PropertyPair {
        PropertyPair::new(kind, n, k, SizeRegime::Even).unwrap()
    }

    fn uneven(kind: PropertyKind, n: usize, k: usize) -> PropertyPair {
        PropertyPair::new(kind, n, k, SizeRegime::Uneven { c_k: 2 }).unwrap()
    }

    #[test]
    fn same_community_membership() {
        let pair = even(PropertyKind::SameCommunity { m: 3 }, 6, 2);
        assert_eq!(
            pair.membership(&asg(&[1, 1, 1, 2, 2, 2], 2)).unwrap(),
            Membership::InC0
        );
        assert_eq!(
            pair.membership(&asg(&[1, 1, 2, 1, 2, 2], 2)).unwrap(),
            Membership::InC1
        );
        // Uneven sizes are outside the even-regime classes entirely.
        assert_eq!(
            pair.membership(&asg(&[1, 1, 1, 1, 2, 2], 2)).unwrap(),
            Membership::Neither
        );
    }

    #[test]
    fn group_community_membership() {
        let pair = even(PropertyKind::GroupCommunity { m: 2, m_prime: 1 }, 6, 2);
        // Nodes {1,2} same, node 3 different and label-constant: InC1.
        assert_eq!(
            pair.membership(&asg(&[1, 1, 2, 1, 2, 2], 2)).unwrap(),
            Membership::InC1
        );
        assert_eq!(
            pair.membership(&asg(&[1, 1, 1, 2, 2, 2], 2)).unwrap(),
            Membership::InC0
        );
        // First block split: neither hypothesis.
        assert_eq!(
            pair.membership(&asg(&[1, 2, 1, 1, 2, 2], 2)).unwrap(),
            Membership::Neither
        );
    }

    #[test]
    fn equal_sizes_membership_and_ck() {
        let pair = PropertyPair::equal_sizes(6, 2, 2).unwrap();
        assert_eq!(
            pair.membership(&asg(&[1, 1, 1, 2, 2, 2], 2)).unwrap(),
            Membership::InC0
        );
        assert_eq!(
            pair.membership(&asg(&[1, 1, 1, 1, 2, 2], 2)).unwrap(),
            Membership::InC1
        );
        // Size 6/0 deviates by 3 > c_k = 2.
        assert_eq!(
            pair.membership(&asg(&[1, 1, 1, 1, 1, 1], 2)).unwrap(),
            Membership::Neither
        );
    }

    #[test]
    fn misaligned_edges_small_case() {
        let me = misaligned_edge_sets(&asg(&[1, 1, 2, 2], 2), &asg(&[1, 2, 1, 2], 2)).unwrap();
        assert_eq!(me.e1, vec![(0, 1), (2, 3)]);
        assert_eq!(me.e2, vec![(0, 2), (1, 3)]);
        assert_eq!((me.n1(), me.n2()), (2, 2));
    }

    #[test]
    fn misaligned_empty_for_equivalent_assignments() {
        let z = asg(&[1, 2, 1, 2, 2, 1], 2);
        let relabeled = asg(&[2, 1, 2, 1, 1, 2], 2);
        let me = misaligned_edge_sets(&z, &relabeled).unwrap();
        assert!(me.e1.is_empty() && me.e2.is_empty());
    }

    #[test]
    fn single_swap_distance_is_2_over_k_minus_1() {
        // Balanced 2-block z0 on n = 10; swap node 0 with node 5.
        let z0 = Assignment::blocked(10, 2).unwrap();
        let z1 = z0.clone().with_label(0, 2).with_label(5, 1);
        let me = misaligned_edge_sets(&z0, &z1).unwrap();
        assert_eq!(me.n1(), 8); // 2(n/K − 1)
        assert_eq!(me.n2(), 8);
        assert_eq!(assignment_distance(&z0, &z1).unwrap(), 8);
    }

    #[test]
    fn figure_one_configuration_distance() {
        // z0 = (1,1,2,...,2), z1 = (1,2,2,...,2): d = n − 2.
        for n in [5usize, 8, 12] {
            let mut l0 = vec![2 as Label; n];
            l0[0] = 1;
            l0[1] = 1;
            let mut l1 = vec![2 as Label; n];
            l1[0] = 1;
            let d = assignment_distance(&asg(&l0, 2), &asg(&l1, 2)).unwrap();
            assert_eq!(d, n - 2);
        }
    }

    #[test]
    fn identical_assignments_distance_zero() {
        let z = asg(&[1, 2, 3, 1, 2, 3], 3);
        assert_eq!(assignment_distance(&z, &z).unwrap(), 0);
    }

    #[test]
    fn class_distances_closed_forms() {
        let same = even(PropertyKind::SameCommunity { m: 2 }, 10, 2);
        assert_eq!(same.class_distance().unwrap(), 8);
        let eq = PropertyPair::equal_sizes(10, 2, 2).unwrap();
        assert_eq!(eq.class_distance().unwrap(), 5);
        let grp = even(PropertyKind::GroupCommunity { m: 2, m_prime: 1 }, 8, 2);
        assert_eq!(grp.class_distance().unwrap(), 6);
        let grp_small = uneven(PropertyKind::GroupCommunity { m: 3, m_prime: 1 }, 8, 2);
        assert_eq!(grp_small.class_distance().unwrap(), 4); // 1 · n/K
        let same_un = uneven(PropertyKind::SameCommunity { m: 2 }, 10, 2);
        assert_eq!(same_un.class_distance().unwrap(), 5);
    }

    #[test]
    fn shadow_assignment_canonical() {
        let pair = even(PropertyKind::SameCommunity { m: 3 }, 6, 2);
        let z = pair.shadow_assignment().unwrap();
        assert_eq!(z.labels(), &[1, 1, 1, 2, 2, 2]);
        assert_eq!(pair.membership(&z).unwrap(), Membership::InC0);
        // Determinism.
        assert_eq!(z, pair.shadow_assignment().unwrap());
    }

    #[test]
    fn shadow_infeasible_when_block_exceeds_capacity() {
        let pair = even(PropertyKind::SameCommunity { m: 4 }, 6, 2);
        assert!(matches!(
            pair.shadow_assignment(),
            Err(Error::InfeasiblePair(_))
        ));
    }

    #[test]
    fn boundary_same_community_even_n4() {
        let pair = even(PropertyKind::SameCommunity { m: 2 }, 4, 2);
        let z0 = asg(&[1, 1, 2, 2], 2);
        let b = pair.boundary(&z0, pair.class_distance().unwrap()).unwrap();
        let got: Vec<&[Label]> = b.members().iter().map(|m| m.assignment.labels()).collect();
        assert_eq!(
            got,
            vec![
                &[1, 2, 1, 2][..],
                &[1, 2, 2, 1][..],
                &[2, 1, 1, 2][..],
                &[2, 1, 2, 1][..],
            ]
        );
        for m in b.members() {
            assert_eq!(m.distance(), 2);
        }
    }

    #[test]
    fn boundary_cardinalities() {
        // m(n/K)(K−1)
        let pair = even(PropertyKind::SameCommunity { m: 3 }, 10, 2);
        let b = pair
            .boundary(
                &pair.shadow_assignment().unwrap(),
                pair.class_distance().unwrap(),
            )
            .unwrap();
        assert_eq!(b.len(), 15);

        // n(K−1)
        let pair = PropertyPair::equal_sizes(10, 2, 2).unwrap();
        let b = pair
            .boundary(
                &pair.shadow_assignment().unwrap(),
                pair.class_distance().unwrap(),
            )
            .unwrap();
        assert_eq!(b.len(), 10);

        // K−1 (small moved block)
        let pair = uneven(PropertyKind::GroupCommunity { m: 3, m_prime: 1 }, 8, 2);
        let b = pair
            .boundary(
                &pair.shadow_assignment().unwrap(),
                pair.class_distance().unwrap(),
            )
            .unwrap();
        assert_eq!(b.len(), 1);

        // (K−1)·C(n/K, m∧m′)
        let pair = even(PropertyKind::GroupCommunity { m: 2, m_prime: 1 }, 8, 2);
        let b = pair
            .boundary(
                &pair.shadow_assignment().unwrap(),
                pair.class_distance().unwrap(),
            )
            .unwrap();
        assert_eq!(b.len(), 4);
    }

    #[test]
    fn boundary_members_cached_counts_match_exact_sets() {
        for pair in [
            even(PropertyKind::SameCommunity { m: 2 }, 8, 2),
            uneven(PropertyKind::SameCommunity { m: 3 }, 9, 3),
            PropertyPair::equal_sizes(9, 3, 2).unwrap(),
            even(PropertyKind::GroupCommunity { m: 2, m_prime: 1 }, 8, 2),
            uneven(PropertyKind::GroupCommunity { m: 4, m_prime: 2 }, 12, 2),
        ] {
            let z0 = pair.shadow_assignment().unwrap();
            let radius = pair.radius_rule(0.3, 0.1, 0.0).unwrap();
            let b = pair.boundary(&z0, radius).unwrap();
            assert!(!b.is_empty(), "{pair:?}");
            for (k, mem) in b.members().iter().enumerate() {
                let me = b.misaligned(k);
                assert_eq!(me.n1(), mem.n1, "{pair:?} member {k}");
                assert_eq!(me.n2(), mem.n2, "{pair:?} member {k}");
                assert_eq!(
                    pair.membership(&mem.assignment).unwrap(),
                    Membership::InC1
                );
            }
        }
    }

    #[test]
    fn radius_rule_values() {
        let pair = even(PropertyKind::SameCommunity { m: 2 }, 10, 2);
        assert_eq!(pair.radius_rule(0.9, 0.1, 1.0).unwrap(), 8);
        let pair = uneven(PropertyKind::SameCommunity { m: 2 }, 10, 2);
        assert_eq!(pair.radius_rule(0.3, 0.1, 0.0).unwrap(), 5);
        assert_eq!(pair.radius_rule(0.3, 0.1, 1.0).unwrap(), 5 + 3);
        assert!(matches!(
            pair.radius_rule(0.1, 0.3, 1.0),
            Err(Error::AssortativityViolation { .. })
        ));
    }

    #[test]
    fn packing_closed_forms() {
        let pair = even(PropertyKind::SameCommunity { m: 3 }, 12, 2);
        assert_eq!(
            pair.packing_number(&pair.shadow_assignment().unwrap())
                .unwrap(),
            3
        );
        let pair = even(PropertyKind::GroupCommunity { m: 2, m_prime: 1 }, 8, 2);
        assert_eq!(
            pair.packing_number(&pair.shadow_assignment().unwrap())
                .unwrap(),
            1
        );
        let pair = PropertyPair::equal_sizes(10, 2, 2).unwrap();
        assert_eq!(
            pair.packing_number(&pair.shadow_assignment().unwrap())
                .unwrap(),
            10
        );
    }

    #[test]
    fn permute_identity_and_composition() {
        let z = asg(&[1, 2, 3, 1, 2, 3], 3);
        let id_sigma: Vec<Label> = vec![1, 2, 3];
        let id_tau: Vec<usize> = (0..6).collect();
        assert_eq!(permute_assignment(&z, &id_sigma, &id_tau).unwrap(), z);

        let s1: Vec<Label> = vec![2, 3, 1];
        let t1: Vec<usize> = vec![5, 4, 3, 2, 1, 0];
        let s2: Vec<Label> = vec![3, 1, 2];
        let t2: Vec<usize> = vec![1, 0, 3, 2, 5, 4];
        let step = permute_assignment(&permute_assignment(&z, &s1, &t1).unwrap(), &s2, &t2).unwrap();
        // Composition: (τ2∘σ2)(τ1∘σ1)(z)(i) = σ2(σ1(z(τ1(τ2(i))))).
        let sigma12: Vec<Label> = s1.iter().map(|&l| s2[l as usize - 1]).collect();
        let tau12: Vec<usize> = t2.iter().map(|&i| t1[i]).collect();
        assert_eq!(step, permute_assignment(&z, &sigma12, &tau12).unwrap());
    }

    #[test]
    fn permute_rejects_malformed() {
        let z = asg(&[1, 2, 1, 2], 2);
        assert!(permute_assignment(&z, &[1, 1], &[0, 1, 2, 3]).is_err());
        assert!(permute_assignment(&z, &[1, 2], &[0, 1, 2, 2]).is_err());
        assert!(permute_assignment(&z, &[1, 2], &[0, 1]).is_err());
    }

    #[test]
    fn distance_invariant_under_simultaneous_permutation() {
        let z0 = asg(&[1, 1, 2, 2, 3, 3, 1, 2], 3);
        let z1 = asg(&[1, 2, 2, 3, 3, 1, 1, 2], 3);
        let sigma: Vec<Label> = vec![3, 1, 2];
        let tau: Vec<usize> = vec![4, 2, 7, 0, 6, 1, 5, 3];
        let p0 = permute_assignment(&z0, &sigma, &tau).unwrap();
        let p1 = permute_assignment(&z1, &sigma, &tau).unwrap();
        assert_eq!(
            assignment_distance(&z0, &z1).unwrap(),
            assignment_distance(&p0, &p1).unwrap()
        );
    }

    #[test]
    fn equal_sizes_requires_uneven_regime() {
        assert!(PropertyPair::new(PropertyKind::EqualSizes, 6, 2, SizeRegime::Even).is_err());
    }

    #[test]
    fn even_regime_requires_divisibility() {
        assert!(
            PropertyPair::new(PropertyKind::SameCommunity { m: 2 }, 7, 2, SizeRegime::Even)
                .is_err()
        );
    }
}
