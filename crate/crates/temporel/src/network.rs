//! Qualitative constraint networks over interval variables, with queue-based
//! path consistency and deterministic scenario extraction.
//!
//! A [`QualNetwork`] keeps one [`RelationSet`] label per ordered node pair,
//! with the transpose symmetry `edge(j,i) = transpose(edge(i,j))` maintained
//! through every update; a missing constraint is the full set. Path
//! consistency repeatedly tightens `R_ij` by `R_ik o R_kj` until a fixpoint,
//! driven by a FIFO queue of arcs. The verdict is three-valued: an emptied
//! edge is a proof of inconsistency, a fixpoint whose labels are all
//! preconvex is a proof of consistency, and anything else is left undecided
//! rather than overclaimed.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use crate::allen::{self, AllenError, BaseRelation, RelationSet};

/// Errors from network construction, parsing, and scenario extraction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("constraint between `{i}` and `{j}` became empty")]
    EmptyAfterIntersection { i: String, j: String },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("network is inconsistent; no scenario exists")]
    InconsistentNetwork,
    #[error("scenario search exhausted without finding a model")]
    NoScenario,
    #[error("line {line}: expected `<node> <relation> <node>`")]
    BadLine { line: usize },
    #[error("line {line}: {source}")]
    BadRelation { line: usize, source: AllenError },
}

/// Outcome of path consistency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// An edge became empty: no model exists.
    Inconsistent,
    /// Fixpoint reached and every label is preconvex: a model exists.
    Consistent,
    /// Fixpoint reached but some label falls outside the tractable class;
    /// path consistency alone does not settle the question.
    PathConsistentUndecided,
}

/// A constraint network over named interval variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualNetwork {
    names: Vec<String>,
    edges: Vec<Vec<RelationSet>>,
}

impl Default for QualNetwork {
    fn default() -> Self {
        Self::new()
    }
}

impl QualNetwork {
    pub fn new() -> Self {
        QualNetwork {
            names: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn node_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Index of `name`, creating the node (with all edges unconstrained)
    /// when it is new.
    pub fn ensure_node(&mut self, name: &str) -> usize {
        if let Some(i) = self.node_id(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.into());
        for row in &mut self.edges {
            row.push(RelationSet::FULL);
        }
        let mut row = alloc::vec![RelationSet::FULL; i + 1];
        row[i] = RelationSet::singleton(BaseRelation::Eq);
        self.edges.push(row);
        i
    }

    pub fn edge(&self, i: usize, j: usize) -> RelationSet {
        self.edges[i][j]
    }

    fn set_edge(&mut self, i: usize, j: usize, r: RelationSet) {
        self.edges[i][j] = r;
        self.edges[j][i] = r.transpose();
    }

    /// Intersects the label on `(i, j)` with `r` (and the transpose edge
    /// with the transpose). An emptied label is stored — the network is then
    /// inconsistent — and reported as an error.
    pub fn add_constraint(
        &mut self,
        i: usize,
        j: usize,
        r: RelationSet,
    ) -> Result<(), NetworkError> {
        let next = self.edges[i][j] & r;
        self.set_edge(i, j, next);
        if next.is_empty() && i != j {
            return Err(NetworkError::EmptyAfterIntersection {
                i: self.names[i].clone(),
                j: self.names[j].clone(),
            });
        }
        Ok(())
    }

    /// Convenience: add a constraint between named nodes, creating them.
    pub fn constrain(&mut self, i: &str, j: &str, r: RelationSet) -> Result<(), NetworkError> {
        let a = self.ensure_node(i);
        let b = self.ensure_node(j);
        self.add_constraint(a, b, r)
    }

    fn all_arcs(&self) -> Vec<(usize, usize)> {
        let n = self.node_count();
        let mut arcs = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    arcs.push((i, j));
                }
            }
        }
        arcs
    }

    /// Path consistency with the canonical initial queue order.
    pub fn path_consistency(&mut self) -> Verdict {
        let arcs = self.all_arcs();
        self.path_consistency_from(arcs)
    }

    /// Path consistency with the initial queue shuffled from `seed`; the
    /// fixpoint must not depend on the order (see the confluence tests).
    pub fn path_consistency_seeded(&mut self, seed: u64) -> Verdict {
        let mut arcs = self.all_arcs();
        let mut state = seed;
        for k in (1..arcs.len()).rev() {
            let r = splitmix64(&mut state) as usize % (k + 1);
            arcs.swap(k, r);
        }
        self.path_consistency_from(arcs)
    }

    fn path_consistency_from(&mut self, initial: Vec<(usize, usize)>) -> Verdict {
        let n = self.node_count();
        let mut queue: VecDeque<(usize, usize)> = initial.into();
        let mut queued = alloc::vec![true; n * n];
        while let Some((i, j)) = queue.pop_front() {
            queued[i * n + j] = false;
            let rij = self.edges[i][j];
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                // tighten (i,k) through j
                let tightened = self.edges[i][k] & rij.compose(self.edges[j][k]);
                if tightened != self.edges[i][k] {
                    if tightened.is_empty() {
                        self.set_edge(i, k, tightened);
                        return Verdict::Inconsistent;
                    }
                    self.set_edge(i, k, tightened);
                    for arc in [(i, k), (k, i)] {
                        if !queued[arc.0 * n + arc.1] {
                            queued[arc.0 * n + arc.1] = true;
                            queue.push_back(arc);
                        }
                    }
                }
                // tighten (k,j) through i
                let tightened = self.edges[k][j] & self.edges[k][i].compose(rij);
                if tightened != self.edges[k][j] {
                    if tightened.is_empty() {
                        self.set_edge(k, j, tightened);
                        return Verdict::Inconsistent;
                    }
                    self.set_edge(k, j, tightened);
                    for arc in [(k, j), (j, k)] {
                        if !queued[arc.0 * n + arc.1] {
                            queued[arc.0 * n + arc.1] = true;
                            queue.push_back(arc);
                        }
                    }
                }
            }
        }
        if (0..n).any(|i| (0..n).any(|j| self.edges[i][j].is_empty())) {
            return Verdict::Inconsistent;
        }
        let all_preconvex = (0..n)
            .all(|i| (0..n).all(|j| i == j || self.edges[i][j].is_preconvex()));
        if all_preconvex {
            Verdict::Consistent
        } else {
            Verdict::PathConsistentUndecided
        }
    }

    /// Finds one atomic refinement (a single base relation per edge) that
    /// survives path consistency, by chronological backtracking over the
    /// canonical relation order. A path-consistent atomic network is
    /// globally consistent, so the result is a genuine model.
    pub fn scenario(&self) -> Result<Scenario, NetworkError> {
        let mut net = self.clone();
        match net.path_consistency() {
            Verdict::Inconsistent => return Err(NetworkError::InconsistentNetwork),
            _ => {}
        }
        let refined = refine(&net).ok_or(NetworkError::NoScenario)?;
        Scenario::from_atomic(&refined)
    }

    /// Renders one consistent scenario as a fixed-width timeline. The
    /// header states explicitly that the drawing is a single model among
    /// possibly many, echoing that a chronogram can only ever show one.
    pub fn export_chronogram(&self) -> Result<String, NetworkError> {
        let scenario = self.scenario()?;
        Ok(scenario.render(self))
    }

    /// Parses the line format `<node> <relation> <node>`, one constraint per
    /// line, `#` starting a comment. Constraints that empty an edge are kept
    /// (the parse succeeds; solving will report inconsistency).
    pub fn parse(text: &str) -> Result<QualNetwork, NetworkError> {
        let mut net = QualNetwork::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(a), Some(rel), Some(b), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(NetworkError::BadLine { line: idx + 1 });
            };
            let r = allen::parse_relation(rel)
                .map_err(|source| NetworkError::BadRelation {
                    line: idx + 1,
                    source,
                })?;
            let _ = net.constrain(a, b, r);
        }
        Ok(net)
    }
}

/// Chronological backtracking: tighten the first non-singleton edge to each
/// of its base relations in canonical order, propagate, recurse.
fn refine(net: &QualNetwork) -> Option<QualNetwork> {
    let n = net.node_count();
    let target = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .find(|&(i, j)| net.edge(i, j).len() > 1);
    let Some((i, j)) = target else {
        return Some(net.clone());
    };
    for r in net.edge(i, j).iter() {
        let mut attempt = net.clone();
        attempt.set_edge(i, j, RelationSet::singleton(r));
        if attempt.path_consistency() != Verdict::Inconsistent {
            if let Some(solved) = refine(&attempt) {
                return Some(solved);
            }
        }
    }
    None
}

/// A concrete model: an integer rank for every interval endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    /// `(beg_rank, end_rank)` per node, in node order.
    pub ranks: Vec<(usize, usize)>,
}

impl Scenario {
    /// Derives endpoint ranks from an atomic network by projecting every
    /// base relation onto its four endpoint comparisons, merging the equal
    /// endpoints, and ranking the merged classes by longest path.
    fn from_atomic(net: &QualNetwork) -> Result<Scenario, NetworkError> {
        let n = net.node_count();
        // points 2i (beg) and 2i+1 (end)
        let p = 2 * n;
        let mut parent: Vec<usize> = (0..p).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        let mut less: Vec<(usize, usize)> = Vec::new();
        for i in 0..n {
            less.push((2 * i, 2 * i + 1));
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let r = net
                    .edge(i, j)
                    .iter()
                    .next()
                    .ok_or(NetworkError::NoScenario)?;
                let (x, y) = r.code();
                // zone of beg(i) and end(i) against (beg(j), end(j))
                for (point, zone) in [(2 * i, x), (2 * i + 1, y)] {
                    match zone {
                        0 => less.push((point, 2 * j)),
                        1 => {
                            let a = find(&mut parent, point);
                            let b = find(&mut parent, 2 * j);
                            parent[a] = b;
                        }
                        2 => {
                            less.push((2 * j, point));
                            less.push((point, 2 * j + 1));
                        }
                        3 => {
                            let a = find(&mut parent, point);
                            let b = find(&mut parent, 2 * j + 1);
                            parent[a] = b;
                        }
                        _ => less.push((2 * j + 1, point)),
                    }
                }
            }
        }
        // longest-path ranks over the strict-order graph of classes
        let roots: Vec<usize> = (0..p).map(|x| find(&mut parent, x)).collect();
        let edges: Vec<(usize, usize)> = less
            .into_iter()
            .map(|(a, b)| (roots[a], roots[b]))
            .collect();
        let mut rank = alloc::vec![0usize; p];
        let mut changed = true;
        let mut guard = 0;
        while changed {
            changed = false;
            guard += 1;
            if guard > p + 2 {
                // a cycle through a strict edge: contradicts atomicity
                return Err(NetworkError::NoScenario);
            }
            for &(a, b) in &edges {
                if a == b {
                    return Err(NetworkError::NoScenario);
                }
                if rank[b] < rank[a] + 1 {
                    rank[b] = rank[a] + 1;
                    changed = true;
                }
            }
        }
        Ok(Scenario {
            ranks: (0..n)
                .map(|i| (rank[roots[2 * i]], rank[roots[2 * i + 1]]))
                .collect(),
        })
    }

    /// Fixed-width timeline, one row per node.
    fn render(&self, net: &QualNetwork) -> String {
        use core::fmt::Write;
        let name_w = net
            .names
            .iter()
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "# one consistent scenario (a single model among possibly many)");
        for (i, &(b, e)) in self.ranks.iter().enumerate() {
            let _ = write!(out, "{:w$} ", net.names[i], w = name_w);
            for _ in 0..b * 4 {
                out.push(' ');
            }
            out.push('|');
            for _ in 0..(e - b) * 4 {
                out.push('-');
            }
            out.push('|');
            let _ = writeln!(out, "  [{b},{e}]");
        }
        out
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
