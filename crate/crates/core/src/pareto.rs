//! Vector-valued shortest paths: quality vectors, domination, Pareto
//! antichains, and the round-based label algorithm that computes the set of
//! minimal weight vectors over all source-to-target paths of a weighted
//! digraph. Weights and labels live in `K_cap`, the k-tuples of nonnegative
//! integers with component sum at most `cap`; anything escaping it is
//! discarded.

use std::fmt;

use crate::error::{Error, Result};

/// A k-tuple of nonnegative integers; the size profile of a linkage or a
/// tracker edge weight. Ordered lexicographically (`Ord`), compared by
/// componentwise domination via [`dominated`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QualityVector(Vec<u32>);

impl QualityVector {
    pub fn new(components: Vec<u32>) -> QualityVector {
        QualityVector(components)
    }

    pub fn zeros(arity: usize) -> QualityVector {
        QualityVector(vec![0; arity])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn component(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    pub(crate) fn add(&self, other: &QualityVector) -> QualityVector {
        debug_assert_eq!(self.arity(), other.arity());
        QualityVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise `self <= other`; arities assumed equal.
    pub(crate) fn le(&self, other: &QualityVector) -> bool {
        debug_assert_eq!(self.arity(), other.arity());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Debug for QualityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for QualityVector {
    /// Space-separated components, matching the result text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// True iff `x` is componentwise at most `y`.
pub fn dominated(x: &QualityVector, y: &QualityVector) -> Result<bool> {
    if x.arity() != y.arity() {
        return Err(Error::invalid(format!(
            "arity mismatch: {} vs {}",
            x.arity(),
            y.arity()
        )));
    }
    Ok(x.le(y))
}

/// An antichain of quality vectors: no member dominates another. Iteration
/// order is lexicographic.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ParetoSet {
    vectors: Vec<QualityVector>,
}

impl ParetoSet {
    pub fn empty() -> ParetoSet {
        ParetoSet::default()
    }

    /// The unique antichain of minimal elements of the input.
    pub fn minimal_set<I>(vectors: I) -> Result<ParetoSet>
    where
        I: IntoIterator<Item = QualityVector>,
    {
        let mut all: Vec<QualityVector> = vectors.into_iter().collect();
        if let Some(first) = all.first() {
            let arity = first.arity();
            if let Some(bad) = all.iter().find(|v| v.arity() != arity) {
                return Err(Error::invalid(format!(
                    "mixed arities in vector collection: {} vs {}",
                    arity,
                    bad.arity()
                )));
            }
        }
        // Lexicographic sort puts every dominator before what it dominates,
        // so one forward pass suffices.
        all.sort();
        all.dedup();
        let mut kept: Vec<QualityVector> = Vec::new();
        for v in all {
            if !kept.iter().any(|u| u.le(&v)) {
                kept.push(v);
            }
        }
        Ok(ParetoSet { vectors: kept })
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn contains(&self, v: &QualityVector) -> bool {
        self.vectors.binary_search(v).is_ok()
    }

    pub fn vectors(&self) -> &[QualityVector] {
        &self.vectors
    }

    pub fn iter(&self) -> impl Iterator<Item = &QualityVector> {
        self.vectors.iter()
    }

    /// True iff no member dominates another distinct member. Holds by
    /// construction; exposed so tests can re-assert it.
    pub fn is_antichain(&self) -> bool {
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate() {
                if i != j && u.le(v) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for ParetoSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.vectors.iter()).finish()
    }
}

impl FromIterator<QualityVector> for ParetoSet {
    /// Panics on mixed arities; use [`ParetoSet::minimal_set`] for fallible
    /// construction.
    fn from_iter<I: IntoIterator<Item = QualityVector>>(iter: I) -> Self {
        ParetoSet::minimal_set(iter).expect("mixed arities")
    }
}

/// A digraph with vector edge weights and a designated source/target pair.
/// This is the input shape of the label algorithm; trackers convert
/// themselves into it.
#[derive(Clone, Debug)]
pub struct VectorDigraph {
    node_count: usize,
    arity: usize,
    cap: u32,
    source: usize,
    target: usize,
    edges: Vec<(usize, usize, QualityVector)>,
    out_ranges: Vec<(usize, usize)>,
}

impl VectorDigraph {
    /// Validates and indexes the edge list. Edges may arrive in any order;
    /// duplicates of the same ordered pair are rejected, and every weight
    /// must lie in `K_cap`.
    pub fn new(
        node_count: usize,
        arity: usize,
        cap: u32,
        source: usize,
        target: usize,
        mut edges: Vec<(usize, usize, QualityVector)>,
    ) -> Result<VectorDigraph> {
        if source >= node_count || target >= node_count {
            return Err(Error::invalid("source or target out of range"));
        }
        if source == target {
            return Err(Error::invalid("source and target must be distinct"));
        }
        edges.sort_by_key(|(u, v, _)| (*u, *v));
        for window in edges.windows(2) {
            if window[0].0 == window[1].0 && window[0].1 == window[1].1 {
                return Err(Error::invalid(format!(
                    "duplicate edge ({}, {})",
                    window[0].0, window[0].1
                )));
            }
        }
        for (u, v, w) in &edges {
            if *u >= node_count || *v >= node_count {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::invalid(format!("loop at node {u}")));
            }
            if w.arity() != arity {
                return Err(Error::invalid(format!(
                    "weight arity {} on edge ({u}, {v}), expected {arity}",
                    w.arity()
                )));
            }
            if w.sum() > cap {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) weight leaves K_{cap}"
                )));
            }
        }
        let mut out_ranges = vec![(0, 0); node_count];
        let mut i = 0;
        while i < edges.len() {
            let u = edges[i].0;
            let start = i;
            while i < edges.len() && edges[i].0 == u {
                i += 1;
            }
            out_ranges[u] = (start, i);
        }
        Ok(VectorDigraph {
            node_count,
            arity,
            cap,
            source,
            target,
            edges,
            out_ranges,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Edges sorted by `(from, to)`.
    pub fn edges(&self) -> &[(usize, usize, QualityVector)] {
        &self.edges
    }

    pub fn out_edges(&self, u: usize) -> &[(usize, usize, QualityVector)] {
        let (a, b) = self.out_ranges[u];
        &self.edges[a..b]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&QualityVector> {
        self.out_edges(u)
            .binary_search_by_key(&v, |(_, to, _)| *to)
            .ok()
            .map(|i| &self.out_edges(u)[i].2)
    }
}

#[derive(Clone, Debug)]
struct Label {
    vector: QualityVector,
    pred: Option<(usize, QualityVector)>,
}

/// Final labels of the round-based algorithm, with enough predecessor
/// information to rebuild one witness path per output vector.
pub struct ParetoRun {
    labels: Vec<Vec<Label>>,
    target: usize,
    source: usize,
    /// Rounds actually executed.
    pub rounds: usize,
    /// Whether a round produced no change before the round limit.
    pub stabilized: bool,
}

impl ParetoRun {
    /// Label vectors currently held at `node`, in lexicographic order.
    pub fn labels_at(&self, node: usize) -> Vec<QualityVector> {
        self.labels[node].iter().map(|l| l.vector.clone()).collect()
    }

    pub fn target_set(&self) -> ParetoSet {
        ParetoSet {
            vectors: self.labels_at(self.target),
        }
    }
}

/// Inserts `vector` into an antichain label list kept in lexicographic
/// order. Equal vectors keep the incumbent (and its predecessor); dominated
/// candidates are dropped; dominating candidates evict what they dominate.
fn insert_label(labels: &mut Vec<Label>, vector: QualityVector, pred: Option<(usize, QualityVector)>) -> bool {
    if labels.iter().any(|l| l.vector.le(&vector)) {
        return false;
    }
    labels.retain(|l| !vector.le(&l.vector));
    let pos = labels
        .binary_search_by(|l| l.vector.cmp(&vector))
        .unwrap_err();
    labels.insert(pos, Label { vector, pred });
    true
}

/// Runs the label rounds: labels at a node are the minimal vectors in
/// `K_cap` that are either already present or reachable as `weight + x`
/// over an in-edge. Executes at most `node_count` rounds, stopping early
/// once a round changes nothing.
pub fn run_labels(g: &VectorDigraph) -> ParetoRun {
    run_labels_inner(g, None).0
}

/// Like [`run_labels`] but also returns, per round, the label vectors of
/// every node (round 0 first). Test instrumentation.
pub fn run_labels_with_history(g: &VectorDigraph) -> (ParetoRun, Vec<Vec<Vec<QualityVector>>>) {
    let mut history = Vec::new();
    let (run, hist) = run_labels_inner(g, Some(&mut history));
    (run, hist.unwrap())
}

fn run_labels_inner(
    g: &VectorDigraph,
    mut history: Option<&mut Vec<Vec<Vec<QualityVector>>>>,
) -> (ParetoRun, Option<Vec<Vec<Vec<QualityVector>>>>) {
    let n = g.node_count();
    let mut labels: Vec<Vec<Label>> = vec![Vec::new(); n];
    labels[g.source()].push(Label {
        vector: QualityVector::zeros(g.arity()),
        pred: None,
    });
    let snapshot = |labels: &Vec<Vec<Label>>| {
        labels
            .iter()
            .map(|ls| ls.iter().map(|l| l.vector.clone()).collect())
            .collect::<Vec<Vec<QualityVector>>>()
    };
    if let Some(h) = history.as_deref_mut() {
        h.push(snapshot(&labels));
    }

    let mut rounds = 0;
    let mut stabilized = false;
    for _ in 0..n {
        rounds += 1;
        // Jacobi update: every node's new labels are computed from the
        // previous round's frozen labels.
        let mut next: Vec<Vec<Label>> = labels.clone();
        let mut changed = false;
        for &(u, v, ref w) in g.edges() {
            for x in &labels[u] {
                let cand = x.vector.add(w);
                if cand.sum() > g.cap() {
                    continue;
                }
                if insert_label(&mut next[v], cand, Some((u, x.vector.clone()))) {
                    changed = true;
                }
            }
        }
        labels = next;
        if let Some(h) = history.as_deref_mut() {
            h.push(snapshot(&labels));
        }
        if !changed {
            stabilized = true;
            break;
        }
    }

    (
        ParetoRun {
            labels,
            target: g.target(),
            source: g.source(),
            rounds,
            stabilized,
        },
        history.map(std::mem::take),
    )
}

/// The set of minimal weight-sum vectors over all source-to-target paths.
pub fn vector_shortest_paths(g: &VectorDigraph) -> ParetoSet {
    run_labels(g).target_set()
}

/// Rebuilds a source-to-target node path whose weight sum equals `target`,
/// by following recorded predecessors. `target` must be in the output set.
pub fn reconstruct_witness(
    g: &VectorDigraph,
    run: &ParetoRun,
    target: &QualityVector,
) -> Result<Vec<usize>> {
    let mut node = run.target;
    let mut vector = target.clone();
    if !run.labels[node].iter().any(|l| l.vector == vector) {
        return Err(Error::NotFound(format!(
            "vector {target:?} is not achieved at the target"
        )));
    }
    let mut rev = vec![node];
    loop {
        let label = run.labels[node]
            .iter()
            .find(|l| l.vector == vector)
            .ok_or_else(|| {
                Error::InvariantViolation(format!(
                    "predecessor label {vector:?} missing at node {node}"
                ))
            })?;
        match &label.pred {
            None => {
                if node != run.source || vector != QualityVector::zeros(g.arity()) {
                    return Err(Error::InvariantViolation(
                        "predecessor chain ended away from the source".into(),
                    ));
                }
                break;
            }
            Some((u, x)) => {
                node = *u;
                vector = x.clone();
                rev.push(node);
            }
        }
    }
    rev.reverse();

    // The chain is simple and its weights must sum to the target.
    let mut seen = std::collections::HashSet::new();
    if !rev.iter().all(|v| seen.insert(*v)) {
        return Err(Error::InvariantViolation("witness path revisits a node".into()));
    }
    let mut total = QualityVector::zeros(g.arity());
    for pair in rev.windows(2) {
        let w = g.weight(pair[0], pair[1]).ok_or_else(|| {
            Error::InvariantViolation(format!("witness uses missing edge ({}, {})", pair[0], pair[1]))
        })?;
        total = total.add(w);
    }
    if total != *target {
        return Err(Error::InvariantViolation(format!(
            "witness weight {total:?} differs from target {target:?}"
        )));
    }
    Ok(rev)
}
