//! The tracker: an auxiliary digraph whose vertices are the instance's
//! rails plus two artificial endpoints `s0` and `t0`, whose edges follow
//! the arrow relation, and whose vector weights account for member sizes.
//! Source-to-target paths of the tracker trace linkages for the instance.

use std::fmt::Write as _;
use std::time::Instant;

use crate::digraph::{Path, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::pareto::{QualityVector, VectorDigraph};
use crate::rails::{
    arrow_unchecked, enumerate_rails_bounded, validate_linkage_for_instance, Linkage,
    ProblemInstance, Rail,
};
use crate::tick::Ticker;

/// Node ids: `0` is `s0`, rail `i` is node `i + 1`, and `rail_count + 1`
/// is `t0`. Immutable once built.
pub struct Tracker {
    rails: Vec<Rail>,
    k: usize,
    graph_n: usize,
    m: usize,
    c: usize,
    source_out: Vec<usize>,
    rail_out: Vec<Vec<usize>>,
    to_target: Vec<bool>,
    edge_count: usize,
}

/// Builds the `(k, m, c)`-tracker: vertex set `rails ∪ {s0, t0}`, an edge
/// `s0 -> r` when every member of `r` starts at its source terminal, an
/// edge `r -> t0` when every member ends at its target terminal, and
/// `r -> r'` exactly when the arrow relation holds.
pub fn build_tracker(inst: &ProblemInstance, m: usize, c: usize) -> Result<Tracker> {
    build_tracker_bounded(inst, m, c, None)
}

pub(crate) fn build_tracker_bounded(
    inst: &ProblemInstance,
    m: usize,
    c: usize,
    deadline: Option<Instant>,
) -> Result<Tracker> {
    let rails = enumerate_rails_bounded(inst, m, c, deadline)?;
    let k = inst.k();
    let mut ticker = Ticker::new(deadline);

    let mut source_out = Vec::new();
    let mut to_target = vec![false; rails.len()];
    for (i, rail) in rails.iter().enumerate() {
        let starts = (0..k).all(|j| rail.member(j).first() == inst.source(j));
        if starts {
            source_out.push(i);
        }
        to_target[i] = (0..k).all(|j| rail.member(j).last() == inst.target(j));
    }

    let mut rail_out = vec![Vec::new(); rails.len()];
    let mut edge_count = source_out.len() + to_target.iter().filter(|&&t| t).count();
    for (i, r1) in rails.iter().enumerate() {
        for (j, r2) in rails.iter().enumerate() {
            if i == j {
                continue;
            }
            ticker.tick("tracker edge construction")?;
            if arrow_unchecked(r1, r2) {
                rail_out[i].push(j);
                edge_count += 1;
            }
        }
    }

    Ok(Tracker {
        rails,
        k,
        graph_n: inst.graph().vertex_count(),
        m,
        c,
        source_out,
        rail_out,
        to_target,
        edge_count,
    })
}

impl Tracker {
    pub fn rail_count(&self) -> usize {
        self.rails.len()
    }

    pub fn rails(&self) -> &[Rail] {
        &self.rails
    }

    pub fn rail(&self, i: usize) -> &Rail {
        &self.rails[i]
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn window(&self) -> usize {
        self.m
    }

    pub fn confusion_bound(&self) -> usize {
        self.c
    }

    /// Vertices of the underlying problem graph; also the label cap `n` of
    /// the weight space `K_n`.
    pub fn graph_vertex_count(&self) -> usize {
        self.graph_n
    }

    pub fn node_count(&self) -> usize {
        self.rails.len() + 2
    }

    pub fn source_node(&self) -> usize {
        0
    }

    pub fn target_node(&self) -> usize {
        self.rails.len() + 1
    }

    pub fn rail_node(&self, rail: usize) -> usize {
        rail + 1
    }

    pub fn rail_index(&self, node: usize) -> Option<usize> {
        (node > 0 && node <= self.rails.len()).then(|| node - 1)
    }

    /// Rail ids adjacent from `s0`, ascending.
    pub fn source_edges(&self) -> &[usize] {
        &self.source_out
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        if from == self.source_node() {
            return self
                .rail_index(to)
                .is_some_and(|r| self.source_out.binary_search(&r).is_ok());
        }
        let Some(r1) = self.rail_index(from) else {
            return false;
        };
        if to == self.target_node() {
            return self.to_target[r1];
        }
        self.rail_index(to)
            .is_some_and(|r2| self.rail_out[r1].binary_search(&r2).is_ok())
    }

    /// Weight of an existing edge: member sizes out of `s0`, per-member new
    /// vertex counts between rails, zeros into `t0`.
    pub fn edge_weight(&self, from: usize, to: usize) -> Option<QualityVector> {
        if !self.has_edge(from, to) {
            return None;
        }
        if from == self.source_node() {
            let rail = &self.rails[self.rail_index(to).unwrap()];
            return Some(rail.linkage().quality());
        }
        if to == self.target_node() {
            return Some(QualityVector::zeros(self.k));
        }
        let r1 = &self.rails[self.rail_index(from).unwrap()];
        let r2 = &self.rails[self.rail_index(to).unwrap()];
        Some(QualityVector::new(
            (0..self.k)
                .map(|i| r2.member(i).mask().minus(r1.member(i).mask()).len() as u32)
                .collect(),
        ))
    }

    /// All edges as `(from, to, weight)`, sorted by `(from, to)`.
    pub fn edges(&self) -> Vec<(usize, usize, QualityVector)> {
        let mut edges = Vec::with_capacity(self.edge_count);
        for &r in &self.source_out {
            let to = self.rail_node(r);
            edges.push((0, to, self.edge_weight(0, to).unwrap()));
        }
        for (i, outs) in self.rail_out.iter().enumerate() {
            let from = self.rail_node(i);
            for &j in outs {
                let to = self.rail_node(j);
                edges.push((from, to, self.edge_weight(from, to).unwrap()));
            }
            if self.to_target[i] {
                let to = self.target_node();
                edges.push((from, to, QualityVector::zeros(self.k)));
            }
        }
        edges
    }

    /// The tracker as a weighted digraph over `K_n`, ready for the vector
    /// shortest-path engine.
    pub fn to_vector_digraph(&self) -> Result<VectorDigraph> {
        VectorDigraph::new(
            self.node_count(),
            self.k,
            self.graph_n as u32,
            self.source_node(),
            self.target_node(),
            self.edges(),
        )
    }

    /// Sum of edge weights along a node path of the tracker.
    pub fn path_weight(&self, nodes: &[usize]) -> Result<QualityVector> {
        let mut total = QualityVector::zeros(self.k);
        for pair in nodes.windows(2) {
            let w = self.edge_weight(pair[0], pair[1]).ok_or_else(|| {
                Error::invalid(format!("missing tracker edge ({}, {})", pair[0], pair[1]))
            })?;
            total = total.add(&w);
        }
        Ok(total)
    }

    /// Up to `limit` source-to-target node paths in depth-first order (all
    /// of them when fewer exist). Deterministic.
    pub fn sample_source_target_paths(&self, limit: usize) -> Vec<Vec<usize>> {
        let mut found = Vec::new();
        if limit == 0 {
            return found;
        }
        let mut on_path = vec![false; self.node_count()];
        let mut path = vec![self.source_node()];
        on_path[self.source_node()] = true;
        self.path_dfs(&mut path, &mut on_path, limit, &mut found);
        found
    }

    fn path_dfs(
        &self,
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        limit: usize,
        found: &mut Vec<Vec<usize>>,
    ) {
        if found.len() >= limit {
            return;
        }
        let last = *path.last().unwrap();
        let successors: Vec<usize> = if last == self.source_node() {
            self.source_out.iter().map(|&r| self.rail_node(r)).collect()
        } else if let Some(r) = self.rail_index(last) {
            let mut s: Vec<usize> = self.rail_out[r].iter().map(|&j| self.rail_node(j)).collect();
            if self.to_target[r] {
                s.push(self.target_node());
            }
            s
        } else {
            Vec::new()
        };
        for next in successors {
            if found.len() >= limit {
                return;
            }
            if on_path[next] {
                continue;
            }
            path.push(next);
            if next == self.target_node() {
                found.push(path.clone());
            } else {
                on_path[next] = true;
                self.path_dfs(path, on_path, limit, found);
                on_path[next] = false;
            }
            path.pop();
        }
    }

    /// Plain-text listing of rails and weighted edges, ordered by id.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "tracker n={} k={} m={} c={}",
            self.graph_n, self.k, self.m, self.c
        );
        let _ = writeln!(s, "rails {}", self.rails.len());
        for (i, rail) in self.rails.iter().enumerate() {
            let mut members = String::new();
            for p in rail.linkage().members() {
                let _ = write!(members, "({p})");
            }
            if rail.cardinality() == 0 {
                members.push_str("()");
            }
            let _ = writeln!(s, "rail {i}: members={members} X={} Y={}", rail.x(), rail.y());
        }
        let _ = writeln!(s, "edges {}", self.edge_count);
        let name = |node: usize| -> String {
            if node == self.source_node() {
                "s0".into()
            } else if node == self.target_node() {
                "t0".into()
            } else {
                format!("r{}", node - 1)
            }
        };
        for (from, to, w) in self.edges() {
            let _ = writeln!(s, "{} -> {} [{w}]", name(from), name(to));
        }
        s
    }
}

/// Recovers the linkage traced by a tracker path: member `j` of the result
/// is the union of the `j`-th rail members along the path. The path must be
/// a real source-to-target path of the tracker with at least one rail; the
/// union is re-validated rather than trusted, and a failure is reported as
/// an invariant violation.
pub fn trace_path(inst: &ProblemInstance, tracker: &Tracker, nodes: &[usize]) -> Result<Linkage> {
    if nodes.len() < 3
        || nodes[0] != tracker.source_node()
        || *nodes.last().unwrap() != tracker.target_node()
    {
        return Err(Error::invalid(
            "expected a tracker path s0, rail.., t0 with at least one rail",
        ));
    }
    let mut seen = vec![false; tracker.rail_count()];
    for &node in &nodes[1..nodes.len() - 1] {
        let Some(r) = tracker.rail_index(node) else {
            return Err(Error::invalid(format!("node {node} is not a rail")));
        };
        if seen[r] {
            return Err(Error::invalid("tracker path repeats a rail"));
        }
        seen[r] = true;
    }
    for pair in nodes.windows(2) {
        if !tracker.has_edge(pair[0], pair[1]) {
            return Err(Error::invalid(format!(
                "({}, {}) is not a tracker edge",
                pair[0], pair[1]
            )));
        }
    }

    let rail_ids: Vec<usize> = nodes[1..nodes.len() - 1]
        .iter()
        .map(|&n| tracker.rail_index(n).unwrap())
        .collect();
    let mut members = Vec::with_capacity(tracker.arity());
    for j in 0..tracker.arity() {
        let parts: Vec<&Path> = rail_ids.iter().map(|&r| tracker.rail(r).member(j)).collect();
        members.push(union_of_subpaths(&parts)?);
    }
    let linkage = Linkage::new(members)
        .map_err(|e| Error::InvariantViolation(format!("traced members overlap: {e}")))?;
    if !validate_linkage_for_instance(inst, linkage.members()) {
        return Err(Error::InvariantViolation(
            "traced linkage is not a linkage for the instance".into(),
        ));
    }
    Ok(linkage)
}

/// Union of path segments as a digraph, required to be a single path:
/// collect vertices and edges, then walk from the unique start.
fn union_of_subpaths(parts: &[&Path]) -> Result<Path> {
    let bad = |msg: &str| Error::InvariantViolation(format!("member union is not a path: {msg}"));

    let mut verts = VertexSet::EMPTY;
    let mut next: std::collections::BTreeMap<Vertex, Vertex> = std::collections::BTreeMap::new();
    let mut indeg: std::collections::BTreeMap<Vertex, usize> = std::collections::BTreeMap::new();
    let mut edge_count = 0usize;
    for part in parts {
        for &v in part.vertices() {
            verts.insert(v);
        }
        for w in part.vertices().windows(2) {
            match next.get(&w[0]) {
                Some(&existing) if existing == w[1] => {}
                Some(_) => return Err(bad("branching out-edges")),
                None => {
                    next.insert(w[0], w[1]);
                    let d = indeg.entry(w[1]).or_default();
                    *d += 1;
                    if *d > 1 {
                        return Err(bad("branching in-edges"));
                    }
                    edge_count += 1;
                }
            }
        }
    }
    if verts.is_empty() {
        return Err(bad("empty union"));
    }
    if edge_count + 1 != verts.len() {
        return Err(bad("edge count does not match vertex count"));
    }
    let mut starts = verts.iter().filter(|v| !indeg.contains_key(v));
    let start = starts.next().ok_or_else(|| bad("no start vertex"))?;
    if starts.next().is_some() {
        return Err(bad("multiple start vertices"));
    }
    let mut order = vec![start];
    let mut cur = start;
    while let Some(&nxt) = next.get(&cur) {
        order.push(nxt);
        cur = nxt;
    }
    if order.len() != verts.len() {
        return Err(bad("walk does not cover the union"));
    }
    Ok(Path::from_validated(order))
}
