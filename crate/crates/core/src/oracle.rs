//! Exponential-time ground truth. Everything here recomputes results
//! straight from definitions — exhaustive linkage enumeration, raw-adjacency
//! candidate sets, definition-level rail filtering, full path enumeration,
//! exact planar-matching search — deliberately independent of the
//! production code paths it validates. All entry points are budget-guarded
//! and abort with an explicit error rather than truncating silently.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::digraph::{Digraph, Path, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::pareto::{ParetoSet, QualityVector, VectorDigraph};
use crate::rails::{Linkage, ProblemInstance, Rail};
use crate::tick::Ticker;

/// Caps for oracle searches.
#[derive(Clone, Debug)]
pub struct OracleBudget {
    /// Maximum vertex (or node) count of the searched structure.
    pub max_vertices: usize,
    /// Maximum total vertices a single enumerated linkage may hold.
    pub max_linkage_size: usize,
    /// Optional wall-clock limit.
    pub time_limit: Option<std::time::Duration>,
}

impl Default for OracleBudget {
    fn default() -> OracleBudget {
        OracleBudget {
            max_vertices: 10,
            max_linkage_size: 24,
            time_limit: None,
        }
    }
}

impl OracleBudget {
    fn deadline(&self) -> Option<Instant> {
        self.time_limit.map(|t| Instant::now() + t)
    }

    fn check_vertices(&self, n: usize, what: &str) -> Result<()> {
        if n > self.max_vertices {
            return Err(Error::BudgetExceeded(format!(
                "{what}: {n} vertices exceed the budget of {}",
                self.max_vertices
            )));
        }
        Ok(())
    }
}

/// Oracle result: the key-quality antichain plus, per key quality, the
/// first enumerated linkage realizing it.
#[derive(Debug)]
pub struct OracleSolve {
    pub qualities: ParetoSet,
    pub evidence: BTreeMap<QualityVector, Linkage>,
}

/// Key qualities by exhaustive enumeration of all linkages for the
/// instance.
pub fn oracle_key_qualities(inst: &ProblemInstance, budget: &OracleBudget) -> Result<ParetoSet> {
    oracle_key_qualities_with_evidence(inst, budget).map(|s| s.qualities)
}

/// Like [`oracle_key_qualities`], retaining one evidence linkage per key
/// quality (the first found in depth-first order; deterministic).
pub fn oracle_key_qualities_with_evidence(
    inst: &ProblemInstance,
    budget: &OracleBudget,
) -> Result<OracleSolve> {
    let found = enumerate_all_linkages(inst, budget)?;
    let qualities = ParetoSet::minimal_set(found.keys().cloned())?;
    let evidence = found
        .into_iter()
        .filter(|(q, _)| qualities.contains(q))
        .collect();
    Ok(OracleSolve { qualities, evidence })
}

/// Every quality of the instance (not only the key ones): the size vector
/// of each linkage found by exhaustive enumeration.
pub fn oracle_all_qualities(
    inst: &ProblemInstance,
    budget: &OracleBudget,
) -> Result<Vec<QualityVector>> {
    Ok(enumerate_all_linkages(inst, budget)?.into_keys().collect())
}

fn enumerate_all_linkages(
    inst: &ProblemInstance,
    budget: &OracleBudget,
) -> Result<BTreeMap<QualityVector, Linkage>> {
    budget.check_vertices(inst.graph().vertex_count(), "linkage enumeration")?;
    let mut search = LinkageSearch {
        inst,
        max_total: budget.max_linkage_size,
        ticker: Ticker::new(budget.deadline()),
        members: Vec::with_capacity(inst.k()),
        cur: Vec::new(),
        found: BTreeMap::new(),
    };
    search.place_member(VertexSet::EMPTY)?;
    Ok(search.found)
}

struct LinkageSearch<'a> {
    inst: &'a ProblemInstance,
    max_total: usize,
    ticker: Ticker,
    members: Vec<Vec<Vertex>>,
    cur: Vec<Vertex>,
    found: BTreeMap<QualityVector, Linkage>,
}

impl LinkageSearch<'_> {
    fn place_member(&mut self, used: VertexSet) -> Result<()> {
        let i = self.members.len();
        if i == self.inst.k() {
            let quality = QualityVector::new(
                self.members.iter().map(|m| m.len() as u32).collect(),
            );
            self.found.entry(quality).or_insert_with(|| {
                Linkage::from_validated(
                    self.members
                        .iter()
                        .map(|m| Path::from_validated(m.clone()))
                        .collect(),
                )
            });
            return Ok(());
        }
        let s = self.inst.source(i);
        if used.contains(s) {
            return Ok(());
        }
        self.cur.push(s);
        self.extend(used.union(VertexSet::singleton(s)))?;
        self.cur.pop();
        Ok(())
    }

    fn extend(&mut self, used: VertexSet) -> Result<()> {
        self.ticker.tick("linkage enumeration")?;
        if used.len() > self.max_total {
            return Err(Error::BudgetExceeded(format!(
                "linkage enumeration: more than {} vertices in one linkage",
                self.max_total
            )));
        }
        let i = self.members.len();
        let last = *self.cur.last().unwrap();
        if last == self.inst.target(i) {
            // A path to the target ends there; extensions could never
            // return.
            let seq = std::mem::take(&mut self.cur);
            self.members.push(seq);
            self.place_member(used)?;
            self.cur = self.members.pop().unwrap();
            return Ok(());
        }
        for w in self.inst.graph().out_neighbors(last).minus(used).iter() {
            self.cur.push(w);
            self.extend(used.union(VertexSet::singleton(w)))?;
            self.cur.pop();
        }
        Ok(())
    }
}

/// Minimal weight sums over all simple source-to-target paths, enumerated
/// outright. Sums escaping `K_cap` are discarded, mirroring the label
/// algorithm's weight space.
pub fn oracle_pareto_paths(g: &VectorDigraph, budget: &OracleBudget) -> Result<ParetoSet> {
    budget.check_vertices(g.node_count(), "path enumeration")?;
    let mut ticker = Ticker::new(budget.deadline());
    let mut on_path = vec![false; g.node_count()];
    on_path[g.source()] = true;
    let mut sums = Vec::new();
    path_sum_dfs(
        g,
        g.source(),
        &QualityVector::zeros(g.arity()),
        &mut on_path,
        &mut sums,
        &mut ticker,
    )?;
    ParetoSet::minimal_set(sums)
}

fn path_sum_dfs(
    g: &VectorDigraph,
    node: usize,
    sum: &QualityVector,
    on_path: &mut Vec<bool>,
    sums: &mut Vec<QualityVector>,
    ticker: &mut Ticker,
) -> Result<()> {
    ticker.tick("path enumeration")?;
    if node == g.target() {
        sums.push(sum.clone());
        return Ok(());
    }
    for (_, to, w) in g.out_edges(node) {
        if on_path[*to] {
            continue;
        }
        let next = sum.add(w);
        // Weights are nonnegative, so an over-cap prefix can never recover.
        if next.sum() > g.cap() {
            continue;
        }
        on_path[*to] = true;
        path_sum_dfs(g, *to, &next, on_path, sums, ticker)?;
        on_path[*to] = false;
    }
    Ok(())
}

/// Definition-level candidate set `A(L)` from raw adjacency loops.
pub fn definition_a_set(inst: &ProblemInstance, linkage: &Linkage) -> Vec<Vertex> {
    let g = inst.graph();
    let on: Vec<Vertex> = linkage
        .members()
        .iter()
        .flat_map(|p| p.vertices().iter().copied())
        .collect();
    (0..g.vertex_count())
        .filter(|v| !on.contains(v))
        .filter(|&v| {
            linkage.members().iter().enumerate().any(|(j, mj)| {
                let verts = mj.vertices();
                *verts.last().unwrap() != inst.target(j)
                    && verts[..verts.len() - 1].iter().all(|&u| !g.has_edge(u, v))
            })
        })
        .collect()
}

/// Definition-level candidate set `B(L)` from raw adjacency loops.
pub fn definition_b_set(inst: &ProblemInstance, linkage: &Linkage) -> Vec<Vertex> {
    let g = inst.graph();
    let on: Vec<Vertex> = linkage
        .members()
        .iter()
        .flat_map(|p| p.vertices().iter().copied())
        .collect();
    (0..g.vertex_count())
        .filter(|v| !on.contains(v))
        .filter(|&v| {
            linkage.members().iter().enumerate().any(|(j, mj)| {
                let verts = mj.vertices();
                verts[0] != inst.source(j) && verts[1..].iter().all(|&u| !g.has_edge(v, u))
            })
        })
        .collect()
}

/// All `(k, m, c)`-rails by the book: every split of the vertex pool into k
/// ordered distinct-vertex blocks of at most `2m` vertices, filtered by the
/// path, anchoring and confusion conditions, with every `(X, Y)` assignment
/// tried and filtered rather than constructed.
pub fn oracle_rails(
    inst: &ProblemInstance,
    m: usize,
    c: usize,
    budget: &OracleBudget,
) -> Result<Vec<Rail>> {
    if m < 1 {
        return Err(Error::invalid("window parameter m must be at least 1"));
    }
    budget.check_vertices(inst.graph().vertex_count(), "rail enumeration")?;
    if 2 * m * inst.k() > budget.max_linkage_size {
        return Err(Error::BudgetExceeded(format!(
            "rail enumeration: windows of {} vertices exceed the budget of {}",
            2 * m * inst.k(),
            budget.max_linkage_size
        )));
    }
    let mut rails = Vec::new();
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    let mut ticker = Ticker::new(budget.deadline());
    rail_blocks(inst, m, c, &mut blocks, &mut rails, &mut ticker)?;
    Ok(rails)
}

fn rail_blocks(
    inst: &ProblemInstance,
    m: usize,
    c: usize,
    blocks: &mut Vec<Vec<Vertex>>,
    rails: &mut Vec<Rail>,
    ticker: &mut Ticker,
) -> Result<()> {
    let g = inst.graph();
    let k = inst.k();
    if blocks.len() == k {
        return rail_splits(inst, c, blocks, rails, ticker);
    }
    let j = blocks.len();
    let used: VertexSet = blocks.iter().flatten().copied().collect();
    let mut seq = Vec::new();
    all_sequences(g, 2 * m, used, &mut seq, &mut |seq| {
        ticker.tick("rail oracle blocks")?;
        // Block must be a directed path.
        if !seq.windows(2).all(|w| g.has_edge(w[0], w[1])) {
            return Ok(());
        }
        // Short blocks must touch a terminal of their index.
        if seq.len() < 2 * m
            && seq[0] != inst.source(j)
            && *seq.last().unwrap() != inst.target(j)
        {
            return Ok(());
        }
        blocks.push(seq.to_vec());
        rail_blocks(inst, m, c, blocks, rails, ticker)?;
        blocks.pop();
        Ok(())
    })
}

/// Confusion filter plus exhaustive `(X, Y)` assignment for one complete
/// block tuple.
fn rail_splits(
    inst: &ProblemInstance,
    c: usize,
    blocks: &[Vec<Vertex>],
    rails: &mut Vec<Rail>,
    ticker: &mut Ticker,
) -> Result<()> {
    let g = inst.graph();
    let linkage = Linkage::from_validated(
        blocks
            .iter()
            .map(|b| Path::from_validated(b.clone()))
            .collect(),
    );
    let a = definition_a_set(inst, &linkage);
    let b = definition_b_set(inst, &linkage);
    let both: Vec<Vertex> = a.iter().copied().filter(|v| b.contains(v)).collect();
    if both.len() > c {
        return Ok(());
    }
    let a_set: VertexSet = a.iter().copied().collect();
    let b_set: VertexSet = b.iter().copied().collect();
    // Try every {X, Y, neither} assignment of the outside vertices and keep
    // the ones meeting the split conditions verbatim.
    let on = linkage.vertex_set();
    let outside: Vec<Vertex> = (0..g.vertex_count()).filter(|&v| !on.contains(v)).collect();
    let mut assignment = vec![0u8; outside.len()];
    loop {
        ticker.tick("rail oracle split")?;
        let x: VertexSet = outside
            .iter()
            .zip(&assignment)
            .filter(|(_, &a)| a == 1)
            .map(|(&v, _)| v)
            .collect();
        let y: VertexSet = outside
            .iter()
            .zip(&assignment)
            .filter(|(_, &a)| a == 2)
            .map(|(&v, _)| v)
            .collect();
        if x.is_subset(a_set) && y.is_subset(b_set) && x.union(y) == a_set.union(b_set) {
            rails.push(Rail::new(linkage.clone(), x, y));
        }
        // Advance to the next ternary assignment.
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                return Ok(());
            }
            assignment[pos] += 1;
            if assignment[pos] == 3 {
                assignment[pos] = 0;
                pos += 1;
            } else {
                break;
            }
        }
    }
}

/// Every sequence of distinct unused vertices with length `1..=max_len`,
/// in lexicographic order.
fn all_sequences(
    g: &Digraph,
    max_len: usize,
    used: VertexSet,
    seq: &mut Vec<Vertex>,
    visit: &mut impl FnMut(&[Vertex]) -> Result<()>,
) -> Result<()> {
    for v in 0..g.vertex_count() {
        if used.contains(v) || seq.contains(&v) {
            continue;
        }
        seq.push(v);
        visit(seq)?;
        if seq.len() < max_len {
            all_sequences(g, max_len, used, seq, visit)?;
        }
        seq.pop();
    }
    Ok(())
}

/// Maximum cardinality of a planar `(Q, R)`-matching internally disjoint
/// from `L`: members are 2- or 3-vertex paths, pairwise vertex-disjoint,
/// with sources in order on `Q`, targets in order on `R`, and middle
/// vertices outside `V(L)`. Exhaustive search.
pub fn oracle_max_planar_matching(
    g: &Digraph,
    q: &Path,
    r: &Path,
    l: &Linkage,
    budget: &OracleBudget,
) -> Result<usize> {
    max_planar_matching_capped(g, q, r, l, None, budget).map(|(n, _)| n)
}

/// Capped variant returning a witness matching; the search stops as soon as
/// `cap` members are reached.
pub(crate) fn max_planar_matching_capped(
    g: &Digraph,
    q: &Path,
    r: &Path,
    l: &Linkage,
    cap: Option<usize>,
    budget: &OracleBudget,
) -> Result<(usize, Vec<Vec<Vertex>>)> {
    if !q.mask().intersection(r.mask()).is_empty() {
        return Err(Error::invalid("Q and R must be vertex-disjoint"));
    }
    budget.check_vertices(g.vertex_count(), "planar matching search")?;
    let mut search = MatchingSearch {
        g,
        q,
        r,
        avoid: l.vertex_set(),
        cap,
        ticker: Ticker::new(budget.deadline()),
        members: Vec::new(),
        best: 0,
        witness: Vec::new(),
    };
    search.dfs(0, 0, VertexSet::EMPTY)?;
    Ok((search.best, search.witness))
}

struct MatchingSearch<'a> {
    g: &'a Digraph,
    q: &'a Path,
    r: &'a Path,
    avoid: VertexSet,
    cap: Option<usize>,
    ticker: Ticker,
    members: Vec<Vec<Vertex>>,
    best: usize,
    witness: Vec<Vec<Vertex>>,
}

impl MatchingSearch<'_> {
    fn done(&self) -> bool {
        self.cap.is_some_and(|c| self.best >= c)
    }

    fn record(&mut self) {
        if self.members.len() > self.best {
            self.best = self.members.len();
            self.witness = self.members.clone();
        }
    }

    fn dfs(&mut self, qi: usize, ri: usize, used: VertexSet) -> Result<()> {
        self.ticker.tick("planar matching search")?;
        self.record();
        if self.done() {
            return Ok(());
        }
        // Prune: not enough source/target positions left to improve.
        let possible = self.members.len()
            + (self.q.vertex_count() - qi).min(self.r.vertex_count() - ri);
        if possible <= self.best {
            return Ok(());
        }
        for a in qi..self.q.vertex_count() {
            for b in ri..self.r.vertex_count() {
                let u = self.q.vertices()[a];
                let v = self.r.vertices()[b];
                if used.contains(u) || used.contains(v) {
                    continue;
                }
                if self.g.has_edge(u, v) {
                    self.members.push(vec![u, v]);
                    let used2 = used.union(VertexSet::singleton(u)).union(VertexSet::singleton(v));
                    self.dfs(a + 1, b + 1, used2)?;
                    self.members.pop();
                    if self.done() {
                        return Ok(());
                    }
                }
                for w in 0..self.g.vertex_count() {
                    if w == u
                        || w == v
                        || used.contains(w)
                        || self.avoid.contains(w)
                        || !self.g.has_edge(u, w)
                        || !self.g.has_edge(w, v)
                    {
                        continue;
                    }
                    self.members.push(vec![u, w, v]);
                    let used2 = used
                        .union(VertexSet::singleton(u))
                        .union(VertexSet::singleton(w))
                        .union(VertexSet::singleton(v));
                    self.dfs(a + 1, b + 1, used2)?;
                    self.members.pop();
                    if self.done() {
                        return Ok(());
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rails::{enumerate_rails, validate_linkage_for_instance};

    fn qv(parts: &[u32]) -> QualityVector {
        QualityVector::new(parts.to_vec())
    }

    fn budget() -> OracleBudget {
        OracleBudget::default()
    }

    #[test]
    fn single_edge_key_set() {
        let g = Digraph::with_edges(2, &[(0, 1)]).unwrap();
        let inst = ProblemInstance::new(g, vec![(0, 1)], 1).unwrap();
        let out = oracle_key_qualities(&inst, &budget()).unwrap();
        assert_eq!(out.vectors(), &[qv(&[2])]);
    }

    #[test]
    fn unreachable_target_yields_empty_set() {
        // 0 -> 2 -> 1 is the only route from 0 to 1, but 2 is the second
        // pair's source, so no disjoint pair of paths exists.
        let g = Digraph::with_edges(4, &[(0, 2), (2, 1), (2, 3)]).unwrap();
        let inst = ProblemInstance::new(g, vec![(0, 1), (2, 3)], 1).unwrap();
        let out = oracle_key_qualities(&inst, &budget()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn budget_violations_are_loud() {
        let g = Digraph::new(12).unwrap();
        let inst = ProblemInstance::new(g, vec![(0, 1)], 1).unwrap();
        assert!(matches!(
            oracle_key_qualities(&inst, &budget()),
            Err(Error::BudgetExceeded(_))
        ));

        let g = Digraph::with_edges(2, &[(0, 1)]).unwrap();
        let inst = ProblemInstance::new(g, vec![(0, 1)], 1).unwrap();
        let tiny = OracleBudget {
            max_linkage_size: 1,
            ..budget()
        };
        assert!(matches!(
            oracle_key_qualities(&inst, &tiny),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn evidence_realizes_each_key_quality_with_minimal_paths() {
        let mut g = Digraph::new(5).unwrap();
        for u in 0..5 {
            for v in (u + 1)..5 {
                if (u * v + u + v) % 2 == 0 {
                    g.add_edge(u, v).unwrap();
                } else {
                    g.add_edge(v, u).unwrap();
                }
            }
        }
        let inst = ProblemInstance::new(g.clone(), vec![(0, 3), (1, 4)], 1).unwrap();
        let solve = oracle_key_qualities_with_evidence(&inst, &budget()).unwrap();
        assert!(solve.qualities.is_antichain());
        assert_eq!(solve.evidence.len(), solve.qualities.len());
        for (quality, linkage) in &solve.evidence {
            assert!(validate_linkage_for_instance(&inst, linkage.members()));
            assert_eq!(&linkage.quality(), quality);
            // Members of a key-quality linkage are minimal paths.
            for member in linkage.members() {
                assert!(g.is_minimal_path(member).unwrap());
            }
        }
    }

    #[test]
    fn pareto_paths_trivial_cases() {
        let g = VectorDigraph::new(2, 2, 5, 0, 1, vec![(0, 1, qv(&[0, 0]))]).unwrap();
        let out = oracle_pareto_paths(&g, &budget()).unwrap();
        assert_eq!(out.vectors(), &[qv(&[0, 0])]);

        let g = VectorDigraph::new(3, 2, 5, 0, 2, vec![(0, 1, qv(&[1, 0]))]).unwrap();
        assert!(oracle_pareto_paths(&g, &budget()).unwrap().is_empty());
    }

    #[test]
    fn planar_matching_order_sensitivity() {
        // Q = 0 -> 1, R = 2 -> 3.
        let base = vec![(0, 1), (2, 3)];

        // Parallel connections respect the orders: cardinality 2.
        let mut edges = base.clone();
        edges.extend([(0, 2), (1, 3)]);
        let g = Digraph::with_edges(4, &edges).unwrap();
        let q = Path::new(&g, vec![0, 1]).unwrap();
        let r = Path::new(&g, vec![2, 3]).unwrap();
        let l = Linkage::new(vec![q.clone(), r.clone()]).unwrap();
        assert_eq!(oracle_max_planar_matching(&g, &q, &r, &l, &budget()).unwrap(), 2);

        // Crossing connections cannot both be used: cardinality 1.
        let mut edges = base.clone();
        edges.extend([(0, 3), (1, 2)]);
        let g = Digraph::with_edges(4, &edges).unwrap();
        let q = Path::new(&g, vec![0, 1]).unwrap();
        let r = Path::new(&g, vec![2, 3]).unwrap();
        let l = Linkage::new(vec![q.clone(), r.clone()]).unwrap();
        assert_eq!(oracle_max_planar_matching(&g, &q, &r, &l, &budget()).unwrap(), 1);

        // No connections at all: cardinality 0.
        let g = Digraph::with_edges(4, &base).unwrap();
        let q = Path::new(&g, vec![0, 1]).unwrap();
        let r = Path::new(&g, vec![2, 3]).unwrap();
        let l = Linkage::new(vec![q.clone(), r.clone()]).unwrap();
        assert_eq!(oracle_max_planar_matching(&g, &q, &r, &l, &budget()).unwrap(), 0);
    }

    #[test]
    fn three_vertex_members_avoid_linkage_and_collisions() {
        // Q = 0 -> 1, R = 2 -> 3; connections only via middles 4 and 5.
        let edges = vec![
            (0, 1),
            (2, 3),
            (0, 4),
            (4, 2),
            (1, 5),
            (5, 3),
            (1, 4), // alternative use of middle 4
            (4, 3),
        ];
        let g = Digraph::with_edges(6, &edges).unwrap();
        let q = Path::new(&g, vec![0, 1]).unwrap();
        let r = Path::new(&g, vec![2, 3]).unwrap();
        let l = Linkage::new(vec![q.clone(), r.clone()]).unwrap();
        assert_eq!(oracle_max_planar_matching(&g, &q, &r, &l, &budget()).unwrap(), 2);

        // Forbid middle 5: both members would need middle 4, which
        // collides, so only one fits.
        let l_with_5 = Linkage::new(vec![
            q.clone(),
            r.clone(),
            Path::new(&g, vec![5]).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            oracle_max_planar_matching(&g, &q, &r, &l_with_5, &budget()).unwrap(),
            1
        );
    }

    #[test]
    fn oracle_rails_match_production_enumeration() {
        let g = Digraph::with_edges(2, &[(0, 1)]).unwrap();
        let inst = ProblemInstance::new(g, vec![(0, 1)], 1).unwrap();
        let mut expected = oracle_rails(&inst, 1, 0, &budget()).unwrap();
        let mut got = enumerate_rails(&inst, 1, 0).unwrap();
        expected.sort();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn determinism() {
        let g = Digraph::with_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let inst = ProblemInstance::new(g, vec![(1, 0)], 1).unwrap();
        let a = oracle_key_qualities_with_evidence(&inst, &budget()).unwrap();
        let b = oracle_key_qualities_with_evidence(&inst, &budget()).unwrap();
        assert_eq!(a.qualities, b.qualities);
        assert_eq!(a.evidence, b.evidence);
    }
}
