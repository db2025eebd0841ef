//! Empirical validation of the acceptability structure theory on concrete
//! linkages: prefix-closed vertex sets admitting no threshold-size planar
//! matching across the cut, greedy acceptable enumerations, and the
//! outward/inward count bound along such enumerations. None of this feeds
//! the solver; it exists to check the theory on oracle-produced linkages.

use std::fmt::Write as _;

use crate::digraph::{Path, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::oracle::{max_planar_matching_capped, OracleBudget};
use crate::rails::{validate_linkage_for_instance, Linkage, ProblemInstance};
use crate::solver::acceptability_threshold;

/// A planar matching witnessing that a vertex set is not acceptable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingViolation {
    /// Member index whose in-set part `Q_i` hosts the sources.
    pub i: usize,
    /// Member index whose out-set part `R_j` hosts the targets.
    pub j: usize,
    /// The threshold-size matching found, as vertex sequences.
    pub matching: Vec<Vec<Vertex>>,
}

/// Outcome of [`is_acceptable`].
#[derive(Clone, Debug)]
pub struct AcceptabilityReport {
    pub set: VertexSet,
    /// Whether every member-path edge into the set starts inside it.
    pub prefix_closed: bool,
    /// A threshold-size planar matching across the cut, if one exists.
    pub violating_pair: Option<MatchingViolation>,
    /// `(k-1)d + k^2 + 2` for this instance.
    pub threshold: usize,
}

impl AcceptabilityReport {
    pub fn acceptable(&self) -> bool {
        self.prefix_closed && self.violating_pair.is_none()
    }
}

/// Splits member `i` at the set: the part inside `b` (a prefix when `b` is
/// prefix-closed) and the part outside.
fn split_member(member: &Path, b: VertexSet) -> (Option<Path>, Option<Path>) {
    let inside: Vec<Vertex> = member
        .vertices()
        .iter()
        .copied()
        .filter(|&v| b.contains(v))
        .collect();
    let outside: Vec<Vertex> = member
        .vertices()
        .iter()
        .copied()
        .filter(|&v| !b.contains(v))
        .collect();
    (
        (!inside.is_empty()).then(|| Path::from_validated(inside)),
        (!outside.is_empty()).then(|| Path::from_validated(outside)),
    )
}

/// Checks whether `b` is acceptable for the linkage: prefix-closed along
/// every member, with no planar `(Q_i, R_j)`-matching of threshold
/// cardinality internally disjoint from the linkage, for any member pair.
pub fn is_acceptable(
    inst: &ProblemInstance,
    linkage: &Linkage,
    b: VertexSet,
    budget: &OracleBudget,
) -> Result<AcceptabilityReport> {
    if !b.is_subset(linkage.vertex_set()) {
        return Err(Error::invalid(
            "acceptability is defined for subsets of the linkage's vertices",
        ));
    }
    let threshold = acceptability_threshold(inst.k(), inst.d());
    let mut report = AcceptabilityReport {
        set: b,
        prefix_closed: true,
        violating_pair: None,
        threshold,
    };

    for member in linkage.members() {
        for edge in member.vertices().windows(2) {
            if b.contains(edge[1]) && !b.contains(edge[0]) {
                report.prefix_closed = false;
                return Ok(report);
            }
        }
    }

    let splits: Vec<(Option<Path>, Option<Path>)> = linkage
        .members()
        .iter()
        .map(|p| split_member(p, b))
        .collect();
    for (i, (q, _)) in splits.iter().enumerate() {
        let Some(q) = q else { continue };
        for (j, (_, r)) in splits.iter().enumerate() {
            let Some(r) = r else { continue };
            let (found, witness) =
                max_planar_matching_capped(inst.graph(), q, r, linkage, Some(threshold), budget)?;
            if found >= threshold {
                report.violating_pair = Some(MatchingViolation {
                    i,
                    j,
                    matching: witness,
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Result of the greedy acceptable growth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnumerationOutcome {
    /// Every vertex added; the full order is an acceptable enumeration.
    Complete(Vec<Vertex>),
    /// No single vertex could extend the named acceptable set.
    Stuck { set: VertexSet, placed: Vec<Vertex> },
}

impl EnumerationOutcome {
    pub fn is_complete(&self) -> bool {
        matches!(self, EnumerationOutcome::Complete(_))
    }
}

/// Grows an acceptable set from empty, one vertex per step, always taking
/// the least-id vertex whose addition stays acceptable. For linkages
/// realizing a key quality of a d-path-dominant graph a full enumeration
/// always exists; failure on other linkages is data, not an error.
pub fn acceptable_enumeration(
    inst: &ProblemInstance,
    linkage: &Linkage,
    budget: &OracleBudget,
) -> Result<EnumerationOutcome> {
    if !validate_linkage_for_instance(inst, linkage.members()) {
        return Err(Error::invalid(
            "acceptable enumeration expects a linkage for the instance",
        ));
    }
    let all = linkage.vertex_set();
    let mut b = VertexSet::EMPTY;
    let mut order = Vec::with_capacity(all.len());
    while b != all {
        let mut extended = false;
        for v in all.minus(b).iter() {
            let mut candidate = b;
            candidate.insert(v);
            if is_acceptable(inst, linkage, candidate, budget)?.acceptable() {
                b = candidate;
                order.push(v);
                extended = true;
                break;
            }
        }
        if !extended {
            return Ok(EnumerationOutcome::Stuck { set: b, placed: order });
        }
    }
    Ok(EnumerationOutcome::Complete(order))
}

/// Verifies the outward/inward count bound along an acceptable
/// enumeration: for every split point, every pair of window subpaths (one
/// in the placed prefix, one in the remainder) of `c*d` vertices admits at
/// most `c(2k+1)` vertices that are simultaneously window-outward and
/// window-inward, where `c` is the acceptability threshold.
pub fn check_enumeration_bound(
    inst: &ProblemInstance,
    linkage: &Linkage,
    order: &[Vertex],
) -> Result<bool> {
    let all = linkage.vertex_set();
    let as_set: VertexSet = order.iter().copied().collect();
    if as_set != all || order.len() != all.len() {
        return Err(Error::invalid(
            "order must enumerate the linkage's vertices exactly once",
        ));
    }
    let position: std::collections::HashMap<Vertex, usize> =
        order.iter().copied().enumerate().map(|(i, v)| (v, i)).collect();
    for member in linkage.members() {
        for edge in member.vertices().windows(2) {
            if position[&edge[0]] > position[&edge[1]] {
                return Err(Error::invalid(
                    "order must respect the member paths' edge directions",
                ));
            }
        }
    }

    let g = inst.graph();
    let c = acceptability_threshold(inst.k(), inst.d());
    let window = c * inst.d();
    let bound = c * (2 * inst.k() + 1);

    for p in 0..=order.len() {
        let placed: VertexSet = order[..p].iter().copied().collect();
        let splits: Vec<(Option<Path>, Option<Path>)> = linkage
            .members()
            .iter()
            .map(|member| split_member(member, placed))
            .collect();
        for (q_part, _) in &splits {
            let Some(q_part) = q_part else { continue };
            if q_part.vertex_count() < window {
                continue;
            }
            for (_, r_part) in &splits {
                let Some(r_part) = r_part else { continue };
                if r_part.vertex_count() < window {
                    continue;
                }
                for qs in 0..=(q_part.vertex_count() - window) {
                    let q = q_part.window(qs, window);
                    for rs in 0..=(r_part.vertex_count() - window) {
                        let r = r_part.window(rs, window);
                        let count = (0..g.vertex_count())
                            .filter(|&v| !q.mask().contains(v) && !r.mask().contains(v))
                            .filter(|&v| {
                                g.out_neighbors(v).intersection(q.mask()).is_empty()
                                    && g.in_neighbors(v).intersection(r.mask()).is_empty()
                            })
                            .count();
                        if count > bound {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Plain-text report for one linkage: enumeration outcome plus bound check.
pub fn linkage_report(
    inst: &ProblemInstance,
    linkage: &Linkage,
    budget: &OracleBudget,
) -> Result<String> {
    let mut s = String::new();
    let _ = writeln!(s, "linkage quality [{}]", linkage.quality());
    for (i, member) in linkage.members().iter().enumerate() {
        let _ = writeln!(s, "path {i}: {member}");
    }
    match acceptable_enumeration(inst, linkage, budget)? {
        EnumerationOutcome::Complete(order) => {
            let text = order
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(s, "enumeration: {text}");
            let ok = check_enumeration_bound(inst, linkage, &order)?;
            let c = acceptability_threshold(inst.k(), inst.d());
            let _ = writeln!(
                s,
                "bound check: {} (threshold {c}, limit {})",
                if ok { "ok" } else { "violated" },
                c * (2 * inst.k() + 1)
            );
        }
        EnumerationOutcome::Stuck { set, .. } => {
            let _ = writeln!(s, "enumeration: stuck at {set}");
        }
    }
    Ok(s)
}
