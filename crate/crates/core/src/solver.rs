//! Top-level solving: key-quality computation, plain and bounded-length
//! linkage decisions, and witness extraction. The pipeline is rails ->
//! tracker -> vector shortest paths; every output vector is always backed
//! by a reconstructed, re-validated witness linkage, whatever parameters
//! are in force.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::pareto::{self, ParetoSet, QualityVector};
use crate::rails::{Linkage, ProblemInstance};
use crate::tracker::{build_tracker_bounded, trace_path, Tracker};

/// Threshold `(k-1)d + k^2 + 2` governing the acceptability machinery and,
/// through it, the default rail parameters. Degenerate `k = 0` gets a
/// harmless constant; nothing quantified by it exists then.
pub fn acceptability_threshold(k: usize, d: usize) -> usize {
    if k == 0 {
        2
    } else {
        (k - 1) * d + k * k + 2
    }
}

/// Default window parameter `m`: member paths of rails hold at most `2m`
/// vertices. For `k = 0` any positive value works; the empty rail exists
/// regardless.
pub fn default_member_window(k: usize, d: usize) -> usize {
    if k == 0 {
        1
    } else {
        acceptability_threshold(k, d) * d + 1
    }
}

/// Default confusion bound `c` for rail enumeration.
pub fn default_confusion_bound(k: usize, d: usize) -> usize {
    if k == 0 {
        0
    } else {
        acceptability_threshold(k, d) * (2 * k + 1) * k * k
    }
}

/// Exponent `t = 6k^2 d(k+d) + 13k` of the asymptotic running-time bound
/// `O(n^t)`; reported for logging, never used as a performance target.
pub fn runtime_exponent(k: usize, d: usize) -> u64 {
    let (k, d) = (k as u64, d as u64);
    6 * k * k * d * (k + d) + 13 * k
}

/// Solve configuration. `m` and `c` default to the formulas above; passing
/// values that differ from the defaults trades completeness for speed and
/// flags the result as heuristic.
#[derive(Clone, Debug, Default)]
pub struct SolverParams {
    /// Window override; member paths of rails get at most `2m` vertices.
    pub m: Option<usize>,
    /// Confusion bound override.
    pub c: Option<usize>,
    /// Also return the witness map (witnesses are validated regardless).
    pub emit_witness: bool,
    /// Skip the d-path-dominance precondition check. Soundness of the
    /// output survives; completeness needs the hypothesis.
    pub waive_dominance_check: bool,
    /// Per-solve wall-clock cap; exceeding it aborts with a budget error.
    pub time_limit: Option<Duration>,
}

impl SolverParams {
    pub fn with_witness() -> SolverParams {
        SolverParams {
            emit_witness: true,
            ..SolverParams::default()
        }
    }

    /// Effective `(m, c)` for an instance with `k` pairs and parameter `d`.
    pub fn effective(&self, k: usize, d: usize) -> (usize, usize) {
        (
            self.m.unwrap_or_else(|| default_member_window(k, d)),
            self.c.unwrap_or_else(|| default_confusion_bound(k, d)),
        )
    }
}

/// Size and parameter report of one solve.
#[derive(Clone, Debug)]
pub struct SolveStats {
    pub m: usize,
    pub c: usize,
    pub rail_count: usize,
    pub tracker_nodes: usize,
    pub tracker_edges: usize,
    pub pareto_rounds: usize,
    pub runtime_exponent: u64,
}

/// Result of a key-quality computation.
#[derive(Debug)]
pub struct SolveOutput {
    /// The antichain of key qualities (exact at default parameters; a
    /// sound subset-of-qualities antichain under overrides).
    pub key_qualities: ParetoSet,
    /// One witness linkage per output vector, when requested.
    pub witnesses: Option<BTreeMap<QualityVector, Linkage>>,
    /// True when `(m, c)` differ from the defaults: every output vector is
    /// still a realized quality, but completeness is not guaranteed.
    pub heuristic: bool,
    pub stats: SolveStats,
}

/// Computes the key qualities of the instance: the Pareto-minimal size
/// vectors over all linkages for it. With default parameters on a
/// d-path-dominant graph the result is exactly the key-quality set.
pub fn key_qualities(inst: &ProblemInstance, params: &SolverParams) -> Result<SolveOutput> {
    key_qualities_with_tracker(inst, params).map(|(out, _)| out)
}

/// Like [`key_qualities`], also handing back the tracker for inspection.
pub fn key_qualities_with_tracker(
    inst: &ProblemInstance,
    params: &SolverParams,
) -> Result<(SolveOutput, Tracker)> {
    let (k, d) = (inst.k(), inst.d());
    let (m, c) = params.effective(k, d);
    let heuristic = (m, c) != (default_member_window(k, d), default_confusion_bound(k, d));
    let deadline = params.time_limit.map(|t| Instant::now() + t);

    if !params.waive_dominance_check && !inst.graph().is_d_path_dominant(d)? {
        return Err(Error::Precondition(format!(
            "graph is not {d}-path-dominant; waive the check to run anyway (sound but possibly incomplete)"
        )));
    }

    let tracker = build_tracker_bounded(inst, m, c, deadline)?;
    let digraph = tracker.to_vector_digraph()?;
    if let Some(deadline) = deadline {
        if Instant::now() > deadline {
            return Err(Error::BudgetExceeded("solve: time limit reached".into()));
        }
    }
    let run = pareto::run_labels(&digraph);
    let key_qualities = run.target_set();

    // Soundness assertion, independent of parameters: every output vector
    // must be realized exactly by a linkage traced from a witness path.
    let mut witnesses = BTreeMap::new();
    for quality in key_qualities.iter() {
        let nodes = pareto::reconstruct_witness(&digraph, &run, quality)?;
        let linkage = trace_path(inst, &tracker, &nodes)?;
        if &linkage.quality() != quality {
            return Err(Error::InvariantViolation(format!(
                "witness for {quality:?} realizes {:?}",
                linkage.quality()
            )));
        }
        witnesses.insert(quality.clone(), linkage);
    }
    if !key_qualities.is_antichain() {
        return Err(Error::InvariantViolation("output is not an antichain".into()));
    }

    let stats = SolveStats {
        m,
        c,
        rail_count: tracker.rail_count(),
        tracker_nodes: tracker.node_count(),
        tracker_edges: tracker.edge_count(),
        pareto_rounds: run.rounds,
        runtime_exponent: runtime_exponent(k, d),
    };
    Ok((
        SolveOutput {
            key_qualities,
            witnesses: params.emit_witness.then_some(witnesses),
            heuristic,
            stats,
        },
        tracker,
    ))
}

/// Decides whether a linkage for the instance exists: a linkage exists iff
/// some quality exists iff some key quality exists.
pub fn has_linkage(inst: &ProblemInstance, params: &SolverParams) -> Result<bool> {
    Ok(!key_qualities(inst, params)?.key_qualities.is_empty())
}

/// Decides whether a linkage exists in which member `i` has at most
/// `bounds[i]` vertices: true iff some key quality is dominated by the
/// bound vector.
pub fn has_bounded_linkage(
    inst: &ProblemInstance,
    params: &SolverParams,
    bounds: &[u32],
) -> Result<bool> {
    if bounds.len() != inst.k() {
        return Err(Error::invalid(format!(
            "expected {} bounds, found {}",
            inst.k(),
            bounds.len()
        )));
    }
    if bounds.contains(&0) {
        return Err(Error::invalid("bounds must be positive"));
    }
    let target = QualityVector::new(bounds.to_vec());
    let out = key_qualities(inst, params)?;
    let hit = out
        .key_qualities
        .iter()
        .any(|q| pareto::dominated(q, &target).expect("arities checked above"));
    Ok(hit)
}

/// Text form of a solve result: one line per key quality in lexicographic
/// order (components space-separated), a heuristic marker comment when the
/// parameters were overridden, and optional witness blocks.
pub fn format_solution(out: &SolveOutput) -> String {
    let mut s = String::new();
    if out.heuristic {
        let _ = writeln!(s, "# heuristic m={} c={}", out.stats.m, out.stats.c);
    }
    for q in out.key_qualities.iter() {
        let _ = writeln!(s, "{q}");
    }
    if let Some(witnesses) = &out.witnesses {
        for (q, linkage) in witnesses {
            let _ = writeln!(s, "witness {q}");
            for member in linkage.members() {
                let _ = writeln!(s, "path {member}");
            }
        }
    }
    s
}
