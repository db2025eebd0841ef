//! Dense loop-free digraphs with O(1) adjacency, plus the structural
//! predicates the routing algorithms are built on: semicompleteness,
//! minimal paths, d-path-dominance and inward/outward tests.

use std::fmt;

use crate::error::{Error, Result};

/// Vertex ids are dense integers `0..n`.
pub type Vertex = usize;

/// Hard cap on vertex count; vertex sets are stored as 128-bit masks.
pub const MAX_VERTICES: usize = 128;

/// A set of vertex ids backed by a 128-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: Vertex) -> VertexSet {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1u128 << v)
    }

    /// All vertices `0..n`.
    pub fn full(n: usize) -> VertexSet {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u128::MAX)
        } else {
            VertexSet((1u128 << n) - 1)
        }
    }

    pub fn contains(self, v: Vertex) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: Vertex) {
        debug_assert!(v < MAX_VERTICES);
        self.0 |= 1u128 << v;
    }

    pub fn remove(&mut self, v: Vertex) {
        debug_assert!(v < MAX_VERTICES);
        self.0 &= !(1u128 << v);
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn minus(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Ascending iterator over members.
    pub fn iter(self) -> impl Iterator<Item = Vertex> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as Vertex;
                bits &= bits - 1;
                Some(v)
            }
        })
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A finite digraph without loops or parallel edges. Antiparallel pairs
/// (`u -> v` and `v -> u` together) are allowed. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<u128>,
    inn: Vec<u128>,
    edge_count: usize,
}

impl Digraph {
    /// An edgeless digraph on `n` vertices.
    pub fn new(n: usize) -> Result<Digraph> {
        if n > MAX_VERTICES {
            return Err(Error::invalid(format!(
                "vertex count {n} exceeds the supported maximum {MAX_VERTICES}"
            )));
        }
        Ok(Digraph {
            n,
            out: vec![0; n],
            inn: vec![0; n],
            edge_count: 0,
        })
    }

    pub fn with_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Digraph> {
        let mut g = Digraph::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts the edge `u -> v`. Rejects loops, out-of-range ids and
    /// duplicates.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::invalid(format!(
                "edge ({u}, {v}) out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::invalid(format!("loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::invalid(format!("duplicate edge ({u}, {v})")));
        }
        self.out[u] |= 1u128 << v;
        self.inn[v] |= 1u128 << u;
        self.edge_count += 1;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.out[u] >> v & 1 == 1
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.n
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Out-neighbours of `v` as a set.
    pub fn out_neighbors(&self, v: Vertex) -> VertexSet {
        VertexSet(self.out[v])
    }

    /// In-neighbours of `v` as a set.
    pub fn in_neighbors(&self, v: Vertex) -> VertexSet {
        VertexSet(self.inn[v])
    }

    /// Edges in lexicographic `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbors(u).iter().map(move |v| (u, v)))
    }

    /// True iff every unordered pair of distinct vertices is joined by at
    /// least one edge.
    pub fn is_semicomplete(&self) -> bool {
        (0..self.n).all(|u| {
            ((u + 1)..self.n).all(|v| self.has_edge(u, v) || self.has_edge(v, u))
        })
    }

    /// True iff every unordered pair is joined by exactly one edge.
    pub fn is_tournament(&self) -> bool {
        (0..self.n).all(|u| {
            ((u + 1)..self.n).all(|v| self.has_edge(u, v) != self.has_edge(v, u))
        })
    }

    /// True iff `v` has no in-edge from `within`. Requires `v` outside the
    /// set; an empty set is vacuously satisfied.
    pub fn is_inward(&self, within: VertexSet, v: Vertex) -> Result<bool> {
        if within.contains(v) {
            return Err(Error::invalid(format!("vertex {v} belongs to the tested set")));
        }
        Ok(self.in_neighbors(v).intersection(within).is_empty())
    }

    /// True iff `v` has no out-edge into `within`. Same preconditions as
    /// [`Digraph::is_inward`].
    pub fn is_outward(&self, within: VertexSet, v: Vertex) -> Result<bool> {
        if within.contains(v) {
            return Err(Error::invalid(format!("vertex {v} belongs to the tested set")));
        }
        Ok(self.out_neighbors(v).intersection(within).is_empty())
    }

    /// True iff `path` has no forward chord: every edge of the graph between
    /// path vertices lands at most one step ahead.
    pub fn is_minimal_path(&self, path: &Path) -> Result<bool> {
        path.check_in(self)?;
        let verts = path.vertices();
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate() {
                if j > i + 1 && self.has_edge(u, v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// True iff every minimal path with exactly `d` vertices dominates the
    /// graph: each vertex lies on the path or has an in- or out-neighbour
    /// on it. Vacuously true when no such path exists.
    pub fn is_d_path_dominant(&self, d: usize) -> Result<bool> {
        if d < 1 {
            return Err(Error::invalid("domination parameter d must be at least 1"));
        }
        let mut seq = Vec::with_capacity(d);
        let mut dominant = true;
        for start in 0..self.n {
            seq.push(start);
            self.d_path_search(d, &mut seq, &mut dominant);
            seq.pop();
            if !dominant {
                break;
            }
        }
        Ok(dominant)
    }

    fn d_path_search(&self, d: usize, seq: &mut Vec<Vertex>, dominant: &mut bool) {
        if !*dominant {
            return;
        }
        if seq.len() == d {
            if self.seq_is_minimal(seq) && !self.seq_dominates(seq) {
                *dominant = false;
            }
            return;
        }
        let last = *seq.last().unwrap();
        for w in self.out_neighbors(last).iter() {
            if seq.contains(&w) {
                continue;
            }
            seq.push(w);
            self.d_path_search(d, seq, dominant);
            seq.pop();
            if !*dominant {
                return;
            }
        }
    }

    fn seq_is_minimal(&self, seq: &[Vertex]) -> bool {
        for (i, &u) in seq.iter().enumerate() {
            for (j, &v) in seq.iter().enumerate() {
                if j > i + 1 && self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    fn seq_dominates(&self, seq: &[Vertex]) -> bool {
        let on_path: VertexSet = seq.iter().copied().collect();
        for v in 0..self.n {
            if on_path.contains(v) {
                continue;
            }
            let touched = self
                .out_neighbors(v)
                .union(self.in_neighbors(v))
                .intersection(on_path);
            if touched.is_empty() {
                return false;
            }
        }
        true
    }

    /// Parses the graph text format: first line the vertex count, then one
    /// `u v` edge per nonempty line. Lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Digraph> {
        let mut graph: Option<Digraph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let mut tokens = tokenize(line, line_no);
            match graph {
                None => {
                    let (n, _) = tokens.next().unwrap();
                    let n: usize = parse_token(n, line_no, token_col(line, 0))?;
                    if let Some((extra, col)) = tokens.next() {
                        return Err(Error::Parse {
                            line: line_no,
                            column: col,
                            message: format!("unexpected token '{extra}' after vertex count"),
                        });
                    }
                    graph = Some(Digraph::new(n).map_err(|e| Error::Parse {
                        line: line_no,
                        column: 1,
                        message: e.to_string(),
                    })?);
                }
                Some(ref mut g) => {
                    let (u_tok, u_col) = tokens.next().unwrap();
                    let u: usize = parse_token(u_tok, line_no, u_col)?;
                    let (v_tok, v_col) = match tokens.next() {
                        Some(t) => t,
                        None => {
                            return Err(Error::Parse {
                                line: line_no,
                                column: line.len() + 1,
                                message: "expected two vertex ids per edge line".into(),
                            })
                        }
                    };
                    let v: usize = parse_token(v_tok, line_no, v_col)?;
                    if let Some((extra, col)) = tokens.next() {
                        return Err(Error::Parse {
                            line: line_no,
                            column: col,
                            message: format!("unexpected token '{extra}' after edge"),
                        });
                    }
                    g.add_edge(u, v).map_err(|e| Error::Parse {
                        line: line_no,
                        column: u_col,
                        message: e.to_string(),
                    })?;
                }
            }
        }
        graph.ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: "empty graph file; expected a vertex count".into(),
        })
    }

    /// Deterministic serialization; `parse` round-trips it.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}->{v}")?;
        }
        write!(f, "])")
    }
}

fn tokenize(line: &str, _line_no: usize) -> impl Iterator<Item = (&str, usize)> {
    line.split_whitespace().map(move |tok| {
        let col = tok.as_ptr() as usize - line.as_ptr() as usize + 1;
        (tok, col)
    })
}

fn token_col(line: &str, nth: usize) -> usize {
    line.split_whitespace()
        .nth(nth)
        .map(|tok| tok.as_ptr() as usize - line.as_ptr() as usize + 1)
        .unwrap_or(1)
}

fn parse_token<T: std::str::FromStr>(tok: &str, line: usize, column: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        column,
        message: format!("invalid integer '{tok}'"),
    })
}

/// A directed path: a nonempty sequence of distinct vertices in which
/// consecutive vertices are joined by a graph edge.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    vertices: Vec<Vertex>,
    mask: VertexSet,
}

impl Path {
    /// Validates `vertices` against `g` and builds the path.
    pub fn new(g: &Digraph, vertices: Vec<Vertex>) -> Result<Path> {
        if vertices.is_empty() {
            return Err(Error::invalid("a path has at least one vertex"));
        }
        let mut mask = VertexSet::EMPTY;
        for &v in &vertices {
            if v >= g.vertex_count() {
                return Err(Error::invalid(format!("path vertex {v} out of range")));
            }
            if mask.contains(v) {
                return Err(Error::invalid(format!("path repeats vertex {v}")));
            }
            mask.insert(v);
        }
        for pair in vertices.windows(2) {
            if !g.has_edge(pair[0], pair[1]) {
                return Err(Error::invalid(format!(
                    "missing edge ({}, {}) along path",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(Path { vertices, mask })
    }

    pub(crate) fn from_validated(vertices: Vec<Vertex>) -> Path {
        let mask = vertices.iter().copied().collect();
        Path { vertices, mask }
    }

    fn check_in(&self, g: &Digraph) -> Result<()> {
        // Re-validation used by predicates that take an arbitrary Path.
        Path::new(g, self.vertices.clone()).map(|_| ())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn mask(&self) -> VertexSet {
        self.mask
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of edges: one less than the vertex count.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Contiguous subpath starting at index `from`, `count` vertices long.
    pub fn window(&self, from: usize, count: usize) -> Path {
        Path::from_validated(self.vertices[from..from + count].to_vec())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, "-")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Path {
    /// Space-separated vertex ids, matching the text output formats.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
