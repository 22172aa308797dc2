//! Simple undirected graphs on at most 64 vertices with bit-set adjacency.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// A set of vertex labels in `0..64`, stored as a single machine word.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
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
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexIter {}

/// Canonical clique order: larger first, then lexicographic on the sorted
/// vertex lists.
pub fn canonical_cmp(a: &VertexSet, b: &VertexSet) -> std::cmp::Ordering {
    b.len().cmp(&a.len()).then_with(|| a.iter().cmp(b.iter()))
}

/// A list of cliques, typically covering every edge of a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliqueCover {
    pub cliques: Vec<VertexSet>,
}

impl CliqueCover {
    pub fn new(cliques: Vec<VertexSet>) -> Self {
        CliqueCover { cliques }
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Every member is a clique of `g` and together they cover `E(g)`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        if !self.cliques.iter().all(|&c| g.is_clique(c)) {
            return false;
        }
        g.edges()
            .all(|(u, v)| self.cliques.iter().any(|c| c.contains(u) && c.contains(v)))
    }
}

/// Graphs addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedGraph {
    Cycle(usize),
    Petersen,
    Johnson52,
}

/// Undirected simple graph on `1..=64` vertices labelled `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::VertexCount { n });
        }
        Ok(Graph {
            n,
            adj: vec![VertexSet::EMPTY; n],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        let all = VertexSet::full(n);
        for v in 0..n {
            let mut nb = all;
            nb.remove(v);
            g.adj[v] = nb;
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn named(name: NamedGraph) -> Result<Self> {
        match name {
            NamedGraph::Cycle(k) => {
                if k < 3 {
                    return Err(Error::CycleTooShort(k));
                }
                let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
                Graph::from_edges(k, &edges)
            }
            NamedGraph::Petersen => Ok(kneser_like(|a, b| a & b == 0)),
            NamedGraph::Johnson52 => Ok(kneser_like(|a, b| a & b != 0)),
        }
    }

    pub fn cycle(k: usize) -> Result<Self> {
        Graph::named(NamedGraph::Cycle(k))
    }

    pub fn petersen() -> Self {
        kneser_like(|a, b| a & b == 0)
    }

    pub fn johnson_5_2() -> Self {
        kneser_like(|a, b| a & b != 0)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter()
            .all(|v| s.difference(VertexSet::singleton(v)).is_subset(self.adj[v]))
    }

    pub fn is_independent(&self, s: VertexSet) -> bool {
        s.iter().all(|v| self.adj[v].intersection(s).is_empty())
    }

    pub fn complement(&self) -> Graph {
        let all = self.vertices();
        let adj = (0..self.n)
            .map(|v| {
                all.difference(self.adj[v])
                    .difference(VertexSet::singleton(v))
            })
            .collect();
        Graph { n: self.n, adj }
    }

    /// Subgraph induced by `s`, relabelled to `0..|s|` in increasing order.
    /// Returns the graph and `map[new] = old`.
    pub fn induced_subgraph(&self, s: VertexSet) -> Result<(Graph, Vec<usize>)> {
        if s.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        if !s.is_subset(self.vertices()) {
            let bad = s.difference(self.vertices()).first().unwrap_or_default();
            return Err(Error::VertexOutOfRange {
                vertex: bad,
                n: self.n,
            });
        }
        let map = s.to_vec();
        let mut h = Graph::empty(map.len())?;
        for (i, &u) in map.iter().enumerate() {
            for (j, &v) in map.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    h.add_edge(i, j)?;
                }
            }
        }
        Ok((h, map))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<_> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn is_regular(&self, k: usize) -> bool {
        (0..self.n).all(|v| self.degree(v) == k)
    }

    /// Serializes to the `n <count>` / `u v` text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph(n={}, edges={:?})",
            self.n,
            self.edges().collect::<Vec<_>>()
        )
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut graph: Option<Graph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: line_no, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match graph.as_mut() {
                None => {
                    if fields.len() != 2 || fields[0] != "n" {
                        return Err(parse_err(format!("expected `n <count>`, found `{line}`")));
                    }
                    let n: usize = fields[1]
                        .parse()
                        .map_err(|_| parse_err(format!("invalid vertex count `{}`", fields[1])))?;
                    graph = Some(Graph::empty(n).map_err(|e| parse_err(e.to_string()))?);
                }
                Some(g) => {
                    if fields.len() != 2 {
                        return Err(parse_err(format!("expected `u v`, found `{line}`")));
                    }
                    let mut ends = [0usize; 2];
                    for (slot, tok) in ends.iter_mut().zip(&fields) {
                        *slot = tok
                            .parse()
                            .map_err(|_| parse_err(format!("invalid vertex label `{tok}`")))?;
                    }
                    g.add_edge(ends[0], ends[1])
                        .map_err(|e| parse_err(e.to_string()))?;
                }
            }
        }
        graph.ok_or(Error::Parse {
            line: text.lines().count().max(1),
            msg: "missing `n <count>` header".into(),
        })
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

/// The ten 2-subsets of `{0,..,4}` in lexicographic order.
pub fn two_subsets_of_five() -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(10);
    for a in 0..5 {
        for b in a + 1..5 {
            out.push((a, b));
        }
    }
    out
}

fn kneser_like(adjacent: impl Fn(u8, u8) -> bool) -> Graph {
    let subsets: Vec<u8> = two_subsets_of_five()
        .into_iter()
        .map(|(a, b)| 1 << a | 1 << b)
        .collect();
    let mut g = Graph::empty(subsets.len()).expect("10 vertices");
    for i in 0..subsets.len() {
        for j in i + 1..subsets.len() {
            if adjacent(subsets[i], subsets[j]) {
                g.add_edge(i, j).expect("in range");
            }
        }
    }
    g
}
