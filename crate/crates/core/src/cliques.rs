//! Clique enumeration, maximum cliques / independent sets, and minimum edge
//! clique covers.

use crate::graph::{canonical_cmp, CliqueCover, Graph, VertexSet};

/// All inclusion-maximal cliques of `g`, sorted canonically.
///
/// Bron–Kerbosch with pivoting; the pivot maximizes the number of candidate
/// neighbours, ties going to the lowest index.
pub fn maximal_cliques(g: &Graph) -> Vec<VertexSet> {
    let mut out = Vec::new();
    bron_kerbosch(
        g,
        VertexSet::EMPTY,
        g.vertices(),
        VertexSet::EMPTY,
        &mut out,
    );
    out.sort_by(canonical_cmp);
    out
}

fn bron_kerbosch(
    g: &Graph,
    r: VertexSet,
    mut p: VertexSet,
    mut x: VertexSet,
    out: &mut Vec<VertexSet>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r);
        }
        return;
    }
    let mut pivot = usize::MAX;
    let mut best = 0usize;
    for u in p.union(x).iter() {
        let c = p.intersection(g.neighbors(u)).len();
        if pivot == usize::MAX || c > best {
            pivot = u;
            best = c;
        }
    }
    for v in p.difference(g.neighbors(pivot)).iter() {
        let nv = g.neighbors(v);
        bron_kerbosch(g, r.with(v), p.intersection(nv), x.intersection(nv), out);
        p.remove(v);
        x.insert(v);
    }
}

/// A maximum clique of `g` and its size.
///
/// Branch and bound with greedy-colouring bounds. Vertices are ordered by
/// decreasing degree, ties by lowest index; the first maximum found is kept.
pub fn max_clique(g: &Graph) -> (usize, VertexSet) {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    let mut best = VertexSet::EMPTY;
    expand(g, &order, VertexSet::EMPTY, g.vertices(), &mut best);
    (best.len(), best)
}

fn expand(g: &Graph, order: &[usize], r: VertexSet, mut p: VertexSet, best: &mut VertexSet) {
    let (verts, colors) = colour_sort(g, order, p);
    for k in (0..verts.len()).rev() {
        if r.len() + colors[k] <= best.len() {
            return;
        }
        let v = verts[k];
        let r2 = r.with(v);
        let p2 = p.intersection(g.neighbors(v));
        if p2.is_empty() {
            if r2.len() > best.len() {
                *best = r2;
            }
        } else {
            expand(g, order, r2, p2, best);
        }
        p.remove(v);
    }
}

/// Greedy colouring of `p` in `order`; returns vertices grouped by colour
/// class (ascending) with the colour number (1-based) of each.
fn colour_sort(g: &Graph, order: &[usize], p: VertexSet) -> (Vec<usize>, Vec<usize>) {
    let mut classes: Vec<VertexSet> = Vec::new();
    for &v in order.iter().filter(|&&v| p.contains(v)) {
        let nv = g.neighbors(v);
        match classes.iter_mut().find(|c| c.intersection(nv).is_empty()) {
            Some(c) => c.insert(v),
            None => classes.push(VertexSet::singleton(v)),
        }
    }
    let mut verts = Vec::with_capacity(p.len());
    let mut colors = Vec::with_capacity(p.len());
    for (k, class) in classes.iter().enumerate() {
        // keep the degree order inside a class
        for &v in order.iter().filter(|&&v| class.contains(v)) {
            verts.push(v);
            colors.push(k + 1);
        }
    }
    (verts, colors)
}

/// Exact independence number with one maximum independent set as witness.
pub fn independence_number(g: &Graph) -> (usize, VertexSet) {
    max_clique(&g.complement())
}

/// Result of the bounded edge clique cover search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeCoverOutcome {
    /// `θ′(G)` with a minimum cover as witness.
    Exact { number: usize, cover: CliqueCover },
    /// No cover with at most `budget` cliques exists.
    ExceedsBudget { budget: usize },
}

impl EdgeCoverOutcome {
    pub fn number(&self) -> Option<usize> {
        match self {
            EdgeCoverOutcome::Exact { number, .. } => Some(*number),
            EdgeCoverOutcome::ExceedsBudget { .. } => None,
        }
    }
}

/// Minimum number of cliques covering every edge, searched exactly up to
/// `budget` cliques.
///
/// Iterative deepening on the cover size. At each node the
/// lexicographically first uncovered edge is covered by each maximal clique
/// containing it, in canonical clique order. Restricting to maximal cliques
/// loses nothing since any cover clique extends to a maximal one.
pub fn edge_clique_cover_number(g: &Graph, budget: usize) -> EdgeCoverOutcome {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.is_empty() {
        return EdgeCoverOutcome::Exact {
            number: 0,
            cover: CliqueCover::default(),
        };
    }
    let cliques: Vec<VertexSet> = maximal_cliques(g)
        .into_iter()
        .filter(|c| c.len() >= 2)
        .collect();
    let words = edges.len().div_ceil(64);
    let clique_masks: Vec<EdgeBits> = cliques
        .iter()
        .map(|c| {
            let mut m = EdgeBits::zeros(words);
            for (k, &(u, v)) in edges.iter().enumerate() {
                if c.contains(u) && c.contains(v) {
                    m.set(k);
                }
            }
            m
        })
        .collect();
    let containing: Vec<Vec<usize>> = edges
        .iter()
        .map(|&(u, v)| {
            (0..cliques.len())
                .filter(|&c| cliques[c].contains(u) && cliques[c].contains(v))
                .collect()
        })
        .collect();
    let max_edges = clique_masks.iter().map(EdgeBits::count).max().unwrap_or(1);

    let mut all = EdgeBits::zeros(words);
    for k in 0..edges.len() {
        all.set(k);
    }
    let search = CoverSearch {
        masks: &clique_masks,
        containing: &containing,
        max_edges,
    };
    let lower = edges.len().div_ceil(max_edges);
    for depth in lower..=budget {
        let mut chosen = Vec::with_capacity(depth);
        if search.dfs(&all, depth, &mut chosen) {
            let cover = CliqueCover::new(chosen.iter().map(|&c| cliques[c]).collect());
            assert!(
                cover.is_valid_for(g),
                "edge clique cover witness failed verification"
            );
            return EdgeCoverOutcome::Exact {
                number: depth,
                cover,
            };
        }
    }
    EdgeCoverOutcome::ExceedsBudget { budget }
}

struct CoverSearch<'a> {
    masks: &'a [EdgeBits],
    containing: &'a [Vec<usize>],
    max_edges: usize,
}

impl CoverSearch<'_> {
    fn dfs(&self, uncovered: &EdgeBits, depth_left: usize, chosen: &mut Vec<usize>) -> bool {
        let Some(edge) = uncovered.first() else {
            return true;
        };
        if uncovered.count() > depth_left * self.max_edges {
            return false;
        }
        for &c in &self.containing[edge] {
            chosen.push(c);
            if self.dfs(&uncovered.and_not(&self.masks[c]), depth_left - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

#[derive(Clone, Debug)]
struct EdgeBits(Vec<u64>);

impl EdgeBits {
    fn zeros(words: usize) -> Self {
        EdgeBits(vec![0; words])
    }

    fn set(&mut self, k: usize) {
        self.0[k / 64] |= 1u64 << (k % 64);
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and_not(&self, other: &EdgeBits) -> EdgeBits {
        EdgeBits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }
}
