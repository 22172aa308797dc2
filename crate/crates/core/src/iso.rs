//! Backtracking graph isomorphism for small graphs.

use crate::graph::Graph;

/// Finds a bijection `map[g_vertex] = h_vertex` preserving adjacency and
/// non-adjacency, or `None`.
///
/// Candidates are pruned by degree and by the sorted multiset of neighbour
/// degrees. Deterministic: vertices of `g` are matched most-constrained
/// first, candidates in increasing label order.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return None;
    }
    let sig_g = signatures(g);
    let sig_h = signatures(h);
    let mut sorted_g = sig_g.clone();
    let mut sorted_h = sig_h.clone();
    sorted_g.sort();
    sorted_h.sort();
    if sorted_g != sorted_h {
        return None;
    }

    let n = g.n();
    let class_size = |v: usize| sig_g.iter().filter(|s| **s == sig_g[v]).count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        class_size(a)
            .cmp(&class_size(b))
            .then(g.degree(b).cmp(&g.degree(a)))
            .then(a.cmp(&b))
    });
    // Prefer vertices adjacent to already ordered ones so adjacency checks bite early.
    let order = connectivity_order(g, order);

    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..n).filter(|&w| sig_h[w] == sig_g[v]).collect())
        .collect();

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(g, h, &order, 0, &candidates, &mut map, &mut used) && verify(g, h, &map) {
        Some(map)
    } else {
        None
    }
}

/// Checks that `map` is a bijection preserving adjacency both ways.
pub fn verify(g: &Graph, h: &Graph, map: &[usize]) -> bool {
    let n = g.n();
    if h.n() != n || map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &w in map {
        if w >= n || seen[w] {
            return false;
        }
        seen[w] = true;
    }
    (0..n).all(|u| (u + 1..n).all(|v| g.has_edge(u, v) == h.has_edge(map[u], map[v])))
}

fn signatures(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    (0..g.n())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|u| g.degree(u)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect()
}

fn connectivity_order(g: &Graph, seed: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(seed.len());
    let mut placed = vec![false; seed.len()];
    while out.len() < seed.len() {
        let next = seed
            .iter()
            .copied()
            .filter(|&v| !placed[v])
            .find(|&v| out.iter().any(|&u| g.has_edge(u, v)))
            .or_else(|| seed.iter().copied().find(|&v| !placed[v]))
            .expect("unplaced vertex remains");
        placed[next] = true;
        out.push(next);
    }
    out
}

fn extend(
    g: &Graph,
    h: &Graph,
    order: &[usize],
    depth: usize,
    candidates: &[Vec<usize>],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for &w in &candidates[v] {
        if used[w] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| g.has_edge(u, v) == h.has_edge(map[u], w));
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(g, h, order, depth + 1, candidates, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}
