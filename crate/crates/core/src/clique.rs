//! Exact maximum clique by branch and bound with a greedy-colouring bound.
//!
//! Vertices are `0..adj.len()`; `adj[v]` is the neighbourhood of `v` (no self loops).

use crate::elements::ElementSet;

/// A maximum clique, sorted. Ties resolve to the first clique met in
/// canonical vertex order, so the result is deterministic.
pub fn max_clique(adj: &[ElementSet]) -> Vec<usize> {
    let n = adj.len();
    let mut best = Vec::new();
    let mut current = Vec::new();
    expand(adj, &mut current, ElementSet::full(n), &mut best);
    best.sort_unstable();
    best
}

fn expand(adj: &[ElementSet], current: &mut Vec<usize>, candidates: ElementSet, best: &mut Vec<usize>) {
    if candidates.is_empty() {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    let (order, colours) = colour_sort(adj, &candidates);
    let mut candidates = candidates;
    // Highest colour first: a vertex coloured c cannot extend current by more than c.
    for i in (0..order.len()).rev() {
        if current.len() + colours[i] <= best.len() {
            return;
        }
        let v = order[i];
        current.push(v);
        expand(adj, current, candidates.intersection(&adj[v]), best);
        current.pop();
        candidates.remove(v);
    }
}

/// Greedy sequential colouring of `candidates`; returns vertices in colour
/// order with their (1-based) colour numbers, non-decreasing.
fn colour_sort(adj: &[ElementSet], candidates: &ElementSet) -> (Vec<usize>, Vec<usize>) {
    let mut uncoloured = candidates.clone();
    let mut order = Vec::with_capacity(candidates.len());
    let mut colours = Vec::with_capacity(candidates.len());
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut available = uncoloured.clone();
        while let Some(v) = available.first() {
            available.remove(v);
            available = available.difference(&adj[v]);
            uncoloured.remove(v);
            order.push(v);
            colours.push(colour);
        }
    }
    (order, colours)
}

/// All cliques of exactly `k` vertices, each sorted, in lexicographic order.
pub fn cliques_of_size(adj: &[ElementSet], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(adj: &[ElementSet], k: usize, current: &mut Vec<usize>, candidates: ElementSet, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        if current.len() + candidates.len() < k {
            return;
        }
        for v in candidates.to_vec() {
            let mut next = candidates.intersection(&adj[v]);
            // Only larger ids, so each clique is produced once, sorted.
            for u in candidates.iter().take_while(|&u| u <= v) {
                next.remove(u);
            }
            current.push(v);
            rec(adj, k, current, next, out);
            current.pop();
        }
    }
    if k == 0 {
        return vec![vec![]];
    }
    rec(adj, k, &mut current, ElementSet::full(adj.len()), &mut out);
    out
}
