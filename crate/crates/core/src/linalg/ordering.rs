//! Reverse Cuthill-McKee profile reduction.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Reverse Cuthill-McKee permutation of a symmetric sparsity graph, returned
/// as `perm[new] = old`. Each connected component starts from a
/// pseudo-peripheral vertex.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    let mut scratch = Vec::new();
    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        let start = pseudo_peripheral(adj, &degree, seed);
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            scratch.clear();
            scratch.extend(adj[v].iter().copied().filter(|&u| !visited[u]));
            scratch.sort_unstable_by_key(|&u| (degree[u], u));
            for &u in &scratch {
                visited[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.reverse();
    order
}

fn level_structure(adj: &[Vec<usize>], root: usize) -> (Vec<usize>, usize) {
    let mut level = vec![usize::MAX; adj.len()];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut last = vec![root];
    let mut depth = 0;
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if level[u] == usize::MAX {
                level[u] = level[v] + 1;
                if level[u] > depth {
                    depth = level[u];
                    last.clear();
                }
                last.push(u);
                queue.push_back(u);
            }
        }
    }
    (last, depth)
}

fn pseudo_peripheral(adj: &[Vec<usize>], degree: &[usize], seed: usize) -> usize {
    let mut root = seed;
    let (mut last, mut depth) = level_structure(adj, root);
    loop {
        let candidate = *last.iter().min_by_key(|&&u| (degree[u], u)).unwrap();
        let (next_last, next_depth) = level_structure(adj, candidate);
        if next_depth <= depth {
            return root;
        }
        root = candidate;
        last = next_last;
        depth = next_depth;
    }
}

/// Number of stored entries in the lower envelope of `P A Pᵀ`.
pub fn envelope_size(adj: &[Vec<usize>], perm: &[usize]) -> usize {
    let mut inv = vec![0usize; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    perm.iter()
        .enumerate()
        .map(|(i, &old)| {
            let first = adj[old].iter().map(|&u| inv[u]).filter(|&j| j < i).min().unwrap_or(i);
            i - first
        })
        .sum()
}
