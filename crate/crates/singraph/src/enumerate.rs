//! Exhaustive universes of small weighted trees, used for desk-scale
//! verification: all resolution graphs in the template lists are trees, so
//! tree universes suffice for the closure and equivalence checks.

use std::collections::BTreeSet;

use crate::canon::canonical_form;
use crate::cycles::is_rational;
use crate::graph::WeightedDualGraph;
use crate::par::maybe_parallel_filter_map;

/// All free trees on n vertices up to isomorphism, as graphs with every
/// weight -2. Enumerated via labeled trees (Prüfer sequences) and canonical
/// deduplication; n stays small so this is cheap.
pub fn tree_shapes(n: usize) -> Vec<WeightedDualGraph> {
    assert!(n >= 1 && n <= 10, "tree universe is for small n");
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    if n == 1 {
        out.push(WeightedDualGraph::chain(&[-2]));
        return out;
    }
    if n == 2 {
        out.push(WeightedDualGraph::chain(&[-2, -2]));
        return out;
    }
    // iterate all Prüfer sequences of length n - 2 over n labels
    let len = n - 2;
    let mut seq = vec![0usize; len];
    loop {
        let edges = prufer_edges(&seq, n);
        let mut g = WeightedDualGraph::new();
        for v in 0..n {
            g.add_vertex(&format!("v{}", v + 1), -2).unwrap();
        }
        for (a, b) in edges {
            g.add_edge(a, b, 1).unwrap();
        }
        let key = canonical_form(&g).unwrap();
        if seen.insert(key) {
            out.push(g);
        }
        // advance
        let mut i = 0;
        while i < len {
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            break;
        }
    }
    out
}

fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut used = vec![false; n];
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1 && !used[v]).unwrap();
        edges.push((leaf, s));
        used[leaf] = true;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !used[v] && degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Exact negative-definiteness for small integer forms: fraction-free
/// elimination over i128 yields the leading principal minors of -I(G); the
/// form is negative definite iff they are all positive. Entry sizes in the
/// enumerated universes keep every minor far below the i128 range.
fn negdef_small(g: &WeightedDualGraph) -> bool {
    let n = g.len();
    let mut a = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = -g.pairing(i, j) as i128;
        }
    }
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] <= 0 {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    true
}

/// All negative-definite rational weighted trees with exactly n vertices and
/// weights in [min_weight, -2], up to isomorphism, in canonical order.
pub fn rational_universe(n: usize, min_weight: i64) -> Vec<WeightedDualGraph> {
    assert!(min_weight <= -2);
    let shapes = tree_shapes(n);
    let span = (-2 - min_weight) as usize + 1;
    let mut jobs: Vec<(usize, Vec<i64>)> = Vec::new();
    for (si, _) in shapes.iter().enumerate() {
        let mut ws = vec![0usize; n];
        loop {
            jobs.push((si, ws.iter().map(|&w| -2 - w as i64).collect()));
            let mut i = 0;
            while i < n {
                ws[i] += 1;
                if ws[i] < span {
                    break;
                }
                ws[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    let mut hits = maybe_parallel_filter_map(jobs, |(si, ws)| {
        let mut g = shapes[si].clone();
        for (v, &w) in ws.iter().enumerate() {
            g.set_weight(v, w);
        }
        if !negdef_small(&g) {
            return None;
        }
        if !is_rational(&g).unwrap_or(false) {
            return None;
        }
        let key = canonical_form(&g).unwrap();
        Some((key.as_str().to_string(), g))
    });
    hits.sort_by(|a, b| a.0.cmp(&b.0));
    hits.dedup_by(|a, b| a.0 == b.0);
    hits.into_iter().map(|(_, g)| g).collect()
}

/// The rational universe over all sizes 1..=max_n.
pub fn rational_universe_up_to(max_n: usize, min_weight: i64) -> Vec<WeightedDualGraph> {
    (1..=max_n).flat_map(|n| rational_universe(n, min_weight)).collect()
}
