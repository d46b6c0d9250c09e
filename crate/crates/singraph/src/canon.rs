//! Canonical forms for deduplicating enumeration output.
//!
//! Trees get a rooted canonical encoding (centroid-rooted AHU with weights),
//! which is what all singularity graphs in this domain need. General
//! multigraphs fall back to exhaustive matching, capped at a small vertex
//! count.

use crate::error::{Error, Result};
use crate::graph::WeightedDualGraph;

/// Cap for the exhaustive multigraph fallback.
pub const ISO_CAP: usize = 16;

/// A label that is equal for two graphs iff they are isomorphic as weighted
/// multigraphs (trees exactly; small graphs by exhaustive matching).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_simple_tree(g: &WeightedDualGraph) -> bool {
    g.is_connected()
        && g.edges().all(|(_, _, m)| m == 1)
        && g.edges().count() + 1 == g.len().max(1)
}

/// AHU encoding of the tree rooted at `root`.
fn encode_rooted(g: &WeightedDualGraph, v: usize, parent: Option<usize>) -> String {
    let mut kids: Vec<String> = g
        .neighbors(v)
        .into_iter()
        .filter(|&u| Some(u) != parent)
        .map(|u| encode_rooted(g, u, Some(v)))
        .collect();
    kids.sort();
    format!("({}{})", g.weight(v), kids.concat())
}

/// Centroid(s) of a tree: one or two vertices minimizing the largest subtree.
fn centroids(g: &WeightedDualGraph) -> Vec<usize> {
    let n = g.len();
    if n == 1 {
        return vec![0];
    }
    let mut size = vec![0usize; n];
    let mut best = usize::MAX;
    let mut out = Vec::new();
    // iterative post-order from vertex 0
    fn subtree_sizes(g: &WeightedDualGraph, v: usize, p: Option<usize>, size: &mut Vec<usize>) {
        size[v] = 1;
        for u in g.neighbors(v) {
            if Some(u) != p {
                subtree_sizes(g, u, Some(v), size);
                size[v] += size[u];
            }
        }
    }
    subtree_sizes(g, 0, None, &mut size);
    fn walk(
        g: &WeightedDualGraph,
        v: usize,
        p: Option<usize>,
        n: usize,
        size: &[usize],
        best: &mut usize,
        out: &mut Vec<usize>,
    ) {
        let mut heaviest = n - size[v];
        for u in g.neighbors(v) {
            if Some(u) != p {
                heaviest = heaviest.max(size[u]);
            }
        }
        if heaviest < *best {
            *best = heaviest;
            out.clear();
            out.push(v);
        } else if heaviest == *best {
            out.push(v);
        }
        for u in g.neighbors(v) {
            if Some(u) != p {
                walk(g, u, Some(v), n, size, best, out);
            }
        }
    }
    walk(g, 0, None, n, &size, &mut best, &mut out);
    out
}

/// Minimal adjacency-matrix encoding over all vertex orders compatible with
/// the (weight, valency) refinement. Exponential; only for small graphs.
fn encode_exhaustive(g: &WeightedDualGraph) -> Result<String> {
    let n = g.len();
    if n > ISO_CAP {
        return Err(Error::IsoTooLarge { cap: ISO_CAP, got: n });
    }
    // group vertices by invariant; orderings permute within groups only
    let mut verts: Vec<usize> = g.vertices().collect();
    verts.sort_by_key(|&v| (g.weight(v), g.valency(v), v));
    let key = |v: usize| (g.weight(v), g.valency(v));

    let mut best: Option<String> = None;
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        g: &WeightedDualGraph,
        verts: &[usize],
        key: &dyn Fn(usize) -> (i64, i64),
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        best: &mut Option<String>,
    ) {
        let n = verts.len();
        if perm.len() == n {
            let mut s = String::new();
            for i in 0..n {
                s.push_str(&format!("{};", g.weight(perm[i])));
            }
            for i in 0..n {
                for j in i + 1..n {
                    s.push_str(&format!("{},", g.pairing(perm[i], perm[j])));
                }
            }
            if best.as_ref().map(|b| s < *b).unwrap_or(true) {
                *best = Some(s);
            }
            return;
        }
        let k = perm.len();
        let group = key(verts[k]);
        for (slot, &v) in verts.iter().enumerate() {
            if used[slot] || key(v) != group {
                continue;
            }
            used[slot] = true;
            perm.push(v);
            rec(g, verts, key, perm, used, best);
            perm.pop();
            used[slot] = false;
        }
    }
    rec(g, &verts, &key, &mut perm, &mut used, &mut best);
    Ok(best.expect("at least one ordering"))
}

/// Canonical form of a connected weighted graph.
pub fn canonical_form(g: &WeightedDualGraph) -> Result<CanonicalForm> {
    if g.is_empty() {
        return Ok(CanonicalForm("()".into()));
    }
    if is_simple_tree(g) {
        let enc = centroids(g)
            .into_iter()
            .map(|c| encode_rooted(g, c, None))
            .min()
            .unwrap();
        Ok(CanonicalForm(format!("T{enc}")))
    } else {
        Ok(CanonicalForm(format!("G{}", encode_exhaustive(g)?)))
    }
}

/// Isomorphism of weighted multigraphs via canonical forms.
pub fn isomorphic(a: &WeightedDualGraph, b: &WeightedDualGraph) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_reversal_is_isomorphic() {
        let a = WeightedDualGraph::chain(&[-4, -2, -3, -2, -2]);
        let b = WeightedDualGraph::chain(&[-2, -2, -3, -2, -4]);
        assert!(isomorphic(&a, &b).unwrap());
        let c = WeightedDualGraph::chain(&[-2, -4, -3, -2, -2]);
        assert!(!isomorphic(&a, &c).unwrap());
    }

    #[test]
    fn star_arm_permutation_is_isomorphic() {
        let a = WeightedDualGraph::star(-2, &[vec![-2, -3], vec![-2], vec![-4]]);
        let b = WeightedDualGraph::star(-2, &[vec![-4], vec![-2, -3], vec![-2]]);
        assert!(isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn weights_matter() {
        let a = WeightedDualGraph::chain(&[-2, -2]);
        let b = WeightedDualGraph::chain(&[-2, -3]);
        assert!(!isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn multigraph_fallback() {
        let mut a = WeightedDualGraph::new();
        a.add_vertex("x", -2).unwrap();
        a.add_vertex("y", -2).unwrap();
        a.add_edge(0, 1, 2).unwrap();
        let mut b = WeightedDualGraph::new();
        b.add_vertex("p", -2).unwrap();
        b.add_vertex("q", -2).unwrap();
        b.add_edge(0, 1, 2).unwrap();
        assert!(isomorphic(&a, &b).unwrap());
        let simple = WeightedDualGraph::chain(&[-2, -2]);
        assert!(!isomorphic(&a, &simple).unwrap());
    }

    #[test]
    fn empty_graph() {
        let a = WeightedDualGraph::new();
        let b = WeightedDualGraph::new();
        assert!(isomorphic(&a, &b).unwrap());
    }
}
