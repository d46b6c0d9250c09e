//! Deformations on the Artin component: root collections, integral
//! minimality, the adjacency graphs they generate, the explicit
//! star-producing collections for confining graphs, and root lifting
//! between a graph and its deepenings.

use std::collections::HashSet;

use crate::canon::canonical_form;
use crate::classify::{table2_witness, Table2Witness, TildeKind};
use crate::cycles::{fundamental_cycle, is_almost_reduced, positive_roots, roots_in_box};
use crate::error::{Error, Result};
use crate::graph::{arithmetic_genus, dot, Cycle, WeightedDualGraph};
use crate::par::maybe_parallel_filter_map;

/// An ordered list of positive roots D_1..D_m on one graph with almost
/// reduced sum and non-negative pairwise intersections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCollection {
    graph: WeightedDualGraph,
    roots: Vec<Cycle>,
}

impl RootCollection {
    pub fn new(graph: WeightedDualGraph, roots: Vec<Cycle>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::InvalidCollection("collection is empty".into()));
        }
        for d in &roots {
            if !d.is_positive() {
                return Err(Error::InvalidCollection("cycle is not positive".into()));
            }
            if arithmetic_genus(&graph, d)? != 0 {
                return Err(Error::InvalidCollection("cycle is not a root".into()));
            }
        }
        let sum = roots.iter().fold(Cycle::zero(&graph), |a, d| a.plus(d));
        if !is_almost_reduced(&graph, &sum)? {
            return Err(Error::InvalidCollection("sum is not almost reduced".into()));
        }
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if dot(&graph, &roots[i], &roots[j])? < 0 {
                    return Err(Error::InvalidCollection(format!(
                        "roots {} and {} intersect negatively",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(RootCollection { graph, roots })
    }

    pub fn graph(&self) -> &WeightedDualGraph {
        &self.graph
    }

    pub fn roots(&self) -> &[Cycle] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn sum(&self) -> Cycle {
        self.roots.iter().fold(Cycle::zero(&self.graph), |a, d| a.plus(d))
    }
}

/// Can every target be written as a non-negative integral combination of the
/// candidates? Coefficients are chosen per target independently.
fn generates(g: &WeightedDualGraph, cands: &[Cycle], targets: &[Cycle]) -> bool {
    fn expressible(cands: &[Cycle], rest: &Cycle) -> bool {
        if rest.is_zero() {
            return true;
        }
        let Some((first, tail)) = cands.split_first() else {
            return false;
        };
        let mut r = Some(rest.clone());
        loop {
            match r {
                Some(ref cur) => {
                    if expressible(tail, cur) {
                        return true;
                    }
                    r = cur.minus(first);
                }
                None => return false,
            }
        }
    }
    let _ = g;
    targets.iter().all(|t| expressible(cands, t))
}

/// No other multiset of the same number of positive roots generates every
/// D_i as a non-negative integral combination.
pub fn is_integrally_minimal(col: &RootCollection) -> Result<bool> {
    let g = col.graph();
    let m = col.len();
    // candidate roots: everything below some D_i, plus the vertex roots
    // (needed only as padding for unused slots)
    let mut top = Cycle::zero(g);
    for d in col.roots() {
        for v in g.vertices() {
            top.set(v, top.coeff(v).max(d.coeff(v)));
        }
    }
    let mut pool: Vec<Cycle> = roots_in_box(g, &top)?
        .into_iter()
        .filter(|r| col.roots().iter().any(|d| r.dominated_by(d)))
        .collect();
    for v in g.vertices() {
        let e = Cycle::unit(g, v);
        if !pool.contains(&e) {
            pool.push(e);
        }
    }
    pool.sort();

    let mut own: Vec<Cycle> = col.roots().to_vec();
    own.sort();

    // multisets of size m over the pool, as non-decreasing index sequences
    fn search(
        g: &WeightedDualGraph,
        pool: &[Cycle],
        targets: &[Cycle],
        own: &[Cycle],
        picked: &mut Vec<usize>,
        m: usize,
    ) -> bool {
        if picked.len() == m {
            let cand: Vec<Cycle> = picked.iter().map(|&i| pool[i].clone()).collect();
            let mut sorted = cand.clone();
            sorted.sort();
            return sorted != own && generates(g, &cand, targets);
        }
        let lo = picked.last().copied().unwrap_or(0);
        for i in lo..pool.len() {
            picked.push(i);
            if search(g, pool, targets, own, picked, m) {
                return true;
            }
            picked.pop();
        }
        false
    }
    let mut picked = Vec::new();
    Ok(!search(g, &pool, col.roots(), &own, &mut picked, m))
}

/// The graph of a collection: one vertex per root, self-intersections as
/// weights, pairwise intersections as edge multiplicities.
pub fn collection_graph(col: &RootCollection) -> Result<WeightedDualGraph> {
    let g = col.graph();
    let mut out = WeightedDualGraph::new();
    for (i, d) in col.roots().iter().enumerate() {
        let w = dot(g, d, d)?;
        if w > -1 {
            return Err(Error::InvalidCollection(format!(
                "root {} has self-intersection {w}",
                i + 1
            )));
        }
        out.add_vertex(&format!("D{}", i + 1), w)
            .map_err(|_| Error::InvalidCollection("bad self-intersection".into()))?;
    }
    for i in 0..col.len() {
        for j in i + 1..col.len() {
            let m = dot(g, &col.roots()[i], &col.roots()[j])?;
            if m > 0 {
                out.add_edge(i, j, m)?;
            }
        }
    }
    if !out.is_negative_definite() {
        return Err(Error::InvalidCollection(
            "collection graph is not negative definite".into(),
        ));
    }
    Ok(out)
}

/// The explicit five-root collection deforming a confining graph into a
/// star: D_0 meets each of D_1..D_4 once and those are pairwise disjoint.
pub fn star_deformation(g: &WeightedDualGraph) -> Result<RootCollection> {
    let w: Table2Witness = table2_witness(g, true).ok_or(Error::NoTable2Witness)?;
    let e0 = w.center;
    let e = |i: usize, j: usize| w.arms[i - 1][j - 1]; // E_{i,j}, 1-based
    let cyc = |verts: &[(usize, i64)]| {
        let mut c = Cycle::zero(g);
        for &(v, k) in verts {
            c.set(v, c.coeff(v) + k);
        }
        c
    };
    let b = |i: usize, j: usize| -g.weight(e(i, j));
    let roots: Vec<Cycle>;
    let expected_squares: Vec<i64>;
    match w.kind {
        TildeKind::E6 => {
            roots = vec![
                cyc(&[(e0, 1), (e(1, 1), 1), (e(2, 1), 1), (e(3, 1), 1)]),
                cyc(&[(e(1, 2), 1)]),
                cyc(&[(e(2, 2), 1)]),
                cyc(&[(e(3, 2), 1)]),
                cyc(&[(e0, 1)]),
            ];
            expected_squares = vec![
                -(b(1, 1) + b(2, 1) + b(3, 1) - 4),
                -b(1, 2),
                -b(2, 2),
                -b(3, 2),
                -2,
            ];
        }
        TildeKind::E7 => {
            roots = vec![
                cyc(&[
                    (e(1, 1), 1),
                    (e(2, 2), 1),
                    (e(2, 1), 1),
                    (e0, 1),
                    (e(3, 1), 1),
                    (e(3, 2), 1),
                ]),
                cyc(&[(e0, 1), (e(2, 1), 1)]),
                cyc(&[(e0, 1), (e(3, 1), 1)]),
                cyc(&[(e(2, 3), 1)]),
                cyc(&[(e(3, 3), 1)]),
            ];
            expected_squares = vec![
                -(b(1, 1) + b(2, 2) + b(3, 2) - 4),
                -2,
                -2,
                -b(2, 3),
                -b(3, 3),
            ];
        }
        TildeKind::E8 => {
            roots = vec![
                cyc(&[
                    (e(2, 2), 1),
                    (e(2, 1), 1),
                    (e0, 1),
                    (e(3, 1), 1),
                    (e(3, 2), 1),
                    (e(3, 3), 1),
                    (e(3, 4), 1),
                ]),
                cyc(&[(e(1, 1), 1), (e0, 1), (e(2, 1), 1)]),
                cyc(&[(e(1, 1), 1), (e0, 1), (e(3, 1), 1), (e(3, 2), 1), (e(3, 3), 1)]),
                cyc(&[(e(1, 1), 1), (e(2, 1), 1), (e0, 2), (e(3, 1), 2), (e(3, 2), 1)]),
                cyc(&[(e(3, 5), 1)]),
            ];
            expected_squares = vec![-(b(2, 2) + b(3, 4) - 2), -2, -2, -2, -b(3, 5)];
        }
    }
    for (i, d) in roots.iter().enumerate() {
        if arithmetic_genus(g, d)? != 0 {
            return Err(Error::InvalidCollection(format!("D{i} is not a root")));
        }
        if dot(g, d, d)? != expected_squares[i] {
            return Err(Error::InvalidCollection(format!(
                "D{i} has unexpected self-intersection"
            )));
        }
    }
    for i in 1..5 {
        if dot(g, &roots[0], &roots[i])? != 1 {
            return Err(Error::InvalidCollection(format!("D0.D{i} != 1")));
        }
        for j in i + 1..5 {
            if dot(g, &roots[i], &roots[j])? != 0 {
                return Err(Error::InvalidCollection(format!("D{i}.D{j} != 0")));
            }
        }
    }
    RootCollection::new(g.clone(), roots)
}

/// One adjacency: a connected graph the singularity deforms to, with a
/// witnessing collection (None for the smooth adjacency).
#[derive(Debug, Clone)]
pub struct Adjacency {
    pub graph: WeightedDualGraph,
    pub witness: Option<RootCollection>,
}

/// Components of the collection's incidence graph; each must sum to a
/// positive root.
fn incidence_components(g: &WeightedDualGraph, roots: &[Cycle]) -> Vec<Vec<usize>> {
    let n = roots.len();
    let mut comp = (0..n).collect::<Vec<usize>>();
    fn find(comp: &mut Vec<usize>, i: usize) -> usize {
        if comp[i] != i {
            let r = find(comp, comp[i]);
            comp[i] = r;
        }
        comp[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if dot(g, &roots[i], &roots[j]).unwrap() > 0 {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut comp, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

/// All adjacency graphs arising from integrally minimal collections with at
/// most `max_m` roots summing below Z. Components of disconnected collection
/// graphs are reported separately; the empty (smooth) adjacency is included.
pub fn enumerate_adjacencies(
    g: &WeightedDualGraph,
    max_m: Option<usize>,
) -> Result<Vec<Adjacency>> {
    let (z, _) = fundamental_cycle(g)?;
    let roots = positive_roots(g)?;
    let m_max = max_m.unwrap_or(g.len());

    // multisets as non-decreasing index sequences with partial-sum pruning
    fn extend(
        g: &WeightedDualGraph,
        roots: &[Cycle],
        z: &Cycle,
        picked: &mut Vec<usize>,
        sum: &Cycle,
        m_max: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !picked.is_empty() {
            out.push(picked.clone());
        }
        if picked.len() == m_max {
            return;
        }
        let lo = picked.last().copied().unwrap_or(0);
        for i in lo..roots.len() {
            let s = sum.plus(&roots[i]);
            if !s.dominated_by(z) {
                continue;
            }
            // pairwise intersections with the new root must be >= 0
            if picked.iter().any(|&j| dot(g, &roots[j], &roots[i]).unwrap() < 0) {
                continue;
            }
            picked.push(i);
            extend(g, roots, z, picked, &s, m_max, out);
            picked.pop();
        }
    }
    let mut index_sets = Vec::new();
    extend(g, &roots, &z, &mut Vec::new(), &Cycle::zero(g), m_max, &mut index_sets);

    let checked: Vec<(WeightedDualGraph, RootCollection)> =
        maybe_parallel_filter_map(index_sets, |idx| {
            let cyc: Vec<Cycle> = idx.iter().map(|&i| roots[i].clone()).collect();
            // each incidence component must sum to a positive root
            for comp in incidence_components(g, &cyc) {
                let s = comp
                    .iter()
                    .fold(Cycle::zero(g), |a, &i| a.plus(&cyc[i]));
                if arithmetic_genus(g, &s).unwrap() != 0 {
                    return None;
                }
            }
            let col = RootCollection::new(g.clone(), cyc).ok()?;
            if !is_integrally_minimal(&col).unwrap() {
                return None;
            }
            let cg = collection_graph(&col).ok()?;
            Some((cg, col))
        });

    let mut seen = HashSet::new();
    let mut out = vec![Adjacency {
        graph: WeightedDualGraph::new(),
        witness: None,
    }];
    seen.insert(canonical_form(&WeightedDualGraph::new())?);
    let mut keyed: Vec<(String, Adjacency)> = Vec::new();
    for (cg, col) in checked {
        for comp in cg.components() {
            let sub = cg.subgraph(&comp);
            let key = canonical_form(&sub)?;
            if seen.insert(key.clone()) {
                keyed.push((
                    key.as_str().to_string(),
                    Adjacency {
                        graph: sub,
                        witness: Some(col.clone()),
                    },
                ));
            }
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    out.extend(keyed.into_iter().map(|(_, a)| a));
    Ok(out)
}

/// Roots of a deepened graph against its base: with S the set of deepened
/// vertices, the coefficient-preserving map is a bijection from the roots of
/// the deep graph onto the base roots with coefficient <= 1 on S. Returns
/// the paired roots.
pub fn lift_roots(
    deep: &WeightedDualGraph,
    base: &WeightedDualGraph,
) -> Result<Vec<(Cycle, Cycle)>> {
    if deep.len() != base.len() {
        return Err(Error::MismatchedGraph);
    }
    for v in deep.vertices() {
        if deep.id(v) != base.id(v) || deep.weight(v) > base.weight(v) {
            return Err(Error::MismatchedGraph);
        }
        for u in 0..v {
            if deep.pairing(u, v) != base.pairing(u, v) {
                return Err(Error::MismatchedGraph);
            }
        }
    }
    let s: Vec<usize> = deep
        .vertices()
        .filter(|&v| deep.weight(v) < base.weight(v))
        .collect();
    let deep_roots = positive_roots(deep)?;
    let base_roots: Vec<Cycle> = positive_roots(base)?
        .into_iter()
        .filter(|r| s.iter().all(|&v| r.coeff(v) <= 1))
        .collect();
    if deep_roots != base_roots {
        return Err(Error::BadParameter(
            "root lifting is not a bijection for these graphs".into(),
        ));
    }
    Ok(deep_roots.into_iter().zip(base_roots).collect())
}
