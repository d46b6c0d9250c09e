//! Sandwiched singularities: augmented graphs with arrows, proximity
//! blow-down certificates, decorated curve germs as clusters of infinitely
//! near points, the graph <-> curve constructions in both directions, the
//! fixed decorated-curve recipes, and combinatorial delta-constant
//! deformation candidates.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::classify::sandwich_obstruction;
use crate::cycles::{fundamental_cycle, is_rational, multiplicity};
use crate::error::{Error, Result};
use crate::graph::{dot, Cycle, WeightedDualGraph};

/// A configuration of infinitely near points, listed in blow-up order.
/// `prox[p]` is the set of earlier points q such that point p lies on the
/// exceptional curve of q (or its strict transform).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cluster {
    prox: Vec<BTreeSet<usize>>,
}

impl Cluster {
    pub fn new() -> Self {
        Cluster { prox: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.prox.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prox.is_empty()
    }

    /// Append a point proximate to the given earlier points.
    pub fn add_point(&mut self, prox: &[usize]) -> Result<usize> {
        let idx = self.prox.len();
        if prox.iter().any(|&q| q >= idx) {
            return Err(Error::Parse(
                "point proximate to a later point".into(),
            ));
        }
        self.prox.push(prox.iter().copied().collect());
        Ok(idx)
    }

    pub fn prox(&self, p: usize) -> &BTreeSet<usize> {
        &self.prox[p]
    }

    /// The immediate predecessor: the latest point p is proximate to.
    pub fn parent(&self, p: usize) -> Option<usize> {
        self.prox[p].iter().next_back().copied()
    }

    /// Points proximate to p.
    pub fn satellites_of(&self, p: usize) -> Vec<usize> {
        (0..self.len()).filter(|&q| self.prox[q].contains(&p)).collect()
    }

    /// Multiplicity vector of a curvetta at p: a smooth branch transverse to
    /// the exceptional curve of p passes through p and, recursively, through
    /// everything p is proximate to.
    pub fn curvetta_row(&self, p: usize) -> Vec<u64> {
        let mut row = vec![0u64; self.len()];
        // rows only reference earlier points, so one forward pass suffices
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(p + 1);
        for i in 0..=p {
            let mut r = vec![0u64; self.len()];
            r[i] = 1;
            for &q in &self.prox[i] {
                let qr: Vec<u64> = rows[q].clone();
                for (a, b) in r.iter_mut().zip(qr) {
                    *a += b;
                }
            }
            rows.push(r);
        }
        row.copy_from_slice(&rows[p]);
        row
    }

    /// Self-intersection of the exceptional curve of p in the full blow-up.
    pub fn dual_weight(&self, p: usize) -> i64 {
        -1 - self.satellites_of(p).len() as i64
    }

    /// Intersection of the exceptional curves of p and q in the full blow-up.
    pub fn dual_pairing(&self, p: usize, q: usize) -> i64 {
        if p == q {
            return self.dual_weight(p);
        }
        let (a, b) = if p < q { (p, q) } else { (q, p) };
        let direct = i64::from(self.prox[b].contains(&a));
        let common = (0..self.len())
            .filter(|&r| self.prox[r].contains(&a) && self.prox[r].contains(&b))
            .count() as i64;
        direct - common
    }

    /// The full exceptional dual graph of the cluster, one vertex per point.
    pub fn dual_graph(&self) -> WeightedDualGraph {
        let mut g = WeightedDualGraph::new();
        for p in 0..self.len() {
            g.add_vertex(&format!("p{}", p + 1), self.dual_weight(p))
                .expect("cluster weights are <= -1");
        }
        for p in 0..self.len() {
            for q in p + 1..self.len() {
                let m = self.dual_pairing(p, q);
                assert!(m >= 0, "invalid cluster: negative pairing");
                if m > 0 {
                    g.add_edge(p, q, m).unwrap();
                }
            }
        }
        g
    }
}

/// A branch of a decorated curve: a curvetta at a cluster point, carrying a
/// decoration l at least the branch's total multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedBranch {
    pub attach: usize,
    pub l: u64,
}

/// A plane curve germ given by a cluster and curvetta branches, each with a
/// decoration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedCurve {
    pub cluster: Cluster,
    pub branches: Vec<DecoratedBranch>,
}

impl DecoratedCurve {
    /// Multiplicities of branch i at every cluster point.
    pub fn mult_vector(&self, i: usize) -> Vec<u64> {
        self.cluster.curvetta_row(self.branches[i].attach)
    }

    /// Intersection number of two distinct branches (Noether).
    pub fn contact(&self, i: usize, j: usize) -> u64 {
        assert_ne!(i, j);
        self.mult_vector(i)
            .iter()
            .zip(self.mult_vector(j))
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Total multiplicity of the curve at each point.
    pub fn total_mults(&self) -> Vec<u64> {
        let mut t = vec![0u64; self.cluster.len()];
        for i in 0..self.branches.len() {
            for (a, b) in t.iter_mut().zip(self.mult_vector(i)) {
                *a += b;
            }
        }
        t
    }

    /// Points of the minimal embedded resolution of the underlying curve:
    /// iteratively drop maximal free points of total multiplicity <= 1.
    pub fn minimal_mask(&self) -> Vec<bool> {
        let n = self.cluster.len();
        let totals = self.total_mults();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for p in (0..n).rev() {
                if !alive[p] {
                    continue;
                }
                let maximal = !(0..n).any(|q| alive[q] && self.cluster.prox(q).contains(&p));
                if maximal && self.cluster.prox(p).len() <= 1 && totals[p] <= 1 {
                    alive[p] = false;
                    changed = true;
                }
            }
            if !changed {
                return alive;
            }
        }
    }

    /// Total multiplicity of branch i in the minimal embedded resolution.
    pub fn m(&self, i: usize) -> u64 {
        let alive = self.minimal_mask();
        self.mult_vector(i)
            .iter()
            .enumerate()
            .filter(|&(p, _)| alive[p])
            .map(|(_, &v)| v)
            .sum()
    }

    /// Delta invariant of the underlying curve.
    pub fn delta(&self) -> u64 {
        self.total_mults().iter().map(|&m| m * (m - 1).max(0) / 2).sum()
    }

    /// Drop points outside the minimal embedded resolution, keeping the
    /// branches attached at their deepest remaining point. Decorations are
    /// unchanged.
    pub fn minimize(&self) -> DecoratedCurve {
        let alive = self.minimal_mask();
        let mut remap = vec![usize::MAX; self.cluster.len()];
        let mut cluster = Cluster::new();
        for p in 0..self.cluster.len() {
            if alive[p] {
                let prox: Vec<usize> =
                    self.cluster.prox(p).iter().map(|&q| remap[q]).collect();
                remap[p] = cluster.add_point(&prox).unwrap();
            }
        }
        let branches = (0..self.branches.len())
            .map(|i| {
                let row = self.mult_vector(i);
                let attach = (0..self.cluster.len())
                    .rev()
                    .find(|&p| alive[p] && row[p] > 0)
                    .map(|p| remap[p]);
                DecoratedBranch {
                    // a fully trimmed smooth branch keeps a single free point
                    attach: attach.unwrap_or(usize::MAX),
                    l: self.branches[i].l,
                }
            })
            .collect();
        DecoratedCurve { cluster, branches }
    }
}

/// The singularities of X(C,l): build the embedded resolution cluster of
/// (C,l) (minimal embedded resolution of C plus l(i) - m(i) free blow-ups on
/// each branch), then return the components of the exceptional locus not
/// meeting any strict transform.
pub fn graph_of(c: &DecoratedCurve) -> Result<Vec<WeightedDualGraph>> {
    let alive = c.minimal_mask();
    // rebuild the minimal cluster
    let mut remap = vec![usize::MAX; c.cluster.len()];
    let mut cluster = Cluster::new();
    for p in 0..c.cluster.len() {
        if alive[p] {
            let prox: Vec<usize> = c.cluster.prox(p).iter().map(|&q| remap[q]).collect();
            remap[p] = cluster.add_point(&prox).unwrap();
        }
    }
    // re-attach branches and append their free tails
    let mut attaches = Vec::new();
    for i in 0..c.branches.len() {
        let row = c.mult_vector(i);
        let m: u64 = row
            .iter()
            .enumerate()
            .filter(|&(p, _)| alive[p])
            .map(|(_, &v)| v)
            .sum();
        let l = c.branches[i].l;
        if l < m {
            return Err(Error::DecorationTooSmall { l, m });
        }
        let mut tip = (0..c.cluster.len())
            .rev()
            .find(|&p| alive[p] && row[p] > 0)
            .map(|p| remap[p]);
        for _ in 0..(l - m) {
            let prox: Vec<usize> = tip.into_iter().collect();
            tip = Some(cluster.add_point(&prox).unwrap());
        }
        attaches.push(tip);
    }
    let full = cluster.dual_graph();
    // strict transform of branch i meets the curve of p iff its multiplicity
    // there exceeds the multiplicities at the points proximate to p
    let mut meets = vec![false; cluster.len()];
    for (i, attach) in attaches.iter().enumerate() {
        let Some(a) = attach else {
            // smooth branch with l = m = 0: nothing blown up on it
            assert_eq!(c.branches[i].l, 0);
            continue;
        };
        let row = cluster.curvetta_row(*a);
        for p in 0..cluster.len() {
            let below: u64 = cluster.satellites_of(p).iter().map(|&q| row[q]).sum();
            if row[p] > below {
                meets[p] = true;
            }
        }
    }
    let free: Vec<usize> = (0..cluster.len()).filter(|&p| !meets[p]).collect();
    let sub = full.subgraph(&free);
    Ok(sub
        .components()
        .into_iter()
        .map(|comp| sub.subgraph(&comp))
        .collect())
}

// ---------------------------------------------------------------------------
// augmented graphs and proximity factorization

/// A weighted graph together with (-1)-vertices carrying arrows (strict
/// transforms of branches).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedGraph {
    /// Full graph: the base plus one valency-1 vertex of weight -1 per arrow.
    pub graph: WeightedDualGraph,
    /// Indices of the arrow vertices.
    pub arrows: Vec<usize>,
}

/// Attach -Z.E_v arrows at every vertex, one less at the chosen end (default
/// the lexicographically least end vertex). Requires a reduced fundamental
/// cycle.
pub fn attach_arrows(g: &WeightedDualGraph, e0: Option<usize>) -> Result<AugmentedGraph> {
    if !is_rational(g)? {
        return Err(Error::NotRational);
    }
    let (z, _) = fundamental_cycle(g)?;
    if !z.is_reduced() {
        return Err(Error::NonReducedCycle);
    }
    let e0 = match e0 {
        Some(v) if v < g.len() => v,
        Some(_) => return Err(Error::NoSuchVertex("arrow base".into())),
        None => {
            let mut ends = g.ends();
            ends.sort_by(|&a, &b| g.id(a).cmp(g.id(b)));
            *ends.first().ok_or_else(|| Error::BadParameter("graph has no end vertex".into()))?
        }
    };
    let mut counts: Vec<i64> = g
        .vertices()
        .map(|v| -dot(g, &z, &Cycle::unit(g, v)).unwrap())
        .collect();
    if counts[e0] < 1 {
        return Err(Error::BadParameter(
            "chosen end vertex has Z.E = 0; pick another end".into(),
        ));
    }
    counts[e0] -= 1;
    let mut full = g.clone();
    let mut arrows = Vec::new();
    let mut next = 1;
    for v in g.lex_order() {
        for _ in 0..counts[v] {
            let a = full.add_vertex(&format!("a{next}"), -1).unwrap();
            full.add_edge(v, a, 1).unwrap();
            arrows.push(a);
            next += 1;
        }
    }
    Ok(AugmentedGraph { graph: full, arrows })
}

/// A blow-down certificate: the cluster recovered by contracting the
/// augmented configuration point by point, with the vertex ids in blow-up
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityMatrix {
    pub ids: Vec<String>,
    pub cluster: Cluster,
}

impl ProximityMatrix {
    pub fn point_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }
}

/// Contract (-1)-vertices (least id first, only when all incident edges are
/// simple) until the graph is empty, recording each vertex's neighbors at
/// contraction time as its proximity set. Succeeds exactly when the
/// configuration is the exceptional set of a composition of point blow-ups
/// of a smooth germ.
pub fn proximity_factorize(aug: &AugmentedGraph) -> Result<ProximityMatrix> {
    let mut g = aug.graph.clone();
    let mut order: Vec<String> = Vec::new(); // contraction order
    let mut prox_ids: Vec<Vec<String>> = Vec::new();
    while !g.is_empty() {
        let cand = g
            .lex_order()
            .into_iter()
            .find(|&v| {
                g.weight(v) == -1
                    && g.neighbors(v).iter().all(|&u| g.pairing(v, u) == 1)
            })
            .ok_or(Error::NotBlowdownable(g.len()))?;
        order.push(g.id(cand).to_string());
        prox_ids.push(g.neighbors(cand).iter().map(|&u| g.id(u).to_string()).collect());
        g = g.contract(cand)?;
    }
    order.reverse();
    prox_ids.reverse();
    let mut cluster = Cluster::new();
    for ids in &prox_ids {
        let prox: Vec<usize> = ids
            .iter()
            .map(|id| order.iter().position(|x| x == id).unwrap())
            .collect();
        cluster.add_point(&prox)?;
    }
    let pm = ProximityMatrix { ids: order, cluster };
    // certificate check: the cluster's intersection form reproduces the
    // augmented configuration
    for p in 0..pm.ids.len() {
        let vp = aug.graph.index_of(&pm.ids[p]).unwrap();
        assert_eq!(pm.cluster.dual_weight(p), aug.graph.weight(vp));
        for q in p + 1..pm.ids.len() {
            let vq = aug.graph.index_of(&pm.ids[q]).unwrap();
            assert_eq!(pm.cluster.dual_pairing(p, q), aug.graph.pairing(vp, vq));
        }
    }
    Ok(pm)
}

/// Read off the decorated curve: each arrow is a branch, a curvetta at the
/// arrow's own point, decorated by the total multiplicity of that curvetta.
/// The result is trimmed to the minimal embedded resolution of the curve.
pub fn decorated_curve_of(aug: &AugmentedGraph, pm: &ProximityMatrix) -> Result<DecoratedCurve> {
    let mut branches = Vec::new();
    for &a in &aug.arrows {
        let id = aug.graph.id(a);
        let p = pm
            .point_of(id)
            .ok_or_else(|| Error::NoSuchVertex(id.to_string()))?;
        let l: u64 = pm.cluster.curvetta_row(p).iter().sum();
        branches.push(DecoratedBranch { attach: p, l });
    }
    let curve = DecoratedCurve { cluster: pm.cluster.clone(), branches };
    let min = curve.minimize();
    // the decoration bound l(i) >= m(i) holds by construction
    for i in 0..min.branches.len() {
        debug_assert!(min.branches[i].l >= min.m(i));
    }
    Ok(min)
}

/// Decide sandwichedness: obstructions first, then the canonical arrow
/// recipe for reduced fundamental cycles, then a bounded search over arrow
/// attachments filtered by unimodularity of the augmented form.
pub fn is_sandwiched(g: &WeightedDualGraph, arrow_budget: Option<i64>) -> Result<bool> {
    if sandwich_obstruction(g)? {
        return Ok(false);
    }
    let (z, _) = fundamental_cycle(g)?;
    if z.is_reduced() {
        let aug = attach_arrows(g, None)?;
        if proximity_factorize(&aug).is_ok() {
            return Ok(true);
        }
    }
    let budget = arrow_budget.unwrap_or_else(|| multiplicity(g).unwrap_or(3));
    let n = g.len();
    let mut counts = vec![0i64; n];
    loop {
        // skip the empty augmentation; otherwise try this arrow distribution
        if counts.iter().any(|&c| c > 0) {
            let mut full = g.clone();
            let mut arrows = Vec::new();
            let mut next = 1;
            for v in 0..n {
                for _ in 0..counts[v] {
                    let a = full.add_vertex(&format!("a{next}"), -1).unwrap();
                    full.add_edge(v, a, 1).unwrap();
                    arrows.push(a);
                    next += 1;
                }
            }
            use num_traits::One;
            let d = full.det();
            if d.magnitude().is_one() {
                let aug = AugmentedGraph { graph: full, arrows };
                if proximity_factorize(&aug).is_ok() {
                    return Ok(true);
                }
            }
        }
        // odometer over 0..=budget per vertex
        let mut i = 0;
        while i < n {
            counts[i] += 1;
            if counts[i] <= budget {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        if i == n {
            return Err(Error::BudgetExhausted);
        }
    }
}

// ---------------------------------------------------------------------------
// standard germs

/// A single smooth branch through one free point, decorated by l.
pub fn smooth_germ(l: u64) -> DecoratedCurve {
    let mut cluster = Cluster::new();
    cluster.add_point(&[]).unwrap();
    DecoratedCurve { cluster, branches: vec![DecoratedBranch { attach: 0, l }] }
}

/// The A_{2k} germ y^2 = x^{2k+1} (k >= 1) with decoration l on its one
/// branch: k double points in a chain, then two simple points, the last one
/// a satellite.
pub fn a_even_germ(k: u64, l: u64) -> Result<DecoratedCurve> {
    if k == 0 {
        return Err(Error::BadParameter("A_0 is smooth; use smooth_germ".into()));
    }
    let k = k as usize;
    let mut cluster = Cluster::new();
    cluster.add_point(&[]).unwrap();
    for i in 1..k {
        cluster.add_point(&[i - 1]).unwrap();
    }
    cluster.add_point(&[k - 1]).unwrap(); // p_{k+1}
    cluster.add_point(&[k - 1, k]).unwrap(); // p_{k+2}, satellite
    Ok(DecoratedCurve {
        cluster,
        branches: vec![DecoratedBranch { attach: k + 1, l }],
    })
}

/// n smooth branches with prescribed pairwise contacts (an ultrametric-like
/// matrix: in every triple the two smallest contacts agree) and decorations.
pub fn smooth_bunch(contacts: &[Vec<u64>], ls: &[u64]) -> Result<DecoratedCurve> {
    let n = ls.len();
    if contacts.len() != n || contacts.iter().any(|r| r.len() != n) {
        return Err(Error::BadParameter("contact matrix shape mismatch".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if contacts[i][j] != contacts[j][i] || (i != j && contacts[i][j] == 0) {
                return Err(Error::BadParameter("invalid contact matrix".into()));
            }
            for r in 0..n {
                if i != j && i != r && j != r {
                    let (a, b, c) = (contacts[i][j], contacts[i][r], contacts[j][r]);
                    if a < b.min(c) {
                        return Err(Error::BadParameter(
                            "contacts violate the ultrametric triple condition".into(),
                        ));
                    }
                }
            }
        }
    }
    let mut cluster = Cluster::new();
    let mut attach = vec![usize::MAX; n];
    // recursively share a chain of points to the group's minimal contact,
    // then split into the finer contact classes
    fn build(
        cluster: &mut Cluster,
        contacts: &[Vec<u64>],
        attach: &mut [usize],
        group: &[usize],
        parent: Option<usize>,
        depth: u64,
    ) {
        if group.len() == 1 {
            // a lone branch needs at least one point of its own
            let tip = match parent {
                Some(p) => p,
                None => cluster.add_point(&[]).unwrap(),
            };
            attach[group[0]] = tip;
            return;
        }
        let shared = group
            .iter()
            .flat_map(|&i| group.iter().filter(move |&&j| j > i).map(move |&j| contacts[i][j]))
            .min()
            .unwrap();
        let mut tip = parent;
        for _ in depth..shared {
            let prox: Vec<usize> = tip.into_iter().collect();
            tip = Some(cluster.add_point(&prox).unwrap());
        }
        // classes of the relation contact > shared
        let mut rest: Vec<usize> = group.to_vec();
        while let Some(&seed) = rest.first() {
            let class: Vec<usize> = group
                .iter()
                .copied()
                .filter(|&j| j == seed || contacts[seed][j] > shared)
                .collect();
            rest.retain(|j| !class.contains(j));
            if class.len() == group.len() {
                // all contacts equal: everyone attaches at the shared chain
                for &i in &class {
                    attach[i] = tip.unwrap();
                }
                return;
            }
            if class.len() == 1 {
                attach[class[0]] = tip.unwrap();
            } else {
                build(cluster, contacts, attach, &class, tip, shared);
            }
        }
    }
    let group: Vec<usize> = (0..n).collect();
    build(&mut cluster, contacts, &mut attach, &group, None, 0);
    let branches = (0..n)
        .map(|i| DecoratedBranch { attach: attach[i], l: ls[i] })
        .collect();
    Ok(DecoratedCurve { cluster, branches })
}

/// Coarse type of a single branch, read off its multiplicity sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BranchKind {
    Smooth,
    /// A_{2k}: multiplicity sequence 2,...,2 (k times), 1, 1.
    AEven(u64),
    Other,
}

pub fn branch_kinds(c: &DecoratedCurve) -> Vec<BranchKind> {
    (0..c.branches.len())
        .map(|i| {
            let single = DecoratedCurve {
                cluster: c.cluster.clone(),
                branches: vec![c.branches[i].clone()],
            };
            let single = single.minimize();
            let mults: Vec<u64> = if single.cluster.is_empty() {
                Vec::new()
            } else {
                single.mult_vector(0).into_iter().filter(|&m| m > 0).collect()
            };
            if mults.iter().all(|&m| m <= 1) {
                BranchKind::Smooth
            } else {
                let twos = mults.iter().filter(|&&m| m == 2).count();
                let ones = mults.iter().filter(|&&m| m == 1).count();
                if twos >= 1 && ones == 2 && twos + ones == mults.len() {
                    BranchKind::AEven(twos as u64)
                } else {
                    BranchKind::Other
                }
            }
        })
        .collect()
}

/// Label a germ by its singularity type: "A<n>" for A-type germs (a smooth
/// germ is "A0"), "other" for anything else.
pub fn germ_label(c: &DecoratedCurve) -> String {
    let kinds = branch_kinds(c);
    match kinds.as_slice() {
        [BranchKind::Smooth] => "A0".into(),
        [BranchKind::AEven(k)] => format!("A{}", 2 * k),
        [BranchKind::Smooth, BranchKind::Smooth] => format!("A{}", 2 * c.contact(0, 1) - 1),
        _ => "other".into(),
    }
}

// ---------------------------------------------------------------------------
// recipes

/// Extra branches for the chain-with-fork recipe built on (A_{2k}, 2k+4+s).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Iii3Branch {
    /// Smooth branch through the first m double points; contact 2m, l = m+1.
    Left(u64),
    /// Smooth branch through the first simple point; contact 2k+1, l = k+2.
    Short,
    /// A second A_{2k}-type branch following the core branch n points past
    /// the satellite; contact 4k+2+n, l = 2k+3+n.
    Right(u64),
}

/// Decorated curve whose graph is a chain with a fork: core branch
/// (A_{2k}, 2k+4+s) plus the requested extra branches.
pub fn recipe_iii3(k: u64, s: u64, extra: &[Iii3Branch]) -> Result<DecoratedCurve> {
    if k == 0 {
        return Err(Error::BadParameter("recipe needs k >= 1".into()));
    }
    let ku = k as usize;
    let mut curve = a_even_germ(k, 2 * k + 4 + s)?;
    // materialize the core branch's free tail so extra branches can follow it
    let mut tip = ku + 1; // the satellite point
    for _ in 0..s + 2 {
        tip = curve.cluster.add_point(&[tip]).unwrap();
    }
    curve.branches[0].attach = tip;
    for &e in extra {
        let (base, l) = match e {
            Iii3Branch::Left(m) => {
                if m == 0 || m > k {
                    return Err(Error::BadParameter("left branch needs 1 <= m <= k".into()));
                }
                (m as usize - 1, m + 1)
            }
            Iii3Branch::Short => (ku, k + 2),
            Iii3Branch::Right(n) => {
                if n > s + 1 {
                    return Err(Error::BadParameter("right branch needs n <= s+1".into()));
                }
                (ku + 1 + n as usize, 2 * k + 3 + n)
            }
        };
        let p = curve.cluster.add_point(&[base])?;
        curve.branches.push(DecoratedBranch { attach: p, l });
    }
    Ok(curve)
}

/// The three core branch types for the star recipes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Iii4Variant {
    /// (E6 germ x^3 = y^4, decorated k+7).
    E6,
    /// (E8 germ x^3 = y^5, decorated k+8).
    E8,
    /// (x^3 = y^{3k-1}, decorated 3k+4), requires k > 2.
    HighContact,
}

/// Extra branches for the star recipes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Iii4Branch {
    /// Smooth branch through the triple point only; l = 2.
    SmoothAt1,
    /// Smooth branch through the first two points (E6 variant); l = 3.
    SmoothAt2,
    /// A second core-type branch following the core t points past its
    /// singular part; E6: contact 12+t, l = t+7; E8: contact 15+t, l = t+8.
    Right(u64),
}

pub fn recipe_iii4(variant: Iii4Variant, k: u64, extra: &[Iii4Branch]) -> Result<DecoratedCurve> {
    let mut cluster = Cluster::new();
    let (core_attach, core_l, tail_len) = match variant {
        Iii4Variant::E6 => {
            cluster.add_point(&[]).unwrap();
            cluster.add_point(&[0]).unwrap();
            cluster.add_point(&[0, 1]).unwrap();
            cluster.add_point(&[0, 2]).unwrap();
            (3usize, k + 7, k + 1)
        }
        Iii4Variant::E8 => {
            cluster.add_point(&[]).unwrap();
            cluster.add_point(&[0]).unwrap();
            cluster.add_point(&[0, 1]).unwrap();
            cluster.add_point(&[1, 2]).unwrap();
            (3usize, k + 8, k + 1)
        }
        Iii4Variant::HighContact => {
            if k <= 2 {
                return Err(Error::BadParameter("high-contact variant needs k > 2".into()));
            }
            let ku = k as usize;
            cluster.add_point(&[]).unwrap();
            for i in 1..ku {
                cluster.add_point(&[i - 1]).unwrap();
            }
            cluster.add_point(&[ku - 2, ku - 1]).unwrap();
            cluster.add_point(&[ku - 1, ku]).unwrap();
            (ku + 1, 3 * k + 4, 3)
        }
    };
    let mut tip = core_attach;
    for _ in 0..tail_len {
        tip = cluster.add_point(&[tip]).unwrap();
    }
    let mut curve = DecoratedCurve {
        cluster,
        branches: vec![DecoratedBranch { attach: tip, l: core_l }],
    };
    for &e in extra {
        let (base, l) = match (variant, e) {
            (_, Iii4Branch::SmoothAt1) => (0usize, 2),
            (Iii4Variant::E6, Iii4Branch::SmoothAt2) => (1usize, 3),
            (_, Iii4Branch::SmoothAt2) => {
                return Err(Error::BadParameter(
                    "second-point branch only applies to the E6 variant".into(),
                ))
            }
            (Iii4Variant::E6, Iii4Branch::Right(t)) => {
                if t > k {
                    return Err(Error::BadParameter("right branch needs t <= k".into()));
                }
                (core_attach + t as usize, t + 7)
            }
            (Iii4Variant::E8, Iii4Branch::Right(t)) => {
                if t > k {
                    return Err(Error::BadParameter("right branch needs t <= k".into()));
                }
                (core_attach + t as usize, t + 8)
            }
            (Iii4Variant::HighContact, Iii4Branch::Right(_)) => {
                return Err(Error::BadParameter(
                    "high-contact variant takes no extra long branches".into(),
                ))
            }
        };
        let p = curve.cluster.add_point(&[base])?;
        curve.branches.push(DecoratedBranch { attach: p, l });
    }
    Ok(curve)
}

// ---------------------------------------------------------------------------
// delta-constant deformation candidates

fn partitions(n: u64) -> Vec<Vec<u64>> {
    fn go(n: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            cur.push(part);
            go(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn compositions(n: u64, k: usize) -> Vec<Vec<u64>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn germ_key(c: &DecoratedCurve) -> String {
    // canonical under branch renumbering: minimize over permutations
    let n = c.branches.len();
    // n is tiny, build all permutations recursively
    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    all_perms(n)
        .iter()
        .map(|perm| {
            let ls: Vec<String> = perm.iter().map(|&i| c.branches[i].l.to_string()).collect();
            let mut contacts = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    contacts.push(c.contact(perm[a], perm[b]).to_string());
                }
            }
            let kinds: Vec<String> = {
                let ks = branch_kinds(c);
                perm.iter().map(|&i| format!("{:?}", ks[i])).collect()
            };
            format!("[{}|{}|{}]", kinds.join(","), ls.join(","), contacts.join(","))
        })
        .min()
        .unwrap()
}

fn fiber_key(fiber: &[DecoratedCurve]) -> String {
    let mut keys: Vec<String> = fiber.iter().map(germ_key).collect();
    keys.sort();
    keys.join(";")
}

/// Partitions of `total` into at most `max_parts` decorated smooth points.
fn leftover_splits(total: u64, max_parts: usize) -> Vec<Vec<u64>> {
    partitions(total)
        .into_iter()
        .filter(|p| p.len() <= max_parts)
        .collect()
}

fn candidates_single_a(k: u64, l: u64, depth: usize) -> Result<Vec<Vec<DecoratedCurve>>> {
    let mut out: Vec<Vec<DecoratedCurve>> = Vec::new();
    for lp in (0..=k).rev() {
        for pairs in partitions(k - lp) {
            // germ skeleton: one A_{2lp} (if lp > 0), pairs of smooth
            // branches with contact m_i, plus decorated smooth points
            let base_germs = usize::from(lp > 0) + pairs.len();
            if base_germs > depth {
                continue;
            }
            let min_needed: u64 =
                if lp > 0 { 2 * lp + 2 } else { 0 } + pairs.iter().map(|&m| 2 * m).sum::<u64>();
            if min_needed > l {
                continue;
            }
            // distribute the decoration surplus over the germs and leftovers
            let buckets = base_germs; // surplus per germ; remainder -> leftovers
            for extra in compositions(l - min_needed, buckets + 1) {
                let leftover_budget = extra[buckets];
                for leftover in leftover_splits(leftover_budget, depth - base_germs) {
                    if leftover_budget > 0 && leftover.is_empty() {
                        continue;
                    }
                    let mut fibers: Vec<Vec<DecoratedCurve>> = vec![Vec::new()];
                    let mut idx = 0;
                    if lp > 0 {
                        let germ = a_even_germ(lp, 2 * lp + 2 + extra[idx])?;
                        idx += 1;
                        for f in &mut fibers {
                            f.push(germ.clone());
                        }
                    }
                    for &m in &pairs {
                        // split this germ's surplus between its two branches
                        let surplus = extra[idx];
                        idx += 1;
                        let mut next = Vec::new();
                        for a_extra in 0..=surplus {
                            let germ = smooth_bunch(
                                &[vec![0, m], vec![m, 0]],
                                &[m + a_extra, m + (surplus - a_extra)],
                            )?;
                            for f in &fibers {
                                let mut f = f.clone();
                                f.push(germ.clone());
                                next.push(f);
                            }
                        }
                        fibers = next;
                    }
                    for f in &mut fibers {
                        for &t in &leftover {
                            f.push(smooth_germ(t));
                        }
                    }
                    out.extend(fibers);
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    out.retain(|f| seen.insert(fiber_key(f)));
    Ok(out)
}

fn candidates_all_smooth(c: &DecoratedCurve, depth: usize) -> Result<Vec<Vec<DecoratedCurve>>> {
    let n = c.branches.len();
    let ls: Vec<u64> = c.branches.iter().map(|b| b.l).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j, c.contact(i, j)));
        }
    }
    let mut out: Vec<Vec<DecoratedCurve>> = Vec::new();
    let max_points = if pairs.is_empty() { 0 } else { depth };
    for r in 0..=max_points {
        // split every pairwise contact over r candidate points
        let mut splits: Vec<Vec<Vec<u64>>> = vec![vec![]];
        for &(_, _, cij) in &pairs {
            let mut next = Vec::new();
            for partial in &splits {
                for comp in compositions(cij, r) {
                    let mut p = partial.clone();
                    p.push(comp);
                    next.push(p);
                }
            }
            splits = next;
        }
        'split: for split in splits {
            // branches meeting at each point, with local contact matrices
            let mut local: Vec<Vec<Vec<u64>>> = vec![vec![vec![0; n]; n]; r];
            for (pi, &(i, j, _)) in pairs.iter().enumerate() {
                for p in 0..r {
                    local[p][i][j] = split[pi][p];
                    local[p][j][i] = split[pi][p];
                }
            }
            let mut active: Vec<Vec<usize>> = Vec::new();
            for p in 0..r {
                let s: Vec<usize> =
                    (0..n).filter(|&i| (0..n).any(|j| local[p][i][j] > 0)).collect();
                // every candidate point must be a genuine intersection point
                if s.len() < 2 {
                    continue 'split;
                }
                // all branches through one point meet pairwise there
                for a in 0..s.len() {
                    for b in a + 1..s.len() {
                        if local[p][s[a]][s[b]] == 0 {
                            continue 'split;
                        }
                    }
                }
                active.push(s);
            }
            // local multiplicities and decoration minima per branch
            let mut mins = vec![Vec::new(); n]; // (point, m_p(i)) pairs
            for (p, s) in active.iter().enumerate() {
                for &i in s {
                    let m = s.iter().filter(|&&j| j != i).map(|&j| local[p][i][j]).max().unwrap();
                    mins[i].push((p, m));
                }
            }
            let mut slacks = Vec::new();
            for i in 0..n {
                let need: u64 = mins[i].iter().map(|&(_, m)| m).sum();
                if need > ls[i] {
                    continue 'split;
                }
                slacks.push(ls[i] - need);
            }
            // distribute per-branch slack over its points and leftovers
            let mut assignments: Vec<(Vec<Vec<u64>>, Vec<Vec<u64>>)> =
                vec![((0..r).map(|_| vec![0; n]).collect(), Vec::new())];
            for i in 0..n {
                let buckets = mins[i].len();
                let mut next = Vec::new();
                for comp in compositions(slacks[i], buckets + 1) {
                    for leftover in leftover_splits(comp[buckets], depth) {
                        if comp[buckets] > 0 && leftover.is_empty() {
                            continue;
                        }
                        for (extras, lfts) in &assignments {
                            let mut e = extras.clone();
                            for (bi, &(p, _)) in mins[i].iter().enumerate() {
                                e[p][i] = comp[bi];
                            }
                            let mut lf = lfts.clone();
                            lf.push(leftover.clone());
                            next.push((e, lf));
                        }
                    }
                }
                assignments = next;
            }
            for (extras, leftovers) in assignments {
                let total_leftover: usize = leftovers.iter().map(|v| v.len()).sum();
                if r + total_leftover > depth {
                    continue;
                }
                let mut fiber = Vec::new();
                let mut ok = true;
                for (p, s) in active.iter().enumerate() {
                    let k = s.len();
                    let mut cm = vec![vec![0u64; k]; k];
                    for a in 0..k {
                        for b in 0..k {
                            if a != b {
                                cm[a][b] = local[p][s[a]][s[b]];
                            }
                        }
                    }
                    let dec: Vec<u64> = s
                        .iter()
                        .map(|&i| {
                            let m = mins[i].iter().find(|&&(q, _)| q == p).unwrap().1;
                            m + extras[p][i]
                        })
                        .collect();
                    match smooth_bunch(&cm, &dec) {
                        Ok(g) => fiber.push(g),
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                for lf in &leftovers {
                    for &t in lf {
                        fiber.push(smooth_germ(t));
                    }
                }
                out.push(fiber);
            }
        }
    }
    let mut seen = BTreeSet::new();
    out.retain(|f| seen.insert(fiber_key(f)));
    Ok(out)
}

/// All combinatorial delta-constant deformation candidates of (C,l):
/// redistributions of the pairwise intersection numbers and decorations over
/// at most `depth` special points, applying the A-series splitting rule to a
/// single A_{2k} branch. Candidates are combinatorial only; geometric
/// realizability is not decided.
pub fn delta_const_candidates(
    c: &DecoratedCurve,
    depth: usize,
) -> Result<Vec<Vec<DecoratedCurve>>> {
    let kinds = branch_kinds(c);
    if kinds.iter().any(|k| *k == BranchKind::Other) {
        return Err(Error::UnsupportedBranch(
            "branches must be smooth or of type A_n".into(),
        ));
    }
    if kinds.len() == 1 {
        if let BranchKind::AEven(k) = kinds[0] {
            return candidates_single_a(k, c.branches[0].l, depth);
        }
    }
    if kinds.iter().all(|k| *k == BranchKind::Smooth) {
        return candidates_all_smooth(c, depth);
    }
    Err(Error::UnsupportedBranch(
        "mixed smooth and singular branches are not supported".into(),
    ))
}

/// Check the cyclic-quotient min-property on each part of a partition of the
/// branches and return the resulting bound (number of parts + 1) on the ends
/// of the singularities of X(C,l).
pub fn ends_bound(c: &DecoratedCurve, partition: &[Vec<usize>]) -> Result<usize> {
    let n = c.branches.len();
    let mut seen = vec![false; n];
    for part in partition {
        for &i in part {
            if i >= n || seen[i] {
                return Err(Error::BadParameter("not a partition of the branches".into()));
            }
            seen[i] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::BadParameter("not a partition of the branches".into()));
    }
    for part in partition {
        for (ai, &i) in part.iter().enumerate() {
            for &j in &part[ai + 1..] {
                let contact = c.contact(i, j);
                let min = c.branches[i].l.min(c.branches[j].l);
                if !(contact <= min && min <= contact + 1) {
                    return Err(Error::BadParameter(format!(
                        "branches {i} and {j} violate the min-property",
                    )));
                }
            }
        }
    }
    let bound = partition.len() + 1;
    for g in graph_of(c)? {
        assert!(g.ends().len() <= bound, "ends bound violated");
    }
    Ok(bound)
}

// ---------------------------------------------------------------------------
// JSON representation

#[derive(Serialize, Deserialize)]
struct PointFile {
    id: usize,
    parent: Option<usize>,
    #[serde(default)]
    proximate_to: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct BranchFile {
    attach: usize,
    l: u64,
}

#[derive(Serialize, Deserialize)]
struct CurveFile {
    points: Vec<PointFile>,
    branches: Vec<BranchFile>,
}

impl DecoratedCurve {
    pub fn to_json(&self) -> String {
        let points = (0..self.cluster.len())
            .map(|p| PointFile {
                id: p + 1,
                parent: self.cluster.parent(p).map(|q| q + 1),
                proximate_to: self.cluster.prox(p).iter().map(|&q| q + 1).collect(),
            })
            .collect();
        let branches = self
            .branches
            .iter()
            .map(|b| BranchFile { attach: b.attach + 1, l: b.l })
            .collect();
        serde_json::to_string_pretty(&CurveFile { points, branches }).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CurveFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut cluster = Cluster::new();
        for (i, p) in file.points.iter().enumerate() {
            if p.id != i + 1 {
                return Err(Error::Parse(format!(
                    "points must be numbered consecutively from 1, got {}",
                    p.id
                )));
            }
            let mut prox: BTreeSet<usize> = p
                .proximate_to
                .iter()
                .map(|&q| {
                    q.checked_sub(1)
                        .filter(|&q| q < i)
                        .ok_or_else(|| Error::Parse(format!("bad proximity {q} at point {}", p.id)))
                })
                .collect::<Result<_>>()?;
            if let Some(par) = p.parent {
                let par = par
                    .checked_sub(1)
                    .filter(|&q| q < i)
                    .ok_or_else(|| Error::Parse(format!("bad parent at point {}", p.id)))?;
                prox.insert(par);
            }
            let prox: Vec<usize> = prox.into_iter().collect();
            cluster.add_point(&prox)?;
        }
        let branches = file
            .branches
            .iter()
            .map(|b| {
                b.attach
                    .checked_sub(1)
                    .filter(|&a| a < cluster.len())
                    .map(|attach| DecoratedBranch { attach, l: b.l })
                    .ok_or_else(|| Error::Parse(format!("bad attach point {}", b.attach)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DecoratedCurve { cluster, branches })
    }
}
