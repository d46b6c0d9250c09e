//! Weighted dual graphs and cycles.
//!
//! A [`WeightedDualGraph`] records an exceptional configuration: one vertex
//! per irreducible curve with its self-intersection as weight, and edge
//! multiplicities for the pairwise intersection numbers. All curves have
//! genus 0. A [`Cycle`] is a non-negative integer divisor supported on the
//! vertices of one graph.
//!
//! Everything here is exact integer arithmetic; determinants are taken over
//! arbitrary-precision integers so negative-definiteness never suffers
//! overflow.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex-weighted multigraph carrying an intersection form.
///
/// Vertices keep their insertion order; ids are stable opaque tokens.
/// Edges are unordered pairs with positive multiplicity, no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDualGraph {
    ids: Vec<String>,
    weights: Vec<i64>,
    /// (u, v) with u < v, mapped to the intersection number E_u . E_v.
    edges: BTreeMap<(usize, usize), i64>,
}

impl WeightedDualGraph {
    pub fn new() -> Self {
        WeightedDualGraph {
            ids: Vec::new(),
            weights: Vec::new(),
            edges: BTreeMap::new(),
        }
    }

    /// Builds a graph from (id, weight) pairs and simple edges given by id.
    pub fn from_parts<S: AsRef<str>>(vertices: &[(S, i64)], edges: &[(S, S)]) -> Result<Self> {
        let mut g = WeightedDualGraph::new();
        for (id, w) in vertices {
            g.add_vertex(id.as_ref(), *w)?;
        }
        for (a, b) in edges {
            let u = g.index_of(a.as_ref())?;
            let v = g.index_of(b.as_ref())?;
            g.add_edge(u, v, 1)?;
        }
        Ok(g)
    }

    /// Chain with the given weights, ids `v1..vn`, consecutive vertices joined.
    pub fn chain(weights: &[i64]) -> Self {
        let mut g = WeightedDualGraph::new();
        for (i, &w) in weights.iter().enumerate() {
            g.add_vertex(&format!("v{}", i + 1), w).unwrap();
        }
        for i in 1..weights.len() {
            g.add_edge(i - 1, i, 1).unwrap();
        }
        g
    }

    /// Star: a center plus arms; `arms[i]` lists the weights outward from the
    /// center. Ids are `c` and `a{i}_{j}`.
    pub fn star(center: i64, arms: &[Vec<i64>]) -> Self {
        let mut g = WeightedDualGraph::new();
        g.add_vertex("c", center).unwrap();
        for (i, arm) in arms.iter().enumerate() {
            let mut prev = 0;
            for (j, &w) in arm.iter().enumerate() {
                let v = g.add_vertex(&format!("a{}_{}", i + 1, j + 1), w).unwrap();
                g.add_edge(prev, v, 1).unwrap();
                prev = v;
            }
        }
        g
    }

    pub fn add_vertex(&mut self, id: &str, weight: i64) -> Result<usize> {
        if weight >= 0 {
            // w = -1 is allowed (non-minimal configurations, arrows).
            if weight > -1 {
                return Err(Error::Parse(format!(
                    "vertex {id} has non-negative weight {weight}"
                )));
            }
        }
        if self.ids.iter().any(|x| x == id) {
            return Err(Error::Parse(format!("duplicate vertex id {id}")));
        }
        self.ids.push(id.to_string());
        self.weights.push(weight);
        Ok(self.ids.len() - 1)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, mult: i64) -> Result<()> {
        if u == v {
            return Err(Error::Parse("self-loops are not allowed".into()));
        }
        if mult <= 0 {
            return Err(Error::Parse("edge multiplicity must be positive".into()));
        }
        let key = (u.min(v), u.max(v));
        *self.edges.entry(key).or_insert(0) += mult;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        0..self.ids.len()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.weights[v]
    }

    pub fn set_weight(&mut self, v: usize, w: i64) {
        self.weights[v] = w;
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::NoSuchVertex(id.to_string()))
    }

    /// Intersection number E_u . E_v (diagonal gives the weight).
    pub fn pairing(&self, u: usize, v: usize) -> i64 {
        if u == v {
            self.weights[u]
        } else {
            *self.edges.get(&(u.min(v), u.max(v))).unwrap_or(&0)
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.edges.iter().map(|(&(u, v), &m)| (u, v, m))
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (&(a, b), _) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out
    }

    /// Number of incident edges counted with multiplicity.
    pub fn valency(&self, v: usize) -> i64 {
        self.edges
            .iter()
            .filter(|(&(a, b), _)| a == v || b == v)
            .map(|(_, &m)| m)
            .sum()
    }

    /// Vertices of valency at most one.
    pub fn ends(&self) -> Vec<usize> {
        self.vertices().filter(|&v| self.valency(v) <= 1).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// All weights at most -2.
    pub fn is_minimal(&self) -> bool {
        self.weights.iter().all(|&w| w <= -2)
    }

    pub fn require_minimal(&self) -> Result<()> {
        for v in self.vertices() {
            if self.weight(v) > -2 {
                return Err(Error::NotMinimal {
                    id: self.id(v).to_string(),
                    weight: self.weight(v),
                });
            }
        }
        Ok(())
    }

    /// True iff -(intersection form) is positive definite, decided by exact
    /// leading principal minors (fraction-free elimination over BigInt).
    pub fn is_negative_definite(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return true;
        }
        if self.weights.iter().any(|&w| w >= 0) {
            return false;
        }
        // Bareiss on M = -(intersection form); pivots after step k equal the
        // ratio of consecutive leading minors, all minors must be positive.
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(-self.pairing(i, j))).collect())
            .collect();
        let mut prev = BigInt::from(1);
        for k in 0..n {
            if !m[k][k].is_positive() {
                return false;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        true
    }

    /// Determinant of the intersection form, exact.
    pub fn det(&self) -> BigInt {
        let n = self.len();
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(self.pairing(i, j))).collect())
            .collect();
        let mut det = BigInt::from(1);
        let mut sign = 1i32;
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            // fraction-free step
            let prev = det.clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
            }
            det = m[k][k].clone();
        }
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Blow up a smooth point of E_v: w_v drops by one and a fresh (-1)-vertex
    /// is attached to v by a single edge. Returns the new graph and the new
    /// vertex index.
    pub fn blow_up_smooth_point(&self, v: usize) -> (WeightedDualGraph, usize) {
        let mut g = self.clone();
        g.weights[v] -= 1;
        let mut k = 1;
        let id = loop {
            let cand = format!("b{k}");
            if g.ids.iter().all(|x| x != &cand) {
                break cand;
            }
            k += 1;
        };
        let nv = g.add_vertex(&id, -1).unwrap();
        g.add_edge(v, nv, 1).unwrap();
        (g, nv)
    }

    /// Contract a (-1)-vertex: neighbors u gain (E_u.E_v)^2 on their weight and
    /// every neighbor pair gains (E_u1.E_v)(E_u2.E_v) on its edge multiplicity.
    pub fn contract(&self, v: usize) -> Result<WeightedDualGraph> {
        if self.weights[v] != -1 {
            return Err(Error::WeightNotMinusOne {
                id: self.id(v).to_string(),
                weight: self.weights[v],
            });
        }
        let nbrs: Vec<(usize, i64)> = self
            .vertices()
            .filter(|&u| u != v)
            .map(|u| (u, self.pairing(u, v)))
            .filter(|&(_, m)| m != 0)
            .collect();
        let mut g = WeightedDualGraph::new();
        let mut remap = vec![usize::MAX; self.len()];
        for u in self.vertices() {
            if u != v {
                remap[u] = g.add_vertex(self.id(u), self.weight(u))?;
            }
        }
        for (u, w, m) in self.edges() {
            if u != v && w != v {
                g.add_edge(remap[u], remap[w], m)?;
            }
        }
        for &(u, m) in &nbrs {
            g.weights[remap[u]] += m * m;
        }
        for i in 0..nbrs.len() {
            for j in i + 1..nbrs.len() {
                let (u1, m1) = nbrs[i];
                let (u2, m2) = nbrs[j];
                g.add_edge(remap[u1], remap[u2], m1 * m2)?;
            }
        }
        Ok(g)
    }

    /// Induced subgraph on the vertex set `s` (order preserved).
    pub fn subgraph(&self, s: &[usize]) -> WeightedDualGraph {
        let mut g = WeightedDualGraph::new();
        let mut remap = vec![usize::MAX; self.len()];
        for &v in s {
            remap[v] = g.add_vertex(self.id(v), self.weight(v)).unwrap();
        }
        for (u, v, m) in self.edges() {
            if remap[u] != usize::MAX && remap[v] != usize::MAX {
                g.add_edge(remap[u], remap[v], m).unwrap();
            }
        }
        g
    }

    /// Connected components as vertex index sets (ascending within each).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Replace a chain of pairwise adjacent vertices by a single vertex of
    /// weight `sum(w_i) + 2 (len - 1)`, the self-intersection of the sum of
    /// the chain curves. Outside edges are inherited by the merged vertex.
    ///
    /// For a 2-chain (-a, -b) this is the reduced adjacency -(a+b-2).
    pub fn merge_chain(&self, path: &[usize]) -> Result<WeightedDualGraph> {
        if path.is_empty() {
            return Err(Error::NotAChain);
        }
        let inside = |v: usize| path.contains(&v);
        for w in path.windows(2) {
            if self.pairing(w[0], w[1]) != 1 {
                return Err(Error::NotAChain);
            }
        }
        // internal vertices carry no outside edges and no chords
        for (i, &v) in path.iter().enumerate() {
            for u in self.neighbors(v) {
                if inside(u) {
                    let j = path.iter().position(|&x| x == u).unwrap();
                    if (i as i64 - j as i64).abs() != 1 {
                        return Err(Error::NotAChain);
                    }
                } else if i != 0 && i != path.len() - 1 {
                    return Err(Error::NotAChain);
                }
            }
        }
        let merged_w: i64 =
            path.iter().map(|&v| self.weight(v)).sum::<i64>() + 2 * (path.len() as i64 - 1);
        let mut g = WeightedDualGraph::new();
        let mut remap = vec![usize::MAX; self.len()];
        let mid = g.add_vertex(self.id(path[0]), merged_w)?;
        for v in self.vertices() {
            if !inside(v) {
                remap[v] = g.add_vertex(self.id(v), self.weight(v))?;
            }
        }
        for (u, v, m) in self.edges() {
            match (inside(u), inside(v)) {
                (true, true) => {}
                (true, false) => g.add_edge(mid, remap[v], m)?,
                (false, true) => g.add_edge(remap[u], mid, m)?,
                (false, false) => g.add_edge(remap[u], remap[v], m)?,
            }
        }
        Ok(g)
    }

    /// Vertex indices ordered by id, used wherever a deterministic
    /// "lexicographically least" choice is required.
    pub fn lex_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self.vertices().collect();
        idx.sort_by(|&a, &b| self.ids[a].cmp(&self.ids[b]));
        idx
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self
                .vertices()
                .map(|v| VertexFile {
                    id: self.id(v).to_string(),
                    weight: self.weight(v),
                    genus: None,
                })
                .collect(),
            edges: self
                .edges()
                .map(|(u, v, m)| EdgeFile {
                    a: self.id(u).to_string(),
                    b: self.id(v).to_string(),
                    mult: m,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut g = WeightedDualGraph::new();
        for v in &file.vertices {
            if v.genus.unwrap_or(0) > 0 {
                return Err(Error::PositiveGenus { id: v.id.clone() });
            }
            g.add_vertex(&v.id, v.weight)?;
        }
        for e in &file.edges {
            let u = g.index_of(&e.a)?;
            let v = g.index_of(&e.b)?;
            g.add_edge(u, v, e.mult)?;
        }
        Ok(g)
    }

    /// DOT output for figures.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph {\n  node [shape=circle];\n");
        for v in self.vertices() {
            s.push_str(&format!(
                "  \"{}\" [label=\"{}\\n{}\"];\n",
                self.id(v),
                self.id(v),
                self.weight(v)
            ));
        }
        for (u, v, m) in self.edges() {
            for _ in 0..m {
                s.push_str(&format!("  \"{}\" -- \"{}\";\n", self.id(u), self.id(v)));
            }
        }
        s.push_str("}\n");
        s
    }
}

impl Default for WeightedDualGraph {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<VertexFile>,
    edges: Vec<EdgeFile>,
}

#[derive(Serialize, Deserialize)]
struct VertexFile {
    id: String,
    weight: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    genus: Option<i64>,
}

/// An edge serializes as `["a","b"]` or `["a","b",mult]`.
struct EdgeFile {
    a: String,
    b: String,
    mult: i64,
}

impl Serialize for EdgeFile {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let n = if self.mult == 1 { 2 } else { 3 };
        let mut seq = ser.serialize_seq(Some(n))?;
        seq.serialize_element(&self.a)?;
        seq.serialize_element(&self.b)?;
        if self.mult != 1 {
            seq.serialize_element(&self.mult)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for EdgeFile {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<serde_json::Value> = Vec::deserialize(de)?;
        if raw.len() < 2 || raw.len() > 3 {
            return Err(D::Error::custom("edge must be [a, b] or [a, b, mult]"));
        }
        let a = raw[0]
            .as_str()
            .ok_or_else(|| D::Error::custom("edge endpoint must be a string"))?
            .to_string();
        let b = raw[1]
            .as_str()
            .ok_or_else(|| D::Error::custom("edge endpoint must be a string"))?
            .to_string();
        let mult = if raw.len() == 3 {
            raw[2]
                .as_i64()
                .ok_or_else(|| D::Error::custom("edge multiplicity must be an integer"))?
        } else {
            1
        };
        Ok(EdgeFile { a, b, mult })
    }
}

/// Non-negative integer divisor on the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    coeffs: Vec<i64>,
}

impl Cycle {
    pub fn zero(g: &WeightedDualGraph) -> Self {
        Cycle {
            coeffs: vec![0; g.len()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c >= 0));
        Cycle { coeffs }
    }

    /// The class E_v of a single vertex.
    pub fn unit(g: &WeightedDualGraph, v: usize) -> Self {
        let mut c = Self::zero(g);
        c.coeffs[v] = 1;
        c
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, v: usize) -> i64 {
        self.coeffs[v]
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn set(&mut self, v: usize, c: i64) {
        debug_assert!(c >= 0);
        self.coeffs[v] = c;
    }

    pub fn add_assign(&mut self, other: &Cycle) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn plus(&self, other: &Cycle) -> Cycle {
        let mut c = self.clone();
        c.add_assign(other);
        c
    }

    /// Coefficientwise difference; all entries must stay non-negative.
    pub fn minus(&self, other: &Cycle) -> Option<Cycle> {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
            if *a < 0 {
                return None;
            }
        }
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&v| self.coeffs[v] > 0).collect()
    }

    /// min(d_v, 1) at each vertex.
    pub fn reduction(&self) -> Cycle {
        Cycle {
            coeffs: self.coeffs.iter().map(|&c| c.min(1)).collect(),
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.coeffs.iter().all(|&c| c <= 1)
    }

    /// Coefficientwise `self <= other`.
    pub fn dominated_by(&self, other: &Cycle) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }

    /// True iff the support induces a connected subgraph.
    pub fn has_connected_support(&self, g: &WeightedDualGraph) -> bool {
        let sup = self.support();
        if sup.is_empty() {
            return false;
        }
        g.subgraph(&sup).is_connected()
    }
}

/// Bilinear extension of the intersection form.
pub fn dot(g: &WeightedDualGraph, c: &Cycle, d: &Cycle) -> Result<i64> {
    if c.len() != g.len() || d.len() != g.len() {
        return Err(Error::MismatchedGraph);
    }
    let mut acc: i64 = g
        .vertices()
        .map(|v| c.coeff(v) * d.coeff(v) * g.weight(v))
        .sum();
    for (u, v, m) in g.edges() {
        acc += m * (c.coeff(u) * d.coeff(v) + c.coeff(v) * d.coeff(u));
    }
    Ok(acc)
}

/// K . D by adjunction: K . E_v = -w_v - 2 for genus-0 curves.
pub fn canonical_dot(g: &WeightedDualGraph, d: &Cycle) -> Result<i64> {
    if d.len() != g.len() {
        return Err(Error::MismatchedGraph);
    }
    Ok(g.vertices().map(|v| d.coeff(v) * (-g.weight(v) - 2)).sum())
}

/// Arithmetic genus p_a(D) = 1 + (D.(D+K))/2 for D > 0.
pub fn arithmetic_genus(g: &WeightedDualGraph, d: &Cycle) -> Result<i64> {
    if d.is_zero() {
        return Err(Error::EmptyCycle);
    }
    let dd = dot(g, d, d)?;
    let kd = canonical_dot(g, d)?;
    assert!((dd + kd) % 2 == 0, "D.(D+K) must be even");
    Ok(1 + (dd + kd) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d4() -> WeightedDualGraph {
        WeightedDualGraph::star(-2, &[vec![-2], vec![-2], vec![-2]])
    }

    fn d4_z(g: &WeightedDualGraph) -> Cycle {
        let mut z = Cycle::zero(g);
        z.set(0, 2);
        for v in 1..4 {
            z.set(v, 1);
        }
        z
    }

    #[test]
    fn dot_single_vertex() {
        for n in 1..=5 {
            let g = WeightedDualGraph::chain(&[-n]);
            let e = Cycle::unit(&g, 0);
            assert_eq!(dot(&g, &e, &e).unwrap(), -n);
        }
    }

    #[test]
    fn dot_two_vertices_one_edge() {
        let g = WeightedDualGraph::chain(&[-2, -3]);
        let e1 = Cycle::unit(&g, 0);
        let e2 = Cycle::unit(&g, 1);
        assert_eq!(dot(&g, &e1, &e2).unwrap(), 1);
        assert_eq!(dot(&g, &e2, &e1).unwrap(), 1);
    }

    #[test]
    fn dot_d4_fundamental() {
        let g = d4();
        let z = d4_z(&g);
        assert_eq!(dot(&g, &z, &z).unwrap(), -2);
    }

    #[test]
    fn dot_mismatched_graph() {
        let g = d4();
        let h = WeightedDualGraph::chain(&[-2]);
        let e = Cycle::unit(&h, 0);
        assert_eq!(dot(&g, &e, &e), Err(Error::MismatchedGraph));
    }

    #[test]
    fn canonical_dot_examples() {
        let g = WeightedDualGraph::chain(&[-2]);
        assert_eq!(canonical_dot(&g, &Cycle::unit(&g, 0)).unwrap(), 0);
        let g = WeightedDualGraph::chain(&[-3]);
        assert_eq!(canonical_dot(&g, &Cycle::unit(&g, 0)).unwrap(), 1);
        let g = WeightedDualGraph::chain(&[-4, -2, -3, -2, -2]);
        let z = Cycle::from_coeffs(vec![1; 5]);
        assert_eq!(canonical_dot(&g, &z).unwrap(), 3);
    }

    #[test]
    fn genus_of_vertices_is_zero() {
        for w in [-2, -3, -4, -7] {
            let g = WeightedDualGraph::chain(&[w]);
            assert_eq!(arithmetic_genus(&g, &Cycle::unit(&g, 0)).unwrap(), 0);
        }
    }

    #[test]
    fn genus_d4_fundamental_cycle() {
        let g = d4();
        assert_eq!(arithmetic_genus(&g, &d4_z(&g)).unwrap(), 0);
    }

    #[test]
    fn genus_e8_tilde_canonical_class() {
        // ~E8 all -2; multiplicities 2,4,6,5,4,3,2,1 on the chain, 3 on the
        // short arm give an anticanonical cycle of genus 1.
        let mut g = WeightedDualGraph::chain(&[-2; 8]);
        let s = g.add_vertex("s", -2).unwrap();
        g.add_edge(2, s, 1).unwrap();
        let d = Cycle::from_coeffs(vec![2, 4, 6, 5, 4, 3, 2, 1, 3]);
        assert_eq!(arithmetic_genus(&g, &d).unwrap(), 1);
    }

    #[test]
    fn genus_zero_cycle_errors() {
        let g = d4();
        assert_eq!(
            arithmetic_genus(&g, &Cycle::zero(&g)),
            Err(Error::EmptyCycle)
        );
    }

    #[test]
    fn negative_definite_examples() {
        assert!(WeightedDualGraph::chain(&[-2]).is_negative_definite());
        assert!(WeightedDualGraph::chain(&[-4, -2, -3, -2, -2]).is_negative_definite());
        // ~E8 all -2 is degenerate
        let mut g = WeightedDualGraph::chain(&[-2; 8]);
        let s = g.add_vertex("s", -2).unwrap();
        g.add_edge(2, s, 1).unwrap();
        assert!(!g.is_negative_definite());
        assert!(g.det().is_zero());
    }

    #[test]
    fn negative_definite_rejects_weight_zero() {
        let mut g = WeightedDualGraph::new();
        g.ids.push("x".into());
        g.weights.push(0);
        assert!(!g.is_negative_definite());
    }

    #[test]
    fn negative_definite_invariant_under_relabeling() {
        let g = WeightedDualGraph::chain(&[-4, -2, -3, -2, -2]);
        // reversed chain
        let h = WeightedDualGraph::chain(&[-2, -2, -3, -2, -4]);
        assert_eq!(g.is_negative_definite(), h.is_negative_definite());
    }

    #[test]
    fn blow_up_then_contract_is_identity() {
        let g = WeightedDualGraph::chain(&[-2]);
        let (b, nv) = g.blow_up_smooth_point(0);
        assert_eq!(b.weight(0), -3);
        assert_eq!(b.weight(nv), -1);
        let back = b.contract(nv).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn iterated_blow_up_gives_chain() {
        // blowing up k times at the successive (-1)s turns them into (-2)s
        let mut g = WeightedDualGraph::chain(&[-2]);
        let mut tip = 0;
        for _ in 0..3 {
            let (h, nv) = g.blow_up_smooth_point(tip);
            g = h;
            tip = nv;
        }
        let mut ws: Vec<i64> = g.vertices().map(|v| g.weight(v)).collect();
        ws.sort_unstable();
        assert_eq!(ws, vec![-3, -2, -2, -1]);
        assert!(g.vertices().all(|v| g.valency(v) <= 2));
    }

    #[test]
    fn contract_examples() {
        let g = WeightedDualGraph::chain(&[-3, -1]);
        let h = g.contract(1).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.weight(0), -2);

        let g = WeightedDualGraph::chain(&[-2, -1, -2]);
        let h = g.contract(1).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.weight(0), -1);
        assert_eq!(h.weight(1), -1);
        assert_eq!(h.pairing(0, 1), 1);
    }

    #[test]
    fn contract_requires_minus_one() {
        let g = WeightedDualGraph::chain(&[-2, -2]);
        assert!(g.contract(0).is_err());
    }

    #[test]
    fn merge_chain_rule() {
        let g = WeightedDualGraph::chain(&[-4, -3]);
        let h = g.merge_chain(&[0, 1]).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.weight(0), -5);

        let g = WeightedDualGraph::chain(&[-2, -2]);
        assert_eq!(g.merge_chain(&[0, 1]).unwrap().weight(0), -2);

        let g = WeightedDualGraph::chain(&[-2, -3, -2]);
        assert_eq!(g.merge_chain(&[0, 1, 2]).unwrap().weight(0), -3);
    }

    #[test]
    fn merge_chain_keeps_outside_edges() {
        let g = WeightedDualGraph::chain(&[-2, -3, -2, -5]);
        let h = g.merge_chain(&[1, 2]).unwrap();
        assert_eq!(h.len(), 3);
        let m = h.index_of("v2").unwrap();
        assert_eq!(h.weight(m), -3);
        assert_eq!(h.valency(m), 2);
    }

    #[test]
    fn merge_chain_rejects_non_chain() {
        let g = d4();
        assert!(g.merge_chain(&[1, 2]).is_err()); // leaves are not adjacent
    }

    #[test]
    fn valency_and_ends() {
        let g = d4();
        assert_eq!(g.valency(0), 3);
        assert_eq!(g.ends(), vec![1, 2, 3]);
        let c = WeightedDualGraph::chain(&[-2, -2, -2]);
        assert_eq!(c.ends(), vec![0, 2]);
    }

    #[test]
    fn subgraph_induced() {
        let g = WeightedDualGraph::chain(&[-2, -3, -2]);
        let s = g.subgraph(&[0, 1]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.pairing(0, 1), 1);
        let s2 = g.subgraph(&[0, 2]);
        assert_eq!(s2.pairing(0, 1), 0);
    }

    #[test]
    fn genus_additivity() {
        // p_a(C+D) = p_a(C) + p_a(D) + C.D - 1 on a small graph, exhaustively
        let g = WeightedDualGraph::chain(&[-2, -3, -2]);
        let cycles: Vec<Cycle> = (0..3 * 3 * 3)
            .map(|k| Cycle::from_coeffs(vec![k % 3, (k / 3) % 3, k / 9]))
            .filter(|c| c.is_positive())
            .collect();
        for c in &cycles {
            for d in &cycles {
                let lhs = arithmetic_genus(&g, &c.plus(d)).unwrap();
                let rhs = arithmetic_genus(&g, c).unwrap() + arithmetic_genus(&g, d).unwrap()
                    + dot(&g, c, d).unwrap()
                    - 1;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let g = WeightedDualGraph::chain(&[-4, -2, -3, -2, -2]);
        let s = g.to_json();
        let back = WeightedDualGraph::from_json(&s).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn json_multiplicity_and_genus() {
        let text = r#"{"vertices":[{"id":"a","weight":-2},{"id":"b","weight":-3}],
                       "edges":[["a","b",2]]}"#;
        let g = WeightedDualGraph::from_json(text).unwrap();
        assert_eq!(g.pairing(0, 1), 2);
        let back = WeightedDualGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);

        let bad = r#"{"vertices":[{"id":"a","weight":-2,"genus":1}],"edges":[]}"#;
        assert!(matches!(
            WeightedDualGraph::from_json(bad),
            Err(Error::PositiveGenus { .. })
        ));
    }
}
