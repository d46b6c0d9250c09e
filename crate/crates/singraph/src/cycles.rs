//! Fundamental cycles, rationality, positive roots, and the blow-up
//! decomposition of a rational singularity.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{arithmetic_genus, canonical_dot, dot, Cycle, WeightedDualGraph};
use crate::par::maybe_parallel_filter_map;

/// Guard for the box enumeration; override with `SINGRAPH_MAX_BOX`.
pub const DEFAULT_MAX_BOX: u128 = 10_000_000;

pub fn max_box() -> u128 {
    std::env::var("SINGRAPH_MAX_BOX")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_BOX)
}

fn require_singularity_graph(g: &WeightedDualGraph) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if !g.is_negative_definite() {
        return Err(Error::NotNegativeDefinite);
    }
    Ok(())
}

/// The minimal cycle Z > 0 with Z.E_v <= 0 for all v, together with a
/// witnessing computation sequence of vertex indices.
///
/// The sequence starts at the lexicographically least vertex id and at every
/// step picks the least v with Z_j . E_v > 0, so it is deterministic. The
/// resulting Z does not depend on these choices.
pub fn fundamental_cycle(g: &WeightedDualGraph) -> Result<(Cycle, Vec<usize>)> {
    require_singularity_graph(g)?;
    let order = g.lex_order();
    let mut z = Cycle::unit(g, order[0]);
    let mut seq = vec![order[0]];
    loop {
        let next = order
            .iter()
            .copied()
            .find(|&v| dot(g, &z, &Cycle::unit(g, v)).unwrap() > 0);
        match next {
            Some(v) => {
                z = z.plus(&Cycle::unit(g, v));
                seq.push(v);
            }
            None => break,
        }
    }
    Ok((z, seq))
}

/// Artin's criterion: p_a(Z) = 0.
pub fn is_rational(g: &WeightedDualGraph) -> Result<bool> {
    let (z, _) = fundamental_cycle(g)?;
    Ok(arithmetic_genus(g, &z)? == 0)
}

fn require_rational(g: &WeightedDualGraph) -> Result<Cycle> {
    let (z, _) = fundamental_cycle(g)?;
    if arithmetic_genus(g, &z)? != 0 {
        return Err(Error::NotRational);
    }
    Ok(z)
}

/// Multiplicity of a rational singularity: -Z.Z.
pub fn multiplicity(g: &WeightedDualGraph) -> Result<i64> {
    let z = require_rational(g)?;
    Ok(-dot(g, &z, &z)?)
}

/// All cycles in the closed box [0, top], lexicographic in coefficient order.
fn box_cycles(top: &Cycle) -> Vec<Cycle> {
    let mut out = vec![Cycle::from_coeffs(vec![0; top.len()])];
    for v in 0..top.len() {
        let mut next = Vec::with_capacity(out.len() * (top.coeff(v) as usize + 1));
        for c in &out {
            for k in 0..=top.coeff(v) {
                let mut d = c.clone();
                d.set(v, k);
                next.push(d);
            }
        }
        out = next;
    }
    out.sort();
    out
}

fn box_size(top: &Cycle) -> u128 {
    top.coeffs()
        .iter()
        .map(|&c| c as u128 + 1)
        .product()
}

/// Checks that D is part of a computation sequence: some chain
/// E_i = C_1 < C_2 < ... = D with C_{j+1} = C_j + E_v and C_j . E_v > 0.
/// Memoized search, independent of the genus characterization.
pub fn extends_to_computation_sequence(g: &WeightedDualGraph, d: &Cycle) -> Result<bool> {
    if d.len() != g.len() {
        return Err(Error::MismatchedGraph);
    }
    if !d.is_positive() {
        return Ok(false);
    }
    let mut seen: HashSet<Cycle> = HashSet::new();
    let mut stack: Vec<Cycle> = d
        .support()
        .into_iter()
        .map(|v| Cycle::unit(g, v))
        .collect();
    while let Some(c) = stack.pop() {
        if c == *d {
            return Ok(true);
        }
        if !seen.insert(c.clone()) {
            continue;
        }
        for v in g.vertices() {
            if c.coeff(v) < d.coeff(v) && dot(g, &c, &Cycle::unit(g, v))? > 0 {
                stack.push(c.plus(&Cycle::unit(g, v)));
            }
        }
    }
    Ok(false)
}

/// All positive roots: cycles 0 < D <= Z with p_a(D) = 0. Each returned root
/// is additionally verified to extend to a computation sequence. Output is in
/// canonical lexicographic order of coefficient vectors.
pub fn positive_roots(g: &WeightedDualGraph) -> Result<Vec<Cycle>> {
    let z = require_rational(g)?;
    let bound = max_box();
    let candidates = box_size(&z);
    if candidates > bound {
        return Err(Error::BoxTooLarge { candidates, bound });
    }
    let cells = box_cycles(&z);
    let roots: Vec<Cycle> = maybe_parallel_filter_map(cells, |d| {
        if d.is_positive() && arithmetic_genus(g, &d).unwrap() == 0 {
            assert!(
                extends_to_computation_sequence(g, &d).unwrap(),
                "root fails the computation-sequence check"
            );
            Some(d)
        } else {
            None
        }
    });
    // already sorted: box_cycles is sorted and the filter preserves order,
    // but the parallel merge re-sorts to be safe
    let mut roots = roots;
    roots.sort();
    Ok(roots)
}

/// All positive cycles 0 < D <= top with p_a(D) = 0, without reference to
/// the fundamental cycle. Used when searching below a given bound.
pub fn roots_in_box(g: &WeightedDualGraph, top: &Cycle) -> Result<Vec<Cycle>> {
    if top.len() != g.len() {
        return Err(Error::MismatchedGraph);
    }
    let bound = max_box();
    let candidates = box_size(top);
    if candidates > bound {
        return Err(Error::BoxTooLarge { candidates, bound });
    }
    Ok(box_cycles(top)
        .into_iter()
        .filter(|d| d.is_positive() && arithmetic_genus(g, d).unwrap() == 0)
        .collect())
}

/// Reduced at the non-(-2)'s: d_v <= 1 wherever w_v < -2.
pub fn is_almost_reduced(g: &WeightedDualGraph, d: &Cycle) -> Result<bool> {
    if d.len() != g.len() {
        return Err(Error::MismatchedGraph);
    }
    Ok(g.vertices().all(|v| g.weight(v) >= -2 || d.coeff(v) <= 1))
}

/// (D - D_red) . K, the obstruction count for deforming D.
pub fn obstruction_number(g: &WeightedDualGraph, d: &Cycle) -> Result<i64> {
    if d.is_zero() {
        return Err(Error::EmptyCycle);
    }
    let excess = d.minus(&d.reduction()).expect("reduction is dominated");
    canonical_dot(g, &excess)
}

/// Connected components of {v : Z.E_v = 0}: the singularities appearing on
/// the first blow-up.
pub fn blow_up_decomposition(g: &WeightedDualGraph) -> Result<Vec<WeightedDualGraph>> {
    let z = require_rational(g)?;
    let zero_set: Vec<usize> = g
        .vertices()
        .filter(|&v| dot(g, &z, &Cycle::unit(g, v)).unwrap() == 0)
        .collect();
    let sub = g.subgraph(&zero_set);
    Ok(sub.components().into_iter().map(|c| sub.subgraph(&c)).collect())
}

/// Multiplicities of all singularities in the iterated blow-up tree,
/// with their depth; G itself is depth 0.
pub fn resolution_profile(g: &WeightedDualGraph) -> Result<Vec<(i64, u32)>> {
    const MAX_DEPTH: u32 = 64;
    fn rec(g: &WeightedDualGraph, depth: u32, out: &mut Vec<(i64, u32)>) -> Result<()> {
        if depth >= MAX_DEPTH {
            return Err(Error::DepthExceeded(MAX_DEPTH));
        }
        out.push((multiplicity(g)?, depth));
        for comp in blow_up_decomposition(g)? {
            rec(&comp, depth + 1, out)?;
        }
        Ok(())
    }
    let mut out = Vec::new();
    rec(g, 0, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedDualGraph as G;

    fn d4() -> G {
        G::star(-2, &[vec![-2], vec![-2], vec![-2]])
    }

    #[test]
    fn fundamental_cycle_single_vertex() {
        for n in 2..=5 {
            let g = G::chain(&[-n]);
            let (z, seq) = fundamental_cycle(&g).unwrap();
            assert_eq!(z, Cycle::unit(&g, 0));
            assert_eq!(seq, vec![0]);
        }
    }

    #[test]
    fn fundamental_cycle_d4() {
        let g = d4();
        let (z, _) = fundamental_cycle(&g).unwrap();
        assert_eq!(z.coeffs(), &[2, 1, 1, 1]);
    }

    #[test]
    fn fundamental_cycle_chain_is_reduced() {
        let g = G::chain(&[-4, -2, -3, -2, -2]);
        let (z, _) = fundamental_cycle(&g).unwrap();
        assert!(z.is_reduced());
        for v in g.vertices() {
            assert!(dot(&g, &z, &Cycle::unit(&g, v)).unwrap() <= 0);
        }
    }

    #[test]
    fn fundamental_cycle_prefixes_have_genus_zero() {
        // forward direction of the computation-sequence lemma for rational G
        let g = G::star(-2, &[vec![-2, -2], vec![-3], vec![-2]]);
        assert!(is_rational(&g).unwrap());
        let (_, seq) = fundamental_cycle(&g).unwrap();
        let mut z = Cycle::zero(&g);
        for v in seq {
            z = z.plus(&Cycle::unit(&g, v));
            assert_eq!(arithmetic_genus(&g, &z).unwrap(), 0);
        }
    }

    #[test]
    fn fundamental_cycle_requires_negative_definite() {
        let mut g = G::chain(&[-2; 8]);
        let s = g.add_vertex("s", -2).unwrap();
        g.add_edge(2, s, 1).unwrap();
        assert_eq!(fundamental_cycle(&g), Err(Error::NotNegativeDefinite));
    }

    #[test]
    fn rationality_examples() {
        assert!(is_rational(&d4()).unwrap());
        assert!(is_rational(&G::chain(&[-2; 7])).unwrap());
        // star with central -3 and three arms of two (-2)'s: Z reduced, p_a = 0
        let g = G::star(-3, &[vec![-2, -2], vec![-2, -2], vec![-2, -2]]);
        assert!(g.is_negative_definite());
        assert!(is_rational(&g).unwrap());
        assert_eq!(multiplicity(&g).unwrap(), 3);
        // deepening an arm tip of the Euclidean (2,2,2) star instead gives
        // fundamental-cycle genus 1, so rationality must fail
        let g = G::star(-2, &[vec![-2, -2], vec![-2, -2], vec![-2, -3]]);
        assert!(g.is_negative_definite());
        assert!(!is_rational(&g).unwrap());
    }

    #[test]
    fn rationality_star_with_four_arms() {
        // center -3 with four -2 leaves: Z = (2;1,1,1,1), p_a(Z) = 0
        let g = G::star(-3, &[vec![-2], vec![-2], vec![-2], vec![-2]]);
        let (z, _) = fundamental_cycle(&g).unwrap();
        assert_eq!(z.coeffs()[0], 2);
        assert!(is_rational(&g).unwrap());
        assert_eq!(multiplicity(&g).unwrap(), 4);
    }

    #[test]
    fn multiplicity_examples() {
        for n in 2..=6 {
            let g = G::chain(&[-n]);
            assert_eq!(multiplicity(&g).unwrap(), n);
        }
        assert_eq!(multiplicity(&d4()).unwrap(), 2);
        assert_eq!(multiplicity(&G::chain(&[-4, -2, -3, -2, -2])).unwrap(), 5);
    }

    #[test]
    fn roots_single_vertex() {
        let g = G::chain(&[-3]);
        let r = positive_roots(&g).unwrap();
        assert_eq!(r, vec![Cycle::unit(&g, 0)]);
    }

    #[test]
    fn roots_a_n_counts() {
        for n in 1..=6usize {
            let g = G::chain(&vec![-2; n]);
            let r = positive_roots(&g).unwrap();
            assert_eq!(r.len(), n * (n + 1) / 2, "A_{n}");
        }
    }

    #[test]
    fn roots_have_connected_support() {
        // p_a(D)=0 forces connected support; verified, not assumed
        let g = G::chain(&[-2, -2, -2, -2]);
        for r in positive_roots(&g).unwrap() {
            assert!(r.has_connected_support(&g));
        }
    }

    #[test]
    fn roots_agree_with_computation_sequences() {
        // the two characterizations agree on a small universe of graphs
        let graphs = [
            G::chain(&[-2, -2, -2]),
            G::chain(&[-3, -2, -4]),
            d4(),
            G::star(-2, &[vec![-2, -2], vec![-3], vec![-2]]),
        ];
        for g in &graphs {
            let (z, _) = fundamental_cycle(g).unwrap();
            let roots = positive_roots(g).unwrap();
            for d in box_cycles(&z) {
                if !d.is_positive() {
                    continue;
                }
                let by_genus = arithmetic_genus(g, &d).unwrap() == 0;
                let by_seq = extends_to_computation_sequence(g, &d).unwrap();
                assert_eq!(by_genus, by_seq, "characterizations disagree");
                assert_eq!(by_genus, roots.contains(&d));
            }
        }
    }

    #[test]
    fn almost_reduced_examples() {
        let g = d4();
        let (z, _) = fundamental_cycle(&g).unwrap();
        assert!(is_almost_reduced(&g, &z).unwrap());
        let s = G::star(-3, &[vec![-2], vec![-2], vec![-2]]);
        let mut d = Cycle::zero(&s);
        d.set(0, 2);
        assert!(!is_almost_reduced(&s, &d).unwrap());
        assert!(is_almost_reduced(&s, &d.reduction()).unwrap());
    }

    #[test]
    fn obstruction_number_examples() {
        let g = G::chain(&[-3]);
        let e = Cycle::unit(&g, 0);
        assert_eq!(obstruction_number(&g, &e).unwrap(), 0);
        let two_e = e.plus(&e);
        assert_eq!(obstruction_number(&g, &two_e).unwrap(), 1);
        // almost reduced excess sits on (-2)'s where K.E = 0
        let g = d4();
        let (z, _) = fundamental_cycle(&g).unwrap();
        assert_eq!(obstruction_number(&g, &z).unwrap(), 0);
    }

    #[test]
    fn blow_up_decomposition_examples() {
        // A_n: ends have Z.E < 0; interior survives as A_{n-2}
        let g = G::chain(&[-2; 5]);
        let comps = blow_up_decomposition(&g).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), 3);
        let g = G::chain(&[-2, -2]);
        assert!(blow_up_decomposition(&g).unwrap().is_empty());
        let g = G::chain(&[-5]);
        assert!(blow_up_decomposition(&g).unwrap().is_empty());
        // chain [-4,-2,-3,-2,-2]: Z reduced, zero set {v2} and {v4}
        let g = G::chain(&[-4, -2, -3, -2, -2]);
        let comps = blow_up_decomposition(&g).unwrap();
        assert_eq!(comps.len(), 2);
        for c in &comps {
            assert_eq!(c.len(), 1);
            assert_eq!(c.weight(0), -2);
        }
    }

    #[test]
    fn resolution_profile_examples() {
        // RDPs blow up to RDPs
        let mut e8 = G::chain(&[-2; 7]);
        let s = e8.add_vertex("s", -2).unwrap();
        e8.add_edge(2, s, 1).unwrap();
        for (m, _) in resolution_profile(&e8).unwrap() {
            assert_eq!(m, 2);
        }
        assert_eq!(resolution_profile(&G::chain(&[-4])).unwrap(), vec![(4, 0)]);
    }

    #[test]
    fn resolution_profile_n_star() {
        // center -4 with four arms of (-2)'s of length n-1: n quadruple points
        for n in 1..=4usize {
            let arms: Vec<Vec<i64>> = (0..4).map(|_| vec![-2; n - 1]).collect();
            let g = G::star(-4, &arms);
            let profile = resolution_profile(&g).unwrap();
            let quads = profile.iter().filter(|&&(m, _)| m == 4).count();
            assert_eq!(quads, n, "n-star with n = {n}");
            assert_eq!(profile.len(), quads); // nothing else appears
        }
    }

    #[test]
    fn blow_up_components_stay_rational_and_shrink() {
        let g = G::star(-4, &[vec![-2, -2], vec![-2, -2], vec![-2, -2], vec![-2, -2]]);
        let m0 = multiplicity(&g).unwrap();
        for comp in blow_up_decomposition(&g).unwrap() {
            assert!(comp.len() < g.len());
            assert!(is_rational(&comp).unwrap());
            assert!(multiplicity(&comp).unwrap() <= m0);
        }
    }

    #[test]
    fn fundamental_cycle_random_tie_breaking_is_stable() {
        // Laufer's algorithm converges to the same Z whatever the choices
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};
        let g = G::star(-2, &[vec![-2, -2], vec![-3], vec![-2]]);
        let (z, _) = fundamental_cycle(&g).unwrap();
        for salt in 0..20u64 {
            let mut c = Cycle::unit(&g, (salt % g.len() as u64) as usize);
            loop {
                let mut cands: Vec<usize> = g
                    .vertices()
                    .filter(|&v| dot(&g, &c, &Cycle::unit(&g, v)).unwrap() > 0)
                    .collect();
                if cands.is_empty() {
                    break;
                }
                // pseudo-random pick
                let mut h = DefaultHasher::new();
                (salt, c.coeffs()).hash(&mut h);
                let pick = cands.remove(h.finish() as usize % cands.len());
                c = c.plus(&Cycle::unit(&g, pick));
            }
            assert_eq!(c, z);
        }
    }
}
