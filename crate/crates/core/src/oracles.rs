//! Slow, independent reference computations used to cross-check the main
//! code paths. None of these share logic with the functions they check.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use num_rational::Ratio;

use crate::bott_fan::{BottFan, MaximalCone};
use crate::cohomology::Mod2Table;
use crate::digraph::LabeledDigraph;
use crate::linalg;
use crate::root_data::CartanDatum;
use crate::weyl_words::ToricWord;

/// Degree of each primitive collection `{v_k, w_k}` found by searching all
/// maximal cones for one containing `v_k + w_k` and summing its coordinates.
/// `None` if no cone contains it or two cones disagree.
pub fn batyrev_degrees_by_cone_search(fan: &BottFan) -> Option<Vec<i64>> {
    let m = fan.dim();
    let cones: Vec<linalg::Matrix> = fan
        .maximal_cones()
        .map(|c: MaximalCone| fan.maximal_cone_matrix(&c))
        .collect();
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let x: Vec<i64> = fan
            .v_ray(k)
            .iter()
            .zip(fan.w_ray(k))
            .map(|(a, b)| a + b)
            .collect();
        let mut found: Option<Ratio<i128>> = None;
        for mat in &cones {
            let coords = linalg::solve_rational(mat, &x)?;
            if coords.iter().all(|c| *c >= Ratio::from_integer(0)) {
                let sum: Ratio<i128> = coords.iter().copied().sum();
                match found {
                    None => found = Some(sum),
                    Some(s) if s != sum => return None,
                    _ => {}
                }
            }
        }
        let sum = found?;
        if !sum.is_integer() {
            return None;
        }
        out.push(2 - sum.to_integer() as i64);
    }
    Some(out)
}

/// Elements of `{x : x² = αx}` for every `α`, by exhaustive enumeration.
/// Returns `(α, E(α) as sorted elements, multiplicity)` for eigenelements and
/// `None` if some solution set is not closed under addition.
pub fn brute_eigen(t: &Mod2Table) -> Option<Vec<(u32, Vec<u32>, usize)>> {
    let r = t.r;
    let full: u32 = if r == 32 { u32::MAX } else { (1u32 << r) - 1 };
    let mut out = Vec::new();
    for alpha in 0..=full {
        let sols: Vec<u32> = (0..=full)
            .filter(|&x| t.product(x, x) == t.product(alpha, x))
            .collect();
        let set: BTreeSet<u32> = sols.iter().copied().collect();
        for (&a, &b) in sols.iter().tuple_combinations() {
            if !set.contains(&(a ^ b)) {
                return None;
            }
        }
        let dim = sols.len().trailing_zeros() as usize;
        let is_eigen = sols.iter().any(|&x| x != 0 && x != alpha);
        if is_eigen {
            let mult = if alpha == 0 { dim } else { dim - 1 };
            out.push((alpha, sols, mult));
        }
    }
    Some(out)
}

/// Number of commutation classes among `words`, computed by closing each
/// word under swaps of adjacent unbonded letters.
pub fn commutation_classes_by_moves(datum: &CartanDatum, words: &[ToricWord]) -> usize {
    let mut class_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut next = 0;
    for w in words {
        if class_of.contains_key(w.letters()) {
            continue;
        }
        let mut queue = VecDeque::from([w.letters().to_vec()]);
        class_of.insert(w.letters().to_vec(), next);
        while let Some(cur) = queue.pop_front() {
            for i in 0..cur.len().saturating_sub(1) {
                if datum.entry(cur[i], cur[i + 1]) == 0 {
                    let mut s = cur.clone();
                    s.swap(i, i + 1);
                    if !class_of.contains_key(&s) {
                        class_of.insert(s.clone(), next);
                        queue.push_back(s);
                    }
                }
            }
        }
        next += 1;
    }
    next
}

/// Isomorphism by trying every vertex bijection.
pub fn brute_isomorphic(g: &LabeledDigraph, h: &LabeledDigraph) -> bool {
    let gv: Vec<usize> = g.vertices().collect();
    let hv: Vec<usize> = h.vertices().collect();
    if gv.len() != hv.len() || g.edge_count() != h.edge_count() {
        return false;
    }
    hv.iter().copied().permutations(hv.len()).any(|p| {
        let map: BTreeMap<usize, usize> = gv.iter().copied().zip(p).collect();
        g.edges()
            .all(|(u, v, l)| h.label(map[&u], map[&v]) == Some(l))
    })
}

/// Digraph of a word straight from the definition, using explicit positions.
pub fn digraph_by_definition(w: &ToricWord) -> LabeledDigraph {
    let d = w.datum();
    let l = w.letters();
    let mut g = LabeledDigraph::new(l.iter().copied(), []).expect("vertices");
    for j in 0..l.len() {
        for k in 0..j {
            let c = d.cartan()[l[j] - 1][l[k] - 1];
            if c != 0 {
                g.add_edge(l[j], l[k], (-c) as u8).expect("edge");
            }
        }
    }
    g
}
