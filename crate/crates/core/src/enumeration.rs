//! Isomorphism classes of toric Schubert varieties of Coxeter elements, and
//! the closed-form class counts they must match.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::digraph::{digraph_of_word, CanonicalForm, LabeledDigraph};
use crate::root_data::{CartanDatum, Family};
use crate::weyl_words::{
    all_toric_words, apply_automorphism, word_from_orientation, Orientation, ToricWord,
};
use crate::{Error, Result};

pub const MAX_ALL_TORIC_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    #[serde(skip)]
    pub canonical: CanonicalForm,
    pub digraph: LabeledDigraph,
    pub representative: Vec<usize>,
    pub is_fano: bool,
    pub is_weak_fano: bool,
    pub max_indegree: u32,
    /// Number of orientations (or words) in the class.
    pub orbit_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub classes: u64,
    pub weak_fano: u64,
    pub fano: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub datum: CartanDatum,
    pub classes: Vec<ClassEntry>,
    pub totals: Totals,
}

impl ClassificationReport {
    fn build(datum: &CartanDatum, words: impl Iterator<Item = ToricWord>) -> Result<Self> {
        let mut groups: BTreeMap<CanonicalForm, ClassEntry> = BTreeMap::new();
        for w in words {
            let g = digraph_of_word(&w);
            let c = g.canonical_form()?;
            groups
                .entry(c.clone())
                .and_modify(|e| e.orbit_size += 1)
                .or_insert_with(|| ClassEntry {
                    canonical: c,
                    is_fano: g.is_fano(),
                    is_weak_fano: g.is_weak_fano(),
                    max_indegree: g.max_indegree(),
                    representative: w.letters().to_vec(),
                    digraph: g,
                    orbit_size: 1,
                });
        }
        let classes: Vec<ClassEntry> = groups.into_values().collect();
        let totals = Totals {
            classes: classes.len() as u64,
            weak_fano: classes.iter().filter(|c| c.is_weak_fano).count() as u64,
            fano: classes.iter().filter(|c| c.is_fano).count() as u64,
        };
        Ok(ClassificationReport {
            datum: datum.clone(),
            classes,
            totals,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": self.datum.name(),
            "totals": self.totals,
            "classes": self.classes.iter().map(|c| serde_json::json!({
                "representative": c.representative,
                "edges": c.digraph.to_json()["edges"],
                "is_fano": c.is_fano,
                "is_weak_fano": c.is_weak_fano,
                "max_indegree": c.max_indegree,
                "orbit_size": c.orbit_size,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Classes over all `2^{r-1}` orientations of the Dynkin tree.
pub fn classify_coxeter(datum: &CartanDatum) -> Result<ClassificationReport> {
    ClassificationReport::build(
        datum,
        Orientation::all(datum).map(|o| word_from_orientation(&o)),
    )
}

/// Classes over every nonempty distinct-letter word; each word counts once
/// in its class's orbit size.
pub fn classify_all_toric(datum: &CartanDatum) -> Result<ClassificationReport> {
    if datum.rank() > MAX_ALL_TORIC_RANK {
        return Err(Error::Precondition(format!(
            "all-toric classification is limited to rank {MAX_ALL_TORIC_RANK}"
        )));
    }
    ClassificationReport::build(datum, all_toric_words(datum).into_iter())
}

/// `(classes, weak Fano, Fano)` from the closed-form class counts.
pub fn table3_closed_form(family: Family, rank: usize) -> Result<(u64, u64, u64)> {
    let r = rank as u32;
    let p = |e: u32| 1u64 << e;
    let out_of_range = || {
        Err(Error::Precondition(format!(
            "no closed form for {}{}",
            family.letter(),
            rank
        )))
    };
    Ok(match family {
        Family::A if r >= 2 => {
            if r % 2 == 0 {
                (p(r - 2), p(r - 2), (r / 2) as u64)
            } else {
                let n = p(r - 2) + p((r - 3) / 2);
                (n, n, ((r + 1) / 2) as u64)
            }
        }
        Family::B if r == 2 || r == 3 => (p(r - 1), p(r - 1), 1),
        Family::B if r >= 4 => {
            let n = if r % 2 == 0 {
                7 * p(r - 4)
            } else {
                7 * p(r - 4) + p((r - 5) / 2)
            };
            (n, n, 1)
        }
        Family::C if r == 3 => (4, 3, 2),
        Family::C if r >= 4 => {
            if r % 2 == 0 {
                (7 * p(r - 4), 5 * p(r - 4), (r / 2) as u64)
            } else {
                let e = p((r - 5) / 2);
                (7 * p(r - 4) + e, 5 * p(r - 4) + e, ((r + 1) / 2) as u64)
            }
        }
        Family::D if r == 4 => (4, 3, 2),
        Family::D if r > 4 => (3 * p(r - 3), 5 * p(r - 4), (r - 1) as u64),
        Family::E if r == 6 => (20, 17, 4),
        Family::E if r == 7 => (64, 56, 7),
        Family::E if r == 8 => (128, 112, 8),
        Family::F if r == 4 => (8, 6, 2),
        Family::G if r == 2 => (2, 1, 1),
        _ => return out_of_range(),
    })
}

/// Whether two Coxeter orientations give isomorphic digraphs exactly when
/// they are equal or related by a diagram automorphism.
pub fn automorphism_consistency(datum: &CartanDatum) -> Result<bool> {
    let words: Vec<ToricWord> = Orientation::all(datum)
        .map(|o| word_from_orientation(&o))
        .collect();
    let forms: Vec<CanonicalForm> = words
        .iter()
        .map(|w| digraph_of_word(w).canonical_form())
        .collect::<Result<_>>()?;
    let graphs: Vec<LabeledDigraph> = words.iter().map(digraph_of_word).collect();
    let auts = datum.diagram_automorphisms();
    for i in 0..words.len() {
        for j in 0..words.len() {
            let related = auts.iter().any(|a| {
                digraph_of_word(&apply_automorphism(a, &words[i]).expect("automorphism"))
                    == graphs[j]
            });
            if related != (forms[i] == forms[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(s: &str) -> CartanDatum {
        s.parse().unwrap()
    }

    #[test]
    fn small_classifications() {
        let d4 = classify_coxeter(&datum("D4")).unwrap();
        assert_eq!(d4.classes.len(), 4);
        // Classes are told apart by the indegree of the trivalent vertex.
        let mut profile: Vec<u32> = d4
            .classes
            .iter()
            .map(|c| c.digraph.indegree(2).unwrap())
            .collect();
        profile.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(profile, vec![3, 2, 1, 0]);
        let mut maxes: Vec<u32> = d4.classes.iter().map(|c| c.max_indegree).collect();
        maxes.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(maxes, vec![3, 2, 1, 1]);
        assert_eq!(classify_coxeter(&datum("A3")).unwrap().totals.classes, 3);
        assert_eq!(classify_coxeter(&datum("G2")).unwrap().totals.classes, 2);
        let sizes: usize = d4.classes.iter().map(|c| c.orbit_size).sum();
        assert_eq!(sizes, 8);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(table3_closed_form(Family::E, 6).unwrap(), (20, 17, 4));
        assert_eq!(table3_closed_form(Family::B, 5).unwrap(), (15, 15, 1));
        assert_eq!(table3_closed_form(Family::C, 3).unwrap(), (4, 3, 2));
        assert!(table3_closed_form(Family::A, 1).is_err());
        assert!(table3_closed_form(Family::F, 5).is_err());
    }

    #[test]
    fn matches_closed_form_small() {
        for name in ["A2", "A5", "B4", "C5", "D6", "E6", "F4"] {
            let d = datum(name);
            let t = classify_coxeter(&d).unwrap().totals;
            assert_eq!(
                (t.classes, t.weak_fano, t.fano),
                table3_closed_form(d.family(), d.rank()).unwrap(),
                "{name}"
            );
        }
    }

    #[test]
    fn all_toric_small() {
        assert_eq!(classify_all_toric(&datum("A2")).unwrap().totals.classes, 2);
        assert_eq!(classify_all_toric(&datum("B2")).unwrap().totals.classes, 3);
        assert!(classify_all_toric(&datum("A9")).is_err());
    }

    #[test]
    fn automorphisms_explain_isomorphisms_when_simply_laced() {
        for name in ["A4", "A5", "D4", "D5", "E6"] {
            assert!(automorphism_consistency(&datum(name)).unwrap(), "{name}");
        }
        // In type B distinct orientations can agree without a diagram symmetry.
        assert!(!automorphism_consistency(&datum("B4")).unwrap());
    }

    #[test]
    fn type_a_all_weak_fano() {
        for r in 2..=7 {
            let rep = classify_coxeter(&CartanDatum::new(Family::A, r).unwrap()).unwrap();
            assert!(rep.classes.iter().all(|c| c.is_weak_fano));
            assert_eq!(rep.totals.fano, r.div_ceil(2) as u64);
        }
    }
}
