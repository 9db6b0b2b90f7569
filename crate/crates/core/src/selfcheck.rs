//! Fast consistency checks: worked fixtures plus reference computations at
//! small scale. Used by the command-line `selfcheck`.

use crate::bott_fan::{reduced_char_matrix, BottFan};
use crate::cohomology::{eigen_data, presentation};
use crate::digraph::{are_isomorphic, digraph_of_word};
use crate::enumeration::{classify_coxeter, table3_closed_form};
use crate::oracles;
use crate::recovery::{input_for_word, recover};
use crate::root_data::CartanDatum;
use crate::weyl_words::{all_toric_words, coxeter_words, ToricWord};
use crate::Result;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn datum(s: &str) -> CartanDatum {
    s.parse().expect("built-in type")
}

fn word(ty: &str, s: &str) -> ToricWord {
    ToricWord::parse(&datum(ty), s).expect("built-in word")
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check {
            name,
            passed,
            detail,
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

pub fn run_all() -> Vec<Check> {
    vec![
        check("reduced characteristic matrix fixtures", || {
            let a = reduced_char_matrix(&word("A5", "3,1,4,5,2"));
            let ok =
                a == vec![
                    vec![-1, 0, 0, 0, 0],
                    vec![0, -1, 0, 0, 0],
                    vec![1, 0, -1, 0, 0],
                    vec![0, 0, 1, -1, 0],
                    vec![1, 1, 0, 0, -1],
                ] && reduced_char_matrix(&word("B2", "1,2")) == vec![vec![-1, 0], vec![1, -1]]
                    && reduced_char_matrix(&word("B2", "2,1")) == vec![vec![-1, 0], vec![2, -1]];
            Ok((ok, "A5 3,1,4,5,2; B2 1,2 and 2,1".into()))
        }),
        check("digraph matches definition", || {
            let mut n = 0;
            for ty in ["A4", "B4", "C4", "D4", "F4", "G2"] {
                for w in all_toric_words(&datum(ty)) {
                    if digraph_of_word(&w) != oracles::digraph_by_definition(&w) {
                        return Ok((false, format!("{ty} {w}")));
                    }
                    n += 1;
                }
            }
            Ok((true, format!("{n} words")))
        }),
        check("commutation classes by 2-moves", || {
            let mut details = Vec::new();
            for ty in ["A4", "D4", "B4"] {
                let d = datum(ty);
                let ws: Vec<ToricWord> = coxeter_words(&d).collect();
                let n = oracles::commutation_classes_by_moves(&d, &ws);
                if n != 1 << (d.rank() - 1) {
                    return Ok((false, format!("{ty}: {n}")));
                }
                details.push(format!("{ty}:{n}"));
            }
            Ok((true, details.join(" ")))
        }),
        check("Batyrev cone search agrees with indegree", || {
            let mut n = 0;
            for ty in ["A4", "B4", "C4", "D4", "F4", "G2"] {
                for w in all_toric_words(&datum(ty)) {
                    let fan = BottFan::new(&w);
                    let g = digraph_of_word(&w);
                    let oracle = oracles::batyrev_degrees_by_cone_search(&fan);
                    let Some(deg) = oracle else {
                        return Ok((false, format!("no relation for {ty} {w}")));
                    };
                    let fano = deg.iter().all(|&x| x > 0);
                    let weak = deg.iter().all(|&x| x >= 0);
                    if deg != fan.degrees() || fano != g.is_fano() || weak != g.is_weak_fano() {
                        return Ok((false, format!("{ty} {w}")));
                    }
                    n += 1;
                }
            }
            Ok((true, format!("{n} words")))
        }),
        check("eigen data matches exhaustive search", || {
            for (ty, s) in [
                ("A5", "3,1,4,5,2"),
                ("D9", "8,5,4,2,1,3,6,7,9"),
                ("E7", "7,2,1,3,4,5,6"),
            ] {
                let t = presentation(&word(ty, s)).mod2_structure()?;
                let fast: Vec<(u32, usize)> = eigen_data(&t)?
                    .iter()
                    .map(|e| (e.alpha, e.multiplicity))
                    .collect();
                let slow: Vec<(u32, usize)> = oracles::brute_eigen(&t)
                    .unwrap_or_default()
                    .iter()
                    .map(|e| (e.0, e.2))
                    .collect();
                if fast != slow {
                    return Ok((false, format!("{ty} {s}")));
                }
            }
            Ok((true, "three worked rings".into()))
        }),
        check("class counts match closed forms (rank <= 6)", || {
            for ty in [
                "A2", "A3", "A4", "A5", "A6", "B2", "B3", "B4", "B5", "B6", "C3", "C4", "C5", "C6",
                "D4", "D5", "D6", "E6", "F4", "G2",
            ] {
                let d = datum(ty);
                let t = classify_coxeter(&d)?.totals;
                if (t.classes, t.weak_fano, t.fano) != table3_closed_form(d.family(), d.rank())? {
                    return Ok((false, ty.into()));
                }
            }
            Ok((true, "20 types".into()))
        }),
        check("recovery round trip on worked examples", || {
            for (ty, s) in [
                ("D9", "8,5,4,2,1,3,6,7,9"),
                ("A8", "7,8,4,5,6,2,1,3"),
                ("E7", "7,2,1,3,4,5,6"),
            ] {
                let w = word(ty, s);
                let out = recover(&input_for_word(&w)?)?;
                if !are_isomorphic(&out.graph, &digraph_of_word(&w))? {
                    return Ok((false, format!("{ty} {s}")));
                }
            }
            Ok((true, "D9, A8, E7".into()))
        }),
        check("completeness sampling", || {
            let fan = BottFan::new(&word("A5", "3,1,4,5,2"));
            Ok((fan.is_complete_sample_check(200, 7), "200 samples".into()))
        }),
    ]
}
