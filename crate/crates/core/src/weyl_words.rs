//! Distinct-letter words in the simple reflections, commutation classes and
//! orientations of the Dynkin tree.

use std::fmt;

use itertools::Itertools;

use crate::root_data::{CartanDatum, DiagramAutomorphism};
use crate::{Error, Result};

/// Parses `3,1,4,5,2` (whitespace tolerated, empty string gives the empty word).
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::MalformedWord(s.to_string()));
            }
            t.parse::<usize>()
                .map_err(|_| Error::MalformedWord(s.to_string()))
        })
        .collect()
}

/// True iff the letters are pairwise distinct. Letters must lie in `1..=r`.
pub fn is_toric(datum: &CartanDatum, letters: &[usize]) -> Result<bool> {
    let mut seen = vec![false; datum.rank() + 1];
    let mut distinct = true;
    for &l in letters {
        datum.check_index(l)?;
        if seen[l] {
            distinct = false;
        }
        seen[l] = true;
    }
    Ok(distinct)
}

/// A word with pairwise distinct letters over a fixed Cartan datum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToricWord {
    datum: CartanDatum,
    letters: Vec<usize>,
}

impl ToricWord {
    pub fn new(datum: &CartanDatum, letters: Vec<usize>) -> Result<Self> {
        if !is_toric(datum, &letters)? {
            return Err(Error::NotToric(letters));
        }
        Ok(ToricWord {
            datum: datum.clone(),
            letters,
        })
    }

    pub fn parse(datum: &CartanDatum, s: &str) -> Result<Self> {
        ToricWord::new(datum, parse_word(s)?)
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// 0-based position of letter `l`, if present.
    pub fn position(&self, l: usize) -> Option<usize> {
        self.letters.iter().position(|&x| x == l)
    }

    /// `-c_{i_j, i_k}` for word positions `j`, `k` (0-based).
    pub fn coefficient(&self, j: usize, k: usize) -> i64 {
        -(self.datum.entry(self.letters[j], self.letters[k]) as i64)
    }
}

impl fmt::Display for ToricWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letters.iter().join(","))
    }
}

/// Equality of the Weyl group elements of two distinct-letter words: same
/// letters, and every bonded pair in the same relative order.
pub fn commutation_equal(w1: &ToricWord, w2: &ToricWord) -> Result<bool> {
    if w1.datum != w2.datum {
        return Err(Error::DatumMismatch);
    }
    if w1.len() != w2.len() || w1.letters.iter().any(|&l| w2.position(l).is_none()) {
        return Ok(false);
    }
    let d = &w1.datum;
    for (a, &u) in w1.letters.iter().enumerate() {
        for &v in &w1.letters[a + 1..] {
            if d.bonded(u, v) && w2.position(u) > w2.position(v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn apply_automorphism(theta: &DiagramAutomorphism, w: &ToricWord) -> Result<ToricWord> {
    // Re-validate against the word's datum.
    let theta = DiagramAutomorphism::new(&w.datum, theta.images().to_vec())?;
    ToricWord::new(
        &w.datum,
        w.letters.iter().map(|&l| theta.apply(l)).collect(),
    )
}

/// An orientation of every bond of the Dynkin tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    datum: CartanDatum,
    /// Directed bonds `(from, to)`, one per bond, in the datum's bond order.
    directed: Vec<(usize, usize)>,
}

impl Orientation {
    /// Bit `b` of `bits` set means bond `b` (as `(u, v)`, `u < v`) points `u → v`.
    pub fn from_bits(datum: &CartanDatum, bits: u64) -> Self {
        let directed = datum
            .bonds()
            .iter()
            .enumerate()
            .map(|(b, &(u, v))| if bits >> b & 1 == 1 { (u, v) } else { (v, u) })
            .collect();
        Orientation {
            datum: datum.clone(),
            directed,
        }
    }

    pub fn new(datum: &CartanDatum, directed: Vec<(usize, usize)>) -> Result<Self> {
        let mut got: Vec<(usize, usize)> = directed
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        got.sort_unstable();
        let mut want = datum.bonds().to_vec();
        want.sort_unstable();
        if got != want {
            return Err(Error::InvalidInput(
                "orientation must direct every bond exactly once".into(),
            ));
        }
        let mut directed = directed;
        directed.sort_by_key(|&(a, b)| {
            let key = (a.min(b), a.max(b));
            datum.bonds().iter().position(|&x| x == key)
        });
        Ok(Orientation {
            datum: datum.clone(),
            directed,
        })
    }

    pub fn all(datum: &CartanDatum) -> impl Iterator<Item = Orientation> + '_ {
        let n = datum.bonds().len();
        (0..1u64 << n).map(move |bits| Orientation::from_bits(datum, bits))
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn directed(&self) -> &[(usize, usize)] {
        &self.directed
    }
}

/// Coxeter word realizing the orientation: for every bond `u → v`, `v` is
/// written before `u`. Ties go to the smallest available vertex.
pub fn word_from_orientation(o: &Orientation) -> ToricWord {
    let r = o.datum.rank();
    let mut pending = vec![0usize; r + 1];
    for &(u, _v) in &o.directed {
        pending[u] += 1;
    }
    let mut done = vec![false; r + 1];
    let mut letters = Vec::with_capacity(r);
    for _ in 0..r {
        let next = (1..=r)
            .find(|&x| !done[x] && pending[x] == 0)
            .expect("tree orientations are acyclic");
        done[next] = true;
        letters.push(next);
        for &(u, v) in &o.directed {
            if v == next {
                pending[u] -= 1;
            }
        }
    }
    ToricWord {
        datum: o.datum.clone(),
        letters,
    }
}

/// All `r!` Coxeter words in lexicographic order.
pub fn coxeter_words(datum: &CartanDatum) -> impl Iterator<Item = ToricWord> + '_ {
    (1..=datum.rank())
        .permutations(datum.rank())
        .map(move |letters| ToricWord {
            datum: datum.clone(),
            letters,
        })
}

/// One Coxeter word per commutation class, one per orientation.
pub fn coxeter_class_representatives(datum: &CartanDatum) -> Vec<ToricWord> {
    Orientation::all(datum)
        .map(|o| word_from_orientation(&o))
        .collect()
}

/// Every nonempty word with distinct letters, shortest first.
pub fn all_toric_words(datum: &CartanDatum) -> Vec<ToricWord> {
    let r = datum.rank();
    let mut out = Vec::new();
    for m in 1..=r {
        for letters in (1..=r).permutations(m) {
            out.push(ToricWord {
                datum: datum.clone(),
                letters,
            });
        }
    }
    out
}
