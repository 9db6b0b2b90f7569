//! Cartan matrices of the finite simple types (Humphreys numbering) and their
//! diagram automorphism groups.
//!
//! Vertices are numbered `1..=r` throughout the public API.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    pub fn rank_allowed(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

/// Cartan datum of a connected finite type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanDatum {
    family: Family,
    rank: usize,
    cartan: Vec<Vec<i32>>,
    bonds: Vec<(usize, usize)>,
}

/// Undirected bonds of the Dynkin tree, 1-based, `u < v`.
fn tree_bonds(family: Family, r: usize) -> Vec<(usize, usize)> {
    match family {
        Family::A | Family::B | Family::C | Family::F | Family::G => {
            (1..r).map(|i| (i, i + 1)).collect()
        }
        Family::D => {
            let mut b: Vec<_> = (1..r - 1).map(|i| (i, i + 1)).collect();
            b.push((r - 2, r));
            b
        }
        Family::E => {
            let mut b = vec![(1, 3), (2, 4), (3, 4)];
            b.extend((4..r).map(|i| (i, i + 1)));
            b
        }
    }
}

pub fn cartan_matrix(family: Family, rank: usize) -> Result<Vec<Vec<i32>>> {
    if !family.rank_allowed(rank) {
        return Err(Error::InvalidType(format!("{}{}", family.letter(), rank)));
    }
    let r = rank;
    let mut c = vec![vec![0i32; r]; r];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (u, v) in tree_bonds(family, r) {
        c[u - 1][v - 1] = -1;
        c[v - 1][u - 1] = -1;
    }
    let mut set = |i: usize, j: usize, val: i32| c[i - 1][j - 1] = val;
    match family {
        Family::B => set(r - 1, r, -2),
        Family::C => set(r, r - 1, -2),
        Family::F => set(2, 3, -2),
        Family::G => set(2, 1, -3),
        _ => {}
    }
    Ok(c)
}

impl CartanDatum {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(family, rank)?;
        Ok(CartanDatum {
            family,
            rank,
            cartan,
            bonds: tree_bonds(family, rank),
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family.letter(), self.rank)
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    /// Bonds as pairs `(u, v)` with `u < v`.
    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            Err(Error::IndexOutOfRange {
                index: i,
                bound: self.rank,
            })
        } else {
            Ok(())
        }
    }

    /// Cartan integer `c_{i,j}`; panics on out-of-range indices.
    pub fn entry(&self, i: usize, j: usize) -> i32 {
        self.cartan[i - 1][j - 1]
    }

    pub fn bonded(&self, u: usize, v: usize) -> bool {
        u != v && self.entry(u, v) != 0
    }

    /// `-c_{u,v}` for bonded vertices, 0 otherwise.
    pub fn bond_label(&self, u: usize, v: usize) -> Result<u8> {
        self.check_index(u)?;
        self.check_index(v)?;
        Ok(if self.bonded(u, v) {
            (-self.entry(u, v)) as u8
        } else {
            0
        })
    }

    /// All diagram automorphisms, identity first, then in lexicographic order
    /// of their image sequences.
    pub fn diagram_automorphisms(&self) -> Vec<DiagramAutomorphism> {
        let r = self.rank;
        let mut out = Vec::new();
        let mut image = vec![0usize; r];
        let mut used = vec![false; r];
        self.extend_automorphism(0, &mut image, &mut used, &mut out);
        out.sort_by(|a, b| {
            b.is_identity()
                .cmp(&a.is_identity())
                .then_with(|| a.perm.cmp(&b.perm))
        });
        out
    }

    fn extend_automorphism(
        &self,
        i: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<DiagramAutomorphism>,
    ) {
        let r = self.rank;
        if i == r {
            out.push(DiagramAutomorphism {
                perm: image.iter().map(|&x| x + 1).collect(),
            });
            return;
        }
        for t in 0..r {
            if used[t] {
                continue;
            }
            let consistent = (0..=i).all(|j| {
                let tj = if j == i { t } else { image[j] };
                self.cartan[i][j] == self.cartan[t][tj] && self.cartan[j][i] == self.cartan[tj][t]
            });
            if consistent {
                image[i] = t;
                used[t] = true;
                self.extend_automorphism(i + 1, image, used, out);
                used[t] = false;
            }
        }
    }

    /// Positive rationals `d_i` (as a common-denominator integer vector) with
    /// `d_i c_{i,j} = d_j c_{j,i}`, or `None` if none exist.
    pub fn symmetrizer(&self) -> Option<Vec<i64>> {
        // Propagate ratios d_j / d_i = c_{i,j} / c_{j,i} along the tree.
        let r = self.rank;
        let mut d: Vec<Option<num_rational::Rational64>> = vec![None; r];
        d[0] = Some(num_rational::Rational64::from_integer(1));
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for j in 0..r {
                if i != j && self.cartan[i][j] != 0 && d[j].is_none() {
                    let ratio = num_rational::Rational64::new(
                        self.cartan[i][j] as i64,
                        self.cartan[j][i] as i64,
                    );
                    d[j] = Some(d[i].unwrap() * ratio);
                    stack.push(j);
                }
            }
        }
        let d: Vec<_> = d.into_iter().collect::<Option<Vec<_>>>()?;
        let lcm = d
            .iter()
            .fold(1i64, |acc, q| num_integer::lcm(acc, *q.denom()));
        let ints: Vec<i64> = d.iter().map(|q| (q * lcm).to_integer()).collect();
        let ok = (0..r).all(|i| {
            (0..r).all(|j| ints[i] * self.cartan[i][j] as i64 == ints[j] * self.cartan[j][i] as i64)
        });
        (ok && ints.iter().all(|&x| x > 0)).then_some(ints)
    }
}

impl FromStr for CartanDatum {
    type Err = Error;

    /// Parses `<letter><rank>`, e.g. `B5` or `e7`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| Error::InvalidType(s.to_string()))?;
        let rest = chars.as_str();
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidType(s.to_string()));
        }
        let rank: usize = rest
            .parse()
            .map_err(|_| Error::InvalidType(s.to_string()))?;
        CartanDatum::new(family, rank)
    }
}

impl fmt::Display for CartanDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A vertex permutation preserving every Cartan integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DiagramAutomorphism {
    /// `perm[i - 1]` is the image of vertex `i`.
    perm: Vec<usize>,
}

impl DiagramAutomorphism {
    /// Validates `perm` (1-based images) against the datum.
    pub fn new(datum: &CartanDatum, perm: Vec<usize>) -> Result<Self> {
        let r = datum.rank();
        let mut seen = vec![false; r];
        if perm.len() != r {
            return Err(Error::NotAutomorphism);
        }
        for &p in &perm {
            if p == 0 || p > r || seen[p - 1] {
                return Err(Error::NotAutomorphism);
            }
            seen[p - 1] = true;
        }
        for i in 1..=r {
            for j in 1..=r {
                if datum.entry(perm[i - 1], perm[j - 1]) != datum.entry(i, j) {
                    return Err(Error::NotAutomorphism);
                }
            }
        }
        Ok(DiagramAutomorphism { perm })
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p == i + 1)
    }

    pub fn compose(&self, other: &DiagramAutomorphism) -> DiagramAutomorphism {
        DiagramAutomorphism {
            perm: other.perm.iter().map(|&x| self.perm[x - 1]).collect(),
        }
    }
}
