//! Integral cohomology of a toric Schubert variety.
//!
//! Generators `x_1..x_m` follow word positions and satisfy `x_j² = x_j α_j`
//! where `α_j` involves only earlier generators. Elements are kept in the
//! squarefree monomial basis; monomials are bitmasks over positions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::LabeledDigraph;
use crate::gf2::{self, Subspace2};
use crate::linalg;
use crate::weyl_words::ToricWord;
use crate::{Error, Result};

/// Largest number of generators supported by the packed mod-2 tables.
pub const MAX_GENERATORS: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottRing {
    generators: Vec<usize>,
    /// `alphas[j][k]` is the coefficient of `x_k` in `α_j`; zero unless `k < j`.
    alphas: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct RingJson {
    m: usize,
    generators: Vec<usize>,
    alphas: Vec<Vec<i64>>,
}

/// Ring of the word: `α_j = Σ_{k<j} (-c_{i_j,i_k}) x_k`.
pub fn presentation(w: &ToricWord) -> BottRing {
    let m = w.len();
    let alphas = (0..m)
        .map(|j| {
            (0..m)
                .map(|k| if k < j { w.coefficient(j, k) } else { 0 })
                .collect()
        })
        .collect();
    BottRing {
        generators: w.letters().to_vec(),
        alphas,
    }
}

impl BottRing {
    /// Builds a ring from `α` vectors in any generator order; generators are
    /// reordered so every `α_j` involves only earlier ones.
    pub fn new(generators: Vec<usize>, alphas: Vec<Vec<i64>>) -> Result<Self> {
        let m = generators.len();
        if alphas.len() != m || alphas.iter().any(|a| a.len() != m) {
            return Err(Error::InvalidInput(format!(
                "expected {m} alpha vectors of length {m}"
            )));
        }
        let distinct: BTreeSet<usize> = generators.iter().copied().collect();
        if distinct.len() != m {
            return Err(Error::InvalidInput("generator ids must be distinct".into()));
        }
        if (0..m).any(|j| alphas[j][j] != 0) {
            return Err(Error::InvalidInput("alpha_j must not involve x_j".into()));
        }
        // Order: a generator comes after every generator in its alpha. The
        // given order is kept when it already satisfies this.
        let mut order = Vec::with_capacity(m);
        let mut placed = vec![false; m];
        while order.len() < m {
            let next = (0..m)
                .filter(|&j| !placed[j])
                .find(|&j| (0..m).all(|k| alphas[j][k] == 0 || placed[k]))
                .ok_or_else(|| Error::InvalidInput("alpha dependencies are cyclic".into()))?;
            placed[next] = true;
            order.push(next);
        }
        Ok(BottRing {
            generators: order.iter().map(|&j| generators[j]).collect(),
            alphas: order
                .iter()
                .map(|&j| order.iter().map(|&k| alphas[j][k]).collect())
                .collect(),
        })
    }

    /// Ring of a labeled digraph: `α_j = Σ_{j→k} label · x_k`.
    pub fn from_digraph(g: &LabeledDigraph) -> Result<Self> {
        let verts: Vec<usize> = g.vertices().collect();
        let index: BTreeMap<usize, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut alphas = vec![vec![0i64; verts.len()]; verts.len()];
        for (u, v, l) in g.edges() {
            alphas[index[&u]][index[&v]] = l as i64;
        }
        BottRing::new(verts, alphas)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let j: RingJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        if j.m != j.generators.len() {
            return Err(Error::InvalidInput(
                "m does not match generator count".into(),
            ));
        }
        BottRing::new(j.generators, j.alphas)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RingJson {
            m: self.m(),
            generators: self.generators.clone(),
            alphas: self.alphas.clone(),
        })
        .expect("ring serializes")
    }

    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn alpha(&self, j: usize) -> &[i64] {
        &self.alphas[j]
    }

    pub fn alphas(&self) -> &[Vec<i64>] {
        &self.alphas
    }

    /// Every `α` coefficient is 0 or 1.
    pub fn labels_one(&self) -> bool {
        self.alphas.iter().flatten().all(|&c| c == 0 || c == 1)
    }

    /// Positions `j` with `α_j = 0`.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.m())
            .filter(|&j| self.alphas[j].iter().all(|&c| c == 0))
            .collect()
    }

    /// Positions appearing in `α_j`.
    pub fn support(&self, j: usize) -> Vec<usize> {
        (0..self.m()).filter(|&k| self.alphas[j][k] != 0).collect()
    }

    fn require_labels_one(&self) -> Result<()> {
        if self.labels_one() {
            Ok(())
        } else {
            Err(Error::Precondition(
                "ring has a relation coefficient other than 0 or 1 (non-simply-laced edge)".into(),
            ))
        }
    }

    fn name(&self, j: usize) -> String {
        format!("x{}", self.generators[j])
    }

    /// `x_j^2 = x_j*(...)` for every generator, in position order.
    pub fn relations(&self) -> Vec<String> {
        (0..self.m())
            .map(|j| {
                let terms: Vec<String> = (0..self.m())
                    .filter(|&k| self.alphas[j][k] != 0)
                    .map(|k| match self.alphas[j][k] {
                        1 => self.name(k),
                        c => format!("{c}{}", self.name(k)),
                    })
                    .collect();
                let rhs = match terms.len() {
                    0 => "0".to_string(),
                    1 => format!("{}*{}", self.name(j), terms[0]),
                    _ => format!("{}*({})", self.name(j), terms.join(" + ")),
                };
                format!("{}^2 = {}", self.name(j), rhs)
            })
            .collect()
    }

    /// `x_j · x^mono` in the squarefree basis.
    fn mul_generator(&self, j: usize, mono: u32, coeff: i64, out: &mut RingElement) {
        if mono >> j & 1 == 0 {
            out.add_term(mono | 1 << j, coeff);
            return;
        }
        // x_j^2 · rest = Σ_k α_j[k] x_k · x_j · rest, with k < j.
        for k in 0..j {
            let a = self.alphas[j][k];
            if a != 0 {
                self.mul_generator(k, mono, coeff * a, out);
            }
        }
    }

    pub fn multiply(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let mut result = RingElement::zero();
        for (&mono, &c) in &b.terms {
            let mut partial = a.clone();
            for j in 0..self.m() {
                if mono >> j & 1 == 1 {
                    let mut next = RingElement::zero();
                    for (&m2, &c2) in &partial.terms {
                        self.mul_generator(j, m2, c2, &mut next);
                    }
                    partial = next;
                }
            }
            result = result.add(&partial.scale(c));
        }
        result
    }

    /// Rewrites `x_j² → x_j α_j`, largest position first, until squarefree.
    pub fn normal_form(&self, p: &Polynomial) -> RingElement {
        let mut work: BTreeMap<Vec<u32>, i64> = p.terms.clone();
        let mut done = RingElement::zero();
        while let Some((exps, c)) = work.pop_first() {
            match (0..self.m()).rev().find(|&j| exps[j] >= 2) {
                None => {
                    let mono = (0..self.m())
                        .filter(|&j| exps[j] == 1)
                        .fold(0u32, |acc, j| acc | 1 << j);
                    done.add_term(mono, c);
                }
                Some(j) => {
                    for k in 0..self.m() {
                        let a = self.alphas[j][k];
                        if a != 0 {
                            let mut e = exps.clone();
                            e[j] -= 1;
                            e[k] += 1;
                            let slot = work.entry(e).or_insert(0);
                            *slot += a * c;
                        }
                    }
                    work.retain(|_, v| *v != 0);
                }
            }
        }
        done
    }

    /// Ranks of the degree-`2k` parts of the squarefree basis.
    pub fn betti_numbers(&self) -> Vec<u64> {
        let m = self.m();
        let mut b = vec![0u64; m + 1];
        for mono in 0u64..1 << m {
            b[mono.count_ones() as usize] += 1;
        }
        b
    }

    /// Structure constants `H² × H² → H⁴` in the basis of squarefree
    /// degree-2 monomials ordered lexicographically by position pair.
    pub fn structure_table(&self) -> StructureTable {
        let m = self.m();
        let h4 = m * m.saturating_sub(1) / 2;
        let mut table = vec![vec![vec![0i64; h4]; m]; m];
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    table[a][b][pair_index(m, a, b)] = 1;
                } else {
                    for k in 0..a {
                        table[a][a][pair_index(m, k, a)] += self.alphas[a][k];
                    }
                }
            }
        }
        StructureTable {
            r: m,
            h4_dim: h4,
            table,
        }
    }

    pub fn mod2_structure(&self) -> Result<Mod2Table> {
        self.structure_table().mod2()
    }

    /// Eigen data of the mod-2 ring; requires all relation coefficients 0/1.
    pub fn eigen_data(&self) -> Result<Vec<Eigen>> {
        self.require_labels_one()?;
        eigen_data(&self.mod2_structure()?)
    }

    /// Square-zero primitive classes with coefficients in `[-bound, bound]`,
    /// one per sign pair (first nonzero coordinate positive).
    pub fn square_zero_primitives(&self, bound: i64) -> Result<Vec<Vec<i64>>> {
        self.require_labels_one()?;
        if bound < 2 {
            return Err(Error::BoundTooSmall(bound));
        }
        let t = self.structure_table();
        let e0 = zero_eigenspace(&t.mod2()?);
        square_zero_search(&t, bound, &e0)
    }

    /// `{x_j : j sink} ∪ {2x_k - x_j : α_k = x_j, j sink}`, normalized and sorted.
    pub fn square_zero_closed_form(&self) -> Vec<Vec<i64>> {
        let m = self.m();
        let sinks = self.sinks();
        let mut out = Vec::new();
        for &j in &sinks {
            let mut z = vec![0i64; m];
            z[j] = 1;
            out.push(z);
        }
        for k in 0..m {
            if let [j] = self.support(k)[..] {
                if sinks.contains(&j) && self.alphas[k][j] == 1 {
                    let mut z = vec![0i64; m];
                    z[k] = 2;
                    z[j] = -1;
                    out.push(normalize_sign(z));
                }
            }
        }
        out.sort();
        out
    }
}

/// Index of the monomial `x_a x_b` (`a != b`) among the lexicographic pairs.
pub fn pair_index(m: usize, a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    a * m - a * (a + 1) / 2 + (b - a - 1)
}

fn normalize_sign(mut z: Vec<i64>) -> Vec<i64> {
    if z.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        for c in z.iter_mut() {
            *c = -*c;
        }
    }
    z
}

/// Element of the ring in the squarefree monomial basis.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RingElement {
    terms: BTreeMap<u32, i64>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn one() -> Self {
        RingElement::monomial(0, 1)
    }

    pub fn monomial(mono: u32, coeff: i64) -> Self {
        let mut e = RingElement::zero();
        e.add_term(mono, coeff);
        e
    }

    /// `Σ coeffs[j] x_j`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let mut e = RingElement::zero();
        for (j, &c) in coeffs.iter().enumerate() {
            e.add_term(1 << j, c);
        }
        e
    }

    pub fn add_term(&mut self, mono: u32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(mono).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&mono);
        }
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        let mut e = self.clone();
        for (&m, &c) in &other.terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn scale(&self, k: i64) -> RingElement {
        let mut e = RingElement::zero();
        for (&m, &c) in &self.terms {
            e.add_term(m, c * k);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<u32, i64> {
        &self.terms
    }

    pub fn coefficient(&self, mono: u32) -> i64 {
        self.terms.get(&mono).copied().unwrap_or(0)
    }
}

/// Polynomial in the generators with arbitrary exponents, before reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    m: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl Polynomial {
    pub fn constant(m: usize, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(vec![0; m], c);
        }
        Polynomial { m, terms }
    }

    pub fn linear(coeffs: &[i64]) -> Self {
        let m = coeffs.len();
        let mut terms = BTreeMap::new();
        for (j, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; m];
                e[j] = 1;
                terms.insert(e, c);
            }
        }
        Polynomial { m, terms }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut terms: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert(0) += c1 * c2;
            }
        }
        terms.retain(|_, c| *c != 0);
        Polynomial { m: self.m, terms }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        (0..n).fold(Polynomial::constant(self.m, 1), |acc, _| acc.mul(self))
    }
}

/// Integral structure constants `table[a][b] ∈ Z^{h4_dim}` of `H² × H² → H⁴`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureTable {
    pub r: usize,
    pub h4_dim: usize,
    pub table: Vec<Vec<Vec<i64>>>,
}

impl StructureTable {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidInput(msg.to_string()));
        if self.table.len() != self.r
            || self
                .table
                .iter()
                .any(|row| row.len() != self.r || row.iter().any(|v| v.len() != self.h4_dim))
        {
            return bad("table shape does not match r and h4_dim");
        }
        for a in 0..self.r {
            for b in 0..a {
                if self.table[a][b] != self.table[b][a] {
                    return bad("table is not symmetric");
                }
            }
        }
        if self.h4_dim > 64 || self.r > MAX_GENERATORS {
            return bad("table too large for packed mod-2 arithmetic");
        }
        Ok(())
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let t: StructureTable = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serializes")
    }

    /// `z²` as an integer vector in `H⁴`.
    pub fn square(&self, z: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.h4_dim];
        for a in 0..self.r {
            if z[a] == 0 {
                continue;
            }
            for b in 0..self.r {
                if z[b] == 0 {
                    continue;
                }
                let f = z[a] * z[b];
                for (o, t) in out.iter_mut().zip(&self.table[a][b]) {
                    *o += f * t;
                }
            }
        }
        out
    }

    pub fn mod2(&self) -> Result<Mod2Table> {
        if self.h4_dim > 64 || self.r > MAX_GENERATORS {
            return Err(Error::InvalidInput(
                "table too large for packed mod-2 arithmetic".into(),
            ));
        }
        let pack = |v: &Vec<i64>| {
            v.iter()
                .enumerate()
                .filter(|(_, &c)| c.rem_euclid(2) == 1)
                .fold(0u64, |acc, (i, _)| acc | 1 << i)
        };
        Ok(Mod2Table {
            r: self.r,
            table: self
                .table
                .iter()
                .map(|row| row.iter().map(pack).collect())
                .collect(),
        })
    }
}

/// Structure constants mod 2 with `H⁴` vectors packed into `u64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mod2Table {
    pub r: usize,
    pub table: Vec<Vec<u64>>,
}

impl Mod2Table {
    pub fn product(&self, x: u32, y: u32) -> u64 {
        let mut acc = 0u64;
        for a in 0..self.r {
            if x >> a & 1 == 1 {
                for b in 0..self.r {
                    if y >> b & 1 == 1 {
                        acc ^= self.table[a][b];
                    }
                }
            }
        }
        acc
    }

    /// Squaring is additive mod 2: `x² = Σ_{a∈x} x_a²`.
    pub fn square(&self, x: u32) -> u64 {
        (0..self.r)
            .filter(|a| x >> a & 1 == 1)
            .fold(0u64, |acc, a| acc ^ self.table[a][a])
    }

    /// `E(α) = {x : x² = αx}`, the kernel of a linear map.
    pub fn eigenspace(&self, alpha: u32) -> Subspace2 {
        let images: Vec<u64> = (0..self.r)
            .map(|b| self.table[b][b] ^ self.product(alpha, 1 << b))
            .collect();
        gf2::kernel(&images)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Eigen {
    pub alpha: u32,
    pub space: Subspace2,
    /// `dim E(α)/⟨α⟩` (for `α = 0`, `dim E(0)`).
    pub multiplicity: usize,
}

pub fn zero_eigenspace(t: &Mod2Table) -> Subspace2 {
    t.eigenspace(0)
}

/// All eigenelements (zero first, then by encoding) with eigenspaces and
/// multiplicities; the multiplicities must add up to `r`.
pub fn eigen_data(t: &Mod2Table) -> Result<Vec<Eigen>> {
    let r = t.r;
    if r > MAX_GENERATORS {
        return Err(Error::InvalidInput("too many generators".into()));
    }
    let mut out = Vec::new();
    for alpha in 0u32..1 << r {
        let space = t.eigenspace(alpha);
        let mult = if alpha == 0 {
            space.dim()
        } else {
            if !space.contains(alpha) {
                return Err(Error::InvalidInput(format!(
                    "eigenspace of {alpha:#b} does not contain it"
                )));
            }
            space.dim() - 1
        };
        if mult >= 1 {
            out.push(Eigen {
                alpha,
                space,
                multiplicity: mult,
            });
        }
    }
    let total: usize = out.iter().map(|e| e.multiplicity).sum();
    if total != r {
        return Err(Error::MultiplicityTotal { total, rank: r });
    }
    Ok(out)
}

/// Box search for primitive square-zero classes whose reduction lies in
/// `e0 \ {0}`; one per sign pair.
pub fn square_zero_search(t: &StructureTable, bound: i64, e0: &Subspace2) -> Result<Vec<Vec<i64>>> {
    if bound < 2 {
        return Err(Error::BoundTooSmall(bound));
    }
    let r = t.r;
    let sparse: Vec<Vec<Vec<(usize, i64)>>> = t
        .table
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|e| *e.1 != 0)
                        .map(|(i, &c)| (i, c))
                        .collect()
                })
                .collect()
        })
        .collect();
    let odd: Vec<i64> = (-bound..=bound).filter(|c| c.rem_euclid(2) == 1).collect();
    let even: Vec<i64> = (-bound..=bound).filter(|c| c.rem_euclid(2) == 0).collect();
    let mut out = Vec::new();
    let mut sq = vec![0i64; t.h4_dim];
    for class in e0.elements() {
        if class == 0 {
            continue;
        }
        let choices: Vec<&Vec<i64>> = (0..r)
            .map(|a| if class >> a & 1 == 1 { &odd } else { &even })
            .collect();
        let mut idx = vec![0usize; r];
        loop {
            let z: Vec<i64> = (0..r).map(|a| choices[a][idx[a]]).collect();
            let first = z.iter().find(|&&c| c != 0).copied().unwrap_or(0);
            if first > 0 && linalg::gcd_all(&z) == 1 {
                sq.iter_mut().for_each(|x| *x = 0);
                for a in 0..r {
                    if z[a] == 0 {
                        continue;
                    }
                    for b in 0..r {
                        if z[b] == 0 {
                            continue;
                        }
                        for &(i, c) in &sparse[a][b] {
                            sq[i] += z[a] * z[b] * c;
                        }
                    }
                }
                if sq.iter().all(|&x| x == 0) {
                    out.push(z);
                }
            }
            // odometer
            let mut a = 0;
            while a < r {
                idx[a] += 1;
                if idx[a] < choices[a].len() {
                    break;
                }
                idx[a] = 0;
                a += 1;
            }
            if a == r {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&m, &c)| {
                let mono: Vec<String> = (0..32)
                    .filter(|j| m >> j & 1 == 1)
                    .map(|j| format!("x[{j}]"))
                    .collect();
                format!(
                    "{c}*{}",
                    if mono.is_empty() {
                        "1".into()
                    } else {
                        mono.join("")
                    }
                )
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
