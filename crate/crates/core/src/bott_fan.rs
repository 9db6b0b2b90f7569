//! The Bott fan of a toric word: rays, maximal cones, primitive collections
//! and their degrees.
//!
//! Ray `v_k` is the `k`-th unit vector and `w_k` is the `k`-th column of the
//! reduced characteristic matrix (both indexed by word position).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::linalg::{self, Matrix};
use crate::weyl_words::ToricWord;
use crate::{Error, Result};

/// Lower triangular, diagonal `-1`, entry `(j, k)` for `j > k` equal to
/// `-c_{i_j, i_k}`.
pub fn reduced_char_matrix(w: &ToricWord) -> Matrix {
    let m = w.len();
    let mut a = vec![vec![0i64; m]; m];
    for j in 0..m {
        a[j][j] = -1;
        for k in 0..j {
            a[j][k] = w.coefficient(j, k);
        }
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottFan {
    letters: Vec<usize>,
    w: Matrix,
}

/// The pair `{v_k, w_k}` and its relation `v_k + w_k = Σ_{j>k} a_j v_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimitiveCollection {
    /// 1-based word position.
    pub position: usize,
    pub letter: usize,
    pub v: Vec<i64>,
    pub w: Vec<i64>,
    /// `(position, coefficient)` with nonzero coefficients, positions 1-based.
    pub relation: Vec<(usize, i64)>,
    pub degree: i64,
}

/// Selects `v_k` (`false`) or `w_k` (`true`) for every position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaximalCone {
    pub choice: Vec<bool>,
}

impl MaximalCone {
    pub fn from_bits(m: usize, bits: u64) -> Self {
        MaximalCone {
            choice: (0..m).map(|k| bits >> k & 1 == 1).collect(),
        }
    }
}

impl BottFan {
    pub fn new(w: &ToricWord) -> Self {
        BottFan {
            letters: w.letters().to_vec(),
            w: reduced_char_matrix(w),
        }
    }

    pub fn dim(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn reduced_char_matrix(&self) -> &Matrix {
        &self.w
    }

    /// Ray `v_k` for 0-based position `k`.
    pub fn v_ray(&self, k: usize) -> Vec<i64> {
        (0..self.dim()).map(|i| i64::from(i == k)).collect()
    }

    /// Ray `w_k` for 0-based position `k`.
    pub fn w_ray(&self, k: usize) -> Vec<i64> {
        linalg::column(&self.w, k)
    }

    pub fn primitive_collections(&self) -> Vec<PrimitiveCollection> {
        (0..self.dim())
            .map(|k| PrimitiveCollection {
                position: k + 1,
                letter: self.letters[k],
                v: self.v_ray(k),
                w: self.w_ray(k),
                relation: (k + 1..self.dim())
                    .filter(|&j| self.w[j][k] != 0)
                    .map(|j| (j + 1, self.w[j][k]))
                    .collect(),
                degree: self.degree(k),
            })
            .collect()
    }

    /// Checks `v_k + w_k = Σ_{j>k} (-c_{i_j,i_k}) v_j` columnwise.
    pub fn primitive_relation_holds(&self, w: &ToricWord, k: usize) -> bool {
        let lhs: Vec<i64> = self
            .v_ray(k)
            .iter()
            .zip(self.w_ray(k))
            .map(|(a, b)| a + b)
            .collect();
        let mut rhs = vec![0i64; self.dim()];
        for j in k + 1..self.dim() {
            for (i, x) in self.v_ray(j).iter().enumerate() {
                rhs[i] += w.coefficient(j, k) * x;
            }
        }
        lhs == rhs
    }

    fn degree(&self, k: usize) -> i64 {
        2 - (k + 1..self.dim()).map(|j| self.w[j][k]).sum::<i64>()
    }

    /// Degree of the `k`-th collection (1-based): `2 - Σ_{j>k} (-c_{i_j,i_k})`.
    pub fn degree_of_collection(&self, k: usize) -> Result<i64> {
        if k == 0 || k > self.dim() {
            return Err(Error::IndexOutOfRange {
                index: k,
                bound: self.dim(),
            });
        }
        Ok(self.degree(k - 1))
    }

    pub fn degrees(&self) -> Vec<i64> {
        (0..self.dim()).map(|k| self.degree(k)).collect()
    }

    pub fn is_fano_batyrev(&self) -> bool {
        self.degrees().iter().all(|&d| d > 0)
    }

    pub fn is_weak_fano_batyrev(&self) -> bool {
        self.degrees().iter().all(|&d| d >= 0)
    }

    /// All `2^m` maximal cones. Panics for `m > 20`.
    pub fn maximal_cones(&self) -> impl Iterator<Item = MaximalCone> {
        let m = self.dim();
        assert!(m <= 20, "explicit cone enumeration limited to dimension 20");
        (0..1u64 << m).map(move |bits| MaximalCone::from_bits(m, bits))
    }

    /// Columns are the chosen generators in position order.
    pub fn maximal_cone_matrix(&self, cone: &MaximalCone) -> Matrix {
        let cols: Vec<Vec<i64>> = (0..self.dim())
            .map(|k| {
                if cone.choice[k] {
                    self.w_ray(k)
                } else {
                    self.v_ray(k)
                }
            })
            .collect();
        linalg::transpose(&cols)
    }

    /// Samples random integer points and checks each lies in the interior of
    /// exactly one maximal cone. Points on a cone boundary are redrawn.
    pub fn is_complete_sample_check(&self, n_samples: usize, seed: u64) -> bool {
        let cones: Vec<MaximalCone> = self.maximal_cones().collect();
        sample_cover_check(self, &cones, n_samples, seed)
    }
}

/// Like [`BottFan::is_complete_sample_check`] but over an explicit cone list,
/// so incomplete fans can be exercised.
pub fn sample_cover_check(
    fan: &BottFan,
    cones: &[MaximalCone],
    n_samples: usize,
    seed: u64,
) -> bool {
    let m = fan.dim();
    if m == 0 {
        return cones.len() == 1;
    }
    let inverses: Vec<Matrix> = cones
        .iter()
        .map(|c| linalg::unimodular_inverse(&fan.maximal_cone_matrix(c)))
        .collect::<Option<_>>()
        .unwrap_or_default();
    if inverses.len() != cones.len() {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut attempts = 0;
    while done < n_samples {
        attempts += 1;
        if attempts > 100 * n_samples {
            return false;
        }
        let p: Vec<i64> = (0..m).map(|_| rng.random_range(-1000..=1000)).collect();
        let mut hits = 0;
        let mut degenerate = false;
        for inv in &inverses {
            let coords = linalg::mat_vec(inv, &p);
            if coords.contains(&0) {
                degenerate = true;
                break;
            }
            if coords.iter().all(|&c| c > 0) {
                hits += 1;
            }
        }
        if degenerate {
            continue;
        }
        if hits != 1 {
            return false;
        }
        done += 1;
    }
    true
}

/// The linear map sending `v_j` of `w` to `v'_{f(j)}` of `w2`, checked to send
/// every `w_k` to `w'_{f(k)}`. `f` maps letters of `w` to letters of `w2`.
pub fn fan_iso_from_digraph_iso(
    w: &ToricWord,
    w2: &ToricWord,
    f: &BTreeMap<usize, usize>,
) -> Result<Matrix> {
    let m = w.len();
    if w2.len() != m {
        return Err(Error::DimensionMismatch(format!("{} vs {}", m, w2.len())));
    }
    let mut target = Vec::with_capacity(m);
    for &l in w.letters() {
        let img = f.get(&l).copied().ok_or(Error::VertexAbsent(l))?;
        let pos = w2.position(img).ok_or(Error::VertexAbsent(img))?;
        target.push(pos);
    }
    let mut sorted = target.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != m {
        return Err(Error::InvalidInput("vertex map is not a bijection".into()));
    }
    let mut phi = vec![vec![0i64; m]; m];
    for (j, &t) in target.iter().enumerate() {
        phi[t][j] = 1;
    }
    let fan = BottFan::new(w);
    let fan2 = BottFan::new(w2);
    for k in 0..m {
        if linalg::mat_vec(&phi, &fan.w_ray(k)) != fan2.w_ray(target[k]) {
            return Err(Error::FanIsoFailed(k + 1));
        }
    }
    Ok(phi)
}

/// The `a` with `X_w ≅ F_a` for a word of length 2.
pub fn hirzebruch_index(w: &ToricWord) -> Result<u8> {
    if w.len() != 2 {
        return Err(Error::Precondition(format!(
            "Hirzebruch index needs a word of length 2, got {}",
            w.len()
        )));
    }
    Ok(w.coefficient(1, 0) as u8)
}
