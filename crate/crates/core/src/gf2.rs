//! Linear algebra over GF(2) with vectors packed into machine words.
//!
//! H² vectors use `u32` (bit `a` is the coefficient of basis element `a`).

use serde::Serialize;

/// A subspace of `GF(2)^n`, stored as a reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace2 {
    basis: Vec<u32>,
}

impl Subspace2 {
    pub fn zero() -> Self {
        Subspace2 { basis: Vec::new() }
    }

    pub fn span(vectors: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Subspace2::zero();
        for v in vectors {
            s.insert(v);
        }
        s
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: u32) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let pivot = 31 - v.leading_zeros();
        for b in self.basis.iter_mut() {
            if *b >> pivot & 1 == 1 {
                *b ^= v;
            }
        }
        self.basis.push(v);
        self.basis.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    /// Residue of `v` modulo the subspace (zero iff `v` is contained).
    pub fn reduce(&self, mut v: u32) -> u32 {
        for &b in &self.basis {
            let pivot = 31 - b.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    pub fn contains(&self, v: u32) -> bool {
        self.reduce(v) == 0
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// All `2^dim` elements, in order of their coordinate masks.
    pub fn elements(&self) -> Vec<u32> {
        let d = self.dim();
        (0u64..1 << d)
            .map(|mask| {
                (0..d)
                    .filter(|i| mask >> i & 1 == 1)
                    .fold(0u32, |acc, i| acc ^ self.basis[i])
            })
            .collect()
    }

    pub fn sum(&self, other: &Subspace2) -> Subspace2 {
        let mut s = self.clone();
        for &b in &other.basis {
            s.insert(b);
        }
        s
    }

    pub fn intersection(&self, other: &Subspace2) -> Subspace2 {
        let (small, big) = if self.dim() <= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        Subspace2::span(small.elements().into_iter().filter(|&v| big.contains(v)))
    }

    pub fn intersection_dim(&self, other: &Subspace2) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace2) -> bool {
        self.basis.iter().all(|&b| other.contains(b))
    }
}

/// Kernel of the linear map sending basis vector `b` to `images[b]`
/// (images packed in `u64`).
pub fn kernel(images: &[u64]) -> Subspace2 {
    // Eliminate on (image, tag) pairs; tags track the preimage combination.
    let mut rows: Vec<(u64, u32)> = Vec::new();
    let mut ker = Subspace2::zero();
    for (b, &img) in images.iter().enumerate() {
        let mut v = img;
        let mut tag = 1u32 << b;
        for &(rv, rt) in &rows {
            let pivot = 63 - rv.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= rv;
                tag ^= rt;
            }
        }
        if v == 0 {
            ker.insert(tag);
        } else {
            rows.push((v, tag));
            rows.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        }
    }
    ker
}

/// Rank of a family of `u64` vectors.
pub fn rank64(vectors: &[u64]) -> usize {
    let mut rows: Vec<u64> = Vec::new();
    for &v0 in vectors {
        let mut v = v0;
        for &r in &rows {
            let pivot = 63 - r.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            rows.push(v);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    rows.len()
}

/// Human-readable sum of generators, e.g. `x2+x4`, using `names[a]` for bit `a`.
pub fn format_vector(v: u32, names: &[usize]) -> String {
    if v == 0 {
        return "0".to_string();
    }
    (0..32)
        .filter(|a| v >> a & 1 == 1)
        .map(|a| format!("x{}", names.get(a).copied().unwrap_or(a + 1)))
        .collect::<Vec<_>>()
        .join("+")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basics() {
        let s = Subspace2::span([0b011, 0b110, 0b101]);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(0b101) && !s.contains(0b001));
        assert_eq!(s.elements().len(), 4);
        let t = Subspace2::span([0b001, 0b010]);
        assert_eq!(s.intersection(&t), Subspace2::span([0b011]));
        assert_eq!(s.intersection_dim(&t), 1);
    }

    #[test]
    fn kernel_of_map() {
        // b0 -> e0, b1 -> e0, b2 -> 0
        let k = kernel(&[1, 1, 0]);
        assert_eq!(k, Subspace2::span([0b011, 0b100]));
        assert_eq!(rank64(&[1, 1, 0, 2]), 2);
    }

    proptest! {
        #[test]
        fn canonical_basis(vs in proptest::collection::vec(0u32..256, 0..8), perm_seed in 0usize..100) {
            let a = Subspace2::span(vs.iter().copied());
            let mut ws = vs.clone();
            ws.rotate_left(if vs.is_empty() { 0 } else { perm_seed % vs.len() });
            let b = Subspace2::span(ws);
            prop_assert_eq!(&a, &b);
            let elems = a.elements();
            let mut uniq = elems.clone();
            uniq.sort();
            uniq.dedup();
            prop_assert_eq!(uniq.len(), elems.len());
            for v in 0u32..256 {
                prop_assert_eq!(a.contains(v), elems.contains(&v));
            }
        }

        #[test]
        fn kernel_brute(images in proptest::collection::vec(0u64..64, 1..7)) {
            let k = kernel(&images);
            let n = images.len();
            for x in 0u32..(1 << n) {
                let img = (0..n).filter(|b| x >> b & 1 == 1).fold(0u64, |acc, b| acc ^ images[b]);
                prop_assert_eq!(img == 0, k.contains(x));
            }
        }
    }
}
