//! Reconstruction of the labeled digraph from the ring `H^*(X_w)` of a
//! simply-laced toric word, given only degree-2 and degree-4 structure
//! constants in some basis.
//!
//! Every vertex is represented by a slot carrying a GF(2) subspace of `H²`:
//! a sink line `⟨x_j⟩` for sinks, or the eigenspace `E(α_j)` otherwise. Slots
//! sharing an eigenspace are interchangeable until a join pins one of them to
//! a specific vector of that space.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::cohomology::{eigen_data, BottRing, Mod2Table, StructureTable};
use crate::digraph::LabeledDigraph;
use crate::gf2::{self, Subspace2};
use crate::linalg::{self, Matrix};
use crate::weyl_words::ToricWord;
use crate::{Error, Result};

pub const DEFAULT_BOX_BOUND: i64 = 3;

/// How sink lines are extracted from the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinkLineMethod {
    /// Reductions of square-zero primitives found by box search.
    BoxSearch(i64),
    /// `c ∈ E(0)` is a sink line iff its 0/1 lift squares to 0 mod 4.
    Mod4Lift,
    /// Nonzero eigenelements lying in `E(0)`; no integral data needed.
    Mod2Only,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMode {
    /// The canonical presentation basis; generator ids label the output.
    Trusted,
    /// Unknown basis; output vertices are numbered `1..=r`.
    Obfuscated { bound_hint: i64 },
}

#[derive(Debug, Clone)]
pub struct RecoveryInput {
    pub r: usize,
    pub table: Option<StructureTable>,
    pub mod2: Mod2Table,
    pub mode: BasisMode,
    pub sink_lines: SinkLineMethod,
    /// Generator ids in basis order (trusted mode).
    pub generator_ids: Option<Vec<usize>>,
}

impl RecoveryInput {
    /// Trusted-mode input from a presentation; refuses rings with a relation
    /// coefficient other than 0 or 1.
    pub fn trusted(ring: &BottRing) -> Result<Self> {
        if !ring.labels_one() {
            return Err(Error::Precondition(
                "recovery needs all digraph labels equal to 1; this ring has a coefficient 2 or 3"
                    .into(),
            ));
        }
        let table = ring.structure_table();
        Ok(RecoveryInput {
            r: ring.m(),
            mod2: table.mod2()?,
            table: Some(table),
            mode: BasisMode::Trusted,
            sink_lines: SinkLineMethod::BoxSearch(DEFAULT_BOX_BOUND),
            generator_ids: Some(ring.generators().to_vec()),
        })
    }

    /// Input from raw integral structure constants in an unknown basis.
    pub fn from_table(table: StructureTable) -> Result<Self> {
        table.validate()?;
        Ok(RecoveryInput {
            r: table.r,
            mod2: table.mod2()?,
            table: Some(table),
            mode: BasisMode::Obfuscated { bound_hint: 0 },
            sink_lines: SinkLineMethod::Mod4Lift,
            generator_ids: None,
        })
    }

    pub fn mod2_only(mod2: Mod2Table) -> Self {
        RecoveryInput {
            r: mod2.r,
            table: None,
            mod2,
            mode: BasisMode::Obfuscated { bound_hint: 0 },
            sink_lines: SinkLineMethod::Mod2Only,
            generator_ids: None,
        }
    }

    pub fn with_sink_lines(mut self, method: SinkLineMethod) -> Self {
        self.sink_lines = method;
        self
    }
}

/// Recovery input for a word; refuses non-simply-laced types.
pub fn input_for_word(w: &ToricWord) -> Result<RecoveryInput> {
    if !w.datum().is_simply_laced() {
        return Err(Error::Precondition(format!(
            "recovery is only defined for simply-laced types, got {}",
            w.datum()
        )));
    }
    RecoveryInput::trusted(&crate::cohomology::presentation(w))
}

/// Random unimodular matrix with entries in `[-max_entry, max_entry]`.
pub fn random_unimodular<R: Rng>(n: usize, max_entry: i64, rng: &mut R) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut p = vec![vec![0i64; n]; n];
    for i in 0..n {
        p[i][perm[i]] = if rng.random_bool(0.5) { 1 } else { -1 };
    }
    if n < 2 {
        return p;
    }
    for _ in 0..6 * n {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        let s = if rng.random_bool(0.5) { 1 } else { -1 };
        let row: Vec<i64> = (0..n).map(|c| p[i][c] + s * p[j][c]).collect();
        if row.iter().all(|x| x.abs() <= max_entry) {
            p[i] = row;
        }
    }
    p
}

/// [`obfuscate`] with `P` and `Q` drawn from a seeded generator, entries in
/// `[-max_entry, max_entry]`.
pub fn obfuscate_seeded(ring: &BottRing, seed: u64, max_entry: i64) -> Result<RecoveryInput> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let r = ring.m();
    let p = random_unimodular(r, max_entry, &mut rng);
    let q = random_unimodular(r * r.saturating_sub(1) / 2, max_entry, &mut rng);
    obfuscate(ring, &p, Some(&q))
}

/// Structure constants of `ring` in the basis with coordinates `z' = P z`,
/// optionally followed by an independent change `Q` of `H⁴` coordinates.
pub fn obfuscate(ring: &BottRing, p: &Matrix, q: Option<&Matrix>) -> Result<RecoveryInput> {
    let r = ring.m();
    if p.len() != r || p.iter().any(|row| row.len() != r) {
        return Err(Error::DimensionMismatch(format!("P must be {r}x{r}")));
    }
    let pinv = linalg::unimodular_inverse(p).ok_or(Error::NotUnimodular)?;
    let t = ring.structure_table();
    let h4 = t.h4_dim;
    if let Some(q) = q {
        if q.len() != h4 || q.iter().any(|row| row.len() != h4) {
            return Err(Error::DimensionMismatch(format!("Q must be {h4}x{h4}")));
        }
        if !linalg::is_unimodular(q) {
            return Err(Error::NotUnimodular);
        }
    }
    let mut table = vec![vec![vec![0i64; h4]; r]; r];
    for a in 0..r {
        for b in 0..r {
            let mut v = vec![0i64; h4];
            for c in 0..r {
                for d in 0..r {
                    let f = pinv[c][a] * pinv[d][b];
                    if f != 0 {
                        for (x, y) in v.iter_mut().zip(&t.table[c][d]) {
                            *x += f * y;
                        }
                    }
                }
            }
            table[a][b] = match q {
                Some(q) => linalg::mat_vec(q, &v),
                None => v,
            };
        }
    }
    let max = p.iter().flatten().map(|x| x.abs()).max().unwrap_or(1);
    let table = StructureTable {
        r,
        h4_dim: h4,
        table,
    };
    let mut input = RecoveryInput::from_table(table)?;
    input.mode = BasisMode::Obfuscated {
        bound_hint: 9 * max,
    };
    Ok(input)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slot {
    pub space: Subspace2,
    /// Zero for sink lines.
    pub alpha: u32,
    pub pin: Option<u32>,
    /// Eigenelement shared by interchangeable slots; `None` for sink lines.
    pub group: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step3Trace {
    pub unplaced: Vec<usize>,
    pub leaves: Vec<usize>,
    pub r1: Vec<usize>,
    pub r2: Vec<usize>,
    pub r3: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// Intermediate results in slot indices; `labels[s]` names slot `s`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RecoveryTrace {
    pub step2_edges: Vec<(usize, usize)>,
    pub step2_components: Vec<Vec<usize>>,
    pub step3: Option<Step3Trace>,
    pub step4_edges: Option<Vec<(usize, usize)>>,
    pub step5_edges: Option<Vec<(usize, usize)>>,
    pub labels: Vec<usize>,
}

impl RecoveryTrace {
    pub fn steps_run(&self) -> Vec<u8> {
        let mut s = vec![1, 2];
        if self.step3.is_some() {
            s.push(3);
        }
        if self.step4_edges.is_some() {
            s.push(4);
        }
        if self.step5_edges.is_some() {
            s.push(5);
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct RecoveryOutput {
    pub graph: LabeledDigraph,
    pub slots: Vec<Slot>,
    pub trace: RecoveryTrace,
}

/// Slots, placement flags and edges `from → to` between slot indices.
#[derive(Debug, Clone)]
pub struct SlotGraph {
    pub slots: Vec<Slot>,
    pub placed: Vec<bool>,
    pub edges: Vec<(usize, usize)>,
}

type Decomposition = (Vec<usize>, Vec<u32>);

impl SlotGraph {
    fn n(&self) -> usize {
        self.slots.len()
    }

    pub fn all_placed(&self) -> bool {
        self.placed.iter().all(|&p| p)
    }

    fn group_members(&self, t: usize) -> Vec<usize> {
        match self.slots[t].group {
            Some(g) => (0..self.n())
                .filter(|&i| self.slots[i].group == Some(g))
                .collect(),
            None => vec![t],
        }
    }

    /// Vectors slot `t` may still stand for.
    fn candidates(&self, t: usize) -> Vec<u32> {
        let s = &self.slots[t];
        if let Some(p) = s.pin {
            return vec![p];
        }
        let excl = Subspace2::span(
            std::iter::once(s.alpha).chain(
                self.group_members(t)
                    .into_iter()
                    .filter(|&i| i != t)
                    .filter_map(|i| self.slots[i].pin),
            ),
        );
        s.space
            .elements()
            .into_iter()
            .filter(|&u| !excl.contains(u))
            .collect()
    }

    /// A placed slot interchangeable with `cur` that is, or can be, pinned to `u`.
    fn pick_target(&self, cur: usize, u: u32) -> Option<usize> {
        let opts: Vec<usize> = self
            .group_members(cur)
            .into_iter()
            .filter(|&i| self.placed[i])
            .collect();
        opts.iter()
            .copied()
            .find(|&i| self.slots[i].pin == Some(u))
            .or_else(|| {
                opts.iter()
                    .copied()
                    .find(|&i| self.slots[i].pin.is_none() && self.candidates(i).contains(&u))
            })
    }

    fn attach(&mut self, from: usize, to: usize, u: u32) {
        self.slots[to].pin = Some(u);
        self.edges.push((from, to));
        self.placed[from] = true;
    }

    fn undirected_degree(&self, s: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == s || e.1 == s).count()
    }

    /// Components of placed slots, each sorted, ordered by first element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if !self.placed[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                for &(a, b) in &self.edges {
                    let other = if a == u {
                        b
                    } else if b == u {
                        a
                    } else {
                        continue;
                    };
                    if !seen[other] {
                        seen[other] = true;
                        comp.push(other);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn key(&self, t: usize) -> (u8, u32) {
        match self.slots[t].group {
            Some(g) => (0, g),
            None => (1, t as u32),
        }
    }

    /// Ways to write `α_j` as a sum of `k` candidate vectors of distinct pool
    /// slots, with vectors chosen in one eigenspace independent modulo its
    /// eigenelement and the pins of its other slots.
    fn decompositions(&self, j: usize, pool: &[usize], k: usize) -> Vec<Decomposition> {
        let alpha = self.slots[j].alpha;
        let mut out = Vec::new();
        for ts in pool.iter().copied().combinations(k) {
            let lists: Vec<Vec<u32>> = ts.iter().map(|&t| self.candidates(t)).collect();
            for choice in lists
                .iter()
                .map(|l| l.iter().copied())
                .multi_cartesian_product()
            {
                if choice.iter().fold(0, |a, &c| a ^ c) != alpha {
                    continue;
                }
                if self.independent_within_groups(&ts, &choice) {
                    out.push((ts.clone(), choice));
                }
            }
        }
        out
    }

    fn independent_within_groups(&self, ts: &[usize], choice: &[u32]) -> bool {
        let groups: BTreeSet<u32> = ts.iter().filter_map(|&t| self.slots[t].group).collect();
        groups.into_iter().all(|g| {
            let chosen: Vec<u32> = ts
                .iter()
                .zip(choice)
                .filter(|(&t, _)| self.slots[t].group == Some(g))
                .map(|(_, &c)| c)
                .collect();
            let pinned: Vec<u32> = (0..self.n())
                .filter(|i| !ts.contains(i) && self.slots[*i].group == Some(g))
                .filter_map(|i| self.slots[i].pin)
                .collect();
            let span = Subspace2::span(
                std::iter::once(g)
                    .chain(pinned.iter().copied())
                    .chain(chosen.iter().copied()),
            );
            span.dim() == 1 + pinned.len() + chosen.len()
        })
    }

    fn unique_decomposition(
        &self,
        ds: &[Decomposition],
        step: &str,
        j: usize,
    ) -> Result<Decomposition> {
        let keys: BTreeSet<Vec<((u8, u32), u32)>> = ds
            .iter()
            .map(|(ts, ch)| {
                let mut k: Vec<_> = ts
                    .iter()
                    .map(|&t| self.key(t))
                    .zip(ch.iter().copied())
                    .collect();
                k.sort_unstable();
                k
            })
            .collect();
        match keys.len() {
            1 => Ok(ds[0].clone()),
            0 => Err(Error::recovery(
                step,
                format!("no admissible decomposition for slot {j}"),
            )),
            n => Err(Error::recovery(
                step,
                format!("{n} inequivalent decompositions for slot {j}"),
            )),
        }
    }

    fn join(&mut self, j: usize, d: &Decomposition) -> Vec<(usize, usize)> {
        let (ts, ch) = d;
        for (&t, &c) in ts.iter().zip(ch) {
            self.slots[t].pin = Some(c);
            self.edges.push((j, t));
        }
        self.placed[j] = true;
        ts.iter().map(|&t| (j, t)).collect()
    }
}

/// Sink lines of the ring, as vectors in `H²` mod 2.
fn sink_lines(input: &RecoveryInput, e0: &Subspace2) -> Result<Vec<u32>> {
    let mut lines: Vec<u32> =
        match input.sink_lines {
            SinkLineMethod::BoxSearch(b) => {
                let t = input.table.as_ref().ok_or_else(|| {
                    Error::recovery("step1", "box search needs the integral table")
                })?;
                crate::cohomology::square_zero_search(t, b, e0)
                    .map_err(|e| Error::recovery("step1", e.to_string()))?
                    .iter()
                    .map(|z| {
                        z.iter()
                            .enumerate()
                            .filter(|(_, &c)| c.rem_euclid(2) == 1)
                            .fold(0u32, |acc, (a, _)| acc | 1 << a)
                    })
                    .collect()
            }
            SinkLineMethod::Mod4Lift => {
                let t = input.table.as_ref().ok_or_else(|| {
                    Error::recovery("step1", "mod-4 test needs the integral table")
                })?;
                e0.elements()
                    .into_iter()
                    .filter(|&c| c != 0)
                    .filter(|&c| {
                        let z: Vec<i64> = (0..t.r).map(|a| i64::from(c >> a & 1 == 1)).collect();
                        t.square(&z).iter().all(|x| x.rem_euclid(4) == 0)
                    })
                    .collect()
            }
            SinkLineMethod::Mod2Only => {
                let mut v: Vec<u32> = eigen_data(&input.mod2)?
                    .into_iter()
                    .map(|e| e.alpha)
                    .filter(|&a| a != 0 && e0.contains(a))
                    .collect();
                if e0.dim() == 1 {
                    v.push(e0.basis()[0]);
                }
                v
            }
        };
    lines.sort_unstable();
    lines.dedup();
    if lines.len() != e0.dim() || Subspace2::span(lines.iter().copied()).dim() != lines.len() {
        return Err(Error::recovery(
            "step1",
            format!(
                "found {} sink lines but the zero eigenspace has dimension {}",
                lines.len(),
                e0.dim()
            ),
        ));
    }
    Ok(lines)
}

/// Step 1: one slot per sink line, then `dim Ē(α)` slots per nonzero eigenelement.
pub fn step1_spaces(input: &RecoveryInput) -> Result<SlotGraph> {
    let eig = eigen_data(&input.mod2).map_err(|e| Error::recovery("step1", e.to_string()))?;
    let e0 = eig
        .iter()
        .find(|e| e.alpha == 0)
        .map(|e| e.space.clone())
        .unwrap_or_else(Subspace2::zero);
    let mut slots = Vec::new();
    for line in sink_lines(input, &e0)? {
        slots.push(Slot {
            space: Subspace2::span([line]),
            alpha: 0,
            pin: Some(line),
            group: None,
        });
    }
    for e in eig.iter().filter(|e| e.alpha != 0) {
        for _ in 0..e.multiplicity {
            slots.push(Slot {
                space: e.space.clone(),
                alpha: e.alpha,
                pin: None,
                group: Some(e.alpha),
            });
        }
    }
    if slots.len() != input.r {
        return Err(Error::recovery(
            "step1",
            format!("{} slots for rank {}", slots.len(), input.r),
        ));
    }
    let n = slots.len();
    Ok(SlotGraph {
        slots,
        placed: vec![false; n],
        edges: Vec::new(),
    })
}

/// Step 2: grow trees from every sink slot along 1-dimensional intersections.
pub fn step2_grow(sg: &mut SlotGraph) -> Result<Vec<(usize, usize)>> {
    let mut added = Vec::new();
    for s in 0..sg.n() {
        if sg.slots[s].alpha != 0 || sg.placed[s] {
            continue;
        }
        sg.placed[s] = true;
        let mut frontier = std::collections::VecDeque::from([s]);
        while let Some(cur) = frontier.pop_front() {
            for a in 0..sg.n() {
                if sg.placed[a] {
                    continue;
                }
                let inter = sg.slots[a].space.intersection(&sg.slots[cur].space);
                if inter.dim() == 1 {
                    let u = inter.basis()[0];
                    let t = sg.pick_target(cur, u).ok_or_else(|| {
                        Error::recovery(
                            "step2",
                            format!(
                                "no slot of {cur}'s eigenspace can stand for the shared vector"
                            ),
                        )
                    })?;
                    sg.attach(a, t, u);
                    added.push((a, t));
                    frontier.push_back(a);
                }
            }
        }
    }
    Ok(added)
}

/// Step 3: join unplaced slots whose eigenelement splits over two (or three)
/// placed slots in a unique way.
pub fn step3_join(sg: &mut SlotGraph) -> Result<Option<Step3Trace>> {
    if sg.all_placed() {
        return Ok(None);
    }
    let unplaced: Vec<usize> = (0..sg.n()).filter(|&j| !sg.placed[j]).collect();
    let pool: Vec<usize> = (0..sg.n()).filter(|&t| sg.placed[t]).collect();
    let leaves: Vec<usize> = pool
        .iter()
        .copied()
        .filter(|&t| sg.undirected_degree(t) <= 1)
        .collect();
    let (mut r1, mut r2, mut r3) = (Vec::new(), Vec::new(), Vec::new());
    for &j in &unplaced {
        if !sg.decompositions(j, &pool, 2).is_empty() {
            r1.push(j);
        } else if !sg.decompositions(j, &pool, 3).is_empty() {
            r2.push(j);
        } else {
            r3.push(j);
        }
    }
    let mut edges = Vec::new();
    for (&j, k) in r1.iter().map(|j| (j, 2)).chain(r2.iter().map(|j| (j, 3))) {
        let ds = sg.decompositions(j, &pool, k);
        let d = sg.unique_decomposition(&ds, "step3", j)?;
        edges.extend(sg.join(j, &d));
    }
    Ok(Some(Step3Trace {
        unplaced,
        leaves,
        r1,
        r2,
        r3,
        edges,
    }))
}

/// Step 4: attach the remaining slots through the unique pair with a
/// 1-dimensional intersection, then extend that chain.
pub fn step4_trivalent(sg: &mut SlotGraph) -> Result<Option<Vec<(usize, usize)>>> {
    if sg.all_placed() {
        return Ok(None);
    }
    let mut pairs = Vec::new();
    for a in (0..sg.n()).filter(|&a| !sg.placed[a]) {
        for b in (0..sg.n()).filter(|&b| sg.placed[b]) {
            let inter = sg.slots[a].space.intersection(&sg.slots[b].space);
            if inter.dim() == 1 {
                pairs.push((a, b, inter.basis()[0]));
            }
        }
    }
    let keys: BTreeSet<(usize, (u8, u32))> =
        pairs.iter().map(|&(a, b, _)| (a, sg.key(b))).collect();
    if keys.len() > 1 {
        return Err(Error::recovery(
            "step4",
            format!("{} candidate pairs, expected a unique one", keys.len()),
        ));
    }
    let Some(&(a, b, u)) = pairs.first() else {
        return Ok(Some(Vec::new()));
    };
    let t = sg
        .pick_target(b, u)
        .ok_or_else(|| Error::recovery("step4", "no slot can stand for the shared vector"))?;
    sg.attach(a, t, u);
    let mut added = vec![(a, t)];
    let mut chain = vec![a];
    loop {
        let mut grew = false;
        'search: for j in 0..sg.n() {
            if sg.placed[j] {
                continue;
            }
            for ci in 0..chain.len() {
                let c = chain[ci];
                let inter = sg.slots[j].space.intersection(&sg.slots[c].space);
                if inter.dim() == 1 {
                    let u = inter.basis()[0];
                    let t = sg.pick_target(c, u).ok_or_else(|| {
                        Error::recovery("step4", "no chain slot can stand for the shared vector")
                    })?;
                    sg.attach(j, t, u);
                    added.push((j, t));
                    chain.push(j);
                    grew = true;
                    break 'search;
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ok(Some(added))
}

/// Step 5: the single remaining slot splits its eigenelement over two (or
/// three) placed slots.
pub fn step5_final(sg: &mut SlotGraph) -> Result<Option<Vec<(usize, usize)>>> {
    let left: Vec<usize> = (0..sg.n()).filter(|&j| !sg.placed[j]).collect();
    match left[..] {
        [] => Ok(None),
        [k] => {
            let pool: Vec<usize> = (0..sg.n()).filter(|&t| sg.placed[t]).collect();
            let mut ds = sg.decompositions(k, &pool, 2);
            if ds.is_empty() {
                ds = sg.decompositions(k, &pool, 3);
            }
            let d = sg.unique_decomposition(&ds, "step5", k)?;
            Ok(Some(sg.join(k, &d)))
        }
        _ => Err(Error::recovery(
            "step5",
            format!("{} slots remain unplaced, expected one", left.len()),
        )),
    }
}

/// Runs steps 1–5 and validates the result against the input ring.
pub fn recover(input: &RecoveryInput) -> Result<RecoveryOutput> {
    let mut sg = step1_spaces(input)?;
    let mut trace = RecoveryTrace {
        step2_edges: step2_grow(&mut sg)?,
        ..Default::default()
    };
    trace.step2_components = sg.components();
    trace.step3 = step3_join(&mut sg)?;
    trace.step4_edges = step4_trivalent(&mut sg)?;
    trace.step5_edges = step5_final(&mut sg)?;
    trace.labels = slot_labels(input, &sg);
    let mut graph = LabeledDigraph::new(trace.labels.iter().copied(), [])?;
    for &(a, b) in &sg.edges {
        graph
            .add_edge(trace.labels[a], trace.labels[b], 1)
            .map_err(|e| Error::recovery("validation", e.to_string()))?;
    }
    certify(input, &sg)?;
    validate(input, &graph)?;
    Ok(RecoveryOutput {
        graph,
        slots: sg.slots,
        trace,
    })
}

/// Trusted mode: the generator whose unit vector the slot stands for.
/// Otherwise slots are numbered `1..=r`.
fn slot_labels(input: &RecoveryInput, sg: &SlotGraph) -> Vec<usize> {
    let n = sg.n();
    let fallback: Vec<usize> = (1..=n).collect();
    let Some(ids) = input
        .generator_ids
        .as_ref()
        .filter(|_| input.mode == BasisMode::Trusted)
    else {
        return fallback;
    };
    let unit = |v: u32| (v.count_ones() == 1).then(|| v.trailing_zeros() as usize);
    let mut label: Vec<Option<usize>> = sg.slots.iter().map(|s| s.pin.and_then(unit)).collect();
    let mut used: BTreeSet<usize> = label.iter().flatten().copied().collect();
    for t in 0..n {
        if label[t].is_some() {
            continue;
        }
        let s = &sg.slots[t];
        let pick = (0..n)
            .filter(|&p| !used.contains(&p) && 1u32 << p != s.alpha && s.space.contains(1 << p))
            .min();
        if let Some(p) = pick {
            label[t] = Some(p);
            used.insert(p);
        }
    }
    match label.into_iter().collect::<Option<Vec<usize>>>() {
        Some(l) if used.len() == n => l.into_iter().map(|p| ids[p]).collect(),
        _ => fallback,
    }
}

/// Completes the pins to a basis `x̂` and checks `x̂_j ∈ E(α_j)`,
/// `α_j = Σ_{j→k} x̂_k`, independence, and that the edges form a forest.
fn certify(input: &RecoveryInput, sg: &SlotGraph) -> Result<()> {
    let fail = |msg: String| Err(Error::recovery("validation", msg));
    let mut sg = sg.clone();
    for t in 0..sg.n() {
        if sg.slots[t].pin.is_none() {
            match sg.candidates(t).first() {
                Some(&c) => sg.slots[t].pin = Some(c),
                None => return fail(format!("slot {t} has no admissible vector")),
            }
        }
    }
    let xs: Vec<u32> = sg.slots.iter().map(|s| s.pin.unwrap()).collect();
    if Subspace2::span(xs.iter().copied()).dim() != sg.n() {
        return fail("slot vectors do not form a basis".into());
    }
    for (j, s) in sg.slots.iter().enumerate() {
        if !s.space.contains(xs[j])
            || input.mod2.square(xs[j]) != input.mod2.product(s.alpha, xs[j])
        {
            return fail(format!("slot {j} vector is not in its eigenspace"));
        }
        let sum = sg
            .edges
            .iter()
            .filter(|e| e.0 == j)
            .fold(0u32, |a, e| a ^ xs[e.1]);
        if sum != s.alpha {
            return fail(format!(
                "slot {j}: eigenelement is not the sum of its targets"
            ));
        }
    }
    let products: Vec<u64> = (0..sg.n())
        .tuple_combinations()
        .map(|(a, b)| input.mod2.product(xs[a], xs[b]))
        .collect();
    if gf2::rank64(&products) != products.len() {
        return fail("degree-4 products are dependent".into());
    }
    let comps = sg.components().len();
    if sg.edges.len() + comps != sg.n() {
        return fail("slot edges do not form a forest".into());
    }
    Ok(())
}

/// Re-derives the ring of `graph` and compares mod-2 invariants.
fn validate(input: &RecoveryInput, graph: &LabeledDigraph) -> Result<()> {
    let fail = |msg: String| Err(Error::recovery("validation", msg));
    if graph.has_directed_cycle() {
        return fail("output has a directed cycle".into());
    }
    let ring = BottRing::from_digraph(graph)?;
    let ours = eigen_data(&ring.mod2_structure()?)?;
    let theirs = eigen_data(&input.mod2)?;
    let profile = |e: &[crate::cohomology::Eigen]| {
        let mut v: Vec<(bool, usize)> = e.iter().map(|x| (x.alpha == 0, x.multiplicity)).collect();
        v.sort_unstable();
        v
    };
    if profile(&ours) != profile(&theirs) {
        return fail("eigen multiplicities differ from the input ring".into());
    }
    let dim0 = theirs
        .iter()
        .find(|e| e.alpha == 0)
        .map_or(0, |e| e.multiplicity);
    if graph.sinks().len() != dim0 {
        return fail("sink count differs from the zero eigenspace dimension".into());
    }
    Ok(())
}

/// Names of the slots in a trace, for display: `V<label>`.
pub fn slot_names(trace: &RecoveryTrace, slots: &[usize]) -> Vec<String> {
    slots
        .iter()
        .map(|&s| format!("V{}", trace.labels[s]))
        .collect()
}

/// Edges of a trace relabeled through `trace.labels`.
pub fn labeled_edges(trace: &RecoveryTrace, edges: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    edges
        .iter()
        .map(|&(a, b)| (trace.labels[a], trace.labels[b]))
        .collect()
}

/// Components of a trace relabeled through `trace.labels`.
pub fn labeled_components(trace: &RecoveryTrace) -> BTreeSet<BTreeSet<usize>> {
    trace
        .step2_components
        .iter()
        .map(|c| c.iter().map(|&s| trace.labels[s]).collect())
        .collect()
}

/// Labels of a list of slots.
pub fn labeled_set(trace: &RecoveryTrace, slots: &[usize]) -> BTreeSet<usize> {
    slots.iter().map(|&s| trace.labels[s]).collect()
}

/// Groups slots by the eigenspace they carry (for diagnostics).
pub fn slot_groups(slots: &[Slot]) -> BTreeMap<u32, Vec<usize>> {
    let mut m: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, s) in slots.iter().enumerate() {
        m.entry(s.alpha).or_default().push(i);
    }
    m
}
