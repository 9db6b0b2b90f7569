//! Edge-labeled digraphs attached to toric words, Fano tests by indegree, and
//! canonical forms for isomorphism testing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::weyl_words::ToricWord;
use crate::{Error, Result};

pub const DEFAULT_VERTEX_BOUND: usize = 16;

/// Vertices are arbitrary positive integers; an edge `(u, v)` with label `k`
/// means `u → v`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LabeledDigraph {
    vertices: BTreeSet<usize>,
    edges: BTreeMap<(usize, usize), u8>,
}

#[derive(Serialize, Deserialize)]
struct DigraphJson {
    vertices: Vec<usize>,
    edges: Vec<(usize, usize, u8)>,
}

impl LabeledDigraph {
    pub fn new(
        vertices: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = (usize, usize, u8)>,
    ) -> Result<Self> {
        let mut g = LabeledDigraph {
            vertices: vertices.into_iter().collect(),
            edges: BTreeMap::new(),
        };
        for (u, v, l) in edges {
            g.add_edge(u, v, l)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: usize) {
        self.vertices.insert(v);
    }

    pub fn add_edge(&mut self, u: usize, v: usize, label: u8) -> Result<()> {
        for x in [u, v] {
            if !self.vertices.contains(&x) {
                return Err(Error::VertexAbsent(x));
            }
        }
        if u == v || !(1..=3).contains(&label) {
            return Err(Error::InvalidInput(format!(
                "bad edge {u}->{v} label {label}"
            )));
        }
        if self.edges.contains_key(&(u, v)) || self.edges.contains_key(&(v, u)) {
            return Err(Error::InvalidInput(format!(
                "duplicate edge between {u} and {v}"
            )));
        }
        self.edges.insert((u, v), label);
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    /// Edges `(u, v, label)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u8)> + '_ {
        self.edges.iter().map(|(&(u, v), &l)| (u, v, l))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, u: usize, v: usize) -> Option<u8> {
        self.edges.get(&(u, v)).copied()
    }

    pub fn out_neighbors(&self, u: usize) -> Vec<usize> {
        self.edges().filter(|e| e.0 == u).map(|e| e.1).collect()
    }

    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        self.edges().filter(|e| e.1 == v).map(|e| e.0).collect()
    }

    /// Sum of the labels of edges into `v`.
    pub fn indegree(&self, v: usize) -> Result<u32> {
        if !self.contains(v) {
            return Err(Error::VertexAbsent(v));
        }
        Ok(self.edges().filter(|e| e.1 == v).map(|e| e.2 as u32).sum())
    }

    pub fn max_indegree(&self) -> u32 {
        self.vertices()
            .map(|v| self.indegree(v).unwrap())
            .max()
            .unwrap_or(0)
    }

    pub fn is_fano(&self) -> bool {
        self.max_indegree() <= 1
    }

    pub fn is_weak_fano(&self) -> bool {
        self.max_indegree() <= 2
    }

    /// Vertices without outgoing edges.
    pub fn sinks(&self) -> BTreeSet<usize> {
        let has_out: BTreeSet<usize> = self.edges().map(|e| e.0).collect();
        self.vertices().filter(|v| !has_out.contains(v)).collect()
    }

    /// Vertices without incoming edges.
    pub fn sources(&self) -> BTreeSet<usize> {
        let has_in: BTreeSet<usize> = self.edges().map(|e| e.1).collect();
        self.vertices().filter(|v| !has_in.contains(v)).collect()
    }

    /// Components of the underlying undirected graph, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<LabeledDigraph> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(u) = stack.pop() {
                for (a, b, _) in self.edges() {
                    let other = if a == u {
                        b
                    } else if b == u {
                        a
                    } else {
                        continue;
                    };
                    if seen.insert(other) {
                        comp.insert(other);
                        stack.push(other);
                    }
                }
            }
            out.push(self.induced(&comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    pub fn induced(&self, keep: &BTreeSet<usize>) -> LabeledDigraph {
        LabeledDigraph {
            vertices: self.vertices.intersection(keep).copied().collect(),
            edges: self
                .edges
                .iter()
                .filter(|((u, v), _)| keep.contains(u) && keep.contains(v))
                .map(|(&k, &l)| (k, l))
                .collect(),
        }
    }

    pub fn has_directed_cycle(&self) -> bool {
        let mut indeg: BTreeMap<usize, usize> = self.vertices().map(|v| (v, 0)).collect();
        for (_, v, _) in self.edges() {
            *indeg.get_mut(&v).unwrap() += 1;
        }
        let mut ready: Vec<usize> = indeg.iter().filter(|e| *e.1 == 0).map(|e| *e.0).collect();
        let mut removed = 0;
        while let Some(u) = ready.pop() {
            removed += 1;
            for v in self.out_neighbors(u) {
                let d = indeg.get_mut(&v).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push(v);
                }
            }
        }
        removed != self.vertex_count()
    }

    /// Renames vertices through `map`, which must be injective on the vertex set.
    pub fn relabel(&self, map: &BTreeMap<usize, usize>) -> Result<LabeledDigraph> {
        let image = |v: usize| map.get(&v).copied().ok_or(Error::VertexAbsent(v));
        let vertices: BTreeSet<usize> = self.vertices().map(image).collect::<Result<_>>()?;
        if vertices.len() != self.vertex_count() {
            return Err(Error::InvalidInput("relabeling is not injective".into()));
        }
        let mut g = LabeledDigraph {
            vertices,
            edges: BTreeMap::new(),
        };
        for (u, v, l) in self.edges() {
            g.edges.insert((image(u)?, image(v)?), l);
        }
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for v in self.vertices() {
            s.push_str(&format!("  {v};\n"));
        }
        for (u, v, l) in self.edges() {
            s.push_str(&format!("  {u} -> {v} [label={l}];\n"));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DigraphJson {
            vertices: self.vertices().collect(),
            edges: self.edges().collect(),
        })
        .expect("digraph serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let j: DigraphJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        LabeledDigraph::new(j.vertices, j.edges)
    }

    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        self.canonical_form_with_bound(DEFAULT_VERTEX_BOUND)
    }

    pub fn canonical_form_with_bound(&self, bound: usize) -> Result<CanonicalForm> {
        Ok(self.canonical_labeling(bound)?.0)
    }

    /// Canonical form together with the vertex order realizing it.
    pub fn canonical_labeling(&self, bound: usize) -> Result<(CanonicalForm, Vec<usize>)> {
        let n = self.vertex_count();
        if n > bound || n > u8::MAX as usize {
            return Err(Error::SizeBound { n, bound });
        }
        let verts: Vec<usize> = self.vertices().collect();
        let index: BTreeMap<usize, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![vec![0u8; n]; n];
        for (u, v, l) in self.edges() {
            adj[index[&u]][index[&v]] = l;
        }
        let mut search = CanonSearch { adj, best: None };
        search.run(vec![0; n]);
        let (code, order) = search.best.unwrap_or((vec![0], Vec::new()));
        Ok((
            CanonicalForm(code),
            order.into_iter().map(|i| verts[i]).collect(),
        ))
    }
}

impl Serialize for LabeledDigraph {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        DigraphJson {
            vertices: self.vertices().collect(),
            edges: self.edges().collect(),
        }
        .serialize(serializer)
    }
}

impl fmt::Display for LabeledDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .map(|(u, v, l)| {
                if l == 1 {
                    format!("{u}->{v}")
                } else {
                    format!("{u}-{l}->{v}")
                }
            })
            .collect();
        let isolated: Vec<String> = self
            .vertices()
            .filter(|&v| !self.edges().any(|e| e.0 == v || e.1 == v))
            .map(|v| v.to_string())
            .collect();
        write!(f, "edges [{}]", edges.join(", "))?;
        if !isolated.is_empty() {
            write!(f, " isolated [{}]", isolated.join(", "))?;
        }
        Ok(())
    }
}

/// The labeled digraph of a toric word: for positions `j > k` with
/// `c_{i_j,i_k} != 0`, an edge `i_j → i_k` labeled `-c_{i_j,i_k}`.
pub fn digraph_of_word(w: &ToricWord) -> LabeledDigraph {
    let mut g = LabeledDigraph {
        vertices: w.letters().iter().copied().collect(),
        edges: BTreeMap::new(),
    };
    let d = w.datum();
    for (j, &later) in w.letters().iter().enumerate() {
        for &earlier in &w.letters()[..j] {
            if d.bonded(later, earlier) {
                g.edges
                    .insert((later, earlier), (-d.entry(later, earlier)) as u8);
            }
        }
    }
    g
}

/// Byte encoding `[n, label matrix row by row]` in canonical vertex order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        self.0[0] as usize
    }

    /// The graph on vertices `1..=n` in canonical order.
    pub fn to_digraph(&self) -> LabeledDigraph {
        let n = self.vertex_count();
        let mut g = LabeledDigraph {
            vertices: (1..=n).collect(),
            edges: BTreeMap::new(),
        };
        for i in 0..n {
            for j in 0..n {
                let l = self.0[1 + i * n + j];
                if l != 0 {
                    g.edges.insert((i + 1, j + 1), l);
                }
            }
        }
        g
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:x}")?;
        }
        Ok(())
    }
}

pub fn are_isomorphic(g: &LabeledDigraph, h: &LabeledDigraph) -> Result<bool> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    Ok(g.canonical_form()? == h.canonical_form()?)
}

/// A label- and direction-preserving vertex bijection `g → h`, if one exists.
pub fn find_isomorphism(
    g: &LabeledDigraph,
    h: &LabeledDigraph,
) -> Result<Option<BTreeMap<usize, usize>>> {
    if g.vertex_count() != h.vertex_count() {
        return Ok(None);
    }
    let (cg, og) = g.canonical_labeling(DEFAULT_VERTEX_BOUND)?;
    let (ch, oh) = h.canonical_labeling(DEFAULT_VERTEX_BOUND)?;
    if cg != ch {
        return Ok(None);
    }
    Ok(Some(og.into_iter().zip(oh).collect()))
}

/// Individualization-refinement search for the lexicographically smallest
/// encoding. Twin vertices in the branching cell are tried only once.
struct CanonSearch {
    adj: Vec<Vec<u8>>,
    best: Option<(Vec<u8>, Vec<usize>)>,
}

impl CanonSearch {
    fn run(&mut self, mut colors: Vec<usize>) {
        let n = self.adj.len();
        self.refine(&mut colors);
        let ncolors = colors.iter().max().map_or(0, |m| m + 1);
        if ncolors == n {
            let mut order = vec![0; n];
            for (v, &c) in colors.iter().enumerate() {
                order[c] = v;
            }
            let mut code = Vec::with_capacity(1 + n * n);
            code.push(n as u8);
            for &a in &order {
                for &b in &order {
                    code.push(self.adj[a][b]);
                }
            }
            if self.best.as_ref().is_none_or(|(b, _)| code < *b) {
                self.best = Some((code, order));
            }
            return;
        }
        let mut sizes = vec![0usize; ncolors];
        for &c in &colors {
            sizes[c] += 1;
        }
        let target = (0..ncolors).find(|&c| sizes[c] > 1).unwrap();
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &cell {
            if tried.iter().any(|&t| self.twins(t, v)) {
                continue;
            }
            tried.push(v);
            let mut next: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(x, &c)| 2 * c + usize::from(c == target && x != v))
                .collect();
            densify(&mut next);
            self.run(next);
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        let a = &self.adj;
        a[u][v] == a[v][u]
            && (0..a.len())
                .filter(|&w| w != u && w != v)
                .all(|w| a[u][w] == a[v][w] && a[w][u] == a[w][v])
    }

    fn refine(&self, colors: &mut Vec<usize>) {
        let n = colors.len();
        densify(colors);
        loop {
            let before = colors.iter().max().map_or(0, |m| m + 1);
            let sigs: Vec<(usize, Vec<(u8, u8, usize)>)> = (0..n)
                .map(|v| {
                    let mut s: Vec<(u8, u8, usize)> = Vec::new();
                    for w in 0..n {
                        if self.adj[v][w] != 0 {
                            s.push((0, self.adj[v][w], colors[w]));
                        }
                        if self.adj[w][v] != 0 {
                            s.push((1, self.adj[w][v], colors[w]));
                        }
                    }
                    s.sort_unstable();
                    (colors[v], s)
                })
                .collect();
            let mut uniq = sigs.clone();
            uniq.sort();
            uniq.dedup();
            for v in 0..n {
                colors[v] = uniq.binary_search(&sigs[v]).unwrap();
            }
            if uniq.len() == before {
                break;
            }
        }
    }
}

fn densify(colors: &mut [usize]) {
    let mut uniq = colors.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    for c in colors.iter_mut() {
        *c = uniq.binary_search(c).unwrap();
    }
}
