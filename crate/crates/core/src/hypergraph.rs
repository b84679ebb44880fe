//! Hypergraph data model, loading and preprocessing.
//!
//! Vertices carry dense internal IDs `0..n` assigned in ascending label order
//! (numeric order in integer mode, byte order in label mode). Hyperedges are
//! stored as sorted vertex arrays, deduplicated, and kept in lexicographic
//! order so iteration is deterministic.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Vertex identifier inside one [`Hypergraph`].
pub type VertexId = u32;

/// How vertex tokens are interpreted when loading a hyperedge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelMode {
    /// Tokens must parse as integers; vertices are ordered numerically.
    #[default]
    Integer,
    /// Tokens are arbitrary strings (e.g. author names).
    Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    pub mode: LabelMode,
    /// Hyperedges with fewer distinct vertices are dropped. Values below 2 are
    /// treated as 2.
    pub min_cardinality: usize,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            mode: LabelMode::Integer,
            min_cardinality: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Label {
    Int(i64),
    Text(String),
}

impl Label {
    fn render(&self) -> String {
        match self {
            Label::Int(v) => v.to_string(),
            Label::Text(s) => s.clone(),
        }
    }
}

/// An undirected, unweighted hypergraph with canonical hyperedges.
///
/// Immutable after construction. Every stored hyperedge has at least two
/// vertices and no two hyperedges are equal as sets. Vertices may have
/// degree zero only when the hypergraph was built with an explicit vertex
/// universe (see [`Hypergraph::with_edge_subset`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    labels: Vec<Label>,
    edges: Vec<Vec<VertexId>>,
    // vertex -> incident edge ids, CSR layout
    incidence_ptr: Vec<usize>,
    incidence: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub vertices: usize,
    pub hyperedges: usize,
    pub mean_degree: f64,
    pub mean_cardinality: f64,
}

impl Hypergraph {
    /// Builds a hypergraph over vertices labelled `0..n` from raw edge lists.
    ///
    /// Edges are canonicalized: vertices sorted and deduplicated, edges with
    /// fewer than two vertices dropped, duplicate sets collapsed. Vertices
    /// that end up in no edge are removed and the remaining ones relabelled
    /// densely, keeping their original numbers as labels.
    pub fn from_edges<I, E>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = usize>,
    {
        let raw: Vec<Vec<Label>> = edges
            .into_iter()
            .map(|e| e.into_iter().map(|v| Label::Int(v as i64)).collect())
            .collect();
        Self::from_labelled(raw, 2)
    }

    fn from_labelled(raw: Vec<Vec<Label>>, min_cardinality: usize) -> Result<Self> {
        let min_card = min_cardinality.max(2);
        let mut kept: Vec<Vec<Label>> = Vec::with_capacity(raw.len());
        for mut e in raw {
            e.sort();
            e.dedup();
            if e.len() >= min_card {
                kept.push(e);
            }
        }
        if kept.is_empty() {
            return Err(Error::EmptyHypergraph);
        }

        let mut index: BTreeMap<&Label, VertexId> = BTreeMap::new();
        for e in &kept {
            for v in e {
                index.entry(v).or_insert(0);
            }
        }
        for (i, id) in index.values_mut().enumerate() {
            *id = i as VertexId;
        }
        let labels: Vec<Label> = index.keys().map(|l| (*l).clone()).collect();

        let edges: Vec<Vec<VertexId>> = kept
            .iter()
            // labels sorted ascending map to ascending ids, so edges stay sorted
            .map(|e| e.iter().map(|v| index[v]).collect())
            .collect();
        Ok(Self::assemble(labels, edges))
    }

    /// Sorts, deduplicates and indexes already-canonical vertex arrays.
    fn assemble(labels: Vec<Label>, mut edges: Vec<Vec<VertexId>>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let n = labels.len();
        let mut counts = vec![0usize; n + 1];
        for e in &edges {
            for &v in e {
                counts[v as usize + 1] += 1;
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut incidence = vec![0u32; counts[n]];
        for (eid, e) in edges.iter().enumerate() {
            for &v in e {
                incidence[fill[v as usize]] = eid as u32;
                fill[v as usize] += 1;
            }
        }
        Self {
            labels,
            edges,
            incidence_ptr: counts,
            incidence,
        }
    }

    /// Parses a hyperedge-list file. See [`Hypergraph::parse`].
    pub fn load(path: impl AsRef<Path>, options: LoadOptions) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, options)
    }

    /// Parses hyperedge-list text: one hyperedge per line, vertex tokens
    /// separated by commas and/or whitespace, `#` starts a comment line.
    pub fn parse(text: &str, options: LoadOptions) -> Result<Self> {
        let mut raw = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut edge = Vec::new();
            for tok in line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
            {
                let label = match options.mode {
                    LabelMode::Integer => {
                        Label::Int(tok.parse::<i64>().map_err(|_| Error::Parse {
                            line: lineno + 1,
                            message: format!("non-integer vertex token {tok:?}"),
                        })?)
                    }
                    LabelMode::Label => Label::Text(tok.to_string()),
                };
                edge.push(label);
            }
            if edge.is_empty() {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: "no vertex token".into(),
                });
            }
            raw.push(edge);
        }
        Self::from_labelled(raw, options.min_cardinality)
    }

    /// Canonical text form: comma-separated labels, vertices in ascending
    /// order, hyperedges in lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            for (i, &v) in e.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", self.labels[v as usize].render());
            }
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_edge_list()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &[VertexId] {
        &self.edges[e]
    }

    /// Number of hyperedges containing `v`.
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.incidence_ptr[v + 1] - self.incidence_ptr[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.num_vertices() as VertexId).map(|v| self.degree(v)).collect()
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.edges.iter().map(Vec::len).collect()
    }

    /// Ids of hyperedges incident to `v`.
    pub fn incident_edges(&self, v: VertexId) -> &[u32] {
        let v = v as usize;
        &self.incidence[self.incidence_ptr[v]..self.incidence_ptr[v + 1]]
    }

    pub fn label(&self, v: VertexId) -> String {
        self.labels[v as usize].render()
    }

    pub fn edge_labels(&self, edge: &[VertexId]) -> Vec<String> {
        edge.iter().map(|&v| self.label(v)).collect()
    }

    pub fn contains_edge(&self, edge: &[VertexId]) -> bool {
        self.edges.binary_search_by(|e| e.as_slice().cmp(edge)).is_ok()
    }

    /// Sorted clique-expansion neighbours of `v` (vertices sharing a hyperedge).
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .incident_edges(v)
            .iter()
            .flat_map(|&e| self.edges[e as usize].iter().copied())
            .filter(|&u| u != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn stats(&self) -> Stats {
        let incidences: usize = self.edges.iter().map(Vec::len).sum();
        Stats {
            vertices: self.num_vertices(),
            hyperedges: self.num_edges(),
            mean_degree: incidences as f64 / self.num_vertices() as f64,
            mean_cardinality: incidences as f64 / self.num_edges() as f64,
        }
    }

    /// Connected components of the clique expansion, each as a sorted vertex
    /// list, ordered by the smallest vertex id they contain.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            for &v in &e[1..] {
                let first = find(&mut parent, e[0] as usize);
                let r = find(&mut parent, v as usize);
                if r != first {
                    let (lo, hi) = if r < first { (r, first) } else { (first, r) };
                    parent[hi] = lo;
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v as VertexId);
        }
        groups.into_values().collect()
    }

    /// Sub-hypergraph induced by the largest connected component of the
    /// clique expansion. Ties go to the component holding the smallest label.
    pub fn largest_component(&self) -> Hypergraph {
        let comps = self.components();
        if comps.len() == 1 {
            return self.clone();
        }
        // ids follow label order, so the first vertex of each component is
        // its minimum label; components are already ordered by it
        let best = comps
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.len().cmp(&b.len()).then(ib.cmp(ia)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let keep: HashSet<VertexId> = comps[best].iter().copied().collect();
        let edge_ids: Vec<usize> = (0..self.num_edges())
            .filter(|&e| keep.contains(&self.edges[e][0]))
            .collect();
        self.with_edge_subset(&edge_ids).0
    }

    /// Sub-hypergraph made of the given hyperedges. Vertices not covered by
    /// any selected edge are dropped. Returns the new hypergraph and, for each
    /// vertex of `self`, its id in the new one (if kept).
    pub fn with_edge_subset(&self, edge_ids: &[usize]) -> (Hypergraph, Vec<Option<VertexId>>) {
        let mut used = vec![false; self.num_vertices()];
        for &e in edge_ids {
            for &v in &self.edges[e] {
                used[v as usize] = true;
            }
        }
        let mut map = vec![None; self.num_vertices()];
        let mut labels = Vec::new();
        for (v, &u) in used.iter().enumerate() {
            if u {
                map[v] = Some(labels.len() as VertexId);
                labels.push(self.labels[v].clone());
            }
        }
        let edges = edge_ids
            .iter()
            .map(|&e| {
                self.edges[e]
                    .iter()
                    .map(|&v| map[v as usize].expect("vertex of selected edge"))
                    .collect()
            })
            .collect();
        (Self::assemble(labels, edges), map)
    }
}
