//! The three agenda graphs and their path metric.
//!
//! Every graph precomputes all-pairs shortest-path distances at build time
//! and is immutable afterwards; geometry queries live in [`geometry`] and
//! induced-subgraph/cycle machinery in [`cycles`].

pub mod cycles;
pub mod geometry;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Framework, DEFAULT_MAX_ISSUES};
use crate::judgment::{Judgment, JudgmentSet};

pub use cycles::InducedSubgraph;
pub use geometry::{HullMode, ProfileClassification};

const UNREACHABLE: u16 = u16::MAX;

/// Default cap on the number of vertices of a built graph. The distance
/// table is quadratic in this.
pub const DEFAULT_MAX_VERTICES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    /// Fully connected graph over the rational judgments.
    Complete,
    /// The hypercube over every assignment, rational or not.
    Hamming,
    /// Rational judgments, adjacent when no rational judgment lies between.
    Model,
}

impl GraphKind {
    pub const ALL: [GraphKind; 3] = [GraphKind::Complete, GraphKind::Hamming, GraphKind::Model];

    pub fn name(&self) -> &'static str {
        match self {
            GraphKind::Complete => "complete",
            GraphKind::Hamming => "hamming",
            GraphKind::Model => "model",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(GraphKind::Complete),
            "hamming" => Ok(GraphKind::Hamming),
            "model" => Ok(GraphKind::Model),
            other => Err(Error::invalid(format!("unknown graph kind `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphLimits {
    pub max_issues: usize,
    pub max_vertices: usize,
}

impl Default for GraphLimits {
    fn default() -> Self {
        GraphLimits {
            max_issues: DEFAULT_MAX_ISSUES,
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

pub struct AgendaGraph {
    kind: GraphKind,
    issues: usize,
    vertices: Vec<Judgment>,
    rational: Vec<bool>,
    adjacency: Vec<Vec<usize>>,
    dist: Vec<u16>,
}

impl AgendaGraph {
    pub fn build(kind: GraphKind, framework: &Framework) -> Result<Self> {
        Self::build_with_limits(kind, framework, GraphLimits::default())
    }

    pub fn build_with_limits(kind: GraphKind, framework: &Framework, limits: GraphLimits) -> Result<Self> {
        let models = crate::formula::enumerate_models_capped(&framework.agenda, &framework.constraint, limits.max_issues)?;
        let m = framework.agenda.len();
        let vertex_count = match kind {
            GraphKind::Hamming => 1usize << m,
            GraphKind::Complete | GraphKind::Model => models.len(),
        };
        if vertex_count > limits.max_vertices {
            return Err(Error::Capacity {
                what: "graph vertices",
                actual: vertex_count,
                limit: limits.max_vertices,
            });
        }

        let (vertices, rational, adjacency) = match kind {
            GraphKind::Hamming => {
                let vertices: Vec<Judgment> = framework.agenda.all_judgments().collect();
                let rational = vertices.iter().map(|j| framework.constraint.evaluate(j)).collect();
                let adjacency = vertices
                    .iter()
                    .map(|j| {
                        let mut nbrs: Vec<usize> = (0..m).map(|i| j.flipped(i).index() as usize).collect();
                        nbrs.sort_unstable();
                        nbrs
                    })
                    .collect();
                (vertices, rational, adjacency)
            }
            GraphKind::Complete => {
                let n = models.len();
                let adjacency = (0..n).map(|a| (0..n).filter(|&b| b != a).collect()).collect();
                (models, vec![true; n], adjacency)
            }
            GraphKind::Model => {
                let n = models.len();
                let mut adjacency = vec![Vec::new(); n];
                for a in 0..n {
                    for b in a + 1..n {
                        let (ja, jb) = (&models[a], &models[b]);
                        let blocked = models.iter().any(|jc| {
                            crate::judgment::is_between(jc, ja, jb).expect("same agenda")
                        });
                        if !blocked {
                            adjacency[a].push(b);
                            adjacency[b].push(a);
                        }
                    }
                }
                (models, vec![true; n], adjacency)
            }
        };

        let dist = all_pairs_bfs(&adjacency);
        let graph = AgendaGraph {
            kind,
            issues: m,
            vertices,
            rational,
            adjacency,
            dist,
        };
        assert!(
            graph.dist.iter().all(|&d| d != UNREACHABLE),
            "{kind} graph must be connected"
        );
        Ok(graph)
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn issues(&self) -> usize {
        self.issues
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Judgment] {
        &self.vertices
    }

    pub fn rational_vertices(&self) -> Vec<Judgment> {
        self.vertices
            .iter()
            .zip(&self.rational)
            .filter(|(_, &r)| r)
            .map(|(j, _)| *j)
            .collect()
    }

    pub fn contains(&self, j: &Judgment) -> bool {
        self.index_of(j).is_some()
    }

    /// Rationality flag of a vertex; `false` for non-vertices.
    pub fn is_rational(&self, j: &Judgment) -> bool {
        self.index_of(j).is_some_and(|i| self.rational[i])
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Each undirected edge once, as `(smaller, larger)`.
    pub fn edges(&self) -> Vec<(Judgment, Judgment)> {
        let mut edges = Vec::with_capacity(self.edge_count());
        for (a, nbrs) in self.adjacency.iter().enumerate() {
            for &b in nbrs.iter().filter(|&&b| b > a) {
                edges.push((self.vertices[a], self.vertices[b]));
            }
        }
        edges
    }

    pub fn neighbors(&self, j: &Judgment) -> Result<Vec<Judgment>> {
        let i = self.require(j)?;
        Ok(self.adjacency[i].iter().map(|&k| self.vertices[k]).collect())
    }

    pub fn are_adjacent(&self, a: &Judgment, b: &Judgment) -> Result<bool> {
        Ok(self.path_distance(a, b)? == 1)
    }

    /// Shortest-path distance between two vertices.
    pub fn path_distance(&self, a: &Judgment, b: &Judgment) -> Result<u32> {
        let (a, b) = (self.require(a)?, self.require(b)?);
        Ok(self.dist_idx(a, b))
    }

    pub(crate) fn index_of(&self, j: &Judgment) -> Option<usize> {
        if j.len() != self.issues {
            return None;
        }
        match self.kind {
            GraphKind::Hamming => Some(j.index() as usize),
            GraphKind::Complete | GraphKind::Model => self.vertices.binary_search(j).ok(),
        }
    }

    pub(crate) fn require(&self, j: &Judgment) -> Result<usize> {
        self.index_of(j).ok_or_else(|| Error::NotAVertex(j.to_string()))
    }

    pub(crate) fn require_all<'a>(&self, js: impl IntoIterator<Item = &'a Judgment>) -> Result<Vec<usize>> {
        js.into_iter().map(|j| self.require(j)).collect()
    }

    #[inline]
    pub(crate) fn dist_idx(&self, a: usize, b: usize) -> u32 {
        u32::from(self.dist[a * self.vertices.len() + b])
    }

    pub(crate) fn vertex(&self, i: usize) -> Judgment {
        self.vertices[i]
    }

    pub(crate) fn rational_idx(&self, i: usize) -> bool {
        self.rational[i]
    }

    pub(crate) fn adjacency_idx(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub(crate) fn to_set(&self, idx: impl IntoIterator<Item = usize>) -> JudgmentSet {
        idx.into_iter().map(|i| self.vertices[i]).collect()
    }

    /// Adjacency-list text export: one `<vertex>: <nbr> <nbr> ...` line per
    /// vertex, in lexicographic order.
    pub fn to_adjacency_text(&self) -> String {
        let mut out = String::new();
        for (j, nbrs) in self.vertices.iter().zip(&self.adjacency) {
            out.push_str(&j.to_string());
            out.push(':');
            for &k in nbrs {
                out.push(' ');
                out.push_str(&self.vertices[k].to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn export(&self, issue_names: &[String]) -> GraphExport {
        GraphExport {
            kind: self.kind,
            issues: issue_names.to_vec(),
            vertices: self
                .vertices
                .iter()
                .zip(&self.rational)
                .map(|(j, &rational)| VertexExport { judgment: *j, rational })
                .collect(),
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl fmt::Debug for AgendaGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AgendaGraph")
            .field("kind", &self.kind)
            .field("issues", &self.issues)
            .field("vertices", &self.vertices.len())
            .field("edges", &self.edge_count())
            .finish()
    }
}

/// Structured graph export for external visualisation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExport {
    pub kind: GraphKind,
    pub issues: Vec<String>,
    pub vertices: Vec<VertexExport>,
    pub edges: Vec<[Judgment; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexExport {
    pub judgment: Judgment,
    pub rational: bool,
}

fn all_pairs_bfs(adjacency: &[Vec<usize>]) -> Vec<u16> {
    let n = adjacency.len();
    let mut dist = vec![UNREACHABLE; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            let next = row[v] + 1;
            for &w in &adjacency[v] {
                if row[w] == UNREACHABLE {
                    row[w] = next;
                    queue.push_back(w);
                }
            }
        }
    }
    dist
}
