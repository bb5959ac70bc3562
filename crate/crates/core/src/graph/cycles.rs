//! Induced subgraphs and simple-cycle search.

use std::collections::VecDeque;

use super::AgendaGraph;
use crate::error::{Error, Result};
use crate::judgment::{Judgment, JudgmentSet};

/// Expansion budget used when cycle lengths are computed as part of a
/// profile classification.
pub const DEFAULT_CYCLE_BUDGET: usize = 200_000;

/// The subgraph induced by a vertex set: two members are adjacent iff they
/// are adjacent in the parent graph.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    members: Vec<Judgment>,
    adjacency: Vec<Vec<usize>>,
}

impl InducedSubgraph {
    pub fn new(graph: &AgendaGraph, set: &JudgmentSet) -> Result<Self> {
        let idx = graph.require_all(set)?;
        Ok(Self::from_indices(graph, &idx))
    }

    pub(crate) fn from_indices(graph: &AgendaGraph, idx: &[usize]) -> Self {
        let mut local = vec![usize::MAX; graph.vertex_count()];
        for (k, &i) in idx.iter().enumerate() {
            local[i] = k;
        }
        let adjacency = idx
            .iter()
            .map(|&i| {
                graph
                    .adjacency_idx(i)
                    .iter()
                    .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                    .collect()
            })
            .collect();
        InducedSubgraph {
            members: idx.iter().map(|&i| graph.vertex(i)).collect(),
            adjacency,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Judgment] {
        &self.members
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, local: usize) -> usize {
        self.adjacency[local].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Breadth-first distances from `source` within the subgraph
    /// (`u32::MAX` for unreachable members).
    pub fn distances_from(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.len()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_count() == self.len()
    }

    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.is_connected() && self.edge_count() + 1 == self.len()
    }

    /// True iff the subgraph itself is a single simple cycle of length `k`.
    pub fn is_cycle_of_length(&self, k: usize) -> bool {
        k >= 3 && self.len() == k && self.adjacency.iter().all(|a| a.len() == 2) && self.is_connected()
    }

    /// Whether any three members are pairwise adjacent.
    pub fn has_triangle(&self) -> bool {
        (0..self.len()).any(|a| {
            self.adjacency[a]
                .iter()
                .filter(|&&b| b > a)
                .any(|&b| self.adjacency[b].iter().any(|&c| c > b && self.adjacency[a].contains(&c)))
        })
    }

    fn is_bipartite(&self) -> bool {
        let mut colour = vec![u8::MAX; self.len()];
        for s in 0..self.len() {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adjacency[v] {
                    if colour[w] == u8::MAX {
                        colour[w] = 1 - colour[v];
                        queue.push_back(w);
                    } else if colour[w] == colour[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Members of the 2-core (vertices surviving repeated removal of
    /// vertices of degree at most one). Every cycle lives in the 2-core.
    fn two_core(&self) -> Vec<bool> {
        let mut alive = vec![true; self.len()];
        let mut degree: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..self.len()).filter(|&v| degree[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &w in &self.adjacency[v] {
                if alive[w] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        stack.push(w);
                    }
                }
            }
        }
        alive
    }

    /// Exact test for a simple cycle of length `k`.
    pub fn has_cycle_of_length(&self, k: usize) -> bool {
        let mut budget = usize::MAX;
        self.search_cycle(k, &self.two_core(), &mut budget)
            .expect("unbounded search cannot run out of budget")
    }

    /// Sorted distinct lengths of the simple cycles of the subgraph.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycle_lengths_budgeted(usize::MAX)
            .expect("unbounded search cannot run out of budget")
    }

    /// As [`Self::cycle_lengths`], failing with [`Error::SearchBudget`] when
    /// the depth-first search expands more than `budget` nodes.
    pub fn cycle_lengths_budgeted(&self, budget: usize) -> Result<Vec<usize>> {
        if self.is_forest() {
            return Ok(Vec::new());
        }
        if self.max_degree() <= 2 {
            // Components are paths or cycles.
            return Ok(self.cycle_component_sizes());
        }
        let core = self.two_core();
        let core_size = core.iter().filter(|&&a| a).count();
        let bipartite = self.is_bipartite();
        let mut remaining = budget;
        let mut lengths = Vec::new();
        for k in 3..=core_size {
            if bipartite && k % 2 == 1 {
                continue;
            }
            if self.search_cycle(k, &core, &mut remaining).map_err(|_| Error::SearchBudget(budget))? {
                lengths.push(k);
            }
        }
        Ok(lengths)
    }

    fn cycle_component_sizes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut sizes = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            if comp.len() >= 3 && comp.iter().all(|&v| self.adjacency[v].len() == 2) {
                sizes.push(comp.len());
            }
        }
        sizes.sort_unstable();
        sizes.dedup();
        sizes
    }

    /// Depth-first search for a simple `k`-cycle whose smallest member is
    /// the start vertex. Prunes with breadth-first distances back to the
    /// start inside the allowed region.
    fn search_cycle(&self, k: usize, core: &[bool], budget: &mut usize) -> std::result::Result<bool, ()> {
        if k < 3 {
            return Ok(false);
        }
        let n = self.len();
        for start in 0..n {
            if !core[start] {
                continue;
            }
            let allowed: Vec<bool> = (0..n).map(|v| core[v] && v >= start).collect();
            if allowed.iter().filter(|&&a| a).count() < k {
                break;
            }
            let back = self.restricted_distances(start, &allowed);
            let mut on_path = vec![false; n];
            on_path[start] = true;
            if self.extend(start, start, 1, k, &allowed, &back, &mut on_path, budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn restricted_distances(&self, source: usize, allowed: &[bool]) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.len()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if allowed[w] && dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        start: usize,
        v: usize,
        path_len: usize,
        k: usize,
        allowed: &[bool],
        back: &[u32],
        on_path: &mut [bool],
        budget: &mut usize,
    ) -> std::result::Result<bool, ()> {
        if *budget == 0 {
            return Err(());
        }
        *budget -= 1;
        if path_len == k {
            return Ok(self.adjacency[v].contains(&start));
        }
        for &w in &self.adjacency[v] {
            if !allowed[w] || on_path[w] {
                continue;
            }
            // After stepping to w the path has path_len + 1 vertices and
            // needs back[w] more edges to close.
            if back[w] == u32::MAX || path_len + 1 + back[w] as usize - 1 > k {
                continue;
            }
            on_path[w] = true;
            let found = self.extend(start, w, path_len + 1, k, allowed, back, on_path, budget)?;
            on_path[w] = false;
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl AgendaGraph {
    pub fn induced_subgraph(&self, set: &JudgmentSet) -> Result<InducedSubgraph> {
        InducedSubgraph::new(self, set)
    }

    /// Sorted distinct simple-cycle lengths of the `set`-induced subgraph.
    pub fn detect_cycles(&self, set: &JudgmentSet) -> Result<Vec<usize>> {
        Ok(self.induced_subgraph(set)?.cycle_lengths())
    }

    /// Whether the `set`-induced subgraph has a simple cycle of length `k`.
    pub fn has_k_cycle(&self, set: &JudgmentSet, k: usize) -> Result<bool> {
        Ok(self.induced_subgraph(set)?.has_cycle_of_length(k))
    }

    /// Whether the `set`-induced subgraph is itself a simple `k`-cycle.
    pub fn is_k_cycle(&self, set: &JudgmentSet, k: usize) -> Result<bool> {
        Ok(self.induced_subgraph(set)?.is_cycle_of_length(k))
    }
}
