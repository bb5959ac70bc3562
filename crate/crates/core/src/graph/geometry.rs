//! Geodesic geometry on an agenda graph: intervals, convex hulls,
//! eccentricity, ε-connectedness and profile classification.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::cycles::{InducedSubgraph, DEFAULT_CYCLE_BUDGET};
use super::AgendaGraph;
use crate::error::{Error, Result};
use crate::judgment::{Judgment, JudgmentSet, Profile};

/// Which reading of the convex hull to compute.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HullMode {
    /// Least interval-closed superset: iterate pairwise-interval unions to
    /// a fixpoint.
    Closure,
    /// A single union of the pairwise intervals of the input set.
    #[default]
    #[serde(rename = "union")]
    IntervalUnion,
}

impl fmt::Display for HullMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HullMode::Closure => "closure",
            HullMode::IntervalUnion => "union",
        })
    }
}

impl FromStr for HullMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closure" => Ok(HullMode::Closure),
            "union" => Ok(HullMode::IntervalUnion),
            other => Err(Error::invalid(format!("unknown hull mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileClassification {
    pub one_connected: bool,
    /// Smallest ε for which the profile is ε-connected.
    pub connectivity: u32,
    pub equidistant: bool,
    /// Hull-induced subgraph is a tree.
    pub class_a: bool,
    /// Hull-induced subgraph has maximum degree at most two.
    pub class_b: bool,
    /// Diameter of the distinct profile judgments.
    pub diameter: u32,
    pub hull: Vec<Judgment>,
    pub hull_size: usize,
    pub hull_max_degree: usize,
    /// Hull-induced subgraph is one simple cycle.
    pub hull_is_cycle: bool,
    pub hull_cycles: Vec<usize>,
    /// False when the cycle search hit its expansion budget; `hull_cycles`
    /// then lists only the lengths found.
    pub hull_cycles_exhaustive: bool,
}

impl AgendaGraph {
    pub(crate) fn interval_idx(&self, a: usize, b: usize) -> Vec<usize> {
        let d = self.dist_idx(a, b);
        (0..self.vertex_count())
            .filter(|&c| self.dist_idx(a, c) + self.dist_idx(c, b) == d)
            .collect()
    }

    /// All vertices on shortest paths from `a` to `b`.
    pub fn interval(&self, a: &Judgment, b: &Judgment) -> Result<JudgmentSet> {
        let (a, b) = (self.require(a)?, self.require(b)?);
        Ok(self.to_set(self.interval_idx(a, b)))
    }

    /// Hull membership mask over vertex indices.
    pub(crate) fn hull_mask(&self, seeds: &[usize], mode: HullMode) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count()];
        let mut members = Vec::with_capacity(seeds.len());
        for &s in seeds {
            if !mask[s] {
                mask[s] = true;
                members.push(s);
            }
        }
        // members[..expanded] have had all their mutual intervals added.
        let mut expanded = 0;
        loop {
            let mut added = Vec::new();
            for x in 0..members.len() {
                for y in (x + 1).max(expanded)..members.len() {
                    let (a, b) = (members[x], members[y]);
                    let d = self.dist_idx(a, b);
                    for (c, slot) in mask.iter_mut().enumerate() {
                        if !*slot && self.dist_idx(a, c) + self.dist_idx(c, b) == d {
                            *slot = true;
                            added.push(c);
                        }
                    }
                }
            }
            if mode == HullMode::IntervalUnion || added.is_empty() {
                return mask;
            }
            expanded = members.len();
            members.extend(added);
        }
    }

    pub(crate) fn hull_idx(&self, seeds: &[usize], mode: HullMode) -> Vec<usize> {
        let mask = self.hull_mask(seeds, mode);
        (0..mask.len()).filter(|&i| mask[i]).collect()
    }

    /// Convex hull of a nonempty vertex set under the given reading.
    pub fn convex_hull(&self, set: &JudgmentSet, mode: HullMode) -> Result<JudgmentSet> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let seeds = self.require_all(set)?;
        Ok(self.to_set(self.hull_idx(&seeds, mode)))
    }

    /// Hull of the distinct judgments of a profile.
    pub fn profile_hull(&self, profile: &Profile, mode: HullMode) -> Result<JudgmentSet> {
        self.convex_hull(&profile.distinct(), mode)
    }

    /// Largest distance from `j` to a member of `set`.
    pub fn eccentricity(&self, set: &JudgmentSet, j: &Judgment) -> Result<u32> {
        if !set.contains(j) {
            return Err(Error::NotInSet(j.to_string()));
        }
        let idx = self.require_all(set)?;
        let ji = self.require(j)?;
        Ok(idx.iter().map(|&k| self.dist_idx(ji, k)).max().unwrap_or(0))
    }

    pub fn diameter(&self, set: &JudgmentSet) -> Result<u32> {
        let idx = self.nonempty_indices(set)?;
        Ok(self.diameter_idx(&idx))
    }

    pub(crate) fn diameter_idx(&self, idx: &[usize]) -> u32 {
        idx.iter()
            .flat_map(|&a| idx.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.dist_idx(a, b))
            .max()
            .unwrap_or(0)
    }

    /// Members whose eccentricity equals the diameter.
    pub fn peripherals(&self, set: &JudgmentSet) -> Result<JudgmentSet> {
        let idx = self.nonempty_indices(set)?;
        let diameter = self.diameter_idx(&idx);
        Ok(idx
            .iter()
            .filter(|&&a| idx.iter().any(|&b| self.dist_idx(a, b) == diameter))
            .map(|&a| self.vertex(a))
            .collect())
    }

    /// Unordered pairs at distance exactly the diameter, each as
    /// `(smaller, larger)`.
    pub fn antipodal_pairs(&self, set: &JudgmentSet) -> Result<Vec<(Judgment, Judgment)>> {
        let idx = self.nonempty_indices(set)?;
        let diameter = self.diameter_idx(&idx);
        let mut pairs = Vec::new();
        for (x, &a) in idx.iter().enumerate() {
            for &b in &idx[x + 1..] {
                if self.dist_idx(a, b) == diameter {
                    pairs.push((self.vertex(a), self.vertex(b)));
                }
            }
        }
        Ok(pairs)
    }

    fn nonempty_indices(&self, set: &JudgmentSet) -> Result<Vec<usize>> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        self.require_all(set)
    }

    /// Connectivity of `I[a, b]`: over all geodesics from `a` to `b`, the
    /// smallest achievable largest gap between consecutive rational
    /// judgments along the geodesic.
    pub(crate) fn interval_gap_idx(&self, a: usize, b: usize) -> u32 {
        if a == b {
            return 0;
        }
        let mut stops: Vec<usize> = self
            .interval_idx(a, b)
            .into_iter()
            .filter(|&v| self.rational_idx(v))
            .collect();
        stops.sort_by_key(|&v| self.dist_idx(a, v));
        // best[k]: minimax gap of a geodesic prefix from `a` to stops[k].
        let mut best = vec![u32::MAX; stops.len()];
        best[0] = 0;
        for k in 1..stops.len() {
            let v = stops[k];
            let dv = self.dist_idx(a, v);
            for u in 0..k {
                let step = self.dist_idx(stops[u], v);
                if best[u] != u32::MAX && self.dist_idx(a, stops[u]) + step == dv {
                    best[k] = best[k].min(best[u].max(step));
                }
            }
        }
        let end = stops.iter().position(|&v| v == b).expect("b lies in its own interval");
        best[end]
    }

    /// Largest gap between any two rational judgments of `I[a, b]` with no
    /// rational judgment on a shortest path between them inside the
    /// interval-induced subgraph. Stricter than [`Self::interval_connectivity`].
    pub(crate) fn interval_max_gap_idx(&self, a: usize, b: usize) -> u32 {
        if a == b {
            return 0;
        }
        let members = self.interval_idx(a, b);
        let sub = InducedSubgraph::from_indices(self, &members);
        let rational: Vec<usize> = (0..members.len()).filter(|&k| self.rational_idx(members[k])).collect();
        let dist: Vec<Vec<u32>> = (0..members.len()).map(|k| sub.distances_from(k)).collect();
        let mut gap = 0;
        for (x, &p) in rational.iter().enumerate() {
            for &q in &rational[x + 1..] {
                let d = dist[p][q];
                let blocked = rational
                    .iter()
                    .any(|&z| z != p && z != q && dist[p][z].saturating_add(dist[z][q]) == d);
                if !blocked {
                    gap = gap.max(d);
                }
            }
        }
        gap
    }

    fn require_rational(&self, j: &Judgment) -> Result<usize> {
        let i = self.require(j)?;
        if !self.rational_idx(i) {
            return Err(Error::Irrational(j.to_string()));
        }
        Ok(i)
    }

    /// Smallest ε for which `I[a, b]` is ε-connected (0 when `a == b`).
    pub fn interval_connectivity(&self, a: &Judgment, b: &Judgment) -> Result<u32> {
        let (a, b) = (self.require_rational(a)?, self.require_rational(b)?);
        Ok(self.interval_gap_idx(a, b))
    }

    /// The strict reading: every pair of consecutive rational judgments in
    /// the interval counts, whether or not a geodesic needs it.
    pub fn interval_max_gap(&self, a: &Judgment, b: &Judgment) -> Result<u32> {
        let (a, b) = (self.require_rational(a)?, self.require_rational(b)?);
        Ok(self.interval_max_gap_idx(a, b))
    }

    pub fn epsilon_connected(&self, a: &Judgment, b: &Judgment, eps: u32) -> Result<bool> {
        Ok(self.interval_connectivity(a, b)? <= eps)
    }

    /// Smallest ε for which every pairwise interval of the profile is
    /// ε-connected.
    pub fn profile_connectivity(&self, profile: &Profile) -> Result<u32> {
        let distinct: Vec<Judgment> = profile.distinct().into_iter().collect();
        let idx = distinct
            .iter()
            .map(|j| self.require_rational(j))
            .collect::<Result<Vec<_>>>()?;
        let mut worst = 0;
        for (x, &a) in idx.iter().enumerate() {
            for &b in &idx[x + 1..] {
                worst = worst.max(self.interval_gap_idx(a, b));
            }
        }
        Ok(worst)
    }

    pub fn profile_epsilon_connected(&self, profile: &Profile, eps: u32) -> Result<bool> {
        Ok(self.profile_connectivity(profile)? <= eps)
    }

    /// Whether every pair of distinct agents sits at the same distance.
    pub fn is_equidistant(&self, profile: &Profile) -> Result<bool> {
        let idx = self.require_all(profile.iter())?;
        let mut first = None;
        for (x, &a) in idx.iter().enumerate() {
            for &b in &idx[x + 1..] {
                let d = self.dist_idx(a, b);
                if *first.get_or_insert(d) != d {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn classify_profile(&self, profile: &Profile, mode: HullMode) -> Result<ProfileClassification> {
        let seeds = self.require_all(profile.distinct().iter())?;
        let hull = self.hull_idx(&seeds, mode);
        let sub = InducedSubgraph::from_indices(self, &hull);
        let (hull_cycles, hull_cycles_exhaustive) = match sub.cycle_lengths_budgeted(DEFAULT_CYCLE_BUDGET) {
            Ok(lengths) => (lengths, true),
            Err(Error::SearchBudget(_)) => (Vec::new(), false),
            Err(e) => return Err(e),
        };
        let connectivity = self.profile_connectivity(profile)?;
        Ok(ProfileClassification {
            one_connected: connectivity <= 1,
            connectivity,
            equidistant: self.is_equidistant(profile)?,
            class_a: sub.is_tree(),
            class_b: sub.max_degree() <= 2,
            diameter: self.diameter_idx(&seeds),
            hull: hull.iter().map(|&i| self.vertex(i)).collect(),
            hull_size: hull.len(),
            hull_max_degree: sub.max_degree(),
            hull_is_cycle: sub.is_cycle_of_length(hull.len()),
            hull_cycles,
            hull_cycles_exhaustive,
        })
    }
}
