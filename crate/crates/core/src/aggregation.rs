//! One-shot distance-based aggregation with the sum aggregator, and
//! propositional unanimity checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::AgendaGraph;
use crate::judgment::{Judgment, JudgmentSet, Profile};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregationResult {
    pub winners: JudgmentSet,
    /// Summed path distance of every rational judgment.
    pub scores: BTreeMap<Judgment, u32>,
}

impl AggregationResult {
    pub fn winning_score(&self) -> u32 {
        let first = self.winners.iter().next().expect("winners are nonempty");
        self.scores[first]
    }
}

/// Scores every rational vertex of `graph` by a fold of its distances to
/// the profile entries and returns all minimisers.
pub fn aggregate_with<F>(graph: &AgendaGraph, profile: &Profile, fold: F) -> Result<AggregationResult>
where
    F: Fn(&[u32]) -> u32,
{
    let idx = graph.require_all(profile.iter())?;
    let mut scores = BTreeMap::new();
    let mut distances = Vec::with_capacity(idx.len());
    for (v, j) in graph.vertices().iter().enumerate() {
        if !graph.rational_idx(v) {
            continue;
        }
        distances.clear();
        distances.extend(idx.iter().map(|&p| graph.dist_idx(v, p)));
        scores.insert(*j, fold(&distances));
    }
    let best = *scores.values().min().ok_or(Error::EmptySet)?;
    let winners = scores.iter().filter(|&(_, &s)| s == best).map(|(j, _)| *j).collect();
    Ok(AggregationResult { winners, scores })
}

/// The distance-based rule with sum aggregation over the graph's path metric.
pub fn distance_based_rule(graph: &AgendaGraph, profile: &Profile) -> Result<AggregationResult> {
    aggregate_with(graph, profile, |ds| ds.iter().sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnanimityStrength {
    /// Some output judgment keeps each unanimous value.
    Weak,
    /// Every output judgment keeps each unanimous value.
    Strong,
}

pub fn check_propositional_unanimity(p0: &Profile, result: &JudgmentSet, strength: UnanimityStrength) -> Result<bool> {
    if result.is_empty() {
        return Err(Error::EmptySet);
    }
    for j in result {
        if j.len() != p0.issues() {
            return Err(Error::AgendaMismatch {
                left: p0.issues(),
                right: j.len(),
            });
        }
    }
    Ok(p0.unanimous_issues().into_iter().all(|(issue, value)| {
        let mut keeps = result.iter().map(|j| j.get(issue) == value);
        match strength {
            UnanimityStrength::Weak => keeps.any(|k| k),
            UnanimityStrength::Strong => keeps.all(|k| k),
        }
    }))
}
