//! Embedding of ranked voting into judgment aggregation: one issue per
//! ordered option pair, constrained to transitive (hence linear) orders.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Agenda, Formula, Framework};
use crate::judgment::{Judgment, Profile, MAX_JUDGMENT_LEN};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionSet {
    options: Vec<String>,
}

impl OptionSet {
    pub fn new<S: Into<String>>(options: impl IntoIterator<Item = S>) -> Result<Self> {
        let options: Vec<String> = options.into_iter().map(Into::into).collect();
        if options.len() < 2 {
            return Err(Error::invalid("at least two options are required"));
        }
        let mut seen = HashSet::new();
        for o in &options {
            if o.is_empty() || !o.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::invalid(format!("option name `{o}` must be alphanumeric")));
            }
            if !seen.insert(o.as_str()) {
                return Err(Error::invalid(format!("duplicate option `{o}`")));
            }
        }
        Ok(OptionSet { options })
    }

    /// Options `x1 .. xm`.
    pub fn numbered(m: usize) -> Result<Self> {
        Self::new((1..=m).map(|i| format!("x{i}")))
    }

    pub fn len(&self) -> usize {
        self.options.len()
    }

    pub fn is_empty(&self) -> bool {
        self.options.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.options
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.options.iter().position(|o| o == name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.options[index]
    }
}

/// A strict ranking of every option, best first, stored as option indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearOrder {
    ranking: Vec<usize>,
}

impl LinearOrder {
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; ranking.len()];
        for &r in &ranking {
            if r >= ranking.len() || std::mem::replace(&mut seen[r], true) {
                return Err(Error::invalid("a ranking must be a permutation of the options"));
            }
        }
        Ok(LinearOrder { ranking })
    }

    /// Parses `x1>x3>x2` against `options`.
    pub fn parse(text: &str, options: &OptionSet) -> Result<Self> {
        let ranking = text
            .split('>')
            .map(|name| {
                let name = name.trim();
                options
                    .position(name)
                    .ok_or_else(|| Error::invalid(format!("unknown option `{name}` in vote `{text}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if ranking.len() != options.len() {
            return Err(Error::invalid(format!(
                "vote `{text}` ranks {} of {} options",
                ranking.len(),
                options.len()
            )));
        }
        Self::new(ranking)
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    /// Whether option `a` is ranked above option `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        let pos = |x| self.ranking.iter().position(|&r| r == x).expect("option in ranking");
        pos(a) < pos(b)
    }

    pub fn display<'a>(&'a self, options: &'a OptionSet) -> impl fmt::Display + 'a {
        DisplayVote { vote: self, options }
    }
}

struct DisplayVote<'a> {
    vote: &'a LinearOrder,
    options: &'a OptionSet,
}

impl fmt::Display for DisplayVote<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &o) in self.vote.ranking.iter().enumerate() {
            if k > 0 {
                f.write_str(">")?;
            }
            f.write_str(self.options.name(o))?;
        }
        Ok(())
    }
}

/// Reads one vote per line; blank lines and `#` comments are skipped.
pub fn parse_votes(text: &str, options: &OptionSet) -> Result<Vec<LinearOrder>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| LinearOrder::parse(l, options))
        .collect()
}

/// Collects option names from a votes file in order of first appearance,
/// then sorts them by (length, name) so `x2` precedes `x10`.
pub fn infer_options(text: &str) -> Result<OptionSet> {
    let mut names: Vec<String> = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        for name in line.split('>').map(str::trim) {
            if !names.iter().any(|n| n == name) {
                names.push(name.to_string());
            }
        }
    }
    names.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    OptionSet::new(names)
}

/// The preference agenda over an option set with its transitivity constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceAgenda {
    pub options: OptionSet,
    pub framework: Framework,
    pairs: Vec<(usize, usize)>,
}

/// One issue `aPb` per option pair `a < b` (in option order). For every
/// triple `i < j < k` the constraint forbids both cyclic patterns:
/// `iPj & jPk -> iPk` and `!iPj & !jPk -> !iPk`. With two options the
/// constraint is the tautology on the single issue.
pub fn build_preference_agenda(options: &OptionSet) -> Result<PreferenceAgenda> {
    let m = options.len();
    let issue_count = m * (m - 1) / 2;
    if issue_count > MAX_JUDGMENT_LEN {
        return Err(Error::Capacity {
            what: "preference issues",
            actual: issue_count,
            limit: MAX_JUDGMENT_LEN,
        });
    }
    let mut pairs = Vec::with_capacity(issue_count);
    for a in 0..m {
        for b in a + 1..m {
            pairs.push((a, b));
        }
    }
    let agenda = Agenda::new(
        pairs
            .iter()
            .map(|&(a, b)| format!("{}P{}", options.name(a), options.name(b))),
    )?;
    let issue = |a: usize, b: usize| Formula::var(pairs.iter().position(|&p| p == (a, b)).expect("pair exists"));
    let mut clauses = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                clauses.push(Formula::implies(
                    Formula::and(issue(i, j), issue(j, k)),
                    issue(i, k),
                ));
                clauses.push(Formula::implies(
                    Formula::and(Formula::not(issue(i, j)), Formula::not(issue(j, k))),
                    Formula::not(issue(i, k)),
                ));
            }
        }
    }
    let constraint = Formula::conjunction(clauses).unwrap_or_else(|| Formula::tautology(0));
    let framework = Framework::new(agenda, constraint)?;
    Ok(PreferenceAgenda {
        options: options.clone(),
        framework,
        pairs,
    })
}

impl PreferenceAgenda {
    pub fn issues(&self) -> usize {
        self.pairs.len()
    }

    pub fn vote_to_judgment(&self, vote: &LinearOrder) -> Result<Judgment> {
        if vote.len() != self.options.len() {
            return Err(Error::invalid(format!(
                "vote ranks {} options, agenda has {}",
                vote.len(),
                self.options.len()
            )));
        }
        let values: Vec<bool> = self.pairs.iter().map(|&(a, b)| vote.prefers(a, b)).collect();
        Judgment::from_values(&values)
    }

    pub fn judgment_to_vote(&self, j: &Judgment) -> Result<LinearOrder> {
        if j.len() != self.issues() {
            return Err(Error::AgendaMismatch {
                left: j.len(),
                right: self.issues(),
            });
        }
        if !self.framework.is_rational(j) {
            return Err(Error::Irrational(j.to_string()));
        }
        // In a transitive tournament an option's rank is the number of
        // options beating it.
        let m = self.options.len();
        let mut beaten_by = vec![0usize; m];
        for (k, &(a, b)) in self.pairs.iter().enumerate() {
            if j.get(k) {
                beaten_by[b] += 1;
            } else {
                beaten_by[a] += 1;
            }
        }
        let mut ranking: Vec<usize> = (0..m).collect();
        ranking.sort_by_key(|&o| beaten_by[o]);
        LinearOrder::new(ranking)
    }

    pub fn votes_to_profile(&self, votes: &[LinearOrder]) -> Result<Profile> {
        Profile::new(votes.iter().map(|v| self.vote_to_judgment(v)).collect::<Result<_>>()?)
    }
}

/// The option beating every other option in a strict pairwise majority.
pub fn condorcet_winner(votes: &[LinearOrder]) -> Option<usize> {
    let m = votes.first()?.len();
    (0..m).find(|&a| {
        (0..m).filter(|&b| b != a).all(|b| {
            let wins = votes.iter().filter(|v| v.prefers(a, b)).count();
            2 * wins > votes.len()
        })
    })
}

/// Whether the issue-wise strict majority of `profile` satisfies `constraint`.
pub fn is_majority_consistent(profile: &Profile, constraint: &Formula) -> Result<bool> {
    Ok(constraint.evaluate(&profile.majority_judgment()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::enumerate_models;
    use crate::graph::{AgendaGraph, GraphKind};

    fn j(s: &str) -> Judgment {
        s.parse().unwrap()
    }

    fn three() -> (OptionSet, PreferenceAgenda) {
        let o = OptionSet::numbered(3).unwrap();
        let pa = build_preference_agenda(&o).unwrap();
        (o, pa)
    }

    fn vote(text: &str, o: &OptionSet) -> LinearOrder {
        LinearOrder::parse(text, o).unwrap()
    }

    #[test]
    fn agenda_shape() {
        let (_, pa) = three();
        assert_eq!(pa.framework.agenda.issues(), ["x1Px2", "x1Px3", "x2Px3"]);
        assert_eq!(pa.framework.models().unwrap().len(), 6);
        let two = build_preference_agenda(&OptionSet::numbered(2).unwrap()).unwrap();
        assert_eq!(two.framework.agenda.issues(), ["x1Px2"]);
        assert_eq!(two.framework.models().unwrap().len(), 2);
        let four = build_preference_agenda(&OptionSet::numbered(4).unwrap()).unwrap();
        assert_eq!(
            enumerate_models(&four.framework.agenda, &four.framework.constraint).unwrap().len(),
            24
        );
        assert!(OptionSet::numbered(1).is_err());
        assert!(OptionSet::new(["a", "a"]).is_err());
    }

    #[test]
    fn printed_implication_alone_leaves_a_cycle() {
        let (_, pa) = three();
        let printed = Formula::implies(Formula::and(Formula::var(0), Formula::var(2)), Formula::var(1));
        let models = enumerate_models(&pa.framework.agenda, &printed).unwrap();
        assert_eq!(models.len(), 7);
        assert!(models.contains(&j("010")));
        assert!(!pa.framework.is_rational(&j("010")));
    }

    #[test]
    fn hamming_graph_on_three_options_is_a_six_cycle() {
        let (_, pa) = three();
        let g = AgendaGraph::build(GraphKind::Hamming, &pa.framework).unwrap();
        let rational = g.rational_vertices().into_iter().collect();
        assert!(g.is_k_cycle(&rational, 6).unwrap());
    }

    #[test]
    fn vote_conversion() {
        let (o, pa) = three();
        assert_eq!(pa.vote_to_judgment(&vote("x1>x2>x3", &o)).unwrap(), j("111"));
        assert_eq!(pa.vote_to_judgment(&vote("x3>x2>x1", &o)).unwrap(), j("000"));
        for model in pa.framework.models().unwrap() {
            let v = pa.judgment_to_vote(&model).unwrap();
            assert_eq!(pa.vote_to_judgment(&v).unwrap(), model);
        }
        assert_eq!(pa.judgment_to_vote(&j("101")).unwrap_err(), Error::Irrational("101".into()));
        assert_eq!(vote("x2>x3>x1", &o).display(&o).to_string(), "x2>x3>x1");
        assert!(LinearOrder::parse("x1>x2", &o).is_err());
        assert!(LinearOrder::parse("x1>x1>x2", &o).is_err());
    }

    #[test]
    fn condorcet_examples() {
        let o = OptionSet::numbered(3).unwrap();
        let same = vec![vote("x1>x2>x3", &o); 3];
        assert_eq!(condorcet_winner(&same), Some(0));
        let cycle = parse_votes("x1>x2>x3\nx2>x3>x1\nx3>x1>x2", &o).unwrap();
        assert_eq!(condorcet_winner(&cycle), None);
        let o2 = OptionSet::numbered(2).unwrap();
        let split = parse_votes("x1>x2\nx2>x1", &o2).unwrap();
        assert_eq!(condorcet_winner(&split), None);
        assert_eq!(condorcet_winner(&[]), None);
    }

    #[test]
    fn majority_consistency() {
        let dp = Framework::doctrinal_paradox();
        let p = Profile::parse("010\n100\n111").unwrap();
        assert!(!is_majority_consistent(&p, &dp.constraint).unwrap());
        let u = Profile::parse("111\n111").unwrap();
        assert!(is_majority_consistent(&u, &dp.constraint).unwrap());

        let (o, pa) = three();
        let cycle = parse_votes("x1>x2>x3\nx2>x3>x1\nx3>x1>x2", &o).unwrap();
        let profile = pa.votes_to_profile(&cycle).unwrap();
        assert!(!is_majority_consistent(&profile, &pa.framework.constraint).unwrap());
    }

    #[test]
    fn options_inferred_from_votes() {
        let o = infer_options("x10>x2>x1\n# comment\nx1>x2>x10").unwrap();
        assert_eq!(o.names(), ["x1", "x2", "x10"]);
    }
}
