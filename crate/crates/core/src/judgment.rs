//! Judgments, profiles and the elementary profile-level predicates.
//!
//! A [`Judgment`] is a fixed-length 0/1 assignment aligned with an agenda.
//! Issue `0` is the most significant bit, so the natural ordering of
//! judgments is the lexicographic order of their bitstrings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::Formula;

/// Hard upper bound on the number of issues a judgment can carry.
pub const MAX_JUDGMENT_LEN: usize = 63;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Judgment {
    len: u8,
    bits: u64,
}

pub type JudgmentSet = BTreeSet<Judgment>;

impl Judgment {
    /// Builds a judgment from per-issue truth values, issue 0 first.
    pub fn from_values(values: &[bool]) -> Result<Self> {
        if values.len() > MAX_JUDGMENT_LEN {
            return Err(Error::Capacity {
                what: "judgment length",
                actual: values.len(),
                limit: MAX_JUDGMENT_LEN,
            });
        }
        let bits = values.iter().fold(0u64, |acc, &v| (acc << 1) | u64::from(v));
        Ok(Judgment {
            len: values.len() as u8,
            bits,
        })
    }

    /// Builds the judgment whose bitstring is the `len`-bit binary
    /// representation of `index` (the `index`-th assignment in
    /// lexicographic order).
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= MAX_JUDGMENT_LEN, "judgment length {len} too large");
        debug_assert!(len == 0 || index >> len == 0);
        Judgment {
            len: len as u8,
            bits: index,
        }
    }

    /// Position of this judgment in the lexicographic enumeration of
    /// `{0,1}^m`.
    pub fn index(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Truth value of issue `issue` (0-based).
    pub fn get(&self, issue: usize) -> bool {
        assert!(issue < self.len(), "issue {issue} out of range");
        (self.bits >> (self.len() - 1 - issue)) & 1 == 1
    }

    /// Returns a copy with the value of `issue` negated.
    pub fn flipped(&self, issue: usize) -> Self {
        assert!(issue < self.len(), "issue {issue} out of range");
        Judgment {
            len: self.len,
            bits: self.bits ^ (1 << (self.len() - 1 - issue)),
        }
    }

    pub fn values(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    fn check_same_agenda(&self, other: &Judgment) -> Result<()> {
        if self.len != other.len {
            return Err(Error::AgendaMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    fn mask(&self) -> u64 {
        if self.len == 0 {
            0
        } else {
            u64::MAX >> (64 - self.len())
        }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Judgment({self})")
    }
}

impl FromStr for Judgment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let values = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::invalid(format!(
                    "bitstring `{s}` contains `{other}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            return Err(Error::invalid("empty bitstring"));
        }
        Judgment::from_values(&values)
    }
}

impl Serialize for Judgment {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Judgment {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of issues on which the judgments differ.
pub fn hamming_distance(a: &Judgment, b: &Judgment) -> Result<u32> {
    a.check_same_agenda(b)?;
    Ok((a.bits ^ b.bits).count_ones())
}

/// 0 when the judgments coincide, 1 otherwise.
pub fn drastic_distance(a: &Judgment, b: &Judgment) -> Result<u32> {
    a.check_same_agenda(b)?;
    Ok(u32::from(a != b))
}

/// Issue-agreement betweenness: `c` differs from both endpoints, the
/// endpoints differ from each other, and `c` copies every value on which
/// `a` and `b` agree.
///
/// This is not metric betweenness; `c` may be farther from `a` than `b` is.
pub fn is_between(c: &Judgment, a: &Judgment, b: &Judgment) -> Result<bool> {
    a.check_same_agenda(b)?;
    a.check_same_agenda(c)?;
    if c == a || c == b || a == b {
        return Ok(false);
    }
    let agree = !(a.bits ^ b.bits) & a.mask();
    Ok((c.bits ^ a.bits) & agree == 0)
}

/// One judgment per agent, all over the same agenda. Agents are indexed
/// from 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Judgment>", into = "Vec<Judgment>")]
pub struct Profile {
    entries: Vec<Judgment>,
}

impl Profile {
    pub fn new(entries: Vec<Judgment>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::invalid("a profile needs at least one agent"))?;
        for j in &entries[1..] {
            first.check_same_agenda(j)?;
        }
        Ok(Profile { entries })
    }

    /// Parses the profile file format: one bitstring per line, blank lines
    /// and `#` comments ignored. Rationality is not checked here; see
    /// [`Profile::load`].
    pub fn parse(text: &str) -> Result<Self> {
        let entries = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(n, l)| {
                l.parse::<Judgment>()
                    .map_err(|e| Error::invalid(format!("profile line {}: {e}", n + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Profile::new(entries)
    }

    /// Parses a profile and checks every entry against the agenda size and
    /// the constraint.
    pub fn load(text: &str, issues: usize, constraint: &Formula) -> Result<Self> {
        let profile = Profile::parse(text)?;
        if profile.issues() != issues {
            return Err(Error::AgendaMismatch {
                left: profile.issues(),
                right: issues,
            });
        }
        profile.check_rational(constraint)?;
        Ok(profile)
    }

    pub fn check_rational(&self, constraint: &Formula) -> Result<()> {
        match self.entries.iter().find(|j| !constraint.evaluate(j)) {
            Some(j) => Err(Error::Irrational(j.to_string())),
            None => Ok(()),
        }
    }

    pub fn agents(&self) -> usize {
        self.entries.len()
    }

    pub fn issues(&self) -> usize {
        self.entries[0].len()
    }

    pub fn get(&self, agent: usize) -> &Judgment {
        &self.entries[agent]
    }

    pub fn entries(&self) -> &[Judgment] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &Judgment> {
        self.entries.iter()
    }

    /// The set `{P}` of distinct judgments in the profile.
    pub fn distinct(&self) -> JudgmentSet {
        self.entries.iter().copied().collect()
    }

    pub fn counts(&self) -> BTreeMap<Judgment, usize> {
        let mut counts = BTreeMap::new();
        for j in &self.entries {
            *counts.entry(*j).or_insert(0) += 1;
        }
        counts
    }

    pub fn is_unanimous(&self) -> bool {
        self.entries.iter().all(|j| *j == self.entries[0])
    }

    /// The mode set: every judgment held by a maximal number of agents.
    pub fn plurality_judgments(&self) -> JudgmentSet {
        let counts = self.counts();
        let top = counts.values().copied().max().unwrap_or(0);
        counts
            .into_iter()
            .filter(|&(_, c)| c == top)
            .map(|(j, _)| j)
            .collect()
    }

    /// The single most frequent judgment, if the mode is unique.
    pub fn unique_plurality(&self) -> Option<Judgment> {
        let modes = self.plurality_judgments();
        if modes.len() == 1 {
            modes.into_iter().next()
        } else {
            None
        }
    }

    /// Weak-majority reading of plurality: at least as many agents hold
    /// `j` as do not.
    pub fn literal_plurality_predicate(&self, j: &Judgment) -> bool {
        let holders = self.entries.iter().filter(|e| *e == j).count();
        holders >= self.agents() - holders
    }

    /// Issue-wise strict majority. The result may be irrational.
    pub fn majority_judgment(&self) -> Result<Judgment> {
        let n = self.agents();
        let values = (0..self.issues())
            .map(|issue| {
                let ones = self.entries.iter().filter(|j| j.get(issue)).count();
                match (2 * ones).cmp(&n) {
                    std::cmp::Ordering::Greater => Ok(true),
                    std::cmp::Ordering::Less => Ok(false),
                    std::cmp::Ordering::Equal => Err(Error::MajorityTie { issue }),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Judgment::from_values(&values)
    }

    /// Issues on which every agent agrees, with the shared value.
    pub fn unanimous_issues(&self) -> Vec<(usize, bool)> {
        let first = self.entries[0];
        (0..self.issues())
            .filter(|&i| self.entries.iter().all(|j| j.get(i) == first.get(i)))
            .map(|i| (i, first.get(i)))
            .collect()
    }

    pub fn with_agent(&self, agent: usize, j: Judgment) -> Self {
        let mut entries = self.entries.clone();
        entries[agent] = j;
        Profile { entries }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for j in &self.entries {
            out.push_str(&j.to_string());
            out.push('\n');
        }
        out
    }
}

impl TryFrom<Vec<Judgment>> for Profile {
    type Error = Error;

    fn try_from(entries: Vec<Judgment>) -> Result<Self> {
        Profile::new(entries)
    }
}

impl From<Profile> for Vec<Judgment> {
    fn from(p: Profile) -> Self {
        p.entries
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, j) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, ")")
    }
}
