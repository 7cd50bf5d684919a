//! Positional scoring rules and winner computation on complete profiles.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::orders::{Candidate, Ranking, TotalProfile};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("a custom score vector needs at least two entries")]
    TooShort,
    #[error("score vector must be non-increasing (entry {index} rises)")]
    NotMonotone { index: usize },
    #[error("score vector must score the top position above the bottom one")]
    Flat,
    #[error("approval threshold must be at least 1")]
    ZeroApproval,
    #[error("unknown scoring rule {0:?}")]
    UnknownRule(String),
    #[error("invalid score entry {0:?}")]
    BadEntry(String),
    #[error("rule requires {required} positions but the election has {m} candidates")]
    ArityMismatch { required: usize, m: usize },
}

/// Whether "winning" means tying for the top score or strictly beating
/// everyone else.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WinnerMode {
    CoWinner,
    Unique,
}

impl WinnerMode {
    /// Winners of a scored election under this mode, ascending.
    pub fn winners(self, scores: &[u64]) -> Vec<Candidate> {
        match self {
            WinnerMode::CoWinner => winners(scores),
            WinnerMode::Unique => unique_winner(scores).into_iter().collect(),
        }
    }
}

/// A positional scoring rule. Scores are nonnegative integers, non-increasing
/// by position, with the top position scoring strictly above the bottom one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScoringRule {
    /// `(1, 0, ..., 0)`
    Plurality,
    /// `(1, ..., 1, 0)`
    Veto,
    /// `t` ones then zeros.
    TApproval(usize),
    /// `(m-1, m-2, ..., 0)`
    Borda,
    /// Explicit vector, fixed arity.
    Custom(Vec<u64>),
}

impl ScoringRule {
    pub fn t_approval(t: usize) -> Result<Self, RuleError> {
        if t == 0 {
            return Err(RuleError::ZeroApproval);
        }
        Ok(ScoringRule::TApproval(t))
    }

    pub fn custom(scores: Vec<u64>) -> Result<Self, RuleError> {
        if scores.len() < 2 {
            return Err(RuleError::TooShort);
        }
        for i in 1..scores.len() {
            if scores[i] > scores[i - 1] {
                return Err(RuleError::NotMonotone { index: i });
            }
        }
        if scores[0] == scores[scores.len() - 1] {
            return Err(RuleError::Flat);
        }
        Ok(ScoringRule::Custom(scores))
    }

    /// Checks the rule is usable for an `m`-candidate election.
    pub fn check_arity(&self, m: usize) -> Result<(), RuleError> {
        match self {
            ScoringRule::Custom(v) if v.len() != m => Err(RuleError::ArityMismatch {
                required: v.len(),
                m,
            }),
            ScoringRule::TApproval(t) if *t >= m => Err(RuleError::ArityMismatch {
                required: *t + 1,
                m,
            }),
            _ => Ok(()),
        }
    }

    /// Score of 1-based position `pos` in an `m`-candidate election.
    pub fn score(&self, m: usize, pos: usize) -> u64 {
        debug_assert!((1..=m).contains(&pos));
        match self {
            ScoringRule::Plurality => (pos == 1) as u64,
            ScoringRule::Veto => (pos != m) as u64,
            ScoringRule::TApproval(t) => (pos <= *t) as u64,
            ScoringRule::Borda => (m - pos) as u64,
            ScoringRule::Custom(v) => v[pos - 1],
        }
    }

    /// The full score vector for an `m`-candidate election.
    pub fn vector(&self, m: usize) -> Vec<u64> {
        (1..=m).map(|p| self.score(m, p)).collect()
    }

    /// Total score dealt out per vote.
    pub fn vote_total(&self, m: usize) -> u64 {
        self.vector(m).iter().sum()
    }
}

impl fmt::Display for ScoringRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoringRule::Plurality => write!(f, "plurality"),
            ScoringRule::Veto => write!(f, "veto"),
            ScoringRule::TApproval(t) => write!(f, "approval:{t}"),
            ScoringRule::Borda => write!(f, "borda"),
            ScoringRule::Custom(v) => {
                write!(f, "custom:")?;
                for (i, s) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for ScoringRule {
    type Err = RuleError;

    /// Accepts `plurality`, `veto`, `borda`, `approval:<t>`, and
    /// `custom:<s1>,<s2>,...`.
    fn from_str(s: &str) -> Result<Self, RuleError> {
        match s {
            "plurality" => return Ok(ScoringRule::Plurality),
            "veto" => return Ok(ScoringRule::Veto),
            "borda" => return Ok(ScoringRule::Borda),
            _ => {}
        }
        if let Some(t) = s.strip_prefix("approval:") {
            let t: usize = t.parse().map_err(|_| RuleError::BadEntry(t.to_string()))?;
            return ScoringRule::t_approval(t);
        }
        if let Some(v) = s.strip_prefix("custom:") {
            let scores = v
                .split(',')
                .map(|e| e.trim().parse().map_err(|_| RuleError::BadEntry(e.to_string())))
                .collect::<Result<Vec<u64>, _>>()?;
            return ScoringRule::custom(scores);
        }
        Err(RuleError::UnknownRule(s.to_string()))
    }
}

/// Per-candidate scores of a single ranking.
pub fn score_ranking(rule: &ScoringRule, r: &Ranking) -> Vec<u64> {
    let m = r.m();
    (0..m).map(|c| rule.score(m, r.rank(c))).collect()
}

/// Per-candidate totals over a complete profile.
pub fn score_profile(rule: &ScoringRule, profile: &TotalProfile) -> Vec<u64> {
    let m = profile.m();
    let mut total = vec![0u64; m];
    for v in profile.votes() {
        for c in 0..m {
            total[c] += rule.score(m, v.rank(c));
        }
    }
    total
}

/// Candidates achieving the maximum total (co-winners), ascending.
pub fn winners(scores: &[u64]) -> Vec<Candidate> {
    let best = *scores.iter().max().expect("non-empty scores");
    scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == best)
        .map(|(c, _)| c)
        .collect()
}

/// The unique winner if one candidate strictly beats all others.
pub fn unique_winner(scores: &[u64]) -> Option<Candidate> {
    let w = winners(scores);
    if w.len() == 1 {
        Some(w[0])
    } else {
        None
    }
}
