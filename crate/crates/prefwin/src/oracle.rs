//! Exhaustive reference solver: enumerate every completion of every vote and
//! read the winners off directly. Exact but exponential; usable for small
//! instances only and for validating the fast paths.
//!
//! Permutations are generated and filtered per vote with a direct pair scan,
//! deliberately not reusing [`crate::orders::PartialOrder::completions`], so
//! the two enumeration routes check each other.

use crate::orders::{Candidate, PartialOrder, PartialProfile};
use crate::rules::{ScoringRule, WinnerMode};

/// Result of brute-force winner enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Candidates that win in every completion, ascending.
    pub necessary: Vec<Candidate>,
    /// Candidates that win in at least one completion, ascending.
    pub possible: Vec<Candidate>,
}

/// Distinct per-candidate score vectors a single vote can award, via
/// heap-permutation enumeration filtered against the vote's pairs.
fn vote_score_vectors(rule: &ScoringRule, vote: &PartialOrder) -> Vec<Vec<u64>> {
    let m = vote.m();
    let pairs = vote.pairs();
    let mut vecs: Vec<Vec<u64>> = Vec::new();
    let mut perm: Vec<Candidate> = (0..m).collect();
    heap_permutations(&mut perm, m, &mut |p| {
        // p lists candidates best to worst; keep iff consistent with the vote.
        let mut pos = vec![0usize; m];
        for (i, &c) in p.iter().enumerate() {
            pos[c] = i;
        }
        if pairs.iter().all(|&(a, b)| pos[a] < pos[b]) {
            let sv: Vec<u64> = (0..m).map(|c| rule.score(m, pos[c] + 1)).collect();
            if !vecs.contains(&sv) {
                vecs.push(sv);
            }
        }
    });
    vecs
}

fn heap_permutations(perm: &mut Vec<Candidate>, k: usize, f: &mut impl FnMut(&[Candidate])) {
    if k <= 1 {
        f(perm);
        return;
    }
    for i in 0..k {
        heap_permutations(perm, k - 1, f);
        if k % 2 == 0 {
            perm.swap(i, k - 1);
        } else {
            perm.swap(0, k - 1);
        }
    }
}

/// Number of leaf combinations [`winner_sets`] will visit: the product over
/// votes of the distinct score-vector counts. Useful for budgeting before
/// committing to a brute-force run.
pub fn oracle_cost(rule: &ScoringRule, profile: &PartialProfile) -> u128 {
    profile
        .votes()
        .iter()
        .map(|v| vote_score_vectors(rule, v).len() as u128)
        .product()
}

/// Necessary and possible winners by full enumeration.
pub fn winner_sets(
    rule: &ScoringRule,
    profile: &PartialProfile,
    mode: WinnerMode,
) -> OracleResult {
    let m = profile.m();
    let per_vote: Vec<Vec<Vec<u64>>> = profile
        .votes()
        .iter()
        .map(|v| vote_score_vectors(rule, v))
        .collect();
    let mut necessary = vec![true; m];
    let mut possible = vec![false; m];
    let mut totals = vec![0u64; m];
    combine(&per_vote, 0, &mut totals, mode, &mut necessary, &mut possible);
    OracleResult {
        necessary: (0..m).filter(|&c| necessary[c]).collect(),
        possible: (0..m).filter(|&c| possible[c]).collect(),
    }
}

fn combine(
    per_vote: &[Vec<Vec<u64>>],
    i: usize,
    totals: &mut Vec<u64>,
    mode: WinnerMode,
    necessary: &mut [bool],
    possible: &mut [bool],
) {
    if i == per_vote.len() {
        let wins = mode.winners(totals);
        let mut iter = wins.iter().copied().peekable();
        for c in 0..totals.len() {
            if iter.peek() == Some(&c) {
                possible[c] = true;
                iter.next();
            } else {
                necessary[c] = false;
            }
        }
        return;
    }
    for sv in &per_vote[i] {
        for (t, s) in totals.iter_mut().zip(sv) {
            *t += s;
        }
        combine(per_vote, i + 1, totals, mode, necessary, possible);
        for (t, s) in totals.iter_mut().zip(sv) {
            *t -= s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::{PartialProfile, Ranking, TotalProfile};
    use crate::rules::{score_profile, ScoringRule, WinnerMode};

    fn po(m: usize, pairs: &[(usize, usize)]) -> PartialOrder {
        PartialOrder::from_pairs(m, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn complete_profile_matches_direct_scoring() {
        // Fully specified votes: oracle must agree with plain scoring.
        let votes = vec![
            po(3, &[(0, 1), (1, 2)]),
            po(3, &[(0, 1), (1, 2)]),
            po(3, &[(1, 0), (0, 2)]),
        ];
        let profile = PartialProfile::new(votes).unwrap();
        let rankings = vec![
            Ranking::new(vec![0, 1, 2]).unwrap(),
            Ranking::new(vec![0, 1, 2]).unwrap(),
            Ranking::new(vec![1, 0, 2]).unwrap(),
        ];
        let total = TotalProfile::new(rankings).unwrap();
        for rule in [ScoringRule::Plurality, ScoringRule::Borda, ScoringRule::Veto] {
            let direct = crate::rules::winners(&score_profile(&rule, &total));
            let r = winner_sets(&rule, &profile, WinnerMode::CoWinner);
            assert_eq!(r.necessary, direct);
            assert_eq!(r.possible, direct);
        }
    }

    #[test]
    fn empty_votes_plurality() {
        // Two voters, all candidates incomparable: anyone may come first,
        // nobody must.
        let profile = PartialProfile::new(vec![po(3, &[]); 2]).unwrap();
        let r = winner_sets(&ScoringRule::Plurality, &profile, WinnerMode::CoWinner);
        assert_eq!(r.necessary, Vec::<usize>::new());
        assert_eq!(r.possible, vec![0, 1, 2]);
        let u = winner_sets(&ScoringRule::Plurality, &profile, WinnerMode::Unique);
        assert_eq!(u.necessary, Vec::<usize>::new());
        assert_eq!(u.possible, vec![0, 1, 2]);
    }

    #[test]
    fn partial_borda_example() {
        // One voter knows 0 > 1 and nothing about 2.
        let profile = PartialProfile::new(vec![po(3, &[(0, 1)])]).unwrap();
        let r = winner_sets(&ScoringRule::Borda, &profile, WinnerMode::CoWinner);
        // Completions: 012 (scores 2,1,0), 021 (2,0,1), 201 (1,0,2).
        assert_eq!(r.possible, vec![0, 2]);
        assert_eq!(r.necessary, Vec::<usize>::new());
        let u = winner_sets(&ScoringRule::Borda, &profile, WinnerMode::Unique);
        assert_eq!(u.possible, vec![0, 2]);
    }

    #[test]
    fn unique_vs_cowinner() {
        // Vote A: 0 > 1, 2 unconstrained. Vote B: 1 > 0, 2 unconstrained.
        // Under plurality, 0 and 1 can tie at 1; 2 can reach 2.
        let profile =
            PartialProfile::new(vec![po(3, &[(0, 1)]), po(3, &[(1, 0)])]).unwrap();
        let co = winner_sets(&ScoringRule::Plurality, &profile, WinnerMode::CoWinner);
        let un = winner_sets(&ScoringRule::Plurality, &profile, WinnerMode::Unique);
        assert_eq!(co.possible, vec![0, 1, 2]);
        assert_eq!(un.possible, vec![2]);
        assert!(co.necessary.is_empty() && un.necessary.is_empty());
    }

    #[test]
    fn nw_subset_pw_and_cost() {
        let mut rng = crate::testutil::TestRng::new(23);
        for _ in 0..60 {
            let m = 2 + rng.below(4);
            let n = 1 + rng.below(3);
            let votes: Vec<_> = (0..n)
                .map(|_| {
                    let pairs = crate::testutil::random_dag_pairs(&mut rng, m);
                    PartialOrder::from_pairs(m, pairs).unwrap()
                })
                .collect();
            let profile = PartialProfile::new(votes).unwrap();
            for mode in [WinnerMode::CoWinner, WinnerMode::Unique] {
                let r = winner_sets(&ScoringRule::Borda, &profile, mode);
                assert!(r.necessary.iter().all(|c| r.possible.contains(c)));
                assert!(!r.possible.is_empty() || mode == WinnerMode::Unique);
            }
            assert!(oracle_cost(&ScoringRule::Borda, &profile) >= 1);
        }
    }
}
