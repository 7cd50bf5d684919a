//! Possible-winner computation, organized to avoid integer programming
//! whenever cheaper arguments suffice.
//!
//! Phase 1 reads everything off the necessary-winner workspace: best-score
//! arguments confirm some candidates as possible winners and pigeonhole or
//! pairwise-domination arguments eliminate others. Phase 2 tries to prove
//! each remaining candidate a winner constructively, by greedily building a
//! completion biased in its favor (sound but incomplete). Phase 3 settles
//! whoever is left with one exact ILP feasibility check per candidate.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::ilp::{self, SolveOutcome};
use crate::nw::NwWorkspace;
use crate::orders::{Candidate, PartialProfile, Ranking, TotalProfile};
use crate::rules::{score_profile, ScoringRule, WinnerMode};
use crate::flow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Flow for plurality/veto, three-phase otherwise.
    Auto,
    Flow,
    ThreePhase,
    Ilp,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Auto => "auto",
            Method::Flow => "flow",
            Method::ThreePhase => "threephase",
            Method::Ilp => "ilp",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(Method::Auto),
            "flow" => Ok(Method::Flow),
            "threephase" => Ok(Method::ThreePhase),
            "ilp" => Ok(Method::Ilp),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PwOptions {
    pub method: Method,
    pub mode: WinnerMode,
    /// Shared wall-clock budget for all exact solves of the run.
    pub timeout: Option<Duration>,
}

impl Default for PwOptions {
    fn default() -> Self {
        PwOptions {
            method: Method::Auto,
            mode: WinnerMode::CoWinner,
            timeout: None,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PwError {
    #[error("method 'flow' supports plurality and veto only, not {rule}")]
    FlowUnsupported { rule: ScoringRule },
}

/// Where each candidate was decided, plus instrumentation. The four sets and
/// the phase-3 outcomes partition the candidates.
#[derive(Debug, Clone, Default)]
pub struct PhaseReport {
    pub confirmed_phase1: Vec<Candidate>,
    pub pruned_phase1: Vec<Candidate>,
    pub confirmed_phase2: Vec<Candidate>,
    pub undecided_into_phase3: Vec<Candidate>,
    pub confirmed_phase3: Vec<Candidate>,
    pub rejected_phase3: Vec<Candidate>,
    /// Budget ran out before these were decided.
    pub timeout_candidates: Vec<Candidate>,
    pub ilp_invocations: usize,
    pub phase_times: [Duration; 3],
}

#[derive(Debug, Clone)]
pub struct PwOutcome {
    pub winners: Vec<Candidate>,
    /// Non-empty only when the timeout elided some phase-3 checks.
    pub unknown: Vec<Candidate>,
    pub report: PhaseReport,
}

/// Phase 1: split candidates into confirmed possible winners, certain
/// non-winners, and undecided, using only score bounds.
pub fn phase1(
    ws: &NwWorkspace<'_>,
    mode: WinnerMode,
) -> (Vec<Candidate>, Vec<Candidate>, Vec<Candidate>) {
    let m = ws.profile().m();
    let s_total = ws.s_total();
    let mut confirmed = vec![false; m];
    let mut pruned = vec![false; m];
    // Pigeonhole: someone always reaches s_total/m, so a candidate whose
    // best total sits below that can never top the poll.
    for c in 0..m {
        pruned[c] = ws.s_max(c) * (m as u64) < s_total;
    }
    // Best-total maximum: in the completion realizing c's best total nobody
    // can pass it, so the argmax candidates win there (for a unique win the
    // maximum must be unattained by anyone else).
    let best = (0..m).map(|c| ws.s_max(c)).max().expect("m >= 1");
    let argmax: Vec<Candidate> = (0..m).filter(|&c| ws.s_max(c) == best).collect();
    match mode {
        WinnerMode::CoWinner => {
            for &c in &argmax {
                confirmed[c] = true;
            }
        }
        WinnerMode::Unique => {
            if let [only] = argmax[..] {
                confirmed[only] = true;
            }
        }
    }
    // Majority of the total score: opponents share the rest, each below c.
    for c in 0..m {
        if 2 * ws.s_max(c) > s_total {
            confirmed[c] = true;
        }
    }
    // Necessary winners are possible winners; while checking, a rival whose
    // best adversarial outcome still loses to c can never win at all.
    for &c in &argmax {
        let mut survives = true;
        for w in ws.opponents_desc(c) {
            let (sum_c, sum_w) = ws.competition(c, w);
            if sum_w < sum_c {
                pruned[w] = true;
            }
            let defeated = match mode {
                WinnerMode::CoWinner => sum_w > sum_c,
                WinnerMode::Unique => sum_w >= sum_c,
            };
            if defeated {
                survives = false;
            }
        }
        if survives {
            confirmed[c] = true;
        }
    }
    // Full pairwise sweep over the still-undecided: if w's best outcome
    // against any rival c still falls short, no completion lets w win.
    for w in 0..m {
        if confirmed[w] || pruned[w] {
            continue;
        }
        for c in (0..m).filter(|&c| c != w) {
            let (sum_c, sum_w) = ws.competition(c, w);
            let hopeless = match mode {
                WinnerMode::CoWinner => sum_w < sum_c,
                WinnerMode::Unique => sum_w <= sum_c,
            };
            if hopeless {
                pruned[w] = true;
                break;
            }
        }
    }
    debug_assert!((0..m).all(|c| !(confirmed[c] && pruned[c])));
    let conf: Vec<_> = (0..m).filter(|&c| confirmed[c]).collect();
    let prun: Vec<_> = (0..m).filter(|&c| pruned[c] && !confirmed[c]).collect();
    let undec: Vec<_> = (0..m).filter(|&c| !confirmed[c] && !pruned[c]).collect();
    (conf, prun, undec)
}

/// Phase 2: greedily build a completion designed to make `c` win. Per vote,
/// `c` takes the deepest rank that still yields its best available score;
/// other ranks go, among candidates whose in-vote predecessors are already
/// placed, to the one with the lowest running total (known possible winners
/// last, then index). Sound only: `Some` proves membership, `None` proves
/// nothing.
pub fn phase2_try_completion(
    profile: &PartialProfile,
    rule: &ScoringRule,
    c: Candidate,
    known_pw: &[Candidate],
    mode: WinnerMode,
) -> Option<TotalProfile> {
    let m = profile.m();
    // Iterate with rival feedback: whoever beat c in the last attempt gets
    // pushed to the deep ranks of the next one. Once feedback stalls, a few
    // randomized tie-break restarts explore nearby completions. Each
    // attempt is sound on its own, so any winning completion proves
    // membership.
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b97f4a7c15 ^ c as u64);
    let mut low: Vec<Candidate> = known_pw.to_vec();
    let mut stalled = 0;
    for _ in 0..m + 104 {
        // Widen the notion of "tied total" as restarts accumulate, so later
        // attempts shuffle among near-ties too.
        let shuffle = if stalled > 0 {
            Some((&mut rng, 1u64 << ((stalled - 1) % 4)))
        } else {
            None
        };
        let (total, totals) = build_completion(profile, rule, c, &low, shuffle);
        if mode.winners(&totals).contains(&c) {
            return Some(total);
        }
        // Everyone who reached c's total is a rival worth suppressing.
        let threshold = match mode {
            WinnerMode::CoWinner => totals[c] + 1,
            WinnerMode::Unique => totals[c],
        };
        let mut grew = false;
        for x in (0..m).filter(|&x| x != c) {
            if totals[x] >= threshold && !low.contains(&x) {
                low.push(x);
                grew = true;
            }
        }
        if !grew {
            stalled += 1;
            if stalled > 96 {
                return None;
            }
        }
    }
    None
}

fn build_completion(
    profile: &PartialProfile,
    rule: &ScoringRule,
    c: Candidate,
    low: &[Candidate],
    mut shuffle: Option<(&mut ChaCha8Rng, u64)>,
) -> (TotalProfile, Vec<u64>) {
    let m = profile.m();
    let scores = rule.vector(m);
    let mut totals = vec![0u64; m];
    let mut votes = Vec::with_capacity(profile.n());
    for p in profile.votes() {
        // Deepest rank where c still scores as much as at its best rank.
        let top = p.up_size(c); // best (smallest) feasible rank of c
        let bottom = m - p.down_size(c) + 1;
        let pos_c = (top..=bottom)
            .rev()
            .find(|&q| scores[q - 1] == scores[top - 1])
            .expect("window non-empty");
        let mut anc_left: usize = top - 1; // unplaced strict ancestors of c
        let mut placed = vec![false; m];
        let mut order = Vec::with_capacity(m);
        for j in 1..=m {
            let pick = if j == pos_c {
                c
            } else {
                let must_take_ancestor = j < pos_c && pos_c - j == anc_left;
                (0..m)
                    .filter(|&x| {
                        x != c
                            && !placed[x]
                            && (0..m).all(|a| !p.gt(a, x) || placed[a])
                            && (!must_take_ancestor || p.gt(x, c))
                    })
                    .min_by_key(|&x| {
                        let (bucket, jitter) = match shuffle.as_mut() {
                            Some((rng, grain)) => (totals[x] / *grain, rng.gen_range(0..m)),
                            None => (totals[x], x),
                        };
                        (low.contains(&x), bucket, jitter, x)
                    })
                    .expect("an eligible candidate always exists")
            };
            placed[pick] = true;
            if pick != c && p.gt(pick, c) {
                anc_left -= 1;
            }
            totals[pick] += scores[j - 1];
            order.push(pick);
        }
        votes.push(Ranking::new(order).expect("permutation"));
    }
    let total = TotalProfile::new(votes).expect("n >= 1");
    debug_assert!(total.extends(profile));
    (total, totals)
}

/// The full possible-winner set. Unknown candidates (budget exhausted during
/// their exact check) are reported explicitly, never folded into either side.
pub fn pw_set(
    profile: &PartialProfile,
    rule: &ScoringRule,
    options: &PwOptions,
) -> Result<PwOutcome, PwError> {
    let deadline = options.timeout.map(|t| Instant::now() + t);
    match options.method {
        Method::Auto => match rule {
            ScoringRule::Plurality | ScoringRule::Veto => Ok(flow_outcome(profile, rule, options)),
            _ => Ok(three_phase(profile, rule, options, deadline)),
        },
        Method::Flow => match rule {
            ScoringRule::Plurality | ScoringRule::Veto => Ok(flow_outcome(profile, rule, options)),
            _ => Err(PwError::FlowUnsupported { rule: rule.clone() }),
        },
        Method::ThreePhase => Ok(three_phase(profile, rule, options, deadline)),
        Method::Ilp => Ok(ilp_only(profile, rule, options, deadline)),
    }
}

fn flow_outcome(profile: &PartialProfile, rule: &ScoringRule, options: &PwOptions) -> PwOutcome {
    let start = Instant::now();
    let winners = match rule {
        ScoringRule::Plurality => flow::pw_set_plurality(profile, options.mode),
        ScoringRule::Veto => flow::pw_set_veto(profile, options.mode),
        _ => unreachable!("guarded by pw_set"),
    };
    let mut report = PhaseReport {
        confirmed_phase1: winners.clone(),
        pruned_phase1: (0..profile.m()).filter(|c| !winners.contains(c)).collect(),
        ..PhaseReport::default()
    };
    report.phase_times[0] = start.elapsed();
    PwOutcome {
        winners,
        unknown: Vec::new(),
        report,
    }
}

fn three_phase(
    profile: &PartialProfile,
    rule: &ScoringRule,
    options: &PwOptions,
    deadline: Option<Instant>,
) -> PwOutcome {
    let mode = options.mode;
    let t0 = Instant::now();
    let ws = NwWorkspace::new(profile, rule);
    let (confirmed1, pruned1, undecided1) = phase1(&ws, mode);
    let t1 = Instant::now();

    let mut known_pw = confirmed1.clone();
    let mut confirmed2 = Vec::new();
    let mut into_phase3 = Vec::new();
    for &c in &undecided1 {
        if phase2_try_completion(profile, rule, c, &known_pw, mode).is_some() {
            confirmed2.push(c);
            known_pw.push(c);
        } else {
            into_phase3.push(c);
        }
    }
    let t2 = Instant::now();

    let outcomes: Vec<(Candidate, SolveOutcome)> = into_phase3
        .par_iter()
        .map(|&c| {
            let outcome = if deadline.is_some_and(|d| Instant::now() >= d) {
                SolveOutcome::Timeout
            } else {
                ilp::pw_model(profile, rule, c, mode).solve(deadline)
            };
            (c, outcome)
        })
        .collect();
    let mut confirmed3 = Vec::new();
    let mut rejected3 = Vec::new();
    let mut unknown = Vec::new();
    let mut ilp_invocations = 0;
    for (c, outcome) in outcomes {
        match outcome {
            SolveOutcome::Feasible(_) => {
                ilp_invocations += 1;
                confirmed3.push(c);
            }
            SolveOutcome::Infeasible => {
                ilp_invocations += 1;
                rejected3.push(c);
            }
            SolveOutcome::Timeout => unknown.push(c),
        }
    }
    let t3 = Instant::now();

    let mut winners: Vec<Candidate> = confirmed1
        .iter()
        .chain(&confirmed2)
        .chain(&confirmed3)
        .copied()
        .collect();
    winners.sort_unstable();
    PwOutcome {
        winners,
        unknown: unknown.clone(),
        report: PhaseReport {
            confirmed_phase1: confirmed1,
            pruned_phase1: pruned1,
            confirmed_phase2: confirmed2,
            undecided_into_phase3: into_phase3,
            confirmed_phase3: confirmed3,
            rejected_phase3: rejected3,
            timeout_candidates: unknown,
            ilp_invocations,
            phase_times: [t1 - t0, t2 - t1, t3 - t2],
        },
    }
}

fn ilp_only(
    profile: &PartialProfile,
    rule: &ScoringRule,
    options: &PwOptions,
    deadline: Option<Instant>,
) -> PwOutcome {
    let start = Instant::now();
    let candidates: Vec<Candidate> = (0..profile.m()).collect();
    let outcomes: Vec<(Candidate, SolveOutcome)> = candidates
        .par_iter()
        .map(|&c| {
            (
                c,
                ilp::pw_model(profile, rule, c, options.mode).solve(deadline),
            )
        })
        .collect();
    let mut report = PhaseReport::default();
    let mut winners = Vec::new();
    let mut unknown = Vec::new();
    for (c, outcome) in outcomes {
        report.undecided_into_phase3.push(c);
        match outcome {
            SolveOutcome::Feasible(_) => {
                report.ilp_invocations += 1;
                report.confirmed_phase3.push(c);
                winners.push(c);
            }
            SolveOutcome::Infeasible => {
                report.ilp_invocations += 1;
                report.rejected_phase3.push(c);
            }
            SolveOutcome::Timeout => unknown.push(c),
        }
    }
    report.timeout_candidates = unknown.clone();
    report.phase_times[2] = start.elapsed();
    PwOutcome {
        winners,
        unknown,
        report,
    }
}

impl PhaseReport {
    /// The disjoint-partition sanity condition over `m` candidates.
    pub fn partitions(&self, m: usize) -> bool {
        let mut seen = vec![0usize; m];
        for set in [
            &self.confirmed_phase1,
            &self.pruned_phase1,
            &self.confirmed_phase2,
            &self.undecided_into_phase3,
        ] {
            for &c in set.iter() {
                seen[c] += 1;
            }
        }
        // Phase-3 outcomes re-list the undecided set.
        let phase3: usize = self.confirmed_phase3.len()
            + self.rejected_phase3.len()
            + self.timeout_candidates.len();
        seen.iter().all(|&k| k == 1) && phase3 == self.undecided_into_phase3.len()
    }
}

/// Winners of a complete profile, for cross-checks.
pub fn complete_winners(total: &TotalProfile, rule: &ScoringRule, mode: WinnerMode) -> Vec<Candidate> {
    mode.winners(&score_profile(rule, total))
}
