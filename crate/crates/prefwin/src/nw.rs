//! Necessary-winner computation.
//!
//! A candidate `c` is a necessary winner when it wins in every completion of
//! the profile. Deciding this is polynomial: for each opponent `w` the
//! adversary completes every vote independently so as to minimize
//! `score(c) − score(w)`, and `c` survives iff no opponent overtakes it in
//! its own adversarial completion.
//!
//! [`nw_set`] computes the full set with the workspace optimizations
//! (contender restriction to the best-possible-score maximum, opponents in
//! decreasing strength order, early exit, structural shortcuts for the
//! Up/Down sizes). [`nw_set_baseline`] is the deliberately plain variant
//! kept for speed-up benchmarking; the two always agree.

use crate::orders::{Candidate, PartialOrder, PartialProfile, StructureClass};
use crate::rules::{ScoringRule, WinnerMode};

/// `|Down(c) ∩ Up(w)|` including both endpoints. Requires `c ≻ w`.
#[inline]
fn block_size(p: &PartialOrder, c: Candidate, w: Candidate) -> usize {
    let between: usize = p
        .succ_row(c)
        .iter()
        .zip(p.pred_row(w))
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum();
    between + 2
}

/// Adversarial positions for the pair `(c, w)` in one vote: the completion
/// minimizing `score(c) − score(w)`. Returns the two scores.
///
/// If `c ⊁ w`, the adversary pushes `c` to its lowest feasible position and
/// `w` to its highest. If `c ≻ w`, the block of candidates pinned between
/// them slides as one unit; every feasible start is evaluated (ties toward
/// the earliest start).
pub fn adversarial_pair(
    p: &PartialOrder,
    c: Candidate,
    w: Candidate,
    rule: &ScoringRule,
) -> (u64, u64) {
    let scores = rule.vector(p.m());
    let b = if p.gt(c, w) { Some(block_size(p, c, w)) } else { None };
    adversarial_scores(&scores, p.up_size(w), p.down_size(c), b)
}

/// Core of [`adversarial_pair`] on precomputed sizes. `block` is
/// `Some(|Block(c,w)|)` when `c ≻ w` in the vote.
#[inline]
fn adversarial_scores(
    scores: &[u64],
    up_w: usize,
    down_c: usize,
    block: Option<usize>,
) -> (u64, u64) {
    let m = scores.len();
    match block {
        None => (scores[m - down_c], scores[up_w - 1]),
        Some(b) => {
            // c sits at the block's start q, w at its end q + b − 1.
            let q_lo = (up_w - b + 1).max(1);
            let q_hi = m - down_c + 1;
            let mut best = (scores[q_lo - 1], scores[q_lo + b - 2]);
            for q in q_lo + 1..=q_hi {
                if best.0 - best.1 == 0 {
                    break; // scores are non-increasing, so 0 is optimal
                }
                let cand = (scores[q - 1], scores[q + b - 2]);
                if cand.0 - cand.1 < best.0 - best.1 {
                    best = cand;
                }
            }
            best
        }
    }
}

/// Decides whether `c` wins in every completion of the profile.
pub fn check_nw(
    c: Candidate,
    profile: &PartialProfile,
    rule: &ScoringRule,
    mode: WinnerMode,
) -> bool {
    let m = profile.m();
    let scores = rule.vector(m);
    (0..m).filter(|&w| w != c).all(|w| {
        let (mut sum_c, mut sum_w) = (0u64, 0u64);
        for p in profile.votes() {
            let b = if p.gt(c, w) { Some(block_size(p, c, w)) } else { None };
            let (sc, sw) = adversarial_scores(&scores, p.up_size(w), p.down_size(c), b);
            sum_c += sc;
            sum_w += sw;
        }
        match mode {
            WinnerMode::CoWinner => sum_w <= sum_c,
            WinnerMode::Unique => sum_w < sum_c,
        }
    })
}

/// Per-profile caches that the optimized set computation (and the
/// possible-winner pipeline's first phase) share: Up/Down sizes per
/// (voter, candidate), the vote structures, and each candidate's best
/// achievable total.
pub struct NwWorkspace<'a> {
    profile: &'a PartialProfile,
    scores: Vec<u64>,
    /// `up[l][c]`, `down[l][c]`: inclusive Up/Down set sizes.
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    classes: Vec<StructureClass>,
    /// `s_max[c] = Σ_l score(m, up[l][c])`: best total over completions.
    s_max: Vec<u64>,
}

/// Up/Down sizes for one vote via its structure, avoiding per-candidate set
/// scans on chains and partitioned votes.
pub(crate) fn structural_sizes(
    p: &PartialOrder,
    class: &StructureClass,
) -> (Vec<usize>, Vec<usize>) {
    let m = p.m();
    match class {
        StructureClass::LinearForest => {
            // Walk each chain of the covering relation once.
            let red = p.transitive_reduction();
            let mut has_pred = vec![false; m];
            for out in &red {
                for &b in out {
                    has_pred[b] = true;
                }
            }
            let mut up = vec![0usize; m];
            let mut down = vec![0usize; m];
            for head in 0..m {
                if has_pred[head] {
                    continue;
                }
                let mut chain = vec![head];
                let mut cur = head;
                while let Some(&nx) = red[cur].first() {
                    chain.push(nx);
                    cur = nx;
                }
                let len = chain.len();
                for (i, &c) in chain.iter().enumerate() {
                    up[c] = i + 1;
                    down[c] = len - i;
                }
            }
            (up, down)
        }
        StructureClass::Partitioned(blocks) => {
            let mut up = vec![0usize; m];
            let mut down = vec![0usize; m];
            let mut above = 0;
            for block in blocks {
                for &c in block {
                    up[c] = above + 1;
                }
                above += block.len();
            }
            let mut below = 0;
            for block in blocks.iter().rev() {
                for &c in block {
                    down[c] = below + 1;
                }
                below += block.len();
            }
            (up, down)
        }
        StructureClass::General => (
            (0..m).map(|c| p.up_size(c)).collect(),
            (0..m).map(|c| p.down_size(c)).collect(),
        ),
    }
}

impl<'a> NwWorkspace<'a> {
    pub fn new(profile: &'a PartialProfile, rule: &ScoringRule) -> Self {
        let m = profile.m();
        let scores = rule.vector(m);
        let mut up = Vec::with_capacity(profile.n());
        let mut down = Vec::with_capacity(profile.n());
        let mut classes = Vec::with_capacity(profile.n());
        for p in profile.votes() {
            let class = p.classify_structure();
            let (u, d) = structural_sizes(p, &class);
            up.push(u);
            down.push(d);
            classes.push(class);
        }
        let s_max = (0..m)
            .map(|c| up.iter().map(|u| scores[u[c] - 1]).sum())
            .collect();
        NwWorkspace {
            profile,
            scores,
            up,
            down,
            classes,
            s_max,
        }
    }

    pub fn profile(&self) -> &PartialProfile {
        self.profile
    }

    pub fn score_vector(&self) -> &[u64] {
        &self.scores
    }

    pub fn up_size(&self, voter: usize, c: Candidate) -> usize {
        self.up[voter][c]
    }

    pub fn down_size(&self, voter: usize, c: Candidate) -> usize {
        self.down[voter][c]
    }

    pub fn class(&self, voter: usize) -> &StructureClass {
        &self.classes[voter]
    }

    /// Best total `c` can achieve over all completions.
    pub fn s_max(&self, c: Candidate) -> u64 {
        self.s_max[c]
    }

    /// Fixed total score any complete profile hands out.
    pub fn s_total(&self) -> u64 {
        self.scores.iter().sum::<u64>() * self.profile.n() as u64
    }

    /// Adversarial score sums for the competition `c` vs `w`.
    pub fn competition(&self, c: Candidate, w: Candidate) -> (u64, u64) {
        let (mut sum_c, mut sum_w) = (0u64, 0u64);
        for (l, p) in self.profile.votes().iter().enumerate() {
            let b = if p.gt(c, w) { Some(block_size(p, c, w)) } else { None };
            let (sc, sw) =
                adversarial_scores(&self.scores, self.up[l][w], self.down[l][c], b);
            sum_c += sc;
            sum_w += sw;
        }
        (sum_c, sum_w)
    }

    /// Candidates attaining the maximum best-possible total. Only these can
    /// be necessary winners: any other candidate is overtaken in the
    /// completion that realizes a stronger rival's best total.
    pub fn contenders(&self) -> Vec<Candidate> {
        let best = *self.s_max.iter().max().expect("non-empty");
        (0..self.profile.m())
            .filter(|&c| self.s_max[c] == best)
            .collect()
    }

    /// Opponents of `c` in decreasing strength order (strongest first), so a
    /// defeat is found as early as possible.
    pub fn opponents_desc(&self, c: Candidate) -> Vec<Candidate> {
        let mut opp: Vec<Candidate> =
            (0..self.profile.m()).filter(|&w| w != c).collect();
        opp.sort_by_key(|&w| std::cmp::Reverse(self.s_max[w]));
        opp
    }
}

/// The full necessary-winner set, optimized: only contenders are checked,
/// opponents are tried strongest-first, and each check stops at its first
/// defeat.
pub fn nw_set(profile: &PartialProfile, rule: &ScoringRule, mode: WinnerMode) -> Vec<Candidate> {
    let ws = NwWorkspace::new(profile, rule);
    nw_set_from_workspace(&ws, mode)
}

pub fn nw_set_from_workspace(ws: &NwWorkspace<'_>, mode: WinnerMode) -> Vec<Candidate> {
    let contenders = ws.contenders();
    let mut out = Vec::new();
    for &c in &contenders {
        let survives = ws.opponents_desc(c).into_iter().all(|w| {
            let (sum_c, sum_w) = ws.competition(c, w);
            match mode {
                WinnerMode::CoWinner => sum_w <= sum_c,
                WinnerMode::Unique => sum_w < sum_c,
            }
        });
        if survives {
            out.push(c);
        }
    }
    out.sort_unstable();
    out
}

/// Plain variant for benchmarking: Up/Down sets are still computed once per
/// vote (by breadth-first search over the covering relation, as explicit
/// sets), but every candidate is checked against every opponent in index
/// order, with no contender restriction and no structural shortcuts.
pub fn nw_set_baseline(
    profile: &PartialProfile,
    rule: &ScoringRule,
    mode: WinnerMode,
) -> Vec<Candidate> {
    let m = profile.m();
    let scores = rule.vector(m);
    // Per vote: explicit Up/Down sets per candidate via BFS.
    let mut ups: Vec<Vec<Vec<Candidate>>> = Vec::with_capacity(profile.n());
    let mut downs: Vec<Vec<Vec<Candidate>>> = Vec::with_capacity(profile.n());
    for p in profile.votes() {
        let red = p.transitive_reduction();
        let mut rev = vec![Vec::new(); m];
        for (a, out) in red.iter().enumerate() {
            for &b in out {
                rev[b].push(a);
            }
        }
        downs.push((0..m).map(|c| bfs(&red, c)).collect());
        ups.push((0..m).map(|c| bfs(&rev, c)).collect());
    }
    let mut out = Vec::new();
    for c in 0..m {
        let mut survives = true;
        for w in 0..m {
            if w == c {
                continue;
            }
            let (mut sum_c, mut sum_w) = (0u64, 0u64);
            for l in 0..profile.n() {
                let down_c = &downs[l][c];
                let up_w = &ups[l][w];
                let b = if down_c.contains(&w) {
                    Some(down_c.iter().filter(|x| up_w.contains(x)).count())
                } else {
                    None
                };
                let (sc, sw) = adversarial_scores(&scores, up_w.len(), down_c.len(), b);
                sum_c += sc;
                sum_w += sw;
            }
            let defeated = match mode {
                WinnerMode::CoWinner => sum_w > sum_c,
                WinnerMode::Unique => sum_w >= sum_c,
            };
            if defeated {
                survives = false;
                break;
            }
        }
        if survives {
            out.push(c);
        }
    }
    out
}

fn bfs(adj: &[Vec<Candidate>], start: Candidate) -> Vec<Candidate> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut queue = std::collections::VecDeque::from([start]);
    let mut out = vec![start];
    while let Some(x) = queue.pop_front() {
        for &nx in &adj[x] {
            if !seen[nx] {
                seen[nx] = true;
                out.push(nx);
                queue.push_back(nx);
            }
        }
    }
    out.sort_unstable();
    out
}
