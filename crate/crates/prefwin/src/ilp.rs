//! 0-1 integer-program formulation of the possible-winner decision, an
//! embedded exact branch-and-bound solver, and LP-format export.
//!
//! The model has one binary variable `x[l,i,j]` per (voter, candidate, rank)
//! stating that voter `l` ranks candidate `i` at position `j`. Assignment
//! constraints force one rank per candidate and one candidate per rank;
//! precedence constraints encode each vote's preference pairs; winner
//! constraints force the distinguished candidate's total to be at least
//! (strictly above, in unique mode) every opponent's.
//!
//! The base model for a given (m, n) contains only the assignment
//! constraints and is cached, since it is shared by every candidate check on
//! every profile of that size.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use thiserror::Error;

use crate::orders::{Candidate, PartialProfile, Ranking, TotalProfile};
use crate::rules::{ScoringRule, WinnerMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Le,
    Ge,
}

/// One linear constraint over the binary variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinCon {
    pub name: String,
    /// (coefficient, variable id) with nonzero coefficients only.
    pub terms: Vec<(i64, usize)>,
    pub rel: Rel,
    pub rhs: i64,
}

impl LinCon {
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        let lhs: i64 = self
            .terms
            .iter()
            .map(|&(c, v)| if assignment[v] { c } else { 0 })
            .sum();
        match self.rel {
            Rel::Eq => lhs == self.rhs,
            Rel::Le => lhs <= self.rhs,
            Rel::Ge => lhs >= self.rhs,
        }
    }
}

/// Winner metadata mirrored from the winner constraints; the solver's bound
/// computations read these instead of re-deriving them from the raw rows.
#[derive(Debug, Clone, PartialEq, Eq)]
struct WinnerMeta {
    w: Candidate,
    /// Score of each 1-based rank.
    scores: Vec<u64>,
    /// Required gap: 0 for co-winner, 1 for unique.
    gap: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpModel {
    m: usize,
    n: usize,
    cons: Vec<LinCon>,
    /// Per-voter direct precedence pairs (a, b): a must rank above b.
    prec: Vec<Vec<(Candidate, Candidate)>>,
    winner: Option<WinnerMeta>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// A satisfying 0-1 assignment, indexed by variable id.
    Feasible(Vec<bool>),
    Infeasible,
    /// Budget exhausted before the search space was covered.
    Timeout,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

impl IlpModel {
    /// Variable id of `x[l,i,j]` (0-based voter, candidate, rank).
    #[inline]
    pub fn var(&self, l: usize, i: Candidate, j: usize) -> usize {
        (l * self.m + i) * self.m + j
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn var_count(&self) -> usize {
        self.m * self.m * self.n
    }

    pub fn constraints(&self) -> &[LinCon] {
        &self.cons
    }

    /// One precedence constraint per preference pair of each vote: the pair
    /// `a ≻ b` becomes `rank(b) − rank(a) ≥ 1` in rank-variable form.
    pub fn add_profile_constraints(&mut self, profile: &PartialProfile) {
        assert_eq!(profile.m(), self.m);
        assert_eq!(profile.n(), self.n);
        for (l, vote) in profile.votes().iter().enumerate() {
            for (a, b) in vote.pairs() {
                self.add_precedence(l, a, b);
            }
        }
    }

    /// A single raw pair `a ≻ b` for voter `l`.
    pub fn add_precedence(&mut self, l: usize, a: Candidate, b: Candidate) {
        let mut terms = Vec::with_capacity(2 * self.m);
        for j in 0..self.m {
            let p = (j + 1) as i64;
            terms.push((p, self.var(l, b, j)));
            terms.push((-p, self.var(l, a, j)));
        }
        self.cons.push(LinCon {
            name: format!("prec_{}_{}_{}", l + 1, a + 1, b + 1),
            terms,
            rel: Rel::Ge,
            rhs: 1,
        });
        self.prec[l].push((a, b));
    }

    /// The m−1 winner rows: for every opponent `i`, the distinguished
    /// candidate's total minus `i`'s total is ≥ 0 (≥ 1 in unique mode).
    /// Rank positions with zero score are skipped.
    pub fn add_winner_constraints(&mut self, w: Candidate, rule: &ScoringRule, mode: WinnerMode) {
        let scores = rule.vector(self.m);
        let gap = match mode {
            WinnerMode::CoWinner => 0,
            WinnerMode::Unique => 1,
        };
        for i in 0..self.m {
            if i == w {
                continue;
            }
            let mut terms = Vec::new();
            for l in 0..self.n {
                for (j, &s) in scores.iter().enumerate() {
                    if s == 0 {
                        continue;
                    }
                    terms.push((s as i64, self.var(l, w, j)));
                    terms.push((-(s as i64), self.var(l, i, j)));
                }
            }
            self.cons.push(LinCon {
                name: format!("win_{}", i + 1),
                terms,
                rel: Rel::Ge,
                rhs: gap as i64,
            });
        }
        self.winner = Some(WinnerMeta { w, scores, gap });
    }

    /// Exact feasibility search. `deadline`, when set, is checked
    /// periodically at branch points.
    pub fn solve(&self, deadline: Option<Instant>) -> SolveOutcome {
        Solver::new(self, deadline).run()
    }

    /// Serializes the model in textual LP format. Deterministic: the same
    /// model always produces identical bytes.
    pub fn export_lp(&self) -> String {
        let mut out = String::new();
        out.push_str("Maximize\n obj: 0\nSubject To\n");
        for con in &self.cons {
            out.push_str(&format!(" {}:", con.name));
            for (k, &(coef, v)) in con.terms.iter().enumerate() {
                let sign = if coef < 0 {
                    "-"
                } else if k == 0 {
                    ""
                } else {
                    "+"
                };
                if !sign.is_empty() {
                    out.push_str(&format!(" {sign}"));
                }
                let mag = coef.unsigned_abs();
                if mag != 1 {
                    out.push_str(&format!(" {mag}"));
                }
                out.push_str(&format!(" {}", self.var_name(v)));
            }
            let rel = match con.rel {
                Rel::Eq => "=",
                Rel::Le => "<=",
                Rel::Ge => ">=",
            };
            out.push_str(&format!(" {rel} {}\n", con.rhs));
        }
        out.push_str("Binaries\n");
        for v in 0..self.var_count() {
            out.push_str(&format!(" {}\n", self.var_name(v)));
        }
        out.push_str("End\n");
        out
    }

    fn var_name(&self, v: usize) -> String {
        let j = v % self.m;
        let i = (v / self.m) % self.m;
        let l = v / (self.m * self.m);
        format!("x_{}_{}_{}", l + 1, i + 1, j + 1)
    }
}

/// The assignment-constraint skeleton shared by every model of size (m, n):
/// `Σ_j x[l,i,j] = 1` and `Σ_i x[l,i,j] = 1`.
pub fn build_base_model(m: usize, n: usize) -> IlpModel {
    BASE_BUILDS.fetch_add(1, Ordering::Relaxed);
    let mut model = IlpModel {
        m,
        n,
        cons: Vec::with_capacity(2 * m * n),
        prec: vec![Vec::new(); n],
        winner: None,
    };
    for l in 0..n {
        for i in 0..m {
            let terms = (0..m).map(|j| (1, model.var(l, i, j))).collect();
            model.cons.push(LinCon {
                name: format!("assign_{}_{}", l + 1, i + 1),
                terms,
                rel: Rel::Eq,
                rhs: 1,
            });
        }
        for j in 0..m {
            let terms = (0..m).map(|i| (1, model.var(l, i, j))).collect();
            model.cons.push(LinCon {
                name: format!("rank_{}_{}", l + 1, j + 1),
                terms,
                rel: Rel::Eq,
                rhs: 1,
            });
        }
    }
    model
}

static BASE_CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<IlpModel>>>> = OnceLock::new();
static BASE_BUILDS: AtomicUsize = AtomicUsize::new(0);

/// Cached variant of [`build_base_model`]; the skeleton per (m, n) is
/// constructed once per process.
pub fn base_model(m: usize, n: usize) -> Arc<IlpModel> {
    let cache = BASE_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("cache poisoned");
    map.entry((m, n))
        .or_insert_with(|| Arc::new(build_base_model(m, n)))
        .clone()
}

/// How many times a base model has actually been constructed (cache misses
/// plus direct builds) in this process.
pub fn base_model_builds() -> usize {
    BASE_BUILDS.load(Ordering::Relaxed)
}

/// Rankings encoded in a feasible assignment, one per voter.
pub fn extract_completion(assignment: &[bool], m: usize, n: usize) -> TotalProfile {
    let mut votes = Vec::with_capacity(n);
    for l in 0..n {
        let mut order = vec![usize::MAX; m];
        for i in 0..m {
            for j in 0..m {
                if assignment[(l * m + i) * m + j] {
                    order[j] = i;
                }
            }
        }
        votes.push(Ranking::new(order).expect("assignment constraints hold"));
    }
    TotalProfile::new(votes).expect("n >= 1")
}

/// Convenience: the full possible-winner model for one candidate.
pub fn pw_model(
    profile: &PartialProfile,
    rule: &ScoringRule,
    c: Candidate,
    mode: WinnerMode,
) -> IlpModel {
    let mut model = (*base_model(profile.m(), profile.n())).clone();
    model.add_profile_constraints(profile);
    model.add_winner_constraints(c, rule, mode);
    model
}

/// Possible-winner set computed purely by per-candidate ILP feasibility.
/// `None` entries in the result would mean timeouts; this variant panics on
/// them, so only call it without a deadline or in tests.
pub fn pw_set_ilp(profile: &PartialProfile, rule: &ScoringRule, mode: WinnerMode) -> Vec<Candidate> {
    (0..profile.m())
        .filter(|&c| match pw_model(profile, rule, c, mode).solve(None) {
            SolveOutcome::Feasible(_) => true,
            SolveOutcome::Infeasible => false,
            SolveOutcome::Timeout => unreachable!("no deadline configured"),
        })
        .collect()
}

/// Depth-first branch-and-bound specialized to the model structure: each
/// voter's block of variables encodes a permutation, so the search fills
/// voters sequentially, rank by rank, over candidates whose in-vote
/// predecessors are already placed. Winner rows contribute score bounds for
/// pruning; the final assignment is verified against every constraint row.
struct Solver<'a> {
    model: &'a IlpModel,
    deadline: Option<Instant>,
    m: usize,
    n: usize,
    /// `preds[l][c]`: candidates that must precede `c` in voter `l`.
    preds: Vec<Vec<Vec<Candidate>>>,
    /// Branch order per voter (winner first, then descending fan-out).
    try_order: Vec<Vec<Candidate>>,
    /// Static per-(voter, candidate) best/worst achievable rank scores.
    hi: Vec<Vec<u64>>,
    lo: Vec<Vec<u64>>,
    /// Suffix sums of `hi`/`lo` over voters `l..n`.
    hi_suffix: Vec<Vec<u64>>,
    lo_suffix: Vec<Vec<u64>>,
    /// Realized scores for placements made so far.
    cur: Vec<u64>,
    /// Per-voter placement state (voters above the search frontier keep
    /// theirs through backtracking).
    placed: Vec<Vec<bool>>,
    /// Remaining unplaced-predecessor counts, per voter.
    rem_pred: Vec<Vec<usize>>,
    order: Vec<Vec<Candidate>>,
    nodes: u64,
    timed_out: bool,
}

impl<'a> Solver<'a> {
    fn new(model: &'a IlpModel, deadline: Option<Instant>) -> Self {
        let (m, n) = (model.m, model.n);
        let scores = model
            .winner
            .as_ref()
            .map(|w| w.scores.clone())
            .unwrap_or_else(|| vec![0; m]);
        let mut preds = vec![vec![Vec::new(); m]; n];
        let mut succ_count = vec![vec![0usize; m]; n];
        for (l, pairs) in model.prec.iter().enumerate() {
            for &(a, b) in pairs {
                preds[l][b].push(a);
                succ_count[l][a] += 1;
            }
        }
        // Feasible rank window per (voter, candidate) from ancestor and
        // descendant counts in the precedence closure; scores are monotone
        // non-increasing, so the window's endpoints bound the rank score.
        let mut hi = vec![vec![0u64; m]; n];
        let mut lo = vec![vec![0u64; m]; n];
        for l in 0..n {
            let anc = reach_counts(m, &model.prec[l], true);
            let desc = reach_counts(m, &model.prec[l], false);
            for c in 0..m {
                let top = anc[c].min(m - 1);
                let bottom = (m - 1).saturating_sub(desc[c]);
                hi[l][c] = scores[top];
                lo[l][c] = scores[bottom.max(top)];
            }
        }
        let mut hi_suffix = vec![vec![0u64; m]; n + 1];
        let mut lo_suffix = vec![vec![0u64; m]; n + 1];
        for l in (0..n).rev() {
            for c in 0..m {
                hi_suffix[l][c] = hi_suffix[l + 1][c] + hi[l][c];
                lo_suffix[l][c] = lo_suffix[l + 1][c] + lo[l][c];
            }
        }
        let w = model.winner.as_ref().map(|meta| meta.w);
        let try_order = (0..n)
            .map(|l| {
                let mut cands: Vec<Candidate> = (0..m).collect();
                cands.sort_by_key(|&c| {
                    (Some(c) != w, std::cmp::Reverse(succ_count[l][c]), c)
                });
                cands
            })
            .collect();
        Solver {
            model,
            deadline,
            m,
            n,
            preds,
            try_order,
            hi,
            lo,
            hi_suffix,
            lo_suffix,
            cur: vec![0; m],
            placed: vec![vec![false; m]; n],
            rem_pred: vec![vec![0; m]; n],
            order: vec![Vec::new(); n],
            nodes: 0,
            timed_out: false,
        }
    }

    fn run(&mut self) -> SolveOutcome {
        if self.voter(0) {
            let mut assignment = vec![false; self.model.var_count()];
            for (l, order) in self.order.iter().enumerate() {
                for (j, &c) in order.iter().enumerate() {
                    assignment[self.model.var(l, c, j)] = true;
                }
            }
            debug_assert!(self.model.cons.iter().all(|c| c.satisfied_by(&assignment)));
            SolveOutcome::Feasible(assignment)
        } else if self.timed_out {
            SolveOutcome::Timeout
        } else {
            SolveOutcome::Infeasible
        }
    }

    fn out_of_time(&mut self) -> bool {
        self.nodes += 1;
        if self.timed_out {
            return true;
        }
        if self.nodes % 64 == 1 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                    return true;
                }
            }
        }
        false
    }

    /// Can the winner still end at least `gap` above every opponent, given
    /// exact scores for voters before `l` and static bounds from `l` on?
    fn bound_ok(&self, next_voter: usize) -> bool {
        let Some(meta) = &self.model.winner else {
            return true;
        };
        let w = meta.w;
        let hi_w = self.cur[w] + self.hi_suffix[next_voter][w];
        (0..self.m).filter(|&i| i != w).all(|i| {
            let lo_i = self.cur[i] + self.lo_suffix[next_voter][i];
            lo_i + meta.gap <= hi_w
        })
    }

    fn voter(&mut self, l: usize) -> bool {
        if l == self.n {
            return self.verify_leaf();
        }
        for c in 0..self.m {
            self.rem_pred[l][c] = self.preds[l][c].len();
            self.placed[l][c] = false;
        }
        self.order[l].clear();
        self.rank(l, 0)
    }

    fn rank(&mut self, l: usize, j: usize) -> bool {
        if self.out_of_time() {
            return false;
        }
        if j == self.m {
            return self.bound_ok(l + 1) && self.voter(l + 1);
        }
        let score = self
            .model
            .winner
            .as_ref()
            .map_or(0, |meta| meta.scores[j]);
        for idx in 0..self.m {
            let c = self.try_order[l][idx];
            if self.placed[l][c] || self.rem_pred[l][c] != 0 {
                continue;
            }
            self.placed[l][c] = true;
            for k in 0..self.m {
                if self.preds[l][k].contains(&c) {
                    self.rem_pred[l][k] -= 1;
                }
            }
            self.cur[c] += score;
            self.order[l].push(c);
            // Replace this voter's static bound contribution for c with the
            // now-exact score before checking the bound.
            if self.partial_bound_ok(l) && self.rank(l, j + 1) {
                return true; // keep the placement stack intact
            }
            self.order[l].pop();
            self.cur[c] -= score;
            self.placed[l][c] = false;
            for k in 0..self.m {
                if self.preds[l][k].contains(&c) {
                    self.rem_pred[l][k] += 1;
                }
            }
            if self.timed_out {
                return false;
            }
        }
        false
    }

    /// Bound check mid-voter: placed candidates contribute their exact
    /// current-vote score, unplaced ones their static per-vote bound.
    fn partial_bound_ok(&self, l: usize) -> bool {
        let Some(meta) = &self.model.winner else {
            return true;
        };
        let w = meta.w;
        let hi_w = self.cur[w]
            + self.hi_suffix[l + 1][w]
            + if self.placed[l][w] { 0 } else { self.hi[l][w] };
        (0..self.m).filter(|&i| i != w).all(|i| {
            let lo_i = self.cur[i]
                + self.lo_suffix[l + 1][i]
                + if self.placed[l][i] { 0 } else { self.lo[l][i] };
            lo_i + meta.gap <= hi_w
        })
    }

    fn verify_leaf(&self) -> bool {
        // Assignment rows hold by construction; check precedence and winner
        // rows (and anything injected) against the concrete rankings.
        let mut assignment = vec![false; self.model.var_count()];
        for (l, order) in self.order.iter().enumerate() {
            for (j, &c) in order.iter().enumerate() {
                assignment[self.model.var(l, c, j)] = true;
            }
        }
        self.model.cons.iter().all(|c| c.satisfied_by(&assignment))
    }
}

/// For each candidate, the number of candidates reachable through the pair
/// list (ancestors when `up`, descendants otherwise). Cycles saturate; the
/// counts are only used as rank bounds.
fn reach_counts(m: usize, pairs: &[(Candidate, Candidate)], up: bool) -> Vec<usize> {
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in pairs {
        if up {
            adj[b].push(a);
        } else {
            adj[a].push(b);
        }
    }
    (0..m)
        .map(|start| {
            let mut seen = vec![false; m];
            seen[start] = true;
            let mut stack = vec![start];
            let mut count = 0;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            count
        })
        .collect()
}

/// Parses the grammar produced by [`IlpModel::export_lp`]. Only the
/// constraint rows and binary declarations are recovered; re-exporting the
/// parsed model reproduces the input bytes.
pub fn parse_lp(text: &str) -> Result<IlpModel, LpError> {
    #[derive(PartialEq)]
    enum Section {
        Preamble,
        Constraints,
        Binaries,
        Done,
    }
    let err = |line: usize, msg: &str| LpError::Syntax {
        line,
        msg: msg.to_string(),
    };
    let mut section = Section::Preamble;
    let mut cons: Vec<LinCon> = Vec::new();
    let mut max_l = 0usize;
    let mut max_i = 0usize;
    let mut binaries = 0usize;
    for (num, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = num + 1;
        match line {
            "" => continue,
            "Maximize" | "obj: 0" => continue,
            "Subject To" => {
                section = Section::Constraints;
                continue;
            }
            "Binaries" => {
                section = Section::Binaries;
                continue;
            }
            "End" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Constraints => {
                let (name, rest) = line
                    .split_once(':')
                    .ok_or_else(|| err(lineno, "missing constraint name"))?;
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                if tokens.len() < 3 {
                    return Err(err(lineno, "truncated constraint"));
                }
                let rel = match tokens[tokens.len() - 2] {
                    "=" => Rel::Eq,
                    "<=" => Rel::Le,
                    ">=" => Rel::Ge,
                    other => return Err(err(lineno, &format!("bad relation {other:?}"))),
                };
                let rhs: i64 = tokens[tokens.len() - 1]
                    .parse()
                    .map_err(|_| err(lineno, "bad right-hand side"))?;
                let mut terms = Vec::new();
                let mut sign = 1i64;
                let mut coef: Option<i64> = None;
                for &tok in &tokens[..tokens.len() - 2] {
                    match tok {
                        "+" => sign = 1,
                        "-" => sign = -1,
                        t if t.starts_with('x') => {
                            let (l, i, j) = parse_var(t).ok_or_else(|| {
                                err(lineno, &format!("bad variable {t:?}"))
                            })?;
                            max_l = max_l.max(l);
                            max_i = max_i.max(i).max(j);
                            terms.push((sign * coef.unwrap_or(1), (l, i, j)));
                            sign = 1;
                            coef = None;
                        }
                        t => {
                            coef = Some(
                                t.parse::<i64>()
                                    .map_err(|_| err(lineno, &format!("bad token {t:?}")))?,
                            );
                        }
                    }
                }
                if coef.is_some() {
                    return Err(err(lineno, "dangling coefficient"));
                }
                cons.push(LinCon {
                    name: name.to_string(),
                    // Var ids are resolved once m is known, below; stash the
                    // triple in the id slot meanwhile.
                    terms: terms
                        .into_iter()
                        .map(|(c, (l, i, j))| (c, encode_triple(l, i, j)))
                        .collect(),
                    rel,
                    rhs,
                });
            }
            Section::Binaries => {
                let (l, i, j) =
                    parse_var(line).ok_or_else(|| err(lineno, "bad binary declaration"))?;
                max_l = max_l.max(l);
                max_i = max_i.max(i).max(j);
                binaries += 1;
            }
            Section::Preamble | Section::Done => {
                return Err(err(lineno, "unexpected content"));
            }
        }
    }
    if section != Section::Done {
        return Err(err(text.lines().count(), "missing End"));
    }
    let (m, n) = (max_i + 1, max_l + 1);
    if binaries != m * m * n {
        return Err(err(0, "binary declarations do not cover the variable grid"));
    }
    let mut model = IlpModel {
        m,
        n,
        cons: Vec::new(),
        prec: vec![Vec::new(); n],
        winner: None,
    };
    model.cons = cons
        .into_iter()
        .map(|c| LinCon {
            terms: c
                .terms
                .into_iter()
                .map(|(coef, t)| {
                    let (l, i, j) = decode_triple(t);
                    (coef, model.var(l, i, j))
                })
                .collect(),
            ..c
        })
        .collect();
    Ok(model)
}

fn parse_var(tok: &str) -> Option<(usize, usize, usize)> {
    let mut it = tok.strip_prefix("x_")?.split('_');
    let l: usize = it.next()?.parse().ok()?;
    let i: usize = it.next()?.parse().ok()?;
    let j: usize = it.next()?.parse().ok()?;
    if it.next().is_some() || l == 0 || i == 0 || j == 0 {
        return None;
    }
    Some((l - 1, i - 1, j - 1))
}

fn encode_triple(l: usize, i: usize, j: usize) -> usize {
    ((l << 20) | (i << 10) | j) as usize
}

fn decode_triple(t: usize) -> (usize, usize, usize) {
    (t >> 20, (t >> 10) & 0x3ff, t & 0x3ff)
}
