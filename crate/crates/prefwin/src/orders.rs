//! Core representations of candidates, partial and total orders, and voting
//! profiles.
//!
//! A [`PartialOrder`] is a strict partial order over `m` candidates, stored as
//! a pair of dense reachability bit-matrices (successors and predecessors)
//! kept transitively closed at construction. This makes pair queries and the
//! Up/Down set computations of the winner algorithms O(m/64).

use std::fmt;

use thiserror::Error;

/// Candidates are dense indices in `[0, m)`. Name mapping, when any, lives in
/// the CLI layer.
pub type Candidate = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("candidate index {index} out of bounds for {m} candidates")]
    IndexOutOfBounds { index: usize, m: usize },
    #[error("preference pairs contain a cycle: {}", format_cycle(.cycle))]
    Cycle { cycle: Vec<Candidate> },
    #[error("candidate {c} is not ranked above {w}")]
    NotAbove { c: Candidate, w: Candidate },
    #[error("completion enumeration limited to {bound} candidates, got {m}")]
    CompletionBound { m: usize, bound: usize },
    #[error("a profile needs at least one voter")]
    EmptyProfile,
    #[error("all votes in a profile must share the candidate count")]
    MixedCandidateCount,
    #[error("ranking is not a permutation of 0..{m}")]
    NotAPermutation { m: usize },
}

fn format_cycle(cycle: &[Candidate]) -> String {
    let mut s = String::new();
    for (k, c) in cycle.iter().enumerate() {
        if k > 0 {
            s.push_str(" > ");
        }
        s.push_str(&c.to_string());
    }
    s
}

/// Default bound for [`PartialOrder::completions`]; above this the number of
/// linear extensions is unmanageable for exhaustive work.
pub const DEFAULT_COMPLETION_BOUND: usize = 8;

/// Structural class of a partial order, used to shortcut Up/Down computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureClass {
    /// Every candidate has at most one immediate predecessor and successor in
    /// the transitive reduction (a disjoint union of chains).
    LinearForest,
    /// Candidates partition into blocks, fully ordered between blocks and
    /// incomparable within each block. Blocks are listed best to worst.
    Partitioned(Vec<Vec<Candidate>>),
    General,
}

/// A strict partial order over `m` candidates, transitively closed.
#[derive(Clone, PartialEq, Eq)]
pub struct PartialOrder {
    m: usize,
    words: usize,
    /// Row `a`: bit `b` set iff `a ≻ b`.
    succ: Vec<u64>,
    /// Row `a`: bit `b` set iff `b ≻ a`.
    pred: Vec<u64>,
}

impl fmt::Debug for PartialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialOrder(m={}, pairs={:?})", self.m, self.pairs())
    }
}

#[inline]
fn bit_get(row: &[u64], b: usize) -> bool {
    row[b / 64] >> (b % 64) & 1 == 1
}

#[inline]
fn bit_set(row: &mut [u64], b: usize) {
    row[b / 64] |= 1 << (b % 64);
}

impl PartialOrder {
    /// The empty order (all candidates incomparable).
    pub fn empty(m: usize) -> Self {
        assert!(m >= 1, "need at least one candidate");
        let words = m.div_ceil(64);
        PartialOrder {
            m,
            words,
            succ: vec![0; m * words],
            pred: vec![0; m * words],
        }
    }

    /// Builds the transitive closure of the given preference pairs
    /// `(a, b)` meaning `a ≻ b`. Fails if the closure would contain a cycle.
    pub fn from_pairs<I>(m: usize, pairs: I) -> Result<Self, OrderError>
    where
        I: IntoIterator<Item = (Candidate, Candidate)>,
    {
        let mut po = Self::empty(m);
        let words = po.words;
        let mut direct: Vec<(usize, usize)> = Vec::new();
        for (a, b) in pairs {
            for &x in &[a, b] {
                if x >= m {
                    return Err(OrderError::IndexOutOfBounds { index: x, m });
                }
            }
            if a == b {
                return Err(OrderError::Cycle { cycle: vec![a, a] });
            }
            bit_set(&mut po.succ[a * words..(a + 1) * words], b);
            direct.push((a, b));
        }
        // Floyd-Warshall on bit rows.
        for k in 0..m {
            for a in 0..m {
                if a != k && bit_get(&po.succ[a * words..], k) {
                    for w in 0..words {
                        let kw = po.succ[k * words + w];
                        po.succ[a * words + w] |= kw;
                    }
                }
            }
        }
        // Irreflexivity of the closure implies antisymmetry too.
        for a in 0..m {
            if bit_get(&po.succ[a * words..], a) {
                return Err(OrderError::Cycle {
                    cycle: find_cycle(m, &direct, a),
                });
            }
        }
        po.rebuild_pred();
        Ok(po)
    }

    fn rebuild_pred(&mut self) {
        self.pred.iter_mut().for_each(|w| *w = 0);
        for a in 0..self.m {
            for b in 0..self.m {
                if bit_get(&self.succ[a * self.words..], b) {
                    bit_set(&mut self.pred[b * self.words..(b + 1) * self.words], a);
                }
            }
        }
    }

    pub fn from_ranking(r: &Ranking) -> Self {
        let m = r.m();
        let pairs = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j)));
        let pairs: Vec<_> = pairs
            .map(|(i, j)| (r.order()[i], r.order()[j]))
            .collect();
        Self::from_pairs(m, pairs).expect("a ranking is acyclic")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// True iff `a ≻ b`.
    pub fn gt(&self, a: Candidate, b: Candidate) -> bool {
        bit_get(&self.succ[a * self.words..], b)
    }

    pub fn incomparable(&self, a: Candidate, b: Candidate) -> bool {
        a != b && !self.gt(a, b) && !self.gt(b, a)
    }

    pub fn is_total(&self) -> bool {
        (0..self.m).all(|a| (a + 1..self.m).all(|b| self.gt(a, b) || self.gt(b, a)))
    }

    /// All pairs `(a, b)` with `a ≻ b`, in lexicographic order.
    pub fn pairs(&self) -> Vec<(Candidate, Candidate)> {
        let mut out = Vec::new();
        for a in 0..self.m {
            for b in 0..self.m {
                if self.gt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn pair_count(&self) -> usize {
        self.succ.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Bit row of strict successors of `c` (candidates below `c`).
    pub(crate) fn succ_row(&self, c: Candidate) -> &[u64] {
        &self.succ[c * self.words..(c + 1) * self.words]
    }

    /// Bit row of strict predecessors of `c` (candidates above `c`).
    pub(crate) fn pred_row(&self, c: Candidate) -> &[u64] {
        &self.pred[c * self.words..(c + 1) * self.words]
    }

    /// `Up(c) = {c' : c' ⪰ c}`, includes `c` itself.
    pub fn up_set(&self, c: Candidate) -> Vec<Candidate> {
        let mut s: Vec<_> = (0..self.m).filter(|&a| self.gt(a, c)).collect();
        s.push(c);
        s.sort_unstable();
        s
    }

    /// `Down(c) = {c' : c' ⪯ c}`, includes `c` itself.
    pub fn down_set(&self, c: Candidate) -> Vec<Candidate> {
        let mut s: Vec<_> = (0..self.m).filter(|&b| self.gt(c, b)).collect();
        s.push(c);
        s.sort_unstable();
        s
    }

    pub fn up_size(&self, c: Candidate) -> usize {
        1 + self.pred_row(c).iter().map(|w| w.count_ones() as usize).sum::<usize>()
    }

    pub fn down_size(&self, c: Candidate) -> usize {
        1 + self.succ_row(c).iter().map(|w| w.count_ones() as usize).sum::<usize>()
    }

    /// `Block(c, w) = Down(c) ∩ Up(w)`, the candidates ranked between `c` and
    /// `w` inclusive. Requires `c ≻ w`.
    pub fn block(&self, c: Candidate, w: Candidate) -> Result<Vec<Candidate>, OrderError> {
        if !self.gt(c, w) {
            return Err(OrderError::NotAbove { c, w });
        }
        let down = self.down_set(c);
        let up = self.up_set(w);
        Ok(down.into_iter().filter(|x| up.contains(x)).collect())
    }

    /// Adjacency lists of the transitive reduction (covering relation).
    pub fn transitive_reduction(&self) -> Vec<Vec<Candidate>> {
        let mut adj = vec![Vec::new(); self.m];
        for a in 0..self.m {
            for b in 0..self.m {
                if !self.gt(a, b) {
                    continue;
                }
                // (a, b) is covering iff no k with a ≻ k ≻ b.
                let mid = self
                    .succ_row(a)
                    .iter()
                    .zip(self.pred_row(b))
                    .any(|(x, y)| x & y != 0);
                if !mid {
                    adj[a].push(b);
                }
            }
        }
        adj
    }

    /// Classifies per Def. 2.2 style structure; ties broken toward
    /// `LinearForest`.
    pub fn classify_structure(&self) -> StructureClass {
        if self.pair_count() == 0 {
            // An antichain fits both shapes; one block is the tighter view.
            return StructureClass::Partitioned(vec![(0..self.m).collect()]);
        }
        let red = self.transitive_reduction();
        let mut in_deg = vec![0usize; self.m];
        for out in &red {
            for &b in out {
                in_deg[b] += 1;
            }
        }
        if red.iter().all(|o| o.len() <= 1) && in_deg.iter().all(|&d| d <= 1) {
            return StructureClass::LinearForest;
        }
        if let Some(blocks) = self.try_partition() {
            return StructureClass::Partitioned(blocks);
        }
        StructureClass::General
    }

    /// Attempts the partitioned-preferences decomposition: group candidates by
    /// Up-set size, then verify between-block totality and within-block
    /// incomparability.
    fn try_partition(&self) -> Option<Vec<Vec<Candidate>>> {
        let mut by_up: Vec<(usize, Candidate)> =
            (0..self.m).map(|c| (self.up_size(c), c)).collect();
        by_up.sort_unstable();
        let mut blocks: Vec<Vec<Candidate>> = Vec::new();
        let mut covered = 0usize;
        let mut i = 0;
        while i < by_up.len() {
            let (u, _) = by_up[i];
            if u != covered + 1 {
                return None;
            }
            let mut block = Vec::new();
            while i < by_up.len() && by_up[i].0 == u {
                block.push(by_up[i].1);
                i += 1;
            }
            covered += block.len();
            blocks.push(block);
        }
        // Verify the definition exhaustively.
        for (bi, block) in blocks.iter().enumerate() {
            for &a in block {
                for &b in block {
                    if a != b && (self.gt(a, b) || self.gt(b, a)) {
                        return None;
                    }
                }
                for later in &blocks[bi + 1..] {
                    for &b in later {
                        if !self.gt(a, b) {
                            return None;
                        }
                    }
                }
            }
        }
        Some(blocks)
    }

    /// True iff every pair of `self` holds in the total order `t`.
    pub fn is_extended_by(&self, t: &Ranking) -> bool {
        debug_assert_eq!(self.m, t.m());
        (0..self.m).all(|a| {
            (0..self.m).all(|b| !self.gt(a, b) || t.position(a) < t.position(b))
        })
    }

    /// Streams the linear extensions of this order, each exactly once.
    /// Bounded because the count can be exponential in `m`.
    pub fn completions(&self, bound: usize) -> Result<Completions<'_>, OrderError> {
        if self.m > bound {
            return Err(OrderError::CompletionBound { m: self.m, bound });
        }
        Ok(Completions::new(self))
    }

    /// Poset density `d = 2D / [m(m-1)]` where `D` is the number of
    /// preference pairs.
    pub fn density(&self) -> f64 {
        if self.m < 2 {
            return 0.0;
        }
        2.0 * self.pair_count() as f64 / (self.m * (self.m - 1)) as f64
    }
}

fn find_cycle(m: usize, direct: &[(usize, usize)], start: Candidate) -> Vec<Candidate> {
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in direct {
        adj[a].push(b);
    }
    // DFS for a path start -> ... -> start over the direct edges.
    let mut stack = vec![start];
    let mut path = Vec::new();
    fn dfs(
        adj: &[Vec<usize>],
        cur: usize,
        target: usize,
        path: &mut Vec<usize>,
        seen: &mut Vec<bool>,
    ) -> bool {
        path.push(cur);
        for &nx in &adj[cur] {
            if nx == target {
                path.push(target);
                return true;
            }
            if !seen[nx] {
                seen[nx] = true;
                if dfs(adj, nx, target, path, seen) {
                    return true;
                }
            }
        }
        path.pop();
        false
    }
    let mut seen = vec![false; m];
    if dfs(&adj, stack.pop().unwrap(), start, &mut path, &mut seen) {
        path
    } else {
        vec![start, start]
    }
}

/// Backtracking iterator over the linear extensions of a partial order, in
/// lexicographic order of the emitted candidate sequences.
pub struct Completions<'a> {
    po: &'a PartialOrder,
    prefix: Vec<Candidate>,
    placed: Vec<bool>,
    /// Remaining-predecessor counts for the current prefix.
    rem_pred: Vec<usize>,
    /// Per-level cursor: next candidate index to try at that depth.
    cursor: Vec<usize>,
    done: bool,
}

impl<'a> Completions<'a> {
    fn new(po: &'a PartialOrder) -> Self {
        let m = po.m();
        let rem_pred = (0..m).map(|c| po.up_size(c) - 1).collect();
        Completions {
            po,
            prefix: Vec::with_capacity(m),
            placed: vec![false; m],
            rem_pred,
            cursor: vec![0],
            done: false,
        }
    }

    fn place(&mut self, c: Candidate) {
        self.prefix.push(c);
        self.placed[c] = true;
        for b in 0..self.po.m() {
            if self.po.gt(c, b) {
                self.rem_pred[b] -= 1;
            }
        }
        self.cursor.push(0);
    }

    fn unplace(&mut self) -> Candidate {
        self.cursor.pop();
        let c = self.prefix.pop().expect("non-empty prefix");
        self.placed[c] = false;
        for b in 0..self.po.m() {
            if self.po.gt(c, b) {
                self.rem_pred[b] += 1;
            }
        }
        c
    }
}

impl Iterator for Completions<'_> {
    type Item = Ranking;

    fn next(&mut self) -> Option<Ranking> {
        if self.done {
            return None;
        }
        let m = self.po.m();
        loop {
            if self.prefix.len() == m {
                let out = Ranking::new(self.prefix.clone()).expect("valid permutation");
                // Backtrack one level so the next call resumes the search.
                let c = self.unplace();
                *self.cursor.last_mut().unwrap() = c + 1;
                return Some(out);
            }
            let start = *self.cursor.last().unwrap();
            let next = (start..m).find(|&c| !self.placed[c] && self.rem_pred[c] == 0);
            match next {
                Some(c) => self.place(c),
                None => {
                    if self.prefix.is_empty() {
                        self.done = true;
                        return None;
                    }
                    let c = self.unplace();
                    *self.cursor.last_mut().unwrap() = c + 1;
                }
            }
        }
    }
}

/// A total order (ranking) from best to worst.
#[derive(Clone, PartialEq, Eq)]
pub struct Ranking {
    order: Vec<Candidate>,
    pos: Vec<usize>,
}

impl fmt::Debug for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ranking{:?}", self.order)
    }
}

impl Ranking {
    pub fn new(order: Vec<Candidate>) -> Result<Self, OrderError> {
        let m = order.len();
        let mut pos = vec![usize::MAX; m];
        for (i, &c) in order.iter().enumerate() {
            if c >= m || pos[c] != usize::MAX {
                return Err(OrderError::NotAPermutation { m });
            }
            pos[c] = i;
        }
        Ok(Ranking { order, pos })
    }

    pub fn identity(m: usize) -> Self {
        Ranking::new((0..m).collect()).unwrap()
    }

    pub fn m(&self) -> usize {
        self.order.len()
    }

    /// Candidates from best to worst.
    pub fn order(&self) -> &[Candidate] {
        &self.order
    }

    /// 0-based position of `c` (0 = best).
    pub fn position(&self, c: Candidate) -> usize {
        self.pos[c]
    }

    /// 1-based rank of `c` (1 = best).
    pub fn rank(&self, c: Candidate) -> usize {
        self.pos[c] + 1
    }

    /// Candidate at 1-based rank `r`.
    pub fn at_rank(&self, r: usize) -> Candidate {
        self.order[r - 1]
    }

    pub fn prefers(&self, a: Candidate, b: Candidate) -> bool {
        self.pos[a] < self.pos[b]
    }
}

/// Kendall-tau distance: the number of candidate pairs ranked in opposite
/// relative order by the two rankings.
pub fn kendall_tau(a: &Ranking, b: &Ranking) -> usize {
    debug_assert_eq!(a.m(), b.m());
    let m = a.m();
    let mut d = 0;
    for x in 0..m {
        for y in x + 1..m {
            if a.prefers(x, y) != b.prefers(x, y) {
                d += 1;
            }
        }
    }
    d
}

/// A sequence of partial orders over a shared candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialProfile {
    m: usize,
    votes: Vec<PartialOrder>,
}

impl PartialProfile {
    pub fn new(votes: Vec<PartialOrder>) -> Result<Self, OrderError> {
        let m = votes.first().ok_or(OrderError::EmptyProfile)?.m();
        if votes.iter().any(|v| v.m() != m) {
            return Err(OrderError::MixedCandidateCount);
        }
        Ok(PartialProfile { m, votes })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.votes.len()
    }

    pub fn votes(&self) -> &[PartialOrder] {
        &self.votes
    }

    /// Mean poset density across votes.
    pub fn density(&self) -> f64 {
        self.votes.iter().map(|v| v.density()).sum::<f64>() / self.n() as f64
    }
}

/// A sequence of total orders over a shared candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalProfile {
    m: usize,
    votes: Vec<Ranking>,
}

impl TotalProfile {
    pub fn new(votes: Vec<Ranking>) -> Result<Self, OrderError> {
        let m = votes.first().ok_or(OrderError::EmptyProfile)?.m();
        if votes.iter().any(|v| v.m() != m) {
            return Err(OrderError::MixedCandidateCount);
        }
        Ok(TotalProfile { m, votes })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.votes.len()
    }

    pub fn votes(&self) -> &[Ranking] {
        &self.votes
    }

    /// True iff each vote extends the corresponding partial vote.
    pub fn extends(&self, partial: &PartialProfile) -> bool {
        self.m == partial.m()
            && self.n() == partial.n()
            && self
                .votes
                .iter()
                .zip(partial.votes())
                .all(|(t, p)| p.is_extended_by(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn po(m: usize, pairs: &[(usize, usize)]) -> PartialOrder {
        PartialOrder::from_pairs(m, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn from_pairs_empty_and_closure() {
        let p = po(3, &[]);
        assert!(p.pairs().is_empty());
        let p = po(3, &[(1, 0), (0, 2)]);
        assert_eq!(p.pairs(), vec![(0, 2), (1, 0), (1, 2)]);
    }

    #[test]
    fn from_pairs_cycle() {
        let err = PartialOrder::from_pairs(2, [(0, 1), (1, 0)]).unwrap_err();
        match err {
            OrderError::Cycle { cycle } => {
                assert!(cycle.len() >= 3);
                assert_eq!(cycle.first(), cycle.last());
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn up_down_trivial() {
        let p = po(3, &[]);
        assert_eq!(p.up_set(1), vec![1]);
        assert_eq!(p.down_set(1), vec![1]);
        let chain = po(3, &[(0, 1), (1, 2)]);
        assert_eq!(chain.up_set(1), vec![0, 1]);
        assert_eq!(chain.down_set(1), vec![1, 2]);
    }

    /// Reachability oracle by exhaustive path search over direct edges.
    fn reach_oracle(m: usize, pairs: &[(usize, usize)], from: usize) -> Vec<usize> {
        let mut reach = vec![false; m];
        reach[from] = true;
        loop {
            let mut changed = false;
            for &(a, b) in pairs {
                if reach[a] && !reach[b] {
                    reach[b] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (0..m).filter(|&c| reach[c]).collect()
    }

    #[test]
    fn up_down_match_reachability_oracle() {
        let mut rng = crate::testutil::TestRng::new(7);
        for _ in 0..500 {
            let m = 2 + rng.below(7);
            let pairs = crate::testutil::random_dag_pairs(&mut rng, m);
            let p = PartialOrder::from_pairs(m, pairs.iter().copied()).unwrap();
            for c in 0..m {
                assert_eq!(p.down_set(c), reach_oracle(m, &pairs, c));
                let rev: Vec<_> = pairs.iter().map(|&(a, b)| (b, a)).collect();
                assert_eq!(p.up_set(c), reach_oracle(m, &rev, c));
                assert_eq!(p.up_size(c), p.up_set(c).len());
                assert_eq!(p.down_size(c), p.down_set(c).len());
            }
        }
    }

    #[test]
    fn block_examples() {
        let chain = po(3, &[(0, 1), (1, 2)]);
        assert_eq!(chain.block(0, 2).unwrap(), vec![0, 1, 2]);
        let sparse = po(3, &[(0, 2)]);
        assert_eq!(sparse.block(0, 2).unwrap(), vec![0, 2]);
        assert_eq!(
            sparse.block(2, 0).unwrap_err(),
            OrderError::NotAbove { c: 2, w: 0 }
        );
    }

    #[test]
    fn block_matches_set_intersection_on_random_posets() {
        let mut rng = crate::testutil::TestRng::new(11);
        for _ in 0..100 {
            let m = 5;
            let pairs = crate::testutil::random_dag_pairs(&mut rng, m);
            let p = PartialOrder::from_pairs(m, pairs.iter().copied()).unwrap();
            for c in 0..m {
                for w in 0..m {
                    if p.gt(c, w) {
                        let down = p.down_set(c);
                        let up = p.up_set(w);
                        let expect: Vec<_> =
                            down.into_iter().filter(|x| up.contains(x)).collect();
                        assert_eq!(p.block(c, w).unwrap(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn extension_checks() {
        let empty = po(3, &[]);
        let total = po(3, &[(2, 1), (1, 0)]);
        for t in all_rankings(3) {
            assert!(empty.is_extended_by(&t));
            assert_eq!(total.is_extended_by(&t), t.order() == [2, 1, 0]);
        }
    }

    fn all_rankings(m: usize) -> Vec<Ranking> {
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..m).collect();
        permute(&mut perm, 0, &mut out);
        out
    }

    fn permute(perm: &mut Vec<usize>, k: usize, out: &mut Vec<Ranking>) {
        if k == perm.len() {
            out.push(Ranking::new(perm.clone()).unwrap());
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            permute(perm, k + 1, out);
            perm.swap(k, i);
        }
    }

    #[test]
    fn completions_counts() {
        assert_eq!(po(3, &[]).completions(8).unwrap().count(), 6);
        assert_eq!(po(3, &[(0, 1), (1, 2)]).completions(8).unwrap().count(), 1);
        assert_eq!(po(3, &[(0, 1)]).completions(8).unwrap().count(), 3);
        assert!(matches!(
            PartialOrder::empty(9).completions(8),
            Err(OrderError::CompletionBound { m: 9, bound: 8 })
        ));
    }

    #[test]
    fn completions_equal_filtered_permutations() {
        let mut rng = crate::testutil::TestRng::new(3);
        for _ in 0..200 {
            let m = 2 + rng.below(5);
            let pairs = crate::testutil::random_dag_pairs(&mut rng, m);
            let p = PartialOrder::from_pairs(m, pairs.iter().copied()).unwrap();
            let mut got: Vec<Vec<usize>> = p
                .completions(8)
                .unwrap()
                .map(|r| r.order().to_vec())
                .collect();
            let mut want: Vec<Vec<usize>> = all_rankings(m)
                .into_iter()
                .filter(|t| p.is_extended_by(t))
                .map(|r| r.order().to_vec())
                .collect();
            got.sort();
            want.sort();
            assert_eq!(got, want);
            // Each exactly once.
            got.dedup();
            assert_eq!(got.len(), want.len());
        }
    }

    #[test]
    fn classify_examples() {
        let total = po(3, &[(0, 1), (1, 2)]);
        assert_eq!(total.classify_structure(), StructureClass::LinearForest);
        let empty = po(3, &[]);
        assert_eq!(
            empty.classify_structure(),
            StructureClass::Partitioned(vec![vec![0, 1, 2]])
        );
        // top-2 order over m=4: 0 ≻ 1 ≻ {2, 3}
        let topk = po(4, &[(0, 1), (1, 2), (1, 3)]);
        assert_eq!(
            topk.classify_structure(),
            StructureClass::Partitioned(vec![vec![0], vec![1], vec![2, 3]])
        );
    }

    /// Brute-force partitioned check straight from the definition.
    fn is_partitioned_bruteforce(p: &PartialOrder) -> bool {
        // Candidates with identical comparability pattern must form blocks.
        // Try every ordered set partition via the Up-size grouping is what the
        // implementation does, so test against the raw definition instead:
        // the incomparability relation must be transitive, and comparabilities
        // must respect a total order over its classes.
        let m = p.m();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if a != b && b != c && a != c {
                        let iab = p.incomparable(a, b);
                        let ibc = p.incomparable(b, c);
                        let iac = p.incomparable(a, c);
                        if iab && ibc && !iac {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn classify_matches_definition_on_random_posets() {
        let mut rng = crate::testutil::TestRng::new(17);
        for _ in 0..400 {
            let m = 2 + rng.below(6);
            let pairs = crate::testutil::random_dag_pairs(&mut rng, m);
            let p = PartialOrder::from_pairs(m, pairs.iter().copied()).unwrap();
            let is_part = matches!(
                p.classify_structure(),
                StructureClass::Partitioned(_) | StructureClass::LinearForest
            );
            // Linear forests that are total orders are also partitioned
            // (singleton blocks); our classifier prefers LinearForest.
            let brute = is_partitioned_bruteforce(&p);
            if let StructureClass::Partitioned(blocks) = p.classify_structure() {
                assert!(brute);
                let all: usize = blocks.iter().map(|b| b.len()).sum();
                assert_eq!(all, m);
            }
            if brute && !is_part {
                panic!("partitioned poset classified General: {p:?}");
            }
        }
    }

    #[test]
    fn kendall_tau_examples() {
        let abc = Ranking::new(vec![0, 1, 2]).unwrap();
        let cba = Ranking::new(vec![2, 1, 0]).unwrap();
        let bca = Ranking::new(vec![1, 2, 0]).unwrap();
        assert_eq!(kendall_tau(&abc, &abc), 0);
        assert_eq!(kendall_tau(&abc, &cba), 3);
        assert_eq!(kendall_tau(&abc, &bca), 2);
        assert_eq!(kendall_tau(&bca, &abc), 2);
    }

    #[test]
    fn density_examples() {
        assert_eq!(po(3, &[]).density(), 0.0);
        assert_eq!(po(3, &[(0, 1), (1, 2)]).density(), 1.0);
        assert!((po(3, &[(0, 1)]).density() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ranking_validation() {
        assert!(Ranking::new(vec![0, 1, 1]).is_err());
        assert!(Ranking::new(vec![0, 3, 1]).is_err());
        let r = Ranking::new(vec![2, 0, 1]).unwrap();
        assert_eq!(r.rank(2), 1);
        assert_eq!(r.at_rank(3), 1);
    }

    #[test]
    fn profile_validation() {
        assert!(PartialProfile::new(vec![]).is_err());
        let mixed = vec![PartialOrder::empty(2), PartialOrder::empty(3)];
        assert!(matches!(
            PartialProfile::new(mixed),
            Err(OrderError::MixedCandidateCount)
        ));
    }
}
