//! Polynomial-time possible-winner checks for plurality and veto via
//! bipartite maximum flow.
//!
//! Under plurality only first places matter: fix the best case for the
//! distinguished candidate `c` (every vote that can rank `c` first does),
//! then ask whether the remaining votes can spread their first places so
//! that nobody passes `c`. That is a two-layer flow problem: votes on one
//! side, candidates on the other, candidate capacities bounding the allowed
//! first-place counts. Veto mirrors the construction over last places.

use crate::orders::{Candidate, PartialOrder, PartialProfile};
use crate::rules::WinnerMode;

/// A directed flow network with integral capacities and a residual edge per
/// arc. Augmenting paths are found breadth-first (shortest first).
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    pub fn nodes(&self) -> usize {
        self.adj.len()
    }

    /// Adds `from → to` with the given capacity; returns the edge id, whose
    /// flow can be read back after [`FlowNetwork::max_flow`].
    pub fn add_edge(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.to.len();
        self.adj[from].push(id);
        self.to.push(to);
        self.cap.push(cap);
        self.adj[to].push(id + 1);
        self.to.push(from);
        self.cap.push(0);
        id
    }

    /// Flow currently shipped over edge `id` (meaningful after `max_flow`).
    pub fn flow(&self, id: usize) -> u64 {
        self.cap[id ^ 1]
    }

    /// Maximum `source → sink` flow. Integral by construction.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let mut total = 0;
        loop {
            // BFS for a shortest augmenting path in the residual graph.
            let mut via = vec![usize::MAX; self.nodes()];
            let mut queue = std::collections::VecDeque::from([source]);
            via[source] = usize::MAX - 1;
            while let Some(x) = queue.pop_front() {
                if x == sink {
                    break;
                }
                for &e in &self.adj[x] {
                    let y = self.to[e];
                    if self.cap[e] > 0 && via[y] == usize::MAX {
                        via[y] = e;
                        queue.push_back(y);
                    }
                }
            }
            if via[sink] == usize::MAX {
                return total;
            }
            let mut bottleneck = u64::MAX;
            let mut x = sink;
            while x != source {
                let e = via[x];
                bottleneck = bottleneck.min(self.cap[e]);
                x = self.to[e ^ 1];
            }
            let mut x = sink;
            while x != source {
                let e = via[x];
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                x = self.to[e ^ 1];
            }
            total += bottleneck;
        }
    }
}

/// Candidates a vote can place first: its maximal elements.
pub fn first_place_options(p: &PartialOrder) -> Vec<Candidate> {
    (0..p.m()).filter(|&c| p.up_size(c) == 1).collect()
}

/// Candidates a vote can place last: its minimal elements.
pub fn last_place_options(p: &PartialOrder) -> Vec<Candidate> {
    (0..p.m()).filter(|&c| p.down_size(c) == 1).collect()
}

/// Whether `c` can win the plurality election in some completion.
pub fn pw_check_plurality(profile: &PartialProfile, c: Candidate, mode: WinnerMode) -> bool {
    let m = profile.m();
    let options: Vec<Vec<Candidate>> =
        profile.votes().iter().map(first_place_options).collect();
    let k = options.iter().filter(|o| o.contains(&c)).count() as u64;
    let opponent_cap = match mode {
        WinnerMode::CoWinner => k,
        WinnerMode::Unique if k == 0 => return false,
        WinnerMode::Unique => k - 1,
    };
    // Nodes: source, one per remaining vote, one per candidate, sink.
    let remaining: Vec<&Vec<Candidate>> =
        options.iter().filter(|o| !o.contains(&c)).collect();
    let (source, sink) = (0, 1 + remaining.len() + m);
    let mut net = FlowNetwork::new(sink + 1);
    for (v, opts) in remaining.iter().enumerate() {
        net.add_edge(source, 1 + v, 1);
        for &w in opts.iter() {
            net.add_edge(1 + v, 1 + remaining.len() + w, 1);
        }
    }
    for w in 0..m {
        if w != c {
            net.add_edge(1 + remaining.len() + w, sink, opponent_cap);
        }
    }
    net.max_flow(source, sink) == remaining.len() as u64
}

/// Whether `c` can win the veto election in some completion.
pub fn pw_check_veto(profile: &PartialProfile, c: Candidate, mode: WinnerMode) -> bool {
    let m = profile.m();
    let n = profile.n() as u64;
    let options: Vec<Vec<Candidate>> =
        profile.votes().iter().map(last_place_options).collect();
    // Votes whose only possible last place is c force a veto against c.
    let forced = options.iter().filter(|o| o.as_slice() == [c]).count() as u64;
    let lasts_needed = match mode {
        WinnerMode::CoWinner => forced,
        WinnerMode::Unique => forced + 1,
    };
    if lasts_needed == 0 {
        return true; // c scores n and nobody can exceed n
    }
    if lasts_needed > n - forced {
        return false; // not even one opponent can collect enough lasts
    }
    // Remaining votes may veto any of their minimal candidates except c.
    let remaining: Vec<Vec<Candidate>> = options
        .into_iter()
        .filter(|o| o.as_slice() != [c])
        .map(|o| o.into_iter().filter(|&w| w != c).collect())
        .collect();
    let (source, sink) = (0, 1 + remaining.len() + m);
    let mut net = FlowNetwork::new(sink + 1);
    for (v, opts) in remaining.iter().enumerate() {
        net.add_edge(source, 1 + v, 1);
        for &w in opts.iter() {
            net.add_edge(1 + v, 1 + remaining.len() + w, 1);
        }
    }
    for w in 0..m {
        if w != c {
            net.add_edge(1 + remaining.len() + w, sink, lasts_needed);
        }
    }
    net.max_flow(source, sink) == (m as u64 - 1) * lasts_needed
}

/// Plurality possible winners, with the cheap count-based admissions and
/// rejections applied before any flow runs.
pub fn pw_set_plurality(profile: &PartialProfile, mode: WinnerMode) -> Vec<Candidate> {
    let m = profile.m();
    let n = profile.n();
    let mut counts = vec![0usize; m];
    for v in profile.votes() {
        for c in first_place_options(v) {
            counts[c] += 1;
        }
    }
    (0..m)
        .filter(|&c| {
            // Over half the votes can rank c first: c reaches counts[c]
            // while everyone else stays below it. Under 1/m of the votes:
            // someone always reaches n/m first places, out of c's reach.
            if 2 * counts[c] > n {
                true
            } else if (counts[c] * m) < n {
                false
            } else {
                pw_check_plurality(profile, c, mode)
            }
        })
        .collect()
}

/// Veto possible winners.
pub fn pw_set_veto(profile: &PartialProfile, mode: WinnerMode) -> Vec<Candidate> {
    (0..profile.m())
        .filter(|&c| pw_check_veto(profile, c, mode))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::rules::ScoringRule;
    use crate::testutil::{random_dag_pairs, TestRng};

    fn po(m: usize, pairs: &[(usize, usize)]) -> PartialOrder {
        PartialOrder::from_pairs(m, pairs.iter().copied()).unwrap()
    }

    /// Independent max-flow reference: depth-first augmenting paths on an
    /// adjacency-matrix residual graph.
    fn dfs_max_flow(nodes: usize, edges: &[(usize, usize, u64)], s: usize, t: usize) -> u64 {
        let mut cap = vec![vec![0u64; nodes]; nodes];
        for &(a, b, c) in edges {
            cap[a][b] += c;
        }
        fn augment(
            cap: &mut Vec<Vec<u64>>,
            x: usize,
            t: usize,
            limit: u64,
            seen: &mut Vec<bool>,
        ) -> u64 {
            if x == t {
                return limit;
            }
            seen[x] = true;
            for y in 0..cap.len() {
                if !seen[y] && cap[x][y] > 0 {
                    let pushed = augment(cap, y, t, limit.min(cap[x][y]), seen);
                    if pushed > 0 {
                        cap[x][y] -= pushed;
                        cap[y][x] += pushed;
                        return pushed;
                    }
                }
            }
            0
        }
        let mut total = 0;
        loop {
            let mut seen = vec![false; nodes];
            let pushed = augment(&mut cap, s, t, u64::MAX, &mut seen);
            if pushed == 0 {
                return total;
            }
            total += pushed;
        }
    }

    #[test]
    fn max_flow_basics() {
        // Disconnected.
        let mut net = FlowNetwork::new(4);
        net.add_edge(0, 1, 5);
        net.add_edge(2, 3, 5);
        assert_eq!(net.max_flow(0, 3), 0);
        // Complete bipartite, unit capacities, 2 x 3 sides.
        let mut net = FlowNetwork::new(7);
        for a in 1..=2 {
            net.add_edge(0, a, 1);
            for b in 3..=5 {
                net.add_edge(a, b, 1);
            }
        }
        for b in 3..=5 {
            net.add_edge(b, 6, 1);
        }
        assert_eq!(net.max_flow(0, 6), 2);
    }

    #[test]
    fn max_flow_matches_dfs_reference() {
        let mut rng = TestRng::new(31);
        for _ in 0..300 {
            let nodes = 2 + rng.below(7);
            let mut edges = Vec::new();
            for _ in 0..rng.below(3 * nodes) {
                let a = rng.below(nodes);
                let b = rng.below(nodes);
                if a != b {
                    edges.push((a, b, 1 + rng.below(4) as u64));
                }
            }
            let mut net = FlowNetwork::new(nodes);
            let ids: Vec<_> = edges.iter().map(|&(a, b, c)| net.add_edge(a, b, c)).collect();
            let got = net.max_flow(0, nodes - 1);
            assert_eq!(got, dfs_max_flow(nodes, &edges, 0, nodes - 1));
            // Integrality / conservation: flows within capacity, per-edge.
            for (&(.., c), &id) in edges.iter().zip(&ids) {
                assert!(net.flow(id) <= c);
            }
        }
    }

    #[test]
    fn place_options() {
        let empty = po(3, &[]);
        assert_eq!(first_place_options(&empty), vec![0, 1, 2]);
        assert_eq!(last_place_options(&empty), vec![0, 1, 2]);
        let chain = po(3, &[(1, 0), (0, 2)]);
        assert_eq!(first_place_options(&chain), vec![1]);
        assert_eq!(last_place_options(&chain), vec![2]);
    }

    #[test]
    fn first_place_options_match_completion_ranks() {
        let mut rng = TestRng::new(13);
        for _ in 0..50 {
            let m = 6;
            let p = PartialOrder::from_pairs(m, random_dag_pairs(&mut rng, m)).unwrap();
            let mut reachable = vec![false; m];
            for t in p.completions(8).unwrap() {
                reachable[t.at_rank(1)] = true;
            }
            let want: Vec<_> = (0..m).filter(|&c| reachable[c]).collect();
            assert_eq!(first_place_options(&p), want);
        }
    }

    #[test]
    fn empty_profile_everyone_possible() {
        let profile = PartialProfile::new(vec![po(3, &[]); 4]).unwrap();
        for mode in [WinnerMode::CoWinner, WinnerMode::Unique] {
            assert_eq!(pw_set_plurality(&profile, mode), vec![0, 1, 2]);
            assert_eq!(pw_set_veto(&profile, mode), vec![0, 1, 2]);
        }
    }

    #[test]
    fn flow_matches_oracle_on_random_instances() {
        let mut rng = TestRng::new(19);
        for _ in 0..300 {
            let m = 2 + rng.below(4);
            let n = 1 + rng.below(4);
            let votes: Vec<_> = (0..n)
                .map(|_| PartialOrder::from_pairs(m, random_dag_pairs(&mut rng, m)).unwrap())
                .collect();
            let profile = PartialProfile::new(votes).unwrap();
            for mode in [WinnerMode::CoWinner, WinnerMode::Unique] {
                let plu = oracle::winner_sets(&ScoringRule::Plurality, &profile, mode);
                assert_eq!(pw_set_plurality(&profile, mode), plu.possible, "{profile:?}");
                let veto = oracle::winner_sets(&ScoringRule::Veto, &profile, mode);
                assert_eq!(pw_set_veto(&profile, mode), veto.possible, "{profile:?}");
            }
        }
    }

    #[test]
    fn pruning_thresholds_are_sound() {
        let mut rng = TestRng::new(29);
        for _ in 0..200 {
            let m = 2 + rng.below(4);
            let n = 1 + rng.below(4);
            let votes: Vec<_> = (0..n)
                .map(|_| PartialOrder::from_pairs(m, random_dag_pairs(&mut rng, m)).unwrap())
                .collect();
            let profile = PartialProfile::new(votes).unwrap();
            let mut counts = vec![0usize; m];
            for v in profile.votes() {
                for c in first_place_options(v) {
                    counts[c] += 1;
                }
            }
            let pw = oracle::winner_sets(&ScoringRule::Plurality, &profile, WinnerMode::CoWinner)
                .possible;
            for c in 0..m {
                if 2 * counts[c] > n {
                    assert!(pw.contains(&c), "admitted loser {c} in {profile:?}");
                }
                if counts[c] * m < n {
                    assert!(!pw.contains(&c), "rejected winner {c} in {profile:?}");
                }
            }
        }
    }
}
