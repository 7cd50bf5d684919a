//! Winner determination for elections with incomplete preferences.
//!
//! Voters submit strict partial orders over candidates rather than full
//! rankings. Under a positional scoring rule this crate answers two
//! questions per candidate:
//!
//! - **Necessary winner**: does the candidate win in *every* completion of
//!   the profile into full rankings? ([`nw::nw_set`])
//! - **Possible winner**: does the candidate win in *at least one*
//!   completion? ([`pipeline::pw_set`])
//!
//! Necessary winners are decided in polynomial time by a per-pair
//! adversarial placement argument. Possible winners are NP-hard in general;
//! the solver runs a three-phase pipeline (cheap score bounds, greedy
//! completion construction, exact integer-program search) and falls back to
//! maximum-flow specializations for plurality and veto. A brute-force
//! completion-enumeration oracle ([`oracle`]) backs everything for small
//! instances.
//!
//! The crate also ships generative models for synthetic profiles — repeated
//! insertion (RIM), Mallows, and a repeated selection model (RSM) producing
//! genuine partial orders — plus ingestion from ratings and pairwise
//! comparison data, and a benchmark harness. See the `examples/` directory
//! for a runnable tour of each capability.

pub mod bench;
pub mod flow;
pub mod formats;
pub mod ilp;
pub mod nw;
pub mod oracle;
pub mod orders;
pub mod pipeline;
pub mod posetgen;
pub mod rules;

pub use orders::{Candidate, PartialOrder, PartialProfile, Ranking, StructureClass, TotalProfile};
pub use rules::{ScoringRule, WinnerMode};

#[cfg(test)]
pub(crate) mod testutil {
    use crate::orders::Candidate;

    /// Tiny deterministic generator for unit tests (splitmix64), independent
    /// of the crate's public sampling paths.
    pub struct TestRng(u64);

    impl TestRng {
        pub fn new(seed: u64) -> Self {
            TestRng(seed.wrapping_add(0x9e3779b97f4a7c15))
        }

        pub fn next_u64(&mut self) -> u64 {
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        }

        pub fn below(&mut self, n: usize) -> usize {
            (self.next_u64() % n as u64) as usize
        }

        pub fn chance(&mut self, num: u64, den: u64) -> bool {
            self.next_u64() % den < num
        }
    }

    /// Random DAG edge list over `m` nodes: pick a hidden permutation and keep
    /// each forward pair with probability ~1/3.
    pub fn random_dag_pairs(rng: &mut TestRng, m: usize) -> Vec<(Candidate, Candidate)> {
        let mut perm: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            perm.swap(i, rng.below(i + 1));
        }
        let mut pairs = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                if rng.chance(1, 3) {
                    pairs.push((perm[i], perm[j]));
                }
            }
        }
        pairs
    }
}
