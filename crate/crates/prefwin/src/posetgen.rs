//! Generative models for rankings and partial orders, exact probability
//! oracles at small scale, and the synthetic profile generators used by the
//! benchmark harness.
//!
//! Rankings come from the repeated insertion model (RIM), which includes the
//! Mallows distribution for a suitable insertion matrix. Partial orders come
//! from the repeated selection model (RSM): items are picked one by one
//! according to a selection matrix, and each picked item is related to each
//! still-unpicked item with a per-step probability, the result closed
//! transitively. With selection probabilities matching Mallows and all pair
//! probabilities 1, RSM reproduces Mallows exactly.
//!
//! All sampling is driven by a seeded ChaCha generator with one independent
//! stream per voter, so profiles are reproducible and voters could be drawn
//! in any order (or in parallel) without changing the output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::orders::{kendall_tau, Candidate, PartialOrder, PartialProfile, Ranking};

/// Lower-triangular row-stochastic insertion probabilities: `row(i)[j]` is
/// the probability of inserting the i-th reference item (0-based) at
/// position `j ≤ i` of the partial ranking built so far.
#[derive(Debug, Clone, PartialEq)]
pub struct InsertionMatrix {
    rows: Vec<Vec<f64>>,
}

impl InsertionMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Self {
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), i + 1, "row {i} must have {} entries", i + 1);
            assert!(row.iter().all(|&p| (0.0..=1.0).contains(&p)));
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "row {i} sums to {sum}");
        }
        InsertionMatrix { rows }
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// The matrix pinning every item to the end of the prefix, which makes
    /// RIM return the reference ranking itself.
    pub fn identity(m: usize) -> Self {
        let rows = (0..m)
            .map(|i| {
                let mut row = vec![0.0; i + 1];
                row[i] = 1.0;
                row
            })
            .collect();
        InsertionMatrix::new(rows)
    }
}

/// Row-stochastic selection probabilities: `row(i)[j]` is the probability of
/// picking the j-th remaining item at step `i` (0-based); row `i` has
/// `m − i` live entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionMatrix {
    m: usize,
    rows: Vec<Vec<f64>>,
}

impl SelectionMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Self {
        let m = rows.len();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), m - i, "row {i} must have {} entries", m - i);
            assert!(row.iter().all(|&p| (0.0..=1.0).contains(&p)));
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "row {i} sums to {sum}");
        }
        SelectionMatrix { m, rows }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// Uniform selection at every step.
    pub fn uniform(m: usize) -> Self {
        let rows = (0..m).map(|i| vec![1.0 / (m - i) as f64; m - i]).collect();
        SelectionMatrix::new(rows)
    }
}

/// Parameters of the repeated selection model.
#[derive(Debug, Clone, PartialEq)]
pub struct RsmParams {
    pub sigma: Ranking,
    pub pi: SelectionMatrix,
    /// `p[i]`: probability that step `i` (0-based, `m − 1` steps) emits each
    /// of its available preference pairs.
    pub p: Vec<f64>,
}

impl RsmParams {
    pub fn new(sigma: Ranking, pi: SelectionMatrix, p: Vec<f64>) -> Self {
        let m = sigma.m();
        assert_eq!(pi.m(), m);
        assert_eq!(p.len(), m.saturating_sub(1));
        assert!(p.iter().all(|&x| (0.0..=1.0).contains(&x)));
        RsmParams { sigma, pi, p }
    }
}

fn sample_index(rng: &mut impl Rng, probs: &[f64]) -> usize {
    let x: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if x < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// One ranking from the repeated insertion model: the reference items are
/// inserted in order, each at a random position of the prefix.
pub fn rim_sample(sigma: &Ranking, pi: &InsertionMatrix, rng: &mut impl Rng) -> Ranking {
    let m = sigma.m();
    assert_eq!(pi.m(), m);
    let mut prefix: Vec<Candidate> = Vec::with_capacity(m);
    for i in 0..m {
        let j = sample_index(rng, pi.row(i));
        prefix.insert(j, sigma.at_rank(i + 1));
    }
    Ranking::new(prefix).expect("permutation by construction")
}

/// Probability that RIM emits exactly `tau`: the product over insertion
/// steps of the (unique) position each item must take.
pub fn rim_ranking_prob(tau: &Ranking, sigma: &Ranking, pi: &InsertionMatrix) -> f64 {
    let m = sigma.m();
    let mut prob = 1.0;
    for i in 0..m {
        let item = sigma.at_rank(i + 1);
        // Position of `item` among the first i+1 reference items under tau.
        let j = (0..i)
            .filter(|&k| tau.prefers(sigma.at_rank(k + 1), item))
            .count();
        prob *= pi.row(i)[j];
    }
    prob
}

/// Insertion matrix making RIM coincide with the Mallows distribution:
/// `Π(i,j) ∝ φ^(i−j)` within each row.
pub fn mallows_pi_rim(m: usize, phi: f64) -> InsertionMatrix {
    assert!(phi > 0.0 && phi <= 1.0, "dispersion must lie in (0, 1]");
    let rows = (0..m)
        .map(|i| {
            // 1-based row i+1: weights φ^(i+1-j) for j = 1..=i+1.
            let weights: Vec<f64> = (0..=i).map(|j| phi.powi((i - j) as i32)).collect();
            let z: f64 = weights.iter().sum();
            weights.iter().map(|w| w / z).collect()
        })
        .collect();
    InsertionMatrix::new(rows)
}

/// Mallows probability of `tau` around `sigma`:
/// `φ^d(σ,τ) / Z` with `Z = 1 · (1+φ) · … · (1+φ+…+φ^(m−1))`.
pub fn mallows_prob(tau: &Ranking, sigma: &Ranking, phi: f64) -> f64 {
    assert!(phi > 0.0 && phi <= 1.0);
    let m = sigma.m();
    let mut z = 1.0;
    for i in 1..m {
        z *= (0..=i).map(|k| phi.powi(k as i32)).sum::<f64>();
    }
    phi.powi(kendall_tau(tau, sigma) as i32) / z
}

/// One partial order from the repeated selection model.
pub fn rsm_sample(params: &RsmParams, rng: &mut impl Rng) -> PartialOrder {
    let m = params.sigma.m();
    let mut remaining: Vec<Candidate> = params.sigma.order().to_vec();
    let mut pairs = Vec::new();
    for i in 0..m.saturating_sub(1) {
        let j = sample_index(rng, &params.pi.row(i)[..remaining.len()]);
        let c = remaining.remove(j);
        for &a in &remaining {
            if rng.gen::<f64>() < params.p[i] {
                pairs.push((c, a));
            }
        }
    }
    PartialOrder::from_pairs(m, pairs).expect("selection order is acyclic")
}

/// Selection matrix making RSM (with all pair probabilities 1) coincide with
/// Mallows: `Π(i,j) ∝ φ^(j−1)` over the remaining items.
pub fn rsm_pi_mallows(m: usize, phi: f64) -> SelectionMatrix {
    assert!(phi > 0.0 && phi <= 1.0);
    let rows = (0..m)
        .map(|i| {
            let live = m - i;
            let weights: Vec<f64> = (0..live).map(|j| phi.powi(j as i32)).collect();
            let z: f64 = weights.iter().sum();
            weights.iter().map(|w| w / z).collect()
        })
        .collect();
    SelectionMatrix::new(rows)
}

/// Probability that RSM with `p ≡ 1` emits the total order `tau`: there is a
/// single selection sequence producing it, namely picking in `tau` order.
pub fn rsm_ranking_prob(tau: &Ranking, params: &RsmParams) -> f64 {
    assert!(
        params.p.iter().all(|&x| x == 1.0),
        "ranking probabilities require every pair probability to be 1"
    );
    let m = params.sigma.m();
    let mut remaining: Vec<Candidate> = params.sigma.order().to_vec();
    let mut prob = 1.0;
    for i in 0..m.saturating_sub(1) {
        let c = tau.at_rank(i + 1);
        let j = remaining.iter().position(|&x| x == c).expect("present");
        prob *= params.pi.row(i)[j];
        remaining.remove(j);
    }
    prob
}

/// Exact RSM probability of the poset `Q` by exhausting every derivation:
/// selection order times per-pair emit/skip choices whose closure is `Q`.
/// Exponential; intended for `m ≤ 5`.
pub fn rsm_poset_prob_bruteforce(q: &PartialOrder, params: &RsmParams) -> f64 {
    let m = params.sigma.m();
    assert!(m <= 5, "derivation enumeration is exponential in m");
    let mut remaining: Vec<Candidate> = params.sigma.order().to_vec();
    let mut pairs: Vec<(Candidate, Candidate)> = Vec::new();
    let mut total = 0.0;
    recurse(q, params, &mut remaining, &mut pairs, 0, 1.0, &mut total);
    return total;

    fn recurse(
        q: &PartialOrder,
        params: &RsmParams,
        remaining: &mut Vec<Candidate>,
        pairs: &mut Vec<(Candidate, Candidate)>,
        step: usize,
        prob: f64,
        total: &mut f64,
    ) {
        let m = q.m();
        if remaining.len() <= 1 {
            let built = PartialOrder::from_pairs(m, pairs.iter().copied())
                .expect("derivations are acyclic");
            if built == *q {
                *total += prob;
            }
            return;
        }
        for j in 0..remaining.len() {
            let sel = params.pi.row(step)[j];
            if sel == 0.0 {
                continue;
            }
            let c = remaining.remove(j);
            // Enumerate emit/skip choices for the pairs (c, a).
            let rest = remaining.clone();
            let p = params.p[step];
            for mask in 0u32..(1 << rest.len()) {
                let mut branch = prob * sel;
                let before = pairs.len();
                for (k, &a) in rest.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        branch *= p;
                        pairs.push((c, a));
                    } else {
                        branch *= 1.0 - p;
                    }
                }
                if branch > 0.0 {
                    recurse(q, params, remaining, pairs, step + 1, branch, total);
                }
                pairs.truncate(before);
            }
            remaining.insert(j, c);
        }
    }
}

/// Gehrlein's first random-poset method: uniform selection and one constant
/// pair probability.
pub fn gehrlein_method1(m: usize, p_const: f64, rng: &mut impl Rng) -> PartialOrder {
    let params = RsmParams::new(
        Ranking::identity(m),
        SelectionMatrix::uniform(m),
        vec![p_const; m.saturating_sub(1)],
    );
    rsm_sample(&params, rng)
}

/// Mean negative log-likelihood of observations under a per-observation
/// probability function. Lower is a better fit.
pub fn nll<T>(observations: &[T], prob: impl Fn(&T) -> f64) -> f64 {
    let sum: f64 = observations.iter().map(|o| prob(o).ln()).sum();
    -sum / observations.len() as f64
}

/// Number of mixture components used by all three profile generators.
const COMPONENTS: usize = 3;

fn component_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    rng
}

fn voter_rng(seed: u64, voter: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(voter as u64 + 1);
    rng
}

fn random_ranking(m: usize, rng: &mut impl Rng) -> Ranking {
    let mut perm: Vec<Candidate> = (0..m).collect();
    for i in (1..m).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    Ranking::new(perm).expect("permutation")
}

/// Partial-chain profile: a three-component Mallows mixture (dispersion 0.5)
/// supplies full rankings; each vote then drops a uniform number of
/// candidates (0 to m−2), leaving a chain over the survivors. Voters are
/// assigned to components round-robin.
pub fn gen_partial_chains_profile(m: usize, n: usize, seed: u64) -> PartialProfile {
    assert!(m >= 2 && n >= 1);
    let mut crng = component_rng(seed);
    let sigmas: Vec<Ranking> = (0..COMPONENTS).map(|_| random_ranking(m, &mut crng)).collect();
    let pi = mallows_pi_rim(m, 0.5);
    let votes = (0..n)
        .map(|v| {
            let mut rng = voter_rng(seed, v);
            let ranking = rim_sample(&sigmas[v % COMPONENTS], &pi, &mut rng);
            let d = rng.gen_range(0..=m - 2);
            let mut kept: Vec<Candidate> = ranking.order().to_vec();
            for _ in 0..d {
                kept.remove(rng.gen_range(0..kept.len()));
            }
            let pairs = kept.windows(2).map(|w| (w[0], w[1]));
            PartialOrder::from_pairs(m, pairs).expect("chain is acyclic")
        })
        .collect();
    PartialProfile::new(votes).expect("n >= 1")
}

/// Partitioned profile with the cut positions used per vote (for tests and
/// diagnostics): blocks of each vote follow a Mallows ranking, ordered
/// between blocks and incomparable within.
pub fn gen_partitioned_profile_detailed(
    m: usize,
    n: usize,
    seed: u64,
) -> (PartialProfile, Vec<Vec<usize>>) {
    assert!(m >= 2 && n >= 1);
    let mut crng = component_rng(seed);
    let sigmas: Vec<Ranking> = (0..COMPONENTS).map(|_| random_ranking(m, &mut crng)).collect();
    let pi = mallows_pi_rim(m, 0.5);
    let mut all_cuts = Vec::with_capacity(n);
    let votes = (0..n)
        .map(|v| {
            let mut rng = voter_rng(seed, v);
            let ranking = rim_sample(&sigmas[v % COMPONENTS], &pi, &mut rng);
            let q = rng.gen_range(2..=m);
            // q − 1 distinct cut positions in {2, …, m}: a block starts at
            // each cut (1-based ranks).
            let mut positions: Vec<usize> = (2..=m).collect();
            for i in (1..positions.len()).rev() {
                positions.swap(i, rng.gen_range(0..=i));
            }
            let mut cuts: Vec<usize> = positions[..q - 1].to_vec();
            cuts.sort_unstable();
            let mut bounds = vec![1];
            bounds.extend(&cuts);
            bounds.push(m + 1);
            let mut pairs = Vec::new();
            for bi in 0..bounds.len() - 1 {
                for ri in bounds[bi]..bounds[bi + 1] {
                    for rj in bounds[bi + 1]..=m {
                        pairs.push((ranking.at_rank(ri), ranking.at_rank(rj)));
                    }
                }
            }
            all_cuts.push(cuts);
            PartialOrder::from_pairs(m, pairs).expect("blocks are acyclic")
        })
        .collect();
    (PartialProfile::new(votes).expect("n >= 1"), all_cuts)
}

/// Partitioned-preferences profile; see
/// [`gen_partitioned_profile_detailed`].
pub fn gen_partitioned_profile(m: usize, n: usize, seed: u64) -> PartialProfile {
    gen_partitioned_profile_detailed(m, n, seed).0
}

/// RSM mixture profile: three components with Mallows selection (dispersion
/// 0.5), random references, and per-step pair probabilities drawn uniformly
/// from [0, 1] per component.
pub fn gen_rsm_mix_profile(m: usize, n: usize, seed: u64) -> PartialProfile {
    assert!(m >= 2 && n >= 1);
    let mut crng = component_rng(seed);
    let pi = rsm_pi_mallows(m, 0.5);
    let components: Vec<RsmParams> = (0..COMPONENTS)
        .map(|_| {
            let sigma = random_ranking(m, &mut crng);
            let p = (0..m - 1).map(|_| crng.gen::<f64>()).collect();
            RsmParams::new(sigma, pi.clone(), p)
        })
        .collect();
    let votes = (0..n)
        .map(|v| {
            let mut rng = voter_rng(seed, v);
            rsm_sample(&components[v % COMPONENTS], &mut rng)
        })
        .collect();
    PartialProfile::new(votes).expect("n >= 1")
}
