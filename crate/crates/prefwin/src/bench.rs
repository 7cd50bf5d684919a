//! Benchmark harness: runs a (dataset × rule × size × method × seed) grid
//! of seeded instances and reports one CSV row per instance.
//!
//! Rows are emitted in deterministic grid order no matter how the instances
//! are scheduled across worker threads, and every column except the timing
//! one is reproducible from the seed.

use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::nw::{nw_set, nw_set_baseline};
use crate::orders::PartialProfile;
use crate::pipeline::{pw_set, Method, PwError, PwOptions};
use crate::posetgen::{gen_partial_chains_profile, gen_partitioned_profile, gen_rsm_mix_profile};
use crate::rules::{ScoringRule, WinnerMode};

/// The synthetic profile families the generators produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetType {
    PartialChains,
    Partitioned,
    RsmMix,
}

impl DatasetType {
    pub const ALL: [DatasetType; 3] =
        [DatasetType::PartialChains, DatasetType::Partitioned, DatasetType::RsmMix];

    pub fn generate(self, m: usize, n: usize, seed: u64) -> PartialProfile {
        match self {
            DatasetType::PartialChains => gen_partial_chains_profile(m, n, seed),
            DatasetType::Partitioned => gen_partitioned_profile(m, n, seed),
            DatasetType::RsmMix => gen_rsm_mix_profile(m, n, seed),
        }
    }
}

impl std::fmt::Display for DatasetType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DatasetType::PartialChains => "partial-chains",
            DatasetType::Partitioned => "partitioned",
            DatasetType::RsmMix => "rsm-mix",
        })
    }
}

impl FromStr for DatasetType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "partial-chains" => Ok(DatasetType::PartialChains),
            "partitioned" => Ok(DatasetType::Partitioned),
            "rsm-mix" => Ok(DatasetType::RsmMix),
            other => Err(format!(
                "unknown dataset `{other}` (expected partial-chains, partitioned, or rsm-mix)"
            )),
        }
    }
}

/// What to run on each instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMethod {
    /// Optimized necessary-winner computation.
    Nw,
    /// Reference necessary-winner computation, for speed-up comparisons.
    NwBaseline,
    /// Possible-winner computation with the given strategy.
    Pw(Method),
}

impl std::fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BenchMethod::Nw => f.write_str("nw"),
            BenchMethod::NwBaseline => f.write_str("nw-baseline"),
            BenchMethod::Pw(m) => write!(f, "pw-{m}"),
        }
    }
}

impl FromStr for BenchMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nw" => Ok(BenchMethod::Nw),
            "nw-baseline" => Ok(BenchMethod::NwBaseline),
            _ => match s.strip_prefix("pw-") {
                Some(rest) => rest.parse().map(BenchMethod::Pw),
                None => Err(format!("unknown bench method `{s}`")),
            },
        }
    }
}

/// One benchmark result row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub dataset_type: String,
    pub rule: String,
    pub m: usize,
    pub n: usize,
    pub method: String,
    pub seed: u64,
    pub winners_count: usize,
    pub confirmed_phase1: usize,
    pub pruned_phase1: usize,
    pub confirmed_phase2: usize,
    pub confirmed_phase3: usize,
    pub ilp_calls: usize,
    pub time_ms: u128,
    pub timed_out: bool,
}

pub const BENCH_HEADER: [&str; 14] = [
    "dataset_type",
    "rule",
    "m",
    "n",
    "method",
    "seed",
    "winners_count",
    "confirmed_phase1",
    "pruned_phase1",
    "confirmed_phase2",
    "confirmed_phase3",
    "ilp_calls",
    "time_ms",
    "timed_out",
];

/// The full grid to run; rows come out in `datasets × rules × sizes ×
/// methods × seeds` order.
#[derive(Debug, Clone)]
pub struct BenchGrid {
    pub datasets: Vec<DatasetType>,
    pub rules: Vec<ScoringRule>,
    /// `(m, n)` pairs.
    pub sizes: Vec<(usize, usize)>,
    pub methods: Vec<BenchMethod>,
    pub seeds: Vec<u64>,
    pub timeout: Option<Duration>,
}

/// Run one instance and time it.
pub fn run_instance(
    dataset: DatasetType,
    rule: &ScoringRule,
    m: usize,
    n: usize,
    method: BenchMethod,
    seed: u64,
    timeout: Option<Duration>,
) -> Result<BenchRow, PwError> {
    let profile = dataset.generate(m, n, seed);
    let mut row = BenchRow {
        dataset_type: dataset.to_string(),
        rule: rule.to_string(),
        m,
        n,
        method: method.to_string(),
        seed,
        winners_count: 0,
        confirmed_phase1: 0,
        pruned_phase1: 0,
        confirmed_phase2: 0,
        confirmed_phase3: 0,
        ilp_calls: 0,
        time_ms: 0,
        timed_out: false,
    };
    let start = Instant::now();
    match method {
        BenchMethod::Nw => row.winners_count = nw_set(&profile, rule, WinnerMode::CoWinner).len(),
        BenchMethod::NwBaseline => {
            row.winners_count = nw_set_baseline(&profile, rule, WinnerMode::CoWinner).len();
        }
        BenchMethod::Pw(strategy) => {
            let options = PwOptions { method: strategy, mode: WinnerMode::CoWinner, timeout };
            let outcome = pw_set(&profile, rule, &options)?;
            row.winners_count = outcome.winners.len();
            row.confirmed_phase1 = outcome.report.confirmed_phase1.len();
            row.pruned_phase1 = outcome.report.pruned_phase1.len();
            row.confirmed_phase2 = outcome.report.confirmed_phase2.len();
            row.confirmed_phase3 = outcome.report.confirmed_phase3.len();
            row.ilp_calls = outcome.report.ilp_invocations;
            row.timed_out = !outcome.unknown.is_empty();
        }
    }
    row.time_ms = start.elapsed().as_millis();
    Ok(row)
}

/// Run the whole grid. Instances execute on the rayon pool, but the rows
/// keep grid order.
pub fn run_grid(grid: &BenchGrid) -> Result<Vec<BenchRow>, PwError> {
    let mut cells = Vec::new();
    for &dataset in &grid.datasets {
        for rule in &grid.rules {
            for &(m, n) in &grid.sizes {
                for &method in &grid.methods {
                    for &seed in &grid.seeds {
                        cells.push((dataset, rule.clone(), m, n, method, seed));
                    }
                }
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(dataset, rule, m, n, method, seed)| {
            run_instance(dataset, &rule, m, n, method, seed, grid.timeout)
        })
        .collect()
}

/// Write rows as CSV with the stable [`BENCH_HEADER`] schema.
pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(BENCH_HEADER)?;
    for r in rows {
        writer.write_record([
            r.dataset_type.clone(),
            r.rule.clone(),
            r.m.to_string(),
            r.n.to_string(),
            r.method.clone(),
            r.seed.to_string(),
            r.winners_count.to_string(),
            r.confirmed_phase1.to_string(),
            r.pruned_phase1.to_string(),
            r.confirmed_phase2.to_string(),
            r.confirmed_phase3.to_string(),
            r.ilp_calls.to_string(),
            r.time_ms.to_string(),
            r.timed_out.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scrub_time(mut rows: Vec<BenchRow>) -> Vec<BenchRow> {
        for r in &mut rows {
            r.time_ms = 0;
        }
        rows
    }

    #[test]
    fn single_cell_smoke() {
        let grid = BenchGrid {
            datasets: vec![DatasetType::RsmMix],
            rules: vec![ScoringRule::Borda],
            sizes: vec![(5, 8)],
            methods: vec![BenchMethod::Pw(Method::ThreePhase)],
            seeds: vec![7],
            timeout: None,
        };
        let rows = run_grid(&grid).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!((r.m, r.n), (5, 8));
        assert_eq!(r.method, "pw-threephase");
        assert!(r.winners_count >= 1);
        assert!(!r.timed_out);
        // Phase counts partition the candidates.
        assert_eq!(
            r.confirmed_phase1 + r.pruned_phase1 + r.confirmed_phase2 + r.ilp_calls,
            r.m
        );
    }

    #[test]
    fn grid_order_and_determinism() {
        let grid = BenchGrid {
            datasets: vec![DatasetType::Partitioned, DatasetType::PartialChains],
            rules: vec![ScoringRule::Plurality, ScoringRule::Borda],
            sizes: vec![(4, 3), (5, 2)],
            methods: vec![BenchMethod::Nw, BenchMethod::NwBaseline],
            seeds: vec![1, 2],
            timeout: None,
        };
        let a = run_grid(&grid).unwrap();
        assert_eq!(a.len(), 2 * 2 * 2 * 2 * 2);
        // Outermost loop is datasets, innermost is seeds.
        assert_eq!(a[0].dataset_type, "partitioned");
        assert_eq!(a[0].seed, 1);
        assert_eq!(a[1].seed, 2);
        assert_eq!(a[a.len() - 1].dataset_type, "partial-chains");
        let b = run_grid(&grid).unwrap();
        assert_eq!(scrub_time(a), scrub_time(b));
    }

    #[test]
    fn baseline_and_optimized_agree_on_counts() {
        let grid = BenchGrid {
            datasets: vec![DatasetType::RsmMix],
            rules: vec![ScoringRule::Veto],
            sizes: vec![(6, 10)],
            methods: vec![BenchMethod::Nw, BenchMethod::NwBaseline],
            seeds: vec![3, 4, 5],
            timeout: None,
        };
        let rows = run_grid(&grid).unwrap();
        // Seeds are the innermost loop, so the two methods' blocks line up.
        let (nw, base) = rows.split_at(3);
        for (a, b) in nw.iter().zip(base) {
            assert_eq!(a.seed, b.seed);
            assert_eq!(a.winners_count, b.winners_count);
        }
    }

    #[test]
    fn csv_schema() {
        let grid = BenchGrid {
            datasets: vec![DatasetType::RsmMix],
            rules: vec![ScoringRule::Plurality],
            sizes: vec![(4, 4)],
            methods: vec![BenchMethod::Pw(Method::Flow)],
            seeds: vec![0],
            timeout: None,
        };
        let rows = run_grid(&grid).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), BENCH_HEADER.join(","));
        assert_eq!(lines.clone().count(), rows.len());
        for line in lines {
            assert_eq!(line.split(',').count(), BENCH_HEADER.len());
        }
    }

    #[test]
    fn method_names_round_trip() {
        for method in [
            BenchMethod::Nw,
            BenchMethod::NwBaseline,
            BenchMethod::Pw(Method::Auto),
            BenchMethod::Pw(Method::Flow),
            BenchMethod::Pw(Method::ThreePhase),
            BenchMethod::Pw(Method::Ilp),
        ] {
            assert_eq!(method.to_string().parse::<BenchMethod>().unwrap(), method);
        }
    }
}
