//! Run a small benchmark grid and print the CSV it produces. Each row is
//! one seeded instance; rows keep grid order even though instances run on
//! the thread pool.

use prefwin::bench::{run_grid, write_csv, BenchGrid, BenchMethod, DatasetType};
use prefwin::pipeline::Method;
use prefwin::ScoringRule;

fn main() {
    let grid = BenchGrid {
        datasets: vec![DatasetType::Partitioned, DatasetType::RsmMix],
        rules: vec![ScoringRule::Plurality, ScoringRule::Veto],
        sizes: vec![(10, 50), (10, 200)],
        methods: vec![BenchMethod::Nw, BenchMethod::NwBaseline, BenchMethod::Pw(Method::Auto)],
        seeds: vec![0, 1],
        timeout: None,
    };
    let rows = run_grid(&grid).unwrap();
    let mut out = Vec::new();
    write_csv(&rows, &mut out).unwrap();
    print!("{}", String::from_utf8(out).unwrap());
}
