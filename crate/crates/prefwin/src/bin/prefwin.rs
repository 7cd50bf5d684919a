//! Command-line front end: generate synthetic profiles, compute necessary
//! and possible winners, export ILP models, ingest real-world tables, and
//! run benchmark grids.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 a possible-winner
//! run hit its timeout and left candidates undecided.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use prefwin::bench::{run_grid, write_csv, BenchGrid, BenchMethod, DatasetType};
use prefwin::formats::{
    ingest_pairwise, ingest_ratings, parse_profile, write_profile, ProfileDocument,
};
use prefwin::ilp::pw_model;
use prefwin::nw::{nw_set, nw_set_baseline};
use prefwin::oracle::{oracle_cost, winner_sets};
use prefwin::pipeline::{pw_set, Method, PwOptions, PwOutcome};
use prefwin::posetgen::{
    gen_partial_chains_profile, gen_partitioned_profile, gen_rsm_mix_profile, mallows_pi_rim,
    rim_sample,
};
use prefwin::{Candidate, PartialOrder, PartialProfile, Ranking, ScoringRule, WinnerMode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "prefwin", version, about = "Election winners under partial preferences")]
struct Cli {
    /// Seed for all randomized generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Wall-clock budget in seconds for exact solving.
    #[arg(long, global = true)]
    timeout: Option<f64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic profile.
    Generate {
        /// chains | partitioned | rsm-mix | mallows
        #[arg(long = "type")]
        dataset: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Mallows dispersion (only for --type mallows).
        #[arg(long, default_value_t = 0.5)]
        phi: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Necessary winners of a profile.
    Nw {
        #[command(flatten)]
        election: ElectionArgs,
        /// Use the reference implementation instead of the optimized one.
        #[arg(long)]
        baseline: bool,
    },
    /// Possible winners of a profile.
    Pw {
        #[command(flatten)]
        election: ElectionArgs,
        /// auto | flow | threephase | ilp
        #[arg(long, default_value = "auto")]
        method: Method,
        /// Write a per-candidate decision report as CSV.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Brute-force both winner sets by enumerating completions (small
    /// profiles only).
    Oracle {
        #[command(flatten)]
        election: ElectionArgs,
    },
    /// Write the possible-winner 0-1 program for one candidate in LP format.
    ExportIlp {
        #[command(flatten)]
        election: ElectionArgs,
        #[arg(long)]
        candidate: Candidate,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a profile from a `user,item,rating` CSV.
    IngestRatings {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a profile from a `user,a,b,preferred,confidence` CSV.
    IngestPairs {
        #[arg(long)]
        input: PathBuf,
        /// Keep rows with confidence at or above this value.
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-vote densities of a profile, as CSV.
    Density {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Run a benchmark grid and emit one CSV row per instance.
    Bench {
        /// Comma-separated dataset types.
        #[arg(long, value_delimiter = ',', default_value = "rsm-mix")]
        datasets: Vec<DatasetType>,
        /// Comma-separated rules.
        #[arg(long, value_delimiter = ',', default_value = "borda")]
        rules: Vec<ScoringRule>,
        /// Comma-separated MxN sizes, e.g. 100x10,100x100.
        #[arg(long, value_delimiter = ',', default_value = "10x100")]
        sizes: Vec<String>,
        /// Comma-separated methods: nw, nw-baseline, pw-auto, pw-flow,
        /// pw-threephase, pw-ilp.
        #[arg(long, value_delimiter = ',', default_value = "nw")]
        methods: Vec<BenchMethod>,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ElectionArgs {
    #[arg(long)]
    profile: PathBuf,
    #[arg(long)]
    rule: ScoringRule,
    /// Require a strictly higher score than everyone else.
    #[arg(long)]
    unique: bool,
}

impl ElectionArgs {
    fn mode(&self) -> WinnerMode {
        if self.unique {
            WinnerMode::Unique
        } else {
            WinnerMode::CoWinner
        }
    }

    fn load(&self) -> Result<ProfileDocument, Error> {
        load_profile(&self.profile)
    }
}

type Error = Box<dyn std::error::Error>;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Some(threads) = cli.threads {
        // Ignore the error if a pool already exists (it cannot, in main).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}

fn load_profile(path: &PathBuf) -> Result<ProfileDocument, Error> {
    let text = fs::read_to_string(path)?;
    Ok(parse_profile(&text)?)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn label(doc: &ProfileDocument, c: Candidate) -> String {
    match &doc.names {
        Some(names) => names[c].clone(),
        None => c.to_string(),
    }
}

fn labels(doc: &ProfileDocument, cs: &[Candidate]) -> String {
    cs.iter().map(|&c| label(doc, c)).collect::<Vec<_>>().join(" ")
}

fn gen_mallows_profile(m: usize, n: usize, phi: f64, seed: u64) -> PartialProfile {
    let mut crng = ChaCha8Rng::seed_from_u64(seed);
    crng.set_stream(0);
    let mut reference: Vec<Candidate> = (0..m).collect();
    for i in (1..m).rev() {
        reference.swap(i, crng.gen_range(0..=i));
    }
    let sigma = Ranking::new(reference).expect("permutation");
    let pi = mallows_pi_rim(m, phi);
    let votes = (0..n)
        .map(|v| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(v as u64 + 1);
            let ranking = rim_sample(&sigma, &pi, &mut rng);
            PartialOrder::from_ranking(&ranking)
        })
        .collect();
    PartialProfile::new(votes).expect("n >= 1")
}

fn run(cli: Cli) -> Result<i32, Error> {
    let timeout = cli.timeout.map(Duration::from_secs_f64);
    match cli.command {
        Command::Generate { dataset, m, n, phi, out } => {
            if m < 2 || n < 1 {
                return Err("generation needs at least 2 candidates and 1 voter".into());
            }
            let profile = match dataset.as_str() {
                "chains" | "partial-chains" => gen_partial_chains_profile(m, n, cli.seed),
                "partitioned" => gen_partitioned_profile(m, n, cli.seed),
                "rsm-mix" => gen_rsm_mix_profile(m, n, cli.seed),
                "mallows" => {
                    if !(phi > 0.0 && phi <= 1.0) {
                        return Err(format!("dispersion must be in (0, 1], got {phi}").into());
                    }
                    gen_mallows_profile(m, n, phi, cli.seed)
                }
                other => {
                    return Err(format!(
                        "unknown type `{other}` (chains, partitioned, rsm-mix, mallows)"
                    )
                    .into())
                }
            };
            let doc = ProfileDocument { profile, names: None };
            emit(&out, &write_profile(&doc))?;
            Ok(0)
        }
        Command::Nw { election, baseline } => {
            let doc = election.load()?;
            election.rule.check_arity(doc.profile.m())?;
            let winners = if baseline {
                nw_set_baseline(&doc.profile, &election.rule, election.mode())
            } else {
                nw_set(&doc.profile, &election.rule, election.mode())
            };
            println!("necessary winners: {}", labels(&doc, &winners));
            Ok(0)
        }
        Command::Pw { election, method, report } => {
            let doc = election.load()?;
            election.rule.check_arity(doc.profile.m())?;
            let options = PwOptions { method, mode: election.mode(), timeout };
            let outcome = pw_set(&doc.profile, &election.rule, &options)?;
            println!("possible winners: {}", labels(&doc, &outcome.winners));
            if !outcome.unknown.is_empty() {
                println!("unknown: {}", labels(&doc, &outcome.unknown));
            }
            if let Some(path) = report {
                fs::write(&path, report_csv(&doc, &outcome))?;
            }
            Ok(if outcome.unknown.is_empty() { 0 } else { 3 })
        }
        Command::Oracle { election } => {
            let doc = election.load()?;
            election.rule.check_arity(doc.profile.m())?;
            let cost = oracle_cost(&election.rule, &doc.profile);
            if cost > 20_000_000 {
                return Err(format!(
                    "profile too large for brute force ({cost} completion score patterns)"
                )
                .into());
            }
            let result = winner_sets(&election.rule, &doc.profile, election.mode());
            println!("necessary winners: {}", labels(&doc, &result.necessary));
            println!("possible winners: {}", labels(&doc, &result.possible));
            Ok(0)
        }
        Command::ExportIlp { election, candidate, out } => {
            let doc = election.load()?;
            election.rule.check_arity(doc.profile.m())?;
            if candidate >= doc.profile.m() {
                return Err(format!(
                    "candidate {candidate} out of range (m = {})",
                    doc.profile.m()
                )
                .into());
            }
            let model = pw_model(&doc.profile, &election.rule, candidate, election.mode());
            fs::write(&out, model.export_lp())?;
            Ok(0)
        }
        Command::IngestRatings { input, out } => {
            let file = fs::File::open(&input)?;
            let got = ingest_ratings(file)?;
            let doc = ProfileDocument { profile: got.profile, names: Some(got.items) };
            emit(&out, &write_profile(&doc))?;
            Ok(0)
        }
        Command::IngestPairs { input, threshold, out } => {
            let file = fs::File::open(&input)?;
            let got = ingest_pairwise(file, threshold)?;
            if !got.dropped_users.is_empty() {
                eprintln!(
                    "dropped {} cyclic user(s): {}",
                    got.dropped_users.len(),
                    got.dropped_users.join(", ")
                );
            }
            let doc = ProfileDocument { profile: got.profile, names: Some(got.items) };
            emit(&out, &write_profile(&doc))?;
            Ok(0)
        }
        Command::Density { profile } => {
            let doc = load_profile(&profile)?;
            let mut out = String::from("voter,density\n");
            for (v, vote) in doc.profile.votes().iter().enumerate() {
                out.push_str(&format!("{v},{}\n", vote.density()));
            }
            out.push_str(&format!("overall,{}\n", doc.profile.density()));
            print!("{out}");
            Ok(0)
        }
        Command::Bench { datasets, rules, sizes, methods, seeds, out } => {
            let sizes = sizes
                .iter()
                .map(|s| {
                    let (m, n) = s
                        .split_once('x')
                        .ok_or_else(|| format!("size `{s}` is not of the form MxN"))?;
                    Ok::<_, Error>((m.parse::<usize>()?, n.parse::<usize>()?))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let grid = BenchGrid { datasets, rules, sizes, methods, seeds, timeout };
            let rows = run_grid(&grid)?;
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            match out {
                Some(path) => fs::write(path, buf)?,
                None => std::io::stdout().write_all(&buf)?,
            }
            Ok(0)
        }
    }
}

/// Per-candidate rows: candidate, phase_decided, decision, time_ms. The
/// time column is the wall time of the phase that decided the candidate.
fn report_csv(doc: &ProfileDocument, outcome: &PwOutcome) -> String {
    let r = &outcome.report;
    let ms = |phase: usize| r.phase_times[phase].as_millis();
    let mut rows: Vec<(Candidate, String)> = Vec::new();
    for (set, phase, decision) in [
        (&r.confirmed_phase1, 1, "possible"),
        (&r.pruned_phase1, 1, "not-possible"),
        (&r.confirmed_phase2, 2, "possible"),
        (&r.confirmed_phase3, 3, "possible"),
        (&r.rejected_phase3, 3, "not-possible"),
    ] {
        for &c in set {
            rows.push((c, format!("{},{phase},{decision},{}", label(doc, c), ms(phase - 1))));
        }
    }
    for &c in &r.timeout_candidates {
        rows.push((c, format!("{},3,unknown,{}", label(doc, c), ms(2))));
    }
    rows.sort_by_key(|(c, _)| *c);
    let mut out = String::from("candidate,phase_decided,decision,time_ms\n");
    for (_, row) in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}
