//! Compute possible winners — candidates that win in at least one
//! completion — with the three-phase pipeline, and inspect where each
//! candidate was decided.

use prefwin::pipeline::{pw_set, Method, PwOptions};
use prefwin::posetgen::gen_rsm_mix_profile;
use prefwin::{ScoringRule, WinnerMode};

fn main() {
    let profile = gen_rsm_mix_profile(8, 20, 7);
    let options = PwOptions {
        method: Method::ThreePhase,
        mode: WinnerMode::CoWinner,
        timeout: None,
    };
    let outcome = pw_set(&profile, &ScoringRule::Borda, &options).unwrap();

    println!("possible winners under Borda: {:?}", outcome.winners);
    let r = &outcome.report;
    println!(
        "decided by score bounds: {} confirmed, {} pruned",
        r.confirmed_phase1.len(),
        r.pruned_phase1.len()
    );
    println!("decided by constructed completions: {}", r.confirmed_phase2.len());
    println!(
        "needed an exact 0-1 program: {} ({} solver calls)",
        r.undecided_into_phase3.len(),
        r.ilp_invocations
    );
}
