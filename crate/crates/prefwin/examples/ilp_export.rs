//! Build the 0-1 program asking "can candidate 0 win?", solve it with the
//! built-in branch-and-bound solver, and write it in LP format for use with
//! an external solver.

use prefwin::ilp::{extract_completion, parse_lp, pw_model, SolveOutcome};
use prefwin::{PartialOrder, PartialProfile, ScoringRule, WinnerMode};

fn main() {
    let votes = vec![
        PartialOrder::from_pairs(4, [(1, 0), (2, 3)]).unwrap(),
        PartialOrder::from_pairs(4, [(3, 0)]).unwrap(),
    ];
    let profile = PartialProfile::new(votes).unwrap();

    let model = pw_model(&profile, &ScoringRule::Borda, 0, WinnerMode::CoWinner);
    match model.solve(None) {
        SolveOutcome::Feasible(assignment) => {
            let completion = extract_completion(&assignment, profile.m(), profile.votes().len());
            println!("candidate 0 can win; witness completion:");
            for (v, ranking) in completion.votes().iter().enumerate() {
                println!("  voter {v}: {:?}", ranking.order());
            }
        }
        SolveOutcome::Infeasible => println!("candidate 0 can never win"),
        SolveOutcome::Timeout => unreachable!("no deadline was set"),
    }

    // The LP text round-trips through the parser unchanged.
    let text = model.export_lp();
    let reparsed = parse_lp(&text).unwrap();
    assert_eq!(reparsed.export_lp(), text);
    println!("\nLP export ({} lines) round-trips bit-identically", text.lines().count());
}
