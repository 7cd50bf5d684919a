//! For plurality and veto, possible winners reduce to a maximum-flow
//! feasibility question, which is far cheaper than the general pipeline.
//! This example runs the flow route directly and cross-checks it against
//! the brute-force oracle on a small profile.

use prefwin::flow::{pw_set_plurality, pw_set_veto};
use prefwin::oracle::winner_sets;
use prefwin::posetgen::gen_partial_chains_profile;
use prefwin::{ScoringRule, WinnerMode};

fn main() {
    let profile = gen_partial_chains_profile(5, 4, 11);

    let plurality = pw_set_plurality(&profile, WinnerMode::CoWinner);
    let veto = pw_set_veto(&profile, WinnerMode::CoWinner);
    println!("possible winners, plurality: {plurality:?}");
    println!("possible winners, veto:      {veto:?}");

    // The profile is small enough to enumerate every completion.
    let oracle_p = winner_sets(&ScoringRule::Plurality, &profile, WinnerMode::CoWinner);
    let oracle_v = winner_sets(&ScoringRule::Veto, &profile, WinnerMode::CoWinner);
    assert_eq!(plurality, oracle_p.possible);
    assert_eq!(veto, oracle_v.possible);
    println!("both agree with completion enumeration");
}
