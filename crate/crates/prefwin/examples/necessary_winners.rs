//! Compute necessary winners — candidates that win no matter how every
//! voter's partial preferences are completed — and compare the optimized
//! algorithm with the straightforward reference implementation.

use prefwin::nw::{nw_set, nw_set_baseline};
use prefwin::{PartialOrder, PartialProfile, ScoringRule, WinnerMode};

fn main() {
    // Three voters over candidates {0, 1, 2, 3}, each with partial views.
    let votes = vec![
        PartialOrder::from_pairs(4, [(0, 1), (1, 2)]).unwrap(),
        PartialOrder::from_pairs(4, [(0, 2), (0, 3)]).unwrap(),
        PartialOrder::from_pairs(4, [(1, 0), (0, 3)]).unwrap(),
    ];
    let profile = PartialProfile::new(votes).unwrap();

    for rule in [ScoringRule::Plurality, ScoringRule::Borda, ScoringRule::Veto] {
        let co = nw_set(&profile, &rule, WinnerMode::CoWinner);
        let unique = nw_set(&profile, &rule, WinnerMode::Unique);
        println!("{rule}: necessary co-winners {co:?}, necessary unique winners {unique:?}");

        // The reference implementation agrees; it is just slower at scale.
        assert_eq!(co, nw_set_baseline(&profile, &rule, WinnerMode::CoWinner));
    }
}
