//! Read and write the `poset-profile v1` text format, the on-disk
//! representation the command-line tool uses everywhere.

use prefwin::formats::{parse_profile, write_profile, ProfileDocument};
use prefwin::posetgen::gen_partitioned_profile;

fn main() {
    let profile = gen_partitioned_profile(5, 4, 21);
    let doc = ProfileDocument {
        profile,
        names: Some(["a", "b", "c", "d", "e"].map(String::from).to_vec()),
    };

    let text = write_profile(&doc);
    println!("{text}");

    // Parsing is the exact inverse on canonical documents.
    let parsed = parse_profile(&text).unwrap();
    assert_eq!(parsed, doc);
    assert_eq!(write_profile(&parsed), text);
    println!("round-trip verified");
}
