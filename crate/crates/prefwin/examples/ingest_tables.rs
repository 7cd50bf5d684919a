//! Turn real-world tables into partial profiles: a ratings table (higher
//! rating means preferred; unrated items stay incomparable) and a noisy
//! pairwise-comparison table filtered by confidence.

use prefwin::formats::{ingest_pairwise, ingest_ratings, write_profile, ProfileDocument};

fn main() {
    let ratings = "\
user,item,rating
alice,pasta,4.5
alice,salad,3.0
alice,soup,3.0
bob,pasta,2.0
bob,soup,4.0
";
    let got = ingest_ratings(ratings.as_bytes()).unwrap();
    println!("from ratings ({} items, {} users):", got.items.len(), got.users.len());
    let doc = ProfileDocument { profile: got.profile, names: Some(got.items) };
    print!("{}", write_profile(&doc));

    let pairs = "\
user,a,b,preferred,confidence
carol,tea,coffee,tea,0.95
carol,coffee,juice,coffee,0.40
dave,tea,coffee,tea,0.90
dave,coffee,tea,coffee,0.85
";
    let got = ingest_pairwise(pairs.as_bytes(), 0.5).unwrap();
    println!(
        "\nfrom pairwise comparisons at confidence 0.5 (dropped cyclic users: {:?}):",
        got.dropped_users
    );
    let doc = ProfileDocument { profile: got.profile, names: Some(got.items) };
    print!("{}", write_profile(&doc));
}
