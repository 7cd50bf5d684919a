//! Generate the three synthetic profile families used for benchmarking and
//! look at their structure: partial chains, partitioned preferences, and
//! mixtures of selection models.

use prefwin::posetgen::{
    gen_partial_chains_profile, gen_partitioned_profile, gen_rsm_mix_profile,
};
use prefwin::{PartialProfile, StructureClass};

fn describe(name: &str, profile: &PartialProfile) {
    let mut chains = 0;
    let mut partitioned = 0;
    let mut general = 0;
    for vote in profile.votes() {
        match vote.classify_structure() {
            StructureClass::LinearForest => chains += 1,
            StructureClass::Partitioned(_) => partitioned += 1,
            StructureClass::General => general += 1,
        }
    }
    println!(
        "{name}: density {:.3}; votes classified as {chains} linear-forest, \
         {partitioned} partitioned, {general} general",
        profile.density()
    );
}

fn main() {
    let (m, n, seed) = (10, 50, 3);
    describe("partial chains", &gen_partial_chains_profile(m, n, seed));
    describe("partitioned   ", &gen_partitioned_profile(m, n, seed));
    describe("selection mix ", &gen_rsm_mix_profile(m, n, seed));
}
