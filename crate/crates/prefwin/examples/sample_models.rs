//! Sample rankings from the repeated insertion model (Mallows) and partial
//! orders from the repeated selection model, then check the samplers
//! against their exact probability functions.

use prefwin::posetgen::{
    mallows_pi_rim, mallows_prob, rim_sample, rsm_pi_mallows, rsm_poset_prob_bruteforce,
    rsm_sample, RsmParams,
};
use prefwin::Ranking;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let m = 4;
    let phi = 0.5;
    let sigma = Ranking::identity(m);
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    // Mallows rankings concentrate around the reference as phi shrinks.
    let pi = mallows_pi_rim(m, phi);
    let trials = 50_000;
    let hits = (0..trials)
        .filter(|_| rim_sample(&sigma, &pi, &mut rng) == sigma)
        .count();
    let exact = mallows_prob(&sigma, &sigma, phi);
    println!(
        "reference ranking sampled {:.4} of the time (exact probability {exact:.4})",
        hits as f64 / trials as f64
    );

    // The selection model emits partial orders; with pair probability 0.6
    // per step it covers everything from empty to total orders.
    let params = RsmParams::new(sigma, rsm_pi_mallows(m, phi), vec![0.6; m - 1]);
    let sample = rsm_sample(&params, &mut rng);
    println!("one sampled partial order: {:?} pairs, density {:.2}", sample.pairs().len(), sample.density());
    let p = rsm_poset_prob_bruteforce(&sample, &params);
    println!("its exact probability under the model: {p:.6}");
}
