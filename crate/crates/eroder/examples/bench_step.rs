use eroder::lattice::{Boundary, Configuration, NoiseModel, RngSpec};
use eroder::lattice::step_noisy;
use eroder::rule::MonotoneRule;
use std::time::Instant;

fn main() {
    let rule = MonotoneRule::nec();
    let noise = NoiseModel::new(0.25);
    let (lo, hi) = ([-102i64, -102], [102i64, 102]);
    let t = 96u64;
    let reps = 50u64;
    let start = Instant::now();
    let mut acc = 0u64;
    for replica in 0..reps {
        let rng = RngSpec::new(1, replica);
        let mut cfg = Configuration::zeros(&lo, &hi, Boundary::Zeros).unwrap();
        for step in 0..t {
            cfg = step_noisy(&rule, &cfg, &noise, &rng, step).unwrap();
        }
        acc += cfg.count_ones();
    }
    let elapsed = start.elapsed().as_secs_f64();
    let site_steps = 205.0 * 205.0 * t as f64 * reps as f64;
    println!(
        "{} site-steps in {:.2}s = {:.3} ns/site-step (checksum {})",
        site_steps, elapsed, elapsed * 1e9 / site_steps, acc
    );
}
