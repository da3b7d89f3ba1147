//! The bit-packed engine against a naive per-site reference, plus the
//! locality-cone and monotonicity contracts of the deterministic step.

use std::collections::HashMap;

use eroder::lattice::rng::mix64;
use eroder::lattice::{step_det, Boundary, Configuration};
use eroder::rule::{random_rule, MonotoneRule, Offset};
use proptest::prelude::*;

/// Per-site reference step through the public evaluate(map) path; no bit
/// tricks anywhere.
fn step_reference(rule: &MonotoneRule, cfg: &Configuration) -> Configuration {
    let layout = cfg.layout().clone();
    let mut out = Configuration::zeros(&layout.lo, &layout.hi, cfg.boundary()).unwrap();
    let d = layout.dimension();
    let mut site = layout.lo.clone();
    loop {
        let mut local: HashMap<Offset, bool> = HashMap::new();
        for o in rule.support() {
            let neighbor: Vec<i64> = site.iter().zip(&o.0).map(|(a, b)| a + b).collect();
            local.insert(o.clone(), cfg.read(&neighbor));
        }
        if rule.evaluate(&local).unwrap() {
            out.set(&site, true);
        }
        let mut k = d;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            site[k] += 1;
            if site[k] <= layout.hi[k] {
                break;
            }
            site[k] = layout.lo[k];
        }
    }
}

fn random_cfg(seed: u64, lo: &[i64], hi: &[i64], boundary: Boundary, density_pct: u64) -> Configuration {
    let mut cfg = Configuration::zeros(lo, hi, boundary).unwrap();
    let mut site = lo.to_vec();
    let mut counter = seed;
    loop {
        counter = counter.wrapping_add(0x9e3779b97f4a7c15);
        if mix64(counter) % 100 < density_pct {
            cfg.set(&site, true);
        }
        let mut k = site.len();
        loop {
            if k == 0 {
                return cfg;
            }
            k -= 1;
            site[k] += 1;
            if site[k] <= hi[k] {
                break;
            }
            site[k] = lo[k];
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn packed_step_matches_reference(
        rule_seed in 0u64..1_000_000,
        cfg_seed in 0u64..1_000_000,
        boundary_pick in 0u8..3,
        density in 10u64..90,
    ) {
        let rule = random_rule(rule_seed, 2, 6);
        let boundary = match boundary_pick {
            0 => Boundary::Zeros,
            1 => Boundary::Ones,
            _ => Boundary::Periodic,
        };
        // window wide enough to cross a word boundary sometimes
        let hi = [4, 60 + (cfg_seed % 9) as i64];
        let cfg = random_cfg(cfg_seed, &[-3, -2], &hi, boundary, density);
        let fast = step_det(&rule, &cfg).unwrap();
        let slow = step_reference(&rule, &cfg);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn step_is_monotone_in_the_configuration(
        rule_seed in 0u64..1_000_000,
        cfg_seed in 0u64..1_000_000,
        extra_seed in 0u64..1_000_000,
    ) {
        let rule = random_rule(rule_seed, 2, 6);
        let lower = random_cfg(cfg_seed, &[-4, -4], &[4, 4], Boundary::Zeros, 40);
        let mut upper = lower.clone();
        // sprinkle extra ones on top
        let extra = random_cfg(extra_seed, &[-4, -4], &[4, 4], Boundary::Zeros, 25);
        for site in extra.iter_ones() {
            upper.set(&site, true);
        }
        prop_assert!(lower.le(&upper));
        let a = step_det(&rule, &lower).unwrap();
        let b = step_det(&rule, &upper).unwrap();
        prop_assert!(a.le(&b), "step must preserve the sitewise order");
    }
}

#[test]
fn packed_matches_reference_in_three_dimensions() {
    for seed in 0..6u64 {
        let rule = random_rule(seed, 3, 5);
        for boundary in [Boundary::Zeros, Boundary::Ones, Boundary::Periodic] {
            let cfg = random_cfg(seed ^ 0xabc, &[-2, -2, -2], &[2, 2, 70], boundary, 35);
            assert_eq!(
                step_det(&rule, &cfg).unwrap(),
                step_reference(&rule, &cfg),
                "seed {seed} boundary {boundary}"
            );
        }
    }
}

#[test]
fn packed_matches_reference_in_one_dimension() {
    for seed in 0..6u64 {
        let rule = random_rule(seed, 1, 4);
        for boundary in [Boundary::Zeros, Boundary::Ones, Boundary::Periodic] {
            let cfg = random_cfg(seed ^ 0x51, &[-70], &[70], boundary, 50);
            assert_eq!(
                step_det(&rule, &cfg).unwrap(),
                step_reference(&rule, &cfg),
                "seed {seed} boundary {boundary}"
            );
        }
    }
}

/// Two runs that agree on a region evolve identically on the region eroded
/// by t * ceil(rho): boundary conventions cannot leak in faster than the
/// locality cone.
#[test]
fn locality_cone_shields_the_interior() {
    for rule in [MonotoneRule::nec(), MonotoneRule::nsmm(), MonotoneRule::non_example()] {
        let lo = [-16, -16];
        let hi = [16, 16];
        let interior = random_cfg(99, &lo, &hi, Boundary::Zeros, 45);
        // same bits, different boundary convention
        let mut zeros_run = interior;
        let mut ones_run = {
            let mut c = Configuration::zeros(&lo, &hi, Boundary::Ones).unwrap();
            for site in zeros_run.iter_ones() {
                c.set(&site, true);
            }
            c
        };
        let t = 5u64;
        for _ in 0..t {
            zeros_run = step_det(&rule, &zeros_run).unwrap();
            ones_run = step_det(&rule, &ones_run).unwrap();
        }
        let margin = rule.radius_ceil() * t as i64;
        for i in lo[0] + margin..=hi[0] - margin {
            for j in lo[1] + margin..=hi[1] - margin {
                assert_eq!(
                    zeros_run.get(&[i, j]),
                    ones_run.get(&[i, j]),
                    "rule {:?} disagrees at ({i},{j}) inside the cone",
                    rule.name()
                );
            }
        }
    }
}
