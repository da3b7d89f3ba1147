//! Geometry against independent oracles: closed-form velocities against
//! one-step front simulation, sigma verdicts against erosion behavior and
//! the one-/zero-set duality, certificates against the validator.

use eroder::droplet::deterministic_extinction_time;
use eroder::geometry::{
    certificate_validate, farkas_certificate, scaled_front_velocity, sigma_empty, Direction, Side,
    SigmaVerdict,
};
use eroder::lattice::{sphere, step_det, Boundary, Configuration};
use eroder::rule::{random_rule, MonotoneRule};

fn builder_rules() -> Vec<MonotoneRule> {
    vec![
        MonotoneRule::nec(),
        MonotoneRule::nsmm(),
        MonotoneRule::non_example(),
        MonotoneRule::min_max(2, 1).unwrap(),
        MonotoneRule::identity(2),
    ]
}

fn sixteen_directions() -> Vec<Direction> {
    let mut out = Vec::new();
    for (x, y) in [
        (1, 0), (-1, 0), (0, 1), (0, -1),
        (1, 1), (1, -1), (-1, 1), (-1, -1),
        (2, 1), (2, -1), (-2, 1), (-2, -1),
        (1, 2), (1, -2), (-1, 2), (-1, -2),
    ] {
        out.push(Direction::new(&[x, y]));
    }
    out
}

/// One-step front oracle: ones on `{ <i,u> <= 0 }` clipped to a window must
/// map to ones exactly on `{ <i,u> <= v(u) }` over the window interior.
fn front_simulation_velocity_check(rule: &MonotoneRule, u: &Direction) {
    let r = 14i64;
    let lo = [-r, -r];
    let hi = [r, r];
    let sites: Vec<Vec<i64>> = (-r..=r)
        .flat_map(|i| (-r..=r).map(move |j| vec![i, j]))
        .filter(|s| s[0] * u.0[0] + s[1] * u.0[1] <= 0)
        .collect();
    let cfg = Configuration::from_sites(&lo, &hi, Boundary::Zeros, sites.iter()).unwrap();
    let next = step_det(rule, &cfg).unwrap();
    let v = scaled_front_velocity(rule, u);
    let margin = rule.radius_ceil();
    for i in -r + margin..=r - margin {
        for j in -r + margin..=r - margin {
            let expected = i * u.0[0] + j * u.0[1] <= v;
            assert_eq!(
                next.get(&[i, j]),
                expected,
                "rule {:?}, direction {u}, site ({i},{j}): closed form says v = {v}",
                rule.name()
            );
        }
    }
}

#[test]
fn velocities_match_front_simulation_for_all_builders() {
    for rule in builder_rules() {
        for u in sixteen_directions() {
            front_simulation_velocity_check(&rule, &u);
        }
    }
}

#[test]
fn velocities_match_front_simulation_for_random_rules() {
    for seed in 0..8u64 {
        let rule = random_rule(seed, 2, 5);
        for u in sixteen_directions().into_iter().take(8) {
            front_simulation_velocity_check(&rule, &u);
        }
    }
}

#[test]
fn sigma_duality_between_sides() {
    // sigma_0(r) is empty iff sigma_1(dual r) is empty: the dual's one-sets
    // are exactly r's zero-sets.
    let mut rules = builder_rules();
    for seed in 0..12u64 {
        rules.push(random_rule(seed, 2, 6));
    }
    for rule in rules {
        let dual = rule.spin_flip_dual();
        assert_eq!(
            sigma_empty(&rule, Side::Zeros).is_empty(),
            sigma_empty(&dual, Side::Ones).is_empty(),
            "duality broken for {:?}",
            rule.name()
        );
        assert_eq!(
            sigma_empty(&rule, Side::Ones).is_empty(),
            sigma_empty(&dual, Side::Zeros).is_empty()
        );
    }
}

#[test]
fn sigma_zero_verdicts_agree_with_island_erosion() {
    // sigma_0 empty <=> all-zeros attracts <=> finite islands of ones die.
    let horizon = 64;
    let window: (&[i64], &[i64]) = (&[-40, -40], &[40, 40]);
    for rule in [MonotoneRule::nec(), MonotoneRule::nsmm(), MonotoneRule::non_example()] {
        assert!(sigma_empty(&rule, Side::Zeros).is_empty());
        let island = sphere(&[0, 0], 4);
        let died = deterministic_extinction_time(&rule, &island, window, horizon).unwrap();
        assert!(
            died.is_some(),
            "{:?}: sigma_0 empty but a radius-4 island survived {horizon} steps",
            rule.name()
        );
    }
    // identity: sigma_0 = {0} nonempty and islands persist forever
    let rule = MonotoneRule::identity(2);
    assert!(!sigma_empty(&rule, Side::Zeros).is_empty());
    let island = sphere(&[0, 0], 2);
    let died = deterministic_extinction_time(&rule, &island, window, horizon).unwrap();
    assert_eq!(died, None);
}

#[test]
fn all_emitted_certificates_validate() {
    let cases = [
        (MonotoneRule::nec(), Side::Ones),
        (MonotoneRule::nec(), Side::Zeros),
        (MonotoneRule::nsmm(), Side::Ones),
        (MonotoneRule::nsmm(), Side::Zeros),
        (MonotoneRule::non_example(), Side::Ones),
        (MonotoneRule::non_example(), Side::Zeros),
        (MonotoneRule::min_max(2, 1).unwrap(), Side::Ones),
    ];
    for (rule, side) in cases {
        let cert = farkas_certificate(&rule, side)
            .unwrap_or_else(|e| panic!("{:?} {side}: {e}", rule.name()));
        assert!(
            certificate_validate(&rule, &cert).is_valid(),
            "{:?} {side}",
            rule.name()
        );
    }
}

#[test]
fn random_rules_certificate_or_witness() {
    // For every random rule, each side either yields a validated
    // certificate or a sigma witness; never a search-space failure.
    for seed in 0..20u64 {
        let rule = random_rule(seed, 2, 6);
        for side in [Side::Zeros, Side::Ones] {
            match sigma_empty(&rule, side) {
                SigmaVerdict::Empty => {
                    let cert = farkas_certificate(&rule, side).unwrap_or_else(|e| {
                        panic!("seed {seed} {side}: sigma empty but no certificate: {e}")
                    });
                    assert!(
                        certificate_validate(&rule, &cert).is_valid(),
                        "seed {seed} {side}"
                    );
                }
                SigmaVerdict::Witness(_) => {
                    assert!(farkas_certificate(&rule, side).is_err());
                }
            }
        }
    }
}
