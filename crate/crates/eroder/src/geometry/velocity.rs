//! Front velocities and the two-sided growth classification.
//!
//! For an unnormalized integer direction u, a front of ones on
//! `{ i : <i,u> <= C }` maps in one step to the front at `C + v(u)` with
//! `v(u) = -min` over minimal one-sets S of `max_{s in S} <s,u>`, all in
//! integers. The unit-direction velocity of the text is v(u)/|u|; staying
//! unnormalized keeps everything exact.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::rule::MonotoneRule;

use super::Direction;

/// v(u), exact.
pub fn scaled_front_velocity(rule: &MonotoneRule, u: &Direction) -> i64 {
    assert_eq!(u.0.len(), rule.dimension(), "direction dimension mismatch");
    let support = rule.support();
    let mut best: Option<i128> = None;
    for set in rule.minimal_one_sets() {
        let mut hi: Option<i128> = None;
        for &i in set {
            let dot: i128 = support[i]
                .0
                .iter()
                .zip(&u.0)
                .map(|(&a, &b)| (a as i128) * (b as i128))
                .sum();
            hi = Some(hi.map_or(dot, |h: i128| h.max(dot)));
        }
        let hi = hi.unwrap();
        best = Some(best.map_or(hi, |b: i128| b.min(hi)));
    }
    i64::try_from(-best.unwrap()).expect("velocity fits i64")
}

/// g(u) = v(u) + v(-u): the per-step thickness change of a thick layer with
/// direction u, in |u|-scaled units.
pub fn thickness_growth(rule: &MonotoneRule, u: &Direction) -> i64 {
    scaled_front_velocity(rule, u) + scaled_front_velocity(rule, &u.negated())
}

fn primitive(mut v: Vec<i64>) -> Vec<i64> {
    let mut g: i64 = 0;
    for &c in &v {
        g = num::integer::gcd(g, c.abs());
    }
    if g > 1 {
        for c in &mut v {
            *c /= g;
        }
    }
    v
}

fn canonical_sign(mut v: Vec<i64>) -> Vec<i64> {
    if let Some(first) = v.iter().find(|&&c| c != 0) {
        if *first < 0 {
            for c in &mut v {
                *c = -*c;
            }
        }
    }
    v
}

/// For d = 2: one representative per ray of the fan generated by the
/// hyperplanes `{ <s - s', u> = 0 }` over support pairs. g is piecewise
/// linear and positively homogeneous with breakpoints only on these rays,
/// so its sign pattern on all of R^2 is determined by its values here.
/// Representatives come back with canonical sign (antipodes folded).
pub fn fan_rays(rule: &MonotoneRule) -> Vec<Direction> {
    assert_eq!(rule.dimension(), 2, "the exact fan is two-dimensional");
    let mut rays: BTreeSet<Vec<i64>> = BTreeSet::new();
    rays.insert(vec![1, 0]);
    rays.insert(vec![0, 1]);
    let support = rule.support();
    for a in support {
        for b in support {
            let w = [a.0[0] - b.0[0], a.0[1] - b.0[1]];
            if w == [0, 0] {
                continue;
            }
            // both rays perpendicular to w, folded to canonical sign
            rays.insert(canonical_sign(primitive(vec![-w[1], w[0]])));
        }
    }
    rays.into_iter().map(Direction).collect()
}

/// Sampled direction set for d >= 3: all integer vectors with entries in
/// [-bound, bound], reduced to primitive canonical-sign representatives.
pub fn sampled_rays(dimension: usize, bound: i64) -> Vec<Direction> {
    let mut rays: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut v = vec![-bound; dimension];
    'outer: loop {
        if v.iter().any(|&c| c != 0) {
            rays.insert(canonical_sign(primitive(v.clone())));
        }
        let mut k = dimension;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            v[k] += 1;
            if v[k] <= bound {
                break;
            }
            v[k] = -bound;
        }
    }
    rays.into_iter().map(Direction).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VelocityCondition {
    /// v(u) + v(-u) >= 0 on every examined ray.
    ConditionA,
    /// Some ray grows strictly.
    ConditionB,
    /// Every examined ray is non-growing and some shrinks strictly.
    Neither,
}

#[derive(Debug, Clone, Serialize)]
pub struct RayReport {
    pub direction: Direction,
    pub v: i64,
    pub v_opposite: i64,
    pub growth: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VelocityClassification {
    pub condition: VelocityCondition,
    /// Witness ray when condition is B.
    pub witness: Option<Direction>,
    /// Exact for d = 2 (fan); a sampled verdict otherwise, sound for B only.
    pub exact: bool,
    pub rays: Vec<RayReport>,
}

/// Classify the rule per the velocity conditions. Exact in d = 2 via the
/// difference fan; for d >= 3 a documented finite sample (entries in
/// [-bound, bound], default 3) is used, which proves ConditionB when a
/// witness appears but only suggests ConditionA / Neither.
pub fn classify_velocity_condition(
    rule: &MonotoneRule,
    sample_bound: Option<i64>,
) -> VelocityClassification {
    let exact = rule.dimension() == 2 && sample_bound.is_none();
    let rays = if rule.dimension() == 2 && sample_bound.is_none() {
        fan_rays(rule)
    } else {
        sampled_rays(rule.dimension(), sample_bound.unwrap_or(3))
    };
    let reports: Vec<RayReport> = rays
        .into_iter()
        .map(|u| {
            let v = scaled_front_velocity(rule, &u);
            let v_opposite = scaled_front_velocity(rule, &u.negated());
            RayReport { direction: u, v, v_opposite, growth: v + v_opposite }
        })
        .collect();
    let any_negative = reports.iter().any(|r| r.growth < 0);
    let witness = reports.iter().find(|r| r.growth > 0).map(|r| r.direction.clone());
    let condition = if !any_negative {
        VelocityCondition::ConditionA
    } else if witness.is_some() {
        VelocityCondition::ConditionB
    } else {
        VelocityCondition::Neither
    };
    VelocityClassification {
        witness: if condition == VelocityCondition::ConditionB { witness } else { None },
        condition,
        exact,
        rays: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dir(x: i64, y: i64) -> Direction {
        Direction::new(&[x, y])
    }

    #[test]
    fn nec_velocities_on_the_diagonal() {
        let nec = MonotoneRule::nec();
        assert_eq!(scaled_front_velocity(&nec, &dir(1, 1)), -1);
        assert_eq!(scaled_front_velocity(&nec, &dir(-1, -1)), 1);
        assert_eq!(thickness_growth(&nec, &dir(1, 1)), 0);
    }

    #[test]
    fn nsmm_velocities_north_south() {
        let r = MonotoneRule::nsmm();
        assert_eq!(scaled_front_velocity(&r, &dir(0, -1)), 1);
        assert_eq!(scaled_front_velocity(&r, &dir(0, 1)), 0);
        assert_eq!(thickness_growth(&r, &dir(0, 1)), 1);
    }

    #[test]
    fn non_example_east_west() {
        let r = MonotoneRule::non_example();
        assert_eq!(scaled_front_velocity(&r, &dir(1, 0)), 0);
        assert_eq!(scaled_front_velocity(&r, &dir(-1, 0)), -1);
        assert_eq!(thickness_growth(&r, &dir(1, 0)), -1);
    }

    #[test]
    fn velocity_is_positively_homogeneous() {
        for rule in [MonotoneRule::nec(), MonotoneRule::nsmm(), MonotoneRule::non_example()] {
            for (x, y) in [(1, 0), (2, 1), (-1, 3), (1, -2)] {
                let v1 = scaled_front_velocity(&rule, &dir(x, y));
                for k in 2..=4 {
                    assert_eq!(scaled_front_velocity(&rule, &dir(k * x, k * y)), k * v1);
                }
            }
        }
    }

    #[test]
    fn self_spin_flip_has_zero_growth_everywhere() {
        let nec = MonotoneRule::nec();
        assert!(nec.is_self_spin_flip());
        for u in fan_rays(&nec) {
            assert_eq!(thickness_growth(&nec, &u), 0, "ray {u}");
        }
    }

    #[test]
    fn classification_of_the_three_examples() {
        let nec = classify_velocity_condition(&MonotoneRule::nec(), None);
        assert_eq!(nec.condition, VelocityCondition::ConditionA);
        assert!(nec.exact);
        assert!(nec.rays.iter().all(|r| r.growth == 0));

        let nsmm = classify_velocity_condition(&MonotoneRule::nsmm(), None);
        assert_eq!(nsmm.condition, VelocityCondition::ConditionB);
        let witness = nsmm.witness.unwrap();
        assert_eq!(witness.0, vec![0, 1], "growth is on the north-south ray");

        let ne = classify_velocity_condition(&MonotoneRule::non_example(), None);
        assert_eq!(ne.condition, VelocityCondition::Neither);
        assert!(ne.rays.iter().all(|r| r.growth <= 0));
        assert!(ne.rays.iter().any(|r| r.growth < 0));
    }

    #[test]
    fn sampled_mode_for_three_dimensions() {
        let rule = MonotoneRule::min_max(3, 1).unwrap();
        let c = classify_velocity_condition(&rule, None);
        assert!(!c.exact);
        assert!(!c.rays.is_empty());
    }

    #[test]
    fn nec_fan_is_the_three_breakpoint_rays() {
        // support differences are (0,1), (1,0), (1,-1) up to sign, whose
        // perpendiculars fold to exactly these representatives
        let rays = fan_rays(&MonotoneRule::nec());
        let as_vecs: Vec<Vec<i64>> = rays.iter().map(|d| d.0.clone()).collect();
        assert_eq!(as_vecs, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
