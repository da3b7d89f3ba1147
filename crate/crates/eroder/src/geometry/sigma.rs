//! Emptiness of sigma: the intersection of the convex hulls of the minimal
//! zero-sets (sigma_0) or one-sets (sigma_1). Intersecting over minimal sets
//! equals intersecting over all sets, because every set's hull contains a
//! minimal set's hull.
//!
//! Decided as exact LP feasibility: find a point z and per-set convex
//! coefficients reproducing z. A feasible solution yields a rational witness
//! in the intersection; infeasibility is a proof of emptiness.

use crate::exact::{rat_int, Rat};
use crate::rule::MonotoneRule;
use crate::simplex;
use num::Zero;

use super::{RationalVector, Side};

#[derive(Debug, Clone, PartialEq)]
pub enum SigmaVerdict {
    Empty,
    Witness(RationalVector),
}

impl SigmaVerdict {
    pub fn is_empty(&self) -> bool {
        matches!(self, SigmaVerdict::Empty)
    }
}

/// Decide emptiness of sigma for the given side.
pub fn sigma_empty(rule: &MonotoneRule, side: Side) -> SigmaVerdict {
    let sets = side.minimal_sets(rule);
    sigma_of_hulls(&sets, rule.dimension())
}

/// Emptiness of the intersection of the hulls of arbitrary point families.
/// Exposed so tests can run the same LP on non-minimal families.
pub fn sigma_of_hulls(sets: &[Vec<Vec<i64>>], dimension: usize) -> SigmaVerdict {
    assert!(!sets.is_empty());
    let d = dimension;
    // Variables: lambda_{k,v} for every set k and vertex v, then z+ and z-.
    let block_starts: Vec<usize> = sets
        .iter()
        .scan(0usize, |acc, s| {
            let start = *acc;
            *acc += s.len();
            Some(start)
        })
        .collect();
    let lambda_count: usize = sets.iter().map(Vec::len).sum();
    let n = lambda_count + 2 * d;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for (k, set) in sets.iter().enumerate() {
        // convex weights sum to one
        let mut row = vec![Rat::zero(); n];
        for v in 0..set.len() {
            row[block_starts[k] + v] = rat_int(1);
        }
        rows.push(row);
        rhs.push(rat_int(1));
        // weighted vertex sum equals z on every axis
        for a in 0..d {
            let mut row = vec![Rat::zero(); n];
            for (v, point) in set.iter().enumerate() {
                row[block_starts[k] + v] = rat_int(point[a]);
            }
            row[lambda_count + a] = rat_int(-1);
            row[lambda_count + d + a] = rat_int(1);
            rows.push(row);
            rhs.push(Rat::zero());
        }
    }
    match simplex::feasible_point(&rows, &rhs) {
        None => SigmaVerdict::Empty,
        Some(x) => {
            let coords: Vec<Rat> = (0..d)
                .map(|a| x[lambda_count + a].clone() - x[lambda_count + d + a].clone())
                .collect();
            SigmaVerdict::Witness(RationalVector::new(coords))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nec_sigma_zero_is_empty() {
        assert_eq!(sigma_empty(&MonotoneRule::nec(), Side::Zeros), SigmaVerdict::Empty);
        assert_eq!(sigma_empty(&MonotoneRule::nec(), Side::Ones), SigmaVerdict::Empty);
    }

    #[test]
    fn nsmm_both_sides_empty() {
        assert_eq!(sigma_empty(&MonotoneRule::nsmm(), Side::Zeros), SigmaVerdict::Empty);
        assert_eq!(sigma_empty(&MonotoneRule::nsmm(), Side::Ones), SigmaVerdict::Empty);
    }

    #[test]
    fn non_example_sigma_zero_is_empty() {
        assert_eq!(
            sigma_empty(&MonotoneRule::non_example(), Side::Zeros),
            SigmaVerdict::Empty
        );
    }

    #[test]
    fn identity_witness_is_the_origin() {
        match sigma_empty(&MonotoneRule::identity(2), Side::Zeros) {
            SigmaVerdict::Witness(p) => {
                assert!(p.coords.iter().all(|c| c.is_zero()));
            }
            SigmaVerdict::Empty => panic!("identity sigma_0 is the origin"),
        }
    }

    #[test]
    fn witness_lies_in_every_hull_for_overlapping_segments() {
        // two segments on the x-axis overlapping in [1, 2]
        let sets = vec![
            vec![vec![0, 0], vec![2, 0]],
            vec![vec![1, 0], vec![3, 0]],
        ];
        match sigma_of_hulls(&sets, 2) {
            SigmaVerdict::Witness(p) => {
                assert!(p.coords[1].is_zero());
                let x = &p.coords[0];
                assert!(*x >= rat_int(1) && *x <= rat_int(2), "witness {x} in overlap");
            }
            SigmaVerdict::Empty => panic!("overlapping hulls are nonempty"),
        }
    }

    #[test]
    fn disjoint_parallel_segments_are_empty() {
        let sets = vec![
            vec![vec![0, 0], vec![1, 0]],
            vec![vec![0, 1], vec![1, 1]],
        ];
        assert_eq!(sigma_of_hulls(&sets, 2), SigmaVerdict::Empty);
    }

    #[test]
    fn minimal_family_agrees_with_full_family() {
        // sigma over all zero-sets equals sigma over minimal zero-sets
        for rule in [MonotoneRule::nec(), MonotoneRule::nsmm(), MonotoneRule::non_example()] {
            let n = rule.support().len();
            let full_mask = (1u32 << n) - 1;
            let mut all_zero_sets: Vec<Vec<Vec<i64>>> = Vec::new();
            for s in 1..1u32 << n {
                if !rule.evaluate_mask(full_mask & !s) {
                    all_zero_sets.push(
                        (0..n)
                            .filter(|&k| s >> k & 1 == 1)
                            .map(|k| rule.support()[k].0.clone())
                            .collect(),
                    );
                }
            }
            let via_all = sigma_of_hulls(&all_zero_sets, 2).is_empty();
            let via_minimal = sigma_empty(&rule, Side::Zeros).is_empty();
            assert_eq!(via_all, via_minimal, "rule {:?}", rule.name());
        }
    }

    #[test]
    fn witness_check_by_membership() {
        // For a nonempty case, the witness must actually lie in each hull;
        // verify with an independent barycentric search.
        let rule = MonotoneRule::identity(2);
        if let SigmaVerdict::Witness(p) = sigma_empty(&rule, Side::Zeros) {
            for set in Side::Zeros.minimal_sets(&rule) {
                assert!(hull_contains(&set, &p.coords));
            }
        } else {
            panic!("expected witness");
        }
    }

    /// Brute-force hull membership via Caratheodory: some subset of at most
    /// d+1 points contains the target as a convex combination; solved by
    /// Gaussian elimination per subset, no LP involved.
    pub fn hull_contains(points: &[Vec<i64>], target: &[Rat]) -> bool {
        let d = target.len();
        let n = points.len();
        let mut subset: Vec<usize> = Vec::new();
        fn combos(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                combos(n, k, i + 1, cur, out);
                cur.pop();
            }
        }
        for k in 1..=(d + 1).min(n) {
            let mut all = Vec::new();
            combos(n, k, 0, &mut subset, &mut all);
            for combo in all {
                if barycentric_solves(points, &combo, target) {
                    return true;
                }
            }
        }
        false
    }

    fn barycentric_solves(points: &[Vec<i64>], combo: &[usize], target: &[Rat]) -> bool {
        use crate::exact::rational_nullspace;
        let d = target.len();
        let k = combo.len();
        // Solve sum w_i p_i = target, sum w_i = 1, w_i >= 0 by eliminating
        // through the homogeneous system [p_i; 1] w = [target; 1]: embed as
        // nullspace of the (d+1) x (k+1) system with the target appended.
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for a in 0..d {
            let mut row: Vec<Rat> = combo
                .iter()
                .map(|&i| rat_int(points[i][a]))
                .collect();
            row.push(-target[a].clone());
            rows.push(row);
        }
        let mut row: Vec<Rat> = vec![rat_int(1); k];
        row.push(rat_int(-1));
        rows.push(row);
        for basis in rational_nullspace(&rows, k + 1) {
            let scale = basis[k].clone();
            if scale.is_zero() {
                continue;
            }
            let w: Vec<Rat> = basis[..k].iter().map(|v| v / &scale).collect();
            if w.iter().all(|x| *x >= Rat::zero()) {
                return true;
            }
        }
        false
    }

    #[test]
    fn membership_oracle_on_triangle() {
        let tri = vec![vec![0, 0], vec![2, 0], vec![0, 2]];
        assert!(hull_contains(&tri, &[rat_int(0), rat_int(0)]));
        assert!(hull_contains(&tri, &[Rat::new(1.into(), 2.into()), Rat::new(1.into(), 2.into())]));
        assert!(!hull_contains(&tri, &[rat_int(2), rat_int(2)]));
        assert!(hull_contains(&tri, &[rat_int(1), rat_int(1)]), "on the edge");
    }

    #[test]
    fn dense_grid_finds_no_point_for_nec() {
        // Corroborate the Empty verdict on the NEC triangle edges with a
        // rational grid sweep (denominator 8 over the bounding box).
        let rule = MonotoneRule::nec();
        let sets = Side::Zeros.minimal_sets(&rule);
        let q = 8i64;
        for num_x in -q..=2 * q {
            for num_y in -q..=2 * q {
                let p = [Rat::new(num_x.into(), q.into()), Rat::new(num_y.into(), q.into())];
                let everywhere = sets.iter().all(|s| hull_contains(s, &p));
                assert!(!everywhere, "grid point {num_x}/{q},{num_y}/{q} in all hulls");
            }
        }
    }
}
