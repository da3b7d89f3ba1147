//! Extraction and validation of affine eroder certificates.
//!
//! When sigma is empty, the hulls of the minimal sets admit a family of
//! tight half-spaces with empty common intersection; a Farkas combination of
//! those half-spaces produces affine functions phi_j with
//!
//!   i)  { i : phi_j(i) <= 0 } contains a minimal set of the chosen side,
//!   ii) phi_1 + ... + phi_m = const > 0,
//!
//! and after pruning the family to one that no single functional can leave,
//! an interior witness point with all phi_j > 0 exists and is found by a
//! second LP (condition iii).

use num::bigint::BigInt;
use num::{Signed, Zero};
use thiserror::Error;

use crate::exact::{primitive_integer_ray, rat_int, rational_nullspace, Rat};
use crate::rule::MonotoneRule;
use crate::simplex::{self, LpOutcome};

use super::{sigma_empty, AffineFunctional, EroderCertificate, RationalVector, Side, SigmaVerdict};

/// One candidate half-space `{ x : <normal, x> <= bound }`, tight for the
/// minimal set it was generated from.
#[derive(Debug, Clone)]
pub struct CandidateHalfSpace {
    pub normal: Vec<i64>,
    pub bound: BigInt,
    pub set_index: usize,
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("sigma is nonempty; no certificate can exist (witness {witness:?})")]
    SigmaNonEmpty { witness: Vec<String> },
    #[error("no certificate in the candidate search space ({candidates} tight half-spaces over {sets} minimal sets): {detail}")]
    NoCertificateInSearchSpace {
        candidates: usize,
        sets: usize,
        detail: String,
        searched: Vec<String>,
    },
}

fn dot_i64(a: &[i64], b: &[i64]) -> BigInt {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| BigInt::from(x) * BigInt::from(y))
        .sum()
}

/// Candidate normals for one minimal set: facet normals of its convex hull
/// (within its affine hull, lifted back to Z^d) plus the +/- orthogonal
/// complement basis that pins a lower-dimensional hull, plus the coordinate
/// axes. Everything is integral and primitive.
fn candidate_normals(points: &[Vec<i64>], dimension: usize) -> Vec<Vec<i64>> {
    let mut normals: Vec<Vec<i64>> = Vec::new();
    let mut push = |v: Vec<i64>| {
        if v.iter().any(|&c| c != 0) && !normals.contains(&v) {
            normals.push(v);
        }
    };
    for a in 0..dimension {
        let mut e = vec![0i64; a];
        e.push(1);
        e.resize(dimension, 0);
        push(e.clone());
        push(e.into_iter().map(|c| -c).collect());
    }
    let base = &points[0];
    let dirs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(&a, &b)| rat_int(a - b)).collect())
        .collect();
    let complement = rational_nullspace(&dirs, dimension);
    let rank = dimension - complement.len();
    for c in &complement {
        let prim = primitive_to_i64(c);
        push(prim.clone());
        push(prim.into_iter().map(|x| -x).collect());
    }
    if rank >= 1 {
        // Facets: hyperplanes within the affine hull through `rank` points.
        let idx: Vec<usize> = (0..points.len()).collect();
        for combo in combinations(&idx, rank) {
            let mut rows: Vec<Vec<Rat>> = complement.clone();
            let p0 = &points[combo[0]];
            for &i in &combo[1..] {
                rows.push(
                    points[i]
                        .iter()
                        .zip(p0)
                        .map(|(&a, &b)| rat_int(a - b))
                        .collect(),
                );
            }
            let null = rational_nullspace(&rows, dimension);
            if null.len() == 1 {
                let prim = primitive_to_i64(&null[0]);
                push(prim.clone());
                push(prim.into_iter().map(|x| -x).collect());
            }
        }
    }
    normals
}

fn primitive_to_i64(v: &[Rat]) -> Vec<i64> {
    primitive_integer_ray(v)
        .into_iter()
        .map(|b| i64::try_from(&b).expect("candidate normal fits i64"))
        .collect()
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// The full candidate family: per minimal set, every candidate normal from
/// every set (cross product), each tightened against that set. In d = 2 the
/// velocity-fan perpendiculars are added as extra normals.
fn candidate_half_spaces(
    rule: &MonotoneRule,
    sets: &[Vec<Vec<i64>>],
) -> Vec<CandidateHalfSpace> {
    let d = rule.dimension();
    let mut normals: Vec<Vec<i64>> = Vec::new();
    for set in sets {
        for n in candidate_normals(set, d) {
            if !normals.contains(&n) {
                normals.push(n);
            }
        }
    }
    if d == 2 {
        for ray in super::fan_rays(rule) {
            for v in [ray.0.clone(), ray.negated().0] {
                if !normals.contains(&v) {
                    normals.push(v);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (k, set) in sets.iter().enumerate() {
        for n in &normals {
            let bound = set.iter().map(|p| dot_i64(n, p)).max().unwrap();
            out.push(CandidateHalfSpace { normal: n.clone(), bound, set_index: k });
        }
    }
    out
}

/// Find nonnegative weights with `sum w_i normal_i = 0` and
/// `sum w_i bound_i = -1` over the given candidate subset: the Farkas
/// combination proving the half-space system infeasible.
fn farkas_weights(candidates: &[&CandidateHalfSpace], dimension: usize) -> Option<Vec<Rat>> {
    let n = candidates.len();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for a in 0..dimension {
        rows.push(
            candidates
                .iter()
                .map(|c| rat_int(c.normal[a]))
                .collect(),
        );
        rhs.push(Rat::zero());
    }
    rows.push(
        candidates
            .iter()
            .map(|c| Rat::from_integer(c.bound.clone()))
            .collect(),
    );
    rhs.push(rat_int(-1));
    simplex::feasible_point(&rows, &rhs).map(|x| x[..n].to_vec())
}

/// Extract an eroder certificate for the given side.
pub fn farkas_certificate(
    rule: &MonotoneRule,
    side: Side,
) -> Result<EroderCertificate, CertificateError> {
    let d = rule.dimension();
    match sigma_empty(rule, side) {
        SigmaVerdict::Empty => {}
        SigmaVerdict::Witness(p) => {
            return Err(CertificateError::SigmaNonEmpty {
                witness: p.coords.iter().map(|c| c.to_string()).collect(),
            })
        }
    }
    let sets = side.minimal_sets(rule);
    let all = candidate_half_spaces(rule, &sets);
    let describe = |c: &CandidateHalfSpace| {
        format!("<{:?},x> <= {} (set {})", c.normal, c.bound, c.set_index)
    };

    let mut active: Vec<&CandidateHalfSpace> = all.iter().collect();
    let mut weights = match farkas_weights(&active, d) {
        Some(w) => w,
        None => {
            return Err(CertificateError::NoCertificateInSearchSpace {
                candidates: all.len(),
                sets: sets.len(),
                detail: "candidate half-spaces have a common point; facet normals were insufficient"
                    .into(),
                searched: all.iter().map(describe).collect(),
            })
        }
    };

    // Drop zero weights, then prune until no single half-space can leave.
    let shrink = |active: &[&CandidateHalfSpace], w: &[Rat]| -> Vec<usize> {
        (0..active.len()).filter(|&i| !w[i].is_zero()).collect()
    };
    let mut keep = shrink(&active, &weights);
    active = keep.iter().map(|&i| active[i]).collect();
    weights = keep.iter().map(|&i| weights[i].clone()).collect();
    loop {
        let mut pruned = false;
        for skip in 0..active.len() {
            if active.len() <= 1 {
                break;
            }
            let reduced: Vec<&CandidateHalfSpace> = active
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, c)| *c)
                .collect();
            if let Some(w) = farkas_weights(&reduced, d) {
                active = reduced;
                weights = w;
                keep = shrink(&active, &weights);
                active = keep.iter().map(|&i| active[i]).collect();
                weights = keep.iter().map(|&i| weights[i].clone()).collect();
                pruned = true;
                break;
            }
        }
        if !pruned {
            break;
        }
    }

    // phi_j = w_j (<c_j, x> - b_j); the sum is -sum w_j b_j = 1 > 0.
    let functionals: Vec<AffineFunctional> = active
        .iter()
        .zip(&weights)
        .map(|(c, w)| {
            let linear: Vec<Rat> = c.normal.iter().map(|&a| w * rat_int(a)).collect();
            let constant = -(w * Rat::from_integer(c.bound.clone()));
            AffineFunctional::new(linear, constant)
        })
        .collect();
    let positivity: Rat = functionals.iter().map(|f| f.constant.clone()).sum();
    debug_assert!(positivity.is_positive());

    // Condition iii: maximize t (capped at 1) with phi_j(p) >= t.
    // Variables: p+ (d), p- (d), t+, t-, slack per functional, cap slack.
    let m = functionals.len();
    let n = 2 * d + 2 + m + 1;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for (j, f) in functionals.iter().enumerate() {
        let mut row = vec![Rat::zero(); n];
        for a in 0..d {
            row[a] = f.linear[a].clone();
            row[d + a] = -f.linear[a].clone();
        }
        row[2 * d] = rat_int(-1);
        row[2 * d + 1] = rat_int(1);
        row[2 * d + 2 + j] = rat_int(-1);
        rows.push(row);
        rhs.push(-f.constant.clone());
    }
    let mut cap = vec![Rat::zero(); n];
    cap[2 * d] = rat_int(1);
    cap[2 * d + 1] = rat_int(-1);
    cap[n - 1] = rat_int(1);
    rows.push(cap);
    rhs.push(rat_int(1));
    let mut objective = vec![Rat::zero(); n];
    objective[2 * d] = rat_int(-1);
    objective[2 * d + 1] = rat_int(1);
    let witness = match simplex::solve(&rows, &rhs, &objective) {
        LpOutcome::Optimal { x, value } if (-&value).is_positive() => {
            let coords: Vec<Rat> =
                (0..d).map(|a| x[a].clone() - x[d + a].clone()).collect();
            RationalVector::new(coords)
        }
        other => {
            return Err(CertificateError::NoCertificateInSearchSpace {
                candidates: all.len(),
                sets: sets.len(),
                detail: format!(
                    "pruned family admits no interior witness point (LP outcome {other:?})"
                ),
                searched: active.iter().map(|c| describe(c)).collect(),
            })
        }
    };

    Ok(EroderCertificate { side, functionals, witness, positivity })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationOutcome {
    Valid,
    Violation(ConditionViolation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionViolation {
    /// 1, 2 or 3, matching the certificate conditions.
    pub condition: u8,
    pub detail: String,
}

impl ValidationOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidationOutcome::Valid)
    }
}

/// Independent re-check of the three certificate conditions in exact
/// arithmetic: enumeration over the support for (i), symbolic sums for (ii),
/// direct evaluation at the witness for (iii). Reports the first violation.
pub fn certificate_validate(rule: &MonotoneRule, cert: &EroderCertificate) -> ValidationOutcome {
    let d = rule.dimension();
    if cert.dimension() != d || cert.functionals.iter().any(|f| f.linear.len() != d) {
        return ValidationOutcome::Violation(ConditionViolation {
            condition: 1,
            detail: format!("certificate dimension does not match rule dimension {d}"),
        });
    }
    if cert.functionals.is_empty() {
        return ValidationOutcome::Violation(ConditionViolation {
            condition: 1,
            detail: "certificate has no functionals".into(),
        });
    }
    if let Some(j) = cert.functionals.iter().position(AffineFunctional::is_degenerate) {
        return ValidationOutcome::Violation(ConditionViolation {
            condition: 1,
            detail: format!("functional {j} has zero linear part"),
        });
    }

    // (i) each nonpositivity region within the support contains a minimal set
    let sets = cert.side.minimal_sets(rule);
    for (j, f) in cert.functionals.iter().enumerate() {
        let region: Vec<usize> = rule
            .support()
            .iter()
            .enumerate()
            .filter(|(_, o)| !f.eval_int(&o.0).is_positive())
            .map(|(i, _)| i)
            .collect();
        let covered = sets.iter().any(|set| {
            set.iter().all(|p| {
                rule.support()
                    .iter()
                    .position(|o| o.0 == *p)
                    .is_some_and(|i| region.binary_search(&i).is_ok())
            })
        });
        if !covered {
            return ValidationOutcome::Violation(ConditionViolation {
                condition: 1,
                detail: format!(
                    "half-space of functional {j} contains no minimal {}-set within the support",
                    cert.side
                ),
            });
        }
    }

    // (ii) linear parts cancel and the constant sum is positive
    for a in 0..d {
        let s: Rat = cert.functionals.iter().map(|f| f.linear[a].clone()).sum();
        if !s.is_zero() {
            return ValidationOutcome::Violation(ConditionViolation {
                condition: 2,
                detail: format!("linear parts sum to {s} on axis {a}, expected 0"),
            });
        }
    }
    let const_sum: Rat = cert.functionals.iter().map(|f| f.constant.clone()).sum();
    if !const_sum.is_positive() {
        return ValidationOutcome::Violation(ConditionViolation {
            condition: 2,
            detail: format!("constant sum {const_sum} is not positive"),
        });
    }
    if const_sum != cert.positivity {
        return ValidationOutcome::Violation(ConditionViolation {
            condition: 2,
            detail: format!(
                "stored positivity {} does not equal the constant sum {const_sum}",
                cert.positivity
            ),
        });
    }

    // (iii) all functionals strictly positive at the witness
    for (j, f) in cert.functionals.iter().enumerate() {
        let v = f.eval_rat(&cert.witness.coords);
        if !v.is_positive() {
            return ValidationOutcome::Violation(ConditionViolation {
                condition: 3,
                detail: format!("functional {j} evaluates to {v} at the witness"),
            });
        }
    }
    ValidationOutcome::Valid
}
