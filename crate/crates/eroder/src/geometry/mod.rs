//! Convex-geometric certification: front velocities, sigma emptiness, and
//! affine eroder certificates, all in exact rational arithmetic.

pub mod certificate;
pub mod sigma;
pub mod velocity;

use num::bigint::BigInt;
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::{self, dot_rat_rat, lcm_denominator, norm_squared, Rat};
use crate::rule::MonotoneRule;

/// Which uniform configuration a statement is about. The zeros side talks
/// about minimal zero-sets (all-zeros attracting); the ones side about
/// minimal one-sets (all-ones attracting).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Zeros,
    Ones,
}

impl Side {
    /// The relevant antichain of minimal sets, in support coordinates.
    pub fn minimal_sets(&self, rule: &MonotoneRule) -> Vec<Vec<Vec<i64>>> {
        let sets = match self {
            Side::Ones => rule.one_sets_as_offsets(),
            Side::Zeros => rule.minimal_zero_sets(),
        };
        sets.iter()
            .map(|s| s.iter().map(|o| o.0.clone()).collect())
            .collect()
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Zeros => write!(f, "zeros"),
            Side::Ones => write!(f, "ones"),
        }
    }
}

/// A point of `Q^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalVector {
    #[serde(with = "exact::rat_vec_serde")]
    pub coords: Vec<Rat>,
}

impl RationalVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        RationalVector { coords }
    }

    pub fn zero(d: usize) -> Self {
        RationalVector { coords: vec![Rat::zero(); d] }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    /// Least common denominator of the coordinates.
    pub fn common_denominator(&self) -> BigInt {
        lcm_denominator(&self.coords)
    }
}

/// An affine function `x -> linear . x + constant` with nonzero linear part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineFunctional {
    #[serde(with = "exact::rat_vec_serde")]
    pub linear: Vec<Rat>,
    #[serde(
        serialize_with = "exact::serialize_rat",
        deserialize_with = "exact::deserialize_rat"
    )]
    pub constant: Rat,
}

impl AffineFunctional {
    pub fn new(linear: Vec<Rat>, constant: Rat) -> Self {
        AffineFunctional { linear, constant }
    }

    pub fn eval_rat(&self, p: &[Rat]) -> Rat {
        dot_rat_rat(&self.linear, p) + &self.constant
    }

    pub fn eval_int(&self, site: &[i64]) -> Rat {
        exact::dot_rat_int(&self.linear, site) + &self.constant
    }

    /// Exact squared Euclidean norm of the linear part.
    pub fn norm_squared(&self) -> Rat {
        norm_squared(&self.linear)
    }

    pub fn is_degenerate(&self) -> bool {
        self.linear.iter().all(Rat::is_zero)
    }
}

/// A certificate realizing the affine-function characterization: halfspaces
/// `{phi_j <= 0}` each containing a minimal set of `side`, with
/// `sum phi_j = positivity > 0` and a rational point where all `phi_j > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EroderCertificate {
    pub side: Side,
    pub functionals: Vec<AffineFunctional>,
    pub witness: RationalVector,
    #[serde(
        serialize_with = "exact::serialize_rat",
        deserialize_with = "exact::deserialize_rat"
    )]
    pub positivity: Rat,
}

impl EroderCertificate {
    pub fn dimension(&self) -> usize {
        self.witness.dimension()
    }

    /// phi_j(i) for an integer site.
    pub fn functional_values(&self, site: &[i64]) -> Vec<Rat> {
        self.functionals.iter().map(|f| f.eval_int(site)).collect()
    }
}

/// An unnormalized integer direction; only the ray through it matters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction(pub Vec<i64>);

impl Direction {
    pub fn new(v: &[i64]) -> Self {
        assert!(v.iter().any(|&c| c != 0), "direction must be nonzero");
        Direction(v.to_vec())
    }

    pub fn negated(&self) -> Direction {
        Direction(self.0.iter().map(|&c| -c).collect())
    }

    pub fn norm_squared(&self) -> i128 {
        self.0.iter().map(|&c| (c as i128) * (c as i128)).sum()
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// alpha^2 = min_j phi_j(p)^2 / |phi_j|^2, the witness p, and the least
/// common denominator q of p's coordinates. alpha itself is usually
/// irrational; callers compare `|i + t p|^2 <= alpha^2 t^2` in rationals.
pub fn alpha_and_witness(cert: &EroderCertificate) -> (Rat, RationalVector, BigInt) {
    let p = &cert.witness;
    let mut alpha_sq: Option<Rat> = None;
    for f in &cert.functionals {
        let v = f.eval_rat(&p.coords);
        let ratio = &v * &v / f.norm_squared();
        if alpha_sq.as_ref().map_or(true, |a| ratio < *a) {
            alpha_sq = Some(ratio);
        }
    }
    let q = p.common_denominator();
    (alpha_sq.expect("certificate has at least one functional"), p.clone(), q)
}

pub use certificate::{
    certificate_validate, farkas_certificate, CertificateError, ConditionViolation,
    ValidationOutcome,
};
pub use sigma::{sigma_empty, SigmaVerdict};
pub use velocity::{
    classify_velocity_condition, fan_rays, sampled_rays, scaled_front_velocity, RayReport,
    VelocityClassification, VelocityCondition,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn toy_certificate() -> EroderCertificate {
        // phi_1 = y, phi_2 = x, phi_3 = 1 - x - y with witness (1/4, 1/4)
        EroderCertificate {
            side: Side::Ones,
            functionals: vec![
                AffineFunctional::new(vec![rat_int(0), rat_int(1)], rat_int(0)),
                AffineFunctional::new(vec![rat_int(1), rat_int(0)], rat_int(0)),
                AffineFunctional::new(vec![rat_int(-1), rat_int(-1)], rat_int(1)),
            ],
            witness: RationalVector::new(vec![rat(1, 4), rat(1, 4)]),
            positivity: rat_int(1),
        }
    }

    #[test]
    fn alpha_of_toy_certificate() {
        let (alpha_sq, p, q) = alpha_and_witness(&toy_certificate());
        // phi_1(p) = phi_2(p) = 1/4 with norm 1 -> 1/16; phi_3(p) = 1/2 with
        // norm^2 = 2 -> 1/8; the minimum is 1/16.
        assert_eq!(alpha_sq, rat(1, 16));
        assert_eq!(p.coords, vec![rat(1, 4), rat(1, 4)]);
        assert_eq!(q, BigInt::from(4));
    }

    #[test]
    fn alpha_with_unit_data_is_one() {
        let cert = EroderCertificate {
            side: Side::Ones,
            functionals: vec![
                AffineFunctional::new(vec![rat_int(1), rat_int(0)], rat_int(1)),
                AffineFunctional::new(vec![rat_int(0), rat_int(1)], rat_int(1)),
                AffineFunctional::new(vec![rat_int(-1), rat_int(-1)], rat_int(1)),
            ],
            witness: RationalVector::zero(2),
            positivity: rat_int(3),
        };
        let (alpha_sq, _, q) = alpha_and_witness(&cert);
        assert_eq!(alpha_sq, rat_int(1) / rat_int(2), "min over |phi|^2 in {{1,1,2}}");
        assert_eq!(q, BigInt::from(1));
    }

    #[test]
    fn lcm_denominator_of_witness() {
        let p = RationalVector::new(vec![rat(1, 2), rat(-1, 3)]);
        assert_eq!(p.common_denominator(), BigInt::from(6));
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = toy_certificate();
        let json = serde_json::to_string_pretty(&cert).unwrap();
        let back: EroderCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
    }
}
