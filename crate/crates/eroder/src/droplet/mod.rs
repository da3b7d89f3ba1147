//! Exact growth verification and droplet Monte Carlo.

pub mod fit;
pub mod mc;
pub mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Boundary, LatticeError};

#[derive(Debug, Error)]
pub enum DropletError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("unsupported rule: {0}")]
    UnsupportedRule(String),
    #[error("insufficient hits: only {eligible} eligible points, need at least 3 for a fit")]
    InsufficientHits { eligible: usize },
}

/// Everything needed to reproduce a Monte Carlo estimate bit-exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentParams {
    pub rule: String,
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<i64>,
    pub t: u64,
    pub samples: u64,
    pub window_lo: Vec<i64>,
    pub window_hi: Vec<i64>,
    pub boundary: Boundary,
}

/// A Monte Carlo probability estimate with binomial error and provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Estimate {
    pub p_hat: f64,
    pub hits: u64,
    pub samples: u64,
    pub std_err: f64,
    pub master_seed: u64,
    pub params: ExperimentParams,
}

impl Estimate {
    pub fn from_hits(hits: u64, samples: u64, master_seed: u64, params: ExperimentParams) -> Self {
        let p_hat = hits as f64 / samples as f64;
        let std_err = (p_hat * (1.0 - p_hat) / samples as f64).sqrt();
        Estimate { p_hat, hits, samples, std_err, master_seed, params }
    }

    /// -ln p_hat; infinite when no hits were seen.
    pub fn minus_log_p(&self) -> f64 {
        if self.hits == 0 {
            f64::INFINITY
        } else {
            -(self.p_hat.ln())
        }
    }

    /// Standard error of -ln p_hat by the delta method.
    pub fn minus_log_std_err(&self) -> f64 {
        if self.hits == 0 {
            f64::INFINITY
        } else {
            self.std_err / self.p_hat
        }
    }
}

/// One point of a scaling curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvePoint {
    pub l: i64,
    /// Number of sites of the region.
    pub volume: u64,
    pub t: u64,
    pub minus_log_p: f64,
    /// Standard error of `minus_log_p`.
    pub std_err: f64,
    pub hits: u64,
    pub samples: u64,
    pub p_hat: f64,
}

impl CurvePoint {
    /// A point can enter the log-log fit when it has enough hits and a
    /// finite positive -ln p (an estimate of exactly 0 or 1 has no
    /// log-log image).
    pub fn eligible(&self, min_hits: u64) -> bool {
        self.hits >= min_hits && self.minus_log_p.is_finite() && self.minus_log_p > 0.0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub exponent_std_err: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

impl PowerLawFit {
    /// Normal-approximation 95% confidence interval for the exponent.
    pub fn exponent_ci95(&self) -> (f64, f64) {
        let half = 1.96 * self.exponent_std_err;
        (self.exponent - half, self.exponent + half)
    }
}

/// Table of (L, -ln p_hat) with an optional fitted power law.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingCurve {
    pub points: Vec<CurvePoint>,
    pub fit: Option<PowerLawFit>,
    pub min_hits: u64,
}

impl ScalingCurve {
    pub fn assemble(points: Vec<CurvePoint>, min_hits: u64) -> ScalingCurve {
        let eligible: Vec<(f64, f64, f64)> = points
            .iter()
            .filter(|p| p.eligible(min_hits))
            .map(|p| {
                (
                    (p.l as f64).ln(),
                    p.minus_log_p.ln(),
                    p.std_err / p.minus_log_p,
                )
            })
            .collect();
        let fit = if eligible.len() >= 3 {
            Some(fit::fit_power_law(&eligible))
        } else {
            None
        };
        ScalingCurve { points, fit, min_hits }
    }

    pub fn eligible_count(&self) -> usize {
        self.points.iter().filter(|p| p.eligible(self.min_hits)).count()
    }
}

pub use mc::{
    asp_probe, deterministic_extinction_time, estimate_cylinder_prob,
    estimate_product_baseline, run_general_trajectory, run_trajectory, scaling_curve, AspRow,
    BaselineEstimate, ScalingMode,
};
pub use verify::{
    verify_case_b_growth, verify_lemma2, verify_lemma3, verify_region_growth,
    verify_spider_growth, VerifyOutcome,
};
