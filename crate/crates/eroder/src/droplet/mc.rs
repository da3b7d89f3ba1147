//! Monte Carlo estimation of aligned-droplet probabilities.
//!
//! Replicas are independent counter-based streams, so hit counts are
//! identical for any thread count or execution order. The finite-t measure
//! `(N_eps D_f)^t delta_0` stands in for the invariant measure; `t` is an
//! explicit experiment parameter and reported with every estimate.

use rayon::prelude::*;

use crate::lattice::rng::mix64;
use crate::lattice::step::step_noisy_into;
use crate::lattice::{
    sphere, step_det, step_general, step_noisy, window_respects_cone, Boundary, Configuration,
    GeneralStochasticRule, NoiseModel, Prob64, RegionMask, RngSpec,
};
use crate::rule::MonotoneRule;

use super::{CurvePoint, DropletError, Estimate, ExperimentParams, ScalingCurve};

/// Estimate the probability that `region` is entirely ones after `t` noisy
/// steps from all-zeros. The window must contain the region inflated by
/// `t * ceil(rho)` so that the region's law matches the infinite lattice.
#[allow(clippy::too_many_arguments)]
pub fn estimate_cylinder_prob(
    rule: &MonotoneRule,
    epsilon: f64,
    region: &[Vec<i64>],
    t: u64,
    samples: u64,
    window: (&[i64], &[i64]),
    boundary: Boundary,
    master_seed: u64,
) -> Result<Estimate, DropletError> {
    let cfg0 = Configuration::zeros(window.0, window.1, boundary)?;
    window_respects_cone(cfg0.layout(), region, &rule.axis_reach(), t as i64)?;
    let mask = RegionMask::new(cfg0.layout(), region)?;
    let noise = NoiseModel::new(epsilon);
    let hits: u64 = (0..samples)
        .into_par_iter()
        .map(|replica| {
            let rng = RngSpec::new(master_seed, replica);
            let mut cfg = cfg0.clone();
            let mut scratch = cfg0.clone();
            for step in 0..t {
                step_noisy_into(rule, &cfg, &noise, &rng, step, &mut scratch)
                    .expect("dimensions checked");
                std::mem::swap(&mut cfg, &mut scratch);
            }
            u64::from(mask.all_ones_in(&cfg))
        })
        .sum();
    let params = ExperimentParams {
        rule: rule.name().unwrap_or("custom").to_string(),
        epsilon,
        l: None,
        t,
        samples,
        window_lo: window.0.to_vec(),
        window_hi: window.1.to_vec(),
        boundary,
    };
    Ok(Estimate::from_hits(hits, samples, master_seed, params))
}

/// Same event under the pure-noise surrogate (`theta = epsilon` regardless
/// of the neighborhood), exploiting that its time-t law is an i.i.d.
/// Bernoulli(epsilon) field: the per-site probability is estimated from
/// samples x |region| independent draws and assembled into the product
/// probability. Direct hit counting would underflow for any region beyond a
/// few sites.
#[derive(Debug, Clone)]
pub struct BaselineEstimate {
    pub epsilon_hat: f64,
    pub ones: u64,
    pub draws: u64,
    pub volume: u64,
    /// -ln of the estimated all-ones probability: volume * ln(1/eps_hat).
    pub minus_log_p: f64,
    /// Delta-method standard error of `minus_log_p`.
    pub std_err: f64,
    pub master_seed: u64,
}

pub fn estimate_product_baseline(
    epsilon: f64,
    region: &[Vec<i64>],
    t: u64,
    samples: u64,
    master_seed: u64,
) -> BaselineEstimate {
    let threshold = Prob64::from_f64(epsilon);
    let volume = region.len() as u64;
    let site_keys: Vec<u64> = region
        .iter()
        .map(|site| {
            let mut h = 0x9e37_79b9_7f4a_7c15u64;
            for &c in site {
                h = mix64(h ^ (c as u64).wrapping_mul(0xff51_afd7_ed55_8ccd));
            }
            h
        })
        .collect();
    let ones: u64 = (0..samples)
        .into_par_iter()
        .map(|replica| {
            let rng = RngSpec::new(master_seed, replica);
            site_keys
                .iter()
                .filter(|&&key| threshold.accepts(rng.site_draw(t, key)))
                .count() as u64
        })
        .sum();
    let draws = samples * volume;
    let epsilon_hat = ones as f64 / draws as f64;
    let (minus_log_p, std_err) = if ones == 0 {
        (f64::INFINITY, f64::INFINITY)
    } else {
        let mlp = volume as f64 * (1.0 / epsilon_hat).ln();
        // se of ln(eps_hat) is se(eps_hat)/eps_hat
        let se = volume as f64
            * ((1.0 - epsilon_hat) / (epsilon_hat * draws as f64)).sqrt();
        (mlp, se)
    };
    BaselineEstimate {
        epsilon_hat,
        ones,
        draws,
        volume,
        minus_log_p,
        std_err,
        master_seed,
    }
}

/// Which estimator feeds a scaling curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingMode {
    /// Run the noisy automaton and count all-ones hits directly.
    Direct,
    /// The i.i.d. product surrogate with per-site aggregation.
    ProductBaseline,
}

/// Assemble the (L, -ln p_hat) table over spheres centered at the origin,
/// with the log-log power-law fit. `t_schedule` gives the horizon per L.
#[allow(clippy::too_many_arguments)]
pub fn scaling_curve(
    rule: &MonotoneRule,
    epsilon: f64,
    l_list: &[i64],
    t_schedule: &[u64],
    samples: u64,
    master_seed: u64,
    mode: ScalingMode,
    min_hits: u64,
) -> Result<ScalingCurve, DropletError> {
    assert_eq!(l_list.len(), t_schedule.len());
    let mut points = Vec::with_capacity(l_list.len());
    for (&l, &t) in l_list.iter().zip(t_schedule) {
        let region = sphere(&vec![0; rule.dimension()], l);
        let point = match mode {
            ScalingMode::Direct => {
                let pad = rule.radius_ceil() * t as i64;
                let lo: Vec<i64> = vec![-(l + pad); rule.dimension()];
                let hi: Vec<i64> = vec![l + pad; rule.dimension()];
                let est = estimate_cylinder_prob(
                    rule,
                    epsilon,
                    &region,
                    t,
                    samples,
                    (&lo, &hi),
                    Boundary::Zeros,
                    master_seed.wrapping_add(mix64(l as u64)),
                )?;
                CurvePoint {
                    l,
                    volume: region.len() as u64,
                    t,
                    minus_log_p: est.minus_log_p(),
                    std_err: est.minus_log_std_err(),
                    hits: est.hits,
                    samples,
                    p_hat: est.p_hat,
                }
            }
            ScalingMode::ProductBaseline => {
                let est = estimate_product_baseline(
                    epsilon,
                    &region,
                    t,
                    samples,
                    master_seed.wrapping_add(mix64(l as u64)),
                );
                CurvePoint {
                    l,
                    volume: est.volume,
                    t,
                    minus_log_p: est.minus_log_p,
                    std_err: est.std_err,
                    hits: est.ones,
                    samples: est.draws,
                    p_hat: (-est.minus_log_p).exp(),
                }
            }
        };
        points.push(point);
    }
    let curve = ScalingCurve::assemble(points, min_hits);
    if curve.fit.is_none() {
        let eligible = curve.eligible_count();
        if eligible < 3 {
            return Err(DropletError::InsufficientHits { eligible });
        }
    }
    Ok(curve)
}

/// One row of an alignment-suppression probe.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AspRow {
    pub volume: u64,
    pub minus_log_p: f64,
    pub std_err: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Empirical alignment-suppression probe: for each region Lambda of the
/// family, estimate the probability that the configuration agrees with
/// `pattern_bit` on Lambda after t noisy steps from all-zeros, and report
/// (|Lambda|, -ln p_hat). The all-ones pattern contrasts eroder rules
/// against the product baseline, whose suppression is exactly linear in
/// the volume.
#[allow(clippy::too_many_arguments)]
pub fn asp_probe(
    rule: &MonotoneRule,
    epsilon: f64,
    pattern_bit: bool,
    lambda_family: &[Vec<Vec<i64>>],
    t: u64,
    samples: u64,
    master_seed: u64,
) -> Result<Vec<AspRow>, DropletError> {
    let mut rows = Vec::new();
    for (k, lambda) in lambda_family.iter().enumerate() {
        if lambda.is_empty() {
            rows.push(AspRow {
                volume: 0,
                minus_log_p: 0.0,
                std_err: 0.0,
                hits: samples,
                samples,
            });
            continue;
        }
        let d = rule.dimension();
        let (mut lo, mut hi) = crate::lattice::cone_window(lambda, d, rule.radius_ceil(), t as i64);
        for a in 0..d {
            lo[a] = lo[a].min(-1);
            hi[a] = hi[a].max(1);
        }
        let cfg0 = Configuration::zeros(&lo, &hi, Boundary::Zeros)?;
        let mask = RegionMask::new(cfg0.layout(), lambda)?;
        let noise = NoiseModel::new(epsilon);
        let seed = master_seed.wrapping_add(mix64(k as u64 + 1));
        let hits: u64 = (0..samples)
            .into_par_iter()
            .map(|replica| {
                let rng = RngSpec::new(seed, replica);
                let mut cfg = cfg0.clone();
                for step in 0..t {
                    cfg = step_noisy(rule, &cfg, &noise, &rng, step).expect("dims checked");
                }
                let agree = if pattern_bit {
                    mask.all_ones_in(&cfg)
                } else {
                    lambda.iter().all(|s| !cfg.get(s))
                };
                u64::from(agree)
            })
            .sum();
        let p_hat = hits as f64 / samples as f64;
        rows.push(AspRow {
            volume: lambda.len() as u64,
            minus_log_p: if hits == 0 { f64::INFINITY } else { -p_hat.ln() },
            std_err: if hits == 0 {
                f64::INFINITY
            } else {
                (p_hat * (1.0 - p_hat) / samples as f64).sqrt() / p_hat
            },
            hits,
            samples,
        });
    }
    Ok(rows)
}

/// Convenience: one noisy trajectory from all-zeros, returning the final
/// configuration. Used by the CLI for SVG dumps.
pub fn run_trajectory(
    rule: &MonotoneRule,
    epsilon: f64,
    t: u64,
    window: (&[i64], &[i64]),
    boundary: Boundary,
    rng: &RngSpec,
) -> Result<Configuration, DropletError> {
    let noise = NoiseModel::new(epsilon);
    let mut cfg = Configuration::zeros(window.0, window.1, boundary)?;
    for step in 0..t {
        cfg = step_noisy(rule, &cfg, &noise, rng, step)?;
    }
    Ok(cfg)
}

/// One stochastic-rule trajectory from all-zeros (for surrogates).
pub fn run_general_trajectory(
    grule: &GeneralStochasticRule,
    t: u64,
    window: (&[i64], &[i64]),
    boundary: Boundary,
    rng: &RngSpec,
) -> Result<Configuration, DropletError> {
    let mut cfg = Configuration::zeros(window.0, window.1, boundary)?;
    for step in 0..t {
        cfg = step_general(grule, &cfg, rng, step)?;
    }
    Ok(cfg)
}

/// Deterministic trajectory helper for erosion experiments.
pub fn deterministic_extinction_time(
    rule: &MonotoneRule,
    initial: &[Vec<i64>],
    window: (&[i64], &[i64]),
    horizon: u64,
) -> Result<Option<u64>, DropletError> {
    let mut cfg = Configuration::from_sites(window.0, window.1, Boundary::Zeros, initial.iter())?;
    for t in 0..=horizon {
        if cfg.count_ones() == 0 {
            return Ok(Some(t));
        }
        cfg = step_det(rule, &cfg)?;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_one_hits_everything() {
        let rule = MonotoneRule::nec();
        let region = sphere(&[0, 0], 1);
        let est = estimate_cylinder_prob(
            &rule,
            1.0,
            &region,
            1,
            200,
            (&[-3, -3], &[3, 3]),
            Boundary::Zeros,
            42,
        )
        .unwrap();
        assert_eq!(est.p_hat, 1.0);
        assert_eq!(est.hits, 200);
    }

    #[test]
    fn window_precondition_enforced() {
        let rule = MonotoneRule::nec();
        let region = sphere(&[0, 0], 2);
        let err = estimate_cylinder_prob(
            &rule,
            0.25,
            &region,
            8,
            10,
            (&[-4, -4], &[4, 4]),
            Boundary::Zeros,
            1,
        );
        assert!(err.is_err(), "window misses the inflated cone");
    }

    #[test]
    fn estimates_are_reproducible_across_pools() {
        let rule = MonotoneRule::nec();
        let region = sphere(&[0, 0], 1);
        let run = || {
            estimate_cylinder_prob(
                &rule,
                0.3,
                &region,
                4,
                500,
                (&[-5, -5], &[5, 5]),
                Boundary::Zeros,
                777,
            )
            .unwrap()
            .hits
        };
        let solo = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(run);
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(run);
        assert_eq!(solo, many);
    }

    #[test]
    fn baseline_matches_exact_product_value() {
        let region = sphere(&[0, 0], 2); // 13 sites
        let est = estimate_product_baseline(0.25, &region, 1, 100_000, 2024);
        let exact = 13.0 * (1.0f64 / 0.25).ln();
        assert!(
            (est.minus_log_p - exact).abs() <= 4.0 * est.std_err,
            "estimate {} vs exact {exact} (se {})",
            est.minus_log_p,
            est.std_err
        );
    }

    #[test]
    fn baseline_curve_fits_square_law() {
        let rule = MonotoneRule::nec();
        let ls: Vec<i64> = (2..=6).collect();
        let ts: Vec<u64> = ls.iter().map(|&l| 16 * l as u64).collect();
        let curve = scaling_curve(
            &rule,
            0.25,
            &ls,
            &ts,
            20_000,
            99,
            ScalingMode::ProductBaseline,
            10,
        )
        .unwrap();
        let fit = curve.fit.expect("baseline points are all eligible");
        assert!(
            (fit.exponent - 2.0).abs() < 0.2,
            "volume-law exponent, got {}",
            fit.exponent
        );
    }

    #[test]
    fn asp_empty_lambda_has_zero_suppression() {
        let rule = MonotoneRule::nec();
        let rows = asp_probe(&rule, 0.25, true, &[vec![]], 2, 50, 7).unwrap();
        assert_eq!(rows[0].minus_log_p, 0.0);
        assert_eq!(rows[0].hits, 50);
    }

    #[test]
    fn pure_noise_density_after_one_step() {
        // identity rule with noise from zeros: ones density ~ eps on a
        // large window after one step
        let rule = MonotoneRule::identity(2);
        let rng = RngSpec::new(4242, 0);
        let noise = NoiseModel::new(0.25);
        let cfg = Configuration::zeros(&[0, 0], &[255, 255], Boundary::Zeros).unwrap();
        let next = step_noisy(&rule, &cfg, &noise, &rng, 0).unwrap();
        let n = 256.0 * 256.0;
        let density = next.count_ones() as f64 / n;
        let se = (0.25 * 0.75 / n).sqrt();
        assert!(
            (density - 0.25).abs() < 4.0 * se,
            "density {density} vs 0.25 (se {se})"
        );
    }
}
