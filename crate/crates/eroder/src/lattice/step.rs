//! Synchronous updates: deterministic, one-sided-noisy, and general
//! stochastic. All reads target the previous buffer, so a step can be
//! partitioned freely without changing the result.

use super::rng::{Prob32, Prob64, RngSpec};
use super::{Boundary, Configuration, LatticeError};
use crate::rule::{MonotoneRule, Offset};

impl Configuration {
    pub(crate) fn from_words(
        layout: super::Layout,
        boundary: Boundary,
        words: Vec<u64>,
    ) -> Configuration {
        debug_assert_eq!(words.len(), layout.word_count());
        Configuration { layout, boundary, words }
    }
}

// Configuration fields are private to the module tree; re-open them here.
use super::Layout;

/// Bit plane `p[site] = cfg.read(site + offset)`, as raw words in the same
/// layout. Zeros/Ones boundaries go through a word-parallel path; Periodic
/// takes a per-site path (it only appears in small desk experiments).
fn shifted_plane(cfg: &Configuration, offset: &[i64]) -> Vec<u64> {
    let layout = cfg.layout().clone();
    let d = layout.dimension();
    let wpr = layout.words_per_row();
    let row_bits = layout.row_bits() as i64;
    let mut out = vec![0u64; layout.word_count()];

    if cfg.boundary() == Boundary::Periodic {
        for row in 0..layout.rows() {
            let src_row = layout
                .shifted_row(row, &offset[..d - 1], true)
                .expect("periodic rows always resolve");
            for bit in 0..row_bits {
                let src_bit = (bit + offset[d - 1]).rem_euclid(row_bits);
                let idx = src_row * wpr + src_bit as usize / 64;
                if cfg.words()[idx] >> (src_bit as usize % 64) & 1 == 1 {
                    out[row * wpr + bit as usize / 64] |= 1 << (bit as usize % 64);
                }
            }
        }
        return out;
    }

    let fill = cfg.boundary() == Boundary::Ones;
    let fill_word = if fill { !0u64 } else { 0u64 };
    let tail = layout.tail_mask();
    let shift = offset[d - 1];
    for row in 0..layout.rows() {
        let dst = row * wpr;
        match layout.shifted_row(row, &offset[..d - 1], false) {
            None => {
                for w in 0..wpr {
                    out[dst + w] = fill_word;
                }
            }
            Some(src_row) => {
                let src = &cfg.words()[src_row * wpr..(src_row + 1) * wpr];
                // Virtual row: bits outside [0, row_bits) read as the fill.
                let virt = |k: i64| -> u64 {
                    if k < 0 || k >= wpr as i64 {
                        fill_word
                    } else if fill && k as usize == wpr - 1 {
                        src[k as usize] | !tail
                    } else {
                        src[k as usize]
                    }
                };
                for w in 0..wpr {
                    let a = 64 * w as i64 + shift;
                    let q = a.div_euclid(64);
                    let r = a.rem_euclid(64) as u32;
                    out[dst + w] = if r == 0 {
                        virt(q)
                    } else {
                        virt(q) >> r | virt(q + 1) << (64 - r)
                    };
                }
            }
        }
        // Keep invalid tail bits zero.
        out[dst + wpr - 1] &= tail;
    }
    out
}

/// One synchronous deterministic step: every site becomes
/// `f(neighborhood read from the old configuration)`.
pub fn step_det(
    rule: &MonotoneRule,
    cfg: &Configuration,
) -> Result<Configuration, LatticeError> {
    if rule.dimension() != cfg.dimension() {
        return Err(LatticeError::DimensionMismatch {
            rule: rule.dimension(),
            cfg: cfg.dimension(),
        });
    }
    let planes: Vec<Vec<u64>> = rule
        .support()
        .iter()
        .map(|o| shifted_plane(cfg, &o.0))
        .collect();
    let n = cfg.layout().word_count();
    let mut out = vec![0u64; n];
    let mut scratch = vec![0u64; n];
    for set in rule.minimal_one_sets() {
        scratch.copy_from_slice(&planes[set[0]]);
        for &i in &set[1..] {
            for (s, p) in scratch.iter_mut().zip(&planes[i]) {
                *s &= p;
            }
        }
        for (o, s) in out.iter_mut().zip(&scratch) {
            *o |= s;
        }
    }
    Ok(Configuration::from_words(
        cfg.layout().clone(),
        cfg.boundary(),
        out,
    ))
}

/// Totally asymmetric noise: each 0 flips to 1 with probability epsilon,
/// independently; a 1 never flips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub epsilon: f64,
    threshold: Prob32,
}

impl NoiseModel {
    pub fn new(epsilon: f64) -> NoiseModel {
        NoiseModel {
            epsilon,
            threshold: Prob32::from_f64(epsilon),
        }
    }

    pub fn threshold(&self) -> Prob32 {
        self.threshold
    }
}

/// OR a fresh Bernoulli(epsilon) mask into the configuration. The mask does
/// not depend on the state, which is what makes shared-stream couplings
/// monotone in both epsilon and the initial configuration.
pub fn apply_noise(cfg: &mut Configuration, noise: &NoiseModel, rng: &RngSpec, time: u64) {
    let layout: Layout = cfg.layout().clone();
    let wpr = layout.words_per_row();
    let tail = layout.tail_mask();
    let threshold = noise.threshold.0;
    for (idx, w) in cfg.words_mut().iter_mut().enumerate() {
        let mut mask = rng.bernoulli_mask(time, idx as u64, threshold);
        if idx % wpr == wpr - 1 {
            mask &= tail;
        }
        *w |= mask;
    }
}

/// One step of `N_eps D_f`: the deterministic update followed by one-sided
/// noise. `time` keys the random draws for this step.
pub fn step_noisy(
    rule: &MonotoneRule,
    cfg: &Configuration,
    noise: &NoiseModel,
    rng: &RngSpec,
    time: u64,
) -> Result<Configuration, LatticeError> {
    let mut out = step_det(rule, cfg)?;
    apply_noise(&mut out, noise, rng, time);
    Ok(out)
}

/// A stochastic rule given by per-assignment probabilities that the new
/// value is 1. Assignment masks index `theta`: bit k is the value at
/// `support[k]`.
#[derive(Debug, Clone)]
pub struct GeneralStochasticRule {
    dimension: usize,
    support: Vec<Offset>,
    theta: Vec<f64>,
    thresholds: Vec<Prob64>,
}

impl GeneralStochasticRule {
    pub fn new(
        dimension: usize,
        support: Vec<Offset>,
        theta: Vec<f64>,
    ) -> Result<Self, LatticeError> {
        if support.len() > 20 {
            return Err(LatticeError::InvalidWindow(format!(
                "stochastic support of {} offsets is too large",
                support.len()
            )));
        }
        if theta.len() != 1 << support.len() {
            return Err(LatticeError::InvalidWindow(format!(
                "theta table has {} entries, expected {}",
                theta.len(),
                1usize << support.len()
            )));
        }
        for &p in &theta {
            if !(0.0..=1.0).contains(&p) {
                return Err(LatticeError::InvalidWindow(format!(
                    "theta value {p} outside [0,1]"
                )));
            }
        }
        let thresholds = theta.iter().map(|&p| Prob64::from_f64(p)).collect();
        Ok(GeneralStochasticRule { dimension, support, theta, thresholds })
    }

    /// theta = indicator of `rule`: equal in law to the deterministic step.
    pub fn indicator(rule: &MonotoneRule) -> Self {
        let n = rule.support().len();
        let theta = (0..1u32 << n)
            .map(|m| if rule.evaluate_mask(m) { 1.0 } else { 0.0 })
            .collect();
        Self::new(rule.dimension(), rule.support().to_vec(), theta).unwrap()
    }

    /// theta = max(f, epsilon): equal in law to `step_noisy` with that rule.
    pub fn majorating(rule: &MonotoneRule, epsilon: f64) -> Self {
        let n = rule.support().len();
        let theta = (0..1u32 << n)
            .map(|m| if rule.evaluate_mask(m) { 1.0 } else { epsilon })
            .collect();
        Self::new(rule.dimension(), rule.support().to_vec(), theta).unwrap()
    }

    /// theta independent of the neighborhood: the pure-noise surrogate whose
    /// time-t law is an i.i.d. Bernoulli(p) field.
    pub fn pure_noise(dimension: usize, p: f64) -> Self {
        let origin = Offset(vec![0; dimension]);
        Self::new(dimension, vec![origin], vec![p, p]).unwrap()
    }

    pub fn support(&self) -> &[Offset] {
        &self.support
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }
}

/// One synchronous product update: each site becomes 1 with probability
/// `theta(old neighborhood)`, independently across sites.
pub fn step_general(
    grule: &GeneralStochasticRule,
    cfg: &Configuration,
    rng: &RngSpec,
    time: u64,
) -> Result<Configuration, LatticeError> {
    if grule.dimension != cfg.dimension() {
        return Err(LatticeError::DimensionMismatch {
            rule: grule.dimension,
            cfg: cfg.dimension(),
        });
    }
    let layout = cfg.layout().clone();
    let mut out = Configuration::zeros(&layout.lo, &layout.hi, cfg.boundary()).unwrap();
    let d = layout.dimension();
    let mut site = layout.lo.clone();
    loop {
        let mut mask = 0u32;
        for (k, o) in grule.support.iter().enumerate() {
            let neighbor: Vec<i64> = site.iter().zip(&o.0).map(|(a, b)| a + b).collect();
            if cfg.read(&neighbor) {
                mask |= 1 << k;
            }
        }
        let draw = rng.site_draw(time, layout.linear_site_index(&site));
        if grule.thresholds[mask as usize].accepts(draw) {
            out.set(&site, true);
        }
        // Odometer over the window.
        let mut axis = d;
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            site[axis] += 1;
            if site[axis] <= layout.hi[axis] {
                break;
            }
            site[axis] = layout.lo[axis];
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Majoration {
    Holds,
    /// First assignment violating a clause, listed in support order.
    Violation {
        assignment: Vec<bool>,
        theta: f64,
        required: f64,
    },
}

/// Exhaustively check that `grule` majorates `N_eps D_f`: theta = 1 wherever
/// f = 1, and theta >= eps wherever f = 0.
pub fn check_majorates(
    grule: &GeneralStochasticRule,
    f: &MonotoneRule,
    epsilon: f64,
) -> Result<Majoration, LatticeError> {
    if grule.support != f.support() {
        return Err(LatticeError::SupportMismatch);
    }
    let n = f.support().len();
    for mask in 0..1u32 << n {
        let theta = grule.theta[mask as usize];
        let (ok, required) = if f.evaluate_mask(mask) {
            (theta == 1.0, 1.0)
        } else {
            (theta >= epsilon, epsilon)
        };
        if !ok {
            return Ok(Majoration::Violation {
                assignment: (0..n).map(|k| mask >> k & 1 == 1).collect(),
                theta,
                required,
            });
        }
    }
    Ok(Majoration::Holds)
}
