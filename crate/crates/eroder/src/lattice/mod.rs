//! Finite lattice windows and their synchronous evolution.

pub mod io;
pub mod regions;
pub mod rng;
pub mod step;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rule::Offset;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("rule dimension {rule} does not match configuration dimension {cfg}")]
    DimensionMismatch { rule: usize, cfg: usize },
    #[error("site {0:?} lies outside the window")]
    OutOfWindow(Vec<i64>),
    #[error("stochastic rule support does not match the reference rule support")]
    SupportMismatch,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
}

/// How reads outside the window resolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Zeros,
    Ones,
    Periodic,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Zeros => write!(f, "zeros"),
            Boundary::Ones => write!(f, "ones"),
            Boundary::Periodic => write!(f, "periodic"),
        }
    }
}

/// Geometry of a window: inclusive per-axis bounds, with bits packed along
/// the last axis in 64-bit words. The packing is invisible semantically;
/// the naive reference in the tests pins that down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    rows: usize,
    row_bits: usize,
    words_per_row: usize,
}

impl Layout {
    pub fn new(lo: &[i64], hi: &[i64]) -> Result<Layout, LatticeError> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(LatticeError::InvalidWindow(
                "bounds must be non-empty and of equal dimension".into(),
            ));
        }
        for k in 0..lo.len() {
            if lo[k] > hi[k] {
                return Err(LatticeError::InvalidWindow(format!(
                    "axis {k} has lo {} > hi {}",
                    lo[k], hi[k]
                )));
            }
        }
        let d = lo.len();
        let mut rows = 1usize;
        for k in 0..d - 1 {
            rows = rows
                .checked_mul((hi[k] - lo[k] + 1) as usize)
                .ok_or_else(|| LatticeError::InvalidWindow("window overflows".into()))?;
        }
        let row_bits = (hi[d - 1] - lo[d - 1] + 1) as usize;
        Ok(Layout {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            rows,
            row_bits,
            words_per_row: row_bits.div_ceil(64),
        })
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn row_bits(&self) -> usize {
        self.row_bits
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    pub fn word_count(&self) -> usize {
        self.rows * self.words_per_row
    }

    pub fn extent(&self, axis: usize) -> i64 {
        self.hi[axis] - self.lo[axis] + 1
    }

    pub fn num_sites(&self) -> u64 {
        (0..self.dimension()).map(|k| self.extent(k) as u64).product()
    }

    /// Mask of valid bits in the last word of a row.
    pub fn tail_mask(&self) -> u64 {
        let r = self.row_bits % 64;
        if r == 0 {
            !0
        } else {
            (1u64 << r) - 1
        }
    }

    pub fn contains(&self, site: &[i64]) -> bool {
        site.len() == self.dimension()
            && site
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(&c, (&l, &h))| l <= c && c <= h)
    }

    /// Row index from the first d-1 coordinates; last axis varies fastest.
    pub fn row_of(&self, site: &[i64]) -> usize {
        let d = self.dimension();
        let mut row = 0usize;
        for k in 0..d - 1 {
            row = row * self.extent(k) as usize + (site[k] - self.lo[k]) as usize;
        }
        row
    }

    pub fn bit_of(&self, site: &[i64]) -> usize {
        let d = self.dimension();
        (site[d - 1] - self.lo[d - 1]) as usize
    }

    /// Inverse of `row_of`: the first d-1 coordinates of a row.
    pub fn row_prefix(&self, mut row: usize) -> Vec<i64> {
        let d = self.dimension();
        let mut prefix = vec![0i64; d - 1];
        for k in (0..d - 1).rev() {
            let e = self.extent(k) as usize;
            prefix[k] = self.lo[k] + (row % e) as i64;
            row /= e;
        }
        prefix
    }

    /// Row index of `prefix + delta`, or None when it leaves the window.
    /// With `wrap`, coordinates wrap around instead.
    pub fn shifted_row(&self, row: usize, delta: &[i64], wrap: bool) -> Option<usize> {
        let d = self.dimension();
        if d == 1 {
            return Some(0);
        }
        let prefix = self.row_prefix(row);
        let mut out = 0usize;
        for k in 0..d - 1 {
            let e = self.extent(k);
            let mut c = prefix[k] + delta[k];
            if c < self.lo[k] || c > self.hi[k] {
                if !wrap {
                    return None;
                }
                c = self.lo[k] + (c - self.lo[k]).rem_euclid(e);
            }
            out = out * e as usize + (c - self.lo[k]) as usize;
        }
        Some(out)
    }

    pub fn linear_site_index(&self, site: &[i64]) -> u64 {
        (self.row_of(site) as u64) * self.row_bits as u64 + self.bit_of(site) as u64
    }
}

/// A finite bit window over `Z^d` with an explicit boundary convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    layout: Layout,
    boundary: Boundary,
    words: Vec<u64>,
}

impl Configuration {
    pub fn zeros(lo: &[i64], hi: &[i64], boundary: Boundary) -> Result<Self, LatticeError> {
        let layout = Layout::new(lo, hi)?;
        let words = vec![0u64; layout.word_count()];
        Ok(Configuration { layout, boundary, words })
    }

    pub fn from_sites<'a, I>(
        lo: &[i64],
        hi: &[i64],
        boundary: Boundary,
        sites: I,
    ) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = &'a Vec<i64>>,
    {
        let mut cfg = Self::zeros(lo, hi, boundary)?;
        for site in sites {
            if !cfg.layout.contains(site) {
                return Err(LatticeError::OutOfWindow(site.clone()));
            }
            cfg.set(site, true);
        }
        Ok(cfg)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn dimension(&self) -> usize {
        self.layout.dimension()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    /// Value at a site inside the window.
    pub fn get(&self, site: &[i64]) -> bool {
        assert!(self.layout.contains(site), "site {site:?} outside window");
        let row = self.layout.row_of(site);
        let bit = self.layout.bit_of(site);
        self.words[row * self.layout.words_per_row + bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn set(&mut self, site: &[i64], value: bool) {
        assert!(self.layout.contains(site), "site {site:?} outside window");
        let row = self.layout.row_of(site);
        let bit = self.layout.bit_of(site);
        let w = &mut self.words[row * self.layout.words_per_row + bit / 64];
        if value {
            *w |= 1 << (bit % 64);
        } else {
            *w &= !(1 << (bit % 64));
        }
    }

    /// Value at any lattice site, resolving out-of-window reads per the
    /// boundary convention.
    pub fn read(&self, site: &[i64]) -> bool {
        if self.layout.contains(site) {
            return self.get(site);
        }
        match self.boundary {
            Boundary::Zeros => false,
            Boundary::Ones => true,
            Boundary::Periodic => {
                let wrapped: Vec<i64> = site
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| {
                        self.layout.lo[k]
                            + (c - self.layout.lo[k]).rem_euclid(self.layout.extent(k))
                    })
                    .collect();
                self.get(&wrapped)
            }
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_all_ones(&self) -> bool {
        self.count_ones() == self.layout.num_sites()
    }

    /// Sitewise partial order; windows must agree.
    pub fn le(&self, other: &Configuration) -> bool {
        self.layout == other.layout
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let wpr = self.layout.words_per_row;
        self.words.iter().enumerate().flat_map(move |(idx, &w)| {
            let row = idx / wpr;
            let base_bit = (idx % wpr) * 64;
            let mut bits = w;
            let mut out = Vec::new();
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let mut site = self.layout.row_prefix(row);
                site.push(self.layout.lo[self.dimension() - 1] + (base_bit + b) as i64);
                out.push(site);
            }
            out.into_iter()
        })
    }
}

/// Precompiled word masks for "is this site set" checks over a region.
#[derive(Debug, Clone)]
pub struct RegionMask {
    masks: Vec<(usize, u64)>,
    pub num_sites: usize,
}

impl RegionMask {
    pub fn new(layout: &Layout, sites: &[Vec<i64>]) -> Result<Self, LatticeError> {
        let mut by_word: std::collections::BTreeMap<usize, u64> = Default::default();
        for site in sites {
            if !layout.contains(site) {
                return Err(LatticeError::OutOfWindow(site.clone()));
            }
            let row = layout.row_of(site);
            let bit = layout.bit_of(site);
            *by_word.entry(row * layout.words_per_row + bit / 64).or_insert(0) |=
                1 << (bit % 64);
        }
        Ok(RegionMask {
            masks: by_word.into_iter().collect(),
            num_sites: sites.len(),
        })
    }

    /// True when every region site is 1 in `cfg`.
    pub fn all_ones_in(&self, cfg: &Configuration) -> bool {
        self.masks
            .iter()
            .all(|&(w, m)| cfg.words()[w] & m == m)
    }

    /// True when `cfg` agrees with `pattern` (bits for each region site).
    pub fn matches_pattern(&self, cfg: &Configuration, pattern: &RegionMask) -> bool {
        debug_assert_eq!(self.masks.len(), pattern.masks.len());
        self.masks.iter().zip(&pattern.masks).all(|(&(w, m), &(pw, pm))| {
            debug_assert_eq!(w, pw);
            cfg.words()[w] & m == pm
        })
    }
}

/// Window bounds for verifying a claim about `region` after `t` steps: the
/// region's bounding box inflated per axis by the rule's t-step dependency
/// reach, so the region's law on the window equals its law on the infinite
/// lattice. `reach` is `MonotoneRule::axis_reach`; the sharp per-axis cone
/// never exceeds the symmetric `t * ceil(rho)` inflation and is much
/// smaller for one-sided supports.
pub fn cone_window(
    region: &[Vec<i64>],
    reach: &[(i64, i64)],
    t: i64,
) -> (Vec<i64>, Vec<i64>) {
    let dimension = reach.len();
    let mut lo = vec![i64::MAX; dimension];
    let mut hi = vec![i64::MIN; dimension];
    for site in region {
        for k in 0..dimension {
            lo[k] = lo[k].min(site[k]);
            hi[k] = hi[k].max(site[k]);
        }
    }
    for k in 0..dimension {
        lo[k] -= reach[k].0 * t;
        hi[k] += reach[k].1 * t;
    }
    (lo, hi)
}

/// Check that `window` contains `region` inflated by the t-step dependency
/// cone.
pub fn window_respects_cone(
    layout: &Layout,
    region: &[Vec<i64>],
    reach: &[(i64, i64)],
    t: i64,
) -> Result<(), LatticeError> {
    let (lo, hi) = cone_window(region, reach, t);
    for k in 0..layout.dimension() {
        if layout.lo[k] > lo[k] || layout.hi[k] < hi[k] {
            return Err(LatticeError::WindowTooSmall(format!(
                "axis {k}: need [{}, {}], window has [{}, {}] (region inflated by the {t}-step cone)",
                lo[k], hi[k], layout.lo[k], layout.hi[k]
            )));
        }
    }
    Ok(())
}

pub use regions::{layer_sites, nec_spider, nsmm_spider, slab_union_sites, sphere};
pub use rng::{Prob32, Prob64, RngSpec};
pub use step::{
    check_majorates, step_det, step_general, step_noisy, GeneralStochasticRule, Majoration,
    NoiseModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Offset2 {
    pub x: i64,
    pub y: i64,
}

impl From<&Offset> for Offset2 {
    fn from(o: &Offset) -> Self {
        assert_eq!(o.0.len(), 2);
        Offset2 { x: o.0[0], y: o.0[1] }
    }
}
