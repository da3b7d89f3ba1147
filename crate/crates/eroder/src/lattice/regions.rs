//! Region builders: spheres, the two spiders, certificate slab unions, and
//! layers. Everything is decided in exact arithmetic (integer squared norms,
//! rational functional values).

use crate::exact::{dot_rat_int, norm_squared, rat_int, Rat};
use crate::geometry::EroderCertificate;

/// Euclidean lattice ball: `{ i : |i - center|^2 <= radius^2 }`.
pub fn sphere(center: &[i64], radius: i64) -> Vec<Vec<i64>> {
    assert!(radius >= 0);
    let d = center.len();
    let r2 = (radius as i128) * (radius as i128);
    let mut out = Vec::new();
    let mut delta = vec![-radius; d];
    'outer: loop {
        let n2: i128 = delta.iter().map(|&c| (c as i128) * (c as i128)).sum();
        if n2 <= r2 {
            out.push(delta.iter().zip(center).map(|(a, b)| a + b).collect());
        }
        let mut k = d;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            delta[k] += 1;
            if delta[k] <= radius {
                break;
            }
            delta[k] = -radius;
        }
    }
    out
}

/// The three-armed NEC spider: the i-axis segment and j-axis segment over
/// [-8L, 4L] plus the antidiagonal i + j = 0 over [-6L, 6L].
pub fn nec_spider(l: i64) -> Vec<Vec<i64>> {
    assert!(l >= 1);
    let mut sites = Vec::new();
    for i in -8 * l..=4 * l {
        sites.push(vec![i, 0]);
    }
    for j in -8 * l..=4 * l {
        sites.push(vec![0, j]);
    }
    for i in -6 * l..=6 * l {
        sites.push(vec![i, -i]);
    }
    sites.sort();
    sites.dedup();
    sites
}

/// The NSMM "spider": a horizontal segment over [-3L, 3L], 6L + 1 sites.
pub fn nsmm_spider(l: i64) -> Vec<Vec<i64>> {
    assert!(l >= 1);
    (-3 * l..=3 * l).map(|i| vec![i, 0]).collect()
}

/// Sites of the initial slab union `x*` inside a window: the union over the
/// certificate's functionals of `{ i : |phi_j(i)| <= 2 rho |phi_j| }`,
/// compared as `phi_j(i)^2 <= 4 rho^2 |phi_j|^2` in exact rationals.
pub fn slab_union_sites(
    cert: &EroderCertificate,
    rho_squared: i128,
    lo: &[i64],
    hi: &[i64],
) -> Vec<Vec<i64>> {
    let d = lo.len();
    let four_rho2 = rat_int(4) * Rat::from_integer(rho_squared.into());
    let bounds: Vec<Rat> = cert
        .functionals
        .iter()
        .map(|f| &four_rho2 * norm_squared(&f.linear))
        .collect();
    let mut out = Vec::new();
    let mut site = lo.to_vec();
    'outer: loop {
        let inside = cert.functionals.iter().zip(&bounds).any(|(f, b)| {
            let v = f.eval_int(&site);
            &v * &v <= *b
        });
        if inside {
            out.push(site.clone());
        }
        let mut k = d;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            site[k] += 1;
            if site[k] <= hi[k] {
                break;
            }
            site[k] = lo[k];
        }
    }
    out
}

/// Sites of the layer `{ i : c1 <= <i, u> <= c2 }` inside a window.
pub fn layer_sites(u: &[i64], c1: &Rat, c2: &Rat, lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    assert!(u.iter().any(|&c| c != 0), "layer direction must be nonzero");
    let d = lo.len();
    let u_rat: Vec<Rat> = u.iter().map(|&c| rat_int(c)).collect();
    let mut out = Vec::new();
    let mut site = lo.to_vec();
    'outer: loop {
        let v = dot_rat_int(&u_rat, &site);
        if *c1 <= v && v <= *c2 {
            out.push(site.clone());
        }
        let mut k = d;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            site[k] += 1;
            if site[k] <= hi[k] {
                break;
            }
            site[k] = lo[k];
        }
    }
    out
}

/// Exact test for `<i, u> >= -sqrt(s) + shift`, with `s >= 0` an integer.
pub fn above_lower_sqrt_bound(dot: i64, shift: i64, s: i128) -> bool {
    // dot - shift >= -sqrt(s)
    let v = (dot - shift) as i128;
    v >= 0 || v * v <= s
}

/// Exact test for `<i, u> <= sqrt(s) + shift`.
pub fn below_upper_sqrt_bound(dot: i64, shift: i64, s: i128) -> bool {
    let v = (dot - shift) as i128;
    v <= 0 || v * v <= s
}
