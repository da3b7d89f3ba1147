//! Exact rational arithmetic helpers shared by the geometric code.
//!
//! All geometry in this crate is decided in exact arithmetic: emptiness
//! verdicts and certificate conditions are sign dichotomies, so a single
//! rounding error would flip a conclusion. `Rat` is an arbitrary-precision
//! rational; helpers here keep the call sites readable.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Exact dot product of a rational vector with an integer lattice point.
pub fn dot_rat_int(coeffs: &[Rat], point: &[i64]) -> Rat {
    debug_assert_eq!(coeffs.len(), point.len());
    let mut acc = Rat::zero();
    for (c, &x) in coeffs.iter().zip(point) {
        acc += c * rat_int(x);
    }
    acc
}

pub fn dot_rat_rat(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Sum of squares of the entries.
pub fn norm_squared(v: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for x in v {
        acc += x * x;
    }
    acc
}

/// Least common multiple of the (reduced) denominators of `v`.
pub fn lcm_denominator(v: &[Rat]) -> BigInt {
    let mut l = BigInt::one();
    for x in v {
        let d = x.denom().abs();
        let g = num::integer::gcd(l.clone(), d.clone());
        l = l / g * d;
    }
    l
}

/// Scale a rational vector to a primitive integer vector on the same ray.
pub fn primitive_integer_ray(v: &[Rat]) -> Vec<BigInt> {
    let l = lcm_denominator(v);
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num::integer::gcd(g, x.abs());
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    ints
}

/// Basis of the nullspace `{x in Q^dim : row . x = 0 for every row}` by
/// Gauss-Jordan elimination.
pub fn rational_nullspace(rows: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..dim {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = m[rank][col].clone();
        for v in m[rank].iter_mut() {
            *v /= &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[rank].clone();
                for (v, p) in m[r].iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut x = vec![Rat::zero(); dim];
        x[free] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = -m[r][free].clone();
        }
        basis.push(x);
    }
    basis
}

/// Serialize a `Rat` as a `[numerator, denominator]` pair of decimal strings,
/// so certificates survive JSON round-trips without precision loss.
pub fn serialize_rat<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    let pair = [r.numer().to_string(), r.denom().to_string()];
    pair.serialize(s)
}

pub fn deserialize_rat<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
    let pair: [String; 2] = Deserialize::deserialize(d)?;
    let numer: BigInt = pair[0]
        .parse()
        .map_err(|e| D::Error::custom(format!("bad numerator: {e}")))?;
    let denom: BigInt = pair[1]
        .parse()
        .map_err(|e| D::Error::custom(format!("bad denominator: {e}")))?;
    if denom.is_zero() {
        return Err(D::Error::custom("zero denominator"));
    }
    Ok(Rat::new(numer, denom))
}

pub mod rat_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[String; 2]> = v
            .iter()
            .map(|r| [r.numer().to_string(), r.denom().to_string()])
            .collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let pairs: Vec<[String; 2]> = Deserialize::deserialize(d)?;
        pairs
            .into_iter()
            .map(|p| {
                let numer: BigInt = p[0]
                    .parse()
                    .map_err(|e| D::Error::custom(format!("bad numerator: {e}")))?;
                let denom: BigInt = p[1]
                    .parse()
                    .map_err(|e| D::Error::custom(format!("bad denominator: {e}")))?;
                if denom.is_zero() {
                    return Err(D::Error::custom("zero denominator"));
                }
                Ok(Rat::new(numer, denom))
            })
            .collect()
    }
}
