//! Brute-force ground truth.
//!
//! Everything here is decided by evaluating maps at every point. Nothing calls
//! into the algebraic predicates of [`crate::affine`] or [`crate::lift`], so a
//! bug there cannot confirm itself through the oracle.

use crate::affine::{AffineMap, Quasipolarity};
use crate::error::{Error, Result};
use crate::residue::{gcd, Modulus, Prime, Residue};

pub const DEFAULT_ORACLE_CAP: u64 = 5000;

fn check_cap(n: u64, cap: u64) -> Result<()> {
    if n > cap {
        Err(Error::OracleCapExceeded { n, cap })
    } else {
        Ok(())
    }
}

#[inline]
fn eval(n: u64, u: u64, v: u64, x: u64) -> u64 {
    ((v as u128 * x as u128 + u as u128) % n as u128) as u64
}

/// `p(p(x)) = x` and `p(x) ≠ x` at every point of `Z_n`.
fn pointwise_quasipolarity(n: u64, u: u64, v: u64) -> bool {
    (0..n).all(|x| {
        let y = eval(n, u, v, x);
        y != x && eval(n, u, v, y) == x
    })
}

fn units(n: u64) -> impl Iterator<Item = u64> {
    (0..n).filter(move |&v| gcd(v as i64, n as i64) == 1)
}

fn to_map(n: Modulus, u: u64, v: u64) -> AffineMap {
    AffineMap::new(n, u as i64, v as i64).expect("oracle only emits unit multipliers")
}

/// Every quasipolarity of `Z_n`, by exhaustive evaluation, ordered by `(v, u)`.
pub fn brute_quasipolarities(n: Modulus, cap: u64) -> Result<Vec<AffineMap>> {
    check_cap(n.get(), cap)?;
    let size = n.get();
    Ok(units(size)
        .flat_map(|v| (0..size).map(move |u| (u, v)))
        .filter(|&(u, v)| pointwise_quasipolarity(size, u, v))
        .map(|(u, v)| to_map(n, u, v))
        .collect())
}

/// Every quasipolarity `q` of `Z_πn` with `ι ∘ p = q ∘ ι`, ordered by `(r, w)`.
pub fn brute_lifts(p: &Quasipolarity, pi: Prime, cap: u64) -> Result<Vec<AffineMap>> {
    let n = p.modulus().get();
    let big_modulus = p.modulus().scaled(pi.get())?;
    let big = big_modulus.get();
    check_cap(big, cap)?;
    let (u, v) = (p.u().value(), p.v().value());
    let step = pi.get();

    let commutes = |w: u64, r: u64| {
        (0..n).all(|x| (step * eval(n, u, v, x)) % big == eval(big, w, r, step * x))
    };
    Ok(units(big)
        .flat_map(|r| (0..big).map(move |w| (w, r)))
        .filter(|&(w, r)| commutes(w, r) && pointwise_quasipolarity(big, w, r))
        .map(|(w, r)| to_map(big_modulus, w, r))
        .collect())
}

/// Every translation `u` making `e^u.v` a quasipolarity of `Z_n`.
pub fn brute_admissible_u(n: Modulus, v: Residue, cap: u64) -> Result<Vec<Residue>> {
    check_cap(n.get(), cap)?;
    let v = v.value();
    let size = n.get();
    let square = (v as u128 * v as u128 % size as u128) as u64;
    if square != 1 % size {
        return Err(Error::NotAnInvolution { v, n: size });
    }
    Ok((0..size)
        .filter(|&u| pointwise_quasipolarity(size, u, v))
        .map(|u| Residue::new(u, n))
        .collect())
}
