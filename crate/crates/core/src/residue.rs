//! Exact integer and modular arithmetic.
//!
//! Every modulus is capped so that its square fits in a `u64`. Products of two
//! residues are formed in `u128`, so no intermediate can wrap silently.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A modulus `n >= 1` whose square fits in 64 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Modulus(u64);

impl Modulus {
    /// Largest admissible modulus: `MAX * MAX <= u64::MAX`.
    pub const MAX: u64 = u32::MAX as u64;

    pub fn new(value: u64) -> Result<Self> {
        if value == 0 {
            return Err(Error::ZeroModulus);
        }
        if value.checked_mul(value).is_none() {
            return Err(Error::ModulusTooLarge(value as u128));
        }
        Ok(Modulus(value))
    }

    /// The modulus `factor * self`, checked against the size cap.
    pub fn scaled(self, factor: u64) -> Result<Self> {
        let product = self.0 as u128 * factor as u128;
        u64::try_from(product)
            .map_err(|_| Error::ModulusTooLarge(product))
            .and_then(Modulus::new)
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_even(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// All residues `0..n` in ascending order.
    pub fn residues(self) -> impl DoubleEndedIterator<Item = Residue> {
        (0..self.0).map(move |value| Residue {
            value,
            modulus: self,
        })
    }

    /// Units of `Z_n` in ascending order.
    pub fn units(self) -> impl Iterator<Item = Residue> {
        self.residues()
            .filter(move |r| gcd(r.value as i64, self.0 as i64) == 1)
    }

    #[inline]
    pub(crate) fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub(crate) fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;

    fn try_from(value: u64) -> Result<Self> {
        Modulus::new(value)
    }
}

/// The minimum representative of a class in `Z_n`.
///
/// Ordering compares the value first, then the modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    /// Reduces any `u64` into `[0, n)`.
    pub fn new(value: u64, modulus: Modulus) -> Self {
        Residue {
            value: value % modulus.get(),
            modulus,
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub(crate) fn expect_modulus(self, modulus: Modulus) -> Result<Self> {
        if self.modulus == modulus {
            Ok(self)
        } else {
            Err(Error::ModulusMismatch {
                expected: modulus.get(),
                found: self.modulus.get(),
            })
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

// Serialized as the bare decimal representative; the modulus travels alongside.
impl Serialize for Residue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.value)
    }
}

/// A prime number, validated by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Self> {
        if is_prime(value) {
            Ok(Prime(value))
        } else {
            Err(Error::NotPrime(value))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn divides(self, n: u64) -> bool {
        n.is_multiple_of(self.0)
    }

    /// `Z_p` as a modulus.
    pub fn modulus(self) -> Modulus {
        // Primes accepted here are below 2^64; the square check still applies.
        Modulus::new(self.0).expect("prime modulus exceeds the size cap")
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `x mod n` in `[0, n)`, including for negative `x`.
pub fn canonical_residue(x: i64, n: Modulus) -> Residue {
    let value = (x as i128).rem_euclid(n.get() as i128) as u64;
    Residue { value, modulus: n }
}

/// Nonnegative gcd, with `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(g, x, y)` with `a*x + b*y = g` and `g = gcd(a, b) >= 0`.
///
/// Panics if `g = 2^63`, which happens only for inputs drawn from `{0, i64::MIN}`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    // |x| <= |b| and |y| <= |a| for the iterative algorithm, so these fit.
    let g = i64::try_from(old_r).expect("gcd of 2^63 does not fit in i64");
    (g, old_s as i64, old_t as i64)
}

/// The inverse of `a` modulo `n`.
pub fn mod_inverse(a: i64, n: Modulus) -> Result<Residue> {
    let (g, x, _) = extended_gcd(a, n.get() as i64);
    if g != 1 {
        return Err(Error::NotInvertible { a, n: n.get() });
    }
    Ok(canonical_residue(x, n))
}

pub fn is_coprime(a: i64, b: i64) -> bool {
    gcd(a, b) == 1
}

/// Every `t` in `[0, m)` with `a*t ≡ b (mod m)`, ascending.
///
/// Unsolvable congruences yield an empty vector; `0*t ≡ 0` yields all of `Z_m`.
pub fn solve_linear_congruence(a: i64, b: i64, m: Modulus) -> Vec<Residue> {
    let a = canonical_residue(a, m).value;
    let b = canonical_residue(b, m).value;
    let g = gcd(a as i64, m.get() as i64);
    if !b.is_multiple_of(g) {
        return Vec::new();
    }
    let step = m.get() / g;
    let reduced = Modulus(step);
    let base = match mod_inverse((a / g) as i64, reduced) {
        Ok(inv) => reduced.mul(b / g, inv.value),
        Err(_) => unreachable!("a/g and m/g are coprime"),
    };
    (0..g)
        .map(|i| Residue {
            value: base + i * step,
            modulus: m,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn modulus_bounds() {
        assert_eq!(Modulus::new(0), Err(Error::ZeroModulus));
        assert!(Modulus::new(1).is_ok());
        assert!(Modulus::new(Modulus::MAX).is_ok());
        assert!(matches!(
            Modulus::new(Modulus::MAX + 1),
            Err(Error::ModulusTooLarge(_))
        ));
        assert!(m(Modulus::MAX).scaled(2).is_err());
        assert_eq!(m(12).scaled(5).unwrap().get(), 60);
    }

    #[test]
    fn canonical_residue_examples() {
        assert_eq!(canonical_residue(-18, m(5)).value(), 2);
        assert_eq!(canonical_residue(0, m(7)).value(), 0);
        assert_eq!(canonical_residue(29, m(12)).value(), 5);
        assert_eq!(canonical_residue(i64::MIN, m(3)).value(), 1);
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(6, 12), 6);
        assert_eq!(gcd(0, -9), 9);
        assert_eq!(gcd(42, 60), 6);
        assert_eq!(gcd(0, 0), 0);
    }

    #[test]
    fn extended_gcd_examples() {
        let (g, x, y) = extended_gcd(12, 5);
        assert_eq!(g, 1);
        assert_eq!(12 * x + 5 * y, 1);
        assert_eq!(extended_gcd(4, 12), (4, 1, 0));
        assert_eq!(extended_gcd(2, 5), (1, -2, 1));
        let (g, x, y) = extended_gcd(-4, 6);
        assert_eq!(g, 2);
        assert_eq!(-4 * x + 6 * y, 2);
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(12, m(5)).unwrap().value(), 3);
        assert_eq!(mod_inverse(1, m(9)).unwrap().value(), 1);
        assert_eq!(mod_inverse(7, m(12)).unwrap().value(), 7);
        assert_eq!(
            mod_inverse(4, m(12)),
            Err(Error::NotInvertible { a: 4, n: 12 })
        );
    }

    #[test]
    fn coprimality() {
        assert!(is_coprime(2 * 12, 5));
        assert!(is_coprime(1, 1000));
        assert!(!is_coprime(4, 6));
    }

    #[test]
    fn linear_congruence_examples() {
        let values = |v: Vec<Residue>| v.into_iter().map(Residue::value).collect::<Vec<_>>();
        assert_eq!(values(solve_linear_congruence(10, -2, m(2))), vec![0, 1]);
        assert_eq!(values(solve_linear_congruence(1, 17, m(5))), vec![2]);
        assert_eq!(values(solve_linear_congruence(3, 6, m(9))), vec![2, 5, 8]);
        assert!(solve_linear_congruence(2, 1, m(4)).is_empty());
        assert_eq!(solve_linear_congruence(0, 0, m(6)).len(), 6);
        assert!(solve_linear_congruence(0, 3, m(6)).is_empty());
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(Prime::new(4), Err(Error::NotPrime(4)));
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert!(is_prime(4_294_967_291));
    }

    #[test]
    fn units_of_twelve() {
        let units: Vec<u64> = m(12).units().map(Residue::value).collect();
        assert_eq!(units, vec![1, 5, 7, 11]);
    }
}
