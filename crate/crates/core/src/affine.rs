//! The affine group `Z_n ⋊ Z_n^×` acting on `Z_n` by `e^u.v(x) = v*x + u`.
//!
//! Predicates here use algebraic criteria. Pointwise re-derivations of the
//! same predicates live in [`crate::oracle`] and must agree with these.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::residue::{canonical_residue, gcd, solve_linear_congruence, Modulus, Residue};

/// The map `x ↦ v*x + u` on `Z_n`, with `v` a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineMap {
    modulus: Modulus,
    translation: Residue,
    multiplier: Residue,
}

impl AffineMap {
    /// Builds `e^u.v` on `Z_n`, reducing `u` and `v` to their minimum representatives.
    pub fn new(n: Modulus, u: i64, v: i64) -> Result<Self> {
        let multiplier = canonical_residue(v, n);
        if gcd(multiplier.value() as i64, n.get() as i64) != 1 {
            return Err(Error::NotAUnit { v, n: n.get() });
        }
        Ok(AffineMap {
            modulus: n,
            translation: canonical_residue(u, n),
            multiplier,
        })
    }

    pub(crate) fn from_parts(n: Modulus, u: u64, v: u64) -> Result<Self> {
        AffineMap::new(n, (u % n.get()) as i64, (v % n.get()) as i64)
    }

    pub fn identity(n: Modulus) -> Self {
        AffineMap {
            modulus: n,
            translation: Residue::new(0, n),
            multiplier: Residue::new(1, n),
        }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// The translation part `u`.
    #[inline]
    pub fn u(&self) -> Residue {
        self.translation
    }

    /// The multiplier `v`.
    #[inline]
    pub fn v(&self) -> Residue {
        self.multiplier
    }

    #[inline]
    pub(crate) fn eval(&self, x: u64) -> u64 {
        let n = self.modulus;
        n.add(n.mul(self.multiplier.value(), x), self.translation.value())
    }

    pub fn apply(&self, x: Residue) -> Result<Residue> {
        let x = x.expect_modulus(self.modulus)?;
        Ok(Residue::new(self.eval(x.value()), self.modulus))
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus.get(),
                found: other.modulus.get(),
            });
        }
        let n = self.modulus;
        let (vp, up) = (self.multiplier.value(), self.translation.value());
        let (vq, uq) = (other.multiplier.value(), other.translation.value());
        Ok(AffineMap {
            modulus: n,
            translation: Residue::new(n.add(n.mul(vp, uq), up), n),
            multiplier: Residue::new(n.mul(vp, vq), n),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.translation.value() == 0 && self.multiplier.value() == 1 % self.modulus.get()
    }

    /// `v² ≡ 1` and `u(v+1) ≡ 0 (mod n)`.
    pub fn is_involution(&self) -> bool {
        let n = self.modulus;
        let (u, v) = (self.translation.value(), self.multiplier.value());
        n.mul(v, v) == 1 % n.get() && n.mul(u, v + 1) == 0
    }

    /// Solutions of `(v-1)x ≡ -u (mod n)`, ascending.
    pub fn fixed_points(&self) -> Vec<Residue> {
        let v = self.multiplier.value() as i64;
        let u = self.translation.value() as i64;
        solve_linear_congruence(v - 1, -u, self.modulus)
    }

    /// An involution without fixed points.
    pub fn is_quasipolarity(&self) -> bool {
        // (v-1)x ≡ -u is unsolvable iff gcd(v-1, n) does not divide u.
        let g = gcd(
            self.multiplier.value() as i64 - 1,
            self.modulus.get() as i64,
        );
        self.is_involution() && !self.translation.value().is_multiple_of(g)
    }

    /// The pointwise image `{ p(x) : x ∈ set }`.
    pub fn image_of_set(&self, set: &BTreeSet<Residue>) -> Result<BTreeSet<Residue>> {
        set.iter().map(|&x| self.apply(x)).collect()
    }
}

impl Ord for AffineMap {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.modulus, self.multiplier, self.translation).cmp(&(
            other.modulus,
            other.multiplier,
            other.translation,
        ))
    }
}

impl PartialOrd for AffineMap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "e^{}.{} mod {}",
            self.translation, self.multiplier, self.modulus
        )
    }
}

/// Parses `e^u.v mod n`, e.g. `e^2.5 mod 12`.
impl FromStr for AffineMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::parse(s, reason);
        let body = s
            .trim()
            .strip_prefix("e^")
            .ok_or_else(|| fail("expected a leading `e^`"))?;
        let (map, modulus) = body
            .split_once("mod")
            .ok_or_else(|| fail("expected `mod n`"))?;
        let (u, v) = map
            .trim()
            .split_once('.')
            .ok_or_else(|| fail("expected `u.v`"))?;
        let int = |t: &str| t.trim().parse::<i64>().map_err(|e| fail(&e.to_string()));
        let n = modulus
            .trim()
            .parse::<u64>()
            .map_err(|e| fail(&e.to_string()))?;
        AffineMap::new(Modulus::new(n)?, int(u)?, int(v)?)
    }
}

/// A validated fixed-point-free affine involution, with its defect `k = (v²-1)/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quasipolarity {
    map: AffineMap,
    defect_k: u64,
}

impl Quasipolarity {
    pub fn new(map: AffineMap) -> Result<Self> {
        if !map.is_quasipolarity() {
            return Err(Error::NotAQuasipolarity(map.to_string()));
        }
        let defect_k = involution_defect_k(map.modulus, map.multiplier)?;
        Ok(Quasipolarity { map, defect_k })
    }

    pub fn defect_k(&self) -> u64 {
        self.defect_k
    }

    pub fn as_map(&self) -> &AffineMap {
        &self.map
    }
}

impl Deref for Quasipolarity {
    type Target = AffineMap;

    fn deref(&self) -> &AffineMap {
        &self.map
    }
}

impl From<Quasipolarity> for AffineMap {
    fn from(q: Quasipolarity) -> AffineMap {
        q.map
    }
}

impl TryFrom<AffineMap> for Quasipolarity {
    type Error = Error;

    fn try_from(map: AffineMap) -> Result<Self> {
        Quasipolarity::new(map)
    }
}

impl fmt::Display for Quasipolarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.map.fmt(f)
    }
}

fn require_involution(n: Modulus, v: Residue) -> Result<Residue> {
    let v = v.expect_modulus(n)?;
    if n.mul(v.value(), v.value()) != 1 % n.get() {
        return Err(Error::NotAnInvolution {
            v: v.value(),
            n: n.get(),
        });
    }
    Ok(v)
}

/// The exact integer `(v² - 1)/n` for the minimum representative `v`.
///
/// On `Z_1` the only class is represented by 0 but stands for 1; its defect is 0.
pub fn involution_defect_k(n: Modulus, v: Residue) -> Result<u64> {
    let v = require_involution(n, v)?;
    if n.get() == 1 {
        return Ok(0);
    }
    let square = v.value() as u128 * v.value() as u128;
    Ok(((square - 1) / n.get() as u128) as u64)
}

/// The translation `n / gcd(v+1, n)`, reduced mod `n`.
pub fn canonical_u(n: Modulus, v: Residue) -> Result<Residue> {
    let v = require_involution(n, v)?;
    let g = gcd(v.value() as i64 + 1, n.get() as i64);
    Ok(Residue::new(n.get() / g, n))
}

/// Whether some translation turns the involution `r` into a quasipolarity of `Z_m`:
/// `2 * m/gcd(r+1, m) == gcd(r-1, m)`.
///
/// When true, `e^{m/gcd(r+1,m)}.r` is one such quasipolarity.
pub fn quasipolarity_admissible(m: Modulus, r: Residue) -> Result<bool> {
    let r = require_involution(m, r)?;
    let plus = gcd(r.value() as i64 + 1, m.get() as i64);
    let minus = gcd(r.value() as i64 - 1, m.get() as i64);
    Ok(2 * (m.get() / plus) == minus)
}

/// All quasipolarities of `Z_n`, ordered by `(v, u)`.
pub fn enumerate_quasipolarities(n: Modulus) -> Vec<Quasipolarity> {
    let mut out = Vec::new();
    for v in n.units() {
        if n.mul(v.value(), v.value()) != 1 % n.get() {
            continue;
        }
        for u in n.residues() {
            let map = AffineMap {
                modulus: n,
                translation: u,
                multiplier: v,
            };
            if let Ok(q) = Quasipolarity::new(map) {
                out.push(q);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn e(u: i64, v: i64, n: u64) -> AffineMap {
        AffineMap::new(m(n), u, v).unwrap()
    }

    fn r(x: u64, n: u64) -> Residue {
        Residue::new(x, m(n))
    }

    fn set(xs: &[u64], n: u64) -> BTreeSet<Residue> {
        xs.iter().map(|&x| r(x, n)).collect()
    }

    #[test]
    fn construction() {
        let p = e(2, 5, 12);
        assert_eq!((p.u().value(), p.v().value()), (2, 5));
        assert!(e(0, 1, 9).is_identity());
        assert_eq!(
            AffineMap::new(m(12), 0, 4),
            Err(Error::NotAUnit { v: 4, n: 12 })
        );
        let q = e(-10, -7, 12);
        assert_eq!((q.u().value(), q.v().value()), (2, 5));
    }

    #[test]
    fn apply_examples() {
        assert_eq!(e(2, 5, 12).apply(r(3, 12)).unwrap().value(), 5);
        assert_eq!(e(4, 17, 24).apply(r(6, 24)).unwrap().value(), 10);
        assert_eq!(AffineMap::identity(m(7)).apply(r(4, 7)).unwrap().value(), 4);
        assert_eq!(
            e(2, 5, 12).apply(r(3, 24)),
            Err(Error::ModulusMismatch {
                expected: 12,
                found: 24
            })
        );
    }

    #[test]
    fn compose_examples() {
        let p = e(2, 5, 12);
        assert!(p.compose(&p).unwrap().is_identity());
        let q = e(1, 11, 12);
        assert_eq!(AffineMap::identity(m(12)).compose(&q).unwrap(), q);
        assert_eq!(e(6, 1, 12).compose(&q).unwrap(), e(7, 11, 12));
        assert!(p.compose(&e(0, 1, 24)).is_err());
    }

    #[test]
    fn involutions_and_fixed_points() {
        assert!(e(2, 5, 12).is_involution());
        assert!(AffineMap::identity(m(12)).is_involution());
        assert!(!e(1, 1, 12).is_involution());

        assert!(e(2, 5, 12).fixed_points().is_empty());
        assert_eq!(AffineMap::identity(m(5)).fixed_points().len(), 5);
        let fixed = e(4, 5, 24).fixed_points();
        assert!(!fixed.is_empty());
        for x in fixed {
            assert_eq!(e(4, 5, 24).apply(x).unwrap(), x);
        }
    }

    #[test]
    fn quasipolarity_predicate() {
        assert!(e(2, 5, 12).is_quasipolarity());
        assert!(e(4, 17, 24).is_quasipolarity());
        assert!(!AffineMap::identity(m(12)).is_quasipolarity());
        assert!(!e(3, 5, 12).is_quasipolarity());
        assert!(matches!(
            Quasipolarity::new(e(4, 5, 24)),
            Err(Error::NotAQuasipolarity(_))
        ));
    }

    #[test]
    fn defect_examples() {
        assert_eq!(involution_defect_k(m(12), r(5, 12)).unwrap(), 2);
        assert_eq!(involution_defect_k(m(10), r(1, 10)).unwrap(), 0);
        assert_eq!(involution_defect_k(m(24), r(17, 24)).unwrap(), 12);
        assert_eq!(involution_defect_k(m(12), r(7, 12)).unwrap(), (49 - 1) / 12);
        assert_eq!(
            involution_defect_k(m(12), r(3, 12)),
            Err(Error::NotAnInvolution { v: 3, n: 12 })
        );
        let q = Quasipolarity::new(e(2, 5, 12)).unwrap();
        assert_eq!(q.defect_k(), 2);
    }

    #[test]
    fn canonical_u_examples() {
        assert_eq!(canonical_u(m(12), r(5, 12)).unwrap().value(), 2);
        assert_eq!(canonical_u(m(12), r(11, 12)).unwrap().value(), 1);
        // 60/gcd(30, 60) = 2. The lift e^10.29 of e^2.5 uses w = 5·2 instead,
        // and both translations give quasipolarities.
        assert_eq!(canonical_u(m(60), r(29, 60)).unwrap().value(), 2);
        assert!(e(2, 29, 60).is_quasipolarity() && e(10, 29, 60).is_quasipolarity());
        assert!(e(1, 11, 12).is_quasipolarity());
        assert!(canonical_u(m(12), r(2, 12)).is_err());
    }

    #[test]
    fn admissibility_examples() {
        assert!(quasipolarity_admissible(m(24), r(17, 24)).unwrap());
        assert!(quasipolarity_admissible(m(60), r(29, 60)).unwrap());
        assert!(quasipolarity_admissible(m(12), r(1, 12)).unwrap());
        assert_eq!(canonical_u(m(12), r(1, 12)).unwrap().value(), 6);
        // 7 mod 12: gcd(8,12)=4, gcd(6,12)=6, and 2*3 == 6.
        assert!(quasipolarity_admissible(m(12), r(7, 12)).unwrap());
        // 5 mod 24: gcd(6,24)=6 so 2*4 = 8 but gcd(4,24) = 4.
        assert!(!quasipolarity_admissible(m(24), r(5, 24)).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let twelve = enumerate_quasipolarities(m(12));
        assert_eq!(twelve.len(), 12);
        for (u, v) in [(2, 5), (6, 1), (1, 11)] {
            assert!(twelve.iter().any(|q| **q == e(u, v, 12)));
        }
        let keys: Vec<_> = twelve.iter().map(|q| (q.v(), q.u())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);

        let two = enumerate_quasipolarities(m(2));
        assert_eq!(two.len(), 1);
        assert_eq!(*two[0], e(1, 1, 2));
        assert!(enumerate_quasipolarities(m(7)).is_empty());
        assert!(enumerate_quasipolarities(m(1)).is_empty());
    }

    #[test]
    fn image_examples() {
        let p = e(2, 5, 12);
        let image = p.image_of_set(&set(&[0, 3, 4, 7, 8, 9], 12)).unwrap();
        assert_eq!(image, set(&[1, 2, 5, 6, 10, 11], 12));
        assert!(p.image_of_set(&BTreeSet::new()).unwrap().is_empty());
        let d = set(&[1, 4, 6], 12);
        assert_eq!(AffineMap::identity(m(12)).image_of_set(&d).unwrap(), d);
    }

    #[test]
    fn rendering_round_trip() {
        let p = e(2, 5, 12);
        assert_eq!(p.to_string(), "e^2.5 mod 12");
        assert_eq!("e^2.5 mod 12".parse::<AffineMap>().unwrap(), p);
        assert_eq!(" e^14. 17  mod 12 ".parse::<AffineMap>().unwrap(), p);
        assert!("e^2.4 mod 12".parse::<AffineMap>().is_err());
        assert!("2.5 mod 12".parse::<AffineMap>().is_err());
        assert!("e^2.5".parse::<AffineMap>().is_err());
        assert!("e^2.5 mod 0".parse::<AffineMap>().is_err());
    }
}
