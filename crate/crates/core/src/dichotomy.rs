//! Marked strong dichotomies of `Z_2k`.
//!
//! A subset `D` is a marked strong dichotomy when exactly one affine map `p`
//! satisfies `p(D) = Z_2k \ D`; that map is its polarity. If a quasipolarity
//! `p` exchanges `D` with its complement, `D` contains exactly one point of
//! every orbit `{x, p(x)}`. So the candidates for a given `p` are the `2^k`
//! orbit transversals rather than all `2^2k` subsets, and only uniqueness has
//! to be checked against the rest of the affine group.
//!
//! Search cost for `dichotomies_with_polarity` on `Z_n` is about
//! `2^(n/2) · n·φ(n)` map tests, which is why `n` is capped (default 32).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::affine::{AffineMap, Quasipolarity};
use crate::error::{Error, Result};
use crate::lift::{lift_quasipolarity, LiftCertificate, LiftReport};
use crate::residue::{Modulus, Prime, Residue};

pub const DEFAULT_MODULUS_CAP: u64 = 32;

/// Largest modulus the transversal search accepts regardless of cap: the
/// orbit choice is a 64-bit mask.
const TRANSVERSAL_LIMIT: u64 = 126;

/// A subset of `Z_2k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dichotomy {
    modulus: Modulus,
    members: BTreeSet<Residue>,
}

impl Dichotomy {
    pub fn new(modulus: Modulus, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        if !modulus.is_even() {
            return Err(Error::OddModulus(modulus.get()));
        }
        let members = members
            .into_iter()
            .map(|x| {
                if x < modulus.get() {
                    Ok(Residue::new(x, modulus))
                } else {
                    Err(Error::Precondition(format!(
                        "{x} is not a minimum representative mod {modulus}"
                    )))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Dichotomy { modulus, members })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn members(&self) -> &BTreeSet<Residue> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn complement(&self) -> Dichotomy {
        Dichotomy {
            modulus: self.modulus,
            members: self
                .modulus
                .residues()
                .filter(|x| !self.members.contains(x))
                .collect(),
        }
    }

    fn indicator(&self) -> Vec<bool> {
        let mut flags = vec![false; self.modulus.get() as usize];
        for x in &self.members {
            flags[x.value() as usize] = true;
        }
        flags
    }

    /// Every affine map `p` of `Z_n` with `p(D) = Z_n \ D`, ordered by `(v, u)`.
    pub fn complement_maps(&self) -> Vec<AffineMap> {
        let n = self.modulus;
        if 2 * self.members.len() as u64 != n.get() {
            return Vec::new();
        }
        let inside = self.indicator();
        affine_group(n)
            .filter(|p| {
                // p is a bijection and |D| = |complement|, so p(D) ⊆ complement suffices.
                self.members
                    .iter()
                    .all(|x| !inside[p.eval(x.value()) as usize])
            })
            .collect()
    }

    pub fn is_marked_strong(&self) -> bool {
        self.complement_maps().len() == 1
    }

    /// The unique map exchanging `D` with its complement.
    ///
    /// That map is always a quasipolarity; a violation is reported as
    /// [`Error::InvariantViolation`].
    pub fn polarity(&self) -> Result<Quasipolarity> {
        match self.complement_maps().as_slice() {
            [p] => Quasipolarity::new(*p).map_err(|_| {
                Error::InvariantViolation(format!("polarity {p} of {self} is not a quasipolarity"))
            }),
            _ => Err(Error::NotMarkedStrong(self.to_string())),
        }
    }

    pub fn report(&self) -> Result<DichotomyReport> {
        let exchanging_maps = self.complement_maps();
        let polarity = match exchanging_maps.as_slice() {
            [_] => Some(*self.polarity()?),
            _ => None,
        };
        Ok(DichotomyReport {
            dichotomy: self.clone(),
            is_marked_strong: polarity.is_some(),
            exchanging_maps,
            polarity,
        })
    }
}

impl fmt::Display for Dichotomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}} mod {}", self.modulus)
    }
}

/// Parses `{0,3,4,7,8,9} mod 12`.
impl FromStr for Dichotomy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::parse(s, reason);
        let (set, modulus) = s
            .trim()
            .split_once("mod")
            .ok_or_else(|| fail("expected `mod n`"))?;
        let inner = set
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| fail("expected a braced set"))?;
        let members = inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u64>().map_err(|e| fail(&e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let n = modulus
            .trim()
            .parse::<u64>()
            .map_err(|e| fail(&e.to_string()))?;
        Dichotomy::new(Modulus::new(n)?, members)
    }
}

impl Serialize for Dichotomy {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DichotomyReport {
    pub dichotomy: Dichotomy,
    pub exchanging_maps: Vec<AffineMap>,
    pub is_marked_strong: bool,
    pub polarity: Option<AffineMap>,
}

fn affine_group(n: Modulus) -> impl Iterator<Item = AffineMap> {
    n.units().flat_map(move |v| {
        n.residues().map(move |u| {
            AffineMap::from_parts(n, u.value(), v.value()).expect("v ranges over units")
        })
    })
}

fn check_cap(n: Modulus, cap: u64) -> Result<()> {
    let cap_value = cap.min(TRANSVERSAL_LIMIT);
    if n.get() > cap_value {
        Err(Error::ModulusCapExceeded {
            n: n.get(),
            cap: cap_value,
        })
    } else {
        Ok(())
    }
}

/// The marked strong dichotomies whose polarity is `p`, in lexicographic order.
pub fn dichotomies_with_polarity(p: &Quasipolarity, cap: u64) -> Result<Vec<Dichotomy>> {
    let n = p.modulus();
    check_cap(n, cap)?;
    let size = n.get() as usize;

    let mut orbits = Vec::with_capacity(size / 2);
    let mut seen = vec![false; size];
    for x in 0..n.get() {
        if !seen[x as usize] {
            let y = p.eval(x);
            seen[x as usize] = true;
            seen[y as usize] = true;
            orbits.push((x, y));
        }
    }

    // Image tables of every other affine map, for quick rejection.
    let rivals: Vec<Vec<usize>> = affine_group(n)
        .filter(|q| q != &**p)
        .map(|q| (0..n.get()).map(|x| q.eval(x) as usize).collect())
        .collect();

    let mut found = Vec::new();
    let mut inside = vec![false; size];
    let mut chosen = Vec::with_capacity(orbits.len());
    for mask in 0..(1u64 << orbits.len()) {
        inside.iter_mut().for_each(|f| *f = false);
        chosen.clear();
        for (i, &(a, b)) in orbits.iter().enumerate() {
            let x = if mask >> i & 1 == 0 { a } else { b };
            inside[x as usize] = true;
            chosen.push(x);
        }
        let rival_exchanges = rivals
            .iter()
            .any(|image| chosen.iter().all(|&x| !inside[image[x as usize]]));
        if !rival_exchanges {
            found.push(Dichotomy {
                modulus: n,
                members: chosen.iter().map(|&x| Residue::new(x, n)).collect(),
            });
        }
    }
    found.sort();
    Ok(found)
}

/// One lift of a polarity together with the dichotomies it polarizes upstairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedLift {
    pub certificate: LiftCertificate,
    /// `None` when the lifted modulus exceeds the search cap.
    pub dichotomies: Option<Vec<Dichotomy>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedDichotomies {
    pub prime: Prime,
    /// True for `π ≠ 2`, where no outcome is predicted.
    pub exploratory: bool,
    pub lift: LiftReport,
    pub induced: Vec<InducedLift>,
}

impl InducedDichotomies {
    /// Whether every searched lift polarizes at least one marked strong dichotomy.
    pub fn all_nonempty(&self) -> bool {
        self.induced
            .iter()
            .all(|l| l.dichotomies.as_ref().is_some_and(|d| !d.is_empty()))
    }
}

/// Lifts the polarity `p` of `dichotomy` along `Z_n → Z_πn` and searches, for
/// each lift `p'`, the marked strong dichotomies of `Z_πn` polarized by `p'`.
///
/// For `π = 2` each lift is expected to polarize at least one; for other
/// primes the report is marked exploratory.
pub fn check_lift_induces_dichotomy(
    dichotomy: &Dichotomy,
    p: &Quasipolarity,
    pi: Prime,
    cap: u64,
) -> Result<InducedDichotomies> {
    let polarity = dichotomy.polarity()?;
    if polarity != *p {
        return Err(Error::PolarityMismatch {
            dichotomy: dichotomy.to_string(),
            polarity: polarity.to_string(),
            given: p.to_string(),
        });
    }
    let lift = lift_quasipolarity(p, pi)?;
    let induced = lift
        .certificates
        .iter()
        .map(|c| {
            let target = c.target();
            let dichotomies = match dichotomies_with_polarity(&target, cap) {
                Ok(found) => Some(found),
                Err(Error::ModulusCapExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(InducedLift {
                certificate: *c,
                dichotomies,
            })
        })
        .collect::<Result<_>>()?;
    Ok(InducedDichotomies {
        prime: pi,
        exploratory: pi.get() != 2,
        lift,
        induced,
    })
}
