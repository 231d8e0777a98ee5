//! Lifting quasipolarities along the injection `ι: Z_n → Z_πn`, `ι(x) = πx`.
//!
//! A quasipolarity `e^w.r` of `Z_πn` closes the square `ι ∘ e^u.v = e^w.r ∘ ι`
//! exactly when `w ≡ πu (mod πn)` and `r ≡ v (mod n)`. Writing `r = v + nt`,
//! `r` is an involution mod `πn` iff `nt² + 2vt + k ≡ 0 (mod π)` with
//! `k = (v²-1)/n`:
//!
//! * when `π | n` this is the linear congruence `2vt ≡ -k (mod π)`;
//! * when `π ∤ n` it becomes `(nt + v)² ≡ 1 (mod π)`, so `t = n⁻¹(±1 - v)`.
//!
//! Each candidate `t` is then kept only if `k' = (r²-1)/(πn)` is even and
//! `e^{πu}.r` has no fixed point mod `πn`. The second filter is not implied by
//! the first: for `n = 2`, `e^1.1`, `π = 2`, `t = 1` gives `r = 3`, `k' = 2`,
//! yet `e^2.3` fixes 1 in `Z_4`.
//!
//! `ι` is multiplication by `π`, not the identity on representatives: only the
//! former is a group homomorphism `Z_n → Z_πn`.

use std::fmt;

use serde::Serialize;

use crate::affine::{quasipolarity_admissible, AffineMap, Quasipolarity};
use crate::error::{Error, Result};
use crate::residue::{gcd, mod_inverse, solve_linear_congruence, Modulus, Prime, Residue};

/// Default number of branches [`lift_tower`] follows per stage.
pub const DEFAULT_BRANCH_CAP: usize = 64;

/// Which congruence determines `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum LiftCase {
    /// `π | n`: `2vt ≡ -k (mod π)`.
    LinearCase,
    /// `π ∤ n`: `t = n⁻¹(±1 - v) (mod π)`.
    UnitCase,
}

impl LiftCase {
    pub fn of(n: Modulus, pi: Prime) -> Self {
        if pi.divides(n.get()) {
            LiftCase::LinearCase
        } else {
            LiftCase::UnitCase
        }
    }
}

impl fmt::Display for LiftCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiftCase::LinearCase => "LinearCase",
            LiftCase::UnitCase => "UnitCase",
        })
    }
}

/// Witness of one lift `e^u.v mod n  ↦  e^w.r mod πn`, carrying every intermediate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LiftCertificate {
    n: Modulus,
    pi: Prime,
    v: Residue,
    u: Residue,
    t: Residue,
    r: Residue,
    w: Residue,
    k: u64,
    k_prime: u64,
    case: LiftCase,
}

impl LiftCertificate {
    pub fn n(&self) -> Modulus {
        self.n
    }

    pub fn pi(&self) -> Prime {
        self.pi
    }

    pub fn v(&self) -> Residue {
        self.v
    }

    pub fn u(&self) -> Residue {
        self.u
    }

    pub fn t(&self) -> Residue {
        self.t
    }

    pub fn r(&self) -> Residue {
        self.r
    }

    pub fn w(&self) -> Residue {
        self.w
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn k_prime(&self) -> u64 {
        self.k_prime
    }

    pub fn case(&self) -> LiftCase {
        self.case
    }

    /// The modulus `πn` of the target.
    pub fn lifted_modulus(&self) -> Modulus {
        self.r.modulus()
    }

    pub fn source(&self) -> Quasipolarity {
        let map = AffineMap::from_parts(self.n, self.u.value(), self.v.value())
            .expect("certificate source is a unit map");
        Quasipolarity::new(map).expect("certificate source is a quasipolarity")
    }

    /// The lifted quasipolarity `e^w.r` on `Z_πn`.
    pub fn target(&self) -> Quasipolarity {
        let map = AffineMap::from_parts(self.lifted_modulus(), self.w.value(), self.r.value())
            .expect("certificate target is a unit map");
        Quasipolarity::new(map).expect("certificate target is a quasipolarity")
    }

    /// `πn / gcd(r+1, πn)`: the translation that the admissibility test for `r`
    /// produces. It makes `e^{·}.r` a quasipolarity but need not equal `w`, in
    /// which case it does not close the square (e.g. `r = 29` on `Z_60` gives 2,
    /// while `w = 10`).
    pub fn admissible_translation(&self) -> u64 {
        let big = self.lifted_modulus().get();
        big / gcd(self.r.value() as i64 + 1, big as i64)
    }
}

impl fmt::Display for LiftCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t={} r={} w={} k={} k'={} ({})",
            self.t, self.r, self.w, self.k, self.k_prime, self.case
        )
    }
}

/// Why a candidate `t` produced no lift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "reason")]
pub enum RejectionReason {
    /// `π | n` and `gcd(π, 2v)` does not divide `k`; no `t` exists.
    CongruenceUnsolvable,
    /// `r` is an involution but `k' = (r²-1)/(πn)` is odd.
    KPrimeOdd { k_prime: u64 },
    /// `k'` is even, yet `e^{πu}.r` has a fixed point mod `πn`.
    TargetHasFixedPoints { k_prime: u64, w: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LiftRejection {
    /// The offending `t`, absent for [`RejectionReason::CongruenceUnsolvable`].
    pub t: Option<Residue>,
    #[serde(flatten)]
    pub reason: RejectionReason,
}

impl fmt::Display for LiftRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(t) = self.t {
            write!(f, "t={t} ")?;
        }
        match self.reason {
            RejectionReason::CongruenceUnsolvable => f.write_str("CongruenceUnsolvable"),
            RejectionReason::KPrimeOdd { k_prime } => write!(f, "KPrimeOdd (k'={k_prime})"),
            RejectionReason::TargetHasFixedPoints { k_prime, w } => {
                write!(f, "TargetHasFixedPoints (k'={k_prime}, w={w})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftOutcome {
    Certified(LiftCertificate),
    Rejected(LiftRejection),
}

/// Every candidate `t` for one `(p, π)`, split into certificates and rejections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftReport {
    #[serde(serialize_with = "serialize_display")]
    pub source: Quasipolarity,
    pub pi: Prime,
    pub case: LiftCase,
    pub certificates: Vec<LiftCertificate>,
    pub rejections: Vec<LiftRejection>,
}

impl LiftReport {
    /// The lifted quasipolarities, ordered by `(r, w)`.
    pub fn targets(&self) -> Vec<AffineMap> {
        let mut maps: Vec<AffineMap> = self.certificates.iter().map(|c| *c.target()).collect();
        maps.sort();
        maps
    }
}

fn serialize_display<T: fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// `ι(x) = πx`, from `Z_n` into `Z_πn`.
pub fn inject(x: Residue, pi: Prime) -> Result<Residue> {
    let big = x.modulus().scaled(pi.get())?;
    Ok(Residue::new(pi.get() * x.value(), big))
}

fn validate_seed(n: Modulus, v: Residue) -> Result<u64> {
    let v = v.expect_modulus(n)?;
    if !n.is_even() {
        return Err(Error::OddModulus(n.get()));
    }
    if gcd(v.value() as i64, n.get() as i64) != 1 {
        return Err(Error::NotAUnit {
            v: v.value() as i64,
            n: n.get(),
        });
    }
    crate::affine::involution_defect_k(n, v)
}

/// The residues `t mod π` for which `v + nt` is an involution mod `πn`.
pub fn lift_candidates_t(n: Modulus, v: Residue, pi: Prime) -> Result<(LiftCase, Vec<Residue>)> {
    let k = validate_seed(n, v)?;
    let field = pi.modulus();
    let case = LiftCase::of(n, pi);
    let candidates = match case {
        LiftCase::LinearCase => {
            let p = pi.get() as i128;
            let a = (2 * v.value() as i128).rem_euclid(p) as i64;
            let b = (-(k as i128)).rem_euclid(p) as i64;
            solve_linear_congruence(a, b, field)
        }
        LiftCase::UnitCase => {
            let n_inv = mod_inverse((n.get() % pi.get()) as i64, field)?.value();
            let v_mod = v.value() % pi.get();
            let plus = field.mul(n_inv, field.add(1, pi.get() - v_mod));
            let minus = field.mul(n_inv, field.add(pi.get() - 1, pi.get() - v_mod));
            let mut ts = vec![Residue::new(plus, field), Residue::new(minus, field)];
            ts.sort();
            ts.dedup();
            ts
        }
    };
    Ok((case, candidates))
}

fn satisfies_quadratic(n: Modulus, v: u64, k: u64, t: u64, pi: Prime) -> bool {
    let p = pi.get() as u128;
    let (n, v, k, t) = (n.get() as u128 % p, v as u128 % p, k as u128 % p, t as u128);
    (n * t % p * t + 2 * v * t + k).is_multiple_of(p)
}

/// Turns one candidate `t` into a certificate or a rejection.
///
/// Fails with [`Error::Precondition`] if `t` does not solve the congruence for
/// `t`, and with [`Error::InvariantViolation`] if an algebraic identity that
/// must hold for every solution does not.
pub fn build_lift(p: &Quasipolarity, pi: Prime, t: Residue) -> Result<LiftOutcome> {
    let n = p.modulus();
    let (u, v, k) = (p.u(), p.v(), p.defect_k());
    let t = t.expect_modulus(pi.modulus())?;
    if !satisfies_quadratic(n, v.value(), k, t.value(), pi) {
        return Err(Error::Precondition(format!(
            "t={t} does not solve {n}t² + 2·{v}t + {k} ≡ 0 (mod {pi})"
        )));
    }

    let big = n.scaled(pi.get())?;
    let r = v.value() + n.get() * t.value();
    let r_sq = r as u128 * r as u128;
    if r_sq % big.get() as u128 != 1 {
        return Err(Error::InvariantViolation(format!(
            "r={r} solves the congruence but r² ≢ 1 (mod {big})"
        )));
    }
    let k_prime = ((r_sq - 1) / big.get() as u128) as u64;
    let r = Residue::new(r, big);
    if k_prime % 2 == 1 {
        return Ok(LiftOutcome::Rejected(LiftRejection {
            t: Some(t),
            reason: RejectionReason::KPrimeOdd { k_prime },
        }));
    }
    if !quasipolarity_admissible(big, r)? {
        return Err(Error::InvariantViolation(format!(
            "k'={k_prime} is even but {r} is not admissible mod {big}"
        )));
    }

    let w = pi.get() * u.value();
    let target = AffineMap::from_parts(big, w, r.value())?;
    if !target.is_quasipolarity() {
        return Ok(LiftOutcome::Rejected(LiftRejection {
            t: Some(t),
            reason: RejectionReason::TargetHasFixedPoints { k_prime, w },
        }));
    }
    if !verify_commutes(p, &target, pi)? {
        return Err(Error::InvariantViolation(format!(
            "{target} does not commute with {} under ι",
            **p
        )));
    }

    Ok(LiftOutcome::Certified(LiftCertificate {
        n,
        pi,
        v,
        u,
        t,
        r,
        w: Residue::new(w, big),
        k,
        k_prime,
        case: LiftCase::of(n, pi),
    }))
}

/// Every lift of `p` along `Z_n → Z_πn`, certificates and rejections sorted by `t`.
pub fn lift_quasipolarity(p: &Quasipolarity, pi: Prime) -> Result<LiftReport> {
    let (case, candidates) = lift_candidates_t(p.modulus(), p.v(), pi)?;
    let mut report = LiftReport {
        source: *p,
        pi,
        case,
        certificates: Vec::new(),
        rejections: Vec::new(),
    };
    if candidates.is_empty() {
        report.rejections.push(LiftRejection {
            t: None,
            reason: RejectionReason::CongruenceUnsolvable,
        });
    }
    for t in candidates {
        match build_lift(p, pi, t)? {
            LiftOutcome::Certified(c) => report.certificates.push(c),
            LiftOutcome::Rejected(r) => report.rejections.push(r),
        }
    }
    Ok(report)
}

/// Pointwise check of `ι(p(x)) = q(ι(x))` for every `x` in `Z_n`.
///
/// Neither map needs to be a quasipolarity.
pub fn verify_commutes(p: &AffineMap, q: &AffineMap, pi: Prime) -> Result<bool> {
    let big = p.modulus().scaled(pi.get())?;
    if q.modulus() != big {
        return Err(Error::ModulusMismatch {
            expected: big.get(),
            found: q.modulus().get(),
        });
    }
    for x in p.modulus().residues() {
        if inject(p.apply(x)?, pi)? != q.apply(inject(x, pi)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One step of a tower: every surviving branch lifted by the same prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerStage {
    pub prime: Prime,
    /// Modulus of the lifted maps produced at this stage.
    pub modulus: Modulus,
    pub branches: Vec<LiftReport>,
    /// Set when more lifts were found than the branch cap allows to follow.
    pub branch_cap_exceeded: bool,
}

impl TowerStage {
    pub fn certificate_count(&self) -> usize {
        self.branches.iter().map(|b| b.certificates.len()).sum()
    }
}

/// Lifts `seed` along `Z_n → Z_{π₁n} → Z_{π₁π₂n} → …`, following every
/// certificate up to `branch_cap` branches per stage.
///
/// Stops early once no branch survives, so the result may be shorter than `primes`.
pub fn lift_tower(
    seed: &Quasipolarity,
    primes: &[Prime],
    branch_cap: usize,
) -> Result<Vec<TowerStage>> {
    let mut frontier = vec![*seed];
    let mut modulus = seed.modulus();
    let mut stages = Vec::with_capacity(primes.len());
    for &pi in primes {
        if frontier.is_empty() {
            break;
        }
        modulus = modulus.scaled(pi.get())?;
        let branches = frontier
            .iter()
            .map(|p| lift_quasipolarity(p, pi))
            .collect::<Result<Vec<_>>>()?;
        let mut next: Vec<Quasipolarity> = branches
            .iter()
            .flat_map(|b| b.certificates.iter().map(LiftCertificate::target))
            .collect();
        let branch_cap_exceeded = next.len() > branch_cap;
        next.truncate(branch_cap);
        stages.push(TowerStage {
            prime: pi,
            modulus,
            branches,
            branch_cap_exceeded,
        });
        frontier = next;
    }
    Ok(stages)
}
