//! Quasipolarities of `Z_n` and their lifts along `ι: Z_n → Z_πn`.
//!
//! An affine map `e^u.v(x) = v*x + u` with `v` a unit is a *quasipolarity* when
//! it is an involution without fixed points. Given one on `Z_n` and a prime
//! `π`, [`lift::lift_quasipolarity`] finds every quasipolarity `e^w.r` of
//! `Z_πn` that commutes with it through `ι(x) = πx`, and returns a certificate
//! for each one. [`oracle`] re-derives the same answers by exhaustive search.
//!
//! ```
//! use quasipolar::{lift_quasipolarity, AffineMap, Prime, Quasipolarity};
//!
//! let p = Quasipolarity::new("e^2.5 mod 12".parse::<AffineMap>()?)?;
//! let report = lift_quasipolarity(&p, Prime::new(2)?)?;
//! assert_eq!(report.certificates.len(), 1);
//! assert_eq!(report.certificates[0].target().to_string(), "e^4.17 mod 24");
//! # Ok::<(), quasipolar::Error>(())
//! ```
//!
//! The guide in `book/` walks through the constructions; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod affine;
pub mod dichotomy;
mod error;
pub mod lift;
pub mod oracle;
pub mod residue;

pub use affine::{
    canonical_u, enumerate_quasipolarities, involution_defect_k, quasipolarity_admissible,
    AffineMap, Quasipolarity,
};
pub use dichotomy::{
    check_lift_induces_dichotomy, dichotomies_with_polarity, Dichotomy, DichotomyReport,
    InducedDichotomies, InducedLift, DEFAULT_MODULUS_CAP,
};
pub use error::{Error, Result};
pub use lift::{
    build_lift, inject, lift_candidates_t, lift_quasipolarity, lift_tower, verify_commutes,
    LiftCase, LiftCertificate, LiftOutcome, LiftRejection, LiftReport, RejectionReason, TowerStage,
    DEFAULT_BRANCH_CAP,
};
pub use residue::{
    canonical_residue, extended_gcd, gcd, is_coprime, is_prime, mod_inverse,
    solve_linear_congruence, Modulus, Prime, Residue,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/quasipolarities.md")]
    mod quasipolarities {}
    #[doc = include_str!("../../../book/src/lifting.md")]
    mod lifting {}
    #[doc = include_str!("../../../book/src/dichotomies.md")]
    mod dichotomies {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
