//! The arithmetic engine for prime-triple families (q, r, s, eta):
//! hypothesis checking, the unit-square trichotomy and dichotomy, unit
//! indices of the multiquadratic layers, and class number formulas.
//!
//! Throughout, q = 3 mod 4 and r = s = 5 mod 8 are primes, eta is 1 or 2,
//! rho = 3 - eta, and eps_d = fundamental unit of Q(sqrt(d)).

mod formulas;
mod kfield;
mod unit_squares;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith;
use crate::quadfield::{self, QuadError};

pub use formulas::{
    ambiguous_rank_interval, fukuda_stable, kuroda_class_number, AmbiguousRank, RankInterval,
};
pub use kfield::{h2_k, unit_index_k1, BasisUnit, K1Case, Q2Elem, UnitIndexReport};
pub use unit_squares::{rho_dichotomy, unit_trichotomy, Branch, DichotomyResult, TrichotomyResult};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("r and s must be distinct primes (both are {0})")]
    EqualPrimes(u64),
    #[error("eta must be 1 or 2, got {0}")]
    BadEta(u64),
    #[error("q = {0} must be 3 mod 4")]
    QCongruence(u64),
    #[error("{0} must be 5 mod 8")]
    RsCongruence(u64),
    #[error("Legendre pattern fails: require (q/r) = (q/s) = {expected:+}")]
    LegendrePattern { expected: i32 },
    #[error("(r/s) must be +1")]
    RsSymbol,
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("square condition fails: 2^delta(eta,1) q (gamma - 1) is a perfect square")]
    SquareConditionFailed,
    #[error("exactly-one-square trichotomy violated for (q, r, s, eta) = ({q}, {r}, {s}, {eta})")]
    TrichotomyViolation { q: u64, r: u64, s: u64, eta: u64 },
    #[error("exactly-one-square dichotomy violated for (q, r, s, rho) = ({q}, {r}, {s}, {rho})")]
    DichotomyViolation { q: u64, r: u64, s: u64, rho: u64 },
    #[error("subfield class number list has length {got}, expected {expected}")]
    KurodaListLength { expected: usize, got: usize },
    #[error("Kuroda formula does not divide exactly (q * prod h = {numerator}, v = {v})")]
    KurodaNotIntegral { numerator: String, v: u32 },
    #[error("ambiguous class number formula requires an odd class number for Q(sqrt({0}))")]
    EvenBaseClassNumber(u64),
    #[error("unsupported base field Q(sqrt({0})): require squarefree base = 1 mod 4")]
    UnsupportedBase(u64),
    #[error("unsupported relative extension by sqrt({0}): must be squarefree, != 0, 1, coprime to the base")]
    UnsupportedExtension(i64),
}

/// A validated family parameter tuple.
///
/// Construction enforces: q, r, s prime; q = 3 mod 4; r, s = 5 mod 8 distinct;
/// (q/r) = (q/s) = (-1)^delta(eta,2); (r/s) = +1; eta in {1, 2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    q: u64,
    r: u64,
    s: u64,
    eta: u64,
}

impl FamilyParams {
    pub fn new(q: u64, r: u64, s: u64, eta: u64) -> Result<Self, FamilyError> {
        raw_checks(q, r, s, eta)?;
        if q % 4 != 3 {
            return Err(FamilyError::QCongruence(q));
        }
        for v in [r, s] {
            if v % 8 != 5 {
                return Err(FamilyError::RsCongruence(v));
            }
        }
        let expected = legendre_target(eta);
        if arith::legendre_u64(q, r) != expected || arith::legendre_u64(q, s) != expected {
            return Err(FamilyError::LegendrePattern { expected });
        }
        if arith::legendre_u64(r, s) != 1 {
            return Err(FamilyError::RsSymbol);
        }
        Ok(FamilyParams { q, r, s, eta })
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn s(&self) -> u64 {
        self.s
    }
    pub fn eta(&self) -> u64 {
        self.eta
    }
    pub fn rho(&self) -> u64 {
        3 - self.eta
    }

    /// d = eta * q * r * s, the radicand of F.
    pub fn eta_qrs(&self) -> u64 {
        self.eta * self.q * self.r * self.s
    }

    /// d = rho * q * r * s, the complementary radicand.
    pub fn rho_qrs(&self) -> u64 {
        self.rho() * self.q * self.r * self.s
    }

    /// The params with r and s exchanged (they satisfy the same invariants).
    pub fn swapped_rs(&self) -> FamilyParams {
        FamilyParams {
            q: self.q,
            r: self.s,
            s: self.r,
            eta: self.eta,
        }
    }
}

/// (-1)^delta(eta,2): +1 for eta = 1, -1 for eta = 2.
pub(crate) fn legendre_target(eta: u64) -> i32 {
    if eta == 2 {
        -1
    } else {
        1
    }
}

fn raw_checks(q: u64, r: u64, s: u64, eta: u64) -> Result<(), FamilyError> {
    if eta != 1 && eta != 2 {
        return Err(FamilyError::BadEta(eta));
    }
    for v in [q, r, s] {
        if !arith::is_prime_u64(v) {
            return Err(FamilyError::NotPrime(v));
        }
    }
    if r == s {
        return Err(FamilyError::EqualPrimes(r));
    }
    Ok(())
}

/// Per-condition hypothesis report for a candidate triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub q: u64,
    pub r: u64,
    pub s: u64,
    pub eta: u64,
    /// q = 3 mod 4 and r = s = 5 mod 8.
    pub congruences_ok: bool,
    /// (q/r) = (q/s) = (-1)^delta(eta,2).
    pub legendre_ok: bool,
    /// (r/s) = +1.
    pub rs_symbol_ok: bool,
    /// (r/s)_4 != (s/r)_4; defined only when the symbols exist.
    pub quartic_distinct: Option<bool>,
    /// N(eps_rs).
    pub norm_rs: Option<i32>,
    /// 2^delta(eta,1) q (gamma - 1) is NOT a perfect square; None when the
    /// unit was not computed (earlier gate failed, or it exceeded the cap).
    pub square_condition: Option<bool>,
    /// The digit cap aborted the fundamental unit of eta*q*r*s.
    pub unit_too_large: bool,
    /// m with h2(eta q r s) = 2^(m+1); None when gates failed short of it.
    pub m: Option<u32>,
}

impl HypothesisReport {
    /// All FamilyParams invariants hold.
    pub fn params_ok(&self) -> bool {
        self.congruences_ok && self.legendre_ok && self.rs_symbol_ok
    }

    /// Full Theorem-level condition set: params, N(eps_rs) = 1, the square
    /// condition, and distinct quartic symbols.
    pub fn theorem_ok(&self) -> bool {
        self.params_ok()
            && self.norm_rs == Some(1)
            && self.square_condition == Some(true)
            && self.quartic_distinct == Some(true)
    }
}

/// Evaluate every hypothesis of the main theorem on a candidate triple,
/// cheapest conditions first. Errors only reject non-prime or malformed
/// inputs; failed hypotheses are reported, not raised.
pub fn check_hypotheses(
    q: u64,
    r: u64,
    s: u64,
    eta: u64,
    digit_cap: u64,
) -> Result<HypothesisReport, FamilyError> {
    raw_checks(q, r, s, eta)?;

    let congruences_ok = q % 4 == 3 && r % 8 == 5 && s % 8 == 5;
    let expected = legendre_target(eta);
    let legendre_ok =
        arith::legendre_u64(q, r) == expected && arith::legendre_u64(q, s) == expected;
    let rs_symbol_ok = arith::legendre_u64(r, s) == 1 && arith::legendre_u64(s, r) == 1;

    let quartic_distinct =
        rs_symbol_ok.then(|| arith::quartic_u64(r, s) != arith::quartic_u64(s, r));
    let norm_rs = Some(quadfield::unit_norm(r * s)?);

    let mut square_condition = None;
    let mut unit_too_large = false;
    let mut m = None;
    if congruences_ok && legendre_ok && rs_symbol_ok {
        let params = FamilyParams { q, r, s, eta };
        match unit_trichotomy(&params, digit_cap) {
            Ok(tri) => square_condition = Some(tri.which != Branch::Q),
            Err(FamilyError::Quad(QuadError::UnitTooLarge { .. })) => unit_too_large = true,
            Err(e) => return Err(e),
        }
        let h2 = quadfield::h2(params.eta_qrs())?;
        assert!(
            h2.is_power_of_two() && h2 >= 4,
            "h2({}) = {h2}",
            params.eta_qrs()
        );
        m = Some(h2.trailing_zeros() - 1);
    }

    Ok(HypothesisReport {
        q,
        r,
        s,
        eta,
        congruences_ok,
        legendre_ok,
        rs_symbol_ok,
        quartic_distinct,
        norm_rs,
        square_condition,
        unit_too_large,
        m,
    })
}

/// Unit index q(F_1) of the first tower layer F_1 = Q(sqrt(qrs), sqrt(2)):
/// 1 exactly when 2^delta(eta,1) q (gamma - 1) is not a perfect square,
/// else 2.
pub fn q_index_f1(params: &FamilyParams, digit_cap: u64) -> Result<u64, FamilyError> {
    let tri = unit_trichotomy(params, digit_cap)?;
    Ok(if tri.which == Branch::Q { 2 } else { 1 })
}

/// h2 of the first layer: h2(eta q r s) when q(F_1) = 1, twice that otherwise.
///
/// Comes from the layer formula h2(F_1) = q(F_1)/4 * h2(qrs) * h2(2qrs)
/// combined with h2(qrs) h2(2qrs) = 4 h2(eta q r s).
pub fn h2_f1(params: &FamilyParams, digit_cap: u64) -> Result<u64, FamilyError> {
    let base = quadfield::h2(params.eta_qrs())?;
    Ok(base * q_index_f1(params, digit_cap)?)
}

/// Exact coefficients gamma, gamma' of eps_(eta q r s) = gamma + gamma' sqrt(d).
///
/// The radicand is 3 mod 4 (eta = 1) or even (eta = 2), so the unit is
/// integral; its norm is +1 because q = 3 mod 4 divides the radicand.
pub(crate) fn integral_unit_coords(
    d: u64,
    digit_cap: u64,
) -> Result<(BigInt, BigInt), FamilyError> {
    let unit = quadfield::fundamental_unit_capped(d, digit_cap)?;
    assert!(
        !unit.halved,
        "family radicand {d} must give an integral unit"
    );
    assert_eq!(unit.norm, 1, "family radicand {d} must give a norm +1 unit");
    Ok((unit.x_num, unit.y_num))
}
