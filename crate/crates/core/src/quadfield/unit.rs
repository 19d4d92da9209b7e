//! Fundamental units of real quadratic fields by continued fractions.
//!
//! For squarefree d > 1 the unit comes from the continued fraction of
//! w = (1 + sqrt(d))/2 when d = 1 mod 4 and w = sqrt(d) otherwise. Writing
//! the k-th complete quotient as (P_k + sqrt(d))/Q_k, the expansion is
//! eventually periodic; the matrix product T of the period's partial
//! quotients fixes the periodic complete quotient w', and u = T21 w' + T22
//! is the smallest unit > 1 of the maximal order, with norm (-1)^(period).
//!
//! Only P, Q and the partial quotients are needed to learn the norm, so the
//! norm-only path never touches big integers. Coefficient accumulation can
//! grow enormously; a decimal-digit cap aborts it with a distinguishable
//! error instead of hanging.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::arith;

use super::QuadError;

/// Default cap on the decimal digits of a fundamental unit coefficient.
pub const DEFAULT_DIGIT_CAP: u64 = 1_000_000;

const MAX_CF_STEPS: u64 = 50_000_000;

/// Fundamental unit x + y*sqrt(d) of Q(sqrt(d)), stored as exact halves.
///
/// `x_num`/`y_num` are 2x or 1x the true coordinates according to `halved`;
/// both coordinates share the denominator. `halved` can only occur for
/// d = 5 mod 8.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadUnit {
    pub d: u64,
    pub x_num: BigInt,
    pub y_num: BigInt,
    pub halved: bool,
    pub norm: i32,
}

impl QuadUnit {
    /// The integer coordinates (x, y), if the unit is integral.
    pub fn integral_parts(&self) -> Option<(&BigInt, &BigInt)> {
        if self.halved {
            None
        } else {
            Some((&self.x_num, &self.y_num))
        }
    }

    /// Check x^2 - d y^2 = norm exactly (through the x_num/y_num encoding).
    pub fn pell_identity_holds(&self) -> bool {
        let lhs = &self.x_num * &self.x_num - BigInt::from(self.d) * &self.y_num * &self.y_num;
        let scale = if self.halved { 4 } else { 1 };
        lhs == BigInt::from(self.norm as i64 * scale)
    }
}

struct CfState {
    d: u64,
    sqrt_d: u64,
    p: i64,
    q: i64,
}

impl CfState {
    fn new(d: u64) -> Result<Self, QuadError> {
        if d <= 1 {
            return Err(QuadError::OutOfRange(d));
        }
        if !arith::is_squarefree(d) {
            return Err(QuadError::NotSquarefree(d));
        }
        let sqrt_d = BigInt::from(d).sqrt().try_into().expect("sqrt fits u64");
        let (p, q) = if d % 4 == 1 { (1, 2) } else { (0, 1) };
        Ok(CfState { d, sqrt_d, p, q })
    }

    // one continued-fraction step; returns the partial quotient
    fn step(&mut self) -> u64 {
        debug_assert!(self.q > 0);
        let a = (self.p + self.sqrt_d as i64).div_euclid(self.q);
        let p_next = a * self.q - self.p;
        let q_next = (self.d as i64 - p_next * p_next) / self.q;
        debug_assert_eq!((self.d as i64 - p_next * p_next) % self.q, 0);
        self.p = p_next;
        self.q = q_next;
        a as u64
    }
}

/// Partial quotients of one full period, together with the complete quotient
/// (P + sqrt(d))/Q at which the expansion starts repeating.
fn period_of(d: u64) -> Result<(Vec<u64>, i64, i64), QuadError> {
    let mut st = CfState::new(d)?;
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    let mut quotients: Vec<u64> = Vec::new();
    for step in 0..MAX_CF_STEPS {
        let state = (st.p, st.q);
        if let Some(&start) = seen.get(&state) {
            return Ok((quotients[start..].to_vec(), st.p, st.q));
        }
        seen.insert(state, step as usize);
        quotients.push(st.step());
    }
    Err(QuadError::PeriodOverflow(d))
}

/// Norm of the fundamental unit of Q(sqrt(d)), without computing the unit.
pub fn unit_norm(d: u64) -> Result<i32, QuadError> {
    let (period, _, _) = period_of(d)?;
    Ok(if period.len() % 2 == 0 { 1 } else { -1 })
}

/// Fundamental unit of Q(sqrt(d)) with the default digit cap.
pub fn fundamental_unit(d: u64) -> Result<QuadUnit, QuadError> {
    fundamental_unit_capped(d, DEFAULT_DIGIT_CAP)
}

/// Fundamental unit of Q(sqrt(d)), aborting once a coefficient would exceed
/// `digit_cap` decimal digits.
///
/// Successful results are memoized by d (failures are not, so a fixed cap
/// sees identical outcomes on every query within a process).
pub fn fundamental_unit_capped(d: u64, digit_cap: u64) -> Result<QuadUnit, QuadError> {
    static CACHE: OnceLock<Mutex<HashMap<u64, QuadUnit>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&d) {
        return Ok(hit.clone());
    }
    let unit = fundamental_unit_uncached(d, digit_cap)?;
    cache.lock().unwrap().insert(d, unit.clone());
    Ok(unit)
}

fn fundamental_unit_uncached(d: u64, digit_cap: u64) -> Result<QuadUnit, QuadError> {
    let (period, p0, q0) = period_of(d)?;
    // bits = digits * log2(10), rounded up
    let bit_cap = digit_cap.saturating_mul(3322).saturating_div(1000) + 4;

    // T = prod [[a,1],[1,0]] over the period
    let (mut t11, mut t12, mut t21, mut t22) =
        (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for &a in &period {
        let a = BigInt::from(a);
        let n11 = &t11 * &a + &t12;
        let n21 = &t21 * &a + &t22;
        t12 = std::mem::replace(&mut t11, n11);
        t22 = std::mem::replace(&mut t21, n21);
        if t11.bits() > bit_cap {
            return Err(QuadError::UnitTooLarge { d, digit_cap });
        }
    }

    // u = t21 * (p0 + sqrt(d))/q0 + t22 = x + y sqrt(d), doubled coordinates
    let q0 = BigInt::from(q0);
    let x2_num = BigInt::from(2) * (&t21 * BigInt::from(p0) + &t22 * &q0);
    let y2_num = BigInt::from(2) * &t21;
    let (x2, rx) = num_integer::Integer::div_rem(&x2_num, &q0);
    let (y2, ry) = num_integer::Integer::div_rem(&y2_num, &q0);
    assert!(
        rx.is_zero() && ry.is_zero(),
        "unit coordinates must lie in the maximal order (d = {d})"
    );
    assert!(x2.is_positive() && y2.is_positive());

    let norm = if period.len() % 2 == 0 { 1 } else { -1 };
    let unit = if x2.is_even() {
        assert!(y2.is_even(), "coordinate parity mismatch for d = {d}");
        QuadUnit {
            d,
            x_num: x2 / 2,
            y_num: y2 / 2,
            halved: false,
            norm,
        }
    } else {
        assert!(y2.is_odd(), "coordinate parity mismatch for d = {d}");
        assert_eq!(d % 8, 5, "half-integral unit outside d = 5 mod 8 (d = {d})");
        QuadUnit {
            d,
            x_num: x2,
            y_num: y2,
            halved: true,
            norm,
        }
    };
    debug_assert!(unit.pell_identity_holds());
    Ok(unit)
}
