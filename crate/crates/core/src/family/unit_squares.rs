//! The unit-square trichotomy and dichotomy.
//!
//! With eps_(eta q r s) = gamma + gamma' sqrt(eta q r s), exactly one of
//!
//!   2^delta(eta,1) q (gamma - 1),
//!   2 r (gamma + (-1)^delta(eta,2)),
//!   2 s (gamma + (-1)^delta(eta,2))
//!
//! is a perfect square, and the branch determines how sqrt(eta * eps)
//! decomposes over a pair of quadratic radicands. Similarly, with
//! eps_(rho q r s) = x + y sqrt(rho q r s), exactly one of
//! 2^delta(rho,2) q (x + 1) and 2^delta(rho,2) q (x - 1) is a perfect
//! square, with sqrt(2 eps) = y1 sqrt(rho q) + y2 sqrt(rs) and y = y1 y2.
//! Every branch identity is re-verified as an exact integer equation.

use num_bigint::BigInt;

use crate::arith::{exact_sqrt, kronecker_delta};

use super::{integral_unit_coords, FamilyError, FamilyParams};

/// Which of the three numbers of the trichotomy is the perfect square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Q,
    R,
    S,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Q => "q",
            Branch::R => "r",
            Branch::S => "s",
        }
    }
}

/// Outcome of the trichotomy on eps_(eta q r s).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrichotomyResult {
    pub which: Branch,
    pub gamma: BigInt,
    pub gamma_prime: BigInt,
    /// Coefficients of sqrt(eta * eps) over the branch radicands.
    pub gamma1: BigInt,
    pub gamma2: BigInt,
}

/// Outcome of the dichotomy on eps_(rho q r s): `sign` tells whether the
/// x + 1 (+1) or x - 1 (-1) number is the square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DichotomyResult {
    pub sign: i32,
    pub x: BigInt,
    pub y: BigInt,
    pub y1: BigInt,
    pub y2: BigInt,
}

fn exact_quotient_sqrt(numer: &BigInt, divisor: u64) -> Option<BigInt> {
    let (q, r) = num_integer::Integer::div_rem(numer, &BigInt::from(divisor));
    if !num_traits::Zero::is_zero(&r) {
        return None;
    }
    exact_sqrt(&q)
}

/// Evaluate the trichotomy for eps_(eta q r s) and return the branch with
/// its exact square-root coefficients.
pub fn unit_trichotomy(
    params: &FamilyParams,
    digit_cap: u64,
) -> Result<TrichotomyResult, FamilyError> {
    let (q, r, s, eta) = (params.q(), params.r(), params.s(), params.eta());
    let (gamma, gamma_prime) = integral_unit_coords(params.eta_qrs(), digit_cap)?;

    // e = (-1)^delta(eta,2)
    let e: i64 = if eta == 2 { -1 } else { 1 };
    let two_pow = 1u64 << kronecker_delta(eta, 1); // 2^delta(eta,1)
    let gm1 = &gamma - 1;
    let gpe = &gamma + BigInt::from(e);
    let gme = &gamma - BigInt::from(e);

    let cand_q = BigInt::from(two_pow * q) * &gm1;
    let cand_r = BigInt::from(2 * r) * &gpe;
    let cand_s = BigInt::from(2 * s) * &gpe;
    let flags = [&cand_q, &cand_r, &cand_s].map(|c| exact_sqrt(c).is_some());
    if flags.iter().filter(|f| **f).count() != 1 {
        return Err(FamilyError::TrichotomyViolation { q, r, s, eta });
    }

    let eta_big = BigInt::from(eta);
    let (which, gamma1, gamma2, c1, c2, sign1, sign2) = if flags[0] {
        // gamma - 1 = 2^delta(eta,1) q gamma1^2, gamma + 1 = 2 r s gamma2^2
        let g1 = exact_quotient_sqrt(&gm1, two_pow * q).expect("q-branch gamma1");
        let g2 = exact_quotient_sqrt(&(&gamma + 1), 2 * r * s).expect("q-branch gamma2");
        // eta = -q gamma1^2 + eta r s gamma2^2
        (Branch::Q, g1, g2, q, eta * r * s, -1i64, 1i64)
    } else if flags[1] {
        // gamma + e = 2 r gamma1^2, gamma - e = 2^delta(eta,1) q s gamma2^2
        let g1 = exact_quotient_sqrt(&gpe, 2 * r).expect("r-branch gamma1");
        let g2 = exact_quotient_sqrt(&gme, two_pow * q * s).expect("r-branch gamma2");
        // eta = (-1)^delta(eta,2) eta r gamma1^2 + (-1)^delta(eta,1) q s gamma2^2
        (Branch::R, g1, g2, eta * r, q * s, e, -e)
    } else {
        let g1 = exact_quotient_sqrt(&gpe, 2 * s).expect("s-branch gamma1");
        let g2 = exact_quotient_sqrt(&gme, two_pow * q * r).expect("s-branch gamma2");
        (Branch::S, g1, g2, eta * s, q * r, e, -e)
    };

    // sqrt(eta eps)^2 matched coefficient-wise: c1 g1^2 + c2 g2^2 = eta gamma
    // and 2 g1 g2 = eta gamma'; plus the paper's signed branch identity.
    let sq1 = &gamma1 * &gamma1;
    let sq2 = &gamma2 * &gamma2;
    assert_eq!(
        BigInt::from(c1) * &sq1 + BigInt::from(c2) * &sq2,
        &eta_big * &gamma,
        "branch radicand identity"
    );
    assert_eq!(
        BigInt::from(2) * &gamma1 * &gamma2,
        &eta_big * &gamma_prime,
        "branch cross-term identity"
    );
    assert_eq!(
        BigInt::from(sign1) * BigInt::from(c1) * &sq1
            + BigInt::from(sign2) * BigInt::from(c2) * &sq2,
        eta_big,
        "signed branch identity"
    );

    Ok(TrichotomyResult {
        which,
        gamma,
        gamma_prime,
        gamma1,
        gamma2,
    })
}

/// Evaluate the dichotomy for eps_(rho q r s).
pub fn rho_dichotomy(
    params: &FamilyParams,
    digit_cap: u64,
) -> Result<DichotomyResult, FamilyError> {
    let (q, r, s) = (params.q(), params.r(), params.s());
    let rho = params.rho();
    let (x, y) = integral_unit_coords(params.rho_qrs(), digit_cap)?;

    let two_pow = 1u64 << kronecker_delta(rho, 2); // 2^delta(rho,2)
    let xp1 = &x + 1;
    let xm1 = &x - 1;
    let cand_plus = BigInt::from(two_pow * q) * &xp1;
    let cand_minus = BigInt::from(two_pow * q) * &xm1;
    let flag_plus = exact_sqrt(&cand_plus).is_some();
    let flag_minus = exact_sqrt(&cand_minus).is_some();
    if flag_plus == flag_minus {
        return Err(FamilyError::DichotomyViolation { q, r, s, rho });
    }

    let (sign, y1, y2) = if flag_plus {
        // x + 1 = 2^delta(rho,2) q y1^2, x - 1 = r s y2^2
        let y1 = exact_quotient_sqrt(&xp1, two_pow * q).expect("dichotomy y1");
        let y2 = exact_quotient_sqrt(&xm1, r * s).expect("dichotomy y2");
        (1, y1, y2)
    } else {
        let y1 = exact_quotient_sqrt(&xm1, two_pow * q).expect("dichotomy y1");
        let y2 = exact_quotient_sqrt(&xp1, r * s).expect("dichotomy y2");
        (-1, y1, y2)
    };

    // 2 = +-(rho q y1^2 - r s y2^2), y = y1 y2, and 2x = rho q y1^2 + rs y2^2
    let t1 = BigInt::from(rho * q) * &y1 * &y1;
    let t2 = BigInt::from(r * s) * &y2 * &y2;
    assert_eq!(
        BigInt::from(sign) * (&t1 - &t2),
        BigInt::from(2),
        "dichotomy identity"
    );
    assert_eq!(&t1 + &t2, BigInt::from(2) * &x, "dichotomy trace identity");
    assert_eq!(&y1 * &y2, y, "y = y1 y2");

    Ok(DichotomyResult { sign, x, y, y1, y2 })
}
