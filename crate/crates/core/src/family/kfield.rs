//! Units of the biquadratic and triquadratic layers K = Q(sqrt(eta q), sqrt(rs))
//! and K_1 = Q(sqrt(2), sqrt(q), sqrt(rs)).
//!
//! The case split for the K_1 unit basis needs to decide whether
//! eps_2 eps_rs eps_2rs is a square in k_2 = Q(sqrt(2), sqrt(rs)). That is
//! done symbolically: elements of k_2 are P + Q sqrt(rs) with P, Q in
//! Q(sqrt(2)); a square root X + Y sqrt(rs) solves X^2 + rs Y^2 = P,
//! 2XY = Q, so X^2 and rs Y^2 are the roots of T^2 - P T + rs Q^2/4, and
//! everything reduces to exact square tests in Q(sqrt(2)) and Q. The
//! alternative shape sqrt(r)(E + G sqrt(2)) + sqrt(s)(F + H sqrt(2)) leads
//! to the same quadratic with roots r X'^2 and s Y'^2.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::exact_sqrt;
use crate::quadfield;

use super::{unit_trichotomy, Branch, FamilyError, FamilyParams};

/// An element a + b sqrt(2) of Q(sqrt(2)) with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q2Elem {
    pub a: BigRational,
    pub b: BigRational,
}

impl Q2Elem {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Q2Elem { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Q2Elem::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    pub fn zero() -> Self {
        Q2Elem::new(BigRational::zero(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Q2Elem) -> Q2Elem {
        Q2Elem::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &Q2Elem) -> Q2Elem {
        Q2Elem::new(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn mul(&self, o: &Q2Elem) -> Q2Elem {
        Q2Elem::new(
            &self.a * &o.a + BigRational::from_integer(2.into()) * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }

    pub fn scale(&self, k: &BigRational) -> Q2Elem {
        Q2Elem::new(&self.a * k, &self.b * k)
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Q2Elem {
        let norm = &self.a * &self.a - BigRational::from_integer(2.into()) * &self.b * &self.b;
        assert!(!norm.is_zero(), "inverse of zero in Q(sqrt 2)");
        Q2Elem::new(&self.a / &norm, -&self.b / &norm)
    }
}

/// Exact square root of a non-negative rational, if it is a square.
fn rational_sqrt(v: &BigRational) -> Option<BigRational> {
    if v.is_negative() {
        return None;
    }
    let n = exact_sqrt(v.numer())?;
    let d = exact_sqrt(v.denom())?;
    Some(BigRational::new(n, d))
}

/// Exact square root in Q(sqrt(2)), if the element is a square there.
pub fn sqrt_in_q2(z: &Q2Elem) -> Option<Q2Elem> {
    if z.is_zero() {
        return Some(Q2Elem::zero());
    }
    let two = BigRational::from_integer(2.into());
    if z.b.is_zero() {
        if let Some(x) = rational_sqrt(&z.a) {
            return Some(Q2Elem::new(x, BigRational::zero()));
        }
        if let Some(y) = rational_sqrt(&(&z.a / &two)) {
            return Some(Q2Elem::new(BigRational::zero(), y));
        }
        return None;
    }
    // (x + y sqrt 2)^2 = z: x^2 = (a +- sqrt(a^2 - 2 b^2)) / 2, y = b / (2x)
    let disc = &z.a * &z.a - &two * &z.b * &z.b;
    let t = rational_sqrt(&disc)?;
    for root in [(&z.a + &t) / &two, (&z.a - &t) / &two] {
        if let Some(x) = rational_sqrt(&root) {
            if x.is_zero() {
                continue;
            }
            let y = &z.b / (&two * &x);
            let cand = Q2Elem::new(x, y);
            if cand.mul(&cand) == *z {
                return Some(cand);
            }
        }
    }
    None
}

/// An element P + Q sqrt(rs) of Q(sqrt(2), sqrt(rs)), with P, Q in Q(sqrt(2)).
#[derive(Debug, Clone, PartialEq, Eq)]
struct K2Elem {
    p: Q2Elem,
    q: Q2Elem,
}

impl K2Elem {
    fn mul(&self, o: &K2Elem, rs: &BigRational) -> K2Elem {
        K2Elem {
            p: self.p.mul(&o.p).add(&self.q.mul(&o.q).scale(rs)),
            q: self.p.mul(&o.q).add(&self.q.mul(&o.p)),
        }
    }
}

/// Square root of u in Q(sqrt(2), sqrt(rs)) of the shape X + Y sqrt(rs),
/// if one exists.
fn sqrt_in_k2(u: &K2Elem, rs: &BigRational) -> Option<K2Elem> {
    let two = BigRational::from_integer(2.into());
    if u.q.is_zero() {
        if let Some(x) = sqrt_in_q2(&u.p) {
            return Some(K2Elem {
                p: x,
                q: Q2Elem::zero(),
            });
        }
        if let Some(y) = sqrt_in_q2(&u.p.scale(&rs.recip())) {
            return Some(K2Elem {
                p: Q2Elem::zero(),
                q: y,
            });
        }
        return None;
    }
    // X^2 and rs Y^2 are roots of T^2 - P T + rs Q^2 / 4
    let disc = u.p.mul(&u.p).sub(&u.q.mul(&u.q).scale(rs));
    let t = sqrt_in_q2(&disc)?;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for root in [u.p.add(&t).scale(&half), u.p.sub(&t).scale(&half)] {
        if let Some(x) = sqrt_in_q2(&root) {
            if x.is_zero() {
                continue;
            }
            let y = u.q.mul(&x.scale(&two).inv());
            let cand = K2Elem { p: x, q: y };
            if cand.mul(&cand, rs) == *u {
                return Some(cand);
            }
        }
    }
    None
}

/// Solve sqrt(u) = sqrt(r) X' + sqrt(s) Y' with X', Y' in Q(sqrt(2)), i.e.
/// r X'^2 + s Y'^2 = P and 2 X' Y' = Q. Returns (X', Y') if solvable.
fn sqrt_in_f2_shape(u: &K2Elem, r: u64, s: u64) -> Option<(Q2Elem, Q2Elem)> {
    let rs = BigRational::from_integer((r * s).into());
    let r_rat = BigRational::from_integer(r.into());
    let s_rat = BigRational::from_integer(s.into());
    let two = BigRational::from_integer(2.into());
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));

    let verify = |x: &Q2Elem, y: &Q2Elem| -> bool {
        x.mul(x).scale(&r_rat).add(&y.mul(y).scale(&s_rat)) == u.p && x.mul(y).scale(&two) == u.q
    };

    if u.q.is_zero() {
        for (num, den) in [(&u.p, &r_rat), (&u.p, &s_rat)] {
            if let Some(v) = sqrt_in_q2(&num.scale(&den.recip())) {
                let (x, y) = if den == &r_rat {
                    (v, Q2Elem::zero())
                } else {
                    (Q2Elem::zero(), v)
                };
                if verify(&x, &y) {
                    return Some((x, y));
                }
            }
        }
        return None;
    }
    let disc = u.p.mul(&u.p).sub(&u.q.mul(&u.q).scale(&rs));
    let t = sqrt_in_q2(&disc)?;
    for root in [u.p.add(&t).scale(&half), u.p.sub(&t).scale(&half)] {
        // root = r X'^2 for one of the two roots; Y' then follows from 2X'Y' = Q
        if let Some(x) = sqrt_in_q2(&root.scale(&r_rat.recip())) {
            if x.is_zero() {
                continue;
            }
            let y = u.q.mul(&x.scale(&two).inv());
            if verify(&x, &y) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Which of the three unit-basis cases of K_1 applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K1Case {
    /// N(eps_rs) = +1.
    NormPlus,
    /// N(eps_rs) = -1 and sqrt(eps_2 eps_rs eps_2rs) lies in Q(sqrt2, sqrt rs).
    NormMinusF1,
    /// N(eps_rs) = -1 and the square root needs sqrt(r), sqrt(s) coordinates.
    NormMinusF2,
}

/// One generator in a symbolic fundamental-system descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisUnit {
    MinusOne,
    /// eps_d
    Eps(u64),
    /// sqrt(eps_d)
    SqrtEps(u64),
    /// sqrt of a product of fundamental units, by radicand
    SqrtEpsProduct(Vec<u64>),
}

impl fmt::Display for BasisUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisUnit::MinusOne => write!(f, "-1"),
            BasisUnit::Eps(d) => write!(f, "eps_{d}"),
            BasisUnit::SqrtEps(d) => write!(f, "sqrt(eps_{d})"),
            BasisUnit::SqrtEpsProduct(ds) => {
                let parts: Vec<String> = ds.iter().map(|d| format!("eps_{d}")).collect();
                write!(f, "sqrt({})", parts.join(" "))
            }
        }
    }
}

/// Unit index report for a multiquadratic layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitIndexReport {
    pub label: String,
    /// q(k) = [E_k : prod E_(k_i)], a power of two.
    pub q_index: u64,
    pub case: K1Case,
    pub basis: Vec<BasisUnit>,
}

/// Unit index and fundamental-system descriptor of
/// K_1 = Q(sqrt(2), sqrt(q), sqrt(rs)): q(K_1) = 2^4 in all three cases.
///
/// Requires the square condition (trichotomy branch away from q).
pub fn unit_index_k1(
    params: &FamilyParams,
    digit_cap: u64,
) -> Result<UnitIndexReport, FamilyError> {
    let tri = unit_trichotomy(params, digit_cap)?;
    if tri.which == Branch::Q {
        return Err(FamilyError::SquareConditionFailed);
    }
    let (r, s) = (params.r(), params.s());
    let rs = r * s;
    let eta_qrs = params.eta_qrs();
    let rho_qrs = params.rho_qrs();

    let norm_rs = quadfield::unit_norm(rs)?;
    let case = if norm_rs == 1 {
        K1Case::NormPlus
    } else {
        let u = eps_product_in_k2(rs, digit_cap)?;
        let rs_rat = BigRational::from_integer(rs.into());
        if sqrt_in_k2(&u, &rs_rat).is_some() {
            K1Case::NormMinusF1
        } else {
            // the two shapes are exhaustive for these units
            assert!(
                sqrt_in_f2_shape(&u, r, s).is_some(),
                "sqrt(eps_2 eps_rs eps_2rs) fits neither form for rs = {rs}"
            );
            K1Case::NormMinusF2
        }
    };

    let basis = match case {
        K1Case::NormPlus => vec![
            BasisUnit::MinusOne,
            BasisUnit::Eps(2),
            BasisUnit::Eps(2 * rs),
            BasisUnit::Eps(eta_qrs),
            BasisUnit::SqrtEps(params.q()),
            BasisUnit::SqrtEps(2 * params.q()),
            BasisUnit::SqrtEps(rho_qrs),
            BasisUnit::SqrtEpsProduct(vec![rs, eta_qrs]),
        ],
        K1Case::NormMinusF1 => vec![
            BasisUnit::MinusOne,
            BasisUnit::Eps(2),
            BasisUnit::Eps(rs),
            BasisUnit::Eps(eta_qrs),
            BasisUnit::SqrtEps(params.q()),
            BasisUnit::SqrtEps(2 * params.q()),
            BasisUnit::SqrtEps(rho_qrs),
            BasisUnit::SqrtEpsProduct(vec![2, rs, 2 * rs]),
        ],
        K1Case::NormMinusF2 => vec![
            BasisUnit::MinusOne,
            BasisUnit::Eps(2),
            BasisUnit::Eps(rs),
            BasisUnit::Eps(eta_qrs),
            BasisUnit::SqrtEps(params.q()),
            BasisUnit::SqrtEps(2 * params.q()),
            BasisUnit::SqrtEps(rho_qrs),
            BasisUnit::SqrtEpsProduct(vec![2, rs, 2 * rs, eta_qrs]),
        ],
    };

    Ok(UnitIndexReport {
        label: "K1 = Q(sqrt2, sqrt q, sqrt rs)".to_string(),
        q_index: 16,
        case,
        basis,
    })
}

/// eps_2 eps_rs eps_2rs as an exact element of Q(sqrt(2), sqrt(rs)).
fn eps_product_in_k2(rs: u64, digit_cap: u64) -> Result<K2Elem, FamilyError> {
    let rs_rat = BigRational::from_integer(rs.into());
    let eps2 = K2Elem {
        p: Q2Elem::from_ints(1, 1),
        q: Q2Elem::zero(),
    };
    let u_rs = quadfield::fundamental_unit_capped(rs, digit_cap)?;
    assert!(!u_rs.halved, "rs = 1 mod 8 forces an integral unit");
    let eps_rs = K2Elem {
        p: Q2Elem::new(BigRational::from_integer(u_rs.x_num), BigRational::zero()),
        q: Q2Elem::new(BigRational::from_integer(u_rs.y_num), BigRational::zero()),
    };
    let u_2rs = quadfield::fundamental_unit_capped(2 * rs, digit_cap)?;
    assert!(!u_2rs.halved);
    // v + w sqrt(2 rs) = v + (w sqrt 2) sqrt(rs)
    let eps_2rs = K2Elem {
        p: Q2Elem::new(BigRational::from_integer(u_2rs.x_num), BigRational::zero()),
        q: Q2Elem::new(BigRational::zero(), BigRational::from_integer(u_2rs.y_num)),
    };
    Ok(eps2.mul(&eps_rs, &rs_rat).mul(&eps_2rs, &rs_rat))
}

/// h2(K) for K = Q(sqrt(eta q), sqrt(rs)), with the unit index q(K).
///
/// h2(K) = q(K)/4 * h2(rs) * h2(eta q r s), and q(K) = 2 exactly when
/// N(eps_rs) = +1, else q(K) = 1.
pub fn h2_k(params: &FamilyParams) -> Result<(u64, u64), FamilyError> {
    let norm_rs = quadfield::unit_norm(params.r() * params.s())?;
    let h2_rs = quadfield::h2(params.r() * params.s())?;
    let h2_f = quadfield::h2(params.eta_qrs())?;
    let q_k = if norm_rs == 1 { 2 } else { 1 };
    let prod = h2_rs * h2_f * q_k;
    assert!(prod % 4 == 0, "Kuroda quotient must be integral");
    Ok((prod / 4, q_k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::DEFAULT_DIGIT_CAP;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn q2_sqrt_roundtrip() {
        // (1 + sqrt2)^2 = 3 + 2 sqrt2
        let z = Q2Elem::from_ints(3, 2);
        let root = sqrt_in_q2(&z).unwrap();
        assert_eq!(root.mul(&root), z);
        // 2 = (sqrt2)^2
        let two = Q2Elem::from_ints(2, 0);
        let root2 = sqrt_in_q2(&two).unwrap();
        assert_eq!(root2, Q2Elem::from_ints(0, 1));
        // 3 + sqrt2 is not a square (norm 7 is not a rational square)
        assert!(sqrt_in_q2(&Q2Elem::from_ints(3, 1)).is_none());
        // rational halves: (1/2 + 3/2 sqrt2)^2 = 19/4 + 3/2 sqrt2
        let chi = Q2Elem::new(rat(1, 2), rat(3, 2));
        let sq = chi.mul(&chi);
        let back = sqrt_in_q2(&sq).unwrap();
        assert_eq!(back.mul(&back), sq);
    }

    #[test]
    fn k2_sqrt_roundtrip() {
        let rs = BigRational::from_integer(65.into());
        // chi = (1 + sqrt2) + (1/2) sqrt(65)
        let chi = K2Elem {
            p: Q2Elem::from_ints(1, 1),
            q: Q2Elem::new(rat(1, 2), rat(0, 1)),
        };
        let sq = chi.mul(&chi, &rs);
        let back = sqrt_in_k2(&sq, &rs).unwrap();
        assert_eq!(back.mul(&back, &rs), sq);
        // a non-square: multiply by sqrt-free unit 1 + sqrt(65) ... use p-only probe
        let nonsq = K2Elem {
            p: Q2Elem::from_ints(7, 0),
            q: Q2Elem::from_ints(1, 0),
        };
        assert!(sqrt_in_k2(&nonsq, &rs).is_none());
    }

    #[test]
    fn f2_shape_roundtrip() {
        // chi = sqrt(5)(1 + sqrt2) + sqrt(13)(2 - sqrt2), squared, must be
        // recognized in the F2 shape but not as a k2 square.
        let (r, s) = (5u64, 13u64);
        let rs = BigRational::from_integer((r * s).into());
        let x = Q2Elem::from_ints(1, 1);
        let y = Q2Elem::from_ints(2, -1);
        let u = K2Elem {
            p: x.mul(&x)
                .scale(&BigRational::from_integer(r.into()))
                .add(&y.mul(&y).scale(&BigRational::from_integer(s.into()))),
            q: x.mul(&y).scale(&BigRational::from_integer(2.into())),
        };
        let (xx, yy) = sqrt_in_f2_shape(&u, r, s).unwrap();
        assert_eq!(
            xx.mul(&xx)
                .scale(&BigRational::from_integer(r.into()))
                .add(&yy.mul(&yy).scale(&BigRational::from_integer(s.into()))),
            u.p
        );
        assert!(sqrt_in_k2(&u, &rs).is_none());
    }

    #[test]
    fn k1_report_for_3_13_61() {
        let params = FamilyParams::new(3, 13, 61, 1).unwrap();
        let report = unit_index_k1(&params, DEFAULT_DIGIT_CAP).unwrap();
        assert_eq!(report.q_index, 16);
        let norm = quadfield::unit_norm(13 * 61).unwrap();
        match report.case {
            K1Case::NormPlus => assert_eq!(norm, 1),
            K1Case::NormMinusF1 | K1Case::NormMinusF2 => assert_eq!(norm, -1),
        }
        assert_eq!(report.basis.len(), 8);
    }

    #[test]
    fn k1_cases_cover_all_three_shapes() {
        // norm +1: the basis carries sqrt(eps_rs eps_(eta q r s))
        let plus = FamilyParams::new(3, 13, 157, 1).unwrap();
        let rep = unit_index_k1(&plus, DEFAULT_DIGIT_CAP).unwrap();
        assert_eq!(rep.case, K1Case::NormPlus);
        assert!(rep
            .basis
            .contains(&BasisUnit::SqrtEpsProduct(vec![13 * 157, 3 * 13 * 157])));

        // norm -1 with sqrt(eps_2 eps_rs eps_2rs) inside Q(sqrt2, sqrt rs)
        let f1 = FamilyParams::new(7, 13, 101, 2).unwrap();
        let rep = unit_index_k1(&f1, DEFAULT_DIGIT_CAP).unwrap();
        assert_eq!(rep.case, K1Case::NormMinusF1);
        assert!(rep
            .basis
            .contains(&BasisUnit::SqrtEpsProduct(vec![2, 13 * 101, 2 * 13 * 101])));

        // norm -1 with the sqrt(r)/sqrt(s) shape
        let f2 = FamilyParams::new(59, 5, 29, 1).unwrap();
        let rep = unit_index_k1(&f2, DEFAULT_DIGIT_CAP).unwrap();
        assert_eq!(rep.case, K1Case::NormMinusF2);
        assert!(rep.basis.contains(&BasisUnit::SqrtEpsProduct(vec![
            2,
            5 * 29,
            2 * 5 * 29,
            59 * 5 * 29
        ])));
        for rep_case in [&plus, &f1, &f2] {
            assert_eq!(
                unit_index_k1(rep_case, DEFAULT_DIGIT_CAP).unwrap().q_index,
                16
            );
        }
    }

    #[test]
    fn k1_requires_square_condition() {
        // (11, 37, 53, eta = 1) sits on the q-branch
        let params = FamilyParams::new(11, 37, 53, 1).unwrap();
        assert!(matches!(
            unit_index_k1(&params, DEFAULT_DIGIT_CAP),
            Err(FamilyError::SquareConditionFailed)
        ));
    }

    #[test]
    fn h2_k_formula_shape() {
        let params = FamilyParams::new(3, 13, 61, 1).unwrap();
        let (h2k, qk) = h2_k(&params).unwrap();
        let h2_rs = quadfield::h2(13 * 61).unwrap();
        let h2_f = quadfield::h2(3 * 13 * 61).unwrap();
        let norm = quadfield::unit_norm(13 * 61).unwrap();
        if norm == 1 {
            assert_eq!(qk, 2);
            assert_eq!(2 * h2k, h2_rs * h2_f);
        } else {
            assert_eq!(qk, 1);
            assert_eq!(4 * h2k, h2_rs * h2_f);
        }
    }
}
