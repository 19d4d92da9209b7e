//! Class number formulas: the multiquadratic class number formula, the
//! ambiguous class number rank, and two-layer stability.

use crate::arith;
use crate::quadfield::{self, Place, Splitting};

use super::FamilyError;

/// Multiquadratic class number formula for a field of degree 2^n with
/// quadratic subfield class numbers `subfield_h` (2^n - 1 of them):
///
///   h = q_index * prod(h_i) / 2^v,
///
/// v = n (2^(n-1) - 1) for real fields, (n-1)(2^(n-2) - 1) + 2^(n-1) - 1 for
/// imaginary ones. The division must be exact.
pub fn kuroda_class_number(
    subfield_h: &[u64],
    q_index: u64,
    n: u32,
    real: bool,
) -> Result<u64, FamilyError> {
    assert!(n >= 2, "multiquadratic fields have degree at least 4");
    let expected = (1usize << n) - 1;
    if subfield_h.len() != expected {
        return Err(FamilyError::KurodaListLength {
            expected,
            got: subfield_h.len(),
        });
    }
    let v = if real {
        n * ((1u32 << (n - 1)) - 1)
    } else {
        (n - 1) * ((1u32 << (n - 2)) - 1) + (1u32 << (n - 1)) - 1
    };
    let mut numerator: u128 = q_index as u128;
    for &h in subfield_h {
        numerator = numerator.checked_mul(h as u128).expect("kuroda overflow");
    }
    let denom: u128 = 1u128 << v;
    if numerator % denom != 0 {
        return Err(FamilyError::KurodaNotIntegral {
            numerator: numerator.to_string(),
            v,
        });
    }
    Ok(u64::try_from(numerator / denom).expect("kuroda result fits u64"))
}

/// Rank window [t - 3, t - 1] coming from rank = t - 1 - e with e in {0, 1, 2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankInterval {
    pub lo: u32,
    pub hi: u32,
}

impl RankInterval {
    pub fn from_ramified_count(t: u32) -> RankInterval {
        RankInterval {
            lo: t.saturating_sub(3),
            hi: t.saturating_sub(1),
        }
    }
}

/// Ramified-place count and rank interval of a relative quadratic extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguousRank {
    /// Number of places of the base field ramified in the extension.
    pub t: u32,
    pub interval: RankInterval,
}

/// Ambiguous class number data for K'/F' with F' = Q(sqrt(base_d)) and
/// K' = F'(sqrt(ext_d)), ext_d a rational squarefree integer coprime to
/// base_d.
///
/// The base class number must be odd. rank A(K') = t - 1 - e with e in
/// {0, 1, 2}; e is not computed exactly, so only the interval is returned.
/// Supported bases have base_d = 1 mod 4, which keeps 2 unramified in F'.
pub fn ambiguous_rank_interval(base_d: u64, ext_d: i64) -> Result<AmbiguousRank, FamilyError> {
    if base_d <= 1 || !arith::is_squarefree(base_d) || base_d % 4 != 1 {
        return Err(FamilyError::UnsupportedBase(base_d));
    }
    if ext_d == 0
        || ext_d == 1
        || !arith::is_squarefree(ext_d.unsigned_abs())
        || num_integer::Integer::gcd(&ext_d, &(base_d as i64)) != 1
    {
        return Err(FamilyError::UnsupportedExtension(ext_d));
    }
    if quadfield::class_group(base_d)?.h % 2 == 0 {
        return Err(FamilyError::EvenBaseClassNumber(base_d));
    }

    let mut t = 0u32;
    // odd primes dividing ext_d ramify; they contribute one prime of F'
    // each when inert or ramified in F'/Q, two when split
    for (p, _) in arith::factorize(ext_d.unsigned_abs()) {
        if p == 2 {
            continue;
        }
        t += match quadfield::prime_splitting(Place::Finite(p), base_d as i64) {
            Splitting::Split => 2,
            Splitting::Inert | Splitting::Ramified => 1,
        };
    }
    // places above 2 ramify iff ext_d is even or ext_d = 3 mod 4
    if ext_d % 2 == 0 || ext_d.rem_euclid(4) == 3 {
        t += match quadfield::prime_splitting(Place::Finite(2), base_d as i64) {
            Splitting::Split => 2,
            Splitting::Inert => 1,
            Splitting::Ramified => unreachable!("base_d = 1 mod 4"),
        };
    }
    // both real places ramify iff ext_d < 0
    if ext_d < 0 {
        t += 2;
    }

    Ok(AmbiguousRank {
        t,
        interval: RankInterval::from_ramified_count(t),
    })
}

/// Two-layer stability: h2 values of consecutive layers agree, so every
/// later layer keeps the same 2-class number.
pub fn fukuda_stable(h_layer0: u64, h_layer1: u64) -> bool {
    h_layer0 == h_layer1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kuroda_exponents() {
        // n = 2 real: v = 2; with all subfield h odd and q = 4 the product passes through
        assert_eq!(kuroda_class_number(&[3, 5, 7], 4, 2, true).unwrap(), 105);
        // n = 3 real: v = 9
        assert_eq!(kuroda_class_number(&[1; 7], 512, 3, true).unwrap(), 1);
        // imaginary n = 2: v = (1)(0) + 1 = 1
        assert_eq!(kuroda_class_number(&[1, 1, 2], 1, 2, false).unwrap(), 1);
        assert!(matches!(
            kuroda_class_number(&[1, 1], 1, 2, true),
            Err(FamilyError::KurodaListLength {
                expected: 3,
                got: 2
            })
        ));
        assert!(matches!(
            kuroda_class_number(&[1, 1, 1], 1, 2, true),
            Err(FamilyError::KurodaNotIntegral { .. })
        ));
    }

    #[test]
    fn kuroda_k1_instance() {
        // h2(K1) = 2^4/2^9 * h2(q) h2(2q) h(2) h2(rs) h2(2rs) h2(qrs) h2(2qrs)
        // with 1,1,1, h2(rs)=2, 4, and h2(qrs) h2(2qrs) = 4 h2(eta qrs):
        // for h2(eta qrs) = 8 the product gives (1/2) * 2 * 8 = 8
        let subfields = [1, 1, 1, 2, 4, 8, 4];
        let h = kuroda_class_number(&subfields, 16, 3, true).unwrap();
        assert_eq!(h, 8);
    }

    #[test]
    fn rank_interval_examples() {
        // unramified-everywhere hypothetical: t = 1 gives rank 0 at e = 0
        let iv = RankInterval::from_ramified_count(1);
        assert_eq!((iv.lo, iv.hi), (0, 0));
        let iv5 = RankInterval::from_ramified_count(5);
        assert_eq!((iv5.lo, iv5.hi), (2, 4));
    }

    #[test]
    fn ambiguous_for_3_13_61() {
        // K' = Q(sqrt13, sqrt(3*61)) over F' = Q(sqrt13): 3 and 61 split
        // (two primes each), 183 = 3 mod 4 ramifies the inert prime above 2,
        // and 183 > 0 leaves the real places alone: t = 5, rank = 4 - e >= 2.
        let amb = ambiguous_rank_interval(13, 3 * 61).unwrap();
        assert_eq!(amb.t, 5);
        assert_eq!((amb.interval.lo, amb.interval.hi), (2, 4));
    }

    #[test]
    fn ambiguous_gates() {
        assert!(matches!(
            ambiguous_rank_interval(12, 7),
            Err(FamilyError::UnsupportedBase(12))
        ));
        assert!(matches!(
            ambiguous_rank_interval(13, 26),
            Err(FamilyError::UnsupportedExtension(26))
        ));
        // h(Q(sqrt 65)) = 2 is even
        assert!(matches!(
            ambiguous_rank_interval(65, 7),
            Err(FamilyError::EvenBaseClassNumber(65))
        ));
    }

    #[test]
    fn fukuda_examples() {
        assert!(fukuda_stable(8, 8));
        assert!(!fukuda_stable(8, 16));
    }
}
