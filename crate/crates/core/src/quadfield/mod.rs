//! Real quadratic field invariants: fundamental units, narrow and ordinary
//! class groups via binary quadratic forms, 2-class numbers, prime splitting.

mod forms;
mod unit;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::abelian::AbelianType;
use crate::arith;

pub use forms::{is_fundamental_discriminant, narrow_class_group, FormClass, NarrowClassGroup};
pub use unit::{fundamental_unit, fundamental_unit_capped, unit_norm, QuadUnit, DEFAULT_DIGIT_CAP};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuadError {
    #[error("d = {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("d = {0} is out of range (require squarefree d > 1)")]
    OutOfRange(u64),
    #[error("{0} is not a fundamental discriminant > 0")]
    NotFundamental(i64),
    #[error("continued fraction of sqrt({0}) exceeded the iteration guard")]
    PeriodOverflow(u64),
    #[error("fundamental unit of Q(sqrt({d})) exceeds {digit_cap} decimal digits")]
    UnitTooLarge { d: u64, digit_cap: u64 },
}

/// Class group data of a real quadratic field Q(sqrt(d)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassData {
    pub d: u64,
    /// Ordinary class number.
    pub h: u64,
    /// Narrow class number; h_plus = h when N(eps_d) = -1, else 2h.
    pub h_plus: u64,
    /// Structure of the ordinary class group.
    pub group: AbelianType,
    /// Sylow 2-subgroup of the ordinary class group.
    pub two_sylow: AbelianType,
    /// 2-part of h.
    pub h2: u64,
}

/// Fundamental discriminant of Q(sqrt(d)) for squarefree d.
pub fn fundamental_discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// Ordinary class group of Q(sqrt(d)) for squarefree d > 1.
///
/// Computed as the narrow (form) class group when the fundamental unit has
/// norm -1, and as its quotient by the class of the form with leading
/// coefficient -1 otherwise. Results are memoized behind a mutex.
pub fn class_group(d: u64) -> Result<ClassData, QuadError> {
    static CACHE: OnceLock<Mutex<HashMap<u64, ClassData>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&d) {
        return Ok(hit.clone());
    }

    if d <= 1 {
        return Err(QuadError::OutOfRange(d));
    }
    if !arith::is_squarefree(d) {
        return Err(QuadError::NotSquarefree(d));
    }
    let disc = fundamental_discriminant(d as i64);
    let narrow = narrow_class_group(disc)?;
    let norm = unit::unit_norm(d)?;
    let (group, h) = if norm == -1 {
        (narrow.structure.clone(), narrow.h_plus())
    } else {
        let (g, h) = narrow.quotient_by_negative_class();
        (g, h)
    };
    let h_plus = narrow.h_plus();
    assert!(h_plus == h || h_plus == 2 * h);
    assert_eq!(group.order(), h);
    let two_sylow = group.two_sylow();
    let h2 = two_sylow.order();
    let data = ClassData {
        d,
        h,
        h_plus,
        group,
        two_sylow,
        h2,
    };
    cache.lock().unwrap().insert(d, data.clone());
    Ok(data)
}

/// 2-part of the ordinary class number of Q(sqrt(d)).
pub fn h2(d: u64) -> Result<u64, QuadError> {
    Ok(class_group(d)?.h2)
}

/// A place of Q: a finite prime or the archimedean place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Place {
    Finite(u64),
    Infinite,
}

/// Splitting behaviour of a place in a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Splitting of a place in Q(sqrt(d)), d squarefree, via Kronecker-style
/// criteria on the fundamental discriminant.
pub fn prime_splitting(place: Place, d: i64) -> Splitting {
    debug_assert!(d != 0 && d != 1);
    let disc = fundamental_discriminant(d);
    match place {
        Place::Infinite => {
            if d > 0 {
                Splitting::Split
            } else {
                Splitting::Ramified
            }
        }
        Place::Finite(2) => match disc.rem_euclid(8) {
            0 | 4 => Splitting::Ramified,
            1 => Splitting::Split,
            5 => Splitting::Inert,
            _ => unreachable!("fundamental discriminant is 0 or 1 mod 4"),
        },
        Place::Finite(p) => {
            debug_assert!(arith::is_prime_u64(p));
            if disc.rem_euclid(p as i64) == 0 {
                return Splitting::Ramified;
            }
            let residue = disc.rem_euclid(p as i64) as u64;
            match arith::legendre_u64(residue, p) {
                1 => Splitting::Split,
                -1 => Splitting::Inert,
                _ => unreachable!(),
            }
        }
    }
}
