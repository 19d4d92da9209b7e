//! Integer arithmetic primitives: primality, residue symbols, exact square
//! detection, the Kronecker delta and Smith normal form.
//!
//! All operations are pure and exact. `u64` fast paths are used where the
//! inputs provably fit; everything else goes through `num_bigint`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

/// Value of a quadratic or quartic residue symbol.
///
/// Quartic symbols never take the value `Zero` under their preconditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolValue {
    MinusOne,
    Zero,
    PlusOne,
}

impl SymbolValue {
    pub fn as_i32(self) -> i32 {
        match self {
            SymbolValue::MinusOne => -1,
            SymbolValue::Zero => 0,
            SymbolValue::PlusOne => 1,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(BigInt),
    #[error("quartic symbol undefined: p = {p} must be 1 mod 4 and (a/p) must be +1")]
    QuarticUndefined { p: BigInt },
}

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

// Deterministic for all n < 2^64 with this base set.
const MILLER_RABIN_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn miller_rabin_u64(n: u64, base: u64) -> bool {
    let a = base % n;
    if a == 0 {
        return true;
    }
    let d = n - 1;
    let r = d.trailing_zeros();
    let d = d >> r;
    let mut x = powmod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..r {
        x = mulmod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Primality test for `u64` inputs: deterministic Miller-Rabin.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    MILLER_RABIN_BASES_U64
        .iter()
        .all(|&b| miller_rabin_u64(n, b))
}

fn miller_rabin_big(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let a = base % n;
    if a.is_zero() {
        return true;
    }
    let r = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> r;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    for _ in 1..r {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Primality test on arbitrary-precision integers.
///
/// Deterministic below 2^64; above that, 64 Miller-Rabin rounds with bases
/// drawn from a ChaCha stream seeded from the input (error < 2^-128).
pub fn is_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let n = n.magnitude().clone();
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    for p in [
        3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
    ] {
        if (&n % p).is_zero() {
            return false;
        }
    }
    let mut seed = [0u8; 32];
    for (i, byte) in n.to_bytes_le().iter().enumerate().take(32) {
        seed[i] ^= *byte;
    }
    let mut rng = ChaCha20Rng::from_seed(seed);
    let span = &n - &two;
    let bits = span.bits();
    for _ in 0..64 {
        // uniform-enough base in [2, n-1]
        let mut raw = BigUint::zero();
        for _ in 0..bits.div_ceil(32) + 1 {
            raw = (raw << 32) | BigUint::from(rng.r#gen::<u32>());
        }
        let base = two.clone() + raw % &span;
        if !miller_rabin_big(&n, &base) {
            return false;
        }
    }
    true
}

/// Primes below `bound`, by sieve of Eratosthenes.
pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound <= 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Factor `n` by trial division, returning (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// True iff `n` has no repeated prime factor.
pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

// ---------------------------------------------------------------------------
// Residue symbols
// ---------------------------------------------------------------------------

/// Legendre symbol (a/p) by Euler's criterion. `p` must be an odd prime.
pub fn legendre_symbol(a: &BigInt, p: &BigInt) -> Result<SymbolValue, ArithError> {
    if p.is_even() || !is_prime(p) {
        return Err(ArithError::NotOddPrime(p.clone()));
    }
    Ok(legendre_unchecked(a, p))
}

/// Legendre symbol without the primality check, for callers that already
/// know `p` is an odd prime.
pub fn legendre_unchecked(a: &BigInt, p: &BigInt) -> SymbolValue {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return SymbolValue::Zero;
    }
    let e = (p - BigInt::one()) / BigInt::from(2);
    let r = a.modpow(&e, p);
    if r.is_one() {
        SymbolValue::PlusOne
    } else {
        debug_assert_eq!(&r + BigInt::one(), *p);
        SymbolValue::MinusOne
    }
}

/// Legendre symbol on machine integers; `p` must be an odd prime.
pub fn legendre_u64(a: u64, p: u64) -> i32 {
    debug_assert!(p > 2 && is_prime_u64(p));
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let r = powmod_u64(a, (p - 1) / 2, p);
    if r == 1 {
        1
    } else {
        debug_assert_eq!(r, p - 1);
        -1
    }
}

/// Quartic residue symbol (a/p)_4 = a^((p-1)/4) mod p, normalized to {-1, +1}.
///
/// Defined only when p = 1 mod 4 and (a/p) = +1.
pub fn quartic_symbol(a: &BigInt, p: &BigInt) -> Result<SymbolValue, ArithError> {
    if !is_prime(p) || p.is_even() {
        return Err(ArithError::NotOddPrime(p.clone()));
    }
    if (p % BigInt::from(4)) != BigInt::one() || legendre_unchecked(a, p) != SymbolValue::PlusOne {
        return Err(ArithError::QuarticUndefined { p: p.clone() });
    }
    let e = (p - BigInt::one()) / BigInt::from(4);
    let r = a.modpow(&e, p);
    if r.is_one() {
        Ok(SymbolValue::PlusOne)
    } else {
        debug_assert_eq!(&r + BigInt::one(), *p);
        Ok(SymbolValue::MinusOne)
    }
}

/// Quartic symbol on machine integers; preconditions as [`quartic_symbol`].
pub fn quartic_u64(a: u64, p: u64) -> i32 {
    debug_assert!(p % 4 == 1 && legendre_u64(a, p) == 1);
    let r = powmod_u64(a % p, (p - 1) / 4, p);
    if r == 1 {
        1
    } else {
        debug_assert_eq!(r, p - 1);
        -1
    }
}

/// Kronecker delta: 1 iff a = b.
pub fn kronecker_delta(a: u64, b: u64) -> u32 {
    u32::from(a == b)
}

// ---------------------------------------------------------------------------
// Exact squares
// ---------------------------------------------------------------------------

/// Floor of the integer square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative integer");
    n.sqrt()
}

/// If `n` is a perfect square, return its non-negative square root.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let t = n.sqrt();
    if &(&t * &t) == n {
        Some(t)
    } else {
        None
    }
}

/// True iff `n` = t^2 for some integer t >= 0.
pub fn is_perfect_square(n: &BigInt) -> bool {
    exact_sqrt(n).is_some()
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// Smith normal form of a rectangular integer matrix.
///
/// Returns the nonzero invariant factors d_1 | d_2 | ... The cokernel of the
/// matrix (rows as relations on Z^cols) is Z/d_1 x ... x Z/d_r x Z^(cols - r).
pub fn smith_normal_form(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    if matrix.is_empty() || matrix[0].is_empty() {
        return Vec::new();
    }
    let rows = matrix.len();
    let cols = matrix[0].len();
    assert!(
        matrix.iter().all(|r| r.len() == cols),
        "ragged matrix in smith_normal_form"
    );
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut diag: Vec<BigInt> = Vec::new();

    let mut top = 0usize;
    while top < rows.min(cols) {
        // locate a pivot: smallest nonzero magnitude in the working block
        let mut pivot: Option<(usize, usize)> = None;
        for i in top..rows {
            for j in top..cols {
                if !m[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(top, pj);
        }

        let mut clean = true;
        for i in top + 1..rows {
            if !m[i][top].is_zero() {
                let q = m[i][top].div_floor(&m[top][top]);
                for j in top..cols {
                    let v = &m[top][j] * &q;
                    m[i][j] -= v;
                }
                if !m[i][top].is_zero() {
                    clean = false;
                }
            }
        }
        for j in top + 1..cols {
            if !m[top][j].is_zero() {
                let q = m[top][j].div_floor(&m[top][top]);
                for i in top..rows {
                    let v = &m[i][top] * &q;
                    m[i][j] -= v;
                }
                if !m[top][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // remainders became new smaller candidates; re-pivot
        }
        // pivot must divide the rest of the block
        let mut offender = None;
        'scan: for i in top + 1..rows {
            for j in top + 1..cols {
                if !(&m[i][j] % &m[top][top]).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            let extra: Vec<BigInt> = m[i][top..].to_vec();
            for (j, v) in extra.into_iter().enumerate() {
                m[top][top + j] += v;
            }
            continue;
        }
        diag.push(m[top][top].abs());
        top += 1;
    }

    diag.retain(|d| !d.is_zero());
    // enforce the divisibility chain
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            if !(&diag[j] % &diag[i]).is_zero() {
                let g = diag[i].gcd(&diag[j]);
                let l = (&diag[i] * &diag[j]) / &g;
                diag[i] = g;
                diag[j] = l;
            }
        }
    }
    diag
}
