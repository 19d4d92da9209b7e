//! Indefinite binary quadratic forms: reduction cycles, Gauss composition,
//! and the narrow (form) class group of a positive fundamental discriminant.
//!
//! A form (a, b, c) of discriminant D = b^2 - 4ac > 0 is reduced when
//! 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b. Every class is a
//! cycle of reduced forms under the rho operator; the group is realized by
//! enumerating all reduced forms once, partitioning them into cycles, and
//! composing canonical representatives. All sqrt(D) comparisons are exact
//! integer predicates.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::abelian::{abelian_invariants, AbelianType};
use crate::arith;

use super::QuadError;

/// A primitive indefinite form, stored as the lexicographically smallest
/// (a, b, c) of its reduced cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormClass {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl FormClass {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| arith::primes_below(1 << 16))
}

// exact predicate: x > sqrt(D), for x possibly negative
fn gt_sqrt(x: i128, disc: i128) -> bool {
    x > 0 && x * x > disc
}

// exact predicate: x < sqrt(D)
fn lt_sqrt(x: i128, disc: i128) -> bool {
    x <= 0 || x * x < disc
}

fn is_reduced(a: i128, b: i128, _c: i128, disc: i128) -> bool {
    b > 0 && lt_sqrt(b, disc) && gt_sqrt(b + 2 * a.abs(), disc) && lt_sqrt(2 * a.abs() - b, disc)
}

/// One rho step: (a, b, c) -> (c, b', (b'^2 - D)/(4c)) with b' = -b (mod 2|c|)
/// placed in the reduction window for c.
fn rho(_a: i128, b: i128, c: i128, disc: i128, sqrt_disc: i128) -> (i128, i128, i128) {
    debug_assert_ne!(c, 0, "c = 0 implies square discriminant");
    let m = 2 * c.abs();
    let r = (-b).rem_euclid(m);
    let b_next = if gt_sqrt(c.abs(), disc) {
        // window (-|c|, |c|]
        if r <= c.abs() {
            r
        } else {
            r - m
        }
    } else {
        // window (sqrt(D) - 2|c|, sqrt(D))
        sqrt_disc - (sqrt_disc - r).rem_euclid(m)
    };
    let c_next = (b_next * b_next - disc) / (4 * c);
    debug_assert_eq!((b_next * b_next - disc) % (4 * c), 0);
    (c, b_next, c_next)
}

fn reduce(mut a: i128, mut b: i128, mut c: i128, disc: i128, sqrt_disc: i128) -> (i64, i64, i64) {
    let mut guard = 0u32;
    while !is_reduced(a, b, c, disc) {
        (a, b, c) = rho(a, b, c, disc, sqrt_disc);
        guard += 1;
        assert!(guard < 1_000_000, "reduction failed to terminate");
    }
    (a as i64, b as i64, c as i64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return (a.abs(), a.signum(), 0);
    }
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

// gcd = u*a + v*b + w*c
fn ext_gcd3(a: i128, b: i128, c: i128) -> (i128, i128, i128, i128) {
    let (g1, u1, v1) = ext_gcd(a, b);
    let (g, u2, v2) = ext_gcd(g1, c);
    (g, u2 * u1, u2 * v1, v2)
}

/// Gauss composition of two forms of the same discriminant, reduced.
fn compose_raw(
    f1: (i64, i64, i64),
    f2: (i64, i64, i64),
    disc: i128,
    sqrt_disc: i128,
) -> (i64, i64, i64) {
    let (a1, b1, _c1) = (f1.0 as i128, f1.1 as i128, f1.2 as i128);
    let (a2, b2, c2) = (f2.0 as i128, f2.1 as i128, f2.2 as i128);
    let s = (b1 + b2) / 2;
    let n = (b1 - b2) / 2;
    let (g, _u, v, w) = ext_gcd3(a1, a2, s);
    let a3 = a1 / g * (a2 / g);
    let b_raw = b2 + 2 * (a2 / g) * (v * n - w * c2);
    let two_a3 = 2 * a3;
    let b3 = b_raw.rem_euclid(two_a3.abs());
    let c3 = (b3 * b3 - disc) / (4 * a3);
    debug_assert_eq!((b3 * b3 - disc) % (4 * a3), 0);
    reduce(a3, b3, c3, disc, sqrt_disc)
}

/// The narrow class group Cl+(D) of a positive fundamental discriminant,
/// realized on canonical reduced-cycle representatives.
#[derive(Debug, Clone)]
pub struct NarrowClassGroup {
    pub disc: i64,
    sqrt_disc: i64,
    /// Canonical representative of each class, sorted; index = class id.
    classes: Vec<FormClass>,
    /// Every reduced form of discriminant D, mapped to its class id.
    class_of: HashMap<(i64, i64, i64), usize>,
    /// Elementary divisors of Cl+(D).
    pub structure: AbelianType,
    /// Generating classes matching the structure computation.
    pub generators: Vec<FormClass>,
    principal: usize,
}

/// True iff D is a fundamental discriminant.
pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc.rem_euclid(4) == 1 {
        disc != 1 && arith::is_squarefree(disc.unsigned_abs())
    } else if disc % 4 == 0 {
        let m = disc / 4;
        let r = m.rem_euclid(4);
        (r == 2 || r == 3) && arith::is_squarefree(m.unsigned_abs())
    } else {
        false
    }
}

/// Narrow class group of a positive non-square fundamental discriminant,
/// by full reduced-form enumeration, cycle partition and Gauss composition.
pub fn narrow_class_group(disc: i64) -> Result<NarrowClassGroup, QuadError> {
    if disc <= 0 || !is_fundamental_discriminant(disc) {
        return Err(QuadError::NotFundamental(disc));
    }
    assert!(
        disc < 1 << 40,
        "discriminant exceeds the form engine capacity"
    );
    let d128 = disc as i128;
    let sqrt_disc = num_integer::Roots::sqrt(&disc);
    debug_assert!(sqrt_disc * sqrt_disc != disc, "fundamental => non-square");

    // enumerate all reduced forms
    let mut forms: Vec<(i64, i64, i64)> = Vec::new();
    let b0 = if disc % 2 == 0 { 2 } else { 1 };
    let mut b = b0;
    while b <= sqrt_disc {
        let n = (disc - b * b) / 4; // = |a c|
        for a_abs in divisors_of(n as u64) {
            let a_abs = a_abs as i64;
            let t = 2 * a_abs;
            // sqrt(D) - b < 2|a| < sqrt(D) + b, exactly
            if gt_sqrt((t + b) as i128, d128) && lt_sqrt((t - b) as i128, d128) {
                let c_abs = n / a_abs;
                forms.push((a_abs, b, -c_abs));
                forms.push((-a_abs, b, c_abs));
            }
        }
        b += 2;
    }
    forms.sort_unstable();

    // partition into rho cycles
    let mut cycle_id: HashMap<(i64, i64, i64), usize> = HashMap::new();
    let mut cycles: Vec<Vec<(i64, i64, i64)>> = Vec::new();
    for &f in &forms {
        if cycle_id.contains_key(&f) {
            continue;
        }
        let id = cycles.len();
        let mut cyc = Vec::new();
        let mut cur = f;
        loop {
            cycle_id.insert(cur, id);
            cyc.push(cur);
            let (a, b, c) = (cur.0 as i128, cur.1 as i128, cur.2 as i128);
            let (na, nb, nc) = rho(a, b, c, d128, sqrt_disc as i128);
            debug_assert!(is_reduced(na, nb, nc, d128));
            cur = (na as i64, nb as i64, nc as i64);
            if cur == f {
                break;
            }
        }
        cycles.push(cyc);
    }

    // canonical representatives, sorted for a deterministic class indexing
    let mut reps: Vec<(i64, i64, i64)> = cycles
        .iter()
        .map(|cyc| *cyc.iter().min().expect("nonempty cycle"))
        .collect();
    reps.sort_unstable();
    let rep_index: HashMap<(i64, i64, i64), usize> =
        reps.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut class_of: HashMap<(i64, i64, i64), usize> = HashMap::with_capacity(forms.len());
    for cyc in &cycles {
        let rep = *cyc.iter().min().unwrap();
        let id = rep_index[&rep];
        for &f in cyc {
            class_of.insert(f, id);
        }
    }
    let classes: Vec<FormClass> = reps
        .iter()
        .map(|&(a, b, c)| FormClass { a, b, c })
        .collect();

    let bp: i128 = if disc % 2 == 0 { 0 } else { 1 };
    let principal_form = reduce(1, bp, (bp * bp - d128) / 4, d128, sqrt_disc as i128);
    let principal = class_of[&principal_form];

    let mut group = NarrowClassGroup {
        disc,
        sqrt_disc,
        classes,
        class_of,
        structure: AbelianType::trivial(),
        generators: Vec::new(),
        principal,
    };
    let (structure, gen_ids) =
        abelian_invariants(group.classes.len(), principal, |i, j| group.compose(i, j));
    group.generators = gen_ids.iter().map(|&i| group.classes[i]).collect();
    group.structure = structure;
    debug_assert_eq!(group.structure.order(), group.classes.len() as u64);
    Ok(group)
}

impl NarrowClassGroup {
    pub fn h_plus(&self) -> u64 {
        self.classes.len() as u64
    }

    pub fn classes(&self) -> &[FormClass] {
        &self.classes
    }

    pub fn identity(&self) -> usize {
        self.principal
    }

    /// Class id of an arbitrary form of this discriminant.
    pub fn class_index_of(&self, a: i64, b: i64, c: i64) -> usize {
        debug_assert_eq!(
            b as i128 * b as i128 - 4 * a as i128 * c as i128,
            self.disc as i128
        );
        let f = reduce(
            a as i128,
            b as i128,
            c as i128,
            self.disc as i128,
            self.sqrt_disc as i128,
        );
        self.class_of[&f]
    }

    /// Composition on class ids.
    pub fn compose(&self, i: usize, j: usize) -> usize {
        let f1 = self.classes[i];
        let f2 = self.classes[j];
        let f = compose_raw(
            (f1.a, f1.b, f1.c),
            (f2.a, f2.b, f2.c),
            self.disc as i128,
            self.sqrt_disc as i128,
        );
        self.class_of[&f]
    }

    /// Class id of the inverse (a, -b, c).
    pub fn inverse(&self, i: usize) -> usize {
        let f = self.classes[i];
        self.class_index_of(f.a, -f.b, f.c)
    }

    /// Class of the form with leading coefficient -1; principal exactly when
    /// the fundamental unit has norm -1.
    pub fn negative_class(&self) -> usize {
        let bp: i128 = if self.disc % 2 == 0 { 0 } else { 1 };
        let c = (self.disc as i128 - bp * bp) / 4;
        let f = reduce(-1, bp, c, self.disc as i128, self.sqrt_disc as i128);
        self.class_of[&f]
    }

    /// Structure and order of Cl+(D) / <negative class>, the ordinary class
    /// group when the fundamental unit has norm +1.
    pub(crate) fn quotient_by_negative_class(&self) -> (AbelianType, u64) {
        let j = self.negative_class();
        assert_ne!(
            j, self.principal,
            "negative class is principal: norm must be -1"
        );
        assert_eq!(self.compose(j, j), self.principal);
        let n = self.classes.len();
        let orbit_rep: Vec<usize> = (0..n).map(|i| i.min(self.compose(i, j))).collect();
        let mut reps: Vec<usize> = orbit_rep.to_vec();
        reps.sort_unstable();
        reps.dedup();
        let index_of: HashMap<usize, usize> =
            reps.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let mul = |x: usize, y: usize| index_of[&orbit_rep[self.compose(reps[x], reps[y])]];
        let id = index_of[&orbit_rep[self.principal]];
        let (structure, _) = abelian_invariants(reps.len(), id, mul);
        (structure, reps.len() as u64)
    }
}

fn divisors_of(n: u64) -> Vec<u64> {
    debug_assert!(n > 0);
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    let mut divs = vec![1u64];
    for (p, e) in factors {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs
}
