//! Concrete finite metacyclic and modular 2-groups.
//!
//! Metacyclic-nonmodular groups with abelianization Z/2 x Z/2^n come in four
//! presentation types on generators a, b:
//!
//!   type 1: a^(2^alpha) = 1, b^(2^n) = 1,               b^-1 a b = a^-1
//!   type 2: a^(2^alpha) = 1, b^(2^n) = a^(2^(alpha-1)), b^-1 a b = a^-1
//!   type 3: a^(2^alpha) = 1, b^(2^n) = 1,               b^-1 a b = a^(-1 + k 2^s)
//!   type 4: a^(2^alpha) = 1, b^(2^n) = a^(2^(alpha-1)), b^-1 a b = a^(-1 + k 2^s)
//!
//! with alpha > 1, alpha > s > 1, k odd. Elements are stored in the normal
//! form a^i b^j; multiplication folds b^(2^n) into the a-power for types 2
//! and 4. Group axioms and the defining relations are checked on
//! construction (full associativity table up to order 2^8, sampled above).

mod subgroups;
mod tables;

use thiserror::Error;

pub use subgroups::{
    abelianization, derived_subgroup, enumerate_subgroups, is_minimal, standard_subgroups,
    StandardSubgroups, Subgroup,
};
pub use tables::{sweep_tables, verify_table_row, RowOutcome, TableRow};

use crate::abelian::AbelianType;

/// Hard capacity for constructed groups (order 2^12); enumeration-based
/// operations have tighter bounds of their own.
pub const MAX_GROUP_ORDER: u64 = 1 << 12;

/// Order bound for full-subgroup enumeration.
pub const MAX_ENUM_ORDER: u64 = 1 << 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid metacyclic parameters: {0}")]
    BadPresentation(String),
    #[error("modular groups need order 2^m with m > 3, got m = {0}")]
    ModularOrder(u32),
    #[error("group order {order} exceeds the capacity bound {bound}")]
    Capacity { order: u64, bound: u64 },
    #[error("predicate requires a non-abelian group")]
    AbelianInput,
    #[error("rank {0} out of range {{1, 2}}")]
    RankOutOfRange(u32),
    #[error("no table row covers {0}")]
    NotCovered(String),
}

/// Parameters of a metacyclic-nonmodular presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MetacyclicParams {
    pub gtype: u8,
    pub alpha: u32,
    pub n: u32,
    /// Conjugation twist, only for types 3 and 4 (alpha > s > 1, k odd).
    pub s: Option<u32>,
    pub k: Option<u64>,
}

impl MetacyclicParams {
    pub fn type12(gtype: u8, alpha: u32, n: u32) -> Self {
        MetacyclicParams {
            gtype,
            alpha,
            n,
            s: None,
            k: None,
        }
    }

    pub fn type34(gtype: u8, alpha: u32, n: u32, s: u32, k: u64) -> Self {
        MetacyclicParams {
            gtype,
            alpha,
            n,
            s: Some(s),
            k: Some(k),
        }
    }

    pub fn order(&self) -> u64 {
        1u64 << (self.alpha + self.n)
    }

    fn validate(&self) -> Result<(), GroupError> {
        let bad = |msg: String| Err(GroupError::BadPresentation(msg));
        if !(1..=4).contains(&self.gtype) {
            return bad(format!("type {} not in 1..=4", self.gtype));
        }
        if self.alpha < 2 {
            return bad(format!(
                "alpha = {} but the presentation needs alpha > 1",
                self.alpha
            ));
        }
        if self.n < 2 {
            return bad(format!(
                "n = {} but the abelianization needs n >= 2",
                self.n
            ));
        }
        match self.gtype {
            1 | 2 => {
                if self.s.is_some() || self.k.is_some() {
                    return bad("types 1 and 2 take no (s, k)".into());
                }
            }
            _ => {
                let (Some(s), Some(k)) = (self.s, self.k) else {
                    return bad("types 3 and 4 need (s, k)".into());
                };
                if !(s > 1 && self.alpha > s) {
                    return bad(format!(
                        "need alpha > s > 1, got alpha = {}, s = {s}",
                        self.alpha
                    ));
                }
                if k % 2 == 0 {
                    return bad(format!("k = {k} must be odd"));
                }
            }
        }
        Ok(())
    }

    /// Conjugation exponent t with b^-1 a b = a^t, reduced mod 2^alpha.
    pub fn conj_exponent(&self) -> u64 {
        let modulus = 1u64 << self.alpha;
        match self.gtype {
            1 | 2 => modulus - 1,
            _ => {
                let s = self.s.expect("validated");
                let k = self.k.expect("validated") % (1 << (self.alpha - s));
                (modulus - 1 + k * (1 << s)) % modulus
            }
        }
    }

    /// Folded power c with b^(2^n) = a^c.
    pub fn fold_power(&self) -> u64 {
        match self.gtype {
            1 | 3 => 0,
            _ => 1u64 << (self.alpha - 1),
        }
    }
}

enum Law {
    /// a^i b^j with i mod 2^alpha, j mod 2^n; conjugation by b acts on a
    /// through `t_inv_pow[j]`, and overflowing b-exponents fold a^c in.
    Packed {
        alpha_mod: u64,
        n_mod: u64,
        fold: u64,
        /// (t^-1)^j mod 2^alpha for j < 2^n
        t_inv_pow: Vec<u64>,
    },
    Table {
        n: usize,
        mul: Vec<u16>,
    },
}

/// A concrete finite group of 2-power order on element indices 0..order.
pub struct FiniteGroup {
    law: Law,
    order: u64,
    inverse: Vec<u16>,
    /// Designated generators (a, b) when the group came from a presentation.
    designated: Option<(u16, u16)>,
    pub metacyclic: Option<MetacyclicParams>,
}

fn mod_inverse_pow2(t: u64, modulus: u64) -> u64 {
    // Newton iteration; t odd
    let mut inv = 1u64;
    for _ in 0..7 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(t.wrapping_mul(inv)));
    }
    inv % modulus
}

/// Build the metacyclic group of a validated parameter tuple.
pub fn build_metacyclic(params: MetacyclicParams) -> Result<FiniteGroup, GroupError> {
    params.validate()?;
    let order = params.order();
    if order > MAX_GROUP_ORDER {
        return Err(GroupError::Capacity {
            order,
            bound: MAX_GROUP_ORDER,
        });
    }
    let alpha_mod = 1u64 << params.alpha;
    let n_mod = 1u64 << params.n;
    let t = params.conj_exponent();
    let c = params.fold_power();
    // consistency: conjugation by b must fix a^c, i.e. c (t - 1) = 0 mod 2^alpha
    if (c * (t + alpha_mod - 1)) % alpha_mod != 0 {
        return Err(GroupError::BadPresentation(format!(
            "b^(2^n) = a^{c} is not central under t = {t}"
        )));
    }
    let t_inv = mod_inverse_pow2(t, alpha_mod);
    let mut t_inv_pow = Vec::with_capacity(n_mod as usize);
    let mut acc = 1u64;
    for _ in 0..n_mod {
        t_inv_pow.push(acc);
        acc = (acc * t_inv) % alpha_mod;
    }
    let law = Law::Packed {
        alpha_mod,
        n_mod,
        fold: c,
        t_inv_pow,
    };
    let a = (1u64 << params.n) as u16; // a = (i, j) = (1, 0)
    let b = 1u16; // b = (0, 1)
    let group = FiniteGroup {
        law,
        order,
        inverse: Vec::new(),
        designated: Some((a, b)),
        metacyclic: Some(params),
    };
    let group = group.finish()?;

    // defining relations, evaluated in the built table
    let id = group.id();
    assert_eq!(group.pow(a, alpha_mod), id, "a^(2^alpha) = 1");
    assert_eq!(group.pow(b, n_mod), group.pow(a, c), "b^(2^n) = a^c");
    let lhs = group.mul(group.mul(group.inv(b), a), b);
    assert_eq!(lhs, group.pow(a, t), "b^-1 a b = a^t");
    Ok(group)
}

/// Build the modular group of order 2^m: a^2 = b^(2^(m-1)) = 1 and
/// [a, b] = b^(2^(m-2)); equivalently a^-1 b a = b^(1 + 2^(m-2)).
pub fn build_modular(m: u32) -> Result<FiniteGroup, GroupError> {
    if m <= 3 {
        return Err(GroupError::ModularOrder(m));
    }
    let order = 1u64 << m;
    if order > MAX_GROUP_ORDER {
        return Err(GroupError::Capacity {
            order,
            bound: MAX_GROUP_ORDER,
        });
    }
    let jmod = 1u64 << (m - 1);
    let t = (1 + (1u64 << (m - 2))) % jmod;
    let n = order as usize;
    let idx = |i: u64, j: u64| (i * jmod + j) as usize;
    let mut mul = vec![0u16; n * n];
    for i1 in 0..2u64 {
        for j1 in 0..jmod {
            for i2 in 0..2u64 {
                for j2 in 0..jmod {
                    // a^i1 b^j1 * a^i2 b^j2 = a^(i1+i2) b^(j1 t^i2 + j2)
                    let tw = if i2 == 1 { (j1 * t) % jmod } else { j1 };
                    let v = idx((i1 + i2) % 2, (tw + j2) % jmod);
                    mul[idx(i1, j1) * n + idx(i2, j2)] = v as u16;
                }
            }
        }
    }
    let a = idx(1, 0) as u16;
    let b = idx(0, 1) as u16;
    let group = FiniteGroup {
        law: Law::Table { n, mul },
        order,
        inverse: Vec::new(),
        designated: Some((a, b)),
        metacyclic: None,
    };
    let group = group.finish()?;
    let id = group.id();
    assert_eq!(group.pow(a, 2), id);
    assert_eq!(group.pow(b, jmod), id);
    let comm = group.commutator(a, b);
    assert_eq!(comm, group.pow(b, 1 << (m - 2)), "[a,b] = b^(2^(m-2))");
    Ok(group)
}

/// Build a group from an explicit multiplication table (row-major, indices).
/// Index 0 must be the identity.
pub fn build_from_table(mul: Vec<Vec<u16>>) -> Result<FiniteGroup, GroupError> {
    let n = mul.len();
    assert!(
        n > 0 && mul.iter().all(|r| r.len() == n),
        "square table required"
    );
    let flat: Vec<u16> = mul.into_iter().flatten().collect();
    let group = FiniteGroup {
        law: Law::Table { n, mul: flat },
        order: n as u64,
        inverse: Vec::new(),
        designated: None,
        metacyclic: None,
    };
    group.finish()
}

impl FiniteGroup {
    fn finish(mut self) -> Result<FiniteGroup, GroupError> {
        self.verify_axioms()?;
        let n = self.order as usize;
        let mut inverse = vec![u16::MAX; n];
        for x in 0..n as u16 {
            if inverse[x as usize] != u16::MAX {
                continue;
            }
            let y = (0..n as u16)
                .find(|&y| self.mul(x, y) == self.id())
                .expect("every element has an inverse");
            inverse[x as usize] = y;
            inverse[y as usize] = x;
        }
        self.inverse = inverse;
        Ok(self)
    }

    fn verify_axioms(&self) -> Result<(), GroupError> {
        let n = self.order as usize;
        let id = self.id();
        for x in 0..n as u16 {
            if self.mul(id, x) != x || self.mul(x, id) != x {
                return Err(GroupError::BadPresentation("identity fails".into()));
            }
            if (0..n as u16).all(|y| self.mul(x, y) != id) {
                return Err(GroupError::BadPresentation("missing inverse".into()));
            }
        }
        if n <= 256 {
            for x in 0..n as u16 {
                for y in 0..n as u16 {
                    for z in 0..n as u16 {
                        if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                            return Err(GroupError::BadPresentation("associativity fails".into()));
                        }
                    }
                }
            }
        } else {
            // deterministic sample
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..20_000 {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let x = ((state >> 16) % self.order) as u16;
                let y = ((state >> 32) % self.order) as u16;
                let z = ((state >> 48) % self.order) as u16;
                if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                    return Err(GroupError::BadPresentation("associativity fails".into()));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn id(&self) -> u16 {
        0
    }

    /// Designated generators (a, b) of a presented group.
    pub fn generators(&self) -> Option<(u16, u16)> {
        self.designated
    }

    pub fn mul(&self, x: u16, y: u16) -> u16 {
        match &self.law {
            Law::Packed {
                alpha_mod,
                n_mod,
                fold,
                t_inv_pow,
            } => {
                let (i1, j1) = (x as u64 / n_mod, x as u64 % n_mod);
                let (i2, j2) = (y as u64 / n_mod, y as u64 % n_mod);
                let jsum = j1 + j2;
                let carry = jsum / n_mod;
                let i = (i1 + i2 * t_inv_pow[j1 as usize] + fold * carry) % alpha_mod;
                (i * n_mod + jsum % n_mod) as u16
            }
            Law::Table { n, mul } => mul[x as usize * n + y as usize],
        }
    }

    pub fn inv(&self, x: u16) -> u16 {
        self.inverse[x as usize]
    }

    pub fn pow(&self, x: u16, e: u64) -> u16 {
        let mut acc = self.id();
        let mut base = x;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: u16) -> u64 {
        let mut acc = x;
        let mut n = 1;
        while acc != self.id() {
            acc = self.mul(acc, x);
            n += 1;
        }
        n
    }

    /// [x, y] = x^-1 y^-1 x y.
    pub fn commutator(&self, x: u16, y: u16) -> u16 {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> + '_ {
        0..self.order as u16
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order as u16;
        (0..n).all(|x| (x..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Abelianization of the whole group.
    pub fn abelianization(&self) -> AbelianType {
        let all: Vec<u16> = self.elements().collect();
        let sub = Subgroup::from_elements(self, all);
        abelianization(self, &sub)
    }
}

/// Classification from the three 2-ranks of the index-2 layers: all three
/// equal to 2 forces metacyclic-nonmodular; rank 2 at the third position
/// with a 1 among the first two forces modular-or-abelian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankClassification {
    MetacyclicNonmodular,
    ModularOrAbelian,
    Other,
}

pub fn classify_from_ranks(
    rank12: u32,
    rank22: u32,
    rank32: u32,
) -> Result<RankClassification, GroupError> {
    for r in [rank12, rank22, rank32] {
        if r != 1 && r != 2 {
            return Err(GroupError::RankOutOfRange(r));
        }
    }
    Ok(if rank12 == 2 && rank22 == 2 && rank32 == 2 {
        RankClassification::MetacyclicNonmodular
    } else if rank32 == 2 && (rank12 == 1 || rank22 == 1) {
        RankClassification::ModularOrAbelian
    } else {
        RankClassification::Other
    })
}
