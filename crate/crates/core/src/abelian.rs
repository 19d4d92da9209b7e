//! Finite abelian group structure as elementary divisor chains.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::arith::smith_normal_form;

/// A finite abelian group given by its elementary divisors d_1 | d_2 | ...,
/// each >= 2. The empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianType(Vec<u64>);

impl AbelianType {
    /// Build from a divisor list; 1s are dropped, the chain is checked.
    pub fn new(mut divisors: Vec<u64>) -> Self {
        divisors.retain(|&d| d > 1);
        divisors.sort_unstable();
        for w in divisors.windows(2) {
            assert!(w[1] % w[0] == 0, "not a divisor chain: {divisors:?}");
        }
        AbelianType(divisors)
    }

    pub fn trivial() -> Self {
        AbelianType(Vec::new())
    }

    pub fn divisors(&self) -> &[u64] {
        &self.0
    }

    pub fn order(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    /// The Sylow 2-subgroup: the 2-part of each divisor.
    pub fn two_sylow(&self) -> AbelianType {
        AbelianType::new(self.0.iter().map(|&d| 1u64 << d.trailing_zeros()).collect())
    }
}

impl fmt::Display for AbelianType {
    /// Renders as "2x4"-style divisor strings; the trivial group is "1".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl Serialize for AbelianType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Structure of a finite abelian group presented by a multiplication oracle
/// on element indices `0..order`, via generator stages and Smith normal form.
///
/// Returns the invariants together with the generating elements picked.
pub(crate) fn abelian_invariants(
    order: usize,
    id: usize,
    mul: impl Fn(usize, usize) -> usize,
) -> (AbelianType, Vec<usize>) {
    assert!(order >= 1);
    let mut gens: Vec<usize> = Vec::new();
    // span: element -> exponent vector over gens
    let mut span: HashMap<usize, Vec<i64>> = HashMap::new();
    span.insert(id, Vec::new());
    let mut rows: Vec<Vec<BigInt>> = Vec::new();

    while span.len() < order {
        let g = (0..order)
            .find(|e| !span.contains_key(e))
            .expect("span smaller than order");
        // order of g modulo the current span
        let mut d = 1usize;
        let mut pow = g;
        while !span.contains_key(&pow) {
            pow = mul(pow, g);
            d += 1;
        }
        let base_vec = span[&pow].clone();
        // relation: g^d = prod gens^base_vec
        let mut row: Vec<i64> = base_vec.clone();
        row.resize(gens.len(), 0);
        row.iter_mut().for_each(|v| *v = -*v);
        row.push(d as i64);
        rows.push(row.iter().map(|&v| BigInt::from(v)).collect());

        // extend the span by powers of g
        let old: Vec<(usize, Vec<i64>)> = span.iter().map(|(k, v)| (*k, v.clone())).collect();
        for (x, vx) in old {
            let mut acc = x;
            for e in 1..d {
                acc = mul(acc, g);
                let mut v = vx.clone();
                v.resize(gens.len(), 0);
                v.push(e as i64);
                span.insert(acc, v);
            }
        }
        for v in span.values_mut() {
            v.resize(gens.len() + 1, 0);
        }
        gens.push(g);
    }

    if gens.is_empty() {
        return (AbelianType::trivial(), gens);
    }
    let width = gens.len();
    for row in rows.iter_mut() {
        row.resize(width, BigInt::from(0));
    }
    let snf = smith_normal_form(&rows);
    assert_eq!(snf.len(), width, "relation lattice must have full rank");
    let divisors: Vec<u64> = snf
        .iter()
        .map(|d| d.to_u64().expect("divisor fits u64"))
        .collect();
    (AbelianType::new(divisors), gens)
}
