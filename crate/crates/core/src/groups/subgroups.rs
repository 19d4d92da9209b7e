//! Subgroups, derived subgroups, abelianizations and the distinguished
//! subgroups H_i2 / H_i4 of a two-generator 2-group.

use std::collections::{BTreeSet, HashSet};

use crate::abelian::{abelian_invariants, AbelianType};

use super::{FiniteGroup, GroupError, MAX_ENUM_ORDER};

/// A subgroup of a parent group, held as a sorted element list plus the
/// generator witnesses it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<u16>,
    generators: Vec<u16>,
}

impl Subgroup {
    /// Closure of a generating set.
    pub fn generate(group: &FiniteGroup, generators: &[u16]) -> Subgroup {
        let mut seen: BTreeSet<u16> = BTreeSet::new();
        seen.insert(group.id());
        let mut frontier: Vec<u16> = vec![group.id()];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                for y in [group.mul(x, g), group.mul(x, group.inv(g))] {
                    if seen.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
        Subgroup {
            elements: seen.into_iter().collect(),
            generators: generators.to_vec(),
        }
    }

    /// Wrap an element list already known to be closed.
    pub fn from_elements(group: &FiniteGroup, mut elements: Vec<u16>) -> Subgroup {
        elements.sort_unstable();
        elements.dedup();
        debug_assert!(elements.contains(&group.id()));
        let generators = elements.clone();
        Subgroup {
            elements,
            generators,
        }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[u16] {
        &self.elements
    }

    pub fn generators(&self) -> &[u16] {
        &self.generators
    }

    pub fn contains(&self, x: u16) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn index_in(&self, group: &FiniteGroup) -> u64 {
        group.order() / self.order()
    }

    pub fn is_abelian(&self, group: &FiniteGroup) -> bool {
        self.elements.iter().all(|&x| {
            self.elements
                .iter()
                .all(|&y| group.mul(x, y) == group.mul(y, x))
        })
    }

    /// Derived subgroup of this subgroup as an abstract group: generated by
    /// all commutators of its elements (that set is conjugation-closed, so
    /// plain closure suffices).
    pub fn derived(&self, group: &FiniteGroup) -> Subgroup {
        let mut comms: BTreeSet<u16> = BTreeSet::new();
        for &x in &self.elements {
            for &y in &self.elements {
                comms.insert(group.commutator(x, y));
            }
        }
        let gens: Vec<u16> = comms.into_iter().collect();
        Subgroup::generate(group, &gens)
    }
}

/// Derived subgroup G' of the whole group.
pub fn derived_subgroup(group: &FiniteGroup) -> Result<Subgroup, GroupError> {
    if group.order() > super::MAX_GROUP_ORDER {
        return Err(GroupError::Capacity {
            order: group.order(),
            bound: super::MAX_GROUP_ORDER,
        });
    }
    let all: Vec<u16> = group.elements().collect();
    Ok(Subgroup::from_elements(group, all).derived(group))
}

/// Structure of H / H' through coset multiplication and Smith normal form.
pub fn abelianization(group: &FiniteGroup, sub: &Subgroup) -> AbelianType {
    let derived = sub.derived(group);
    // cosets of H' in H, labelled by their minimal element
    let mut coset_of = vec![u16::MAX; group.order() as usize];
    let mut reps: Vec<u16> = Vec::new();
    for &x in sub.elements() {
        if coset_of[x as usize] != u16::MAX {
            continue;
        }
        let rep_id = reps.len() as u16;
        for &d in derived.elements() {
            coset_of[group.mul(x, d) as usize] = rep_id;
        }
        reps.push(x);
    }
    let mul = |i: usize, j: usize| coset_of[group.mul(reps[i], reps[j]) as usize] as usize;
    let id = coset_of[group.id() as usize] as usize;
    let (structure, _) = abelian_invariants(reps.len(), id, mul);
    structure
}

/// The six distinguished subgroups of a two-generator group:
/// H12 = <b, G'>, H22 = <ab, G'>, H32 = <a, b^2, G'> of index 2 and
/// H14 = <a, b^4, G'>, H24 = <ab^2, G'>, H34 = <b^2, G'> of index 4.
#[derive(Debug)]
pub struct StandardSubgroups {
    pub h12: Subgroup,
    pub h22: Subgroup,
    pub h32: Subgroup,
    pub h14: Subgroup,
    pub h24: Subgroup,
    pub h34: Subgroup,
}

impl StandardSubgroups {
    pub fn by_position(&self, i: u8, level: u8) -> &Subgroup {
        match (i, level) {
            (1, 2) => &self.h12,
            (2, 2) => &self.h22,
            (3, 2) => &self.h32,
            (1, 4) => &self.h14,
            (2, 4) => &self.h24,
            (3, 4) => &self.h34,
            _ => panic!("position ({i}, {level}) out of range"),
        }
    }
}

/// Build the six distinguished subgroups from the designated generators and
/// verify their indices (2, 2, 2, 4, 4, 4).
pub fn standard_subgroups(group: &FiniteGroup) -> Result<StandardSubgroups, GroupError> {
    let Some((a, b)) = group.generators() else {
        return Err(GroupError::BadPresentation(
            "no designated generators".into(),
        ));
    };
    let gp = derived_subgroup(group)?;
    let with_gp = |gens: &[u16]| -> Subgroup {
        let mut all = gens.to_vec();
        all.extend_from_slice(gp.generators());
        Subgroup::generate(group, &all)
    };
    let b2 = group.mul(b, b);
    let b4 = group.mul(b2, b2);
    let subs = StandardSubgroups {
        h12: with_gp(&[b]),
        h22: with_gp(&[group.mul(a, b)]),
        h32: with_gp(&[a, b2]),
        h14: with_gp(&[a, b4]),
        h24: with_gp(&[group.mul(a, b2)]),
        h34: with_gp(&[b2]),
    };
    for (sub, want) in [
        (&subs.h12, 2),
        (&subs.h22, 2),
        (&subs.h32, 2),
        (&subs.h14, 4),
        (&subs.h24, 4),
        (&subs.h34, 4),
    ] {
        let got = sub.index_in(group);
        if got != want {
            return Err(GroupError::BadPresentation(format!(
                "distinguished subgroup has index {got}, expected {want}"
            )));
        }
    }
    Ok(subs)
}

/// All subgroups, by closure growth from ever-larger generating sets.
pub fn enumerate_subgroups(group: &FiniteGroup) -> Result<Vec<Subgroup>, GroupError> {
    if group.order() > MAX_ENUM_ORDER {
        return Err(GroupError::Capacity {
            order: group.order(),
            bound: MAX_ENUM_ORDER,
        });
    }
    let trivial = Subgroup::generate(group, &[]);
    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    seen.insert(trivial.elements.clone());
    let mut out = vec![trivial];
    let mut queue = 0usize;
    while queue < out.len() {
        let current = out[queue].clone();
        queue += 1;
        for g in group.elements() {
            if current.contains(g) {
                continue;
            }
            let mut gens = current.generators.clone();
            gens.push(g);
            let bigger = Subgroup::generate(group, &gens);
            if seen.insert(bigger.elements.clone()) {
                out.push(bigger);
            }
        }
    }
    out.sort_by(|x, y| {
        x.elements
            .len()
            .cmp(&y.elements.len())
            .then(x.elements.cmp(&y.elements))
    });
    Ok(out)
}

/// True iff every proper subgroup of a non-abelian group is abelian.
pub fn is_minimal(group: &FiniteGroup) -> Result<bool, GroupError> {
    if group.is_abelian() {
        return Err(GroupError::AbelianInput);
    }
    // every proper subgroup lies in a maximal one, so checking subgroups of
    // index 2 suffices for 2-groups; enumerate and filter to stay oracle-close
    let all = enumerate_subgroups(group)?;
    Ok(all
        .iter()
        .filter(|s| s.order() < group.order())
        .all(|s| s.is_abelian(group)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::test_support::quaternion8;
    use crate::groups::{build_metacyclic, build_modular, MetacyclicParams};

    #[test]
    fn derived_subgroup_examples() {
        // abelian input: trivial derived subgroup
        let m = build_modular(4).unwrap();
        let d = derived_subgroup(&m).unwrap();
        assert_eq!(d.order(), 2);

        // type 1, alpha = 2: G' = <a^2> of order 2
        let g = build_metacyclic(MetacyclicParams::type12(1, 2, 2)).unwrap();
        let (a, _) = g.generators().unwrap();
        let d = derived_subgroup(&g).unwrap();
        assert_eq!(d.order(), 2);
        assert!(d.contains(g.mul(a, a)));

        // type 1, alpha = 3: |G'| = 4
        let g3 = build_metacyclic(MetacyclicParams::type12(1, 3, 2)).unwrap();
        assert_eq!(derived_subgroup(&g3).unwrap().order(), 4);
    }

    #[test]
    fn derived_matches_a_power_form() {
        // for metacyclic groups G' = <a^(t-1)>
        for params in [
            MetacyclicParams::type12(1, 2, 3),
            MetacyclicParams::type12(2, 3, 2),
            MetacyclicParams::type34(3, 3, 2, 2, 1),
            MetacyclicParams::type34(4, 3, 3, 2, 1),
        ] {
            let g = build_metacyclic(params).unwrap();
            let (a, _) = g.generators().unwrap();
            let t = params.conj_exponent();
            let expected = Subgroup::generate(&g, &[g.pow(a, t - 1)]);
            let got = derived_subgroup(&g).unwrap();
            assert_eq!(got.elements(), expected.elements(), "{params:?}");
        }
    }

    #[test]
    fn abelianization_examples() {
        // G type 1, alpha = 2, n = 3: G^ab = [2, 8]
        let g = build_metacyclic(MetacyclicParams::type12(1, 2, 3)).unwrap();
        assert_eq!(g.abelianization().divisors(), &[2, 8]);

        // a cyclic subgroup of order 4
        let (a, _) = g.generators().unwrap();
        let cyc = Subgroup::generate(&g, &[a]);
        assert_eq!(abelianization(&g, &cyc).divisors(), &[4]);

        // H32 = <a, b^2> for type 1, alpha = 2: (4, 2^(n-1))
        let subs = standard_subgroups(&g).unwrap();
        assert_eq!(abelianization(&g, &subs.h32).divisors(), &[4, 4]);
    }

    #[test]
    fn standard_subgroup_indices() {
        let g = build_metacyclic(MetacyclicParams::type12(1, 2, 2)).unwrap();
        let subs = standard_subgroups(&g).unwrap();
        assert_eq!(subs.h12.index_in(&g), 2);
        assert_eq!(subs.h24.order(), 4);
        // H34 is the Frattini subgroup: intersection of the three maximals
        let inter: Vec<u16> = subs
            .h12
            .elements()
            .iter()
            .copied()
            .filter(|&x| subs.h22.contains(x) && subs.h32.contains(x))
            .collect();
        assert_eq!(inter, subs.h34.elements());
    }

    #[test]
    fn enumerate_subgroup_counts() {
        // cyclic of order 4 (as subgroup lattice of Z/4): 3 subgroups
        let z4 = crate::groups::build_from_table(
            (0..4)
                .map(|x| (0..4).map(|y| ((x + y) % 4) as u16).collect())
                .collect(),
        )
        .unwrap();
        assert_eq!(enumerate_subgroups(&z4).unwrap().len(), 3);

        // Klein four-group: 5 subgroups
        let v4 = crate::groups::build_from_table(
            (0..4)
                .map(|x| (0..4).map(|y| (x ^ y) as u16).collect())
                .collect(),
        )
        .unwrap();
        assert_eq!(enumerate_subgroups(&v4).unwrap().len(), 5);

        // Q8: 1 + 1 + 3 + 1 = 6 subgroups
        assert_eq!(enumerate_subgroups(&quaternion8()).unwrap().len(), 6);

        // type 1, alpha = 2, n = 2 (order 16): 15, by the closure oracle
        let g = build_metacyclic(MetacyclicParams::type12(1, 2, 2)).unwrap();
        assert_eq!(enumerate_subgroups(&g).unwrap().len(), 15);
    }

    #[test]
    fn minimality() {
        assert!(is_minimal(&quaternion8()).unwrap());
        let g16 = build_metacyclic(MetacyclicParams::type12(1, 2, 2)).unwrap();
        assert!(is_minimal(&g16).unwrap());
        // alpha = 3 has the non-abelian maximal subgroup <a^2, b>
        let g32 = build_metacyclic(MetacyclicParams::type12(1, 3, 2)).unwrap();
        assert!(!is_minimal(&g32).unwrap());
        // abelian input is a domain error
        let z4 = crate::groups::build_from_table(
            (0..4)
                .map(|x| (0..4).map(|y| ((x + y) % 4) as u16).collect())
                .collect(),
        )
        .unwrap();
        assert!(matches!(is_minimal(&z4), Err(GroupError::AbelianInput)));
    }
}
