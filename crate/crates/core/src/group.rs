//! The finite quotient `G_m = D^*/<w> U_m ≅ (R_m)^* ⋊ Z/n`.
//!
//! Elements are pairs `(u, j)` standing for `u·P^j` with `u` a unit of `R_m`
//! and `j` the valuation class modulo `n`; the central uniformizer `w = P^n`
//! is identified with 1. Multiplication is
//! `(u, j)·(u', j') = (u·sigma^j(u'), j + j' mod n)` with `sigma^j` acting
//! coefficientwise. The group carries its congruence filtration
//! `U_0 ⊇ U_1 ⊇ ... ⊇ U_m = {1}`, conjugacy classes, element orders and the
//! exponent. Everything is enumerated up front with dense index lookups;
//! the structure is immutable after `build`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{FieldElement, FieldTower};
use crate::series::{enumerate_units, TwistedSeries};

/// Default cap on the group order `n (q^n - 1) q^{n(m-1)}`.
pub const DEFAULT_GROUP_BOUND: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupError {
    SizeBound { order: u128, bound: u64 },
    BadLevel { k: usize, m: usize },
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::SizeBound { order, bound } => {
                write!(f, "group order {order} exceeds bound {bound}")
            }
            GroupError::BadLevel { k, m } => {
                write!(f, "congruence level {k} out of range 0..={m}")
            }
        }
    }
}

impl core::error::Error for GroupError {}

/// `(u, j)` representing `u·P^j` modulo `<w> U_m`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupElement {
    pub unit: TwistedSeries,
    pub shift: u32,
}

/// Index-level group interface shared by `UnitGroup` and its subgroup views.
pub trait GroupOps {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
}

/// Conjugacy class data for a group given by `GroupOps`.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub class_of: Vec<u32>,
    pub reps: Vec<u32>,
    pub sizes: Vec<u64>,
    /// Class of the inverses of a class.
    pub inv_class: Vec<u32>,
}

impl ClassData {
    /// Orbit computation under conjugation by a generating set. Classes are
    /// numbered by their least element index, so the identity class is 0.
    pub fn compute(g: &impl GroupOps, generators: &[usize]) -> ClassData {
        let order = g.order();
        let mut class_of = vec![u32::MAX; order];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let mut queue = Vec::new();
        for x in 0..order {
            if class_of[x] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            class_of[x] = c;
            reps.push(x as u32);
            queue.clear();
            queue.push(x);
            let mut size = 1u64;
            while let Some(y) = queue.pop() {
                for &s in generators {
                    let z = g.mul(g.mul(s, y), g.inv(s));
                    if class_of[z] == u32::MAX {
                        class_of[z] = c;
                        size += 1;
                        queue.push(z);
                    }
                }
            }
            sizes.push(size);
        }
        let inv_class = reps.iter().map(|&r| class_of[g.inv(r as usize)]).collect();
        ClassData {
            class_of,
            reps,
            sizes,
            inv_class,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }
}

/// The group `G_m` with full element enumeration and derived data.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    tower: FieldTower,
    m: usize,
    elems: Vec<GroupElement>,
    index_by_code: Vec<u32>,
    inv_idx: Vec<u32>,
    orders: Vec<u32>,
    exponent: u64,
    classes: ClassData,
    class_shift: Vec<u32>,
    subgroup_members: Vec<Vec<u32>>,
    subgroup_class_counts: Vec<Vec<u64>>,
    generators: Vec<usize>,
}

impl UnitGroup {
    pub fn build(tower: FieldTower, m: usize) -> Result<UnitGroup, GroupError> {
        UnitGroup::build_with_bound(tower, m, DEFAULT_GROUP_BOUND)
    }

    pub fn build_with_bound(
        tower: FieldTower,
        m: usize,
        bound: u64,
    ) -> Result<UnitGroup, GroupError> {
        assert!(m >= 1, "level must be positive");
        let n = tower.n() as usize;
        let size = tower.size() as u128; // q^n
        let order_big = n as u128 * (size - 1) * size.pow(m as u32 - 1);
        if order_big > bound as u128 {
            return Err(GroupError::SizeBound {
                order: order_big,
                bound,
            });
        }
        let order = order_big as usize;

        // Elements in lexicographic order on (j, coefficient tuple).
        let units = enumerate_units(&tower, m);
        let mut elems = Vec::with_capacity(order);
        for j in 0..n as u32 {
            for u in &units {
                elems.push(GroupElement {
                    unit: u.clone(),
                    shift: j,
                });
            }
        }
        debug_assert_eq!(elems.len(), order);

        let code_space = n * (size as usize).pow(m as u32);
        let mut index_by_code = vec![u32::MAX; code_space];
        for (i, g) in elems.iter().enumerate() {
            index_by_code[element_code(&tower, g, m)] = i as u32;
        }

        let mut group = UnitGroup {
            tower,
            m,
            elems,
            index_by_code,
            inv_idx: Vec::new(),
            orders: Vec::new(),
            exponent: 1,
            classes: ClassData {
                class_of: Vec::new(),
                reps: Vec::new(),
                sizes: Vec::new(),
                inv_class: Vec::new(),
            },
            class_shift: Vec::new(),
            subgroup_members: Vec::new(),
            subgroup_class_counts: Vec::new(),
            generators: Vec::new(),
        };

        group.inv_idx = (0..order)
            .map(|i| {
                let g = &group.elems[i];
                let j = g.shift as i64;
                let inv_unit = g
                    .unit
                    .inv(&group.tower)
                    .expect("group elements are units")
                    .frobenius(&group.tower, -j);
                let shift = ((n as i64 - j) % n as i64) as u32 % n as u32;
                group.index_of(&GroupElement {
                    unit: inv_unit,
                    shift,
                }) as u32
            })
            .collect();

        // Element orders and the exponent.
        let id = group.identity();
        group.orders = (0..order)
            .map(|i| {
                let mut y = i;
                let mut ord = 1u32;
                while y != id {
                    y = GroupOps::mul(&group, y, i);
                    ord += 1;
                }
                ord
            })
            .collect();
        group.exponent = group
            .orders
            .iter()
            .fold(1u64, |acc, &o| lcm_u64(acc, o as u64));

        // Congruence filtration U_0 ⊇ ... ⊇ U_m = {1}.
        group.subgroup_members = (0..=m)
            .map(|k| {
                (0..order as u32)
                    .filter(|&i| group.member_level_at_least(i as usize, k))
                    .collect()
            })
            .collect();

        group.generators = group.generating_set(0);
        group.generators.push(group.index_of(&GroupElement {
            unit: TwistedSeries::one(m),
            shift: if n > 1 { 1 } else { 0 },
        }));

        let gens = group.generators.clone();
        group.classes = ClassData::compute(&group, &gens);
        group.class_shift = group
            .classes
            .reps
            .iter()
            .map(|&r| group.elems[r as usize].shift)
            .collect();

        group.subgroup_class_counts = (0..=m)
            .map(|k| {
                let mut counts = vec![0u64; group.classes.num_classes()];
                for &i in &group.subgroup_members[k] {
                    counts[group.classes.class_of[i as usize] as usize] += 1;
                }
                counts
            })
            .collect();

        Ok(group)
    }

    /// True iff element `i` lies in `U_k` (shift 0 and `v(u - 1) >= k`).
    fn member_level_at_least(&self, i: usize, k: usize) -> bool {
        let g = &self.elems[i];
        if g.shift != 0 {
            return false;
        }
        if k == 0 {
            return true;
        }
        let one = TwistedSeries::one(self.m);
        let diff = g.unit.sub(&self.tower, &one).expect("same level");
        match diff.valuation() {
            Ok(v) => v >= k,
            Err(_) => true, // u = 1 lies in every U_k
        }
    }

    /// Generators of `U_k` (as parent indices): `1 + b·P^j` for `j >= max(k,1)`
    /// over an `F_p`-basis `b`, plus the field generator when `k = 0`.
    pub fn generating_set(&self, k: usize) -> Vec<usize> {
        let mut gens = Vec::new();
        if k == 0 && self.tower.size() > 2 {
            gens.push(self.index_of(&GroupElement {
                unit: TwistedSeries::scalar(self.tower.generator(), self.m),
                shift: 0,
            }));
        }
        let deg = (self.tower.e() * self.tower.n()) as usize;
        for j in k.max(1)..self.m {
            for s in 0..deg {
                let basis_elem = FieldElement(self.tower.p().pow(s as u32) as u32);
                let mut coeffs = vec![FieldElement::ZERO; self.m];
                coeffs[0] = FieldElement::ONE;
                coeffs[j] = basis_elem;
                gens.push(self.index_of(&GroupElement {
                    unit: TwistedSeries::from_coeffs(coeffs),
                    shift: 0,
                }));
            }
        }
        gens
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn level(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    pub fn n(&self) -> u32 {
        self.tower.n()
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elems[i]
    }

    pub fn index_of(&self, g: &GroupElement) -> usize {
        let idx = self.index_by_code[element_code(&self.tower, g, self.m)];
        debug_assert!(idx != u32::MAX, "element not in group");
        idx as usize
    }

    pub fn element_order(&self, i: usize) -> u32 {
        self.orders[i]
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn classes(&self) -> &ClassData {
        &self.classes
    }

    /// Valuation class `j` of each conjugacy class (constant on classes).
    pub fn class_shift(&self) -> &[u32] {
        &self.class_shift
    }

    /// Element indices of `U_k`, ascending.
    pub fn congruence_subgroup(&self, k: usize) -> Result<&[u32], GroupError> {
        self.subgroup_members
            .get(k)
            .map(|v| v.as_slice())
            .ok_or(GroupError::BadLevel { k, m: self.m })
    }

    /// Per-class element counts of `U_k`.
    pub fn subgroup_class_counts(&self, k: usize) -> Result<&[u64], GroupError> {
        self.subgroup_class_counts
            .get(k)
            .map(|v| v.as_slice())
            .ok_or(GroupError::BadLevel { k, m: self.m })
    }

    pub fn group_generators(&self) -> &[usize] {
        &self.generators
    }
}

impl GroupOps for UnitGroup {
    fn order(&self) -> usize {
        self.elems.len()
    }

    fn identity(&self) -> usize {
        0 // (1, 0) is first in the lexicographic enumeration
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let ga = &self.elems[a];
        let gb = &self.elems[b];
        let n = self.tower.n();
        let twisted = gb.unit.frobenius(&self.tower, ga.shift as i64);
        let unit = ga.unit.mul(&self.tower, &twisted).expect("same level");
        let shift = (ga.shift + gb.shift) % n;
        self.index_of(&GroupElement { unit, shift })
    }

    fn inv(&self, a: usize) -> usize {
        self.inv_idx[a] as usize
    }
}

/// A congruence subgroup `U_k` re-indexed as a standalone finite group.
pub struct SubgroupView<'a> {
    parent: &'a UnitGroup,
    members: Vec<u32>,
    local_of_parent: Vec<u32>,
    level: usize,
}

impl<'a> SubgroupView<'a> {
    pub fn new(parent: &'a UnitGroup, k: usize) -> Result<SubgroupView<'a>, GroupError> {
        let members = parent.congruence_subgroup(k)?.to_vec();
        let mut local_of_parent = vec![u32::MAX; GroupOps::order(parent)];
        for (loc, &p) in members.iter().enumerate() {
            local_of_parent[p as usize] = loc as u32;
        }
        Ok(SubgroupView {
            parent,
            members,
            local_of_parent,
            level: k,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn parent_index(&self, local: usize) -> usize {
        self.members[local] as usize
    }

    /// Subgroup generators in local indices.
    pub fn local_generators(&self) -> Vec<usize> {
        self.parent
            .generating_set(self.level)
            .into_iter()
            .map(|p| self.local_of_parent[p] as usize)
            .collect()
    }
}

impl GroupOps for SubgroupView<'_> {
    fn order(&self) -> usize {
        self.members.len()
    }

    fn identity(&self) -> usize {
        self.local_of_parent[GroupOps::identity(self.parent)] as usize
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let p = GroupOps::mul(
            self.parent,
            self.members[a] as usize,
            self.members[b] as usize,
        );
        let loc = self.local_of_parent[p];
        debug_assert!(loc != u32::MAX, "subgroup not closed under product");
        loc as usize
    }

    fn inv(&self, a: usize) -> usize {
        self.local_of_parent[GroupOps::inv(self.parent, self.members[a] as usize)] as usize
    }
}

fn element_code(tower: &FieldTower, g: &GroupElement, m: usize) -> usize {
    let size = tower.size();
    let mut code = g.shift as usize;
    for i in (0..m).rev() {
        code = code * size + g.unit.coeff(i).0 as usize;
    }
    code
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;

    fn g(p: u64, e: u32, n: u32, m: usize) -> UnitGroup {
        let tower = FieldTower::build(p, e, n).unwrap();
        UnitGroup::build(tower, m).unwrap()
    }

    #[test]
    fn orders_match_formula() {
        assert_eq!(GroupOps::order(&g(2, 1, 2, 1)), 6);
        assert_eq!(GroupOps::order(&g(2, 1, 2, 2)), 24);
        assert_eq!(GroupOps::order(&g(3, 1, 2, 1)), 16);
        assert_eq!(GroupOps::order(&g(2, 1, 3, 2)), 168);
    }

    #[test]
    fn sym3_model_order_profile() {
        let group = g(2, 1, 2, 1);
        let mut profile: BTreeMap<u32, usize> = BTreeMap::new();
        for i in 0..GroupOps::order(&group) {
            *profile.entry(group.element_order(i)).or_default() += 1;
        }
        let expect: BTreeMap<u32, usize> = [(1, 1), (2, 3), (3, 2)].into_iter().collect();
        assert_eq!(profile, expect);
        assert_eq!(group.exponent(), 6);
    }

    #[test]
    fn sym3_class_sizes() {
        let group = g(2, 1, 2, 1);
        let mut sizes = group.classes().sizes.clone();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        // identity is a singleton class 0
        assert_eq!(group.classes().class_of[0], 0);
        assert_eq!(group.classes().sizes[0], 1);
    }

    #[test]
    fn classes_partition_group() {
        for group in [g(2, 1, 2, 2), g(3, 1, 2, 1), g(2, 1, 3, 1)] {
            let total: u64 = group.classes().sizes.iter().sum();
            assert_eq!(total as usize, GroupOps::order(&group));
            for &s in &group.classes().sizes {
                assert_eq!(GroupOps::order(&group) as u64 % s, 0);
            }
        }
    }

    #[test]
    fn group_axioms_exhaustive_order_24() {
        let group = g(2, 1, 2, 2);
        let order = GroupOps::order(&group);
        let id = GroupOps::identity(&group);
        for a in 0..order {
            assert_eq!(GroupOps::mul(&group, a, id), a);
            assert_eq!(GroupOps::mul(&group, id, a), a);
            assert_eq!(GroupOps::mul(&group, a, GroupOps::inv(&group, a)), id);
            assert_eq!(GroupOps::mul(&group, GroupOps::inv(&group, a), a), id);
        }
        for a in 0..order {
            for b in 0..order {
                let ab = GroupOps::mul(&group, a, b);
                for c in 0..order {
                    assert_eq!(
                        GroupOps::mul(&group, ab, c),
                        GroupOps::mul(&group, a, GroupOps::mul(&group, b, c))
                    );
                }
            }
        }
    }

    #[test]
    fn filtration_indices() {
        // [U_0 : U_1] = q^n - 1 and [U_k : U_{k+1}] = q^n for 1 <= k < m
        let group = g(2, 1, 2, 3);
        let sizes: Vec<usize> = (0..=3)
            .map(|k| group.congruence_subgroup(k).unwrap().len())
            .collect();
        assert_eq!(sizes, vec![48, 16, 4, 1]);
        assert_eq!(sizes[0] / sizes[1], 3);
        assert_eq!(sizes[1] / sizes[2], 4);
        assert_eq!(sizes[2] / sizes[3], 4);
    }

    #[test]
    fn u1_size_spec_example() {
        let group = g(2, 1, 2, 2);
        assert_eq!(group.congruence_subgroup(0).unwrap().len(), 12);
        assert_eq!(group.congruence_subgroup(1).unwrap().len(), 4);
        assert_eq!(group.congruence_subgroup(2).unwrap().len(), 1);
    }

    #[test]
    fn congruence_subgroups_normal() {
        let group = g(2, 1, 2, 2);
        for k in 0..=2 {
            let members = group.congruence_subgroup(k).unwrap().to_vec();
            let in_k = |x: usize| members.binary_search(&(x as u32)).is_ok();
            for a in 0..GroupOps::order(&group) {
                let ai = GroupOps::inv(&group, a);
                for &s in &members {
                    let conj = GroupOps::mul(&group, GroupOps::mul(&group, a, s as usize), ai);
                    assert!(in_k(conj), "U_{k} not normal");
                }
            }
        }
    }

    #[test]
    fn pi_conjugation_is_frobenius_on_u0() {
        let group = g(2, 1, 2, 2);
        let pi = group.index_of(&GroupElement {
            unit: TwistedSeries::one(2),
            shift: 1,
        });
        let pi_inv = GroupOps::inv(&group, pi);
        for &s in group.congruence_subgroup(0).unwrap() {
            let conj = GroupOps::mul(&group, GroupOps::mul(&group, pi, s as usize), pi_inv);
            let expected = GroupElement {
                unit: group.element(s as usize).unit.frobenius(group.tower(), 1),
                shift: 0,
            };
            assert_eq!(group.element(conj), &expected);
        }
    }

    #[test]
    fn pi_image_has_order_n() {
        for (p, e, n, m) in [(2, 1, 2, 2), (2, 1, 3, 1), (3, 1, 2, 2)] {
            let group = g(p, e, n, m);
            let pi = group.index_of(&GroupElement {
                unit: TwistedSeries::one(m),
                shift: 1,
            });
            assert_eq!(group.element_order(pi), n);
            assert_eq!(group.exponent() % n as u64, 0);
        }
    }

    #[test]
    fn subgroup_view_is_a_group() {
        let group = g(2, 1, 2, 2);
        let sub = SubgroupView::new(&group, 1).unwrap();
        assert_eq!(GroupOps::order(&sub), 4);
        // U_1 here is elementary abelian
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(GroupOps::mul(&sub, a, b), GroupOps::mul(&sub, b, a));
            }
        }
        let classes = ClassData::compute(&sub, &sub.local_generators());
        assert_eq!(classes.num_classes(), 4);
    }

    #[test]
    fn generators_generate() {
        let group = g(2, 1, 2, 2);
        let gens = group.group_generators().to_vec();
        let order = GroupOps::order(&group);
        let mut seen = vec![false; order];
        let mut stack = vec![GroupOps::identity(&group)];
        seen[GroupOps::identity(&group)] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &s in &gens {
                let y = GroupOps::mul(&group, x, s);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        assert_eq!(count, order);
    }
}
