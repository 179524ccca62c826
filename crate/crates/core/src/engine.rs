//! End-to-end pipeline: field tower, unit group, character tables of the
//! group and its congruence subgroups, and the invariant records of every
//! irreducible and every unordered pair.
//!
//! `EngineBase` holds everything that depends only on `(p, e, n, m, seed)`;
//! pair records are pure functions of the base, so callers may compute them
//! sequentially (`Engine::build`) or shard `compute_pair` across threads and
//! reassemble in canonical order.

use alloc::vec::Vec;
use core::fmt;

use crate::chartab::{
    build_character_table, build_subgroup_table, choose_verification_prime, decompose_restriction,
    find_row, twist_row, CharTabError, CharacterTable, SubgroupTable,
};
use crate::field::{FieldError, FieldTower, DEFAULT_FIELD_BOUND};
use crate::group::{GroupError, GroupOps, UnitGroup, DEFAULT_GROUP_BOUND};
use crate::invariants::{
    conductor, dist_from_homs, inv_pairing, solve_r, InvariantError, IrrepRecord, PairRecord,
};
use crate::modl::element_of_order;
use crate::rng::SplitMix64;

#[derive(Clone, Debug)]
pub enum EngineError {
    Field(FieldError),
    Group(GroupError),
    CharTab(CharTabError),
    Invariant(InvariantError),
    TableMismatch(&'static str),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Field(e) => write!(f, "{e}"),
            EngineError::Group(e) => write!(f, "{e}"),
            EngineError::CharTab(e) => write!(f, "{e}"),
            EngineError::Invariant(e) => write!(f, "{e}"),
            EngineError::TableMismatch(s) => write!(f, "cached table mismatch: {s}"),
        }
    }
}

impl core::error::Error for EngineError {}

impl From<FieldError> for EngineError {
    fn from(e: FieldError) -> Self {
        EngineError::Field(e)
    }
}

impl From<GroupError> for EngineError {
    fn from(e: GroupError) -> Self {
        EngineError::Group(e)
    }
}

impl From<CharTabError> for EngineError {
    fn from(e: CharTabError) -> Self {
        EngineError::CharTab(e)
    }
}

impl From<InvariantError> for EngineError {
    fn from(e: InvariantError) -> Self {
        EngineError::Invariant(e)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub field_bound: u64,
    pub group_bound: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            field_bound: DEFAULT_FIELD_BOUND,
            group_bound: DEFAULT_GROUP_BOUND,
        }
    }
}

/// Group, tables and per-irreducible data for one parameter set.
pub struct EngineBase {
    pub group: UnitGroup,
    pub table: CharacterTable,
    /// Character tables of `U_k`, `k = 0..=m`, over the same prime.
    pub subgroups: Vec<SubgroupTable>,
    /// Fixed primitive n-th root of unity mod `ell`.
    pub zeta: u64,
    pub seed: u64,
    pub irreps: Vec<IrrepRecord>,
}

impl EngineBase {
    pub fn build(
        p: u64,
        e: u32,
        n: u32,
        m: usize,
        seed: u64,
        options: BuildOptions,
    ) -> Result<EngineBase, EngineError> {
        let tower = FieldTower::build_with_bound(p, e, n, options.field_bound)?;
        let group = UnitGroup::build_with_bound(tower, m, options.group_bound)?;
        let ell = choose_verification_prime(group.exponent(), GroupOps::order(&group) as u64)?;
        let table = build_character_table(&group, group.classes(), ell, seed)?;
        EngineBase::from_parts(group, table, seed)
    }

    /// Assemble from a prebuilt (possibly cached) main character table.
    pub fn from_parts(
        group: UnitGroup,
        table: CharacterTable,
        seed: u64,
    ) -> Result<EngineBase, EngineError> {
        if table.num_classes() != group.classes().num_classes() {
            return Err(EngineError::TableMismatch("class count"));
        }
        if table.group_order() != GroupOps::order(&group) as u64 {
            return Err(EngineError::TableMismatch("group order"));
        }
        if !(table.ell - 1).is_multiple_of(group.exponent()) {
            return Err(EngineError::TableMismatch(
                "prime does not split the exponent",
            ));
        }
        let m = group.level();
        let ell = table.ell;
        let mut subgroups = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let sub_seed = SplitMix64::derive(seed, 0x5B + k as u64).next_u64();
            subgroups.push(build_subgroup_table(&group, k, ell, sub_seed)?);
        }
        let zeta = element_of_order(group.n() as u64, ell);
        let mut base = EngineBase {
            group,
            table,
            subgroups,
            zeta,
            seed,
            irreps: Vec::new(),
        };
        base.irreps = (0..base.table.num_irreps())
            .map(|i| base.irrep_record(i))
            .collect::<Result<_, _>>()?;
        Ok(base)
    }

    pub fn q(&self) -> u64 {
        self.group.q()
    }

    pub fn n(&self) -> u32 {
        self.group.n()
    }

    pub fn m(&self) -> usize {
        self.group.level()
    }

    pub fn num_irreps(&self) -> usize {
        self.table.num_irreps()
    }

    /// `dim Hom_{U_k}(pi_a, pi_b)` as an exact integer.
    pub fn hom_dim(&self, a: usize, b: usize, k: usize) -> u64 {
        let counts = self.group.subgroup_class_counts(k).expect("level in range");
        let sub_order = self
            .group
            .congruence_subgroup(k)
            .expect("level in range")
            .len() as u64;
        self.table
            .inner_product_with_counts(a, b, counts, sub_order)
    }

    /// Hom profile over `k = 0..=m`.
    pub fn hom_profile(&self, a: usize, b: usize) -> Vec<u64> {
        (0..=self.m()).map(|k| self.hom_dim(a, b, k)).collect()
    }

    /// Row index of `pi_a` twisted by the unramified character `zeta^power`.
    pub fn twisted_index(&self, a: usize, power: u64) -> usize {
        let tw = twist_row(&self.table, a, self.group.class_shift(), self.zeta, power);
        find_row(&self.table, &tw).expect("unramified twists permute the irreducible rows")
    }

    /// Order of the stabilizer of `pi_a` under unramified twists.
    pub fn twist_stabilizer(&self, a: usize) -> u64 {
        (0..self.n() as u64)
            .filter(|&power| self.twisted_index(a, power) == a)
            .count() as u64
    }

    /// Number of unramified characters carrying `pi_a` to `pi_b`.
    pub fn twist_pair_count(&self, a: usize, b: usize) -> u64 {
        (0..self.n() as u64)
            .filter(|&power| self.twisted_index(a, power) == b)
            .count() as u64
    }

    /// Constituents of `pi_a|_{U_k}` with multiplicities, as
    /// `(subgroup irrep index, degree, multiplicity)`.
    pub fn restriction(&self, a: usize, k: usize) -> Vec<(usize, u64, u64)> {
        decompose_restriction(&self.table, a, &self.subgroups[k])
            .into_iter()
            .map(|(psi, mult)| (psi, self.subgroups[k].table.degrees[psi], mult))
            .collect()
    }

    /// Least level `M` with `U_M` inside the kernel of `pi_a`.
    pub fn irrep_level(&self, a: usize) -> usize {
        let d = self.table.degrees[a];
        let triv = self.table.trivial_index();
        (0..=self.m())
            .find(|&k| {
                let counts = self.group.subgroup_class_counts(k).expect("level");
                let sub_order = self.group.congruence_subgroup(k).expect("level").len() as u64;
                self.table
                    .inner_product_with_counts(a, triv, counts, sub_order)
                    == d
            })
            .expect("restriction to the trivial subgroup is trivial")
    }

    /// `(1/vol-normalized) shell integral`: the lifted value of
    /// `(1/|R_m^*|) sum_{v(g)=j} chi_a(g) chi_b(g^{-1})`.
    pub fn shell_integral(&self, a: usize, b: usize, j: u32) -> u64 {
        let shifts = self.group.class_shift();
        let mut counts = alloc::vec![0u64; self.table.num_classes()];
        for (c, &sh) in shifts.iter().enumerate() {
            if sh == j {
                counts[c] = self.table.class_sizes[c];
            }
        }
        let shell_order = GroupOps::order(&self.group) as u64 / self.n() as u64;
        self.table
            .inner_product_with_counts(a, b, &counts, shell_order)
    }

    /// Whether `chi_a` vanishes identically on the valuation shell `j`.
    pub fn vanishes_on_shell(&self, a: usize, j: u32) -> bool {
        self.group
            .class_shift()
            .iter()
            .enumerate()
            .filter(|(_, &sh)| sh == j)
            .all(|(c, _)| self.table.values[a][c] == 0)
    }

    fn irrep_record(&self, i: usize) -> Result<IrrepRecord, EngineError> {
        let degree = self.table.degrees[i];
        let t = self.twist_stabilizer(i);
        let homs = self.hom_profile(i, i);
        let inv_self = inv_pairing(self.q(), self.n(), self.m(), &homs);
        let r = solve_r(i, self.q(), self.n(), t, &inv_self)?;
        let (f_tilde_self, f_self) =
            conductor(i, i, self.q(), self.n(), &inv_self, degree, degree, r, t)?;
        Ok(IrrepRecord {
            idx: i,
            degree,
            t,
            r,
            level: self.irrep_level(i),
            inv_self,
            f_self,
            f_tilde_self,
        })
    }

    /// Canonical unordered pair list, `(i1, i2)` with `i1 <= i2`.
    pub fn pair_list(&self) -> Vec<(usize, usize)> {
        let n = self.num_irreps();
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for i1 in 0..n {
            for i2 in i1..n {
                out.push((i1, i2));
            }
        }
        out
    }

    pub fn compute_pair(&self, i1: usize, i2: usize) -> Result<PairRecord, EngineError> {
        let hom_dims = self.hom_profile(i1, i2);
        let dist = dist_from_homs(&hom_dims);
        let inv = inv_pairing(self.q(), self.n(), self.m(), &hom_dims);
        let t_pair = self.twist_pair_count(i1, i2);
        let r1 = self.irreps[i1].r;
        let (f_tilde, f) = conductor(
            i1,
            i2,
            self.q(),
            self.n(),
            &inv,
            self.table.degrees[i1],
            self.table.degrees[i2],
            r1,
            t_pair,
        )?;
        Ok(PairRecord {
            i1,
            i2,
            hom_dims,
            dist,
            inv,
            t_pair,
            f,
            f_tilde,
        })
    }
}

/// Base data plus the pair records in canonical order.
pub struct Engine {
    pub base: EngineBase,
    pub pairs: Vec<PairRecord>,
}

impl Engine {
    pub fn build(
        p: u64,
        e: u32,
        n: u32,
        m: usize,
        seed: u64,
        options: BuildOptions,
    ) -> Result<Engine, EngineError> {
        let base = EngineBase::build(p, e, n, m, seed, options)?;
        Engine::from_base(base)
    }

    pub fn from_base(base: EngineBase) -> Result<Engine, EngineError> {
        let pairs = base
            .pair_list()
            .into_iter()
            .map(|(i1, i2)| base.compute_pair(i1, i2))
            .collect::<Result<_, _>>()?;
        Ok(Engine { base, pairs })
    }

    /// The pair record for `(a, b)` in either order.
    pub fn pair(&self, a: usize, b: usize) -> &PairRecord {
        let (i1, i2) = if a <= b { (a, b) } else { (b, a) };
        let n = self.base.num_irreps();
        // index of (i1, i2) in the row-major upper triangle
        let idx = i1 * n - i1 * (i1 + 1) / 2 + i2;
        &self.pairs[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::big_int;
    use alloc::vec;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(big_int(n), big_int(d))
    }

    #[test]
    fn sym3_end_to_end() {
        let engine = Engine::build(2, 1, 2, 1, 0, BuildOptions::default()).unwrap();
        let base = &engine.base;
        assert_eq!(base.table.degrees, vec![1, 1, 2]);

        let rho = 2; // canonical order puts the 2-dimensional row last
        assert_eq!(base.irreps[rho].t, 2);
        assert_eq!(base.irreps[rho].r, 1);
        assert_eq!(base.irreps[rho].inv_self, rat(16, 9));
        assert_eq!(base.irreps[rho].f_self, 2);
        assert_eq!(base.irreps[rho].f_tilde_self, 4);

        let triv = base.table.trivial_index();
        assert_eq!(base.irreps[triv].t, 1);
        assert_eq!(base.irreps[triv].r, 2);
        assert_eq!(base.irreps[triv].f_self, 2);

        let mixed = engine.pair(triv, rho);
        assert_eq!(mixed.dist, 1);
        assert_eq!(mixed.inv, rat(8, 9));
        assert_eq!(mixed.t_pair, 0);
        assert_eq!(mixed.f, 4);
        assert_eq!(mixed.f_tilde, 4);

        // the sign character is the unramified twist of the trivial one
        let sign = if triv == 0 { 1 } else { 0 };
        let tw = engine.pair(triv, sign);
        assert_eq!(tw.dist, 0);
        assert_eq!(tw.t_pair, 1);
        assert_eq!(tw.f_tilde, 4);
        assert_eq!(tw.f, 2);
    }

    #[test]
    fn pair_indexing_round_trip() {
        let engine = Engine::build(2, 1, 2, 1, 0, BuildOptions::default()).unwrap();
        for (i1, i2) in engine.base.pair_list() {
            let p = engine.pair(i1, i2);
            assert_eq!((p.i1, p.i2), (i1, i2));
            let q = engine.pair(i2, i1);
            assert_eq!((q.i1, q.i2), (i1, i2));
        }
    }

    #[test]
    fn levels_detected() {
        let engine = Engine::build(2, 1, 2, 2, 0, BuildOptions::default()).unwrap();
        let base = &engine.base;
        // inflations from G_1 have level <= 1; exact level count:
        // G_2 has 24 = |G_2| order; G_1 irreps inflate to 3 of its irreps
        let low_level = (0..base.num_irreps())
            .filter(|&i| base.irreps[i].level <= 1)
            .count();
        assert_eq!(low_level, 3);
        for i in 0..base.num_irreps() {
            assert!(base.irreps[i].level <= 2);
        }
    }

    #[test]
    fn hom_profiles_monotone_and_capped() {
        let engine = Engine::build(3, 1, 2, 2, 0, BuildOptions::default()).unwrap();
        for p in &engine.pairs {
            let d1d2 = engine.base.table.degrees[p.i1] * engine.base.table.degrees[p.i2];
            assert_eq!(*p.hom_dims.last().unwrap(), d1d2);
            for w in p.hom_dims.windows(2) {
                assert!(w[0] <= w[1], "hom dims weakly increasing");
            }
        }
    }

    #[test]
    fn shell_integrals_sym3() {
        let base = EngineBase::build(2, 1, 2, 1, 0, BuildOptions::default()).unwrap();
        let rho = 2;
        // integral over the unit shell equals t = 2; odd shell vanishes
        assert_eq!(base.shell_integral(rho, rho, 0), 2);
        assert_eq!(base.shell_integral(rho, rho, 1), 0);
        assert!(base.vanishes_on_shell(rho, 1));
        assert!(!base.vanishes_on_shell(rho, 0));
        let triv = base.table.trivial_index();
        assert_eq!(base.shell_integral(triv, triv, 0), 1);
        assert_eq!(base.shell_integral(triv, triv, 1), 1);
    }

    #[test]
    fn restriction_to_trivial_subgroup() {
        // at k = m the subgroup is {1}: any chi restricts to d copies of
        // the trivial character
        let base = EngineBase::build(2, 1, 2, 1, 0, BuildOptions::default()).unwrap();
        for i in 0..base.num_irreps() {
            let d = base.table.degrees[i];
            assert_eq!(base.restriction(i, 1), vec![(0, 1, d)]);
        }
    }

    #[test]
    fn twist_invariance_of_r() {
        // the sign character is an unramified twist of the trivial one, so
        // it shares inv, t and r
        let engine = Engine::build(2, 1, 2, 1, 0, BuildOptions::default()).unwrap();
        let triv = engine.base.table.trivial_index();
        let sign = if triv == 0 { 1 } else { 0 };
        assert_eq!(engine.base.irreps[sign].r, 2);
        assert_eq!(engine.base.irreps[sign].t, 1);
        assert_eq!(
            engine.base.irreps[sign].inv_self,
            engine.base.irreps[triv].inv_self
        );
    }
}
