//! Representations of level `M` computed inside a deeper quotient `G_m`
//! (m > M) carry the same invariants as inside `G_M`: the invariant data is
//! intrinsic to the representation, not to the quotient used to compute it.
//! Irreducibles are matched across quotients by multisets of invariant
//! tuples, since the two character tables live over different primes.

use dstar_core::engine::{BuildOptions, Engine};
use dstar_core::num_rational::BigRational;

fn engine(p: u64, e: u32, n: u32, m: usize) -> Engine {
    Engine::build(p, e, n, m, 0, BuildOptions::default()).unwrap()
}

type IrrepKey = (u64, u64, u64, usize, BigRational, i64, i64);

fn irrep_keys(engine: &Engine, max_level: usize) -> Vec<IrrepKey> {
    let mut keys: Vec<IrrepKey> = engine
        .base
        .irreps
        .iter()
        .filter(|r| r.level <= max_level)
        .map(|r| {
            (
                r.degree,
                r.t,
                r.r,
                r.level,
                r.inv_self.clone(),
                r.f_self,
                r.f_tilde_self,
            )
        })
        .collect();
    keys.sort();
    keys
}

type PairKey = (u64, u64, usize, BigRational, u64, i64, i64);

fn pair_keys(engine: &Engine, max_level: usize) -> Vec<PairKey> {
    let base = &engine.base;
    let mut keys: Vec<PairKey> = engine
        .pairs
        .iter()
        .filter(|p| base.irreps[p.i1].level <= max_level && base.irreps[p.i2].level <= max_level)
        .map(|p| {
            let mut d = [base.table.degrees[p.i1], base.table.degrees[p.i2]];
            d.sort_unstable();
            (d[0], d[1], p.dist, p.inv.clone(), p.t_pair, p.f, p.f_tilde)
        })
        .collect();
    keys.sort();
    keys
}

#[test]
fn level_one_reps_agree_between_quotients() {
    let g1 = engine(2, 1, 2, 1);
    let g2 = engine(2, 1, 2, 2);
    let g3 = engine(2, 1, 2, 3);
    let reference = irrep_keys(&g1, 1);
    assert_eq!(reference.len(), 3);
    assert_eq!(irrep_keys(&g2, 1), reference);
    assert_eq!(irrep_keys(&g3, 1), reference);
}

#[test]
fn level_two_reps_agree_between_quotients() {
    let g2 = engine(2, 1, 2, 2);
    let g3 = engine(2, 1, 2, 3);
    let reference = irrep_keys(&g2, 2);
    assert_eq!(reference.len(), 5);
    assert_eq!(irrep_keys(&g3, 2), reference);
}

#[test]
fn pair_invariants_agree_between_quotients() {
    let g1 = engine(2, 1, 2, 1);
    let g2 = engine(2, 1, 2, 2);
    let g3 = engine(2, 1, 2, 3);
    let reference = pair_keys(&g1, 1);
    assert_eq!(reference.len(), 6);
    assert_eq!(pair_keys(&g2, 1), reference);
    assert_eq!(pair_keys(&g3, 1), reference);
    assert_eq!(pair_keys(&g3, 2), pair_keys(&g2, 2));
}

#[test]
fn odd_characteristic_level_consistency() {
    let g1 = engine(3, 1, 2, 1);
    let g2 = engine(3, 1, 2, 2);
    assert_eq!(irrep_keys(&g2, 1), irrep_keys(&g1, 1));
    assert_eq!(pair_keys(&g2, 1), pair_keys(&g1, 1));
}
