//! The exact invariants of irreducible representations and pairs:
//! restriction Hom dimensions per level, the distance `dist`, the pairing
//! `inv`, twist stabilizers `t`, the reducibility point `r`, and the
//! conductors `f` and `f-tilde`.
//!
//! Quantities are exact throughout. The infinite sum defining `inv` is closed
//! analytically beyond level `m - 1`: from level `m` on the Hom dimension is
//! constantly `d1·d2`, so the tail is a geometric series. `r` is recovered by
//! exhaustive integer search against the defining rational identity
//! `inv = t^2 q^{-rt} / (1 - q^{-rt})^2`, which also asserts the integrality
//! of `r`; the conductor is recovered from the exact power of `q` in
//! `v_n^2 · inv / (d1 d2)`, which asserts the integrality of the conductor.

use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::ratio::{as_power_of_q, q_pow, rat_int, vol_u};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantError {
    /// No integer `r` in `1..=n` satisfies the reducibility equation; this
    /// contradicts the theory and must never fire on a correct build.
    NoIntegerSolution {
        irrep: usize,
    },
    /// The solved `r` does not divide `n / t`.
    DivisibilityViolation {
        irrep: usize,
        r: u64,
        n_over_t: u64,
    },
    /// `v_n^2 inv / (d1 d2)` is not an exact power of `q`; the conductor
    /// would not be an integer. Must never fire.
    NotAPowerOfQ {
        i1: usize,
        i2: usize,
    },
    NegativeConductor {
        i1: usize,
        i2: usize,
        f: i64,
    },
}

impl fmt::Display for InvariantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantError::NoIntegerSolution { irrep } => {
                write!(f, "no integer reducibility point for irrep {irrep}")
            }
            InvariantError::DivisibilityViolation { irrep, r, n_over_t } => {
                write!(f, "irrep {irrep}: r = {r} does not divide n/t = {n_over_t}")
            }
            InvariantError::NotAPowerOfQ { i1, i2 } => {
                write!(
                    f,
                    "pair ({i1},{i2}): conductor is not an integer power of q"
                )
            }
            InvariantError::NegativeConductor { i1, i2, f: c } => {
                write!(f, "pair ({i1},{i2}): conductor f = {c} is negative")
            }
        }
    }
}

impl core::error::Error for InvariantError {}

/// Per-irreducible invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrepRecord {
    pub idx: usize,
    pub degree: u64,
    /// Order of the group of unramified twists fixing the representation.
    pub t: u64,
    /// The unique positive solution of `inv = t^2 q^{-rt}/(1-q^{-rt})^2`.
    pub r: u64,
    /// Least `M` with `U_M` in the kernel.
    pub level: usize,
    pub inv_self: BigRational,
    pub f_self: i64,
    pub f_tilde_self: i64,
}

/// Per-pair invariants (unordered pairs, `i1 <= i2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRecord {
    pub i1: usize,
    pub i2: usize,
    /// `dim Hom_{U_k}(pi1, pi2)` for `k = 0..=m`.
    pub hom_dims: Vec<u64>,
    /// Least `k` with a common constituent on `U_k`.
    pub dist: usize,
    pub inv: BigRational,
    /// Number of unramified twists carrying `pi1` to `pi2`.
    pub t_pair: u64,
    pub f: i64,
    pub f_tilde: i64,
}

impl PairRecord {
    pub fn dist_zero(&self) -> bool {
        self.dist == 0
    }

    /// `inv / (d1 d2)`, the normalized pairing entering the inequalities.
    pub fn inv_normalized(&self, d1: u64, d2: u64) -> BigRational {
        self.inv.clone() / rat_int((d1 * d2) as i64)
    }
}

/// `inv(pi1, pi2)` from the Hom-dimension profile: the finite part up to
/// level `m - 1` plus the closed geometric tail `d1 d2 q^{-mn}/(1-q^{-n})^2`.
pub fn inv_pairing(q: u64, n: u32, m: usize, hom_dims: &[u64]) -> BigRational {
    debug_assert_eq!(hom_dims.len(), m + 1);
    let mut acc = BigRational::zero();
    for (k, &h) in hom_dims.iter().enumerate().take(m).skip(1) {
        if h != 0 {
            acc += vol_u(q, n, k as u64) * rat_int(h as i64);
        }
    }
    let d1d2 = hom_dims[m];
    let tail_base = crate::ratio::one_minus_q_pow(q, -(n as i64));
    acc + rat_int(d1d2 as i64) * q_pow(q, -(m as i64) * n as i64) / (tail_base.clone() * tail_base)
}

/// Least `k` with `hom_dims[k] > 0`; always defined since the top entry is
/// `d1 d2`.
pub fn dist_from_homs(hom_dims: &[u64]) -> usize {
    hom_dims
        .iter()
        .position(|&h| h > 0)
        .expect("hom dimension at full level is positive")
}

/// Solve `inv = t^2 q^{-rt}/(1-q^{-rt})^2` for the unique integer `r >= 1`,
/// scanning `r = 1..=n`; also asserts `r | (n/t)`.
pub fn solve_r(
    irrep: usize,
    q: u64,
    n: u32,
    t: u64,
    inv: &BigRational,
) -> Result<u64, InvariantError> {
    for r in 1..=n as u64 {
        // with x = q^{rt}: rhs = t^2 x / (x - 1)^2
        let x = q_pow(q, (r * t) as i64);
        let xm1 = x.clone() - rat_int(1);
        let rhs = rat_int((t * t) as i64) * x / (xm1.clone() * xm1);
        if &rhs == inv {
            let n_over_t = n as u64 / t;
            if !n_over_t.is_multiple_of(r) {
                return Err(InvariantError::DivisibilityViolation { irrep, r, n_over_t });
            }
            return Ok(r);
        }
    }
    Err(InvariantError::NoIntegerSolution { irrep })
}

/// The conductors from `q^{-f_tilde} = v_n^2 inv/(d1 d2)` and
/// `f = f_tilde - r(pi1)·t(pi1, pi2)`; integrality and nonnegativity are
/// hard requirements.
#[allow(clippy::too_many_arguments)]
pub fn conductor(
    i1: usize,
    i2: usize,
    q: u64,
    n: u32,
    inv: &BigRational,
    d1: u64,
    d2: u64,
    r1: u64,
    t_pair: u64,
) -> Result<(i64, i64), InvariantError> {
    let vn = crate::ratio::v_n(q, n);
    let value = vn.clone() * vn * inv / rat_int((d1 * d2) as i64);
    let exp = as_power_of_q(q, &value).ok_or(InvariantError::NotAPowerOfQ { i1, i2 })?;
    let f_tilde = -exp;
    let f = f_tilde - (r1 * t_pair) as i64;
    if f < 0 {
        return Err(InvariantError::NegativeConductor { i1, i2, f });
    }
    Ok((f_tilde, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::big_int;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(big_int(n), big_int(d))
    }

    #[test]
    fn trivial_rep_inv_q2_n2() {
        // hom profile of the trivial pair at m = 1: [1, 1]
        let inv = inv_pairing(2, 2, 1, &[1, 1]);
        assert_eq!(inv, rat(4, 9));
        // same value computed in a deeper quotient
        let inv2 = inv_pairing(2, 2, 2, &[1, 1, 1]);
        assert_eq!(inv2, rat(4, 9));
    }

    #[test]
    fn sym3_inv_values() {
        assert_eq!(inv_pairing(2, 2, 1, &[2, 4]), rat(16, 9));
        assert_eq!(inv_pairing(2, 2, 1, &[0, 2]), rat(8, 9));
    }

    #[test]
    fn dist_profiles() {
        assert_eq!(dist_from_homs(&[1, 1]), 0);
        assert_eq!(dist_from_homs(&[0, 2]), 1);
        assert_eq!(dist_from_homs(&[0, 0, 4]), 2);
    }

    #[test]
    fn steinberg_anchor_r() {
        // trivial representation: t = 1, inv = q^{-n}/(1-q^{-n})^2, r = n
        for (q, n) in [(2u64, 2u32), (3, 2), (2, 3)] {
            let inv = inv_pairing(q, n, 1, &[1, 1]);
            assert_eq!(solve_r(0, q, n, 1, &inv).unwrap(), n as u64);
        }
    }

    #[test]
    fn sym3_rho_r() {
        // t = 2, inv = 16/9 -> r = 1
        let inv = rat(16, 9);
        assert_eq!(solve_r(0, 2, 2, 2, &inv).unwrap(), 1);
    }

    #[test]
    fn conductors_sym3() {
        // trivial: f_tilde = n^2 = 4, f = n^2 - n = 2
        let inv_triv = rat(4, 9);
        assert_eq!(
            conductor(0, 0, 2, 2, &inv_triv, 1, 1, 2, 1).unwrap(),
            (4, 2)
        );
        // rho: f_tilde = 4, f = 4 - 1·2 = 2
        let inv_rho = rat(16, 9);
        assert_eq!(conductor(2, 2, 2, 2, &inv_rho, 2, 2, 1, 2).unwrap(), (4, 2));
        // (trivial, rho): t_pair = 0, f = f_tilde = 4
        let inv_mixed = rat(8, 9);
        assert_eq!(
            conductor(0, 2, 2, 2, &inv_mixed, 1, 2, 2, 0).unwrap(),
            (4, 4)
        );
    }

    #[test]
    fn conductor_rejects_non_power() {
        let bad = rat(3, 5);
        assert!(matches!(
            conductor(0, 1, 2, 2, &bad, 1, 1, 1, 0),
            Err(InvariantError::NotAPowerOfQ { .. })
        ));
    }

    #[test]
    fn no_integer_solution_detected() {
        let bad = rat(1, 7);
        assert!(matches!(
            solve_r(3, 2, 2, 1, &bad),
            Err(InvariantError::NoIntegerSolution { irrep: 3 })
        ));
    }
}
