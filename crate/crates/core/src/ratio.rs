//! Exact rational helpers: volumes of congruence subgroups, powers of `q`,
//! and the normalization constant entering the conductor definitions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn big_int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `q^e` for a signed exponent.
pub fn q_pow(q: u64, e: i64) -> BigRational {
    let p = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `vol(U_k) = q^{-kn} / (1 - q^{-n})` under `vol(U_0) = 1`; valid for all
/// `k >= 1`, and `vol(U_0) = 1` by the normalization.
pub fn vol_u(q: u64, n: u32, k: u64) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    q_pow(q, -(k as i64) * n as i64) / one_minus_q_pow(q, -(n as i64))
}

/// `1 - q^e`.
pub fn one_minus_q_pow(q: u64, e: i64) -> BigRational {
    BigRational::one() - q_pow(q, e)
}

/// `v_n = (1 - q^{-n}) q^{-n(n-1)/2}`.
pub fn v_n(q: u64, n: u32) -> BigRational {
    let binom = (n as i64) * (n as i64 - 1) / 2;
    one_minus_q_pow(q, -(n as i64)) * q_pow(q, -binom)
}

/// If `x = base^k` for some `k >= 0`, return `k`.
pub fn power_of(base: u64, x: &BigInt) -> Option<u64> {
    if x.is_negative() || x.is_zero() {
        return None;
    }
    let base = BigInt::from(base);
    let mut v = x.clone();
    let mut k = 0u64;
    while v > BigInt::one() {
        if (&v % &base).is_zero() {
            v /= &base;
            k += 1;
        } else {
            return None;
        }
    }
    Some(k)
}

/// Writes a positive rational as `q^e` if possible: `num/den = q^e`.
pub fn as_power_of_q(q: u64, x: &BigRational) -> Option<i64> {
    let num = power_of(q, x.numer())?;
    let den = power_of(q, x.denom())?;
    if num > 0 && den > 0 {
        return None; // reduced fraction cannot have q in both parts
    }
    Some(num as i64 - den as i64)
}
