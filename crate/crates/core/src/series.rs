//! Arithmetic in the truncated division order `R_m = O_D / p^m`.
//!
//! `R_m` is realised as `F_{q^n}[P]/(P^m)` with the twisted rule
//! `P·a = sigma(a)·P` for coefficients `a`, where `sigma` is the `q`-power
//! Frobenius of the tower. An element is a unit exactly when its residue
//! coefficient is nonzero, and the valuation of a nonzero element is the
//! index of its first nonzero coefficient.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{FieldElement, FieldTower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesError {
    LevelMismatch { left: usize, right: usize },
    NotAUnit,
    ZeroElement,
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::LevelMismatch { left, right } => {
                write!(f, "series truncation levels differ: {left} vs {right}")
            }
            SeriesError::NotAUnit => write!(f, "series is not a unit (zero residue)"),
            SeriesError::ZeroElement => write!(f, "valuation of zero is undefined"),
        }
    }
}

impl core::error::Error for SeriesError {}

/// A length-`m` coefficient vector `(a_0, ..., a_{m-1})` over `F_{q^n}`,
/// representing `a_0 + a_1 P + ... + a_{m-1} P^{m-1}` in `R_m`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TwistedSeries {
    coeffs: Vec<FieldElement>,
}

impl TwistedSeries {
    pub fn from_coeffs(coeffs: Vec<FieldElement>) -> TwistedSeries {
        assert!(!coeffs.is_empty(), "truncation level must be positive");
        TwistedSeries { coeffs }
    }

    pub fn zero(m: usize) -> TwistedSeries {
        TwistedSeries {
            coeffs: vec![FieldElement::ZERO; m],
        }
    }

    pub fn one(m: usize) -> TwistedSeries {
        let mut s = TwistedSeries::zero(m);
        s.coeffs[0] = FieldElement::ONE;
        s
    }

    /// The uniformizer `P` (zero when `m = 1`, where `P = 0` in `R_1`).
    pub fn pi(m: usize) -> TwistedSeries {
        let mut s = TwistedSeries::zero(m);
        if m > 1 {
            s.coeffs[1] = FieldElement::ONE;
        }
        s
    }

    /// A field scalar embedded in degree 0.
    pub fn scalar(c: FieldElement, m: usize) -> TwistedSeries {
        let mut s = TwistedSeries::zero(m);
        s.coeffs[0] = c;
        s
    }

    pub fn level(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Units of `R_m` are exactly the series with nonzero residue.
    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Coefficientwise `sigma^k`; this is conjugation by `P^k` on `R_m`.
    pub fn frobenius(&self, tower: &FieldTower, k: i64) -> TwistedSeries {
        TwistedSeries {
            coeffs: self.coeffs.iter().map(|&c| tower.frobenius(c, k)).collect(),
        }
    }

    pub fn add(
        &self,
        tower: &FieldTower,
        other: &TwistedSeries,
    ) -> Result<TwistedSeries, SeriesError> {
        self.check_level(other)?;
        Ok(TwistedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| tower.add(a, b))
                .collect(),
        })
    }

    pub fn sub(
        &self,
        tower: &FieldTower,
        other: &TwistedSeries,
    ) -> Result<TwistedSeries, SeriesError> {
        self.check_level(other)?;
        Ok(TwistedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| tower.sub(a, b))
                .collect(),
        })
    }

    /// Twisted product: `(ab)_k = sum_{i+j=k} a_i sigma^i(b_j)`.
    pub fn mul(
        &self,
        tower: &FieldTower,
        other: &TwistedSeries,
    ) -> Result<TwistedSeries, SeriesError> {
        self.check_level(other)?;
        let m = self.level();
        let mut out = TwistedSeries::zero(m);
        for (i, &ai) in self.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, &bj) in other.coeffs.iter().take(m - i).enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let term = tower.mul(ai, tower.frobenius(bj, i as i64));
                out.coeffs[i + j] = tower.add(out.coeffs[i + j], term);
            }
        }
        Ok(out)
    }

    /// Two-sided inverse of a unit: residue inversion followed by the
    /// geometric series in the nilpotent part.
    pub fn inv(&self, tower: &FieldTower) -> Result<TwistedSeries, SeriesError> {
        if !self.is_unit() {
            return Err(SeriesError::NotAUnit);
        }
        let m = self.level();
        let c_inv = tower
            .inv(self.coeffs[0])
            .expect("unit residue is invertible");
        let c_inv_s = TwistedSeries::scalar(c_inv, m);
        // u = c^{-1} a has residue 1; write u = 1 - w with w nilpotent.
        let u = c_inv_s.mul(tower, self).expect("same level");
        let w = TwistedSeries::one(m).sub(tower, &u).expect("same level");
        let mut geom = TwistedSeries::one(m);
        let mut w_pow = TwistedSeries::one(m);
        for _ in 1..m {
            w_pow = w_pow.mul(tower, &w).expect("same level");
            if w_pow.is_zero() {
                break;
            }
            geom = geom.add(tower, &w_pow).expect("same level");
        }
        // a^{-1} = (1 - w)^{-1} c^{-1}
        let result = geom.mul(tower, &c_inv_s).expect("same level");
        debug_assert_eq!(
            self.mul(tower, &result).expect("same level"),
            TwistedSeries::one(m)
        );
        Ok(result)
    }

    /// Least index with a nonzero coefficient; `v(P) = 1`, units have `v = 0`.
    pub fn valuation(&self) -> Result<usize, SeriesError> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(SeriesError::ZeroElement)
    }

    fn check_level(&self, other: &TwistedSeries) -> Result<(), SeriesError> {
        if self.level() != other.level() {
            return Err(SeriesError::LevelMismatch {
                left: self.level(),
                right: other.level(),
            });
        }
        Ok(())
    }
}

/// Enumerate all units of `R_m` in lexicographic order of the coefficient
/// tuple `(a_0, ..., a_{m-1})` (element codes as integers, `a_0` most
/// significant).
pub fn enumerate_units(tower: &FieldTower, m: usize) -> Vec<TwistedSeries> {
    let size = tower.size() as u32;
    let mut out = Vec::new();
    let mut digits = vec![0u32; m];
    digits[0] = 1;
    loop {
        out.push(TwistedSeries::from_coeffs(
            digits.iter().map(|&d| FieldElement(d)).collect(),
        ));
        // increment the tuple, least-significant digit last
        let mut pos = m;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            let limit = size;
            if digits[pos] < limit {
                break;
            }
            digits[pos] = if pos == 0 { 1 } else { 0 };
            if pos == 0 {
                return out;
            }
        }
    }
}
