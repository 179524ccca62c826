//! The Plancherel density as an exact rational function of `Y = q^{-s}`,
//! its factorized form, and a floating-point shell-sum oracle.
//!
//! With the variable choice `Y = q^{-s}`, every exponential `q^{±ts}`,
//! `q^{-t(s±r)}` is a Laurent monomial with exact rational coefficient, so
//! the density identities are decided by cross-multiplication with no
//! transcendental arithmetic. For a pair at positive distance the inverse
//! density is the constant `inv/(d1 d2)`; on the diagonal it is
//! `(inv + un(Y))/d^2` with `un = t^2/((1-Y^{-t})(1-Y^t))`.
//!
//! The oracle sums the unit-shell expansion of `mu^{-1} d1 d2` from the
//! proof of the density computation: shells of positive valuation contribute
//! `vol(U_k)·dim Hom_{U_k}`, shells of valuation `-M <= 0` contribute
//! `t·q^{t·floor(M/t)·s}/(1 - q^{-ts})` on the diagonal and vanish otherwise.
//! Both tails beyond the truncation are geometric and are summed in closed
//! form, so the comparison meets a 1e-9 relative tolerance anywhere in the
//! convergence region `Re s < 0`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::ratio::{q_pow, rat_int};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlancherelError {
    /// A proved identity failed on computed data; must never fire.
    IdentityFails { context: String },
    /// The oracle was asked for a point outside `Re s < 0`.
    ConvergenceRegion,
}

impl fmt::Display for PlancherelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlancherelError::IdentityFails { context } => {
                write!(f, "density identity failed: {context}")
            }
            PlancherelError::ConvergenceRegion => {
                write!(f, "oracle sample point must have Re s < 0")
            }
        }
    }
}

impl core::error::Error for PlancherelError {}

/// Laurent polynomial in `Y` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::monomial(0, BigRational::one())
    }

    pub fn constant(c: BigRational) -> LaurentPoly {
        LaurentPoly::monomial(0, c)
    }

    pub fn monomial(exp: i64, coeff: BigRational) -> LaurentPoly {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    fn insert(&mut self, exp: i64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&exp) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.coeffs.remove(&exp);
                }
            }
            None => {
                self.coeffs.insert(exp, coeff);
            }
        }
    }

    /// Substitution `Y -> Y^{-1}`.
    pub fn invert_variable(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Ordinary-polynomial form: smallest exponent and dense coefficients.
    pub fn to_dense(&self) -> (i64, Vec<BigRational>) {
        if self.is_zero() {
            return (0, Vec::new());
        }
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        let mut dense = alloc::vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in self.terms() {
            dense[(e - lo) as usize] = c.clone();
        }
        (lo, dense)
    }

    pub fn eval(&self, y: Complex) -> Complex {
        self.terms().fold(Complex::ZERO, |acc, (e, c)| {
            acc + Complex::from_re(rational_to_f64(c)) * y.powi(e)
        })
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.insert(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.insert(e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.insert(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

/// Sparse coefficient list of an ordinary polynomial in `Y`.
pub type CoeffList = Vec<(i64, BigRational)>;

/// Quotient of Laurent polynomials; equality is decided by
/// cross-multiplication, evaluation goes through f64.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFn {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> RationalFn {
        assert!(!den.is_zero(), "zero denominator");
        RationalFn { num, den }
    }

    pub fn from_rational(c: BigRational) -> RationalFn {
        RationalFn {
            num: LaurentPoly::constant(c),
            den: LaurentPoly::one(),
        }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn add(&self, rhs: &RationalFn) -> RationalFn {
        RationalFn {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }

    pub fn mul(&self, rhs: &RationalFn) -> RationalFn {
        RationalFn {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }

    pub fn scale(&self, c: &BigRational) -> RationalFn {
        RationalFn {
            num: &self.num * &LaurentPoly::constant(c.clone()),
            den: self.den.clone(),
        }
    }

    pub fn eq_fn(&self, rhs: &RationalFn) -> bool {
        &self.num * &rhs.den == &rhs.num * &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.eval_symbolic_constant().is_some()
    }

    /// If the function is a constant, return it (`f = c` iff `num = c·den`).
    pub fn eval_symbolic_constant(&self) -> Option<BigRational> {
        if self.num.is_zero() {
            return Some(BigRational::zero());
        }
        let (_, nd) = self.num.to_dense();
        let (_, dd) = self.den.to_dense();
        let c = nd.last()? / dd.last()?;
        let scaled = &self.den * &LaurentPoly::constant(c.clone());
        (self.num == scaled).then_some(c)
    }

    pub fn invert_variable(&self) -> RationalFn {
        RationalFn {
            num: self.num.invert_variable(),
            den: self.den.invert_variable(),
        }
    }

    pub fn eval(&self, y: Complex) -> Complex {
        self.num.eval(y) / self.den.eval(y)
    }

    /// Canonical (num, den) pair for serialization: both ordinary polynomials
    /// with no common `Y` power, denominator with leading coefficient 1.
    pub fn canonical_pair(&self) -> (CoeffList, CoeffList) {
        let (nlo, nd) = self.num.to_dense();
        let (dlo, dd) = self.den.to_dense();
        if dd.is_empty() {
            unreachable!("zero denominator");
        }
        if nd.is_empty() {
            return (CoeffList::new(), alloc::vec![(0, BigRational::one())]);
        }
        let shift = nlo.min(dlo);
        let lead = dd.last().unwrap().clone();
        let num: CoeffList = nd
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (nlo - shift + i as i64, c / &lead))
            .collect();
        let den: CoeffList = dd
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (dlo - shift + i as i64, c / &lead))
            .collect();
        (num, den)
    }

    /// Order of vanishing at `Y = 1` of the denominator in lowest terms.
    pub fn reduced_denominator_order_at_one(&self) -> u32 {
        let (_, mut a) = self.num.to_dense();
        let (_, mut b) = self.den.to_dense();
        poly_q_trim(&mut a);
        poly_q_trim(&mut b);
        let g = poly_q_gcd(a, b.clone());
        let mut d = poly_q_div_exact(&b, &g);
        let mut order = 0;
        loop {
            let at_one = poly_q_eval_one(&d);
            if !at_one.is_zero() || d.len() <= 1 {
                return order;
            }
            d = deflate_at_one(&d);
            order += 1;
        }
    }

    /// Exact value at `Y = 1` after reducing to lowest terms; `None` when the
    /// function still has a pole there.
    pub fn eval_at_one_reduced(&self) -> Option<BigRational> {
        if self.num.is_zero() {
            return Some(BigRational::zero());
        }
        let (_, mut a) = self.num.to_dense();
        let (_, mut b) = self.den.to_dense();
        poly_q_trim(&mut a);
        poly_q_trim(&mut b);
        let g = poly_q_gcd(a.clone(), b.clone());
        let num = poly_q_div_exact(&a, &g);
        let den = poly_q_div_exact(&b, &g);
        let den_at_one = poly_q_eval_one(&den);
        if den_at_one.is_zero() {
            return None;
        }
        // the discarded common Y-power contributes a factor 1 at Y = 1
        Some(poly_q_eval_one(&num) / den_at_one)
    }
}

/// The limit of `mu^{-1}(s) (1 - q^{-s})(1 - q^{s})` at `s = 0`, evaluated
/// exactly; its expected value on the diagonal is `1/d^2`.
pub fn olshanski_limit(mu_inv: &RationalFn) -> Option<BigRational> {
    let one = LaurentPoly::one();
    let factor = RationalFn::new(
        &(&one - &LaurentPoly::monomial(1, BigRational::one()))
            * &(&one - &LaurentPoly::monomial(-1, BigRational::one())),
        one,
    );
    mu_inv.mul(&factor).eval_at_one_reduced()
}

// ---- dense polynomials over Q (for gcd / deflation only) ----

fn poly_q_trim(a: &mut Vec<BigRational>) {
    while a.last().map(|c| c.is_zero()).unwrap_or(false) {
        a.pop();
    }
}

fn poly_q_eval_one(a: &[BigRational]) -> BigRational {
    a.iter().fold(BigRational::zero(), |acc, c| acc + c)
}

fn poly_q_rem(a: &mut Vec<BigRational>, b: &[BigRational]) {
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    while a.len() > db {
        let coef = a.last().unwrap() / lead;
        let shift = a.len() - 1 - db;
        if !coef.is_zero() {
            for (i, bi) in b.iter().enumerate().take(db) {
                let delta = &coef * bi;
                a[shift + i] -= delta;
            }
        }
        a.pop();
        poly_q_trim(a);
    }
}

fn poly_q_gcd(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    poly_q_trim(&mut a);
    poly_q_trim(&mut b);
    while !b.is_empty() {
        poly_q_rem(&mut a, &b);
        core::mem::swap(&mut a, &mut b);
        poly_q_trim(&mut b);
    }
    if let Some(lead) = a.last().cloned() {
        for c in a.iter_mut() {
            *c /= lead.clone();
        }
    }
    a
}

fn poly_q_div_exact(a: &[BigRational], d: &[BigRational]) -> Vec<BigRational> {
    let mut rem = a.to_vec();
    poly_q_trim(&mut rem);
    if d.len() == 1 {
        return rem.into_iter().map(|c| c / &d[0]).collect();
    }
    let dd = d.len() - 1;
    let lead = d.last().unwrap();
    let mut quot = alloc::vec![BigRational::zero(); rem.len().saturating_sub(dd)];
    while rem.len() > dd {
        let coef = rem.last().unwrap() / lead;
        let shift = rem.len() - 1 - dd;
        quot[shift] = coef.clone();
        for (i, di) in d.iter().enumerate().take(dd) {
            let delta = &coef * di;
            rem[shift + i] -= delta;
        }
        rem.pop();
        poly_q_trim(&mut rem);
    }
    debug_assert!(rem.is_empty(), "division was not exact");
    quot
}

/// Divide by `(Y - 1)` assuming the value at 1 vanishes.
fn deflate_at_one(p: &[BigRational]) -> Vec<BigRational> {
    let n = p.len();
    let mut q = alloc::vec![BigRational::zero(); n - 1];
    let mut carry = BigRational::zero();
    for i in (1..n).rev() {
        carry += &p[i];
        q[i - 1] = carry.clone();
    }
    q
}

fn rational_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

// ---- the density functions ----

/// `un(Y) = t^2 / ((1 - Y^{-t})(1 - Y^t))`.
pub fn un_term(t: u64) -> RationalFn {
    let one = LaurentPoly::one();
    let a = &one - &LaurentPoly::monomial(-(t as i64), BigRational::one());
    let b = &one - &LaurentPoly::monomial(t as i64, BigRational::one());
    RationalFn::new(LaurentPoly::constant(rat_int((t * t) as i64)), &a * &b)
}

/// `mu^{-1}` for a pair at positive distance: the constant `inv/(d1 d2)`.
pub fn mu_inverse_distinct(inv: &BigRational, d1: u64, d2: u64) -> RationalFn {
    RationalFn::from_rational(inv / rat_int((d1 * d2) as i64))
}

/// `mu^{-1}` on the diagonal: `(inv + un(Y)) / d^2`.
pub fn mu_inverse_equal(inv_self: &BigRational, t: u64, d: u64) -> RationalFn {
    let sum = RationalFn::from_rational(inv_self.clone()).add(&un_term(t));
    sum.scale(&(BigRational::one() / rat_int((d * d) as i64)))
}

/// Factorized diagonal form:
/// `mu^{-1} d^2 = t^2/(1-q^{-rt})^2 · (1 - q^{-rt} Y^t)(1 - q^{-rt} Y^{-t}) / ((1-Y^{-t})(1-Y^t))`.
pub fn factorized_mu_inverse_equal(q: u64, t: u64, r: u64, d: u64) -> RationalFn {
    let one = LaurentPoly::one();
    let qrt = q_pow(q, -((r * t) as i64));
    let a = &one - &LaurentPoly::monomial(t as i64, qrt.clone());
    let b = &one - &LaurentPoly::monomial(-(t as i64), qrt.clone());
    let c = &one - &LaurentPoly::monomial(-(t as i64), BigRational::one());
    let e = &one - &LaurentPoly::monomial(t as i64, BigRational::one());
    let scale = rat_int((t * t) as i64)
        / ((BigRational::one() - qrt.clone()) * (BigRational::one() - qrt))
        / rat_int((d * d) as i64);
    RationalFn::new(&(&a * &b) * &LaurentPoly::constant(scale), &c * &e)
}

/// Exact cross-multiplied check of the factorized diagonal identity.
pub fn check_factorization_equal(
    q: u64,
    t: u64,
    r: u64,
    d: u64,
    inv_self: &BigRational,
) -> Result<(), PlancherelError> {
    let lhs = mu_inverse_equal(inv_self, t, d);
    let rhs = factorized_mu_inverse_equal(q, t, r, d);
    if lhs.eq_fn(&rhs) {
        Ok(())
    } else {
        Err(PlancherelError::IdentityFails {
            context: alloc::format!("diagonal factorization (t={t}, r={r}, d={d})"),
        })
    }
}

/// Exact scalar identity `mu = v_n^2 q^f` for a pair at positive distance.
pub fn check_scalar_distinct(
    q: u64,
    n: u32,
    inv: &BigRational,
    d1: u64,
    d2: u64,
    f: i64,
) -> Result<(), PlancherelError> {
    let vn = crate::ratio::v_n(q, n);
    let lhs = inv / rat_int((d1 * d2) as i64);
    let rhs = q_pow(q, -f) / (vn.clone() * vn);
    if lhs == rhs {
        Ok(())
    } else {
        Err(PlancherelError::IdentityFails {
            context: alloc::format!("scalar density vs conductor (f={f})"),
        })
    }
}

// ---- complex arithmetic and the shell-sum oracle ----

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Complex {
        Complex { re, im }
    }

    pub fn from_re(re: f64) -> Complex {
        Complex { re, im: 0.0 }
    }

    pub fn abs(self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    pub fn powi(self, mut e: i64) -> Complex {
        let mut base = if e < 0 {
            e = -e;
            Complex::ONE / self
        } else {
            self
        };
        let mut acc = Complex::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        Complex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Div for Complex {
    type Output = Complex;
    fn div(self, rhs: Complex) -> Complex {
        let d = rhs.re * rhs.re + rhs.im * rhs.im;
        Complex::new(
            (self.re * rhs.re + self.im * rhs.im) / d,
            (self.im * rhs.re - self.re * rhs.im) / d,
        )
    }
}

/// `q^w` for complex `w`.
pub fn q_pow_complex(q: u64, w: Complex) -> Complex {
    let ln_q = libm::log(q as f64);
    let scale = libm::exp(w.re * ln_q);
    Complex::new(
        scale * libm::cos(w.im * ln_q),
        scale * libm::sin(w.im * ln_q),
    )
}

/// Data the oracle needs about one (possibly diagonal-reduced) pair.
pub struct OracleInput<'a> {
    pub q: u64,
    pub n: u32,
    pub m: usize,
    /// Hom profile of the pair, levels `0..=m`.
    pub hom_dims: &'a [u64],
    pub d1d2: u64,
    /// `Some(t)` on the diagonal, `None` for positive distance.
    pub equal_case: Option<u64>,
}

/// Shell sum for `mu^{-1}(s)·d1·d2` over valuations `-N..=N`, with both
/// geometric tails added in closed form.
pub fn series_oracle(
    input: &OracleInput<'_>,
    s: Complex,
    shells: usize,
) -> Result<Complex, PlancherelError> {
    if s.re >= 0.0 {
        return Err(PlancherelError::ConvergenceRegion);
    }
    let big_n = shells.max(input.m);
    let q = input.q as f64;
    let n = input.n as i32;
    let vol_factor = 1.0 - libm::pow(q, -(n as f64));

    // positive valuation shells: vol(U_k)·hom_k, constant d1 d2 from level m on
    let mut total = Complex::ZERO;
    for k in 1..=big_n {
        let hom = input.hom_dims[k.min(input.m)] as f64;
        if hom == 0.0 {
            continue;
        }
        let vol = libm::pow(q, -((k as i32 * n) as f64)) / vol_factor;
        total = total + Complex::from_re(vol * hom);
    }
    // tail: d1 d2 · q^{-(N+1)n} / (1-q^{-n})^2
    let tail_pos = input.d1d2 as f64 * libm::pow(q, -(((big_n + 1) as i32 * n) as f64))
        / (vol_factor * vol_factor);
    total = total + Complex::from_re(tail_pos);

    if let Some(t) = input.equal_case {
        let t_i = t as i64;
        let qts = q_pow_complex(
            input.q,
            Complex::new((t_i as f64) * s.re, (t_i as f64) * s.im),
        );
        let qmts = Complex::ONE / qts;
        let denom = Complex::ONE - qmts; // 1 - q^{-ts}
        let t_c = Complex::from_re(t as f64);
        // shells of valuation -M, M = 0..=N
        for big_m in 0..=big_n as i64 {
            let j = big_m / t_i;
            let term =
                t_c * q_pow_complex(
                    input.q,
                    Complex::new(j as f64 * t_i as f64 * s.re, j as f64 * t_i as f64 * s.im),
                ) / denom;
            total = total + term;
        }
        // closed tail over M > N
        let j0 = (big_n as i64 + 1) / t_i;
        let cnt = (j0 + 1) * t_i - (big_n as i64 + 1);
        let q_tj0s = q_pow_complex(
            input.q,
            Complex::new(j0 as f64 * t_i as f64 * s.re, j0 as f64 * t_i as f64 * s.im),
        );
        let q_tj1s = q_pow_complex(
            input.q,
            Complex::new(
                (j0 + 1) as f64 * t_i as f64 * s.re,
                (j0 + 1) as f64 * t_i as f64 * s.im,
            ),
        );
        let geom = q_tj1s / (Complex::ONE - qts);
        let tail = t_c
            * (Complex::from_re(cnt as f64) * q_tj0s + Complex::from_re(t as f64) * geom)
            / denom;
        total = total + tail;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::big_int;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(big_int(n), big_int(d))
    }

    #[test]
    fn laurent_arithmetic() {
        let a = LaurentPoly::monomial(-1, rat(1, 1));
        let b = LaurentPoly::monomial(1, rat(1, 1));
        let prod = &a * &b;
        assert_eq!(prod, LaurentPoly::one());
        let sum = &a + &b;
        assert_eq!(sum.min_exp(), Some(-1));
        assert_eq!(sum.max_exp(), Some(1));
        let cancel = &sum - &sum;
        assert!(cancel.is_zero());
    }

    #[test]
    fn un_is_symmetric() {
        for t in 1..=4 {
            let u = un_term(t);
            assert!(u.eq_fn(&u.invert_variable()));
        }
    }

    #[test]
    fn trivial_rep_factorization_q2_n2() {
        // t = 1, r = 2, d = 1, inv = 4/9
        check_factorization_equal(2, 1, 2, 1, &rat(4, 9)).unwrap();
    }

    #[test]
    fn rho_factorization_sym3() {
        // t = 2, r = 1, d = 2, inv = 16/9
        check_factorization_equal(2, 2, 1, 2, &rat(16, 9)).unwrap();
    }

    #[test]
    fn factorization_rejects_wrong_r() {
        assert!(check_factorization_equal(2, 1, 1, 1, &rat(4, 9)).is_err());
    }

    #[test]
    fn scalar_identity_distinct_pair() {
        // Sym(3) model (trivial, rho): inv = 8/9, d1 d2 = 2, f = 4
        check_scalar_distinct(2, 2, &rat(8, 9), 1, 2, 4).unwrap();
        assert!(check_scalar_distinct(2, 2, &rat(8, 9), 1, 2, 3).is_err());
    }

    #[test]
    fn diagonal_density_diverges_at_y_equals_1() {
        let mu = mu_inverse_equal(&rat(16, 9), 2, 2);
        assert_eq!(mu.reduced_denominator_order_at_one(), 2);
        let mu_triv = mu_inverse_equal(&rat(4, 9), 1, 1);
        assert_eq!(mu_triv.reduced_denominator_order_at_one(), 2);
        // constant case has no pole
        let flat = mu_inverse_distinct(&rat(8, 9), 1, 2);
        assert_eq!(flat.reduced_denominator_order_at_one(), 0);
    }

    #[test]
    fn olshanski_limit_is_inverse_square_degree() {
        // the double pole cancels against (1-q^{-s})(1-q^s) and the limit is
        // 1/d^2 on the diagonal
        let mu_triv = mu_inverse_equal(&rat(4, 9), 1, 1);
        assert_eq!(olshanski_limit(&mu_triv), Some(rat(1, 1)));
        let mu_rho = mu_inverse_equal(&rat(16, 9), 2, 2);
        assert_eq!(olshanski_limit(&mu_rho), Some(rat(1, 4)));
        // a constant density is annihilated by the vanishing factor
        let flat = mu_inverse_distinct(&rat(8, 9), 1, 2);
        assert_eq!(olshanski_limit(&flat), Some(rat(0, 1)));
    }

    #[test]
    fn symmetry_under_inversion() {
        let mu = mu_inverse_equal(&rat(16, 9), 2, 2);
        assert!(mu.eq_fn(&mu.invert_variable()));
    }

    #[test]
    fn constant_detection() {
        let c = mu_inverse_distinct(&rat(8, 9), 1, 2);
        assert_eq!(c.eval_symbolic_constant(), Some(rat(4, 9)));
        let mu = mu_inverse_equal(&rat(16, 9), 2, 2);
        assert_eq!(mu.eval_symbolic_constant(), None);
    }

    #[test]
    fn oracle_matches_constant_case() {
        // (trivial, rho) in the Sym(3) model: dist > 0, series must equal inv
        let input = OracleInput {
            q: 2,
            n: 2,
            m: 1,
            hom_dims: &[0, 2],
            d1d2: 2,
            equal_case: None,
        };
        let s = Complex::new(-0.8, 0.4);
        let total = series_oracle(&input, s, 60).unwrap();
        assert!((total.re - 8.0 / 9.0).abs() < 1e-12);
        assert!(total.im.abs() < 1e-12);
    }

    #[test]
    fn oracle_matches_closed_form_trivial() {
        // trivial representation, q = 2, n = 2: closed form (4/9 + un_1)/1
        let mu = mu_inverse_equal(&rat(4, 9), 1, 1);
        let input = OracleInput {
            q: 2,
            n: 2,
            m: 1,
            hom_dims: &[1, 1],
            d1d2: 1,
            equal_case: Some(1),
        };
        for (re, im) in [(-1.0, 0.0), (-0.3, 1.7), (-1.5, -2.0), (-0.4, 0.9)] {
            let s = Complex::new(re, im);
            let y = q_pow_complex(2, Complex::new(-s.re, -s.im));
            let closed = mu.eval(y);
            let oracle = series_oracle(&input, s, 60).unwrap();
            let rel = (closed - oracle).abs() / closed.abs();
            assert!(rel <= 1e-9, "rel error {rel} at s = {re}+{im}i");
        }
    }

    #[test]
    fn oracle_matches_closed_form_rho() {
        let mu = mu_inverse_equal(&rat(16, 9), 2, 2);
        let input = OracleInput {
            q: 2,
            n: 2,
            m: 1,
            hom_dims: &[2, 4],
            d1d2: 4,
            equal_case: Some(2),
        };
        let s = Complex::new(-0.7, 0.3);
        let y = q_pow_complex(2, Complex::new(-s.re, -s.im));
        let closed = mu.eval(y);
        let oracle = series_oracle(&input, s, 80).unwrap();
        let rel = ((closed * Complex::from_re(4.0)) - oracle).abs()
            / (closed * Complex::from_re(4.0)).abs();
        assert!(rel <= 1e-9, "rel error {rel}");
    }

    #[test]
    fn oracle_rejects_bad_region() {
        let input = OracleInput {
            q: 2,
            n: 2,
            m: 1,
            hom_dims: &[1, 1],
            d1d2: 1,
            equal_case: Some(1),
        };
        assert_eq!(
            series_oracle(&input, Complex::new(0.1, 0.0), 60).unwrap_err(),
            PlancherelError::ConvergenceRegion
        );
    }

    #[test]
    fn canonical_pair_is_plain() {
        let mu = mu_inverse_equal(&rat(16, 9), 2, 2);
        let (num, den) = mu.canonical_pair();
        assert!(num.iter().all(|(e, _)| *e >= 0));
        assert!(den.iter().all(|(e, _)| *e >= 0));
        assert!(num.iter().chain(&den).any(|(e, _)| *e == 0));
        // monic-leading denominator
        assert_eq!(den.last().unwrap().1, BigRational::one());
    }
}
