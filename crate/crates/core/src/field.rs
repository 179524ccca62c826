//! The coefficient field tower `F_p ⊆ F_q ⊆ F_{q^n}` with `q = p^e`.
//!
//! One extension `F_{q^n} = F_p[x]/(f)` of degree `e·n` is built over the
//! prime field, with `f` the lexicographically least irreducible monic
//! polynomial of that degree (least integer code of the non-leading
//! coefficient vector). Elements are stored as integer codes
//! `sum c_i p^i` of their coefficient vectors; multiplication, inversion and
//! powers go through discrete exp/log tables for a fixed generator, and the
//! `q`-power Frobenius `sigma` generating `Gal(F_{q^n}/F_q)` is tabulated for
//! every power. The tower is immutable after construction and all operations
//! are pure, so it can be shared freely across threads.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Default cap on `p^{e·n}`: fields larger than this are refused.
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 20;

/// An element of `F_{q^n}`, stored as the integer code of its coefficient
/// vector over `F_p` (coefficient of `x^i` contributes `c_i p^i`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    SizeBound { size: u128, bound: u64 },
    DivisionByZero,
    BadParameter(&'static str),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::SizeBound { size, bound } => {
                write!(f, "field size {size} exceeds enumeration bound {bound}")
            }
            FieldError::DivisionByZero => write!(f, "division by zero in field"),
            FieldError::BadParameter(s) => write!(f, "bad parameter: {s}"),
        }
    }
}

impl core::error::Error for FieldError {}

/// The tower `F_p ⊆ F_q ⊆ F_{q^n}`, fully enumerated.
#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u64,
    e: u32,
    n: u32,
    deg: u32,
    size: usize,
    modulus: Vec<u64>,
    generator: FieldElement,
    log: Vec<u32>,
    exp: Vec<u32>,
    // frob[k][a] = a^(q^k), k = 0..n
    frob: Vec<Vec<u32>>,
}

impl FieldTower {
    /// Construct the tower for the given `(p, e, n)` with the default size bound.
    pub fn build(p: u64, e: u32, n: u32) -> Result<FieldTower, FieldError> {
        FieldTower::build_with_bound(p, e, n, DEFAULT_FIELD_BOUND)
    }

    pub fn build_with_bound(p: u64, e: u32, n: u32, bound: u64) -> Result<FieldTower, FieldError> {
        if e == 0 || n == 0 {
            return Err(FieldError::BadParameter("e and n must be positive"));
        }
        if !is_prime_small(p) {
            return Err(FieldError::NotPrime(p));
        }
        let deg = e * n;
        let size_big = (p as u128).checked_pow(deg).ok_or(FieldError::SizeBound {
            size: u128::MAX,
            bound,
        })?;
        if size_big > bound as u128 || size_big > u32::MAX as u128 {
            return Err(FieldError::SizeBound {
                size: size_big,
                bound,
            });
        }
        let size = size_big as usize;

        let modulus = least_irreducible(p, deg);

        // Multiplication via the modulus, used to bootstrap the tables.
        let raw_mul = |a: u32, b: u32| -> u32 {
            let pa = decode(p, deg, a);
            let pb = decode(p, deg, b);
            let prod = poly_mul_mod(&pa, &pb, &modulus, p);
            encode(p, &prod)
        };

        // Least multiplicative generator of F_{q^n}^*.
        let group_order = (size - 1) as u64;
        let prime_factors = distinct_prime_factors(group_order);
        let mut generator = 0u32;
        'search: for cand in 2..size as u32 {
            for &f in &prime_factors {
                if raw_pow(cand, group_order / f, raw_mul) == 1 {
                    continue 'search;
                }
            }
            generator = cand;
            break;
        }
        debug_assert!(generator != 0 || size == 2);
        if size == 2 {
            generator = 1;
        }
        // Order check is an invariant of the construction.
        assert_eq!(raw_pow(generator, group_order, raw_mul), 1);

        let mut exp = vec![0u32; 2 * (size - 1)];
        let mut log = vec![0u32; size];
        let mut acc = 1u32;
        for (i, slot) in exp.iter_mut().enumerate().take(size - 1) {
            *slot = acc;
            log[acc as usize] = i as u32;
            acc = raw_mul(acc, generator);
        }
        assert_eq!(acc, 1, "generator order mismatch");
        for i in 0..size - 1 {
            exp[size - 1 + i] = exp[i];
        }

        // Frobenius powers sigma^k = (.)^(q^k) tabulated over the whole field.
        let q_big = (p as u128).pow(e);
        let mut frob = Vec::with_capacity(n as usize + 1);
        for k in 0..=n {
            let qk = pow_mod_u128(q_big, k as u64, group_order as u128) as u64;
            let mut table = vec![0u32; size];
            for (a, slot) in table.iter_mut().enumerate().skip(1) {
                let l = log[a] as u64;
                *slot = exp[((l as u128 * qk as u128) % group_order as u128) as usize];
            }
            frob.push(table);
        }

        Ok(FieldTower {
            p,
            e,
            n,
            deg,
            size,
            modulus,
            generator: FieldElement(generator),
            log,
            exp,
            frob,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// q = p^e.
    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    /// Number of elements of `F_{q^n}`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// The defining polynomial over `F_p` (little-endian, monic of degree `e·n`).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Coefficient vector of `a` over `F_p`, length `e·n`.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let mut v = decode(self.p, self.deg, a.0);
        v.resize(self.deg as usize, 0);
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size as u32).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let mut x = a.0 as u64;
        let mut y = b.0 as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while x != 0 || y != 0 {
            out += (x % self.p + y % self.p) % self.p * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out as u32)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0 as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while x != 0 {
            out += (self.p - x % self.p) % self.p * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElement(out as u32)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let l = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        FieldElement(self.exp[l])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let ord = self.size - 1;
        let l = self.log[a.0 as usize] as usize;
        Ok(FieldElement(self.exp[(ord - l) % ord]))
    }

    pub fn pow(&self, a: FieldElement, k: i64) -> FieldElement {
        let ord = (self.size - 1) as i64;
        if a.0 == 0 {
            // 0^0 = 1 by convention, 0^k = 0 for k > 0; negative powers of 0 are out.
            return if k == 0 {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            };
        }
        let l = self.log[a.0 as usize] as i64;
        let idx = (l as i128 * k as i128).rem_euclid(ord as i128) as usize;
        FieldElement(self.exp[idx])
    }

    /// `sigma^k(a) = a^(q^k)`; `k` is taken modulo `n` since `sigma^n = id`.
    pub fn frobenius(&self, a: FieldElement, k: i64) -> FieldElement {
        let k = k.rem_euclid(self.n as i64) as usize;
        FieldElement(self.frob[k][a.0 as usize])
    }
}

fn decode(p: u64, deg: u32, code: u32) -> Vec<u64> {
    let mut v = Vec::with_capacity(deg as usize);
    let mut c = code as u64;
    for _ in 0..deg {
        v.push(c % p);
        c /= p;
    }
    v
}

fn encode(p: u64, coeffs: &[u64]) -> u32 {
    let mut code = 0u64;
    for &c in coeffs.iter().rev() {
        code = code * p + c;
    }
    code as u32
}

fn raw_pow(base: u32, mut k: u64, mul: impl Fn(u32, u32) -> u32) -> u32 {
    let mut acc = 1u32;
    let mut b = base;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul(acc, b);
        }
        b = mul(b, b);
        k >>= 1;
    }
    acc
}

fn pow_mod_u128(base: u128, mut k: u64, modulus: u128) -> u128 {
    let mut acc = 1u128 % modulus;
    let mut b = base % modulus;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b % modulus;
        }
        b = b * b % modulus;
        k >>= 1;
    }
    acc
}

fn is_prime_small(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn distinct_prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            while v.is_multiple_of(d) {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

// ---- dense polynomial arithmetic over F_p (construction-time only) ----

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&mut prod, modulus, p);
    prod
}

/// In-place remainder of `a` modulo the monic polynomial `modulus`.
fn poly_rem(a: &mut Vec<u64>, modulus: &[u64], p: u64) {
    let d = modulus.len() - 1;
    poly_trim(a);
    while a.len() > d {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - d;
        if lead != 0 {
            for (i, &mi) in modulus.iter().enumerate() {
                let idx = shift + i;
                a[idx] = (a[idx] + (p - mi % p) % p * lead) % p;
            }
        }
        a.pop();
        poly_trim(a);
    }
}

fn poly_pow_p_mod(base: &[u64], p: u64, modulus: &[u64]) -> Vec<u64> {
    // base^p mod modulus by square-and-multiply on the exponent p.
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    let mut k = p;
    while k > 0 {
        if k & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, modulus, p);
        }
        b = poly_mul_mod(&b, &b, modulus, p);
        k >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        // a mod b with b made monic on the fly
        let lead = *b.last().unwrap();
        let lead_inv = mod_inv_small(lead, p);
        let monic: Vec<u64> = b.iter().map(|&c| c * lead_inv % p).collect();
        poly_rem(&mut a, &monic, p);
        core::mem::swap(&mut a, &mut b);
        poly_trim(&mut b);
    }
    a
}

fn mod_inv_small(a: u64, p: u64) -> u64 {
    // Fermat; p is a small prime.
    let mut acc = 1u64;
    let mut b = a % p;
    let mut k = p - 2;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        k >>= 1;
    }
    acc
}

/// Monic irreducibility test of `f` of degree `d` over `F_p`:
/// `x^{p^d} = x (mod f)` and `gcd(x^{p^{d/r}} - x, f) = 1` for every prime `r | d`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut frob_powers = Vec::with_capacity(d + 1);
    let mut cur = x.clone();
    frob_powers.push(cur.clone()); // x^{p^0}
    for _ in 0..d {
        cur = poly_pow_p_mod(&cur, p, f);
        frob_powers.push(cur.clone());
    }
    let mut top = frob_powers[d].clone();
    // x^{p^d} - x must vanish mod f
    sub_x(&mut top, p);
    poly_rem(&mut top, f, p);
    if !top.is_empty() {
        return false;
    }
    for r in distinct_prime_factors(d as u64) {
        let k = d / r as usize;
        let mut g = frob_powers[k].clone();
        sub_x(&mut g, p);
        let gcd = poly_gcd(g, f.to_vec(), p);
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

fn sub_x(a: &mut Vec<u64>, p: u64) {
    if a.len() < 2 {
        a.resize(2, 0);
    }
    a[1] = (a[1] + p - 1) % p;
    poly_trim(a);
}

/// Lexicographically least monic irreducible polynomial of degree `d` over `F_p`
/// (least integer code of the lower coefficient vector).
fn least_irreducible(p: u64, d: u32) -> Vec<u64> {
    let count = (p as u128).pow(d);
    for code in 0..count {
        let mut f = decode(p, d, code as u32);
        f.resize(d as usize, 0);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_construction() {
        let t = FieldTower::build(2, 1, 2).unwrap();
        assert_eq!(t.size(), 4);
        // x^2 + x + 1 is the unique irreducible quadratic over F_2
        assert_eq!(t.modulus(), &[1, 1, 1]);
        let x = FieldElement(2);
        let x1 = FieldElement(3);
        assert_eq!(t.mul(x, x1), FieldElement::ONE);
        assert_eq!(t.inv(x).unwrap(), x1);
        assert_eq!(t.frobenius(x, 1), x1);
        assert_eq!(t.frobenius(x, 2), x);
    }

    #[test]
    fn f9_enumeration() {
        let t = FieldTower::build(3, 1, 2).unwrap();
        assert_eq!(t.size(), 9);
        assert_eq!(t.elements().count(), 9);
    }

    #[test]
    fn f8_generator_order() {
        let t = FieldTower::build(2, 1, 3).unwrap();
        assert_eq!(t.size(), 8);
        let g = t.generator();
        let mut acc = FieldElement::ONE;
        let mut order = 0;
        loop {
            acc = t.mul(acc, g);
            order += 1;
            if acc == FieldElement::ONE {
                break;
            }
        }
        assert_eq!(order, 7);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            FieldTower::build(4, 1, 2).unwrap_err(),
            FieldError::NotPrime(4)
        );
        assert!(matches!(
            FieldTower::build_with_bound(2, 1, 30, 1 << 20).unwrap_err(),
            FieldError::SizeBound { .. }
        ));
        assert_eq!(
            FieldTower::build(2, 1, 2)
                .unwrap()
                .inv(FieldElement::ZERO)
                .unwrap_err(),
            FieldError::DivisionByZero
        );
    }

    #[test]
    fn field_axioms_exhaustive_f16() {
        let t = FieldTower::build(2, 2, 2).unwrap();
        assert_eq!(t.size(), 16);
        for a in t.elements() {
            assert_eq!(t.add(a, FieldElement::ZERO), a);
            assert_eq!(t.mul(a, FieldElement::ONE), a);
            if !a.is_zero() {
                assert_eq!(t.mul(a, t.inv(a).unwrap()), FieldElement::ONE);
            }
            // x^{q^n} = x
            assert_eq!(t.frobenius(a, t.n() as i64), a);
            for b in t.elements() {
                assert_eq!(t.add(a, b), t.add(b, a));
                assert_eq!(t.mul(a, b), t.mul(b, a));
                // sigma is a ring map
                assert_eq!(
                    t.frobenius(t.mul(a, b), 1),
                    t.mul(t.frobenius(a, 1), t.frobenius(b, 1))
                );
                assert_eq!(
                    t.frobenius(t.add(a, b), 1),
                    t.add(t.frobenius(a, 1), t.frobenius(b, 1))
                );
            }
        }
    }

    #[test]
    fn fixed_field_of_sigma_has_q_elements() {
        for (p, e, n) in [(2, 1, 2), (2, 2, 2), (3, 1, 2), (2, 1, 3)] {
            let t = FieldTower::build(p, e, n).unwrap();
            let fixed = t.elements().filter(|&a| t.frobenius(a, 1) == a).count();
            assert_eq!(fixed as u64, t.q(), "fixed field size for ({p},{e},{n})");
        }
    }

    #[test]
    fn frobenius_fixes_prime_field_scalars() {
        let t = FieldTower::build(3, 1, 2).unwrap();
        for c in 0..3u32 {
            let a = FieldElement(c);
            assert_eq!(t.frobenius(a, 1), a);
        }
    }

    #[test]
    fn degree_one_tower_is_the_prime_field() {
        // n = e = 1: modulus x, field F_p, sigma = identity
        let t = FieldTower::build(5, 1, 1).unwrap();
        assert_eq!(t.size(), 5);
        assert_eq!(t.modulus(), &[0, 1][..]);
        for a in t.elements() {
            assert_eq!(t.frobenius(a, 1), a);
            for b in t.elements() {
                assert_eq!(
                    t.mul(a, b).0 as u64,
                    (a.0 as u64 * b.0 as u64) % 5,
                    "degree-1 arithmetic is mod-p arithmetic"
                );
            }
        }
    }
}
