//! Arithmetic and linear algebra over the verification prime field `F_l`.
//!
//! Gaussian-style loops below mix reads and writes across rows, which index
//! loops express more clearly than iterator chains.
#![allow(clippy::needless_range_loop)]
//!
//! Hosts u64 modular arithmetic with u128 intermediates, deterministic
//! Miller-Rabin primality, the search for the verification prime
//! `l = 1 (mod exp G)`, roots of unity of prescribed order, and the dense
//! linear algebra needed by the character engine: Gaussian kernels,
//! characteristic polynomials (Hessenberg recurrence) and root extraction of
//! polynomials over `F_l` by gcd splitting.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::rng::SplitMix64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModlError {
    PrimeSearchExhausted { exponent: u64, min: u64 },
    SplittingStalled,
}

impl fmt::Display for ModlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModlError::PrimeSearchExhausted { exponent, min } => write!(
                f,
                "no prime l = 1 mod {exponent} above {min} within the search budget"
            ),
            ModlError::SplittingStalled => write!(f, "polynomial splitting stalled"),
        }
    }
}

impl core::error::Error for ModlError {}

#[inline]
pub fn add_mod(a: u64, b: u64, l: u64) -> u64 {
    let s = a + b;
    if s >= l {
        s - l
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, l: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + l - b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, l: u64) -> u64 {
    (a as u128 * b as u128 % l as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, l: u64) -> u64 {
    base %= l;
    let mut acc = 1 % l;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, l);
        }
        base = mul_mod(base, base, l);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime, by Fermat.
pub fn inv_mod(a: u64, l: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(l));
    pow_mod(a, l - 2, l)
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime `l = 1 (mod exponent)` with `l > min`.
pub fn find_split_prime(exponent: u64, min: u64) -> Result<u64, ModlError> {
    let start = (min / exponent).max(1);
    // generous budget; Linnik guarantees far less is needed at this scale
    for k in start..start.saturating_add(50_000_000) {
        let l = match k.checked_mul(exponent).and_then(|v| v.checked_add(1)) {
            Some(l) => l,
            None => break,
        };
        if l > min && is_prime_u64(l) {
            return Ok(l);
        }
    }
    Err(ModlError::PrimeSearchExhausted { exponent, min })
}

/// A fixed element of exact multiplicative order `d` in `F_l^*`
/// (requires `d | l - 1`): first base `a >= 2` whose `(l-1)/d` power works.
pub fn element_of_order(d: u64, l: u64) -> u64 {
    debug_assert_eq!((l - 1) % d, 0);
    if d == 1 {
        return 1;
    }
    let factors = distinct_prime_factors(d);
    'search: for a in 2..l {
        let z = pow_mod(a, (l - 1) / d, l);
        if z == 1 {
            continue;
        }
        for &f in &factors {
            if pow_mod(z, d / f, l) == 1 {
                continue 'search;
            }
        }
        debug_assert_eq!(pow_mod(z, d, l), 1);
        return z;
    }
    unreachable!("F_l^* is cyclic")
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

// ---- dense polynomials over F_l (little-endian coefficient vectors) ----

pub fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn poly_mul(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(ai, bj, l), l);
        }
    }
    out
}

/// Remainder of `a` modulo monic `f`, in place.
pub fn poly_rem(a: &mut Vec<u64>, f: &[u64], l: u64) {
    let d = f.len() - 1;
    poly_trim(a);
    while a.len() > d {
        let lead = *a.last().unwrap();
        if lead != 0 {
            let shift = a.len() - 1 - d;
            for (i, &fi) in f.iter().enumerate().take(d) {
                a[shift + i] = sub_mod(a[shift + i], mul_mod(lead, fi, l), l);
            }
        }
        a.pop();
        poly_trim(a);
    }
}

fn poly_make_monic(a: &mut [u64], l: u64) {
    let lead = *a.last().unwrap();
    if lead != 1 {
        let inv = inv_mod(lead, l);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, l);
        }
    }
}

/// Monic gcd.
pub fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, l: u64) -> Vec<u64> {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        poly_make_monic(&mut b, l);
        poly_rem(&mut a, &b, l);
        core::mem::swap(&mut a, &mut b);
        poly_trim(&mut b);
    }
    if !a.is_empty() {
        poly_make_monic(&mut a, l);
    }
    a
}

/// `base^exp` modulo monic `f`.
pub fn poly_pow_mod(base: &[u64], mut exp: u64, f: &[u64], l: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    poly_rem(&mut b, f, l);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul(&acc, &b, l);
            poly_rem(&mut acc, f, l);
        }
        b = poly_mul(&b, &b, l);
        poly_rem(&mut b, f, l);
        exp >>= 1;
    }
    acc
}

/// All roots of `f` in `F_l`, each listed once, ascending. Randomized gcd
/// splitting; deterministic given the generator state.
pub fn poly_roots(f: &[u64], l: u64, rng: &mut SplitMix64) -> Result<Vec<u64>, ModlError> {
    let mut f = f.to_vec();
    poly_trim(&mut f);
    assert!(!f.is_empty(), "zero polynomial");
    poly_make_monic(&mut f, l);
    // g = gcd(x^l - x, f) is the product of the distinct linear factors.
    let xl = poly_pow_mod(&[0, 1], l, &f, l);
    let mut xl_minus_x = xl;
    if xl_minus_x.len() < 2 {
        xl_minus_x.resize(2, 0);
    }
    xl_minus_x[1] = sub_mod(xl_minus_x[1], 1, l);
    let g = poly_gcd(xl_minus_x, f, l);
    let mut roots = Vec::new();
    split_linear_product(g, l, rng, &mut roots, 0)?;
    roots.sort_unstable();
    Ok(roots)
}

fn split_linear_product(
    g: Vec<u64>,
    l: u64,
    rng: &mut SplitMix64,
    out: &mut Vec<u64>,
    depth: u32,
) -> Result<(), ModlError> {
    let deg = g.len().saturating_sub(1);
    if deg == 0 {
        return Ok(());
    }
    if deg == 1 {
        // monic x + c -> root -c
        out.push(sub_mod(0, g[0], l));
        return Ok(());
    }
    if depth > 200 {
        return Err(ModlError::SplittingStalled);
    }
    for _ in 0..200 {
        let a = rng.below(l);
        // (x + a)^((l-1)/2) separates roots by quadratic residuosity of r + a
        let h = poly_pow_mod(&[a, 1], (l - 1) / 2, &g, l);
        let mut h_minus_one = h;
        if h_minus_one.is_empty() {
            h_minus_one = vec![0];
        }
        h_minus_one[0] = sub_mod(h_minus_one[0], 1, l);
        let d1 = poly_gcd(h_minus_one, g.clone(), l);
        let k = d1.len().saturating_sub(1);
        if k > 0 && k < deg {
            let d2 = poly_div_exact(&g, &d1, l);
            split_linear_product(d1, l, rng, out, depth + 1)?;
            split_linear_product(d2, l, rng, out, depth + 1)?;
            return Ok(());
        }
    }
    Err(ModlError::SplittingStalled)
}

/// Quotient of `a` by the monic divisor `d` (exact division).
fn poly_div_exact(a: &[u64], d: &[u64], l: u64) -> Vec<u64> {
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let dd = d.len() - 1;
    let mut quot = vec![0u64; rem.len().saturating_sub(dd)];
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dd;
        quot[shift] = lead;
        if lead != 0 {
            for (i, &di) in d.iter().enumerate().take(dd) {
                rem[shift + i] = sub_mod(rem[shift + i], mul_mod(lead, di, l), l);
            }
        }
        rem.pop();
        poly_trim(&mut rem);
    }
    debug_assert!(rem.is_empty(), "division was not exact");
    quot
}

// ---- dense matrices over F_l (row-major Vec<Vec<u64>>) ----

/// Characteristic polynomial det(xI - A) via Hessenberg reduction and the
/// standard last-column recurrence; O(n^3).
pub fn charpoly(a: &[Vec<u64>], l: u64) -> Vec<u64> {
    let n = a.len();
    if n == 0 {
        return vec![1];
    }
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for m in 1..n.saturating_sub(1) {
        let pivot = (m..n).find(|&i| h[i][m - 1] != 0);
        let Some(pivot) = pivot else { continue };
        if pivot != m {
            h.swap(pivot, m);
            for row in h.iter_mut() {
                row.swap(pivot, m);
            }
        }
        let t_inv = inv_mod(h[m][m - 1], l);
        for i in m + 1..n {
            if h[i][m - 1] == 0 {
                continue;
            }
            let u = mul_mod(h[i][m - 1], t_inv, l);
            for col in 0..n {
                let s = mul_mod(u, h[m][col], l);
                h[i][col] = sub_mod(h[i][col], s, l);
            }
            for row in 0..n {
                let s = mul_mod(u, h[row][i], l);
                h[row][m] = add_mod(h[row][m], s, l);
            }
        }
    }
    // p_0 = 1; p_{i+1} = (x - h[i][i]) p_i - sum_{k<=i-1} h[k][i] (prod_{j=k+1..=i} h[j][j-1]) p_k
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for i in 0..n {
        let pi = polys[i].clone();
        let mut next = vec![0u64; pi.len() + 1];
        for (d, &c) in pi.iter().enumerate() {
            next[d + 1] = add_mod(next[d + 1], c, l);
            next[d] = sub_mod(next[d], mul_mod(h[i][i], c, l), l);
        }
        let mut prod = 1u64;
        for k in (0..i).rev() {
            prod = mul_mod(prod, h[k + 1][k], l);
            if prod == 0 {
                break;
            }
            let coef = mul_mod(h[k][i], prod, l);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[k].iter().enumerate() {
                next[d] = sub_mod(next[d], mul_mod(coef, c, l), l);
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Kernel basis of `a` (rows × cols), in reduced echelon form.
pub fn kernel(a: &[Vec<u64>], l: u64) -> Vec<Vec<u64>> {
    if a.is_empty() {
        return Vec::new();
    }
    let rows = a.len();
    let cols = a[0].len();
    let mut m: Vec<Vec<u64>> = a.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = inv_mod(m[r][c], l);
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, l);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for cc in 0..cols {
                    let s = mul_mod(factor, m[r][cc], l);
                    m[i][cc] = sub_mod(m[i][cc], s, l);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    for free in 0..cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = sub_mod(0, m[row][free], l);
        }
        basis.push(v);
    }
    basis
}

/// Row-reduce `rows` in place to reduced echelon form, dropping zero rows;
/// returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<u64>>, l: u64) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = inv_mod(rows[r][c], l);
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, l);
        }
        for i in 0..nrows {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for cc in 0..ncols {
                    let s = mul_mod(factor, rows[r][cc], l);
                    rows[i][cc] = sub_mod(rows[i][cc], s, l);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    rows.retain(|row| row.iter().any(|&x| x != 0));
    pivots
}
