//! Dense polynomials over GF(p) with `u64` coefficients, constant term first.
//!
//! Only what field construction needs: remainder, gcd and modular inverse.
//! `p` is always below 2^32 so products fit in a `u64`.

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a * b) % p
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo `b`; `b` must be nonzero.
pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod(b[db], p);
    let mut r = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - db;
        for (i, &bc) in b[..=db].iter().enumerate() {
            let sub = mul_mod(c, bc, p);
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn make_monic(a: &mut Vec<u64>, p: u64) {
    trim(a);
    if let Some(d) = degree(a) {
        let inv = inv_mod(a[d], p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
}

/// Monic gcd of `a` and `b` (the zero polynomial if both are zero).
pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&mut x, p);
    x
}

fn sub_scaled_shifted(dst: &mut Vec<u64>, src: &[u64], c: u64, shift: usize, p: u64) {
    if dst.len() < src.len() + shift {
        dst.resize(src.len() + shift, 0);
    }
    for (i, &s) in src.iter().enumerate() {
        let sub = mul_mod(c, s, p);
        dst[shift + i] = (dst[shift + i] + p - sub) % p;
    }
    trim(dst);
}

/// Inverse of `a` modulo the irreducible `f`, or `None` when `a ≡ 0`.
pub(crate) fn inv_poly(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = f.to_vec();
    let mut r1 = rem(a, f, p);
    if r1.is_empty() {
        return None;
    }
    trim(&mut r0);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while degree(&r1).unwrap_or(0) > 0 {
        // one long division step at a time, updating the Bezout coefficient
        let d1 = degree(&r1).unwrap();
        let lead_inv = inv_mod(r1[d1], p);
        while let Some(d0) = degree(&r0) {
            if d0 < d1 {
                break;
            }
            let c = mul_mod(r0[d0], lead_inv, p);
            let shift = d0 - d1;
            sub_scaled_shifted(&mut r0, &r1, c, shift, p);
            sub_scaled_shifted(&mut s0, &s1, c, shift, p);
        }
        std::mem::swap(&mut r0, &mut r1);
        std::mem::swap(&mut s0, &mut s1);
        if r1.is_empty() {
            return None;
        }
    }
    // r1 is a nonzero constant c and s1·a ≡ c
    let c_inv = inv_mod(r1[0], p);
    let mut out: Vec<u64> = s1.iter().map(|&s| mul_mod(s, c_inv, p)).collect();
    out = rem(&out, f, p);
    Some(out)
}
