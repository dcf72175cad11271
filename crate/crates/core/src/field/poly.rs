// SPDX-License-Identifier: Apache-2.0

//! Dense polynomials over a prime field, constant term first.
//!
//! Only what the irreducibility test and default-polynomial search need.

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let top = r.len() - 1;
        let f = r[top] * lead_inv % p;
        let shift = top - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - f * c % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, m, p)
}

fn pow_poly_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// x^(p^k) mod m, by k successive p-th powers.
fn frobenius_iter(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut x = rem(&[0, 1], m, p);
    for _ in 0..k {
        x = pow_poly_mod(&x, p, m, p);
    }
    x
}

fn sub_x(mut v: Vec<u64>, p: u64) -> Vec<u64> {
    if v.len() < 2 {
        v.resize(2, 0);
    }
    v[1] = (v[1] + p - 1) % p;
    trim(&mut v);
    v
}

/// Rabin's test for a monic polynomial of degree n = m.len() - 1.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let n = (m.len() - 1) as u32;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    for r in prime_factors(n as u64) {
        let h = sub_x(frobenius_iter(n / r as u32, m, p), p);
        if gcd(m, &h, p).len() != 1 {
            return false;
        }
    }
    sub_x(frobenius_iter(n, m, p), p).is_empty()
}

/// Lexicographically smallest monic irreducible of degree `n`, comparing the
/// coefficient vector constant term first.
pub(crate) fn default_irreducible(p: u64, n: u32) -> Vec<u64> {
    let n = n as usize;
    let mut coeffs = vec![0u64; n + 1];
    coeffs[n] = 1;
    loop {
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
        // Odometer with the constant term as the most significant digit.
        let mut pos = n;
        loop {
            pos -= 1;
            coeffs[pos] += 1;
            if coeffs[pos] < p {
                break;
            }
            coeffs[pos] = 0;
            assert!(pos > 0, "an irreducible polynomial of every degree exists");
        }
    }
}
