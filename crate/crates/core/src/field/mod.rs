// SPDX-License-Identifier: Apache-2.0

//! Finite fields GF(p^n) in the power basis of a monic irreducible polynomial,
//! and their quadratic extensions (see [`ExtCtx`]).
//!
//! Elements are stored as their index `sum(c_i * p^i)` over the coefficient
//! vector `c` (constant term first). The index is canonical, so derived
//! equality and hashing are field equality. Enumeration walks indices in
//! increasing order, i.e. coefficient vectors compared from the highest
//! degree down.

mod ext;
mod poly;

pub use ext::{ExtCtx, ExtElem};

use std::sync::Arc;

use crate::error::{Error, Result};

/// Field orders must stay strictly below this bound.
pub const MAX_ORDER: u64 = 1 << 32;

/// Largest element count any full enumeration will produce.
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

const MAX_DEGREE: usize = 32;

/// Fields up to this order get discrete-log tables.
const TABLE_LIMIT: u64 = 1 << 16;

// exp has 2(q-1) entries so a sum of two logs needs no reduction.
#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// An element of a [`FieldCtx`]; meaningless without its context.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic context for GF(p^n). Equality compares p, n and the modulus.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    n: u32,
    q: u64,
    modulus: Vec<u64>,
    // Low n bits of the modulus when p = 2 (the leading term is implicit).
    binary_tail: u64,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds GF(p^n). Without an explicit polynomial the lexicographically
    /// smallest monic irreducible (constant term compared first) is used.
    pub fn new(p: u64, n: u32, irreducible: Option<&[u64]>) -> Result<Self> {
        if !poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let q = (0..n)
            .try_fold(1u64, |acc, _| acc.checked_mul(p))
            .filter(|&q| q < MAX_ORDER)
            .ok_or_else(|| Error::TooLarge(format!("field order {p}^{n} exceeds 2^32")))?;
        if n as usize > MAX_DEGREE {
            return Err(Error::TooLarge(format!("degree {n}")));
        }
        let modulus = match irreducible {
            Some(m) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::DegreeMismatch { expected: n, found: m.len() });
                }
                if !poly::is_irreducible(m, p) {
                    return Err(Error::ReduciblePolynomial);
                }
                m.to_vec()
            }
            None => poly::default_irreducible(p, n),
        };
        let binary_tail = if p == 2 {
            modulus[..n as usize]
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | (c << i))
        } else {
            0
        };
        let mut f = FieldCtx { p, n, q, modulus, binary_tail, tables: None };
        if q <= TABLE_LIMIT {
            f.tables = Some(Arc::new(f.build_tables()));
        }
        Ok(f)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Field order p^n.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Monic defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_binary(&self) -> bool {
        self.p == 2
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index < self.q {
            Ok(FieldElem(index))
        } else {
            Err(Error::InvalidElement(index))
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.n as usize {
            return Err(Error::DegreeMismatch { expected: self.n, found: coeffs.len() });
        }
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::InvalidElement(c));
            }
            idx = idx * self.p + c;
        }
        Ok(FieldElem(idx))
    }

    /// Coefficient vector of length n, constant term first.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u64> {
        let d = self.digits(a.0);
        d[..self.n as usize].to_vec()
    }

    /// Image of the integer `k` under Z -> GF(p) -> GF(p^n).
    pub fn from_int(&self, k: u64) -> FieldElem {
        FieldElem(k % self.p)
    }

    /// All elements in index order.
    pub fn elements(&self) -> Result<impl Iterator<Item = FieldElem>> {
        if self.q > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(format!("enumerating {} elements", self.q)));
        }
        Ok((0..self.q).map(FieldElem))
    }

    fn digits(&self, mut x: u64) -> [u64; MAX_DEGREE] {
        let mut d = [0u64; MAX_DEGREE];
        for slot in d.iter_mut().take(self.n as usize) {
            *slot = x % self.p;
            x /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u64]) -> u64 {
        d[..self.n as usize].iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        if self.n == 1 {
            return FieldElem((a.0 + b.0) % self.p);
        }
        let (x, y) = (self.digits(a.0), self.digits(b.0));
        let mut s = [0u64; MAX_DEGREE];
        for i in 0..self.n as usize {
            s[i] = (x[i] + y[i]) % self.p;
        }
        FieldElem(self.undigits(&s))
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 {
            return a;
        }
        if self.n == 1 {
            return FieldElem((self.p - a.0) % self.p);
        }
        let mut x = self.digits(a.0);
        for c in x.iter_mut().take(self.n as usize) {
            *c = (self.p - *c) % self.p;
        }
        FieldElem(self.undigits(&x))
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    // Powers of the first element of order q - 1.
    fn build_tables(&self) -> Tables {
        let m = self.q - 1;
        let mut exp = Vec::with_capacity(2 * m as usize);
        for g in (1..self.q).map(FieldElem) {
            exp.clear();
            let mut x = FieldElem::ONE;
            loop {
                exp.push(x.0 as u32);
                x = self.mul_plain(x, g);
                if x == FieldElem::ONE || exp.len() as u64 > m {
                    break;
                }
            }
            if exp.len() as u64 == m {
                break;
            }
        }
        let mut log = vec![0u32; self.q as usize];
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u32;
        }
        exp.extend_from_within(..);
        Tables { exp, log }
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.tables {
            Some(_) if a.0 == 0 || b.0 == 0 => FieldElem::ZERO,
            Some(t) => FieldElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize] as u64),
            None => self.mul_plain(a, b),
        }
    }

    fn mul_plain(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(self.mul_binary(a.0, b.0));
        }
        if self.n == 1 {
            return FieldElem(a.0 * b.0 % self.p);
        }
        let n = self.n as usize;
        let p = self.p;
        let (x, y) = (self.digits(a.0), self.digits(b.0));
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let f = prod[k];
            if f == 0 {
                continue;
            }
            for i in 0..n {
                prod[k - n + i] = (prod[k - n + i] + p - f * self.modulus[i] % p) % p;
            }
            prod[k] = 0;
        }
        FieldElem(self.undigits(&prod))
    }

    fn mul_binary(&self, a: u64, b: u64) -> u64 {
        let mut r = 0u64;
        let mut x = a;
        let mut i = 0;
        while x != 0 {
            if x & 1 == 1 {
                r ^= b << i;
            }
            x >>= 1;
            i += 1;
        }
        let n = self.n;
        let mut bit = 2 * n as i64 - 2;
        while bit >= n as i64 {
            if (r >> bit) & 1 == 1 {
                r ^= 1 << bit;
                r ^= self.binary_tail << (bit - n as i64);
            }
            bit -= 1;
        }
        r
    }

    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut result = FieldElem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let l = t.log[a.0 as usize] as u64;
            return Ok(FieldElem(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize] as u64));
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Trace down to the prime field, as a residue mod p.
    pub fn absolute_trace(&self, a: FieldElem) -> u64 {
        let mut acc = FieldElem::ZERO;
        let mut x = a;
        for _ in 0..self.n {
            acc = self.add(acc, x);
            x = self.pow(x, self.p);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    /// Whether `a` is a square; 0 counts as a square.
    pub fn is_square(&self, a: FieldElem) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        self.pow(a, (self.q - 1) / 2) == FieldElem::ONE
    }

    /// A square root of `a`, if one exists.
    pub fn sqrt(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return Some(a);
        }
        if self.p == 2 {
            return Some(self.pow(a, self.q / 2));
        }
        if !self.is_square(a) {
            return None;
        }
        // Tonelli-Shanks over GF(q).
        let mut s = 0u32;
        let mut odd = self.q - 1;
        while odd % 2 == 0 {
            odd /= 2;
            s += 1;
        }
        let minus_one = self.neg(FieldElem::ONE);
        let z = (2..self.q)
            .map(FieldElem)
            .find(|&z| self.pow(z, (self.q - 1) / 2) == minus_one)
            .expect("odd-order field has a non-residue");
        let mut m = s;
        let mut c = self.pow(z, odd);
        let mut t = self.pow(a, odd);
        let mut r = self.pow(a, odd.div_ceil(2));
        while t != FieldElem::ONE {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != FieldElem::ONE {
                t2 = self.square(t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.square(b);
            }
            m = i;
            c = self.square(b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Solves x^2 + x = c over GF(2^n) by Gaussian elimination on the
    /// GF(2)-linear map x -> x^2 + x.
    fn solve_artin_schreier(&self, c: FieldElem) -> Option<FieldElem> {
        let n = self.n as usize;
        // rows[r] holds coefficient bits of equation r in bits 0..n, rhs in bit n.
        let mut rows = vec![0u64; n];
        for k in 0..n {
            let basis = FieldElem(1 << k);
            let image = self.add(self.square(basis), basis).0;
            for (r, row) in rows.iter_mut().enumerate() {
                *row |= ((image >> r) & 1) << k;
            }
        }
        for (r, row) in rows.iter_mut().enumerate() {
            *row |= ((c.0 >> r) & 1) << n;
        }
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..n {
            let Some(sel) = (rank..n).find(|&r| (rows[r] >> col) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, sel);
            for r in 0..n {
                if r != rank && (rows[r] >> col) & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if rows[rank..].iter().any(|&row| (row >> n) & 1 == 1) {
            return None;
        }
        let mut x = 0u64;
        for (r, &col) in pivots.iter().enumerate() {
            x |= ((rows[r] >> n) & 1) << col;
        }
        Some(FieldElem(x))
    }

    /// Distinct roots of a*x^2 + b*x + c in this field, ascending by index.
    pub fn solve_quadratic(&self, a: FieldElem, b: FieldElem, c: FieldElem) -> Result<Vec<FieldElem>> {
        let inv_a = self.inv(a)?;
        let b = self.mul(b, inv_a);
        let c = self.mul(c, inv_a);
        let mut roots = Vec::with_capacity(2);
        if self.p == 2 {
            if b.is_zero() {
                roots.push(self.sqrt(c).expect("every element is a square in characteristic 2"));
            } else {
                let scaled = self.div(c, self.square(b))?;
                if let Some(s) = self.solve_artin_schreier(scaled) {
                    roots.push(self.mul(b, s));
                    roots.push(self.mul(b, self.add(s, FieldElem::ONE)));
                }
            }
        } else {
            let four = self.from_int(4);
            let disc = self.sub(self.square(b), self.mul(four, c));
            if let Some(r) = self.sqrt(disc) {
                let half = self.inv(self.from_int(2))?;
                let nb = self.neg(b);
                roots.push(self.mul(self.add(nb, r), half));
                roots.push(self.mul(self.sub(nb, r), half));
            }
        }
        roots.sort();
        roots.dedup();
        Ok(roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, n: u32) -> FieldCtx {
        FieldCtx::new(p, n, None).unwrap()
    }

    #[test]
    fn log_tables_agree_with_plain_multiplication() {
        for (p, n) in [(2, 1), (2, 4), (2, 8), (3, 3), (5, 2), (13, 1)] {
            let f = gf(p, n);
            assert!(f.tables.is_some());
            for a in f.elements().unwrap() {
                for b in f.elements().unwrap() {
                    assert_eq!(f.mul(a, b), f.mul_plain(a, b));
                }
                if !a.is_zero() {
                    assert_eq!(f.mul_plain(a, f.inv(a).unwrap()), FieldElem::ONE);
                }
            }
        }
        assert!(gf(2, 17).tables.is_none());
    }

    #[test]
    fn construction_examples() {
        let f2 = gf(2, 1);
        assert_eq!(f2.q(), 2);
        let f4 = FieldCtx::new(2, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f4.q(), 4);
        assert_eq!(FieldCtx::new(2, 2, Some(&[1, 0, 1])), Err(Error::ReduciblePolynomial));
        assert_eq!(FieldCtx::new(4, 1, None), Err(Error::NotPrime(4)));
        assert!(matches!(FieldCtx::new(2, 2, Some(&[1, 1])), Err(Error::DegreeMismatch { .. })));
        assert!(matches!(FieldCtx::new(2, 32, None), Err(Error::TooLarge(_))));
    }

    #[test]
    fn gf4_products() {
        let f4 = FieldCtx::new(2, 2, Some(&[1, 1, 1])).unwrap();
        let w = f4.from_coeffs(&[0, 1]).unwrap();
        let w1 = f4.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f4.mul(w, w), w1);
        assert_eq!(f4.inv(w).unwrap(), w1);
        // Exhaustive oracle for the inverse.
        let found: Vec<_> = f4.elements().unwrap().filter(|&x| f4.mul(w, x) == FieldElem::ONE).collect();
        assert_eq!(found, vec![w1]);
        assert_eq!(f4.inv(FieldElem::ZERO), Err(Error::DivisionByZero));
    }

    fn check_axioms(f: &FieldCtx) {
        let els: Vec<_> = f.elements().unwrap().collect();
        assert_eq!(els.len() as u64, f.q());
        for &a in &els {
            assert_eq!(f.add(a, FieldElem::ZERO), a);
            assert_eq!(f.mul(a, FieldElem::ONE), a);
            assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (13, 1), (2, 4)] {
            check_axioms(&gf(p, n));
        }
    }

    #[test]
    fn field_axioms_random_large() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(7);
        for (p, n) in [(2u64, 16u32), (3, 7), (65521, 1), (5, 4)] {
            let f = gf(p, n);
            for _ in 0..10_000 {
                let [a, b, c] = [0; 3].map(|_| FieldElem(rng.gen_range(0..f.q())));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_order_q_minus_1() {
        for (p, n) in [(2, 3), (3, 2), (2, 4), (5, 2)] {
            let f = gf(p, n);
            for a in f.elements().unwrap().filter(|a| !a.is_zero()) {
                assert_eq!(f.pow(a, f.q() - 1), FieldElem::ONE);
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let f2 = gf(2, 1);
        assert_eq!(f2.elements().unwrap().collect::<Vec<_>>(), vec![FieldElem(0), FieldElem(1)]);
        let f9 = gf(3, 2);
        let els: Vec<_> = f9.elements().unwrap().collect();
        assert_eq!(els.len(), 9);
        let set: std::collections::HashSet<_> = els.iter().copied().collect();
        for &a in &els {
            for &b in &els {
                assert!(set.contains(&f9.add(a, b)));
                assert!(set.contains(&f9.mul(a, b)));
            }
        }
        assert!(matches!(gf(2, 25).elements(), Err(Error::TooLarge(_))));
    }

    #[test]
    fn sqrt_and_quadratics_match_brute_force() {
        for (p, n) in [(2, 1), (2, 2), (2, 3), (3, 1), (5, 1), (7, 1), (3, 2), (2, 4), (13, 1), (5, 2)] {
            let f = gf(p, n);
            let els: Vec<_> = f.elements().unwrap().collect();
            for &a in &els {
                let brute: Vec<_> = els.iter().copied().filter(|&x| f.square(x) == a).collect();
                match f.sqrt(a) {
                    Some(r) => assert!(brute.contains(&r)),
                    None => assert!(brute.is_empty()),
                }
                assert_eq!(f.is_square(a), !brute.is_empty());
            }
            for &a in els.iter().filter(|a| !a.is_zero()) {
                for &b in &els {
                    for &c in &els {
                        let brute: Vec<_> = els
                            .iter()
                            .copied()
                            .filter(|&x| f.add(f.add(f.mul(a, f.square(x)), f.mul(b, x)), c).is_zero())
                            .collect();
                        assert_eq!(f.solve_quadratic(a, b, c).unwrap(), brute, "p={p} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn artin_schreier_large() {
        let f = gf(2, 16);
        for k in [1u64, 2, 3, 1000, 65535, 31337] {
            let x = FieldElem(k);
            let c = f.add(f.square(x), x);
            let s = f.solve_artin_schreier(c).unwrap();
            assert_eq!(f.add(f.square(s), s), c);
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let f = gf(3, 3);
        for a in f.elements().unwrap() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
        }
    }
}
