// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;

use super::{FieldCtx, FieldElem, ENUMERATION_LIMIT};
use crate::error::{Error, Result};

/// `re + im * w` in G = F[w] / (w^2 + b1 w + b0).
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExtElem {
    pub re: FieldElem,
    pub im: FieldElem,
}

impl ExtElem {
    pub const ZERO: ExtElem = ExtElem { re: FieldElem::ZERO, im: FieldElem::ZERO };
    pub const ONE: ExtElem = ExtElem { re: FieldElem::ONE, im: FieldElem::ZERO };

    pub fn new(re: FieldElem, im: FieldElem) -> Self {
        ExtElem { re, im }
    }

    pub fn is_zero(self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Whether the element lies in the embedded base field.
    pub fn is_base(self) -> bool {
        self.im.is_zero()
    }
}

// Index order: im is the more significant coordinate.
impl Ord for ExtElem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.im, self.re).cmp(&(other.im, other.re))
    }
}

impl PartialOrd for ExtElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arithmetic context for the quadratic extension G = GF(q^2) of F = GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtCtx {
    base: FieldCtx,
    b0: FieldElem,
    b1: FieldElem,
}

impl ExtCtx {
    /// `quadratic = (b0, b1)` selects `w^2 + b1 w + b0`. Without one, the
    /// smallest irreducible quadratic is chosen, comparing `b0` first and
    /// elements by index.
    pub fn new(base: FieldCtx, quadratic: Option<(FieldElem, FieldElem)>) -> Result<Self> {
        let (b0, b1) = match quadratic {
            Some((b0, b1)) => {
                base.elem(b0.index())?;
                base.elem(b1.index())?;
                if !quadratic_is_irreducible(&base, b0, b1) {
                    return Err(Error::ReduciblePolynomial);
                }
                (b0, b1)
            }
            None => default_quadratic(&base),
        };
        Ok(ExtCtx { base, b0, b1 })
    }

    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    /// |F|.
    pub fn q(&self) -> u64 {
        self.base.q()
    }

    /// `(b0, b1)` of the defining quadratic `w^2 + b1 w + b0`.
    pub fn quadratic(&self) -> (FieldElem, FieldElem) {
        (self.b0, self.b1)
    }

    pub fn embed(&self, a: FieldElem) -> ExtElem {
        ExtElem { re: a, im: FieldElem::ZERO }
    }

    pub fn omega(&self) -> ExtElem {
        ExtElem { re: FieldElem::ZERO, im: FieldElem::ONE }
    }

    /// Position of `x` in the enumeration order, `re + im * q`.
    pub fn index(&self, x: ExtElem) -> u64 {
        x.re.index() + x.im.index() * self.q()
    }

    pub fn from_index(&self, idx: u64) -> Result<ExtElem> {
        let q = self.q();
        if idx / q >= q {
            return Err(Error::InvalidElement(idx));
        }
        Ok(ExtElem { re: FieldElem(idx % q), im: FieldElem(idx / q) })
    }

    /// All q^2 elements in index order.
    pub fn elements(&self) -> Result<impl Iterator<Item = ExtElem> + '_> {
        let q = self.q();
        if q.saturating_mul(q) > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(format!("enumerating {q}^2 extension elements")));
        }
        Ok((0..q * q).map(move |i| ExtElem { re: FieldElem(i % q), im: FieldElem(i / q) }))
    }

    pub fn add(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let f = &self.base;
        ExtElem { re: f.add(a.re, b.re), im: f.add(a.im, b.im) }
    }

    pub fn sub(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let f = &self.base;
        ExtElem { re: f.sub(a.re, b.re), im: f.sub(a.im, b.im) }
    }

    pub fn neg(&self, a: ExtElem) -> ExtElem {
        let f = &self.base;
        ExtElem { re: f.neg(a.re), im: f.neg(a.im) }
    }

    /// Multiplies by a base-field scalar.
    pub fn scale(&self, k: FieldElem, a: ExtElem) -> ExtElem {
        let f = &self.base;
        ExtElem { re: f.mul(k, a.re), im: f.mul(k, a.im) }
    }

    pub fn mul(&self, a: ExtElem, b: ExtElem) -> ExtElem {
        let f = &self.base;
        // (a0 + a1 w)(c0 + c1 w) with w^2 = -b1 w - b0.
        let hi = f.mul(a.im, b.im);
        let re = f.sub(f.mul(a.re, b.re), f.mul(hi, self.b0));
        let im = f.sub(f.add(f.mul(a.re, b.im), f.mul(a.im, b.re)), f.mul(hi, self.b1));
        ExtElem { re, im }
    }

    pub fn square(&self, a: ExtElem) -> ExtElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: ExtElem, mut e: u64) -> ExtElem {
        let mut result = ExtElem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        result
    }

    /// The involutory automorphism fixing F. The roots of the quadratic sum
    /// to `-b1`, so `conj(w) = -b1 - w`.
    pub fn conjugate(&self, x: ExtElem) -> ExtElem {
        let f = &self.base;
        ExtElem { re: f.sub(x.re, f.mul(x.im, self.b1)), im: f.neg(x.im) }
    }

    /// `x * conj(x) = re^2 - b1 re im + b0 im^2`.
    pub fn norm(&self, x: ExtElem) -> FieldElem {
        let f = &self.base;
        let cross = f.mul(self.b1, f.mul(x.re, x.im));
        f.add(f.sub(f.square(x.re), cross), f.mul(self.b0, f.square(x.im)))
    }

    /// `x + conj(x) = 2 re - b1 im`.
    pub fn trace(&self, x: ExtElem) -> FieldElem {
        let f = &self.base;
        f.sub(f.add(x.re, x.re), f.mul(self.b1, x.im))
    }

    pub fn inv(&self, a: ExtElem) -> Result<ExtElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // conj(a) / N(a)
        let n_inv = self.base.inv(self.norm(a))?;
        Ok(self.scale(n_inv, self.conjugate(a)))
    }

    pub fn div(&self, a: ExtElem, b: ExtElem) -> Result<ExtElem> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

fn quadratic_is_irreducible(f: &FieldCtx, b0: FieldElem, b1: FieldElem) -> bool {
    if f.is_binary() {
        // x^2 + b1 x + b0 with b1 != 0 is irreducible iff Tr(b0 / b1^2) = 1.
        if b1.is_zero() {
            return false;
        }
        let c = f.div(b0, f.square(b1)).expect("b1 is nonzero");
        f.absolute_trace(c) == 1
    } else {
        let disc = f.sub(f.square(b1), f.mul(f.from_int(4), b0));
        !f.is_square(disc)
    }
}

fn default_quadratic(f: &FieldCtx) -> (FieldElem, FieldElem) {
    for b0 in (0..f.q()).map(FieldElem) {
        for b1 in (0..f.q()).map(FieldElem) {
            if quadratic_is_irreducible(f, b0, b1) {
                return (b0, b1);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}
