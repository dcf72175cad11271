// SPDX-License-Identifier: Apache-2.0

//! The Möbius (inversive) plane over a quadratic extension G/F of finite fields.
//!
//! Points are the elements of G plus a point at infinity. A circle is the
//! zero set of a Hermitian form
//!
//! ```text
//! alpha * z * conj(z) + beta * conj(z) + conj(beta) * z + gamma = 0
//! ```
//!
//! with `alpha, gamma` in F, `beta` in G and `N(beta) - alpha * gamma != 0`,
//! together with infinity exactly when `alpha = 0`. The circles through
//! infinity are the lines of the affine plane G. Every operation here is a
//! pure function of the plane and its arguments.

mod audit;

pub use audit::{plane_audit, PlaneAudit};

use crate::error::{Error, Result};
use crate::field::{ExtCtx, ExtElem, FieldCtx, FieldElem, ENUMERATION_LIMIT};

/// A point of the Möbius plane.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoebiusPoint {
    Finite(ExtElem),
    Infinity,
}

impl MoebiusPoint {
    pub fn is_infinite(self) -> bool {
        matches!(self, MoebiusPoint::Infinity)
    }

    pub fn finite(self) -> Option<ExtElem> {
        match self {
            MoebiusPoint::Finite(z) => Some(z),
            MoebiusPoint::Infinity => None,
        }
    }
}

impl From<ExtElem> for MoebiusPoint {
    fn from(z: ExtElem) -> Self {
        MoebiusPoint::Finite(z)
    }
}

/// A circle in canonical form: the first nonzero of
/// `(alpha, beta.re, beta.im, gamma)` is one.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circle {
    alpha: FieldElem,
    beta: ExtElem,
    gamma: FieldElem,
}

impl Circle {
    pub fn alpha(&self) -> FieldElem {
        self.alpha
    }

    pub fn beta(&self) -> ExtElem {
        self.beta
    }

    pub fn gamma(&self) -> FieldElem {
        self.gamma
    }

    /// Whether the circle passes through infinity.
    pub fn is_line(&self) -> bool {
        self.alpha.is_zero()
    }
}

// Coefficients of a possibly degenerate Hermitian form.
#[derive(Copy, Clone, Debug)]
struct Form {
    alpha: FieldElem,
    beta: ExtElem,
    gamma: FieldElem,
}

impl From<Circle> for Form {
    fn from(c: Circle) -> Self {
        Form { alpha: c.alpha, beta: c.beta, gamma: c.gamma }
    }
}

/// The Möbius plane over `ext`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusPlane {
    ext: ExtCtx,
}

impl MoebiusPlane {
    pub fn new(ext: ExtCtx) -> Self {
        MoebiusPlane { ext }
    }

    /// Plane over GF(p^n) with default polynomials.
    pub fn with_defaults(p: u64, n: u32) -> Result<Self> {
        Ok(Self::new(ExtCtx::new(FieldCtx::new(p, n, None)?, None)?))
    }

    pub fn ext(&self) -> &ExtCtx {
        &self.ext
    }

    pub fn base(&self) -> &FieldCtx {
        self.ext.base()
    }

    pub fn q(&self) -> u64 {
        self.ext.q()
    }

    /// q^2 + 1.
    pub fn point_count(&self) -> u64 {
        self.q() * self.q() + 1
    }

    /// Dense index of a point: finite points by element index, infinity last.
    pub fn point_index(&self, p: MoebiusPoint) -> u64 {
        match p {
            MoebiusPoint::Finite(z) => self.ext.index(z),
            MoebiusPoint::Infinity => self.q() * self.q(),
        }
    }

    /// All points, finite ones in element order followed by infinity.
    pub fn points(&self) -> Result<Vec<MoebiusPoint>> {
        let mut out: Vec<_> = self.ext.elements()?.map(MoebiusPoint::Finite).collect();
        out.push(MoebiusPoint::Infinity);
        Ok(out)
    }

    /// Builds a circle from raw coefficients, normalizing the scale.
    pub fn circle(&self, alpha: FieldElem, beta: ExtElem, gamma: FieldElem) -> Result<Circle> {
        self.canonical(Form { alpha, beta, gamma })
    }

    fn canonical(&self, form: Form) -> Result<Circle> {
        let f = self.base();
        let disc = f.sub(self.ext.norm(form.beta), f.mul(form.alpha, form.gamma));
        if disc.is_zero() {
            return Err(Error::DegenerateCircle);
        }
        let lead = [form.alpha, form.beta.re, form.beta.im, form.gamma]
            .into_iter()
            .find(|c| !c.is_zero())
            .expect("nonzero discriminant implies a nonzero coefficient");
        let s = f.inv(lead)?;
        Ok(Circle {
            alpha: f.mul(s, form.alpha),
            beta: self.ext.scale(s, form.beta),
            gamma: f.mul(s, form.gamma),
        })
    }

    // Homogeneous evaluation; zero iff the point lies on the form's zero set.
    fn eval(&self, form: &Form, p: MoebiusPoint) -> FieldElem {
        let f = self.base();
        match p {
            MoebiusPoint::Infinity => form.alpha,
            MoebiusPoint::Finite(z) => {
                let g = &self.ext;
                let quad = f.mul(form.alpha, g.norm(z));
                let lin = g.trace(g.mul(form.beta, g.conjugate(z)));
                f.add(f.add(quad, lin), form.gamma)
            }
        }
    }

    pub fn contains(&self, c: &Circle, p: MoebiusPoint) -> bool {
        self.eval(&Form::from(*c), p).is_zero()
    }

    // (x, y) coefficients of z -> Tr(beta * conj(z)) for z = x + y*w.
    fn linear_coeffs(&self, beta: ExtElem) -> (FieldElem, FieldElem) {
        let g = &self.ext;
        let conj_w = g.conjugate(g.omega());
        (g.trace(beta), g.trace(g.mul(beta, conj_w)))
    }

    /// The unique circle through three pairwise distinct points.
    pub fn circle_through(&self, a: MoebiusPoint, b: MoebiusPoint, c: MoebiusPoint) -> Result<Circle> {
        if a == b || b == c || a == c {
            return Err(Error::DegeneratePoints);
        }
        let f = self.base();
        let g = &self.ext;
        // Unknowns (alpha, beta.re, beta.im, gamma).
        let row = |p: MoebiusPoint| -> [FieldElem; 4] {
            match p {
                MoebiusPoint::Infinity => [FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO, FieldElem::ZERO],
                MoebiusPoint::Finite(z) => {
                    let cz = g.conjugate(z);
                    [g.norm(z), g.trace(cz), g.trace(g.mul(g.omega(), cz)), FieldElem::ONE]
                }
            }
        };
        let mut m = [row(a), row(b), row(c)];
        let mut pivots = Vec::with_capacity(3);
        let mut r = 0usize;
        for col in 0..4 {
            let Some(sel) = (r..3).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(r, sel);
            let inv = f.inv(m[r][col])?;
            for k in 0..4 {
                m[r][k] = f.mul(m[r][k], inv);
            }
            for i in 0..3 {
                if i != r && !m[i][col].is_zero() {
                    let factor = m[i][col];
                    for k in 0..4 {
                        m[i][k] = f.sub(m[i][k], f.mul(factor, m[r][k]));
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == 3 {
                break;
            }
        }
        if pivots.len() != 3 {
            return Err(Error::DegeneratePoints);
        }
        let free = (0..4).find(|c| !pivots.contains(c)).expect("one free column");
        let mut sol = [FieldElem::ZERO; 4];
        sol[free] = FieldElem::ONE;
        for (i, &col) in pivots.iter().enumerate() {
            sol[col] = f.neg(m[i][free]);
        }
        self.canonical(Form { alpha: sol[0], beta: ExtElem::new(sol[1], sol[2]), gamma: sol[3] })
    }

    /// The line (circle through infinity) through two distinct finite points.
    pub fn line_through(&self, p: MoebiusPoint, k: MoebiusPoint) -> Result<Circle> {
        if p.is_infinite() || k.is_infinite() || p == k {
            return Err(Error::DegeneratePoints);
        }
        self.circle_through(p, k, MoebiusPoint::Infinity)
    }

    /// Cross ratio `((a-c)/(a-z)) / ((b-c)/(b-z))`, evaluated in homogeneous
    /// coordinates so that factors involving infinity cancel in pairs and a
    /// vanishing denominator yields infinity.
    pub fn double_ratio(
        &self,
        a: MoebiusPoint,
        b: MoebiusPoint,
        c: MoebiusPoint,
        z: MoebiusPoint,
    ) -> Result<MoebiusPoint> {
        if a == b || b == c || a == c {
            return Err(Error::DegeneratePoints);
        }
        let g = &self.ext;
        let bracket = |x: MoebiusPoint, y: MoebiusPoint| -> ExtElem {
            match (x, y) {
                (MoebiusPoint::Finite(x), MoebiusPoint::Finite(y)) => g.sub(x, y),
                (MoebiusPoint::Infinity, MoebiusPoint::Finite(_)) => ExtElem::ONE,
                (MoebiusPoint::Finite(_), MoebiusPoint::Infinity) => g.neg(ExtElem::ONE),
                (MoebiusPoint::Infinity, MoebiusPoint::Infinity) => ExtElem::ZERO,
            }
        };
        let num = g.mul(bracket(a, c), bracket(b, z));
        let den = g.mul(bracket(a, z), bracket(b, c));
        if den.is_zero() {
            return Ok(MoebiusPoint::Infinity);
        }
        Ok(MoebiusPoint::Finite(g.div(num, den)?))
    }

    /// Whether a value of the closed extension lies in F ∪ {∞}.
    pub fn in_closed_base(&self, v: MoebiusPoint) -> bool {
        match v {
            MoebiusPoint::Infinity => true,
            MoebiusPoint::Finite(z) => z.is_base(),
        }
    }

    /// Applies `z -> (a z + b) / (c z + d)` on the closed extension.
    pub fn apply_mobius(&self, coeffs: [ExtElem; 4], z: MoebiusPoint) -> Result<MoebiusPoint> {
        let g = &self.ext;
        let [a, b, c, d] = coeffs;
        if g.sub(g.mul(a, d), g.mul(b, c)).is_zero() {
            return Err(Error::SingularMap);
        }
        let (num, den) = match z {
            MoebiusPoint::Infinity => (a, c),
            MoebiusPoint::Finite(z) => (g.add(g.mul(a, z), b), g.add(g.mul(c, z), d)),
        };
        if den.is_zero() {
            return Ok(MoebiusPoint::Infinity);
        }
        Ok(MoebiusPoint::Finite(g.div(num, den)?))
    }

    /// Image of F ∪ {∞} under `z -> (a z + b) / (c z + d)`.
    pub fn mobius_image(&self, a: ExtElem, b: ExtElem, c: ExtElem, d: ExtElem) -> Result<Circle> {
        let coeffs = [a, b, c, d];
        let zero = MoebiusPoint::Finite(ExtElem::ZERO);
        let one = MoebiusPoint::Finite(ExtElem::ONE);
        let images = [zero, one, MoebiusPoint::Infinity].map(|z| self.apply_mobius(coeffs, z));
        let [p0, p1, p2] = images;
        self.circle_through(p0?, p1?, p2?)
    }

    /// Exact intersection of two distinct circles, ascending point order.
    pub fn intersect(&self, c1: &Circle, c2: &Circle) -> Result<Vec<MoebiusPoint>> {
        if c1 == c2 {
            return Err(Error::IdenticalCircles);
        }
        let f = self.base();
        let g = &self.ext;
        let mut out = Vec::with_capacity(2);
        let (c1, c2) = if c1.alpha.is_zero() { (c2, c1) } else { (c1, c2) };

        if c1.alpha.is_zero() {
            // Both are lines: infinity plus the solution of a 2x2 system.
            out.push(MoebiusPoint::Infinity);
            let (a1, b1) = self.linear_coeffs(c1.beta);
            let (a2, b2) = self.linear_coeffs(c2.beta);
            let det = f.sub(f.mul(a1, b2), f.mul(a2, b1));
            if !det.is_zero() {
                let x = f.div(f.sub(f.mul(b1, c2.gamma), f.mul(b2, c1.gamma)), det)?;
                let y = f.div(f.sub(f.mul(a2, c1.gamma), f.mul(a1, c2.gamma)), det)?;
                out.push(MoebiusPoint::Finite(ExtElem::new(x, y)));
            }
            out.sort();
            return Ok(out);
        }

        // alpha1 != 0: alpha2*E1 - alpha1*E2 is linear in z.
        let delta = g.sub(g.scale(c2.alpha, c1.beta), g.scale(c1.alpha, c2.beta));
        let eps = f.sub(f.mul(c2.alpha, c1.gamma), f.mul(c1.alpha, c2.gamma));
        if delta.is_zero() {
            // Concentric: no common point.
            return Ok(out);
        }
        let (ax, ay) = self.linear_coeffs(delta);
        // Parametrize the radical line as z0 + t*dir, t in F.
        let (z0, dir) = if !ay.is_zero() {
            let y0 = f.neg(f.div(eps, ay)?);
            let slope = f.neg(f.div(ax, ay)?);
            (ExtElem::new(FieldElem::ZERO, y0), ExtElem::new(FieldElem::ONE, slope))
        } else {
            let x0 = f.neg(f.div(eps, ax)?);
            (ExtElem::new(x0, FieldElem::ZERO), g.omega())
        };
        let conj_dir = g.conjugate(dir);
        let qa = f.mul(c1.alpha, g.norm(dir));
        let qb = f.add(f.mul(c1.alpha, g.trace(g.mul(z0, conj_dir))), g.trace(g.mul(c1.beta, conj_dir)));
        let qc = self.eval(&Form::from(*c1), MoebiusPoint::Finite(z0));
        for t in f.solve_quadratic(qa, qb, qc)? {
            out.push(MoebiusPoint::Finite(g.add(z0, g.scale(t, dir))));
        }
        out.sort();
        Ok(out)
    }

    // The degenerate form whose only zero is `p`.
    fn point_form(&self, p: MoebiusPoint) -> Form {
        match p {
            MoebiusPoint::Infinity => Form { alpha: FieldElem::ZERO, beta: ExtElem::ZERO, gamma: FieldElem::ONE },
            MoebiusPoint::Finite(a) => {
                Form { alpha: FieldElem::ONE, beta: self.ext.neg(a), gamma: self.ext.norm(a) }
            }
        }
    }

    /// The unique circle through `a` and `b` meeting `circle` only in `a`.
    ///
    /// Circles tangent to `circle` at `a` form the pencil spanned by `circle`
    /// and the point form of `a`; the member through `b` is selected by one
    /// linear condition.
    pub fn tangent_circle(&self, circle: &Circle, a: MoebiusPoint, b: MoebiusPoint) -> Result<Circle> {
        if !self.contains(circle, a) {
            return Err(Error::PointNotOnCircle);
        }
        if self.contains(circle, b) {
            return Err(Error::PointOnCircle);
        }
        let f = self.base();
        let base = Form::from(*circle);
        let pf = self.point_form(a);
        let lambda = f.neg(f.div(self.eval(&base, b), self.eval(&pf, b))?);
        self.canonical(Form {
            alpha: f.add(base.alpha, f.mul(lambda, pf.alpha)),
            beta: self.ext.add(base.beta, self.ext.scale(lambda, pf.beta)),
            gamma: f.add(base.gamma, f.mul(lambda, pf.gamma)),
        })
    }

    /// The tangent line to a circle not through infinity at one of its points.
    pub fn tangent_line_at(&self, circle: &Circle, p: MoebiusPoint) -> Result<Circle> {
        if !self.contains(circle, p) {
            return Err(Error::PointNotOnCircle);
        }
        if circle.is_line() {
            return Err(Error::CircleThroughInfinity);
        }
        self.tangent_circle(circle, p, MoebiusPoint::Infinity)
    }

    /// The q + 1 points of a circle in ascending order.
    pub fn points_of(&self, c: &Circle) -> Result<Vec<MoebiusPoint>> {
        let f = self.base();
        let g = &self.ext;
        let mut out = Vec::with_capacity(self.q() as usize + 1);
        if c.is_line() {
            if self.q() > ENUMERATION_LIMIT {
                return Err(Error::TooLarge(format!("listing {} points", self.q())));
            }
            let (ax, ay) = self.linear_coeffs(c.beta);
            for t in f.elements()? {
                let z = if !ay.is_zero() {
                    let y = f.neg(f.div(f.add(f.mul(ax, t), c.gamma), ay)?);
                    ExtElem::new(t, y)
                } else {
                    let x = f.neg(f.div(c.gamma, ax)?);
                    ExtElem::new(x, t)
                };
                out.push(MoebiusPoint::Finite(z));
            }
            out.push(MoebiusPoint::Infinity);
        } else {
            let form = Form::from(*c);
            out.extend(
                g.elements()?
                    .map(MoebiusPoint::Finite)
                    .filter(|&p| self.eval(&form, p).is_zero()),
            );
        }
        out.sort();
        Ok(out)
    }

    /// Every circle of the plane: q^3 + q of them.
    pub fn circles(&self) -> Result<Vec<Circle>> {
        let q = self.q();
        let total = q.saturating_mul(q).saturating_mul(q).saturating_add(q);
        if total > ENUMERATION_LIMIT {
            return Err(Error::TooLarge(format!("enumerating {total} circles")));
        }
        let f = self.base();
        let g = &self.ext;
        let mut out = Vec::with_capacity(total as usize);
        // Lines: first nonzero of (beta.re, beta.im) is one.
        for gamma in f.elements()? {
            for im in f.elements()? {
                out.push(Circle { alpha: FieldElem::ZERO, beta: ExtElem::new(FieldElem::ONE, im), gamma });
            }
            out.push(Circle { alpha: FieldElem::ZERO, beta: ExtElem::new(FieldElem::ZERO, FieldElem::ONE), gamma });
        }
        for beta in g.elements()? {
            let nb = g.norm(beta);
            for gamma in f.elements()?.filter(|&gm| gm != nb) {
                out.push(Circle { alpha: FieldElem::ONE, beta, gamma });
            }
        }
        Ok(out)
    }

    /// Four points on no common circle: 0, 1, w and infinity.
    pub fn non_concyclic_witness(&self) -> [MoebiusPoint; 4] {
        [
            MoebiusPoint::Finite(ExtElem::ZERO),
            MoebiusPoint::Finite(ExtElem::ONE),
            MoebiusPoint::Finite(self.ext.omega()),
            MoebiusPoint::Infinity,
        ]
    }
}

#[cfg(test)]
mod tests;
