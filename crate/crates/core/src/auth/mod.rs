// SPDX-License-Identifier: Apache-2.0

//! Authentication codes in PG(2,q): messages are the points of a fixed line
//! L0, keys the q^2 points off it, and the tag for `(m, k)` is the line
//! through both.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

mod completeness;
pub use completeness::{auth_completeness_matrix, check_auth_witness, AuthMatrix, AuthWitness};
pub(crate) use completeness::grid;

fn normalize(f: &FieldCtx, v: [FieldElem; 3]) -> Option<[FieldElem; 3]> {
    let lead = *v.iter().find(|c| !c.is_zero())?;
    let inv = f.inv(lead).ok()?;
    Some(v.map(|c| f.mul(c, inv)))
}

fn cross(f: &FieldCtx, a: [FieldElem; 3], b: [FieldElem; 3]) -> [FieldElem; 3] {
    let m = |x, y| f.mul(x, y);
    [
        f.sub(m(a[1], b[2]), m(a[2], b[1])),
        f.sub(m(a[2], b[0]), m(a[0], b[2])),
        f.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

fn dot(f: &FieldCtx, a: [FieldElem; 3], b: [FieldElem; 3]) -> FieldElem {
    (0..3).fold(FieldElem::ZERO, |acc, i| f.add(acc, f.mul(a[i], b[i])))
}

/// Homogeneous point, first nonzero coordinate 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint([FieldElem; 3]);

/// Dual coordinates `[a, b, c]` of `a x1 + b x2 + c x3 = 0`, normalized the
/// same way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine([FieldElem; 3]);

impl ProjPoint {
    pub fn new(f: &FieldCtx, coords: [FieldElem; 3]) -> Result<Self> {
        normalize(f, coords).map(ProjPoint).ok_or(Error::DegeneratePoints)
    }

    /// The affine point `(x1, x2, 1)`.
    pub fn affine(x1: FieldElem, x2: FieldElem) -> Self {
        ProjPoint([x1, x2, FieldElem::ONE])
    }

    pub fn coords(&self) -> [FieldElem; 3] {
        self.0
    }
}

impl ProjLine {
    pub fn new(f: &FieldCtx, coords: [FieldElem; 3]) -> Result<Self> {
        normalize(f, coords).map(ProjLine).ok_or(Error::DegeneratePoints)
    }

    pub fn coords(&self) -> [FieldElem; 3] {
        self.0
    }
}

pub fn pline_through(f: &FieldCtx, a: ProjPoint, b: ProjPoint) -> Result<ProjLine> {
    normalize(f, cross(f, a.0, b.0)).map(ProjLine).ok_or(Error::IdenticalPoints)
}

/// Common point of two lines.
pub fn pmeet(f: &FieldCtx, l1: ProjLine, l2: ProjLine) -> Result<ProjPoint> {
    normalize(f, cross(f, l1.0, l2.0)).map(ProjPoint).ok_or(Error::IdenticalPoints)
}

pub fn incident(f: &FieldCtx, p: ProjPoint, l: ProjLine) -> bool {
    dot(f, p.0, l.0).is_zero()
}

// Normalized triples in a fixed order: (1,*,*), (0,1,*), (0,0,1).
fn normalized_triples(f: &FieldCtx) -> Result<Vec<[FieldElem; 3]>> {
    let q = f.q();
    if q > 256 {
        return Err(Error::TooLarge(format!("PG(2,{q})")));
    }
    let els: Vec<_> = f.elements()?.collect();
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    for &a in &els {
        for &b in &els {
            out.push([FieldElem::ONE, a, b]);
        }
    }
    for &b in &els {
        out.push([FieldElem::ZERO, FieldElem::ONE, b]);
    }
    out.push([FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE]);
    Ok(out)
}

pub fn all_points(f: &FieldCtx) -> Result<Vec<ProjPoint>> {
    Ok(normalized_triples(f)?.into_iter().map(ProjPoint).collect())
}

pub fn all_lines(f: &FieldCtx) -> Result<Vec<ProjLine>> {
    Ok(normalized_triples(f)?.into_iter().map(ProjLine).collect())
}

/// The scheme over PG(2,q) with a distinguished line L0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuthContext {
    f: FieldCtx,
    l0: ProjLine,
}

impl AuthContext {
    /// L0 is the line `x3 = 0`.
    pub fn new(f: FieldCtx) -> Self {
        let l0 = ProjLine([FieldElem::ZERO, FieldElem::ZERO, FieldElem::ONE]);
        AuthContext { f, l0 }
    }

    pub fn with_line(f: FieldCtx, l0: ProjLine) -> Self {
        AuthContext { f, l0 }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.f
    }

    pub fn l0(&self) -> ProjLine {
        self.l0
    }

    pub fn q(&self) -> u64 {
        self.f.q()
    }

    pub fn messages(&self) -> Result<Vec<ProjPoint>> {
        Ok(all_points(&self.f)?.into_iter().filter(|&p| incident(&self.f, p, self.l0)).collect())
    }

    pub fn keys(&self) -> Result<Vec<ProjPoint>> {
        Ok(all_points(&self.f)?.into_iter().filter(|&p| !incident(&self.f, p, self.l0)).collect())
    }

    pub fn tags(&self) -> Result<Vec<ProjLine>> {
        Ok(all_lines(&self.f)?.into_iter().filter(|&l| l != self.l0).collect())
    }

    pub fn authenticate(&self, m: ProjPoint, k: ProjPoint) -> Result<ProjLine> {
        if !incident(&self.f, m, self.l0) {
            return Err(Error::MessageNotOnL0);
        }
        if incident(&self.f, k, self.l0) {
            return Err(Error::KeyOnL0);
        }
        pline_through(&self.f, m, k)
    }

    /// Accepts a tag iff the shared key lies on it.
    pub fn verify(&self, tag: ProjLine, k: ProjPoint) -> Result<bool> {
        if tag == self.l0 {
            return Err(Error::TagIsL0);
        }
        if incident(&self.f, k, self.l0) {
            return Err(Error::KeyOnL0);
        }
        Ok(incident(&self.f, k, tag))
    }
}

/// Exact forgery probabilities, worst case over the opponent's choices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForgeryStats {
    pub q: u64,
    /// Number of keys.
    pub n0: u64,
    pub impersonation: Ratio<u64>,
    pub substitution: Ratio<u64>,
    /// Keys consistent with any single tag (constant over all tags).
    pub consistent_keys: u64,
    pub sqrt_n0: u64,
    pub perfect: bool,
}

#[derive(Serialize)]
struct ForgeryJson {
    q: u64,
    n0: u64,
    impersonation: String,
    substitution: String,
    consistent_keys: u64,
    sqrt_n0: u64,
    perfect: bool,
}

impl ForgeryStats {
    pub fn to_json(&self) -> String {
        let j = ForgeryJson {
            q: self.q,
            n0: self.n0,
            impersonation: self.impersonation.to_string(),
            substitution: self.substitution.to_string(),
            consistent_keys: self.consistent_keys,
            sqrt_n0: self.sqrt_n0,
            perfect: self.perfect,
        };
        serde_json::to_string_pretty(&j).expect("plain struct serializes")
    }
}

/// Enumerates every key, message and tag (q <= 8).
///
/// A forged pair `(m, C)` is accepted iff the secret key lies on C and C
/// passes through m. Impersonation is the best single forgery with no
/// observation; substitution is the best forgery `(m', C')`, `m' ≠ m`,
/// after seeing one valid `(m, C)`, maximized over what was seen.
pub fn forgery_stats(ctx: &AuthContext) -> Result<ForgeryStats> {
    let q = ctx.q();
    if q > 8 {
        return Err(Error::TooLarge(format!("forgery statistics need q <= 8, got {q}")));
    }
    let f = &ctx.f;
    let keys = ctx.keys()?;
    let messages = ctx.messages()?;
    let tags = ctx.tags()?;
    let n0 = keys.len() as u64;

    // on[t][k]: key k lies on tag t.
    let on: Vec<Vec<bool>> = tags.iter().map(|&t| keys.iter().map(|&k| incident(f, k, t)).collect()).collect();
    let count = |t: usize| on[t].iter().filter(|&&b| b).count() as u64;

    let consistent: Vec<u64> = (0..tags.len()).map(count).collect();
    let consistent_keys = consistent[0];
    let uniform = consistent.iter().all(|&c| c == consistent_keys);

    let mut impersonation = Ratio::new(0, 1);
    for &m in &messages {
        for (t, &tag) in tags.iter().enumerate() {
            if incident(f, m, tag) {
                impersonation = impersonation.max(Ratio::new(count(t), n0));
            }
        }
    }

    let mut substitution = Ratio::new(0, 1);
    for &m in &messages {
        for (t, _) in tags.iter().enumerate().filter(|(_, &tag)| incident(f, m, tag)) {
            let seen = count(t);
            for &m2 in messages.iter().filter(|&&m2| m2 != m) {
                for (t2, _) in tags.iter().enumerate().filter(|(_, &c)| incident(f, m2, c)) {
                    let both = (0..keys.len()).filter(|&k| on[t][k] && on[t2][k]).count() as u64;
                    substitution = substitution.max(Ratio::new(both, seen));
                }
            }
        }
    }

    let sqrt_n0 = (1..=n0).find(|r| r * r >= n0).unwrap_or(0);
    let perfect = uniform
        && sqrt_n0 * sqrt_n0 == n0
        && consistent_keys == sqrt_n0
        && impersonation == Ratio::new(1, sqrt_n0)
        && substitution == Ratio::new(1, sqrt_n0);
    Ok(ForgeryStats { q, n0, impersonation, substitution, consistent_keys, sqrt_n0, perfect })
}
