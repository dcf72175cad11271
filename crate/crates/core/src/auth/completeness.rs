// SPDX-License-Identifier: Apache-2.0

//! Bit-flip completeness of the authentication code over GF(2^n).
//!
//! L0 is taken as `s x1 - x2 + t = 0` in the affine part, a message is the
//! point of L0 with first coordinate `x1`, and a tag through `k = (k1, k2)`
//! is read as its slope `u`. Entry `(i, j)` holds when flipping bit `i` of
//! `x1` flips bit `j` of `u` for some `(x1, k, s, t)`.

use serde::Serialize;

use super::{AuthContext, ProjLine, ProjPoint};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// One witness, bits numbered from 1, field elements by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AuthWitness {
    pub i: usize,
    pub j: usize,
    pub x1: u64,
    pub k1: u64,
    pub k2: u64,
    pub s: u64,
    pub t: u64,
    pub u: u64,
    #[serde(rename = "u'")]
    pub u_flipped: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuthMatrix {
    pub n: u32,
    pub entries: Vec<Vec<bool>>,
    pub witnesses: Vec<AuthWitness>,
}

impl AuthMatrix {
    pub fn all_true(&self) -> bool {
        self.entries.iter().flatten().all(|&b| b)
    }

    /// One row per line, `1`/`0` separated by spaces.
    pub fn grid(&self) -> String {
        grid(&self.entries)
    }

    pub fn witness_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for wit in &self.witnesses {
            w.serialize(wit).expect("plain struct serializes");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }
}

pub(crate) fn grid(entries: &[Vec<bool>]) -> String {
    entries
        .iter()
        .map(|row| row.iter().map(|&b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(" ") + "\n")
        .collect()
}

// Slope of a non-vertical line `a x1 + b x2 + c = 0`.
fn slope(f: &FieldCtx, tag: ProjLine) -> Option<FieldElem> {
    let [a, b, _] = tag.coords();
    f.div(f.neg(a), b).ok()
}

pub fn auth_completeness_matrix(n: u32) -> Result<AuthMatrix> {
    if !(2..=4).contains(&n) {
        return Err(Error::TooLarge(format!("completeness search supports n in 2..=4, got {n}")));
    }
    let f = FieldCtx::new(2, n, None)?;
    auth_completeness_over(&f)
}

pub(crate) fn auth_completeness_over(f: &FieldCtx) -> Result<AuthMatrix> {
    if !f.is_binary() {
        return Err(Error::WrongCharacteristic);
    }
    let n = f.n();
    let bits = n as usize;
    let els: Vec<FieldElem> = f.elements()?.collect();
    let mut entries = vec![vec![false; bits]; bits];
    let mut witnesses = Vec::new();
    let mut missing = bits * bits;

    'search: for &s in &els {
        for &t in &els {
            let l0 = ProjLine::new(f, [s, f.neg(FieldElem::ONE), t])?;
            let ctx = AuthContext::with_line(f.clone(), l0);
            let msg = |x1: FieldElem| ProjPoint::affine(x1, f.add(f.mul(s, x1), t));
            for &k1 in &els {
                for &k2 in &els {
                    let k = ProjPoint::affine(k1, k2);
                    if ctx.authenticate(msg(FieldElem::ZERO), k).is_err() {
                        continue;
                    }
                    for &x1 in els.iter().filter(|&&x| x != k1) {
                        let Some(u) = slope(f, ctx.authenticate(msg(x1), k)?) else { continue };
                        for i in 0..bits {
                            let x1f = f.elem(x1.index() ^ (1 << i))?;
                            if x1f == k1 {
                                continue;
                            }
                            let Some(u2) = slope(f, ctx.authenticate(msg(x1f), k)?) else { continue };
                            let diff = u.index() ^ u2.index();
                            for j in (0..bits).filter(|&j| diff >> j & 1 == 1) {
                                if !entries[i][j] {
                                    entries[i][j] = true;
                                    missing -= 1;
                                    witnesses.push(AuthWitness {
                                        i: i + 1,
                                        j: j + 1,
                                        x1: x1.index(),
                                        k1: k1.index(),
                                        k2: k2.index(),
                                        s: s.index(),
                                        t: t.index(),
                                        u: u.index(),
                                        u_flipped: u2.index(),
                                    });
                                }
                            }
                            if missing == 0 {
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
    }
    witnesses.sort_by_key(|w| (w.i, w.j));
    Ok(AuthMatrix { n, entries, witnesses })
}

/// Re-derives both tags of a witness through the scheme itself.
pub fn check_auth_witness(f: &FieldCtx, w: &AuthWitness) -> Result<bool> {
    let e = |v: u64| f.elem(v);
    let (s, t) = (e(w.s)?, e(w.t)?);
    let l0 = ProjLine::new(f, [s, f.neg(FieldElem::ONE), t])?;
    let ctx = AuthContext::with_line(f.clone(), l0);
    let k = ProjPoint::affine(e(w.k1)?, e(w.k2)?);
    let x1 = e(w.x1)?;
    let x1f = e(w.x1 ^ (1 << (w.i - 1)))?;
    let msg = |x: FieldElem| ProjPoint::affine(x, f.add(f.mul(s, x), t));
    let u = slope(f, ctx.authenticate(msg(x1), k)?);
    let u2 = slope(f, ctx.authenticate(msg(x1f), k)?);
    Ok(match (u, u2) {
        (Some(u), Some(u2)) => {
            u.index() == w.u && u2.index() == w.u_flipped && (u.index() ^ u2.index()) >> (w.j - 1) & 1 == 1
        }
        _ => false,
    })
}
