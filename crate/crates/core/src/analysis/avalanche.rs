// SPDX-License-Identifier: Apache-2.0

//! Bit-flip completeness of the cipher over GF(q^2), q = 2^n.
//!
//! A point `x + y w` is read as the 2n-bit string of `x` (bits 1..n) then
//! `y` (bits n+1..2n); this is the bit layout of its index. Entry `(i, j)`
//! holds when there are two encryptions under the same first key point
//! whose message points differ exactly in bit i and whose ciphertext
//! points differ exactly in bit j.

use serde::Serialize;

use crate::cipher::{derive_line_keys, encrypt_triple, MessageTriple};
use crate::error::{Error, Result};
use crate::field::{ExtElem, FieldCtx, FieldElem};
use crate::plane::{MoebiusPlane, MoebiusPoint};

/// Point indices throughout. The key point for position 1 is always 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvalancheWitness {
    pub i: usize,
    pub j: usize,
    pub m: u64,
    pub c: u64,
    pub m_flipped: u64,
    pub c_flipped: u64,
    pub key_point: u64,
    #[serde(skip)]
    pub message: [u64; 3],
    #[serde(skip)]
    pub message_flipped: [u64; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvalancheMatrix {
    pub n: u32,
    pub entries: Vec<Vec<bool>>,
    pub witnesses: Vec<AvalancheWitness>,
}

impl AvalancheMatrix {
    pub fn all_true(&self) -> bool {
        self.entries.iter().flatten().all(|&b| b)
    }

    pub fn grid(&self) -> String {
        crate::auth::grid(&self.entries)
    }

    pub fn witness_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for wit in &self.witnesses {
            w.serialize(wit).expect("plain struct serializes");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }
}

// Candidates for key selection: the origin first, then everything.
fn candidates(plane: &MoebiusPlane) -> Result<impl Iterator<Item = ExtElem> + '_> {
    Ok(std::iter::once(ExtElem::ZERO).chain(plane.ext().elements()?))
}

/// Encrypts `msg` with the origin as first key point; returns `c_1`.
fn encrypt_first(plane: &MoebiusPlane, msg: &MessageTriple) -> Result<Option<MoebiusPoint>> {
    let mut cand = candidates(plane)?;
    let keys = derive_line_keys(plane, msg, &mut cand)?;
    if keys.skips[0] != 0 || keys.points.0[0] != ExtElem::ZERO {
        return Ok(None);
    }
    Ok(Some(encrypt_triple(plane, msg, &keys.key)?.0[0]))
}

/// A message triple starting at `m` whose first ciphertext point is `c`,
/// found by trying circles through `m` and `c` (tangent to the line
/// through 0 and `m` when `c = m`).
fn realize(plane: &MoebiusPlane, m: ExtElem, c: ExtElem) -> Result<Option<[MoebiusPoint; 3]>> {
    let (pm, pc) = (MoebiusPoint::Finite(m), MoebiusPoint::Finite(c));
    let origin = MoebiusPoint::Finite(ExtElem::ZERO);
    let line = plane.line_through(pm, origin)?;
    for r in plane.ext().elements()?.map(MoebiusPoint::Finite) {
        if plane.contains(&line, r) {
            continue;
        }
        let circle = if m == c { plane.tangent_circle(&line, pm, r)? } else { plane.circle_through(pm, pc, r)? };
        if circle.is_line() || plane.contains(&circle, origin) {
            continue;
        }
        let rest: Vec<_> = plane.points_of(&circle)?.into_iter().filter(|&p| p != pm && p != pc).collect();
        let triple = [pm, rest[0], rest[1]];
        let msg = MessageTriple::new(plane, triple)?;
        if encrypt_first(plane, &msg)? == Some(pc) {
            return Ok(Some(triple));
        }
    }
    Ok(None)
}

fn collinear_with_origin(g: &crate::field::ExtCtx, a: ExtElem, b: ExtElem) -> bool {
    g.div(b, a).map(|r| r.is_base()).unwrap_or(false)
}

pub fn cipher_completeness_matrix(n: u32) -> Result<AvalancheMatrix> {
    if !(2..=4).contains(&n) {
        return Err(Error::TooLarge(format!("completeness search supports n in 2..=4, got {n}")));
    }
    let plane = MoebiusPlane::with_defaults(2, n)?;
    completeness_over(&plane)
}

pub(crate) fn completeness_over(plane: &MoebiusPlane) -> Result<AvalancheMatrix> {
    if !plane.base().is_binary() {
        return Err(Error::WrongCharacteristic);
    }
    let g = plane.ext();
    let n = plane.base().n();
    let bits = 2 * n as usize;
    let idx = |p: MoebiusPoint| plane.point_index(p);
    let nonzero: Vec<ExtElem> = g.elements()?.filter(|z| !z.is_zero()).collect();
    let scalars: Vec<FieldElem> = plane.base().elements()?.filter(|a| !a.is_zero()).collect();
    let mut entries = vec![vec![false; bits]; bits];
    let mut witnesses = Vec::new();

    for i in 0..bits {
        for j in 0..bits {
            'found: for &m in &nonzero {
                let m2 = g.from_index(g.index(m) ^ (1 << i))?;
                if m2.is_zero() {
                    continue;
                }
                for &l in &scalars {
                    let c = g.scale(l, m);
                    let c2 = g.from_index(g.index(c) ^ (1 << j))?;
                    if c2.is_zero() || !collinear_with_origin(g, m2, c2) {
                        continue;
                    }
                    let Some(t1) = realize(plane, m, c)? else { continue };
                    let Some(t2) = realize(plane, m2, c2)? else { continue };
                    entries[i][j] = true;
                    witnesses.push(AvalancheWitness {
                        i: i + 1,
                        j: j + 1,
                        m: g.index(m),
                        c: g.index(c),
                        m_flipped: g.index(m2),
                        c_flipped: g.index(c2),
                        key_point: 0,
                        message: t1.map(idx),
                        message_flipped: t2.map(idx),
                    });
                    break 'found;
                }
            }
        }
    }
    Ok(AvalancheMatrix { n, entries, witnesses })
}

/// Re-encrypts both message triples of a witness and checks the bit flips.
pub fn verify_avalanche_witness(plane: &MoebiusPlane, w: &AvalancheWitness) -> Result<bool> {
    let g = plane.ext();
    let pt = |i: u64| g.from_index(i).map(MoebiusPoint::Finite);
    let one_bit = |a: u64, b: u64, bit: usize| a ^ b == 1 << (bit - 1);
    if !one_bit(w.m, w.m_flipped, w.i) || !one_bit(w.c, w.c_flipped, w.j) {
        return Ok(false);
    }
    for (msg, m, c) in [(w.message, w.m, w.c), (w.message_flipped, w.m_flipped, w.c_flipped)] {
        let pts = [pt(msg[0])?, pt(msg[1])?, pt(msg[2])?];
        if pts[0] != pt(m)? {
            return Ok(false);
        }
        let triple = MessageTriple::new(plane, pts)?;
        if encrypt_first(plane, &triple)? != Some(pt(c)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For each bit pair, whether `x v = u y` and `x' v' = u' y'` have a
/// solution with `(x, y), (u, v)` and their flipped versions nonzero,
/// searched in plain coordinates over GF(2^n).
pub fn completeness_conditions_solvable(n: u32) -> Result<Vec<Vec<bool>>> {
    let f = FieldCtx::new(2, n, None)?;
    let q = f.q();
    let bits = 2 * n as usize;
    let det = |a: (u64, u64), b: (u64, u64)| -> Result<bool> {
        let e = |v| f.elem(v);
        Ok(f.mul(e(a.0)?, e(b.1)?) == f.mul(e(b.0)?, e(a.1)?))
    };
    let flip = |p: (u64, u64), bit: usize| if bit < n as usize { (p.0 ^ 1 << bit, p.1) } else { (p.0, p.1 ^ 1 << (bit - n as usize)) };
    let pairs: Vec<(u64, u64)> = (0..q).flat_map(|x| (0..q).map(move |y| (x, y))).filter(|&p| p != (0, 0)).collect();
    let mut out = vec![vec![false; bits]; bits];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            'search: for &m in &pairs {
                let m2 = flip(m, i);
                if m2 == (0, 0) {
                    continue;
                }
                for &c in &pairs {
                    let c2 = flip(c, j);
                    if c2 != (0, 0) && det(m, c)? && det(m2, c2)? {
                        *cell = true;
                        break 'search;
                    }
                }
            }
        }
    }
    Ok(out)
}
