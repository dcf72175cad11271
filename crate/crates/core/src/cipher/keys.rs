// SPDX-License-Identifier: Apache-2.0

//! Key selection from a stream of candidate points.
//!
//! A candidate is rejected when the key it induces would break the key
//! conditions against the positions already fixed, or would send `m_i`
//! onto a later message point. The second test looks ahead: without it a
//! key with `c_1 = m_2` leaves no admissible key for position 2.

use super::{CipherTriple, KeyTriple, LineKeyPoints, MessageTriple};
use crate::error::{Error, Result};
use crate::field::ExtElem;
use crate::plane::{Circle, MoebiusPlane, MoebiusPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineKeys {
    pub key: KeyTriple,
    pub points: LineKeyPoints,
    /// Rejected candidates before each accepted one.
    pub skips: [u64; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FallbackKeys {
    pub key: KeyTriple,
    /// Two defining points per position.
    pub points: [[ExtElem; 2]; 3],
    /// Per position: rejections of the first point, then of the second.
    pub skips: [u64; 6],
}

// Tracks the points of M already claimed by earlier key circles.
struct Claims<'a> {
    plane: &'a MoebiusPlane,
    msg: &'a MessageTriple,
    used: Vec<MoebiusPoint>,
}

impl<'a> Claims<'a> {
    fn new(plane: &'a MoebiusPlane, msg: &'a MessageTriple) -> Self {
        Claims { plane, msg, used: Vec::with_capacity(6) }
    }

    // Section of `k` with M if `k` is acceptable at position `i`.
    fn admit(&self, i: usize, k: &Circle) -> Option<Vec<MoebiusPoint>> {
        let m = self.msg.circle();
        if *k == m {
            return None;
        }
        let s = self.plane.intersect(&m, k).ok()?;
        let later = &self.msg.points()[i + 1..];
        if s.iter().any(|p| self.used.contains(p) || later.contains(p)) {
            return None;
        }
        Some(s)
    }

    fn claim(&mut self, s: Vec<MoebiusPoint>) {
        self.used.extend(s);
    }
}

fn next<I: Iterator<Item = ExtElem>>(candidates: &mut I) -> Result<ExtElem> {
    candidates.next().ok_or(Error::CandidateStreamExhausted)
}

/// Line keys: `K_i` is the line through `m_i` and the i-th accepted
/// candidate. Needs a message circle that avoids infinity.
pub fn derive_line_keys<I>(plane: &MoebiusPlane, msg: &MessageTriple, candidates: &mut I) -> Result<LineKeys>
where
    I: Iterator<Item = ExtElem>,
{
    let m = msg.circle();
    if m.is_line() {
        return Err(Error::MessageCircleThroughInfinity);
    }
    let mut claims = Claims::new(plane, msg);
    let mut circles = Vec::with_capacity(3);
    let mut points = [ExtElem::ZERO; 3];
    let mut skips = [0u64; 3];
    for i in 0..3 {
        loop {
            let k = next(candidates)?;
            let kp = MoebiusPoint::Finite(k);
            if !plane.contains(&m, kp) {
                let line = plane.line_through(msg.points()[i], kp)?;
                if let Some(s) = claims.admit(i, &line) {
                    claims.claim(s);
                    circles.push(line);
                    points[i] = k;
                    break;
                }
            }
            skips[i] += 1;
        }
    }
    Ok(LineKeys { key: KeyTriple([circles[0], circles[1], circles[2]]), points: LineKeyPoints(points), skips })
}

/// General circles `K_i = (m_i, k_i, k_i')^χ` for messages on a line, where
/// line keys cannot work (every line meets M in infinity).
pub fn derive_fallback_keys<I>(plane: &MoebiusPlane, msg: &MessageTriple, candidates: &mut I) -> Result<FallbackKeys>
where
    I: Iterator<Item = ExtElem>,
{
    let m = msg.circle();
    let mut claims = Claims::new(plane, msg);
    let mut circles = Vec::with_capacity(3);
    let mut points = [[ExtElem::ZERO; 2]; 3];
    let mut skips = [0u64; 6];
    for i in 0..3 {
        let k = loop {
            let k = next(candidates)?;
            if !plane.contains(&m, MoebiusPoint::Finite(k)) {
                break k;
            }
            skips[2 * i] += 1;
        };
        // The circle through m_i and k touching M always qualifies, so
        // this loop ends on any stream that keeps covering the plane.
        loop {
            let k2 = next(candidates)?;
            let k2p = MoebiusPoint::Finite(k2);
            if k2 != k && !plane.contains(&m, k2p) {
                let c = plane.circle_through(msg.points()[i], MoebiusPoint::Finite(k), k2p)?;
                if let Some(s) = claims.admit(i, &c) {
                    claims.claim(s);
                    circles.push(c);
                    points[i] = [k, k2];
                    break;
                }
            }
            skips[2 * i + 1] += 1;
        }
    }
    Ok(FallbackKeys { key: KeyTriple([circles[0], circles[1], circles[2]]), points, skips })
}

fn skip<I: Iterator<Item = ExtElem>>(candidates: &mut I, n: u64) -> Result<()> {
    for _ in 0..n {
        next(candidates)?;
    }
    Ok(())
}

/// Rebuilds line keys on the receiving side: `K_i` passes through `c_i`
/// and the same key point, so it is the line through those two.
pub fn replay_line_keys<I>(plane: &MoebiusPlane, ct: &CipherTriple, skips: &[u64; 3], candidates: &mut I) -> Result<KeyTriple>
where
    I: Iterator<Item = ExtElem>,
{
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        skip(candidates, skips[i])?;
        let k = next(candidates)?;
        out.push(plane.line_through(ct.0[i], MoebiusPoint::Finite(k)).map_err(|_| Error::InvalidKey)?);
    }
    Ok(KeyTriple([out[0], out[1], out[2]]))
}

pub fn replay_fallback_keys<I>(
    plane: &MoebiusPlane,
    ct: &CipherTriple,
    skips: &[u64; 6],
    candidates: &mut I,
) -> Result<KeyTriple>
where
    I: Iterator<Item = ExtElem>,
{
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        skip(candidates, skips[2 * i])?;
        let k = next(candidates)?;
        skip(candidates, skips[2 * i + 1])?;
        let k2 = next(candidates)?;
        let c = plane
            .circle_through(ct.0[i], MoebiusPoint::Finite(k), MoebiusPoint::Finite(k2))
            .map_err(|_| Error::InvalidKey)?;
        out.push(c);
    }
    Ok(KeyTriple([out[0], out[1], out[2]]))
}
