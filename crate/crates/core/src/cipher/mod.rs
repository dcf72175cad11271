// SPDX-License-Identifier: Apache-2.0

//! The Möbius cipher: three message points on a circle M are moved along
//! three key circles to the second intersection with M.

mod encoding;
mod keys;
mod stream;

pub use encoding::{decode_points, encode_bytes, payload_bits_per_point, EncodedMessage};
pub use keys::{derive_fallback_keys, derive_line_keys, replay_fallback_keys, replay_line_keys, FallbackKeys, LineKeys};
pub use stream::{
    decrypt_stream, encrypt_stream, verify_integrity, Container, KeyFile, KeySource, Keystream, Mode, SeededKeystream,
    StreamStats, TripleRecord,
};

use crate::error::{Error, Result};
use crate::field::ExtElem;
use crate::plane::{Circle, MoebiusPlane, MoebiusPoint};

/// Three pairwise distinct points together with the circle they span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MessageTriple {
    points: [MoebiusPoint; 3],
    circle: Circle,
}

impl MessageTriple {
    pub fn new(plane: &MoebiusPlane, points: [MoebiusPoint; 3]) -> Result<Self> {
        let circle = plane.circle_through(points[0], points[1], points[2])?;
        Ok(MessageTriple { points, circle })
    }

    pub fn points(&self) -> [MoebiusPoint; 3] {
        self.points
    }

    pub fn circle(&self) -> Circle {
        self.circle
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KeyTriple(pub [Circle; 3]);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CipherTriple(pub [MoebiusPoint; 3]);

/// The finite points off M that pick the three key lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineKeyPoints(pub [ExtElem; 3]);

/// `K_i ∩ M` for each position, or `None` if some key breaks the rules.
fn sections(plane: &MoebiusPlane, msg: &MessageTriple, key: &KeyTriple) -> Option<[Vec<MoebiusPoint>; 3]> {
    let m = msg.circle;
    let mut out: [Vec<MoebiusPoint>; 3] = Default::default();
    for i in 0..3 {
        let k = &key.0[i];
        if *k == m || !plane.contains(k, msg.points[i]) {
            return None;
        }
        out[i] = plane.intersect(&m, k).ok()?;
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if out[i].iter().any(|p| out[j].contains(p)) {
                return None;
            }
        }
    }
    Some(out)
}

/// The other point of `section`, or `m` itself when the key touches M.
pub(crate) fn partner(section: &[MoebiusPoint], m: MoebiusPoint) -> MoebiusPoint {
    section.iter().copied().find(|&p| p != m).unwrap_or(m)
}

/// Checks the key conditions: `m_i ∈ K_i`, `K_i ≠ M`, and no point of M
/// lies on two key circles.
pub fn validate_key(plane: &MoebiusPlane, msg: &MessageTriple, key: &KeyTriple) -> bool {
    sections(plane, msg, key).is_some()
}

pub fn encrypt_triple(plane: &MoebiusPlane, msg: &MessageTriple, key: &KeyTriple) -> Result<CipherTriple> {
    let s = sections(plane, msg, key).ok_or(Error::InvalidKey)?;
    Ok(CipherTriple([0, 1, 2].map(|i| partner(&s[i], msg.points[i]))))
}

/// Encryption is an involution; the ciphertext spans the same circle.
pub fn decrypt_triple(plane: &MoebiusPlane, ct: &CipherTriple, key: &KeyTriple) -> Result<MessageTriple> {
    let as_msg = MessageTriple::new(plane, ct.0).map_err(|_| Error::InvalidKey)?;
    let back = encrypt_triple(plane, &as_msg, key)?;
    Ok(MessageTriple { points: back.0, circle: as_msg.circle })
}
