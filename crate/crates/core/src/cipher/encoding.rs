// SPDX-License-Identifier: Apache-2.0

//! Bytes to message triples over GF(2^n).
//!
//! Each point carries `2n - 2` payload bits; the top two bits of its `im`
//! coordinate hold the position tag 1, 2 or 3, so the three points of a
//! triple always differ. Payload bits are read most significant first and
//! the last triple is zero padded.

use bitvec::prelude::*;

use super::MessageTriple;
use crate::error::{Error, Result};
use crate::plane::{MoebiusPlane, MoebiusPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedMessage {
    pub triples: Vec<MessageTriple>,
    /// Exact payload length in bits, before padding.
    pub bit_len: u64,
}

/// `2n - 2`, or `FieldTooSmall` unless the base field is GF(2^n), n >= 2.
pub fn payload_bits_per_point(plane: &MoebiusPlane) -> Result<usize> {
    let f = plane.base();
    if f.p() != 2 || f.n() < 2 {
        return Err(Error::FieldTooSmall);
    }
    Ok(2 * f.n() as usize - 2)
}

pub fn encode_bytes(plane: &MoebiusPlane, data: &[u8]) -> Result<EncodedMessage> {
    let w = payload_bits_per_point(plane)?;
    let ext = plane.ext();
    let bits = data.view_bits::<Msb0>();
    let per_triple = 3 * w;
    let count = bits.len().div_ceil(per_triple);
    let mut padded: BitVec<u8, Msb0> = BitVec::with_capacity(count * per_triple);
    padded.extend_from_bitslice(bits);
    padded.resize(count * per_triple, false);

    let mut triples = Vec::with_capacity(count);
    for chunk in padded.chunks_exact(per_triple) {
        let mut pts = [MoebiusPoint::Infinity; 3];
        for (pos, field) in chunk.chunks_exact(w).enumerate() {
            let v: u64 = field.load_be();
            let idx = ((pos as u64 + 1) << w) | v;
            pts[pos] = MoebiusPoint::Finite(ext.from_index(idx)?);
        }
        triples.push(MessageTriple::new(plane, pts)?);
    }
    Ok(EncodedMessage { triples, bit_len: bits.len() as u64 })
}

pub fn decode_points(plane: &MoebiusPlane, triples: &[[MoebiusPoint; 3]], bit_len: u64) -> Result<Vec<u8>> {
    let w = payload_bits_per_point(plane)?;
    let per_triple = 3 * w as u64;
    if bit_len % 8 != 0 || bit_len.div_ceil(per_triple) != triples.len() as u64 {
        return Err(Error::LengthMismatch);
    }
    let ext = plane.ext();
    let mut bits: BitVec<u8, Msb0> = BitVec::with_capacity(triples.len() * per_triple as usize);
    for t in triples {
        for (pos, p) in t.iter().enumerate() {
            let z = p.finite().ok_or(Error::MalformedTag)?;
            let idx = ext.index(z);
            if idx >> w != pos as u64 + 1 {
                return Err(Error::MalformedTag);
            }
            let start = bits.len();
            bits.resize(start + w, false);
            bits[start..].store_be(idx & ((1u64 << w) - 1));
        }
    }
    if bits[bit_len as usize..].any() {
        return Err(Error::LengthMismatch);
    }
    bits.truncate(bit_len as usize);
    Ok(bits.into_vec())
}
