// SPDX-License-Identifier: Apache-2.0

//! Byte streams, key material and the three container formats.
//!
//! ```text
//! MOBC  version  field-block  mode  bit_len  record*
//!   record = fallback-flag  skip-varint{0,3,6}  point point point
//! MOBK  version  field-block  circle*        (three per triple)
//! MOBS  version  field-block  finite-point*
//! ```
//! Skip counts appear only in keystream mode. None of these formats carry
//! a MAC.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::encoding::{decode_points, encode_bytes, payload_bits_per_point};
use super::keys::{derive_fallback_keys, derive_line_keys, replay_fallback_keys, replay_line_keys};
use super::{decrypt_triple, encrypt_triple, CipherTriple, KeyTriple, MessageTriple};
use crate::codec::{self, Reader};
use crate::error::{Error, Result};
use crate::field::{ExtCtx, ExtElem};
use crate::plane::{MoebiusPlane, MoebiusPoint};

const VERSION: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Key circles travel out of band in a MOBK file.
    Explicit,
    /// Both sides draw candidates from a shared point stream.
    Stream,
}

impl Mode {
    fn byte(self) -> u8 {
        match self {
            Mode::Explicit => 0,
            Mode::Stream => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleRecord {
    pub fallback: bool,
    /// Empty in explicit mode; 3 (line keys) or 6 (fallback) otherwise.
    pub skips: Vec<u64>,
    pub points: [MoebiusPoint; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Container {
    pub ext: ExtCtx,
    pub mode: Mode,
    pub bit_len: u64,
    pub records: Vec<TripleRecord>,
}

fn bad(what: &str) -> Error {
    Error::InvalidContainer(what.to_string())
}

fn header(out: &mut Vec<u8>, magic: &[u8; 4], ext: &ExtCtx) {
    out.extend_from_slice(magic);
    out.push(VERSION);
    codec::write_field_block(out, ext);
}

fn read_header(r: &mut Reader<'_>, magic: &[u8; 4]) -> Result<ExtCtx> {
    r.magic(magic)?;
    if r.byte()? != VERSION {
        return Err(bad("unsupported version"));
    }
    codec::read_field_block(r).map_err(|e| match e {
        Error::InvalidContainer(_) => e,
        other => bad(&other.to_string()),
    })
}

impl Container {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        header(&mut out, b"MOBC", &self.ext);
        out.push(self.mode.byte());
        codec::write_varint(&mut out, self.bit_len);
        for rec in &self.records {
            out.push(rec.fallback as u8);
            for &s in &rec.skips {
                codec::write_varint(&mut out, s);
            }
            for p in rec.points {
                codec::write_point(&mut out, &self.ext, p);
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let ext = read_header(&mut r, b"MOBC")?;
        let mode = match r.byte()? {
            0 => Mode::Explicit,
            1 => Mode::Stream,
            _ => return Err(bad("unknown mode")),
        };
        let bit_len = r.varint()?;
        let plane = MoebiusPlane::new(ext.clone());
        let w = payload_bits_per_point(&plane).map_err(|_| bad("field cannot carry bytes"))? as u64;
        let count = bit_len.div_ceil(3 * w);
        // Each record takes at least four bytes.
        if count > r.remaining() as u64 / 4 + 1 {
            return Err(bad("truncated"));
        }
        let mut records = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let fallback = match r.byte()? {
                0 => false,
                1 => true,
                _ => return Err(bad("bad fallback flag")),
            };
            let nskips = match (mode, fallback) {
                (Mode::Explicit, _) => 0,
                (Mode::Stream, false) => 3,
                (Mode::Stream, true) => 6,
            };
            let skips = (0..nskips).map(|_| r.varint()).collect::<Result<Vec<_>>>()?;
            let points = [
                codec::read_point(&mut r, &ext)?,
                codec::read_point(&mut r, &ext)?,
                codec::read_point(&mut r, &ext)?,
            ];
            records.push(TripleRecord { fallback, skips, points });
        }
        if !r.is_empty() {
            return Err(bad("trailing bytes"));
        }
        Ok(Container { ext, mode, bit_len, records })
    }
}

/// A finite, pre-shared sequence of candidate points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Keystream {
    pub ext: ExtCtx,
    pub points: Vec<ExtElem>,
}

impl Keystream {
    pub fn from_seed(ext: &ExtCtx, seed: u64, count: usize) -> Self {
        Keystream { ext: ext.clone(), points: SeededKeystream::new(ext, seed).take(count).collect() }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        header(&mut out, b"MOBS", &self.ext);
        for &z in &self.points {
            codec::write_ext(&mut out, &self.ext, z);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let ext = read_header(&mut r, b"MOBS")?;
        let mut points = Vec::new();
        while !r.is_empty() {
            points.push(codec::read_ext(&mut r, &ext)?);
        }
        Ok(Keystream { ext, points })
    }
}

/// Uniform finite points from ChaCha20 seeded with a 64-bit value.
#[derive(Clone, Debug)]
pub struct SeededKeystream {
    rng: ChaCha20Rng,
    ext: ExtCtx,
}

impl SeededKeystream {
    pub fn new(ext: &ExtCtx, seed: u64) -> Self {
        SeededKeystream { rng: ChaCha20Rng::seed_from_u64(seed), ext: ext.clone() }
    }
}

impl Iterator for SeededKeystream {
    type Item = ExtElem;

    fn next(&mut self) -> Option<ExtElem> {
        let q = self.ext.q();
        let idx = self.rng.gen_range(0..q * q);
        self.ext.from_index(idx).ok()
    }
}

/// Per-triple key circles for explicit mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyFile {
    pub ext: ExtCtx,
    pub keys: Vec<KeyTriple>,
}

impl KeyFile {
    /// Draws keys for `data` from `candidates`, exactly as keystream mode
    /// would, but keeps the circles instead of the skip counts.
    pub fn derive<I>(plane: &MoebiusPlane, data: &[u8], candidates: &mut I) -> Result<Self>
    where
        I: Iterator<Item = ExtElem>,
    {
        let enc = encode_bytes(plane, data)?;
        let keys = enc
            .triples
            .iter()
            .map(|msg| pick_keys(plane, msg, candidates).map(|(k, _, _)| k))
            .collect::<Result<Vec<_>>>()?;
        Ok(KeyFile { ext: plane.ext().clone(), keys })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        header(&mut out, b"MOBK", &self.ext);
        for k in &self.keys {
            for c in &k.0 {
                codec::write_circle(&mut out, &self.ext, c);
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let ext = read_header(&mut r, b"MOBK")?;
        let plane = MoebiusPlane::new(ext.clone());
        let mut keys = Vec::new();
        while !r.is_empty() {
            let c = [
                codec::read_circle(&mut r, &plane)?,
                codec::read_circle(&mut r, &plane)?,
                codec::read_circle(&mut r, &plane)?,
            ];
            keys.push(KeyTriple(c));
        }
        Ok(KeyFile { ext, keys })
    }
}

/// Where key material comes from during a stream operation.
pub enum KeySource<'a> {
    Points(&'a mut dyn Iterator<Item = ExtElem>),
    Keys(&'a [KeyTriple]),
}

/// Key accounting for one encryption.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StreamStats {
    pub triples: u64,
    pub fallback_triples: u64,
    pub message_points: u64,
    /// Candidate points that became part of a key.
    pub key_points: u64,
    /// The same two counts restricted to line-key triples.
    pub line_message_points: u64,
    pub line_key_points: u64,
    pub skipped_candidates: u64,
}

fn exhausted(e: Error) -> Error {
    match e {
        Error::CandidateStreamExhausted => Error::KeysourceExhausted,
        other => other,
    }
}

// Line keys when M avoids infinity, the fallback otherwise.
fn pick_keys<I>(plane: &MoebiusPlane, msg: &MessageTriple, candidates: &mut I) -> Result<(KeyTriple, bool, Vec<u64>)>
where
    I: Iterator<Item = ExtElem> + ?Sized,
{
    let mut it = candidates;
    if msg.circle().is_line() {
        let k = derive_fallback_keys(plane, msg, &mut it).map_err(exhausted)?;
        Ok((k.key, true, k.skips.to_vec()))
    } else {
        let k = derive_line_keys(plane, msg, &mut it).map_err(exhausted)?;
        Ok((k.key, false, k.skips.to_vec()))
    }
}

pub fn encrypt_stream(plane: &MoebiusPlane, data: &[u8], source: KeySource<'_>) -> Result<(Container, StreamStats)> {
    let enc = encode_bytes(plane, data)?;
    let mut stats = StreamStats::default();
    let mut records = Vec::with_capacity(enc.triples.len());
    let mode = match source {
        KeySource::Points(_) => Mode::Stream,
        KeySource::Keys(_) => Mode::Explicit,
    };
    let mut source = source;
    for (t, msg) in enc.triples.iter().enumerate() {
        let (key, fallback, skips) = match &mut source {
            KeySource::Points(it) => pick_keys(plane, msg, *it)?,
            KeySource::Keys(keys) => {
                let key = *keys.get(t).ok_or(Error::KeysourceExhausted)?;
                (key, msg.circle().is_line(), Vec::new())
            }
        };
        let ct = encrypt_triple(plane, msg, &key).map_err(|e| match (mode, e) {
            (Mode::Explicit, Error::InvalidKey) => Error::KeyMismatch,
            (_, e) => e,
        })?;
        let kp = if fallback { 6 } else { 3 };
        stats.triples += 1;
        stats.message_points += 3;
        stats.key_points += kp;
        stats.skipped_candidates += skips.iter().sum::<u64>();
        if fallback {
            stats.fallback_triples += 1;
        } else {
            stats.line_message_points += 3;
            stats.line_key_points += kp;
        }
        records.push(TripleRecord { fallback, skips, points: ct.0 });
    }
    let container = Container { ext: plane.ext().clone(), mode, bit_len: enc.bit_len, records };
    Ok((container, stats))
}

pub fn decrypt_stream(container: &Container, source: KeySource<'_>) -> Result<Vec<u8>> {
    let plane = MoebiusPlane::new(container.ext.clone());
    let mut source = source;
    match (&source, container.mode) {
        (KeySource::Points(_), Mode::Stream) | (KeySource::Keys(_), Mode::Explicit) => {}
        _ => return Err(Error::KeyMismatch),
    }
    let mut out = Vec::with_capacity(container.records.len());
    for (t, rec) in container.records.iter().enumerate() {
        let ct = CipherTriple(rec.points);
        let key = match &mut source {
            KeySource::Points(it) => {
                let mut it = &mut **it;
                let key = if rec.fallback {
                    let skips: [u64; 6] = rec.skips.as_slice().try_into().map_err(|_| bad("skip count"))?;
                    replay_fallback_keys(&plane, &ct, &skips, &mut it)
                } else {
                    let skips: [u64; 3] = rec.skips.as_slice().try_into().map_err(|_| bad("skip count"))?;
                    replay_line_keys(&plane, &ct, &skips, &mut it)
                };
                key.map_err(exhausted)?
            }
            KeySource::Keys(keys) => *keys.get(t).ok_or(Error::KeysourceExhausted)?,
        };
        let msg = decrypt_triple(&plane, &ct, &key).map_err(|e| match e {
            Error::InvalidKey => Error::KeyMismatch,
            other => other,
        })?;
        out.push(msg.points());
    }
    decode_points(&plane, &out, container.bit_len)
}

/// Always fails: the cipher gives confidentiality only.
pub fn verify_integrity(_container: &Container) -> Result<()> {
    Err(Error::AuthenticityNotProvided)
}
