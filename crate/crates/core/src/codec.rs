// SPDX-License-Identifier: Apache-2.0

//! Byte-level building blocks shared by every container format.
//!
//! Field elements are written as their index, little endian, in the fewest
//! bytes that hold `q - 1`. Polynomial residues use the width of `p - 1`.

use crate::error::{Error, Result};
use crate::field::{ExtCtx, ExtElem, FieldCtx, FieldElem};
use crate::plane::{Circle, MoebiusPlane, MoebiusPoint};

const FIELD_MAGIC: u8 = 0xF1;
const POINT_FINITE: u8 = 0;
const POINT_INFINITY: u8 = 1;

fn bad(what: &str) -> Error {
    Error::InvalidContainer(what.to_string())
}

/// Bytes needed for values in `0..=max`.
pub fn width_for(max: u64) -> usize {
    ((64 - max.leading_zeros() as usize).div_ceil(8)).max(1)
}

pub fn elem_width(f: &FieldCtx) -> usize {
    width_for(f.q() - 1)
}

pub fn write_varint(out: &mut Vec<u8>, v: u64) {
    leb128::write::unsigned(out, v).expect("writing to a Vec cannot fail");
}

/// Cursor over an input buffer; every read reports truncation as
/// `InvalidContainer`.
#[derive(Debug)]
pub struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf }
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn remaining(&self) -> usize {
        self.buf.len()
    }

    pub fn bytes(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() < n {
            return Err(bad("truncated"));
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    pub fn byte(&mut self) -> Result<u8> {
        Ok(self.bytes(1)?[0])
    }

    pub fn varint(&mut self) -> Result<u64> {
        leb128::read::unsigned(&mut self.buf).map_err(|_| bad("bad varint"))
    }

    fn uint(&mut self, width: usize) -> Result<u64> {
        let mut le = [0u8; 8];
        le[..width].copy_from_slice(self.bytes(width)?);
        Ok(u64::from_le_bytes(le))
    }

    pub fn magic(&mut self, magic: &[u8]) -> Result<()> {
        if self.bytes(magic.len())? != magic {
            return Err(bad("bad magic"));
        }
        Ok(())
    }
}

fn write_uint(out: &mut Vec<u8>, v: u64, width: usize) {
    out.extend_from_slice(&v.to_le_bytes()[..width]);
}

pub fn write_elem(out: &mut Vec<u8>, f: &FieldCtx, a: FieldElem) {
    write_uint(out, a.index(), elem_width(f));
}

pub fn read_elem(r: &mut Reader<'_>, f: &FieldCtx) -> Result<FieldElem> {
    let v = r.uint(elem_width(f))?;
    f.elem(v).map_err(|_| bad("field element out of range"))
}

/// Field block: magic, p, n, the n + 1 modulus residues, then a presence
/// byte and the monic quadratic `(b0, b1, 1)` as extension coefficients.
pub fn write_field_block(out: &mut Vec<u8>, ext: &ExtCtx) {
    let f = ext.base();
    out.push(FIELD_MAGIC);
    write_varint(out, f.p());
    write_varint(out, f.n() as u64);
    let w = width_for(f.p() - 1);
    for &c in f.modulus() {
        write_uint(out, c, w);
    }
    out.push(1);
    let (b0, b1) = ext.quadratic();
    for e in [b0, b1, FieldElem::ONE] {
        write_elem(out, f, e);
    }
}

pub fn read_field_block(r: &mut Reader<'_>) -> Result<ExtCtx> {
    if r.byte()? != FIELD_MAGIC {
        return Err(bad("bad field block"));
    }
    let p = r.varint()?;
    let n = r.varint()?;
    if !(2..=u32::MAX as u64).contains(&p) || n == 0 || n > 32 {
        return Err(bad("field parameters out of range"));
    }
    let w = width_for(p - 1);
    let modulus = (0..=n).map(|_| r.uint(w)).collect::<Result<Vec<_>>>()?;
    let base = FieldCtx::new(p, n as u32, Some(&modulus))?;
    let quadratic = match r.byte()? {
        0 => None,
        1 => {
            let b0 = read_elem(r, &base)?;
            let b1 = read_elem(r, &base)?;
            if read_elem(r, &base)? != FieldElem::ONE {
                return Err(bad("quadratic is not monic"));
            }
            Some((b0, b1))
        }
        _ => return Err(bad("bad quadratic flag")),
    };
    ExtCtx::new(base, quadratic)
}

/// A finite point without tag: `re` then `im`.
pub fn write_ext(out: &mut Vec<u8>, ext: &ExtCtx, z: ExtElem) {
    write_elem(out, ext.base(), z.re);
    write_elem(out, ext.base(), z.im);
}

pub fn read_ext(r: &mut Reader<'_>, ext: &ExtCtx) -> Result<ExtElem> {
    Ok(ExtElem::new(read_elem(r, ext.base())?, read_elem(r, ext.base())?))
}

pub fn write_point(out: &mut Vec<u8>, ext: &ExtCtx, p: MoebiusPoint) {
    match p {
        MoebiusPoint::Finite(z) => {
            out.push(POINT_FINITE);
            write_ext(out, ext, z);
        }
        MoebiusPoint::Infinity => out.push(POINT_INFINITY),
    }
}

pub fn read_point(r: &mut Reader<'_>, ext: &ExtCtx) -> Result<MoebiusPoint> {
    match r.byte()? {
        POINT_FINITE => Ok(MoebiusPoint::Finite(read_ext(r, ext)?)),
        POINT_INFINITY => Ok(MoebiusPoint::Infinity),
        _ => Err(bad("bad point tag")),
    }
}

pub fn write_circle(out: &mut Vec<u8>, ext: &ExtCtx, c: &Circle) {
    write_elem(out, ext.base(), c.alpha());
    write_ext(out, ext, c.beta());
    write_elem(out, ext.base(), c.gamma());
}

/// Reads a circle and insists it is already in canonical form.
pub fn read_circle(r: &mut Reader<'_>, plane: &MoebiusPlane) -> Result<Circle> {
    let alpha = read_elem(r, plane.base())?;
    let beta = read_ext(r, plane.ext())?;
    let gamma = read_elem(r, plane.base())?;
    let c = plane.circle(alpha, beta, gamma).map_err(|_| bad("degenerate circle"))?;
    if (c.alpha(), c.beta(), c.gamma()) != (alpha, beta, gamma) {
        return Err(bad("circle not in canonical form"));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(width_for(1), 1);
        assert_eq!(width_for(255), 1);
        assert_eq!(width_for(256), 2);
        assert_eq!(width_for(65535), 2);
        assert_eq!(width_for(0), 1);
    }

    #[test]
    fn varint_is_leb128() {
        let mut out = Vec::new();
        write_varint(&mut out, 300);
        assert_eq!(out, [0xAC, 0x02]);
        assert_eq!(Reader::new(&out).varint().unwrap(), 300);
        assert!(Reader::new(&[0x80]).varint().is_err());
    }

    #[test]
    fn field_block_round_trip() {
        for (p, n) in [(2, 1), (2, 8), (3, 2), (257, 1), (2, 16)] {
            let ext = ExtCtx::new(FieldCtx::new(p, n, None).unwrap(), None).unwrap();
            let mut out = Vec::new();
            write_field_block(&mut out, &ext);
            let mut r = Reader::new(&out);
            assert_eq!(read_field_block(&mut r).unwrap(), ext);
            assert!(r.is_empty());
        }
    }

    #[test]
    fn gf256_field_block_bytes() {
        let ext = ExtCtx::new(FieldCtx::new(2, 8, None).unwrap(), None).unwrap();
        let mut out = Vec::new();
        write_field_block(&mut out, &ext);
        // magic, p, n, 9 residues, flag, three 1-byte elements
        assert_eq!(out.len(), 1 + 1 + 1 + 9 + 1 + 3);
        assert_eq!(&out[..3], &[0xF1, 2, 8]);
    }

    #[test]
    fn field_block_rejects_reducible() {
        let mut out = vec![FIELD_MAGIC, 2, 2, 1, 0, 1, 0];
        assert_eq!(read_field_block(&mut Reader::new(&out)), Err(Error::ReduciblePolynomial));
        out.truncate(4);
        assert!(matches!(read_field_block(&mut Reader::new(&out)), Err(Error::InvalidContainer(_))));
    }

    #[test]
    fn points_and_circles_round_trip() {
        let plane = MoebiusPlane::with_defaults(3, 2).unwrap();
        let mut out = Vec::new();
        let pts = [MoebiusPoint::Infinity, MoebiusPoint::Finite(plane.ext().omega())];
        for p in pts {
            write_point(&mut out, plane.ext(), p);
        }
        let circles = plane.circles().unwrap();
        for c in circles.iter().step_by(37) {
            write_circle(&mut out, plane.ext(), c);
        }
        let mut r = Reader::new(&out);
        for p in pts {
            assert_eq!(read_point(&mut r, plane.ext()).unwrap(), p);
        }
        for c in circles.iter().step_by(37) {
            assert_eq!(read_circle(&mut r, &plane).unwrap(), *c);
        }
        assert!(r.is_empty());
    }

    #[test]
    fn elements_out_of_range_rejected() {
        let f = FieldCtx::new(5, 1, None).unwrap();
        assert!(read_elem(&mut Reader::new(&[7]), &f).is_err());
        assert_eq!(read_elem(&mut Reader::new(&[4]), &f).unwrap().index(), 4);
    }
}
