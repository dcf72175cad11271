// SPDX-License-Identifier: Apache-2.0

//! C ABI over `mobius-core`.
//!
//! Handles are opaque pointers owned by the caller and released with the
//! matching `_free`. Every fallible call returns a `MobiusStatus`; on error
//! `mobius_last_error` gives a message for the calling thread. Output
//! buffers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mobius_core::cipher::{decrypt_stream, encrypt_stream, Container, KeySource, Keystream, SeededKeystream};
use mobius_core::plane::MoebiusPlane;
use mobius_core::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MobiusStatus {
    MobiusOk = 0,
    MobiusErrNullPointer = 1,
    /// Field parameters rejected (not prime, reducible, too large, q too small).
    MobiusErrBadParams = 2,
    MobiusErrKeyMismatch = 3,
    MobiusErrKeysourceExhausted = 4,
    MobiusErrInvalidContainer = 5,
    MobiusErrPanic = 6,
    MobiusErrOther = 7,
}

/// A Möbius plane over GF(p^n) with default polynomials.
pub struct MobiusPlane(MoebiusPlane);

/// An owned byte buffer produced by the library.
pub struct MobiusBuffer(Vec<u8>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MobiusStatus {
    match e {
        Error::NotPrime(_)
        | Error::ReduciblePolynomial
        | Error::DegreeMismatch { .. }
        | Error::TooLarge(_)
        | Error::InvalidElement(_)
        | Error::FieldTooSmall => MobiusStatus::MobiusErrBadParams,
        Error::KeyMismatch => MobiusStatus::MobiusErrKeyMismatch,
        Error::KeysourceExhausted | Error::CandidateStreamExhausted => MobiusStatus::MobiusErrKeysourceExhausted,
        Error::InvalidContainer(_) | Error::LengthMismatch | Error::MalformedTag => {
            MobiusStatus::MobiusErrInvalidContainer
        }
        _ => MobiusStatus::MobiusErrOther,
    }
}

fn guard(f: impl FnOnce() -> Result<(), MobiusStatus>) -> MobiusStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MobiusStatus::MobiusOk,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside mobius".into());
            MobiusStatus::MobiusErrPanic
        }
    }
}

fn core<T>(r: mobius_core::Result<T>) -> Result<T, MobiusStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null() -> MobiusStatus {
    set_error("null pointer argument".into());
    MobiusStatus::MobiusErrNullPointer
}

/// # Safety
/// `data` must be valid for `len` bytes unless `len` is 0.
unsafe fn bytes<'a>(data: *const u8, len: usize) -> Result<&'a [u8], MobiusStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(data, len))
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), MobiusStatus> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

/// Creates the plane over GF(p^n).
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mobius_plane_new(p: u64, n: u32, out: *mut *mut MobiusPlane) -> MobiusStatus {
    guard(|| {
        let plane = core(MoebiusPlane::with_defaults(p, n))?;
        put(out, MobiusPlane(plane))
    })
}

/// # Safety
/// `plane` must come from `mobius_plane_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mobius_plane_free(plane: *mut MobiusPlane) {
    if !plane.is_null() {
        drop(Box::from_raw(plane));
    }
}

/// Order q of the base field, or 0 for a null handle.
///
/// # Safety
/// `plane` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mobius_plane_q(plane: *const MobiusPlane) -> u64 {
    plane.as_ref().map_or(0, |p| p.0.q())
}

/// Encrypts `len` bytes into a MOBC container using the seeded point stream.
///
/// # Safety
/// `plane` must be live, `data` valid for `len` bytes, `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mobius_encrypt_seeded(
    plane: *const MobiusPlane,
    data: *const u8,
    len: usize,
    seed: u64,
    out: *mut *mut MobiusBuffer,
) -> MobiusStatus {
    guard(|| {
        let plane = &plane.as_ref().ok_or_else(null)?.0;
        let data = bytes(data, len)?;
        let mut it = SeededKeystream::new(plane.ext(), seed);
        let (c, _) = core(encrypt_stream(plane, data, KeySource::Points(&mut it)))?;
        put(out, MobiusBuffer(c.to_bytes()))
    })
}

/// Decrypts a stream-mode container; field parameters come from its header.
///
/// # Safety
/// `container` valid for `len` bytes, `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mobius_decrypt_seeded(
    container: *const u8,
    len: usize,
    seed: u64,
    out: *mut *mut MobiusBuffer,
) -> MobiusStatus {
    guard(|| {
        let c = core(Container::from_bytes(bytes(container, len)?))?;
        let mut it = SeededKeystream::new(&c.ext, seed);
        let pt = core(decrypt_stream(&c, KeySource::Points(&mut it)))?;
        put(out, MobiusBuffer(pt))
    })
}

/// Writes a MOBS keystream file of `count` seeded points.
///
/// # Safety
/// `plane` must be live and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mobius_keystream_generate(
    plane: *const MobiusPlane,
    seed: u64,
    count: usize,
    out: *mut *mut MobiusBuffer,
) -> MobiusStatus {
    guard(|| {
        let plane = &plane.as_ref().ok_or_else(null)?.0;
        core(mobius_core::cipher::payload_bits_per_point(plane))?;
        put(out, MobiusBuffer(Keystream::from_seed(plane.ext(), seed, count).to_bytes()))
    })
}

/// Encrypts with a pre-shared MOBS keystream; the field comes from the keystream.
///
/// # Safety
/// Both byte ranges must be valid; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mobius_encrypt_keystream(
    keystream: *const u8,
    keystream_len: usize,
    data: *const u8,
    len: usize,
    out: *mut *mut MobiusBuffer,
) -> MobiusStatus {
    guard(|| {
        let ks = core(Keystream::from_bytes(bytes(keystream, keystream_len)?))?;
        let plane = MoebiusPlane::new(ks.ext.clone());
        let mut it = ks.points.into_iter();
        let (c, _) = core(encrypt_stream(&plane, bytes(data, len)?, KeySource::Points(&mut it)))?;
        put(out, MobiusBuffer(c.to_bytes()))
    })
}

/// # Safety
/// Both byte ranges must be valid; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mobius_decrypt_keystream(
    keystream: *const u8,
    keystream_len: usize,
    container: *const u8,
    len: usize,
    out: *mut *mut MobiusBuffer,
) -> MobiusStatus {
    guard(|| {
        let ks = core(Keystream::from_bytes(bytes(keystream, keystream_len)?))?;
        let c = core(Container::from_bytes(bytes(container, len)?))?;
        if ks.ext != c.ext {
            return core(Err(Error::KeyMismatch));
        }
        let mut it = ks.points.into_iter();
        let pt = core(decrypt_stream(&c, KeySource::Points(&mut it)))?;
        put(out, MobiusBuffer(pt))
    })
}

/// # Safety
/// `buf` must be null or a live buffer.
#[no_mangle]
pub unsafe extern "C" fn mobius_buffer_data(buf: *const MobiusBuffer) -> *const u8 {
    buf.as_ref().map_or(ptr::null(), |b| b.0.as_ptr())
}

/// # Safety
/// `buf` must be null or a live buffer.
#[no_mangle]
pub unsafe extern "C" fn mobius_buffer_len(buf: *const MobiusBuffer) -> usize {
    buf.as_ref().map_or(0, |b| b.0.len())
}

/// # Safety
/// `buf` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mobius_buffer_free(buf: *mut MobiusBuffer) {
    if !buf.is_null() {
        drop(Box::from_raw(buf));
    }
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread; empty if none.
#[no_mangle]
pub extern "C" fn mobius_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code; unknown codes give "unknown".
#[no_mangle]
pub extern "C" fn mobius_status_str(status: i32) -> *const c_char {
    use MobiusStatus::*;
    let known = [MobiusOk, MobiusErrNullPointer, MobiusErrBadParams, MobiusErrKeyMismatch, MobiusErrKeysourceExhausted, MobiusErrInvalidContainer, MobiusErrPanic, MobiusErrOther];
    let s: &'static [u8] = match known.into_iter().find(|&k| k as i32 == status) {
        Some(MobiusOk) => b"ok\0",
        Some(MobiusErrNullPointer) => b"null pointer\0",
        Some(MobiusErrBadParams) => b"bad parameters\0",
        Some(MobiusErrKeyMismatch) => b"key mismatch\0",
        Some(MobiusErrKeysourceExhausted) => b"key source exhausted\0",
        Some(MobiusErrInvalidContainer) => b"invalid container\0",
        Some(MobiusErrPanic) => b"internal panic\0",
        Some(MobiusErrOther) => b"error\0",
        None => b"unknown\0",
    };
    s.as_ptr().cast()
}
