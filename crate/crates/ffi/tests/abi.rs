use std::ffi::CStr;
use std::ptr;

use mobius_ffi::*;

unsafe fn take(buf: *mut MobiusBuffer) -> Vec<u8> {
    let v = std::slice::from_raw_parts(mobius_buffer_data(buf), mobius_buffer_len(buf)).to_vec();
    mobius_buffer_free(buf);
    v
}

unsafe fn plane(p: u64, n: u32) -> *mut MobiusPlane {
    let mut pl = ptr::null_mut();
    assert_eq!(mobius_plane_new(p, n, &mut pl), MobiusStatus::MobiusOk);
    pl
}

#[test]
fn seeded_round_trip_matches_core() {
    unsafe {
        let pl = plane(2, 8);
        assert_eq!(mobius_plane_q(pl), 256);
        let msg = b"opaque handles all the way down";
        let mut ct = ptr::null_mut();
        assert_eq!(mobius_encrypt_seeded(pl, msg.as_ptr(), msg.len(), 5, &mut ct), MobiusStatus::MobiusOk);
        let ct = take(ct);

        let core_plane = mobius_core::plane::MoebiusPlane::with_defaults(2, 8).unwrap();
        let mut it = mobius_core::cipher::SeededKeystream::new(core_plane.ext(), 5);
        let (c, _) =
            mobius_core::cipher::encrypt_stream(&core_plane, msg, mobius_core::cipher::KeySource::Points(&mut it))
                .unwrap();
        assert_eq!(ct, c.to_bytes());

        let mut pt = ptr::null_mut();
        assert_eq!(mobius_decrypt_seeded(ct.as_ptr(), ct.len(), 5, &mut pt), MobiusStatus::MobiusOk);
        assert_eq!(take(pt), msg);
        mobius_plane_free(pl);
    }
}

#[test]
fn keystream_round_trip() {
    unsafe {
        let pl = plane(2, 4);
        let mut ks = ptr::null_mut();
        assert_eq!(mobius_keystream_generate(pl, 1, 2000, &mut ks), MobiusStatus::MobiusOk);
        let ks = take(ks);
        let msg: Vec<u8> = (0..200u32).map(|i| (i * 37) as u8).collect();
        let mut ct = ptr::null_mut();
        assert_eq!(
            mobius_encrypt_keystream(ks.as_ptr(), ks.len(), msg.as_ptr(), msg.len(), &mut ct),
            MobiusStatus::MobiusOk
        );
        let ct = take(ct);
        let mut pt = ptr::null_mut();
        assert_eq!(
            mobius_decrypt_keystream(ks.as_ptr(), ks.len(), ct.as_ptr(), ct.len(), &mut pt),
            MobiusStatus::MobiusOk
        );
        assert_eq!(take(pt), msg);

        // Too short a keystream.
        let short = &ks[..ks.len() - 3900];
        let mut out = ptr::null_mut();
        assert_eq!(
            mobius_encrypt_keystream(short.as_ptr(), short.len(), msg.as_ptr(), msg.len(), &mut out),
            MobiusStatus::MobiusErrKeysourceExhausted
        );
        assert!(out.is_null());
        mobius_plane_free(pl);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut pl = ptr::null_mut();
        assert_eq!(mobius_plane_new(4, 1, &mut pl), MobiusStatus::MobiusErrBadParams);
        assert!(pl.is_null());
        let msg = CStr::from_ptr(mobius_last_error()).to_str().unwrap();
        assert!(msg.contains("not prime"), "{msg}");
        assert_eq!(mobius_plane_new(2, 8, ptr::null_mut()), MobiusStatus::MobiusErrNullPointer);

        let small = plane(2, 1);
        let mut out = ptr::null_mut();
        assert_eq!(mobius_encrypt_seeded(small, b"x".as_ptr(), 1, 0, &mut out), MobiusStatus::MobiusErrBadParams);
        assert_eq!(mobius_encrypt_seeded(ptr::null(), b"x".as_ptr(), 1, 0, &mut out), MobiusStatus::MobiusErrNullPointer);
        mobius_plane_free(small);

        let pl = plane(2, 8);
        let mut ct = ptr::null_mut();
        assert_eq!(mobius_encrypt_seeded(pl, b"abc".as_ptr(), 3, 9, &mut ct), MobiusStatus::MobiusOk);
        let ct = take(ct);
        assert_eq!(
            mobius_decrypt_seeded(ct.as_ptr(), ct.len() - 1, 9, &mut out),
            MobiusStatus::MobiusErrInvalidContainer
        );
        let mut ks = ptr::null_mut();
        assert_eq!(mobius_keystream_generate(pl, 1, 10, &mut ks), MobiusStatus::MobiusOk);
        let ks = take(ks);
        // Keystream over GF(2^8) against a container over GF(2^8) is fine; over GF(2^4) it is not.
        let p4 = plane(2, 4);
        let mut ks4 = ptr::null_mut();
        assert_eq!(mobius_keystream_generate(p4, 1, 10, &mut ks4), MobiusStatus::MobiusOk);
        let ks4 = take(ks4);
        assert_eq!(
            mobius_decrypt_keystream(ks4.as_ptr(), ks4.len(), ct.as_ptr(), ct.len(), &mut out),
            MobiusStatus::MobiusErrKeyMismatch
        );
        assert!(ks.len() > ks4.len());
        mobius_plane_free(p4);
        mobius_plane_free(pl);
        mobius_plane_free(ptr::null_mut());
        mobius_buffer_free(ptr::null_mut());
        assert_eq!(mobius_buffer_len(ptr::null()), 0);
    }
}

#[test]
fn empty_message() {
    unsafe {
        let pl = plane(2, 8);
        let mut ct = ptr::null_mut();
        assert_eq!(mobius_encrypt_seeded(pl, ptr::null(), 0, 1, &mut ct), MobiusStatus::MobiusOk);
        let ct = take(ct);
        let mut pt = ptr::null_mut();
        assert_eq!(mobius_decrypt_seeded(ct.as_ptr(), ct.len(), 1, &mut pt), MobiusStatus::MobiusOk);
        assert!(take(pt).is_empty());
        mobius_plane_free(pl);
    }
}

#[test]
fn status_strings() {
    let s = |c| unsafe { CStr::from_ptr(mobius_status_str(c)).to_str().unwrap().to_owned() };
    assert_eq!(s(0), "ok");
    assert_eq!(s(MobiusStatus::MobiusErrInvalidContainer as i32), "invalid container");
    assert_eq!(s(99), "unknown");
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/mobius.h")).unwrap();
    for f in [
        "mobius_plane_new",
        "mobius_plane_free",
        "mobius_plane_q",
        "mobius_encrypt_seeded",
        "mobius_decrypt_seeded",
        "mobius_keystream_generate",
        "mobius_encrypt_keystream",
        "mobius_decrypt_keystream",
        "mobius_buffer_data",
        "mobius_buffer_len",
        "mobius_buffer_free",
        "mobius_last_error",
        "mobius_status_str",
        "typedef struct MobiusPlane MobiusPlane",
        "MOBIUS_ERR_KEY_MISMATCH = 3",
    ] {
        assert!(h.contains(f), "{f} missing from header");
    }
}
