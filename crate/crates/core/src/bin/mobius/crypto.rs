// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use mobius_core::cipher::{
    decrypt_stream, encrypt_stream, Container, KeyFile, KeySource, Keystream, Mode, SeededKeystream,
};
use mobius_core::field::{ExtCtx, FieldCtx};
use mobius_core::plane::MoebiusPlane;
use mobius_core::Error;

use crate::{read, write, CliError, CliResult, FieldArgs, ModeArg};

pub fn ext_from_args(a: &FieldArgs) -> CliResult<ExtCtx> {
    let p = a.p.unwrap_or(2);
    let n = a.n.unwrap_or(8);
    let poly = a.poly.clone().map(|mut v| {
        if v.len() == n as usize {
            v.push(1);
        }
        v
    });
    let f = FieldCtx::new(p, n, poly.as_deref())?;
    let quad = match a.ext_poly.as_deref() {
        None => None,
        Some([b0, b1]) | Some([b0, b1, 1]) => Some((f.elem(*b0)?, f.elem(*b1)?)),
        Some(_) => return Err(CliError::BadParams("--ext-poly takes b0,b1".into())),
    };
    Ok(ExtCtx::new(f, quad)?)
}

// Key material must agree with any field flags given alongside it.
fn check_field(a: &FieldArgs, ext: &ExtCtx) -> CliResult<()> {
    if a.given() && ext_from_args(a)? != *ext {
        return Err(Error::KeyMismatch.into());
    }
    Ok(())
}

fn seed_or_entropy(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

enum KeyMaterial {
    Stream(Keystream),
    Explicit(KeyFile),
}

fn load_key(path: &PathBuf) -> CliResult<KeyMaterial> {
    let bytes = read(path)?;
    match bytes.get(..4) {
        Some(b"MOBS") => Ok(KeyMaterial::Stream(Keystream::from_bytes(&bytes)?)),
        Some(b"MOBK") => Ok(KeyMaterial::Explicit(KeyFile::from_bytes(&bytes)?)),
        _ => Err(Error::KeyMismatch.into()),
    }
}

pub fn keygen(
    field: &FieldArgs,
    mode: ModeArg,
    seed: Option<u64>,
    count: usize,
    input: Option<&PathBuf>,
    out: &PathBuf,
) -> CliResult<()> {
    let ext = ext_from_args(field)?;
    let plane = MoebiusPlane::new(ext.clone());
    mobius_core::cipher::payload_bits_per_point(&plane)?;
    let seed = seed_or_entropy(seed);
    let (bytes, points) = match mode {
        ModeArg::Stream => {
            let ks = Keystream::from_seed(&ext, seed, count);
            (ks.to_bytes(), ks.points.len())
        }
        ModeArg::Explicit => {
            let path = input.ok_or_else(|| CliError::BadParams("explicit keys are per message: pass --in".into()))?;
            let data = read(path)?;
            let kf = KeyFile::derive(&plane, &data, &mut SeededKeystream::new(&ext, seed))?;
            (kf.to_bytes(), 3 * kf.keys.len())
        }
    };
    write(out, &bytes)?;
    eprintln!("wrote {} bytes ({} key {})", bytes.len(), points, if mode == ModeArg::Stream { "points" } else { "circles" });
    Ok(())
}

pub fn encrypt(
    field: &FieldArgs,
    mode: ModeArg,
    seed: Option<u64>,
    key: Option<&PathBuf>,
    input: &PathBuf,
    out: &PathBuf,
) -> CliResult<()> {
    let data = read(input)?;
    let material = key.map(load_key).transpose()?;
    let (container, stats) = match (mode, material) {
        (ModeArg::Stream, Some(KeyMaterial::Stream(ks))) => {
            check_field(field, &ks.ext)?;
            let plane = MoebiusPlane::new(ks.ext.clone());
            let mut it = ks.points.into_iter();
            encrypt_stream(&plane, &data, KeySource::Points(&mut it))?
        }
        (ModeArg::Stream, None) => {
            let seed = seed.ok_or_else(|| CliError::BadParams("stream mode needs --seed or --key".into()))?;
            let ext = ext_from_args(field)?;
            let plane = MoebiusPlane::new(ext.clone());
            let mut it = SeededKeystream::new(&ext, seed);
            encrypt_stream(&plane, &data, KeySource::Points(&mut it))?
        }
        (ModeArg::Explicit, Some(KeyMaterial::Explicit(kf))) => {
            check_field(field, &kf.ext)?;
            let plane = MoebiusPlane::new(kf.ext.clone());
            encrypt_stream(&plane, &data, KeySource::Keys(&kf.keys))?
        }
        (ModeArg::Explicit, None) => return Err(CliError::BadParams("explicit mode needs --key".into())),
        _ => return Err(Error::KeyMismatch.into()),
    };
    let bytes = container.to_bytes();
    write(out, &bytes)?;
    eprintln!(
        "{} triples ({} fallback), {} message points, {} key points, {} skipped candidates, {} bytes",
        stats.triples,
        stats.fallback_triples,
        stats.message_points,
        stats.key_points,
        stats.skipped_candidates,
        bytes.len()
    );
    Ok(())
}

pub fn decrypt(seed: Option<u64>, key: Option<&PathBuf>, input: &PathBuf, out: &PathBuf) -> CliResult<()> {
    let container = Container::from_bytes(&read(input)?)?;
    let material = key.map(load_key).transpose()?;
    let data = match (container.mode, material) {
        (Mode::Stream, Some(KeyMaterial::Stream(ks))) => {
            if ks.ext != container.ext {
                return Err(Error::KeyMismatch.into());
            }
            let mut it = ks.points.into_iter();
            decrypt_stream(&container, KeySource::Points(&mut it))?
        }
        (Mode::Stream, None) => {
            let seed = seed.ok_or_else(|| CliError::BadParams("stream container needs --seed or --key".into()))?;
            let mut it = SeededKeystream::new(&container.ext, seed);
            decrypt_stream(&container, KeySource::Points(&mut it))?
        }
        (Mode::Explicit, Some(KeyMaterial::Explicit(kf))) => {
            if kf.ext != container.ext {
                return Err(Error::KeyMismatch.into());
            }
            decrypt_stream(&container, KeySource::Keys(&kf.keys))?
        }
        (Mode::Explicit, None) => return Err(CliError::BadParams("explicit container needs --key".into())),
        _ => return Err(Error::KeyMismatch.into()),
    };
    write(out, &data)
}
