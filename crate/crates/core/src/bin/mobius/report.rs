// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use mobius_core::analysis::{
    aposteriori_tables, cipher_completeness_matrix, perfectness_deviation, ProbabilityReport, DEVIATION_BOUND,
};
use mobius_core::auth::{auth_completeness_matrix, forgery_stats, AuthContext};
use mobius_core::field::FieldCtx;
use mobius_core::plane::{plane_audit, MoebiusPlane};

use crate::crypto::ext_from_args;
use crate::{write, CliError, CliResult, FieldArgs, Format};

pub struct Sink {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub dir: Option<PathBuf>,
}

impl Sink {
    fn ext(&self) -> &'static str {
        match self.format {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "txt",
        }
    }

    // `--out`, else `<report dir>/<name>.<ext>`, else stdout.
    fn emit(&self, name: &str, body: &str) -> CliResult<()> {
        let path = match (&self.out, &self.dir) {
            (Some(p), _) => p.clone(),
            (None, Some(d)) => {
                std::fs::create_dir_all(d).map_err(|source| CliError::Io { path: d.clone(), source })?;
                d.join(format!("{name}.{}", self.ext()))
            }
            (None, None) => {
                print!("{body}");
                if !body.ends_with('\n') {
                    println!();
                }
                return Ok(());
            }
        };
        write(&path, body.as_bytes())
    }
}

fn check(ok: bool) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::ChecksFailed)
    }
}

/// `q = p^n` with p prime.
fn split_prime_power(q: u64) -> CliResult<(u64, u32)> {
    let bad = || CliError::BadParams(format!("{q} is not a prime power"));
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(bad)?;
    let (mut r, mut n) = (q, 0);
    while r % p == 0 {
        r /= p;
        n += 1;
    }
    if r == 1 {
        Ok((p, n))
    } else {
        Err(bad())
    }
}

fn plane_for(q: u64) -> CliResult<MoebiusPlane> {
    let (p, n) = split_prime_power(q)?;
    Ok(MoebiusPlane::with_defaults(p, n)?)
}

fn positions(spec: &str) -> CliResult<Vec<usize>> {
    match spec {
        "all" => Ok(vec![1, 2, 3]),
        "1" | "2" | "3" => Ok(vec![spec.parse().expect("digit")]),
        _ => Err(CliError::BadParams(format!("--position must be 1, 2, 3 or all, got {spec}"))),
    }
}

fn select(r: &ProbabilityReport, pos: &[usize]) -> ProbabilityReport {
    let mut r = r.clone();
    r.rows.retain(|x| pos.contains(&x.position));
    r
}

pub fn analyze(
    field: &FieldArgs,
    q: Option<u64>,
    position: &str,
    completeness: bool,
    deviation: bool,
    forgery: bool,
    sink: &Sink,
) -> CliResult<()> {
    if completeness {
        return completeness_report(field.n.unwrap_or(3), sink);
    }
    let plane = match q {
        Some(q) => plane_for(q)?,
        None if field.given() => MoebiusPlane::new(ext_from_args(field)?),
        None => return Err(CliError::BadParams("analyze needs --q, field flags or --completeness".into())),
    };
    let q = plane.q();
    if forgery {
        let f: FieldCtx = plane.base().clone();
        let s = forgery_stats(&AuthContext::new(f))?;
        let body = match sink.format {
            Format::Json => s.to_json(),
            _ => format!(
                "q,n0,impersonation,substitution,consistent_keys,sqrt_n0,perfect\n{},{},{},{},{},{},{}\n",
                s.q, s.n0, s.impersonation, s.substitution, s.consistent_keys, s.sqrt_n0, s.perfect
            ),
        };
        sink.emit(&format!("forgery-q{q}"), &body)?;
        return check(s.perfect);
    }
    let report = aposteriori_tables(&plane)?;
    if deviation {
        let d = perfectness_deviation(&report);
        let body = match sink.format {
            Format::Json => d.to_json(),
            _ => d.to_csv(),
        };
        sink.emit(&format!("deviation-q{q}"), &body)?;
        return check(d.scaled() < DEVIATION_BOUND);
    }
    let r = select(&report, &positions(position)?);
    let body = match sink.format {
        Format::Json => r.to_json(),
        Format::Csv => r.to_csv(),
        Format::Table => r.to_table(),
    };
    sink.emit(&format!("tables-q{q}"), &body)?;
    check(r.all_match())
}

fn completeness_report(n: u32, sink: &Sink) -> CliResult<()> {
    let cipher = cipher_completeness_matrix(n)?;
    let auth = auth_completeness_matrix(n)?;
    let body = match sink.format {
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "n": n,
            "cipher": {"all_true": cipher.all_true(), "matrix": cipher.entries, "witnesses": cipher.witnesses},
            "auth": {"all_true": auth.all_true(), "matrix": auth.entries, "witnesses": auth.witnesses},
        }))
        .expect("json value serializes"),
        Format::Csv => format!("# cipher\n{}# auth\n{}", cipher.witness_csv(), auth.witness_csv()),
        Format::Table => format!("cipher (2n x 2n)\n{}auth (n x n)\n{}", cipher.grid(), auth.grid()),
    };
    sink.emit(&format!("completeness-n{n}"), &body)?;
    check(cipher.all_true() && auth.all_true())
}

pub fn audit(q: u64, sink: &Sink) -> CliResult<()> {
    let plane = plane_for(q)?;
    let a = plane_audit(&plane)?;
    let body = match sink.format {
        Format::Json => a.to_json(),
        _ => a.to_csv(),
    };
    sink.emit(&format!("audit-q{q}"), &body)?;
    check(a.matches_closed_forms())
}

