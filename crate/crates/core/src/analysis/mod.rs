// SPDX-License-Identifier: Apache-2.0

//! Exact counting of what a ciphertext point reveals about its message
//! point under line keys.
//!
//! Everything is done on the circle `N(z) = 1`; every circle avoiding
//! infinity is its image under some `z -> az + b`, which maps lines to
//! lines, so the counts do not depend on the choice.
//!
//! Key sets follow the sequential reading: the keys for position i are the
//! finite points off M whose line through `m_i` meets M only in points not
//! already used by earlier positions (`m_j` and `c_j`, j < i). They are
//! counted by testing that condition directly, never by formula.

mod avalanche;

pub use avalanche::{
    cipher_completeness_matrix, completeness_conditions_solvable, verify_avalanche_witness, AvalancheMatrix,
    AvalancheWitness,
};

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{ExtElem, FieldElem};
use crate::plane::{MoebiusPlane, MoebiusPoint};

pub type Q = Ratio<u64>;

/// Which message triples were enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Every ordered triple on M.
    AllTriples,
    /// The first three points of M only; all ciphertext histories.
    OneTriple,
}

/// One case of the table for one position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseRow {
    pub position: usize,
    /// `eq[j]` is whether `m_{j+1} = c_{j+1}` for j <= position - 1.
    pub eq: Vec<bool>,
    pub a_priori: Q,
    pub a_posteriori: Q,
    pub counted_numerator: u64,
    pub counted_denominator: u64,
    pub expected: Q,
    pub expected_denominator: u64,
    /// (message, history, ciphertext) combinations falling in this case.
    pub instances: u64,
    /// Every instance gave the same ratio.
    pub uniform: bool,
    pub matches: bool,
}

impl CaseRow {
    pub fn label(&self) -> String {
        self.eq
            .iter()
            .enumerate()
            .map(|(j, &e)| format!("m{0}{1}c{0}", j + 1, if e { "=" } else { "!=" }))
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityReport {
    pub q: u64,
    pub scope: Scope,
    /// Number of choices for m1, m2, m3 on M, by enumeration.
    pub message_choices: [u64; 3],
    pub rows: Vec<CaseRow>,
}

#[derive(Serialize)]
struct RowOut<'a> {
    position: usize,
    case: String,
    mu: String,
    nu: String,
    mu_approx: f64,
    nu_approx: f64,
    counted_numerator: u64,
    counted_denominator: u64,
    expected: String,
    instances: u64,
    #[serde(rename = "match")]
    matches: bool,
    #[serde(skip)]
    _row: &'a CaseRow,
}

fn approx(r: Q) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl ProbabilityReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }

    pub fn position(&self, p: usize) -> impl Iterator<Item = &CaseRow> {
        self.rows.iter().filter(move |r| r.position == p)
    }

    fn out(&self) -> Vec<RowOut<'_>> {
        self.rows
            .iter()
            .map(|r| RowOut {
                position: r.position,
                case: r.label(),
                mu: r.a_priori.to_string(),
                nu: r.a_posteriori.to_string(),
                mu_approx: approx(r.a_priori),
                nu_approx: approx(r.a_posteriori),
                counted_numerator: r.counted_numerator,
                counted_denominator: r.counted_denominator,
                expected: r.expected.to_string(),
                instances: r.instances,
                matches: r.matches,
                _row: r,
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in self.out() {
            w.serialize(row).expect("plain struct serializes");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::json!({
            "q": self.q,
            "scope": self.scope,
            "message_choices": self.message_choices,
            "rows": self.out(),
        });
        serde_json::to_string_pretty(&v).expect("json value serializes")
    }

    /// Fixed-width table for terminals.
    pub fn to_table(&self) -> String {
        let mut s = format!("q = {}\n{:<3} {:<22} {:>10} {:>12} {:>6}\n", self.q, "pos", "case", "mu", "nu", "match");
        for r in &self.rows {
            s += &format!(
                "{:<3} {:<22} {:>10} {:>12} {:>6}\n",
                r.position,
                r.label(),
                r.a_priori.to_string(),
                r.a_posteriori.to_string(),
                r.matches
            );
        }
        s
    }
}

/// Closed-form table entry, `(value, key-set size)`.
pub fn expected_formula(q: u64, eq: &[bool]) -> (Q, u64) {
    let ne = |e: &bool| !*e as u64;
    let num = if *eq.last().expect("position >= 1") { q - 1 } else { q - 2 };
    let den = match eq.len() {
        1 => q * q - q - 1,
        2 if eq[0] => q * q - 2 * q + 1,
        2 => q * q - 3 * q + 3,
        3 => {
            let d = ne(&eq[0]) + ne(&eq[1]);
            q * q + 3 + 2 * d - (3 + d) * q
        }
        _ => panic!("positions are 1..=3"),
    };
    (Q::new(num, den), den)
}

/// `1/(q+1)`, `1/q`, `1/(q-1)`.
pub fn uniform_a_priori(q: u64, position: usize) -> Q {
    Q::new(1, q + 2 - position as u64)
}

struct Geometry {
    on_m: Vec<MoebiusPoint>,
    /// `partner[a][k]`: second intersection of M with the line through the
    /// a-th point of M and the k-th key point, as an index on M.
    partner: Vec<Vec<usize>>,
    keys: usize,
}

fn unit_circle_geometry(plane: &MoebiusPlane) -> Result<Geometry> {
    let f = plane.base();
    let m = plane.circle(FieldElem::ONE, ExtElem::ZERO, f.neg(FieldElem::ONE))?;
    let on_m = plane.points_of(&m)?;
    let keys: Vec<MoebiusPoint> =
        plane.ext().elements()?.map(MoebiusPoint::Finite).filter(|&p| !plane.contains(&m, p)).collect();
    let mut partner = vec![vec![0usize; keys.len()]; on_m.len()];
    for (a, &pa) in on_m.iter().enumerate() {
        for (k, &pk) in keys.iter().enumerate() {
            let line = plane.line_through(pa, pk)?;
            let meet = plane.intersect(&m, &line)?;
            let c = crate::cipher::partner(&meet, pa);
            partner[a][k] = on_m.iter().position(|&p| p == c).expect("intersection lies on M");
        }
    }
    Ok(Geometry { on_m, partner, keys: keys.len() })
}

// (a-posteriori, counted numerator, denominator, instances, uniform)
type Cell = (Q, u64, u64, u64, bool);

#[derive(Default)]
struct Tally {
    rows: std::collections::BTreeMap<(usize, Vec<bool>), Cell>,
}

impl Tally {
    fn add(&mut self, eq: Vec<bool>, nu: Q, num: u64, den: u64) {
        let pos = eq.len();
        let e = self.rows.entry((pos, eq)).or_insert((nu, num, den, 0, true));
        e.3 += 1;
        if e.0 != nu || e.2 != den {
            e.4 = false;
        }
    }
}

/// Histogram of ciphertext positions over the admissible keys for message
/// point `a`, given the points `used` by earlier positions.
fn histogram(g: &Geometry, a: usize, used: &[usize]) -> (Vec<u64>, u64) {
    let mut h = vec![0u64; g.on_m.len()];
    let mut total = 0;
    for k in 0..g.keys {
        let c = g.partner[a][k];
        if used.contains(&a) || used.contains(&c) {
            continue;
        }
        h[c] += 1;
        total += 1;
    }
    (h, total)
}

/// Exhaustive a-priori / a-posteriori table for all three positions.
///
/// For q <= 8 every ordered message triple on M is enumerated; above that
/// only the first triple, which by symmetry gives the same counts.
pub fn aposteriori_tables(q_plane: &MoebiusPlane) -> Result<ProbabilityReport> {
    let q = q_plane.q();
    if q > 64 {
        return Err(Error::TooLarge(format!("probability tables need q <= 64, got {q}")));
    }
    if q < 3 {
        return Err(Error::TooLarge(format!("probability tables need q >= 3, got {q}")));
    }
    let g = unit_circle_geometry(q_plane)?;
    let n = g.on_m.len();
    let scope = if q <= 8 { Scope::AllTriples } else { Scope::OneTriple };
    let triples: Vec<[usize; 3]> = match scope {
        Scope::OneTriple => vec![[0, 1, 2]],
        Scope::AllTriples => (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| [a, b, c])))
            .filter(|[a, b, c]| a != b && b != c && a != c)
            .collect(),
    };
    let message_choices = [n as u64, n as u64 - 1, n as u64 - 2];
    let mut tally = Tally::default();

    // Position 1 depends on m1 only, position 2 on (m1, c1, m2).
    let mut seen1 = std::collections::BTreeSet::new();
    let mut seen2 = std::collections::BTreeSet::new();
    for &[m1, m2, m3] in &triples {
        let (h1, d1) = histogram(&g, m1, &[]);
        for c1 in (0..n).filter(|&c| h1[c] > 0) {
            if seen1.insert((m1, c1)) {
                tally.add(vec![m1 == c1], Q::new(h1[c1], d1), h1[c1], d1);
            }
            // c1 must leave m2 and m3 free.
            if c1 == m2 || c1 == m3 {
                continue;
            }
            let (h2, d2) = histogram(&g, m2, &[m1, c1]);
            for c2 in (0..n).filter(|&c| h2[c] > 0) {
                if seen2.insert((m1, c1, m2, c2)) {
                    tally.add(vec![m1 == c1, m2 == c2], Q::new(h2[c2], d2), h2[c2], d2);
                }
                if c2 == m3 {
                    continue;
                }
                let (h3, d3) = histogram(&g, m3, &[m1, c1, m2, c2]);
                for c3 in (0..n).filter(|&c| h3[c] > 0) {
                    tally.add(vec![m1 == c1, m2 == c2, m3 == c3], Q::new(h3[c3], d3), h3[c3], d3);
                }
            }
        }
    }

    let rows = tally
        .rows
        .into_iter()
        .map(|((position, eq), (nu, num, den, instances, uniform))| {
            let (expected, expected_denominator) = expected_formula(q, &eq);
            let a_priori = Q::new(1, message_choices[position - 1]);
            let matches = uniform
                && nu == expected
                && den == expected_denominator
                && a_priori == uniform_a_priori(q, position);
            CaseRow {
                position,
                eq,
                a_priori,
                a_posteriori: nu,
                counted_numerator: num,
                counted_denominator: den,
                expected,
                expected_denominator,
                instances,
                uniform,
                matches,
            }
        })
        .collect();
    Ok(ProbabilityReport { q, scope, message_choices, rows })
}

/// `|mu - nu|` per row and the maximum over all rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviationReport {
    pub q: u64,
    pub rows: Vec<(usize, String, Q)>,
    pub max: Q,
}

impl DeviationReport {
    /// `q^2 * max`.
    pub fn scaled(&self) -> Q {
        self.max * Q::from_integer(self.q * self.q)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("q,position,case,deviation\n");
        for (p, label, d) in &self.rows {
            s += &format!("{},{},{},{}\n", self.q, p, label, d);
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|(p, label, d)| serde_json::json!({"position": p, "case": label, "deviation": d.to_string()}))
            .collect();
        let v = serde_json::json!({
            "q": self.q,
            "max": self.max.to_string(),
            "q2_max": self.scaled().to_string(),
            "bound": DEVIATION_BOUND.to_string(),
            "rows": rows,
        });
        serde_json::to_string_pretty(&v).expect("json value serializes")
    }
}

fn abs_diff(a: Q, b: Q) -> Q {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

pub fn perfectness_deviation(report: &ProbabilityReport) -> DeviationReport {
    let rows: Vec<_> =
        report.rows.iter().map(|r| (r.position, r.label(), abs_diff(r.a_priori, r.a_posteriori))).collect();
    let max = rows.iter().map(|r| r.2).max().unwrap_or_else(|| Q::from_integer(0));
    DeviationReport { q: report.q, rows, max }
}

/// Frozen from the first sweep over q in {5, 7, 8, 16}: the largest
/// `q^2 * max|mu - nu|` seen was 225/28 (about 8.04, at q = 5).
pub const DEVIATION_BOUND: Q = Q::new_raw(17, 2);
