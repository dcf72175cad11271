// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use super::{MoebiusPlane, MoebiusPoint};
use crate::error::{Error, Result};

/// Incidence counts of a finite Möbius plane, gathered by enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneAudit {
    pub q: u64,
    pub point_count: u64,
    pub circle_count: u64,
    pub points_per_circle: u64,
    pub circles_through_point: u64,
    pub circles_through_pair: u64,
    /// Circles touching a circle C at one of its points, C included.
    pub tangents_at_point: u64,
    /// Whether every per-circle / per-point count was constant.
    #[serde(skip)]
    pub uniform: bool,
}

impl PlaneAudit {
    /// Closed-form values for a plane of order q.
    pub fn expected(q: u64) -> Self {
        PlaneAudit {
            q,
            point_count: q * q + 1,
            circle_count: q * (q * q + 1),
            points_per_circle: q + 1,
            circles_through_point: q * q + q,
            circles_through_pair: q + 1,
            tangents_at_point: q,
            uniform: true,
        }
    }

    pub fn matches_closed_forms(&self) -> bool {
        *self == Self::expected(self.q)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(self).expect("plain struct serializes");
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }
}

fn uniform_value(values: impl IntoIterator<Item = u64>) -> (u64, bool) {
    let mut it = values.into_iter();
    let first = it.next().unwrap_or(0);
    let same = it.all(|v| v == first);
    (first, same)
}

/// Enumerates every point and circle (q <= 16) and tallies the incidences.
pub fn plane_audit(plane: &MoebiusPlane) -> Result<PlaneAudit> {
    let q = plane.q();
    if q > 16 {
        return Err(Error::TooLarge(format!("plane audit needs q <= 16, got {q}")));
    }
    let points = plane.points()?;
    let nu = points.len();
    let words = nu.div_ceil(64);
    let circles = plane.circles()?;

    let mut members: Vec<Vec<usize>> = Vec::with_capacity(circles.len());
    let mut bits: Vec<Vec<u64>> = Vec::with_capacity(circles.len());
    for c in &circles {
        let pts: Vec<usize> = plane.points_of(c)?.into_iter().map(|p| plane.point_index(p) as usize).collect();
        let mut b = vec![0u64; words];
        for &i in &pts {
            b[i / 64] |= 1 << (i % 64);
        }
        members.push(pts);
        bits.push(b);
    }

    let mut through_point: Vec<Vec<usize>> = vec![Vec::new(); nu];
    let mut pair_counts = vec![0u32; nu * nu];
    for (ci, pts) in members.iter().enumerate() {
        for &a in pts {
            through_point[a].push(ci);
            for &b in pts {
                if a != b {
                    pair_counts[a * nu + b] += 1;
                }
            }
        }
    }

    let meet = |x: usize, y: usize| -> u32 { bits[x].iter().zip(&bits[y]).map(|(a, b)| (a & b).count_ones()).sum() };
    let mut tangent_counts = Vec::new();
    for (ci, pts) in members.iter().enumerate() {
        for &p in pts {
            let touching = through_point[p].iter().filter(|&&other| other == ci || meet(ci, other) == 1).count();
            tangent_counts.push(touching as u64);
        }
    }

    let (k, k_ok) = uniform_value(members.iter().map(|m| m.len() as u64));
    let (per_point, pp_ok) = uniform_value(through_point.iter().map(|v| v.len() as u64));
    let (per_pair, pair_ok) = uniform_value(
        (0..nu).flat_map(|a| (0..nu).filter(move |&b| b != a).map(move |b| (a, b))).map(|(a, b)| pair_counts[a * nu + b] as u64),
    );
    let (tangents, t_ok) = uniform_value(tangent_counts);

    debug_assert_eq!(points[nu - 1], MoebiusPoint::Infinity);
    Ok(PlaneAudit {
        q,
        point_count: nu as u64,
        circle_count: circles.len() as u64,
        points_per_circle: k,
        circles_through_point: per_point,
        circles_through_pair: per_pair,
        tangents_at_point: tangents,
        uniform: k_ok && pp_ok && pair_ok && t_ok,
    })
}
