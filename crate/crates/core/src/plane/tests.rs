// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeSet, HashSet};

use super::*;

fn plane(p: u64, n: u32) -> MoebiusPlane {
    MoebiusPlane::with_defaults(p, n).unwrap()
}

fn fin(z: ExtElem) -> MoebiusPoint {
    MoebiusPoint::Finite(z)
}

fn point_set(pl: &MoebiusPlane, c: &Circle) -> BTreeSet<MoebiusPoint> {
    pl.points_of(c).unwrap().into_iter().collect()
}

// Membership by direct evaluation of the Hermitian form over every point.
fn brute_points(pl: &MoebiusPlane, c: &Circle) -> BTreeSet<MoebiusPoint> {
    pl.points().unwrap().into_iter().filter(|&p| pl.contains(c, p)).collect()
}

#[test]
fn unit_circle_over_gf4() {
    let pl = MoebiusPlane::new(
        ExtCtx::new(FieldCtx::new(2, 1, None).unwrap(), Some((FieldElem::ONE, FieldElem::ONE))).unwrap(),
    );
    let f = pl.base();
    let unit = pl.circle(FieldElem::ONE, ExtElem::ZERO, f.neg(FieldElem::ONE)).unwrap();
    let expected: BTreeSet<_> =
        pl.ext().elements().unwrap().filter(|&z| pl.ext().norm(z) == FieldElem::ONE).map(fin).collect();
    assert_eq!(expected.len(), 3);
    assert_eq!(point_set(&pl, &unit), expected);
    assert!(!pl.contains(&unit, MoebiusPoint::Infinity));
}

#[test]
fn lines_contain_infinity() {
    let pl = plane(3, 1);
    for c in pl.circles().unwrap().iter().filter(|c| c.is_line()) {
        assert!(pl.contains(c, MoebiusPoint::Infinity));
    }
}

#[test]
fn degenerate_forms_rejected() {
    let pl = plane(3, 1);
    // N(beta) = alpha * gamma: a single point.
    assert_eq!(pl.circle(FieldElem::ONE, ExtElem::ZERO, FieldElem::ZERO), Err(Error::DegenerateCircle));
    assert_eq!(pl.circle(FieldElem::ZERO, ExtElem::ZERO, FieldElem::ONE), Err(Error::DegenerateCircle));
}

#[test]
fn every_circle_has_q_plus_one_points_and_enumerations_agree() {
    for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)] {
        let pl = plane(p, n);
        let circles = pl.circles().unwrap();
        assert_eq!(circles.len() as u64, pl.q() * (pl.q() * pl.q() + 1));
        let distinct: HashSet<_> = circles.iter().collect();
        assert_eq!(distinct.len(), circles.len());
        for c in &circles {
            let pts = point_set(&pl, c);
            assert_eq!(pts.len() as u64, pl.q() + 1);
            assert_eq!(pts, brute_points(&pl, c));
            assert_eq!(pl.points_of(c).unwrap().len(), pts.len());
        }
    }
}

#[test]
fn q2_every_triple_is_a_circle() {
    let pl = MoebiusPlane::new(
        ExtCtx::new(FieldCtx::new(2, 1, None).unwrap(), Some((FieldElem::ONE, FieldElem::ONE))).unwrap(),
    );
    let pts = pl.points().unwrap();
    assert_eq!(pts.len(), 5);
    let circles: HashSet<BTreeSet<MoebiusPoint>> = pl.circles().unwrap().iter().map(|c| point_set(&pl, c)).collect();
    assert_eq!(circles.len(), 10);
    let w = fin(pl.ext().omega());
    let c = pl.circle_through(fin(ExtElem::ZERO), fin(ExtElem::ONE), w).unwrap();
    assert_eq!(point_set(&pl, &c), [fin(ExtElem::ZERO), fin(ExtElem::ONE), w].into_iter().collect());
}

#[test]
fn circle_through_zero_one_infinity_is_the_base_line() {
    for (p, n) in [(2, 2), (3, 1), (5, 1)] {
        let pl = plane(p, n);
        let c = pl.circle_through(fin(ExtElem::ZERO), fin(ExtElem::ONE), MoebiusPoint::Infinity).unwrap();
        assert!(c.is_line());
        let expected: BTreeSet<_> = pl
            .base()
            .elements()
            .unwrap()
            .map(|a| fin(pl.ext().embed(a)))
            .chain([MoebiusPoint::Infinity])
            .collect();
        assert_eq!(point_set(&pl, &c), expected);
        assert_eq!(pl.line_through(fin(ExtElem::ZERO), fin(ExtElem::ONE)).unwrap(), c);
    }
}

#[test]
fn circle_through_rejects_repeated_points() {
    let pl = plane(3, 1);
    let a = fin(ExtElem::ONE);
    let b = fin(pl.ext().omega());
    assert_eq!(pl.circle_through(a, a, b), Err(Error::DegeneratePoints));
    assert_eq!(pl.line_through(a, a), Err(Error::DegeneratePoints));
    assert_eq!(pl.line_through(a, MoebiusPoint::Infinity), Err(Error::DegeneratePoints));
}

#[test]
fn axiom_m1_exhaustive() {
    for (p, n) in [(2, 1), (3, 1), (2, 2)] {
        let pl = plane(p, n);
        let pts = pl.points().unwrap();
        let circles = pl.circles().unwrap();
        let sets: Vec<BTreeSet<_>> = circles.iter().map(|c| point_set(&pl, c)).collect();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    let (a, b, c) = (pts[i], pts[j], pts[k]);
                    let holders = sets.iter().filter(|s| s.contains(&a) && s.contains(&b) && s.contains(&c)).count();
                    assert_eq!(holders, 1);
                    let circ = pl.circle_through(a, b, c).unwrap();
                    assert!(pl.contains(&circ, a) && pl.contains(&circ, b) && pl.contains(&circ, c));
                    assert_eq!(pl.circle_through(c, a, b).unwrap(), circ);
                }
            }
        }
    }
}

#[test]
fn axiom_m3_witness() {
    for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let pl = plane(p, n);
        let [a, b, c, d] = pl.non_concyclic_witness();
        let circ = pl.circle_through(a, b, c).unwrap();
        assert!(!pl.contains(&circ, d));
    }
}

#[test]
fn double_ratio_special_values() {
    let pl = plane(3, 1);
    let g = pl.ext();
    let a = fin(ExtElem::ONE);
    let b = fin(g.omega());
    let c = fin(g.add(g.omega(), ExtElem::ONE));
    assert_eq!(pl.double_ratio(a, b, c, c).unwrap(), fin(ExtElem::ONE));
    assert_eq!(pl.double_ratio(a, b, c, a).unwrap(), MoebiusPoint::Infinity);
    assert_eq!(pl.double_ratio(a, b, c, b).unwrap(), fin(ExtElem::ZERO));
    assert_eq!(pl.double_ratio(a, a, c, b), Err(Error::DegeneratePoints));
    // Infinity among the reference points follows the same rules.
    let inf = MoebiusPoint::Infinity;
    assert_eq!(pl.double_ratio(a, b, inf, inf).unwrap(), fin(ExtElem::ONE));
    assert_eq!(pl.double_ratio(inf, b, c, inf).unwrap(), MoebiusPoint::Infinity);
    assert_eq!(pl.double_ratio(a, inf, c, inf).unwrap(), fin(ExtElem::ZERO));
}

#[test]
fn double_ratio_membership_matches_hermitian_model() {
    for (p, n) in [(2, 1), (3, 1), (2, 2)] {
        let pl = plane(p, n);
        let pts = pl.points().unwrap();
        for circ in pl.circles().unwrap() {
            let on = pl.points_of(&circ).unwrap();
            let (a, b, c) = (on[0], on[1], on[2]);
            for &z in &pts {
                let dr = pl.double_ratio(a, b, c, z).unwrap();
                assert_eq!(pl.in_closed_base(dr), pl.contains(&circ, z), "circle {circ:?} z {z:?}");
            }
        }
    }
}

#[test]
fn mobius_images() {
    let pl = plane(2, 1);
    let g = pl.ext();
    let (one, zero) = (ExtElem::ONE, ExtElem::ZERO);
    let base_line = pl.circle_through(fin(zero), fin(one), MoebiusPoint::Infinity).unwrap();
    assert_eq!(pl.mobius_image(one, zero, zero, one).unwrap(), base_line);
    // z -> 1/z maps the closed base field onto itself.
    assert_eq!(pl.mobius_image(zero, one, one, zero).unwrap(), base_line);
    assert_eq!(pl.mobius_image(one, one, one, one), Err(Error::SingularMap));
    let _ = g;
}

#[test]
fn mobius_images_are_circles_exhaustive_q3() {
    use rand::{Rng, SeedableRng};
    let pl = plane(3, 1);
    let g = pl.ext();
    let els: Vec<_> = g.elements().unwrap().collect();
    let base: Vec<MoebiusPoint> = pl
        .base()
        .elements()
        .unwrap()
        .map(|a| fin(g.embed(a)))
        .chain([MoebiusPoint::Infinity])
        .collect();
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
    let mut tested = 0;
    while tested < 300 {
        let coeffs = [0; 4].map(|_| els[rng.gen_range(0..els.len())]);
        let [a, b, c, d] = coeffs;
        if g.sub(g.mul(a, d), g.mul(b, c)).is_zero() {
            continue;
        }
        tested += 1;
        let circ = pl.mobius_image(a, b, c, d).unwrap();
        let image: BTreeSet<_> = base.iter().map(|&z| pl.apply_mobius(coeffs, z).unwrap()).collect();
        assert_eq!(image.len() as u64, pl.q() + 1);
        assert_eq!(image, point_set(&pl, &circ));
    }
}

#[test]
fn every_circle_is_a_mobius_image() {
    // Third model: each circle is the image of the closed base line.
    let pl = plane(2, 1);
    let g = pl.ext();
    for circ in pl.circles().unwrap() {
        let pts = pl.points_of(&circ).unwrap();
        let found = g.elements().unwrap().any(|a| {
            g.elements().unwrap().any(|b| {
                g.elements().unwrap().any(|c| {
                    g.elements().unwrap().any(|d| {
                        !g.sub(g.mul(a, d), g.mul(b, c)).is_zero() && pl.mobius_image(a, b, c, d).unwrap() == circ
                    })
                })
            })
        });
        assert!(found, "{pts:?}");
    }
}

#[test]
fn intersect_matches_point_sets_exhaustive() {
    for (p, n) in [(2, 1), (3, 1), (2, 2)] {
        let pl = plane(p, n);
        let circles = pl.circles().unwrap();
        let sets: Vec<BTreeSet<_>> = circles.iter().map(|c| point_set(&pl, c)).collect();
        for i in 0..circles.len() {
            for j in 0..circles.len() {
                if i == j {
                    assert_eq!(pl.intersect(&circles[i], &circles[j]), Err(Error::IdenticalCircles));
                    continue;
                }
                let got = pl.intersect(&circles[i], &circles[j]).unwrap();
                let want: Vec<_> = sets[i].intersection(&sets[j]).copied().collect();
                assert!(want.len() <= 2);
                assert_eq!(got, want);
            }
        }
    }
}

#[test]
fn intersect_random_larger_fields() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(11);
    for (p, n) in [(7, 1), (3, 2), (2, 4)] {
        let pl = plane(p, n);
        let circles = pl.circles().unwrap();
        for _ in 0..400 {
            let a = circles[rng.gen_range(0..circles.len())];
            let b = circles[rng.gen_range(0..circles.len())];
            if a == b {
                continue;
            }
            let want: Vec<_> = point_set(&pl, &a).intersection(&point_set(&pl, &b)).copied().collect();
            assert_eq!(pl.intersect(&a, &b).unwrap(), want);
        }
    }
}

#[test]
fn axiom_m2_exhaustive() {
    for (p, n) in [(2, 1), (3, 1)] {
        let pl = plane(p, n);
        let pts = pl.points().unwrap();
        let circles = pl.circles().unwrap();
        let sets: Vec<BTreeSet<_>> = circles.iter().map(|c| point_set(&pl, c)).collect();
        for (ai, a_set) in sets.iter().enumerate() {
            let big_a = circles[ai];
            for &a in a_set {
                for &b in pts.iter().filter(|b| !a_set.contains(b)) {
                    let tangent = pl.tangent_circle(&big_a, a, b).unwrap();
                    let t_set = point_set(&pl, &tangent);
                    assert!(t_set.contains(&a) && t_set.contains(&b));
                    assert_eq!(a_set.intersection(&t_set).copied().collect::<Vec<_>>(), vec![a]);
                    let candidates = sets
                        .iter()
                        .filter(|s| s.contains(&a) && s.contains(&b) && a_set.intersection(s).count() == 1)
                        .count();
                    assert_eq!(candidates, 1);
                }
            }
        }
    }
}

#[test]
fn tangent_pencil_has_q_members() {
    // The touching circles at a point, the circle itself included, number q;
    // the ones reachable from off-circle points are the other q - 1.
    for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let pl = plane(p, n);
        let pts = pl.points().unwrap();
        for circ in pl.circles().unwrap().into_iter().step_by(3) {
            let on = pl.points_of(&circ).unwrap();
            let a = on[0];
            let mut pencil: HashSet<Circle> = pts
                .iter()
                .filter(|&&b| !pl.contains(&circ, b))
                .map(|&b| pl.tangent_circle(&circ, a, b).unwrap())
                .collect();
            assert_eq!(pencil.len() as u64, pl.q() - 1);
            for t in &pencil {
                assert_eq!(pl.intersect(&circ, t).unwrap(), vec![a]);
            }
            pencil.insert(circ);
            assert_eq!(pencil.len() as u64, pl.q());
        }
    }
}

#[test]
fn tangent_errors() {
    let pl = plane(3, 1);
    let circ = pl.circles().unwrap()[20];
    let on = pl.points_of(&circ).unwrap();
    let off = pl.points().unwrap().into_iter().find(|&p| !pl.contains(&circ, p)).unwrap();
    assert_eq!(pl.tangent_circle(&circ, on[0], on[1]), Err(Error::PointOnCircle));
    assert_eq!(pl.tangent_circle(&circ, off, on[1]), Err(Error::PointNotOnCircle));
}

#[test]
fn tangent_lines() {
    let pl = plane(2, 2);
    for circ in pl.circles().unwrap().into_iter().filter(|c| !c.is_line()) {
        for p in pl.points_of(&circ).unwrap() {
            let t = pl.tangent_line_at(&circ, p).unwrap();
            assert!(t.is_line());
            assert_eq!(pl.intersect(&circ, &t).unwrap(), vec![p]);
            // Exactly one line through p touches the circle.
            let touching = pl
                .points()
                .unwrap()
                .into_iter()
                .filter(|&k| !k.is_infinite() && k != p)
                .map(|k| pl.line_through(p, k).unwrap())
                .collect::<HashSet<_>>()
                .into_iter()
                .filter(|l| pl.intersect(&circ, l).unwrap().len() == 1)
                .count();
            assert_eq!(touching, 1);
        }
    }
    let line = pl.line_through(fin(ExtElem::ZERO), fin(ExtElem::ONE)).unwrap();
    assert_eq!(pl.tangent_line_at(&line, fin(ExtElem::ZERO)), Err(Error::CircleThroughInfinity));
}

#[test]
fn lines_have_q_plus_one_points() {
    let pl = plane(3, 1);
    let g = pl.ext();
    let l = pl.line_through(fin(g.omega()), fin(ExtElem::ONE)).unwrap();
    let pts = pl.points_of(&l).unwrap();
    assert_eq!(pts.len(), 4);
    assert_eq!(*pts.last().unwrap(), MoebiusPoint::Infinity);
}

#[test]
fn derived_plane_is_affine() {
    // Removing a point leaves an affine plane: for each block and each
    // outside point there is exactly one parallel block through it.
    for (p, n) in [(2, 1), (3, 1)] {
        let pl = plane(p, n);
        let pts = pl.points().unwrap();
        let circles = pl.circles().unwrap();
        for &centre in &pts {
            let blocks: Vec<BTreeSet<MoebiusPoint>> = circles
                .iter()
                .filter(|c| pl.contains(c, centre))
                .map(|c| {
                    let mut s = point_set(&pl, c);
                    s.remove(&centre);
                    s
                })
                .collect();
            assert_eq!(blocks.len() as u64, pl.q() * pl.q() + pl.q());
            for block in &blocks {
                for &x in pts.iter().filter(|&&x| x != centre && !block.contains(&x)) {
                    let parallels = blocks.iter().filter(|b| b.contains(&x) && b.is_disjoint(block)).count();
                    assert_eq!(parallels, 1);
                }
            }
        }
    }
}
