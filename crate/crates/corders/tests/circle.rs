//! Exact circle model tests: the orientation predicate against an
//! independent affine oracle, Möbius/PL maps, lifts, and rotation numbers.

use corders::circle::{
    arc_interior_point, cover_cyclic_ord, cyclic_ord, line_cmp, lift_apply_seq, perturb,
    rotation_number, CircleError, CircleMap, Cover, CoverPoint, CoverSelfMap, LiftedMap,
    MoebiusMap, PLCircleMap, ProjectivePoint, RotationNumber,
};
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::cmp::Ordering;

fn pt(n: i64) -> ProjectivePoint {
    ProjectivePoint::from_int(n)
}

fn fr(p: i64, q: i64) -> ProjectivePoint {
    ProjectivePoint::frac(p, q)
}

fn inf() -> ProjectivePoint {
    ProjectivePoint::infinity()
}

/// Independent oracle: counterclockwise = increasing affine coordinate
/// wrapping through infinity, spelled out case by case.
fn affine_oracle(x: &ProjectivePoint, y: &ProjectivePoint, z: &ProjectivePoint) -> i8 {
    if x == y || y == z || x == z {
        return 0;
    }
    let ccw = match (x.affine(), y.affine(), z.affine()) {
        (Some(a), Some(b), Some(c)) => (a < b && b < c) || (b < c && c < a) || (c < a && a < b),
        (Some(a), Some(b), None) => a < b,
        (Some(a), None, Some(c)) => c < a,
        (None, Some(b), Some(c)) => b < c,
        _ => unreachable!("two points equal to infinity are equal"),
    };
    if ccw {
        1
    } else {
        -1
    }
}

fn random_point(rng: &mut StdRng) -> ProjectivePoint {
    if rng.gen_ratio(1, 20) {
        inf()
    } else {
        fr(rng.gen_range(-40..=40), rng.gen_range(1..=12))
    }
}

fn random_moebius(rng: &mut StdRng) -> MoebiusMap {
    loop {
        let (a, b, c, d) = (
            rng.gen_range(-9i64..=9),
            rng.gen_range(-9i64..=9),
            rng.gen_range(-9i64..=9),
            rng.gen_range(-9i64..=9),
        );
        if a * d - b * c > 0 {
            return MoebiusMap::new(a, b, c, d).unwrap();
        }
    }
}

#[test]
fn cyclic_ord_examples() {
    assert_eq!(cyclic_ord(&pt(0), &pt(1), &inf()), 1);
    assert_eq!(cyclic_ord(&pt(0), &pt(0), &pt(1)), 0);
    assert_eq!(cyclic_ord(&pt(1), &pt(0), &inf()), -1);
}

#[test]
fn cyclic_ord_matches_affine_oracle() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..20_000 {
        let (x, y, z) = (
            random_point(&mut rng),
            random_point(&mut rng),
            random_point(&mut rng),
        );
        assert_eq!(
            cyclic_ord(&x, &y, &z),
            affine_oracle(&x, &y, &z),
            "disagree at ({x}, {y}, {z})"
        );
    }
}

#[test]
fn cyclic_ord_cocycle_identity_randomized() {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..10_000 {
        let q: Vec<ProjectivePoint> = (0..4).map(|_| random_point(&mut rng)).collect();
        let c = |i: usize, j: usize, k: usize| i32::from(cyclic_ord(&q[i], &q[j], &q[k]));
        assert_eq!(
            c(1, 2, 3) - c(0, 2, 3) + c(0, 1, 3) - c(0, 1, 2),
            0,
            "cocycle identity fails at ({}, {}, {}, {})",
            q[0],
            q[1],
            q[2],
            q[3]
        );
    }
}

#[test]
fn cyclic_ord_antisymmetry_randomized() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..10_000 {
        let (x, y, z) = (
            random_point(&mut rng),
            random_point(&mut rng),
            random_point(&mut rng),
        );
        assert_eq!(cyclic_ord(&x, &y, &z), -cyclic_ord(&y, &x, &z));
        assert_eq!(cyclic_ord(&x, &y, &z), -cyclic_ord(&x, &z, &y));
        assert_eq!(cyclic_ord(&x, &y, &z), cyclic_ord(&y, &z, &x));
    }
}

#[test]
fn moebius_preserves_cyclic_ord() {
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..5_000 {
        let m = random_moebius(&mut rng);
        let (x, y, z) = (
            random_point(&mut rng),
            random_point(&mut rng),
            random_point(&mut rng),
        );
        assert_eq!(
            cyclic_ord(&x, &y, &z),
            cyclic_ord(&m.apply(&x), &m.apply(&y), &m.apply(&z))
        );
    }
}

#[test]
fn moebius_apply_examples() {
    assert_eq!(MoebiusMap::identity().apply(&pt(7)), pt(7));
    let double = MoebiusMap::new(2, 0, 0, 1).unwrap();
    assert_eq!(double.apply(&pt(1)), pt(2));
    assert_eq!(double.apply(&inf()), inf());
}

#[test]
fn moebius_inverse_and_compose() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..500 {
        let m = random_moebius(&mut rng);
        let n = random_moebius(&mut rng);
        let x = random_point(&mut rng);
        assert_eq!(m.inverse().apply(&m.apply(&x)), x);
        assert_eq!(m.compose(&n).apply(&x), m.apply(&n.apply(&x)));
    }
}

#[test]
fn hyperbolic_fixes_its_fixed_points() {
    let h = MoebiusMap::hyperbolic(&pt(3), &fr(11, 2), 1000).unwrap();
    assert_eq!(h.apply(&pt(3)), pt(3));
    assert_eq!(h.apply(&fr(11, 2)), fr(11, 2));
    // Points near the repelling fixed point move toward the attractor.
    assert_eq!(cyclic_ord(&fr(11, 2), &h.apply(&pt(5)), &pt(5)), 1);
}

#[test]
fn pl_map_breakpoints_and_interpolation() {
    let m = PLCircleMap::new(vec![(pt(0), pt(0)), (pt(1), pt(2)), (pt(4), pt(4))]).unwrap();
    // Breakpoints return the stored values.
    assert_eq!(m.apply(&pt(1)), pt(2));
    // Affine interpolation between breakpoints.
    assert_eq!(m.apply(&fr(1, 2)), pt(1));
    assert_eq!(m.apply(&fr(5, 2)), pt(3));
    // Inverse round-trip, including off-breakpoint points.
    let mut rng = StdRng::seed_from_u64(6);
    let inv = m.inverse();
    for _ in 0..500 {
        let x = random_point(&mut rng);
        assert_eq!(inv.apply(&m.apply(&x)), x);
    }
}

#[test]
fn pl_map_preserves_cyclic_ord() {
    let m = PLCircleMap::new(vec![
        (pt(0), pt(1)),
        (pt(1), pt(5)),
        (pt(4), fr(11, 2)),
        (inf(), pt(-3)),
    ])
    .unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..5_000 {
        let (x, y, z) = (
            random_point(&mut rng),
            random_point(&mut rng),
            random_point(&mut rng),
        );
        assert_eq!(
            cyclic_ord(&x, &y, &z),
            cyclic_ord(&m.apply(&x), &m.apply(&y), &m.apply(&z))
        );
    }
}

#[test]
fn pl_map_rejects_non_cyclic_data() {
    assert!(matches!(
        PLCircleMap::new(vec![(pt(0), pt(0)), (pt(2), pt(1)), (pt(1), pt(2))]),
        Err(CircleError::BreakpointsNotCyclic(_))
    ));
    assert!(matches!(
        PLCircleMap::new(vec![(pt(0), pt(0)), (pt(1), pt(2)), (pt(2), pt(1))]),
        Err(CircleError::ValuesNotCyclic(_))
    ));
}

#[test]
fn arc_interior_point_lies_inside() {
    let cases = [
        (pt(0), pt(1)),
        (pt(1), pt(0)),
        (pt(5), inf()),
        (inf(), pt(-2)),
    ];
    for (a, b) in cases {
        let m = arc_interior_point(&a, &b);
        assert_eq!(cyclic_ord(&a, &m, &b), 1, "midpoint of ({a}, {b}) = {m}");
    }
}

#[test]
fn perturb_identity_bump_is_identity() {
    let base = CircleMap::Moebius(MoebiusMap::new(2, 0, 0, 1).unwrap());
    let bump = PLCircleMap::identity_on(&[pt(0), fr(1, 2), pt(1)]).unwrap();
    let p = perturb(&base, &bump, &pt(0), &pt(1)).unwrap();
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..200 {
        let x = random_point(&mut rng);
        assert_eq!(p.apply(&x), base.apply(&x));
    }
}

#[test]
fn perturb_agrees_outside_support() {
    let base = CircleMap::Moebius(MoebiusMap::identity());
    let bump = PLCircleMap::new(vec![(pt(0), pt(0)), (fr(1, 2), fr(3, 4)), (pt(1), pt(1))]).unwrap();
    let p = perturb(&base, &bump, &pt(0), &pt(1)).unwrap();
    // Image outside the support arc [0, 1] is untouched.
    assert_eq!(p.apply(&pt(5)), pt(5));
    assert_eq!(p.apply(&inf()), inf());
    // Inside the support it moves.
    assert_eq!(p.apply(&fr(1, 2)), fr(3, 4));
}

#[test]
fn perturb_rejects_bump_outside_arc() {
    let base = CircleMap::Moebius(MoebiusMap::identity());
    let bump = PLCircleMap::new(vec![(pt(0), pt(0)), (pt(2), pt(3)), (pt(5), pt(5))]).unwrap();
    // Bump moves points outside the declared arc [0, 1].
    assert!(perturb(&base, &bump, &pt(0), &pt(1)).is_err());
    // Arc endpoints must be fixed breakpoints of the bump.
    assert!(matches!(
        perturb(&base, &bump, &pt(0), &fr(1, 2)),
        Err(CircleError::BumpEndpoints)
    ));
}

#[test]
fn lift_of_identity_is_deck_translation() {
    let cover = Cover::line(fr(-1, 3));
    let id = CircleMap::Moebius(MoebiusMap::identity());
    let l0 = LiftedMap::new(id.clone(), cover.clone(), pt(0), 0).unwrap();
    let l1 = LiftedMap::new(id, cover, pt(0), 1).unwrap();
    let p = CoverPoint::new(pt(2), 3);
    assert_eq!(l0.apply(&p).unwrap(), CoverPoint::new(pt(2), 3));
    assert_eq!(l1.apply(&p).unwrap(), CoverPoint::new(pt(2), 4));
}

fn random_line_point(rng: &mut StdRng, cut: &ProjectivePoint) -> CoverPoint {
    loop {
        let base = random_point(rng);
        if &base != cut {
            return CoverPoint::new(base, rng.gen_range(-3..=3));
        }
    }
}

#[test]
fn lift_is_strictly_increasing_and_commutes_with_deck() {
    let cut = fr(-1, 3);
    let cover = Cover::line(cut.clone());
    let maps = [
        CircleMap::Moebius(MoebiusMap::hyperbolic(&pt(1), &pt(4), 100).unwrap()),
        CircleMap::Moebius(MoebiusMap::new(3, 1, 1, 2).unwrap()),
        CircleMap::PL(
            PLCircleMap::new(vec![(pt(0), pt(1)), (pt(2), pt(5)), (inf(), pt(-7))]).unwrap(),
        ),
    ];
    let mut rng = StdRng::seed_from_u64(9);
    for map in maps {
        let lift = LiftedMap::new(map, cover.clone(), pt(0), 0).unwrap();
        for _ in 0..2_000 {
            let p = random_line_point(&mut rng, &cut);
            let q = random_line_point(&mut rng, &cut);
            // Skip samples whose image lands exactly on the cut.
            let (Ok(fp), Ok(fq)) = (lift.apply(&p), lift.apply(&q)) else {
                continue;
            };
            // Strict monotonicity in the line order.
            assert_eq!(
                line_cmp(&cover, &p, &q).unwrap(),
                line_cmp(&cover, &fp, &fq).unwrap()
            );
            // Deck commutation: translating the argument by one sheet
            // translates the image by one sheet.
            let up = CoverPoint::new(p.base.clone(), p.sheet + 1);
            let fup = lift.apply(&up).unwrap();
            assert_eq!(fup.base, fp.base);
            assert_eq!(fup.sheet, fp.sheet + 1);
        }
    }
}

#[test]
fn lift_rejects_cut_collision() {
    let cover = Cover::line(pt(0));
    let id = CircleMap::Moebius(MoebiusMap::identity());
    assert!(matches!(
        LiftedMap::new(id.clone(), cover.clone(), pt(0), 0),
        Err(CircleError::CutPointCollision(_))
    ));
    let lift = LiftedMap::new(id, cover, pt(1), 0).unwrap();
    assert!(matches!(
        lift.apply(&CoverPoint::new(pt(0), 0)),
        Err(CircleError::CutPointCollision(_))
    ));
}

#[test]
fn cover_cyclic_ord_matches_base_on_trivial_cover() {
    let cut = fr(-1, 3);
    let cover = Cover::cyclic(cut.clone(), 1);
    let mut rng = StdRng::seed_from_u64(10);
    for _ in 0..2_000 {
        let xs: Vec<CoverPoint> = (0..3)
            .map(|_| {
                let mut p = random_line_point(&mut rng, &cut);
                p.sheet = 0;
                p
            })
            .collect();
        assert_eq!(
            cover_cyclic_ord(&cover, &xs[0], &xs[1], &xs[2]).unwrap(),
            cyclic_ord(&xs[0].base, &xs[1].base, &xs[2].base)
        );
    }
}

#[test]
fn lift_apply_seq_is_rightmost_first() {
    let cover = Cover::line(fr(-1, 3));
    let double = LiftedMap::new(
        CircleMap::Moebius(MoebiusMap::new(2, 0, 0, 1).unwrap()),
        cover.clone(),
        pt(1),
        0,
    )
    .unwrap();
    let shift = LiftedMap::new(
        CircleMap::Moebius(MoebiusMap::new(1, 1, 0, 1).unwrap()),
        cover,
        pt(1),
        0,
    )
    .unwrap();
    let p = CoverPoint::new(pt(1), 0);
    // (double ∘ shift)(1) = 4, not (shift ∘ double)(1) = 3.
    let got = lift_apply_seq(&[&double, &shift], &p).unwrap();
    assert_eq!(got.base, pt(4));
}

#[test]
fn rotation_number_of_half_turn_is_one_half() {
    // x ↦ −1/x is an order-2 elliptic rotation.
    let half = MoebiusMap::new(0, -1, 1, 0).unwrap();
    let cover = Cover::cyclic(fr(1, 3), 1);
    let lift = LiftedMap::new(CircleMap::Moebius(half), cover.clone(), pt(1), 0).unwrap();
    let f = CoverSelfMap::new(vec![lift], cover);
    let rot = rotation_number(&f, &pt(1), 2, &[pt(2), pt(5)]).unwrap();
    assert_eq!(rot.mod_one(), RotationNumber::rational(1, 2));
}

#[test]
fn rotation_number_of_fixed_point_lift_is_zero() {
    let h = MoebiusMap::hyperbolic(&pt(1), &pt(4), 1000).unwrap();
    let cover = Cover::cyclic(fr(-1, 3), 1);
    // Reference at the attracting fixed point with displacement 0: the
    // fixed-point lift.
    let lift = LiftedMap::new(CircleMap::Moebius(h), cover.clone(), pt(1), 0).unwrap();
    let f = CoverSelfMap::new(vec![lift], cover);
    let rot = rotation_number(&f, &pt(0), 1, &[pt(1)]).unwrap();
    assert_eq!(rot, RotationNumber::rational(0, 1));
}

#[test]
fn rotation_number_invariant_under_conjugation() {
    // Conjugating the half-turn by a hyperbolic map preserves the rotation
    // number; the lift is transported by conjugating the reference point.
    let half = MoebiusMap::new(0, -1, 1, 0).unwrap();
    let h = MoebiusMap::hyperbolic(&pt(2), &fr(7, 2), 25).unwrap();
    let conj = h.compose(&half).compose(&h.inverse());
    let cover = Cover::cyclic(fr(1, 3), 1);
    let reference = h.apply(&pt(1));
    let lift = LiftedMap::new(CircleMap::Moebius(conj), cover.clone(), reference, 0).unwrap();
    let f = CoverSelfMap::new(vec![lift], cover);
    let base = h.apply(&pt(0));
    let samples = [h.apply(&pt(2)), h.apply(&pt(5))];
    let rot = rotation_number(&f, &base, 2, &samples).unwrap();
    assert_eq!(rot.mod_one(), RotationNumber::rational(1, 2));
}

#[test]
fn line_cmp_orders_by_sheet_then_cut_position() {
    let cover = Cover::line(pt(0));
    let a = CoverPoint::new(pt(1), 0);
    let b = CoverPoint::new(pt(2), 0);
    let c = CoverPoint::new(pt(1), 1);
    assert_eq!(line_cmp(&cover, &a, &b).unwrap(), Ordering::Less);
    assert_eq!(line_cmp(&cover, &b, &c).unwrap(), Ordering::Less);
    assert_eq!(line_cmp(&cover, &c, &a).unwrap(), Ordering::Greater);
    assert_eq!(line_cmp(&cover, &a, &a).unwrap(), Ordering::Equal);
}

#[test]
fn projective_point_canonical_forms() {
    assert_eq!(fr(2, 4), fr(1, 2));
    assert_eq!(fr(-3, -6), fr(1, 2));
    assert_eq!(fr(3, -6), fr(-1, 2));
    assert_eq!(ProjectivePoint::new(5, 0).unwrap(), inf());
    assert!(ProjectivePoint::new(0, 0).is_err());
    let r = BigRational::new(6.into(), 8.into());
    assert_eq!(ProjectivePoint::from_rational(&r), fr(3, 4));
}
