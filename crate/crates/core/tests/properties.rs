use blender_core::certifier::sample_expansion;
use blender_core::geometry::{fixed_points, ConeConfig, Saddle};
use blender_core::henon::{eval, jacobian, Params, Point3};
use blender_core::interval::{IBox, Interval};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twofloat::TwoFloat;

fn ulps(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    if a.signum() != b.signum() {
        return u64::MAX;
    }
    a.to_bits().abs_diff(b.to_bits())
}

fn random_interval(rng: &mut ChaCha8Rng) -> Interval {
    let scale = 10f64.powi(rng.gen_range(-30..30));
    let a = rng.gen_range(-1.0..1.0) * scale;
    let b = match rng.gen_range(0..4) {
        0 => a,
        1 => a + rng.gen_range(0.0..1.0) * scale * 1e-12,
        _ => rng.gen_range(-1.0..1.0) * scale,
    };
    Interval::hull_of(a, b)
}

fn member(rng: &mut ChaCha8Rng, iv: Interval) -> f64 {
    match rng.gen_range(0..5) {
        0 => iv.lo(),
        1 => iv.hi(),
        _ => (iv.lo() + rng.gen_range(0.0..1.0) * (iv.hi() - iv.lo())).clamp(iv.lo(), iv.hi()),
    }
}

fn dd(v: f64) -> TwoFloat {
    TwoFloat::from(v)
}

/// lo ≤ exact ≤ hi, decided with error-free double-double operations.
fn contains_exact(r: Interval, exact: TwoFloat) -> bool {
    dd(r.lo()) <= exact && exact <= dd(r.hi())
}

#[test]
fn containment_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut violations = 0;
    for _ in 0..100_000 {
        let (a, b) = (random_interval(&mut rng), random_interval(&mut rng));
        let (x, y) = (member(&mut rng, a), member(&mut rng, b));
        violations += !contains_exact(a + b, TwoFloat::new_add(x, y)) as u32;
        violations += !contains_exact(a - b, TwoFloat::new_sub(x, y)) as u32;
        violations += !contains_exact(a * b, TwoFloat::new_mul(x, y)) as u32;
        violations += !contains_exact(a.sqr(), TwoFloat::new_mul(x, x)) as u32;
        violations += !a.abs().contains(x.abs()) as u32;
        violations += !a.min(b).contains(x.min(y)) as u32;
        violations += !a.max(b).contains(x.max(y)) as u32;
        if let Ok(q) = a.checked_div(b) {
            // x / y ∈ [lo, hi]  ⇔  lo·y ≤ x ≤ hi·y for y > 0, reversed for y < 0
            let (l, h) = (TwoFloat::new_mul(q.lo(), y), TwoFloat::new_mul(q.hi(), y));
            let ok = if y > 0.0 {
                l <= dd(x) && dd(x) <= h
            } else {
                h <= dd(x) && dd(x) <= l
            };
            violations += !ok as u32;
        }
        let pos = a.abs();
        let xp = x.abs();
        if let Ok(s) = pos.sqrt() {
            let ok = TwoFloat::new_mul(s.lo(), s.lo()) <= dd(xp) && dd(xp) <= TwoFloat::new_mul(s.hi(), s.hi());
            violations += !ok as u32;
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn jacobian_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-3;
    for _ in 0..1000 {
        let p = Params::new(
            rng.gen_range(1.01..3.0),
            rng.gen_range(-12.0..-4.1),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-0.5..0.5),
        )
        .unwrap();
        let pt = Point3::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), rng.gen_range(-40.0..22.0));
        let j = jacobian(&p, pt);
        for col in 0..3 {
            let mut e = [0.0; 3];
            e[col] = h;
            let e = Point3::new(e[0], e[1], e[2]);
            let fd = (eval(&p, pt + e) - eval(&p, pt - e)) * (0.5 / h);
            let fd = fd.to_array();
            for row in 0..3 {
                let want = j.0[row][col];
                assert!(
                    (fd[row] - want).abs() <= 1e-6 * want.abs().max(1.0),
                    "J[{row}][{col}] = {want}, fd {}",
                    fd[row]
                );
            }
        }
    }
}

#[test]
fn invariant_lines_of_the_saddles() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut worst_s, mut worst_cu) = (0u64, 0f64);
    for _ in 0..1000 {
        let p = Params::unperturbed(rng.gen_range(1.18..1.19), rng.gen_range(-10.0..-9.0)).unwrap();
        let fp = fixed_points(&p).unwrap();
        let t = rng.gen_range(-4.0..4.0);
        for which in [Saddle::P, Saddle::Q] {
            let r = fp.saddle(which).point;
            // stable line collapses onto the saddle
            let img = eval(&p, r + Point3::new(t, 0.0, 0.0));
            for (a, b) in img.to_array().into_iter().zip(r.to_array()) {
                worst_s = worst_s.max(ulps(a, b));
            }
            // center-unstable line is scaled by ξ
            let img = eval(&p, r + Point3::new(0.0, 0.0, t));
            let want = r + Point3::new(0.0, 0.0, p.xi * t);
            for (a, b) in img.to_array().into_iter().zip(want.to_array()) {
                worst_cu = worst_cu.max((a - b).abs() / (f64::EPSILON * b.abs().max(r.z.abs())));
            }
        }
    }
    assert!(worst_s <= 4, "{worst_s}");
    assert!(worst_cu <= 4.0, "{worst_cu}");
}

#[test]
fn first_coordinate_is_the_old_y() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let p = Params::new(rng.gen_range(1.01..3.0), rng.gen_range(-12.0..0.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)).unwrap();
        let pt = Point3::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), rng.gen_range(-40.0..22.0));
        assert_eq!(eval(&p, pt).x, pt.y);
    }
}

#[test]
fn u_cone_vectors_expand_on_the_legs() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for seed in 0..4 {
        let p = Params::unperturbed(rng.gen_range(1.18..1.19), rng.gen_range(-10.0..-9.0)).unwrap();
        let (trials, violations) = sample_expansion(&p, &ConeConfig::default(), 10_000, seed);
        assert_eq!(trials, 10_000);
        assert_eq!(violations, 0);
    }
}

fn interval() -> impl Strategy<Value = Interval> {
    (-1e6..1e6f64, 0.0..1e3f64).prop_map(|(a, w)| Interval::hull_of(a, a + w))
}

proptest! {
    #[test]
    fn bisection_halves_cover_the_parent(iv in interval()) {
        let (l, r) = iv.bisect();
        prop_assert_eq!(l.lo(), iv.lo());
        prop_assert_eq!(r.hi(), iv.hi());
        prop_assert_eq!(l.hi(), r.lo());
        prop_assert!(l.is_subset_of(iv) && r.is_subset_of(iv));
    }

    #[test]
    fn operations_are_inclusion_monotone(a in interval(), b in interval(), f in 0.0..0.5f64) {
        let shrink = |iv: Interval| {
            let w = iv.width();
            Interval::new(iv.lo() + f * w, iv.hi() - f * w).unwrap_or(iv)
        };
        let (sa, sb) = (shrink(a), shrink(b));
        prop_assert!((sa + sb).is_subset_of(a + b));
        prop_assert!((sa * sb).is_subset_of(a * b));
        prop_assert!(sa.sqr().is_subset_of(a.sqr()));
    }

    #[test]
    fn hull_contains_both(a in interval(), b in interval()) {
        let h = a.hull(b);
        prop_assert!(a.is_subset_of(h) && b.is_subset_of(h));
    }

    #[test]
    fn box_bisection_preserves_corners(lo in -10.0..0.0f64, w in 0.1..5.0f64, axis in 0usize..2) {
        let b = IBox::from_bounds(&[(lo, lo + w), (lo, lo + 2.0 * w)]).unwrap();
        let (l, r) = b.bisect(axis);
        for c in b.corners() {
            prop_assert!(l.contains_point(&c) || r.contains_point(&c));
        }
    }
}
