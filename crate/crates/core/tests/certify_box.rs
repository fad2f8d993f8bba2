use blender_core::certifier::{certify_box, certify_epsilon, certify_point, Condition, CertifyConfig};
use blender_core::henon::{Params, MU_RANGE, XI_RANGE};
use blender_core::interval::{IBox, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg() -> CertifyConfig {
    CertifyConfig {
        expansion_trials: 1000,
        ..CertifyConfig::default()
    }
}

fn reference_box() -> IBox {
    IBox::from_bounds(&[XI_RANGE, MU_RANGE]).unwrap()
}

#[test]
fn reference_box_certifies() {
    let r = certify_box(&reference_box(), &cfg()).unwrap();
    for c in &r.conditions {
        assert_eq!(c.status(), Status::Pass, "{}: {:?}", c.condition, c.overall);
    }
    assert_eq!(r.overall, Status::Pass);
    assert!(r.worst_margin > 0.0);
}

#[test]
fn box_pass_implies_point_pass() {
    let r = certify_box(&reference_box(), &cfg()).unwrap();
    assert_eq!(r.overall, Status::Pass);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let xi = rng.gen_range(XI_RANGE.0..XI_RANGE.1);
        let mu = rng.gen_range(MU_RANGE.0..MU_RANGE.1);
        let p = Params::unperturbed(xi, mu).unwrap();
        let pr = certify_point(&p, &cfg(), false).unwrap();
        assert_eq!(pr.overall, Status::Pass, "({xi}, {mu})");
        for (a, b) in r.strict_checks().zip(pr.strict_checks()) {
            assert!(a.verdict.margin <= b.verdict.margin, "{} at ({xi}, {mu})", a.name);
        }
    }
}

#[test]
fn sub_box_margins_dominate() {
    let parent = certify_box(&reference_box(), &cfg()).unwrap();
    let sub = IBox::from_bounds(&[(1.182, 1.186), (-9.7, -9.3)]).unwrap();
    let child = certify_box(&sub, &cfg()).unwrap();
    for (a, b) in parent.strict_checks().zip(child.strict_checks()) {
        assert!(b.verdict.margin >= a.verdict.margin - 1e-12, "{}", a.name);
    }
}

#[test]
fn reference_bounds_fail_near_the_corner() {
    let r = certify_box(&reference_box(), &cfg()).unwrap();
    let p_lo = r.reference_bound("p > -2.7").unwrap();
    assert_eq!(p_lo.verdict.status, Status::Fail);
    let w = p_lo.verdict.witness.as_ref().unwrap();
    assert!(w.point[1] < -9.99);
    let keep = r.reference_bound("(xi/2) p > -1.6065").unwrap();
    assert_eq!(keep.verdict.status, Status::Fail);
    // these do not enter the condition verdicts
    assert_eq!(r.condition(Condition::BH5).unwrap().status(), Status::Pass);
}

#[test]
fn epsilon_over_reference_box() {
    let e = certify_epsilon(&reference_box(), &cfg()).unwrap();
    assert!(e.epsilon >= 1e-5, "{}", e.epsilon);
    assert!(e.corners_pass(), "{:?}", e.corner_checks);
    assert_eq!(e.corner_checks.len(), 4);
    let half = e.epsilon / 2.0;
    let b = reference_box()
        .extended(blender_core::interval::Interval::point(half))
        .extended(blender_core::interval::Interval::point(-half));
    assert_eq!(certify_box(&b, &cfg()).unwrap().overall, Status::Pass);
}

#[test]
fn near_minus_four_fails_with_witness() {
    let b = IBox::from_bounds(&[XI_RANGE, (-5.0, -4.5)]).unwrap();
    let r = certify_box(&b, &cfg()).unwrap();
    assert_eq!(r.overall, Status::Fail);
    for s in r.strict_checks().filter(|s| s.verdict.status == Status::Fail) {
        let w = s.verdict.witness.as_ref().unwrap();
        assert!(w.value < 0.0, "{}", s.name);
        assert!(b.contains_point(&w.point[..2]), "{}", s.name);
    }
}

#[test]
fn epsilon_grows_on_sub_box() {
    let parent = certify_epsilon(&reference_box(), &cfg()).unwrap();
    let sub = IBox::from_bounds(&[(1.18, 1.185), (-9.5, -9.0)]).unwrap();
    let child = certify_epsilon(&sub, &cfg()).unwrap();
    assert!(child.epsilon >= parent.epsilon, "{} < {}", child.epsilon, parent.epsilon);
}
