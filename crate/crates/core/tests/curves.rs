use std::f64::consts::{PI, TAU};

use legendrian::curves::{
    arc_distance, finite_r_circle, gerono_knot, infinite_r_circle, lift, lift_closed, mobius_image, pinch_gap,
    pinch_knot, pinch_parameter, CurveSpec, LegendrianKnot, PlanarCurve,
};
use legendrian::heisenberg::{invert, koranyi_dist, koranyi_norm, ExtendedPoint, HPoint};
use legendrian::mobius::MobiusMatrix;
use legendrian::Error;

fn close(p: HPoint, q: HPoint, tol: f64) -> bool {
    (p.x - q.x).abs() < tol && (p.y - q.y).abs() < tol && (p.u - q.u).abs() < tol
}

fn check_invariants(k: &LegendrianKnot) {
    for s in k.samples() {
        assert!((s.tangent.norm() - 1.0).abs() <= 1e-10);
    }
    let r = k.horizontality_residual();
    assert!(r < 1e-8, "horizontality residual {r:e} for {}", k.provenance());
    if k.is_closed() {
        assert!(k.closure_gap() <= 1e-9);
    }
}

#[test]
fn gerono_lift_is_a_valid_closed_knot() {
    let k = gerono_knot(1024).unwrap();
    assert!(k.is_closed());
    check_invariants(&k);
    let planar = PlanarCurve::gerono().length();
    assert!((k.length() - planar).abs() <= 1e-10 * planar, "{} vs {planar}", k.length());
    let s0 = k.samples()[0];
    assert!((s0.kappa - 1.0).abs() < 1e-12);
    assert!(s0.kappa1.abs() < 1e-12);
    assert!((s0.kappa2 - 12.0).abs() < 1e-10);
    assert!(k.embeddedness_margin() > 0.1);
}

#[test]
fn lifted_heights_follow_the_area_integral() {
    // Unit circle from (1, 0, 0): u(t) = t / 2, so one turn rises by π.
    let k = lift(&PlanarCurve::circle(1.0), HPoint::new(1.0, 0.0, 0.0), 256, false).unwrap();
    assert!(!k.is_closed());
    let first = k.samples()[0];
    let last = k.samples()[k.len() - 1];
    assert!((last.point.u - first.point.u - PI).abs() < 1e-12);
    for s in k.samples() {
        assert!((s.point.u - s.s / 2.0).abs() < 1e-12);
    }
    check_invariants(&k);
    assert!(matches!(
        lift(&PlanarCurve::circle(1.0), HPoint::ORIGIN, 256, true),
        Err(Error::ClosureFailed { .. })
    ));
    assert!(lift(&PlanarCurve::gerono(), HPoint::ORIGIN, 63, true).is_err());
}

#[test]
fn random_fourier_lifts_are_horizontal() {
    let c = PlanarCurve::new(
        vec![0.2, 1.0, 0.1, 0.05, -0.1, 0.02, 0.03],
        vec![-0.1, 0.05, 0.2, 0.1, 0.6, -0.04, 0.01],
    )
    .unwrap()
    .project_zero_area()
    .unwrap();
    let k = lift_closed(&c, 2048).unwrap();
    check_invariants(&k);
    assert!((k.length() - c.length()).abs() < 1e-10 * c.length());
}

#[test]
fn infinite_r_circle_is_isometric_to_its_parameter() {
    let k = infinite_r_circle(HPoint::ORIGIN, 1.0, 0.0, (-2.0, 2.0), 101).unwrap();
    for s in k.samples() {
        assert_eq!(s.point, HPoint::new(s.s, 0.0, 0.0));
    }
    assert_eq!(k.chord(0.0, 1.5), 1.5);
    let k = infinite_r_circle(HPoint::new(0.3, -1.0, 0.7), 2.0, 1.0, (-3.0, 3.0), 201).unwrap();
    assert!(k.horizontality_residual() < 1e-12);
    let sm = k.samples();
    for i in (0..sm.len()).step_by(17) {
        for j in (0..sm.len()).step_by(13) {
            let d = koranyi_dist(sm[i].point, sm[j].point);
            assert!((d - (sm[i].s - sm[j].s).abs()).abs() < 1e-12);
        }
    }
    assert!(matches!(infinite_r_circle(HPoint::ORIGIN, 0.0, 0.0, (0.0, 1.0), 20), Err(Error::ZeroDirection)));
}

#[test]
fn finite_r_circle_is_an_inverted_line() {
    let p0 = HPoint::new(0.0, 1.0, 0.0);
    let k = finite_r_circle(p0, 1.0, 0.0, 512).unwrap();
    check_invariants(&k);
    assert!(koranyi_norm(k.samples()[0].point) < 1e-14);
    assert!(k.embeddedness_margin() > 0.0);
    for s in k.samples().iter().skip(1) {
        let q = invert(ExtendedPoint::Finite(s.point)).finite().unwrap();
        // Line through (0, 1, 0) with direction (1, 0): y = 1, u = -x / 2.
        assert!((q.y - 1.0).abs() < 1e-8 * (1.0 + koranyi_norm(q)));
        assert!((q.u + 0.5 * q.x).abs() < 1e-8 * (1.0 + koranyi_norm(q).powi(2)));
    }
    assert!(matches!(finite_r_circle(HPoint::ORIGIN, 1.0, 0.0, 512), Err(Error::LineThroughOrigin)));
    assert!(matches!(
        finite_r_circle(HPoint::new(1.0, 0.0, 0.0), 1.0, 0.0, 512),
        Err(Error::LineThroughOrigin)
    ));
}

#[test]
fn arc_distance_wraps() {
    assert_eq!(arc_distance(true, 4.0, 0.0, 3.0), 1.0);
    assert_eq!(arc_distance(true, 4.0, 1.0, 1.0), 0.0);
    assert_eq!(arc_distance(false, 4.0, 0.0, 3.0), 3.0);
    let k = gerono_knot(256).unwrap();
    let sm = k.samples();
    for i in (0..sm.len()).step_by(7) {
        for j in (0..sm.len()).step_by(5) {
            let d = koranyi_dist(sm[i].point, sm[j].point);
            assert!(d <= k.arc_dist(sm[i].s, sm[j].s) + 1e-12);
        }
    }
}

#[test]
fn local_interpolation_matches_the_lift() {
    let k = gerono_knot(1024).unwrap();
    let fine = gerono_knot(4096).unwrap();
    for j in (1..4096).step_by(37) {
        let s = fine.samples()[j];
        let p = k.point_at(s.s);
        assert!(close(p, s.point, 1e-12), "{j}");
        assert!((k.tangent_at(s.s) - s.tangent).norm() < 1e-12);
        assert!((k.kappa_at(s.s) - s.kappa).abs() < 1e-9);
    }
}

#[test]
fn chord_derivative_matches_differences() {
    let k = gerono_knot(1024).unwrap();
    for (s0, s) in [(0.3, 0.5), (1.0, 0.2), (2.0, 4.5)] {
        let h = 1e-5;
        let fd = (k.chord(s0, s + h) - k.chord(s0, s - h)) / (2.0 * h);
        assert!((fd - k.chord_derivative(s0, s)).abs() < 1e-7);
    }
}

#[test]
fn margin_is_rotation_invariant() {
    let k = gerono_knot(512).unwrap();
    let m = k.embeddedness_margin();
    let r = k.rotated(0.83).embeddedness_margin();
    assert!((m - r).abs() < 1e-12 * m);
}

#[test]
fn pinch_family_closes_its_gap() {
    for mu in [0.36, 0.38, 0.39] {
        // Loop area of (4 cos t, sin 4t + mu sin 2t) is 4 (4mu/3 - 8/15).
        let c = PlanarCurve::pinch(mu);
        let lambda = TAU / c.length();
        let oracle = lambda * 2.0 * (4.0 * (4.0 * mu / 3.0 - 8.0 / 15.0)).abs().sqrt();
        assert!((pinch_gap(mu) - oracle).abs() < 1e-12, "{mu}");
    }
    let mut last = f64::INFINITY;
    for sigma in [0.2, 0.1, 0.05, 0.025] {
        let mu = pinch_parameter(sigma).unwrap();
        assert!((pinch_gap(mu) - sigma).abs() < 1e-12);
        let k = pinch_knot(sigma, 4096).unwrap();
        assert!((k.length() - TAU).abs() < 1e-10);
        check_invariants(&k);
        let m = k.embeddedness_margin();
        assert!(m <= sigma * (1.0 + 1e-6) && m < last, "{sigma} {m}");
        last = m;
    }
}

#[test]
fn inversion_rescales_speed() {
    // |d(ιγ)/ds| = 1 / ‖γ(s)‖² for unit-speed γ.
    let k = gerono_knot(1024).unwrap().translated(HPoint::new(0.4, 1.5, 0.3));
    let inv = MobiusMatrix::inversion();
    let h = 1e-4;
    for j in (0..k.len()).step_by(53) {
        let s = k.samples()[j].s;
        let img = |s: f64| inv.apply_finite(k.point_at(s)).unwrap();
        let (a, b) = (img(s - h), img(s + h));
        let speed = (b.z() - a.z()).norm() / (2.0 * h);
        let expect = 1.0 / koranyi_norm(k.point_at(s)).powi(2);
        assert!((speed - expect).abs() < 1e-4 * expect);
    }
}

#[test]
fn mobius_images_are_valid_knots() {
    let k = gerono_knot(1024).unwrap().translated(HPoint::new(0.4, 1.5, 0.3));
    let img = mobius_image(&k, &MobiusMatrix::inversion()).unwrap();
    check_invariants(&img.knot);
    for j in (0..k.len()).step_by(97) {
        let s = k.samples()[j].s;
        let expect = invert(k.samples()[j].point.into()).finite().unwrap();
        let got = img.knot.point_at(img.image_arclength(s));
        assert!(close(got, expect, 1e-9), "{j}");
        assert!((img.source_arclength(img.image_arclength(s)) - s).abs() < 1e-10);
    }
}

#[test]
fn curve_specs_parse_strictly() {
    let g = CurveSpec::from_json(r#"{"type":"gerono"}"#).unwrap();
    assert_eq!(g, CurveSpec::Gerono { scale: None });
    let f = CurveSpec::from_json(r#"{"type":"fourier","order":1,"x_coeffs":[0,1,0],"y_coeffs":[0,0,1]}"#).unwrap();
    assert!(matches!(f.build(128), Err(Error::ClosureFailed { .. })));
    let r = CurveSpec::from_json(r#"{"type":"finite_r_circle","p0":[0,1,0],"direction":[1,0]}"#).unwrap();
    assert!(r.build(128).unwrap().is_closed());
    for bad in [
        r#"{"type":"gerono","radius":2}"#,
        r#"{"type":"circle"}"#,
        r#"{"type":"finite_r_circle","p0":[0,1],"direction":[1,0]}"#,
        r#"{"type":"fourier","order":2,"x_coeffs":[0,1,0],"y_coeffs":[0,0,1]}"#,
    ] {
        let parsed = CurveSpec::from_json(bad).and_then(|s| s.build(128).map(|_| ()));
        assert!(matches!(parsed, Err(Error::InvalidArgument(_))), "{bad}");
    }
    let p = CurveSpec::from_json(
        r#"{"type":"perturbed_r_circle","p0":[0,1,0],"direction":[1,0],"order":12,"seed":3,"amplitude":0.05}"#,
    )
    .unwrap();
    let c = p.planar().unwrap().unwrap();
    let l = c.length();
    assert!(c.signed_area().abs() <= 1e-12 * l * l);
    check_invariants(&p.build(256).unwrap());
}
