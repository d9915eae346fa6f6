//! Mellin–Barnes Voronoi transforms against repeated-quadrature oracles.

use vlab_core::mellin::oracle::{gl2_oracle, gl3_oracle, OracleConfig};
use vlab_core::mellin::{gl2_transform, VoronoiTransform};
use vlab_core::{SpectralParams, TestFunction, C64};

fn f() -> TestFunction {
    TestFunction::exp_inverse(1.0, 1.0).unwrap()
}

#[test]
fn gl2_matches_repeated_quadrature() {
    let nu = C64::new(0.3, 0.0);
    let params = SpectralParams::gl2(nu, 0).unwrap();
    let mb = VoronoiTransform::new(&f(), &params).unwrap();
    for t in [1.0, 2.0, -1.0, 0.5, 5.0] {
        let a = mb.eval(t).unwrap();
        let b = gl2_oracle(&f(), nu, t, OracleConfig::default()).unwrap();
        assert!((a - b).norm() < 1e-5, "t = {t}: {a} vs {b}");
    }
    let v = gl2_transform(&f(), &params, 1.0).unwrap();
    assert!((v - mb.eval(1.0).unwrap().re).abs() < 1e-15);
}

#[test]
fn gl3_matches_repeated_quadrature() {
    let lambda = [C64::new(0.4, 0.0), C64::new(0.1, 0.0), C64::new(-0.5, 0.0)];
    let params = SpectralParams::gl3(lambda, [0, 0, 0]).unwrap();
    let mb = VoronoiTransform::new(&f(), &params).unwrap();
    for t in [1.0, 2.0, -1.0, 0.5, 3.0] {
        let a = mb.eval(t).unwrap();
        let b = gl3_oracle(&f(), lambda, [0, 0, 0], t, OracleConfig::default()).unwrap();
        assert!((a - b).norm() < 1e-4, "t = {t}: {a} vs {b}");
    }
}

#[test]
fn gl3_oracle_with_sign_characters() {
    // Odd characters on x₁ and x₃ exercise both halves of the kernel.
    let lambda = [C64::new(0.4, 0.0), C64::new(0.1, 0.0), C64::new(-0.5, 0.0)];
    let delta = [1, 0, 1];
    let params = SpectralParams::gl3(lambda, delta).unwrap();
    let mb = VoronoiTransform::new(&f(), &params).unwrap();
    for t in [1.0, -1.5] {
        let a = mb.eval(t).unwrap();
        let b = gl3_oracle(&f(), lambda, delta, t, OracleConfig::default()).unwrap();
        assert!((a - b).norm() < 1e-4, "t = {t}: {a} vs {b}");
    }
}
