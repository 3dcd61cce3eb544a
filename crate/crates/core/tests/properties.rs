use std::f64::consts::{PI, TAU};

use helicity_core::entanglement::{wootters_concurrence, DensityMatrix4};
use helicity_core::kinematics::{boost_z, FourMomentum, LorentzTransform};
use helicity_core::linalg::{c64, kron, Mat2, Mat4};
use helicity_core::spinrep::{alpha_beta, helicity_rotation, stable_acosh, wigner_rotation};
use proptest::prelude::*;

fn momentum() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (-5.0..=0.0f64, 1e-6..=5.0f64, 1e-6..PI - 1e-6, 0.0..TAU)
}

fn complex_mat4() -> impl Strategy<Value = Mat4> {
    prop::array::uniform32(-1.0..1.0f64).prop_map(|x| Mat4::from_fn(|i, j| c64(x[4 * i + j], x[16 + 4 * i + j])))
}

fn unitary2() -> impl Strategy<Value = Mat2> {
    (0.0..TAU, 0.0..PI, 0.0..TAU, 0.0..TAU).prop_map(|(a, b, c, g)| {
        let rz = |x: f64| Mat2::diagonal([c64(0.0, -x / 2.0).exp(), c64(0.0, x / 2.0).exp()]);
        let (s, co) = (b / 2.0).sin_cos();
        (rz(a) * Mat2::from_real([[co, -s], [s, co]]) * rz(c)).scale(c64(0.0, g).exp())
    })
}

fn density(b: Mat4) -> DensityMatrix4 {
    let m = b * b.adjoint();
    let tr = m.trace().re;
    let m = m.scale(c64(1.0 / tr, 0.0));
    DensityMatrix4::new((m + m.adjoint()).scale(c64(0.5, 0.0))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn spin_images_are_special_unitary((eta, tau, theta, phi) in momentum()) {
        let p = FourMomentum::new(1.0, tau, theta, phi).unwrap();
        for d in [helicity_rotation(eta, &p).unwrap(), wigner_rotation(eta, &p).unwrap()] {
            prop_assert!(d.unitarity_defect() <= 1e-12, "unitarity {}", d.unitarity_defect());
            prop_assert!((d.determinant() - c64(1.0, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn alpha_beta_match_the_boosted_vector((eta, tau, theta, phi) in momentum()) {
        let p = FourMomentum::new(1.0, tau, theta, phi).unwrap();
        let (alpha, beta) = alpha_beta(eta, &p).unwrap();
        let q = boost_z(eta).unwrap().apply(&p).unwrap();
        let [e, _, _, _] = q.components();
        prop_assert!((alpha - stable_acosh(e)).abs() <= 1e-10 * alpha.max(1.0));
        prop_assert!((beta - q.theta()).abs() <= 1e-10);
    }

    #[test]
    fn boosts_preserve_mass((eta, tau, theta, phi) in momentum(), m in 0.1..10.0f64) {
        let p = FourMomentum::new(m, tau, theta, phi).unwrap();
        let q = boost_z(eta).unwrap().apply(&p).unwrap();
        prop_assert!((q.mass() - m).abs() <= 1e-12 * m);
        prop_assert!(q.shell_defect() <= 1e-12);
        prop_assert!(q.energy() >= m);
    }

    #[test]
    fn composed_transforms_act_consistently(
        (eta, tau, theta, phi) in momentum(),
        axis in prop::array::uniform3(-1.0..1.0f64),
        angle in 0.0..TAU,
    ) {
        let n = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(n > 0.1);
        let axis = axis.map(|x| x / n);
        let p = FourMomentum::new(1.0, tau, theta, phi).unwrap();
        let r = LorentzTransform::rotation(axis, angle).unwrap();
        let b = boost_z(eta).unwrap();
        let two_step = b.apply(&r.apply(&p).unwrap()).unwrap();
        let one_step = (b * r).apply(&p).unwrap();
        let (x, y) = (two_step.components(), one_step.components());
        for k in 0..4 {
            prop_assert!((x[k] - y[k]).abs() <= 1e-10 * x[0]);
        }
    }

    #[test]
    fn concurrence_is_bounded(b in complex_mat4()) {
        let c = wootters_concurrence(&density(b)).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
    }

    #[test]
    fn concurrence_ignores_local_unitaries(b in complex_mat4(), ua in unitary2(), ub in unitary2()) {
        let rho = density(b);
        let u = kron(&ua, &ub);
        let moved = DensityMatrix4::new(u * *rho.matrix() * u.adjoint()).unwrap();
        let (c0, c1) = (wootters_concurrence(&rho).unwrap(), wootters_concurrence(&moved).unwrap());
        prop_assert!((c0 - c1).abs() <= 1e-10, "{c0} vs {c1}");
    }
}
