//! Self-check suite behind the `validate` command.
//!
//! Every check reports the tolerance it was held to and the worst residual it
//! observed, so the JSON summary doubles as a numerical health record.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::sync::Arc;

use helicity_core::entanglement::{
    reduced_single, reduced_two, sigma_y, spin_flip_with, wootters_concurrence_with, DensityMatrix2, DensityMatrix4,
    Mode,
};
use helicity_core::kinematics::{boost_z, FourMomentum};
use helicity_core::linalg::{c64, kron, kron_vec, Mat2, Mat4, C64};
use helicity_core::quadrature::MomentumGrid;
use helicity_core::spinrep::{
    alpha_beta, closed_form_helicity_rotation, helicity_rotation, helicity_rotation_for, stable_acosh, wigner_rotation,
    wigner_rotation_for, LorentzPair, SpinorMatrix,
};
use helicity_core::states::{
    correlated_state, gaussian_wavepacket, product_state, Helicity, SingleParticleAmplitude, TwoParticleState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::sweep::VERSION;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    /// Worst residual seen, `None` if the check could not be evaluated.
    pub observed: Option<f64>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub version: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are plain numbers and strings")
    }
}

type Res = helicity_core::Result<f64>;

fn check(name: &'static str, tolerance: f64, f: impl FnOnce() -> Res) -> Check {
    match f() {
        Ok(x) => Check { name, tolerance, observed: Some(x), passed: x <= tolerance, error: None },
        Err(e) => Check { name, tolerance, observed: None, passed: false, error: Some(e.to_string()) },
    }
}

/// Runs the suite with the standard `σ_y`.
pub fn validate() -> ValidationReport {
    validate_with(&sigma_y())
}

/// Runs the suite with a caller-supplied `σ_y` in every spin-flip and
/// concurrence check, so a corrupted matrix can be shown to fail.
pub fn validate_with(sy: &Mat2) -> ValidationReport {
    let checks = vec![
        check("unitarity_helicity_rotation", 1e-12, || spin_image_residual(helicity_rotation)),
        check("unitarity_wigner_rotation", 1e-12, || spin_image_residual(wigner_rotation)),
        check("wigner_cocycle", 1e-10, cocycle_residual),
        check("alpha_beta_oracle", 1e-10, alpha_beta_residual),
        check("closed_form_product", 1e-10, closed_form_residual),
        check("collinear_identity_and_flip", 1e-12, collinear_residual),
        check("z_rotation_invariance", 1e-12, rotation_residual),
        check("quadrature_normalization", 1e-8, quadrature_residual),
        check("spin_flip_fixed_points", 1e-12, || spin_flip_residual(sy)),
        check("concurrence_unit_cases", 1e-10, || concurrence_residual(sy)),
        check("separability", 1e-8, || separability_residual(sy)),
        check("dense_oracle_equivalence", 1e-10, dense_residual),
    ];
    ValidationReport { version: VERSION, passed: checks.iter().all(|c| c.passed), checks }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_momentum(r: &mut ChaCha8Rng) -> helicity_core::Result<(f64, FourMomentum)> {
    let eta = r.gen_range(-5.0..0.0);
    let p = FourMomentum::new(1.0, r.gen_range(1e-6..5.0), r.gen_range(1e-6..PI - 1e-6), r.gen_range(0.0..TAU))?;
    Ok((eta, p))
}

fn spin_image_residual(d: fn(f64, &FourMomentum) -> helicity_core::Result<SpinorMatrix>) -> Res {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..2000 {
        let (eta, p) = random_momentum(&mut r)?;
        let m = d(eta, &p)?;
        worst = worst.max(m.unitarity_defect()).max((m.determinant() - c64(1.0, 0.0)).norm());
    }
    Ok(worst)
}

fn unit_vector(r: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = r.gen_range(-1.0..1.0);
    let phi: f64 = r.gen_range(0.0..TAU);
    let s = (1.0 - z * z).sqrt();
    [s * phi.cos(), s * phi.sin(), z]
}

fn cocycle_residual() -> Res {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let p = FourMomentum::new(1.0, r.gen_range(0.0..3.0), r.gen_range(0.0..PI), r.gen_range(0.0..TAU))?;
        let l1 = LorentzPair::boost(unit_vector(&mut r), r.gen_range(-2.0..2.0))?;
        let l2 = LorentzPair::rotation(unit_vector(&mut r), r.gen_range(0.0..TAU))?
            .compose(&LorentzPair::boost(unit_vector(&mut r), r.gen_range(-2.0..2.0))?);
        let lhs = wigner_rotation_for(&l2.compose(&l1), &p)?;
        let rhs = wigner_rotation_for(&l2, &l1.vector.apply(&p)?)? * wigner_rotation_for(&l1, &p)?;
        worst = worst.max(lhs.dist_up_to_sign(&rhs));
    }
    Ok(worst)
}

fn alpha_beta_residual() -> Res {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..2000 {
        let (eta, p) = random_momentum(&mut r)?;
        let (alpha, beta) = alpha_beta(eta, &p)?;
        let q = boost_z(eta)?.apply(&p)?;
        worst = worst.max((alpha - stable_acosh(q.energy())).abs()).max((beta - q.theta()).abs());
    }
    Ok(worst)
}

fn closed_form_residual() -> Res {
    let mut worst = 0.0f64;
    let n = 8;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let eta = -5.0 * (i as f64 + 0.5) / n as f64;
                let tau = 5.0 * (j as f64 + 0.5) / n as f64;
                let theta = PI * (k as f64 + 0.5) / n as f64;
                let p = FourMomentum::new(1.0, tau, theta, 0.0)?;
                let d = helicity_rotation(eta, &p)?;
                worst = worst.max(closed_form_helicity_rotation(eta, tau, theta)?.dist_up_to_sign(&d));
            }
        }
    }
    Ok(worst)
}

fn flip_matrix() -> SpinorMatrix {
    SpinorMatrix::new(Mat2::from_real([[0.0, 1.0], [-1.0, 0.0]])).expect("det = 1")
}

fn collinear_residual() -> Res {
    let mut worst = 0.0f64;
    for tau in [0.1, 1.0, 3.0] {
        let p = FourMomentum::new(1.0, tau, 0.0, 0.0)?;
        for eta in [-0.05, -0.5, -2.5, -4.0] {
            let d = helicity_rotation(eta, &p)?;
            let want = if eta + tau > 0.0 { SpinorMatrix::identity() } else { flip_matrix() };
            worst = worst.max(d.dist(&want));
        }
    }
    Ok(worst)
}

fn rotation_residual() -> Res {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (_, p) = random_momentum(&mut r)?;
        let lambda = LorentzPair::rotation([0.0, 0.0, 1.0], r.gen_range(0.0..TAU))?;
        worst = worst.max(helicity_rotation_for(&lambda, &p)?.dist_up_to_sign(&SpinorMatrix::identity()));
    }
    Ok(worst)
}

fn quadrature_residual() -> Res {
    let mut worst = 0.0f64;
    for eps in [0.1, 1.0, 10.0] {
        let grid = MomentumGrid::new(32, 32, 8, 8.0 * eps)?;
        let f = gaussian_wavepacket(eps)?;
        worst = worst.max((grid.integrate(|n| f.eval(n.p).powi(2)) - 1.0).abs());
    }
    Ok(worst)
}

fn ket(a: f64, b: f64) -> [C64; 2] {
    [c64(a, 0.0), c64(b, 0.0)]
}

fn bell(sign: f64, parallel: bool) -> helicity_core::Result<DensityMatrix4> {
    let s = FRAC_1_SQRT_2;
    let psi = if parallel {
        [c64(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), c64(sign * s, 0.0)]
    } else {
        [C64::new(0.0, 0.0), c64(s, 0.0), c64(sign * s, 0.0), C64::new(0.0, 0.0)]
    };
    DensityMatrix4::pure(&psi)
}

fn spin_flip_residual(sy: &Mat2) -> Res {
    let s = FRAC_1_SQRT_2;
    let plus_plus = DensityMatrix4::pure(&kron_vec(&ket(s, s), &ket(s, s)))?;
    let minus_minus = DensityMatrix4::pure(&kron_vec(&ket(s, -s), &ket(s, -s)))?;
    let up_up = DensityMatrix4::pure(&kron_vec(&ket(1.0, 0.0), &ket(1.0, 0.0)))?;
    let down_down = DensityMatrix4::pure(&kron_vec(&ket(0.0, 1.0), &ket(0.0, 1.0)))?;
    let pairs = [
        (bell(1.0, true)?, bell(1.0, true)?),
        (bell(-1.0, false)?, bell(-1.0, false)?),
        (plus_plus, minus_minus),
        (up_up, down_down),
    ];
    Ok(pairs.iter().map(|(rho, want)| spin_flip_with(rho, sy).matrix().dist(want.matrix())).fold(0.0, f64::max))
}

fn werner(lambda: f64) -> helicity_core::Result<DensityMatrix4> {
    let singlet = *bell(-1.0, false)?.matrix();
    DensityMatrix4::new(
        singlet.scale(c64(lambda, 0.0)) + DensityMatrix4::maximally_mixed().matrix().scale(c64(1.0 - lambda, 0.0)),
    )
}

fn concurrence_residual(sy: &Mat2) -> Res {
    let s = FRAC_1_SQRT_2;
    let mixed = DensityMatrix2::new(Mat2::from_real([[0.7, 0.2], [0.2, 0.3]]))?;
    let cases = [
        (bell(1.0, true)?, 1.0),
        (bell(-1.0, false)?, 1.0),
        (DensityMatrix4::pure(&kron_vec(&ket(s, s), &ket(s, s)))?, 0.0),
        (DensityMatrix4::pure(&kron_vec(&ket(1.0, 0.0), &ket(1.0, 0.0)))?, 0.0),
        (DensityMatrix4::product(&mixed, &DensityMatrix2::maximally_mixed()), 0.0),
        (werner(1.0 / 3.0)?, 0.0),
        (werner(0.5)?, 0.25),
    ];
    let mut worst = 0.0f64;
    for (rho, want) in &cases {
        worst = worst.max((wootters_concurrence_with(rho, sy)? - want).abs());
    }
    Ok(worst)
}

fn separability_residual(sy: &Mat2) -> Res {
    let mut worst = 0.0f64;
    for eps in [0.01, 1.0, 10.0] {
        let grid = Arc::new(MomentumGrid::new(16, 16, 8, 8.0 * eps)?);
        let f = gaussian_wavepacket(eps)?;
        let state = product_state(&f, &f, Helicity::Plus, Helicity::Plus, grid.clone())?;
        let amp = SingleParticleAmplitude::from_packet(&f, Helicity::Plus, grid).normalized()?;
        for v in [0.3f64, 0.9] {
            let eta = -v.atanh();
            let rho = reduced_two(&state, eta, Mode::Helicity)?;
            let single = reduced_single(&amp, eta, Mode::Helicity)?;
            let factorized = kron(single.matrix(), single.matrix());
            worst = worst.max(rho.matrix().dist(&factorized)).max(wootters_concurrence_with(&rho, sy)?);
        }
    }
    Ok(worst)
}

fn dense_residual() -> Res {
    let grid = Arc::new(MomentumGrid::new(8, 8, 4, 8.0)?);
    let f = gaussian_wavepacket(1.0)?;
    let wide = gaussian_wavepacket(1.5)?;
    let states =
        [product_state(&f, &wide, Helicity::Plus, Helicity::Minus, grid.clone())?, correlated_state(&f, &wide, grid)?];
    let mut worst = 0.0f64;
    for state in &states {
        let dense = TwoParticleState::Dense(state.to_dense());
        for mode in [Mode::Helicity, Mode::Spin] {
            let a: Mat4 = *reduced_two(state, -0.5f64.atanh(), mode)?.matrix();
            let b: Mat4 = *reduced_two(&dense, -0.5f64.atanh(), mode)?.matrix();
            worst = worst.max(a.dist(&b));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_build_passes() {
        let report = validate();
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
        }
        assert_eq!(report.exit_code(), 0);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["checks"].as_array().unwrap().len(), report.checks.len());
        assert!(json["checks"][0]["tolerance"].is_number() && json["checks"][0]["observed"].is_number());
    }

    #[test]
    fn corrupted_sigma_y_fails() {
        let sx = Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]);
        let report = validate_with(&sx);
        assert_eq!(report.exit_code(), 1);
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        assert!(failed.contains(&"spin_flip_fixed_points") && failed.contains(&"concurrence_unit_cases"), "{failed:?}");
        assert!(!failed.contains(&"unitarity_helicity_rotation"));
    }
}
