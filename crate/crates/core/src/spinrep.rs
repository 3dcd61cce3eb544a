//! Spin-½ images of rotations and boosts in SL(2,C), the Wigner rotation and
//! the helicity rotation `Z(Λ,p) = R⁻¹(Λp) W(Λ,p) R(p)`.
//!
//! A 2×2 matrix `A` acts on momenta through `X ↦ A X A†` with
//! `X = p⁰ I + p⃗·σ⃗`. With that action
//!
//! * rotations are `exp(−i ω n̂·σ⃗/2)`,
//! * boosts are `exp(ζ n̂·σ⃗/2)`,
//!
//! so `d_boost_z(ζ) = diag(e^{ζ/2}, e^{−ζ/2})` and
//! `d_rotation(ŷ, a) = [[cos a/2, −sin a/2], [sin a/2, cos a/2]]`.
//! The helicity frame of a momentum is `D[R(p)] = D[R_z(φ)] D[R_y(θ)]`.
//!
//! SL(2,C) double covers the Lorentz group, so matrices composed along
//! different paths may differ by an overall sign. Comparisons between
//! independently built elements use [`SpinorMatrix::dist_up_to_sign`].

use core::f64::consts::PI;
use core::ops::Mul;

use crate::error::{invalid, Error, Result};
use crate::kinematics::{self, FourMomentum, LorentzTransform, RAPIDITY_CAP};
use crate::linalg::{c64, pauli, Mat2, C64};
#[allow(unused_imports)]
use num_traits::Float;

/// 2×2 complex matrix representing a Lorentz transformation on spin-½ states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinorMatrix(Mat2);

impl SpinorMatrix {
    pub fn identity() -> Self {
        SpinorMatrix(Mat2::identity())
    }

    /// Wraps a matrix after checking `det = 1` to `1e-12`.
    pub fn new(m: Mat2) -> Result<Self> {
        let det = m.determinant();
        if (det - c64(1.0, 0.0)).norm() > 1e-12 * m.max_abs().max(1.0).powi(2) {
            return Err(invalid!("determinant {det} is not 1"));
        }
        Ok(SpinorMatrix(m))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat2 {
        self.0
    }

    pub fn determinant(&self) -> C64 {
        self.0.determinant()
    }

    pub fn adjoint(&self) -> Self {
        SpinorMatrix(self.0.adjoint())
    }

    /// Exact inverse of a unit-determinant matrix.
    pub fn inverse(&self) -> Self {
        let m = &self.0 .0;
        SpinorMatrix(Mat2::from_fn(|i, j| match (i, j) {
            (0, 0) => m[1][1],
            (1, 1) => m[0][0],
            _ => -m[i][j],
        }))
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.0.unitarity_defect()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.0.dist(&other.0)
    }

    /// `min over s ∈ {+1, −1} of ‖s·A − B‖∞`.
    pub fn dist_up_to_sign(&self, other: &Self) -> f64 {
        self.0.dist(&other.0).min(self.0.dist(&(-other.0)))
    }

    /// The 4×4 Lorentz matrix `Λ^μ_ν = ½ tr(σ_μ A σ_ν A†)` (`σ_0 = I`).
    pub fn to_lorentz(&self) -> Result<LorentzTransform> {
        let [sx, sy, sz] = pauli();
        let basis = [Mat2::identity(), sx, sy, sz];
        let a = self.0;
        let ad = a.adjoint();
        let mut m = [[0.0; 4]; 4];
        for (mu, row) in m.iter_mut().enumerate() {
            for (nu, entry) in row.iter_mut().enumerate() {
                *entry = 0.5 * (basis[mu] * a * basis[nu] * ad).trace().re;
            }
        }
        LorentzTransform::from_matrix(m)
    }
}

impl Mul for SpinorMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        SpinorMatrix(self.0 * rhs.0)
    }
}

fn check_axis(axis: [f64; 3]) -> Result<()> {
    let n = axis[0].hypot(axis[1]).hypot(axis[2]);
    if !n.is_finite() || (n - 1.0).abs() > 1e-12 {
        return Err(invalid!("axis must be a unit vector (norm {n})"));
    }
    Ok(())
}

fn check_rapidity(value: f64) -> Result<()> {
    if !value.is_finite() || value.abs() > RAPIDITY_CAP {
        return Err(invalid!("rapidity {value} outside [-{RAPIDITY_CAP}, {RAPIDITY_CAP}]"));
    }
    Ok(())
}

/// `exp(−i·angle·(n̂·σ⃗)/2)`.
pub fn d_rotation(axis: [f64; 3], angle: f64) -> Result<SpinorMatrix> {
    check_axis(axis)?;
    if !angle.is_finite() {
        return Err(invalid!("rotation angle must be finite"));
    }
    let (s, c) = (0.5 * angle).sin_cos();
    let [x, y, z] = axis;
    Ok(SpinorMatrix(Mat2::from_fn(|i, j| match (i, j) {
        (0, 0) => c64(c, -s * z),
        (0, 1) => c64(-s * y, -s * x),
        (1, 0) => c64(s * y, -s * x),
        _ => c64(c, s * z),
    })))
}

/// `d_rotation(ŷ, angle)`: `[[cos a/2, −sin a/2], [sin a/2, cos a/2]]`.
pub fn d_rotation_y(angle: f64) -> SpinorMatrix {
    let (s, c) = (0.5 * angle).sin_cos();
    SpinorMatrix(Mat2::from_real([[c, -s], [s, c]]))
}

/// `d_rotation(ẑ, angle)`: `diag(e^{−i a/2}, e^{i a/2})`.
pub fn d_rotation_z(angle: f64) -> SpinorMatrix {
    let (s, c) = (0.5 * angle).sin_cos();
    SpinorMatrix(Mat2::diagonal([c64(c, -s), c64(c, s)]))
}

/// `diag(e^{ζ/2}, e^{−ζ/2})`.
pub fn d_boost_z(rapidity: f64) -> Result<SpinorMatrix> {
    check_rapidity(rapidity)?;
    Ok(boost_z_unchecked(rapidity))
}

fn boost_z_unchecked(rapidity: f64) -> SpinorMatrix {
    let h = (0.5 * rapidity).exp();
    SpinorMatrix(Mat2::diagonal([c64(h, 0.0), c64(1.0 / h, 0.0)]))
}

/// `exp(ζ n̂·σ⃗/2) = cosh(ζ/2) I + sinh(ζ/2) n̂·σ⃗`.
pub fn d_boost(axis: [f64; 3], rapidity: f64) -> Result<SpinorMatrix> {
    check_axis(axis)?;
    check_rapidity(rapidity)?;
    let (ch, sh) = ((0.5 * rapidity).cosh(), (0.5 * rapidity).sinh());
    let [x, y, z] = axis;
    Ok(SpinorMatrix(crate::linalg::Mat([
        [c64(ch + sh * z, 0.0), c64(sh * x, -sh * y)],
        [c64(sh * x, sh * y), c64(ch - sh * z, 0.0)],
    ])))
}

/// `D[R(p)] = D[R_z(φ)] D[R_y(θ)]`; the identity for a momentum at rest.
pub fn d_helicity_frame(p: &FourMomentum) -> SpinorMatrix {
    if p.is_direction_degenerate() {
        return SpinorMatrix::identity();
    }
    d_rotation_z(p.phi()) * d_rotation_y(p.theta())
}

/// `D[L(p)] = D[R(p)] D[B(τ)] D[R(p)]⁻¹`.
pub fn d_pure_boost(p: &FourMomentum) -> SpinorMatrix {
    let frame = d_helicity_frame(p);
    frame * boost_z_unchecked(p.tau()) * frame.inverse()
}

/// A Lorentz transformation given both as its SL(2,C) image and its 4×4
/// vector matrix. The two must describe the same element.
#[derive(Clone, Copy, Debug)]
pub struct LorentzPair {
    pub spinor: SpinorMatrix,
    pub vector: LorentzTransform,
}

impl LorentzPair {
    pub fn from_spinor(spinor: SpinorMatrix) -> Result<Self> {
        Ok(Self { spinor, vector: spinor.to_lorentz()? })
    }

    pub fn boost_z(eta: f64) -> Result<Self> {
        Ok(Self { spinor: d_boost_z(eta)?, vector: kinematics::boost_z(eta)? })
    }

    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        Ok(Self { spinor: d_rotation(axis, angle)?, vector: LorentzTransform::rotation(axis, angle)? })
    }

    pub fn boost(axis: [f64; 3], rapidity: f64) -> Result<Self> {
        Ok(Self { spinor: d_boost(axis, rapidity)?, vector: LorentzTransform::boost(axis, rapidity)? })
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self { spinor: self.spinor * rhs.spinor, vector: self.vector * rhs.vector }
    }
}

/// `D[W(Λ,p)] = D[L(Λp)]⁻¹ D[Λ] D[L(p)]` for an arbitrary Lorentz element.
pub fn wigner_rotation_for(lambda: &LorentzPair, p: &FourMomentum) -> Result<SpinorMatrix> {
    let q = lambda.vector.apply(p)?;
    Ok(project_su2(&(d_pure_boost(&q).inverse() * lambda.spinor * d_pure_boost(p))))
}

/// Wigner rotation for the z-boost with rapidity `eta`.
pub fn wigner_rotation(eta: f64, p: &FourMomentum) -> Result<SpinorMatrix> {
    wigner_rotation_for(&LorentzPair::boost_z(eta)?, p)
}

/// `D[Z(Λ,p)] = D[R(Λp)]⁻¹ D[W(Λ,p)] D[R(p)]` for an arbitrary Lorentz element.
///
/// Fails when `Λp` is at rest: the helicity frame of the image is undefined.
pub fn helicity_rotation_for(lambda: &LorentzPair, p: &FourMomentum) -> Result<SpinorMatrix> {
    let q = lambda.vector.apply(p)?;
    if q.is_direction_degenerate() {
        return Err(Error::DegenerateMomentum(alloc::format!(
            "transformed momentum is at rest (tau = {}, theta = {}); its helicity axis is undefined",
            p.tau(),
            p.theta()
        )));
    }
    let w = d_pure_boost(&q).inverse() * lambda.spinor * d_pure_boost(p);
    Ok(project_su2(&(d_helicity_frame(&q).inverse() * w * d_helicity_frame(p))))
}

/// Nearest matrix of the form `[[a, −b̄], [b, ā]]` with `|a|² + |b|² = 1`.
///
/// Wigner and helicity rotations are exactly in SU(2), but the boost factors
/// they are built from have entries up to `e^{|η|/2 + τ/2}`, so the raw
/// product drifts from unitarity by that factor times round-off.
fn project_su2(m: &SpinorMatrix) -> SpinorMatrix {
    let m = m.matrix();
    let a = (m[(0, 0)] + m[(1, 1)].conj()) * 0.5;
    let b = (m[(1, 0)] - m[(0, 1)].conj()) * 0.5;
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    SpinorMatrix(Mat2::from_fn(|i, j| match (i, j) {
        (0, 0) => a,
        (0, 1) => -b.conj(),
        (1, 0) => b,
        _ => a.conj(),
    }))
}

/// Helicity rotation for the z-boost with rapidity `eta`.
pub fn helicity_rotation(eta: f64, p: &FourMomentum) -> Result<SpinorMatrix> {
    helicity_rotation_for(&LorentzPair::boost_z(eta)?, p)
}

/// Rapidity `α ≥ 0` and polar angle `β ∈ [0, π]` of a z-boosted momentum,
/// from the closed forms
///
/// `cosh α = cosh η cosh τ + sinh η sinh τ cos θ`,
/// `cos β = (sinh η cosh τ + cosh η sinh τ cos θ) / √(sinh²τ sin²θ + (…)²)`.
pub fn alpha_beta(eta: f64, p: &FourMomentum) -> Result<(f64, f64)> {
    check_rapidity(eta)?;
    let (tau, theta) = (p.tau(), p.theta());
    let (sin_t, cos_t) = if p.theta() == 0.0 {
        (0.0, 1.0)
    } else if p.theta() == PI {
        (0.0, -1.0)
    } else {
        theta.sin_cos()
    };
    let (ch_e, sh_e) = (eta.cosh(), eta.sinh());
    let (ch_t, sh_t) = (tau.cosh(), tau.sinh());
    let longitudinal = sh_e * ch_t + ch_e * sh_t * cos_t;
    let transverse = sh_t * sin_t;
    let denom = transverse.hypot(longitudinal);
    if denom == 0.0 {
        return Err(Error::DegenerateMomentum(alloc::format!(
            "boosted momentum is at rest (eta = {eta}, tau = {tau}, theta = {theta})"
        )));
    }
    let cosh_alpha = ch_e * ch_t + sh_e * sh_t * cos_t;
    // Near α = 0 the arccosh of a number close to 1 is ill-conditioned; the
    // denominator above equals sinh α, which stays well conditioned there.
    let alpha = if cosh_alpha >= 2.0 { stable_acosh(cosh_alpha) } else { denom.asinh() };
    // atan2 with sin β = transverse / denom is the same angle as acos(cos β)
    // but keeps full precision at the ends of [0, π].
    let beta = transverse.atan2(longitudinal);
    Ok((alpha, beta))
}

/// `arccosh x = log1p((x − 1) + √((x − 1)(x + 1)))`.
pub fn stable_acosh(x: f64) -> f64 {
    let t = x - 1.0;
    (t + (t * (x + 1.0)).sqrt()).ln_1p()
}

/// The helicity rotation of a z-boost written as the literal five-factor
/// product for a momentum in the `xz` half-plane (`φ = 0`):
///
/// `diag(e^{−α/2}, e^{α/2}) · R_y(β)⁻¹ · diag(e^{η/2}, e^{−η/2}) · R_y(θ) · diag(e^{τ/2}, e^{−τ/2})`.
///
/// Independent of [`helicity_rotation`] apart from the shared matrix
/// conventions; the two agree up to a global sign.
pub fn closed_form_helicity_rotation(eta: f64, tau: f64, theta: f64) -> Result<SpinorMatrix> {
    let p = FourMomentum::new(1.0, tau, theta, 0.0)?;
    let (alpha, beta) = alpha_beta(eta, &p)?;
    let (sb, cb) = (0.5 * beta).sin_cos();
    let (st, ct) = if theta == 0.0 { (0.0, 1.0) } else { (0.5 * theta).sin_cos() };
    let diag = |x: f64| Mat2::from_real([[(0.5 * x).exp(), 0.0], [0.0, (-0.5 * x).exp()]]);
    let m = diag(-alpha)
        * Mat2::from_real([[cb, sb], [-sb, cb]])
        * diag(eta)
        * Mat2::from_real([[ct, -st], [st, ct]])
        * diag(tau);
    Ok(SpinorMatrix(m))
}

#[cfg(test)]
mod tests {
    extern crate std;
    use super::*;
    use core::f64::consts::TAU;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn momentum(tau: f64, theta: f64, phi: f64) -> FourMomentum {
        FourMomentum::new(1.0, tau, theta, phi).unwrap()
    }

    fn flip() -> SpinorMatrix {
        SpinorMatrix(Mat2::from_real([[0.0, 1.0], [-1.0, 0.0]]))
    }

    fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
        let ct: f64 = rng.gen_range(-1.0..1.0);
        let st = (1.0 - ct * ct).sqrt();
        let ph: f64 = rng.gen_range(0.0..TAU);
        [st * ph.cos(), st * ph.sin(), ct]
    }

    #[test]
    fn rotation_basics() {
        assert!(d_rotation([0.0, 0.0, 1.0], 0.0).unwrap().dist(&SpinorMatrix::identity()) < 1e-16);
        let full = d_rotation([0.6, 0.0, 0.8], TAU).unwrap();
        assert!(full.dist(&SpinorMatrix(-Mat2::identity())) < 1e-15);
        let th = 0.9f64;
        let ry = d_rotation([0.0, 1.0, 0.0], th).unwrap();
        let (s, c) = (th / 2.0).sin_cos();
        let want = Mat2::from_real([[c, -s], [s, c]]);
        assert!(ry.matrix().dist(&want) < 1e-16);
        assert!(ry.dist(&d_rotation_y(th)) < 1e-16);
        assert!(d_rotation([0.0, 0.0, 1.0], 0.4).unwrap().dist(&d_rotation_z(0.4)) < 1e-16);
        assert!(d_rotation([1.0, 1.0, 0.0], 0.4).is_err());
    }

    #[test]
    fn boost_basics() {
        assert!(d_boost_z(0.0).unwrap().dist(&SpinorMatrix::identity()) == 0.0);
        let ab = d_boost_z(0.3).unwrap() * d_boost_z(-1.2).unwrap();
        assert!(ab.dist(&d_boost_z(-0.9).unwrap()) < 1e-15);
        let t = 1.7f64;
        let b = d_boost_z(t).unwrap();
        assert!((b.matrix()[(0, 0)].re - (t / 2.0).exp()).abs() < 1e-15);
        assert!((b.matrix()[(1, 1)].re - (-t / 2.0).exp()).abs() < 1e-15);
        assert!(b.matrix().hermiticity_defect() == 0.0);
        assert!(b.unitarity_defect() > 0.1);
        assert!(d_boost_z(41.0).is_err());
        assert!(d_boost([0.0, 0.0, 1.0], t).unwrap().dist(&b) < 1e-15);
    }

    #[test]
    fn spinor_images_match_vector_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..500 {
            let n = random_unit(&mut rng);
            let w: f64 = rng.gen_range(0.0..TAU);
            let z: f64 = rng.gen_range(-3.0..3.0);
            let rot = d_rotation(n, w).unwrap().to_lorentz().unwrap();
            assert!(rot.max_abs_diff(&LorentzTransform::rotation(n, w).unwrap()) < 1e-14);
            let boost = d_boost(n, z).unwrap().to_lorentz().unwrap();
            assert!(boost.max_abs_diff(&LorentzTransform::boost(n, z).unwrap()) < 1e-12);
        }
        let eta = -0.7;
        let bz = d_boost_z(eta).unwrap().to_lorentz().unwrap();
        assert!(bz.max_abs_diff(&kinematics::boost_z(eta).unwrap()) < 1e-15);
    }

    #[test]
    fn wigner_rotation_trivial_cases() {
        let p = momentum(0.8, 1.1, 0.3);
        assert!(wigner_rotation(0.0, &p).unwrap().dist(&SpinorMatrix::identity()) < 1e-15);
        let pz = momentum(0.8, 0.0, 0.0);
        assert!(wigner_rotation(-1.9, &pz).unwrap().dist_up_to_sign(&SpinorMatrix::identity()) < 1e-13);
        // a particle at rest picks up no Wigner rotation under any boost
        let rest = FourMomentum::at_rest(1.0).unwrap();
        assert!(wigner_rotation(-2.0, &rest).unwrap().dist_up_to_sign(&SpinorMatrix::identity()) < 1e-13);
    }

    #[test]
    fn wigner_rotation_matches_vector_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut worst: f64 = 0.0;
        for _ in 0..2000 {
            let eta: f64 = rng.gen_range(-5.0..0.0);
            let p = momentum(rng.gen_range(1e-3..5.0), rng.gen_range(1e-3..PI), rng.gen_range(0.0..TAU));
            let d = wigner_rotation(eta, &p).unwrap();
            assert!(d.unitarity_defect() <= 1e-12);
            let lambda = kinematics::boost_z(eta).unwrap();
            let q = lambda.apply(&p).unwrap();
            let w = kinematics::pure_boost(&q).unwrap().inverse() * lambda * kinematics::pure_boost(&p).unwrap();
            let (axis, angle) = w.rotation_axis_angle().unwrap();
            let oracle = d_rotation(axis, angle).unwrap();
            worst = worst.max(d.dist_up_to_sign(&oracle));
        }
        std::println!("worst wigner oracle {worst:e}");
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn helicity_rotation_collinear_cases() {
        let p = momentum(0.8, 0.7, 0.2);
        assert!(helicity_rotation(0.0, &p).unwrap().dist(&SpinorMatrix::identity()) < 1e-15);
        let pz = momentum(1.5, 0.0, 0.0);
        assert!(helicity_rotation(-0.5, &pz).unwrap().dist(&SpinorMatrix::identity()) < 1e-12);
        let z = helicity_rotation(-2.5, &pz).unwrap();
        assert!(z.dist(&flip()) < 1e-12, "{z:?}");
        assert!(matches!(helicity_rotation(-1.5, &pz), Err(Error::DegenerateMomentum(_))));
    }

    #[test]
    fn closed_form_matches_composed_rotation() {
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            for j in 0..20 {
                for k in 0..20 {
                    let eta = -3.0 * i as f64 / 19.0;
                    let tau = 3.0 * (j as f64 + 0.5) / 20.0;
                    let theta = PI * (k as f64 + 0.5) / 20.0;
                    let p = momentum(tau, theta, 0.0);
                    let a = helicity_rotation(eta, &p).unwrap();
                    let b = closed_form_helicity_rotation(eta, tau, theta).unwrap();
                    worst = worst.max(a.dist_up_to_sign(&b));
                }
            }
        }
        assert!(worst <= 1e-10, "{worst}");
        assert!(closed_form_helicity_rotation(0.0, 1.2, 0.4).unwrap().dist(&SpinorMatrix::identity()) < 1e-14);
        assert!(closed_form_helicity_rotation(-2.0, 0.5, 0.0).unwrap().dist(&flip()) < 1e-12);
    }

    #[test]
    fn alpha_beta_closed_forms() {
        let p = momentum(0.4, 0.0, 0.0);
        let (a, b) = alpha_beta(1.1, &p).unwrap();
        assert!((a - 1.5).abs() < 1e-14 && b == 0.0);
        let (a, b) = alpha_beta(-1.1, &p).unwrap();
        assert!((a - 0.7).abs() < 1e-14 && b == PI);
        assert!(matches!(alpha_beta(-0.4, &p), Err(Error::DegenerateMomentum(_))));
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..2000 {
            let eta: f64 = rng.gen_range(-5.0..0.0);
            let p = momentum(rng.gen_range(1e-3..5.0), rng.gen_range(1e-3..PI), rng.gen_range(0.0..TAU));
            let (a, b) = alpha_beta(eta, &p).unwrap();
            let q = kinematics::boost_z(eta).unwrap().apply_vector(p.components());
            let oracle_a = q[0].acosh();
            let oracle_b = q[1].hypot(q[2]).atan2(q[3]);
            assert!((a - oracle_a).abs() < 1e-10 && (b - oracle_b).abs() < 1e-10);
        }
    }

    #[test]
    fn stable_acosh_near_one() {
        let x: f64 = 1.0 + 1e-12;
        let t = x - 1.0;
        let series = (2.0 * t).sqrt() * (1.0 - t / 12.0);
        assert!((stable_acosh(x) - series).abs() < 1e-20);
        assert_eq!(stable_acosh(1.0), 0.0);
        assert!((stable_acosh(10.0) - 10f64.acosh()).abs() < 1e-14);
    }

    #[test]
    fn z_rotations_leave_helicity_untouched() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..1000 {
            let p = momentum(rng.gen_range(1e-3..5.0), rng.gen_range(1e-3..PI - 1e-3), rng.gen_range(0.0..TAU));
            let psi: f64 = rng.gen_range(0.0..TAU);
            let lambda = LorentzPair::rotation([0.0, 0.0, 1.0], psi).unwrap();
            let z = helicity_rotation_for(&lambda, &p).unwrap();
            assert!(z.dist_up_to_sign(&SpinorMatrix::identity()) <= 1e-12);
        }
    }

    #[test]
    fn general_rotations_give_diagonal_phase() {
        // Z = R⁻¹(Λp) Λ R(p) fixes ẑ, so it is a pure phase in the helicity basis.
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..500 {
            let p = momentum(rng.gen_range(0.1..3.0), rng.gen_range(0.1..PI - 0.1), rng.gen_range(0.0..TAU));
            let lambda = LorentzPair::rotation(random_unit(&mut rng), rng.gen_range(0.0..TAU)).unwrap();
            let z = helicity_rotation_for(&lambda, &p).unwrap();
            assert!(z.matrix()[(0, 1)].norm() < 1e-10 && z.matrix()[(1, 0)].norm() < 1e-10);
        }
    }

    #[test]
    fn wigner_cocycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..500 {
            let p = momentum(rng.gen_range(0.0..3.0), rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU));
            let l1 = LorentzPair::boost(random_unit(&mut rng), rng.gen_range(-2.0..2.0)).unwrap();
            let l2 = LorentzPair::rotation(random_unit(&mut rng), rng.gen_range(0.0..TAU))
                .unwrap()
                .compose(&LorentzPair::boost(random_unit(&mut rng), rng.gen_range(-2.0..2.0)).unwrap());
            let lhs = wigner_rotation_for(&l2.compose(&l1), &p).unwrap();
            let p1 = l1.vector.apply(&p).unwrap();
            let rhs = wigner_rotation_for(&l2, &p1).unwrap() * wigner_rotation_for(&l1, &p).unwrap();
            assert!(lhs.dist_up_to_sign(&rhs) <= 1e-10);
        }
    }

    #[test]
    fn phi_independence_for_z_boosts() {
        let eta = -1.3;
        let mut worst: f64 = 0.0;
        for k in 0..16 {
            let phi = TAU * k as f64 / 16.0;
            let z0 = helicity_rotation(eta, &momentum(0.9, 1.0, 0.0)).unwrap();
            let z = helicity_rotation(eta, &momentum(0.9, 1.0, phi)).unwrap();
            worst = worst.max(z.dist(&z0));
        }
        assert!(worst < 1e-12, "{worst}");
    }
}
