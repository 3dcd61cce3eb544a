//! On-shell four-momenta and the 4×4 vector representation of rotations and
//! boosts.
//!
//! Conventions: components are ordered `(t, x, y, z)`, the metric is
//! `diag(1, −1, −1, −1)`, and `c = ħ = 1`. Masses are positive; the rest of the
//! crate works with `m = 1`, so momenta and widths are quoted in units of the
//! mass.

use core::f64::consts::{PI, TAU};
use core::ops::Mul;

use crate::error::{invalid, Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Largest admissible rapidity magnitude. `e^40 ≈ 2.4e17` is the last decade
/// before `cosh`/`sinh` differences lose every significant digit.
pub const RAPIDITY_CAP: f64 = 40.0;

/// Minkowski metric signature.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

pub type Matrix4 = [[f64; 4]; 4];

fn check_rapidity(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(invalid!("{name} must be finite, got {value}"));
    }
    if value.abs() > RAPIDITY_CAP {
        return Err(invalid!("|{name}| = {} exceeds the rapidity cap {RAPIDITY_CAP}", value.abs()));
    }
    Ok(())
}

fn check_angles(theta: f64, phi: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) {
        return Err(invalid!("polar angle {theta} outside [0, pi]"));
    }
    if !(0.0..TAU).contains(&phi) {
        return Err(invalid!("azimuthal angle {phi} outside [0, 2pi)"));
    }
    Ok(())
}

/// Momentum of a particle of mass `m`:
/// `p = m (cosh τ, sinh τ sinθ cosφ, sinh τ sinθ sinφ, sinh τ cosθ)`.
///
/// When the direction is undefined (`τ = 0`) or lies on the z axis the azimuth
/// is canonicalised to `φ = 0`, so two momenta that are equal as vectors
/// always carry the same helicity frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourMomentum {
    mass: f64,
    tau: f64,
    theta: f64,
    phi: f64,
    components: [f64; 4],
    degenerate: bool,
}

impl FourMomentum {
    pub fn new(mass: f64, tau: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(invalid!("mass must be positive and finite, got {mass}"));
        }
        if tau.is_nan() || tau < 0.0 {
            return Err(invalid!("rapidity tau must be non-negative, got {tau}"));
        }
        check_rapidity("tau", tau)?;
        check_angles(theta, phi)?;
        let degenerate = tau == 0.0;
        let (theta, phi) = if degenerate {
            (0.0, 0.0)
        } else if theta == 0.0 || theta == PI {
            (theta, 0.0)
        } else {
            (theta, phi)
        };
        let (sin_t, cos_t) = theta.sin_cos();
        let (sin_p, cos_p) = phi.sin_cos();
        let k = mass * tau.sinh();
        // sin(π) is not exactly zero in floating point
        let transverse = if theta == 0.0 || theta == PI { 0.0 } else { k * sin_t };
        let components = [mass * tau.cosh(), transverse * cos_p, transverse * sin_p, k * cos_t];
        Ok(Self { mass, tau, theta, phi, components, degenerate })
    }

    pub fn at_rest(mass: f64) -> Result<Self> {
        Self::new(mass, 0.0, 0.0, 0.0)
    }

    /// Rebuilds a momentum from Cartesian components, recovering `(τ, θ, φ)`.
    ///
    /// Off-shell drift beyond `1e-9` (relative to `(p⁰)²`) is reported as an
    /// internal-consistency error. Smaller drift is removed by resetting
    /// `p⁰ = √(m² + |p⃗|²)`, keeping the spatial part as given.
    pub fn from_components(mass: f64, components: [f64; 4]) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(invalid!("mass must be positive and finite, got {mass}"));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(invalid!("non-finite momentum components"));
        }
        let [e, x, y, z] = components;
        let transverse = x.hypot(y);
        let k = transverse.hypot(z);
        let drift = (e * e - k * k - mass * mass).abs() / (e * e).max(mass * mass);
        if drift > 1e-9 || e <= 0.0 {
            return Err(Error::InternalConsistency(alloc::format!(
                "momentum ({e}, {x}, {y}, {z}) is off the mass shell m = {mass} (relative drift {drift:e})"
            )));
        }
        let e = mass.hypot(k);
        let components = [e, x, y, z];
        let degenerate = k <= 16.0 * f64::EPSILON * e;
        let tau = if degenerate { 0.0 } else { (k / mass).asinh() };
        check_rapidity("tau", tau)?;
        let (theta, phi) = if degenerate {
            (0.0, 0.0)
        } else if transverse == 0.0 {
            (if z > 0.0 { 0.0 } else { PI }, 0.0)
        } else {
            let mut phi = y.atan2(x);
            if phi < 0.0 {
                phi += TAU;
            }
            if phi >= TAU {
                phi = 0.0;
            }
            (transverse.atan2(z), phi)
        };
        Ok(Self { mass, tau, theta, phi, components, degenerate })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Rapidity `τ ≥ 0`.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `(p⁰, pˣ, pʸ, pᶻ)`.
    pub fn components(&self) -> [f64; 4] {
        self.components
    }

    pub fn energy(&self) -> f64 {
        self.components[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.components[1], self.components[2], self.components[3]]
    }

    /// `|p⃗|`.
    pub fn magnitude(&self) -> f64 {
        let [_, x, y, z] = self.components;
        x.hypot(y).hypot(z)
    }

    /// True when `|p⃗| = 0`, i.e. the helicity axis is undefined.
    pub fn is_direction_degenerate(&self) -> bool {
        self.degenerate
    }

    /// `|(p⁰)² − |p⃗|² − m²| / (p⁰)²`.
    pub fn shell_defect(&self) -> f64 {
        let e = self.energy();
        let k = self.magnitude();
        (e * e - k * k - self.mass * self.mass).abs() / (e * e)
    }

    /// `√((p⁰)² − |p⃗|²)` from the Cartesian components.
    pub fn invariant_mass(&self) -> f64 {
        let e = self.energy();
        let k = self.magnitude();
        ((e - k) * (e + k)).max(0.0).sqrt()
    }
}

/// What a [`LorentzTransform`] is known to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformKind {
    Rotation,
    Boost,
    General,
}

/// Proper orthochronous Lorentz transformation acting on `(t, x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzTransform {
    matrix: Matrix4,
    kind: TransformKind,
}

impl LorentzTransform {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self { matrix: m, kind: TransformKind::Rotation }
    }

    /// Wraps an arbitrary matrix after checking it is a proper orthochronous
    /// Lorentz matrix. Tolerance on `ΛᵀηΛ = η` scales with `(Λ⁰₀)²`.
    pub fn from_matrix(matrix: Matrix4) -> Result<Self> {
        if matrix.iter().flatten().any(|x| !x.is_finite()) {
            return Err(invalid!("non-finite Lorentz matrix"));
        }
        let candidate = Self { matrix, kind: TransformKind::General };
        let scale = matrix[0][0].abs().max(1.0);
        if candidate.metric_defect() > 1e-9 * scale * scale {
            return Err(invalid!("matrix does not preserve the Minkowski metric"));
        }
        if matrix[0][0] < 1.0 - 1e-9 * scale {
            return Err(invalid!("matrix is not orthochronous (L00 = {})", matrix[0][0]));
        }
        if candidate.determinant() <= 0.0 {
            return Err(invalid!("matrix is not proper (det <= 0)"));
        }
        Ok(candidate)
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.matrix
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    /// Rotation by `angle` about the unit `axis` (active, right-handed).
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = axis[0].hypot(axis[1]).hypot(axis[2]);
        if (n - 1.0).abs() > 1e-12 {
            return Err(invalid!("rotation axis must be a unit vector (norm {n})"));
        }
        if !angle.is_finite() {
            return Err(invalid!("rotation angle must be finite"));
        }
        let (s, c) = angle.sin_cos();
        let [x, y, z] = axis;
        let t = 1.0 - c;
        let mut m = Self::identity().matrix;
        let r = [
            [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
            [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
            [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
        ];
        for i in 0..3 {
            for j in 0..3 {
                m[i + 1][j + 1] = r[i][j];
            }
        }
        Ok(Self { matrix: m, kind: TransformKind::Rotation })
    }

    pub fn rotation_y(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let mut m = Self::identity().matrix;
        m[1][1] = c;
        m[1][3] = s;
        m[3][1] = -s;
        m[3][3] = c;
        Self { matrix: m, kind: TransformKind::Rotation }
    }

    pub fn rotation_z(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let mut m = Self::identity().matrix;
        m[1][1] = c;
        m[1][2] = -s;
        m[2][1] = s;
        m[2][2] = c;
        Self { matrix: m, kind: TransformKind::Rotation }
    }

    /// Pure boost with rapidity `rapidity` along the unit vector `axis`.
    pub fn boost(axis: [f64; 3], rapidity: f64) -> Result<Self> {
        let n = axis[0].hypot(axis[1]).hypot(axis[2]);
        if (n - 1.0).abs() > 1e-12 {
            return Err(invalid!("boost axis must be a unit vector (norm {n})"));
        }
        check_rapidity("rapidity", rapidity)?;
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let mut m = [[0.0; 4]; 4];
        m[0][0] = ch;
        for i in 0..3 {
            m[0][i + 1] = sh * axis[i];
            m[i + 1][0] = sh * axis[i];
            for j in 0..3 {
                let delta = if i == j { 1.0 } else { 0.0 };
                m[i + 1][j + 1] = delta + (ch - 1.0) * axis[i] * axis[j];
            }
        }
        Ok(Self { matrix: m, kind: TransformKind::Boost })
    }

    /// `Λ⁻¹ = η Λᵀ η`.
    pub fn inverse(&self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = METRIC[i] * self.matrix[j][i] * METRIC[j];
            }
        }
        Self { matrix: m, kind: self.kind }
    }

    pub fn apply_vector(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.matrix[i][j] * v[j]).sum();
        }
        out
    }

    /// `Λp`, keeping the mass of `p` and recovering `(τ', θ', φ')`.
    pub fn apply(&self, p: &FourMomentum) -> Result<FourMomentum> {
        FourMomentum::from_components(p.mass(), self.apply_vector(p.components()))
    }

    /// `‖ΛᵀηΛ − η‖∞`.
    pub fn metric_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let g: f64 = (0..4).map(|k| self.matrix[k][i] * METRIC[k] * self.matrix[k][j]).sum();
                let want = if i == j { METRIC[i] } else { 0.0 };
                worst = worst.max((g - want).abs());
            }
        }
        worst
    }

    pub fn determinant(&self) -> f64 {
        let mut a = self.matrix;
        let mut det = 1.0;
        for k in 0..4 {
            let pivot = (k..4).max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs())).unwrap_or(k);
            if a[pivot][k] == 0.0 {
                return 0.0;
            }
            if pivot != k {
                a.swap(pivot, k);
                det = -det;
            }
            det *= a[k][k];
            for i in k + 1..4 {
                let f = a[i][k] / a[k][k];
                for j in k..4 {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        det
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.matrix[i][j] - other.matrix[i][j]).abs());
            }
        }
        worst
    }

    /// Polar decomposition `Λ = B·R` into a pure boost and a pure rotation.
    pub fn decompose_boost_rotation(&self) -> Result<(Self, Self)> {
        let m = &self.matrix;
        if m[0][0] < 1.0 - 1e-9 * m[0][0].abs().max(1.0) {
            return Err(invalid!("transform is not orthochronous (L00 = {})", m[0][0]));
        }
        if self.determinant() <= 0.0 {
            return Err(invalid!("transform is not proper"));
        }
        // Λ maps the rest frame's time axis to the four-velocity u; the boost
        // part is the pure boost carrying (1, 0) to u.
        let u = [m[0][0], m[1][0], m[2][0], m[3][0]];
        let boost = boost_to_velocity(u);
        let mut r = boost.inverse() * *self;
        r.matrix[0] = [1.0, 0.0, 0.0, 0.0];
        for row in r.matrix.iter_mut().skip(1) {
            row[0] = 0.0;
        }
        r.kind = TransformKind::Rotation;
        Ok((boost, r))
    }

    /// Axis and angle `ω ∈ [0, π]` of the spatial block, for rotations only.
    pub fn rotation_axis_angle(&self) -> Result<([f64; 3], f64)> {
        let m = &self.matrix;
        let time_leak = m[0][1].abs().max(m[0][2].abs()).max(m[0][3].abs()).max((m[0][0] - 1.0).abs());
        if time_leak > 1e-6 {
            return Err(invalid!("transform is not a pure rotation (time mixing {time_leak:e})"));
        }
        let r = |i: usize, j: usize| m[i + 1][j + 1];
        let v = [r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)];
        let two_sin = v[0].hypot(v[1]).hypot(v[2]);
        let cos_w = ((r(0, 0) + r(1, 1) + r(2, 2) - 1.0) * 0.5).clamp(-1.0, 1.0);
        let angle = (0.5 * two_sin).atan2(cos_w);
        if two_sin == 0.0 && cos_w > 0.0 {
            return Ok(([0.0, 0.0, 1.0], 0.0));
        }
        if cos_w > -0.5 {
            return Ok(([v[0] / two_sin, v[1] / two_sin, v[2] / two_sin], angle));
        }
        // near ω = π the antisymmetric part vanishes; read n nᵀ off the symmetric part
        let sym = |i: usize, j: usize| 0.5 * (r(i, j) + r(j, i));
        let denom = 1.0 - cos_w;
        let k = (0..3).max_by(|&a, &b| sym(a, a).total_cmp(&sym(b, b))).unwrap_or(0);
        let nk = ((sym(k, k) - cos_w) / denom).max(0.0).sqrt();
        let mut axis = [0.0; 3];
        for (j, a) in axis.iter_mut().enumerate() {
            *a = if j == k { nk } else { sym(k, j) / (denom * nk) };
        }
        let dot = axis[0] * v[0] + axis[1] * v[1] + axis[2] * v[2];
        if dot < 0.0 {
            axis = [-axis[0], -axis[1], -axis[2]];
        }
        let n = axis[0].hypot(axis[1]).hypot(axis[2]);
        Ok(([axis[0] / n, axis[1] / n, axis[2] / n], angle))
    }
}

impl Mul for LorentzTransform {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = (0..4).map(|k| self.matrix[i][k] * rhs.matrix[k][j]).sum();
            }
        }
        let kind = match (self.kind, rhs.kind) {
            (TransformKind::Rotation, TransformKind::Rotation) => TransformKind::Rotation,
            _ => TransformKind::General,
        };
        Self { matrix: m, kind }
    }
}

fn boost_to_velocity(u: [f64; 4]) -> LorentzTransform {
    let mut m = [[0.0; 4]; 4];
    m[0][0] = u[0];
    for i in 0..3 {
        m[0][i + 1] = u[i + 1];
        m[i + 1][0] = u[i + 1];
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            m[i + 1][j + 1] = delta + u[i + 1] * u[j + 1] / (1.0 + u[0]);
        }
    }
    LorentzTransform { matrix: m, kind: TransformKind::Boost }
}

/// Boost along `z` with rapidity `eta`:
/// `t' = t cosh η + z sinh η`, `z' = t sinh η + z cosh η`.
pub fn boost_z(eta: f64) -> Result<LorentzTransform> {
    check_rapidity("eta", eta)?;
    let mut m = LorentzTransform::identity().matrix;
    let (ch, sh) = (eta.cosh(), eta.sinh());
    m[0][0] = ch;
    m[0][3] = sh;
    m[3][0] = sh;
    m[3][3] = ch;
    Ok(LorentzTransform { matrix: m, kind: TransformKind::Boost })
}

/// `R(p) = R_z(φ) R_y(θ)`, the rotation carrying `ẑ` onto the direction
/// `(sinθ cosφ, sinθ sinφ, cosθ)`.
pub fn rotation_to_direction(theta: f64, phi: f64) -> Result<LorentzTransform> {
    check_angles(theta, phi)?;
    Ok(LorentzTransform::rotation_z(phi) * LorentzTransform::rotation_y(theta))
}

/// `L(p) = R(p) B(p) R(p)⁻¹`, the pure boost taking `(m, 0⃗)` to `p`.
pub fn pure_boost(p: &FourMomentum) -> Result<LorentzTransform> {
    let r = rotation_to_direction(p.theta(), p.phi())?;
    let b = boost_z(p.tau())?;
    let mut l = r * b * r.inverse();
    l.kind = TransformKind::Boost;
    Ok(l)
}
