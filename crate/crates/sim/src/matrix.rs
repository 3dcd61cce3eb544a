use std::fmt::Write as _;

use helicity_core::entanglement::{boost_matrix, Mode};
use helicity_core::kinematics::FourMomentum;
use helicity_core::linalg::{Mat2, C64};
use helicity_core::spinrep::{alpha_beta, closed_form_helicity_rotation, SpinorMatrix};

use crate::config::mode_name;
use crate::error::{SimError, SimResult};

/// Numbers behind the `matrix` command.
#[derive(Clone, Debug)]
pub struct MatrixReport {
    pub mode: Mode,
    /// `D[Z]` in helicity mode, `D[W]` in spin mode.
    pub matrix: Mat2,
    pub alpha: f64,
    pub beta: f64,
    /// Five-factor closed form at `φ = 0`; helicity mode only.
    pub closed_form: Option<Mat2>,
    /// `min_± ‖closed_form ∓ D[Z](φ = 0)‖∞`.
    pub closed_form_residual: Option<f64>,
    pub unitarity_residual: f64,
    /// `‖D(φ) − D(φ = 0)‖∞`, a diagnostic for the azimuth dependence.
    pub phi_deviation: f64,
}

pub fn inspect(eta: f64, tau: f64, theta: f64, phi: f64, mode: Mode) -> SimResult<MatrixReport> {
    let ctx = |e| SimError::core("matrix", e);
    let p = FourMomentum::new(1.0, tau, theta, phi).map_err(ctx)?;
    let p0 = FourMomentum::new(1.0, tau, theta, 0.0).map_err(ctx)?;
    let matrix = boost_matrix(mode, eta, &p).map_err(ctx)?;
    let at_zero = boost_matrix(mode, eta, &p0).map_err(ctx)?;
    let (alpha, beta) = alpha_beta(eta, &p).map_err(ctx)?;
    let (closed_form, closed_form_residual) = match mode {
        Mode::Helicity => {
            let c = closed_form_helicity_rotation(eta, tau, theta).map_err(ctx)?;
            let r = c.dist_up_to_sign(&SpinorMatrix::new(at_zero).map_err(ctx)?);
            (Some(*c.matrix()), Some(r))
        }
        Mode::Spin => (None, None),
    };
    Ok(MatrixReport {
        mode,
        matrix,
        alpha,
        beta,
        closed_form,
        closed_form_residual,
        unitarity_residual: matrix.unitarity_defect(),
        phi_deviation: matrix.dist(&at_zero),
    })
}

/// Formatted text for the `matrix` command.
pub fn print_matrix(eta: f64, tau: f64, theta: f64, phi: f64, mode: Mode) -> SimResult<String> {
    let r = inspect(eta, tau, theta, phi, mode)?;
    let name = match mode {
        Mode::Helicity => "D[Z]",
        Mode::Spin => "D[W]",
    };
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}", mode_name(mode));
    let _ = writeln!(out, "eta = {eta}, tau = {tau}, theta = {theta}, phi = {phi}");
    let _ = writeln!(out, "{name} =");
    write_matrix(&mut out, &r.matrix);
    let _ = writeln!(out, "alpha = {:.17e}", r.alpha);
    let _ = writeln!(out, "beta = {:.17e}", r.beta);
    if let (Some(c), Some(res)) = (r.closed_form, r.closed_form_residual) {
        let _ = writeln!(out, "closed-form product (phi = 0) =");
        write_matrix(&mut out, &c);
        let _ = writeln!(out, "closed-form residual (up to sign, phi = 0): {res:.3e}");
    }
    let _ = writeln!(out, "unitarity residual: {:.3e}", r.unitarity_residual);
    let _ = writeln!(out, "phi deviation |{name}(phi) - {name}(0)|: {:.3e}", r.phi_deviation);
    Ok(out)
}

fn write_matrix(out: &mut String, m: &Mat2) {
    for i in 0..2 {
        let _ = writeln!(out, "  [ {}  {} ]", fmt_c(m[(i, 0)]), fmt_c(m[(i, 1)]));
    }
}

fn fmt_c(z: C64) -> String {
    format!("{:+.12e}{:+.12e}i", z.re, z.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use helicity_core::linalg::c64;

    #[test]
    fn no_boost_is_identity() {
        let r = inspect(0.0, 1.0, 0.7, 1.1, Mode::Helicity).unwrap();
        assert!(r.matrix.dist(&Mat2::identity()) <= 1e-15);
        assert!(r.unitarity_residual <= 1e-15);
    }

    #[test]
    fn reversed_collinear_momentum_flips() {
        let r = inspect(-2.0, 1.0, 0.0, 0.0, Mode::Helicity).unwrap();
        let flip = Mat2::from_fn(|i, j| match (i, j) {
            (0, 1) => c64(1.0, 0.0),
            (1, 0) => c64(-1.0, 0.0),
            _ => c64(0.0, 0.0),
        });
        assert!(r.matrix.dist(&flip) <= 1e-12);
        let text = print_matrix(-2.0, 1.0, 0.0, 0.0, Mode::Helicity).unwrap();
        assert!(text.contains("D[Z]") && text.contains("closed-form residual"));
    }

    #[test]
    fn degenerate_image_is_reported() {
        let err = inspect(-1.0, 1.0, 0.0, 0.0, Mode::Helicity).unwrap_err();
        assert!(matches!(err, SimError::Core { source: helicity_core::Error::DegenerateMomentum(_), .. }));
    }

    #[test]
    fn spin_mode_has_no_closed_form() {
        let r = inspect(-1.0, 0.5, 1.0, 2.0, Mode::Spin).unwrap();
        assert!(r.closed_form.is_none() && r.unitarity_residual < 1e-12);
        assert!(print_matrix(-1.0, 0.5, 1.0, 2.0, Mode::Spin).unwrap().contains("D[W]"));
    }
}
