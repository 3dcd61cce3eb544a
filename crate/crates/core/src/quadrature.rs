//! Gauss–Legendre rules and the spherical momentum grid built from them.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::error::{invalid, Result};
use crate::kinematics::FourMomentum;
#[allow(unused_imports)]
use num_traits::Float;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
///
/// Newton iteration on the three-term recurrence, started from the
/// Tricomi asymptotic guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// One quadrature node of the `d³p` measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridNode {
    /// On-shell momentum with `m = 1`.
    pub momentum: FourMomentum,
    /// Cartesian `p⃗` in units of `m`.
    pub p: [f64; 3],
    /// Full weight `|p⃗|² w_r w_θ w_φ`.
    pub weight: f64,
}

/// Product grid in spherical coordinates for integrals `∫ d³p`.
///
/// Radial nodes are Gauss–Legendre on `[0, cutoff]`, polar nodes are
/// Gauss–Legendre in `cos θ`, azimuthal nodes are the uniform trapezoid
/// `φ_k = 2πk/N_φ`. Node order is radial-major, then polar, then azimuthal.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumGrid {
    n_radial: usize,
    n_polar: usize,
    n_azimuthal: usize,
    cutoff: f64,
    nodes: Vec<GridNode>,
}

impl MomentumGrid {
    pub fn new(n_radial: usize, n_polar: usize, n_azimuthal: usize, radial_cutoff: f64) -> Result<Self> {
        if n_radial < 2 || n_polar < 2 || n_azimuthal < 2 {
            return Err(invalid!("grid counts must all be at least 2, got ({n_radial}, {n_polar}, {n_azimuthal})"));
        }
        if !(radial_cutoff.is_finite() && radial_cutoff > 0.0) {
            return Err(invalid!("radial cutoff must be positive, got {radial_cutoff}"));
        }
        let (xr, wr) = gauss_legendre(n_radial);
        let (xc, wc) = gauss_legendre(n_polar);
        let half = 0.5 * radial_cutoff;
        let w_phi = TAU / n_azimuthal as f64;
        let mut nodes = Vec::with_capacity(n_radial * n_polar * n_azimuthal);
        for (&x, &w) in xr.iter().zip(&wr) {
            let r = half * (x + 1.0);
            let tau = r.asinh();
            for (&c, &wt) in xc.iter().zip(&wc) {
                let theta = c.acos();
                let s = (1.0 - c * c).sqrt();
                for k in 0..n_azimuthal {
                    let phi = w_phi * k as f64;
                    let momentum = FourMomentum::new(1.0, tau, theta, phi)?;
                    let p = [r * s * phi.cos(), r * s * phi.sin(), r * c];
                    nodes.push(GridNode { momentum, p, weight: r * r * half * w * wt * w_phi });
                }
            }
        }
        Ok(Self { n_radial, n_polar, n_azimuthal, cutoff: radial_cutoff, nodes })
    }

    pub fn n_radial(&self) -> usize {
        self.n_radial
    }

    pub fn n_polar(&self) -> usize {
        self.n_polar
    }

    pub fn n_azimuthal(&self) -> usize {
        self.n_azimuthal
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn nodes(&self) -> &[GridNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same grid with the radial and polar counts multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.n_radial * factor, self.n_polar * factor, self.n_azimuthal, self.cutoff)
    }

    /// `Σ w_i f(p_i)`, summed pairwise in a fixed order.
    pub fn integrate(&self, f: impl Fn(&GridNode) -> f64) -> f64 {
        crate::linalg::tree_sum(0, self.nodes.len(), &|i| {
            let node = &self.nodes[i];
            node.weight * f(node)
        })
    }
}

/// Free-function form of [`MomentumGrid::new`].
pub fn build_grid(n_radial: usize, n_polar: usize, n_azimuthal: usize, radial_cutoff: f64) -> Result<MomentumGrid> {
    MomentumGrid::new(n_radial, n_polar, n_azimuthal, radial_cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for n in [2usize, 3, 5, 8, 17, 32, 64] {
            let (x, w) = gauss_legendre(n);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            for deg in 0..2 * n {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn known_three_point_rule() {
        let (x, w) = gauss_legendre(3);
        let r = (0.6f64).sqrt();
        assert!((x[0] + r).abs() < 1e-15 && x[1] == 0.0 && (x[2] - r).abs() < 1e-15);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-15 && (w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn grid_volume_and_nodes() {
        let grid = MomentumGrid::new(6, 5, 4, 2.0).unwrap();
        assert_eq!(grid.len(), 120);
        let vol = grid.integrate(|_| 1.0);
        assert!((vol - 4.0 / 3.0 * PI * 8.0).abs() < 1e-12);
        assert!(grid.nodes().iter().all(|n| n.weight > 0.0 && !n.momentum.is_direction_degenerate()));
        let z2 = grid.integrate(|n| n.p[2] * n.p[2]);
        // ∫ z² over a ball of radius R is 4πR⁵/15
        assert!((z2 - 4.0 * PI * 32.0 / 15.0).abs() < 1e-11);
    }

    #[test]
    fn node_momenta_agree_with_cartesian() {
        let grid = MomentumGrid::new(4, 4, 3, 1.5).unwrap();
        for node in grid.nodes() {
            let s = node.momentum.spatial();
            for k in 0..3 {
                assert!((s[k] - node.p[k]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn invalid_arguments() {
        assert!(MomentumGrid::new(1, 4, 4, 1.0).is_err());
        assert!(MomentumGrid::new(4, 4, 4, 0.0).is_err());
        assert!(MomentumGrid::new(4, 4, 4, f64::NAN).is_err());
    }
}
