//! Reduced helicity/spin density matrices under a z-boost, and the
//! entanglement measures built on them.
//!
//! After a boost with rapidity `η`, the reduced two-particle matrix is
//!
//! ```text
//! ρ' = ∫ d³p d³q (M(p) ⊗ M(q)) g(p, q) g(p, q)† (M(p) ⊗ M(q))†
//! ```
//!
//! with `M = D[Z(Λ,p)]` for helicity states and `M = D[W(Λ,p)]` for spin
//! states. Integrals run over the original momenta with the grid measure, so
//! no Jacobian appears.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::kinematics::FourMomentum;
use crate::linalg::{c64, kron, pauli, tree_sum, Mat, Mat2, Mat4, C64};
use crate::quadrature::MomentumGrid;
use crate::spinrep::{helicity_rotation, wigner_rotation};
use crate::states::{DenseState, LowRankState, SingleParticleAmplitude, TwoParticleState};
#[allow(unused_imports)]
use num_traits::Float;

/// Which little-group matrix acts on the internal label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Helicity basis, transformed by `D[Z(Λ,p)]`.
    Helicity,
    /// Canonical spin basis, transformed by `D[W(Λ,p)]`.
    Spin,
}

/// `D[Z(Λ,p)]` or `D[W(Λ,p)]` for the z-boost of rapidity `eta`.
pub fn boost_matrix(mode: Mode, eta: f64, p: &FourMomentum) -> Result<Mat2> {
    let m = match mode {
        Mode::Helicity => helicity_rotation(eta, p)?,
        Mode::Spin => wigner_rotation(eta, p)?,
    };
    Ok(m.into_matrix())
}

/// Per-node boost matrices for one grid, one rapidity and one mode.
#[derive(Clone, Debug)]
pub struct NodeOperators {
    eta: f64,
    mode: Mode,
    matrices: Vec<Mat2>,
}

impl NodeOperators {
    pub fn new(grid: &MomentumGrid, eta: f64, mode: Mode) -> Result<Self> {
        let matrices = grid.nodes().iter().map(|n| boost_matrix(mode, eta, &n.momentum)).collect::<Result<Vec<_>>>()?;
        Ok(Self { eta, mode, matrices })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn matrices(&self) -> &[Mat2] {
        &self.matrices
    }
}

fn check_density<const N: usize>(m: &Mat<N>) -> Result<()> {
    let herm = m.hermiticity_defect();
    if herm > 1e-12 {
        return Err(invalid!("density matrix is not Hermitian (defect {herm:e})"));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-12 {
        return Err(invalid!("density matrix trace is {tr}, expected 1"));
    }
    let eig = m.hermitian_eigenvalues()?;
    if let Some(&low) = eig.last() {
        if low < -1e-10 {
            return Err(invalid!("density matrix has negative eigenvalue {low:e}"));
        }
    }
    Ok(())
}

macro_rules! density_matrix {
    ($name:ident, $n:literal) => {
        #[derive(Clone, Copy, Debug, PartialEq)]
        pub struct $name(Mat<$n>);

        impl $name {
            /// Checks Hermiticity (1e-12), unit trace (1e-10) and
            /// positivity (eigenvalues ≥ −1e-10).
            pub fn new(m: Mat<$n>) -> Result<Self> {
                check_density(&m)?;
                Ok(Self(m))
            }

            pub fn matrix(&self) -> &Mat<$n> {
                &self.0
            }

            pub fn maximally_mixed() -> Self {
                Self(Mat::<$n>::identity().scale(c64(1.0 / $n as f64, 0.0)))
            }

            /// Projector `|ψ⟩⟨ψ|` onto the normalised `ψ`.
            pub fn pure(psi: &[C64; $n]) -> Result<Self> {
                let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
                if !(n > 0.0 && n.is_finite()) {
                    return Err(invalid!("cannot build a projector from a zero vector"));
                }
                Self::new(Mat::outer(psi, psi).scale(c64(1.0 / n, 0.0)))
            }

            /// Eigenvalues, descending.
            pub fn eigenvalues(&self) -> Result<[f64; $n]> {
                self.0.hermitian_eigenvalues()
            }

            /// `tr ρ²`.
            pub fn purity(&self) -> f64 {
                (self.0 * self.0).trace().re
            }

            /// `−Σ λ log₂ λ` in bits, with `0 log 0 = 0`.
            pub fn von_neumann_entropy(&self) -> Result<f64> {
                Ok(entropy_bits(&self.eigenvalues()?))
            }
        }
    };
}

density_matrix!(DensityMatrix2, 2);
density_matrix!(DensityMatrix4, 4);

fn entropy_bits(eig: &[f64]) -> f64 {
    let s: f64 = eig.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.log2()).sum();
    s.max(0.0)
}

impl DensityMatrix2 {
    pub fn bloch_vector(&self) -> [f64; 3] {
        let m = &self.0;
        [2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re]
    }
}

impl DensityMatrix4 {
    pub fn product(a: &DensityMatrix2, b: &DensityMatrix2) -> Self {
        Self(kron(&a.0, &b.0))
    }

    /// Reduced matrix of the first particle.
    pub fn partial_trace_b(&self) -> DensityMatrix2 {
        let m = &self.0;
        DensityMatrix2(Mat2::from_fn(|i, j| m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)]))
    }

    /// Reduced matrix of the second particle.
    pub fn partial_trace_a(&self) -> DensityMatrix2 {
        let m = &self.0;
        DensityMatrix2(Mat2::from_fn(|i, j| m[(i, j)] + m[(2 + i, 2 + j)]))
    }

    /// `(U_a ⊗ U_b) ρ (U_a ⊗ U_b)†`.
    pub fn local_transform(&self, ua: &Mat2, ub: &Mat2) -> Self {
        let u = kron(ua, ub);
        Self(u * self.0 * u.adjoint())
    }
}

/// `σ_y = [[0, −i], [i, 0]]`.
pub fn sigma_y() -> Mat2 {
    pauli()[1]
}

/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &DensityMatrix4) -> DensityMatrix4 {
    spin_flip_with(rho, &sigma_y())
}

/// [`spin_flip`] with a caller-supplied `σ_y`, for checking the checks.
pub fn spin_flip_with(rho: &DensityMatrix4, sigma_y: &Mat2) -> DensityMatrix4 {
    let yy = kron(sigma_y, sigma_y);
    DensityMatrix4(yy * rho.0.conj() * yy)
}

/// Wootters concurrence `max(k₁ − k₂ − k₃ − k₄, 0)` where `k_i` are the
/// square roots of the eigenvalues of `ρρ̃`, sorted descending.
pub fn wootters_concurrence(rho: &DensityMatrix4) -> Result<f64> {
    wootters_concurrence_with(rho, &sigma_y())
}

/// The `k_i` are computed as the singular values of `T = Vᵀ (σ_y ⊗ σ_y) V`
/// with `V = U √Λ` from `ρ = UΛU†`, which shares its spectrum with
/// `√(√ρ ρ̃ √ρ)`. Square roots of the eigenvalues of `ρρ̃` would turn
/// round-off at `ε` into errors at `√ε`.
///
/// With a wrong `σ_y` the two routes disagree, so the non-Hermitian spectrum
/// is still computed and a large imaginary part or a negative real part is
/// reported as [`Error::NumericalInstability`].
pub fn wootters_concurrence_with(rho: &DensityMatrix4, sigma_y: &Mat2) -> Result<f64> {
    let product = rho.0 * spin_flip_with(rho, sigma_y).0;
    let scale = product.max_abs().max(1.0);
    for z in product.eigenvalues()? {
        if z.im.abs() > 1e-6 * scale || z.re < -1e-6 * scale {
            return Err(Error::NumericalInstability(alloc::format!(
                "eigenvalue {z} of rho * rho~ is not a non-negative real"
            )));
        }
    }
    let (lambda, u) = rho.0.hermitian_eigen()?;
    let v = Mat4::from_fn(|r, c| u[(r, c)] * lambda[c].max(0.0).sqrt());
    let yy = kron(sigma_y, sigma_y);
    let t = v.transpose() * yy * v;
    let k = t.singular_values()?;
    Ok((k[0] - k[1] - k[2] - k[3]).max(0.0))
}

/// Free-function form of the entropy, in bits.
pub fn von_neumann_entropy2(rho: &DensityMatrix2) -> Result<f64> {
    rho.von_neumann_entropy()
}

pub fn von_neumann_entropy4(rho: &DensityMatrix4) -> Result<f64> {
    rho.von_neumann_entropy()
}

/// `∫ d³p M(p) A(p) B(p)† M(p)†`, summed pairwise in node order.
fn cross_moment(ops: &[Mat2], nodes: &MomentumGrid, a: &SingleParticleAmplitude, b: &SingleParticleAmplitude) -> Mat2 {
    let nodes = nodes.nodes();
    let (av, bv) = (a.values(), b.values());
    tree_sum(0, ops.len(), &|i| {
        let m = ops[i];
        let u = m.apply(&av[i]);
        let v = m.apply(&bv[i]);
        Mat2::outer(&u, &v).scale(c64(nodes[i].weight, 0.0))
    })
}

fn hermitize<const N: usize>(m: Mat<N>) -> Mat<N> {
    (m + m.adjoint()).scale(c64(0.5, 0.0))
}

/// Reduced 2×2 matrix of a single particle after the boost.
pub fn reduced_single(amplitude: &SingleParticleAmplitude, eta: f64, mode: Mode) -> Result<DensityMatrix2> {
    let ops = NodeOperators::new(amplitude.grid(), eta, mode)?;
    reduced_single_with(amplitude, &ops)
}

/// [`reduced_single`] with precomputed node operators.
pub fn reduced_single_with(amplitude: &SingleParticleAmplitude, ops: &NodeOperators) -> Result<DensityMatrix2> {
    check_ops(amplitude.grid(), ops)?;
    let m = cross_moment(ops.matrices(), amplitude.grid(), amplitude, amplitude);
    DensityMatrix2::new(hermitize(m))
}

fn check_ops(grid: &MomentumGrid, ops: &NodeOperators) -> Result<()> {
    if ops.matrices().len() != grid.len() {
        return Err(invalid!("node operators built for {} nodes, grid has {}", ops.matrices().len(), grid.len()));
    }
    Ok(())
}

/// Reduced 4×4 matrix of a two-particle state after the boost.
pub fn reduced_two(state: &TwoParticleState, eta: f64, mode: Mode) -> Result<DensityMatrix4> {
    let ops = NodeOperators::new(state.grid(), eta, mode)?;
    reduced_two_with(state, &ops)
}

/// [`reduced_two`] with precomputed node operators.
pub fn reduced_two_with(state: &TwoParticleState, ops: &NodeOperators) -> Result<DensityMatrix4> {
    check_ops(state.grid(), ops)?;
    let m = match state {
        TwoParticleState::LowRank(s) => low_rank_moment(s, ops),
        TwoParticleState::Dense(s) => dense_moment(s, ops),
    };
    DensityMatrix4::new(hermitize(m))
}

/// `Σ_kl c_k c̄_l M^A_kl ⊗ M^B_kl` with `M^X_kl = ∫ M X_k X_l† M†`.
fn low_rank_moment(state: &LowRankState, ops: &NodeOperators) -> Mat4 {
    let grid = state.grid();
    let terms = state.terms();
    let mut acc = Mat4::zero();
    for tk in terms {
        for tl in terms {
            let ma = cross_moment(ops.matrices(), grid, &tk.a, &tl.a);
            let mb = cross_moment(ops.matrices(), grid, &tk.b, &tl.b);
            acc += kron(&ma, &mb).scale(tk.coefficient * tl.coefficient.conj());
        }
    }
    acc
}

/// Direct double sum over node pairs; quadratic in the grid size.
fn dense_moment(state: &DenseState, ops: &NodeOperators) -> Mat4 {
    let nodes = state.grid().nodes();
    let n = nodes.len();
    let mats = ops.matrices();
    let values = state.values();
    tree_sum(0, n * n, &|idx| {
        let (i, j) = (idx / n, idx % n);
        let u = kron(&mats[i], &mats[j]).apply(&values[idx]);
        Mat4::outer(&u, &u).scale(c64(nodes[i].weight * nodes[j].weight, 0.0))
    })
}
