//! Wavepackets and one- and two-particle amplitudes on a momentum grid.
//!
//! Two-particle amplitudes `g_{λσ}(p, q)` are held as a Schmidt-like sum
//! `Σ_k c_k A_k(p) ⊗ B_k(q)` of single-particle factors. A dense
//! representation over pairs of grid nodes exists for cross-checking only;
//! it grows as the square of the grid size.
//!
//! Helicity (or spin) components are ordered `(+½, −½)`; two-particle
//! components are ordered `(+½+½, +½−½, −½+½, −½−½)`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Zero;

use crate::error::{invalid, Result};
use crate::linalg::{c64, kron_vec, tree_sum, Mat2, C64};
use crate::quadrature::{GridNode, MomentumGrid};
#[allow(unused_imports)]
use num_traits::Float;

/// Spin-½ projection label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn index(self) -> usize {
        match self {
            Helicity::Plus => 0,
            Helicity::Minus => 1,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Helicity::Plus => 0.5,
            Helicity::Minus => -0.5,
        }
    }

    pub fn basis(self) -> [C64; 2] {
        let mut v = [C64::zero(); 2];
        v[self.index()] = c64(1.0, 0.0);
        v
    }
}

/// Momentum profile of a packet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PacketShape {
    /// `f(p⃗) = π^{−3/4} ε^{−3/2} exp(−|p⃗|²/2ε²)`.
    Gaussian,
    /// `√2 (p_z/ε)` times the Gaussian: the first excited, odd-parity packet.
    /// Orthogonal to every centred Gaussian.
    DipoleZ,
}

/// Real, unit-normalised momentum-space wavepacket of width `ε` (units of `m`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WavePacket {
    width: f64,
    shape: PacketShape,
}

impl WavePacket {
    pub fn gaussian(width: f64) -> Result<Self> {
        Self::new(width, PacketShape::Gaussian)
    }

    pub fn dipole_z(width: f64) -> Result<Self> {
        Self::new(width, PacketShape::DipoleZ)
    }

    pub fn new(width: f64, shape: PacketShape) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(invalid!("packet width must be positive, got {width}"));
        }
        Ok(Self { width, shape })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn shape(&self) -> PacketShape {
        self.shape
    }

    pub fn eval(&self, p: [f64; 3]) -> f64 {
        let e = self.width;
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let g = PI.powf(-0.75) * e.powf(-1.5) * (-r2 / (2.0 * e * e)).exp();
        match self.shape {
            PacketShape::Gaussian => g,
            PacketShape::DipoleZ => core::f64::consts::SQRT_2 * p[2] / e * g,
        }
    }

    /// `∫ d³p f₁ f₂` in closed form.
    pub fn overlap(&self, other: &WavePacket) -> f64 {
        let (a, b) = (self.width, other.width);
        let ratio = 2.0 * a * b / (a * a + b * b);
        match (self.shape, other.shape) {
            (PacketShape::Gaussian, PacketShape::Gaussian) => ratio.powf(1.5),
            (PacketShape::DipoleZ, PacketShape::DipoleZ) => ratio.powf(2.5),
            _ => 0.0,
        }
    }
}

/// Free-function form of [`WavePacket::gaussian`].
pub fn gaussian_wavepacket(epsilon: f64) -> Result<WavePacket> {
    WavePacket::gaussian(epsilon)
}

/// Two-component amplitude `g_λ(p⃗)` sampled at every node of a grid.
#[derive(Clone, Debug)]
pub struct SingleParticleAmplitude {
    grid: Arc<MomentumGrid>,
    values: Vec<[C64; 2]>,
}

impl SingleParticleAmplitude {
    pub fn from_fn(grid: Arc<MomentumGrid>, f: impl Fn(&GridNode) -> [C64; 2]) -> Self {
        let values = grid.nodes().iter().map(f).collect();
        Self { grid, values }
    }

    pub fn from_values(grid: Arc<MomentumGrid>, values: Vec<[C64; 2]>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid!("{} amplitude values for a grid of {} nodes", values.len(), grid.len()));
        }
        Ok(Self { grid, values })
    }

    /// `f(p⃗)` times a fixed helicity state.
    pub fn from_packet(packet: &WavePacket, helicity: Helicity, grid: Arc<MomentumGrid>) -> Self {
        let basis = helicity.basis();
        Self::from_fn(grid, |node| {
            let f = packet.eval(node.p);
            [basis[0] * f, basis[1] * f]
        })
    }

    pub fn grid(&self) -> &Arc<MomentumGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[[C64; 2]] {
        &self.values
    }

    /// Grid-discrete `⟨self|other⟩ = Σ w_i g_i† h_i`.
    pub fn inner(&self, other: &Self) -> C64 {
        let nodes = self.grid.nodes();
        tree_sum(0, self.values.len(), &|i| {
            let (a, b) = (&self.values[i], &other.values[i]);
            (a[0].conj() * b[0] + a[1].conj() * b[1]) * nodes[i].weight
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|v| [v[0] * s, v[1] * s]).collect() }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(invalid!("cannot normalise an amplitude of norm {n}"));
        }
        Ok(self.scaled(c64(1.0 / n.sqrt(), 0.0)))
    }

    /// Applies the same 2×2 matrix to the spin components at every node.
    pub fn transformed(&self, u: &Mat2) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|v| u.apply(v)).collect() }
    }
}

/// One term `c · A ⊗ B` of a low-rank two-particle amplitude.
#[derive(Clone, Debug)]
pub struct SchmidtTerm {
    pub coefficient: C64,
    pub a: SingleParticleAmplitude,
    pub b: SingleParticleAmplitude,
}

/// `g(p, q) = Σ_k c_k A_k(p) ⊗ B_k(q)`; every factor lives on the same grid.
#[derive(Clone, Debug)]
pub struct LowRankState {
    grid: Arc<MomentumGrid>,
    terms: Vec<SchmidtTerm>,
}

/// Exchange symmetry imposed under the simultaneous swap `(p, λ) ↔ (q, σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exchange {
    Symmetric,
    Antisymmetric,
}

impl LowRankState {
    pub fn new(terms: Vec<SchmidtTerm>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| invalid!("a two-particle state needs at least one term"))?;
        let grid = first.a.grid.clone();
        for t in &terms {
            if !(Arc::ptr_eq(&t.a.grid, &grid) || *t.a.grid == *grid)
                || !(Arc::ptr_eq(&t.b.grid, &grid) || *t.b.grid == *grid)
            {
                return Err(invalid!("all factors of a low-rank state must share one grid"));
            }
            if !(t.coefficient.re.is_finite() && t.coefficient.im.is_finite()) {
                return Err(invalid!("non-finite term coefficient"));
            }
        }
        Ok(Self { grid, terms })
    }

    pub fn grid(&self) -> &Arc<MomentumGrid> {
        &self.grid
    }

    pub fn terms(&self) -> &[SchmidtTerm] {
        &self.terms
    }

    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    /// `Σ_kl c_k c̄_l ⟨A_l|A_k⟩⟨B_l|B_k⟩`.
    pub fn norm_sqr(&self) -> f64 {
        let mut acc = C64::zero();
        for tk in &self.terms {
            for tl in &self.terms {
                acc += tk.coefficient * tl.coefficient.conj() * tl.a.inner(&tk.a) * tl.b.inner(&tk.b);
            }
        }
        acc.re
    }

    /// Norm the state would have if its terms did not interfere.
    fn incoherent_norm_sqr(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.norm_sqr() * t.a.norm_sqr() * t.b.norm_sqr()).sum()
    }

    pub fn scaled(&self, s: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| SchmidtTerm { coefficient: t.coefficient * s, a: t.a.clone(), b: t.b.clone() })
            .collect();
        Self { grid: self.grid.clone(), terms }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        let scale = self.incoherent_norm_sqr();
        if !(n.is_finite() && n > 1e-12 * scale && n > 0.0) {
            return Err(invalid!("cannot normalise a two-particle state of norm {n:e}"));
        }
        Ok(self.scaled(c64(1.0 / n.sqrt(), 0.0)))
    }

    /// `(g ± g_swapped)`, renormalised. Fails if the result vanishes.
    pub fn symmetrized(&self, exchange: Exchange) -> Result<Self> {
        let sign = match exchange {
            Exchange::Symmetric => 1.0,
            Exchange::Antisymmetric => -1.0,
        };
        let mut terms = self.terms.clone();
        for t in &self.terms {
            terms.push(SchmidtTerm { coefficient: t.coefficient * sign, a: t.b.clone(), b: t.a.clone() });
        }
        Self { grid: self.grid.clone(), terms }.normalized()
    }

    /// Samples `g_{λσ}(p_i, q_j)` on every pair of nodes.
    pub fn to_dense(&self) -> DenseState {
        let n = self.grid.len();
        let mut values = alloc::vec![[C64::zero(); 4]; n * n];
        for t in &self.terms {
            for i in 0..n {
                let a = t.a.values[i];
                for j in 0..n {
                    let v = kron_vec(&a, &t.b.values[j]);
                    let slot = &mut values[i * n + j];
                    for k in 0..4 {
                        slot[k] += t.coefficient * v[k];
                    }
                }
            }
        }
        DenseState { grid: self.grid.clone(), values }
    }
}

/// `g_{λσ}(p_i, q_j)` on all node pairs, index `i·n + j`.
#[derive(Clone, Debug)]
pub struct DenseState {
    grid: Arc<MomentumGrid>,
    values: Vec<[C64; 4]>,
}

impl DenseState {
    pub fn from_values(grid: Arc<MomentumGrid>, values: Vec<[C64; 4]>) -> Result<Self> {
        if values.len() != grid.len() * grid.len() {
            return Err(invalid!("dense state needs {} node pairs, got {}", grid.len() * grid.len(), values.len()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Arc<MomentumGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[[C64; 4]] {
        &self.values
    }

    pub fn norm_sqr(&self) -> f64 {
        let nodes = self.grid.nodes();
        let n = nodes.len();
        tree_sum(0, self.values.len(), &|idx| {
            let w = nodes[idx / n].weight * nodes[idx % n].weight;
            w * self.values[idx].iter().map(|z| z.norm_sqr()).sum::<f64>()
        })
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(invalid!("cannot normalise a two-particle state of norm {n:e}"));
        }
        let s = 1.0 / n.sqrt();
        let values = self.values.iter().map(|v| [v[0] * s, v[1] * s, v[2] * s, v[3] * s]).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }
}

/// Two-particle amplitude in either representation.
#[derive(Clone, Debug)]
pub enum TwoParticleState {
    LowRank(LowRankState),
    Dense(DenseState),
}

impl TwoParticleState {
    pub fn grid(&self) -> &Arc<MomentumGrid> {
        match self {
            TwoParticleState::LowRank(s) => s.grid(),
            TwoParticleState::Dense(s) => s.grid(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match self {
            TwoParticleState::LowRank(s) => s.norm_sqr(),
            TwoParticleState::Dense(s) => s.norm_sqr(),
        }
    }

    /// Number of product terms, or `None` for a dense state.
    pub fn rank(&self) -> Option<usize> {
        match self {
            TwoParticleState::LowRank(s) => Some(s.rank()),
            TwoParticleState::Dense(_) => None,
        }
    }

    pub fn to_dense(&self) -> DenseState {
        match self {
            TwoParticleState::LowRank(s) => s.to_dense(),
            TwoParticleState::Dense(s) => s.clone(),
        }
    }

    pub fn symmetrized(&self, exchange: Exchange) -> Result<Self> {
        match self {
            TwoParticleState::LowRank(s) => Ok(TwoParticleState::LowRank(s.symmetrized(exchange)?)),
            TwoParticleState::Dense(_) => Err(invalid!("exchange symmetrisation is only provided for low-rank states")),
        }
    }
}

/// Rescales to unit grid-discrete norm.
pub fn normalize(state: &TwoParticleState) -> Result<TwoParticleState> {
    Ok(match state {
        TwoParticleState::LowRank(s) => TwoParticleState::LowRank(s.normalized()?),
        TwoParticleState::Dense(s) => TwoParticleState::Dense(s.normalized()?),
    })
}

/// `g_{λ_a λ_b}(p, q) = f_a(p) f_b(q)`, every other component zero.
///
/// Each factor is normalised on the grid, so the marginals have unit trace.
pub fn product_state(
    packet_a: &WavePacket,
    packet_b: &WavePacket,
    helicity_a: Helicity,
    helicity_b: Helicity,
    grid: Arc<MomentumGrid>,
) -> Result<TwoParticleState> {
    let a = SingleParticleAmplitude::from_packet(packet_a, helicity_a, grid.clone()).normalized()?;
    let b = SingleParticleAmplitude::from_packet(packet_b, helicity_b, grid).normalized()?;
    let state = LowRankState::new(alloc::vec![SchmidtTerm { coefficient: c64(1.0, 0.0), a, b }])?;
    Ok(TwoParticleState::LowRank(state.normalized()?))
}

/// `N [f₁(p) f₂(q) |+½ +½⟩ + f₂(p) f₁(q) |−½ −½⟩]`.
///
/// At rest the coherence between the two components is `|⟨f₁|f₂⟩|²`, so
/// equal packets give a Bell state and orthogonal packets a classical mixture.
pub fn correlated_state(
    packet_1: &WavePacket,
    packet_2: &WavePacket,
    grid: Arc<MomentumGrid>,
) -> Result<TwoParticleState> {
    let amp =
        |packet: &WavePacket, h: Helicity| SingleParticleAmplitude::from_packet(packet, h, grid.clone()).normalized();
    let one = c64(1.0, 0.0);
    let terms = alloc::vec![
        SchmidtTerm { coefficient: one, a: amp(packet_1, Helicity::Plus)?, b: amp(packet_2, Helicity::Plus)? },
        SchmidtTerm { coefficient: one, a: amp(packet_2, Helicity::Minus)?, b: amp(packet_1, Helicity::Minus)? },
    ];
    Ok(TwoParticleState::LowRank(LowRankState::new(terms)?.normalized()?))
}
