//! Fixed-size complex matrices and the small eigenvalue solver used by the
//! density-matrix code.
//!
//! Everything here is sized at compile time (`N` is 2 or 4 in practice), so the
//! matrices are plain `Copy` arrays and no routine allocates.

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

pub type C64 = Complex64;

pub const fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// Dense `N`×`N` complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat<const N: usize>(pub [[C64; N]; N]);

pub type Mat2 = Mat<2>;
pub type Mat4 = Mat<4>;

impl<const N: usize> Default for Mat<N> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize> Mat<N> {
    pub fn zero() -> Self {
        Mat([[C64::zero(); N]; N])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { c64(1.0, 0.0) } else { C64::zero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| c64(rows[i][j], 0.0))
    }

    pub fn diagonal(diag: [C64; N]) -> Self {
        Self::from_fn(|i, j| if i == j { diag[i] } else { C64::zero() })
    }

    /// Outer product `u v†`.
    pub fn outer(u: &[C64; N], v: &[C64; N]) -> Self {
        Self::from_fn(|i, j| u[i] * v[j].conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).fold(C64::zero(), |a, b| a + b)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn apply(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [C64::zero(); N];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                *o += self.0[i][j] * x;
            }
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flat_map(|row| row.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise max-norm distance, written `‖A − B‖∞` throughout the crate.
    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.dist(&self.adjoint())
    }

    /// `‖A†A − I‖∞`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).dist(&Self::identity())
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> C64 {
        let mut a = self.0;
        let mut det = c64(1.0, 0.0);
        for k in 0..N {
            let pivot = (k..N).max_by(|&x, &y| a[x][k].norm().total_cmp(&a[y][k].norm())).unwrap_or(k);
            if a[pivot][k].is_zero() {
                return C64::zero();
            }
            if pivot != k {
                a.swap(pivot, k);
                det = -det;
            }
            det *= a[k][k];
            for i in k + 1..N {
                let f = a[i][k] / a[k][k];
                for j in k..N {
                    let t = a[k][j];
                    a[i][j] -= f * t;
                }
            }
        }
        det
    }

    /// All eigenvalues of a general complex matrix, in no particular order.
    ///
    /// Householder reduction to upper Hessenberg form followed by single-shift
    /// QR sweeps (Givens rotations, Wilkinson shift) with bottom-up deflation.
    pub fn eigenvalues(&self) -> Result<[C64; N]> {
        let mut h = self.0;
        hessenberg(&mut h);
        let scale = self.max_abs();
        let mut eig = [C64::zero(); N];
        if N == 0 {
            return Ok(eig);
        }
        if scale == 0.0 {
            return Ok(eig);
        }
        let mut hi = N;
        let mut iter = 0usize;
        let mut total = 0usize;
        while hi > 0 {
            if hi == 1 {
                eig[0] = h[0][0];
                break;
            }
            let mut lo = hi - 1;
            while lo > 0 {
                let off = h[lo][lo - 1].norm();
                let diag = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
                if off <= f64::EPSILON * diag || off <= f64::MIN_POSITIVE.max(1e-300 * scale) {
                    h[lo][lo - 1] = C64::zero();
                    break;
                }
                lo -= 1;
            }
            if lo == hi - 1 {
                eig[hi - 1] = h[hi - 1][hi - 1];
                hi -= 1;
                iter = 0;
                continue;
            }
            iter += 1;
            total += 1;
            if total > 100 * N {
                return Err(Error::NumericalInstability(alloc::format!(
                    "QR iteration did not converge for a {N}x{N} matrix"
                )));
            }
            let mu = if iter.is_multiple_of(10) {
                // exceptional shift to break cycles
                h[hi - 1][hi - 1] + c64(0.75 * h[hi - 1][hi - 2].norm(), 0.0)
            } else {
                wilkinson_shift(h[hi - 2][hi - 2], h[hi - 2][hi - 1], h[hi - 1][hi - 2], h[hi - 1][hi - 1])
            };
            qr_sweep(&mut h, lo, hi, mu);
        }
        Ok(eig)
    }

    /// Eigenvalues of a Hermitian matrix, sorted descending.
    /// Eigenvalues of the Hermitian part `(A + A†)/2`, sorted descending.
    pub fn hermitian_eigenvalues(&self) -> Result<[f64; N]> {
        Ok(self.hermitian_eigen()?.0)
    }

    /// Cyclic Jacobi decomposition of the Hermitian part `(A + A†)/2`.
    ///
    /// Returns eigenvalues sorted descending and the unitary whose columns
    /// are the matching eigenvectors.
    pub fn hermitian_eigen(&self) -> Result<([f64; N], Self)> {
        let mut a = (*self + self.adjoint()).scale(c64(0.5, 0.0)).0;
        let mut v = Self::identity().0;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut converged = false;
        for _ in 0..JACOBI_SWEEPS {
            let off =
                (0..N).flat_map(|i| (i + 1..N).map(move |j| (i, j))).map(|(i, j)| a[i][j].norm()).fold(0.0, f64::max);
            if off <= f64::EPSILON * 1e-3 * scale {
                converged = true;
                break;
            }
            for p in 0..N {
                for q in p + 1..N {
                    if a[p][q].norm() == 0.0 {
                        continue;
                    }
                    let w = jacobi_pair(a[p][p].re, a[q][q].re, a[p][q]);
                    rotate_columns(&mut a, p, q, &w);
                    rotate_rows(&mut a, p, q, &w);
                    rotate_columns(&mut v, p, q, &w);
                    a[p][q] = C64::zero();
                    a[q][p] = C64::zero();
                }
            }
        }
        if !converged {
            return Err(Error::NumericalInstability(alloc::format!(
                "Hermitian Jacobi iteration did not converge in {JACOBI_SWEEPS} sweeps"
            )));
        }
        let mut order: [usize; N] = core::array::from_fn(|i| i);
        order.sort_by(|&i, &j| a[j][j].re.total_cmp(&a[i][i].re));
        let values = core::array::from_fn(|k| a[order[k]][order[k]].re);
        let vectors = Self::from_fn(|r, k| v[r][order[k]]);
        Ok((values, vectors))
    }

    /// Singular values, sorted descending, by one-sided Jacobi.
    ///
    /// Small singular values carry absolute error of order `ε‖A‖`, not the
    /// `√ε‖A‖` that the eigenvalues of `A†A` would give.
    pub fn singular_values(&self) -> Result<[f64; N]> {
        let mut a = self.0;
        let mut converged = false;
        for _ in 0..JACOBI_SWEEPS {
            let mut rotated = false;
            for p in 0..N {
                for q in p + 1..N {
                    let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, C64::zero());
                    for row in &a {
                        alpha += row[p].norm_sqr();
                        beta += row[q].norm_sqr();
                        gamma += row[p].conj() * row[q];
                    }
                    if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                        continue;
                    }
                    rotated = true;
                    rotate_columns(&mut a, p, q, &jacobi_pair(alpha, beta, gamma));
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NumericalInstability(alloc::format!(
                "one-sided Jacobi did not converge in {JACOBI_SWEEPS} sweeps"
            )));
        }
        let mut out: [f64; N] = core::array::from_fn(|k| a.iter().map(|row| row[k].norm_sqr()).sum::<f64>().sqrt());
        out.sort_by(|x, y| y.total_cmp(x));
        Ok(out)
    }
}

const JACOBI_SWEEPS: usize = 60;

/// Unitary `W` on a `(p, q)` pair with `W† [[a, g], [ḡ, d]] W` diagonal.
fn jacobi_pair(a: f64, d: f64, g: C64) -> [[C64; 2]; 2] {
    let r = g.norm();
    let phase = g / r;
    let tau = (d - a) / (2.0 * r);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let pc = phase.conj();
    [[c64(c, 0.0), c64(s, 0.0)], [pc * -s, pc * c]]
}

fn rotate_columns<const N: usize>(a: &mut [[C64; N]; N], p: usize, q: usize, w: &[[C64; 2]; 2]) {
    for row in a.iter_mut() {
        let (x, y) = (row[p], row[q]);
        row[p] = x * w[0][0] + y * w[1][0];
        row[q] = x * w[0][1] + y * w[1][1];
    }
}

fn rotate_rows<const N: usize>(a: &mut [[C64; N]; N], p: usize, q: usize, w: &[[C64; 2]; 2]) {
    for k in 0..N {
        let (x, y) = (a[p][k], a[q][k]);
        a[p][k] = w[0][0].conj() * x + w[1][0].conj() * y;
        a[q][k] = w[0][1].conj() * x + w[1][1].conj() * y;
    }
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let mu1 = mean + disc;
    let mu2 = mean - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// One shifted QR step `H − μI = QR`, `H ← RQ + μI` on the active window
/// `[lo, hi)` of an upper Hessenberg matrix.
fn qr_sweep<const N: usize>(h: &mut [[C64; N]; N], lo: usize, hi: usize, mu: C64) {
    for k in lo..hi {
        h[k][k] -= mu;
    }
    let mut rotations = [(0.0f64, C64::zero()); N];
    for k in lo..hi - 1 {
        let (c, s) = givens(h[k][k], h[k + 1][k]);
        rotations[k] = (c, s);
        for j in k..hi {
            let a = h[k][j];
            let b = h[k + 1][j];
            h[k][j] = a * c + s * b;
            h[k + 1][j] = -s.conj() * a + b * c;
        }
    }
    for k in lo..hi - 1 {
        let (c, s) = rotations[k];
        let top = (k + 2).min(hi);
        for row in h.iter_mut().take(top).skip(lo) {
            let a = row[k];
            let b = row[k + 1];
            row[k] = a * c + b * s.conj();
            row[k + 1] = -a * s + b * c;
        }
    }
    for k in lo..hi {
        h[k][k] += mu;
    }
}

/// Rotation `[[c, s], [−s̄, c]]` (c real) mapping `(x, y)` onto `(r, 0)`.
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, C64::zero());
    }
    if ax == 0.0 {
        return (0.0, c64(1.0, 0.0));
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

fn hessenberg<const N: usize>(a: &mut [[C64; N]; N]) {
    if N < 3 {
        return;
    }
    for k in 0..N - 2 {
        let mut v = [C64::zero(); N];
        let mut tail = 0.0;
        for i in k + 2..N {
            tail += a[i][k].norm_sqr();
        }
        if tail == 0.0 {
            continue;
        }
        let x0 = a[k + 1][k];
        let norm_x = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.norm() == 0.0 { c64(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm_x;
        v[k + 1] = x0 - alpha;
        for i in k + 2..N {
            v[i] = a[i][k];
        }
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // A ← (I − 2vv†) A
        for j in 0..N {
            let mut dot = C64::zero();
            for i in k + 1..N {
                dot += v[i].conj() * a[i][j];
            }
            for i in k + 1..N {
                a[i][j] -= v[i] * dot * 2.0;
            }
        }
        // A ← A (I − 2vv†)
        for row in a.iter_mut() {
            let mut dot = C64::zero();
            for j in k + 1..N {
                dot += row[j] * v[j];
            }
            for j in k + 1..N {
                row[j] -= dot * v[j].conj() * 2.0;
            }
        }
        for i in k + 2..N {
            a[i][k] = C64::zero();
        }
    }
}

impl<const N: usize> Index<(usize, usize)> for Mat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Mat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Mul for Mat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| {
            let mut acc = C64::zero();
            for k in 0..N {
                acc += self.0[i][k] * rhs.0[k][j];
            }
            acc
        })
    }
}

impl<const N: usize> Add for Mat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> AddAssign for Mat<N> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl<const N: usize> Sub for Mat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<const N: usize> Neg for Mat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

/// Kronecker product; row index of the result is `2i + k` for `a[i][j] b[k][l]`.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, c| a.0[r / 2][c / 2] * b.0[r % 2][c % 2])
}

pub fn kron_vec(a: &[C64; 2], b: &[C64; 2]) -> [C64; 4] {
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

/// Pauli matrices `(σx, σy, σz)`.
pub fn pauli() -> [Mat2; 3] {
    let o = C64::zero();
    let one = c64(1.0, 0.0);
    let i = c64(0.0, 1.0);
    [Mat([[o, one], [one, o]]), Mat([[o, -i], [i, o]]), Mat([[one, o], [o, -one]])]
}

/// Deterministic pairwise summation of `f(i)` over `range`.
///
/// The split points depend only on the range, so the rounding pattern is the
/// same no matter who calls it or how often.
pub fn tree_sum<T, F>(start: usize, end: usize, f: &F) -> T
where
    T: Default + AddAssign + Add<Output = T>,
    F: Fn(usize) -> T,
{
    const LEAF: usize = 16;
    if end <= start {
        return T::default();
    }
    if end - start <= LEAF {
        let mut acc = T::default();
        for i in start..end {
            acc += f(i);
        }
        return acc;
    }
    let mid = start + (end - start) / 2;
    tree_sum(start, mid, f) + tree_sum(mid, end, f)
}

/// Fallible variant of [`tree_sum`]; the first error in index order wins.
pub fn try_tree_sum<T, F>(start: usize, end: usize, f: &F) -> Result<T>
where
    T: Default + AddAssign + Add<Output = T>,
    F: Fn(usize) -> Result<T>,
{
    const LEAF: usize = 16;
    if end <= start {
        return Ok(T::default());
    }
    if end - start <= LEAF {
        let mut acc = T::default();
        for i in start..end {
            acc += f(i)?;
        }
        return Ok(acc);
    }
    let mid = start + (end - start) / 2;
    Ok(try_tree_sum(start, mid, f)? + try_tree_sum(mid, end, f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mat<const N: usize>(rng: &mut ChaCha8Rng) -> Mat<N> {
        Mat::from_fn(|_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn power_sums<const N: usize>(eig: &[C64; N], k: u32) -> C64 {
        eig.iter().map(|z| z.powu(k)).fold(C64::zero(), |a, b| a + b)
    }

    #[test]
    fn eigenvalues_match_trace_powers() {
        // Newton identities: the eigenvalue multiset is pinned by tr(A^k), k = 1..N.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a: Mat4 = random_mat(&mut rng);
            let eig = a.eigenvalues().unwrap();
            let mut p = Mat4::identity();
            for k in 1..=4 {
                p = p * a;
                let want = p.trace();
                let got = power_sums(&eig, k);
                assert!((want - got).norm() < 1e-11 * (1.0 + want.norm()), "k={k}");
            }
        }
    }

    #[test]
    fn eigenvalues_of_triangular_and_degenerate() {
        let mut a = Mat4::zero();
        for i in 0..4 {
            a[(i, i)] = c64(i as f64, -(i as f64));
            for j in i + 1..4 {
                a[(i, j)] = c64(1.0, 2.0);
            }
        }
        let mut eig = a.eigenvalues().unwrap();
        eig.sort_by(|x, y| x.re.total_cmp(&y.re));
        for (i, z) in eig.iter().enumerate() {
            assert!((z - c64(i as f64, -(i as f64))).norm() < 1e-12);
        }
        let eig = Mat4::identity().scale(c64(0.25, 0.0)).eigenvalues().unwrap();
        assert!(eig.iter().all(|z| (z - c64(0.25, 0.0)).norm() < 1e-15));
        let eig = Mat4::zero().eigenvalues().unwrap();
        assert!(eig.iter().all(|z| z.is_zero()));
    }

    #[test]
    fn hermitian_eigenvalues_sorted_and_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let b: Mat4 = random_mat(&mut rng);
        let h = b * b.adjoint();
        let eig = h.hermitian_eigenvalues().unwrap();
        assert!(eig.windows(2).all(|w| w[0] >= w[1]));
        assert!(eig.iter().all(|&x| x >= -1e-12));
        let sum: f64 = eig.iter().sum();
        assert!((sum - h.trace().re).abs() < 1e-12);
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let b: Mat4 = random_mat(&mut rng);
            let h = b + b.adjoint();
            let (vals, v) = h.hermitian_eigen().unwrap();
            assert!(v.unitarity_defect() < 1e-13);
            let back = v * Mat4::diagonal(vals.map(|x| c64(x, 0.0))) * v.adjoint();
            assert!(back.dist(&h) < 1e-12);
            assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn singular_values_match_gram_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let a: Mat4 = random_mat(&mut rng);
            let sv = a.singular_values().unwrap();
            let gram = (a.adjoint() * a).hermitian_eigenvalues().unwrap();
            for (s, g) in sv.iter().zip(&gram) {
                assert!((s * s - g).abs() < 1e-11, "{s} vs {g}");
            }
        }
    }

    #[test]
    fn singular_values_resolve_exact_rank_deficiency() {
        let u = [c64(0.6, 0.0), c64(0.0, 0.8), C64::zero(), C64::zero()];
        let v = [c64(0.5, 0.5), C64::zero(), c64(0.5, -0.5), C64::zero()];
        let sv = Mat4::outer(&u, &v).singular_values().unwrap();
        assert!((sv[0] - 1.0).abs() < 1e-15);
        assert!(sv[1..].iter().all(|&x| x < 1e-15));
    }

    #[test]
    fn determinant_and_kron() {
        let [sx, sy, sz] = pauli();
        assert!((sx.determinant() + 1.0).norm() < 1e-15);
        assert!((sy * sy).dist(&Mat2::identity()) < 1e-15);
        assert!((sz * sx).dist(&(sy.scale(c64(0.0, 1.0)))) < 1e-15);
        let k = kron(&sx, &sz);
        assert_eq!(k[(0, 2)], c64(1.0, 0.0));
        assert_eq!(k[(1, 3)], c64(-1.0, 0.0));
        assert!((kron(&sy, &sy).determinant() - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn tree_sum_is_exact_for_integers() {
        let s: f64 = tree_sum(0, 1000, &|i| i as f64);
        assert_eq!(s, 499500.0);
        let e: Result<f64> = try_tree_sum(0, 100, &|i| {
            if i == 40 {
                Err(Error::InvalidArgument("x".into()))
            } else {
                Ok(1.0)
            }
        });
        assert!(e.is_err());
    }
}
