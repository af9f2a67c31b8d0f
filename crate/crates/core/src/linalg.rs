//! Dense complex linear algebra for tiny matrices.
//!
//! Everything here is sized for the 2×2 … 4×4 matrices the parametrization
//! produces (two-quNit purifications may transiently reach 16×16). The
//! Hermitian eigensolver is a cyclic Jacobi iteration with complex plane
//! rotations; it is the independent oracle every closed-form result in the
//! crate is checked against, so it deliberately shares no code with the
//! analytic paths.

use num_complex::Complex64;

use crate::{tol, Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// `e^{iφ}` as a complex number.
pub fn phase(phi: f64) -> C64 {
    C64::new(phi.cos(), phi.sin())
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = CMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Plain (non-conjugating) transpose.
    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn trace(&self) -> C64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * s)
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise difference `max |aᵢⱼ − bᵢⱼ|`.
    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm of `A − A†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        debug_assert!(self.is_square());
        self.sub(&self.adjoint()).frobenius_norm()
    }

    pub fn column(&self, j: usize) -> CVec {
        CVec::from_iter((0..self.rows).map(|i| self[(i, j)]))
    }

    pub fn mul_vec(&self, v: &CVec) -> CVec {
        assert_eq!(self.cols, v.dim());
        CVec::from_iter((0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum()))
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::ops::Mul for &CMat {
    type Output = CMat;
    /// Panicking product for internal use; `matmul` is the checked surface.
    fn mul(self, rhs: &CMat) -> CMat {
        matmul(self, rhs).expect("inner dimensions must agree")
    }
}

/// Complex column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct CVec {
    data: Vec<C64>,
}

impl CVec {
    pub fn zeros(n: usize) -> Self {
        CVec {
            data: vec![ZERO; n],
        }
    }

    /// `k`-th standard basis vector of dimension `n`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = CVec::zeros(n);
        v[k] = ONE;
        v
    }

    pub fn from_slice(s: &[C64]) -> Self {
        CVec { data: s.to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    /// Hermitian inner product `⟨self|other⟩`.
    pub fn dot(&self, other: &CVec) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: C64) -> CVec {
        CVec::from_iter(self.data.iter().map(|z| z * s))
    }

    pub fn add(&self, other: &CVec) -> CVec {
        assert_eq!(self.dim(), other.dim());
        CVec::from_iter(self.data.iter().zip(&other.data).map(|(a, b)| a + b))
    }

    pub fn sub(&self, other: &CVec) -> CVec {
        assert_eq!(self.dim(), other.dim());
        CVec::from_iter(self.data.iter().zip(&other.data).map(|(a, b)| a - b))
    }

    /// Projector `|self⟩⟨self|`.
    pub fn projector(&self) -> CMat {
        self.outer(self)
    }

    /// Outer product `|self⟩⟨other|`.
    pub fn outer(&self, other: &CVec) -> CMat {
        CMat::from_fn(self.dim(), other.dim(), |i, j| self[i] * other[j].conj())
    }

    /// Kronecker product of vectors, index convention `i·dim(b) + k`.
    pub fn kron(&self, other: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim() * other.dim());
        for i in 0..self.dim() {
            for k in 0..other.dim() {
                out[i * other.dim() + k] = self[i] * other[k];
            }
        }
        out
    }
}

impl FromIterator<C64> for CVec {
    fn from_iter<T: IntoIterator<Item = C64>>(it: T) -> Self {
        CVec {
            data: it.into_iter().collect(),
        }
    }
}

impl std::ops::Index<usize> for CVec {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

impl std::ops::IndexMut<usize> for CVec {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.data[i]
    }
}

/// Checked matrix product.
pub fn matmul(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.cols() != b.rows() {
        return Err(Error::Dimension {
            op: "matmul",
            details: format!("{}x{} times {}x{}", a.rows(), a.cols(), b.rows(), b.cols()),
        });
    }
    let mut out = CMat::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            let aik = a[(i, k)];
            if aik == ZERO {
                continue;
            }
            for j in 0..b.cols() {
                out[(i, j)] += aik * b[(k, j)];
            }
        }
    }
    Ok(out)
}

/// Kronecker product `a ⊗ b` with block-row convention `(i·b.rows + k)`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a[(i, j)];
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out[(i * b.rows() + k, j * b.cols() + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Which tensor factor of a two-qubit operator an operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

fn check_4x4(op: &'static str, rho: &CMat) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::Dimension {
            op,
            details: format!("expected 4x4, got {}x{}", rho.rows(), rho.cols()),
        });
    }
    Ok(())
}

/// Partial transpose of a two-qubit operator with respect to one factor.
///
/// Composite indices follow `|ia⟩ = |i⟩_A ⊗ |a⟩_B ↦ 2i + a`.
pub fn partial_transpose(rho: &CMat, subsystem: Subsystem) -> Result<CMat> {
    check_4x4("partial_transpose", rho)?;
    let mut out = CMat::zeros(4, 4);
    for i in 0..2 {
        for a in 0..2 {
            for j in 0..2 {
                for b in 0..2 {
                    let (r, c) = (2 * i + a, 2 * j + b);
                    out[(r, c)] = match subsystem {
                        Subsystem::A => rho[(2 * j + a, 2 * i + b)],
                        Subsystem::B => rho[(2 * i + b, 2 * j + a)],
                    };
                }
            }
        }
    }
    Ok(out)
}

/// Trace over the factor *not* named by `keep`.
pub fn partial_trace(rho: &CMat, keep: Subsystem) -> Result<CMat> {
    check_4x4("partial_trace", rho)?;
    let mut out = CMat::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            let mut s = ZERO;
            for k in 0..2 {
                s += match keep {
                    Subsystem::A => rho[(2 * i + k, 2 * j + k)],
                    Subsystem::B => rho[(2 * k + i, 2 * k + j)],
                };
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix: descending real eigenvalues
/// and a unitary whose columns are the matching eigenvectors.
#[derive(Clone, Debug)]
pub struct HermEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermEigen {
    /// Rebuilds `V Λ V†`.
    pub fn reconstruct(&self) -> CMat {
        let n = self.values.len();
        let mut out = CMat::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let v = self.vectors.column(k);
            out = out.add(&v.projector().scale(C64::new(lam, 0.0)));
        }
        out
    }
}

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
///
/// Each rotation annihilates one off-diagonal pair via a phase factor
/// followed by a real Jacobi rotation. Sweeps run until the off-diagonal
/// Frobenius norm drops below [`tol::EPS_JACOBI_OFF`].
pub fn herm_eigen(a: &CMat) -> Result<HermEigen> {
    if !a.is_square() {
        return Err(Error::Dimension {
            op: "herm_eigen",
            details: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    let deviation = a.hermiticity_deviation();
    if deviation > tol::EPS_HERM_INPUT {
        return Err(Error::NotHermitian {
            deviation,
            limit: tol::EPS_HERM_INPUT,
        });
    }
    let n = a.rows();
    // Symmetrize so rounding in the input cannot leak into the iteration.
    let mut m = a.add(&a.adjoint()).scale(C64::new(0.5, 0.0));
    let mut v = CMat::identity(n);

    let off_norm = |m: &CMat| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..tol::MAX_JACOBI_SWEEPS {
        if off_norm(&m) < tol::EPS_JACOBI_OFF {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let beta = apq.norm();
                if beta == 0.0 {
                    continue;
                }
                // Phase that makes the (p,q) entry real positive, then the
                // Numerical-Recipes rotation that zeroes it.
                let w = apq / beta; // e^{iφ}
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (app - aqq) / (2.0 * beta);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Complex plane rotation J: identity except
                //   J[p,p]=c, J[p,q]=−w·s, J[q,p]=w̄·s, J[q,q]=c,
                // which zeroes the (p,q) entry of J†MJ for this t.
                // Column update M ← M·J:
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * c + miq * (w.conj() * s);
                    m[(i, q)] = miq * c - mip * (w * s);
                }
                // Row update: M ← J†·M.
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * c + mqj * (w * s);
                    m[(q, j)] = mqj * c - mpj * (w.conj() * s);
                }
                // Accumulate eigenvectors: V ← V·J.
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * (w.conj() * s);
                    v[(i, q)] = viq * c - vip * (w * s);
                }
            }
        }
    }
    if !converged && off_norm(&m) >= tol::EPS_JACOBI_OFF {
        return Err(Error::NoConvergence {
            sweeps: tol::MAX_JACOBI_SWEEPS,
            off: off_norm(&m),
        });
    }

    // Sort descending by eigenvalue; break ties deterministically by fixing
    // each eigenvector's first nonzero component to be real positive.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.partial_cmp(&m[(i, i)].re).unwrap());

    let values: Vec<f64> = order.iter().map(|&k| m[(k, k)].re).collect();
    let mut vectors = CMat::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut vk = v.column(k);
        if let Some(lead) = (0..n).find(|&i| vk[i].norm() > 1e-9) {
            let ph = vk[lead] / vk[lead].norm();
            vk = vk.scale(ph.conj());
        }
        for i in 0..n {
            vectors[(i, col)] = vk[i];
        }
    }
    Ok(HermEigen { values, vectors })
}

/// Positive-semidefinite square root via the eigensolver; eigenvalues in
/// `(-EPS_EIG, 0)` are clamped to zero before the square root.
pub fn sqrt_psd(a: &CMat) -> Result<CMat> {
    let eig = herm_eigen(a)?;
    if let Some(&lam) = eig.values.iter().find(|&&l| l < -tol::EPS_EIG) {
        return Err(Error::InvalidState(format!(
            "matrix has eigenvalue {lam:.3e}, not positive semidefinite"
        )));
    }
    let n = eig.values.len();
    let mut out = CMat::zeros(n, n);
    for (k, &lam) in eig.values.iter().enumerate() {
        let root = lam.max(0.0).sqrt();
        let v = eig.vectors.column(k);
        out = out.add(&v.projector().scale(C64::new(root, 0.0)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Defining cosine/sine formula for the one-qubit cascade block,
    /// evaluated here independently of the parametrize module.
    fn su2_block(theta: f64, psi: f64) -> CMat {
        let co = phase(-psi / 2.0) * (theta / 2.0).cos();
        let si = phase(psi / 2.0) * (theta / 2.0).sin();
        CMat::from_rows(&[&[co, -si.conj()], &[si, co.conj()]])
    }

    fn random_matrix(rng: &mut SplitMix64, n: usize) -> CMat {
        CMat::from_fn(n, n, |_, _| c(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0)))
    }

    fn random_hermitian(rng: &mut SplitMix64, n: usize) -> CMat {
        let m = random_matrix(rng, n);
        m.add(&m.adjoint()).scale(c(0.5, 0.0))
    }

    fn bell_projector() -> CMat {
        let mut v = CVec::zeros(4);
        v[0] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[3] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v.projector()
    }

    #[test]
    fn matmul_identity() {
        let mut rng = SplitMix64::new(7);
        let x = random_matrix(&mut rng, 2);
        let prod = matmul(&CMat::identity(2), &x).unwrap();
        assert!(prod.max_abs_diff(&x) == 0.0);
    }

    #[test]
    fn matmul_unitary_block() {
        let u = su2_block(0.7, 1.1);
        let prod = matmul(&u.adjoint(), &u).unwrap();
        assert!(prod.max_abs_diff(&CMat::identity(2)) < 1e-14);
    }

    #[test]
    fn matmul_associative() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let (a, b, cc) = (
                random_matrix(&mut rng, 4),
                random_matrix(&mut rng, 4),
                random_matrix(&mut rng, 4),
            );
            let left = &(&a * &b) * &cc;
            let right = &a * &(&b * &cc);
            assert!(left.max_abs_diff(&right) < 1e-12);
        }
    }

    #[test]
    fn matmul_dimension_error() {
        let a = CMat::zeros(2, 3);
        let b = CMat::zeros(2, 2);
        assert!(matches!(matmul(&a, &b), Err(Error::Dimension { .. })));
    }

    #[test]
    fn kron_identities() {
        let i2 = CMat::identity(2);
        assert_eq!(kron(&i2, &i2), CMat::identity(4));
        // |0⟩ ⊗ |1⟩ lands on the second standard basis vector of C⁴.
        let v = CVec::basis(2, 0).kron(&CVec::basis(2, 1));
        assert_eq!(v, CVec::basis(4, 1));
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..20 {
            let (a, b) = (random_matrix(&mut rng, 2), random_matrix(&mut rng, 2));
            let (cm, d) = (random_matrix(&mut rng, 2), random_matrix(&mut rng, 2));
            let lhs = &kron(&a, &b) * &kron(&cm, &d);
            let rhs = kron(&(&a * &cm), &(&b * &d));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_involution_and_hermiticity() {
        let mut rng = SplitMix64::new(5);
        for sub in [Subsystem::A, Subsystem::B] {
            let h = random_hermitian(&mut rng, 4);
            let pt = partial_transpose(&h, sub).unwrap();
            assert!(pt.hermiticity_deviation() < 1e-14);
            assert!((pt.trace() - h.trace()).norm() < 1e-14);
            let back = partial_transpose(&pt, sub).unwrap();
            assert!(back.max_abs_diff(&h) == 0.0);
        }
    }

    #[test]
    fn partial_transpose_product_state() {
        let mut rng = SplitMix64::new(13);
        let a = random_hermitian(&mut rng, 2);
        let b = random_hermitian(&mut rng, 2);
        let pt = partial_transpose(&kron(&a, &b), Subsystem::A).unwrap();
        assert!(pt.max_abs_diff(&kron(&a.transpose(), &b)) < 1e-15);
        let pt_b = partial_transpose(&kron(&a, &b), Subsystem::B).unwrap();
        assert!(pt_b.max_abs_diff(&kron(&a, &b.transpose())) < 1e-15);
    }

    #[test]
    fn partial_transpose_bell_spectrum() {
        let pt = partial_transpose(&bell_projector(), Subsystem::B).unwrap();
        let eig = herm_eigen(&pt).unwrap();
        let expect = [0.5, 0.5, 0.5, -0.5];
        for (got, want) in eig.values.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let mut rng = SplitMix64::new(17);
        let a = random_hermitian(&mut rng, 2);
        let mut b = random_hermitian(&mut rng, 2);
        let tr = b.trace().re;
        b = b.scale(c(1.0 / tr, 0.0)); // unit trace
        let red = partial_trace(&kron(&a, &b), Subsystem::A).unwrap();
        assert!(red.max_abs_diff(&a) < 1e-13);

        let half = partial_trace(&bell_projector(), Subsystem::A).unwrap();
        assert!(half.max_abs_diff(&CMat::identity(2).scale(c(0.5, 0.0))) < 1e-15);
        let half_b = partial_trace(&bell_projector(), Subsystem::B).unwrap();
        assert!(half_b.max_abs_diff(&CMat::identity(2).scale(c(0.5, 0.0))) < 1e-15);
    }

    #[test]
    fn herm_eigen_diagonal() {
        let d = [3.0, 1.0, 0.0, -2.0];
        let m = CMat::from_fn(4, 4, |i, j| if i == j { c(d[i], 0.0) } else { ZERO });
        let eig = herm_eigen(&m).unwrap();
        assert_eq!(eig.values, vec![3.0, 1.0, 0.0, -2.0]);
    }

    #[test]
    fn herm_eigen_contracts() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..30 {
            let h = random_hermitian(&mut rng, 4);
            let eig = herm_eigen(&h).unwrap();
            // unitarity
            let vtv = &eig.vectors.adjoint() * &eig.vectors;
            assert!(vtv.max_abs_diff(&CMat::identity(4)) < tol::EPS_ORTHO);
            // reconstruction
            assert!(eig.reconstruct().max_abs_diff(&h) < tol::EPS_EIG);
            // trace = sum of eigenvalues
            let sum: f64 = eig.values.iter().sum();
            assert!((sum - h.trace().re).abs() < tol::EPS_EIG);
            // descending order
            for w in eig.values.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn herm_eigen_rejects_non_hermitian() {
        let mut m = CMat::identity(3);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(herm_eigen(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let mut rng = SplitMix64::new(29);
        for _ in 0..10 {
            let g = random_matrix(&mut rng, 4);
            let p = &g * &g.adjoint();
            let tr = p.trace().re;
            let p = p.scale(c(1.0 / tr, 0.0));
            let s = sqrt_psd(&p).unwrap();
            assert!((&s * &s).max_abs_diff(&p) < 1e-11);
        }
    }
}
