//! Dense complex matrix kernel.
//!
//! Matrices are `nalgebra::DMatrix<Complex<f64>>`; decompositions come from
//! nalgebra's Hermitian eigensolver and SVD. Tolerances are relative: a
//! quantity is compared against `tol * (1 + ‖A‖)` so verdicts do not depend
//! on the overall scale of the input.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;

/// Default relative tolerance for Hermiticity and positivity tests.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default relative rank cutoff (fraction of the largest singular value).
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Build a complex matrix from real rows. Panics on ragged input.
pub fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
    ComplexMatrix::from_fn(r, c, |i, j| c64(rows[i][j], 0.0))
}

pub fn from_real_diagonal(diag: &[f64]) -> ComplexMatrix {
    let n = diag.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { c64(diag[i], 0.0) } else { c64(0.0, 0.0) })
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Matrix unit `E_ij` of size `n × n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(n, n);
    e[(i, j)] = c64(1.0, 0.0);
    e
}

pub fn ensure_finite(a: &ComplexMatrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("matrix contains NaN or infinite entries".into()))
    }
}

pub fn ensure_square(a: &ComplexMatrix, what: &str) -> Result<usize> {
    if a.is_square() {
        Ok(a.nrows())
    } else {
        Err(Error::Shape(format!(
            "{what} must be square, got {}×{}",
            a.nrows(),
            a.ncols()
        )))
    }
}

pub fn trace(a: &ComplexMatrix) -> C64 {
    a.diagonal().iter().sum()
}

/// `(A + A*) / 2`.
pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()) * c64(0.5, 0.0)
}

/// Descending singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `s_k` with the zero-padding convention `s_k = 0` past the end (0-based).
    pub fn get(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }

    /// The first `len` values, zero-padded.
    pub fn padded(&self, len: usize) -> Vec<f64> {
        (0..len).map(|k| self.get(k)).collect()
    }

    pub fn largest(&self) -> f64 {
        self.get(0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }
}

/// Singular values in descending order; length `min(rows, cols)`.
///
/// The matrix is split into the connected blocks of its sparsity pattern
/// (rows and columns linked by a nonzero entry) and each block is factorized
/// on its own. Zero rows and columns drop out, so `A`, `A ⊕ 0` and `A ⊕ B`
/// reuse bit-identical values for the `A` part.
pub fn singular_values(a: &ComplexMatrix) -> Result<SingularSpectrum> {
    ensure_finite(a)?;
    let len = a.nrows().min(a.ncols());
    let mut values = Vec::with_capacity(len);
    for (rows, cols) in sparsity_blocks(a) {
        let block = ComplexMatrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])]);
        values.extend(block.svd(false, false).singular_values.iter().copied());
    }
    values.sort_by(|x, y| y.total_cmp(x));
    values.resize(len, 0.0);
    for v in &mut values {
        *v = v.max(0.0);
    }
    Ok(SingularSpectrum { values })
}

// Row and column index sets of the connected components of the bipartite
// graph on rows ∪ cols with an edge per nonzero entry. Isolated rows and
// columns are omitted.
fn sparsity_blocks(a: &ComplexMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (r, c) = a.shape();
    let mut parent: Vec<usize> = (0..r + c).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut touched = vec![false; r + c];
    let zero = c64(0.0, 0.0);
    for j in 0..c {
        for i in 0..r {
            if a[(i, j)] != zero {
                touched[i] = true;
                touched[r + j] = true;
                let (x, y) = (find(&mut parent, i), find(&mut parent, r + j));
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
    }
    let mut blocks: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
    for v in (0..r + c).filter(|&v| touched[v]) {
        let root = find(&mut parent, v);
        let idx = match blocks.iter().position(|b| b.0 == root) {
            Some(k) => k,
            None => {
                blocks.push((root, Vec::new(), Vec::new()));
                blocks.len() - 1
            }
        };
        if v < r {
            blocks[idx].1.push(v);
        } else {
            blocks[idx].2.push(v - r);
        }
    }
    blocks.into_iter().map(|(_, rows, cols)| (rows, cols)).collect()
}

/// Operator (spectral) norm. Panics on non-finite input.
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    singular_values(a).expect("finite matrix").largest()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V f(Λ) V*`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let s = f(self.values[j]);
            scaled.column_mut(j).scale_mut(s);
        }
        hermitian_part(&(scaled * self.vectors.adjoint()))
    }
}

fn hermitian_defect(a: &ComplexMatrix) -> f64 {
    let diff = a - a.adjoint();
    diff.norm()
}

/// Check Hermiticity within `tol * (1 + ‖A‖)`.
pub fn ensure_hermitian(a: &ComplexMatrix, tol: f64) -> Result<()> {
    ensure_square(a, "Hermitian input")?;
    ensure_finite(a)?;
    let frob = hermitian_defect(a);
    if frob == 0.0 {
        return Ok(());
    }
    let scale = 1.0 + op_norm(a);
    let bound = tol * scale;
    // Frobenius norm dominates the operator norm; only refine when needed.
    if frob <= bound {
        return Ok(());
    }
    let defect = op_norm(&(a - a.adjoint()));
    if defect <= bound {
        Ok(())
    } else {
        Err(Error::NotHermitian { defect, bound })
    }
}

/// Eigen-decomposition of the Hermitian part of `a`, without a Hermiticity check.
pub fn eigh_unchecked(a: &ComplexMatrix) -> HermitianEigen {
    let n = a.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        };
    }
    let eig = hermitian_part(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// Eigenvalues of the Hermitian part, ascending.
pub fn eigvalsh(a: &ComplexMatrix) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = hermitian_part(a).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

pub fn hermitian_eigen(a: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    ensure_hermitian(a, tol)?;
    Ok(eigh_unchecked(a))
}

/// Outcome of a positive-semidefiniteness test; `min_eigenvalue` is the certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdVerdict {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

/// `λ_min(A) ≥ −tol·(1 + ‖A‖)` for Hermitian `A`.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> Result<PsdVerdict> {
    ensure_hermitian(a, tol)?;
    Ok(psd_verdict_unchecked(a, tol))
}

/// PSD verdict on the Hermitian part of `a`.
pub fn psd_verdict_unchecked(a: &ComplexMatrix, tol: f64) -> PsdVerdict {
    let values = eigvalsh(a);
    let min = values.first().copied().unwrap_or(0.0);
    let max = values.last().copied().unwrap_or(0.0);
    let scale = 1.0 + min.abs().max(max.abs());
    PsdVerdict {
        psd: min >= -tol * scale,
        min_eigenvalue: min,
    }
}

/// PSD square root; eigenvalues in `[−tol·(1+‖A‖), 0)` are clamped to zero.
pub fn psd_sqrt(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(a, tol)?;
    let scale = 1.0 + eig.min().abs().max(eig.max().abs());
    if eig.min() < -tol * scale {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig.map_values(|v| v.max(0.0).sqrt()))
}

/// `|X| = (X* X)^{1/2}`.
pub fn abs(x: &ComplexMatrix) -> ComplexMatrix {
    let gram = x.adjoint() * x;
    eigh_unchecked(&gram).map_values(|v| v.max(0.0).sqrt())
}

/// Moore–Penrose pseudo-inverse; singular values below `rank_tol · s_1` count as zero.
pub fn pseudo_inverse(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    ensure_finite(a)?;
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return Ok(ComplexMatrix::zeros(c, r));
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V*");
    let s = &svd.singular_values;
    let s_max = s.iter().copied().fold(0.0, f64::max);
    let cutoff = rank_tol * s_max;
    let mut out = ComplexMatrix::zeros(c, r);
    for k in 0..s.len() {
        if s[k] > cutoff && s[k] > 0.0 {
            let vk = v_t.row(k).adjoint();
            let uk = u.column(k);
            out += (vk * uk.adjoint()) * c64(1.0 / s[k], 0.0);
        }
    }
    Ok(out)
}

/// Numerical rank with the relative cutoff `rank_tol · s_1`.
pub fn numerical_rank(a: &ComplexMatrix, rank_tol: f64) -> Result<usize> {
    let s = singular_values(a)?;
    let cutoff = rank_tol * s.largest();
    Ok(s.values().iter().filter(|&&v| v > cutoff && v > 0.0).count())
}

/// Kronecker product `A ⊗ B`; entry `((i,k),(j,l))` sits at `(i·p + k, j·q + l)`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Entrywise (Schur) product.
pub fn hadamard(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!(
            "Hadamard product needs equal shapes, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.component_mul(b))
}

/// Block-diagonal `A ⊕ B`.
pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = ComplexMatrix::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Block-diagonal sum of a list.
pub fn direct_sum_all(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Assemble `[[a, b], [c, d]]`.
pub fn block2(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, d: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.nrows() != b.nrows() || c.nrows() != d.nrows() || a.ncols() != c.ncols() || b.ncols() != d.ncols() {
        return Err(Error::Shape("2×2 block partition is not conformable".into()));
    }
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    let mut out = ComplexMatrix::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a);
    out.view_mut((0, c1), (r1, c2)).copy_from(b);
    out.view_mut((r1, 0), (r2, c1)).copy_from(c);
    out.view_mut((r1, c1), (r2, c2)).copy_from(d);
    Ok(out)
}

/// `rows × cols` matrix of independent standard complex Gaussians.
pub fn random_gaussian(rows: usize, cols: usize, rng: &mut SplitMix64) -> ComplexMatrix {
    // Row-major fill so the stream order matches the JSON layout.
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out[(i, j)] = rng.complex_normal();
        }
    }
    out
}

/// Random Hermitian matrix `(G + G*) / 2`.
pub fn random_hermitian(dim: usize, rng: &mut SplitMix64) -> ComplexMatrix {
    hermitian_part(&random_gaussian(dim, dim, rng))
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal pushed into `Q`.
pub fn random_unitary_with(dim: usize, rng: &mut SplitMix64) -> ComplexMatrix {
    let g = random_gaussian(dim, dim, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = SplitMix64::new(seed);
    random_unitary_with(dim, &mut rng)
}

/// `n × k` matrix with orthonormal columns (`k ≤ n`), from QR of a Gaussian.
pub fn random_isometry(n: usize, k: usize, rng: &mut SplitMix64) -> ComplexMatrix {
    assert!(k <= n, "isometry needs k <= n");
    let g = random_gaussian(n, k, rng);
    let q = g.qr().q();
    q.columns(0, k).into_owned()
}

/// Result of factoring the off-diagonal block of `[[C, X], [X*, D]]`.
#[derive(Debug, Clone)]
pub struct ContractionFactor {
    pub k: ComplexMatrix,
    pub norm: f64,
    pub reconstruction_error: f64,
    pub valid: bool,
}

/// `K = C^{+1/2} X D^{+1/2}`; valid when `K` is a contraction reproducing `X`,
/// which happens exactly when the block matrix is PSD.
pub fn contraction_factor(
    c: &ComplexMatrix,
    x: &ComplexMatrix,
    d: &ComplexMatrix,
    tol: f64,
) -> Result<ContractionFactor> {
    ensure_square(c, "C")?;
    ensure_square(d, "D")?;
    if x.nrows() != c.nrows() || x.ncols() != d.nrows() {
        return Err(Error::Shape(format!(
            "X is {}×{} but C is {}×{} and D is {}×{}",
            x.nrows(),
            x.ncols(),
            c.nrows(),
            c.ncols(),
            d.nrows(),
            d.ncols()
        )));
    }
    ensure_finite(x)?;
    let sc = psd_sqrt(c, tol)?;
    let sd = psd_sqrt(d, tol)?;
    let k = pseudo_inverse(&sc, DEFAULT_RANK_TOL)? * x * pseudo_inverse(&sd, DEFAULT_RANK_TOL)?;
    let norm = op_norm(&k);
    let reconstruction_error = op_norm(&(&sc * &k * &sd - x));
    let valid = norm <= 1.0 + tol && reconstruction_error <= tol * (1.0 + op_norm(x));
    Ok(ContractionFactor {
        k,
        norm,
        reconstruction_error,
        valid,
    })
}

/// Column vector helper used by the orbit and dilation code.
pub fn column(values: &[C64]) -> DVector<C64> {
    DVector::from_column_slice(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn singular_values_of_diagonal() {
        let s = singular_values(&from_real_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(s.values().len(), 3);
        for (got, want) in s.values().iter().zip([3.0, 2.0, 1.0]) {
            assert!(close(*got, want, 1e-14));
        }
    }

    #[test]
    fn singular_values_of_jordan_block() {
        let s = singular_values(&from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]])).unwrap();
        assert!(close(s.get(0), 2.0, 1e-14));
        assert_eq!(s.get(1), 0.0);
        assert_eq!(s.get(5), 0.0);
    }

    #[test]
    fn singular_values_of_defect_matrix() {
        // MM* has characteristic polynomial (λ−4)(λ²−32λ+64).
        let m = from_real_rows(&[&[-2.0, 0.0, 0.0], &[-2.0, -4.0, 0.0], &[2.0, 2.0, -2.0]]);
        let s = singular_values(&m).unwrap();
        let r3 = 3f64.sqrt();
        let want = [2.0 + 2.0 * r3, 2.0, 2.0 * r3 - 2.0];
        for (got, w) in s.values().iter().zip(want) {
            assert!(close(*got, w, 1e-12), "{got} vs {w}");
        }
    }

    #[test]
    fn rejects_non_finite() {
        let mut a = identity(2);
        a[(0, 1)] = c64(f64::NAN, 0.0);
        assert!(matches!(singular_values(&a), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn psd_identity_and_negative_direction() {
        let v = is_psd(&identity(3), 1e-10).unwrap();
        assert!(v.psd);
        assert!(close(v.min_eigenvalue, 1.0, 1e-14));

        let v = is_psd(&from_real_diagonal(&[1.0, -1e-3]), 1e-10).unwrap();
        assert!(!v.psd);
        assert!(close(v.min_eigenvalue, -1e-3, 1e-15));
    }

    #[test]
    fn psd_of_doubled_block() {
        let a = from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let block = block2(&a, &a, &a, &a).unwrap();
        assert!(is_psd(&block, 1e-10).unwrap().psd);
    }

    #[test]
    fn psd_rejects_non_hermitian_and_non_square() {
        let a = from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(is_psd(&a, 1e-9), Err(Error::NotHermitian { .. })));
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(is_psd(&b, 1e-9), Err(Error::Shape(_))));
    }

    #[test]
    fn sqrt_examples() {
        let s = psd_sqrt(&from_real_diagonal(&[4.0, 9.0]), DEFAULT_TOL).unwrap();
        assert!((s - from_real_diagonal(&[2.0, 3.0])).norm() < 1e-14);
        let z = psd_sqrt(&ComplexMatrix::zeros(3, 3), DEFAULT_TOL).unwrap();
        assert_eq!(z.norm(), 0.0);
        assert!(matches!(
            psd_sqrt(&from_real_diagonal(&[1.0, -0.5]), DEFAULT_TOL),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn sqrt_clamps_roundoff_negatives() {
        let s = psd_sqrt(&from_real_diagonal(&[1.0, -1e-13]), DEFAULT_TOL).unwrap();
        assert_eq!(s[(1, 1)], c64(0.0, 0.0));
    }

    #[test]
    fn sqrt_reconstructs_gram() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let g = random_gaussian(4, 4, &mut rng);
            let a = g.adjoint() * &g;
            let s = psd_sqrt(&a, DEFAULT_TOL).unwrap();
            assert!(op_norm(&(&s * &s - &a)) <= 1e-10 * (1.0 + op_norm(&a)));
            assert!(is_psd(&s, 1e-10).unwrap().psd);
        }
    }

    #[test]
    fn pinv_examples() {
        let p = pseudo_inverse(&from_real_diagonal(&[2.0, 0.0]), DEFAULT_RANK_TOL).unwrap();
        assert!((p - from_real_diagonal(&[0.5, 0.0])).norm() < 1e-15);

        let u = random_unitary(3, 5);
        let p = pseudo_inverse(&u, DEFAULT_RANK_TOL).unwrap();
        assert!((p - u.adjoint()).norm() < 1e-12);

        let mut rng = SplitMix64::new(3);
        let a = random_gaussian(3, 2, &mut rng);
        let p = pseudo_inverse(&a, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(p.shape(), (2, 3));
        assert!(op_norm(&(&a * &p * &a - &a)) <= 1e-10);
        assert!(op_norm(&(&p * &a * &p - &p)) <= 1e-10);
        let ap = &a * &p;
        assert!(op_norm(&(&ap - ap.adjoint())) <= 1e-10);
    }

    #[test]
    fn products_and_sums() {
        assert_eq!(kron(&identity(2), &identity(3)), identity(6));
        let mut rng = SplitMix64::new(4);
        let a = random_gaussian(3, 3, &mut rng);
        let ones = ComplexMatrix::from_element(3, 3, c64(1.0, 0.0));
        assert_eq!(hadamard(&a, &ones).unwrap(), a);
        assert!(hadamard(&a, &identity(2)).is_err());
        let s = direct_sum(&from_real_diagonal(&[3.0]), &from_real_diagonal(&[5.0]));
        assert_eq!(op_norm(&s), 5.0);
    }

    #[test]
    fn unitary_examples() {
        let u = random_unitary(1, 42);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
        let u = random_unitary(4, 7);
        assert!(op_norm(&(u.adjoint() * &u - identity(4))) <= 1e-12);
        assert_eq!(u, random_unitary(4, 7));
    }

    #[test]
    fn haar_first_moment() {
        // E|u_11|^2 = 1/dim; the variance of |u_11|^2 is (dim−1)/(dim²(dim+1)).
        let dim = 3;
        let draws = 10_000;
        let mut rng = SplitMix64::new(2024);
        let mean = (0..draws)
            .map(|_| random_unitary_with(dim, &mut rng)[(0, 0)].norm_sqr())
            .sum::<f64>()
            / draws as f64;
        let d = dim as f64;
        let sigma = ((d - 1.0) / (d * d * (d + 1.0)) / draws as f64).sqrt();
        assert!((mean - 1.0 / d).abs() <= 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn contraction_examples() {
        let i2 = identity(2);
        let half = &i2 * c64(0.5, 0.0);
        let f = contraction_factor(&i2, &half, &i2, DEFAULT_TOL).unwrap();
        assert!(f.valid);
        assert!((f.k - half).norm() < 1e-14);

        let two = &i2 * c64(2.0, 0.0);
        let f = contraction_factor(&i2, &two, &i2, DEFAULT_TOL).unwrap();
        assert!(!f.valid);
        assert!(close(f.norm, 2.0, 1e-14));
        let block = block2(&i2, &two, &two.adjoint(), &i2).unwrap();
        assert!(!is_psd(&block, DEFAULT_TOL).unwrap().psd);
    }

    #[test]
    fn contraction_from_gram_partition() {
        let mut rng = SplitMix64::new(8);
        for _ in 0..25 {
            let g = random_gaussian(5, 5, &mut rng);
            let full = g.adjoint() * &g;
            let c = full.view((0, 0), (2, 2)).into_owned();
            let x = full.view((0, 2), (2, 3)).into_owned();
            let d = full.view((2, 2), (3, 3)).into_owned();
            let f = contraction_factor(&c, &x, &d, 1e-8).unwrap();
            assert!(f.valid, "norm {} err {}", f.norm, f.reconstruction_error);
            assert!(f.norm <= 1.0 + 1e-8);
        }
    }
}
