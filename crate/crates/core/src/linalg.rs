//! Small dense complex linear-algebra helpers shared by the solver blocks.

use nalgebra::{DMatrix, DVector};

pub use nalgebra::Complex;

/// Complex scalar used throughout the crate.
pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

#[inline]
pub fn cis(phase: f64) -> C64 {
    C64::from_polar(1.0, phase)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `aᴴ b` for complex vectors.
pub fn inner(a: &CVector, b: &CVector) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Outer product `a bᴴ`.
pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    CMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
}

/// Squared Frobenius norm.
pub fn fro2(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Largest absolute row sum, an upper bound on the spectral norm of a Hermitian matrix.
pub fn max_abs_row_sum(m: &CMatrix) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Deviation from Hermitian symmetry, max-abs entrywise.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix, via its real symmetric embedding.
///
/// Each eigenvalue of `m` appears twice in the embedding; the duplicates are removed by
/// taking every other sorted value.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let emb = real_embedding(m);
    let mut ev: Vec<f64> = emb.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev.into_iter().step_by(2).collect()
}

/// Real symmetric form `S` with `zᴴ M z = xᵀ S x` for the interleaved lift `x` of `z`.
pub fn real_embedding(m: &CMatrix) -> RMatrix {
    let n = m.nrows();
    let mut s = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            s[(2 * i, 2 * j)] = z.re;
            s[(2 * i, 2 * j + 1)] = -z.im;
            s[(2 * i + 1, 2 * j)] = z.im;
            s[(2 * i + 1, 2 * j + 1)] = z.re;
        }
    }
    s
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
