//! Dense kernels: pivoted LU, Cholesky, a symmetric eigensolver
//! (Householder tridiagonalisation followed by implicit QL) and the
//! symmetric-definite generalized eigenproblem via Cholesky reduction.
//!
//! Matrices are nalgebra containers; the factorizations are implemented
//! here so sign conventions and failure thresholds stay under our control.

use nalgebra::{DMatrix, DVector};

use crate::error::LinalgError;

/// Maximum absolute row sum.
pub fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn vec_inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `(M + Mᵀ) / 2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Relative residual `‖Mz − b‖∞ / (‖M‖∞‖z‖∞ + ‖b‖∞)`.
pub fn relative_residual(m: &DMatrix<f64>, z: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let denom = inf_norm(m) * vec_inf_norm(z) + vec_inf_norm(b);
    if denom == 0.0 {
        return 0.0;
    }
    vec_inf_norm(&(m * z - b)) / denom
}

/// LU factorization with partial (row) pivoting, `PM = LU`, stored packed.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: DMatrix<f64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(m: &DMatrix<f64>) -> Result<Self, LinalgError> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(LinalgError::Dimension(format!(
                "LU of {}x{} matrix",
                n,
                m.ncols()
            )));
        }
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let threshold = (n.max(1) as f64) * f64::EPSILON * inf_norm(m);
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if pivot <= threshold || pivot == 0.0 {
                return Err(LinalgError::Singular { step: k, pivot });
            }
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
            }
            let d = lu[(k, k)];
            for i in (k + 1)..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in (k + 1)..n {
                        lu[(i, j)] -= f * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n, "right-hand side length");
        let mut x = DVector::from_iterator(n, self.perm.iter().map(|&p| b[p]));
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    pub fn solve_matrix(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(b.nrows(), b.ncols());
        for (k, col) in b.column_iter().enumerate() {
            out.set_column(k, &self.solve(&col.into_owned()));
        }
        out
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        self.solve_matrix(&DMatrix::identity(self.dim(), self.dim()))
    }
}

/// Solves `Mz = b` by row-pivoted elimination.
pub fn solve_linear(m: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>, LinalgError> {
    if b.len() != m.nrows() {
        return Err(LinalgError::Dimension(format!(
            "rhs of length {} for {}x{} system",
            b.len(),
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(Lu::new(m)?.solve(b))
}

/// `M = RᵀR` with `R` upper triangular and a strictly positive diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    pub r: DMatrix<f64>,
}

impl CholeskyFactor {
    /// `R⁻¹`, upper triangular.
    pub fn r_inverse(&self) -> DMatrix<f64> {
        let n = self.r.nrows();
        let mut inv = DMatrix::zeros(n, n);
        for col in 0..n {
            inv[(col, col)] = 1.0 / self.r[(col, col)];
            for i in (0..col).rev() {
                let mut acc = 0.0;
                for k in (i + 1)..=col {
                    acc += self.r[(i, k)] * inv[(k, col)];
                }
                inv[(i, col)] = -acc / self.r[(i, i)];
            }
        }
        inv
    }
}

pub fn cholesky(m: &DMatrix<f64>) -> Result<CholeskyFactor, LinalgError> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(LinalgError::Dimension(format!(
            "Cholesky of {}x{} matrix",
            n,
            m.ncols()
        )));
    }
    let scale = (0..n).map(|i| m[(i, i)].abs()).fold(0.0, f64::max);
    let threshold = (n.max(1) as f64) * f64::EPSILON * scale;
    let mut r = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= r[(k, j)] * r[(k, j)];
        }
        if !(d > threshold) {
            return Err(LinalgError::NotPositiveDefinite { step: j, pivot: d });
        }
        let rjj = d.sqrt();
        r[(j, j)] = rjj;
        for i in (j + 1)..n {
            let mut acc = m[(j, i)];
            for k in 0..j {
                acc -= r[(k, j)] * r[(k, i)];
            }
            r[(j, i)] = acc / rjj;
        }
    }
    Ok(CholeskyFactor { r })
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigenDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SymmetricEigenDecomposition {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let q = &self.eigenvectors;
        q * DMatrix::from_diagonal(&self.eigenvalues) * q.transpose()
    }
}

/// Flips `v` so its largest-magnitude entry is positive; among entries
/// within a relative 1e-12 of the largest, the lowest index decides.
pub fn normalize_sign(v: &mut DVector<f64>) {
    let max = vec_inf_norm(v);
    if max == 0.0 {
        return;
    }
    if let Some(k) = v.iter().position(|x| x.abs() >= max * (1.0 - 1e-12)) {
        if v[k] < 0.0 {
            v.neg_mut();
        }
    }
}

/// Symmetric eigendecomposition of `(M + Mᵀ)/2`.
pub fn sym_eigen(m: &DMatrix<f64>) -> SymmetricEigenDecomposition {
    let n = m.nrows();
    assert_eq!(m.ncols(), n, "sym_eigen needs a square matrix");
    if n == 0 {
        return SymmetricEigenDecomposition {
            eigenvalues: DVector::zeros(0),
            eigenvectors: DMatrix::zeros(0, 0),
        };
    }
    let mut v = symmetrize(m);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    tridiagonal_ql(&mut v, &mut d, &mut e);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&k| d[k]));
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src).into_owned();
        normalize_sign(&mut col);
        eigenvectors.set_column(dst, &col);
    }
    SymmetricEigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

// Householder reduction to tridiagonal form. On return `d` holds the
// diagonal, `e[1..]` the subdiagonal and `v` the accumulated transform.
fn tridiagonalize(v: &mut DMatrix<f64>, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..(n - 1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

// Implicit QL with Wilkinson-style shifts on the tridiagonal (d, e),
// accumulating rotations into `v`.
fn tridiagonal_ql(v: &mut DMatrix<f64>, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                assert!(sweeps <= 60 * n, "tridiagonal QL failed to converge");
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let hk = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * hk;
                        v[(k, i)] = c * v[(k, i)] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

/// Largest eigenpair of the pencil `Cx = λBx` with `B` positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedEigenpair {
    pub lambda: f64,
    /// B-normalized: `xᵀBx = 1`.
    pub vector: DVector<f64>,
}

/// Reduces `Cx = λBx` to `R⁻ᵀCR⁻¹u = λu` with `B = RᵀR`, `x = R⁻¹u`.
pub fn gen_eigen_max(
    c: &DMatrix<f64>,
    b: &DMatrix<f64>,
) -> Result<GeneralizedEigenpair, LinalgError> {
    let n = b.nrows();
    if c.nrows() != n || c.ncols() != n || b.ncols() != n {
        return Err(LinalgError::Dimension(
            "pencil matrices must share a square shape".into(),
        ));
    }
    if n == 0 {
        return Err(LinalgError::Dimension("empty pencil".into()));
    }
    let chol = cholesky(&symmetrize(b))?;
    let r_inv = chol.r_inverse();
    let reduced = symmetrize(&(r_inv.transpose() * symmetrize(c) * &r_inv));
    let eig = sym_eigen(&reduced);
    let top = n - 1;
    let mut vector = &r_inv * eig.eigenvectors.column(top);
    normalize_sign(&mut vector);
    Ok(GeneralizedEigenpair {
        lambda: eig.eigenvalues[top],
        vector,
    })
}
