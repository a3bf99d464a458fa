//! Mean-centering, covariance, and symmetric eigendecomposition.
//!
//! The eigensolver is a cyclic Jacobi sweep, which is exact enough and
//! fast for the feature counts this toolkit works with (d <= 20).

use crate::error::{Error, Result};
use crate::numeric::Matrix;

/// Eigenvalues (descending) and matching unit-norm eigenvectors
/// (as columns of `vectors`).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

/// Subtract each column's mean. Returns the centered matrix and the means.
pub fn mean_center(x: &Matrix) -> Result<(Matrix, Vec<f64>)> {
    if x.rows() == 0 || x.cols() == 0 {
        return Err(Error::Domain("cannot center an empty matrix".into()));
    }
    let means = x.col_means();
    let mut centered = x.clone();
    for r in 0..x.rows() {
        let row = centered.row_mut(r);
        for (c, v) in row.iter_mut().enumerate() {
            *v -= means[c];
        }
    }
    Ok((centered, means))
}

/// Sample covariance of a mean-centered matrix, with divisor m (the row
/// count), giving C = (1/m) X^T X.
pub fn covariance(centered: &Matrix) -> Result<Matrix> {
    let m = centered.rows();
    let d = centered.cols();
    if m == 0 || d == 0 {
        return Err(Error::Domain("cannot take covariance of an empty matrix".into()));
    }
    // Guard against un-centered input: column sums must be ~0.
    let tol = 1e-6 * m as f64;
    for c in 0..d {
        let sum: f64 = (0..m).map(|r| centered.get(r, c)).sum();
        if sum.abs() > tol {
            return Err(Error::Domain(format!(
                "column {c} is not mean-centered (sum {sum:.3e})"
            )));
        }
    }
    let mut cov = Matrix::zeros(d, d);
    for r in 0..m {
        let row = centered.row(r);
        for i in 0..d {
            let xi = row[i];
            if xi == 0.0 {
                continue;
            }
            for j in i..d {
                let v = cov.get(i, j) + xi * row[j];
                cov.set(i, j, v);
            }
        }
    }
    let inv_m = 1.0 / m as f64;
    for i in 0..d {
        for j in i..d {
            let v = cov.get(i, j) * inv_m;
            cov.set(i, j, v);
            cov.set(j, i, v);
        }
    }
    Ok(cov)
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Eigenvalues come back sorted descending; each eigenvector column is
/// unit-norm with its largest-magnitude entry made non-negative so that
/// repeated runs produce identical bases.
pub fn symmetric_eigen(a: &Matrix) -> Result<EigenDecomposition> {
    let n = a.rows();
    if n == 0 || a.cols() != n {
        return Err(Error::Domain("eigendecomposition needs a square matrix".into()));
    }
    let max_abs = a.data().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let sym_tol = 1e-9 * max_abs.max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if (a.get(i, j) - a.get(j, i)).abs() > sym_tol {
                return Err(Error::Domain(format!(
                    "matrix is not symmetric at ({i},{j})"
                )));
            }
        }
    }

    let mut m = a.clone();
    // Symmetrize exactly so rotations preserve symmetry bit-for-bit.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m.get(i, j) + m.get(j, i));
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    let mut v = Matrix::identity(n);

    let off_norm = |m: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += m.get(i, j) * m.get(i, j);
            }
        }
        (2.0 * s).sqrt()
    };
    let frob = a.data().iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-14 * frob.max(1.0);

    let max_sweeps = 64;
    let mut converged = false;
    for _ in 0..max_sweeps {
        if off_norm(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Rotate rows/columns p and q of the working matrix.
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                // Accumulate the rotation into the eigenvector basis.
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    if !converged && off_norm(&m) > target {
        return Err(Error::Numeric(format!(
            "Jacobi eigensolver did not converge in {max_sweeps} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let column: Vec<f64> = (0..n).map(|r| v.get(r, old_col)).collect();
        // Sign convention: largest-magnitude entry non-negative.
        let dominant = column
            .iter()
            .cloned()
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        let flip = if dominant < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            vectors.set(r, new_col, flip * column[r]);
        }
    }

    Ok(EigenDecomposition { values, vectors })
}
