//! Principal component analysis on the covariance eigenbasis.

use crate::error::{Error, Result};
use crate::numeric::{covariance, mean_center, symmetric_eigen, Matrix};

/// PCA options. The variance target picks the smallest k whose cumulative
/// explained-variance share reaches it; `forced_k` overrides that choice.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaOptions {
    pub variance_target: f64,
    pub forced_k: Option<usize>,
    /// Scale columns to unit variance before the eigendecomposition.
    pub scale: bool,
}

impl Default for PcaOptions {
    fn default() -> Self {
        PcaOptions { variance_target: 0.95, forced_k: None, scale: false }
    }
}

/// Fitted principal-component model.
#[derive(Debug, Clone)]
pub struct PcaModel {
    /// Column means subtracted before projection.
    pub means: Vec<f64>,
    /// Column SDs divided out when `scale` was set (all 1 otherwise).
    pub scales: Vec<f64>,
    /// d x k matrix whose columns are the retained components, in
    /// descending eigenvalue order.
    pub components: Matrix,
    /// Eigenvalues of the retained components (descending).
    pub eigenvalues: Vec<f64>,
    /// Cumulative explained-variance shares for all d components.
    pub cumulative_shares: Vec<f64>,
    /// Retained component count.
    pub k: usize,
}

/// Fit a PCA model: mean-center, covariance (divisor m), symmetric
/// eigendecomposition, then keep the smallest k reaching the variance target.
pub fn pca_fit(data: &Matrix, options: &PcaOptions) -> Result<PcaModel> {
    if data.rows() < 2 {
        return Err(Error::Domain("PCA needs at least 2 rows".into()));
    }
    let target = options.variance_target;
    if !(target > 0.0 && target <= 1.0) {
        return Err(Error::Domain(format!(
            "variance target must be in (0, 1], got {target}"
        )));
    }
    let d = data.cols();
    if let Some(k) = options.forced_k {
        if k == 0 || k > d {
            return Err(Error::Domain(format!("forced k = {k} outside 1..={d}")));
        }
    }

    let (mut centered, means) = mean_center(data)?;
    let mut scales = vec![1.0; d];
    if options.scale {
        let m = centered.rows() as f64;
        for c in 0..d {
            let var: f64 = (0..centered.rows()).map(|r| centered.get(r, c).powi(2)).sum::<f64>() / m;
            if var > 0.0 {
                scales[c] = var.sqrt();
            }
        }
        for r in 0..centered.rows() {
            let row = centered.row_mut(r);
            for (c, v) in row.iter_mut().enumerate() {
                *v /= scales[c];
            }
        }
    }

    let cov = covariance(&centered)?;
    let eigen = symmetric_eigen(&cov)?;
    let total: f64 = eigen.values.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain("data has zero total variance".into()));
    }

    let mut cumulative_shares = Vec::with_capacity(d);
    let mut acc = 0.0;
    for v in &eigen.values {
        acc += v / total;
        cumulative_shares.push(acc.min(1.0));
    }

    let k = match options.forced_k {
        Some(k) => k,
        None => {
            cumulative_shares
                .iter()
                .position(|&share| share >= target)
                .map(|i| i + 1)
                .unwrap_or(d)
        }
    };

    let components = {
        let mut c = Matrix::zeros(d, k);
        for col in 0..k {
            for row in 0..d {
                c.set(row, col, eigen.vectors.get(row, col));
            }
        }
        c
    };

    Ok(PcaModel {
        means,
        scales,
        components,
        eigenvalues: eigen.values[..k].to_vec(),
        cumulative_shares,
        k,
    })
}

impl PcaModel {
    fn center(&self, data: &Matrix) -> Result<Matrix> {
        if data.cols() != self.means.len() {
            return Err(Error::Domain(format!(
                "model fit on {} columns, got {}",
                self.means.len(),
                data.cols()
            )));
        }
        let mut centered = data.clone();
        for r in 0..centered.rows() {
            let row = centered.row_mut(r);
            for (c, v) in row.iter_mut().enumerate() {
                *v = (*v - self.means[c]) / self.scales[c];
            }
        }
        Ok(centered)
    }

    /// Project data onto the retained components: (data - means) * components.
    pub fn transform(&self, data: &Matrix) -> Result<Matrix> {
        let centered = self.center(data)?;
        centered.matmul(&self.components)
    }

    /// Map projected rows back into the original feature space.
    pub fn inverse_transform(&self, projected: &Matrix) -> Result<Matrix> {
        if projected.cols() != self.k {
            return Err(Error::Domain(format!(
                "expected {} projected columns, got {}",
                self.k,
                projected.cols()
            )));
        }
        let mut out = projected.matmul(&self.components.transpose())?;
        for r in 0..out.rows() {
            let row = out.row_mut(r);
            for (c, v) in row.iter_mut().enumerate() {
                *v = *v * self.scales[c] + self.means[c];
            }
        }
        Ok(out)
    }

    /// Squared Frobenius reconstruction error of the rank-k projection,
    /// computed on centered data. For the fit data this equals the sum of
    /// the discarded eigenvalues times the row count.
    pub fn reconstruction_error(&self, data: &Matrix) -> Result<f64> {
        let centered = self.center(data)?;
        let projected = centered.matmul(&self.components)?;
        let mut err = 0.0;
        for r in 0..centered.rows() {
            let full: f64 = centered.row(r).iter().map(|v| v * v).sum();
            let kept: f64 = projected.row(r).iter().map(|v| v * v).sum();
            err += full - kept;
        }
        Ok(err.max(0.0))
    }

    /// (component index, cumulative share) pairs for the explained-variance
    /// curve, emitted as CSV.
    pub fn cumulative_curve_csv(&self) -> String {
        let mut out = String::from("component,cumulative_share\n");
        for (i, share) in self.cumulative_shares.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, share));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::numeric::Rng;

    fn line_data() -> Matrix {
        // Points exactly on y = 2x.
        let xs = [-2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
        Matrix::from_rows(&xs.map(|x| vec![x, 2.0 * x]).to_vec()).unwrap()
    }

    #[test]
    fn rank_one_data_keeps_one_component() {
        let model = pca_fit(&line_data(), &PcaOptions::default()).unwrap();
        assert_eq!(model.k, 1);
        assert_abs_diff_eq!(model.cumulative_shares[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(model.reconstruction_error(&line_data()).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn full_target_retains_every_component() {
        let mut rng = Rng::new(2);
        let rows: Vec<Vec<f64>> = (0..200)
            .map(|_| (0..3).map(|_| rng.next_gaussian()).collect())
            .collect();
        let data = Matrix::from_rows(&rows).unwrap();
        let model = pca_fit(&data, &PcaOptions { variance_target: 1.0, ..Default::default() }).unwrap();
        assert_eq!(model.k, 3);
        assert_abs_diff_eq!(model.reconstruction_error(&data).unwrap(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn transformed_columns_have_eigenvalue_variances() {
        let mut rng = Rng::new(5);
        let rows: Vec<Vec<f64>> = (0..400)
            .map(|_| {
                let g = rng.next_gaussian();
                vec![
                    3.0 * g + rng.next_gaussian(),
                    -1.5 * g + rng.next_gaussian(),
                    0.5 * rng.next_gaussian(),
                ]
            })
            .collect();
        let data = Matrix::from_rows(&rows).unwrap();
        let model = pca_fit(&data, &PcaOptions { variance_target: 1.0, ..Default::default() }).unwrap();
        let projected = model.transform(&data).unwrap();
        let m = projected.rows() as f64;
        for c in 0..model.k {
            let mean: f64 = (0..projected.rows()).map(|r| projected.get(r, c)).sum::<f64>() / m;
            let var: f64 = (0..projected.rows())
                .map(|r| (projected.get(r, c) - mean).powi(2))
                .sum::<f64>()
                / m;
            let rel = (var - model.eigenvalues[c]).abs() / model.eigenvalues[c].max(1e-12);
            assert!(rel < 1e-8, "component {c}: var {var} vs {}", model.eigenvalues[c]);
        }
    }

    #[test]
    fn transform_of_mean_row_is_zero() {
        let data = line_data();
        let model = pca_fit(&data, &PcaOptions::default()).unwrap();
        let mean_row = Matrix::from_vec(1, 2, model.means.clone()).unwrap();
        let projected = model.transform(&mean_row).unwrap();
        for v in projected.data() {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn reconstruction_error_equals_discarded_eigenvalue_mass() {
        // Diagonal-covariance fixture with eigenvalues ~ [5, 2, 1]: keep 2,
        // error must be (discarded eigenvalue) * m.
        let mut rng = Rng::new(9);
        let rows: Vec<Vec<f64>> = (0..500)
            .map(|_| {
                vec![
                    5.0f64.sqrt() * rng.next_gaussian(),
                    2.0f64.sqrt() * rng.next_gaussian(),
                    1.0f64 * rng.next_gaussian(),
                ]
            })
            .collect();
        let data = Matrix::from_rows(&rows).unwrap();
        let model = pca_fit(&data, &PcaOptions { forced_k: Some(2), ..Default::default() }).unwrap();
        let full = pca_fit(&data, &PcaOptions { variance_target: 1.0, ..Default::default() }).unwrap();
        let discarded: f64 = full.eigenvalues[2..].iter().sum();
        let expected = discarded * data.rows() as f64;
        let err = model.reconstruction_error(&data).unwrap();
        let rel = (err - expected).abs() / expected;
        assert!(rel < 1e-8, "error {err} vs discarded mass {expected}");
    }

    #[test]
    fn error_is_nonincreasing_in_k() {
        let mut rng = Rng::new(13);
        let rows: Vec<Vec<f64>> = (0..300)
            .map(|_| (0..4).map(|_| rng.next_gaussian() * 2.0).collect())
            .collect();
        let data = Matrix::from_rows(&rows).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..=4 {
            let model = pca_fit(&data, &PcaOptions { forced_k: Some(k), ..Default::default() }).unwrap();
            let err = model.reconstruction_error(&data).unwrap();
            assert!(err <= prev + 1e-9, "error increased at k = {k}");
            prev = err;
        }
    }

    #[test]
    fn projection_is_idempotent() {
        let mut rng = Rng::new(17);
        let rows: Vec<Vec<f64>> = (0..200)
            .map(|_| {
                let g = rng.next_gaussian();
                vec![g + 0.1 * rng.next_gaussian(), g, rng.next_gaussian()]
            })
            .collect();
        let data = Matrix::from_rows(&rows).unwrap();
        let model = pca_fit(&data, &PcaOptions { forced_k: Some(2), ..Default::default() }).unwrap();
        let t1 = model.transform(&data).unwrap();
        let reconstructed = model.inverse_transform(&t1).unwrap();
        let t2 = model.transform(&reconstructed).unwrap();
        for (a, b) in t1.data().iter().zip(t2.data()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
    }

    #[test]
    fn transformed_components_are_uncorrelated() {
        let mut rng = Rng::new(21);
        let rows: Vec<Vec<f64>> = (0..500)
            .map(|_| {
                let g = rng.next_gaussian();
                vec![2.0 * g + rng.next_gaussian(), -g + rng.next_gaussian(), rng.next_gaussian()]
            })
            .collect();
        let data = Matrix::from_rows(&rows).unwrap();
        let model = pca_fit(&data, &PcaOptions { variance_target: 1.0, ..Default::default() }).unwrap();
        let projected = model.transform(&data).unwrap();
        for i in 0..model.k {
            for j in (i + 1)..model.k {
                let r = crate::correlation::pearson_r(&projected.col(i), &projected.col(j)).unwrap();
                assert!(r.abs() <= 1e-6, "components {i},{j} correlated: {r}");
            }
        }
    }

    #[test]
    fn constant_matrix_rejected() {
        let data = Matrix::from_vec(3, 2, vec![1.0; 6]).unwrap();
        assert!(pca_fit(&data, &PcaOptions::default()).is_err());
    }

    #[test]
    fn variance_share_increments_sum_to_one() {
        let mut rng = Rng::new(23);
        let rows: Vec<Vec<f64>> = (0..100)
            .map(|_| (0..5).map(|_| rng.next_gaussian()).collect())
            .collect();
        let data = Matrix::from_rows(&rows).unwrap();
        let model = pca_fit(&data, &PcaOptions { variance_target: 1.0, ..Default::default() }).unwrap();
        assert_eq!(model.k, 5);
        assert_abs_diff_eq!(*model.cumulative_shares.last().unwrap(), 1.0, epsilon = 1e-9);
    }
}
