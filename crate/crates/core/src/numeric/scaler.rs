//! Column standardization (zero mean, unit variance) fit on training data.

use crate::error::{Error, Result};
use crate::numeric::Matrix;

/// Per-column mean/SD transform. Constant columns keep SD 1 so the
/// transform stays defined.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaler {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl Scaler {
    pub fn fit(x: &Matrix) -> Result<Scaler> {
        if x.rows() == 0 {
            return Err(Error::Domain("cannot fit a scaler on an empty matrix".into()));
        }
        let means = x.col_means();
        let m = x.rows() as f64;
        let mut sds = vec![0.0; x.cols()];
        for r in 0..x.rows() {
            for (c, v) in x.row(r).iter().enumerate() {
                let d = v - means[c];
                sds[c] += d * d;
            }
        }
        for sd in &mut sds {
            *sd = (*sd / m).sqrt();
            if *sd == 0.0 {
                *sd = 1.0;
            }
        }
        Ok(Scaler { means, sds })
    }

    pub fn transform(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.means.len() {
            return Err(Error::Domain(format!(
                "scaler fit on {} columns, got {}",
                self.means.len(),
                x.cols()
            )));
        }
        let mut out = x.clone();
        for r in 0..out.rows() {
            let row = out.row_mut(r);
            for (c, v) in row.iter_mut().enumerate() {
                *v = (*v - self.means[c]) / self.sds[c];
            }
        }
        Ok(out)
    }

    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.means.len() {
            return Err(Error::Domain(format!(
                "scaler fit on {} columns, got row of {}",
                self.means.len(),
                row.len()
            )));
        }
        Ok(row
            .iter()
            .enumerate()
            .map(|(c, v)| (v - self.means[c]) / self.sds[c])
            .collect())
    }
}
