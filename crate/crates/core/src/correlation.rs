//! Bivariate Pearson correlation against the malnutrition stage, with
//! two-tailed significance and star annotations.

use serde::{Deserialize, Serialize};

use crate::dataset::EncodedDataset;
use crate::error::{Error, Result};
use crate::schema::LABEL_NAME;

/// Pearson correlation coefficient, clamped to [-1, 1] against rounding.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Domain(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::Domain("correlation needs at least 3 samples".into()));
    }
    let mean_x = x.iter().sum::<f64>() / n as f64;
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = x[i] - mean_x;
        let dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Domain("correlation of a constant vector is undefined".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Natural log of the gamma function (Lanczos approximation).
fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 6] = [
        76.18009172947146,
        -86.50532032941677,
        24.01409824083091,
        -1.231739572450155,
        0.1208650973866179e-2,
        -0.5395239384953e-5,
    ];
    let mut y = x;
    let tmp = x + 5.5;
    let tmp = tmp - (x + 0.5) * tmp.ln();
    let mut ser = 1.000000000190015;
    for c in COEF {
        y += 1.0;
        ser += c / y;
    }
    -tmp + (2.5066282746310005 * ser / x).ln()
}

/// Continued-fraction core of the regularized incomplete beta function
/// (modified Lentz algorithm).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const FPMIN: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function I_x(a, b).
fn incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_bt = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let bt = ln_bt.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        bt * beta_cf(a, b, x) / a
    } else {
        1.0 - bt * beta_cf(b, a, 1.0 - x) / b
    }
}

/// Two-tailed significance of a Pearson correlation via the exact
/// t-transform with n - 2 degrees of freedom.
pub fn two_tailed_p(r: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain("significance needs at least 3 samples".into()));
    }
    if !(-1.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("correlation {r} outside [-1, 1]")));
    }
    if r.abs() >= 1.0 {
        return Ok(0.0);
    }
    let df = (n - 2) as f64;
    let t = r * df.sqrt() / (1.0 - r * r).sqrt();
    // P(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2) for Student's t.
    Ok(incomplete_beta(df / 2.0, 0.5, df / (df + t * t)).clamp(0.0, 1.0))
}

/// Significance stars: `**` for p < 0.01, `*` for p < 0.05.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stars {
    None,
    One,
    Two,
}

impl Stars {
    pub fn from_p(p: f64) -> Stars {
        if p < 0.01 {
            Stars::Two
        } else if p < 0.05 {
            Stars::One
        } else {
            Stars::None
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stars::None => "",
            Stars::One => "*",
            Stars::Two => "**",
        }
    }
}

/// One feature's correlation with the target. `r` is `None` for constant
/// features, whose correlation is undefined.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub feature: String,
    pub r: Option<f64>,
    pub p: Option<f64>,
    pub n: usize,
    pub stars: Stars,
}

/// Which rows the table keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationFilter {
    #[default]
    All,
    /// Rows with r < 0 and p < 0.05 only.
    NegativeSignificant,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationTable {
    pub target: String,
    pub filter: CorrelationFilter,
    pub rows: Vec<CorrelationRow>,
}

/// Correlate every non-target feature with the target (the stage label by
/// default), sorted by ascending r. Constant features are kept with an
/// "undefined" marker rather than silently dropped.
pub fn correlation_table(
    data: &EncodedDataset,
    target: &str,
    filter: CorrelationFilter,
) -> Result<CorrelationTable> {
    let n = data.n_rows();
    if n < 3 {
        return Err(Error::Domain("correlation table needs at least 3 rows".into()));
    }
    let target_values: Vec<f64> = if target == LABEL_NAME {
        data.labels.iter().map(|c| c.code() as f64).collect()
    } else {
        let idx = data
            .feature_index(target)
            .ok_or_else(|| Error::Domain(format!("target column {target} not present")))?;
        data.matrix.col(idx)
    };

    let mut rows = Vec::new();
    for (idx, name) in data.feature_names.iter().enumerate() {
        if name == target {
            continue;
        }
        let xs = data.matrix.col(idx);
        match pearson_r(&xs, &target_values) {
            Ok(r) => {
                let p = two_tailed_p(r, n)?;
                rows.push(CorrelationRow {
                    feature: name.clone(),
                    r: Some(r),
                    p: Some(p),
                    n,
                    stars: Stars::from_p(p),
                });
            }
            Err(_) => rows.push(CorrelationRow {
                feature: name.clone(),
                r: None,
                p: None,
                n,
                stars: Stars::None,
            }),
        }
    }
    if filter == CorrelationFilter::NegativeSignificant {
        rows.retain(|row| match (row.r, row.p) {
            (Some(r), Some(p)) => r < 0.0 && p < 0.05,
            // Undefined rows stay listed so nothing vanishes silently.
            _ => true,
        });
    }
    rows.sort_by(|a, b| match (a.r, b.r) {
        (Some(x), Some(y)) => x.partial_cmp(&y).unwrap(),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.feature.cmp(&b.feature),
    });
    Ok(CorrelationTable { target: target.to_string(), filter, rows })
}

impl CorrelationTable {
    /// Plain-text rendering mirroring the bivariate-correlation table
    /// layout: r with stars, Sig. (2-tailed), and N per feature.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "Bivariate Pearson correlation with {} (2-tailed)\n",
            self.target
        ));
        out.push_str(&format!(
            "{:<24} {:>12} {:>14} {:>8}\n",
            "Feature", "Pearson corr.", "Sig. (2-tailed)", "N"
        ));
        for row in &self.rows {
            match (row.r, row.p) {
                (Some(r), Some(p)) => out.push_str(&format!(
                    "{:<24} {:>12} {:>14.3} {:>8}\n",
                    row.feature,
                    format!("{:.3}{}", r, row.stars.as_str()),
                    p,
                    row.n
                )),
                _ => out.push_str(&format!(
                    "{:<24} {:>12} {:>14} {:>8}\n",
                    row.feature, "constant — undefined", "", row.n
                )),
            }
        }
        out.push_str("**Correlation is significant at the 0.01 level (2-tailed).\n");
        out.push_str("*.Correlation is significant at the 0.05 level (2-tailed).\n");
        out
    }

    /// CSV rendering: feature, r, p, n, stars.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("feature,r,p,n,stars\n");
        for row in &self.rows {
            match (row.r, row.p) {
                (Some(r), Some(p)) => {
                    out.push_str(&format!("{},{},{},{},{}\n", row.feature, r, p, row.n, row.stars.as_str()))
                }
                _ => out.push_str(&format!("{},constant,,{},\n", row.feature, row.n)),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn perfect_and_anti_correlation() {
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert_abs_diff_eq!(pearson_r(&x, &y).unwrap(), 1.0, epsilon = 1e-15);
        let y_neg: Vec<f64> = x.iter().map(|v| -2.0 * v + 7.0).collect();
        assert_abs_diff_eq!(pearson_r(&x, &y_neg).unwrap(), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn hand_computed_r() {
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y = vec![1.0, 3.0, 2.0, 4.0];
        assert_abs_diff_eq!(pearson_r(&x, &y).unwrap(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn constant_vector_and_length_mismatch_rejected() {
        assert!(pearson_r(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(pearson_r(&[1.0, 2.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(pearson_r(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn symmetry_and_affine_invariance() {
        let x = vec![0.3, -1.2, 2.5, 0.9, -0.4, 1.8];
        let y = vec![1.1, 0.2, -0.7, 2.2, 0.5, -1.3];
        let rxy = pearson_r(&x, &y).unwrap();
        let ryx = pearson_r(&y, &x).unwrap();
        assert_eq!(rxy.to_bits(), ryx.to_bits());
        let scaled: Vec<f64> = x.iter().map(|v| -3.5 * v + 2.0).collect();
        let r_scaled = pearson_r(&scaled, &y).unwrap();
        assert_abs_diff_eq!(r_scaled, -rxy, epsilon = 1e-12);
    }

    #[test]
    fn p_value_edge_cases() {
        assert_abs_diff_eq!(two_tailed_p(0.0, 10).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(two_tailed_p(1.0, 10).unwrap(), 0.0);
        assert_eq!(two_tailed_p(-1.0, 10).unwrap(), 0.0);
        assert!(two_tailed_p(0.5, 2).is_err());
        // p should fall toward 0 as |r| -> 1.
        let p_small = two_tailed_p(0.999, 50).unwrap();
        assert!(p_small < 1e-10);
    }

    #[test]
    fn p_value_hand_case_df2() {
        // r = 0.8, n = 4: t = 1.8856, df = 2, two-tailed p ~ 0.2
        let p = two_tailed_p(0.8, 4).unwrap();
        assert_abs_diff_eq!(p, 0.2, epsilon = 1e-3);
    }

    #[test]
    fn p_value_matches_closed_form_for_df1() {
        // For df = 1 the t distribution is Cauchy:
        // two-tailed p = 1 - (2/pi) atan(|t|).
        for r in [0.1, 0.3, 0.6, 0.9] {
            let t: f64 = r / (1.0 - r * r as f64).sqrt();
            let expected = 1.0 - 2.0 / std::f64::consts::PI * t.atan();
            let p = two_tailed_p(r, 3).unwrap();
            assert_abs_diff_eq!(p, expected, epsilon = 1e-8);
        }
    }

    #[test]
    fn stars_thresholds() {
        assert_eq!(Stars::from_p(0.0099), Stars::Two);
        assert_eq!(Stars::from_p(0.01), Stars::One);
        assert_eq!(Stars::from_p(0.049), Stars::One);
        assert_eq!(Stars::from_p(0.05), Stars::None);
    }
}
