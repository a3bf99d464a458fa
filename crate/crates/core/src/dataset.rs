//! Survey records, label staging, preprocessing, and train/test splitting.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::numeric::{Matrix, Rng};
use crate::schema::{FeatureRole, FeatureSchema, LABEL_NAME};

/// Four-level malnutrition stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MalnutritionClass {
    WellNourished,
    Mild,
    Moderate,
    Severe,
}

pub const N_CLASSES: usize = 4;

impl MalnutritionClass {
    pub const ALL: [MalnutritionClass; 4] = [
        MalnutritionClass::WellNourished,
        MalnutritionClass::Mild,
        MalnutritionClass::Moderate,
        MalnutritionClass::Severe,
    ];

    /// Stage code in 1..=4 (1 = well nourished, 4 = severe).
    pub fn code(self) -> u8 {
        match self {
            MalnutritionClass::WellNourished => 1,
            MalnutritionClass::Mild => 2,
            MalnutritionClass::Moderate => 3,
            MalnutritionClass::Severe => 4,
        }
    }

    /// Zero-based index (code - 1).
    pub fn index(self) -> usize {
        self.code() as usize - 1
    }

    pub fn from_code(code: u8) -> Result<MalnutritionClass> {
        match code {
            1 => Ok(MalnutritionClass::WellNourished),
            2 => Ok(MalnutritionClass::Mild),
            3 => Ok(MalnutritionClass::Moderate),
            4 => Ok(MalnutritionClass::Severe),
            other => Err(Error::Domain(format!("invalid class code {other}"))),
        }
    }

    pub fn from_index(index: usize) -> Result<MalnutritionClass> {
        if index < 4 {
            MalnutritionClass::from_code(index as u8 + 1)
        } else {
            Err(Error::Domain(format!("invalid class index {index}")))
        }
    }
}

impl fmt::Display for MalnutritionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// The four Z-scores of one record, in schema order.
#[derive(Debug, Clone, Copy)]
pub struct ZScores {
    pub zbmi: f64,
    pub whz2: f64,
    pub waz2: f64,
    pub haz2: f64,
}

impl ZScores {
    fn as_array(&self) -> [f64; 4] {
        [self.zbmi, self.whz2, self.waz2, self.haz2]
    }
}

/// How the staging aggregate z* is computed from the four Z-scores.
///
/// The default takes the minimum (worst-case) score; single-score policies
/// are available for sensitivity runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StagingPolicy {
    #[default]
    MinZ,
    Zbmi,
    Whz2,
    Waz2,
    Haz2,
}

impl StagingPolicy {
    pub fn name(self) -> &'static str {
        match self {
            StagingPolicy::MinZ => "min",
            StagingPolicy::Zbmi => "zbmi",
            StagingPolicy::Whz2 => "whz2",
            StagingPolicy::Waz2 => "waz2",
            StagingPolicy::Haz2 => "haz2",
        }
    }

    pub fn parse(s: &str) -> Result<StagingPolicy> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(StagingPolicy::MinZ),
            "zbmi" => Ok(StagingPolicy::Zbmi),
            "whz2" => Ok(StagingPolicy::Whz2),
            "waz2" => Ok(StagingPolicy::Waz2),
            "haz2" => Ok(StagingPolicy::Haz2),
            other => Err(Error::Config(format!("unknown staging policy '{other}'"))),
        }
    }
}

/// Stage a record from its Z-scores.
///
/// With z* the staging aggregate: z* >= -1 is well nourished (1),
/// -2 <= z* < -1 mild (2), -3 <= z* < -2 moderate (3), z* < -3 severe (4).
/// Boundary values land in the less severe class.
pub fn label_mstatus(z: &ZScores, policy: StagingPolicy) -> Result<MalnutritionClass> {
    if z.as_array().iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("Z-scores must be finite for staging".into()));
    }
    let zstar = match policy {
        StagingPolicy::MinZ => z.as_array().into_iter().fold(f64::INFINITY, f64::min),
        StagingPolicy::Zbmi => z.zbmi,
        StagingPolicy::Whz2 => z.whz2,
        StagingPolicy::Waz2 => z.waz2,
        StagingPolicy::Haz2 => z.haz2,
    };
    Ok(if zstar >= -1.0 {
        MalnutritionClass::WellNourished
    } else if zstar >= -2.0 {
        MalnutritionClass::Mild
    } else if zstar >= -3.0 {
        MalnutritionClass::Moderate
    } else {
        MalnutritionClass::Severe
    })
}

/// One survey row: an optional value per schema feature, in schema order.
/// `None` means missing.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyRecord {
    values: Vec<Option<f64>>,
}

impl SurveyRecord {
    pub fn new(values: Vec<Option<f64>>) -> SurveyRecord {
        SurveyRecord { values }
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.values.get(index).copied().flatten()
    }

    pub fn value(&self, schema: &FeatureSchema, name: &str) -> Option<f64> {
        schema.index_of(name).and_then(|i| self.get(i))
    }

    fn zscores(&self, schema: &FeatureSchema) -> Option<ZScores> {
        let [zbmi, whz2, waz2, haz2] = schema.zscore_indices();
        Some(ZScores {
            zbmi: self.get(zbmi)?,
            whz2: self.get(whz2)?,
            waz2: self.get(waz2)?,
            haz2: self.get(haz2)?,
        })
    }
}

/// Where a dataset came from and how many rows were excluded on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub source: String,
    pub rows_in: usize,
    pub rows_dropped: usize,
}

impl Provenance {
    pub fn rows_analyzed(&self) -> usize {
        self.rows_in - self.rows_dropped
    }
}

/// Fully encoded dataset: numeric feature matrix plus stage labels.
/// No missing values remain; column order matches `feature_names`.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedDataset {
    pub feature_names: Vec<String>,
    pub matrix: Matrix,
    pub labels: Vec<MalnutritionClass>,
    pub provenance: Provenance,
}

impl EncodedDataset {
    pub fn n_rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn n_features(&self) -> usize {
        self.matrix.cols()
    }

    /// Labels as 1..=4 codes.
    pub fn label_codes(&self) -> Vec<usize> {
        self.labels.iter().map(|c| c.code() as usize).collect()
    }

    /// Column index of a feature.
    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    /// Dataset restricted to the named feature columns, in the given order.
    pub fn select_features(&self, names: &[String]) -> Result<EncodedDataset> {
        let mut cols = Vec::with_capacity(names.len());
        for name in names {
            let idx = self
                .feature_index(name)
                .ok_or_else(|| Error::Schema(format!("feature {name} not in dataset")))?;
            cols.push(idx);
        }
        Ok(EncodedDataset {
            feature_names: names.to_vec(),
            matrix: self.matrix.select_cols(&cols)?,
            labels: self.labels.clone(),
            provenance: self.provenance.clone(),
        })
    }

    fn subset(&self, rows: &[usize], source: &str) -> Result<EncodedDataset> {
        Ok(EncodedDataset {
            feature_names: self.feature_names.clone(),
            matrix: self.matrix.select_rows(rows)?,
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            provenance: Provenance {
                source: source.to_string(),
                rows_in: rows.len(),
                rows_dropped: 0,
            },
        })
    }

    /// Write the encoded matrix plus the label column as CSV.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?;
        let mut header: Vec<String> = self.feature_names.clone();
        header.push(LABEL_NAME.into());
        w.write_record(&header)
            .map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?;
        for r in 0..self.n_rows() {
            let mut rec: Vec<String> = self.matrix.row(r).iter().map(|v| format!("{v}")).collect();
            rec.push(self.labels[r].code().to_string());
            w.write_record(&rec)
                .map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?;
        }
        w.flush()
            .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
        Ok(())
    }

    /// Read a CSV previously produced by [`EncodedDataset::write_csv`].
    pub fn read_csv(path: &Path) -> Result<EncodedDataset> {
        let mut reader = csv::Reader::from_path(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?;
        let header = reader
            .headers()
            .map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?
            .clone();
        let label_col = header
            .iter()
            .position(|h| h == LABEL_NAME)
            .ok_or_else(|| Error::Schema(format!("encoded CSV lacks a {LABEL_NAME} column")))?;
        let feature_names: Vec<String> = header
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != label_col)
            .map(|(_, h)| h.to_string())
            .collect();
        let mut data = Vec::new();
        let mut labels = Vec::new();
        for (line, rec) in reader.records().enumerate() {
            let rec = rec
                .map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?;
            for (i, cell) in rec.iter().enumerate() {
                if i == label_col {
                    let code: u8 = cell.parse().map_err(|_| {
                        Error::Domain(format!("row {}: bad label '{cell}'", line + 1))
                    })?;
                    labels.push(MalnutritionClass::from_code(code)?);
                } else {
                    let v: f64 = cell.parse().map_err(|_| {
                        Error::Domain(format!("row {}: bad value '{cell}'", line + 1))
                    })?;
                    data.push(v);
                }
            }
        }
        let rows = labels.len();
        let cols = feature_names.len();
        Ok(EncodedDataset {
            feature_names,
            matrix: Matrix::from_vec(rows, cols, data)?,
            labels,
            provenance: Provenance {
                source: path.display().to_string(),
                rows_in: rows,
                rows_dropped: 0,
            },
        })
    }
}

fn io_of(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    }
}

/// Result of parsing a survey CSV: records in file order plus the number of
/// cells that were unparseable or out of domain (treated as missing).
#[derive(Debug)]
pub struct ParsedSurvey {
    pub records: Vec<SurveyRecord>,
    pub warning_count: usize,
}

/// Parse a survey CSV against a schema.
///
/// The header must name every schema feature (extra columns are ignored).
/// Empty cells are missing; unparseable or out-of-domain cells become
/// missing and are counted as warnings.
pub fn parse_survey_csv(path: &Path, schema: &FeatureSchema) -> Result<ParsedSurvey> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?;
    let header = reader
        .headers()
        .map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?
        .clone();
    let mut col_of_feature = Vec::with_capacity(schema.len());
    for spec in schema.features() {
        let col = header
            .iter()
            .position(|h| h == spec.name)
            .ok_or_else(|| Error::Schema(format!("CSV header is missing feature {}", spec.name)))?;
        col_of_feature.push(col);
    }

    let mut records = Vec::new();
    let mut warning_count = 0usize;
    for rec in reader.records() {
        let rec =
            rec.map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?;
        let mut values = Vec::with_capacity(schema.len());
        for (spec, &col) in schema.features().iter().zip(&col_of_feature) {
            let cell = rec.get(col).unwrap_or("").trim();
            if cell.is_empty() {
                values.push(None);
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if spec.kind.contains(v) => values.push(Some(v)),
                _ => {
                    warning_count += 1;
                    values.push(None);
                }
            }
        }
        records.push(SurveyRecord::new(values));
    }
    Ok(ParsedSurvey { records, warning_count })
}

/// Write raw survey records as CSV (missing values become empty cells).
pub fn write_survey_csv(path: &Path, schema: &FeatureSchema, records: &[SurveyRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?;
    let header: Vec<&str> = schema.features().iter().map(|f| f.name.as_str()).collect();
    w.write_record(&header)
        .map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?;
    for record in records {
        let row: Vec<String> = record
            .values()
            .iter()
            .map(|v| v.map(|x| format!("{x}")).unwrap_or_default())
            .collect();
        w.write_record(&row)
            .map_err(|e| Error::Io { path: path.display().to_string(), source: io_of(e) })?;
    }
    w.flush()
        .map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
    Ok(())
}

/// Encode survey records into a complete numeric dataset.
///
/// Records missing any of the four Z-scores are dropped (they cannot be
/// staged). Remaining missing predictor values encode to 0, the
/// no-information code. The label is staged per `policy`.
pub fn preprocess(
    records: &[SurveyRecord],
    schema: &FeatureSchema,
    policy: StagingPolicy,
    source: &str,
) -> Result<EncodedDataset> {
    if records.is_empty() {
        return Err(Error::Domain("no records to preprocess".into()));
    }
    let rows_in = records.len();
    let mut data = Vec::new();
    let mut labels = Vec::new();
    for record in records {
        let Some(z) = record.zscores(schema) else {
            continue;
        };
        labels.push(label_mstatus(&z, policy)?);
        for idx in 0..schema.len() {
            data.push(record.get(idx).unwrap_or(0.0));
        }
    }
    let rows_out = labels.len();
    let rows_dropped = rows_in - rows_out;
    if rows_out == 0 {
        return Err(Error::Domain(format!(
            "all {rows_dropped} records were dropped for missing Z-scores"
        )));
    }
    Ok(EncodedDataset {
        feature_names: schema.features().iter().map(|f| f.name.clone()).collect(),
        matrix: Matrix::from_vec(rows_out, schema.len(), data)?,
        labels,
        provenance: Provenance { source: source.to_string(), rows_in, rows_dropped },
    })
}

/// Deterministic shuffled split. Test size is `round(n * test_fraction)`;
/// both sides keep the original row order.
pub fn split_train_test(
    data: &EncodedDataset,
    test_fraction: f64,
    rng: &mut Rng,
) -> Result<(EncodedDataset, EncodedDataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Domain(format!(
            "test fraction must be in (0, 1), got {test_fraction}"
        )));
    }
    let n = data.n_rows();
    let test_n = (n as f64 * test_fraction).round() as usize;
    if test_n == 0 || test_n >= n {
        return Err(Error::Domain(format!(
            "split of {n} rows at fraction {test_fraction} leaves an empty side"
        )));
    }
    let perm = rng.shuffled_indices(n)?;
    let mut test_idx: Vec<usize> = perm[..test_n].to_vec();
    let mut train_idx: Vec<usize> = perm[test_n..].to_vec();
    test_idx.sort_unstable();
    train_idx.sort_unstable();
    let source = &data.provenance.source;
    Ok((
        data.subset(&train_idx, &format!("{source} [train]"))?,
        data.subset(&test_idx, &format!("{source} [test]"))?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::FeatureSchema;
    use std::io::Write;

    fn zrec(schema: &FeatureSchema, z: [Option<f64>; 4]) -> SurveyRecord {
        let mut values = vec![None; schema.len()];
        let [zbmi, whz2, waz2, haz2] = schema.zscore_indices();
        values[zbmi] = z[0];
        values[whz2] = z[1];
        values[waz2] = z[2];
        values[haz2] = z[3];
        SurveyRecord::new(values)
    }

    #[test]
    fn staging_thresholds() {
        let cases = [
            (-0.5, 1),
            (-1.0, 1),
            (-1.5, 2),
            (-2.0, 2),
            (-2.5, 3),
            (-3.0, 3),
            (-3.5, 4),
        ];
        for (zstar, code) in cases {
            let z = ZScores { zbmi: 0.0, whz2: 0.0, waz2: 0.0, haz2: zstar };
            let got = label_mstatus(&z, StagingPolicy::MinZ).unwrap();
            assert_eq!(got.code(), code, "z* = {zstar}");
        }
    }

    #[test]
    fn staging_is_monotone() {
        let mut prev_code = 1;
        let mut z = 1.0;
        while z > -5.0 {
            let scores = ZScores { zbmi: z, whz2: z, waz2: z, haz2: z };
            let code = label_mstatus(&scores, StagingPolicy::MinZ).unwrap().code();
            assert!(code >= prev_code, "staging must not become less severe as z falls");
            prev_code = code;
            z -= 0.01;
        }
    }

    #[test]
    fn staging_single_score_policy() {
        let z = ZScores { zbmi: -0.5, whz2: -1.5, waz2: -2.5, haz2: -3.5 };
        assert_eq!(label_mstatus(&z, StagingPolicy::Zbmi).unwrap().code(), 1);
        assert_eq!(label_mstatus(&z, StagingPolicy::Whz2).unwrap().code(), 2);
        assert_eq!(label_mstatus(&z, StagingPolicy::Waz2).unwrap().code(), 3);
        assert_eq!(label_mstatus(&z, StagingPolicy::Haz2).unwrap().code(), 4);
        assert_eq!(label_mstatus(&z, StagingPolicy::MinZ).unwrap().code(), 4);
    }

    #[test]
    fn staging_rejects_non_finite() {
        let z = ZScores { zbmi: f64::NAN, whz2: 0.0, waz2: 0.0, haz2: 0.0 };
        assert!(label_mstatus(&z, StagingPolicy::MinZ).is_err());
    }

    #[test]
    fn preprocess_drops_records_missing_zscores() {
        let schema = FeatureSchema::default_survey();
        let records = vec![
            zrec(&schema, [Some(-0.5), Some(-0.5), Some(-0.5), None]),
            zrec(&schema, [Some(-0.5), Some(-0.5), Some(-0.5), Some(-0.5)]),
        ];
        let ds = preprocess(&records, &schema, StagingPolicy::MinZ, "test").unwrap();
        assert_eq!(ds.n_rows(), 1);
        assert_eq!(ds.provenance.rows_dropped, 1);
        assert_eq!(ds.provenance.rows_in, 2);
        assert_eq!(
            ds.provenance.rows_in,
            ds.n_rows() + ds.provenance.rows_dropped
        );
    }

    #[test]
    fn preprocess_fills_missing_predictors_with_zero() {
        let schema = FeatureSchema::default_survey();
        let mut rec = zrec(&schema, [Some(-0.5); 4]);
        let ca1 = schema.index_of("CA1").unwrap();
        assert_eq!(rec.get(ca1), None);
        let ds = preprocess(&[rec.clone()], &schema, StagingPolicy::MinZ, "test").unwrap();
        assert_eq!(ds.matrix.get(0, ca1), 0.0);
        // A present value is carried through unchanged.
        let mut values = rec.values().to_vec();
        values[ca1] = Some(2.0);
        rec = SurveyRecord::new(values);
        let ds = preprocess(&[rec], &schema, StagingPolicy::MinZ, "test").unwrap();
        assert_eq!(ds.matrix.get(0, ca1), 2.0);
    }

    #[test]
    fn preprocess_complete_records_pass_through() {
        let schema = FeatureSchema::default_survey();
        let records: Vec<SurveyRecord> = (0..10)
            .map(|i| zrec(&schema, [Some(-0.1 * i as f64); 4]))
            .collect();
        let ds = preprocess(&records, &schema, StagingPolicy::MinZ, "test").unwrap();
        assert_eq!(ds.n_rows(), 10);
        assert!(ds.labels.iter().all(|c| (1..=4).contains(&c.code())));
    }

    #[test]
    fn preprocess_empty_and_all_dropped_error() {
        let schema = FeatureSchema::default_survey();
        assert!(preprocess(&[], &schema, StagingPolicy::MinZ, "t").is_err());
        let records = vec![zrec(&schema, [None, None, None, None])];
        assert!(preprocess(&records, &schema, StagingPolicy::MinZ, "t").is_err());
    }

    #[test]
    fn preprocess_is_idempotent_on_complete_data() {
        let schema = FeatureSchema::default_survey();
        let records: Vec<SurveyRecord> = (0..5)
            .map(|i| zrec(&schema, [Some(-0.3 * i as f64); 4]))
            .collect();
        let a = preprocess(&records, &schema, StagingPolicy::MinZ, "t").unwrap();
        let b = preprocess(&records, &schema, StagingPolicy::MinZ, "t").unwrap();
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(a.labels, b.labels);
    }

    #[test]
    fn parse_survey_csv_examples() {
        let schema = FeatureSchema::default_survey();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("survey.csv");
        let header: Vec<&str> = schema.features().iter().map(|f| f.name.as_str()).collect();
        let mut file = std::fs::File::create(&path).unwrap();
        writeln!(file, "{}", header.join(",")).unwrap();
        // Three clean rows.
        for _ in 0..3 {
            let row: Vec<String> = schema
                .features()
                .iter()
                .map(|f| match f.name.as_str() {
                    "UB2" => "2".into(),
                    "Windex5" => "3".into(),
                    "melevel" => "1".into(),
                    "ZBMI" | "WHZ2" | "WAZ2" | "HAZ2" => "-0.5".into(),
                    _ => "1".into(),
                })
                .collect();
            writeln!(file, "{}", row.join(",")).unwrap();
        }
        drop(file);
        let parsed = parse_survey_csv(&path, &schema).unwrap();
        assert_eq!(parsed.records.len(), 3);
        assert_eq!(parsed.warning_count, 0);
    }

    #[test]
    fn parse_survey_csv_blank_and_out_of_domain() {
        let schema = FeatureSchema::default_survey();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("survey.csv");
        let header: Vec<&str> = schema.features().iter().map(|f| f.name.as_str()).collect();
        let mut rows = Vec::new();
        // Blank ZBMI cell; Windex5 = 7 outside its 1..=5 domain.
        let row: Vec<String> = schema
            .features()
            .iter()
            .map(|f| match f.name.as_str() {
                "ZBMI" => String::new(),
                "Windex5" => "7".into(),
                "UB2" => "1.5".into(),
                "melevel" => "2".into(),
                "WHZ2" | "WAZ2" | "HAZ2" => "-1.2".into(),
                _ => "0".into(),
            })
            .collect();
        rows.push(row.join(","));
        std::fs::write(&path, format!("{}\n{}\n", header.join(","), rows.join("\n"))).unwrap();
        let parsed = parse_survey_csv(&path, &schema).unwrap();
        assert_eq!(parsed.records.len(), 1);
        // Blank is missing but not a warning; "7" is a domain violation.
        assert_eq!(parsed.warning_count, 1);
        let rec = &parsed.records[0];
        assert_eq!(rec.value(&schema, "ZBMI"), None);
        assert_eq!(rec.value(&schema, "Windex5"), None);
        assert_eq!(rec.value(&schema, "UB2"), Some(1.5));
    }

    #[test]
    fn parse_survey_csv_missing_file_and_missing_header() {
        let schema = FeatureSchema::default_survey();
        let missing = Path::new("/nonexistent/survey.csv");
        assert!(matches!(
            parse_survey_csv(missing, &schema),
            Err(Error::Io { .. })
        ));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "UB2,BD3\n1,2\n").unwrap();
        match parse_survey_csv(&path, &schema) {
            Err(Error::Schema(msg)) => assert!(msg.contains("Windex5") || msg.contains("missing")),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn split_sizes_and_disjointness() {
        let schema = FeatureSchema::default_survey();
        let records: Vec<SurveyRecord> = (0..10)
            .map(|i| zrec(&schema, [Some(-0.1 * i as f64); 4]))
            .collect();
        let ds = preprocess(&records, &schema, StagingPolicy::MinZ, "t").unwrap();
        let mut rng = Rng::new(5);
        let (train, test) = split_train_test(&ds, 0.2, &mut rng).unwrap();
        assert_eq!(train.n_rows(), 8);
        assert_eq!(test.n_rows(), 2);
        // Disjoint and exhaustive: every original row appears exactly once.
        let mut seen: Vec<f64> = train
            .matrix
            .col(train.feature_index("ZBMI").unwrap())
            .into_iter()
            .chain(test.matrix.col(test.feature_index("ZBMI").unwrap()))
            .collect();
        seen.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut expected: Vec<f64> = (0..10).map(|i| -0.1 * i as f64).collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(seen, expected);
    }

    #[test]
    fn split_rounding_matches_hand_value() {
        // round(21858 * 0.2) = 4372
        assert_eq!((21858f64 * 0.2).round() as usize, 4372);
    }

    #[test]
    fn split_deterministic_and_rejects_degenerate() {
        let schema = FeatureSchema::default_survey();
        let records: Vec<SurveyRecord> = (0..10)
            .map(|i| zrec(&schema, [Some(-0.1 * i as f64); 4]))
            .collect();
        let ds = preprocess(&records, &schema, StagingPolicy::MinZ, "t").unwrap();
        let (a_train, a_test) = split_train_test(&ds, 0.3, &mut Rng::new(9)).unwrap();
        let (b_train, b_test) = split_train_test(&ds, 0.3, &mut Rng::new(9)).unwrap();
        assert_eq!(a_train.matrix, b_train.matrix);
        assert_eq!(a_test.matrix, b_test.matrix);
        assert!(split_train_test(&ds, 0.0, &mut Rng::new(1)).is_err());
        assert!(split_train_test(&ds, 1.0, &mut Rng::new(1)).is_err());
        assert!(split_train_test(&ds, 0.01, &mut Rng::new(1)).is_err());
    }

    #[test]
    fn encoded_csv_round_trip_is_exact() {
        let schema = FeatureSchema::default_survey();
        let records: Vec<SurveyRecord> = (0..7)
            .map(|i| {
                zrec(&schema, [
                    Some(-0.1234567890123 * i as f64),
                    Some(-1.1),
                    Some(0.5),
                    Some(-2.7182818284590452),
                ])
            })
            .collect();
        let ds = preprocess(&records, &schema, StagingPolicy::MinZ, "t").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("encoded.csv");
        ds.write_csv(&path).unwrap();
        let back = EncodedDataset::read_csv(&path).unwrap();
        assert_eq!(back.feature_names, ds.feature_names);
        assert_eq!(back.matrix, ds.matrix);
        assert_eq!(back.labels, ds.labels);
    }
}
