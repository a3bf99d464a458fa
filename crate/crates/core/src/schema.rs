//! Survey feature schema: names, domains, and roles.
//!
//! The default schema has 20 predictor features: four WHO anthropometric
//! Z-scores (continuous), child age, and fifteen encoded survey items.
//! Categorical codes follow the source convention: 0 = no information,
//! then condition-specific codes; wealth quintile runs 1-5 and maternal
//! education 0-3.

use crate::error::{Error, Result};

/// Feature value domain.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureKind {
    /// Real-valued in a closed range.
    Continuous { min: f64, max: f64 },
    /// One of an enumerated set of integer codes.
    Categorical { codes: Vec<i64> },
}

impl FeatureKind {
    fn cat(codes: std::ops::RangeInclusive<i64>) -> FeatureKind {
        FeatureKind::Categorical {
            codes: codes.collect(),
        }
    }

    /// Whether `value` lies in the domain.
    pub fn contains(&self, value: f64) -> bool {
        match self {
            FeatureKind::Continuous { min, max } => value >= *min && value <= *max,
            FeatureKind::Categorical { codes } => {
                value.fract() == 0.0 && codes.contains(&(value as i64))
            }
        }
    }
}

/// Role a feature plays in the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureRole {
    /// WHO Z-score: used both for staging the label and (by default) as a predictor.
    Zscore,
    /// Ordinary predictor.
    Predictor,
    /// Derived class label.
    Label,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
    pub role: FeatureRole,
}

impl FeatureSpec {
    fn new(name: &str, kind: FeatureKind, role: FeatureRole) -> FeatureSpec {
        FeatureSpec {
            name: name.into(),
            kind,
            role,
        }
    }
}

/// Ordered feature list. Names are unique; the four Z-scores are always
/// present so records can be staged.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSchema {
    features: Vec<FeatureSpec>,
}

/// Names of the four WHO Z-score features used for staging.
pub const ZSCORE_FEATURES: [&str; 4] = ["ZBMI", "WHZ2", "WAZ2", "HAZ2"];

/// Column name used for the derived malnutrition stage label.
pub const LABEL_NAME: &str = "Mstatus";

impl FeatureSchema {
    pub fn new(features: Vec<FeatureSpec>) -> Result<FeatureSchema> {
        if features.is_empty() {
            return Err(Error::Schema("schema has no features".into()));
        }
        for (i, f) in features.iter().enumerate() {
            if features[..i].iter().any(|g| g.name == f.name) {
                return Err(Error::Schema(format!("duplicate feature name {}", f.name)));
            }
        }
        for z in ZSCORE_FEATURES {
            match features.iter().find(|f| f.name == z) {
                Some(f) if f.role == FeatureRole::Zscore => {}
                Some(_) => {
                    return Err(Error::Schema(format!("feature {z} must have the Z-score role")))
                }
                None => return Err(Error::Schema(format!("schema is missing Z-score feature {z}"))),
            }
        }
        Ok(FeatureSchema { features })
    }

    /// The 20-feature survey schema.
    pub fn default_survey() -> FeatureSchema {
        use FeatureKind::{Categorical, Continuous};
        use FeatureRole::{Predictor, Zscore};
        let zero_one_two = || Categorical { codes: vec![0, 1, 2] };
        let features = vec![
            // Child age in years.
            FeatureSpec::new("UB2", Continuous { min: 0.0, max: 4.0 }, Predictor),
            // Whether the child is still being breastfed.
            FeatureSpec::new("BD3", zero_one_two(), Predictor),
            // Household wealth quintile.
            FeatureSpec::new("Windex5", FeatureKind::cat(1..=5), Predictor),
            // Mother's education level.
            FeatureSpec::new("melevel", FeatureKind::cat(0..=3), Predictor),
            FeatureSpec::new("ZBMI", Continuous { min: -4.99, max: 4.98 }, Zscore),
            FeatureSpec::new("WHZ2", Continuous { min: -4.99, max: 4.86 }, Zscore),
            FeatureSpec::new("WAZ2", Continuous { min: -5.66, max: 4.68 }, Zscore),
            FeatureSpec::new("HAZ2", Continuous { min: -6.00, max: 5.86 }, Zscore),
            // Diarrhea in the last two weeks, and the merged follow-up items.
            FeatureSpec::new("CA1", zero_one_two(), Predictor),
            FeatureSpec::new("CA3", zero_one_two(), Predictor),
            FeatureSpec::new("CA4", zero_one_two(), Predictor),
            FeatureSpec::new("CA5", zero_one_two(), Predictor),
            FeatureSpec::new("CA7A_CA7B", zero_one_two(), Predictor),
            FeatureSpec::new("CA7C_CA13B_CA13G", zero_one_two(), Predictor),
            // Illness with fever, cough, and breathing difficulty; follow-ups.
            FeatureSpec::new("CA14_CA16_CA17", zero_one_two(), Predictor),
            FeatureSpec::new("CA18", zero_one_two(), Predictor),
            FeatureSpec::new("CA22_CA23L_CA23M_CA23N", zero_one_two(), Predictor),
            // Area of living, division, and child gender.
            FeatureSpec::new("HH6", zero_one_two(), Predictor),
            FeatureSpec::new("HH7", zero_one_two(), Predictor),
            FeatureSpec::new("HL4", zero_one_two(), Predictor),
        ];
        FeatureSchema::new(features).expect("default schema is valid")
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    pub fn feature(&self, name: &str) -> Option<&FeatureSpec> {
        self.features.iter().find(|f| f.name == name)
    }

    /// Indices of the four Z-score features, in `ZSCORE_FEATURES` order.
    pub fn zscore_indices(&self) -> [usize; 4] {
        let mut idx = [0usize; 4];
        for (i, name) in ZSCORE_FEATURES.iter().enumerate() {
            idx[i] = self.index_of(name).expect("schema always has Z-scores");
        }
        idx
    }

    /// Names of the model input columns: all predictors, with the Z-scores
    /// included or excluded.
    pub fn predictor_names(&self, include_zscores: bool) -> Vec<String> {
        self.features
            .iter()
            .filter(|f| match f.role {
                FeatureRole::Predictor => true,
                FeatureRole::Zscore => include_zscores,
                FeatureRole::Label => false,
            })
            .map(|f| f.name.clone())
            .collect()
    }
}
