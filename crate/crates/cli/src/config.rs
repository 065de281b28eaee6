//! Experiment configs: one JSON object per run, with the keys each command
//! needs.

use std::path::{Path, PathBuf};

use landaucap_core::mp::{default_precision_for, SUPPORTED_PRECISIONS};
use landaucap_core::region::Region;
use landaucap_core::weight::{Weight, WeightSpec};
use serde::Deserialize;

use crate::output::Format;
use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub region: Option<Region>,
    pub weight: Option<WeightSpec>,
    pub b0: Option<f64>,
    pub q: Option<usize>,
    #[serde(rename = "N", alias = "n")]
    pub n: Option<usize>,
    pub n_min: Option<usize>,
    pub degrees: Option<Vec<usize>>,
    pub samples_per_degree: Option<usize>,
    pub tol: Option<f64>,
    pub precision_bits: Option<u32>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub suite: Option<String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("malformed config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(b0) = self.b0 {
            if !(b0 > 0.0 && b0.is_finite()) {
                return Err(CliError::Config(format!("b0 must be positive, got {b0}")));
            }
        }
        if let Some(p) = self.precision_bits {
            check_precision(p)?;
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol <= 1e-2) {
                return Err(CliError::Config(format!("tol must lie in (0, 1e-2], got {tol}")));
            }
        }
        if let Some(k) = self.samples_per_degree {
            if k < 8 {
                return Err(CliError::Config(format!(
                    "samples_per_degree must be at least 8, got {k}"
                )));
            }
        }
        if let Some(d) = &self.degrees {
            if d.is_empty() || d[0] < 1 || d.windows(2).any(|p| p[0] >= p[1]) {
                return Err(CliError::Config(
                    "degrees must be a strictly ascending list of positive integers".into(),
                ));
            }
        }
        if let (Some(q), Some(n)) = (self.q, self.n) {
            if n < q {
                return Err(CliError::Config(format!("N = {n} must be at least q = {q}")));
            }
        }
        Ok(())
    }

    pub fn weight(&self) -> Result<Weight, CliError> {
        let spec = self
            .weight
            .as_ref()
            .ok_or_else(|| CliError::Config("config needs a \"weight\" record".into()))?;
        let mut spec = spec.clone();
        if spec.support.is_none() {
            spec.support = self.region.clone();
        }
        Ok(Weight::from_spec(&spec)?)
    }

    /// The explicit region, else the support of the weight.
    pub fn region(&self) -> Result<Region, CliError> {
        if let Some(r) = &self.region {
            return Ok(r.clone());
        }
        if self.weight.is_some() {
            return Ok(self.weight()?.support().clone());
        }
        Err(CliError::Config("config needs a \"region\" record".into()))
    }

    pub fn b0(&self) -> f64 {
        self.b0.unwrap_or(2.0)
    }

    /// Command-line precision first, then the config, then the default for
    /// the degree.
    pub fn precision(&self, cli: Option<u32>, maxdeg: usize) -> Result<u32, CliError> {
        match cli.or(self.precision_bits) {
            Some(p) => check_precision(p),
            None => Ok(default_precision_for(maxdeg)),
        }
    }
}

pub fn check_precision(p: u32) -> Result<u32, CliError> {
    if SUPPORTED_PRECISIONS.contains(&p) {
        Ok(p)
    } else {
        Err(CliError::Config(format!(
            "precision_bits must be one of {SUPPORTED_PRECISIONS:?}, got {p}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_records() {
        let cfg = ExperimentConfig::parse(
            r#"{"weight": {"support": {"shape":"disc","center":[0,0],"radius":1},
                           "density": {"kind":"radial","profile":"chi"}},
                "b0": 2, "q": 1, "N": 12, "precision_bits": 128, "format": "json"}"#,
        )
        .unwrap();
        assert_eq!(cfg.n, Some(12));
        assert_eq!(cfg.format, Some(Format::Json));
        let w = cfg.weight().unwrap();
        assert!(w.is_radial_about_origin());
    }

    #[test]
    fn rejects_bad_values() {
        for bad in [
            r#"{"precision_bits": 100}"#,
            r#"{"b0": -1}"#,
            r#"{"q": 3, "N": 2}"#,
            r#"{"degrees": [4, 4]}"#,
            r#"{"unknown": 1}"#,
            r#"{"region": {"shape":"disc","radius":-1}}"#,
            "not json",
        ] {
            assert!(matches!(ExperimentConfig::parse(bad), Err(CliError::Config(_))), "{bad}");
        }
    }
}
