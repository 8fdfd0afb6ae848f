use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discrete distribution of RF amplitude scale factors across the sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfiModel {
    points: Vec<(f64, f64)>,
}

impl RfiModel {
    /// `(κ, weight)` pairs; weights must sum to one.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("empty RF distribution".into()));
        }
        for &(k, w) in &points {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::InvalidParameter(format!("amplitude scale {k} must be positive")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidParameter(format!("weight {w} must be nonnegative")));
            }
        }
        let total: f64 = points.iter().map(|p| p.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { points })
    }

    /// Every pulse at its nominal amplitude.
    pub fn ideal() -> Self {
        Self { points: vec![(1.0, 1.0)] }
    }

    /// `{1 − s, 1, 1 + s}` with weights `{¼, ½, ¼}`.
    pub fn symmetric(spread: f64) -> Result<Self> {
        Self::new(vec![(1.0 - spread, 0.25), (1.0, 0.5), (1.0 + spread, 0.25)])
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn mean(&self) -> f64 {
        self.points.iter().map(|(k, w)| k * w).sum()
    }
}

impl Default for RfiModel {
    fn default() -> Self {
        Self::symmetric(0.05).expect("valid default")
    }
}

/// Parses `"κ:w,κ:w,..."`.
impl FromStr for RfiModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let points = s
            .split(',')
            .map(|item| {
                let (k, w) = item
                    .split_once(':')
                    .ok_or_else(|| Error::Format(format!("expected `kappa:weight`, got `{item}`")))?;
                let parse = |x: &str| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Format(format!("`{x}`: {e}")))
                };
                Ok((parse(k)?, parse(w)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }
}

impl fmt::Display for RfiModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|(k, w)| format!("{k}:{w}")).collect();
        write!(f, "{}", parts.join(","))
    }
}
