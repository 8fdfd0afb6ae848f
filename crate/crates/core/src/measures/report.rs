use std::io::Write;

use serde::{Deserialize, Serialize};

use super::discord::{discord_on_qubit, DiscordOptions};
use super::entropy::von_neumann_entropy;
use super::mediator::{PROBE_LABELS, TRIPARTITE_LABELS};
use super::negativity::negativity;
use super::ree::{ree_two_qubit, ReeOptions};
use crate::error::{Error, Result};
use crate::state_engine::{marginal, Bipartition, DensityMatrix};

/// CSV column order.
pub const CSV_HEADER: [&str; 10] = [
    "time",
    "neg_A_B",
    "neg_A_MB",
    "neg_AM_B",
    "discord_AB_given_M",
    "mutual_info_AB_M",
    "ree_A_B",
    "S_M",
    "S_AB",
    "S_ABM",
];

/// Correlations of one tripartite state. Entropic quantities are in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct CorrelationReport {
    pub time: f64,
    pub neg_A_B: f64,
    pub neg_A_MB: f64,
    pub neg_AM_B: f64,
    pub discord_AB_given_M: f64,
    pub mutual_info_AB_M: f64,
    pub ree_A_B: f64,
    pub S_M: f64,
    pub S_AB: f64,
    pub S_ABM: f64,
}

impl CorrelationReport {
    pub fn values(&self) -> [f64; 10] {
        [
            self.time,
            self.neg_A_B,
            self.neg_A_MB,
            self.neg_AM_B,
            self.discord_AB_given_M,
            self.mutual_info_AB_M,
            self.ree_A_B,
            self.S_M,
            self.S_AB,
            self.S_ABM,
        ]
    }

    /// Finite entries, nonnegative negativities and
    /// `I = S_M + S_AB − S_ABM`.
    pub fn check(&self) -> Result<()> {
        if self.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite report entry: {self:?}")));
        }
        if [self.neg_A_B, self.neg_A_MB, self.neg_AM_B].iter().any(|&n| n < -1e-9) {
            return Err(Error::InvalidState("negative negativity".into()));
        }
        let identity = self.S_M + self.S_AB - self.S_ABM;
        if (identity - self.mutual_info_AB_M).abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "mutual information {} disagrees with entropies ({identity})",
                self.mutual_info_AB_M
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MeasureOptions {
    pub ree: ReeOptions,
    pub discord: DiscordOptions,
}

/// Report plus optimizer diagnostics that are not part of the CSV row.
#[derive(Debug, Clone)]
pub struct MeasuredState {
    pub report: CorrelationReport,
    pub ree_converged: bool,
}

/// Computes every field of a [`CorrelationReport`] for a state carrying the
/// labels `A`, `B` and `M` (in any order).
pub fn measure_state(rho: &DensityMatrix, time: f64, opts: &MeasureOptions) -> Result<MeasuredState> {
    let rho = rho.permuted(&TRIPARTITE_LABELS)?;
    let labels = rho.labels().to_vec();
    let ab = marginal(&rho, &PROBE_LABELS)?;
    let m = marginal(&rho, &["M"])?;
    let s_m = von_neumann_entropy(&m);
    let s_ab = von_neumann_entropy(&ab);
    let s_abm = von_neumann_entropy(&rho);
    let ree = ree_two_qubit(&ab, &opts.ree)?;
    let report = CorrelationReport {
        time,
        neg_A_B: negativity(&ab, &Bipartition::new(ab.labels(), &["A"])?)?,
        neg_A_MB: negativity(&rho, &Bipartition::new(&labels, &["A"])?)?,
        neg_AM_B: negativity(&rho, &Bipartition::new(&labels, &["A", "M"])?)?,
        discord_AB_given_M: discord_on_qubit(&rho, "M", &opts.discord)?.bits,
        mutual_info_AB_M: s_m + s_ab - s_abm,
        ree_A_B: ree.bits,
        S_M: s_m,
        S_AB: s_ab,
        S_ABM: s_abm,
    };
    Ok(MeasuredState {
        report,
        ree_converged: ree.converged,
    })
}

/// Writes the header and one row per report. Numbers use 17 significant
/// digits.
pub fn write_csv<W: Write>(out: W, reports: &[CorrelationReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in reports {
        w.write_record(r.values().iter().map(|v| format!("{v:.16e}")))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<CorrelationReport>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
    if header != CSV_HEADER {
        return Err(Error::Format(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize()
        .map(|row| row.map_err(csv_err))
        .collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CorrelationReport {
        CorrelationReport {
            time: 0.125,
            neg_A_B: 0.0,
            neg_A_MB: 0.5,
            neg_AM_B: 0.5,
            discord_AB_given_M: 0.0,
            mutual_info_AB_M: 1.0,
            ree_A_B: 1e-7,
            S_M: 1.0,
            S_AB: 1.0,
            S_ABM: 1.0,
        }
    }

    #[test]
    fn csv_header_is_fixed_and_rows_round_trip() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[sample(), sample()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "time,neg_A_B,neg_A_MB,neg_AM_B,discord_AB_given_M,mutual_info_AB_M,ree_A_B,S_M,S_AB,S_ABM\n"
        ));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, vec![sample(), sample()]);
    }

    #[test]
    fn check_catches_inconsistent_mutual_information() {
        assert!(sample().check().is_ok());
        let mut bad = sample();
        bad.mutual_info_AB_M = 0.5;
        assert!(bad.check().is_err());
        bad = sample();
        bad.neg_A_B = f64::NAN;
        assert!(bad.check().is_err());
    }
}
