use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::LpFamily;
use crate::lp::GammaSpec;
use crate::solver::SolverConfig;

/// The exponents `p0 < 2 < p1` of the integrability class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exponents {
    #[serde(default = "default_p0")]
    pub p0: f64,
    #[serde(default = "default_p1")]
    pub p1: f64,
}

fn default_p0() -> f64 {
    1.5
}

fn default_p1() -> f64 {
    4.0
}

impl Default for Exponents {
    fn default() -> Self {
        Exponents {
            p0: default_p0(),
            p1: default_p1(),
        }
    }
}

impl Exponents {
    pub fn validate(&self) -> Result<()> {
        if !(self.p0 > 1.0 && self.p0 < 2.0) {
            return Err(Error::param("p0", format!("{} must lie in (1, 2)", self.p0)));
        }
        if !(self.p1 > 2.0 && self.p1.is_finite()) {
            return Err(Error::param("p1", format!("{} must lie in (2, inf)", self.p1)));
        }
        Ok(())
    }
}

/// Whether a check asserts `lhs <= C rhs` or `lhs = rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    UpperBound,
    Equality,
}

/// Run metadata repeated on every CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordMeta {
    pub grid_n: usize,
    pub kappa: f64,
    pub gamma_name: String,
    pub p0: f64,
    pub p1: f64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordPoint {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Both sides of one monitored inequality along a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub check_id: String,
    pub relation: Relation,
    pub meta: RecordMeta,
    pub points: Vec<RecordPoint>,
    /// Bound on what the truncation at `j_max` leaves out, when the check has one.
    pub truncation_residual: Option<f64>,
}

/// `lhs / rhs`, with `0/0 = 0` and `x/0 = inf`.
pub fn ratio(lhs: f64, rhs: f64) -> f64 {
    crate::paraproduct::ratio_of(lhs, rhs).0
}

impl EstimateRecord {
    pub fn new(check_id: &str, relation: Relation, meta: RecordMeta) -> Self {
        EstimateRecord {
            check_id: check_id.to_string(),
            relation,
            meta,
            points: Vec::new(),
            truncation_residual: None,
        }
    }

    pub fn push(&mut self, t: f64, lhs: f64, rhs: f64) {
        self.push_with_ratio(t, lhs, rhs, ratio(lhs, rhs));
    }

    pub fn push_with_ratio(&mut self, t: f64, lhs: f64, rhs: f64, ratio: f64) {
        self.points.push(RecordPoint { t, lhs, rhs, ratio });
    }

    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.ratio).collect()
    }

    /// Sup of the ratio series.
    pub fn empirical_constant(&self) -> f64 {
        self.points.iter().map(|p| p.ratio).fold(0.0, f64::max)
    }

    /// `sup |lhs - rhs| / rhs`, the drift of an equality check.
    pub fn max_relative_deviation(&self) -> f64 {
        self.points
            .iter()
            .map(|p| {
                let d = (p.lhs - p.rhs).abs();
                if p.rhs > 0.0 { d / p.rhs } else { d }
            })
            .fold(0.0, f64::max)
    }

    /// Nonnegative sides and strictly increasing times.
    pub fn is_well_formed(&self) -> bool {
        self.points.iter().all(|p| p.lhs >= 0.0 && p.rhs >= 0.0)
            && self.points.windows(2).all(|w| w[1].t > w[0].t)
    }
}

impl RecordMeta {
    pub fn new(family: &LpFamily, gamma: &GammaSpec, exponents: Exponents, config: &SolverConfig, seed: u64) -> Self {
        RecordMeta {
            grid_n: family.grid().n(),
            kappa: config.kappa,
            gamma_name: gamma.name().to_string(),
            p0: exponents.p0,
            p1: exponents.p1,
            seed,
        }
    }
}

/// One line of the records CSV, in column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub check_id: String,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub grid_n: usize,
    pub kappa: f64,
    pub gamma_name: String,
    pub p0: f64,
    pub p1: f64,
    pub seed: u64,
}

pub const CSV_COLUMNS: [&str; 11] = [
    "check_id", "t", "lhs", "rhs", "ratio", "grid_n", "kappa", "gamma_name", "p0", "p1", "seed",
];

pub fn csv_rows(records: &[EstimateRecord]) -> impl Iterator<Item = CsvRow> + '_ {
    records.iter().flat_map(|r| {
        r.points.iter().map(move |p| CsvRow {
            check_id: r.check_id.clone(),
            t: p.t,
            lhs: p.lhs,
            rhs: p.rhs,
            ratio: p.ratio,
            grid_n: r.meta.grid_n,
            kappa: r.meta.kappa,
            gamma_name: r.meta.gamma_name.clone(),
            p0: r.meta.p0,
            p1: r.meta.p1,
            seed: r.meta.seed,
        })
    })
}

/// Writes every point of `records` as one CSV row, with a header.
pub fn write_records_csv(path: &Path, records: &[EstimateRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    let mut rows = csv_rows(records).peekable();
    if rows.peek().is_none() {
        writer.write_record(CSV_COLUMNS)?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_records_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(CSV_COLUMNS) {
        return Err(Error::param("csv", format!("unexpected header in {}", path.display())));
    }
    reader.deserialize().map(|r| r.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> RecordMeta {
        RecordMeta {
            grid_n: 64,
            kappa: 0.1,
            gamma_name: "log".into(),
            p0: 1.5,
            p1: 4.0,
            seed: 7,
        }
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(ratio(0.0, 0.0), 0.0);
        assert_eq!(ratio(1.0, 0.0), f64::INFINITY);
        assert_eq!(ratio(1.0, 4.0), 0.25);
    }

    #[test]
    fn csv_round_trip_keeps_schema() {
        let mut r = EstimateRecord::new("bernstein_chain", Relation::UpperBound, meta());
        r.push(0.0, 1.0, 2.0);
        r.push(0.1, 1.5, 2.0);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_records_csv(&path, &[r.clone()]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
        let rows = read_records_csv(&path).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].ratio, 0.75);
        assert_eq!(rows[0].seed, 7);
        assert_eq!(r.empirical_constant(), 0.75);
    }

    #[test]
    fn empty_csv_still_has_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.csv");
        write_records_csv(&path, &[]).unwrap();
        assert!(read_records_csv(&path).unwrap().is_empty());
    }

    #[test]
    fn exponent_ranges() {
        assert!(Exponents::default().validate().is_ok());
        assert!(Exponents { p0: 2.0, p1: 4.0 }.validate().is_err());
        assert!(Exponents { p0: 1.5, p1: 2.0 }.validate().is_err());
    }
}
