use crate::error::Result;
use crate::geometry::{CPoint, C64};
use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountingMethod {
    Roots1d,
    Fiber2d,
}

/// Counting functions at one target `w`.
#[derive(Debug, Clone, Serialize)]
pub struct CountingSample {
    #[serde(serialize_with = "ser_c64")]
    pub w: C64,
    pub alpha: f64,
    pub r_grid: Vec<f64>,
    pub n_of_r: Vec<f64>,
    #[serde(rename = "N_of_r")]
    pub big_n_of_r: Vec<f64>,
    #[serde(rename = "N_alpha")]
    pub n_alpha: f64,
    /// Largest error estimate among the `N` values.
    pub error_estimate: f64,
    pub n_alpha_error: f64,
    pub n_of_r_error: Vec<f64>,
    pub method: CountingMethod,
    pub chart: String,
    /// Set when a quadrature did not reach its tolerance.
    pub flagged: bool,
    pub warnings: Vec<String>,
}

fn ser_c64<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Either finite counting data, or the infinite-counting condition raised
/// when the fiber meets the pole set of the exhaustion.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum CountingOutcome {
    Finite(CountingSample),
    Infinite {
        w: (f64, f64),
        pole: String,
    },
}

impl CountingOutcome {
    pub(crate) fn infinite(w: C64, pole: CPoint) -> Self {
        CountingOutcome::Infinite { w: (w.re, w.im), pole: pole.to_string() }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CountingOutcome::Infinite { .. })
    }

    pub fn sample(&self) -> Option<&CountingSample> {
        match self {
            CountingOutcome::Finite(s) => Some(s),
            _ => None,
        }
    }

    /// `N_α(w)`, `+∞` under the infinite-counting condition.
    pub fn n_alpha(&self) -> f64 {
        self.sample().map_or(f64::INFINITY, |s| s.n_alpha)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("counting outcome serialises")
    }
}

/// CSV rows `w_re, w_im, r, n, N, N_alpha, infinite, flagged` for a sweep.
pub fn write_counting_csv<W: Write>(out: W, rows: &[CountingOutcome], r_grid: &[f64]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(["w_re", "w_im", "r", "n", "N", "N_alpha", "infinite", "flagged"])?;
    for row in rows {
        match row {
            CountingOutcome::Finite(s) => {
                for (k, r) in s.r_grid.iter().enumerate() {
                    wr.write_record(&[
                        s.w.re.to_string(),
                        s.w.im.to_string(),
                        r.to_string(),
                        s.n_of_r[k].to_string(),
                        s.big_n_of_r[k].to_string(),
                        s.n_alpha.to_string(),
                        "false".into(),
                        s.flagged.to_string(),
                    ])?;
                }
            }
            CountingOutcome::Infinite { w, .. } => {
                for r in r_grid {
                    wr.write_record(&[
                        w.0.to_string(),
                        w.1.to_string(),
                        r.to_string(),
                        "inf".into(),
                        "inf".into(),
                        "inf".into(),
                        "true".into(),
                        "false".into(),
                    ])?;
                }
            }
        }
    }
    wr.flush()?;
    Ok(())
}
