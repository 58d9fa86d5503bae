use crate::error::Result;
use serde::Serialize;
use std::io::Write;

/// Sides below this magnitude are compared in absolute error.
pub const NEAR_ZERO: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityMode {
    Equality,
    Inequality,
}

/// One grid point of an inequality check `lhs ≤ rhs`.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityPoint {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Outcome of one identity or inequality check.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub mode: IdentityMode,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    /// Combined quadrature error estimate of both sides.
    pub error_estimate: f64,
    pub budget: String,
    pub tolerance: f64,
    pub pass: bool,
    pub points: Vec<IdentityPoint>,
    pub notes: Vec<String>,
}

impl IdentityReport {
    /// Equality report: passes iff `rel_err ≤ tol`, or `abs_err ≤ tol` when
    /// both sides are below `1e-10` in magnitude.
    pub fn equality(name: &str, lhs: f64, rhs: f64, error_estimate: f64, budget: &str, tol: f64) -> Self {
        let abs_err = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_err = if scale == 0.0 { 0.0 } else { abs_err / scale };
        let pass = if scale < NEAR_ZERO { abs_err <= tol } else { rel_err <= tol };
        Self {
            name: name.into(),
            mode: IdentityMode::Equality,
            lhs,
            rhs,
            abs_err,
            rel_err,
            error_estimate,
            budget: budget.into(),
            tolerance: tol,
            pass: pass && lhs.is_finite() && rhs.is_finite(),
            points: vec![],
            notes: vec![],
        }
    }

    /// Inequality report over grid points; `lhs`/`rhs` are taken from the
    /// point with the smallest relative margin.
    pub fn inequality(name: &str, points: Vec<IdentityPoint>, error_estimate: f64, budget: &str, slack: f64) -> Self {
        let margin = |p: &IdentityPoint| {
            if p.rhs.is_infinite() {
                f64::NEG_INFINITY
            } else {
                (p.lhs - p.rhs) / p.lhs.abs().max(p.rhs.abs()).max(NEAR_ZERO)
            }
        };
        let worst = points
            .iter()
            .max_by(|a, b| margin(a).partial_cmp(&margin(b)).unwrap_or(std::cmp::Ordering::Equal));
        let (lhs, rhs) = worst.map_or((0.0, 0.0), |p| (p.lhs, p.rhs));
        let abs_err = if rhs.is_finite() { lhs - rhs } else { f64::NEG_INFINITY };
        let rel_err = worst.map_or(0.0, margin);
        Self {
            name: name.into(),
            mode: IdentityMode::Inequality,
            lhs,
            rhs,
            abs_err,
            rel_err,
            error_estimate,
            budget: budget.into(),
            tolerance: slack,
            pass: points.iter().all(|p| p.holds),
            points,
            notes: vec![],
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

/// One CSV row per report.
pub fn write_reports_csv<W: Write>(out: W, reports: &[IdentityReport]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(["name", "mode", "lhs", "rhs", "abs_err", "rel_err", "error_estimate", "tolerance", "pass", "budget"])?;
    for r in reports {
        wr.write_record(&[
            r.name.clone(),
            format!("{:?}", r.mode).to_lowercase(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.abs_err.to_string(),
            r.rel_err.to_string(),
            r.error_estimate.to_string(),
            r.tolerance.to_string(),
            r.pass.to_string(),
            r.budget.clone(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

/// Fixed-width table for terminals.
pub fn format_table(reports: &[IdentityReport]) -> String {
    let mut s = format!(
        "{:<28} {:>10} {:>18} {:>18} {:>10} {:>6}\n",
        "identity", "mode", "lhs", "rhs", "rel_err", "pass"
    );
    for r in reports {
        s.push_str(&format!(
            "{:<28} {:>10} {:>18.10e} {:>18.10e} {:>10.2e} {:>6}\n",
            r.name,
            format!("{:?}", r.mode).to_lowercase(),
            r.lhs,
            r.rhs,
            r.rel_err,
            if r.pass { "yes" } else { "NO" }
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rules() {
        assert!(IdentityReport::equality("a", 1.0, 1.0 + 1e-9, 0.0, "", 1e-8).pass);
        assert!(!IdentityReport::equality("a", 1.0, 1.1, 0.0, "", 1e-8).pass);
        assert!(IdentityReport::equality("a", 1e-12, 3e-12, 0.0, "", 1e-8).pass);
        let pts = vec![
            IdentityPoint { label: "x".into(), lhs: 1.0, rhs: 2.0, holds: true },
            IdentityPoint { label: "y".into(), lhs: 1.9, rhs: 2.0, holds: true },
        ];
        let r = IdentityReport::inequality("b", pts, 0.0, "", 0.0);
        assert!(r.pass);
        assert_eq!(r.lhs, 1.9);
    }
}
