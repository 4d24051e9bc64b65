//! Display rounding for reported bounds.
//!
//! Lower bounds and exact values are rounded down to the hundredth, upper
//! bounds up. The displayed interval therefore still contains the value.
//! Decisions use the unrounded numbers.

use serde::Serialize;

use crate::bounds::{BoundReport, Method, NscDecision};

/// Slack absorbing binary representation error, so `0.3` stays `0.30`.
const ROUND_EPS: f64 = 1e-9;

pub fn round_down(x: f64) -> f64 {
    (x * 100.0 + ROUND_EPS).floor() / 100.0 + 0.0
}

pub fn round_up(x: f64) -> f64 {
    // `+ 0.0` turns a negative zero positive
    (x * 100.0 - ROUND_EPS).ceil() / 100.0 + 0.0
}

pub fn show_lower(x: f64) -> String {
    format!("{:.2}", round_down(x))
}

pub fn show_upper(x: f64) -> String {
    format!("{:.2}", round_up(x))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shown {
    pub lower: String,
    pub upper: String,
}

pub fn shown(r: &BoundReport) -> Shown {
    if r.exact {
        let v = show_lower(r.lower);
        Shown {
            lower: v.clone(),
            upper: v,
        }
    } else {
        Shown {
            lower: show_lower(r.lower),
            upper: show_upper(r.upper),
        }
    }
}

/// One row of a report: full-precision bounds plus their display forms.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub method: Method,
    pub k: usize,
    pub l: Option<usize>,
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub lower_witnessed: bool,
    pub nsc_decision: NscDecision,
    pub display: Shown,
    pub lp_solves: u64,
    /// 1-based columns of a maximizing subset, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    pub elapsed_secs: f64,
}

impl From<&BoundReport> for ReportRow {
    fn from(r: &BoundReport) -> Self {
        Self {
            method: r.method,
            k: r.k,
            l: r.l,
            lower: r.lower,
            upper: r.upper,
            exact: r.exact,
            lower_witnessed: r.lower_witnessed,
            nsc_decision: r.nsc_decision,
            display: shown(r),
            lp_solves: r.lp_solves,
            witness: None,
            elapsed_secs: r.elapsed_secs,
        }
    }
}

impl ReportRow {
    pub fn with_witness(mut self, one_based: Vec<usize>) -> Self {
        self.witness = Some(one_based);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_direction() {
        assert_eq!(show_upper(0.4501), "0.46");
        assert_eq!(show_lower(0.7499), "0.74");
        assert_eq!(show_lower(0.3), "0.30");
        assert_eq!(show_upper(0.3), "0.30");
        assert_eq!(show_upper(0.29), "0.29");
        assert_eq!(show_lower(1.0), "1.00");
        assert_eq!(show_upper(0.0), "0.00");
    }

    #[test]
    fn exact_rows_round_down() {
        let r = BoundReport::exact(Method::Tsa, 3, Some(2), 0.7499);
        assert_eq!(shown(&r), Shown { lower: "0.74".into(), upper: "0.74".into() });
        let r = BoundReport::new(Method::PickL, 3, Some(2), 0.0, 0.4501);
        assert_eq!(shown(&r).upper, "0.46");
        // the verdict uses full precision
        let r = BoundReport::new(Method::PickL, 3, Some(2), 0.0, 0.4999999);
        assert_eq!(shown(&r).upper, "0.50");
        assert_eq!(r.nsc_decision, NscDecision::Holds);
    }
}
