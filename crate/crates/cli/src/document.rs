//! The machine-readable result of `solve`, read back by `verify`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use search_pursuit::oracle::Certificate;
use search_pursuit::rational::{format_rational, to_decimal};
use search_pursuit::Rational;

use crate::input::Mode;

pub const DECIMAL_PLACES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactValue {
    pub exact: String,
    /// Display only; never read back.
    pub decimal: String,
}

impl ExactValue {
    pub fn new(r: &Rational) -> Self {
        ExactValue {
            exact: format_rational(r),
            decimal: to_decimal(r, DECIMAL_PLACES),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HiderEntry {
    /// 1-based location (or strategy) index.
    pub location: usize,
    pub label: String,
    pub probability: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearcherEntry {
    pub set: String,
    /// 1-based members; absent for named strategies such as `rs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locations: Option<Vec<usize>>,
    pub probability: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Lp,
    ClosedForm,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSummary {
    pub ok: bool,
    /// Smallest `v - payoff(row, hider)`; negative means some plan beats `v`.
    pub min_hider_slack: String,
    /// Smallest `payoff(searcher, column) - v`; negative means some location
    /// holds the searcher below `v`.
    pub min_searcher_slack: String,
}

impl CertificateSummary {
    pub fn new(cert: &Certificate) -> Self {
        let min = |v: &[Rational]| v.iter().min().cloned().unwrap_or_else(Rational::zero);
        CertificateSummary {
            ok: cert.ok,
            min_hider_slack: format_rational(&min(&cert.hider_slack)),
            min_searcher_slack: format_rational(&min(&cert.searcher_slack)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub mode: Mode,
    pub value: ExactValue,
    pub hider: Vec<HiderEntry>,
    pub searcher: Vec<SearcherEntry>,
    pub provenance: Provenance,
    pub certificate: CertificateSummary,
    /// The LP value, present only when a closed form disagrees with it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp_value: Option<ExactValue>,
    /// Wall-clock milliseconds; only with `--timing`, so that default output
    /// is byte-for-byte reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

/// How locations are named in sets and tables.
pub struct Labels(Vec<String>);

impl Labels {
    /// 1-based indices, or each location's search time when `by_time`.
    pub fn new(times: &[Rational], by_time: bool) -> Self {
        Labels(
            times
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    if by_time {
                        format_rational(t)
                    } else {
                        (i + 1).to_string()
                    }
                })
                .collect(),
        )
    }

    pub fn named(names: &[&str]) -> Self {
        Labels(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn get(&self, index: usize) -> &str {
        &self.0[index]
    }

    pub fn set(&self, indices: &[usize]) -> String {
        let inner: Vec<&str> = indices.iter().map(|&i| self.get(i)).collect();
        format!("{{{}}}", inner.join(","))
    }
}

pub fn hider_entries(labels: &Labels, probs: &[Rational]) -> Vec<HiderEntry> {
    probs
        .iter()
        .enumerate()
        .map(|(i, p)| HiderEntry {
            location: i + 1,
            label: labels.get(i).to_string(),
            probability: format_rational(p),
        })
        .collect()
}
