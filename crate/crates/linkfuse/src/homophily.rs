//! Categorical (homophily) similarity between attribute values.
//!
//! With `N` the labeled count, `f(·)` the value frequency and `n_k` the
//! domain size of the attribute, a pair of values `X`, `Y` scores:
//!
//! - overlap: 1 on match, 0 otherwise
//! - eskin:   1 on match, `n_k² / (n_k² + 2)` otherwise
//! - iof:     1 on match, `1 / (1 + ln f(X) · ln f(Y))` otherwise
//! - of:      1 on match, `1 / (1 + ln(N/f(X)) · ln(N/f(Y)))` otherwise
//! - goodall: `1 − p²(X)` on match with `p²(v) = f(v)(f(v)−1) / (N(N−1))`,
//!   0 otherwise (the Goodall3 variant: rarer matches count for more)
//!
//! Frequencies reflect the current, possibly imputed, table. Pairs with a
//! missing value score `None`; the caller decides how to treat them.

use serde::{Deserialize, Serialize};

use crate::attributes::AttributeTable;
use crate::error::{Error, Result};
use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomophilyMetricKind {
    Overlap,
    Goodall,
    Eskin,
    Iof,
    Of,
}

impl HomophilyMetricKind {
    pub const ALL: [HomophilyMetricKind; 5] = [
        HomophilyMetricKind::Overlap,
        HomophilyMetricKind::Goodall,
        HomophilyMetricKind::Eskin,
        HomophilyMetricKind::Iof,
        HomophilyMetricKind::Of,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HomophilyMetricKind::Overlap => "overlap",
            HomophilyMetricKind::Goodall => "goodall",
            HomophilyMetricKind::Eskin => "eskin",
            HomophilyMetricKind::Iof => "iof",
            HomophilyMetricKind::Of => "of",
        }
    }
}

impl std::str::FromStr for HomophilyMetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "overlap" => Ok(HomophilyMetricKind::Overlap),
            "goodall" => Ok(HomophilyMetricKind::Goodall),
            "eskin" => Ok(HomophilyMetricKind::Eskin),
            "iof" => Ok(HomophilyMetricKind::Iof),
            "of" => Ok(HomophilyMetricKind::Of),
            other => Err(Error::InvalidParameter(format!(
                "unknown homophily metric '{other}' (expected overlap|goodall|eskin|iof|of)"
            ))),
        }
    }
}

/// Scores the attribute values of a node pair; `None` when either is missing.
pub fn homophily_score(
    tab: &AttributeTable,
    kind: HomophilyMetricKind,
    attr_name: &str,
    x: NodeId,
    y: NodeId,
) -> Result<Option<f64>> {
    let attr = tab.attribute_index(attr_name)?;
    Ok(homophily_score_by_index(tab, kind, attr, x, y))
}

pub(crate) fn homophily_score_by_index(
    tab: &AttributeTable,
    kind: HomophilyMetricKind,
    attr: usize,
    x: NodeId,
    y: NodeId,
) -> Option<f64> {
    let vx = tab.value_id(attr, x)?;
    let vy = tab.value_id(attr, y)?;
    let matched = vx == vy;
    let n = tab.labeled_count_by_index(attr) as f64;
    let score = match kind {
        HomophilyMetricKind::Overlap => {
            if matched {
                1.0
            } else {
                0.0
            }
        }
        HomophilyMetricKind::Eskin => {
            if matched {
                1.0
            } else {
                let d = tab.domain_size_by_index(attr) as f64;
                d * d / (d * d + 2.0)
            }
        }
        HomophilyMetricKind::Iof => {
            if matched {
                1.0
            } else {
                let fx = tab.frequency(attr, vx) as f64;
                let fy = tab.frequency(attr, vy) as f64;
                1.0 / (1.0 + fx.ln() * fy.ln())
            }
        }
        HomophilyMetricKind::Of => {
            if matched {
                1.0
            } else {
                let fx = tab.frequency(attr, vx) as f64;
                let fy = tab.frequency(attr, vy) as f64;
                1.0 / (1.0 + (n / fx).ln() * (n / fy).ln())
            }
        }
        HomophilyMetricKind::Goodall => {
            if matched {
                let f = tab.frequency(attr, vx) as f64;
                // A pair of equal values implies N >= 2 except when x == y;
                // treat the one-observation case as maximally surprising.
                let p2 = if n < 2.0 {
                    0.0
                } else {
                    f * (f - 1.0) / (n * (n - 1.0))
                };
                1.0 - p2
            } else {
                0.0
            }
        }
    };
    Some(score)
}
