//! Plug-in entropies and mutual information, in bits.
//!
//! Probabilities are raw empirical frequencies (no bias correction). Every
//! sum runs over the counts sorted ascending, so a result depends only on
//! the multiset of counts: identical across runs, invariant to relabeling
//! codes, and unchanged when all counts are scaled by the same integer.

use serde::{Deserialize, Serialize};

use crate::counts::{support_sizes, CountTable, SupportSizes};
use crate::error::{Error, Result};

/// Shannon entropy of an empirical distribution given by its counts.
pub fn entropy(counts: impl IntoIterator<Item = u64>) -> Result<f64> {
    let mut counts: Vec<u64> = counts.into_iter().filter(|&c| c > 0).collect();
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::UndefinedMetric("entropy"));
    }
    counts.sort_unstable();
    let n = n as f64;
    let h = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum::<f64>();
    // a single symbol gives -1 * log2(1) = -0.0
    Ok(h.max(0.0))
}

/// `H(X) + H(Y) - H(X,Y)` from a joint table and its two marginals.
///
/// Rounding can push an exact zero slightly negative; such values are
/// reported as 0.
pub fn mutual_information(
    joint: impl IntoIterator<Item = u64>,
    marg_x: impl IntoIterator<Item = u64>,
    marg_y: impl IntoIterator<Item = u64>,
) -> Result<f64> {
    let h_xy = entropy(joint).map_err(|_| Error::UndefinedMetric("mutual information"))?;
    let h_x = entropy(marg_x)?;
    let h_y = entropy(marg_y)?;
    Ok((h_x + h_y - h_xy).max(0.0))
}

/// `I(S,A; S') = H(S,A) + H(S') - H(S,A,S')`.
pub fn joint_mi(table: &CountTable) -> Result<f64> {
    if table.is_empty() {
        return Err(Error::UndefinedMetric("joint mutual information"));
    }
    mutual_information(
        table.triples().values().copied(),
        table.state_action().values().copied(),
        table.next_states().values().copied(),
    )
}

/// Identifies one of the seven signature metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    HS,
    HA,
    HSnext,
    MiSa,
    MiAsnext,
    MiSsnext,
    MiSaSnext,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::HS,
        Metric::HA,
        Metric::HSnext,
        Metric::MiSa,
        Metric::MiAsnext,
        Metric::MiSsnext,
        Metric::MiSaSnext,
    ];

    pub const MUTUAL_INFORMATION: [Metric; 4] = [
        Metric::MiSa,
        Metric::MiAsnext,
        Metric::MiSsnext,
        Metric::MiSaSnext,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::HS => "h_s",
            Metric::HA => "h_a",
            Metric::HSnext => "h_snext",
            Metric::MiSa => "mi_sa",
            Metric::MiAsnext => "mi_asnext",
            Metric::MiSsnext => "mi_ssnext",
            Metric::MiSaSnext => "mi_sa_snext",
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One value per signature metric.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metrics<T = f64> {
    pub h_s: T,
    pub h_a: T,
    pub h_snext: T,
    pub mi_sa: T,
    pub mi_asnext: T,
    pub mi_ssnext: T,
    pub mi_sa_snext: T,
}

impl<T: Copy> Metrics<T> {
    pub fn from_fn(mut f: impl FnMut(Metric) -> T) -> Self {
        Self {
            h_s: f(Metric::HS),
            h_a: f(Metric::HA),
            h_snext: f(Metric::HSnext),
            mi_sa: f(Metric::MiSa),
            mi_asnext: f(Metric::MiAsnext),
            mi_ssnext: f(Metric::MiSsnext),
            mi_sa_snext: f(Metric::MiSaSnext),
        }
    }

    pub fn get(&self, m: Metric) -> T {
        match m {
            Metric::HS => self.h_s,
            Metric::HA => self.h_a,
            Metric::HSnext => self.h_snext,
            Metric::MiSa => self.mi_sa,
            Metric::MiAsnext => self.mi_asnext,
            Metric::MiSsnext => self.mi_ssnext,
            Metric::MiSaSnext => self.mi_sa_snext,
        }
    }

    pub fn map<U: Copy>(&self, mut f: impl FnMut(Metric, T) -> U) -> Metrics<U> {
        Metrics::from_fn(|m| f(m, self.get(m)))
    }
}

/// Entropies and mutual information of one window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoSignature {
    /// Stream position (number of transitions consumed) at the window's end.
    pub step_index: u64,
    pub n: u64,
    pub support: SupportSizes,
    pub h_s: f64,
    pub h_a: f64,
    pub h_snext: f64,
    pub mi_sa: f64,
    pub mi_asnext: f64,
    pub mi_ssnext: f64,
    pub mi_sa_snext: f64,
}

impl InfoSignature {
    pub fn metrics(&self) -> Metrics {
        Metrics {
            h_s: self.h_s,
            h_a: self.h_a,
            h_snext: self.h_snext,
            mi_sa: self.mi_sa,
            mi_asnext: self.mi_asnext,
            mi_ssnext: self.mi_ssnext,
            mi_sa_snext: self.mi_sa_snext,
        }
    }

    pub fn get(&self, m: Metric) -> f64 {
        self.metrics().get(m)
    }
}

pub fn signature(table: &CountTable, step_index: u64) -> Result<InfoSignature> {
    if table.is_empty() {
        return Err(Error::UndefinedMetric("signature"));
    }
    let h = |m: &std::collections::BTreeMap<_, u64>| entropy(m.values().copied());
    let h_s = h(table.states())?;
    let h_a = h(table.actions())?;
    let h_snext = h(table.next_states())?;
    let h_sa = entropy(table.state_action().values().copied())?;
    let h_asnext = entropy(table.action_next().values().copied())?;
    let h_ssnext = entropy(table.state_next().values().copied())?;
    let h_sasnext = entropy(table.triples().values().copied())?;
    let mi = |hx: f64, hy: f64, hxy: f64| (hx + hy - hxy).max(0.0);
    Ok(InfoSignature {
        step_index,
        n: table.n(),
        support: support_sizes(table),
        h_s,
        h_a,
        h_snext,
        mi_sa: mi(h_s, h_a, h_sa),
        mi_asnext: mi(h_a, h_snext, h_asnext),
        mi_ssnext: mi(h_s, h_snext, h_ssnext),
        mi_sa_snext: mi(h_sa, h_snext, h_sasnext),
    })
}
