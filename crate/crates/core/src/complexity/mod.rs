//! Data complexity metrics computed per protected group, and their absolute
//! differences (CMD).
//!
//! Every metric is oriented so that higher means harder. Values are `None`
//! when the metric is undefined for the input (fewer than two points, or a
//! single class for metrics that need an opposite-class neighbor).

mod feature;
mod imbalance;
mod linearity;
mod neighborhood;
mod network;
mod points;
pub mod reference;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{split_groups, standardize, TabularDataset};
use crate::error::Error;
use crate::seed;

pub use points::interpolate;
pub(crate) use points::{euclidean, Points};

/// The fourteen complexity metrics, in vector layout order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MetricId {
    F1v,
    L1,
    L2,
    L3,
    N1,
    N2,
    N3,
    N4,
    T1,
    #[serde(rename = "LSC")]
    Lsc,
    #[serde(rename = "density")]
    Density,
    #[serde(rename = "cls_coef")]
    ClsCoef,
    C1,
    C2,
}

impl MetricId {
    pub const ALL: [MetricId; 14] = [
        MetricId::F1v,
        MetricId::L1,
        MetricId::L2,
        MetricId::L3,
        MetricId::N1,
        MetricId::N2,
        MetricId::N3,
        MetricId::N4,
        MetricId::T1,
        MetricId::Lsc,
        MetricId::Density,
        MetricId::ClsCoef,
        MetricId::C1,
        MetricId::C2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            MetricId::F1v => "F1v",
            MetricId::L1 => "L1",
            MetricId::L2 => "L2",
            MetricId::L3 => "L3",
            MetricId::N1 => "N1",
            MetricId::N2 => "N2",
            MetricId::N3 => "N3",
            MetricId::N4 => "N4",
            MetricId::T1 => "T1",
            MetricId::Lsc => "LSC",
            MetricId::Density => "density",
            MetricId::ClsCoef => "cls_coef",
            MetricId::C1 => "C1",
            MetricId::C2 => "C2",
        }
    }

    /// Whether the metric needs an opposite-class point to be defined.
    pub fn needs_enemy(self) -> bool {
        matches!(
            self,
            MetricId::F1v
                | MetricId::L1
                | MetricId::L2
                | MetricId::L3
                | MetricId::N1
                | MetricId::N2
                | MetricId::N3
                | MetricId::N4
                | MetricId::T1
                | MetricId::Lsc
        )
    }

    /// Closed bounds of the metric's range.
    pub fn range(self) -> (f64, f64) {
        (0.0, 1.0)
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown complexity metric `{s}`")))
    }
}

/// Knobs shared by all metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityConfig {
    /// Neighborhood radius of the network graph, relative to the largest
    /// pairwise distance.
    pub epsilon: f64,
    /// Seed for the interpolants used by L3 and N4.
    pub seed: u64,
}

impl Default for ComplexityConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.15,
            seed: 0,
        }
    }
}

impl ComplexityConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub(crate) fn interpolation_seed(&self, metric: MetricId) -> u64 {
        seed::derive(self.seed, metric.name())
    }
}

/// One value per metric, `None` when undefined.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricValues(pub [Option<f64>; 14]);

impl MetricValues {
    pub fn get(&self, m: MetricId) -> Option<f64> {
        self.0[m.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (MetricId, Option<f64>)> + '_ {
        MetricId::ALL.into_iter().map(|m| (m, self.get(m)))
    }
}

/// Lazily shared intermediate results for one point set.
pub(crate) struct Analysis<'a> {
    pub points: &'a Points,
    pub config: &'a ComplexityConfig,
    enemies: std::cell::OnceCell<Vec<Option<(f64, usize)>>>,
    logistic: std::cell::OnceCell<crate::learners::LogisticModel>,
}

impl<'a> Analysis<'a> {
    pub fn new(points: &'a Points, config: &'a ComplexityConfig) -> Self {
        Self {
            points,
            config,
            enemies: Default::default(),
            logistic: Default::default(),
        }
    }

    pub fn enemies(&self) -> &[Option<(f64, usize)>] {
        self.enemies.get_or_init(|| self.points.nearest_enemies())
    }

    pub fn logistic(&self) -> &crate::learners::LogisticModel {
        self.logistic.get_or_init(|| {
            crate::learners::fit_logistic(
                self.points.coords(),
                self.points.dim(),
                self.points.labels(),
                &crate::learners::LogisticConfig::default(),
            )
        })
    }

    pub fn metric(&self, metric: MetricId) -> Option<f64> {
        let p = self.points;
        if p.len() < 2 {
            return None;
        }
        if metric.needs_enemy() && !p.has_both_classes() {
            return None;
        }
        let v = match metric {
            MetricId::F1v => feature::f1v(p),
            MetricId::L1 => linearity::l1(self),
            MetricId::L2 => linearity::l2(self),
            MetricId::L3 => linearity::l3(self),
            MetricId::N1 => neighborhood::n1(p),
            MetricId::N2 => neighborhood::n2(self),
            MetricId::N3 => neighborhood::n3(p),
            MetricId::N4 => neighborhood::n4(self),
            MetricId::T1 => neighborhood::t1(self),
            MetricId::Lsc => neighborhood::lsc(self),
            MetricId::Density => return Some(network::Graph::build(p, self.config.epsilon).density()),
            MetricId::ClsCoef => {
                return Some(network::Graph::build(p, self.config.epsilon).clustering_complexity())
            }
            MetricId::C1 => imbalance::c1(p),
            MetricId::C2 => imbalance::c2(p),
        };
        Some(v)
    }

    pub fn all(&self) -> MetricValues {
        let mut out = MetricValues::default();
        if self.points.len() < 2 {
            return out;
        }
        let graph = network::Graph::build(self.points, self.config.epsilon);
        for m in MetricId::ALL {
            out.0[m.index()] = match m {
                MetricId::Density => Some(graph.density()),
                MetricId::ClsCoef => Some(graph.clustering_complexity()),
                other => self.metric(other),
            };
        }
        out
    }
}

/// Compute one metric on row-major points with `d` columns.
///
/// Points are expected to be standardized; constant columns are dropped here.
pub fn compute_metric(
    metric: MetricId,
    points: &[f64],
    d: usize,
    labels: &[u8],
    config: &ComplexityConfig,
) -> Option<f64> {
    let p = Points::canonical(points, d, labels);
    Analysis::new(&p, config).metric(metric)
}

/// Compute all fourteen metrics, sharing intermediate work.
pub fn compute_all(points: &[f64], d: usize, labels: &[u8], config: &ComplexityConfig) -> MetricValues {
    let p = Points::canonical(points, d, labels);
    Analysis::new(&p, config).all()
}

/// Group values and their absolute difference for one metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricEntry {
    #[serde(rename = "priv")]
    pub privileged: Option<f64>,
    #[serde(rename = "unpriv")]
    pub unprivileged: Option<f64>,
    pub cmd: Option<f64>,
}

impl MetricEntry {
    pub fn new(privileged: Option<f64>, unprivileged: Option<f64>) -> Self {
        let cmd = match (privileged, unprivileged) {
            (Some(p), Some(u)) => Some((p - u).abs()),
            _ => None,
        };
        Self {
            privileged,
            unprivileged,
            cmd,
        }
    }
}

/// Per-group complexity and CMD vector of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexityProfile {
    pub entries: BTreeMap<MetricId, MetricEntry>,
}

impl ComplexityProfile {
    pub fn from_values(privileged: &MetricValues, unprivileged: &MetricValues) -> Self {
        Self {
            entries: MetricId::ALL
                .into_iter()
                .map(|m| (m, MetricEntry::new(privileged.get(m), unprivileged.get(m))))
                .collect(),
        }
    }

    pub fn entry(&self, m: MetricId) -> MetricEntry {
        self.entries[&m]
    }

    pub fn cmd(&self, m: MetricId) -> Option<f64> {
        self.entries[&m].cmd
    }

    /// CMD values in [`MetricId::ALL`] order.
    pub fn cmd_vector(&self) -> [Option<f64>; 14] {
        MetricId::ALL.map(|m| self.cmd(m))
    }

    /// Metrics whose CMD is undefined.
    pub fn undefined(&self) -> Vec<MetricId> {
        MetricId::ALL.into_iter().filter(|m| self.cmd(*m).is_none()).collect()
    }

    /// True when a protected group is empty or has fewer than two rows.
    pub fn is_degenerate(&self) -> bool {
        self.entries.values().all(|e| e.cmd.is_none())
    }
}

/// Standardize the dataset once, split it by the protected attribute and
/// compute all metrics on each group independently.
///
/// Both groups use the same interpolation seeds, so swapping the group labels
/// leaves every CMD unchanged.
pub fn compute_profile(ds: &TabularDataset, config: &ComplexityConfig) -> ComplexityProfile {
    let (z, _) = standardize(ds);
    let (privileged, unprivileged) = split_groups(&z);
    let values = |view: &crate::data::GroupView<'_>| {
        if view.len() < 2 {
            return MetricValues::default();
        }
        let (x, y) = view.points();
        compute_all(&x, z.n_features(), &y, config)
    };
    let (p, u) = rayon::join(|| values(&privileged), || values(&unprivileged));
    ComplexityProfile::from_values(&p, &u)
}

#[cfg(test)]
mod tests;
