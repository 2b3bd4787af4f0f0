use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complexity::MetricId;
use crate::error::{Error, Result};
use crate::fairness::FairnessMetric;
use crate::learners::LearnerId;

/// A transaction item: a complexity difference or a fairness violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Item {
    Complexity(MetricId),
    Fairness(FairnessMetric, LearnerId),
}

impl Item {
    pub const COUNT: usize = 23;

    /// Bit position: complexity metrics first, then SP/EO/PP for LR, DT, KN.
    pub fn bit(self) -> u32 {
        match self {
            Item::Complexity(m) => m.index() as u32,
            Item::Fairness(f, l) => {
                let learner = LearnerId::ALL.iter().position(|x| *x == l).unwrap();
                let metric = FairnessMetric::ALL.iter().position(|x| *x == f).unwrap();
                (14 + learner * 3 + metric) as u32
            }
        }
    }

    pub fn from_bit(bit: u32) -> Option<Item> {
        let b = bit as usize;
        if b < 14 {
            Some(Item::Complexity(MetricId::ALL[b]))
        } else if b < Self::COUNT {
            let k = b - 14;
            Some(Item::Fairness(FairnessMetric::ALL[k % 3], LearnerId::ALL[k / 3]))
        } else {
            None
        }
    }

    pub fn all() -> impl Iterator<Item = Item> {
        (0..Self::COUNT as u32).filter_map(Item::from_bit)
    }

    pub fn is_complexity(self) -> bool {
        matches!(self, Item::Complexity(_))
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Complexity(m) => write!(f, "{m}"),
            Item::Fairness(m, l) => write!(f, "{m}_{l}"),
        }
    }
}

impl FromStr for Item {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Item::all()
            .find(|i| i.to_string() == s)
            .ok_or_else(|| Error::Schema(format!("unknown item `{s}`")))
    }
}

/// A set of items as a bitmask over [`Item::bit`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemSet(pub u64);

impl ItemSet {
    pub const COMPLEXITY: ItemSet = ItemSet((1 << 14) - 1);
    pub const FAIRNESS: ItemSet = ItemSet(((1 << Item::COUNT) - 1) & !((1 << 14) - 1));

    pub fn empty() -> Self {
        ItemSet(0)
    }

    pub fn with(self, item: Item) -> Self {
        ItemSet(self.0 | 1 << item.bit())
    }

    pub fn contains(self, item: Item) -> bool {
        self.0 >> item.bit() & 1 == 1
    }

    pub fn is_subset_of(self, other: ItemSet) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn union(self, other: ItemSet) -> Self {
        ItemSet(self.0 | other.0)
    }

    pub fn intersect(self, other: ItemSet) -> Self {
        ItemSet(self.0 & other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn items(self) -> impl Iterator<Item = Item> {
        (0..64u32).filter(move |b| self.0 >> b & 1 == 1).filter_map(Item::from_bit)
    }

    pub fn names(self) -> Vec<String> {
        self.items().map(|i| i.to_string()).collect()
    }

    pub fn parse<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        names
            .iter()
            .try_fold(ItemSet::empty(), |acc, n| Ok(acc.with(n.as_ref().parse()?)))
    }
}

impl FromIterator<Item> for ItemSet {
    fn from_iter<T: IntoIterator<Item = Item>>(iter: T) -> Self {
        iter.into_iter().fold(ItemSet::empty(), ItemSet::with)
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join(" & "))
    }
}

/// The binarized audit of one dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub dataset_id: String,
    pub items: ItemSet,
}

/// CMD vector and fairness values of one audited dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub dataset_id: String,
    /// In [`MetricId::ALL`] order.
    pub cmd: [Option<f64>; 14],
    /// Indexed like the fairness items: SP/EO/PP for LR, then DT, then KN.
    pub fairness: [Option<f64>; 9],
}

impl CorpusRecord {
    pub fn fairness_value(&self, metric: FairnessMetric, learner: LearnerId) -> Option<f64> {
        self.fairness[Item::Fairness(metric, learner).bit() as usize - 14]
    }
}

/// Itemization cut-offs; both comparisons are strict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// A complexity item is present when its CMD exceeds this.
    pub cmd: f64,
    /// A fairness item is present when |value| exceeds this.
    pub fair_band: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            cmd: 0.1,
            fair_band: crate::fairness::FAIR_BAND,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Itemization {
    pub transactions: Vec<Transaction>,
    /// Undefined values read as absent items.
    pub undefined: usize,
}

pub fn itemize(records: &[CorpusRecord], thresholds: &Thresholds) -> Result<Itemization> {
    if records.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut undefined = 0;
    let transactions = records
        .iter()
        .map(|r| {
            let mut items = ItemSet::empty();
            for (m, v) in MetricId::ALL.into_iter().zip(r.cmd) {
                match v {
                    Some(v) if v > thresholds.cmd => items = items.with(Item::Complexity(m)),
                    Some(_) => {}
                    None => undefined += 1,
                }
            }
            for (k, v) in r.fairness.iter().enumerate() {
                match v {
                    Some(v) if v.abs() > thresholds.fair_band => {
                        items = items.with(Item::from_bit(14 + k as u32).unwrap())
                    }
                    Some(_) => {}
                    None => undefined += 1,
                }
            }
            Transaction {
                dataset_id: r.dataset_id.clone(),
                items,
            }
        })
        .collect();
    if undefined > 0 {
        log::warn!("{undefined} undefined values itemized as absent");
    }
    Ok(Itemization {
        transactions,
        undefined,
    })
}
