//! Transactions, Apriori and complexity → fairness association rules.

mod apriori;
mod items;
mod mining;

pub use apriori::{apriori, FrequentItemset};
pub use items::{itemize, CorpusRecord, Item, ItemSet, Itemization, Thresholds, Transaction};
pub use mining::{
    evaluate_rules, generate_rules, rules_to_csv, evaluations_to_csv, AssociationRule, RuleEvaluation,
};
