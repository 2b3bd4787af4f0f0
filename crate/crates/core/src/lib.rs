//! Group-wise classification complexity, group fairness auditing and
//! association rule mining between the two.
//!
//! The crate is organised around a single unit of work, the [`TabularDataset`]:
//! a numeric feature matrix with a binary target (1 = favorable) and a binary
//! protected attribute (1 = privileged) carried alongside the features.
//!
//! * [`complexity`] computes fourteen complexity metrics on each protected
//!   group and their absolute differences.
//! * [`learners`] and [`fairness`] run three baseline classifiers under
//!   stratified cross-validation and measure statistical parity, equal
//!   opportunity and predictive parity.
//! * [`synthgen`] regenerates a catalog of synthetic datasets with injected
//!   historical, measurement, representation and omitted-variable bias.
//! * [`rules`] turns audits into transactions and mines complexity → fairness
//!   association rules.
//! * [`embedding`] projects complexity-difference vectors to two dimensions.
//! * [`report`] ties the stages together into a deterministic pipeline.
#![allow(clippy::needless_range_loop)]

pub mod complexity;
pub mod data;
pub mod embedding;
pub mod error;
pub mod fairness;
pub mod io;
pub mod learners;
pub mod report;
pub mod rules;
pub mod seed;
pub mod synthgen;

pub use complexity::{ComplexityProfile, MetricId, MetricValues};
pub use data::{FoldAssignment, GroupView, Membership, TabularDataset};
pub use error::{Error, Result};
pub use fairness::{FairnessMetric, FairnessReport, GroupConfusion};
pub use learners::LearnerId;
pub use rules::{AssociationRule, Item, Transaction};
pub use synthgen::{ScenarioId, ScenarioSpec};
