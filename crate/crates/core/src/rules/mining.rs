use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{FrequentItemset, ItemSet, Transaction};
use crate::error::{Error, Result};

/// complexity items → fairness items, with the usual interest measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RuleRecord", into = "RuleRecord")]
pub struct AssociationRule {
    pub antecedent: ItemSet,
    pub consequent: ItemSet,
    pub support_antecedent: f64,
    pub support_consequent: f64,
    pub support: f64,
    pub confidence: f64,
    pub lift: f64,
}

#[derive(Serialize, Deserialize)]
struct RuleRecord {
    antecedent: Vec<String>,
    consequent: Vec<String>,
    sup_a: f64,
    sup_c: f64,
    sup: f64,
    confidence: f64,
    lift: f64,
}

impl From<AssociationRule> for RuleRecord {
    fn from(r: AssociationRule) -> Self {
        Self {
            antecedent: r.antecedent.names(),
            consequent: r.consequent.names(),
            sup_a: r.support_antecedent,
            sup_c: r.support_consequent,
            sup: r.support,
            confidence: r.confidence,
            lift: r.lift,
        }
    }
}

impl TryFrom<RuleRecord> for AssociationRule {
    type Error = Error;

    fn try_from(r: RuleRecord) -> Result<Self> {
        let antecedent = ItemSet::parse(&r.antecedent)?;
        let consequent = ItemSet::parse(&r.consequent)?;
        check_typing(antecedent, consequent)?;
        Ok(Self {
            antecedent,
            consequent,
            support_antecedent: r.sup_a,
            support_consequent: r.sup_c,
            support: r.sup,
            confidence: r.confidence,
            lift: r.lift,
        })
    }
}

fn check_typing(antecedent: ItemSet, consequent: ItemSet) -> Result<()> {
    if antecedent.is_empty() || !antecedent.is_subset_of(ItemSet::COMPLEXITY) {
        return Err(Error::Schema(format!(
            "antecedent `{antecedent}` must be a nonempty set of complexity items"
        )));
    }
    if consequent.is_empty() || !consequent.is_subset_of(ItemSet::FAIRNESS) {
        return Err(Error::Schema(format!(
            "consequent `{consequent}` must be a nonempty set of fairness items"
        )));
    }
    Ok(())
}

fn lexicographic(a: (ItemSet, ItemSet), b: (ItemSet, ItemSet)) -> Ordering {
    let bits = |s: ItemSet| s.items().map(|i| i.bit()).collect::<Vec<_>>();
    bits(a.0).cmp(&bits(b.0)).then_with(|| bits(a.1).cmp(&bits(b.1)))
}

/// Rules from frequent itemsets that mix both item kinds.
///
/// A frequent itemset splits in exactly one typed way: its complexity items
/// form the antecedent and its fairness items the consequent. Rules with
/// lift strictly above `min_lift` are kept, sorted by support and lift
/// (descending), then lexicographically.
pub fn generate_rules(itemsets: &[FrequentItemset], min_lift: f64) -> Vec<AssociationRule> {
    let support: HashMap<ItemSet, f64> = itemsets.iter().map(|f| (f.items, f.support)).collect();
    let mut rules: Vec<AssociationRule> = itemsets
        .iter()
        .filter_map(|f| {
            let antecedent = f.items.intersect(ItemSet::COMPLEXITY);
            let consequent = f.items.intersect(ItemSet::FAIRNESS);
            if antecedent.is_empty() || consequent.is_empty() || antecedent.union(consequent) != f.items {
                return None;
            }
            let sup_a = support[&antecedent];
            let sup_c = support[&consequent];
            let confidence = f.support / sup_a;
            let lift = confidence / sup_c;
            (lift > min_lift).then_some(AssociationRule {
                antecedent,
                consequent,
                support_antecedent: sup_a,
                support_consequent: sup_c,
                support: f.support,
                confidence,
                lift,
            })
        })
        .collect();
    rules.sort_by(|a, b| {
        b.support
            .total_cmp(&a.support)
            .then(b.lift.total_cmp(&a.lift))
            .then_with(|| lexicographic((a.antecedent, a.consequent), (b.antecedent, b.consequent)))
    });
    rules
}

/// A fixed rule re-measured on another corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleEvaluation {
    #[serde(serialize_with = "names", deserialize_with = "parse_names")]
    pub antecedent: ItemSet,
    #[serde(serialize_with = "names", deserialize_with = "parse_names")]
    pub consequent: ItemSet,
    pub sup_a: f64,
    pub sup_c: f64,
    pub sup: f64,
    /// Undefined when the antecedent never fires.
    pub confidence: Option<f64>,
    /// Undefined when the antecedent or the consequent never fires.
    pub lift: Option<f64>,
}

fn names<S: serde::Serializer>(set: &ItemSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    set.names().serialize(s)
}

fn parse_names<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<ItemSet, D::Error> {
    let v = Vec::<String>::deserialize(d)?;
    ItemSet::parse(&v).map_err(serde::de::Error::custom)
}

/// Recompute every rule's measures on `transactions` without re-mining.
pub fn evaluate_rules(rules: &[AssociationRule], transactions: &[Transaction]) -> Result<Vec<RuleEvaluation>> {
    if transactions.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = transactions.len() as f64;
    let support = |s: ItemSet| transactions.iter().filter(|t| s.is_subset_of(t.items)).count() as f64 / n;
    Ok(rules
        .iter()
        .map(|r| {
            let sup_a = support(r.antecedent);
            let sup_c = support(r.consequent);
            let sup = support(r.antecedent.union(r.consequent));
            let confidence = (sup_a > 0.0).then(|| sup / sup_a);
            let lift = confidence.filter(|_| sup_c > 0.0).map(|c| c / sup_c);
            RuleEvaluation {
                antecedent: r.antecedent,
                consequent: r.consequent,
                sup_a,
                sup_c,
                sup,
                confidence,
                lift,
            }
        })
        .collect())
}

const TABLE_HEADER: [&str; 7] = ["Antecedent", "Consequent", "Sup_A", "Sup_C", "Sup", "Confidence", "Lift"];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn rules_to_csv(rules: &[AssociationRule]) -> Result<Vec<u8>> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(TABLE_HEADER)?;
    for r in rules {
        wtr.write_record([
            r.antecedent.to_string(),
            r.consequent.to_string(),
            r.support_antecedent.to_string(),
            r.support_consequent.to_string(),
            r.support.to_string(),
            r.confidence.to_string(),
            r.lift.to_string(),
        ])?;
    }
    wtr.into_inner().map_err(|e| Error::io("<csv buffer>", e.into_error()))
}

pub fn evaluations_to_csv(evals: &[RuleEvaluation]) -> Result<Vec<u8>> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(TABLE_HEADER)?;
    for r in evals {
        wtr.write_record([
            r.antecedent.to_string(),
            r.consequent.to_string(),
            r.sup_a.to_string(),
            r.sup_c.to_string(),
            r.sup.to_string(),
            opt(r.confidence),
            opt(r.lift),
        ])?;
    }
    wtr.into_inner().map_err(|e| Error::io("<csv buffer>", e.into_error()))
}
