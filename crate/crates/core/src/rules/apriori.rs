use std::collections::BTreeSet;

use super::ItemSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequentItemset {
    pub items: ItemSet,
    pub count: usize,
    pub support: f64,
}

fn count(transactions: &[ItemSet], candidate: ItemSet) -> usize {
    transactions.iter().filter(|t| candidate.is_subset_of(**t)).count()
}

/// Level-wise Apriori. Returns every nonempty itemset whose support
/// (count / number of transactions) is at least `min_support`, ordered by
/// size and then by bitmask.
pub fn apriori(transactions: &[ItemSet], min_support: f64) -> Vec<FrequentItemset> {
    let n = transactions.len();
    if n == 0 {
        return Vec::new();
    }
    let frequent = |c: usize| c as f64 / n as f64 >= min_support;
    let universe = transactions.iter().fold(ItemSet::empty(), |a, t| a.union(*t));

    let mut out = Vec::new();
    let mut level: BTreeSet<u64> = BTreeSet::new();
    for bit in 0..64 {
        let single = ItemSet(1 << bit);
        if !single.is_subset_of(universe) {
            continue;
        }
        let c = count(transactions, single);
        if frequent(c) {
            level.insert(single.0);
            out.push(FrequentItemset {
                items: single,
                count: c,
                support: c as f64 / n as f64,
            });
        }
    }
    while !level.is_empty() {
        let current: Vec<u64> = level.iter().copied().collect();
        let mut candidates = BTreeSet::new();
        for (i, &a) in current.iter().enumerate() {
            for &b in &current[i + 1..] {
                let joined = a | b;
                if (joined.count_ones() as usize) != a.count_ones() as usize + 1 {
                    continue;
                }
                // downward closure: every subset one item smaller must be frequent
                let closed = (0..64)
                    .filter(|bit| joined >> bit & 1 == 1)
                    .all(|bit| level.contains(&(joined & !(1u64 << bit))));
                if closed {
                    candidates.insert(joined);
                }
            }
        }
        let mut next = BTreeSet::new();
        for c in candidates {
            let k = count(transactions, ItemSet(c));
            if frequent(k) {
                next.insert(c);
                out.push(FrequentItemset {
                    items: ItemSet(c),
                    count: k,
                    support: k as f64 / n as f64,
                });
            }
        }
        level = next;
    }
    out
}
