use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        label: u8,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Binary CART tree stored as an arena; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn predict(&self, row: &[f64]) -> u8 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                TreeNode::Leaf { label } => return label,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn internal_nodes(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Split { .. }))
            .count()
    }
}

fn gini(counts: [usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p = counts[1] as f64 / n;
    2.0 * p * (1.0 - p)
}

fn counts_of(rows: &[usize], y: &[u8]) -> [usize; 2] {
    let ones = rows.iter().filter(|&&r| y[r] == 1).count();
    [rows.len() - ones, ones]
}

struct Split {
    feature: usize,
    threshold: f64,
    gain: f64,
}

/// Best Gini split over every feature and every midpoint between consecutive
/// distinct values. Ties keep the lowest feature, then the lowest threshold.
fn best_split(rows: &[usize], x: &[f64], d: usize, y: &[u8]) -> Option<Split> {
    let total = counts_of(rows, y);
    let n = rows.len() as f64;
    let parent = gini(total);
    let mut best: Option<Split> = None;
    let mut order = rows.to_vec();
    for j in 0..d {
        let value = |r: usize| x[r * d + j];
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(a.cmp(&b)));
        let mut left = [0usize; 2];
        for k in 0..order.len() - 1 {
            left[y[order[k]] as usize] += 1;
            let (lo, hi) = (value(order[k]), value(order[k + 1]));
            if lo == hi {
                continue;
            }
            let right = [total[0] - left[0], total[1] - left[1]];
            let nl = (k + 1) as f64;
            let weighted = (nl * gini(left) + (n - nl) * gini(right)) / n;
            let gain = parent - weighted;
            if best.as_ref().is_none_or(|b| gain > b.gain) {
                let mut threshold = lo + (hi - lo) / 2.0;
                if threshold >= hi {
                    threshold = lo;
                }
                best = Some(Split {
                    feature: j,
                    threshold,
                    gain,
                });
            }
        }
    }
    best
}

/// Grow a CART tree with Gini impurity until leaves are pure or all their
/// rows coincide. No depth limit; a zero-gain split is still taken, so XOR
/// patterns get resolved one level down. Leaves predict the majority (ties → 0).
pub fn fit_tree(x: &[f64], d: usize, y: &[u8]) -> DecisionTree {
    let mut nodes = vec![TreeNode::Leaf { label: 0 }];
    let mut stack = vec![(0usize, (0..y.len()).collect::<Vec<_>>())];
    while let Some((at, rows)) = stack.pop() {
        let counts = counts_of(&rows, y);
        let majority = u8::from(counts[1] > counts[0]);
        if counts[0] == 0 || counts[1] == 0 {
            nodes[at] = TreeNode::Leaf { label: majority };
            continue;
        }
        match best_split(&rows, x, d, y) {
            Some(split) => {
                let (l, r): (Vec<usize>, Vec<usize>) = rows
                    .iter()
                    .partition(|&&i| x[i * d + split.feature] <= split.threshold);
                let left = nodes.len();
                nodes.push(TreeNode::Leaf { label: 0 });
                nodes.push(TreeNode::Leaf { label: 0 });
                nodes[at] = TreeNode::Split {
                    feature: split.feature,
                    threshold: split.threshold,
                    left,
                    right: left + 1,
                };
                stack.push((left + 1, r));
                stack.push((left, l));
            }
            None => nodes[at] = TreeNode::Leaf { label: majority },
        }
    }
    DecisionTree { nodes }
}
