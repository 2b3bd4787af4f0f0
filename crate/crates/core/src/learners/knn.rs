use std::cmp::Ordering;

#[derive(Debug, Clone)]
pub struct KnnModel {
    x: Vec<f64>,
    d: usize,
    y: Vec<u8>,
    pub k: usize,
    /// The training set was smaller than the requested k.
    pub clamped: bool,
}

fn by_distance_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

impl KnnModel {
    /// The k nearest training rows as (distance, index), nearest first.
    pub fn neighbors(&self, row: &[f64]) -> Vec<(f64, usize)> {
        let mut all: Vec<(f64, usize)> = (0..self.y.len())
            .map(|j| {
                let dist = crate::complexity::euclidean(row, &self.x[j * self.d..(j + 1) * self.d]);
                (dist, j)
            })
            .collect();
        if self.k < all.len() {
            all.select_nth_unstable_by(self.k, by_distance_then_index);
            all.truncate(self.k);
        }
        all.sort_by(by_distance_then_index);
        all
    }

    /// Majority vote; an even split goes to the single nearest neighbor.
    pub fn predict(&self, row: &[f64]) -> u8 {
        let nn = self.neighbors(row);
        let ones = nn.iter().filter(|&&(_, j)| self.y[j] == 1).count();
        let zeros = nn.len() - ones;
        match ones.cmp(&zeros) {
            Ordering::Greater => 1,
            Ordering::Less => 0,
            Ordering::Equal => nn.first().map_or(0, |&(_, j)| self.y[j]),
        }
    }
}

/// Store the training rows. Distances are Euclidean; k is clamped to the
/// training size.
pub fn fit_knn(x: &[f64], d: usize, y: &[u8], k: usize) -> KnnModel {
    let clamped = y.len() < k;
    KnnModel {
        x: x.to_vec(),
        d,
        y: y.to_vec(),
        k: k.min(y.len()),
        clamped,
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unanimous_coincident_neighbors() {
        let mut x = vec![1.0; 10];
        x.extend([5.0; 5]);
        let mut y = vec![1u8; 10];
        y.extend([0u8; 5]);
        let m = fit_knn(&x, 1, &y, 10);
        assert_eq!(m.predict(&[1.0]), 1);
    }

    #[test]
    fn even_vote_goes_to_the_nearest() {
        // query at 0; five class-0 points at distance 1 (indices 0..5) and
        // five class-1 points at distance 1 (indices 5..10) fill k=10 exactly.
        let x = [1.0, -1.0, 1.0, -1.0, 1.0, 1.0, -1.0, 1.0, -1.0, 1.0, 9.0];
        let y = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1];
        let m = fit_knn(&x, 1, &y, 10);
        assert_eq!(m.predict(&[0.0]), 0);
        let flipped: Vec<u8> = y.iter().map(|v| 1 - v).collect();
        assert_eq!(fit_knn(&x, 1, &flipped, 10).predict(&[0.0]), 1);
    }

    #[test]
    fn k_is_clamped_to_the_training_size() {
        let m = fit_knn(&[0.0, 1.0, 2.0], 1, &[0, 1, 1], 10);
        assert!(m.clamped);
        assert_eq!(m.k, 3);
        assert_eq!(m.predict(&[0.0]), 1);
    }

    #[test]
    fn matches_exhaustive_scan() {
        use rand::Rng;
        let mut rng = crate::seed::rng(17);
        let x: Vec<f64> = (0..60).map(|_| rng.random_range(-2.0..2.0)).collect();
        let y: Vec<u8> = (0..30).map(|i| u8::from(x[2 * i] + x[2 * i + 1] > 0.0)).collect();
        let m = fit_knn(&x, 2, &y, 10);
        for q in [[0.1, -0.2], [1.5, 1.0], [-0.3, 0.25]] {
            // oracle: sort every training point by (squared distance, index)
            let mut all: Vec<(f64, usize)> = (0..30)
                .map(|j| ((q[0] - x[2 * j]).powi(2) + (q[1] - x[2 * j + 1]).powi(2), j))
                .collect();
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let ones = all[..10].iter().filter(|(_, j)| y[*j] == 1).count();
            let expected = match ones {
                6.. => 1,
                0..=4 => 0,
                _ => y[all[0].1],
            };
            assert_eq!(m.predict(&q), expected);
        }
    }
}
