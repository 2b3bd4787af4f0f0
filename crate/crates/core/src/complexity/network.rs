use super::Points;

/// Same-class epsilon-neighborhood graph as a bitset adjacency matrix.
pub(super) struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    edges: usize,
}

impl Graph {
    /// Edge between same-class points whose distance, divided by the largest
    /// pairwise distance, is below `epsilon`.
    pub fn build(p: &Points, epsilon: f64) -> Self {
        let n = p.len();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        let diameter = p.diameter();
        let mut edges = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if p.labels()[i] != p.labels()[j] {
                    continue;
                }
                let rel = if diameter > 0.0 { p.dist(i, j) / diameter } else { 0.0 };
                if rel < epsilon {
                    bits[i * words + j / 64] |= 1 << (j % 64);
                    bits[j * words + i / 64] |= 1 << (i % 64);
                    edges += 1;
                }
            }
        }
        Self {
            n,
            words,
            bits,
            edges,
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(k, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b)
        })
    }

    /// 1 - 2|E| / (n(n-1)).
    pub fn density(&self) -> f64 {
        let n = self.n as f64;
        1.0 - 2.0 * self.edges as f64 / (n * (n - 1.0))
    }

    /// 1 - mean local clustering coefficient (0 for degree < 2).
    pub fn clustering_complexity(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..self.n {
            let k = self.degree(i);
            if k < 2 {
                continue;
            }
            let ri = self.row(i);
            let links: usize = self
                .neighbors(i)
                .map(|u| {
                    self.row(u)
                        .iter()
                        .zip(ri)
                        .map(|(a, b)| (a & b).count_ones() as usize)
                        .sum::<usize>()
                })
                .sum();
            // each neighbor-neighbor link was counted from both ends
            total += (links / 2) as f64 / (k * (k - 1) / 2) as f64;
        }
        1.0 - total / self.n as f64
    }
}
