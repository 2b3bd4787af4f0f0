use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticConfig {
    /// L2 penalty on the weights (not the bias).
    pub lambda: f64,
    pub iterations: usize,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            lambda: 1e-4,
            iterations: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Set to the only class seen when trained on single-class data.
    pub constant: Option<u8>,
}

impl LogisticModel {
    pub fn score(&self, row: &[f64]) -> f64 {
        self.weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>() + self.bias
    }

    /// 1 iff sigmoid(score) >= 0.5.
    pub fn predict(&self, row: &[f64]) -> u8 {
        match self.constant {
            Some(c) => c,
            None => u8::from(self.score(row) >= 0.0),
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^z), overflow-safe.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Mean logistic loss plus (lambda/2)·|w|².
pub fn logistic_loss(model: &LogisticModel, x: &[f64], d: usize, y: &[u8], lambda: f64) -> f64 {
    let n = y.len();
    let data: f64 = (0..n)
        .map(|i| {
            let z = model.score(&x[i * d..(i + 1) * d]);
            softplus(z) - y[i] as f64 * z
        })
        .sum();
    let reg: f64 = model.weights.iter().map(|w| w * w).sum();
    data / n as f64 + 0.5 * lambda * reg
}

/// L2-regularized logistic regression by full-batch gradient descent from
/// zero, with step 1/L where L = mean(|x|² + 1)/4 + lambda bounds the
/// curvature of the objective.
pub fn fit_logistic(x: &[f64], d: usize, y: &[u8], config: &LogisticConfig) -> LogisticModel {
    let n = y.len();
    let ones = y.iter().filter(|&&t| t == 1).count();
    if ones == 0 || ones == n {
        return LogisticModel {
            weights: vec![0.0; d],
            bias: 0.0,
            constant: Some(u8::from(ones == n && n > 0)),
        };
    }
    let row = |i: usize| &x[i * d..(i + 1) * d];
    let sq_norm: f64 = (0..n)
        .map(|i| row(i).iter().map(|v| v * v).sum::<f64>() + 1.0)
        .sum::<f64>()
        / n as f64;
    let lipschitz = 0.25 * sq_norm + config.lambda;
    let step = 1.0 / lipschitz;

    let mut model = LogisticModel {
        weights: vec![0.0; d],
        bias: 0.0,
        constant: None,
    };
    let mut grad_w = vec![0.0; d];
    for _ in 0..config.iterations {
        grad_w.iter_mut().for_each(|g| *g = 0.0);
        let mut grad_b = 0.0;
        for i in 0..n {
            let r = sigmoid(model.score(row(i))) - y[i] as f64;
            for (g, v) in grad_w.iter_mut().zip(row(i)) {
                *g += r * v;
            }
            grad_b += r;
        }
        for (w, g) in model.weights.iter_mut().zip(&grad_w) {
            *w -= step * (g / n as f64 + config.lambda * *w);
        }
        model.bias -= step * grad_b / n as f64;
    }
    model
}
