//! Synthetic bias-scenario catalog.
//!
//! Base structural causal model (A = 1 is privileged):
//!
//! ```text
//! A ~ Bernoulli(0.5)
//! R ~ Normal(0, 1)
//! Q ~ Normal(0.5 R, 1)
//! S = R + Q + Normal(0, 0.5)
//! Y = 1 iff S > 0
//! ```
//!
//! Every row draws the same random numbers in the same order whatever the
//! scenario, so a scenario whose bias parameter is a no-op reproduces the
//! unbiased dataset bit for bit under the same seed. Shift parameters are
//! scaled by [`ScmConfig::shift_scale`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::TabularDataset;
use crate::error::{Error, Result};
use crate::io::ParamValue;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScenarioId {
    S1A,
    S1B,
    S1C,
    S1D,
    S1E,
    S1F,
    S2A,
    S3A,
    S4A,
}

const SHIFT_GRID: [f64; 12] = [0.1, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0];

impl ScenarioId {
    pub const ALL: [ScenarioId; 9] = [
        ScenarioId::S1A,
        ScenarioId::S1B,
        ScenarioId::S1C,
        ScenarioId::S1D,
        ScenarioId::S1E,
        ScenarioId::S1F,
        ScenarioId::S2A,
        ScenarioId::S3A,
        ScenarioId::S4A,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::S1A => "S1A",
            ScenarioId::S1B => "S1B",
            ScenarioId::S1C => "S1C",
            ScenarioId::S1D => "S1D",
            ScenarioId::S1E => "S1E",
            ScenarioId::S1F => "S1F",
            ScenarioId::S2A => "S2A",
            ScenarioId::S3A => "S3A",
            ScenarioId::S4A => "S4A",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ScenarioId::S1A => "no bias",
            ScenarioId::S1B => "measurement bias on R",
            ScenarioId::S1C => "R omitted",
            ScenarioId::S1D => "undersampling of group A = 1",
            ScenarioId::S1E => "measurement bias on Y",
            ScenarioId::S1F => "conditional undersampling on R",
            ScenarioId::S2A => "historical bias on R",
            ScenarioId::S3A => "historical bias on Y",
            ScenarioId::S4A => "historical bias on Q",
        }
    }

    /// Parameter name as used in the catalog.
    pub fn parameter(self) -> Option<&'static str> {
        match self {
            ScenarioId::S1A => None,
            ScenarioId::S1B => Some("l_m"),
            ScenarioId::S1C => Some("l_o"),
            ScenarioId::S1D => Some("p_u"),
            ScenarioId::S1E => Some("l_m_y"),
            ScenarioId::S1F => Some("p_u"),
            ScenarioId::S2A => Some("l_h_y"),
            ScenarioId::S3A => Some("l_y"),
            ScenarioId::S4A => Some("l_h_q"),
        }
    }

    /// The parameter values of the catalog, in variant order.
    pub fn grid(self) -> Vec<ParamValue> {
        match self {
            ScenarioId::S1A => vec![],
            ScenarioId::S1C => vec![ParamValue::Flag(true)],
            ScenarioId::S1D => [0.003, 0.006, 0.008, 0.01, 0.1, 0.3, 0.5]
                .into_iter()
                .map(ParamValue::Real)
                .collect(),
            ScenarioId::S1F => [0.3, 0.5, 0.7, 0.9].into_iter().map(ParamValue::Real).collect(),
            ScenarioId::S1B | ScenarioId::S1E | ScenarioId::S2A | ScenarioId::S3A | ScenarioId::S4A => {
                SHIFT_GRID.into_iter().map(ParamValue::Real).collect()
            }
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidScenario(format!("unknown scenario `{s}`")))
    }
}

/// One dataset of the catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub scenario_id: ScenarioId,
    pub parameter_name: Option<String>,
    pub parameter_value: Option<ParamValue>,
    /// 1-based position in the scenario's value grid.
    pub variant_index: usize,
    pub n: usize,
    pub seed: u64,
}

impl ScenarioSpec {
    /// Dataset label, e.g. `S1F2`; the unbiased dataset is plain `S1A`.
    pub fn label(&self) -> String {
        match self.scenario_id {
            ScenarioId::S1A | ScenarioId::S1C => self.scenario_id.name().to_string(),
            id => format!("{}{}", id.name(), self.variant_index),
        }
    }

    /// An unbiased spec with an explicit seed.
    pub fn unbiased(n: usize, seed: u64) -> Self {
        Self {
            scenario_id: ScenarioId::S1A,
            parameter_name: None,
            parameter_value: None,
            variant_index: 1,
            n,
            seed,
        }
    }

    /// Spec for `variant_index` (1-based) of a scenario with an explicit seed.
    pub fn variant(id: ScenarioId, variant_index: usize, n: usize, seed: u64) -> Result<Self> {
        if id == ScenarioId::S1A {
            return Ok(Self::unbiased(n, seed));
        }
        let grid = id.grid();
        let value = variant_index
            .checked_sub(1)
            .and_then(|i| grid.get(i))
            .copied()
            .ok_or_else(|| Error::InvalidScenario(format!("{id} has no variant {variant_index}")))?;
        Ok(Self {
            scenario_id: id,
            parameter_name: id.parameter().map(str::to_string),
            parameter_value: Some(value),
            variant_index,
            n,
            seed,
        })
    }

    /// Same scenario and seed with a custom parameter value.
    pub fn with_value(mut self, value: ParamValue) -> Self {
        self.parameter_value = Some(value);
        self
    }

    fn real(&self) -> Result<f64> {
        match self.parameter_value {
            Some(ParamValue::Real(v)) => Ok(v),
            other => Err(Error::InvalidScenario(format!(
                "{} needs a real parameter, got {other:?}",
                self.scenario_id
            ))),
        }
    }
}

/// Which side of the privileged group's median R is undersampled in S1F.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UndersampleCondition {
    AboveMedian,
    BelowMedian,
}

/// Coefficients of the structural causal model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScmConfig {
    pub p_privileged: f64,
    /// Q = q_on_r · R + noise.
    pub q_on_r: f64,
    pub q_noise: f64,
    /// Standard deviation of the latent score noise.
    pub s_noise: f64,
    /// Multiplier applied to every shift-type bias parameter.
    pub shift_scale: f64,
    pub condition: UndersampleCondition,
}

impl Default for ScmConfig {
    fn default() -> Self {
        Self {
            p_privileged: 0.5,
            q_on_r: 0.5,
            q_noise: 1.0,
            s_noise: 0.5,
            shift_scale: 0.1,
            condition: UndersampleCondition::AboveMedian,
        }
    }
}

/// Standard-normal and uniform draws for one row. Drawn in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowNoise {
    pub u_group: f64,
    pub z_r: f64,
    pub z_q: f64,
    pub z_s: f64,
    pub u_keep: f64,
}

/// One individual of the causal model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScmSample {
    pub a: u8,
    pub r_true: f64,
    pub r_obs: f64,
    pub q_true: f64,
    pub q_obs: f64,
    pub y: u8,
    /// Latent score behind Y.
    pub s: f64,
    pub noise: RowNoise,
}

fn draw_noise(n: usize, seed: u64) -> Vec<RowNoise> {
    let mut rng = seed::rng(seed);
    (0..n)
        .map(|_| RowNoise {
            u_group: rng.random(),
            z_r: StandardNormal.sample(&mut rng),
            z_q: StandardNormal.sample(&mut rng),
            z_s: StandardNormal.sample(&mut rng),
            u_keep: rng.random(),
        })
        .collect()
}

/// Shifts applied to the unprivileged group (A = 0) while sampling.
#[derive(Debug, Clone, Copy, Default)]
struct Shifts {
    r: f64,
    q: f64,
    s: f64,
}

fn simulate(noise: &[RowNoise], cfg: &ScmConfig, shifts: Shifts) -> Vec<ScmSample> {
    noise
        .iter()
        .map(|z| {
            let a = u8::from(z.u_group < cfg.p_privileged);
            let unpriv = f64::from(1 - a);
            let r = z.z_r - shifts.r * unpriv;
            let q = cfg.q_on_r * r + cfg.q_noise * z.z_q - shifts.q * unpriv;
            let s = r + q + cfg.s_noise * z.z_s - shifts.s * unpriv;
            ScmSample {
                a,
                r_true: r,
                r_obs: r,
                q_true: q,
                q_obs: q,
                y: u8::from(s > 0.0),
                s,
                noise: *z,
            }
        })
        .collect()
}

/// Draw `n` unbiased individuals.
pub fn sample_base(n: usize, seed: u64) -> Result<Vec<ScmSample>> {
    sample_base_with(n, seed, &ScmConfig::default())
}

pub fn sample_base_with(n: usize, seed: u64, cfg: &ScmConfig) -> Result<Vec<ScmSample>> {
    if n < 100 {
        return Err(Error::InvalidArgument(format!("sample size must be >= 100, got {n}")));
    }
    Ok(simulate(&draw_noise(n, seed), cfg, Shifts::default()))
}

/// Rows kept and dropped by an undersampling scenario.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationLog {
    pub sampled: usize,
    pub kept: usize,
    pub privileged_sampled: usize,
    pub privileged_kept: usize,
    /// Rows eligible for removal (all privileged rows in S1D, the conditioned
    /// half in S1F).
    pub eligible: usize,
}

/// A generated dataset with its bookkeeping.
#[derive(Debug, Clone)]
pub struct Generated {
    pub spec: ScenarioSpec,
    pub dataset: TabularDataset,
    pub log: GenerationLog,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Apply a scenario's bias to the causal model and return the observed dataset.
///
/// Historical biases (S2A, S3A, S4A) act during sampling, so the samples are
/// re-simulated from their recorded noise; the other scenarios transform the
/// unbiased samples.
pub fn apply_bias(samples: &[ScmSample], spec: &ScenarioSpec, cfg: &ScmConfig) -> Result<Generated> {
    let noise: Vec<RowNoise> = samples.iter().map(|s| s.noise).collect();
    let scale = cfg.shift_scale;
    let mut rows: Vec<ScmSample> = match spec.scenario_id {
        ScenarioId::S2A => simulate(&noise, cfg, Shifts { r: spec.real()? * scale, ..Shifts::default() }),
        ScenarioId::S3A => simulate(&noise, cfg, Shifts { s: spec.real()? * scale, ..Shifts::default() }),
        ScenarioId::S4A => simulate(&noise, cfg, Shifts { q: spec.real()? * scale, ..Shifts::default() }),
        _ => samples.to_vec(),
    };
    let mut log = GenerationLog {
        sampled: rows.len(),
        privileged_sampled: rows.iter().filter(|s| s.a == 1).count(),
        ..GenerationLog::default()
    };
    let mut with_r = true;
    match spec.scenario_id {
        ScenarioId::S1A | ScenarioId::S2A | ScenarioId::S3A | ScenarioId::S4A => {}
        ScenarioId::S1B => {
            let shift = spec.real()? * scale;
            for s in &mut rows {
                s.r_obs = s.r_true - shift * f64::from(1 - s.a);
            }
        }
        ScenarioId::S1C => match spec.parameter_value {
            Some(ParamValue::Flag(omit)) => with_r = !omit,
            other => {
                return Err(Error::InvalidScenario(format!("S1C needs a boolean parameter, got {other:?}")))
            }
        },
        ScenarioId::S1D => {
            let p = keep_probability(spec)?;
            log.eligible = log.privileged_sampled;
            rows.retain(|s| s.a == 0 || s.noise.u_keep < p);
        }
        ScenarioId::S1E => {
            let shift = spec.real()? * scale;
            for s in &mut rows {
                s.y = u8::from(s.s - shift * f64::from(1 - s.a) > 0.0);
            }
        }
        ScenarioId::S1F => {
            let p = keep_probability(spec)?;
            let m = median(rows.iter().filter(|s| s.a == 1).map(|s| s.r_true).collect());
            let targeted = |s: &ScmSample| {
                s.a == 1
                    && match cfg.condition {
                        UndersampleCondition::AboveMedian => s.r_true > m,
                        UndersampleCondition::BelowMedian => s.r_true < m,
                    }
            };
            log.eligible = rows.iter().filter(|s| targeted(s)).count();
            rows.retain(|s| !targeted(s) || s.noise.u_keep < p);
        }
    }
    log.kept = rows.len();
    log.privileged_kept = rows.iter().filter(|s| s.a == 1).count();

    let (names, features): (Vec<String>, Vec<f64>) = if with_r {
        (
            vec!["R".into(), "Q".into()],
            rows.iter().flat_map(|s| [s.r_obs, s.q_obs]).collect(),
        )
    } else {
        (vec!["Q".into()], rows.iter().map(|s| s.q_obs).collect())
    };
    let dataset = TabularDataset::new(
        features,
        names,
        rows.iter().map(|s| s.y).collect(),
        rows.iter().map(|s| s.a).collect(),
    )?;
    Ok(Generated {
        spec: spec.clone(),
        dataset,
        log,
    })
}

fn keep_probability(spec: &ScenarioSpec) -> Result<f64> {
    let p = spec.real()?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidScenario(format!("p_u must lie in (0, 1], got {p}")));
    }
    Ok(p)
}

/// Sample and bias in one step.
pub fn generate(spec: &ScenarioSpec, cfg: &ScmConfig) -> Result<Generated> {
    let samples = sample_base_with(spec.n, spec.seed, cfg)?;
    apply_bias(&samples, spec, cfg)
}

/// Seed of one catalog entry, derived from the base seed and its label.
pub fn catalog_seed(base_seed: u64, scenario: ScenarioId, variant_index: usize) -> u64 {
    seed::derive(base_seed, &format!("{}#{}", scenario.name(), variant_index))
}

/// The 73 catalog specs in scenario order.
pub fn enumerate_catalog(n: usize, base_seed: u64) -> Vec<ScenarioSpec> {
    let mut out = Vec::with_capacity(73);
    for id in ScenarioId::ALL {
        let variants = id.grid().len().max(1);
        for v in 1..=variants {
            let seed = catalog_seed(base_seed, id, v);
            out.push(ScenarioSpec::variant(id, v, n, seed).expect("grid index in range"));
        }
    }
    out
}
