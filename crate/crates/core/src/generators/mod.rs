//! Synthetic data generators behind one fit/sample interface.
//!
//! `IndHist` and `BayNet` are classical synthesizers. `PerfectLeaker`,
//! `NullModel` and `UniqueValueLeaker` are reference models with known
//! leakage: total, none, and a single rare attribute value respectively.

mod baynet;
mod binning;
mod indhist;
mod mi;

use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use baynet::{BayNetModel, Node};
pub use binning::{EqualWidthBins, QuantileBins};
pub use indhist::{IndHistModel, Marginal};
pub use mi::mutual_information;

use crate::error::{Error, Result};
use crate::rng;
use crate::tabular::{Dataset, FeatureKind, Record, Role, Schema, Value};

fn default_bins() -> usize {
    10
}

fn default_max_parents() -> usize {
    2
}

fn default_alpha() -> f64 {
    1.0
}

fn default_emit() -> f64 {
    0.9
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GeneratorKind {
    #[serde(rename = "indhist")]
    IndHist {
        /// Equal-width bins for numeric attributes.
        #[serde(default = "default_bins")]
        bins: usize,
    },
    #[serde(rename = "baynet")]
    BayNet {
        #[serde(default = "default_max_parents")]
        max_parents: usize,
        /// Quantile bins for numeric attributes.
        #[serde(default = "default_bins")]
        bins: usize,
        #[serde(default = "default_alpha")]
        laplace_alpha: f64,
    },
    #[serde(rename = "perfect_leaker")]
    PerfectLeaker,
    #[serde(rename = "null_model")]
    NullModel,
    #[serde(rename = "unique_value_leaker")]
    UniqueValueLeaker {
        #[serde(default = "default_emit")]
        emit_probability: f64,
        /// Bins of the wrapped IndHist model.
        #[serde(default = "default_bins")]
        bins: usize,
    },
}

impl GeneratorKind {
    pub fn indhist() -> Self {
        GeneratorKind::IndHist {
            bins: default_bins(),
        }
    }

    pub fn baynet() -> Self {
        GeneratorKind::BayNet {
            max_parents: default_max_parents(),
            bins: default_bins(),
            laplace_alpha: default_alpha(),
        }
    }

    pub fn unique_value_leaker(emit_probability: f64) -> Self {
        GeneratorKind::UniqueValueLeaker {
            emit_probability,
            bins: default_bins(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::IndHist { .. } => "indhist",
            GeneratorKind::BayNet { .. } => "baynet",
            GeneratorKind::PerfectLeaker => "perfect_leaker",
            GeneratorKind::NullModel => "null_model",
            GeneratorKind::UniqueValueLeaker { .. } => "unique_value_leaker",
        }
    }
}

/// Generator family, hyperparameters, and seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, seed: u64) -> Self {
        GeneratorSpec { kind, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        match self.kind {
            GeneratorKind::IndHist { bins } | GeneratorKind::UniqueValueLeaker { bins, .. }
                if bins < 2 =>
            {
                bad(format!("bins must be at least 2, got {bins}"))
            }
            GeneratorKind::BayNet { max_parents, .. } if max_parents < 1 => {
                bad("max_parents must be at least 1".into())
            }
            GeneratorKind::BayNet { bins, .. } if bins < 2 => {
                bad(format!("bins must be at least 2, got {bins}"))
            }
            GeneratorKind::BayNet { laplace_alpha, .. }
                if !(laplace_alpha > 0.0 && laplace_alpha.is_finite()) =>
            {
                bad(format!(
                    "laplace_alpha must be positive, got {laplace_alpha}"
                ))
            }
            GeneratorKind::UniqueValueLeaker {
                emit_probability, ..
            } if !(0.0..=1.0).contains(&emit_probability) => bad(format!(
                "emit_probability {emit_probability} outside [0, 1]"
            )),
            _ => Ok(()),
        }
    }
}

/// A categorical value held by exactly one training record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trigger {
    pub feature: usize,
    pub code: u32,
}

/// Per-kind fitted parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelState {
    IndHist(IndHistModel),
    BayNet(BayNetModel),
    PerfectLeaker {
        rows: Vec<Record>,
    },
    /// Uniform over the schema domains; nothing is learned from the rows.
    NullModel,
    UniqueValueLeaker {
        base: IndHistModel,
        trigger: Option<Trigger>,
        emit_probability: f64,
    },
}

/// A trained model `M = phi(D_train)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedGenerator {
    pub spec: GeneratorSpec,
    pub schema: Arc<Schema>,
    pub model: ModelState,
}

/// First categorical value (by feature, then domain code) that occurs in
/// exactly one record.
pub fn find_unique_value(train: &Dataset) -> Option<Trigger> {
    let schema = train.schema();
    schema.categorical_features().into_iter().find_map(|f| {
        let mut counts = vec![0usize; schema.feature(f).cardinality().expect("categorical")];
        for r in train.rows() {
            counts[r[f].as_cat().expect("categorical") as usize] += 1;
        }
        counts.iter().position(|&c| c == 1).map(|code| Trigger {
            feature: f,
            code: code as u32,
        })
    })
}

/// Train a generator on `train`.
pub fn fit(spec: &GeneratorSpec, train: &Dataset) -> Result<FittedGenerator> {
    spec.validate()?;
    if train.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 training rows, have {}",
            train.len()
        )));
    }
    let model = match spec.kind {
        GeneratorKind::IndHist { bins } => ModelState::IndHist(IndHistModel::fit(train, bins)),
        GeneratorKind::BayNet {
            max_parents,
            bins,
            laplace_alpha,
        } => ModelState::BayNet(BayNetModel::fit(train, max_parents, bins, laplace_alpha)),
        GeneratorKind::PerfectLeaker => ModelState::PerfectLeaker {
            rows: train.rows().to_vec(),
        },
        GeneratorKind::NullModel => ModelState::NullModel,
        GeneratorKind::UniqueValueLeaker {
            emit_probability,
            bins,
        } => ModelState::UniqueValueLeaker {
            base: IndHistModel::fit(train, bins),
            trigger: find_unique_value(train),
            emit_probability,
        },
    };
    Ok(FittedGenerator {
        spec: spec.clone(),
        schema: Arc::clone(train.schema_arc()),
        model,
    })
}

fn null_record<R: Rng + ?Sized>(schema: &Schema, rng: &mut R) -> Record {
    let values = schema
        .features()
        .iter()
        .map(|f| match &f.kind {
            FeatureKind::Categorical { domain } => {
                Value::Cat(rng::uniform_index(rng, domain.len()) as u32)
            }
            FeatureKind::Numeric { min, max } => {
                Value::Num(binning::lerp(*min, *max, rng.gen::<f64>()))
            }
        })
        .collect();
    Record::new(values)
}

impl FittedGenerator {
    /// Draw `n` synthetic records. Deterministic in `(model, spec.seed, seed)`.
    pub fn sample(&self, n: usize, seed: u64) -> Dataset {
        let mut rng = rng::derived(self.spec.seed, "sample", seed);
        let rows: Vec<Record> = match &self.model {
            ModelState::IndHist(m) => {
                let s = m.sampler();
                (0..n).map(|_| s.draw(&mut rng)).collect()
            }
            ModelState::BayNet(m) => (0..n).map(|_| m.draw(&mut rng)).collect(),
            ModelState::PerfectLeaker { rows } => {
                // Successive fresh permutations of the training rows, so any
                // n >= |train| reproduces every training record.
                let mut out = Vec::with_capacity(n);
                while out.len() < n {
                    let mut order: Vec<usize> = (0..rows.len()).collect();
                    rng::shuffle(&mut order, &mut rng);
                    out.extend(order.iter().take(n - out.len()).map(|&i| rows[i].clone()));
                }
                out
            }
            ModelState::NullModel => (0..n)
                .map(|_| null_record(&self.schema, &mut rng))
                .collect(),
            ModelState::UniqueValueLeaker {
                base,
                trigger,
                emit_probability,
            } => {
                let s = base.sampler();
                (0..n)
                    .map(|_| {
                        let mut r = s.draw(&mut rng);
                        if let Some(t) = trigger {
                            if rng.gen::<f64>() < *emit_probability {
                                r.set(t.feature, Value::Cat(t.code));
                            }
                        }
                        r
                    })
                    .collect()
            }
        };
        Dataset::from_trusted(Arc::clone(&self.schema), rows, Role::Synthetic)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: FittedGenerator = serde_json::from_str(text)?;
        g.spec.validate()?;
        Ok(g)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json(&std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}

/// Convenience wrapper: `fitted.sample(n, seed)`.
pub fn sample(g: &FittedGenerator, n: usize, seed: u64) -> Dataset {
    g.sample(n, seed)
}
