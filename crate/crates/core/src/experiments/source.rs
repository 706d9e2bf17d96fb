use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Alphabet, EntropyBase};

/// Memoryless source: i.i.d. symbols drawn from `pmf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub alphabet: Alphabet,
    pub pmf: Vec<f64>,
    pub seed: u64,
}

impl SourceSpec {
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn uniform(alphabet: Alphabet, seed: u64) -> Self {
        let p = 1.0 / alphabet.size() as f64;
        SourceSpec {
            alphabet,
            pmf: vec![p; alphabet.size()],
            seed,
        }
    }

    pub fn new(alphabet: Alphabet, pmf: Vec<f64>, seed: u64) -> Result<Self> {
        let spec = SourceSpec {
            alphabet,
            pmf,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pmf.len() != self.alphabet.size() {
            return Err(Error::BadDistribution(format!(
                "{} probabilities for an alphabet of {}",
                self.pmf.len(),
                self.alphabet.size()
            )));
        }
        if let Some(p) = self.pmf.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::BadDistribution(format!("invalid probability {p}")));
        }
        let sum: f64 = self.pmf.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::BadDistribution(format!(
                "probabilities sum to {sum}"
            )));
        }
        Ok(())
    }
}

/// `H(X) = -Σ p log p`, per symbol.
pub fn source_entropy(spec: &SourceSpec, base: EntropyBase) -> Result<f64> {
    spec.validate()?;
    let nats: f64 = spec
        .pmf
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    Ok((nats / base.ln()).max(0.0))
}
