use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coding::SchemeFormat;
use crate::combinatorics::DEFAULT_MAX_CLASSES;
use crate::error::{Error, Result};
use crate::shaping::ShapingParams;
use crate::types::{Alphabet, EntropyBase};

pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        })
    }
}

/// How message-level work is scheduled. Results do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon's current pool; sequential when built without `parallel`.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub length: u64,
    pub extra: u64,
    pub alphabet: Alphabet,
    pub base: EntropyBase,
    pub mode: Mode,
    pub samples: u64,
    pub formats: Vec<SchemeFormat>,
    pub seed: u64,
    /// Count container framing as part of the compressed message.
    pub charge_framing: bool,
    pub exhaustive_cap: u64,
    pub max_classes: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            length: 3,
            extra: 1,
            alphabet: Alphabet::new(3).unwrap(),
            base: EntropyBase::BITS,
            mode: Mode::Exhaustive,
            samples: 100_000,
            formats: SchemeFormat::ALL.to_vec(),
            seed: 0,
            charge_framing: false,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            max_classes: DEFAULT_MAX_CLASSES,
        }
    }
}

impl ExperimentConfig {
    pub fn exhaustive(length: u64, alphabet: Alphabet, extra: u64) -> Self {
        ExperimentConfig {
            length,
            alphabet,
            extra,
            ..Default::default()
        }
    }

    pub fn sampled(length: u64, alphabet: Alphabet, extra: u64, samples: u64, seed: u64) -> Self {
        ExperimentConfig {
            length,
            alphabet,
            extra,
            samples,
            seed,
            mode: Mode::Sampled,
            ..Default::default()
        }
    }

    pub fn shaping_params(&self) -> Result<ShapingParams> {
        Ok(ShapingParams::new(self.length, self.alphabet, self.extra)?.with_base(self.base))
    }

    pub fn validate(&self) -> Result<()> {
        self.shaping_params()?;
        if self.formats.is_empty() {
            return Err(Error::InvalidConfig("no scheme format selected".into()));
        }
        if self.mode == Mode::Sampled && self.samples == 0 {
            return Err(Error::InvalidConfig(
                "sample count must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Applies one `key = value` setting, as found in config files.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse {value:?}")))
        }
        match key {
            "n" | "length" => self.length = num(key, value)?,
            "k" | "extra" => self.extra = num(key, value)?,
            "a" | "alphabet" => self.alphabet = Alphabet::new(num(key, value)?)?,
            "base" => self.base = EntropyBase::new(num(key, value)?)?,
            "mode" => {
                self.mode = match value {
                    "exhaustive" => Mode::Exhaustive,
                    "sampled" | "sample" => Mode::Sampled,
                    _ => return Err(Error::InvalidConfig(format!("mode: {value:?}"))),
                }
            }
            "samples" => self.samples = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "scheme" | "formats" => {
                self.formats = if value == "both" || value == "all" {
                    SchemeFormat::ALL.to_vec()
                } else {
                    value
                        .split(',')
                        .map(|s| s.trim().parse())
                        .collect::<Result<Vec<_>>>()?
                }
            }
            "charge_framing" | "charge-framing" => self.charge_framing = num(key, value)?,
            "exhaustive_cap" => self.exhaustive_cap = num(key, value)?,
            "max_classes" => self.max_classes = num(key, value)?,
            _ => return Err(Error::InvalidConfig(format!("unknown key {key:?}"))),
        }
        Ok(())
    }
}

/// Parses a flat `key = value` file. Blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i, line.split('#').next().unwrap().trim()))
        .filter(|(_, line)| !line.is_empty())
        .map(|(i, line)| {
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected key = value", i + 1))
            })?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}
