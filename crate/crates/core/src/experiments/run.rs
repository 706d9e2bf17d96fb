//! Message-level drivers.
//!
//! Every metric of a message depends only on its type class, so workers
//! record `(class of m, class of f(m))` into histograms. Histogram merges are
//! exact and commutative, which makes the report independent of how messages
//! were split across threads.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{Execution, ExperimentConfig, Mode};
use super::report::{summarize, ExperimentReport};
use super::source::SourceSpec;
use crate::error::{Error, Result};
use crate::shaping::Shaper;
use crate::types::{composition_of, Sequence, Symbol};

/// Class histograms of a message population and of its transforms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub messages: u64,
    pub plain: BTreeMap<Vec<u64>, u64>,
    pub shaped: BTreeMap<Vec<u64>, u64>,
}

impl Tally {
    pub fn record(&mut self, message: &Sequence, shaped: &Sequence) {
        self.messages += 1;
        *self
            .plain
            .entry(composition_of(message).counts().to_vec())
            .or_default() += 1;
        *self
            .shaped
            .entry(composition_of(shaped).counts().to_vec())
            .or_default() += 1;
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        let (mut big, small) =
            if self.plain.len() + self.shaped.len() >= other.plain.len() + other.shaped.len() {
                (std::mem::take(&mut self), other)
            } else {
                (other, std::mem::take(&mut self))
            };
        big.messages += small.messages;
        for (k, v) in small.plain {
            *big.plain.entry(k).or_default() += v;
        }
        for (k, v) in small.shaped {
            *big.shaped.entry(k).or_default() += v;
        }
        big
    }
}

fn drive<F>(count: u64, exec: Execution, work: F) -> Result<Tally>
where
    F: Fn(u64, &mut Tally) -> Result<()> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count)
                .into_par_iter()
                .try_fold(Tally::default, |mut t, i| {
                    work(i, &mut t)?;
                    Ok(t)
                })
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
        }
        _ => {
            let mut t = Tally::default();
            for i in 0..count {
                work(i, &mut t)?;
            }
            Ok(t)
        }
    }
}

/// The `index`-th sequence of `A^N` in plain lexicographic order.
fn nth_sequence(shaper: &Shaper, mut index: u64) -> Sequence {
    let params = shaper.params();
    let a = params.alphabet.size() as u64;
    let mut symbols = vec![0 as Symbol; params.length as usize];
    for slot in symbols.iter_mut().rev() {
        *slot = (index % a) as Symbol;
        index /= a;
    }
    Sequence::new(params.alphabet, symbols).unwrap()
}

pub fn run_exhaustive(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_exhaustive_with(config, Execution::default())
}

pub fn run_exhaustive_with(config: &ExperimentConfig, exec: Execution) -> Result<ExperimentReport> {
    config.validate()?;
    let shaper = Shaper::with_cap(config.shaping_params()?, config.max_classes)?;
    let population = shaper.source_ordering().population();
    let count = population
        .to_u64()
        .filter(|&n| n <= config.exhaustive_cap)
        .ok_or_else(|| Error::TooLarge {
            population: population.to_string(),
            cap: config.exhaustive_cap,
        })?;
    let tally = drive(count, exec, |i, t| {
        let m = nth_sequence(&shaper, i);
        let f = shaper.transform(&m)?;
        t.record(&m, &f);
        Ok(())
    })?;
    let mut config = config.clone();
    config.mode = Mode::Exhaustive;
    summarize(&tally, &config, None)
}

pub fn run_sampled(config: &ExperimentConfig, spec: &SourceSpec) -> Result<ExperimentReport> {
    run_sampled_with(config, spec, Execution::default())
}

/// Sample `i` draws from a ChaCha8 stream keyed by `(seed, i)`, so the
/// population is the same for any scheduling.
pub fn run_sampled_with(
    config: &ExperimentConfig,
    spec: &SourceSpec,
    exec: Execution,
) -> Result<ExperimentReport> {
    config.validate()?;
    spec.validate()?;
    if spec.alphabet != config.alphabet {
        return Err(Error::BadDistribution(format!(
            "source alphabet {} differs from experiment alphabet {}",
            spec.alphabet.size(),
            config.alphabet.size()
        )));
    }
    let shaper = Shaper::with_cap(config.shaping_params()?, config.max_classes)?;
    let dist = WeightedIndex::new(&spec.pmf).map_err(|e| Error::BadDistribution(e.to_string()))?;
    let length = config.length as usize;
    let tally = drive(config.samples, exec, |i, t| {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(i);
        let symbols: Vec<Symbol> = (0..length)
            .map(|_| dist.sample(&mut rng) as Symbol)
            .collect();
        let m = Sequence::new(spec.alphabet, symbols)?;
        let f = shaper.transform(&m)?;
        t.record(&m, &f);
        Ok(())
    })?;
    let mut config = config.clone();
    config.mode = Mode::Sampled;
    config.seed = spec.seed;
    summarize(&tally, &config, Some(spec))
}
