use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Mode};
use super::run::Tally;
use super::source::{source_entropy, SourceSpec};
use crate::coding::{build_code, framing_bits, SchemeFormat};
use crate::error::Result;
use crate::types::{weighted_entropy_of_composition, Composition};

/// Averages over one message population (plain messages or their transforms).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideReport {
    pub length: u64,
    /// Mean of `N · H0` over the population.
    pub avg_weighted_entropy: f64,
    /// Standard error of the mean; sampled runs only.
    pub stderr_weighted_entropy: Option<f64>,
    pub distinct_symbols_sum: u64,
    pub avg_distinct_symbols: f64,
    pub payload_bits_sum: u64,
    pub avg_payload_bits: f64,
    pub classes: u64,
    pub classes_below_full_support: u64,
    pub sequences_below_full_support: u64,
    pub fraction_below_full_support: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSide {
    pub scheme_bits_sum: u64,
    pub avg_scheme_bits: f64,
    pub framing_bits_sum: u64,
    pub avg_framing_bits: f64,
    /// Payload + scheme, plus framing when it is charged.
    pub total_bits_sum: u64,
    pub avg_total_bits: f64,
    pub stderr_total_bits: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeComparison {
    pub format: SchemeFormat,
    pub plain: SchemeSide,
    pub shaped: SchemeSide,
    /// `avg_total_bits(shaped) - avg_total_bits(plain)`; negative means
    /// shaping shortened the average compressed message.
    pub total_bits_delta: f64,
    /// Shaped average total below `N`: the uniform-source reference `N·H(X)`
    /// with `H` in base `|A|`.
    pub shaped_below_uniform_reference: bool,
    /// Shaped average total below `N·log2|A|`, the bit count needed to tell
    /// `|A|^N` equiprobable messages apart.
    pub shaped_below_information_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct References {
    /// `N · H(X)` for a uniform source with entropy in base `|A|`; equals `N`.
    pub uniform_reference: f64,
    /// `N · log2 |A|` bits.
    pub information_bound_bits: f64,
    /// `N · H(X)` in the report base, when the source is known.
    pub source_entropy_reference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub messages: u64,
    pub plain: SideReport,
    pub shaped: SideReport,
    pub schemes: Vec<SchemeComparison>,
    pub references: References,
}

/// Neumaier summation.
#[derive(Debug, Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

fn stderr(sum: f64, sum_sq: f64, n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let n = n as f64;
    let var = ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0);
    (var / n).sqrt()
}

struct Side {
    report: SideReport,
    schemes: Vec<(SchemeSide, f64)>,
}

fn side(
    hist: &BTreeMap<Vec<u64>, u64>,
    length: u64,
    config: &ExperimentConfig,
    messages: u64,
) -> Result<Side> {
    let sampled = config.mode == Mode::Sampled;
    let full = config.alphabet.size();
    let mut entropy = Compensated::default();
    let mut entropy_sq = Compensated::default();
    let mut distinct = 0u64;
    let mut payload = 0u64;
    let mut classes_below = 0u64;
    let mut below = 0u64;
    let mut scheme_sums = vec![(0u64, 0u64, 0u64, Compensated::default()); config.formats.len()];

    for (counts, &w) in hist {
        let comp = Composition::new(counts.clone())?;
        let h = weighted_entropy_of_composition(&comp, config.base)?;
        entropy.add(w as f64 * h);
        entropy_sq.add(w as f64 * h * h);
        distinct += w * comp.distinct() as u64;
        if comp.distinct() < full {
            classes_below += 1;
            below += w;
        }
        let table = build_code(&comp)?;
        let payload_bits = table.payload_bits(&comp)?;
        payload += w * payload_bits;
        for (slot, &format) in scheme_sums.iter_mut().zip(&config.formats) {
            let scheme_bits = format.cost(&comp, &table);
            let framing = framing_bits(scheme_bits, payload_bits);
            let total =
                payload_bits + scheme_bits + if config.charge_framing { framing } else { 0 };
            slot.0 += w * scheme_bits;
            slot.1 += w * framing;
            slot.2 += w * total;
            slot.3.add(w as f64 * (total as f64) * (total as f64));
        }
    }

    let n = messages as f64;
    let schemes = scheme_sums
        .into_iter()
        .map(|(scheme, framing, total, total_sq)| {
            let side = SchemeSide {
                scheme_bits_sum: scheme,
                avg_scheme_bits: scheme as f64 / n,
                framing_bits_sum: framing,
                avg_framing_bits: framing as f64 / n,
                total_bits_sum: total,
                avg_total_bits: total as f64 / n,
                stderr_total_bits: sampled
                    .then(|| stderr(total as f64, total_sq.value(), messages)),
            };
            (side, total as f64 / n)
        })
        .collect();

    Ok(Side {
        report: SideReport {
            length,
            avg_weighted_entropy: entropy.value() / n,
            stderr_weighted_entropy: sampled
                .then(|| stderr(entropy.value(), entropy_sq.value(), messages)),
            distinct_symbols_sum: distinct,
            avg_distinct_symbols: distinct as f64 / n,
            payload_bits_sum: payload,
            avg_payload_bits: payload as f64 / n,
            classes: hist.len() as u64,
            classes_below_full_support: classes_below,
            sequences_below_full_support: below,
            fraction_below_full_support: below as f64 / n,
        },
        schemes,
    })
}

pub(crate) fn summarize(
    tally: &Tally,
    config: &ExperimentConfig,
    source: Option<&SourceSpec>,
) -> Result<ExperimentReport> {
    let plain = side(&tally.plain, config.length, config, tally.messages)?;
    let shaped = side(
        &tally.shaped,
        config.length + config.extra,
        config,
        tally.messages,
    )?;

    let uniform_reference = config.length as f64;
    let information_bound_bits = config.length as f64 * (config.alphabet.size() as f64).log2();
    let schemes = config
        .formats
        .iter()
        .zip(plain.schemes)
        .zip(shaped.schemes)
        .map(|((&format, (p, p_avg)), (s, s_avg))| SchemeComparison {
            format,
            plain: p,
            shaped: s,
            total_bits_delta: s_avg - p_avg,
            shaped_below_uniform_reference: s_avg < uniform_reference,
            shaped_below_information_bound: s_avg < information_bound_bits,
        })
        .collect();
    let source_entropy_reference = match source {
        Some(spec) => Some(config.length as f64 * source_entropy(spec, config.base)?),
        None => None,
    };

    Ok(ExperimentReport {
        config: config.clone(),
        messages: tally.messages,
        plain: plain.report,
        shaped: shaped.report,
        schemes,
        references: References {
            uniform_reference,
            information_bound_bits,
            source_entropy_reference,
        },
    })
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Flat `(metric, value)` rows.
    pub fn metric_rows(&self) -> Vec<(String, String)> {
        let mut rows: Vec<(String, String)> = Vec::new();
        let mut put = |k: String, v: String| rows.push((k, v));
        let c = &self.config;
        put("mode".into(), c.mode.to_string());
        put("n".into(), c.length.to_string());
        put("k".into(), c.extra.to_string());
        put("alphabet".into(), c.alphabet.size().to_string());
        put("base".into(), c.base.value().to_string());
        if c.mode == Mode::Sampled {
            put("seed".into(), c.seed.to_string());
        }
        put("charge_framing".into(), c.charge_framing.to_string());
        put("messages".into(), self.messages.to_string());
        for (name, s) in [("plain", &self.plain), ("shaped", &self.shaped)] {
            put(format!("{name}.length"), s.length.to_string());
            put(
                format!("{name}.avg_weighted_entropy"),
                s.avg_weighted_entropy.to_string(),
            );
            if let Some(e) = s.stderr_weighted_entropy {
                put(format!("{name}.stderr_weighted_entropy"), e.to_string());
            }
            put(
                format!("{name}.avg_distinct_symbols"),
                s.avg_distinct_symbols.to_string(),
            );
            put(
                format!("{name}.distinct_symbols_exact"),
                format!("{}/{}", s.distinct_symbols_sum, self.messages),
            );
            put(
                format!("{name}.avg_payload_bits"),
                s.avg_payload_bits.to_string(),
            );
            put(
                format!("{name}.classes_below_full_support"),
                format!("{}/{}", s.classes_below_full_support, s.classes),
            );
            put(
                format!("{name}.sequences_below_full_support"),
                format!("{}/{}", s.sequences_below_full_support, self.messages),
            );
        }
        for sc in &self.schemes {
            let f = sc.format.name();
            for (side, s) in [("plain", &sc.plain), ("shaped", &sc.shaped)] {
                put(
                    format!("{f}.{side}.avg_scheme_bits"),
                    s.avg_scheme_bits.to_string(),
                );
                put(
                    format!("{f}.{side}.avg_framing_bits"),
                    s.avg_framing_bits.to_string(),
                );
                put(
                    format!("{f}.{side}.avg_total_bits"),
                    s.avg_total_bits.to_string(),
                );
                if let Some(e) = s.stderr_total_bits {
                    put(format!("{f}.{side}.stderr_total_bits"), e.to_string());
                }
            }
            put(
                format!("{f}.total_bits_delta"),
                format!("{:+}", sc.total_bits_delta),
            );
            put(
                format!("{f}.shaped_below_uniform_reference"),
                sc.shaped_below_uniform_reference.to_string(),
            );
            put(
                format!("{f}.shaped_below_information_bound"),
                sc.shaped_below_information_bound.to_string(),
            );
        }
        let r = &self.references;
        put(
            "reference.uniform_n_hx_base_a".into(),
            r.uniform_reference.to_string(),
        );
        put(
            "reference.information_bound_bits".into(),
            r.information_bound_bits.to_string(),
        );
        put(
            "reference.source_n_hx".into(),
            r.source_entropy_reference
                .map_or_else(|| "not computable".to_string(), |v| v.to_string()),
        );
        rows
    }
}
