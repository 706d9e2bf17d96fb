use crate::error::Result;
use crate::shaping::{Shaper, ShapingParams};
use crate::types::{weighted_entropy, Alphabet, EntropyBase, Sequence};

/// One message and its transform with their weighted entropies.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub message: Sequence,
    pub weighted_entropy: f64,
    pub transformed: Sequence,
    pub transformed_weighted_entropy: f64,
}

/// Every message of `A^N` (in entropy-rank order) next to its transform.
pub fn shaping_table(params: &ShapingParams) -> Result<Vec<TableRow>> {
    let shaper = Shaper::new(*params)?;
    let total =
        shaper
            .source_ordering()
            .population_u64()
            .ok_or_else(|| crate::error::Error::TooLarge {
                population: shaper.source_ordering().population().to_string(),
                cap: u64::MAX,
            })?;
    (0..total)
        .map(|r| {
            let message = shaper.source_ordering().unrank_u64(r)?;
            let transformed = shaper.transform(&message)?;
            Ok(TableRow {
                weighted_entropy: weighted_entropy(&message, params.base)?,
                transformed_weighted_entropy: weighted_entropy(&transformed, params.base)?,
                message,
                transformed,
            })
        })
        .collect()
}

/// The 27-row table for `N = 3`, `|A| = 3`, `K = 1`.
pub fn reproduce_table(base: EntropyBase) -> Result<Vec<TableRow>> {
    let params = ShapingParams::new(3, Alphabet::new(3)?, 1)?.with_base(base);
    shaping_table(&params)
}

pub const TABLE_HEADER: [&str; 4] = ["m", "N*H0(m)", "f(m)", "Nt*H0(f(m))"];

impl TableRow {
    /// CSV fields: sequences one-based, entropies to three decimals.
    pub fn csv_fields(&self) -> [String; 4] {
        [
            self.message.to_string(),
            format!("{:.3}", self.weighted_entropy),
            self.transformed.to_string(),
            format!("{:.3}", self.transformed_weighted_entropy),
        ]
    }
}
