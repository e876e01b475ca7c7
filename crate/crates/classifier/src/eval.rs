//! Accuracy and confusion measurement, per orientation or per voted part.

use cnn::{CnnError, Network, Scalar};
use rayon::prelude::*;

use crate::dataset::LoadedShard;
use crate::vote::{decide, VoteColumn, VoteMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Every sample scored independently.
    PerInvariant,
    /// The orientations of each variant are aggregated by vote and the
    /// decision is scored once per variant.
    Voted,
}

/// Rows are true classes, columns predictions; both indexed by
/// class code − 1 (so the catch-all class sits at index 9).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Confusion(pub [[u32; 10]; 10]);

impl Confusion {
    pub fn total(&self) -> u64 {
        self.0.iter().flatten().map(|&c| c as u64).sum()
    }

    pub fn correct(&self) -> u64 {
        (0..10).map(|i| self.0[i][i] as u64).sum()
    }

    pub fn accuracy(&self) -> f64 {
        let t = self.total();
        if t == 0 {
            0.0
        } else {
            self.correct() as f64 / t as f64
        }
    }

    /// Fraction of row `true_code`'s mass that landed on `pred_code`.
    pub fn rate(&self, true_code: u8, pred_code: u8) -> f64 {
        let row = &self.0[true_code as usize - 1];
        let total: u32 = row.iter().sum();
        if total == 0 {
            0.0
        } else {
            row[pred_code as usize - 1] as f64 / total as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub mode: EvalMode,
    pub accuracy: f64,
    /// Scored units: samples for per-invariant mode, variants for voted.
    pub units: usize,
    pub confusion: Confusion,
}

fn scores_of<F: Scalar>(net: &Network<F>, shard: &LoadedShard, i: usize) -> Result<Vec<f64>, CnnError> {
    let out = net.forward(&shard.tensor::<F>(i))?;
    Ok(out.iter().map(|v| v.f64()).collect())
}

pub(crate) fn argmax_class(scores: &[f64]) -> u8 {
    let mut best = 0usize;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best as u8 + 1
}

/// Score `net` on a shard. Forward passes run in parallel over samples;
/// the aggregation order is fixed, so results do not depend on threading.
pub fn evaluate<F: Scalar>(
    net: &Network<F>,
    shard: &LoadedShard,
    mode: EvalMode,
) -> Result<EvalReport, CnnError> {
    let all_scores: Vec<Vec<f64>> = (0..shard.len())
        .into_par_iter()
        .map(|i| scores_of(net, shard, i))
        .collect::<Result<_, _>>()?;

    let mut confusion = Confusion([[0; 10]; 10]);
    let units;
    match mode {
        EvalMode::PerInvariant => {
            units = shard.len();
            for (i, scores) in all_scores.iter().enumerate() {
                let truth = shard.samples[i].class;
                let pred = argmax_class(scores);
                confusion.0[truth as usize - 1][pred as usize - 1] += 1;
            }
        }
        EvalMode::Voted => {
            let groups = shard.variant_groups();
            units = groups.len();
            for (truth, _variant, range) in groups {
                let columns = range
                    .map(|i| VoteColumn {
                        class: argmax_class(&all_scores[i]),
                        scores: all_scores[i].clone(),
                    })
                    .collect();
                let decision = decide(&VoteMatrix { columns });
                confusion.0[truth as usize - 1][decision.class as usize - 1] += 1;
            }
        }
    }
    Ok(EvalReport { mode, accuracy: confusion.accuracy(), units, confusion })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_takes_the_lowest_index_on_ties() {
        assert_eq!(argmax_class(&[0.0, 3.0, 3.0, 1.0]), 2);
        assert_eq!(argmax_class(&[5.0; 10]), 1);
    }

    #[test]
    fn confusion_rates_and_accuracy() {
        let mut c = Confusion([[0; 10]; 10]);
        c.0[0][0] = 8;
        c.0[0][3] = 2;
        c.0[6][6] = 5;
        assert_eq!(c.total(), 15);
        assert_eq!(c.correct(), 13);
        assert!((c.accuracy() - 13.0 / 15.0).abs() < 1e-15);
        assert!((c.rate(1, 4) - 0.2).abs() < 1e-15);
        assert_eq!(c.rate(2, 2), 0.0, "empty row rates as zero");
    }
}
