//! Orientation voting: classify a part in `n` orientations and aggregate.

use cnn::{Network, Scalar, Tensor4};
use meshkit::TriangleMesh;
use voxelizer::make_invariants;

use crate::error::ClassifyError;
use crate::eval::argmax_class;

/// One orientation's verdict: the arg-max class and the raw output vector
/// it came from (length 10, class code = index + 1).
#[derive(Debug, Clone, PartialEq)]
pub struct VoteColumn {
    pub class: u8,
    pub scores: Vec<f64>,
}

/// One column per classified orientation (21 by default upstream).
#[derive(Debug, Clone, PartialEq)]
pub struct VoteMatrix {
    pub columns: Vec<VoteColumn>,
}

impl VoteMatrix {
    pub fn n(&self) -> usize {
        self.columns.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassDecision {
    pub class: u8,
    /// Columns that voted for the winner.
    pub votes: u32,
    /// Mean raw score the supporting columns gave the winner.
    pub mean_winning_score: f64,
    /// Vote counts per class code − 1; sums to the column count.
    pub histogram: [u32; 10],
    /// True when no single class held a plurality and the raw-score
    /// tie-break picked the winner.
    pub tie_broken: bool,
}

/// Plurality vote over the columns. A tie between classes with equal vote
/// counts goes to the one with the larger sum of its raw scores across all
/// columns (and to the lower class code if even those match exactly).
pub fn decide(votes: &VoteMatrix) -> ClassDecision {
    assert!(votes.n() >= 1, "a vote matrix has at least one column");
    let mut histogram = [0u32; 10];
    for col in &votes.columns {
        assert!((1..=10).contains(&col.class), "class codes are 1..=10");
        assert_eq!(col.scores.len(), 10, "score vectors cover the ten classes");
        histogram[col.class as usize - 1] += 1;
    }
    let top = *histogram.iter().max().expect("ten entries");
    let tied: Vec<u8> = (0..10u8)
        .filter(|&i| histogram[i as usize] == top)
        .map(|i| i + 1)
        .collect();

    let score_sum = |code: u8| -> f64 {
        votes.columns.iter().map(|c| c.scores[code as usize - 1]).sum()
    };
    let (class, tie_broken) = if tied.len() == 1 {
        (tied[0], false)
    } else {
        let mut winner = tied[0];
        let mut best = score_sum(winner);
        for &cand in &tied[1..] {
            let s = score_sum(cand);
            if s > best {
                best = s;
                winner = cand;
            }
        }
        (winner, true)
    };

    let supporters: Vec<&VoteColumn> =
        votes.columns.iter().filter(|c| c.class == class).collect();
    let mean_winning_score = supporters
        .iter()
        .map(|c| c.scores[class as usize - 1])
        .sum::<f64>()
        / supporters.len() as f64;

    ClassDecision {
        class,
        votes: histogram[class as usize - 1],
        mean_winning_score,
        histogram,
        tie_broken,
    }
}

/// Voxelize `mesh` in `n` orientations (the unrotated frame plus `n - 1`
/// seeded random rotations) and classify each one.
pub fn classify_votes<F: Scalar>(
    mesh: &TriangleMesh,
    net: &Network<F>,
    n: usize,
    seed: u64,
) -> Result<VoteMatrix, ClassifyError> {
    let grids = make_invariants(mesh, net.resolution(), n, seed)?;
    let mut columns = Vec::with_capacity(n);
    for grid in &grids {
        let out = net.forward(&Tensor4::<F>::from_voxels(grid))?;
        let scores: Vec<f64> = out.iter().map(|v| v.f64()).collect();
        columns.push(VoteColumn { class: argmax_class(&scores), scores });
    }
    Ok(VoteMatrix { columns })
}
