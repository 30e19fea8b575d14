//! Recover a follower graph from a rounded `k = 1` outcome table.
//!
//! Candidates are all graphs on `n` vertices in which vertex 1 is adjacent
//! to every other vertex; only the edges among `2..=n` vary, giving
//! `2^C(n-1, 2)` candidates.

use itertools::Itertools;
use num::ToPrimitive;
use rayon::prelude::*;

use crate::game::{outcome_entry, GameError, Strategy};
use crate::graph::Graph;

/// Reference 4-decimal outcome table for a six-follower graph whose
/// vertex 1 is a center node.
pub const REFERENCE_OUTCOME: [[f64; 6]; 6] = [
    [0.5, 0.3889, 0.4455, 0.4712, 0.4712, 0.4455],
    [0.6111, 0.5, 0.5526, 0.5753, 0.5753, 0.5526],
    [0.5545, 0.4474, 0.5, 0.5273, 0.5246, 0.5],
    [0.5288, 0.4247, 0.4727, 0.5, 0.5, 0.4754],
    [0.5288, 0.4247, 0.4754, 0.5, 0.5, 0.4727],
    [0.5545, 0.4474, 0.5, 0.5246, 0.5273, 0.5],
];

/// Half a unit in the fourth decimal place.
pub const FOUR_DECIMAL_TOLERANCE: f64 = 5e-5;

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub candidates_checked: usize,
    pub matches: Vec<Graph>,
}

fn single(v: usize) -> Strategy {
    Strategy {
        index: v - 1,
        vertices: vec![v],
    }
}

fn matches_table(g: &Graph, target: &[Vec<f64>], tol: f64) -> Result<bool, GameError> {
    let n = g.n();
    for i in 1..=n {
        for j in 1..=n {
            let u = outcome_entry(g, &single(i), &single(j))?;
            let approx = u.to_f64().expect("finite rational");
            if (approx - target[i - 1][j - 1]).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every center-at-1 graph whose exact outcome matrix lies within `tol` of
/// `target` entrywise, in order of their rim-edge bitmask.
pub fn reconstruct_center_graphs(
    target: &[Vec<f64>],
    tol: f64,
) -> Result<Reconstruction, GameError> {
    let n = target.len();
    if n < 2 || target.iter().any(|row| row.len() != n) {
        return Err(crate::exact::MatrixError::DimensionMismatch {
            expected: n,
            got: target.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n),
        }
        .into());
    }
    let rim: Vec<(usize, usize)> = (2..=n).tuple_combinations().collect();
    assert!(rim.len() < 24, "rim search space too large");
    let candidates = 1usize << rim.len();
    let hits: Vec<Option<Graph>> = (0..candidates)
        .into_par_iter()
        .map(|mask| {
            let mut edges: Vec<(usize, usize)> = (2..=n).map(|v| (1, v)).collect();
            edges.extend(
                rim.iter()
                    .enumerate()
                    .filter(|(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, &e)| e),
            );
            let g = Graph::new(n, &edges)?;
            Ok(matches_table(&g, target, tol)?.then_some(g))
        })
        .collect::<Result<_, GameError>>()?;
    Ok(Reconstruction {
        candidates_checked: candidates,
        matches: hits.into_iter().flatten().collect(),
    })
}

pub fn reference_target() -> Vec<Vec<f64>> {
    REFERENCE_OUTCOME.iter().map(|r| r.to_vec()).collect()
}
