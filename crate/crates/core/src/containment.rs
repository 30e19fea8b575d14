//! Steady state of the two-leader containment dynamics
//! `x' = -(L + diag(b + d)) x + b y0 + d y1`.
//!
//! Leader `0` sits at the lower state `y0`, leader `1` at `y1 > y0`. The
//! followers converge to `alpha * y0 + beta * y1` where
//! `alpha = (L + diag(b + d))^-1 b` and `beta = (L + diag(b + d))^-1 d`.

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

use crate::exact::{solve_rational_multi, IntegerMatrix, MatrixError, RationalVector};
use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContainmentError {
    #[error("graph not connected")]
    Disconnected,
    #[error("leader {0} is not linked to any follower")]
    NoLinks(u8),
    #[error("link vector has length {got}, graph has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("leader states must satisfy y0 < y1 (got y0 = {y0}, y1 = {y1})")]
    LeaderOrder { y0: String, y1: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Which followers each leader is wired to (0/1 indicators, 0-based slots).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaderLinks {
    leader0: Vec<bool>,
    leader1: Vec<bool>,
}

impl LeaderLinks {
    pub fn from_indicators(
        leader0: Vec<bool>,
        leader1: Vec<bool>,
    ) -> Result<Self, ContainmentError> {
        if leader0.len() != leader1.len() {
            return Err(ContainmentError::DimensionMismatch {
                expected: leader0.len(),
                got: leader1.len(),
            });
        }
        Ok(LeaderLinks { leader0, leader1 })
    }

    /// Links from 1-based follower lists.
    pub fn from_vertices(
        n: usize,
        leader0: &[usize],
        leader1: &[usize],
    ) -> Result<Self, ContainmentError> {
        let indicator = |vs: &[usize]| -> Result<Vec<bool>, ContainmentError> {
            let mut out = vec![false; n];
            for &v in vs {
                if v == 0 || v > n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n }.into());
                }
                out[v - 1] = true;
            }
            Ok(out)
        };
        Self::from_indicators(indicator(leader0)?, indicator(leader1)?)
    }

    pub fn len(&self) -> usize {
        self.leader0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leader0.is_empty()
    }

    pub fn leader0(&self) -> &[bool] {
        &self.leader0
    }

    pub fn leader1(&self) -> &[bool] {
        &self.leader1
    }

    /// The same links with the leaders' roles exchanged.
    pub fn swapped(&self) -> Self {
        LeaderLinks {
            leader0: self.leader1.clone(),
            leader1: self.leader0.clone(),
        }
    }

    fn check(&self, g: &Graph) -> Result<(), ContainmentError> {
        if self.len() != g.n() {
            return Err(ContainmentError::DimensionMismatch {
                expected: g.n(),
                got: self.len(),
            });
        }
        Ok(())
    }

    fn require_nonempty(&self) -> Result<(), ContainmentError> {
        if !self.leader0.contains(&true) {
            return Err(ContainmentError::NoLinks(0));
        }
        if !self.leader1.contains(&true) {
            return Err(ContainmentError::NoLinks(1));
        }
        Ok(())
    }
}

fn indicator_ints(v: &[bool]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(u8::from(x))).collect()
}

/// Static leader states, `y0 < y1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaderStates {
    y0: BigRational,
    y1: BigRational,
}

impl LeaderStates {
    pub fn new(y0: BigRational, y1: BigRational) -> Result<Self, ContainmentError> {
        if y0 >= y1 {
            return Err(ContainmentError::LeaderOrder {
                y0: y0.to_string(),
                y1: y1.to_string(),
            });
        }
        Ok(LeaderStates { y0, y1 })
    }

    pub fn from_integers(y0: i64, y1: i64) -> Result<Self, ContainmentError> {
        Self::new(
            BigRational::from_integer(y0.into()),
            BigRational::from_integer(y1.into()),
        )
    }

    pub fn y0(&self) -> &BigRational {
        &self.y0
    }

    pub fn y1(&self) -> &BigRational {
        &self.y1
    }

    pub fn spread(&self) -> BigRational {
        &self.y1 - &self.y0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexWeights {
    pub alpha: RationalVector,
    pub beta: RationalVector,
}

/// `L + diag(b + d)`.
pub fn grounded(g: &Graph, links: &LeaderLinks) -> Result<IntegerMatrix, ContainmentError> {
    links.check(g)?;
    let diag: Vec<BigInt> = links
        .leader0
        .iter()
        .zip(&links.leader1)
        .map(|(&b, &d)| BigInt::from(u8::from(b) + u8::from(d)))
        .collect();
    Ok(g.laplacian().add_diagonal(&diag)?)
}

pub fn convex_weights(g: &Graph, links: &LeaderLinks) -> Result<ConvexWeights, ContainmentError> {
    links.check(g)?;
    if !g.is_connected() {
        return Err(ContainmentError::Disconnected);
    }
    links.require_nonempty()?;
    let m = grounded(g, links)?;
    let mut cols = solve_rational_multi(
        &m,
        &[
            indicator_ints(&links.leader0),
            indicator_ints(&links.leader1),
        ],
    )?;
    let beta = cols.pop().expect("two columns");
    let alpha = cols.pop().expect("two columns");
    Ok(ConvexWeights { alpha, beta })
}

/// Limit `alpha * y0 + beta * y1` of every follower.
pub fn steady_state(
    g: &Graph,
    links: &LeaderLinks,
    ys: &LeaderStates,
) -> Result<RationalVector, ContainmentError> {
    let w = convex_weights(g, links)?;
    Ok(w.alpha
        .iter()
        .zip(&w.beta)
        .map(|(a, b)| a * &ys.y0 + b * &ys.y1)
        .collect())
}

/// `(U0, U1)`: mean distance of the followers' limits from each leader.
pub fn payoffs(
    g: &Graph,
    links: &LeaderLinks,
    ys: &LeaderStates,
) -> Result<(BigRational, BigRational), ContainmentError> {
    let w = convex_weights(g, links)?;
    let n = BigRational::from_integer(g.n().into());
    let spread = ys.spread();
    let mean = |v: &[BigRational]| v.iter().fold(BigRational::zero(), |acc, x| acc + x) / &n;
    Ok((&spread * mean(&w.beta), &spread * mean(&w.alpha)))
}

/// Mean of `beta`, i.e. the normalised payoff of leader 0.
pub fn mean_beta(g: &Graph, links: &LeaderLinks) -> Result<BigRational, ContainmentError> {
    let w = convex_weights(g, links)?;
    let sum = w.beta.iter().fold(BigRational::zero(), |acc, x| acc + x);
    Ok(sum / BigRational::from_integer(g.n().into()))
}

pub(crate) fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}
