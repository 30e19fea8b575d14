//! The zero-sum leader topology game.
//!
//! Each leader wires itself to `k` followers. Leader 0 (row player) wants
//! the followers' mean `beta` weight small, leader 1 (column player) wants
//! it large, so the outcome matrix entry for strategies `(s_i, s_j)` is
//!
//! ```text
//! u_ij = (1/n) * 1^T (L + diag(s_i + s_j))^-1 s_j
//! ```
//!
//! Pure-strategy saddle points of this matrix are exactly the optimal
//! leader topologies. For `k = 1` several structural shortcuts decide
//! `u_ij` versus `1/2` from integer data alone.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use itertools::Itertools;
use num::{BigInt, BigRational, One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::containment::{half, ContainmentError};
use crate::exact::{
    adjugate_column_sum, determinant_int, solve_rational, solve_rational_multi, IntegerMatrix,
    MatrixError,
};
use crate::graph::{Graph, GraphError};

/// Default bound on the number of strategies per leader, `C(n, k)`.
pub const DEFAULT_STRATEGY_CAP: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("graph not connected")]
    Disconnected,
    #[error("k = {k} out of range 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("C({n}, {k}) strategies exceed the cap of {cap}")]
    CapExceeded { n: usize, k: usize, cap: usize },
    #[error("vertices must differ (got {0} twice)")]
    SameVertex(usize),
    #[error("strategy has {got} vertices, expected {expected}")]
    StrategySize { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Containment(#[from] ContainmentError),
}

/// A leader's choice of `k` followers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strategy {
    /// Position in the lexicographic enumeration of k-subsets.
    pub index: usize,
    /// Sorted 1-based follower labels.
    pub vertices: Vec<usize>,
}

impl Strategy {
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut out = vec![false; n];
        for &v in &self.vertices {
            out[v - 1] = true;
        }
        out
    }

    pub fn k(&self) -> usize {
        self.vertices.len()
    }
}

/// `C(n, k)`, or `None` once it exceeds `limit`.
fn binomial_capped(n: usize, k: usize, limit: usize) -> Option<usize> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > limit as u128 {
            return None;
        }
    }
    Some(acc as usize)
}

/// All k-subsets of `1..=n` in lexicographic order of their sorted lists.
pub fn enumerate_strategies(n: usize, k: usize, cap: usize) -> Result<Vec<Strategy>, GameError> {
    if k == 0 || k > n {
        return Err(GameError::KOutOfRange { k, n });
    }
    binomial_capped(n, k, cap).ok_or(GameError::CapExceeded { n, k, cap })?;
    Ok((1..=n)
        .combinations(k)
        .enumerate()
        .map(|(index, vertices)| Strategy { index, vertices })
        .collect())
}

fn single(v: usize) -> Strategy {
    Strategy {
        index: v - 1,
        vertices: vec![v],
    }
}

fn check_strategy(g: &Graph, s: &Strategy) -> Result<(), GameError> {
    for &v in &s.vertices {
        if v == 0 || v > g.n() {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: g.n(),
            }
            .into());
        }
    }
    Ok(())
}

/// `u_ij` without connectivity checks; `laplacian` must be `g`'s.
fn entry_unchecked(
    laplacian: &IntegerMatrix,
    si: &Strategy,
    sj: &Strategy,
) -> Result<BigRational, GameError> {
    let n = laplacian.dim();
    let mut m = laplacian.clone();
    let mut rhs = vec![BigInt::zero(); n];
    for &v in &si.vertices {
        m[(v - 1, v - 1)] += 1;
    }
    for &v in &sj.vertices {
        m[(v - 1, v - 1)] += 1;
        rhs[v - 1] = BigInt::one();
    }
    let beta = solve_rational(&m, &rhs)?;
    let total: BigRational = beta.iter().sum();
    Ok(total / BigRational::from_integer(n.into()))
}

/// One outcome entry: leader 0 plays `si`, leader 1 plays `sj`.
pub fn outcome_entry(g: &Graph, si: &Strategy, sj: &Strategy) -> Result<BigRational, GameError> {
    if !g.is_connected() {
        return Err(GameError::Disconnected);
    }
    check_strategy(g, si)?;
    check_strategy(g, sj)?;
    if si.k() != sj.k() {
        return Err(GameError::StrategySize {
            expected: si.k(),
            got: sj.k(),
        });
    }
    entry_unchecked(&g.laplacian(), si, sj)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeMatrix {
    pub n: usize,
    pub k: usize,
    pub strategies: Vec<Strategy>,
    entries: Vec<Vec<BigRational>>,
}

impl OutcomeMatrix {
    pub fn size(&self) -> usize {
        self.strategies.len()
    }

    /// Entry at 0-based strategy indices.
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    /// Wraps a precomputed table, for callers holding their own entries.
    pub fn from_entries(
        n: usize,
        k: usize,
        strategies: Vec<Strategy>,
        entries: Vec<Vec<BigRational>>,
    ) -> Result<Self, GameError> {
        let size = strategies.len();
        if let Some(bad) = entries
            .iter()
            .map(Vec::len)
            .chain([entries.len()])
            .find(|&l| l != size)
        {
            return Err(MatrixError::DimensionMismatch {
                expected: size,
                got: bad,
            }
            .into());
        }
        Ok(OutcomeMatrix {
            n,
            k,
            strategies,
            entries,
        })
    }
}

/// Full `N x N` outcome matrix, `N = C(n, k)`. Entries are computed
/// independently (in parallel) and assembled in index order.
pub fn outcome_matrix(g: &Graph, k: usize, cap: usize) -> Result<OutcomeMatrix, GameError> {
    if !g.is_connected() {
        return Err(GameError::Disconnected);
    }
    let strategies = enumerate_strategies(g.n(), k, cap)?;
    let laplacian = g.laplacian();
    let size = strategies.len();
    let flat: Vec<BigRational> = (0..size * size)
        .into_par_iter()
        .map(|idx| entry_unchecked(&laplacian, &strategies[idx / size], &strategies[idx % size]))
        .collect::<Result<_, _>>()?;
    let entries = flat.chunks(size).map(<[BigRational]>::to_vec).collect();
    Ok(OutcomeMatrix {
        n: g.n(),
        k,
        strategies,
        entries,
    })
}

/// Values, security sets and equilibria of a matrix game. Strategy
/// references are 0-based indices into the enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameReport {
    /// `min_i max_j u_ij`
    pub upper_value: BigRational,
    /// `max_j min_i u_ij`
    pub lower_value: BigRational,
    /// Minimising rows (leader 0).
    pub row_security: Vec<usize>,
    /// Maximising columns (leader 1).
    pub column_security: Vec<usize>,
    pub nash_pairs: Vec<(usize, usize)>,
    pub nash_value: Option<BigRational>,
}

impl GameReport {
    /// Security set reported for the game; equals `column_security` on
    /// every outcome matrix of this game.
    pub fn security_set(&self) -> &[usize] {
        &self.row_security
    }

    /// Lowest lexicographic Nash pair.
    pub fn canonical_pair(&self) -> Option<(usize, usize)> {
        self.nash_pairs.iter().min().copied()
    }
}

fn row_maxima(u: &OutcomeMatrix) -> Vec<&BigRational> {
    u.entries
        .iter()
        .map(|row| row.iter().max().expect("non-empty matrix"))
        .collect()
}

fn column_minima(u: &OutcomeMatrix) -> Vec<&BigRational> {
    (0..u.size())
        .map(|j| {
            u.entries
                .iter()
                .map(|row| &row[j])
                .min()
                .expect("non-empty matrix")
        })
        .collect()
}

/// Upper/lower values and all security strategies (ties included).
/// `nash_pairs` is left empty.
pub fn game_values(u: &OutcomeMatrix) -> GameReport {
    let maxima = row_maxima(u);
    let minima = column_minima(u);
    let upper = (*maxima.iter().min().expect("non-empty matrix")).clone();
    let lower = (*minima.iter().max().expect("non-empty matrix")).clone();
    GameReport {
        row_security: (0..u.size()).filter(|&i| *maxima[i] == upper).collect(),
        column_security: (0..u.size()).filter(|&j| *minima[j] == lower).collect(),
        upper_value: upper,
        lower_value: lower,
        nash_pairs: Vec::new(),
        nash_value: None,
    }
}

/// Direct scan for pairs with `u_{i*j} <= u_{i*j*} <= u_{ij*}` for all `i, j`.
pub fn saddle_scan(u: &OutcomeMatrix) -> Vec<(usize, usize)> {
    let maxima = row_maxima(u);
    let minima = column_minima(u);
    (0..u.size())
        .cartesian_product(0..u.size())
        .filter(|&(i, j)| u.entries[i][j] == *maxima[i] && u.entries[i][j] == *minima[j])
        .collect()
}

/// Complete report. With equal values the equilibria are the product of
/// the security sets; otherwise the saddle scan runs (and finds none).
pub fn nash_equilibria(u: &OutcomeMatrix) -> GameReport {
    let mut report = game_values(u);
    report.nash_pairs = if report.upper_value == report.lower_value {
        report
            .row_security
            .iter()
            .copied()
            .cartesian_product(report.column_security.iter().copied())
            .collect()
    } else {
        saddle_scan(u)
    };
    report.nash_value = report
        .nash_pairs
        .first()
        .map(|&(i, j)| u.entries[i][j].clone());
    report
}

/// Leader-link pairs that form optimal topologies.
pub fn optimal_topologies(
    g: &Graph,
    k: usize,
    cap: usize,
) -> Result<Vec<(Strategy, Strategy)>, GameError> {
    let u = outcome_matrix(g, k, cap)?;
    Ok(nash_equilibria(&u)
        .nash_pairs
        .into_iter()
        .map(|(i, j)| (u.strategies[i].clone(), u.strategies[j].clone()))
        .collect())
}

/// For `k = 1`: vertices `i` with
/// `||(L + e_i e_i^T)^-1 e_m||_1 <= ||(L + e_m e_m^T)^-1 e_i||_1` for every `m`.
pub fn se_set(g: &Graph) -> Result<Vec<usize>, GameError> {
    if !g.is_connected() {
        return Err(GameError::Disconnected);
    }
    let n = g.n();
    let laplacian = g.laplacian();
    let unit =
        |m: usize| -> Vec<BigInt> { (0..n).map(|r| BigInt::from(u8::from(r == m))).collect() };
    let rhs: Vec<Vec<BigInt>> = (0..n).map(unit).collect();
    // norms[i][m] = 1^T (L + e_i e_i^T)^-1 e_m; the inverse is entrywise
    // nonnegative so the column sum is the 1-norm.
    let norms: Vec<Vec<BigRational>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let cols = solve_rational_multi(&laplacian.add_unit_diagonal(i), &rhs)?;
            Ok(cols.into_iter().map(|c| c.into_iter().sum()).collect())
        })
        .collect::<Result<_, MatrixError>>()?;
    Ok((0..n)
        .filter(|&i| (0..n).all(|m| norms[i][m] <= norms[m][i]))
        .map(|i| i + 1)
        .collect())
}

fn check_pair(g: &Graph, i: usize, j: usize) -> Result<(), GameError> {
    g.neighbors(i)?;
    g.neighbors(j)?;
    if i == j {
        return Err(GameError::SameVertex(i));
    }
    Ok(())
}

/// `1^T adj(L + e_i e_i^T) e_j` for 1-based `i != j`.
pub fn adjugate_column_total(g: &Graph, i: usize, j: usize) -> Result<BigInt, GameError> {
    check_pair(g, i, j)?;
    Ok(adjugate_column_sum(
        &g.laplacian().add_unit_diagonal(i - 1),
        j - 1,
    ))
}

/// Orders `u_ij` against `1/2` for `k = 1` from two integers, without
/// computing `u_ij`: both grounded matrices have determinant `tau(G)`, so
/// only the adjugate column totals need comparing.
pub fn compare_half(g: &Graph, i: usize, j: usize) -> Result<Ordering, GameError> {
    check_pair(g, i, j)?;
    if !g.is_connected() {
        return Err(GameError::Disconnected);
    }
    let forward = adjugate_column_total(g, i, j)?;
    let backward = adjugate_column_total(g, j, i)?;
    Ok(forward.cmp(&backward))
}

/// Determinant of `L` with row `j` replaced by ones and then row and
/// column `i` deleted. Satisfies
/// `1^T adj(L + e_i e_i^T) e_j = n * tau(G) + m_ij`.
pub fn m_ij(g: &Graph, i: usize, j: usize) -> Result<BigInt, GameError> {
    check_pair(g, i, j)?;
    if !g.is_connected() {
        return Err(GameError::Disconnected);
    }
    let laplacian = g.laplacian();
    let ones = vec![BigInt::one(); g.n()];
    let replaced = laplacian.with_row(j - 1, &ones)?;
    Ok(determinant_int(&replaced.minor_matrix(i - 1, i - 1)))
}

/// How `N_i \ {j}` compares with `N_j \ {i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceClass {
    StrictSubset,
    Equal,
    StrictSuperset,
    Incomparable,
}

impl DominanceClass {
    /// The ordering of `u_ij` against `1/2` this class guarantees, if any.
    pub fn implied_ordering(self) -> Option<Ordering> {
        match self {
            DominanceClass::StrictSuperset => Some(Ordering::Less),
            DominanceClass::Equal => Some(Ordering::Equal),
            DominanceClass::StrictSubset => Some(Ordering::Greater),
            DominanceClass::Incomparable => None,
        }
    }
}

pub fn neighborhood_dominance(g: &Graph, i: usize, j: usize) -> Result<DominanceClass, GameError> {
    check_pair(g, i, j)?;
    let mut a: BTreeSet<usize> = g.neighbors(i)?;
    a.remove(&j);
    let mut b: BTreeSet<usize> = g.neighbors(j)?;
    b.remove(&i);
    Ok(match (a.is_superset(&b), b.is_superset(&a)) {
        (true, true) => DominanceClass::Equal,
        (true, false) => DominanceClass::StrictSuperset,
        (false, true) => DominanceClass::StrictSubset,
        (false, false) => DominanceClass::Incomparable,
    })
}

/// Structural answer for `k = 1` that avoids building the outcome matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shortcut {
    /// Circulant labelling: `U = J/2`, every pair is optimal.
    AllPairs,
    /// Center vertices; each `(c, c)` is an optimal pair.
    Centers(Vec<usize>),
    None,
}

impl Shortcut {
    /// 1-based `(leader0, leader1)` vertex pairs the shortcut asserts are Nash.
    pub fn claimed_pairs(&self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Shortcut::AllPairs => (1..=n).cartesian_product(1..=n).collect(),
            Shortcut::Centers(cs) => cs.iter().map(|&c| (c, c)).collect(),
            Shortcut::None => Vec::new(),
        }
    }
}

/// Only meaningful for connected graphs; returns [`Shortcut::None`] otherwise.
pub fn shortcut_optimal(g: &Graph) -> Shortcut {
    if !g.is_connected() {
        Shortcut::None
    } else if g.is_circulant_labeled() {
        Shortcut::AllPairs
    } else {
        match g.center_vertices() {
            cs if cs.is_empty() => Shortcut::None,
            cs => Shortcut::Centers(cs),
        }
    }
}

/// A solved game as the CLI reports it.
#[derive(Debug, Clone)]
pub struct SolvedGame {
    pub strategies: Vec<Strategy>,
    pub report: GameReport,
    /// True when the report came from the circulant shortcut and no
    /// outcome matrix was built.
    pub shortcut_used: bool,
}

pub fn solve_game(g: &Graph, k: usize, cap: usize) -> Result<SolvedGame, GameError> {
    if !g.is_connected() {
        return Err(GameError::Disconnected);
    }
    if k == 1 && shortcut_optimal(g) == Shortcut::AllPairs {
        let n = g.n();
        let strategies: Vec<Strategy> = (1..=n).map(single).collect();
        let all: Vec<usize> = (0..n).collect();
        let report = GameReport {
            upper_value: half(),
            lower_value: half(),
            row_security: all.clone(),
            column_security: all,
            nash_pairs: (0..n).cartesian_product(0..n).collect(),
            nash_value: Some(half()),
        };
        return Ok(SolvedGame {
            strategies,
            report,
            shortcut_used: true,
        });
    }
    let u = outcome_matrix(g, k, cap)?;
    Ok(SolvedGame {
        report: nash_equilibria(&u),
        strategies: u.strategies,
        shortcut_used: false,
    })
}
