//! Invariant suite run against a single follower graph.
//!
//! Each check reports pass/fail plus the first counterexample found.

use itertools::Itertools;
use num::{BigInt, BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::containment::{convex_weights, half, payoffs, LeaderLinks, LeaderStates};
use crate::exact::{
    adjugate_int, determinant_int, inverse_rational, is_positive_definite, spanning_tree_count,
};
use crate::game::{
    adjugate_column_total, compare_half, m_ij, nash_equilibria, neighborhood_dominance,
    outcome_matrix, saddle_scan, se_set, shortcut_optimal, GameError, OutcomeMatrix, Shortcut,
};
use crate::graph::Graph;
use crate::sim::{simulate, steady_state_error, symmetry_residual, SimConfig};

/// Simulated steady states and symmetry residuals must land within this.
pub const SIM_TOLERANCE: f64 = 1e-6;
/// Exhaustive principal-submatrix checks up to this many vertices.
const EXHAUSTIVE_SUBSETS_MAX_N: usize = 10;
const RANDOM_LINK_TRIALS: usize = 8;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct VerifyReport {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

impl VerifyReport {
    pub fn input_gate_failed(&self) -> bool {
        self.checks
            .first()
            .is_some_and(|c| c.name == "connected" && !c.passed)
    }
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn record(&mut self, name: &str, failure: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: failure.is_none(),
            counterexample: failure,
        });
    }
}

fn first_failure<I, F>(items: I, mut fail: F) -> Option<String>
where
    I: IntoIterator,
    F: FnMut(I::Item) -> Option<String>,
{
    items.into_iter().find_map(&mut fail)
}

fn random_links<R: Rng>(n: usize, rng: &mut R) -> LeaderLinks {
    let mut pick = || loop {
        let v: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        if v.contains(&true) {
            return v;
        }
    };
    let b = pick();
    let d = pick();
    LeaderLinks::from_indicators(b, d).expect("equal lengths")
}

/// Structural checks on an outcome matrix (any `k`).
fn game_checks(suite: &mut Suite, u: &OutcomeMatrix) {
    let size = u.size();
    let one = BigRational::one();
    let label = |i: usize| format!("{:?}", u.strategies[i].vertices);
    suite.record(
        &format!("k{}-involution", u.k),
        first_failure((0..size).cartesian_product(0..size), |(i, j)| {
            (u.get(i, j) + u.get(j, i) != one).then(|| {
                format!(
                    "u[{}][{}] + u[{}][{}] != 1",
                    label(i),
                    label(j),
                    label(j),
                    label(i)
                )
            })
        }),
    );
    suite.record(
        &format!("k{}-diagonal-half", u.k),
        first_failure(0..size, |i| {
            (*u.get(i, i) != half()).then(|| format!("u[{0}][{0}] = {1}", label(i), u.get(i, i)))
        }),
    );
    let report = nash_equilibria(u);
    let bounds_ok = report.lower_value <= half() && half() <= report.upper_value;
    suite.record(
        &format!("k{}-value-bounds", u.k),
        (!bounds_ok).then(|| format!("lower {} upper {}", report.lower_value, report.upper_value)),
    );
    suite.record(
        &format!("k{}-security-symmetry", u.k),
        (report.row_security != report.column_security).then(|| {
            format!(
                "rows {:?} vs columns {:?}",
                report.row_security, report.column_security
            )
        }),
    );
    let value_fail = if report.nash_pairs.is_empty() {
        None
    } else if report.nash_value != Some(half())
        || report.upper_value != half()
        || report.lower_value != half()
    {
        Some(format!(
            "nash value {:?}",
            report.nash_value.as_ref().map(ToString::to_string)
        ))
    } else {
        None
    };
    suite.record(&format!("k{}-nash-value-half", u.k), value_fail);
    let scan = saddle_scan(u);
    suite.record(
        &format!("k{}-nash-matches-saddle-scan", u.k),
        (scan != report.nash_pairs).then(|| {
            format!(
                "security product {:?} vs scan {:?}",
                report.nash_pairs, scan
            )
        }),
    );
}

/// Runs every invariant that applies to `g`. Game checks run for `k = 1`
/// and, if different, for the requested `k` too.
pub fn run_suite(
    g: &Graph,
    k: usize,
    seed: u64,
    cap: usize,
    sim: &SimConfig,
) -> Result<VerifyReport, GameError> {
    let n = g.n();
    let mut suite = Suite { checks: Vec::new() };
    let connected = g.is_connected();
    suite.record(
        "connected",
        (!connected).then(|| "graph not connected".to_string()),
    );
    if !connected {
        return Ok(VerifyReport {
            n,
            k,
            seed,
            checks: suite.checks,
            all_passed: false,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Laplacian and matrix-tree identities.
    let l = g.laplacian();
    suite.record(
        "laplacian-row-sums-zero",
        first_failure(l.row_sums().into_iter().enumerate(), |(i, s)| {
            (!s.is_zero()).then(|| format!("row {} sums to {s}", i + 1))
        }),
    );
    suite.record(
        "laplacian-symmetric-degree-diagonal",
        first_failure(1..=n, |v| {
            let deg = BigInt::from(g.degree(v).expect("vertex in range"));
            (l[(v - 1, v - 1)] != deg || !l.is_symmetric()).then(|| format!("vertex {v}"))
        }),
    );
    let tau = spanning_tree_count(g);
    let adj_l = adjugate_int(&l);
    suite.record(
        "matrix-tree-cofactors-equal",
        first_failure((0..n).cartesian_product(0..n), |(r, c)| {
            (adj_l[(r, c)] != tau).then(|| {
                format!(
                    "adj L[{}][{}] = {} != tau = {tau}",
                    r + 1,
                    c + 1,
                    adj_l[(r, c)]
                )
            })
        }),
    );
    suite.record(
        "grounded-determinant-equals-tau",
        first_failure(0..n, |i| {
            let d = determinant_int(&l.add_unit_diagonal(i));
            (d != tau).then(|| format!("det(L + e{0}e{0}^T) = {d}", i + 1))
        }),
    );
    let subsets: Vec<Vec<usize>> = if n <= EXHAUSTIVE_SUBSETS_MAX_N {
        (1..(1usize << n) - 1)
            .map(|mask| (0..n).filter(|b| mask >> b & 1 == 1).collect())
            .collect()
    } else {
        (0..200)
            .map(|_| loop {
                let keep: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                if !keep.is_empty() && keep.len() < n {
                    break keep;
                }
            })
            .collect()
    };
    suite.record(
        "principal-submatrix-pd-nonnegative-inverse",
        first_failure(&subsets, |keep| {
            let sub = l.principal_submatrix(keep).expect("ascending indices");
            let ok = is_positive_definite(&sub)
                && inverse_rational(&sub)
                    .is_ok_and(|inv| inv.iter().flatten().all(|x| !x.is_negative()));
            (!ok).then(|| format!("keep {:?}", keep.iter().map(|i| i + 1).collect::<Vec<_>>()))
        }),
    );

    // Containment weights and payoffs on random links.
    let trials: Vec<LeaderLinks> = (0..RANDOM_LINK_TRIALS)
        .map(|_| random_links(n, &mut rng))
        .collect();
    let ys = LeaderStates::from_integers(-1, 1).expect("ordered");
    suite.record(
        "convex-weights",
        first_failure(&trials, |links| {
            let w = match convex_weights(g, links) {
                Ok(w) => w,
                Err(e) => return Some(e.to_string()),
            };
            let ok = w.alpha.iter().zip(&w.beta).all(|(a, b)| {
                a + b == BigRational::one()
                    && a.is_positive()
                    && b.is_positive()
                    && *a < BigRational::one()
            });
            (!ok).then(|| format!("links {links:?}"))
        }),
    );
    suite.record(
        "payoff-sum",
        first_failure(&trials, |links| match payoffs(g, links, &ys) {
            Ok((u0, u1)) => (u0 + u1 != ys.spread()).then(|| format!("links {links:?}")),
            Err(e) => Some(e.to_string()),
        }),
    );
    suite.record(
        "simulated-steady-state",
        first_failure(&trials, |links| {
            let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            match simulate(g, links, &x0, &ys, sim)
                .and_then(|t| steady_state_error(g, links, &ys, &t))
            {
                Ok(err) if err < SIM_TOLERANCE => None,
                Ok(err) => Some(format!("links {links:?}: max error {err:e}")),
                Err(e) => Some(e.to_string()),
            }
        }),
    );

    // k = 1 structure.
    let u1 = outcome_matrix(g, 1, cap)?;
    game_checks(&mut suite, &u1);
    let ordered_pairs: Vec<(usize, usize)> = (1..=n)
        .cartesian_product(1..=n)
        .filter(|(i, j)| i != j)
        .collect();
    suite.record(
        "compare-half-matches-exact",
        first_failure(&ordered_pairs, |&(i, j)| {
            let exact = u1.get(i - 1, j - 1).cmp(&half());
            let fast = compare_half(g, i, j).map_err(|e| e.to_string());
            (fast != Ok(exact)).then(|| format!("({i},{j}): exact {exact:?} vs adjugate {fast:?}"))
        }),
    );
    suite.record(
        "neighborhood-dominance-sound",
        first_failure(&ordered_pairs, |&(i, j)| {
            let class = neighborhood_dominance(g, i, j).ok()?;
            let implied = class.implied_ordering()?;
            let actual = u1.get(i - 1, j - 1).cmp(&half());
            (implied != actual)
                .then(|| format!("({i},{j}): {class:?} but u_ij - 1/2 is {actual:?}"))
        }),
    );
    let n_tau = BigInt::from(n) * &tau;
    suite.record(
        "adjugate-sum-identity",
        first_failure(&ordered_pairs, |&(i, j)| {
            let adj = adjugate_int(&l.add_unit_diagonal(i - 1));
            let col: BigInt = (0..n).map(|r| adj[(r, j - 1)].clone()).sum();
            let (m, fast) = match (m_ij(g, i, j), adjugate_column_total(g, i, j)) {
                (Ok(m), Ok(fast)) => (m, fast),
                (Err(e), _) | (_, Err(e)) => return Some(e.to_string()),
            };
            (col != &n_tau + &m || fast != col)
                .then(|| format!("({i},{j}): column sum {col}, n*tau + M = {}", &n_tau + &m))
        }),
    );
    let report1 = nash_equilibria(&u1);
    let security: Vec<usize> = report1.security_set().iter().map(|i| i + 1).collect();
    let se = se_set(g)?;
    suite.record(
        "se-set-equals-security-set",
        (se != security).then(|| format!("S_e {se:?} vs security {security:?}")),
    );
    let nash_vertices: Vec<(usize, usize)> = report1
        .nash_pairs
        .iter()
        .map(|&(i, j)| (i + 1, j + 1))
        .collect();
    let shortcut = shortcut_optimal(g);
    let claimed = shortcut.claimed_pairs(n);
    let shortcut_fail = match &shortcut {
        Shortcut::AllPairs => {
            (claimed != nash_vertices).then(|| "circulant but not every pair is Nash".to_string())
        }
        _ => first_failure(&claimed, |p| {
            (!nash_vertices.contains(p)).then(|| format!("claimed pair {p:?} is not Nash"))
        }),
    };
    suite.record("shortcut-agreement", shortcut_fail);
    if shortcut == Shortcut::AllPairs {
        suite.record(
            "all-pairs-Nash",
            (nash_vertices.len() != n * n)
                .then(|| format!("{} of {} pairs", nash_vertices.len(), n * n)),
        );
    }
    if let Shortcut::Centers(cs) = &shortcut {
        suite.record(
            "center-pair-Nash",
            first_failure(cs, |&c| {
                (!nash_vertices.contains(&(c, c))).then(|| format!("center {c}"))
            }),
        );
    }
    suite.record(
        "symmetric-limits",
        first_failure(
            (1..=n).cartesian_product(1..=n),
            |(i, j)| match symmetry_residual(g, i, j, &ys, sim) {
                Ok(r) if r.analytic.is_zero() && r.simulated < SIM_TOLERANCE => None,
                Ok(r) => Some(format!(
                    "({i},{j}): analytic {} simulated {:e}",
                    r.analytic, r.simulated
                )),
                Err(e) => Some(e.to_string()),
            },
        ),
    );

    if k != 1 {
        let uk = outcome_matrix(g, k, cap)?;
        game_checks(&mut suite, &uk);
    }

    let all_passed = suite.checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        n,
        k,
        seed,
        checks: suite.checks,
        all_passed,
    })
}
