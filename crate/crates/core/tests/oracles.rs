//! Library results checked against the brute-force references in `common`.

mod common;

use common::{
    brute_force_spanning_trees, cofactor_det, cramer_solve, oracle_outcome, random_graph, rat,
    uf_connected,
};
use leadergame::exact::{adjugate_int, determinant_int, solve_rational, spanning_tree_count};
use leadergame::game::{outcome_matrix, DEFAULT_STRATEGY_CAP};
use leadergame::{Graph, GraphKind, IntegerMatrix};
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_rat(m: &IntegerMatrix) -> Vec<Vec<BigRational>> {
    m.rows()
        .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
        .collect()
}

fn random_matrix<R: Rng>(n: usize, rng: &mut R) -> IntegerMatrix {
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| BigInt::from(rng.gen_range(-4..=4)))
                .collect()
        })
        .collect();
    IntegerMatrix::try_from_rows(rows).unwrap()
}

#[test]
fn bareiss_matches_cofactor_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 0..=6 {
        for _ in 0..30 {
            let m = random_matrix(n, &mut rng);
            assert_eq!(
                BigRational::from_integer(determinant_int(&m)),
                cofactor_det(&to_rat(&m))
            );
        }
    }
}

#[test]
fn exact_solve_matches_cramer() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut solved = 0;
    while solved < 100 {
        let n = rng.gen_range(1..=5);
        let m = random_matrix(n, &mut rng);
        let b: Vec<BigInt> = (0..n)
            .map(|_| BigInt::from(rng.gen_range(-5..=5)))
            .collect();
        let rb: Vec<BigRational> = b.iter().cloned().map(BigRational::from_integer).collect();
        match cramer_solve(&to_rat(&m), &rb) {
            Some(x) => {
                assert_eq!(solve_rational(&m, &b).unwrap(), x);
                solved += 1;
            }
            None => assert!(solve_rational(&m, &b).is_err()),
        }
    }
}

#[test]
fn adjugate_entries_are_signed_minors() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=5 {
        let m = random_matrix(n, &mut rng);
        let adj = adjugate_int(&m);
        let rows = to_rat(&m);
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<BigRational>> = rows
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != j)
                    .map(|(_, row)| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != i)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                assert_eq!(
                    BigRational::from_integer(adj[(i, j)].clone()),
                    cofactor_det(&minor) * rat(sign, 1)
                );
            }
        }
    }
}

#[test]
fn spanning_trees_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..60 {
        let n = rng.gen_range(1..=7);
        let g = random_graph(n, 0.5, &mut rng);
        let expected = if uf_connected(n, &g.edges()) {
            brute_force_spanning_trees(&g)
        } else {
            0
        };
        assert_eq!(
            spanning_tree_count(&g),
            BigInt::from(expected),
            "{:?}",
            g.edges()
        );
    }
    let k5 = Graph::generate(&GraphKind::Complete, 5).unwrap();
    assert_eq!(brute_force_spanning_trees(&k5), 125);
}

#[test]
fn connectivity_matches_union_find() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let n = rng.gen_range(1..=9);
        let g = random_graph(n, rng.gen_range(0.1..0.6), &mut rng);
        assert_eq!(g.is_connected(), uf_connected(n, &g.edges()));
    }
}

#[test]
fn outcome_entries_match_cramer() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..15 {
        let n = rng.gen_range(2..=5);
        let g = Graph::random_connected(n, 0.5, &mut rng);
        let u = outcome_matrix(&g, 1, DEFAULT_STRATEGY_CAP).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                assert_eq!(*u.get(i - 1, j - 1), oracle_outcome(&g, &[i], &[j]));
            }
        }
    }
}

#[test]
fn desk_values() {
    let p3 = Graph::generate(&GraphKind::Path, 3).unwrap();
    assert_eq!(oracle_outcome(&p3, &[1], &[2]), rat(5, 9));
    assert_eq!(oracle_outcome(&p3, &[2], &[1]), rat(4, 9));
    assert_eq!(oracle_outcome(&p3, &[1], &[3]), rat(1, 2));
    let star = Graph::generate(&GraphKind::Star, 4).unwrap();
    assert_eq!(oracle_outcome(&star, &[1], &[2]), rat(5, 12));
    assert_eq!(oracle_outcome(&star, &[2], &[1]), rat(7, 12));
    let p4 = Graph::generate(&GraphKind::Path, 4).unwrap();
    let u = outcome_matrix(&p4, 2, DEFAULT_STRATEGY_CAP).unwrap();
    assert_eq!(*u.get(0, 1), rat(29, 52));
    assert_eq!(*u.get(0, 1), oracle_outcome(&p4, &[1, 2], &[1, 3]));
}
