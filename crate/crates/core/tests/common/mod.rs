//! Independent reference implementations used only by tests.
#![allow(dead_code)]

use leadergame::Graph;
use num::{BigInt, BigRational, One, Zero};
use rand::Rng;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = BigRational::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigRational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != c)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][c] * cofactor_det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Cramer's rule; `None` for a singular system.
pub fn cramer_solve(m: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let det = cofactor_det(m);
    if det.is_zero() {
        return None;
    }
    Some(
        (0..m.len())
            .map(|c| {
                let replaced: Vec<Vec<BigRational>> = m
                    .iter()
                    .zip(b)
                    .map(|(row, bi)| {
                        let mut r = row.clone();
                        r[c] = bi.clone();
                        r
                    })
                    .collect();
                cofactor_det(&replaced) / &det
            })
            .collect(),
    )
}

pub fn laplacian_rat(g: &Graph) -> Vec<Vec<BigRational>> {
    let n = g.n();
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    if i == j {
                        BigRational::from_integer(BigInt::from(g.degree(i).unwrap()))
                    } else if g.has_edge(i, j) {
                        -BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Mean of `(L + diag(b + d))^{-1} d`, via Cramer's rule.
pub fn oracle_outcome(g: &Graph, b: &[usize], d: &[usize]) -> BigRational {
    let mut m = laplacian_rat(g);
    for &v in b.iter().chain(d) {
        m[v - 1][v - 1] += BigRational::one();
    }
    let rhs: Vec<BigRational> = (1..=g.n())
        .map(|v| {
            if d.contains(&v) {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let beta = cramer_solve(&m, &rhs).expect("grounded Laplacian is nonsingular");
    beta.iter().fold(BigRational::zero(), |a, x| a + x) / BigRational::from_integer(g.n().into())
}

pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// False if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

pub fn uf_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut uf = UnionFind::new(n);
    let mut components = n;
    for &(u, v) in edges {
        if uf.union(u - 1, v - 1) {
            components -= 1;
        }
    }
    components <= 1
}

/// Counts spanning trees by checking every `(n-1)`-edge subset for acyclicity.
pub fn brute_force_spanning_trees(g: &Graph) -> u64 {
    let n = g.n();
    if n <= 1 {
        return 1;
    }
    let edges = g.edges();
    let m = edges.len();
    assert!(m <= 24, "edge set too large for brute force");
    let mut count = 0;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut uf = UnionFind::new(n);
        if (0..m)
            .filter(|b| mask >> b & 1 == 1)
            .all(|b| uf.union(edges[b].0 - 1, edges[b].1 - 1))
        {
            count += 1;
        }
    }
    count
}

/// Uniform random graph on `n` vertices, not necessarily connected.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.gen_bool(p) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

/// Nonempty random subset of `1..=n`, sorted.
pub fn random_links<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}
