//! Independent oracles shared by the integration tests. None of them call
//! the library's elimination, streaming encoder or distance search.
#![allow(dead_code)]

use std::sync::Arc;

use mdpconv::codes::ConvCode;
use mdpconv::combin::Colex;
use mdpconv::gf::{Fe, FieldTower, Level};
use mdpconv::matrix::FieldMatrix;
use rand::Rng;

pub fn tower(p: u16, m: usize, d: usize, seed: u64) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(p, m, d, None, seed).expect("valid tower"))
}

pub fn random_fe<R: Rng>(t: &FieldTower, rng: &mut R) -> Fe {
    t.element(rng.random_range(0..t.order(Level::Ext)), Level::Ext).unwrap()
}

pub fn random_nonzero<R: Rng>(t: &FieldTower, rng: &mut R) -> Fe {
    t.element(rng.random_range(1..t.order(Level::Ext)), Level::Ext).unwrap()
}

/// Entries are zero with probability `zero_prob`, otherwise uniform.
pub fn random_matrix<R: Rng>(
    t: &Arc<FieldTower>,
    rows: usize,
    cols: usize,
    zero_prob: f64,
    rng: &mut R,
) -> FieldMatrix {
    let entries = (0..rows * cols)
        .map(|_| {
            if rng.random_bool(zero_prob) {
                t.zero()
            } else {
                random_fe(t, rng)
            }
        })
        .collect();
    FieldMatrix::new(t.clone(), rows, cols, entries).unwrap()
}

/// All permutations of `0..n` with their signs.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(Vec::new(), true)];
    }
    let mut out = Vec::new();
    for (perm, even) in signed_permutations(n - 1) {
        // insert n-1 at position i: moves it past (n-1-i) elements
        for i in 0..n {
            let mut p = perm.clone();
            p.insert(i, n - 1);
            out.push((p, even == (n - 1 - i).is_multiple_of(2)));
        }
    }
    out
}

pub fn leibniz_det(m: &FieldMatrix) -> Fe {
    let t = m.tower();
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut sum = t.zero();
    for (perm, even) in signed_permutations(n) {
        let term = (0..n).fold(t.one(), |acc, r| t.mul(&acc, &m.get(r, perm[r])));
        sum = if even { t.add(&sum, &term) } else { t.sub(&sum, &term) };
    }
    sum
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &FieldMatrix) -> Fe {
    let t = m.tower();
    let n = m.rows();
    assert_eq!(n, m.cols());
    match n {
        0 => return t.one(),
        1 => return m.get(0, 0),
        _ => {}
    }
    let rows: Vec<usize> = (1..n).collect();
    let mut sum = t.zero();
    for c in 0..n {
        let cols: Vec<usize> = (0..n).filter(|&x| x != c).collect();
        let term = t.mul(&m.get(0, c), &cofactor_det(&m.submatrix(&rows, &cols).unwrap()));
        sum = if c % 2 == 0 {
            t.add(&sum, &term)
        } else {
            t.sub(&sum, &term)
        };
    }
    sum
}

/// Largest order of a nonzero minor.
pub fn minor_rank(m: &FieldMatrix) -> usize {
    (1..=m.rows().min(m.cols()))
        .rev()
        .find(|&r| {
            Colex::new(m.rows(), r).any(|rows| {
                Colex::new(m.cols(), r).any(|cols| !leibniz_det(&m.submatrix(&rows, &cols).unwrap()).is_zero())
            })
        })
        .unwrap_or(0)
}

/// Every square minor of every order is nonzero.
pub fn all_minors_nonzero(m: &FieldMatrix) -> bool {
    (1..=m.rows().min(m.cols())).all(|r| {
        Colex::new(m.rows(), r)
            .all(|rows| Colex::new(m.cols(), r).all(|cols| !leibniz_det(&m.submatrix(&rows, &cols).unwrap()).is_zero()))
    })
}

/// `u G` by explicit sums.
pub fn row_times(t: &FieldTower, u: &[Fe], g: &FieldMatrix) -> Vec<Fe> {
    (0..g.cols())
        .map(|c| (0..g.rows()).fold(t.zero(), |acc, r| t.add(&acc, &t.mul(&u[r], &g.get(r, c)))))
        .collect()
}

/// Coefficients of `u(z) G(z)` by polynomial multiplication.
pub fn poly_encode(code: &ConvCode, msg: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let t = code.tower();
    let n = code.n();
    let mut v = vec![vec![t.zero(); n]; msg.len() + 1];
    for (i, u) in msg.iter().enumerate() {
        for (shift, g) in [(0, code.g0()), (1, code.g1())] {
            let term = row_times(t, u, g);
            for c in 0..n {
                v[i + shift][c] = t.add(&v[i + shift][c], &term[c]);
            }
        }
    }
    v
}

pub fn weight(blocks: &[Vec<Fe>]) -> usize {
    blocks.iter().flatten().filter(|e| !e.is_zero()).count()
}

/// Every vector of `len` entries over `F_{q^d}`, lexicographic by index.
pub fn all_vectors(t: &FieldTower, len: usize) -> Vec<Vec<Fe>> {
    let order = t.order(Level::Ext);
    let total = order.pow(len as u32);
    (0..total)
        .map(|mut idx| {
            (0..len)
                .map(|_| {
                    let e = t.element(idx % order, Level::Ext).unwrap();
                    idx /= order;
                    e
                })
                .collect()
        })
        .collect()
}

/// `d_j^c` by full enumeration of `(u_0, ..., u_j)` with `u_0 != 0`.
pub fn column_distance_oracle(code: &ConvCode, j: usize) -> usize {
    let t = code.tower();
    let blocks = all_vectors(t, code.k());
    let mut best = usize::MAX;
    let mut idx = vec![0usize; j + 1];
    loop {
        if blocks[idx[0]].iter().any(|e| !e.is_zero()) {
            let msg: Vec<Vec<Fe>> = idx.iter().map(|&i| blocks[i].clone()).collect();
            let v = poly_encode(code, &msg);
            best = best.min(weight(&v[..=j]));
        }
        let mut pos = 0;
        loop {
            if pos > j {
                return best;
            }
            idx[pos] += 1;
            if idx[pos] < blocks.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

pub fn binom(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Nontrivial column sets of `G_1^c`: `|I| + |J| = 2k` with `|I| <= k`.
pub fn nontrivial_count_j1(n: usize, k: usize) -> u128 {
    (0..=k)
        .filter(|&i| 2 * k - i <= n)
        .map(|i| binom(n, i) * binom(n, 2 * k - i))
        .sum()
}

/// `d(n, k)` by summing `|J| - k` over every subset pair `(I, J)` of a
/// nontrivial selection.
pub fn total_degree_oracle(n: usize, k: usize) -> u128 {
    let mut sum = 0u128;
    for i_mask in 0u32..1 << n {
        let i = i_mask.count_ones() as usize;
        if i > k {
            continue;
        }
        for j_mask in 0u32..1 << n {
            let j = j_mask.count_ones() as usize;
            if i + j == 2 * k {
                sum += (j - k) as u128;
            }
        }
    }
    sum
}

/// `d'(n, k)` by counting subset pairs where a fixed column is absent from
/// `I`, present in `J`, and `|I| < k`.
pub fn individual_degree_oracle(n: usize, k: usize) -> u128 {
    let mut count = 0u128;
    for i_mask in 0u32..1 << n {
        let i = i_mask.count_ones() as usize;
        if i >= k || i_mask & 1 != 0 {
            continue;
        }
        for j_mask in 0u32..1 << n {
            if j_mask & 1 != 0 && i + j_mask.count_ones() as usize == 2 * k {
                count += 1;
            }
        }
    }
    count
}

/// Monic irreducibility over `F_p` by trial division with every monic
/// polynomial of degree up to half; coefficients constant term first.
pub fn irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for dd in 1..=deg / 2 {
        let count = p.pow(dd as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(dd + 1);
            let mut x = idx;
            for _ in 0..dd {
                g.push(x % p);
                x /= p;
            }
            g.push(1);
            if remainder_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    deg >= 1
}

fn remainder_is_zero(f: &[u64], g: &[u64], p: u64) -> bool {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        for (i, &gc) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - lead * gc % p) % p;
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}
