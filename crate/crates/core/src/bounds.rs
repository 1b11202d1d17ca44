//! Degree bounds for the minor product polynomial and the field-size
//! threshold they give, together with an evaluator for the polynomial.
//!
//! With `G1 = (X | 0)` and `X` a matrix of indeterminates, the product of
//! the nontrivial `2k x 2k` minors of `G_1^c` is a polynomial `P(X)`. The
//! code is MDP iff `P(X) != 0`. `P` is never expanded symbolically; it is
//! only evaluated at points.

use std::sync::Arc;

use serde::Serialize;

use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::gf::{Fe, FieldTower};
use crate::matrix::FieldMatrix;
use crate::mdp::nontrivial_sets;

/// `⌊δ/k⌋ + ⌊δ/(n-k)⌋`.
pub fn l_value(n: usize, k: usize, delta: usize) -> usize {
    delta / k + delta / (n - k)
}

/// Generalized Singleton bound `(n-k)(⌊δ/k⌋ + 1) + δ + 1`.
pub fn singleton_bound(n: usize, k: usize, delta: usize) -> usize {
    (n - k) * (delta / k + 1) + delta + 1
}

/// Column distance bound `(n-k)(j+1) + 1`.
pub fn column_bound(n: usize, k: usize, j: usize) -> usize {
    (n - k) * (j + 1) + 1
}

/// Pairs `(i, j)` with `i + j = 2k` and the given ranges.
fn pairs(k: usize, i_range: std::ops::RangeInclusive<usize>, j_lo: usize, j_hi: usize) -> Vec<(usize, usize)> {
    i_range
        .filter_map(|i| {
            let j = (2 * k).checked_sub(i)?;
            (j_lo..=j_hi).contains(&j).then_some((i, j))
        })
        .collect()
}

/// Total degree of `P(X)`: sum over `i + j = 2k`, `i <= k <= j <= n` of
/// `C(n,i) C(n,j) (j - k)`.
pub fn d_total(n: usize, k: usize) -> u128 {
    pairs(k, 0..=k, k, n)
        .into_iter()
        .map(|(i, j)| binomial(n as u64, i as u64) * binomial(n as u64, j as u64) * (j - k) as u128)
        .sum()
}

/// Bound on the degree of any single variable of `P(X)` for `G0` in
/// systematic form: sum over `i + j = 2k`, `i <= k - 1`, `k + 1 <= j <= n` of
/// `C(n-1,i) C(n-1,j-1)`.
pub fn d_individual(n: usize, k: usize) -> u128 {
    if k == 0 {
        return 0;
    }
    let n1 = (n - 1) as u64;
    pairs(k, 0..=k - 1, k + 1, n)
        .into_iter()
        .map(|(i, j)| binomial(n1, i as u64) * binomial(n1, (j - 1) as u64))
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub singleton: usize,
    /// `(n-k)(j+1)+1` for `j = 0..=L`.
    pub column_bounds: Vec<usize>,
    pub d_total: u128,
    pub d_individual: u128,
    /// Any `q` at or above this admits an MDP code with `G0` systematic.
    pub q_threshold: u128,
}

pub fn bound_report(n: usize, k: usize, delta: usize) -> Result<BoundReport> {
    if k == 0 || k >= n {
        return Err(Error::Parameter(format!("need 1 <= k < n, got n = {n}, k = {k}")));
    }
    let l = l_value(n, k, delta);
    let d_ind = d_individual(n, k);
    Ok(BoundReport {
        n,
        k,
        delta,
        l,
        singleton: singleton_bound(n, k, delta),
        column_bounds: (0..=l).map(|j| column_bound(n, k, j)).collect(),
        d_total: d_total(n, k),
        d_individual: d_ind,
        q_threshold: d_ind + 1,
    })
}

/// One factor `P_{I,J}(X)` of the product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorFactor {
    /// 0-based columns of `G_1^c`.
    pub cols: Vec<usize>,
    /// `|J| - k`, the homogeneous degree of the factor.
    pub excess: usize,
    pub value: Fe,
}

fn check_shapes(g0: &FieldMatrix, x: &FieldMatrix) -> Result<(usize, usize)> {
    let (k, n) = (g0.rows(), g0.cols());
    if k == 0 || k >= n || x.rows() != k || x.cols() != n - k {
        return Err(Error::Usage(format!(
            "X must be {k}x{} for a {k}x{n} G0, got {}x{}",
            n.saturating_sub(k),
            x.rows(),
            x.cols()
        )));
    }
    if **g0.tower() != **x.tower() {
        return Err(Error::Usage("G0 and X over different towers".into()));
    }
    Ok((n, k))
}

/// `G_1^c = [[G0, (X | 0)], [0, G0]]`.
pub fn g1c_matrix(g0: &FieldMatrix, x: &FieldMatrix) -> Result<FieldMatrix> {
    let (n, k) = check_shapes(g0, x)?;
    let tower: Arc<FieldTower> = g0.tower().clone();
    let mut m = FieldMatrix::zeros(tower, 2 * k, 2 * n);
    m.set_block(0, 0, g0)?;
    m.set_block(0, n, x)?;
    m.set_block(k, n, g0)?;
    Ok(m)
}

/// Every factor of `P(X)` evaluated at `X`, in colex order of the columns.
pub fn minor_factors(g0: &FieldMatrix, x: &FieldMatrix) -> Result<Vec<MinorFactor>> {
    let (n, k) = check_shapes(g0, x)?;
    let m = g1c_matrix(g0, x)?;
    let rows: Vec<usize> = (0..2 * k).collect();
    nontrivial_sets(n, k, 1)
        .map(|set| {
            let cols = set.zero_based();
            let in_j = cols.iter().filter(|&&c| c >= n).count();
            let value = m.submatrix(&rows, &cols)?.det()?;
            Ok(MinorFactor {
                cols,
                excess: in_j - k,
                value,
            })
        })
        .collect()
}

/// `P(X)` at a point. Without `include_trivial` the constant factors with
/// `|I| = |J| = k` are left out.
pub fn minor_product_eval(g0: &FieldMatrix, x: &FieldMatrix, include_trivial: bool) -> Result<Fe> {
    let t = g0.tower().clone();
    Ok(minor_factors(g0, x)?
        .iter()
        .filter(|f| include_trivial || f.excess > 0)
        .fold(t.one(), |acc, f| t.mul(&acc, &f.value)))
}

/// Checks `P(tX) = t^{d(n,k)} P(X)` with or without the degree-0 factors.
pub fn homogeneity_check(g0: &FieldMatrix, x: &FieldMatrix, scalar: &Fe, include_trivial: bool) -> Result<bool> {
    if scalar.is_zero() {
        return Err(Error::Domain("homogeneity scalar must be nonzero".into()));
    }
    let (n, k) = check_shapes(g0, x)?;
    let tower = g0.tower().clone();
    let tx = FieldMatrix::from_fn(tower.clone(), x.rows(), x.cols(), |r, c| {
        tower.mul(scalar, &x.get(r, c))
    });
    let lhs = minor_product_eval(g0, &tx, include_trivial)?;
    let rhs = tower.mul(
        &tower.pow(scalar, d_total(n, k)),
        &minor_product_eval(g0, x, include_trivial)?,
    );
    Ok(lhs == rhs)
}

/// An assignment of `X` under which the single factor on `cols` is nonzero:
/// pick `i = |I|` rows on which `(G0)_I` is invertible, and put ones at
/// positions `(r, s)` pairing the remaining `k - i` rows with the first
/// `k - i` chosen `X`-columns. Everything else is zero.
pub fn nonvanishing_assignment(g0: &FieldMatrix, cols: &[usize]) -> Result<FieldMatrix> {
    let (k, n) = (g0.rows(), g0.cols());
    let tower = g0.tower().clone();
    let i_cols: Vec<usize> = cols.iter().copied().filter(|&c| c < n).collect();
    let x_cols: Vec<usize> = cols
        .iter()
        .filter(|&&c| c >= n && c < 2 * n - k)
        .map(|&c| c - n)
        .collect();
    let need = k - i_cols.len();
    if x_cols.len() < need {
        return Err(Error::Usage("column set is not a nontrivial selection".into()));
    }
    let rows = crate::combin::Colex::new(k, i_cols.len())
        .find(|r| {
            g0.submatrix(r, &i_cols)
                .map(|m| !m.det().unwrap().is_zero())
                .unwrap_or(false)
        })
        .ok_or_else(|| Error::Domain("G0 restricted to I has deficient rank".into()))?;
    let others: Vec<usize> = (0..k).filter(|r| !rows.contains(r)).collect();
    let mut x = FieldMatrix::zeros(tower.clone(), k, n - k);
    for (r, s) in others.iter().zip(&x_cols) {
        x.set(*r, *s, tower.one());
    }
    Ok(x)
}

/// Row-reduces a full-rank `k x n` matrix so its first `k` columns form the identity.
pub fn systematic_form(g0: &FieldMatrix) -> Result<FieldMatrix> {
    let (k, n) = (g0.rows(), g0.cols());
    let t = g0.tower().clone();
    let mut m = g0.clone();
    for c in 0..k {
        let pivot = (c..k)
            .find(|&r| !m.get(r, c).is_zero())
            .ok_or_else(|| Error::Domain("leading k x k block is singular".into()))?;
        if pivot != c {
            for cc in 0..n {
                let (a, b) = (m.get(pivot, cc), m.get(c, cc));
                m.set(pivot, cc, b);
                m.set(c, cc, a);
            }
        }
        let inv = t.inv(&m.get(c, c))?;
        m.scale_row(c, &inv);
        for r in 0..k {
            if r == c || m.get(r, c).is_zero() {
                continue;
            }
            let factor = m.get(r, c);
            for cc in 0..n {
                let v = t.sub(&m.get(r, cc), &t.mul(&factor, &m.get(c, cc)));
                m.set(r, cc, v);
            }
        }
    }
    Ok(m)
}

/// Degree of `P` in the single entry `x_{r,s}`, with every other entry of
/// `X` held at `base`. The univariate restriction is recovered factor by
/// factor: each factor is affine in `x_{r,s}`, so two evaluations give it
/// exactly, and the product's degree is the count of non-constant factors
/// (a product of nonzero polynomials has the sum of their degrees).
///
/// Returns `None` when the restriction vanishes identically.
pub fn individual_degree(g0: &FieldMatrix, base: &FieldMatrix, r: usize, s: usize) -> Result<Option<usize>> {
    let t = g0.tower().clone();
    let mut at0 = base.clone();
    at0.set(r, s, t.zero());
    let mut at1 = base.clone();
    at1.set(r, s, t.one());
    let f0 = minor_factors(g0, &at0)?;
    let f1 = minor_factors(g0, &at1)?;
    let mut degree = 0;
    for (a, b) in f0.iter().zip(&f1) {
        // factor(x) = a + (b - a) x
        let slope = t.sub(&b.value, &a.value);
        if slope.is_zero() {
            if a.value.is_zero() {
                return Ok(None);
            }
        } else {
            degree += 1;
        }
    }
    Ok(Some(degree))
}
