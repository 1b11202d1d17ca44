//! MDP verification through the full-size minors of the sliding generator
//! matrix, plus brute-force distance oracles used to cross-check it.
//!
//! A full-size minor of `G_j^c` on columns `t_1 < ... < t_{(j+1)k}`
//! (1-based) can only be nonzero when `t_{sk+1} > sn` for `s = 1..=j`; those
//! are the *nontrivial* minors. The code is MDP exactly when every
//! nontrivial minor of `G_L^c` is nonzero.

use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{compute_degree, sliding_matrix, ConvCode};
use crate::combin::{binomial, Colex};
use crate::error::{Error, Result};
use crate::gf::{Fe, Level};
use crate::matrix::{FieldMatrix, RegularityVerdict};

/// Column selection of a full-size minor of `G_j^c`, stored 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ColumnIndexSet {
    pub j: usize,
    pub indices: Vec<usize>,
}

impl ColumnIndexSet {
    pub fn from_zero_based(j: usize, cols: &[usize]) -> Self {
        ColumnIndexSet {
            j,
            indices: cols.iter().map(|&c| c + 1).collect(),
        }
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.indices.iter().map(|&c| c - 1).collect()
    }

    /// `t_{sk+1} > sn` for `s = 1..=j`.
    pub fn is_nontrivial(&self, n: usize, k: usize) -> bool {
        self.indices.len() == (self.j + 1) * k && (1..=self.j).all(|s| self.indices[s * k] > s * n)
    }

    /// Per-block form: with `I_i` the indices in block `i`, the union of the
    /// first `l + 1` blocks has at most `(l + 1)k` members for every `l`.
    pub fn satisfies_block_form(&self, n: usize, k: usize) -> bool {
        let total = (self.j + 1) * k;
        self.indices.len() == total
            && self.indices.iter().all(|&t| (1..=(self.j + 1) * n).contains(&t))
            && (0..=self.j).all(|l| self.indices.iter().filter(|&&t| t <= (l + 1) * n).count() <= (l + 1) * k)
    }
}

fn nontrivial_zero_based(cols: &[usize], n: usize, k: usize, j: usize) -> bool {
    (1..=j).all(|s| cols[s * k] >= s * n)
}

/// Nontrivial 0-based column sets of `G_j^c` in colex order.
fn nontrivial_cols(n: usize, k: usize, j: usize) -> impl Iterator<Item = Vec<usize>> {
    Colex::new((j + 1) * n, (j + 1) * k).filter(move |c| nontrivial_zero_based(c, n, k, j))
}

/// The nontrivial column index sets of `G_j^c`, colex order.
pub fn nontrivial_sets(n: usize, k: usize, j: usize) -> impl Iterator<Item = ColumnIndexSet> {
    nontrivial_cols(n, k, j).map(move |c| ColumnIndexSet::from_zero_based(j, &c))
}

/// Number of nontrivial column sets of `G_j^c`, by counting block by block:
/// the first `l + 1` blocks hold at most `(l + 1)k` chosen columns.
pub fn nontrivial_count(n: usize, k: usize, j: usize) -> u128 {
    let total = (j + 1) * k;
    let mut ways = vec![0u128; total + 1];
    ways[0] = 1;
    for block in 0..=j {
        let cap = if block == j { total } else { (block + 1) * k };
        let mut next = vec![0u128; total + 1];
        for (have, &w) in ways.iter().enumerate().filter(|(_, w)| **w > 0) {
            for take in 0..=n.min(cap.saturating_sub(have)) {
                next[have + take] += w * binomial(n as u64, take as u64);
            }
        }
        ways = next;
    }
    ways[total]
}

#[derive(Clone, Debug, Default)]
pub struct MdpOptions {
    /// Window to check; defaults to `L`.
    pub j_max: Option<usize>,
    /// Check every window `0..=j_max` instead of only the last.
    pub all_j: bool,
    /// Do not stop at the first zero minor; count all of them.
    pub full_scan: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowScan {
    pub j: usize,
    pub minors_checked: u64,
    /// Number of vanishing minors; exact only in full-scan mode.
    pub zero_minors: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MdpVerdict {
    pub is_mdp: bool,
    /// First vanishing nontrivial minor, present iff `is_mdp` is false.
    pub witness: Option<ColumnIndexSet>,
    pub minors_checked: u64,
    pub windows: Vec<WindowScan>,
    /// Set when the stated degree disagrees with the computed one.
    pub degree_warning: Option<String>,
}

const CHUNK: usize = 4096;

fn scan_window(code: &ConvCode, j: usize, full_scan: bool) -> (WindowScan, Option<ColumnIndexSet>) {
    let sliding = sliding_matrix(code, j);
    let rows: Vec<usize> = (0..sliding.rows()).collect();
    let mut sets = nontrivial_cols(code.n(), code.k(), j);
    let mut scan = WindowScan {
        j,
        minors_checked: 0,
        zero_minors: 0,
    };
    let mut witness = None;
    loop {
        let chunk: Vec<Vec<usize>> = sets.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let nonzero: Vec<bool> = chunk
            .par_iter()
            .map_init(Vec::new, |scratch, cols| sliding.minor_nonzero(&rows, cols, scratch))
            .collect();
        match nonzero.iter().position(|ok| !ok) {
            Some(first) if !full_scan => {
                scan.minors_checked += first as u64 + 1;
                scan.zero_minors += 1;
                witness = Some(ColumnIndexSet::from_zero_based(j, &chunk[first]));
                return (scan, witness);
            }
            first => {
                if witness.is_none() {
                    witness = first.map(|i| ColumnIndexSet::from_zero_based(j, &chunk[i]));
                }
                scan.minors_checked += chunk.len() as u64;
                scan.zero_minors += nonzero.iter().filter(|ok| !**ok).count() as u64;
            }
        }
    }
    (scan, witness)
}

/// Checks the nontrivial minors of `G_{j_max}^c` (or of every window up to
/// it with `all_j`). A zero minor in window `j` means `d_j^c` misses its
/// bound, and meeting the bound at `j` implies it for every smaller window.
pub fn is_mdp(code: &ConvCode, opts: &MdpOptions) -> MdpVerdict {
    let j_max = opts.j_max.unwrap_or_else(|| code.window());
    let degree_warning = match compute_degree(code) {
        Ok(deg) if deg != code.delta() => Some(format!(
            "stated degree {} differs from computed degree {deg}",
            code.delta()
        )),
        Ok(_) => None,
        Err(e) => Some(format!("degree not verified: {e}")),
    };
    let windows: Vec<usize> = if opts.all_j { (0..=j_max).collect() } else { vec![j_max] };
    let mut verdict = MdpVerdict {
        is_mdp: true,
        witness: None,
        minors_checked: 0,
        windows: Vec::new(),
        degree_warning,
    };
    for j in windows {
        let (scan, witness) = scan_window(code, j, opts.full_scan);
        verdict.minors_checked += scan.minors_checked;
        verdict.windows.push(scan);
        if witness.is_some() && verdict.is_mdp {
            verdict.is_mdp = false;
            verdict.witness = witness;
            if !opts.full_scan {
                break;
            }
        }
    }
    verdict
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct G1RankCheck {
    pub rank: usize,
    pub required: usize,
    /// `rank(G1) >= n - k`, necessary for an optimal first column distance.
    pub meets: bool,
    /// `rank(G1) == n - k`, the least rank an MDP code can have.
    pub minimal: bool,
}

pub fn g1_rank_check(code: &ConvCode) -> G1RankCheck {
    let rank = code.g1().rank();
    let required = code.n() - code.k();
    G1RankCheck {
        rank,
        required,
        meets: rank >= required,
        minimal: rank == required,
    }
}

/// MDS property of `(G0 | X)` for `G1 = (X | 0)`; necessary for MDP.
pub fn g0x_mds_check(code: &ConvCode) -> Result<RegularityVerdict> {
    let x = code.x_block()?;
    code.g0().hstack(&x)?.is_mds_matrix()
}

fn hamming_weight(v: &[Fe]) -> usize {
    v.iter().filter(|e| !e.is_zero()).count()
}

/// All message blocks in `F_{q^d}^k`, in canonical index order.
struct BlockSpace<'a> {
    code: &'a ConvCode,
    size: u128,
}

impl<'a> BlockSpace<'a> {
    fn new(code: &'a ConvCode) -> Self {
        let size = code.tower().order(Level::Ext).saturating_pow(code.k() as u32);
        BlockSpace { code, size }
    }

    fn block(&self, mut index: u128) -> Vec<Fe> {
        let t = self.code.tower();
        let qd = t.order(Level::Ext);
        (0..self.code.k())
            .map(|_| {
                let e = t.element(index % qd, Level::Ext).expect("digit in range");
                index /= qd;
                e
            })
            .collect()
    }
}

fn check_budget(space: u128, blocks: usize, budget: u128) -> Result<()> {
    let total = space.checked_pow(blocks as u32).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::Capacity(format!(
            "message space of {total} exceeds the budget of {budget}; try smaller parameters"
        )));
    }
    Ok(())
}

fn add_vec(code: &ConvCode, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let t = code.tower();
    a.iter().zip(b).map(|(x, y)| t.add(x, y)).collect()
}

/// Depth-first search over `u_0 != 0, u_1, ..., u_last` minimising the
/// accumulated weight of `v_t = u_{t-1} G1 + u_t G0`, with `tail` adding
/// `wt(u_last G1)` at the end.
fn min_weight_search(code: &ConvCode, last: usize, tail: bool) -> usize {
    let space = BlockSpace::new(code);
    let zero_prev = vec![Fe::ZERO; code.n()];
    let mut best = usize::MAX;
    #[allow(clippy::too_many_arguments)]
    fn go(
        code: &ConvCode,
        space: &BlockSpace,
        t: usize,
        last: usize,
        tail: bool,
        carry: &[Fe],
        acc: usize,
        best: &mut usize,
    ) {
        let start = if t == 0 { 1 } else { 0 };
        for idx in start..space.size {
            let u = space.block(idx);
            let own = code.g0().mat_vec(&u).expect("block length k");
            let w = acc + hamming_weight(&add_vec(code, carry, &own));
            if w >= *best {
                continue;
            }
            let next_carry = code.g1().mat_vec(&u).expect("block length k");
            if t == last {
                let total = if tail { w + hamming_weight(&next_carry) } else { w };
                *best = (*best).min(total);
            } else {
                go(code, space, t + 1, last, tail, &next_carry, w, best);
            }
        }
    }
    go(code, &space, 0, last, tail, &zero_prev, 0, &mut best);
    best
}

/// `d_j^c`: least weight of `(v_0, ..., v_j) = (u_0, ..., u_j) G_j^c` over
/// `u_0 != 0`, by exhaustive enumeration of at most `budget` messages.
pub fn column_distance_bruteforce(code: &ConvCode, j: usize, budget: u128) -> Result<usize> {
    check_budget(BlockSpace::new(code).size, j + 1, budget)?;
    Ok(min_weight_search(code, j, false))
}

/// Least total weight of `u(z) G(z)` over messages of degree at most
/// `degree_cap` with `u_0 != 0`. An upper bound on `d_free` in general; for
/// an MDP code with `k > n - k = δ` it equals `2(n - k) + 1`.
pub fn free_distance_check(code: &ConvCode, degree_cap: usize, budget: u128) -> Result<usize> {
    let (n, k) = (code.n(), code.k());
    if k <= n - k || code.delta() != n - k {
        return Err(Error::Parameter(format!(
            "free distance check needs k > n - k = delta, got n = {n}, k = {k}, delta = {}",
            code.delta()
        )));
    }
    check_budget(BlockSpace::new(code).size, degree_cap + 1, budget)?;
    Ok(min_weight_search(code, degree_cap, true))
}

/// Scales row `r` of both `G0` and `G1` by `s`.
pub fn scale_generator_row(code: &ConvCode, r: usize, s: &Fe) -> Result<ConvCode> {
    let mut g0: FieldMatrix = code.g0().clone();
    let mut g1 = code.g1().clone();
    g0.scale_row(r, s);
    g1.scale_row(r, s);
    ConvCode::new(code.tower().clone(), code.n(), code.k(), code.delta(), g0, g1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{construct, ConstructOptions};
    use crate::combin::binomial;

    fn closed_form_j1(n: usize, k: usize) -> u128 {
        ((2 * k).saturating_sub(n)..=k)
            .map(|i| binomial(n as u64, i as u64) * binomial(n as u64, (2 * k - i) as u64))
            .sum()
    }

    #[test]
    fn nontrivial_counts() {
        assert_eq!(nontrivial_sets(3, 2, 1).count(), 12);
        assert_eq!(nontrivial_sets(3, 2, 0).count(), 3);
        for (n, k) in [(3, 2), (5, 3), (7, 4), (4, 1), (6, 3)] {
            assert_eq!(nontrivial_sets(n, k, 1).count() as u128, closed_form_j1(n, k));
        }
        for (n, k, j) in [(3, 2, 0), (3, 2, 1), (5, 3, 1), (4, 2, 2), (5, 3, 2), (7, 4, 1)] {
            assert_eq!(nontrivial_count(n, k, j), nontrivial_sets(n, k, j).count() as u128);
        }
        assert_eq!(nontrivial_count(5, 3, 1), 155);
        for s in nontrivial_sets(4, 2, 2) {
            assert!(s.satisfies_block_form(4, 2));
            assert!(s.is_nontrivial(4, 2));
        }
    }

    #[test]
    fn small_family_members_are_mdp() {
        let c = construct(3, 2, &ConstructOptions::default()).unwrap();
        let v = is_mdp(&c, &MdpOptions::default());
        assert!(v.is_mdp);
        assert_eq!(v.minors_checked, 12);
        assert!(v.degree_warning.is_none());
        let c = construct(5, 3, &ConstructOptions::default()).unwrap();
        let v = is_mdp(&c, &MdpOptions::default());
        assert!(v.is_mdp);
        assert_eq!(v.minors_checked, 155);
    }

    #[test]
    fn zero_g1_fails_with_nontrivial_witness() {
        let c = construct(3, 2, &ConstructOptions::default()).unwrap();
        let broken = c.with_g1(FieldMatrix::zeros(c.tower().clone(), 2, 3)).unwrap();
        let v = is_mdp(&broken, &MdpOptions::default());
        assert!(!v.is_mdp);
        let w = v.witness.unwrap();
        assert!(w.is_nontrivial(3, 2));
        let rank = g1_rank_check(&broken);
        assert!(!rank.meets);
        assert!(!g0x_mds_check(&broken).unwrap().holds);
    }

    #[test]
    fn rank_and_mds_checks() {
        let c = construct(7, 4, &ConstructOptions::default()).unwrap();
        let r = g1_rank_check(&c);
        assert!(r.meets && r.minimal);
        assert_eq!(r.rank, 3);
        let c = construct(3, 2, &ConstructOptions::default()).unwrap();
        assert!(g0x_mds_check(&c).unwrap().holds);
    }

    #[test]
    fn distances_of_smallest_member() {
        let c = construct(3, 2, &ConstructOptions::default()).unwrap();
        assert_eq!(column_distance_bruteforce(&c, 0, 1_000_000).unwrap(), 2);
        assert_eq!(column_distance_bruteforce(&c, 1, 1_000_000).unwrap(), 3);
        assert_eq!(free_distance_check(&c, 1, 1_000_000).unwrap(), 3);
        assert!(matches!(
            column_distance_bruteforce(&c, 3, 100),
            Err(Error::Capacity(_))
        ));
    }
}
