//! Binomial coefficients and colexicographic subset enumeration.

/// `C(n, r)`, zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `r`-subsets of `0..n` as strictly increasing index vectors, in
/// colexicographic order (compare largest elements first).
#[derive(Clone, Debug)]
pub struct Colex {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Colex {
    pub fn new(n: usize, r: usize) -> Self {
        let current = (r <= n).then(|| (0..r).collect());
        Colex { n, current }
    }
}

impl Iterator for Colex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let r = next.len();
        // Smallest position that can move up without colliding with its successor.
        let pos = (0..r).find(|&i| {
            let limit = if i + 1 < r { next[i + 1] } else { self.n };
            next[i] + 1 < limit
        });
        if let Some(i) = pos {
            next[i] += 1;
            for (j, slot) in next.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}
