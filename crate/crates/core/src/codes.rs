//! Partial unit-memory convolutional codes `G(z) = G0 + G1 z` built from a
//! Cauchy `G0` over `F_q` and a sparse `G1 = (X | 0)` over `F_{q^d}`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds;
use crate::combin::Colex;
use crate::error::{Error, Result};
use crate::gf::{prime_power_decomposition, smallest_prime_power_at_least, Fe, FieldTower, Level, Poly};
use crate::matrix::FieldMatrix;

/// Evaluation points of a Cauchy matrix; all `n + k` must be distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchySpec {
    /// Column points, one per code coordinate.
    pub alphas: Vec<Fe>,
    /// Row points.
    pub betas: Vec<Fe>,
}

/// `(n, k, δ)` convolutional code with generator `G0 + G1 z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvCode {
    tower: Arc<FieldTower>,
    n: usize,
    k: usize,
    delta: usize,
    g0: FieldMatrix,
    g1: FieldMatrix,
}

impl ConvCode {
    pub fn new(
        tower: Arc<FieldTower>,
        n: usize,
        k: usize,
        delta: usize,
        g0: FieldMatrix,
        g1: FieldMatrix,
    ) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::Parameter(format!("need 0 < k < n, got n = {n}, k = {k}")));
        }
        for (name, g) in [("G0", &g0), ("G1", &g1)] {
            if g.rows() != k || g.cols() != n {
                return Err(Error::Usage(format!(
                    "{name} is {}x{}, expected {k}x{n}",
                    g.rows(),
                    g.cols()
                )));
            }
            if **g.tower() != *tower {
                return Err(Error::Usage(format!("{name} uses a different field tower")));
            }
        }
        if !g0.is_base() {
            return Err(Error::Usage("G0 entries must lie in the base field".into()));
        }
        Ok(ConvCode {
            tower,
            n,
            k,
            delta,
            g0,
            g1,
        })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn g0(&self) -> &FieldMatrix {
        &self.g0
    }

    pub fn g1(&self) -> &FieldMatrix {
        &self.g1
    }

    /// `⌊δ/k⌋ + ⌊δ/(n-k)⌋` for the stated parameters.
    pub fn window(&self) -> usize {
        bounds::l_value(self.n, self.k, self.delta)
    }

    /// Same code with `G1` replaced.
    pub fn with_g1(&self, g1: FieldMatrix) -> Result<Self> {
        Self::new(self.tower.clone(), self.n, self.k, self.delta, self.g0.clone(), g1)
    }

    /// The block `X` of `G1 = (X | 0_{k x k})`; errors when the last `k`
    /// columns of `G1` are not all zero.
    pub fn x_block(&self) -> Result<FieldMatrix> {
        let r = self.n - self.k;
        let rows: Vec<usize> = (0..self.k).collect();
        let tail: Vec<usize> = (r..self.n).collect();
        if !self.g1.submatrix(&rows, &tail)?.is_zero() {
            return Err(Error::Usage("G1 is not of the form (X | 0)".into()));
        }
        self.g1.submatrix(&rows, &(0..r).collect::<Vec<_>>())
    }
}

/// `k x n` Cauchy matrix with entries `1 / (α_j - β_i)`.
pub fn cauchy_matrix(tower: &Arc<FieldTower>, spec: &CauchySpec) -> Result<FieldMatrix> {
    let points: Vec<(String, &Fe)> = spec
        .betas
        .iter()
        .enumerate()
        .map(|(i, b)| (format!("beta[{i}]"), b))
        .chain(spec.alphas.iter().enumerate().map(|(j, a)| (format!("alpha[{j}]"), a)))
        .collect();
    for (i, (name_a, a)) in points.iter().enumerate() {
        for (name_b, b) in &points[i + 1..] {
            if a == b {
                return Err(Error::Domain(format!("Cauchy points {name_a} and {name_b} coincide")));
            }
        }
    }
    let (k, n) = (spec.betas.len(), spec.alphas.len());
    let mut entries = Vec::with_capacity(k * n);
    for b in &spec.betas {
        for a in &spec.alphas {
            entries.push(tower.inv(&tower.sub(a, b))?);
        }
    }
    FieldMatrix::new(tower.clone(), k, n, entries)
}

/// `k x r` matrix with `α^i` at `(i, i)` for `i = 1..=r` (1-based) and zeros elsewhere.
pub fn build_x(tower: &Arc<FieldTower>, k: usize, r: usize, alpha: &Fe) -> Result<FieldMatrix> {
    if r == 0 {
        return Err(Error::Parameter("n - k must be at least 1".into()));
    }
    if k <= r {
        return Err(Error::Parameter(format!(
            "the construction needs k > n - k, got k = {k}, n - k = {r}"
        )));
    }
    if alpha.is_zero() {
        return Err(Error::Domain("alpha must be nonzero".into()));
    }
    let mut x = FieldMatrix::zeros(tower.clone(), k, r);
    let mut power = *alpha;
    for i in 0..r {
        x.set(i, i, power);
        power = tower.mul(&power, alpha);
    }
    Ok(x)
}

/// Extension degree sufficient for the MDP guarantee: `⌈(δ² - 1)/4⌉ + 1`.
pub fn guaranteed_extension_degree(delta: usize) -> usize {
    (delta * delta + 2) / 4 + 1
}

#[derive(Clone, Debug, Default)]
pub struct ConstructOptions {
    /// Base field order; defaults to the smallest prime power `>= n + k`.
    pub q: Option<u64>,
    /// Extension degree; defaults to [`guaranteed_extension_degree`].
    pub d: Option<usize>,
    /// Modulus of `F_{q^d}` over `F_q`; sampled from `seed` when absent.
    pub f: Option<Poly>,
    /// Packed `F_q` values `(betas, alphas)` for the Cauchy matrix.
    pub cauchy_points: Option<(Vec<u16>, Vec<u16>)>,
    pub seed: u64,
}

pub fn check_family(n: usize, k: usize) -> Result<()> {
    if k >= n || n - k == 0 {
        return Err(Error::Parameter(format!("need k < n, got n = {n}, k = {k}")));
    }
    if k <= n - k {
        return Err(Error::Parameter(format!(
            "the construction needs k > n - k, got n = {n}, k = {k}"
        )));
    }
    Ok(())
}

/// Default base field order for `(n, k)`.
pub fn default_q(n: usize, k: usize) -> u64 {
    smallest_prime_power_at_least((n + k) as u64)
}

/// The diagonal-of-powers construction. With the default extension degree
/// every nontrivial minor of the sliding matrix is nonzero, so the result
/// is an `(n, k, n - k)` MDP code.
pub fn construct(n: usize, k: usize, opts: &ConstructOptions) -> Result<ConvCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    construct_with_rng(n, k, opts, &mut rng)
}

/// Same construction with the extension degree forced to `d` and `f` drawn
/// from `seed`. No MDP guarantee for small `d`.
pub fn construct_with_degree(n: usize, k: usize, d: usize, seed: u64) -> Result<ConvCode> {
    let opts = ConstructOptions {
        d: Some(d),
        seed,
        ..Default::default()
    };
    construct(n, k, &opts)
}

pub fn construct_with_rng<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    opts: &ConstructOptions,
    rng: &mut R,
) -> Result<ConvCode> {
    check_family(n, k)?;
    let delta = n - k;
    let q = opts.q.unwrap_or_else(|| default_q(n, k));
    let (p, m) =
        prime_power_decomposition(q).ok_or_else(|| Error::Parameter(format!("q = {q} is not a prime power")))?;
    if q < (n + k) as u64 {
        return Err(Error::Capacity(format!(
            "q = {q} gives fewer than n + k = {} distinct Cauchy points",
            n + k
        )));
    }
    let p = u16::try_from(p).map_err(|_| Error::Capacity(format!("p = {p} too large")))?;
    let d = opts.d.unwrap_or_else(|| guaranteed_extension_degree(delta));
    let tower = Arc::new(FieldTower::with_rng(p, m, d, opts.f.clone(), rng)?);

    let spec = match &opts.cauchy_points {
        Some((betas, alphas)) => {
            if betas.len() != k || alphas.len() != n {
                return Err(Error::Usage(format!("need {k} beta and {n} alpha Cauchy points")));
            }
            let to_fe =
                |v: &[u16]| -> Result<Vec<Fe>> { v.iter().map(|&x| tower.element(x as u128, Level::Base)).collect() };
            CauchySpec {
                betas: to_fe(betas)?,
                alphas: to_fe(alphas)?,
            }
        }
        None => {
            let mut points = tower.enumerate_elements(Level::Base, n + k)?;
            let alphas = points.split_off(k);
            CauchySpec { alphas, betas: points }
        }
    };
    let g0 = cauchy_matrix(&tower, &spec)?;
    let x = build_x(&tower, k, delta, &tower.alpha())?;
    let g1 = x.hstack(&FieldMatrix::zeros(tower.clone(), k, k))?;
    ConvCode::new(tower, n, k, delta, g0, g1)
}

/// Block upper-triangular `(j+1)k x (j+1)n` matrix with `G0` on the
/// diagonal and `G1` on the first superdiagonal.
pub fn sliding_matrix(code: &ConvCode, j: usize) -> FieldMatrix {
    let (n, k) = (code.n, code.k);
    let mut out = FieldMatrix::zeros(code.tower.clone(), (j + 1) * k, (j + 1) * n);
    for b in 0..=j {
        out.set_block(b * k, b * n, &code.g0).expect("block fits");
        if b < j {
            out.set_block(b * k, (b + 1) * n, &code.g1).expect("block fits");
        }
    }
    out
}

/// Degree of the generator: the largest `z`-degree among the full-size
/// minors of `G0 + G1 z`, each recovered by evaluation at `k + 1` points and
/// Newton interpolation.
pub fn compute_degree(code: &ConvCode) -> Result<usize> {
    let t = &code.tower;
    let k = code.k;
    if t.order(Level::Ext) < (k + 1) as u128 {
        return Err(Error::Capacity(format!(
            "field of {} elements is too small to interpolate degree-{k} minors",
            t.order(Level::Ext)
        )));
    }
    let points = t.enumerate_elements(Level::Ext, k + 1)?;
    let evaluated: Vec<FieldMatrix> = points
        .iter()
        .map(|z| {
            FieldMatrix::from_fn(t.clone(), k, code.n, |r, c| {
                t.add(&code.g0.get(r, c), &t.mul(&code.g1.get(r, c), z))
            })
        })
        .collect();
    let rows: Vec<usize> = (0..k).collect();
    let mut best: Option<usize> = None;
    for cols in Colex::new(code.n, k) {
        let values = evaluated
            .iter()
            .map(|g| g.submatrix(&rows, &cols)?.det())
            .collect::<Result<Vec<_>>>()?;
        if let Some(deg) = newton_degree(t, &points, &values) {
            best = Some(best.map_or(deg, |b| b.max(deg)));
        }
    }
    best.ok_or_else(|| Error::Parameter("generator matrix is not of full rank".into()))
}

/// Degree of the interpolating polynomial through `(xs[i], ys[i])`, `None` if zero.
fn newton_degree(t: &FieldTower, xs: &[Fe], ys: &[Fe]) -> Option<usize> {
    let mut coef = ys.to_vec();
    let len = xs.len();
    for level in 1..len {
        for i in (level..len).rev() {
            let num = t.sub(&coef[i], &coef[i - 1]);
            let den = t.sub(&xs[i], &xs[i - level]);
            coef[i] = t.mul(&num, &t.inv(&den).expect("distinct points"));
        }
    }
    coef.iter().rposition(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Arc<FieldTower> {
        Arc::new(FieldTower::new(5, 1, 1, None, 0).unwrap())
    }

    #[test]
    fn cauchy_examples() {
        let t = f5();
        let b = |v: &[u16]| v.iter().map(|&x| t.from_base(x)).collect::<Vec<_>>();
        let spec = CauchySpec {
            betas: b(&[0, 1]),
            alphas: b(&[2, 3, 4]),
        };
        let c = cauchy_matrix(&t, &spec).unwrap();
        assert_eq!(c.entries(), b(&[3, 2, 4, 1, 3, 2]).as_slice());
        let one = cauchy_matrix(
            &t,
            &CauchySpec {
                betas: b(&[0]),
                alphas: b(&[1]),
            },
        )
        .unwrap();
        assert_eq!(one.entries(), &[t.one()]);
        let err = cauchy_matrix(
            &t,
            &CauchySpec {
                betas: b(&[0]),
                alphas: b(&[0, 1]),
            },
        );
        assert!(matches!(err, Err(Error::Domain(msg)) if msg.contains("beta[0]") && msg.contains("alpha[0]")));
    }

    #[test]
    fn x_shapes() {
        let t = Arc::new(FieldTower::new(5, 1, 3, None, 1).unwrap());
        let a = t.alpha();
        let x = build_x(&t, 2, 1, &a).unwrap();
        assert_eq!(x.entries(), &[a, t.zero()]);
        let x = build_x(&t, 4, 3, &a).unwrap();
        assert_eq!(x.get(0, 0), a);
        assert_eq!(x.get(1, 1), t.pow(&a, 2));
        assert_eq!(x.get(2, 2), t.pow(&a, 3));
        assert_eq!(x.nonzero_count(), 3);
        assert!(x.row(3).iter().all(Fe::is_zero));
        assert!(build_x(&t, 2, 2, &a).is_err());
        assert!(build_x(&t, 3, 2, &t.zero()).is_err());
    }

    #[test]
    fn parameters_of_the_family() {
        let c = construct(3, 2, &ConstructOptions::default()).unwrap();
        assert_eq!((c.tower().q(), c.tower().d(), c.delta()), (5, 1, 1));
        let c = construct(7, 4, &ConstructOptions::default()).unwrap();
        assert_eq!((c.tower().q(), c.tower().d(), c.delta()), (11, 3, 3));
        assert_eq!(guaranteed_extension_degree(4), 5);
        assert!(matches!(
            construct(4, 2, &ConstructOptions::default()),
            Err(Error::Parameter(_))
        ));
        let small_q = ConstructOptions {
            q: Some(7),
            ..Default::default()
        };
        assert!(matches!(construct(5, 3, &small_q), Err(Error::Capacity(_))));
    }

    #[test]
    fn small_degree_construction_is_deterministic() {
        let a = construct_with_degree(9, 5, 4, 17).unwrap();
        let b = construct_with_degree(9, 5, 4, 17).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.tower().q(), 16);
        assert_eq!(a.tower().d(), 4);
        let c = construct_with_degree(7, 4, 3, 1).unwrap();
        assert_eq!(c.tower().q(), 11);
    }

    #[test]
    fn sliding_shapes() {
        let c = construct(3, 2, &ConstructOptions::default()).unwrap();
        assert_eq!(sliding_matrix(&c, 0), *c.g0());
        let s = sliding_matrix(&c, 1);
        assert_eq!((s.rows(), s.cols()), (4, 6));
        assert!(s.submatrix(&[2, 3], &[0, 1, 2]).unwrap().is_zero());
        assert_eq!(s.submatrix(&[0, 1], &[3, 4, 5]).unwrap(), *c.g1());
    }

    #[test]
    fn degree_of_generators() {
        let c = construct(3, 2, &ConstructOptions::default()).unwrap();
        assert_eq!(compute_degree(&c).unwrap(), 1);
        let zero = FieldMatrix::zeros(c.tower().clone(), 2, 3);
        assert_eq!(compute_degree(&c.with_g1(zero).unwrap()).unwrap(), 0);
        let c = construct(5, 3, &ConstructOptions::default()).unwrap();
        assert_eq!(compute_degree(&c).unwrap(), 2);
    }
}
