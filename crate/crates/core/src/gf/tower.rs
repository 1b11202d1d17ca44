use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::base::BaseField;
use super::counter;
use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// Largest supported top extension degree `d`.
pub const MAX_EXT_DEGREE: usize = 12;

/// Which level of the tower an element or request refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// `F_q`
    Base,
    /// `F_{q^d}`
    Ext,
}

/// Element of `F_{q^d}`: `d` packed `F_q` coefficients of `1, y, ..., y^(d-1)`.
///
/// Elements of `F_q` are the ones with all coefficients above index 0 equal
/// to zero, so base elements embed into the top level for free. Unused slots
/// past `d` are always zero, which makes derived equality meaningful.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fe {
    c: [u16; MAX_EXT_DEGREE],
}

impl Fe {
    pub const ZERO: Fe = Fe { c: [0; MAX_EXT_DEGREE] };

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// True when the element lies in `F_q`.
    pub fn is_base(&self) -> bool {
        self.c[1..].iter().all(|&x| x == 0)
    }

    /// Packed `F_q` coefficient of `y^i`.
    pub fn coeff(&self, i: usize) -> u16 {
        self.c[i]
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let used = self.c.iter().rposition(|&x| x != 0).map_or(1, |i| i + 1);
        write!(f, "Fe{:?}", &self.c[..used])
    }
}

/// `F_p ⊂ F_q = F_p[x]/g ⊂ F_{q^d} = F_q[y]/f`.
#[derive(Clone, Debug)]
pub struct FieldTower {
    base: BaseField,
    d: usize,
    f: Option<Poly>,
    /// `-f_i` for `i < d`, so `y^d = sum(neg_f[i] y^i)`.
    neg_f: [u16; MAX_EXT_DEGREE],
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.d == other.d && self.f == other.f
    }
}

impl Eq for FieldTower {}

impl FieldTower {
    /// Builds a tower for `F_{(p^m)^d}`.
    ///
    /// `g` is the first monic irreducible of degree `m` over `F_p` in
    /// canonical order. For `d > 1`, `f` is either `f_override` (checked) or
    /// drawn uniformly among monic irreducibles by a ChaCha8 stream seeded
    /// with `seed`.
    pub fn new(p: u16, m: usize, d: usize, f_override: Option<Poly>, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::with_rng(p, m, d, f_override, &mut rng)
    }

    pub fn with_rng<R: rand::Rng + ?Sized>(
        p: u16,
        m: usize,
        d: usize,
        f_override: Option<Poly>,
        rng: &mut R,
    ) -> Result<Self> {
        let base = Self::base_field(p, m)?;
        Self::check_degree(d)?;
        let f = match f_override {
            Some(f) => Some(f),
            None if d > 1 => Some(poly::random_irreducible(d, &base, rng)),
            None => None,
        };
        Self::assemble(base, d, f)
    }

    /// Tower with explicitly given moduli. `g` (over `F_p`) is required iff
    /// `m > 1`; `f` (over `F_q`) is optional when `d = 1`.
    pub fn from_moduli(p: u16, g: Option<&Poly>, d: usize, f: Option<Poly>) -> Result<Self> {
        let base = match g {
            None => BaseField::prime(p)?,
            Some(g) => {
                let fp = BaseField::prime(p)?;
                if let Some(deg) = poly::smallest_factor_degree(g, &fp)? {
                    return Err(Error::Reducible { factor_degree: deg });
                }
                BaseField::extension(p, g.coeffs())?
            }
        };
        Self::check_degree(d)?;
        Self::assemble(base, d, f)
    }

    /// The canonical base field `F_{p^m}` used by [`FieldTower::new`].
    pub fn base_field(p: u16, m: usize) -> Result<BaseField> {
        if m == 0 {
            return Err(Error::Usage("base extension degree must be >= 1".into()));
        }
        let fp = BaseField::prime(p)?;
        if m == 1 {
            return Ok(fp);
        }
        if (p as usize)
            .checked_pow(m as u32)
            .is_none_or(|q| q > super::base::MAX_BASE_ORDER)
        {
            return Err(Error::Capacity(format!(
                "base field {p}^{m} exceeds {} elements",
                super::base::MAX_BASE_ORDER
            )));
        }
        let g = poly::first_irreducible(m, &fp);
        BaseField::extension(p, g.coeffs())
    }

    fn check_degree(d: usize) -> Result<()> {
        if d == 0 {
            return Err(Error::Usage("extension degree must be >= 1".into()));
        }
        if d > MAX_EXT_DEGREE {
            return Err(Error::Capacity(format!(
                "extension degree {d} exceeds the supported maximum {MAX_EXT_DEGREE}"
            )));
        }
        Ok(())
    }

    fn assemble(base: BaseField, d: usize, f: Option<Poly>) -> Result<Self> {
        let mut neg_f = [0u16; MAX_EXT_DEGREE];
        if let Some(f) = &f {
            if f.degree() != Some(d) || !f.is_monic() {
                return Err(Error::Usage(format!("f must be monic of degree {d}")));
            }
            if f.coeffs().iter().any(|&c| c as usize >= base.order()) {
                return Err(Error::Usage("f coefficient outside F_q".into()));
            }
            if let Some(deg) = poly::smallest_factor_degree(f, &base)? {
                return Err(Error::Reducible { factor_degree: deg });
            }
            for (i, slot) in neg_f.iter_mut().enumerate().take(d) {
                *slot = base.neg(f.coeffs()[i]);
            }
        }
        Ok(FieldTower { base, d, f, neg_f })
    }

    pub fn p(&self) -> u16 {
        self.base.p()
    }

    pub fn m(&self) -> usize {
        self.base.m()
    }

    pub fn q(&self) -> usize {
        self.base.order()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    /// `g` as a polynomial over `F_p`, or `None` for `m = 1`.
    pub fn g(&self) -> Option<Poly> {
        self.base.modulus().map(|g| Poly::new(g.to_vec()))
    }

    pub fn f(&self) -> Option<&Poly> {
        self.f.as_ref()
    }

    /// Number of elements at a level, saturating at `u128::MAX`.
    pub fn order(&self, level: Level) -> u128 {
        let q = self.q() as u128;
        match level {
            Level::Base => q,
            Level::Ext => q.saturating_pow(self.d as u32),
        }
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        self.from_base(1)
    }

    /// Embeds a packed `F_q` element.
    pub fn from_base(&self, a: u16) -> Fe {
        let mut c = [0; MAX_EXT_DEGREE];
        c[0] = a;
        Fe { c }
    }

    /// Element with the given packed `F_q` coefficients (lowest first).
    pub fn from_coeffs(&self, coeffs: &[u16]) -> Result<Fe> {
        if coeffs.len() > self.d {
            return Err(Error::Usage(format!(
                "{} coefficients for an extension of degree {}",
                coeffs.len(),
                self.d
            )));
        }
        if coeffs.iter().any(|&x| x as usize >= self.q()) {
            return Err(Error::Usage("coefficient outside F_q".into()));
        }
        let mut c = [0; MAX_EXT_DEGREE];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Fe { c })
    }

    /// True when `a` is a valid element of this tower.
    pub fn contains(&self, a: &Fe) -> bool {
        a.c[self.d..].iter().all(|&x| x == 0) && a.c[..self.d].iter().all(|&x| (x as usize) < self.q())
    }

    pub fn coeffs<'a>(&self, a: &'a Fe) -> &'a [u16] {
        &a.c[..self.d]
    }

    /// The distinguished element `α`: the class of `y` modulo `f`, whose
    /// minimal polynomial over `F_q` is `f`. When `d = 1` it is the root of
    /// `f` if one was given, and `1` otherwise.
    pub fn alpha(&self) -> Fe {
        match (&self.f, self.d) {
            (Some(f), 1) => self.from_base(self.base.neg(f.coeffs()[0])),
            (None, _) => self.one(),
            (Some(_), _) => {
                let mut c = [0; MAX_EXT_DEGREE];
                c[1] = 1;
                Fe { c }
            }
        }
    }

    #[inline]
    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        let mut c = [0; MAX_EXT_DEGREE];
        for (ci, (x, y)) in c.iter_mut().zip(a.c.iter().zip(&b.c)).take(self.d) {
            *ci = self.base.add(*x, *y);
        }
        Fe { c }
    }

    #[inline]
    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        let mut c = [0; MAX_EXT_DEGREE];
        for (ci, (x, y)) in c.iter_mut().zip(a.c.iter().zip(&b.c)).take(self.d) {
            *ci = self.base.sub(*x, *y);
        }
        Fe { c }
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        let mut c = [0; MAX_EXT_DEGREE];
        for (ci, x) in c.iter_mut().zip(&a.c).take(self.d) {
            *ci = self.base.neg(*x);
        }
        Fe { c }
    }

    /// Product in `F_{q^d}`; counted when a [`super::count_muls`] scope is active.
    #[inline]
    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        counter::tick();
        self.mul_uncounted(a, b)
    }

    #[inline]
    pub(crate) fn mul_uncounted(&self, a: &Fe, b: &Fe) -> Fe {
        let d = self.d;
        let base = &self.base;
        if d == 1 {
            return self.from_base(base.mul(a.c[0], b.c[0]));
        }
        let mut prod = [0u16; 2 * MAX_EXT_DEGREE - 1];
        for i in 0..d {
            let ai = a.c[i];
            if ai == 0 {
                continue;
            }
            for j in 0..d {
                let bj = b.c[j];
                if bj != 0 {
                    prod[i + j] = base.add(prod[i + j], base.mul(ai, bj));
                }
            }
        }
        for t in (d..2 * d - 1).rev() {
            let top = prod[t];
            if top == 0 {
                continue;
            }
            for i in 0..d {
                let nf = self.neg_f[i];
                if nf != 0 {
                    prod[t - d + i] = base.add(prod[t - d + i], base.mul(top, nf));
                }
            }
        }
        let mut c = [0; MAX_EXT_DEGREE];
        c[..d].copy_from_slice(&prod[..d]);
        Fe { c }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `F_q[y]`.
    pub fn inv(&self, a: &Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let base = &self.base;
        if self.d == 1 {
            return Ok(self.from_base(base.inv(a.c[0])?));
        }
        let f = self.f.as_ref().expect("d > 1 implies a modulus");
        // Invariant: s * a ≡ r (mod f) for both (r0, s0) and (r1, s1).
        let (mut r0, mut r1) = (f.clone(), Poly::new(self.coeffs(a).to_vec()));
        let (mut s0, mut s1) = (Poly::zero(), Poly::constant(1));
        while r1.degree() != Some(0) {
            let (quot, rem) = r0.div_rem(&r1, base)?;
            let s2 = s0.sub(&quot.mul(&s1, base), base);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_zero() {
                return Err(Error::Domain("modulus is not irreducible".into()));
            }
        }
        let scale = base.inv(r1.leading())?;
        let s = s1.scale(scale, base);
        self.from_coeffs(s.coeffs())
    }

    pub fn pow(&self, a: &Fe, mut e: u128) -> Fe {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Canonical index of an element: `sum(c_i q^i)` over its packed coefficients.
    pub fn index_of(&self, a: &Fe) -> u128 {
        let q = self.q() as u128;
        self.coeffs(a).iter().rev().fold(0, |acc, &c| acc * q + c as u128)
    }

    /// Element with the given canonical index at `level`.
    pub fn element(&self, mut index: u128, level: Level) -> Result<Fe> {
        if index >= self.order(level) {
            return Err(Error::Capacity(format!(
                "index {index} outside a field of {} elements",
                self.order(level)
            )));
        }
        let q = self.q() as u128;
        let mut c = [0; MAX_EXT_DEGREE];
        for slot in c.iter_mut().take(self.d) {
            *slot = (index % q) as u16;
            index /= q;
        }
        Ok(Fe { c })
    }

    /// The first `count` elements of a level in canonical order.
    pub fn enumerate_elements(&self, level: Level, count: usize) -> Result<Vec<Fe>> {
        if count as u128 > self.order(level) {
            return Err(Error::Capacity(format!(
                "requested {count} distinct elements from a field of {}",
                self.order(level)
            )));
        }
        (0..count as u128).map(|i| self.element(i, level)).collect()
    }

    /// Degree of the minimal polynomial of `a` over `F_q`: the least `e`
    /// with `1, a, ..., a^e` linearly dependent.
    pub fn min_poly_degree(&self, a: &Fe) -> usize {
        let mut powers = vec![self.coeffs(&self.one()).to_vec()];
        let mut cur = self.one();
        for e in 1..=self.d {
            cur = self.mul_uncounted(&cur, a);
            powers.push(self.coeffs(&cur).to_vec());
            if self.base.rank(&powers) < e + 1 {
                return e;
            }
        }
        unreachable!("d + 1 vectors in a d-dimensional space are dependent")
    }

    /// Digit-vector form: `d` coefficients of `m` `F_p` digits each.
    pub fn to_digits(&self, a: &Fe) -> Vec<Vec<u16>> {
        self.coeffs(a).iter().map(|&c| self.base.digits(c)).collect()
    }

    pub fn from_digits(&self, digits: &[Vec<u16>]) -> Result<Fe> {
        if digits.len() != self.d {
            return Err(Error::Parse(format!(
                "expected {} coefficients per extension element, got {}",
                self.d,
                digits.len()
            )));
        }
        let packed = digits
            .iter()
            .map(|c| self.base.from_digits(c))
            .collect::<Result<Vec<_>>>()?;
        self.from_coeffs(&packed)
    }

    /// Digit-vector form of an element that must lie in `F_q`.
    pub fn base_digits(&self, a: &Fe) -> Result<Vec<u16>> {
        if !a.is_base() {
            return Err(Error::Usage("element is not in the base field".into()));
        }
        Ok(self.base.digits(a.c[0]))
    }

    pub fn from_base_digits(&self, digits: &[u16]) -> Result<Fe> {
        Ok(self.from_base(self.base.from_digits(digits)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_tower() {
        let t = FieldTower::new(5, 1, 1, None, 0).unwrap();
        assert_eq!(t.order(Level::Ext), 5);
        let two = t.from_base(2);
        let three = t.from_base(3);
        assert_eq!(t.mul(&two, &three), t.one());
        assert_eq!(t.inv(&t.from_base(4)).unwrap(), t.from_base(4));
        assert!(t.inv(&t.zero()).is_err());
    }

    #[test]
    fn four_element_field() {
        let t = FieldTower::new(2, 2, 1, None, 0).unwrap();
        assert_eq!(t.g().unwrap().coeffs(), &[1, 1, 1]);
        let x = t.from_base(2);
        assert_eq!(t.mul(&x, &x), t.from_base(3));
        let all = t.enumerate_elements(Level::Base, 4).unwrap();
        let digits: Vec<_> = all.iter().map(|e| t.base_digits(e).unwrap()).collect();
        assert_eq!(digits, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn enumerate_capacity() {
        let t = FieldTower::new(5, 1, 1, None, 0).unwrap();
        let e = t.enumerate_elements(Level::Base, 5).unwrap();
        assert_eq!(e, (0..5).map(|i| t.from_base(i)).collect::<Vec<_>>());
        assert!(matches!(t.enumerate_elements(Level::Base, 6), Err(Error::Capacity(_))));
    }

    #[test]
    fn non_prime_rejected() {
        assert!(matches!(FieldTower::new(6, 1, 1, None, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn reducible_override_reports_factor_degree() {
        // y^2 + 1 = (y - 2)(y - 3) over F_5
        let err = FieldTower::new(5, 1, 2, Some(Poly::new(vec![1, 0, 1])), 0).unwrap_err();
        assert!(matches!(err, Error::Reducible { factor_degree: 1 }));
    }

    #[test]
    fn alpha_has_full_degree() {
        let t = FieldTower::new(5, 1, 3, None, 1).unwrap();
        assert_eq!(t.min_poly_degree(&t.alpha()), 3);
        assert_eq!(t.min_poly_degree(&t.from_base(3)), 1);
        assert_eq!(t.min_poly_degree(&t.zero()), 1);
        let a2 = t.mul(&t.alpha(), &t.alpha());
        assert_eq!(t.min_poly_degree(&a2), 3);
    }

    #[test]
    fn same_seed_same_tower() {
        let a = FieldTower::new(11, 1, 3, None, 42).unwrap();
        let b = FieldTower::new(11, 1, 3, None, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.f(), b.f());
    }
}
