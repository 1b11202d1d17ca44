use rand::Rng;

use super::base::BaseField;
use crate::error::{Error, Result};

/// Univariate polynomial over a [`BaseField`], lowest degree first.
///
/// Coefficients are packed base-field elements. The representation is kept
/// trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<u16>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<u16>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: u16) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `y`.
    pub fn variable() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn coeffs(&self) -> &[u16] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u16 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, other: &Poly, field: &BaseField) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                field.add(a, b)
            })
            .collect();
        Poly::new(coeffs)
    }

    pub fn sub(&self, other: &Poly, field: &BaseField) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                field.sub(a, b)
            })
            .collect();
        Poly::new(coeffs)
    }

    pub fn scale(&self, c: u16, field: &BaseField) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, field: &BaseField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u16; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder. Errors on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly, field: &BaseField) -> Result<(Poly, Poly)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Domain("polynomial division by zero".into()))?;
        let lead_inv = field.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![0u16; rem.len() - dd];
        for t in (dd..rem.len()).rev() {
            let c = field.mul(rem[t], lead_inv);
            if c == 0 {
                continue;
            }
            quot[t - dd] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                rem[t - dd + i] = field.sub(rem[t - dd + i], field.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Poly, field: &BaseField) -> Result<Poly> {
        Ok(self.div_rem(divisor, field)?.1)
    }

    pub fn make_monic(&self, field: &BaseField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = field.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv, field)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly, field: &BaseField) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, field).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic(field)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly, field: &BaseField) -> Result<Poly> {
        let mut base = self.rem(modulus, field)?;
        let mut acc = Poly::constant(1).rem(modulus, field)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, field).rem(modulus, field)?;
            }
            base = base.mul(&base, field).rem(modulus, field)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: u16, field: &BaseField) -> u16 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| field.add(field.mul(acc, x), c))
    }
}

/// Degree of the smallest irreducible factor of a monic `f` of degree >= 1,
/// or `None` when `f` is irreducible.
///
/// Uses the distinct-degree test: `gcd(f, y^(q^i) - y)` is nontrivial exactly
/// when `f` has an irreducible factor whose degree divides `i`.
pub fn smallest_factor_degree(f: &Poly, field: &BaseField) -> Result<Option<usize>> {
    let deg = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Usage("irreducibility test needs degree >= 1".into())),
    };
    if !f.is_monic() {
        return Err(Error::Usage("irreducibility test needs a monic polynomial".into()));
    }
    let y = Poly::variable();
    let q = field.order() as u64;
    let mut frob = y.rem(f, field)?;
    for i in 1..=deg / 2 {
        frob = frob.pow_mod(q, f, field)?;
        let g = f.gcd(&frob.sub(&y, field), field);
        if g.degree() != Some(0) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

pub fn is_irreducible(f: &Poly, field: &BaseField) -> Result<bool> {
    Ok(smallest_factor_degree(f, field)?.is_none())
}

/// Monic polynomial of the given degree whose lower coefficients are the
/// base-`q` digits of `index`.
pub fn monic_from_index(degree: usize, mut index: u64, field: &BaseField) -> Poly {
    let q = field.order() as u64;
    let mut coeffs: Vec<u16> = (0..degree)
        .map(|_| {
            let c = (index % q) as u16;
            index /= q;
            c
        })
        .collect();
    coeffs.push(1);
    Poly::new(coeffs)
}

/// First monic irreducible polynomial of `degree` in canonical order.
pub fn first_irreducible(degree: usize, field: &BaseField) -> Poly {
    (0u64..)
        .map(|i| monic_from_index(degree, i, field))
        .find(|f| is_irreducible(f, field).unwrap_or(false))
        .expect("irreducible polynomials exist in every degree")
}

/// Uniformly random monic irreducible polynomial of `degree` by rejection sampling.
pub fn random_irreducible<R: Rng + ?Sized>(degree: usize, field: &BaseField, rng: &mut R) -> Poly {
    let q = field.order() as u16;
    loop {
        let mut coeffs: Vec<u16> = (0..degree).map(|_| rng.random_range(0..q)).collect();
        coeffs.push(1);
        let f = Poly::new(coeffs);
        if is_irreducible(&f, field).unwrap_or(false) {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducibility_examples() {
        let f2 = BaseField::prime(2).unwrap();
        assert!(is_irreducible(&Poly::new(vec![1, 1, 1]), &f2).unwrap());
        let f5 = BaseField::prime(5).unwrap();
        assert!(!is_irreducible(&Poly::new(vec![1, 0, 1]), &f5).unwrap());
        // (y^2 + 2)(y^2 + 3) = y^4 + 1 over F_5 has no roots but splits into quadratics
        assert_eq!(
            smallest_factor_degree(&Poly::new(vec![1, 0, 0, 0, 1]), &f5).unwrap(),
            Some(2)
        );
    }

    #[test]
    fn rejects_bad_input() {
        let f5 = BaseField::prime(5).unwrap();
        assert!(is_irreducible(&Poly::zero(), &f5).is_err());
        assert!(is_irreducible(&Poly::new(vec![1, 2]), &f5).is_err());
        assert!(is_irreducible(&Poly::constant(1), &f5).is_err());
    }

    #[test]
    fn division_identity() {
        let f7 = BaseField::prime(7).unwrap();
        let a = Poly::new(vec![3, 0, 5, 1, 6]);
        let b = Poly::new(vec![2, 1, 3]);
        let (qt, r) = a.div_rem(&b, &f7).unwrap();
        assert_eq!(qt.mul(&b, &f7).add(&r, &f7), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn first_irreducibles() {
        let f2 = BaseField::prime(2).unwrap();
        assert_eq!(first_irreducible(2, &f2).coeffs(), &[1, 1, 1]);
        assert_eq!(first_irreducible(4, &f2).coeffs(), &[1, 1, 0, 0, 1]);
    }
}
