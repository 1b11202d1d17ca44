use crate::error::{Error, Result};

/// Largest base field order for which Cayley tables are built.
pub const MAX_BASE_ORDER: usize = 1024;

/// A prime or prime-power field `F_q = F_p[x]/g`.
///
/// Elements are packed digit vectors: the element with `F_p`-digits
/// `(a_0, ..., a_{m-1})` (coefficient of `x^i` first) is stored as the integer
/// `a_0 + a_1 p + ... + a_{m-1} p^{m-1}`. Numeric order on the packed value is
/// the canonical element order.
#[derive(Clone)]
pub struct BaseField {
    p: u16,
    m: usize,
    q: usize,
    /// Digits of `g`, lowest degree first, including the leading 1. Empty for `m = 1`.
    modulus: Vec<u16>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl std::fmt::Debug for BaseField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BaseField")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for BaseField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Returns `(p, m)` with `q = p^m` when `q` is a prime power.
pub fn prime_power_decomposition(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Smallest prime power `>= lower`.
pub fn smallest_prime_power_at_least(lower: u64) -> u64 {
    let mut q = lower.max(2);
    while prime_power_decomposition(q).is_none() {
        q += 1;
    }
    q
}

impl BaseField {
    /// The prime field `F_p`.
    pub fn prime(p: u16) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        Self::build(p, Vec::new())
    }

    /// `F_p[x]/g` for a monic `g` given by its `F_p`-digits, lowest degree first.
    ///
    /// Irreducibility of `g` is the caller's responsibility; see
    /// [`crate::gf::FieldTower`] which certifies it.
    pub fn extension(p: u16, g: &[u16]) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if g.len() < 2 || *g.last().unwrap() != 1 {
            return Err(Error::Usage("base modulus must be monic of degree >= 1".into()));
        }
        if g.iter().any(|&c| c >= p) {
            return Err(Error::Usage(format!("base modulus digit out of range for p = {p}")));
        }
        if g.len() == 2 {
            return Self::prime(p);
        }
        Self::build(p, g.to_vec())
    }

    fn build(p: u16, modulus: Vec<u16>) -> Result<Self> {
        let m = if modulus.is_empty() { 1 } else { modulus.len() - 1 };
        let q = (p as usize)
            .checked_pow(m as u32)
            .filter(|&q| q <= MAX_BASE_ORDER)
            .ok_or_else(|| Error::Capacity(format!("base field {p}^{m} exceeds {MAX_BASE_ORDER} elements")))?;
        let mut field = BaseField {
            p,
            m,
            q,
            modulus,
            add: vec![0; q * q],
            mul: vec![0; q * q],
            neg: vec![0; q],
            inv: vec![0; q],
        };
        let digits: Vec<Vec<u16>> = (0..q).map(|a| field.digits(a as u16)).collect();
        for a in 0..q {
            let neg: Vec<u16> = digits[a].iter().map(|&x| (p - x) % p).collect();
            field.neg[a] = field.pack(&neg);
            for b in 0..q {
                let sum: Vec<u16> = digits[a].iter().zip(&digits[b]).map(|(&x, &y)| (x + y) % p).collect();
                field.add[a * q + b] = field.pack(&sum);
                field.mul[a * q + b] = field.pack(&field.mul_digits(&digits[a], &digits[b]));
            }
        }
        for a in 1..q {
            let inv = (1..q)
                .find(|&b| field.mul[a * q + b] == 1)
                .ok_or_else(|| Error::Domain("base modulus is reducible".into()))?;
            field.inv[a] = inv as u16;
        }
        Ok(field)
    }

    fn mul_digits(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        let p = self.p as u32;
        let m = self.m;
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u32 * y as u32) % p;
            }
        }
        for t in (m..2 * m - 1).rev() {
            let c = prod[t];
            if c == 0 {
                continue;
            }
            prod[t] = 0;
            for i in 0..m {
                let sub = c * self.modulus[i] as u32 % p;
                prod[t - m + i] = (prod[t - m + i] + p - sub) % p;
            }
        }
        prod.truncate(m);
        prod.into_iter().map(|x| x as u16).collect()
    }

    pub fn p(&self) -> u16 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.q
    }

    /// Modulus `g` as `F_p` digits with leading 1, or `None` for a prime field.
    pub fn modulus(&self) -> Option<&[u16]> {
        (!self.modulus.is_empty()).then_some(&self.modulus[..])
    }

    /// `F_p`-digits of a packed element, lowest first, exactly `m` of them.
    pub fn digits(&self, a: u16) -> Vec<u16> {
        let mut a = a;
        (0..self.m)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn pack(&self, digits: &[u16]) -> u16 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn from_digits(&self, digits: &[u16]) -> Result<u16> {
        if digits.len() != self.m {
            return Err(Error::Parse(format!(
                "expected {} digits per base element, got {}",
                self.m,
                digits.len()
            )));
        }
        if let Some(bad) = digits.iter().find(|&&d| d >= self.p) {
            return Err(Error::Parse(format!("digit {bad} out of range for p = {}", self.p)));
        }
        Ok(self.pack(digits))
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(self.inv[a as usize])
    }

    pub fn pow(&self, a: u16, mut e: u64) -> u16 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Row rank of a list of vectors over this field.
    pub fn rank(&self, rows: &[Vec<u16>]) -> usize {
        let mut rows: Vec<Vec<u16>> = rows.to_vec();
        let cols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = self.inv[rows[rank][c] as usize];
            let (top, below) = rows.split_at_mut(rank + 1);
            let pivot_row = &top[rank];
            for row in below {
                let factor = self.mul(row[c], inv);
                if factor == 0 {
                    continue;
                }
                for (x, &y) in row[c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *x = self.sub(*x, self.mul(factor, y));
                }
            }
            rank += 1;
        }
        rank
    }
}
