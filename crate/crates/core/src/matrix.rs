//! Dense exact linear algebra over a [`FieldTower`].
//!
//! Entries are stored at the top level of the tower; base-field matrices are
//! simply matrices whose entries all satisfy [`Fe::is_base`]. Index sets are
//! 0-based and strictly increasing.

use std::fmt;
use std::sync::Arc;

use crate::combin::Colex;
use crate::error::{Error, Result};
use crate::gf::{Fe, FieldTower};

#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    tower: Arc<FieldTower>,
    rows: usize,
    cols: usize,
    entries: Vec<Fe>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Location of a vanishing minor: its row and column index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityVerdict {
    pub holds: bool,
    /// First vanishing minor, present iff `holds` is false.
    pub witness: Option<MinorWitness>,
    pub minors_checked: u64,
}

fn check_index_set(set: &[usize], bound: usize, what: &str) -> Result<()> {
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Usage(format!("{what} indices must be strictly increasing")));
    }
    if set.last().is_some_and(|&i| i >= bound) {
        return Err(Error::Usage(format!("{what} index out of range (< {bound})")));
    }
    Ok(())
}

impl FieldMatrix {
    pub fn new(tower: Arc<FieldTower>, rows: usize, cols: usize, entries: Vec<Fe>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Usage(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(FieldMatrix {
            tower,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(tower: Arc<FieldTower>, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            tower,
            rows,
            cols,
            entries: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(tower: Arc<FieldTower>, n: usize) -> Self {
        let one = tower.one();
        let mut m = Self::zeros(tower, n, n);
        for i in 0..n {
            m.set(i, i, one);
        }
        m
    }

    pub fn from_fn(tower: Arc<FieldTower>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Fe) -> Self {
        let entries = (0..rows * cols).map(|i| f(i / cols, i % cols)).collect();
        FieldMatrix {
            tower,
            rows,
            cols,
            entries,
        }
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Fe] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Fe::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }

    /// True when every entry lies in the base field `F_q`.
    pub fn is_base(&self) -> bool {
        self.entries.iter().all(Fe::is_base)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.tower.clone(), self.cols, self.rows, |r, c| self.get(c, r))
    }

    fn same_tower(&self, other: &FieldMatrix) -> Result<()> {
        if Arc::ptr_eq(&self.tower, &other.tower) || *self.tower == *other.tower {
            Ok(())
        } else {
            Err(Error::Usage("matrices over different field towers".into()))
        }
    }

    pub fn submatrix(&self, row_set: &[usize], col_set: &[usize]) -> Result<Self> {
        check_index_set(row_set, self.rows, "row")?;
        check_index_set(col_set, self.cols, "column")?;
        Ok(self.submatrix_unchecked(row_set, col_set))
    }

    fn submatrix_unchecked(&self, row_set: &[usize], col_set: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(row_set.len() * col_set.len());
        for &r in row_set {
            entries.extend(col_set.iter().map(|&c| self.get(r, c)));
        }
        FieldMatrix {
            tower: self.tower.clone(),
            rows: row_set.len(),
            cols: col_set.len(),
            entries,
        }
    }

    /// Columns selected by `col_set`, all rows.
    pub fn select_columns(&self, col_set: &[usize]) -> Result<Self> {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, col_set)
    }

    /// `(self | other)`.
    pub fn hstack(&self, other: &FieldMatrix) -> Result<Self> {
        self.same_tower(other)?;
        if self.rows != other.rows {
            return Err(Error::Usage("hstack needs equal row counts".into()));
        }
        let cols = self.cols + other.cols;
        Ok(Self::from_fn(self.tower.clone(), self.rows, cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        }))
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FieldMatrix) -> Result<()> {
        if r0 + block.rows > self.rows || c0 + block.cols > self.cols {
            return Err(Error::Usage("block does not fit".into()));
        }
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<Self> {
        self.same_tower(other)?;
        if self.cols != other.rows {
            return Err(Error::Usage("inner dimensions differ".into()));
        }
        let t = &self.tower;
        Ok(Self::from_fn(self.tower.clone(), self.rows, other.cols, |r, c| {
            (0..self.cols).fold(Fe::ZERO, |acc, i| {
                t.add(&acc, &t.mul(&self.get(r, i), &other.get(i, c)))
            })
        }))
    }

    pub fn scale_row(&mut self, r: usize, s: &Fe) {
        for c in 0..self.cols {
            let v = self.tower.mul(&self.get(r, c), s);
            self.set(r, c, v);
        }
    }

    /// Row vector times matrix. Every scalar product goes through
    /// [`FieldTower::mul`], so it is visible to multiplication counting.
    pub fn mat_vec(&self, u: &[Fe]) -> Result<Vec<Fe>> {
        if u.len() != self.rows {
            return Err(Error::Usage(format!(
                "vector of length {} against {} rows",
                u.len(),
                self.rows
            )));
        }
        let t = &self.tower;
        let mut out = vec![Fe::ZERO; self.cols];
        for (r, ur) in u.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                *o = t.add(o, &t.mul(ur, &self.get(r, c)));
            }
        }
        Ok(out)
    }

    pub fn det(&self) -> Result<Fe> {
        if self.rows != self.cols {
            return Err(Error::Usage(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut buf = self.entries.clone();
        Ok(eliminate(&self.tower, &mut buf, self.rows, self.cols, true).1)
    }

    pub fn rank(&self) -> usize {
        let mut buf = self.entries.clone();
        eliminate(&self.tower, &mut buf, self.rows, self.cols, false).0
    }

    /// True iff every square minor of every order is nonzero. Scans orders
    /// ascending, then column sets and row sets in colex order, stopping at
    /// the first vanishing minor.
    pub fn is_superregular(&self) -> RegularityVerdict {
        let mut checked = 0;
        let mut scratch = Vec::new();
        for order in 1..=self.rows.min(self.cols) {
            for cols in Colex::new(self.cols, order) {
                for rows in Colex::new(self.rows, order) {
                    checked += 1;
                    if !self.minor_nonzero(&rows, &cols, &mut scratch) {
                        return RegularityVerdict {
                            holds: false,
                            witness: Some(MinorWitness { rows, cols }),
                            minors_checked: checked,
                        };
                    }
                }
            }
        }
        RegularityVerdict {
            holds: true,
            witness: None,
            minors_checked: checked,
        }
    }

    /// True iff all full-size (`rows x rows`) minors are nonzero.
    pub fn is_mds_matrix(&self) -> Result<RegularityVerdict> {
        let k = self.rows;
        if k > self.cols {
            return Err(Error::Usage(format!("MDS check needs k <= n, got {k}x{}", self.cols)));
        }
        let rows: Vec<usize> = (0..k).collect();
        let mut checked = 0;
        let mut scratch = Vec::new();
        for cols in Colex::new(self.cols, k) {
            checked += 1;
            if !self.minor_nonzero(&rows, &cols, &mut scratch) {
                return Ok(RegularityVerdict {
                    holds: false,
                    witness: Some(MinorWitness { rows, cols }),
                    minors_checked: checked,
                });
            }
        }
        Ok(RegularityVerdict {
            holds: true,
            witness: None,
            minors_checked: checked,
        })
    }

    /// Whether the square minor on `rows x cols` is nonzero, reusing `scratch`.
    pub(crate) fn minor_nonzero(&self, rows: &[usize], cols: &[usize], scratch: &mut Vec<Fe>) -> bool {
        scratch.clear();
        for &r in rows {
            scratch.extend(cols.iter().map(|&c| self.get(r, c)));
        }
        nonsingular(&self.tower, scratch, rows.len())
    }
}

/// Gaussian elimination in place on a row-major `rows x cols` buffer with
/// first-nonzero pivoting. Returns the rank and, when `want_det` is set and
/// the buffer is square, the determinant (zero if rank-deficient).
pub(crate) fn eliminate(t: &FieldTower, buf: &mut [Fe], rows: usize, cols: usize, want_det: bool) -> (usize, Fe) {
    let mut det = t.one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !buf[r * cols + c].is_zero()) else {
            continue;
        };
        if pivot != rank {
            for cc in 0..cols {
                buf.swap(pivot * cols + cc, rank * cols + cc);
            }
            det = t.neg(&det);
        }
        let p = buf[rank * cols + c];
        if want_det {
            det = t.mul(&det, &p);
        }
        let inv = t.inv(&p).expect("pivot is nonzero");
        for r in rank + 1..rows {
            let lead = buf[r * cols + c];
            if lead.is_zero() {
                continue;
            }
            let factor = t.mul(&lead, &inv);
            buf[r * cols + c] = Fe::ZERO;
            for cc in c + 1..cols {
                let v = buf[rank * cols + cc];
                if !v.is_zero() {
                    buf[r * cols + cc] = t.sub(&buf[r * cols + cc], &t.mul(&factor, &v));
                }
            }
        }
        rank += 1;
    }
    let square_full = rows == cols && rank == rows;
    (rank, if square_full { det } else { Fe::ZERO })
}

/// Nonsingularity of a square `n x n` buffer, consumed in place; exits at the
/// first column without a pivot.
pub(crate) fn nonsingular(t: &FieldTower, buf: &mut [Fe], n: usize) -> bool {
    for c in 0..n {
        let Some(pivot) = (c..n).find(|&r| !buf[r * n + c].is_zero()) else {
            return false;
        };
        if pivot != c {
            for cc in c..n {
                buf.swap(pivot * n + cc, c * n + cc);
            }
        }
        let inv = t.inv(&buf[c * n + c]).expect("pivot is nonzero");
        for r in c + 1..n {
            let lead = buf[r * n + c];
            if lead.is_zero() {
                continue;
            }
            let factor = t.mul_uncounted(&lead, &inv);
            for cc in c + 1..n {
                let v = buf[c * n + cc];
                if !v.is_zero() {
                    buf[r * n + cc] = t.sub(&buf[r * n + cc], &t.mul_uncounted(&factor, &v));
                }
            }
        }
    }
    true
}
