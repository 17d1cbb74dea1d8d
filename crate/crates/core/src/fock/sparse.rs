use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use num::{One, Zero};

use crate::algebra::Rational;

pub type SparseVector = BTreeMap<usize, Rational>;

/// Adds `c · x` into `acc`, dropping entries that cancel.
pub fn axpy(acc: &mut SparseVector, c: &Rational, x: &SparseVector) {
    if c.is_zero() {
        return;
    }
    for (&i, v) in x {
        let add = c * v;
        match acc.get_mut(&i) {
            Some(slot) => {
                *slot += add;
                if slot.is_zero() {
                    acc.remove(&i);
                }
            }
            None => {
                acc.insert(i, add);
            }
        }
    }
}

pub fn unit_vector(i: usize) -> SparseVector {
    SparseVector::from([(i, Rational::one())])
}

/// Exact square sparse matrix, stored by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    cols: Vec<SparseVector>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        SparseMatrix { dim, cols: vec![SparseVector::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(vec![Rational::one(); dim])
    }

    pub fn diagonal(entries: Vec<Rational>) -> Self {
        let dim = entries.len();
        let mut m = Self::zeros(dim);
        for (i, v) in entries.into_iter().enumerate() {
            m.add_entry(i, i, v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.cols[col].get(&row).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn column(&self, col: usize) -> &SparseVector {
        &self.cols[col]
    }

    pub fn add_entry(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.dim && col < self.dim, "entry ({row}, {col}) out of bounds");
        let single = SparseVector::from([(row, Rational::one())]);
        axpy(&mut self.cols[col], &value, &single);
    }

    /// Entries in `(col, row)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, v)| (r, c, v)))
    }

    pub fn apply(&self, x: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (&j, v) in x {
            axpy(&mut out, v, &self.cols[j]);
        }
        out
    }

    pub fn matmul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, rhs.dim);
        SparseMatrix {
            dim: self.dim,
            cols: rhs.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> SparseMatrix {
        if c.is_zero() {
            return Self::zeros(self.dim);
        }
        SparseMatrix {
            dim: self.dim,
            cols: self
                .cols
                .iter()
                .map(|col| col.iter().map(|(&r, v)| (r, v * c)).collect())
                .collect(),
        }
    }

    pub fn add_scaled(&self, c: &Rational, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (dst, src) in out.cols.iter_mut().zip(&rhs.cols) {
            axpy(dst, c, src);
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = Self::zeros(self.dim);
        for (r, c, v) in self.entries() {
            out.cols[r].insert(c, v.clone());
        }
        out
    }

    /// Multiplies column `j` by `d[j]` (right multiplication by a diagonal).
    pub fn scale_columns(&self, d: &[Rational]) -> SparseMatrix {
        SparseMatrix {
            dim: self.dim,
            cols: self
                .cols
                .iter()
                .zip(d)
                .map(|(col, s)| {
                    if s.is_zero() {
                        SparseVector::new()
                    } else {
                        col.iter().map(|(&r, v)| (r, v * s)).collect()
                    }
                })
                .collect(),
        }
    }

    /// Multiplies row `i` by `d[i]` (left multiplication by a diagonal).
    pub fn scale_rows(&self, d: &[Rational]) -> SparseMatrix {
        SparseMatrix {
            dim: self.dim,
            cols: self
                .cols
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|(&r, v)| (r, v * &d[r]))
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(r, c, _)| r == c)
    }

    pub fn diagonal_entries(&self) -> Vec<Rational> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize, Rational)> {
        self.entries().next().map(|(r, c, v)| (r, c, v.clone()))
    }

    /// Text dump: `dim rows cols nnz` header, then `row col p/q` triplets in
    /// `(col, row)` order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        writeln!(s, "dim {} {} {}", self.dim, self.dim, self.nnz()).unwrap();
        for (r, c, v) in self.entries() {
            writeln!(s, "{r} {c} {v}").unwrap();
        }
        s
    }
}

impl Add for &SparseMatrix {
    type Output = SparseMatrix;

    fn add(self, rhs: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(&Rational::one(), rhs)
    }
}

impl Sub for &SparseMatrix {
    type Output = SparseMatrix;

    fn sub(self, rhs: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(&-Rational::one(), rhs)
    }
}

impl Mul for &SparseMatrix {
    type Output = SparseMatrix;

    fn mul(self, rhs: &SparseMatrix) -> SparseMatrix {
        self.matmul(rhs)
    }
}
