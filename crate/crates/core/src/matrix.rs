//! Matrices of fermion-free operators.

use serde::{Deserialize, Serialize};

use crate::coeff::Chart;
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::scalar::Scalar;

/// Which Fock basis the rows and columns refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisTag {
    Particle,
    Jacobi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    rows: usize,
    cols: usize,
    basis: BasisTag,
    entries: Vec<Operator>,
}

impl OperatorMatrix {
    pub fn from_entries(rows: usize, cols: usize, basis: BasisTag, entries: Vec<Operator>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if let Some(first) = entries.first() {
            if entries.iter().any(|e| e.n() != first.n() || e.chart() != first.chart()) {
                return Err(Error::ChartMismatch);
            }
        }
        Ok(OperatorMatrix { rows, cols, basis, entries })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        basis: BasisTag,
        mut f: impl FnMut(usize, usize) -> Operator,
    ) -> Result<Self> {
        let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        OperatorMatrix::from_entries(rows, cols, basis, entries)
    }

    pub fn zeros(n: usize, chart: Chart, rows: usize, cols: usize, basis: BasisTag) -> Self {
        OperatorMatrix { rows, cols, basis, entries: vec![Operator::zero(n, chart); rows * cols] }
    }

    /// `op` times the identity.
    pub fn diagonal(op: &Operator, dim: usize, basis: BasisTag) -> Self {
        let mut m = OperatorMatrix::zeros(op.n(), op.chart(), dim, dim, basis);
        for i in 0..dim {
            m.entries[i * dim + i] = op.clone();
        }
        m
    }

    /// Constant matrix.
    pub fn from_scalars(n: usize, chart: Chart, s: &[Vec<Scalar>], basis: BasisTag) -> Result<Self> {
        let rows = s.len();
        let cols = s.first().map_or(0, |r| r.len());
        if s.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged scalar matrix".into()));
        }
        OperatorMatrix::from_fn(rows, cols, basis, |i, j| Operator::constant(n, chart, &s[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn get(&self, i: usize, j: usize) -> &Operator {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, op: Operator) {
        self.entries[i * self.cols + j] = op;
    }

    pub fn entries(&self) -> &[Operator] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Operator::is_zero)
    }

    fn check_same_shape(&self, other: &OperatorMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        Ok(OperatorMatrix { entries, ..*self })
    }

    pub fn checked_sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.checked_sub(b)).collect::<Result<_>>()?;
        Ok(OperatorMatrix { entries, ..*self })
    }

    pub fn checked_mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.get(i, 0).checked_mul(other.get(0, j))?;
                for k in 1..self.cols {
                    acc = acc.checked_add(&self.get(i, k).checked_mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(OperatorMatrix { rows: self.rows, cols: other.cols, basis: self.basis, entries })
    }

    pub fn add(&self, other: &OperatorMatrix) -> OperatorMatrix {
        self.checked_add(other).expect("matrix shapes differ")
    }

    pub fn sub(&self, other: &OperatorMatrix) -> OperatorMatrix {
        self.checked_sub(other).expect("matrix shapes differ")
    }

    pub fn mul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        self.checked_mul(other).expect("matrix shapes differ")
    }

    pub fn commutator(&self, other: &OperatorMatrix) -> OperatorMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Entrywise `op * entry`.
    pub fn left_mul_op(&self, op: &Operator) -> OperatorMatrix {
        OperatorMatrix { entries: self.entries.iter().map(|e| op * e).collect(), ..*self }
    }

    /// Entrywise `entry * op`.
    pub fn right_mul_op(&self, op: &Operator) -> OperatorMatrix {
        OperatorMatrix { entries: self.entries.iter().map(|e| e * op).collect(), ..*self }
    }

    pub fn scale_scalar(&self, s: &Scalar) -> OperatorMatrix {
        OperatorMatrix { entries: self.entries.iter().map(|e| e.scale_scalar(s)).collect(), ..*self }
    }

    pub fn pow(&self, e: u32) -> OperatorMatrix {
        let first = &self.entries[0];
        let mut out = OperatorMatrix::diagonal(&Operator::identity(first.n(), first.chart()), self.rows, self.basis);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn transpose(&self) -> OperatorMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        OperatorMatrix { rows: self.cols, cols: self.rows, basis: self.basis, entries }
    }

    /// Sum of all entries.
    pub fn total_sum(&self) -> Operator {
        let first = self.entries.first().expect("empty matrix");
        self.entries.iter().fold(Operator::zero(first.n(), first.chart()), |acc, e| &acc + e)
    }

    pub fn with_basis(mut self, basis: BasisTag) -> OperatorMatrix {
        self.basis = basis;
        self
    }

    /// Rows of canonical operator strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| {
                    serde_json::Value::Array((0..self.cols).map(|j| self.get(i, j).to_text().into()).collect())
                })
                .collect(),
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.push_str(&format!("({},{}): {}\n", i + 1, j + 1, self.get(i, j).to_text()));
            }
        }
        out
    }
}

/// Dense scalar matrix helpers.
pub mod dense {
    use crate::scalar::Scalar;

    pub type Mat = Vec<Vec<Scalar>>;

    pub fn identity(n: usize) -> Mat {
        (0..n).map(|i| (0..n).map(|j| Scalar::from_int((i == j) as i64)).collect()).collect()
    }

    pub fn mul(a: &Mat, b: &Mat) -> Mat {
        let inner = b.len();
        let cols = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| {
                        let mut acc = Scalar::zero();
                        for k in 0..inner {
                            acc += &(&row[k] * &b[k][j]);
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    pub fn transpose(a: &Mat) -> Mat {
        let cols = a.first().map_or(0, |r| r.len());
        (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
    }

    pub fn to_json(a: &Mat) -> serde_json::Value {
        serde_json::Value::Array(
            a.iter()
                .map(|r| serde_json::Value::Array(r.iter().map(|s| s.to_text().into()).collect()))
                .collect(),
        )
    }
}
