use crate::coeff::RatCoeff;
use crate::fermion::FermionPoly;
use crate::matrix::dense::Mat;
use crate::matrix::OperatorMatrix;
use crate::operator::Operator;

use super::Mode;

/// Collects the first failing sub-identity of a check.
pub struct Checker {
    pub(crate) mode: Mode,
    pub(crate) failure: Option<String>,
    pub(crate) constant: Option<String>,
}

impl Checker {
    pub fn new(mode: Mode) -> Self {
        Checker { mode, failure: None, constant: None }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    pub fn fail(&mut self, label: &str, residual: String) {
        if self.failure.is_none() {
            self.failure = Some(format!("{label}: {residual}"));
        }
    }

    pub fn holds(&mut self, label: &str, ok: bool) {
        if !ok {
            self.fail(label, "does not hold".into());
        }
    }

    pub fn zero(&mut self, label: &str, op: &Operator) {
        if !op.is_zero() {
            self.fail(label, op.to_text());
        }
    }

    pub fn equal(&mut self, label: &str, lhs: &Operator, rhs: &Operator) {
        match lhs.checked_sub(rhs) {
            Ok(d) => self.zero(label, &d),
            Err(e) => self.fail(label, e.to_string()),
        }
    }

    pub fn mat_equal(&mut self, label: &str, lhs: &OperatorMatrix, rhs: &OperatorMatrix) {
        match lhs.checked_sub(rhs) {
            Ok(d) => {
                if let Some(pos) = d.entries().iter().position(|e| !e.is_zero()) {
                    let (i, j) = (pos / d.cols() + 1, pos % d.cols() + 1);
                    self.fail(label, format!("entry ({i},{j}): {}", d.entries()[pos].to_text()));
                }
            }
            Err(e) => self.fail(label, e.to_string()),
        }
    }

    pub fn scalars_equal(&mut self, label: &str, lhs: &Mat, rhs: &Mat) {
        if lhs.len() != rhs.len() || lhs.iter().zip(rhs).any(|(a, b)| a.len() != b.len()) {
            self.fail(label, "shapes differ".into());
            return;
        }
        for (i, (a, b)) in lhs.iter().zip(rhs).enumerate() {
            for (j, (x, y)) in a.iter().zip(b).enumerate() {
                if x != y {
                    self.fail(label, format!("entry ({},{}): {} vs {}", i + 1, j + 1, x, y));
                    return;
                }
            }
        }
    }

    pub fn fermion_equal(&mut self, label: &str, lhs: &FermionPoly, rhs: &FermionPoly) {
        let d = lhs - rhs;
        if !d.is_zero() {
            self.fail(label, d.to_text());
        }
    }

    /// `diff` must equal `expected` (exact mode) or be any coordinate-free
    /// constant (constant mode). A constant difference is recorded either way.
    pub fn up_to_constant(&mut self, label: &str, diff: &Operator, expected: &RatCoeff) {
        let constant = diff.as_constant();
        if let Some(c) = &constant {
            self.constant = Some(c.to_text());
        }
        match (self.mode, constant) {
            (Mode::Constant, Some(_)) => {}
            (Mode::Constant, None) => self.fail(label, format!("not a constant: {}", diff.to_text())),
            (Mode::Exact, Some(c)) if &c == expected => {}
            (Mode::Exact, _) => {
                let shifted = diff - &Operator::function(diff.n(), diff.chart(), expected.clone());
                self.fail(label, shifted.to_text());
            }
        }
    }
}
