//! Fermionic creation/annihilation algebra on `N` modes.
//!
//! Words are kept normal ordered: creators in ascending index order to the
//! left of annihilators in ascending index order. Indices are 0-based
//! internally and printed 1-based.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::text::{Lexer, Tok};

/// Mode occupation bitmask.
pub type Modes = u16;

#[inline]
fn below(i: usize) -> Modes {
    ((1u32 << i) - 1) as Modes
}

#[inline]
fn parity(m: Modes) -> i64 {
    if m.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Normal-ordered product `psi+(c_1)..psi+(c_p) psi(a_1)..psi(a_q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FermionWord {
    pub cre: Modes,
    pub ann: Modes,
}

impl PartialOrd for FermionWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FermionWord {
    fn cmp(&self, other: &Self) -> Ordering {
        let deg = |w: &FermionWord| w.cre.count_ones() + w.ann.count_ones();
        deg(self)
            .cmp(&deg(other))
            .then_with(|| index_list(self.cre).cmp(&index_list(other.cre)))
            .then_with(|| index_list(self.ann).cmp(&index_list(other.ann)))
    }
}

fn index_list(m: Modes) -> Vec<usize> {
    (0..16).filter(|i| m & (1 << i) != 0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    Cre(usize),
    Ann(usize),
}

impl FermionWord {
    pub const IDENTITY: FermionWord = FermionWord { cre: 0, ann: 0 };

    pub fn new(cre: &[usize], ann: &[usize]) -> Self {
        let mut w = FermionWord::IDENTITY;
        for &c in cre {
            w.cre |= 1 << c;
        }
        for &a in ann {
            w.ann |= 1 << a;
        }
        w
    }

    pub fn is_identity(&self) -> bool {
        self.cre == 0 && self.ann == 0
    }

    /// Creators minus annihilators.
    pub fn charge(&self) -> i32 {
        self.cre.count_ones() as i32 - self.ann.count_ones() as i32
    }

    pub fn is_number_conserving(&self) -> bool {
        self.charge() == 0
    }

    pub fn generators(&self) -> Vec<Gen> {
        index_list(self.cre)
            .into_iter()
            .map(Gen::Cre)
            .chain(index_list(self.ann).into_iter().map(Gen::Ann))
            .collect()
    }

    /// Adjoint word with its reordering sign.
    pub fn adjoint(&self) -> (i64, FermionWord) {
        let p = self.cre.count_ones() as i64;
        let q = self.ann.count_ones() as i64;
        let flips = p * (p - 1) / 2 + q * (q - 1) / 2;
        (if flips % 2 == 0 { 1 } else { -1 }, FermionWord { cre: self.ann, ann: self.cre })
    }

    /// Act on the basis state `|modes>`; `None` if annihilated.
    pub fn act(&self, modes: Modes) -> Option<(i64, Modes)> {
        let mut s = modes;
        let mut sign = 1;
        for g in self.generators().into_iter().rev() {
            match g {
                Gen::Ann(i) => {
                    if s & (1 << i) == 0 {
                        return None;
                    }
                    sign *= parity(s & below(i));
                    s &= !(1 << i);
                }
                Gen::Cre(i) => {
                    if s & (1 << i) != 0 {
                        return None;
                    }
                    sign *= parity(s & below(i));
                    s |= 1 << i;
                }
            }
        }
        Some((sign, s))
    }

    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = index_list(self.cre).iter().map(|i| format!("psi+({})", i + 1)).collect();
        parts.extend(index_list(self.ann).iter().map(|i| format!("psi({})", i + 1)));
        parts.join(" ")
    }
}

/// `gen * word`, normal ordered.
fn left_mul_gen(g: Gen, w: FermionWord, out: &mut Vec<(i64, FermionWord)>) {
    match g {
        Gen::Cre(i) => {
            if w.cre & (1 << i) == 0 {
                out.push((parity(w.cre & below(i)), FermionWord { cre: w.cre | (1 << i), ann: w.ann }));
            }
        }
        Gen::Ann(i) => {
            if w.cre & (1 << i) != 0 {
                out.push((parity(w.cre & below(i)), FermionWord { cre: w.cre & !(1 << i), ann: w.ann }));
            }
            if w.ann & (1 << i) == 0 {
                let sign = parity(w.cre) * parity(w.ann & below(i));
                out.push((sign, FermionWord { cre: w.cre, ann: w.ann | (1 << i) }));
            }
        }
    }
}

/// Normal-ordered expansion of `a * b` as signed words.
pub fn multiply_words(a: FermionWord, b: FermionWord) -> Vec<(i64, FermionWord)> {
    let mut cur = vec![(1i64, b)];
    let mut next = Vec::new();
    for g in a.generators().into_iter().rev() {
        next.clear();
        for (s, w) in &cur {
            let start = next.len();
            left_mul_gen(g, *w, &mut next);
            for item in &mut next[start..] {
                item.0 *= s;
            }
        }
        std::mem::swap(&mut cur, &mut next);
        if cur.is_empty() {
            break;
        }
    }
    // merge repeated words
    let mut merged: BTreeMap<FermionWord, i64> = BTreeMap::new();
    for (s, w) in cur {
        *merged.entry(w).or_insert(0) += s;
    }
    merged.into_iter().filter(|(_, s)| *s != 0).map(|(w, s)| (s, w)).collect()
}

/// Linear combination of normal-ordered words with scalar coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FermionPoly {
    terms: BTreeMap<FermionWord, Scalar>,
}

impl FermionPoly {
    pub fn zero() -> Self {
        FermionPoly::default()
    }

    pub fn one() -> Self {
        FermionPoly::scalar(Scalar::one())
    }

    pub fn scalar(s: Scalar) -> Self {
        FermionPoly::word(FermionWord::IDENTITY, s)
    }

    pub fn word(w: FermionWord, s: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(w, s);
        }
        FermionPoly { terms }
    }

    /// `psi_i^+` (0-based).
    pub fn cre(i: usize) -> Self {
        FermionPoly::word(FermionWord::new(&[i], &[]), Scalar::one())
    }

    /// `psi_i` (0-based).
    pub fn ann(i: usize) -> Self {
        FermionPoly::word(FermionWord::new(&[], &[i]), Scalar::one())
    }

    /// `psi_i^+ psi_i`.
    pub fn occupation(i: usize) -> Self {
        FermionPoly::word(FermionWord::new(&[i], &[i]), Scalar::one())
    }

    /// Fermion number operator on `n` modes.
    pub fn number(n: usize) -> Self {
        (0..n).fold(FermionPoly::zero(), |acc, i| &acc + &FermionPoly::occupation(i))
    }

    /// `|0><0| = prod_k (1 - psi_k^+ psi_k)`.
    pub fn vacuum_projector(n: usize) -> Self {
        (0..n).fold(FermionPoly::one(), |acc, i| &acc * &(&FermionPoly::one() - &FermionPoly::occupation(i)))
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (FermionWord, Scalar)>) -> Self {
        let mut p = FermionPoly::zero();
        for (w, s) in iter {
            p.add_term(w, &s);
        }
        p
    }

    pub fn add_term(&mut self, w: FermionWord, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_default();
        *e += s;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> &BTreeMap<FermionWord, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Scalar) -> FermionPoly {
        if s.is_zero() {
            return FermionPoly::zero();
        }
        FermionPoly { terms: self.terms.iter().map(|(w, c)| (*w, c * s)).collect() }
    }

    pub fn adjoint(&self) -> FermionPoly {
        FermionPoly::from_terms(self.terms.iter().map(|(w, c)| {
            let (s, aw) = w.adjoint();
            (aw, c.conj().scale_int(s))
        }))
    }

    pub fn is_number_conserving(&self) -> bool {
        self.terms.keys().all(|w| w.is_number_conserving())
    }

    /// Coefficient of the identity word.
    pub fn vacuum_expectation(&self) -> Scalar {
        self.terms.get(&FermionWord::IDENTITY).cloned().unwrap_or_default()
    }

    pub fn commutator(&self, other: &FermionPoly) -> FermionPoly {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &FermionPoly) -> FermionPoly {
        &(self * other) + &(other * self)
    }

    pub fn pow(&self, e: u32) -> FermionPoly {
        (0..e).fold(FermionPoly::one(), |acc, _| &acc * self)
    }

    /// Largest mode index used, plus one.
    pub fn modes_used(&self) -> usize {
        self.terms
            .keys()
            .map(|w| 16 - (w.cre | w.ann).leading_zeros() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Apply to a Fock vector.
    pub fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (w, c) in &self.terms {
            for (m, a) in &v.amps {
                if let Some((s, m2)) = w.act(*m) {
                    out.add(m2, &(c * a).scale_int(s));
                }
            }
        }
        out
    }

    /// Dense matrix in the Fock basis ordered by (fermion number, index list).
    pub fn fock_matrix(&self, n: usize) -> Vec<Vec<Scalar>> {
        let basis = fock_basis(n);
        let pos: BTreeMap<Modes, usize> = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let dim = basis.len();
        let mut mat = vec![vec![Scalar::zero(); dim]; dim];
        for (col, m) in basis.iter().enumerate() {
            for (w, c) in &self.terms {
                if let Some((s, m2)) = w.act(*m) {
                    let row = pos[&m2];
                    mat[row][col] += &c.scale_int(s);
                }
            }
        }
        mat
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(w, c)| {
                let wt = w.to_text();
                if wt.is_empty() {
                    format!("[{}]", c.to_text())
                } else {
                    format!("[{}] {}", c.to_text(), wt)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse(s: &str, n: usize) -> Result<FermionPoly> {
        let mut lx = Lexer::new(s)?;
        let mut out = FermionPoly::zero();
        if lx.peek() == Some(&Tok::Int("0".into())) && lx.peek_at(1).is_none() {
            return Ok(out);
        }
        loop {
            lx.expect_sym('[')?;
            let poly = crate::text::parse_poly(&mut lx, 0)?;
            let c = poly.as_scalar().ok_or_else(|| Error::Parse("non-constant coefficient".into()))?;
            lx.expect_sym(']')?;
            let w = parse_word(&mut lx, n)?;
            out.add_term(w, &c);
            if !lx.eat_sym('+') {
                break;
            }
        }
        if !lx.at_end() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(out)
    }
}

/// Parse a sequence of `psi+(k)` / `psi(k)` tokens in normal order.
pub(crate) fn parse_word(lx: &mut Lexer, n: usize) -> Result<FermionWord> {
    let mut w = FermionWord::IDENTITY;
    let mut last_cre: Option<usize> = None;
    let mut last_ann: Option<usize> = None;
    while lx.peek() == Some(&Tok::Ident("psi".into())) {
        lx.next();
        let creator = lx.eat_sym('+');
        lx.expect_sym('(')?;
        let k = lx.expect_int()? as usize;
        lx.expect_sym(')')?;
        if k == 0 || k > n {
            return Err(Error::Parse(format!("mode {k} out of range for N={n}")));
        }
        let i = k - 1;
        if creator {
            if last_ann.is_some() || last_cre.is_some_and(|c| c >= i) {
                return Err(Error::Parse("fermion word is not normal ordered".into()));
            }
            last_cre = Some(i);
            w.cre |= 1 << i;
        } else {
            if last_ann.is_some_and(|a| a >= i) {
                return Err(Error::Parse("fermion word is not normal ordered".into()));
            }
            last_ann = Some(i);
            w.ann |= 1 << i;
        }
    }
    Ok(w)
}

impl fmt::Display for FermionPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a FermionPoly> for &'a FermionPoly {
    type Output = FermionPoly;
    fn add(self, rhs: &FermionPoly) -> FermionPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c);
        }
        out
    }
}

impl<'a> Sub<&'a FermionPoly> for &'a FermionPoly {
    type Output = FermionPoly;
    fn sub(self, rhs: &FermionPoly) -> FermionPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, &-c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a FermionPoly> for &'a FermionPoly {
    type Output = FermionPoly;
    fn mul(self, rhs: &FermionPoly) -> FermionPoly {
        let mut out = FermionPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let c = ca * cb;
                for (s, w) in multiply_words(*wa, *wb) {
                    out.add_term(w, &c.scale_int(s));
                }
            }
        }
        out
    }
}

impl Neg for FermionPoly {
    type Output = FermionPoly;
    fn neg(self) -> FermionPoly {
        FermionPoly { terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect() }
    }
}

impl Add for FermionPoly {
    type Output = FermionPoly;
    fn add(self, rhs: FermionPoly) -> FermionPoly {
        &self + &rhs
    }
}

impl Sub for FermionPoly {
    type Output = FermionPoly;
    fn sub(self, rhs: FermionPoly) -> FermionPoly {
        &self - &rhs
    }
}

impl Mul for FermionPoly {
    type Output = FermionPoly;
    fn mul(self, rhs: FermionPoly) -> FermionPoly {
        &self * &rhs
    }
}

/// Fock basis `|i_1 .. i_M>` ordered by fermion number then lexicographically.
pub fn fock_basis(n: usize) -> Vec<Modes> {
    (0..=n).flat_map(|m| sector_states(n, m)).collect()
}

/// States with exactly `m` of the first `n` modes occupied, in lexicographic
/// order of their ascending index lists.
pub fn sector_states(n: usize, m: usize) -> Vec<Modes> {
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, left: usize, acc: Modes, out: &mut Vec<Modes>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..n {
            rec(i + 1, n, left - 1, acc | (1 << i), out);
        }
    }
    rec(0, n, m, 0, &mut out);
    out
}

/// A single basis state with an amplitude.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockState {
    pub occupied: Modes,
    pub amplitude: Scalar,
}

impl FockState {
    pub fn new(indices: &[usize], amplitude: Scalar) -> Self {
        FockState { occupied: FermionWord::new(indices, &[]).cre, amplitude }
    }

    pub fn vacuum() -> Self {
        FockState { occupied: 0, amplitude: Scalar::one() }
    }

    pub fn fermion_number(&self) -> u32 {
        self.occupied.count_ones()
    }

    /// `|1 3>` style label; the vacuum is `|0>`.
    pub fn ket_text(occupied: Modes) -> String {
        if occupied == 0 {
            return "|0\u{27e9}".to_string();
        }
        let idx: Vec<String> = index_list(occupied).iter().map(|i| (i + 1).to_string()).collect();
        format!("|{}\u{27e9}", idx.join(" "))
    }

    pub fn parse_ket(s: &str) -> Result<Modes> {
        let mut lx = Lexer::new(s)?;
        lx.expect_sym('|')?;
        let mut m: Modes = 0;
        let mut last = 0u64;
        while let Some(Tok::Int(_)) = lx.peek() {
            let k = lx.expect_int()?;
            if k == 0 && m == 0 && matches!(lx.peek(), Some(Tok::Sym('\u{27e9}')) | Some(Tok::Sym('>'))) {
                break;
            }
            if k == 0 || k > 16 || k <= last {
                return Err(Error::Parse(format!("bad ket `{s}`")));
            }
            last = k;
            m |= 1 << (k - 1);
        }
        if !(lx.eat_sym('\u{27e9}') || lx.eat_sym('>')) || !lx.at_end() {
            return Err(Error::Parse(format!("bad ket `{s}`")));
        }
        Ok(m)
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.amplitude, FockState::ket_text(self.occupied))
    }
}

/// Sparse vector in the Fock space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    pub amps: BTreeMap<Modes, Scalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    pub fn basis(m: Modes) -> Self {
        let mut v = FockVector::zero();
        v.add(m, &Scalar::one());
        v
    }

    pub fn add(&mut self, m: Modes, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        let e = self.amps.entry(m).or_default();
        *e += s;
        if e.is_zero() {
            self.amps.remove(&m);
        }
    }

    /// `<self|other>` with the bra conjugated.
    pub fn inner(&self, other: &FockVector) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, a) in &self.amps {
            if let Some(b) = other.amps.get(m) {
                acc += &(&a.conj() * b);
            }
        }
        acc
    }
}

/// `psi_i^+ psi_i ... ` exchange operator `K_ij = 1 - (psi_i^+ - psi_j^+)(psi_i - psi_j)`.
pub fn exchange_operator(i: usize, j: usize, n: usize) -> Result<FermionPoly> {
    if i == j {
        return Err(Error::InvalidIndex(format!("exchange operator needs i != j (got {})", i + 1)));
    }
    if i >= n || j >= n {
        return Err(Error::InvalidIndex(format!("mode out of range for N={n}")));
    }
    let d_cre = &FermionPoly::cre(i) - &FermionPoly::cre(j);
    let d_ann = &FermionPoly::ann(i) - &FermionPoly::ann(j);
    Ok(&FermionPoly::one() - &(&d_cre * &d_ann))
}

/// `sum_l R[kappa][l] psi_l`.
pub fn jacobi_fermion(kappa: usize, r: &[Vec<Scalar>]) -> Result<FermionPoly> {
    let row = r
        .get(kappa)
        .ok_or_else(|| Error::DimensionMismatch(format!("row {} of a {}-row matrix", kappa + 1, r.len())))?;
    if row.len() != r.len() {
        return Err(Error::DimensionMismatch("Jacobi matrix must be square".into()));
    }
    Ok(row
        .iter()
        .enumerate()
        .fold(FermionPoly::zero(), |acc, (l, c)| &acc + &FermionPoly::ann(l).scale(c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[usize], a: &[usize]) -> FermionPoly {
        FermionPoly::word(FermionWord::new(c, a), Scalar::one())
    }

    #[test]
    fn anticommutation() {
        let p = &FermionPoly::ann(0) * &FermionPoly::cre(0);
        assert_eq!(p, &FermionPoly::one() - &w(&[0], &[0]));
        assert!((&FermionPoly::cre(0) * &FermionPoly::cre(0)).is_zero());
        let ac = FermionPoly::ann(0).anticommutator(&FermionPoly::cre(1));
        assert!(ac.is_zero());
    }

    #[test]
    fn hopping_product() {
        // (psi+1 psi2)(psi+2 psi1) = psi+1 psi1 - psi+1 psi+2 psi2 psi1
        let p = &w(&[0], &[1]) * &w(&[1], &[0]);
        // psi+1 psi+2 psi2 psi1 = - psi+1 psi+2 psi1 psi2
        let expect = &w(&[0], &[0]) + &w(&[0, 1], &[0, 1]);
        assert_eq!(p, expect);
    }

    #[test]
    fn vacuum_expectations() {
        assert!((&FermionPoly::ann(0) * &FermionPoly::cre(0)).vacuum_expectation().is_one());
        assert!(FermionPoly::occupation(0).vacuum_expectation().is_zero());
        for i in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    for j in 0..3 {
                        let p = &(&(&FermionPoly::ann(i) * &FermionPoly::cre(k)) * &FermionPoly::ann(l))
                            * &FermionPoly::cre(j);
                        let expect = if i == k && l == j { 1 } else { 0 };
                        assert_eq!(p.vacuum_expectation(), Scalar::from_int(expect));
                    }
                }
            }
        }
    }

    #[test]
    fn exchange_in_one_fermion_sector() {
        let k = exchange_operator(0, 1, 2).unwrap();
        let m = k.fock_matrix(2);
        // basis |0>, |1>, |2>, |1 2>
        assert!(m[1][1].is_zero() && m[2][2].is_zero());
        assert!(m[1][2].is_one() && m[2][1].is_one());
        assert!(m[0][0].is_one());
        assert!(exchange_operator(1, 1, 2).is_err());
    }

    #[test]
    fn exchange_permutes_creators() {
        let k = exchange_operator(0, 1, 2).unwrap();
        assert_eq!(&(&k * &FermionPoly::cre(0)) * &k, FermionPoly::cre(1));
    }

    #[test]
    fn text_round_trip() {
        let p = &(&w(&[0, 2], &[1]).scale(&Scalar::sqrt(2).unwrap()) + &FermionPoly::one()) - &w(&[], &[2]);
        assert_eq!(FermionPoly::parse(&p.to_text(), 3).unwrap(), p);
        assert_eq!(FockState::ket_text(0b101), "|1 3\u{27e9}");
        assert_eq!(FockState::parse_ket("|1 3\u{27e9}").unwrap(), 0b101);
        assert_eq!(FockState::parse_ket("|0\u{27e9}").unwrap(), 0);
    }
}
