//! Differential operators with fermionic words: canonical sums of
//! `coefficient * d^alpha * word`, derivatives to the right of coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::{parse_ratcoeff, Chart, CoeffAccumulator, RatCoeff};
use crate::error::{Error, Result};
use crate::fermion::{multiply_words, parse_word, FermionPoly, FermionWord, FockState, FockVector, Modes};
use crate::matrix::{BasisTag, OperatorMatrix};
use crate::poly::{PolyTerm, MAX_N};
use crate::scalar::Scalar;
use crate::text::{Lexer, Tok};

/// Derivative multi-index over `x_1..x_N`.
pub type Deriv = [u8; MAX_N];

pub const NO_DERIV: Deriv = [0; MAX_N];

fn deriv_degree(d: &Deriv) -> u32 {
    d.iter().map(|&e| e as u32).sum()
}

/// Canonical term key. Ordered by derivative degree, then the derivative
/// exponents (earlier particles first), then the fermion word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TermKey {
    pub deriv: Deriv,
    pub word: FermionWord,
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        deriv_degree(&other.deriv)
            .cmp(&deriv_degree(&self.deriv))
            .then_with(|| other.deriv.cmp(&self.deriv))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl TermKey {
    pub fn scalar() -> Self {
        TermKey { deriv: NO_DERIV, word: FermionWord::IDENTITY }
    }
}

fn binomial(n: u8, k: u8) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k as i64 {
        r = r * (n as i64 - i) / (i + 1);
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    n: usize,
    chart: Chart,
    terms: BTreeMap<TermKey, RatCoeff>,
}

impl Operator {
    pub fn zero(n: usize, chart: Chart) -> Self {
        assert!(n <= MAX_N, "at most {MAX_N} particles are supported");
        Operator { n, chart, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize, chart: Chart) -> Self {
        Operator::function(n, chart, RatCoeff::one())
    }

    /// Multiplication by a coefficient function.
    pub fn function(n: usize, chart: Chart, f: RatCoeff) -> Self {
        Operator::term(n, chart, TermKey::scalar(), f)
    }

    pub fn constant(n: usize, chart: Chart, s: &Scalar) -> Self {
        Operator::function(n, chart, RatCoeff::constant(s))
    }

    pub fn term(n: usize, chart: Chart, key: TermKey, f: RatCoeff) -> Self {
        let mut op = Operator::zero(n, chart);
        op.add_term(key, f);
        op
    }

    /// `d/dx_k` (0-based).
    pub fn deriv(n: usize, chart: Chart, k: usize) -> Self {
        let mut deriv = NO_DERIV;
        deriv[k] = 1;
        Operator::term(n, chart, TermKey { deriv, word: FermionWord::IDENTITY }, RatCoeff::one())
    }

    /// Multiplication by the coordinate `x_k`; only the cartesian chart has it.
    pub fn coord(n: usize, chart: Chart, k: usize) -> Result<Self> {
        if chart != Chart::Cartesian {
            return Err(Error::Unsupported(format!("coordinate x_k in the {} chart", chart.name())));
        }
        Ok(Operator::function(n, chart, RatCoeff::coord(k)))
    }

    pub fn fermion(n: usize, chart: Chart, p: &FermionPoly) -> Self {
        let mut op = Operator::zero(n, chart);
        for (w, s) in p.terms() {
            op.add_term(TermKey { deriv: NO_DERIV, word: *w }, RatCoeff::constant(s));
        }
        op
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, RatCoeff> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: TermKey, f: RatCoeff) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c = &*c + &f;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, f);
            }
        }
    }

    fn same_space(&self, other: &Operator) -> Result<()> {
        if self.n != other.n || self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Operator) -> Result<Operator> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Operator) -> Result<Operator> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, -c.clone());
        }
        Ok(out)
    }

    /// Operator product using the Leibniz rule for derivatives passing
    /// coefficients and the normal-ordered word product for fermions.
    pub fn checked_mul(&self, other: &Operator) -> Result<Operator> {
        self.same_space(other)?;
        let mut acc: HashMap<TermKey, CoeffAccumulator> = HashMap::new();
        let mut word_cache: HashMap<(FermionWord, FermionWord), Vec<(i64, FermionWord)>> = HashMap::new();
        for (kb, g) in &other.terms {
            let mut derivs: HashMap<Deriv, RatCoeff> = HashMap::new();
            derivs.insert(NO_DERIV, g.clone());
            for (ka, f) in &self.terms {
                let words = word_cache
                    .entry((ka.word, kb.word))
                    .or_insert_with(|| multiply_words(ka.word, kb.word))
                    .clone();
                if words.is_empty() {
                    continue;
                }
                for gamma in sub_indices(&ka.deriv) {
                    let dg = derivative(&mut derivs, &gamma, self.chart);
                    if dg.is_zero() {
                        continue;
                    }
                    let mut c: i64 = 1;
                    let mut rest = NO_DERIV;
                    for k in 0..MAX_N {
                        c *= binomial(ka.deriv[k], gamma[k]);
                        rest[k] = ka.deriv[k] - gamma[k] + kb.deriv[k];
                    }
                    let mut den = *f.denominator();
                    for (d, e) in den.iter_mut().zip(dg.denominator().iter()) {
                        *d += *e;
                    }
                    let mut prod: Vec<PolyTerm> = Vec::new();
                    f.numerator().mul_into(dg.numerator(), c, &mut prod);
                    for (s, w) in &words {
                        let key = TermKey { deriv: rest, word: *w };
                        let group = acc.entry(key).or_default().group(&den);
                        if *s == 1 {
                            group.extend(prod.iter().cloned());
                        } else {
                            group.extend(prod.iter().map(|t| PolyTerm {
                                mono: t.mono,
                                rad: t.rad,
                                coeff: t.coeff.scale_int(*s),
                            }));
                        }
                    }
                }
            }
        }
        let mut out = Operator::zero(self.n, self.chart);
        for (k, a) in acc {
            let c = a.finish();
            if !c.is_zero() {
                out.terms.insert(k, c);
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Operator) -> Operator {
        &(self * other) + &(other * self)
    }

    pub fn pow(&self, e: u32) -> Operator {
        let mut out = Operator::identity(self.n, self.chart);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Left multiplication by a coefficient function.
    pub fn scale(&self, f: &RatCoeff) -> Operator {
        let mut out = Operator::zero(self.n, self.chart);
        for (k, c) in &self.terms {
            out.add_term(*k, c * f);
        }
        out
    }

    pub fn scale_scalar(&self, s: &Scalar) -> Operator {
        let mut out = Operator::zero(self.n, self.chart);
        if s.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            out.terms.insert(*k, c.scale(s));
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> Operator {
        self.scale_scalar(&Scalar::from_int(k))
    }

    /// Formal adjoint: coordinates real, `d_k^dagger = -d_k`, `i -> -i`,
    /// fermion words reversed and conjugated.
    pub fn adjoint(&self) -> Operator {
        let mut out = Operator::zero(self.n, self.chart);
        for (k, c) in &self.terms {
            let (s, aw) = k.word.adjoint();
            let sign = if deriv_degree(&k.deriv) % 2 == 0 { s } else { -s };
            let left = Operator::term(self.n, self.chart, TermKey { deriv: NO_DERIV, word: aw }, RatCoeff::from_int(sign));
            let mid = Operator::term(
                self.n,
                self.chart,
                TermKey { deriv: k.deriv, word: FermionWord::IDENTITY },
                RatCoeff::one(),
            );
            let right = Operator::function(self.n, self.chart, c.conj(self.chart));
            out = &out + &(&(&left * &mid) * &right);
        }
        out
    }

    pub fn is_number_conserving(&self) -> bool {
        self.terms.keys().all(|k| k.word.is_number_conserving())
    }

    pub fn is_fermion_free(&self) -> bool {
        self.terms.keys().all(|k| k.word.is_identity())
    }

    /// The coefficient when this is multiplication by a coordinate-free
    /// function (a polynomial in the couplings only).
    pub fn as_constant(&self) -> Option<RatCoeff> {
        match self.terms.len() {
            0 => Some(RatCoeff::zero()),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                if *k == TermKey::scalar() && (0..MAX_N).all(|v| !c.uses_var(v)) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Substitute `w -> -w` in every coefficient.
    pub fn flip_omega(&self) -> Operator {
        let mut out = Operator::zero(self.n, self.chart);
        for (k, c) in &self.terms {
            out.add_term(*k, c.flip_omega());
        }
        out
    }

    /// Substitute `w -> 0`.
    pub fn drop_omega(&self) -> Operator {
        let mut out = Operator::zero(self.n, self.chart);
        for (k, c) in &self.terms {
            out.add_term(*k, c.drop_omega());
        }
        out
    }

    /// Split into fermion-free operators, one per word.
    pub fn by_word(&self) -> BTreeMap<FermionWord, Operator> {
        let mut out: BTreeMap<FermionWord, Operator> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry(k.word)
                .or_insert_with(|| Operator::zero(self.n, self.chart))
                .add_term(TermKey { deriv: k.deriv, word: FermionWord::IDENTITY }, c.clone());
        }
        out
    }

    /// Matrix `<row|self|col>` between explicit Fock vectors.
    pub fn matrix_elements(&self, rows: &[FockVector], cols: &[FockVector], basis: BasisTag) -> OperatorMatrix {
        let parts = self.by_word();
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for r in rows {
            for c in cols {
                let mut e = Operator::zero(self.n, self.chart);
                for (w, op) in &parts {
                    let amp = r.inner(&FermionPoly::word(*w, Scalar::one()).apply(c));
                    if !amp.is_zero() {
                        e = &e + &op.scale_scalar(&amp);
                    }
                }
                entries.push(e);
            }
        }
        OperatorMatrix::from_entries(rows.len(), cols.len(), basis, entries)
            .expect("entries share the operator space")
    }

    /// Block of fixed fermion number `m` in the particle basis, or in the
    /// Jacobi basis built from the rotation `r` (phi_N-free states first).
    pub fn sector_block(&self, m: usize, basis: BasisTag, r: Option<&[Vec<Scalar>]>) -> Result<OperatorMatrix> {
        if !self.is_number_conserving() {
            return Err(Error::NotNumberConserving);
        }
        if m > self.n {
            return Err(Error::InvalidIndex(format!("fermion number {m} exceeds N={}", self.n)));
        }
        let states = match basis {
            BasisTag::Particle => crate::fermion::sector_states(self.n, m).into_iter().map(FockVector::basis).collect(),
            BasisTag::Jacobi => {
                let r = r.ok_or_else(|| Error::Usage("Jacobi basis needs the rotation matrix".into()))?;
                crate::jacobi::jacobi_sector(r, m)?
            }
        };
        Ok(self.matrix_elements(&states, &states, basis))
    }

    /// `psi_0^{-1} self psi_0` given the logarithmic derivatives of `psi_0`.
    pub fn gauge_conjugate(&self, weights: &[RatCoeff]) -> Result<Operator> {
        if weights.len() != self.n {
            return Err(Error::DimensionMismatch(format!("{} weights for N={}", weights.len(), self.n)));
        }
        let shifted: Vec<Operator> = (0..self.n)
            .map(|k| &Operator::deriv(self.n, self.chart, k) + &Operator::function(self.n, self.chart, weights[k].clone()))
            .collect();
        let mut powers: HashMap<(usize, u8), Operator> = HashMap::new();
        let mut out = Operator::zero(self.n, self.chart);
        for (k, c) in &self.terms {
            let mut t = Operator::term(self.n, self.chart, TermKey { deriv: NO_DERIV, word: k.word }, c.clone());
            for (p, &e) in k.deriv.iter().enumerate().take(self.n) {
                if e > 0 {
                    let pw = powers.entry((p, e)).or_insert_with(|| shifted[p].pow(e as u32));
                    t = &t * pw;
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Act on `sum_S f_S |S>`.
    pub fn apply(&self, state: &StateFn) -> Result<StateFn> {
        if state.n != self.n || state.chart != self.chart {
            return Err(Error::ChartMismatch);
        }
        let mut out = StateFn::zero(self.n, self.chart);
        for (k, c) in &self.terms {
            for (m, f) in &state.amps {
                let Some((s, m2)) = k.word.act(*m) else { continue };
                let mut g = f.clone();
                for (p, &e) in k.deriv.iter().enumerate() {
                    for _ in 0..e {
                        g = g.derive(p, self.chart);
                    }
                }
                if !g.is_zero() {
                    out.add(m2, &(c * &g).scale_int(s));
                }
            }
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(k, c)| {
                let mut s = format!("[{}]", c.to_text());
                for (p, &e) in k.deriv.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!(" d({})", p + 1)),
                        _ => s.push_str(&format!(" d({})^{e}", p + 1)),
                    }
                }
                let w = k.word.to_text();
                if !w.is_empty() {
                    s.push(' ');
                    s.push_str(&w);
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse(s: &str, chart: Chart, n: usize) -> Result<Operator> {
        if n > MAX_N {
            return Err(Error::Parse(format!("N={n} exceeds {MAX_N}")));
        }
        let mut lx = Lexer::new(s)?;
        let mut out = Operator::zero(n, chart);
        if lx.peek() == Some(&Tok::Int("0".into())) && lx.peek_at(1).is_none() {
            return Ok(out);
        }
        loop {
            lx.expect_sym('[')?;
            let c = parse_ratcoeff(&mut lx, n)?;
            lx.expect_sym(']')?;
            let mut deriv = NO_DERIV;
            let mut last = 0usize;
            while lx.peek() == Some(&Tok::Ident("d".into())) {
                lx.next();
                lx.expect_sym('(')?;
                let p = lx.expect_int()? as usize;
                lx.expect_sym(')')?;
                if p == 0 || p > n || p <= last {
                    return Err(Error::Parse(format!("bad derivative index {p}")));
                }
                last = p;
                let e = if lx.eat_sym('^') { lx.expect_int()? } else { 1 };
                if e == 0 || e > u8::MAX as u64 {
                    return Err(Error::Parse("bad derivative exponent".into()));
                }
                deriv[p - 1] = e as u8;
            }
            let word = parse_word(&mut lx, n)?;
            let key = TermKey { deriv, word };
            if out.terms.contains_key(&key) {
                return Err(Error::Parse("repeated term".into()));
            }
            out.add_term(key, c);
            if !lx.eat_sym('+') {
                break;
            }
        }
        if !lx.at_end() {
            return Err(Error::Parse("trailing input after operator".into()));
        }
        Ok(out)
    }
}

/// All multi-indices `gamma <= alpha`.
fn sub_indices(alpha: &Deriv) -> Vec<Deriv> {
    let mut out = vec![NO_DERIV];
    for k in 0..MAX_N {
        if alpha[k] == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (alpha[k] as usize + 1));
        for g in &out {
            for e in 0..=alpha[k] {
                let mut h = *g;
                h[k] = e;
                next.push(h);
            }
        }
        out = next;
    }
    out
}

fn derivative(cache: &mut HashMap<Deriv, RatCoeff>, gamma: &Deriv, chart: Chart) -> RatCoeff {
    if let Some(c) = cache.get(gamma) {
        return c.clone();
    }
    let k = gamma.iter().position(|&e| e > 0).expect("nonzero multi-index");
    let mut lower = *gamma;
    lower[k] -= 1;
    let d = derivative(cache, &lower, chart).derive(k, chart);
    cache.insert(*gamma, d.clone());
    d
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.checked_add(rhs).expect("operators from different spaces")
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.checked_sub(rhs).expect("operators from different spaces")
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.checked_mul(rhs).expect("operators from different spaces")
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { n: self.n, chart: self.chart, terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        &self * &rhs
    }
}

/// `sum_S f_S(x) |S>`: functions tensored with Fock basis states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateFn {
    pub n: usize,
    pub chart: Chart,
    pub amps: BTreeMap<Modes, RatCoeff>,
}

impl StateFn {
    pub fn zero(n: usize, chart: Chart) -> Self {
        StateFn { n, chart, amps: BTreeMap::new() }
    }

    pub fn single(n: usize, chart: Chart, modes: Modes, f: RatCoeff) -> Self {
        let mut s = StateFn::zero(n, chart);
        s.add(modes, &f);
        s
    }

    pub fn add(&mut self, m: Modes, f: &RatCoeff) {
        if f.is_zero() {
            return;
        }
        let e = self.amps.entry(m).or_default();
        *e = &*e + f;
        if e.is_zero() {
            self.amps.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn scale(&self, f: &RatCoeff) -> StateFn {
        let mut out = StateFn::zero(self.n, self.chart);
        for (m, g) in &self.amps {
            out.add(*m, &(g * f));
        }
        out
    }

    pub fn sub(&self, other: &StateFn) -> StateFn {
        let mut out = self.clone();
        for (m, g) in &other.amps {
            out.add(*m, &-g.clone());
        }
        out
    }

    pub fn to_text(&self) -> String {
        if self.amps.is_empty() {
            return "0".to_string();
        }
        self.amps
            .iter()
            .map(|(m, f)| format!("[{}] {}", f.to_text(), FockState::ket_text(*m)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
