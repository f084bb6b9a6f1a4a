//! Rational-function coefficients whose denominators are products of a fixed
//! list of atoms: the pairwise differences `v_i - v_j` (`i < j`) and, in the
//! exponential charts, the coordinates `v_i` themselves.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Mono, Poly, MAX_N, NVARS, ONE_MONO, VAR_L, VAR_W};
use crate::scalar::{Gauss, Scalar};
use crate::text::{Lexer, Tok};

pub const NPAIRS: usize = MAX_N * (MAX_N - 1) / 2;
pub const NATOMS: usize = NPAIRS + MAX_N;

/// Exponents of the denominator atoms.
pub type Den = [u8; NATOMS];
pub const ONE_DEN: Den = [0; NATOMS];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    /// `v_i - v_j` with `i < j`.
    Diff(usize, usize),
    /// `v_i`.
    Var(usize),
}

/// Index of the atom `v_i - v_j`, `i < j`.
pub const fn pair_index(i: usize, j: usize) -> usize {
    // rows of the strict upper triangle, row-major
    i * (2 * MAX_N - i - 1) / 2 + (j - i - 1)
}

pub const fn var_atom_index(i: usize) -> usize {
    NPAIRS + i
}

pub fn atom_of(idx: usize) -> Atom {
    if idx >= NPAIRS {
        return Atom::Var(idx - NPAIRS);
    }
    let mut k = idx;
    let mut i = 0;
    loop {
        let row = MAX_N - i - 1;
        if k < row {
            return Atom::Diff(i, i + 1 + k);
        }
        k -= row;
        i += 1;
    }
}

impl Atom {
    pub fn index(self) -> usize {
        match self {
            Atom::Diff(i, j) => pair_index(i, j),
            Atom::Var(i) => var_atom_index(i),
        }
    }

    pub fn poly(self) -> Poly {
        match self {
            Atom::Diff(i, j) => &Poly::var(i) - &Poly::var(j),
            Atom::Var(i) => Poly::var(i),
        }
    }

    pub fn pow(self, e: u8) -> Poly {
        match self {
            Atom::Diff(i, j) => Poly::linear_power(i, j, e),
            Atom::Var(i) => {
                let mut m = ONE_MONO;
                m[i] = e;
                Poly::monomial(m, &Scalar::one())
            }
        }
    }

    /// Derivative of the atom with respect to `v_k`.
    fn diff_wrt(self, k: usize) -> i64 {
        match self {
            Atom::Diff(i, _) if i == k => 1,
            Atom::Diff(_, j) if j == k => -1,
            Atom::Var(i) if i == k => 1,
            _ => 0,
        }
    }

    fn divide(self, p: &Poly) -> Option<Poly> {
        match self {
            Atom::Diff(i, j) => p.div_linear(i, j),
            Atom::Var(i) => p.div_var(i),
        }
    }

    fn to_text(self) -> String {
        match self {
            Atom::Diff(i, j) => format!("(v{}-v{})", i + 1, j + 1),
            Atom::Var(i) => format!("v{}", i + 1),
        }
    }
}

/// How `d/dx_k` acts on the coordinate variables `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    /// `v_k = x_k`.
    Cartesian,
    /// `v_k = exp(2 x_k)`.
    ExpHyperbolic,
    /// `v_k = exp(2 i x_k)`.
    ExpTrigonometric,
}

impl Chart {
    pub fn is_exponential(self) -> bool {
        !matches!(self, Chart::Cartesian)
    }

    /// Factor `g` in `d/dx_k f = g * v_k * df/dv_k` (`None` for the identity).
    fn chain_factor(self) -> Option<Scalar> {
        match self {
            Chart::Cartesian => None,
            Chart::ExpHyperbolic => Some(Scalar::from_int(2)),
            Chart::ExpTrigonometric => Some(Scalar::i().scale_int(2)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Chart::Cartesian => "cartesian",
            Chart::ExpHyperbolic => "exp-hyperbolic",
            Chart::ExpTrigonometric => "exp-trigonometric",
        }
    }
}

/// `num / prod(atom^den)`, normalised so that no denominator atom divides the
/// numerator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatCoeff {
    pub(crate) num: Poly,
    pub(crate) den: Den,
}

impl Default for RatCoeff {
    fn default() -> Self {
        RatCoeff::zero()
    }
}

impl RatCoeff {
    pub fn zero() -> Self {
        RatCoeff { num: Poly::zero(), den: ONE_DEN }
    }

    pub fn one() -> Self {
        RatCoeff::from_poly(Poly::one())
    }

    pub fn from_poly(num: Poly) -> Self {
        RatCoeff { num, den: ONE_DEN }
    }

    pub fn constant(s: &Scalar) -> Self {
        RatCoeff::from_poly(Poly::constant(s))
    }

    pub fn from_int(n: i64) -> Self {
        RatCoeff::from_poly(Poly::from_int(n))
    }

    /// Coordinate variable `v_k` (0-based).
    pub fn coord(k: usize) -> Self {
        RatCoeff::from_poly(Poly::var(k))
    }

    pub fn l() -> Self {
        RatCoeff::from_poly(Poly::var(VAR_L))
    }

    pub fn w() -> Self {
        RatCoeff::from_poly(Poly::var(VAR_W))
    }

    /// `1 / (v_i - v_j)` for `i != j` (0-based).
    pub fn inv_diff(i: usize, j: usize) -> Self {
        assert!(i != j);
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let mut den = ONE_DEN;
        den[pair_index(a, b)] = 1;
        RatCoeff { num: Poly::from_int(sign), den }
    }

    /// `1 / v_i` (exponential charts only carry this atom).
    pub fn inv_coord(i: usize) -> Self {
        let mut den = ONE_DEN;
        den[var_atom_index(i)] = 1;
        RatCoeff { num: Poly::one(), den }
    }

    /// Build `num / den` and normalise.
    pub fn new(num: Poly, den: Den) -> Self {
        let mut c = RatCoeff { num, den };
        c.normalize();
        c
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Den {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den == ONE_DEN && self.num == Poly::one()
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.den == ONE_DEN {
            self.num.as_scalar()
        } else {
            None
        }
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.num.uses_var(var)
            || (var < MAX_N
                && self.den.iter().enumerate().any(|(a, e)| {
                    *e > 0
                        && match atom_of(a) {
                            Atom::Diff(i, j) => i == var || j == var,
                            Atom::Var(i) => i == var,
                        }
                }))
    }

    /// Cancel every denominator atom that divides the numerator.
    pub fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = ONE_DEN;
            return;
        }
        for a in 0..NATOMS {
            while self.den[a] > 0 {
                match atom_of(a).divide(&self.num) {
                    Some(q) => {
                        self.num = q;
                        self.den[a] -= 1;
                    }
                    None => break,
                }
            }
        }
    }

    /// Numerator rescaled to the (larger) denominator `target`.
    pub(crate) fn num_over(&self, target: &Den) -> Poly {
        let mut p = self.num.clone();
        for a in 0..NATOMS {
            let extra = target[a] - self.den[a];
            if extra > 0 {
                p = &p * &atom_of(a).pow(extra);
            }
        }
        p
    }

    pub fn scale(&self, s: &Scalar) -> RatCoeff {
        if s.is_zero() {
            return RatCoeff::zero();
        }
        RatCoeff { num: self.num.scale(s), den: self.den }
    }

    pub fn scale_int(&self, k: i64) -> RatCoeff {
        if k == 0 {
            return RatCoeff::zero();
        }
        RatCoeff { num: self.num.scale_int(k), den: self.den }
    }

    pub fn mul_raw(&self, rhs: &RatCoeff) -> RatCoeff {
        let mut den = self.den;
        for (d, e) in den.iter_mut().zip(rhs.den.iter()) {
            *d += *e;
        }
        RatCoeff { num: &self.num * &rhs.num, den }
    }

    pub fn pow(&self, e: u32) -> RatCoeff {
        let mut out = RatCoeff::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Divide by a coefficient whose numerator factors into atoms times a
    /// nonzero scalar.
    pub fn checked_div(&self, rhs: &RatCoeff) -> Result<RatCoeff> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut rest = rhs.num.clone();
        let mut atoms = ONE_DEN;
        'outer: loop {
            if let Some(s) = rest.as_scalar() {
                let inv = s.inv()?;
                // self / (s * atoms / rhs.den) = self * rhs.den / (s * atoms)
                let mut num = self.num.scale(&inv);
                for (a, &e) in rhs.den.iter().enumerate() {
                    if e > 0 {
                        num = &num * &atom_of(a).pow(e);
                    }
                }
                let mut den = self.den;
                for (d, e) in den.iter_mut().zip(atoms.iter()) {
                    *d += *e;
                }
                return Ok(RatCoeff::new(num, den));
            }
            for a in 0..NATOMS {
                if let Some(q) = atom_of(a).divide(&rest) {
                    rest = q;
                    atoms[a] += 1;
                    continue 'outer;
                }
            }
            return Err(Error::NonAtomDenominator(rhs.to_text()));
        }
    }

    /// `d/dx_k` of this coefficient in the given chart (`k` 0-based).
    pub fn derive(&self, k: usize, chart: Chart) -> RatCoeff {
        if self.num.is_zero() {
            return RatCoeff::zero();
        }
        let relevant: Vec<(usize, i64)> = (0..NATOMS)
            .filter(|&a| self.den[a] > 0)
            .map(|a| (a, atom_of(a).diff_wrt(k)))
            .filter(|(_, d)| *d != 0)
            .collect();
        // prod of relevant atoms and the products omitting one of them
        let atom_polys: Vec<Poly> = relevant.iter().map(|(a, _)| atom_of(*a).poly()).collect();
        let mut all = Poly::one();
        for p in &atom_polys {
            all = &all * p;
        }
        let mut num = &self.num.diff(k) * &all;
        for (idx, (a, d)) in relevant.iter().enumerate() {
            let mut others = Poly::one();
            for (jdx, p) in atom_polys.iter().enumerate() {
                if jdx != idx {
                    others = &others * p;
                }
            }
            let factor = self.den[*a] as i64 * d;
            num = &num - &(&self.num * &others).scale_int(factor);
        }
        let mut den = self.den;
        for (a, _) in &relevant {
            den[*a] += 1;
        }
        if let Some(g) = chart.chain_factor() {
            let mut m: Mono = ONE_MONO;
            m[k] = 1;
            num = num.mul_mono(&m).scale(&g);
        }
        RatCoeff::new(num, den)
    }

    /// Complex conjugate as a function of real coordinates `x`.
    pub fn conj(&self, chart: Chart) -> RatCoeff {
        match chart {
            Chart::Cartesian | Chart::ExpHyperbolic => {
                RatCoeff { num: self.num.conj(), den: self.den }
            }
            Chart::ExpTrigonometric => {
                // v_k -> 1/v_k
                let mut num = self.num.conj();
                let mut den = ONE_DEN;
                for k in 0..MAX_N {
                    let d = num.degree_in(k);
                    if d > 0 {
                        num = num.reflect(k, d);
                        den[var_atom_index(k)] += d;
                    }
                }
                let mut extra: Mono = ONE_MONO;
                let mut sign = 1i64;
                for a in 0..NATOMS {
                    let e = self.den[a];
                    if e == 0 {
                        continue;
                    }
                    match atom_of(a) {
                        Atom::Diff(i, j) => {
                            den[a] += e;
                            extra[i] += e;
                            extra[j] += e;
                            if e % 2 == 1 {
                                sign = -sign;
                            }
                        }
                        Atom::Var(i) => extra[i] += e,
                    }
                }
                RatCoeff::new(num.mul_mono(&extra).scale_int(sign), den)
            }
        }
    }

    /// Substitute `w -> -w`.
    pub fn flip_omega(&self) -> RatCoeff {
        RatCoeff { num: self.num.flip_sign_of(VAR_W), den: self.den }
    }

    /// Substitute `w -> 0`.
    pub fn drop_omega(&self) -> RatCoeff {
        RatCoeff::new(self.num.substitute(VAR_W, &Scalar::zero()), self.den)
    }

    /// Evaluate at a point; errors when a denominator atom vanishes.
    pub fn eval(&self, point: &[Scalar; NVARS]) -> Result<Scalar> {
        let mut d = Scalar::one();
        for (a, &e) in self.den.iter().enumerate() {
            if e > 0 {
                let v = match atom_of(a) {
                    Atom::Diff(i, j) => &point[i] - &point[j],
                    Atom::Var(i) => point[i].clone(),
                };
                d = &d * &v.pow(e as u32);
            }
        }
        Ok(&self.num.eval(point) * &d.inv()?)
    }

    pub fn to_text(&self) -> String {
        if self.den == ONE_DEN {
            return self.num.to_text();
        }
        let den: Vec<String> = (0..NATOMS)
            .filter(|&a| self.den[a] > 0)
            .map(|a| {
                let t = atom_of(a).to_text();
                if self.den[a] == 1 {
                    t
                } else {
                    format!("{t}^{}", self.den[a])
                }
            })
            .collect();
        format!("({})/({})", self.num.to_text(), den.join("*"))
    }

    pub fn parse(s: &str, n: usize) -> Result<RatCoeff> {
        let mut lx = Lexer::new(s)?;
        let c = parse_ratcoeff(&mut lx, n)?;
        if !lx.at_end() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(c)
    }
}

pub(crate) fn parse_ratcoeff(lx: &mut Lexer, n: usize) -> Result<RatCoeff> {
    if !lx.eat_sym('(') {
        return Ok(RatCoeff::from_poly(crate::text::parse_poly(lx, n)?));
    }
    let num = crate::text::parse_poly(lx, n)?;
    lx.expect_sym(')')?;
    lx.expect_sym('/')?;
    lx.expect_sym('(')?;
    let mut den = ONE_DEN;
    loop {
        let atom = if lx.eat_sym('(') {
            let i = parse_coord(lx, n)?;
            lx.expect_sym('-')?;
            let j = parse_coord(lx, n)?;
            lx.expect_sym(')')?;
            if i >= j {
                return Err(Error::Parse("difference atoms must be written (vi-vj) with i<j".into()));
            }
            Atom::Diff(i, j)
        } else {
            Atom::Var(parse_coord(lx, n)?)
        };
        let e = if lx.eat_sym('^') { lx.expect_int()? } else { 1 };
        den[atom.index()] = den[atom.index()]
            .checked_add(u8::try_from(e).map_err(|_| Error::Parse("exponent too large".into()))?)
            .ok_or_else(|| Error::Parse("exponent too large".into()))?;
        if !lx.eat_sym('*') {
            break;
        }
    }
    lx.expect_sym(')')?;
    Ok(RatCoeff::new(num, den))
}

fn parse_coord(lx: &mut Lexer, n: usize) -> Result<usize> {
    match lx.next() {
        Some(Tok::Ident(s)) => {
            let v = crate::text::parse_var(&s, n)?;
            if v >= MAX_N {
                return Err(Error::Parse(format!("`{s}` is not a coordinate")));
            }
            Ok(v)
        }
        t => Err(Error::Parse(format!("expected coordinate, found {t:?}"))),
    }
}

impl fmt::Display for RatCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a RatCoeff> for &'a RatCoeff {
    type Output = RatCoeff;
    fn add(self, rhs: &RatCoeff) -> RatCoeff {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            return RatCoeff::new(&self.num + &rhs.num, self.den);
        }
        let mut den = self.den;
        for (d, e) in den.iter_mut().zip(rhs.den.iter()) {
            *d = (*d).max(*e);
        }
        RatCoeff::new(&self.num_over(&den) + &rhs.num_over(&den), den)
    }
}

impl<'a> Sub<&'a RatCoeff> for &'a RatCoeff {
    type Output = RatCoeff;
    fn sub(self, rhs: &RatCoeff) -> RatCoeff {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a RatCoeff> for &'a RatCoeff {
    type Output = RatCoeff;
    fn mul(self, rhs: &RatCoeff) -> RatCoeff {
        let mut c = self.mul_raw(rhs);
        c.normalize();
        c
    }
}

impl Neg for RatCoeff {
    type Output = RatCoeff;
    fn neg(self) -> RatCoeff {
        RatCoeff { num: -self.num, den: self.den }
    }
}

impl Add for RatCoeff {
    type Output = RatCoeff;
    fn add(self, rhs: RatCoeff) -> RatCoeff {
        &self + &rhs
    }
}

impl Sub for RatCoeff {
    type Output = RatCoeff;
    fn sub(self, rhs: RatCoeff) -> RatCoeff {
        &self - &rhs
    }
}

impl Mul for RatCoeff {
    type Output = RatCoeff;
    fn mul(self, rhs: RatCoeff) -> RatCoeff {
        &self * &rhs
    }
}

impl From<Scalar> for RatCoeff {
    fn from(s: Scalar) -> Self {
        RatCoeff::constant(&s)
    }
}

impl From<Gauss> for RatCoeff {
    fn from(g: Gauss) -> Self {
        RatCoeff::constant(&Scalar::from_gauss(g))
    }
}

/// Sum of terms sharing a key, grouped by denominator so that equal
/// denominators add as plain polynomials.
#[derive(Default)]
pub(crate) struct CoeffAccumulator {
    groups: Vec<(Den, Vec<crate::poly::PolyTerm>)>,
}

impl CoeffAccumulator {
    pub fn group(&mut self, den: &Den) -> &mut Vec<crate::poly::PolyTerm> {
        let pos = match self.groups.iter().position(|(d, _)| d == den) {
            Some(p) => p,
            None => {
                self.groups.push((*den, Vec::new()));
                self.groups.len() - 1
            }
        };
        &mut self.groups[pos].1
    }

    pub fn finish(self) -> RatCoeff {
        let parts: Vec<RatCoeff> = self
            .groups
            .into_iter()
            .map(|(den, terms)| RatCoeff::new(Poly::from_terms(terms), den))
            .filter(|c| !c.is_zero())
            .collect();
        match parts.len() {
            0 => RatCoeff::zero(),
            1 => parts.into_iter().next().unwrap(),
            _ => {
                let mut den = ONE_DEN;
                for p in &parts {
                    for (d, e) in den.iter_mut().zip(p.den.iter()) {
                        *d = (*d).max(*e);
                    }
                }
                let mut terms = Vec::new();
                for p in &parts {
                    let q = p.num_over(&den);
                    terms.extend(q.terms().iter().cloned());
                }
                RatCoeff::new(Poly::from_terms(terms), den)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d12() -> RatCoeff {
        RatCoeff::inv_diff(0, 1)
    }

    #[test]
    fn pair_indices_are_a_bijection() {
        let mut seen = vec![false; NATOMS];
        for i in 0..MAX_N {
            for j in i + 1..MAX_N {
                let idx = pair_index(i, j);
                assert!(!seen[idx]);
                seen[idx] = true;
                assert_eq!(atom_of(idx), Atom::Diff(i, j));
            }
        }
        assert!(seen[..NPAIRS].iter().all(|s| *s));
    }

    #[test]
    fn antisymmetric_inverse_cancels() {
        let s = &RatCoeff::inv_diff(0, 1) + &RatCoeff::inv_diff(1, 0);
        assert!(s.is_zero());
    }

    #[test]
    fn difference_times_inverse_is_one() {
        let p = RatCoeff::from_poly(&Poly::var(0) - &Poly::var(1));
        let r = &(&p * &d12()) - &RatCoeff::one();
        assert!(r.is_zero());
    }

    #[test]
    fn square_of_reversed_difference() {
        let a = &d12() * &d12();
        let b = &RatCoeff::inv_diff(1, 0) * &RatCoeff::inv_diff(1, 0);
        assert!((&a - &b).is_zero());
    }

    #[test]
    fn parameters_are_constants() {
        let l = RatCoeff::l();
        assert!((&(&l * &l) - &(&l * &l)).is_zero());
        assert!(l.derive(0, Chart::Cartesian).is_zero());
        assert!(l.derive(1, Chart::ExpTrigonometric).is_zero());
    }

    #[test]
    fn free_calogero_potential_derivative() {
        // d/dx1 l/(x1-x2) = -l/(x1-x2)^2
        let v = &RatCoeff::l() * &d12();
        let dv = v.derive(0, Chart::Cartesian);
        let expect = -(&RatCoeff::l() * &(&d12() * &d12()));
        assert_eq!(dv, expect);
    }

    #[test]
    fn trigonometric_cot_derivative() {
        // d/dx1 [ i l (v1+v2)/(v1-v2) ] = 4 l v1 v2/(v1-v2)^2
        let cot = RatCoeff::new(
            (&Poly::var(0) + &Poly::var(1)).scale(&Scalar::i()),
            {
                let mut d = ONE_DEN;
                d[pair_index(0, 1)] = 1;
                d
            },
        );
        let v = &RatCoeff::l() * &cot;
        let dv = v.derive(0, Chart::ExpTrigonometric);
        let num = (&(&Poly::var(0) * &Poly::var(1)) * &Poly::var(VAR_L)).scale_int(4);
        let mut den = ONE_DEN;
        den[pair_index(0, 1)] = 2;
        assert_eq!(dv, RatCoeff::new(num, den));
    }

    #[test]
    fn cotangent_is_real_in_trig_chart() {
        let mut den = ONE_DEN;
        den[pair_index(0, 1)] = 1;
        let cot = RatCoeff::new((&Poly::var(0) + &Poly::var(1)).scale(&Scalar::i()), den);
        assert_eq!(cot.conj(Chart::ExpTrigonometric), cot);
        // v1 = exp(2 i x1) has conjugate 1/v1
        assert_eq!(RatCoeff::coord(0).conj(Chart::ExpTrigonometric), RatCoeff::inv_coord(0));
    }

    #[test]
    fn division_by_atoms_only() {
        let sq = RatCoeff::from_poly(Poly::linear_power(0, 1, 2).scale_int(3));
        let q = RatCoeff::one().checked_div(&sq).unwrap();
        assert_eq!(q, (&d12() * &d12()).scale(&Scalar::frac(1, 3)));
        let bad = RatCoeff::from_poly(&Poly::var(0) + &Poly::var(1));
        assert!(matches!(RatCoeff::one().checked_div(&bad), Err(Error::NonAtomDenominator(_))));
        assert!(matches!(RatCoeff::one().checked_div(&RatCoeff::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn text_round_trip() {
        let c = &(&RatCoeff::l() * &d12()) + &RatCoeff::inv_diff(2, 0).scale(&Scalar::sqrt(6).unwrap());
        let t = c.to_text();
        assert_eq!(RatCoeff::parse(&t, 3).unwrap(), c);
    }
}
