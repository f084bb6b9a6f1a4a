//! Sparse multivariate polynomials over [`Scalar`] in the coordinate
//! variables `v1..vN` and the couplings `l`, `w` (omega).

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{radical_product, Gauss, RadMask, Rat, Scalar};

/// Largest supported particle count.
pub const MAX_N: usize = 6;
/// Total number of polynomial variables.
pub const NVARS: usize = MAX_N + 2;
/// Index of the coupling `l`.
pub const VAR_L: usize = MAX_N;
/// Index of the oscillator frequency `w`.
pub const VAR_W: usize = MAX_N + 1;

/// Exponent vector.
pub type Mono = [u8; NVARS];

pub const ONE_MONO: Mono = [0; NVARS];

pub fn mono_degree(m: &Mono) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

#[inline]
fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = *a;
    for (o, e) in out.iter_mut().zip(b.iter()) {
        *o += *e;
    }
    out
}

/// Graded-lexicographic comparison: higher total degree first, then larger
/// exponent of the earlier variable first.
pub fn grlex_cmp(a: &Mono, b: &Mono) -> Ordering {
    mono_degree(b).cmp(&mono_degree(a)).then_with(|| b.cmp(a))
}

pub fn var_name(idx: usize) -> String {
    match idx {
        VAR_L => "l".to_string(),
        VAR_W => "w".to_string(),
        k => format!("v{}", k + 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyTerm {
    pub mono: Mono,
    pub rad: RadMask,
    pub coeff: Gauss,
}

/// Canonical sparse polynomial: terms sorted by `(mono, rad)`, no zero
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<PolyTerm>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(&Scalar::one())
    }

    pub fn constant(s: &Scalar) -> Self {
        Poly {
            terms: s
                .terms()
                .iter()
                .map(|(m, g)| PolyTerm { mono: ONE_MONO, rad: *m, coeff: g.clone() })
                .collect(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(&Scalar::from_int(n))
    }

    pub fn var(idx: usize) -> Self {
        let mut mono = ONE_MONO;
        mono[idx] = 1;
        Poly { terms: vec![PolyTerm { mono, rad: 0, coeff: Gauss::one() }] }
    }

    pub fn monomial(mono: Mono, coeff: &Scalar) -> Self {
        Poly {
            terms: coeff
                .terms()
                .iter()
                .map(|(m, g)| PolyTerm { mono, rad: *m, coeff: g.clone() })
                .collect(),
        }
    }

    /// Sort, merge duplicates and drop zeros.
    pub fn from_terms(mut terms: Vec<PolyTerm>) -> Self {
        terms.sort_unstable_by(|a, b| (a.mono, a.rad).cmp(&(b.mono, b.rad)));
        let mut out: Vec<PolyTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mono == t.mono && last.rad == t.rad => last.coeff += &t.coeff,
                _ => {
                    if let Some(last) = out.last() {
                        if last.coeff.is_zero() {
                            out.pop();
                        }
                    }
                    out.push(t)
                }
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[PolyTerm] {
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

    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.terms.iter().all(|t| t.mono == ONE_MONO) {
            Some(Scalar::from_parts(
                self.terms.iter().map(|t| (t.rad, t.coeff.clone())).collect(),
            ))
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mono == ONE_MONO)
    }

    pub fn degree_in(&self, var: usize) -> u8 {
        self.terms.iter().map(|t| t.mono[var]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, var: usize) -> u8 {
        self.terms.iter().map(|t| t.mono[var]).min().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|t| t.mono[var] > 0)
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_one() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() * s.terms().len());
        for t in &self.terms {
            for (m, g) in s.terms() {
                let (rad, k) = radical_product(t.rad, *m);
                let c = &t.coeff * g;
                out.push(PolyTerm { mono: t.mono, rad, coeff: if k == 1 { c } else { c.scale_int(k) } });
            }
        }
        Poly::from_terms(out)
    }

    pub fn scale_int(&self, k: i64) -> Poly {
        if k == 0 {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|t| PolyTerm { mono: t.mono, rad: t.rad, coeff: t.coeff.scale_int(k) })
                .collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|t| PolyTerm { mono: mono_mul(&t.mono, m), rad: t.rad, coeff: t.coeff.clone() })
                .collect(),
        }
    }

    /// Append the product terms of `self * rhs` times the integer `k` to `out`
    /// without canonicalising.
    pub fn mul_into(&self, rhs: &Poly, k: i64, out: &mut Vec<PolyTerm>) {
        out.reserve(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let (rad, rk) = radical_product(a.rad, b.rad);
                let c = &a.coeff * &b.coeff;
                let f = rk * k;
                out.push(PolyTerm {
                    mono: mono_mul(&a.mono, &b.mono),
                    rad,
                    coeff: if f == 1 { c } else { c.scale_int(f) },
                });
            }
        }
    }

    /// Partial derivative with respect to a polynomial variable.
    pub fn diff(&self, var: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.mono[var] > 0)
            .map(|t| {
                let mut mono = t.mono;
                let e = mono[var];
                mono[var] -= 1;
                PolyTerm { mono, rad: t.rad, coeff: t.coeff.scale_int(e as i64) }
            })
            .collect();
        // distinct source monomials stay distinct after lowering one exponent
        Poly { terms }
    }

    pub fn conj(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|t| PolyTerm { mono: t.mono, rad: t.rad, coeff: t.coeff.conj() })
                .collect(),
        }
    }

    /// Substitute `var -> -var`.
    pub fn flip_sign_of(&self, var: usize) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|t| PolyTerm {
                    mono: t.mono,
                    rad: t.rad,
                    coeff: if t.mono[var] % 2 == 1 { -t.coeff.clone() } else { t.coeff.clone() },
                })
                .collect(),
        }
    }

    /// Substitute `var -> value` for a scalar value.
    pub fn substitute(&self, var: usize, value: &Scalar) -> Poly {
        let max = self.degree_in(var) as u32;
        let powers: Vec<Scalar> = (0..=max).map(|e| value.pow(e)).collect();
        let mut out = Vec::new();
        for t in &self.terms {
            let mut mono = t.mono;
            let e = mono[var] as usize;
            mono[var] = 0;
            let piece = Poly {
                terms: vec![PolyTerm { mono, rad: t.rad, coeff: t.coeff.clone() }],
            };
            out.extend(piece.scale(&powers[e]).terms);
        }
        Poly::from_terms(out)
    }

    /// Replace each exponent `e` of `var` by `shift - e`; requires `shift >= degree`.
    pub fn reflect(&self, var: usize, shift: u8) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|t| {
                    let mut mono = t.mono;
                    mono[var] = shift - mono[var];
                    PolyTerm { mono, rad: t.rad, coeff: t.coeff.clone() }
                })
                .collect(),
        )
    }

    /// Evaluate at a full assignment of the variables.
    pub fn eval(&self, point: &[Scalar; NVARS]) -> Scalar {
        let mut acc = Scalar::zero();
        for t in &self.terms {
            let mut v = Scalar::from_parts(vec![(t.rad, t.coeff.clone())]);
            for (i, e) in t.mono.iter().enumerate() {
                if *e > 0 {
                    v = &v * &point[i].pow(*e as u32);
                }
            }
            acc += &v;
        }
        acc
    }

    /// Exact division by `v_i - v_j`; `None` when not divisible.
    pub fn div_linear(&self, i: usize, j: usize) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let maxd = self.degree_in(i);
        if maxd == 0 {
            return None;
        }
        // bucket by degree in v_i
        let mut buckets: Vec<Vec<PolyTerm>> = vec![Vec::new(); maxd as usize + 1];
        for t in &self.terms {
            let mut t = t.clone();
            let d = t.mono[i] as usize;
            t.mono[i] = 0;
            buckets[d].push(t);
        }
        let mut quotient: Vec<PolyTerm> = Vec::new();
        // carry holds the coefficient (in the other variables) of v_i^d after
        // subtracting previous multiples of the divisor
        let mut carry: Vec<PolyTerm> = Vec::new();
        for d in (1..=maxd as usize).rev() {
            let mut coeff = std::mem::take(&mut buckets[d]);
            coeff.append(&mut carry);
            let coeff = Poly::from_terms(coeff);
            if coeff.is_zero() {
                continue;
            }
            for t in coeff.terms() {
                let mut m = t.mono;
                m[i] = (d - 1) as u8;
                quotient.push(PolyTerm { mono: m, rad: t.rad, coeff: t.coeff.clone() });
                let mut m2 = t.mono;
                m2[j] += 1;
                carry.push(PolyTerm { mono: m2, rad: t.rad, coeff: t.coeff.clone() });
            }
        }
        let mut rem = std::mem::take(&mut buckets[0]);
        rem.append(&mut carry);
        if Poly::from_terms(rem).is_zero() {
            Some(Poly::from_terms(quotient))
        } else {
            None
        }
    }

    /// Exact division by the variable `v_i`; `None` when not divisible.
    pub fn div_var(&self, i: usize) -> Option<Poly> {
        if self.terms.iter().all(|t| t.mono[i] > 0) {
            Some(Poly {
                terms: self
                    .terms
                    .iter()
                    .map(|t| {
                        let mut mono = t.mono;
                        mono[i] -= 1;
                        PolyTerm { mono, rad: t.rad, coeff: t.coeff.clone() }
                    })
                    .collect(),
            })
        } else {
            None
        }
    }

    /// `(v_i - v_j)^e`.
    pub fn linear_power(i: usize, j: usize, e: u8) -> Poly {
        let base = &Poly::var(i) - &Poly::var(j);
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * &base;
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Canonical text in graded-lex order.
    pub fn to_text(&self) -> String {
        let mut order: Vec<&PolyTerm> = self.terms.iter().collect();
        order.sort_by(|a, b| grlex_cmp(&a.mono, &b.mono).then(a.rad.cmp(&b.rad)));
        let mut out = String::new();
        let mut first = true;
        for t in order {
            let vars: Vec<(usize, u8)> =
                t.mono.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| (i, *e)).collect();
            for (imag, r) in [(false, &t.coeff.re), (true, &t.coeff.im)] {
                if !r.is_zero() {
                    crate::text::write_term(&mut out, first, r, imag, t.rad, &vars);
                    first = false;
                }
            }
        }
        if first {
            out.push('0');
        }
        out
    }

    /// Parse the output of [`Poly::to_text`]. `n` bounds the coordinate variables.
    pub fn parse(s: &str, n: usize) -> Result<Poly> {
        let mut lx = crate::text::Lexer::new(s)?;
        let p = crate::text::parse_poly(&mut lx, n)?;
        if !lx.at_end() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(p)
    }
}

fn merge(a: &[PolyTerm], b: &[PolyTerm], negate_b: bool) -> Poly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let take_b = |t: &PolyTerm| {
        if negate_b {
            PolyTerm { mono: t.mono, rad: t.rad, coeff: -t.coeff.clone() }
        } else {
            t.clone()
        }
    };
    while i < a.len() && j < b.len() {
        match (a[i].mono, a[i].rad).cmp(&(b[j].mono, b[j].rad)) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(take_b(&b[j]));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].coeff - &b[j].coeff } else { &a[i].coeff + &b[j].coeff };
                if !c.is_zero() {
                    out.push(PolyTerm { mono: a[i].mono, rad: a[i].rad, coeff: c });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(take_b));
    Poly { terms: out }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        merge(&self.terms, &rhs.terms, false)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        merge(&self.terms, &rhs.terms, true)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Vec::new();
        self.mul_into(rhs, 1, &mut out);
        Poly::from_terms(out)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .into_iter()
                .map(|t| PolyTerm { mono: t.mono, rad: t.rad, coeff: -t.coeff })
                .collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// Shorthand for a rational constant polynomial.
pub fn rat_poly(n: i64, d: i64) -> Poly {
    Poly::constant(&Scalar::from_rat(Rat::new(n, d)))
}
