//! Exact scalars: rationals extended by the imaginary unit and a fixed set of
//! square roots of primes.
//!
//! A [`Scalar`] is stored as a sparse map from square-free radical products
//! (bitmasks over [`RADICAL_PRIMES`]) to Gaussian rationals. The empty map is
//! the unique zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Primes whose square roots may appear in a [`Scalar`].
pub const RADICAL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Bitmask over [`RADICAL_PRIMES`]; bit `p` set means the factor `sqrt(RADICAL_PRIMES[p])`.
pub type RadMask = u8;

/// Integer value of the square-free product encoded by `mask`.
pub fn radical_value(mask: RadMask) -> u64 {
    RADICAL_PRIMES
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, p)| *p)
        .product()
}

/// Decompose a square-free integer into a radical mask.
pub fn radical_mask(sqfree: u64) -> Result<RadMask> {
    let mut rest = sqfree;
    let mut mask = 0u8;
    for (i, p) in RADICAL_PRIMES.iter().enumerate() {
        if rest % p == 0 {
            rest /= p;
            mask |= 1 << i;
        }
    }
    if rest != 1 {
        return Err(Error::UnknownRadical(sqfree));
    }
    Ok(mask)
}

// ---------------------------------------------------------------------------
// Rational numbers with an i64 fast path
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational with a machine-word fast path.
///
/// `Small` is used whenever numerator and denominator fit in `i64`, which keeps
/// equality and hashing structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rat {
    Small(i64, i64),
    Big(BigRational),
}

fn reduce_i128(num: i128, den: i128) -> Rat {
    debug_assert!(den != 0);
    let g = num.gcd(&den);
    let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
    if d < 0 {
        n = -n;
        d = -d;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(n), Ok(d)) => Rat::Small(n, d),
        _ => Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
    }
}

fn from_big(r: BigRational) -> Rat {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Rat::Small(n, d),
        _ => Rat::Big(r),
    }
}

impl Rat {
    pub fn zero() -> Self {
        Rat::Small(0, 1)
    }

    pub fn one() -> Self {
        Rat::Small(1, 1)
    }

    pub fn from_int(n: i64) -> Self {
        Rat::Small(n, 1)
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        reduce_i128(num as i128, den as i128)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n == 0,
            Rat::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(r) => r.is_negative(),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(r) => r.clone(),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Rat::Small(n, d) => reduce_i128(*d as i128, *n as i128),
            Rat::Big(r) => from_big(r.recip()),
        })
    }

    pub fn numer_string(&self) -> String {
        match self {
            Rat::Small(n, _) => n.to_string(),
            Rat::Big(r) => r.numer().to_string(),
        }
    }

    pub fn denom_string(&self) -> String {
        match self {
            Rat::Small(_, d) => d.to_string(),
            Rat::Big(r) => r.denom().to_string(),
        }
    }

    /// Parse `p` or `p/q` with decimal integers.
    pub fn parse(s: &str) -> Result<Rat> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer `{n}`")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer `{d}`")))?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(from_big(BigRational::new(n, d)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rat::Small(n, d) => *n as f64 / *d as f64,
            Rat::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rat::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn add(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if b == d {
                    reduce_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    reduce_i128(
                        (*a as i128) * (*d as i128) + (*c as i128) * (*b as i128),
                        (*b as i128) * (*d as i128),
                    )
                }
            }
            _ => from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Sub<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn sub(self, rhs: &Rat) -> Rat {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn mul(self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    let p = (*a as i128) * (*c as i128);
                    match i64::try_from(p) {
                        Ok(p) => Rat::Small(p, 1),
                        Err(_) => reduce_i128(p, 1),
                    }
                } else {
                    reduce_i128((*a as i128) * (*c as i128), (*b as i128) * (*d as i128))
                }
            }
            _ => from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        &self + &rhs
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        &self - &rhs
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        &self * &rhs
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::Small(n, d) => match n.checked_neg() {
                Some(m) => Rat::Small(m, d),
                None => from_big(-BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
            },
            Rat::Big(r) => from_big(-r),
        }
    }
}

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// `re + im * I` with rational parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Gauss {
    pub re: Rat,
    pub im: Rat,
}

impl Gauss {
    pub fn new(re: Rat, im: Rat) -> Self {
        Gauss { re, im }
    }

    pub fn real(re: Rat) -> Self {
        Gauss { re, im: Rat::zero() }
    }

    pub fn imag(im: Rat) -> Self {
        Gauss { re: Rat::zero(), im }
    }

    pub fn from_int(n: i64) -> Self {
        Gauss::real(Rat::from_int(n))
    }

    pub fn zero() -> Self {
        Gauss::default()
    }

    pub fn one() -> Self {
        Gauss::real(Rat::one())
    }

    pub fn i() -> Self {
        Gauss::imag(Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Gauss {
        Gauss { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale_int(&self, k: i64) -> Gauss {
        let k = Rat::from_int(k);
        Gauss { re: &self.re * &k, im: &self.im * &k }
    }

    pub fn inv(&self) -> Result<Gauss> {
        let norm = &(&self.re * &self.re) + &(&self.im * &self.im);
        let ninv = norm.inv()?;
        Ok(Gauss { re: &self.re * &ninv, im: -(&self.im * &ninv) })
    }
}

impl<'a> Add<&'a Gauss> for &'a Gauss {
    type Output = Gauss;
    fn add(self, rhs: &Gauss) -> Gauss {
        Gauss { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Gauss> for &'a Gauss {
    type Output = Gauss;
    fn sub(self, rhs: &Gauss) -> Gauss {
        Gauss { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Gauss> for &'a Gauss {
    type Output = Gauss;
    fn mul(self, rhs: &Gauss) -> Gauss {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Gauss::real(&self.re * &rhs.re);
        }
        if self.im.is_zero() {
            return Gauss { re: &self.re * &rhs.re, im: &self.re * &rhs.im };
        }
        if rhs.im.is_zero() {
            return Gauss { re: &self.re * &rhs.re, im: &self.im * &rhs.re };
        }
        Gauss {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Neg for Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss { re: -self.re, im: -self.im }
    }
}

impl AddAssign<&Gauss> for Gauss {
    fn add_assign(&mut self, rhs: &Gauss) {
        if !rhs.re.is_zero() {
            self.re = &self.re + &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im = &self.im + &rhs.im;
        }
    }
}

/// Product of two radical monomials: `(mask, integer factor)` with
/// `sqrt(a) * sqrt(b) = k * sqrt(c)`.
#[inline]
pub fn radical_product(a: RadMask, b: RadMask) -> (RadMask, i64) {
    let common = a & b;
    let k = if common == 0 { 1 } else { radical_value(common) as i64 };
    (a ^ b, k)
}

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

/// Element of `Q(i, sqrt(2), sqrt(3), ...)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    terms: Vec<(RadMask, Gauss)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_gauss(Gauss::one())
    }

    pub fn i() -> Self {
        Scalar::from_gauss(Gauss::i())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_gauss(Gauss::from_int(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar::from_gauss(Gauss::real(r))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Scalar::from_rat(Rat::new(n, d))
    }

    pub fn from_gauss(g: Gauss) -> Self {
        Scalar::from_parts(vec![(0, g)])
    }

    /// Build from unsorted, possibly repeated parts.
    pub fn from_parts(mut parts: Vec<(RadMask, Gauss)>) -> Self {
        parts.sort_by_key(|(m, _)| *m);
        let mut terms: Vec<(RadMask, Gauss)> = Vec::with_capacity(parts.len());
        for (m, g) in parts {
            match terms.last_mut() {
                Some((lm, lg)) if *lm == m => *lg += &g,
                _ => terms.push((m, g)),
            }
        }
        terms.retain(|(_, g)| !g.is_zero());
        Scalar { terms }
    }

    /// `sqrt(k)` for a non-negative integer whose square-free part only involves
    /// [`RADICAL_PRIMES`].
    pub fn sqrt(k: u64) -> Result<Scalar> {
        if k == 0 {
            return Ok(Scalar::zero());
        }
        let mut square = 1u64;
        let mut free = 1u64;
        let mut rest = k;
        let mut p = 2u64;
        while p * p <= rest {
            while rest % (p * p) == 0 {
                rest /= p * p;
                square *= p;
            }
            if rest % p == 0 {
                rest /= p;
                free *= p;
            }
            p += 1;
        }
        free *= rest;
        let mask = radical_mask(free)?;
        Ok(Scalar::from_parts(vec![(mask, Gauss::from_int(square as i64))]))
    }

    /// `1/sqrt(k)`.
    pub fn inv_sqrt(k: u64) -> Result<Scalar> {
        Scalar::sqrt(k)?.inv()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1 == Gauss::one()
    }

    pub fn terms(&self) -> &[(RadMask, Gauss)] {
        &self.terms
    }

    /// The rational value, if this scalar is rational.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(0, g)] if g.im.is_zero() => Some(g.re.clone()),
            _ => None,
        }
    }

    pub fn conj(&self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(m, g)| (*m, g.conj())).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Scalar {
        if k == 0 {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(m, g)| (*m, g.scale_int(k))).collect() }
    }

    /// Multiplicative inverse via successive radical conjugation.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut alpha = self.clone();
        let mut acc = Scalar::one();
        for bit in 0..RADICAL_PRIMES.len() {
            let b = 1u8 << bit;
            if alpha.terms.iter().all(|(m, _)| m & b == 0) {
                continue;
            }
            let flipped = Scalar {
                terms: alpha
                    .terms
                    .iter()
                    .map(|(m, g)| (*m, if m & b != 0 { -g.clone() } else { g.clone() }))
                    .collect(),
            };
            acc = &acc * &flipped;
            alpha = &alpha * &flipped;
        }
        debug_assert!(alpha.terms.len() == 1 && alpha.terms[0].0 == 0);
        let g = alpha.terms[0].1.inv()?;
        Ok(&acc * &Scalar::from_gauss(g))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut out = Scalar::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn to_complex_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, g) in &self.terms {
            let r = (radical_value(*m) as f64).sqrt();
            re += r * g.re.to_f64();
            im += r * g.im.to_f64();
        }
        (re, im)
    }

    /// Canonical text; radicals as `sqrt(k)`, imaginary unit as `I`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut first = true;
        for (m, g) in &self.terms {
            for (imag, r) in [(false, &g.re), (true, &g.im)] {
                if !r.is_zero() {
                    crate::text::write_term(&mut out, first, r, imag, *m, &[]);
                    first = false;
                }
            }
        }
        if first {
            out.push('0');
        }
        out
    }

    pub fn parse(s: &str) -> Result<Scalar> {
        let poly = crate::poly::Poly::parse(s, 0)?;
        poly.as_scalar()
            .ok_or_else(|| Error::Parse(format!("`{s}` is not a constant")))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut parts = self.terms.clone();
        parts.extend(rhs.terms.iter().cloned());
        Scalar::from_parts(parts)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut parts = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ga) in &self.terms {
            for (mb, gb) in &rhs.terms {
                let (m, k) = radical_product(*ma, *mb);
                let g = ga * gb;
                parts.push((m, if k == 1 { g } else { g.scale_int(k) }));
            }
        }
        Scalar::from_parts(parts)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.into_iter().map(|(m, g)| (m, -g)).collect() }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}
