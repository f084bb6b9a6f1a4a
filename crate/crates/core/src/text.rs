//! Shared lexer and term printer for the canonical text forms.

use crate::error::{Error, Result};
use crate::poly::{var_name, Mono, Poly, PolyTerm, NVARS, ONE_MONO, VAR_L, VAR_W};
use crate::scalar::{radical_mask, radical_value, Gauss, RadMask, Rat};

/// Append one signed monomial term.
pub(crate) fn write_term(
    out: &mut String,
    first: bool,
    r: &Rat,
    imag: bool,
    rad: RadMask,
    vars: &[(usize, u8)],
) {
    if r.is_negative() {
        out.push_str(if first { "-" } else { " - " });
    } else if !first {
        out.push_str(" + ");
    }
    let mut factors: Vec<String> = Vec::new();
    if imag {
        factors.push("I".to_string());
    }
    if rad != 0 {
        factors.push(format!("sqrt({})", radical_value(rad)));
    }
    for (v, e) in vars {
        if *e == 1 {
            factors.push(var_name(*v));
        } else {
            factors.push(format!("{}^{}", var_name(*v), e));
        }
    }
    let a = r.abs();
    if a.is_one() && !factors.is_empty() {
        out.push_str(&factors.join("*"));
    } else {
        out.push_str(&a.to_string());
        for f in factors {
            out.push('*');
            out.push_str(&f);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(String),
    Ident(String),
    Sym(char),
}

pub(crate) struct Lexer {
    toks: Vec<Tok>,
    pos: usize,
}

impl Lexer {
    pub fn new(s: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push(Tok::Int(chars[start..i].iter().collect()));
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            } else if "+-*/^()[]|\u{27e9}>".contains(c) {
                toks.push(Tok::Sym(c));
                i += 1;
            } else {
                return Err(Error::Parse(format!("unexpected character `{c}`")));
            }
        }
        Ok(Lexer { toks, pos: 0 })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}`, found {:?}", self.peek())))
        }
    }

    pub fn expect_int(&mut self) -> Result<u64> {
        match self.next() {
            Some(Tok::Int(s)) => s.parse().map_err(|_| Error::Parse(format!("integer `{s}` too large"))),
            t => Err(Error::Parse(format!("expected integer, found {t:?}"))),
        }
    }
}

/// Parse a coordinate variable name `vK` with `1 <= K <= n`, or `l`/`w`.
pub(crate) fn parse_var(name: &str, n: usize) -> Result<usize> {
    match name {
        "l" => Ok(VAR_L),
        "w" => Ok(VAR_W),
        _ => {
            let k: usize = name
                .strip_prefix('v')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::Parse(format!("unknown symbol `{name}`")))?;
            if k == 0 || k > n {
                return Err(Error::Parse(format!("variable `{name}` out of range for N={n}")));
            }
            Ok(k - 1)
        }
    }
}

fn parse_uterm(lx: &mut Lexer, n: usize, negative: bool) -> Result<PolyTerm> {
    let mut coeff = Rat::one();
    let mut imag = false;
    let mut rad: RadMask = 0;
    let mut mono: Mono = ONE_MONO;
    let mut seen_any = false;
    loop {
        if seen_any && !lx.eat_sym('*') {
            break;
        }
        seen_any = true;
        match lx.next() {
            Some(Tok::Int(s)) => {
                let mut text = s;
                if lx.eat_sym('/') {
                    text = format!("{text}/{}", lx.expect_int()?);
                }
                coeff = &coeff * &Rat::parse(&text)?;
            }
            Some(Tok::Ident(id)) if id == "I" => {
                if imag {
                    return Err(Error::Parse("repeated `I` factor".into()));
                }
                imag = true;
            }
            Some(Tok::Ident(id)) if id == "sqrt" => {
                lx.expect_sym('(')?;
                let k = lx.expect_int()?;
                lx.expect_sym(')')?;
                let m = radical_mask(k)?;
                if m & rad != 0 {
                    return Err(Error::Parse("repeated radical factor".into()));
                }
                rad |= m;
            }
            Some(Tok::Ident(id)) => {
                let v = parse_var(&id, n)?;
                let e = if lx.eat_sym('^') { lx.expect_int()? } else { 1 };
                let total = mono[v] as u64 + e;
                if total > u8::MAX as u64 {
                    return Err(Error::Parse("exponent too large".into()));
                }
                mono[v] = total as u8;
            }
            t => return Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
    if negative {
        coeff = -coeff;
    }
    let g = if imag { Gauss::imag(coeff) } else { Gauss::real(coeff) };
    Ok(PolyTerm { mono, rad, coeff: g })
}

pub(crate) fn parse_poly(lx: &mut Lexer, n: usize) -> Result<Poly> {
    debug_assert!(n <= NVARS);
    let mut terms = Vec::new();
    let neg = lx.eat_sym('-');
    terms.push(parse_uterm(lx, n, neg)?);
    loop {
        // a `+` followed by `(` or `[` belongs to an enclosing grammar
        let continues = matches!(lx.peek(), Some(Tok::Sym('+')) | Some(Tok::Sym('-')))
            && !matches!(lx.peek_at(1), Some(Tok::Sym('[')) | Some(Tok::Sym('(')));
        if !continues {
            break;
        }
        let neg = matches!(lx.next(), Some(Tok::Sym('-')));
        terms.push(parse_uterm(lx, n, neg)?);
    }
    Ok(Poly::from_terms(terms))
}
