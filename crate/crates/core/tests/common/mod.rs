#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;

use superlax::coeff::{pair_index, Chart, Den, ONE_DEN};
use superlax::fermion::{FermionPoly, FermionWord};
use superlax::operator::{Deriv, TermKey, NO_DERIV};
use superlax::poly::{Mono, Poly, NVARS, ONE_MONO, VAR_L, VAR_W};
use superlax::{Operator, RatCoeff, Scalar};

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=5, -3i64..=3, prop::sample::select(vec![1u64, 2, 3, 6])).prop_map(|(a, b, c, r)| {
        let re = Scalar::frac(a, b);
        let im = &Scalar::i() * &Scalar::from_int(c);
        &(&re + &im) * &Scalar::sqrt(r).expect("known radical")
    })
}

pub fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

fn mono(n: usize) -> impl Strategy<Value = Mono> {
    (prop::collection::vec(0u8..=2, n), 0u8..=1, 0u8..=1).prop_map(move |(v, l, w)| {
        let mut m = ONE_MONO;
        m[..n].copy_from_slice(&v);
        m[VAR_L] = l;
        m[VAR_W] = w;
        m
    })
}

pub fn poly(n: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((mono(n), scalar()), 0..=3).prop_map(|terms| {
        terms.iter().fold(Poly::zero(), |acc, (m, s)| &acc + &Poly::monomial(*m, s))
    })
}

fn den(n: usize, with_vars: bool) -> impl Strategy<Value = Den> {
    let pairs = n * (n - 1) / 2;
    (prop::collection::vec(0u8..=2, pairs), prop::collection::vec(0u8..=1, n)).prop_map(move |(p, v)| {
        let mut d = ONE_DEN;
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                d[pair_index(i, j)] = p[k];
                k += 1;
            }
        }
        if with_vars {
            for (i, e) in v.iter().enumerate() {
                d[superlax::coeff::var_atom_index(i)] = *e;
            }
        }
        d
    })
}

pub fn ratcoeff(n: usize, chart: Chart) -> impl Strategy<Value = RatCoeff> {
    (poly(n), den(n, chart.is_exponential())).prop_map(|(p, d)| RatCoeff::new(p, d))
}

pub fn chart() -> impl Strategy<Value = Chart> {
    prop::sample::select(vec![Chart::Cartesian, Chart::ExpHyperbolic, Chart::ExpTrigonometric])
}

fn modes(n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=n)
}

pub fn word(n: usize) -> impl Strategy<Value = FermionWord> {
    (modes(n), modes(n)).prop_map(|(c, a)| FermionWord::new(&c, &a))
}

pub fn fermion_poly(n: usize) -> impl Strategy<Value = FermionPoly> {
    prop::collection::vec((word(n), scalar()), 1..=4)
        .prop_map(|ts| ts.into_iter().fold(FermionPoly::zero(), |acc, (w, s)| &acc + &FermionPoly::word(w, s)))
}

fn deriv(n: usize) -> impl Strategy<Value = Deriv> {
    prop::collection::vec(0u8..=2, n).prop_map(move |v| {
        let mut d = NO_DERIV;
        d[..n].copy_from_slice(&v);
        d
    })
}

/// Random operator with a few terms mixing derivatives, fermion words and
/// rational coefficients.
pub fn operator(n: usize, chart: Chart) -> impl Strategy<Value = Operator> {
    prop::collection::vec((deriv(n), word(n), ratcoeff(n, chart)), 0..=3).prop_map(move |ts| {
        ts.into_iter().fold(Operator::zero(n, chart), |acc, (d, w, f)| {
            &acc + &Operator::term(n, chart, TermKey { deriv: d, word: w }, f)
        })
    })
}

/// Random fermion-free operator of derivative order at most one.
pub fn bosonic_operator(n: usize, chart: Chart) -> impl Strategy<Value = Operator> {
    prop::collection::vec((0..=n, ratcoeff(n, chart)), 1..=2).prop_map(move |ts| {
        ts.into_iter().fold(Operator::zero(n, chart), |acc, (k, f)| {
            let t = if k == n { Operator::function(n, chart, f) } else { &Operator::deriv(n, chart, k) * &Operator::function(n, chart, f) };
            &acc + &t
        })
    })
}

/// `sum A_km psi_k^+ psi_m` with bosonic operator entries.
pub fn bilinear(n: usize, chart: Chart) -> impl Strategy<Value = Operator> {
    prop::collection::vec(bosonic_operator(n, chart), n * n).prop_map(move |entries| {
        let mut out = Operator::zero(n, chart);
        for k in 0..n {
            for m in 0..n {
                let hop = Operator::fermion(n, chart, &(&FermionPoly::cre(k) * &FermionPoly::ann(m)));
                out = &out + &(&entries[k * n + m] * &hop);
            }
        }
        out
    })
}

/// Random rational evaluation point avoiding the atoms' zeros.
pub fn point(rng: &mut impl Rng, n: usize) -> [Scalar; NVARS] {
    loop {
        let mut p: [Scalar; NVARS] = std::array::from_fn(|_| Scalar::zero());
        for v in p.iter_mut() {
            *v = Scalar::frac(rng.gen_range(-40..=40), rng.gen_range(1..=7));
        }
        let distinct = (0..n).all(|i| !p[i].is_zero() && (i + 1..n).all(|j| p[i] != p[j]));
        if distinct {
            return p;
        }
    }
}
