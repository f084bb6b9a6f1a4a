//! Excited states of the oscillator model built from the ladder traces.

use std::fmt::Write as _;

use serde::Serialize;

use crate::coeff::RatCoeff;
use crate::error::{Error, Result};
use crate::model::{Bundle, Model, ModelSpec};
use crate::operator::StateFn;

#[derive(Clone, Debug, Serialize)]
pub struct Level {
    /// Exponents of `O_k^0`, `k = 1..=depth`.
    pub exponents: Vec<u32>,
    pub degree: u32,
    /// Expected energy above the ground state, in units of `w`.
    pub shift: u32,
    pub eigenfunction: bool,
    pub annihilated: bool,
    pub state: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub n: usize,
    pub depth: u32,
    pub ground_energy: String,
    pub levels: Vec<Level>,
}

impl Spectrum {
    pub fn ok(&self) -> bool {
        self.levels.iter().all(|l| l.annihilated || l.eigenfunction)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "oscillator model N={} depth={}  E_gs = {}", self.n, self.depth, self.ground_energy);
        for l in &self.levels {
            let mono: Vec<String> = l
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(k, e)| if *e == 1 { format!("O{}", k + 1) } else { format!("O{}^{}", k + 1, e) })
                .collect();
            let status = if l.annihilated {
                "annihilates the ground state"
            } else if l.eigenfunction {
                "eigenstate"
            } else {
                "NOT an eigenstate"
            };
            let _ = writeln!(out, "  {:<12} E = E_gs + {}w  {}", mono.join(" "), 2 * l.shift, status);
        }
        out
    }
}

fn monomials(depth: u32) -> Vec<Vec<u32>> {
    fn rec(k: u32, depth: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k > depth {
            if left < depth {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left / k {
            cur.push(e);
            rec(k + 1, depth, left - e * k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, depth, depth, &mut Vec::new(), &mut out);
    out.sort_by_key(|m| (m.iter().enumerate().map(|(k, e)| (k as u32 + 1) * e).sum::<u32>(), m.clone()));
    out
}

/// Apply gauge-conjugated ladder traces to the constant function and check
/// each result is an eigenfunction of the conjugated bosonic Hamiltonian.
pub fn spectrum(n: usize, depth: u32) -> Result<Spectrum> {
    if !(2..=3).contains(&n) {
        return Err(Error::Usage(format!("spectrum supports N in 2..=3, got {n}")));
    }
    if !(1..=3).contains(&depth) {
        return Err(Error::Usage(format!("spectrum supports depth in 1..=3, got {depth}")));
    }
    let spec = ModelSpec::new(Model::Calogero, n)?;
    let bundle = Bundle::new(spec);
    let weights = spec.ground_state_weights()?;
    let h0 = bundle.op("H0")?.gauge_conjugate(&weights)?;
    let raise: Vec<_> = (1..=depth)
        .map(|k| bundle.op(&format!("O_{k}_0")).and_then(|o| o.gauge_conjugate(&weights)))
        .collect::<Result<_>>()?;
    let one = StateFn::single(n, spec.chart(), 0, RatCoeff::one());
    let ground = h0.apply(&one)?;
    let e_gs = match ground.amps.get(&0) {
        None if ground.is_zero() => RatCoeff::zero(),
        Some(c) if ground.amps.len() == 1 && (0..n).all(|k| !c.uses_var(k)) => c.clone(),
        _ => {
            return Err(Error::ConstructionCheck { what: "ground state".into(), residual: ground.to_text() });
        }
    };
    let w = RatCoeff::w();
    let mut levels = Vec::new();
    for exps in monomials(depth) {
        let mut state = one.clone();
        for (k, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                state = raise[k].apply(&state)?;
            }
        }
        let shift: u32 = exps.iter().enumerate().map(|(k, e)| (k as u32 + 1) * e).sum();
        let energy = &e_gs + &w.scale_int(2 * shift as i64);
        let residual = h0.apply(&state)?.sub(&state.scale(&energy));
        levels.push(Level {
            degree: exps.iter().sum(),
            exponents: exps,
            shift,
            eigenfunction: residual.is_zero(),
            annihilated: state.is_zero(),
            state: state.to_text(),
        });
    }
    Ok(Spectrum { n, depth, ground_energy: e_gs.to_text(), levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials_by_degree() {
        let m = monomials(2);
        assert_eq!(m, vec![vec![1, 0], vec![0, 1], vec![2, 0]]);
    }

    #[test]
    fn two_particle_levels() {
        let s = spectrum(2, 2).unwrap();
        assert_eq!(s.ground_energy, "0");
        assert!(s.ok(), "{}", s.to_text());
    }
}
