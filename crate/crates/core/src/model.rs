//! Model specifications and builders for supercharges, superhamiltonians,
//! Lax matrices and the operators derived from them.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::coeff::{Chart, RatCoeff};
use crate::error::{Error, Result};
use crate::fermion::{exchange_operator, FermionPoly};
use crate::matrix::{BasisTag, OperatorMatrix};
use crate::operator::Operator;
use crate::poly::{Poly, MAX_N, VAR_L};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    FreeCalogero,
    Calogero,
    Ts,
    Hs,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::FreeCalogero, Model::Calogero, Model::Ts, Model::Hs];

    pub fn name(self) -> &'static str {
        match self {
            Model::FreeCalogero => "free-calogero",
            Model::Calogero => "calogero",
            Model::Ts => "ts",
            Model::Hs => "hs",
        }
    }

    pub fn chart(self) -> Chart {
        match self {
            Model::FreeCalogero | Model::Calogero => Chart::Cartesian,
            Model::Ts => Chart::ExpTrigonometric,
            Model::Hs => Chart::ExpHyperbolic,
        }
    }

    /// Models without the oscillator term.
    pub fn is_free(self) -> bool {
        self != Model::Calogero
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Model> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown model `{s}` (expected free-calogero, calogero, ts or hs)")))
    }
}

/// A model at a fixed particle count. Couplings `l` and `w` stay symbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: Model,
    pub n: usize,
}

impl ModelSpec {
    pub fn new(model: Model, n: usize) -> Result<Self> {
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::Usage(format!("particle count must be in 2..={MAX_N}, got {n}")));
        }
        Ok(ModelSpec { model, n })
    }

    pub fn chart(&self) -> Chart {
        self.model.chart()
    }

    pub fn l(&self) -> RatCoeff {
        RatCoeff::l()
    }

    /// The oscillator frequency; zero for the free models.
    pub fn omega(&self) -> RatCoeff {
        if self.model == Model::Calogero {
            RatCoeff::w()
        } else {
            RatCoeff::zero()
        }
    }

    /// Pair potential `V(x_k - x_m)`.
    pub fn potential(&self, k: usize, m: usize) -> RatCoeff {
        match self.model {
            Model::FreeCalogero | Model::Calogero => RatCoeff::inv_diff(k, m).scale_l(),
            Model::Ts => cot_like(k, m).scale(&Scalar::i()).scale_l(),
            Model::Hs => cot_like(k, m).scale_l(),
        }
    }

    /// `V'(x_k - x_m)`, obtained by differentiating the potential.
    pub fn potential_prime(&self, k: usize, m: usize) -> RatCoeff {
        self.potential(k, m).derive(k, self.chart())
    }

    /// Coordinate-free constant `E_0` that makes the closed-form
    /// superhamiltonian equal to `{Q+, Q-}`.
    pub fn e0(&self) -> RatCoeff {
        let n = self.n as i64;
        let c = n * (n - 1) * (n - 2);
        let l2 = RatCoeff::l().pow(2);
        match self.model {
            Model::FreeCalogero | Model::Calogero => RatCoeff::zero(),
            Model::Ts => l2.scale(&Scalar::frac(c, 3)),
            Model::Hs => l2.scale(&Scalar::frac(-c, 3)),
        }
    }

    /// Tabulated `E_0`, `-(N-2)(N-1)N l^2/3` for both
    /// Sutherland variants.
    pub fn table_e0(&self) -> RatCoeff {
        let n = self.n as i64;
        match self.model {
            Model::FreeCalogero | Model::Calogero => RatCoeff::zero(),
            Model::Ts | Model::Hs => RatCoeff::l().pow(2).scale(&Scalar::frac(-n * (n - 1) * (n - 2), 3)),
        }
    }

    /// The constant `1 + (N-1)(N l + 1)` of the oscillator model.
    pub fn oscillator_constant(&self) -> RatCoeff {
        let n = self.n as i64;
        let nl = RatCoeff::l().scale_int(n);
        &RatCoeff::one() + &(&nl + &RatCoeff::one()).scale_int(n - 1)
    }

    /// Logarithmic derivatives `d_k log psi_0` of the ground state.
    pub fn ground_state_weights(&self) -> Result<Vec<RatCoeff>> {
        match self.model {
            Model::FreeCalogero | Model::Calogero => Ok((0..self.n)
                .map(|k| {
                    let mut w = -(&self.omega() * &RatCoeff::coord(k));
                    for m in 0..self.n {
                        if m != k {
                            w = &w + &RatCoeff::inv_diff(k, m).scale_l();
                        }
                    }
                    w
                })
                .collect()),
            _ => Err(Error::Unsupported(format!("ground-state weights for the {} model", self.model))),
        }
    }

    // -- elementary operators --

    pub fn zero(&self) -> Operator {
        Operator::zero(self.n, self.chart())
    }

    pub fn one(&self) -> Operator {
        Operator::identity(self.n, self.chart())
    }

    pub fn func(&self, f: RatCoeff) -> Operator {
        Operator::function(self.n, self.chart(), f)
    }

    pub fn constant(&self, s: &Scalar) -> Operator {
        Operator::constant(self.n, self.chart(), s)
    }

    pub fn d(&self, k: usize) -> Operator {
        Operator::deriv(self.n, self.chart(), k)
    }

    pub fn x(&self, k: usize) -> Result<Operator> {
        Operator::coord(self.n, self.chart(), k)
    }

    pub fn fermion(&self, p: &FermionPoly) -> Operator {
        Operator::fermion(self.n, self.chart(), p)
    }

    pub fn psi(&self, k: usize) -> Operator {
        self.fermion(&FermionPoly::ann(k))
    }

    pub fn psi_dag(&self, k: usize) -> Operator {
        self.fermion(&FermionPoly::cre(k))
    }

    pub fn number(&self) -> Operator {
        self.fermion(&FermionPoly::number(self.n))
    }

    pub fn laplacian(&self) -> Operator {
        (0..self.n).fold(self.zero(), |acc, k| &acc + &self.d(k).pow(2))
    }

    pub fn inv_sqrt_n(&self) -> Scalar {
        Scalar::inv_sqrt(self.n as u64).expect("N lies in the radical basis")
    }

    /// `d/dy_N = N^{-1/2} sum_k d_k`.
    pub fn d_yn(&self) -> Operator {
        (0..self.n).fold(self.zero(), |acc, k| &acc + &self.d(k)).scale_scalar(&self.inv_sqrt_n())
    }

    /// `y_N = N^{-1/2} sum_k x_k`.
    pub fn y_n(&self) -> Result<Operator> {
        let mut acc = self.zero();
        for k in 0..self.n {
            acc = &acc + &self.x(k)?;
        }
        Ok(acc.scale_scalar(&self.inv_sqrt_n()))
    }

    /// `phi_N = N^{-1/2} sum_k psi_k`.
    pub fn phi_n(&self) -> FermionPoly {
        (0..self.n).fold(FermionPoly::zero(), |acc, k| &acc + &FermionPoly::ann(k)).scale(&self.inv_sqrt_n())
    }

    pub fn phi_n_dag(&self) -> FermionPoly {
        self.phi_n().adjoint()
    }
}

fn cot_like(k: usize, m: usize) -> RatCoeff {
    let sum = &Poly::var(k) + &Poly::var(m);
    &RatCoeff::from_poly(sum) * &RatCoeff::inv_diff(k, m)
}

trait ScaleL {
    fn scale_l(self) -> RatCoeff;
}

impl ScaleL for RatCoeff {
    fn scale_l(self) -> RatCoeff {
        &self * &RatCoeff::from_poly(Poly::var(VAR_L))
    }
}

/// Closed forms of `V'` in the model chart, used as an independent check of
/// differentiation.
pub fn tabulated_potential_prime(spec: &ModelSpec, k: usize, m: usize) -> RatCoeff {
    let l = RatCoeff::l();
    match spec.model {
        Model::FreeCalogero | Model::Calogero => -(&l * &RatCoeff::inv_diff(k, m).pow(2)),
        Model::Ts | Model::Hs => {
            let vv = RatCoeff::coord(k) * RatCoeff::coord(m);
            let sign = if spec.model == Model::Ts { 4 } else { -4 };
            (&(&l * &vv) * &RatCoeff::inv_diff(k, m).pow(2)).scale_int(sign)
        }
    }
}

// -- supercharges and superhamiltonians --

/// Bosonic components `(Q_j^-, Q_j^+)` with
/// `Q_j^{+-} = -+ d_j + w x_j - sum_{k != j} V_jk`.
pub fn component_charges(spec: &ModelSpec) -> (Vec<Operator>, Vec<Operator>) {
    let mut minus = Vec::with_capacity(spec.n);
    let mut plus = Vec::with_capacity(spec.n);
    for j in 0..spec.n {
        let mut pot = RatCoeff::zero();
        for k in 0..spec.n {
            if k != j {
                pot = &pot - &spec.potential(j, k);
            }
        }
        if spec.model == Model::Calogero {
            pot = &pot + &(&spec.omega() * &RatCoeff::coord(j));
        }
        let w = spec.func(pot);
        minus.push(&spec.d(j) + &w);
        plus.push(&(-spec.d(j)) + &w);
    }
    (minus, plus)
}

/// `(Q^-, Q^+)` with `Q^- = sum psi_j Q_j^+` and `Q^+ = sum psi_j^+ Q_j^-`.
pub fn supercharges(spec: &ModelSpec) -> (Operator, Operator) {
    let (cm, cp) = component_charges(spec);
    let mut qm = spec.zero();
    let mut qp = spec.zero();
    for j in 0..spec.n {
        qm = &qm + &(&spec.psi(j) * &cp[j]);
        qp = &qp + &(&spec.psi_dag(j) * &cm[j]);
    }
    (qm, qp)
}

/// The superhamiltonian written out in closed form.
pub fn superhamiltonian_closed(spec: &ModelSpec) -> Operator {
    let n = spec.n;
    let mut h = -spec.laplacian();
    match spec.model {
        Model::Calogero => {
            let w = spec.omega();
            let mut pot = RatCoeff::zero();
            for k in 0..n {
                pot = &pot + &(&w * &w * RatCoeff::coord(k).pow(2));
            }
            h = &h + &spec.func(pot);
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let inv2 = RatCoeff::inv_diff(i, j).pow(2);
                    let k = spec.fermion(&exchange_operator(i, j, n).expect("valid pair"));
                    let l = RatCoeff::l();
                    let t = &spec.func(&(&l * &l) * &inv2) - &(&k * &spec.func(&l * &inv2));
                    h = &h + &t;
                }
            }
            h = &h + &spec.number().scale(&w.scale_int(2));
            h = &h - &spec.func(&w * &spec.oscillator_constant());
        }
        _ => {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    h = &h + &spec.func(spec.potential(i, j).pow(2));
                    let k = spec.fermion(&exchange_operator(i, j, n).expect("valid pair"));
                    h = &h + &(&k * &spec.func(spec.potential_prime(i, j)));
                }
            }
            h = &h - &spec.func(spec.e0());
        }
    }
    h
}

/// Closed-form superhamiltonian, checked against `{Q+, Q-}`.
pub fn superhamiltonian(spec: &ModelSpec) -> Result<Operator> {
    let h = superhamiltonian_closed(spec);
    let (qm, qp) = supercharges(spec);
    let diff = &qp.anticommutator(&qm) - &h;
    if !diff.is_zero() {
        return Err(Error::ConstructionCheck { what: "H = {Q+, Q-}".into(), residual: diff.to_text() });
    }
    Ok(h)
}

/// Scalar Hamiltonian `-Laplacian + w^2 sum x^2 + sum_{i != j} (l^2 - l) u(x_i - x_j)`
/// with `u = 1/x^2`, `1/sin^2` or `1/sinh^2`.
pub fn scalar_hamiltonian(spec: &ModelSpec) -> Operator {
    let l = RatCoeff::l();
    let g = &(&l * &l) - &l;
    let mut f = RatCoeff::zero();
    for i in 0..spec.n {
        if spec.model == Model::Calogero {
            f = &f + &(&spec.omega() * &spec.omega() * RatCoeff::coord(i).pow(2));
        }
        for j in 0..spec.n {
            if i == j {
                continue;
            }
            let inv2 = RatCoeff::inv_diff(i, j).pow(2);
            let vv = RatCoeff::coord(i) * RatCoeff::coord(j);
            let u = match spec.model {
                Model::FreeCalogero | Model::Calogero => inv2,
                Model::Ts => (&vv * &inv2).scale_int(-4),
                Model::Hs => (&vv * &inv2).scale_int(4),
            };
            f = &f + &(&g * &u);
        }
    }
    &(-spec.laplacian()) + &spec.func(f)
}

// -- Lax matrices --

/// `L_km = -i d_k delta_km + i (1 - delta_km) V_km`.
pub fn lax_matrix(spec: &ModelSpec) -> OperatorMatrix {
    let i = Scalar::i();
    let minus_i = -Scalar::i();
    OperatorMatrix::from_fn(spec.n, spec.n, BasisTag::Particle, |k, m| {
        if k == m {
            spec.d(k).scale_scalar(&minus_i)
        } else {
            spec.func(spec.potential(k, m).scale(&i))
        }
    })
    .expect("uniform entries")
}

/// `L^{+-}_km = L_km +- i w x_k delta_km` (oscillator model).
pub fn lax_matrix_pm(spec: &ModelSpec, sign: i64) -> Result<OperatorMatrix> {
    let mut l = lax_matrix(spec);
    let iw = spec.omega().scale(&Scalar::i()).scale_int(sign);
    for k in 0..spec.n {
        let e = l.get(k, k) + &spec.func(&iw * &RatCoeff::coord(k));
        l.set(k, k, e);
    }
    if spec.chart() != Chart::Cartesian {
        return Err(Error::Unsupported("oscillator Lax matrices need the cartesian chart".into()));
    }
    Ok(l)
}

/// Fermionic bilinear `sum_km A_km psi_k^+ psi_m`.
pub fn bilinear(spec: &ModelSpec, a: &OperatorMatrix) -> Operator {
    let mut out = spec.zero();
    for k in 0..a.rows() {
        for m in 0..a.cols() {
            let e = a.get(k, m);
            if e.is_zero() {
                continue;
            }
            let w = spec.fermion(&(&FermionPoly::cre(k) * &FermionPoly::ann(m)));
            out = &out + &(e * &w);
        }
    }
    out
}

/// `M_lk = 2(1 - delta_lk) V'_lk - 2 delta_lk sum_{j != k} V'_kj`.
pub fn m_matrix(spec: &ModelSpec) -> OperatorMatrix {
    OperatorMatrix::from_fn(spec.n, spec.n, BasisTag::Particle, |l, k| {
        if l == k {
            let mut s = RatCoeff::zero();
            for j in 0..spec.n {
                if j != k {
                    s = &s + &spec.potential_prime(k, j);
                }
            }
            spec.func(s.scale_int(-2))
        } else {
            spec.func(spec.potential_prime(l, k).scale_int(2))
        }
    })
    .expect("uniform entries")
}

/// `delta L = i w sum_k x_k psi_k^+ psi_k`.
pub fn delta_lax(spec: &ModelSpec) -> Operator {
    let iw = spec.omega().scale(&Scalar::i());
    (0..spec.n).fold(spec.zero(), |acc, k| {
        &acc + &spec.fermion(&FermionPoly::occupation(k)).scale(&(&iw * &RatCoeff::coord(k)))
    })
}

/// `(delta Q^-, delta Q^+) = (w sum x_k psi_k, w sum x_k psi_k^+)`.
pub fn delta_charges(spec: &ModelSpec) -> (Operator, Operator) {
    let w = spec.omega();
    let mut m = spec.zero();
    let mut p = spec.zero();
    for k in 0..spec.n {
        let f = &w * &RatCoeff::coord(k);
        m = &m + &spec.psi(k).scale(&f);
        p = &p + &spec.psi_dag(k).scale(&f);
    }
    (m, p)
}

/// `Q_N^{+-} = -+ d/dy_N + w y_N`.
pub fn cm_charges(spec: &ModelSpec) -> Result<(Operator, Operator)> {
    let wy = spec.y_n()?.scale(&spec.omega());
    let d = spec.d_yn();
    Ok((&d + &wy, &(-d) + &wy))
}

// -- bundle --

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Op(Operator),
    Mat(OperatorMatrix),
}

impl Item {
    pub fn op(&self) -> Result<&Operator> {
        match self {
            Item::Op(o) => Ok(o),
            Item::Mat(_) => Err(Error::Usage("expected an operator, found a matrix".into())),
        }
    }

    pub fn mat(&self) -> Result<&OperatorMatrix> {
        match self {
            Item::Mat(m) => Ok(m),
            Item::Op(_) => Err(Error::Usage("expected a matrix, found an operator".into())),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Item::Op(o) => format!("{}\n", o.to_text()),
            Item::Mat(m) => m.to_text(),
        }
    }
}

type Slot = Arc<OnceLock<Result<Arc<Item>>>>;

/// Lazily built, shared operators of one model, addressed by stable keys.
pub struct Bundle {
    spec: ModelSpec,
    slots: Mutex<HashMap<String, Slot>>,
}

/// Keys available for every model.
pub const COMMON_KEYS: &[&str] = &[
    "Qminus", "Qplus", "H", "Nf", "Lax", "L", "M", "H0", "I1", "I2", "I3", "I4", "qminus", "qplus", "QCminus",
    "QCplus", "h", "HC", "D",
];

/// Keys available for the oscillator model only.
pub const CALOGERO_KEYS: &[&str] = &[
    "Laxplus", "Laxminus", "dLax", "Lplus", "Lminus", "L1", "L2", "Lax1", "Lax2", "dQminus", "dQplus", "Qhatminus",
    "Qhatplus", "QNminus", "QNplus", "qhatminus", "qhatplus", "Dplus", "Dminus", "dD", "Hhat",
];

impl Bundle {
    pub fn new(spec: ModelSpec) -> Self {
        Bundle { spec, slots: Mutex::new(HashMap::new()) }
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// All keys valid for this model, including the indexed families
    /// `O_p_m` (p+m <= 4) and `I_j_n` (j = 1, 2; n <= 2).
    pub fn keys(&self) -> Vec<String> {
        let mut out: Vec<String> = COMMON_KEYS.iter().map(|s| s.to_string()).collect();
        if self.spec.model == Model::Calogero {
            out.extend(CALOGERO_KEYS.iter().map(|s| s.to_string()));
            for p in 0..=4 {
                for m in 0..=(4 - p) {
                    out.push(format!("O_{p}_{m}"));
                }
            }
            for j in 1..=2 {
                for n in 1..=2 {
                    out.push(format!("I_{j}_{n}"));
                }
            }
        }
        out
    }

    pub fn get(&self, key: &str) -> Result<Arc<Item>> {
        let slot = {
            let mut slots = self.slots.lock().expect("bundle lock");
            slots.entry(key.to_string()).or_default().clone()
        };
        slot.get_or_init(|| self.build(key).map(Arc::new)).clone()
    }

    pub fn op(&self, key: &str) -> Result<Operator> {
        Ok(self.get(key)?.op()?.clone())
    }

    pub fn mat(&self, key: &str) -> Result<OperatorMatrix> {
        Ok(self.get(key)?.mat()?.clone())
    }

    fn need_calogero(&self, key: &str) -> Result<()> {
        if self.spec.model != Model::Calogero {
            return Err(Error::Usage(format!("`{key}` is defined for the calogero model only")));
        }
        Ok(())
    }

    fn build(&self, key: &str) -> Result<Item> {
        let s = &self.spec;
        let op = |o: Operator| Ok(Item::Op(o));
        let mat = |m: OperatorMatrix| Ok(Item::Mat(m));
        if CALOGERO_KEYS.contains(&key) || key.starts_with("O_") || key.starts_with("I_") {
            self.need_calogero(key)?;
        }
        match key {
            "Qminus" => op(supercharges(s).0),
            "Qplus" => op(supercharges(s).1),
            "H" => op(superhamiltonian(s)?),
            "Nf" => op(s.number()),
            "Lax" => {
                let free = ModelSpec { model: if s.model == Model::Calogero { Model::FreeCalogero } else { s.model }, ..*s };
                op(bilinear(s, &lax_matrix(&free)))
            }
            "L" => mat(lax_matrix(s)),
            "M" => mat(m_matrix(s)),
            "H0" => op(self.op("H")?.sector_block(0, BasisTag::Particle, None)?.get(0, 0).clone()),
            "I1" | "I2" | "I3" | "I4" => {
                let n: u32 = key[1..].parse().expect("digit");
                op(self.mat("L")?.pow(n).total_sum())
            }
            "Laxplus" => op(bilinear(s, &self.mat("Lplus")?)),
            "Laxminus" => op(bilinear(s, &self.mat("Lminus")?)),
            "dLax" => op(delta_lax(s)),
            "Lplus" => mat(lax_matrix_pm(s, 1)?),
            "Lminus" => mat(lax_matrix_pm(s, -1)?),
            "L1" => mat(self.mat("Lplus")?.mul(&self.mat("Lminus")?)),
            "L2" => mat(self.mat("Lminus")?.mul(&self.mat("Lplus")?)),
            "Lax1" => op(&self.op("Laxplus")? * &self.op("Laxminus")?),
            "Lax2" => op(&self.op("Laxminus")? * &self.op("Laxplus")?),
            "dQminus" => op(delta_charges(s).0),
            "dQplus" => op(delta_charges(s).1),
            "Qhatminus" => op(self.op("Qminus")?.flip_omega()),
            "Qhatplus" => op(self.op("Qplus")?.flip_omega()),
            "QNminus" => op(cm_charges(s)?.0),
            "QNplus" => op(cm_charges(s)?.1),
            "Hhat" => op(self.op("H")?.flip_omega()),
            "qminus" | "qplus" | "QCminus" | "QCplus" | "h" | "HC" | "qhatminus" | "qhatplus" => {
                let split = crate::jacobi::cm_split(self)?;
                op(match key {
                    "qminus" => split.q_minus,
                    "qplus" => split.q_plus,
                    "QCminus" => split.qc_minus,
                    "QCplus" => split.qc_plus,
                    "h" => split.h,
                    "HC" => split.hc,
                    "qhatminus" => split.hat.ok_or_else(|| Error::Usage("no hatted charges".into()))?.0,
                    _ => split.hat.ok_or_else(|| Error::Usage("no hatted charges".into()))?.1,
                })
            }
            "D" | "Dplus" | "Dminus" | "dD" => {
                let set = crate::jacobi::assemble_dunkl(s)?;
                op(match key {
                    "D" => set.assembled,
                    "Dplus" => set.plus.ok_or_else(|| Error::Usage("no oscillator Dunkl operators".into()))?,
                    "Dminus" => set.minus.ok_or_else(|| Error::Usage("no oscillator Dunkl operators".into()))?,
                    _ => set.delta.ok_or_else(|| Error::Usage("no oscillator Dunkl operators".into()))?,
                })
            }
            _ => {
                if let Some((p, m)) = parse_pair(key, "O_") {
                    if p + m > 4 {
                        return Err(Error::Usage(format!("`{key}`: p + m must be at most 4")));
                    }
                    let prod = self.mat("Lminus")?.pow(m).mul(&self.mat("Lplus")?.pow(p));
                    return op(prod.total_sum());
                }
                if let Some((j, n)) = parse_pair(key, "I_") {
                    if !(1..=2).contains(&j) || !(1..=2).contains(&n) {
                        return Err(Error::Usage(format!("`{key}`: need j in 1..=2 and n in 1..=2")));
                    }
                    let base = self.mat(if j == 1 { "L1" } else { "L2" })?;
                    return op(base.pow(n).total_sum());
                }
                Err(Error::Usage(format!("unknown operator key `{key}`")))
            }
        }
    }
}

fn parse_pair(key: &str, prefix: &str) -> Option<(u32, u32)> {
    let rest = key.strip_prefix(prefix)?;
    let (a, b) = rest.split_once('_')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}
