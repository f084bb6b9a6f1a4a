//! Jacobi coordinates, centre-of-mass separation, hook representations of
//! the symmetric group realised on fermions, Clebsch-Gordan bilinears and
//! local Dunkl operators.

use serde_json::json;

use crate::coeff::RatCoeff;
use crate::error::{Error, Result};
use crate::fermion::{exchange_operator, jacobi_fermion, sector_states, FermionPoly, FockVector, Modes};
use crate::matrix::dense::{self, Mat};
use crate::matrix::{BasisTag, OperatorMatrix};
use crate::model::{supercharges, Bundle, Model, ModelSpec};
use crate::operator::Operator;
use crate::scalar::Scalar;

/// Orthogonal change of variables to Jacobi coordinates. The last row is the
/// centre of mass, `R_{N l} = N^{-1/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiMatrix {
    r: Mat,
}

impl JacobiMatrix {
    /// `R_{k j} = 1/sqrt(k(k+1))` for `j <= k`, `R_{k,k+1} = -k/sqrt(k(k+1))`.
    pub fn standard(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Usage(format!("Jacobi matrix needs N >= 2, got {n}")));
        }
        let mut r = vec![vec![Scalar::zero(); n]; n];
        for (kappa, row) in r.iter_mut().enumerate().take(n - 1) {
            let k = (kappa + 1) as u64;
            let norm = Scalar::inv_sqrt(k * (k + 1))?;
            for e in row.iter_mut().take(kappa + 1) {
                *e = norm.clone();
            }
            row[kappa + 1] = norm.scale_int(-(k as i64));
        }
        let last = Scalar::inv_sqrt(n as u64)?;
        r[n - 1] = vec![last; n];
        Ok(JacobiMatrix { r })
    }

    pub fn from_rows(r: Mat) -> Result<Self> {
        if r.is_empty() || r.iter().any(|row| row.len() != r.len()) {
            return Err(Error::DimensionMismatch("Jacobi matrix must be square".into()));
        }
        Ok(JacobiMatrix { r })
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.r
    }

    pub fn get(&self, kappa: usize, k: usize) -> &Scalar {
        &self.r[kappa][k]
    }

    pub fn is_orthogonal(&self) -> bool {
        dense::mul(&self.r, &dense::transpose(&self.r)) == dense::identity(self.n())
    }
}

/// Fermionic Jacobi variables and the basis built from them.
#[derive(Clone, Debug)]
pub struct Jacobi {
    r: JacobiMatrix,
    phi: Vec<FermionPoly>,
    phi_dag: Vec<FermionPoly>,
}

fn modes_list(m: Modes) -> Vec<usize> {
    (0..16).filter(|i| m & (1 << i) != 0).collect()
}

/// `<row_i| p |col_j>`.
pub fn fermion_matrix(p: &FermionPoly, rows: &[FockVector], cols: &[FockVector]) -> Mat {
    let images: Vec<FockVector> = cols.iter().map(|c| p.apply(c)).collect();
    rows.iter().map(|r| images.iter().map(|c| r.inner(c)).collect()).collect()
}

impl Jacobi {
    pub fn new(r: JacobiMatrix) -> Result<Self> {
        let n = r.n();
        let phi = (0..n).map(|k| jacobi_fermion(k, r.rows())).collect::<Result<Vec<_>>>()?;
        let phi_dag = phi.iter().map(FermionPoly::adjoint).collect();
        Ok(Jacobi { r, phi, phi_dag })
    }

    pub fn standard(n: usize) -> Result<Self> {
        Jacobi::new(JacobiMatrix::standard(n)?)
    }

    pub fn n(&self) -> usize {
        self.r.n()
    }

    pub fn matrix(&self) -> &JacobiMatrix {
        &self.r
    }

    pub fn phi(&self, k: usize) -> &FermionPoly {
        &self.phi[k]
    }

    pub fn phi_dag(&self, k: usize) -> &FermionPoly {
        &self.phi_dag[k]
    }

    /// Index sets `beta` of `M` relative modes (all below the centre of mass).
    pub fn free_states(&self, m: usize) -> Vec<Modes> {
        sector_states(self.n() - 1, m)
    }

    /// `phi_{b_1}^+ .. phi_{b_M}^+`, optionally preceded by `phi_N^+`.
    pub fn ket(&self, beta: Modes, with_cm: bool) -> FermionPoly {
        let mut p = if with_cm { self.phi_dag[self.n() - 1].clone() } else { FermionPoly::one() };
        for b in modes_list(beta) {
            p = &p * &self.phi_dag[b];
        }
        p
    }

    pub fn vector(&self, beta: Modes, with_cm: bool) -> FockVector {
        self.ket(beta, with_cm).apply(&FockVector::basis(0))
    }

    pub fn free_vectors(&self, m: usize) -> Vec<FockVector> {
        self.free_states(m).into_iter().map(|b| self.vector(b, false)).collect()
    }

    /// Jacobi basis of the sector with `m` fermions: `|beta>` then `|N beta'>`.
    pub fn sector(&self, m: usize) -> Vec<FockVector> {
        let mut out = if m < self.n() { self.free_vectors(m) } else { Vec::new() };
        if m >= 1 {
            out.extend(self.free_states(m - 1).into_iter().map(|b| self.vector(b, true)));
        }
        out
    }

    /// `|sigma><alpha|` as a normal-ordered fermionic polynomial.
    pub fn outer(&self, sigma: Modes, alpha: Modes) -> FermionPoly {
        let p0 = FermionPoly::vacuum_projector(self.n());
        &(&self.ket(sigma, false) * &p0) * &self.ket(alpha, false).adjoint()
    }

    /// `(T^(M)_ij)_{gamma beta} = <gamma| K_ij |beta>` on relative states.
    pub fn rep_matrix(&self, m: usize, i: usize, j: usize) -> Result<Mat> {
        if m >= self.n() {
            return Err(Error::InvalidIndex(format!("representation index M={m} must be below N={}", self.n())));
        }
        let k = exchange_operator(i, j, self.n())?;
        let v = self.free_vectors(m);
        Ok(fermion_matrix(&k, &v, &v))
    }

    /// The standard representation `T^L = T^(1)`.
    pub fn standard_rep(&self, i: usize, j: usize) -> Result<Mat> {
        self.rep_matrix(1, i, j)
    }

    /// `C_xi = sum_k R_{xi k} psi_k^+ psi_k`.
    pub fn clebsch(&self, xi: usize) -> Result<FermionPoly> {
        if xi + 1 >= self.n() {
            return Err(Error::InvalidIndex(format!("Clebsch-Gordan index {} must be below N={}", xi + 1, self.n())));
        }
        Ok((0..self.n()).fold(FermionPoly::zero(), |acc, k| {
            &acc + &FermionPoly::occupation(k).scale(self.r.get(xi, k))
        }))
    }

    /// `<sigma| C_xi |beta>` on the relative states with `m` fermions.
    pub fn clebsch_matrix(&self, xi: usize, m: usize) -> Result<Mat> {
        let v = self.free_vectors(m);
        Ok(fermion_matrix(&self.clebsch(xi)?, &v, &v))
    }

    /// `sum_xi <sigma|C_xi|beta> R_{xi k}` for each particle `k`.
    fn coupling(&self, m: usize) -> Result<Vec<Mat>> {
        let d = self.free_states(m).len();
        let cs = (0..self.n() - 1).map(|xi| self.clebsch_matrix(xi, m)).collect::<Result<Vec<_>>>()?;
        Ok((0..self.n())
            .map(|k| {
                let mut s = vec![vec![Scalar::zero(); d]; d];
                for (xi, c) in cs.iter().enumerate() {
                    let rk = self.r.get(xi, k);
                    for a in 0..d {
                        for b in 0..d {
                            s[a][b] += &(&c[a][b] * rk);
                        }
                    }
                }
                s
            })
            .collect())
    }

    /// `sum_{M,sigma,alpha} <sigma|A|alpha> [|sigma><alpha| + |N sigma><alpha N|]`
    /// with `sigma`, `alpha` ranging over relative states of every fermion number.
    pub fn relative_projection(&self, a: &FermionPoly) -> FermionPoly {
        let n = self.n();
        let states: Vec<Modes> = (0..n).flat_map(|m| self.free_states(m)).collect();
        let vecs: Vec<FockVector> = states.iter().map(|&b| self.vector(b, false)).collect();
        let mat = fermion_matrix(a, &vecs, &vecs);
        let mut acc = FermionPoly::zero();
        for (i, &s) in states.iter().enumerate() {
            for (j, &t) in states.iter().enumerate() {
                if !mat[i][j].is_zero() {
                    acc = &acc + &self.outer(s, t).scale(&mat[i][j]);
                }
            }
        }
        &acc + &(&(&self.phi_dag[n - 1] * &acc) * &self.phi[n - 1])
    }

    /// Right-hand side of the completeness relation for the relative basis:
    /// `A + [phi_N^+, A] phi_N - phi_N^+ [phi_N, A] + {phi_N^+, [phi_N, A]} phi_N^+ phi_N`.
    pub fn projection_closed_form(&self, a: &FermionPoly) -> FermionPoly {
        let n = self.n();
        let (p, pd) = (&self.phi[n - 1], &self.phi_dag[n - 1]);
        let c = p.commutator(a);
        let mut out = a + &(&pd.commutator(a) * p);
        out = &out - &(pd * &c);
        &out + &(&pd.anticommutator(&c) * &(pd * p))
    }
}

/// Jacobi basis of the sector with `m` fermions for the rotation `r`.
pub fn jacobi_sector(r: &[Vec<Scalar>], m: usize) -> Result<Vec<FockVector>> {
    let jac = Jacobi::new(JacobiMatrix::from_rows(r.to_vec())?)?;
    if m > jac.n() {
        return Err(Error::InvalidIndex(format!("fermion number {m} exceeds N={}", jac.n())));
    }
    Ok(jac.sector(m))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// -- local Dunkl operators --

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Plus,
    Minus,
}

fn oscillator_only(spec: &ModelSpec, what: &str) -> Result<()> {
    if spec.model != Model::Calogero {
        return Err(Error::Unsupported(format!("{what} is defined for the calogero model only")));
    }
    Ok(())
}

/// Matrix `D^(M)` in the relative basis with `m` fermions.
pub fn local_dunkl(spec: &ModelSpec, jac: &Jacobi, m: usize, variant: Variant) -> Result<OperatorMatrix> {
    if m >= spec.n {
        return Err(Error::InvalidIndex(format!("local Dunkl operator needs M < N, got M={m}")));
    }
    if variant != Variant::Plain {
        oscillator_only(spec, "the oscillator Dunkl operator")?;
    }
    let n = spec.n;
    let d = jac.free_states(m).len();
    let s = jac.coupling(m)?;
    let mut reps = vec![vec![None; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let t = jac.rep_matrix(m, i, j)?;
            reps[i][j] = Some(t.clone());
            reps[j][i] = Some(t);
        }
    }
    let i_unit = Scalar::i();
    let sign = match variant {
        Variant::Plain => 0,
        Variant::Plus => 1,
        Variant::Minus => -1,
    };
    let b: Vec<Vec<Operator>> = (0..n)
        .map(|k| {
            (0..d * d)
                .map(|idx| {
                    let (beta, alpha) = (idx / d, idx % d);
                    let mut f = RatCoeff::zero();
                    for mm in 0..n {
                        if mm == k {
                            continue;
                        }
                        let t = &reps[k][mm].as_ref().expect("pair filled")[beta][alpha];
                        if !t.is_zero() {
                            f = &f + &spec.potential(k, mm).scale(&(&i_unit * t));
                        }
                    }
                    let mut op = spec.func(f);
                    if beta == alpha {
                        op = &op - &spec.d(k).scale_scalar(&i_unit);
                        if sign != 0 {
                            let osc = (&spec.omega() * &RatCoeff::coord(k)).scale(&i_unit).scale_int(sign);
                            op = &op + &spec.func(osc);
                        }
                    }
                    op
                })
                .collect()
        })
        .collect();
    OperatorMatrix::from_fn(d, d, BasisTag::Jacobi, |sigma, alpha| {
        let mut acc = spec.zero();
        for k in 0..n {
            for beta in 0..d {
                let c = &s[k][sigma][beta];
                if !c.is_zero() {
                    acc = &acc + &b[k][beta * d + alpha].scale_scalar(c);
                }
            }
        }
        acc
    })
}

/// `delta D^(M)_{sigma alpha} = sum_k <sigma|C_xi|alpha> R_{xi k} i w x_k`.
pub fn delta_dunkl(spec: &ModelSpec, jac: &Jacobi, m: usize) -> Result<OperatorMatrix> {
    oscillator_only(spec, "the oscillator Dunkl correction")?;
    if m >= spec.n {
        return Err(Error::InvalidIndex(format!("local Dunkl operator needs M < N, got M={m}")));
    }
    let d = jac.free_states(m).len();
    let s = jac.coupling(m)?;
    let iw = spec.omega().scale(&Scalar::i());
    OperatorMatrix::from_fn(d, d, BasisTag::Jacobi, |sigma, alpha| {
        let mut f = RatCoeff::zero();
        for (k, sk) in s.iter().enumerate() {
            let c = &sk[sigma][alpha];
            if !c.is_zero() {
                f = &f + &(&iw * &RatCoeff::coord(k)).scale(c);
            }
        }
        spec.func(f)
    })
}

/// `sum_{M,sigma,alpha} B^(M)_{sigma alpha} [|sigma><alpha| + |N sigma><alpha N|]`.
pub fn assemble(spec: &ModelSpec, jac: &Jacobi, blocks: &[OperatorMatrix]) -> Operator {
    let n = spec.n;
    let phi = spec.fermion(jac.phi(n - 1));
    let phi_dag = spec.fermion(jac.phi_dag(n - 1));
    let mut acc = spec.zero();
    for (m, block) in blocks.iter().enumerate() {
        let states = jac.free_states(m);
        for (a, &sigma) in states.iter().enumerate() {
            for (b, &alpha) in states.iter().enumerate() {
                let e = block.get(a, b);
                if e.is_zero() {
                    continue;
                }
                acc = &acc + &(e * &spec.fermion(&jac.outer(sigma, alpha)));
            }
        }
    }
    &acc + &(&(&phi_dag * &acc) * &phi)
}

/// Local Dunkl matrices for every `M < N` and their assembled operators.
#[derive(Clone, Debug)]
pub struct DunklSet {
    pub blocks: Vec<OperatorMatrix>,
    pub plus_blocks: Option<Vec<OperatorMatrix>>,
    pub minus_blocks: Option<Vec<OperatorMatrix>>,
    pub delta_blocks: Option<Vec<OperatorMatrix>>,
    pub assembled: Operator,
    pub plus: Option<Operator>,
    pub minus: Option<Operator>,
    pub delta: Option<Operator>,
}

/// Oscillator-free counterpart of a model.
pub fn free_part(spec: &ModelSpec) -> ModelSpec {
    if spec.model == Model::Calogero {
        ModelSpec { model: Model::FreeCalogero, ..*spec }
    } else {
        *spec
    }
}

pub fn dunkl_blocks(spec: &ModelSpec, jac: &Jacobi, variant: Variant) -> Result<Vec<OperatorMatrix>> {
    (0..spec.n).map(|m| local_dunkl(spec, jac, m, variant)).collect()
}

/// Builds the Dunkl set and checks the assembled operator against its closed
/// form in terms of the super Lax operator and the supercharges.
pub fn assemble_dunkl(spec: &ModelSpec) -> Result<DunklSet> {
    let jac = Jacobi::standard(spec.n)?;
    let blocks = dunkl_blocks(spec, &jac, Variant::Plain)?;
    let assembled = assemble(spec, &jac, &blocks);
    let closed = dunkl_closed_form(spec);
    let diff = &assembled - &closed;
    if !diff.is_zero() {
        return Err(Error::ConstructionCheck { what: "assembled Dunkl operator".into(), residual: diff.to_text() });
    }
    let mut set = DunklSet {
        blocks,
        plus_blocks: None,
        minus_blocks: None,
        delta_blocks: None,
        assembled,
        plus: None,
        minus: None,
        delta: None,
    };
    if spec.model == Model::Calogero {
        let plus = dunkl_blocks(spec, &jac, Variant::Plus)?;
        let minus = dunkl_blocks(spec, &jac, Variant::Minus)?;
        let delta = (0..spec.n).map(|m| delta_dunkl(spec, &jac, m)).collect::<Result<Vec<_>>>()?;
        set.plus = Some(assemble(spec, &jac, &plus));
        set.minus = Some(assemble(spec, &jac, &minus));
        set.delta = Some(assemble(spec, &jac, &delta));
        set.plus_blocks = Some(plus);
        set.minus_blocks = Some(minus);
        set.delta_blocks = Some(delta);
    }
    Ok(set)
}

fn i_over_sqrt_n(spec: &ModelSpec) -> Scalar {
    &Scalar::i() * &spec.inv_sqrt_n()
}

fn phi_ops(spec: &ModelSpec) -> (Operator, Operator) {
    (spec.fermion(&spec.phi_n()), spec.fermion(&spec.phi_n_dag()))
}

/// `N - 2 phi_N^+ phi_N`.
fn relative_number(spec: &ModelSpec) -> Operator {
    let (phi, phi_dag) = phi_ops(spec);
    &spec.number() - &(&phi_dag * &phi).scale_int(2)
}

/// `L + i N^{-1/2} [Q+ phi_N - phi_N^+ Q- + (N - 2 phi_N^+ phi_N) d/dy_N]`
/// with oscillator-free supercharges.
pub fn dunkl_closed_form(spec: &ModelSpec) -> Operator {
    let free = free_part(spec);
    let (qm, qp) = supercharges(&free);
    let (phi, phi_dag) = phi_ops(spec);
    let lax = crate::model::bilinear(spec, &crate::model::lax_matrix(&free));
    let inner = &(&(&qp * &phi) - &(&phi_dag * &qm)) + &(&relative_number(spec) * &spec.d_yn());
    &lax + &inner.scale_scalar(&i_over_sqrt_n(spec))
}

/// `D + i N^{-1/2} [phi_N^+ q- - q+ phi_N - N d/dy_N]`, the Lax operator
/// rebuilt from the Dunkl operator and the relative supercharges.
pub fn lax_from_dunkl(dunkl: &Operator, split: &CmSplit, spec: &ModelSpec) -> Operator {
    let (phi, phi_dag) = phi_ops(spec);
    let inner = &(&(&phi_dag * &split.q_minus) - &(&split.q_plus * &phi)) - &(&spec.number() * &spec.d_yn());
    dunkl + &inner.scale_scalar(&i_over_sqrt_n(spec))
}

/// `delta L - i N^{-1/2} [dQ+ phi_N + phi_N^+ dQ-] + i w N^{-1/2} y_N [2 phi_N^+ phi_N - N]`.
pub fn delta_dunkl_closed_form(spec: &ModelSpec) -> Result<Operator> {
    oscillator_only(spec, "the oscillator Dunkl correction")?;
    let (dqm, dqp) = crate::model::delta_charges(spec);
    let (phi, phi_dag) = phi_ops(spec);
    let c = i_over_sqrt_n(spec);
    let charges = (&(&dqp * &phi) + &(&phi_dag * &dqm)).scale_scalar(&-c.clone());
    let wy = spec.y_n()?.scale(&spec.omega());
    let cm = (&wy * &(-relative_number(spec))).scale_scalar(&c);
    Ok(&(&crate::model::delta_lax(spec) + &charges) + &cm)
}

/// The closed forms of `D+` and `D-` written with the hatted supercharges.
pub fn ladder_dunkl_closed_forms(bundle: &Bundle) -> Result<(Operator, Operator)> {
    let spec = bundle.spec();
    oscillator_only(spec, "the oscillator Dunkl operators")?;
    let (phi, phi_dag) = phi_ops(spec);
    let c = i_over_sqrt_n(spec);
    let rel = relative_number(spec);
    let (qn_minus, qn_plus) = (bundle.op("QNminus")?, bundle.op("QNplus")?);
    let plus_inner = &(&(&bundle.op("Qhatplus")? * &phi) - &(&phi_dag * &bundle.op("Qminus")?)) - &(&rel * &qn_plus);
    let minus_inner =
        &(&(&bundle.op("Qplus")? * &phi) - &(&phi_dag * &bundle.op("Qhatminus")?)) + &(&rel * &qn_minus);
    Ok((
        &bundle.op("Laxplus")? + &plus_inner.scale_scalar(&c),
        &bundle.op("Laxminus")? + &minus_inner.scale_scalar(&c),
    ))
}

/// `L+ = D+ + i N^{-1/2} [phi_N^+ q- - qhat+ phi_N + N Q_N^+]` and
/// `L- = D- + i N^{-1/2} [phi_N^+ qhat- - q+ phi_N - N Q_N^-]`.
pub fn ladder_lax_from_dunkl(bundle: &Bundle) -> Result<(Operator, Operator)> {
    let spec = bundle.spec();
    oscillator_only(spec, "the oscillator Lax operators")?;
    let (phi, phi_dag) = phi_ops(spec);
    let c = i_over_sqrt_n(spec);
    let nf = spec.number();
    let plus_inner = &(&(&phi_dag * &bundle.op("qminus")?) - &(&bundle.op("qhatplus")? * &phi))
        + &(&nf * &bundle.op("QNplus")?);
    let minus_inner = &(&(&phi_dag * &bundle.op("qhatminus")?) - &(&bundle.op("qplus")? * &phi))
        - &(&nf * &bundle.op("QNminus")?);
    Ok((
        &bundle.op("Dplus")? + &plus_inner.scale_scalar(&c),
        &bundle.op("Dminus")? + &minus_inner.scale_scalar(&c),
    ))
}

/// The same relations with the centre-of-mass signs exactly as commonly
/// printed, `-N Q_N^+` in the first and `+N Q_N^-` in the second.
pub fn ladder_lax_printed_signs(bundle: &Bundle) -> Result<(Operator, Operator)> {
    let spec = bundle.spec();
    let (plus, minus) = ladder_lax_from_dunkl(bundle)?;
    let c = i_over_sqrt_n(spec).scale_int(2);
    let nf = spec.number();
    Ok((
        &plus - &(&nf * &bundle.op("QNplus")?).scale_scalar(&c),
        &minus + &(&nf * &bundle.op("QNminus")?).scale_scalar(&c),
    ))
}

// -- centre-of-mass separation --

/// `Q = q + Q_C`, `H = h + H_C`, and for the oscillator model the same with
/// the sign of `w` inverted.
#[derive(Clone, Debug)]
pub struct CmSplit {
    pub q_minus: Operator,
    pub q_plus: Operator,
    pub qc_minus: Operator,
    pub qc_plus: Operator,
    pub h: Operator,
    pub hc: Operator,
    pub hat: Option<(Operator, Operator)>,
    pub hat_c: Option<(Operator, Operator)>,
}

pub fn cm_split(bundle: &Bundle) -> Result<CmSplit> {
    let spec = bundle.spec();
    let (phi, phi_dag) = phi_ops(spec);
    let d = spec.d_yn();
    let (qm, qp, h) = (bundle.op("Qminus")?, bundle.op("Qplus")?, bundle.op("H")?);
    if spec.model == Model::Calogero {
        let (qn_minus, qn_plus) = crate::model::cm_charges(spec)?;
        let qc_minus = &phi * &qn_plus;
        let qc_plus = &phi_dag * &qn_minus;
        let w = spec.omega();
        let y = spec.y_n()?;
        let hc = &(&(-d.pow(2)) + &(&y * &y).scale(&(&w * &w))) + &(&(&phi_dag * &phi).scale_int(2) - &spec.one()).scale(&w);
        let hat_c_minus = -(&phi * &qn_minus);
        let hat_c_plus = -(&phi_dag * &qn_plus);
        let hat = (&qm.flip_omega() - &hat_c_minus, &qp.flip_omega() - &hat_c_plus);
        Ok(CmSplit {
            q_minus: &qm - &qc_minus,
            q_plus: &qp - &qc_plus,
            qc_minus,
            qc_plus,
            h: &h - &hc,
            hc,
            hat: Some(hat),
            hat_c: Some((hat_c_minus, hat_c_plus)),
        })
    } else {
        let qc_minus = -(&phi * &d);
        let qc_plus = &phi_dag * &d;
        let hc = -d.pow(2);
        Ok(CmSplit {
            q_minus: &qm - &qc_minus,
            q_plus: &qp - &qc_plus,
            qc_minus,
            qc_plus,
            h: &h - &hc,
            hc,
            hat: None,
            hat_c: None,
        })
    }
}

/// Sector Hamiltonian `H~^(M)` on relative states with `m` fermions.
pub fn relative_hamiltonian(spec: &ModelSpec, jac: &Jacobi, m: usize) -> Result<OperatorMatrix> {
    if m >= spec.n {
        return Err(Error::InvalidIndex(format!("relative Hamiltonian needs M < N, got M={m}")));
    }
    let n = spec.n;
    let d = jac.free_states(m).len();
    let mut reps = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            reps.push((i, j, jac.rep_matrix(m, i, j)?));
        }
    }
    let mut diag = -spec.laplacian();
    if spec.model == Model::Calogero {
        let w = spec.omega();
        let mut f = RatCoeff::zero();
        for k in 0..n {
            f = &f + &(&w * &w * RatCoeff::coord(k).pow(2));
        }
        let nn = n as i64;
        let shift = &RatCoeff::from_int(2 * m as i64 - 1) - &(&RatCoeff::l().scale_int(nn) + &RatCoeff::one()).scale_int(nn - 1);
        f = &f + &(&w * &shift);
        let l = RatCoeff::l();
        for (i, j, _) in &reps {
            f = &f + &(&l * &l * RatCoeff::inv_diff(*i, *j).pow(2)).scale_int(2);
        }
        diag = &diag + &spec.func(f);
    } else {
        let mut f = -spec.e0();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    f = &f + &spec.potential(i, j).pow(2);
                }
            }
        }
        diag = &diag + &spec.func(f);
    }
    OperatorMatrix::from_fn(d, d, BasisTag::Jacobi, |a, b| {
        let mut f = RatCoeff::zero();
        for (i, j, t) in &reps {
            let c = &t[a][b];
            if c.is_zero() {
                continue;
            }
            // both orderings of the pair contribute equally
            let g = if spec.model == Model::Calogero {
                (&RatCoeff::l() * &RatCoeff::inv_diff(*i, *j).pow(2)).scale_int(-2)
            } else {
                spec.potential_prime(*i, *j).scale_int(2)
            };
            f = &f + &g.scale(c);
        }
        let mut e = spec.func(f);
        if a == b {
            e = &e + &diag;
        }
        e
    })
}

/// JSON export of the Jacobi matrix, representation matrices and Dunkl blocks.
pub fn export_json(spec: &ModelSpec) -> Result<serde_json::Value> {
    let jac = Jacobi::standard(spec.n)?;
    let n = spec.n;
    let mut reps = Vec::new();
    for m in 0..n {
        for i in 0..n {
            for j in (i + 1)..n {
                reps.push(json!({
                    "m": m,
                    "i": i + 1,
                    "j": j + 1,
                    "matrix": dense::to_json(&jac.rep_matrix(m, i, j)?),
                }));
            }
        }
    }
    let blocks = |v: Variant| -> Result<Vec<serde_json::Value>> {
        Ok(dunkl_blocks(spec, &jac, v)?
            .iter()
            .enumerate()
            .map(|(m, b)| json!({ "m": m, "matrix": b.to_json() }))
            .collect())
    };
    let mut out = json!({
        "model": spec.model,
        "n": n,
        "jacobi": dense::to_json(&jac.matrix().r),
        "representations": reps,
        "dunkl": blocks(Variant::Plain)?,
    });
    if spec.model == Model::Calogero {
        out["dunkl_plus"] = serde_json::Value::Array(blocks(Variant::Plus)?);
        out["dunkl_minus"] = serde_json::Value::Array(blocks(Variant::Minus)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::FermionWord;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn two_particle_jacobi_matrix() {
        let r = JacobiMatrix::standard(2).unwrap();
        let h = Scalar::inv_sqrt(2).unwrap();
        assert_eq!(r.rows(), &[vec![h.clone(), -h.clone()], vec![h.clone(), h]]);
    }

    #[test]
    fn jacobi_orthogonal_and_last_row() {
        for n in 2..=6 {
            let r = JacobiMatrix::standard(n).unwrap();
            assert!(r.is_orthogonal(), "N={n}");
            let c = Scalar::inv_sqrt(n as u64).unwrap();
            assert!(r.rows()[n - 1].iter().all(|e| *e == c));
        }
    }

    #[test]
    fn phi_two_particles() {
        let j = Jacobi::standard(2).unwrap();
        let h = Scalar::inv_sqrt(2).unwrap();
        let expect = &FermionPoly::ann(0).scale(&h) - &FermionPoly::ann(1).scale(&h);
        assert_eq!(j.phi(0), &expect);
    }

    #[test]
    fn sector_dimensions() {
        let j = Jacobi::standard(4).unwrap();
        for m in 0..4 {
            assert_eq!(j.free_states(m).len(), binomial(3, m));
            assert_eq!(j.sector(m).len(), binomial(4, m));
        }
        assert_eq!(j.sector(4).len(), 1);
    }

    #[test]
    fn sector_is_orthonormal() {
        let j = Jacobi::standard(3).unwrap();
        for m in 0..=3 {
            let v = j.sector(m);
            for (a, x) in v.iter().enumerate() {
                for (b, y) in v.iter().enumerate() {
                    assert_eq!(x.inner(y), s((a == b) as i64));
                }
            }
        }
    }

    #[test]
    fn trivial_representation() {
        let j = Jacobi::standard(3).unwrap();
        assert_eq!(j.rep_matrix(0, 0, 2).unwrap(), vec![vec![s(1)]]);
    }

    #[test]
    fn outer_product_acts_as_projector() {
        let j = Jacobi::standard(3).unwrap();
        let p = j.outer(0b01, 0b01);
        let v = j.vector(0b01, false);
        assert_eq!(p.apply(&v), v);
        assert!(p.apply(&j.vector(0b10, false)).amps.is_empty());
        assert!(p.apply(&j.vector(0b01, true)).amps.is_empty());
    }

    #[test]
    fn clebsch_is_self_adjoint() {
        let j = Jacobi::standard(3).unwrap();
        for xi in 0..2 {
            let c = j.clebsch(xi).unwrap();
            assert_eq!(c.adjoint(), c);
        }
        assert!(j.clebsch(2).is_err());
    }

    #[test]
    fn zeroth_dunkl_block_vanishes() {
        let spec = ModelSpec::new(Model::FreeCalogero, 3).unwrap();
        let j = Jacobi::standard(3).unwrap();
        assert!(local_dunkl(&spec, &j, 0, Variant::Plain).unwrap().is_zero());
        assert!(local_dunkl(&spec, &j, 3, Variant::Plain).is_err());
        assert!(local_dunkl(&spec, &j, 1, Variant::Plus).is_err());
    }

    #[test]
    fn projection_of_identity() {
        let j = Jacobi::standard(3).unwrap();
        let one = FermionPoly::one();
        assert_eq!(j.relative_projection(&one), one);
        let w = FermionPoly::word(FermionWord::new(&[0], &[1]), s(1));
        assert_eq!(j.relative_projection(&w), j.projection_closed_form(&w));
    }
}
