use std::sync::OnceLock;

use rand::Rng;

use crate::coeff::RatCoeff;
use crate::error::Result;
use crate::fermion::{exchange_operator, sector_states, FermionPoly, FermionWord, FockVector, Modes};
use crate::jacobi::{self, binomial, fermion_matrix, Variant};
use crate::matrix::dense::{self, Mat};
use crate::matrix::{BasisTag, OperatorMatrix};
use crate::model::{self, Model, ModelSpec};
use crate::operator::Operator;
use crate::scalar::Scalar;

use super::{Checker, Context, Identity};

const ALL: &[Model] = &Model::ALL;
const FREE: &[Model] = &[Model::FreeCalogero, Model::Ts, Model::Hs];
const OSC: &[Model] = &[Model::Calogero];
const SUTHERLAND: &[Model] = &[Model::Ts, Model::Hs];

fn entry(id: &'static str, statement: &'static str, models: &'static [Model], check: super::CheckFn) -> Identity {
    Identity {
        id,
        statement,
        models,
        min_n: 2,
        max_n: 4,
        constant_by_default: &[],
        constant_capable: false,
        check,
    }
}

/// The full identity catalog, in id order.
pub fn catalog() -> &'static [Identity] {
    static CATALOG: OnceLock<Vec<Identity>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut v = vec![
            entry("app1.vkd", "sum V_km n_k K_km = sum V_km psi_k^+ psi_m for antisymmetric V", ALL, app1_vkd),
            entry("app3.cr", "sum_xi C_xi R_xi,k = n_k - N/N_particles", ALL, app3_cr),
            entry("app3.crpsi", "<sigma| sum_xi C_xi R_xi,k |beta> = <sigma| n_k - M/N |beta>", ALL, app3_crpsi),
            entry("app3.dl1", "Dunkl matrix via the occupation route equals <L> + i M d_y/sqrt N", ALL, app3_dl1),
            entry("app4.aa", "relative projection of a bilinear in closed form", ALL, app4_aa),
            entry("app4.aux", "relative projection equals its commutator closed form", ALL, app4_aux),
            entry("app4.dd1fin", "projected Lax part D1 = L + i[Q+ phi - phi^+ Q- - n_N d_y]/sqrt N", ALL, app4_dd1fin),
            entry("app4.dd2", "number part D2 = i d_y sum_beta phi_beta^+ phi_beta / sqrt N", ALL, app4_dd2),
            entry("app4.lkm", "row, column and total sums of L give the supercharges", ALL, app4_lkm),
            entry("bonus.involution", "[I_2, I_3] = 0", FREE, bonus_involution),
            Identity { max_n: 3, ..entry("cal.integrals", "[H0, Ts L_j^n] = 0 for j, n in 1..2", OSC, cal_integrals) },
            entry("cal.ladder", "[H, L+-] = +-2w L+-", OSC, cal_ladder),
            Identity { max_n: 3, ..entry("cal.ladder-ts", "[H0, O_p^m] = 2(p-m) w O_p^m for p+m <= 4", OSC, cal_ladder_ts) },
            Identity {
                constant_by_default: OSC,
                constant_capable: true,
                ..entry("cal.ts12", "Ts L1 = H0, Ts L2 = H0 + 2w(1+(N-1)(Nl+1))", OSC, cal_ts12)
            },
            entry("cg.condition", "Clebsch-Gordan characteristic condition", ALL, cg_condition),
            entry("cg.intertwine", "K_ij C_beta = C_alpha (T^L_ij)_alpha,beta K_ij", ALL, cg_intertwine),
            entry("cm.split", "centre-of-mass superalgebra", ALL, cm_split),
            entry("dunkl.assembled", "assembled Dunkl operator and its inverse relation to L", FREE, dunkl_assembled),
            entry("dunkl.calogero", "oscillator Dunkl operators in closed form", OSC, dunkl_calogero),
            entry("dunkl.commute", "[h, D] = 0 and [H~(M), D(M)] = 0", FREE, dunkl_commute),
            entry("dunkl.ladder", "[H, D+-] = [h, D+-] = +-2w D+-, matrix analog", OSC, dunkl_ladder),
            entry("dunkl.matrix", "D(M) = <L> + i M d_y/sqrt N", ALL, dunkl_matrix),
            entry("jac.blocks", "H and D are block diagonal in the Jacobi basis", ALL, jac_blocks),
            entry("jac.fermions", "Jacobi matrix and fermions are canonical", ALL, jac_fermions),
            entry("lax.block", "sector blocks of the super Lax operator", ALL, lax_block),
            entry("lax.commute", "[H, L] = 0", FREE, lax_commute),
            entry("lax.integrals", "[H0, I_n] = 0 for n <= 4", FREE, lax_integrals),
            entry("lax.pair", "Lax pair relation with M", ALL, lax_pair),
            Identity {
                constant_by_default: SUTHERLAND,
                constant_capable: true,
                ..entry("lax.ts2", "Ts(L^2) = H0", FREE, lax_ts2)
            },
            entry("rep.young", "hook representation matrices", ALL, rep_young),
            entry("susy.closure", "{Q+, Q-} = H in closed form", ALL, susy_closure),
            entry("susy.commute", "[H, Q+-] = 0", ALL, susy_commute),
            entry("susy.nilpotent", "(Q+-)^2 = 0, Q+ = (Q-)^dagger", ALL, susy_nilpotent),
        ];
        v.sort_by_key(|i| i.id);
        v
    })
}

// -- helpers --

fn op(ctx: &Context, key: &str) -> Result<Operator> {
    ctx.bundle.op(key)
}

fn c_over_sqrt_n(spec: &ModelSpec) -> Scalar {
    &Scalar::i() * &spec.inv_sqrt_n()
}

fn diag_op(op: &Operator, dim: usize) -> OperatorMatrix {
    OperatorMatrix::diagonal(op, dim, BasisTag::Particle)
}

fn block_diag(spec: &ModelSpec, a: Option<&OperatorMatrix>, b: Option<&OperatorMatrix>) -> OperatorMatrix {
    let da = a.map_or(0, |m| m.rows());
    let db = b.map_or(0, |m| m.rows());
    let mut out = OperatorMatrix::zeros(spec.n, spec.chart(), da + db, da + db, BasisTag::Jacobi);
    if let Some(a) = a {
        for i in 0..da {
            for j in 0..da {
                out.set(i, j, a.get(i, j).clone());
            }
        }
    }
    if let Some(b) = b {
        for i in 0..db {
            for j in 0..db {
                out.set(da + i, da + j, b.get(i, j).clone());
            }
        }
    }
    out
}

fn scale_mat(a: &Mat, s: &Scalar) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

fn add_mat(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, q)| r.iter().zip(q).map(|(x, y)| x + y).collect()).collect()
}

fn particle_vectors(n: usize, m: usize) -> Vec<FockVector> {
    sector_states(n, m).into_iter().map(FockVector::basis).collect()
}

fn random_scalar(rng: &mut impl Rng) -> Scalar {
    let num = rng.gen_range(-9..=9);
    let den = rng.gen_range(1..=4);
    let re = Scalar::frac(num, den);
    if rng.gen_bool(0.3) {
        &re + &(&Scalar::i() * &Scalar::from_int(rng.gen_range(-3..=3)))
    } else {
        re
    }
}

fn random_modes(rng: &mut impl Rng, n: usize) -> Modes {
    rng.gen_range(0..(1u32 << n)) as Modes
}

fn modes_vec(m: Modes) -> Vec<usize> {
    (0..16).filter(|i| m & (1 << i) != 0).collect()
}

/// Random fermionic polynomial with a handful of arbitrary words.
fn random_fermion_poly(rng: &mut impl Rng, n: usize) -> FermionPoly {
    let terms = rng.gen_range(1..=4);
    let mut p = FermionPoly::zero();
    for _ in 0..terms {
        let w = FermionWord::new(&modes_vec(random_modes(rng, n)), &modes_vec(random_modes(rng, n)));
        p.add_term(w, &random_scalar(rng));
    }
    p
}

/// `sum_km A_km psi_k^+ psi_m` for a random scalar matrix.
fn random_bilinear(rng: &mut impl Rng, n: usize) -> (Mat, FermionPoly) {
    let a: Mat = (0..n).map(|_| (0..n).map(|_| random_scalar(rng)).collect()).collect();
    let mut p = FermionPoly::zero();
    for (k, row) in a.iter().enumerate() {
        for (m, c) in row.iter().enumerate() {
            p = &p + &(&FermionPoly::cre(k) * &FermionPoly::ann(m)).scale(c);
        }
    }
    (a, p)
}

fn dunkl(ctx: &Context, variant: Variant) -> Result<Vec<OperatorMatrix>> {
    jacobi::dunkl_blocks(ctx.spec(), &ctx.jacobi, variant)
}

fn relative_hamiltonians(ctx: &Context) -> Result<Vec<OperatorMatrix>> {
    (0..ctx.spec().n).map(|m| jacobi::relative_hamiltonian(ctx.spec(), &ctx.jacobi, m)).collect()
}

/// Blocks `<sigma|A|alpha>` of an operator over relative states.
fn relative_blocks(ctx: &Context, a: &Operator) -> Vec<OperatorMatrix> {
    (0..ctx.spec().n)
        .map(|m| {
            let v = ctx.jacobi.free_vectors(m);
            a.matrix_elements(&v, &v, BasisTag::Jacobi)
        })
        .collect()
}

// -- supersymmetry --

fn susy_nilpotent(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let (qm, qp) = (op(ctx, "Qminus")?, op(ctx, "Qplus")?);
    ck.zero("(Q-)^2", &(&qm * &qm));
    ck.zero("(Q+)^2", &(&qp * &qp));
    ck.equal("Q+ = (Q-)^dagger", &qp, &qm.adjoint());
    Ok(())
}

fn susy_closure(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let (qm, qp) = (op(ctx, "Qminus")?, op(ctx, "Qplus")?);
    let closed = model::superhamiltonian_closed(spec);
    ck.equal("{Q+, Q-} = H", &qp.anticommutator(&qm), &closed);
    let h0 = op(ctx, "H0")?;
    let diff = &h0 - &model::scalar_hamiltonian(spec);
    ck.holds("H0 - scalar Hamiltonian is constant", diff.as_constant().is_some());
    ck.holds("H commutes with N", closed.is_number_conserving());
    Ok(())
}

fn susy_commute(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let h = op(ctx, "H")?;
    ck.zero("[H, Q-]", &h.commutator(&op(ctx, "Qminus")?));
    ck.zero("[H, Q+]", &h.commutator(&op(ctx, "Qplus")?));
    Ok(())
}

// -- Lax structure --

fn lax_commute(ctx: &Context, ck: &mut Checker) -> Result<()> {
    ck.zero("[H, L]", &op(ctx, "H")?.commutator(&op(ctx, "Lax")?));
    Ok(())
}

fn lax_block(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let n = spec.n;
    let lax = op(ctx, "Lax")?;
    let l = ctx.bundle.mat("L")?;
    ck.zero("[N, L]", &spec.number().commutator(&lax));
    ck.mat_equal("block 1 = L", &lax.sector_block(1, BasisTag::Particle, None)?, &l);
    ck.zero("block 0 = 0", lax.sector_block(0, BasisTag::Particle, None)?.get(0, 0));
    let top = (0..n).fold(spec.zero(), |a, k| &a + &spec.d(k)).scale_scalar(&-Scalar::i());
    ck.equal("block N = -i sum d_k", lax.sector_block(n, BasisTag::Particle, None)?.get(0, 0), &top);
    let sq = &lax * &lax;
    ck.mat_equal("block 1 of L^2 = L L", &sq.sector_block(1, BasisTag::Particle, None)?, &l.mul(&l));
    let cm = [ctx.jacobi.vector(0, true)];
    for (name, a, mat) in [("L", &lax, l.clone()), ("L^2", &sq, l.mul(&l))] {
        let e = a.matrix_elements(&cm, &cm, BasisTag::Jacobi);
        ck.equal(&format!("Ts {name} = N <N|{name}|N>"), &mat.total_sum(), &e.get(0, 0).scale_int(n as i64));
    }
    if spec.model == Model::Calogero {
        let (lp, lm) = (op(ctx, "Laxplus")?, op(ctx, "Laxminus")?);
        ck.mat_equal("block 1 of L+", &lp.sector_block(1, BasisTag::Particle, None)?, &ctx.bundle.mat("Lplus")?);
        ck.mat_equal("block 1 of L-", &lm.sector_block(1, BasisTag::Particle, None)?, &ctx.bundle.mat("Lminus")?);
        ck.equal("(L+)^dagger = L-", &lp.adjoint(), &lm);
    }
    Ok(())
}

fn lax_pair(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let n = spec.n;
    let h0 = diag_op(&op(ctx, "H0")?, n);
    let m = ctx.bundle.mat("M")?;
    if spec.model == Model::Calogero {
        let two_w = RatCoeff::w().scale_int(2);
        for (key, sign) in [("Lplus", 1), ("Lminus", -1)] {
            let l = ctx.bundle.mat(key)?;
            let rhs = l.commutator(&m).add(&l.left_mul_op(&spec.func(two_w.scale_int(sign))));
            ck.mat_equal(&format!("[H0, {key}] = [{key}, M] +- 2w {key}"), &h0.commutator(&l), &rhs);
        }
    } else {
        let l = ctx.bundle.mat("L")?;
        ck.mat_equal("[L, H0] = [M, L]", &l.commutator(&h0), &m.commutator(&l));
    }
    Ok(())
}

fn lax_ts2(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let l = ctx.bundle.mat("L")?;
    let diff = &l.pow(2).total_sum() - &op(ctx, "H0")?;
    ck.up_to_constant("Ts(L^2) - H0", &diff, &RatCoeff::zero());
    Ok(())
}

fn lax_integrals(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let h0 = op(ctx, "H0")?;
    for k in 1..=4 {
        ck.zero(&format!("[H0, I{k}]"), &h0.commutator(&op(ctx, &format!("I{k}"))?));
    }
    Ok(())
}

fn bonus_involution(ctx: &Context, ck: &mut Checker) -> Result<()> {
    ck.zero("[I2, I3]", &op(ctx, "I2")?.commutator(&op(ctx, "I3")?));
    Ok(())
}

// -- oscillator model --

fn cal_ladder(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let h = op(ctx, "H")?;
    let two_w = RatCoeff::w().scale_int(2);
    let (lax, dl) = (op(ctx, "Lax")?, op(ctx, "dLax")?);
    for (key, sign) in [("Laxplus", 1), ("Laxminus", -1)] {
        let lpm = op(ctx, key)?;
        ck.zero(&format!("[H, {key}] -+ 2w {key}"), &(&h.commutator(&lpm) - &lpm.scale(&two_w.scale_int(sign))));
        ck.equal(&format!("{key} = L +- dL"), &lpm, &(&lax + &dl.scale_int(sign)));
    }
    ck.holds("dL conserves N", spec.number().commutator(&dl).is_zero());
    Ok(())
}

fn cal_ts12(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let h0 = op(ctx, "H0")?;
    let l1 = ctx.bundle.mat("L1")?;
    ck.mat_equal("block 1 of L+ L- = L1", &op(ctx, "Lax1")?.sector_block(1, BasisTag::Particle, None)?, &l1);
    ck.zero("Ts L1 - H0", &(&op(ctx, "I_1_1")? - &h0));
    let expected = (&RatCoeff::w() * &spec.oscillator_constant()).scale_int(2);
    ck.up_to_constant("Ts L2 - H0", &(&op(ctx, "I_2_1")? - &h0), &expected);
    Ok(())
}

fn cal_integrals(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let h0 = op(ctx, "H0")?;
    for j in 1..=2 {
        for n in 1..=2 {
            let key = format!("I_{j}_{n}");
            ck.zero(&format!("[H0, {key}]"), &h0.commutator(&op(ctx, &key)?));
        }
    }
    Ok(())
}

fn cal_ladder_ts(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let h0 = op(ctx, "H0")?;
    let w = RatCoeff::w();
    ck.equal("O_0^0 = N", &op(ctx, "O_0_0")?, &spec.constant(&Scalar::from_int(spec.n as i64)));
    for p in 0..=4i64 {
        for m in 0..=(4 - p) {
            let o = op(ctx, &format!("O_{p}_{m}"))?;
            let rhs = o.scale(&w.scale_int(2 * (p - m)));
            ck.equal(&format!("[H0, O_{p}^{m}]"), &h0.commutator(&o), &rhs);
        }
    }
    Ok(())
}

// -- Jacobi variables and centre of mass --

fn jac_fermions(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let n = spec.n;
    let r = ctx.jacobi.matrix();
    ck.holds("R R^T = 1", r.is_orthogonal());
    let last = spec.inv_sqrt_n();
    ck.holds("R_Nl = N^(-1/2)", r.rows()[n - 1].iter().all(|e| *e == last));
    let inv_n = Scalar::frac(1, n as i64);
    let mut partial = vec![vec![Scalar::zero(); n]; n];
    for (k, row) in partial.iter_mut().enumerate() {
        for (l, e) in row.iter_mut().enumerate() {
            for xi in 0..n - 1 {
                *e += &(r.get(xi, k) * r.get(xi, l));
            }
        }
    }
    let expect: Mat = (0..n).map(|k| (0..n).map(|l| &Scalar::from_int((k == l) as i64) - &inv_n).collect()).collect();
    ck.scalars_equal("sum_xi R_xi,k R_xi,l = delta - 1/N", &partial, &expect);
    ck.fermion_equal("phi_N = N^(-1/2) sum psi", ctx.jacobi.phi(n - 1), &spec.phi_n());
    for k in 0..n {
        for l in 0..n {
            let (pk, pl) = (ctx.jacobi.phi(k), ctx.jacobi.phi(l));
            let delta = FermionPoly::scalar(Scalar::from_int((k == l) as i64));
            ck.fermion_equal(&format!("{{phi_{}, phi_{}^+}}", k + 1, l + 1), &pk.anticommutator(ctx.jacobi.phi_dag(l)), &delta);
            ck.fermion_equal(&format!("{{phi_{}, phi_{}}}", k + 1, l + 1), &pk.anticommutator(pl), &FermionPoly::zero());
        }
    }
    for m in 0..=n {
        let v = ctx.jacobi.sector(m);
        let gram: Mat = v.iter().map(|a| v.iter().map(|b| a.inner(b)).collect()).collect();
        ck.scalars_equal(&format!("Jacobi sector {m} orthonormal"), &gram, &dense::identity(binomial(n, m)));
    }
    Ok(())
}

fn jac_blocks(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let n = spec.n;
    let r = ctx.jacobi.matrix().rows();
    let h = op(ctx, "H")?;
    let tilde = relative_hamiltonians(ctx)?;
    let shift = if spec.model == Model::Calogero { spec.func(RatCoeff::w().scale_int(2)) } else { spec.zero() };
    let shifted: Vec<OperatorMatrix> =
        tilde.iter().map(|t| t.add(&OperatorMatrix::diagonal(&shift, t.rows(), BasisTag::Jacobi))).collect();
    let d = op(ctx, "D")?;
    let blocks = dunkl(ctx, Variant::Plain)?;
    for m in 0..=n {
        let expect = block_diag(spec, tilde.get(m), m.checked_sub(1).and_then(|k| shifted.get(k)));
        ck.mat_equal(&format!("H in Jacobi sector {m}"), &h.sector_block(m, BasisTag::Jacobi, Some(r))?, &expect);
        let expect = block_diag(spec, blocks.get(m), m.checked_sub(1).and_then(|k| blocks.get(k)));
        ck.mat_equal(&format!("D in Jacobi sector {m}"), &d.sector_block(m, BasisTag::Jacobi, Some(r))?, &expect);
    }
    Ok(())
}

fn cm_split(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let h = op(ctx, "H")?;
    let (qm, qp, qcm, qcp) = (op(ctx, "qminus")?, op(ctx, "qplus")?, op(ctx, "QCminus")?, op(ctx, "QCplus")?);
    let (hr, hc) = (op(ctx, "h")?, op(ctx, "HC")?);
    ck.zero("(q-)^2", &(&qm * &qm));
    ck.zero("(q+)^2", &(&qp * &qp));
    ck.zero("(QC-)^2", &(&qcm * &qcm));
    ck.zero("(QC+)^2", &(&qcp * &qcp));
    ck.zero("{q-, QC-}", &qm.anticommutator(&qcm));
    ck.zero("{q+, QC+}", &qp.anticommutator(&qcp));
    ck.equal("{q+, q-} = h", &qp.anticommutator(&qm), &hr);
    ck.equal("{QC+, QC-} = HC", &qcp.anticommutator(&qcm), &hc);
    ck.zero("[h, HC]", &hr.commutator(&hc));
    for (name, x) in [("q-", &qm), ("q+", &qp), ("QC-", &qcm), ("QC+", &qcp)] {
        ck.zero(&format!("[H, {name}]"), &h.commutator(x));
        ck.zero(&format!("[h, {name}]"), &hr.commutator(x));
        ck.zero(&format!("[HC, {name}]"), &hc.commutator(x));
    }
    if spec.model == Model::Calogero {
        let hat = op(ctx, "Hhat")?;
        let w = RatCoeff::w();
        let expect = &(&h - &spec.number().scale(&w.scale_int(4))) + &spec.func((&w * &spec.oscillator_constant()).scale_int(2));
        ck.equal("H(-w) = H - 4wN + 2w(1+(N-1)(Nl+1))", &hat, &expect);
        let (hm, hp) = (op(ctx, "qhatminus")?, op(ctx, "qhatplus")?);
        ck.zero("[H(-w), qhat-]", &hat.commutator(&hm));
        ck.zero("[H(-w), qhat+]", &hat.commutator(&hp));
        ck.equal("qhat- = q-(-w)", &hm, &qm.flip_omega());
        ck.equal("qhat+ = q+(-w)", &hp, &qp.flip_omega());
    }
    Ok(())
}

// -- representations and Clebsch-Gordan coefficients --

fn particle_transposition(n: usize, i: usize, j: usize) -> Mat {
    let d = |a: usize, b: usize| (a == b) as i64;
    (0..n)
        .map(|l| {
            (0..n)
                .map(|k| Scalar::from_int(d(l, k) - d(l, i) * d(k, i) - d(l, j) * d(k, j) + d(l, i) * d(k, j) + d(l, j) * d(k, i)))
                .collect()
        })
        .collect()
}

fn rep_young(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let n = ctx.spec().n;
    let jac = &ctx.jacobi;
    for m in 0..n {
        let dim = binomial(n - 1, m);
        let id = dense::identity(dim);
        let mut reps = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    reps[i][j] = Some(jac.rep_matrix(m, i, j)?);
                }
            }
        }
        let t = |i: usize, j: usize| reps[i][j].as_ref().expect("distinct pair");
        for i in 0..n {
            for j in (i + 1)..n {
                let x = t(i, j);
                ck.holds(&format!("dim T({m})_{}{} = C(N-1,M)", i + 1, j + 1), x.len() == dim);
                ck.scalars_equal(&format!("T({m})_{}{} squared", i + 1, j + 1), &dense::mul(x, x), &id);
                ck.scalars_equal(&format!("T({m})_{}{} symmetric", i + 1, j + 1), x, &dense::transpose(x));
                for k in 0..n {
                    if k != i && k != j {
                        let c = dense::mul(&dense::mul(x, t(j, k)), x);
                        ck.scalars_equal(&format!("T({m})_{i}{j} T_{j}{k} T_{i}{j} = T_{i}{k}"), &c, t(i, k));
                    }
                }
            }
        }
    }
    ck.scalars_equal("T(0) = [1]", &jac.rep_matrix(0, 0, 1)?, &vec![vec![Scalar::one()]]);
    let r = jac.matrix().rows().to_vec();
    let one = particle_vectors(n, 1);
    for i in 0..n {
        for j in (i + 1)..n {
            let t1 = fermion_matrix(&exchange_operator(i, j, n)?, &one, &one);
            ck.scalars_equal("one-fermion block of K_ij", &t1, &particle_transposition(n, i, j));
            let rot = dense::mul(&dense::mul(&r, &t1), &dense::transpose(&r));
            let restricted: Mat = rot[..n - 1].iter().map(|row| row[..n - 1].to_vec()).collect();
            ck.scalars_equal("T^L = R T(1) R^T on relative indices", &jac.standard_rep(i, j)?, &restricted);
            ck.holds("(R T(1) R^T)_N,beta = 0", rot[n - 1][..n - 1].iter().all(Scalar::is_zero));
        }
    }
    Ok(())
}

fn cg_condition(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let n = ctx.spec().n;
    let jac = &ctx.jacobi;
    for m in 0..n {
        let cs = (0..n - 1).map(|xi| jac.clebsch_matrix(xi, m)).collect::<Result<Vec<_>>>()?;
        let dim = binomial(n - 1, m);
        for i in 0..n {
            for j in (i + 1)..n {
                let tl = jac.standard_rep(i, j)?;
                let t = jac.rep_matrix(m, i, j)?;
                for alpha in 0..n - 1 {
                    // lhs[gamma][zeta] = sum_xi,beta TL[alpha][xi] T[gamma][beta] C_xi[zeta][beta]
                    let mut lhs = vec![vec![Scalar::zero(); dim]; dim];
                    for (xi, c) in cs.iter().enumerate() {
                        let s = &tl[alpha][xi];
                        if s.is_zero() {
                            continue;
                        }
                        let prod = dense::mul(&t, &dense::transpose(c));
                        lhs = add_mat(&lhs, &scale_mat(&prod, s));
                    }
                    let rhs = dense::mul(&dense::transpose(&cs[alpha]), &t);
                    ck.scalars_equal(&format!("M={m} i={} j={} alpha={}", i + 1, j + 1, alpha + 1), &lhs, &rhs);
                }
            }
        }
    }
    Ok(())
}

fn cg_intertwine(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let n = ctx.spec().n;
    let jac = &ctx.jacobi;
    let cs = (0..n - 1).map(|xi| jac.clebsch(xi)).collect::<Result<Vec<_>>>()?;
    let one = particle_vectors(n, 1);
    for i in 0..n {
        for j in (i + 1)..n {
            let k = exchange_operator(i, j, n)?;
            let t1 = fermion_matrix(&k, &one, &one);
            for p in 0..n {
                let rhs = (0..n).fold(FermionPoly::zero(), |acc, l| {
                    &acc + &(&FermionPoly::occupation(l).scale(&t1[l][p]) * &k)
                });
                ck.fermion_equal("K_ij n_k = n_l (T(1)_ij)_lk K_ij", &(&k * &FermionPoly::occupation(p)), &rhs);
            }
            let tl = jac.standard_rep(i, j)?;
            for beta in 0..n - 1 {
                let rhs = (0..n - 1).fold(FermionPoly::zero(), |acc, a| &acc + &cs[a].scale(&tl[a][beta]));
                ck.fermion_equal(
                    &format!("K_{}{} C_{}", i + 1, j + 1, beta + 1),
                    &(&k * &cs[beta]),
                    &(&rhs * &k),
                );
            }
        }
    }
    Ok(())
}

// -- Dunkl operators --

fn dunkl_matrix(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let c = c_over_sqrt_n(spec);
    let lax = relative_blocks(ctx, &op(ctx, "Lax")?);
    let blocks = dunkl(ctx, Variant::Plain)?;
    ck.holds("D(0) = 0", blocks[0].is_zero());
    for (m, (d, l)) in blocks.iter().zip(&lax).enumerate() {
        let shift = OperatorMatrix::diagonal(&spec.d_yn().scale_scalar(&c.scale_int(m as i64)), d.rows(), BasisTag::Jacobi);
        ck.mat_equal(&format!("D({m}) = <L> + i M d_y / sqrt N"), d, &l.add(&shift));
    }
    if spec.model == Model::Calogero {
        let dl = relative_blocks(ctx, &op(ctx, "dLax")?);
        let plus = dunkl(ctx, Variant::Plus)?;
        let minus = dunkl(ctx, Variant::Minus)?;
        let y = spec.y_n()?.scale(&RatCoeff::w());
        for m in 0..spec.n {
            let delta = jacobi::delta_dunkl(spec, &ctx.jacobi, m)?;
            let shift = OperatorMatrix::diagonal(&y.scale_scalar(&c.scale_int(-(m as i64))), delta.rows(), BasisTag::Jacobi);
            ck.mat_equal(&format!("dD({m}) = <dL> - i w M y / sqrt N"), &delta, &dl[m].add(&shift));
            ck.mat_equal(&format!("D({m})+ = D + dD"), &plus[m], &blocks[m].add(&delta));
            ck.mat_equal(&format!("D({m})- = D - dD"), &minus[m], &blocks[m].sub(&delta));
        }
    }
    Ok(())
}

fn dunkl_assembled(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let d = op(ctx, "D")?;
    ck.equal("D closed form", &d, &jacobi::dunkl_closed_form(spec));
    let split = jacobi::cm_split(&ctx.bundle)?;
    ck.equal("L = D + i[phi^+ q- - q+ phi - N d_y]/sqrt N", &op(ctx, "Lax")?, &jacobi::lax_from_dunkl(&d, &split, spec));
    ck.zero("[N, D]", &spec.number().commutator(&d));
    Ok(())
}

fn dunkl_commute(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let d = op(ctx, "D")?;
    ck.zero("[h, D]", &op(ctx, "h")?.commutator(&d));
    ck.zero("[H, D]", &op(ctx, "H")?.commutator(&d));
    let blocks = dunkl(ctx, Variant::Plain)?;
    for (m, (h, b)) in relative_hamiltonians(ctx)?.iter().zip(&blocks).enumerate() {
        let c = h.commutator(b);
        ck.holds(&format!("[H~({m}), D({m})] = 0"), c.is_zero());
    }
    Ok(())
}

fn dunkl_ladder(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let two_w = RatCoeff::w().scale_int(2);
    let (h, hr) = (op(ctx, "H")?, op(ctx, "h")?);
    for (key, sign) in [("Dplus", 1), ("Dminus", -1)] {
        let d = op(ctx, key)?;
        let rhs = d.scale(&two_w.scale_int(sign));
        ck.equal(&format!("[H, {key}]"), &h.commutator(&d), &rhs);
        ck.equal(&format!("[h, {key}]"), &hr.commutator(&d), &rhs);
    }
    let tilde = relative_hamiltonians(ctx)?;
    for (variant, sign) in [(Variant::Plus, 1), (Variant::Minus, -1)] {
        for (m, (t, d)) in tilde.iter().zip(dunkl(ctx, variant)?).enumerate() {
            let rhs = d.left_mul_op(&spec.func(two_w.scale_int(sign)));
            ck.mat_equal(&format!("[H~({m}), D({m}){}]", if sign > 0 { "+" } else { "-" }), &t.commutator(&d), &rhs);
        }
    }
    Ok(())
}

fn dunkl_calogero(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let c = c_over_sqrt_n(spec);
    let (phi, phi_dag) = (spec.fermion(&spec.phi_n()), spec.fermion(&spec.phi_n_dag()));
    let rel = &spec.number() - &(&phi_dag * &phi).scale_int(2);
    let free = jacobi::free_part(spec);
    let (fm, fp) = model::supercharges(&free);
    let (dqm, dqp) = (op(ctx, "dQminus")?, op(ctx, "dQplus")?);
    ck.equal("Q- = Qf- + dQ-", &op(ctx, "Qminus")?, &(&fm + &dqm));
    ck.equal("Q+ = Qf+ + dQ+", &op(ctx, "Qplus")?, &(&fp + &dqp));
    ck.equal("Qhat- = Qf- - dQ-", &op(ctx, "Qhatminus")?, &(&fm - &dqm));
    ck.equal("Qhat+ = Qf+ - dQ+", &op(ctx, "Qhatplus")?, &(&fp - &dqp));
    ck.equal("dD closed form", &op(ctx, "dD")?, &jacobi::delta_dunkl_closed_form(spec)?);
    let wy = spec.y_n()?.scale(&RatCoeff::w());
    for (key, lax, sign) in [("Dplus", "Laxplus", 1), ("Dminus", "Laxminus", -1)] {
        let inner = &(&(&(&fp - &dqp.scale_int(sign)) * &phi) - &(&phi_dag * &(&fm + &dqm.scale_int(sign))))
            + &(&rel * &(&spec.d_yn() - &wy.scale_int(sign)));
        let rhs = &op(ctx, lax)? + &inner.scale_scalar(&c);
        ck.equal(&format!("{key} in terms of free and shifted supercharges"), &op(ctx, key)?, &rhs);
    }
    let (dp, dm) = jacobi::ladder_dunkl_closed_forms(&ctx.bundle)?;
    ck.equal("D+ with hatted supercharges", &op(ctx, "Dplus")?, &dp);
    ck.equal("D- with hatted supercharges", &op(ctx, "Dminus")?, &dm);
    let (lp, lm) = jacobi::ladder_lax_from_dunkl(&ctx.bundle)?;
    ck.equal("L+ from D+", &op(ctx, "Laxplus")?, &lp);
    ck.equal("L- from D-", &op(ctx, "Laxminus")?, &lm);
    Ok(())
}

// -- appendix identities --

fn app1_vkd(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let n = ctx.spec().n;
    let mut rng = ctx.rng(1);
    for sample in 0..20 {
        let mut v = vec![vec![Scalar::zero(); n]; n];
        for k in 0..n {
            for m in (k + 1)..n {
                let s = random_scalar(&mut rng);
                v[m][k] = -s.clone();
                v[k][m] = s;
            }
        }
        let mut lhs = FermionPoly::zero();
        let mut rhs = FermionPoly::zero();
        for k in 0..n {
            for m in 0..n {
                if k == m {
                    continue;
                }
                lhs = &lhs + &(&FermionPoly::occupation(k) * &exchange_operator(k, m, n)?).scale(&v[k][m]);
                rhs = &rhs + &(&FermionPoly::cre(k) * &FermionPoly::ann(m)).scale(&v[k][m]);
            }
        }
        ck.fermion_equal(&format!("sample {sample}"), &lhs, &rhs);
    }
    Ok(())
}

fn app3_cr(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let n = ctx.spec().n;
    let jac = &ctx.jacobi;
    let cs = (0..n - 1).map(|xi| jac.clebsch(xi)).collect::<Result<Vec<_>>>()?;
    let inv_n = Scalar::frac(1, n as i64);
    for k in 0..n {
        let lhs = cs.iter().enumerate().fold(FermionPoly::zero(), |a, (xi, c)| &a + &c.scale(jac.matrix().get(xi, k)));
        let rhs = &FermionPoly::occupation(k) - &FermionPoly::number(n).scale(&inv_n);
        ck.fermion_equal(&format!("k={}", k + 1), &lhs, &rhs);
    }
    for (xi, c) in cs.iter().enumerate() {
        ck.fermion_equal(&format!("C_{} self-adjoint", xi + 1), &c.adjoint(), c);
    }
    Ok(())
}

fn app3_crpsi(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let n = ctx.spec().n;
    let jac = &ctx.jacobi;
    for m in 0..n {
        let v = jac.free_vectors(m);
        let cs = (0..n - 1).map(|xi| jac.clebsch_matrix(xi, m)).collect::<Result<Vec<_>>>()?;
        let shift = scale_mat(&dense::identity(v.len()), &Scalar::frac(-(m as i64), n as i64));
        for k in 0..n {
            let lhs = cs.iter().enumerate().fold(vec![vec![Scalar::zero(); v.len()]; v.len()], |a, (xi, c)| {
                add_mat(&a, &scale_mat(c, jac.matrix().get(xi, k)))
            });
            let rhs = add_mat(&fermion_matrix(&FermionPoly::occupation(k), &v, &v), &shift);
            ck.scalars_equal(&format!("M={m} k={}", k + 1), &lhs, &rhs);
        }
    }
    Ok(())
}

fn app3_dl1(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let n = spec.n;
    let i = Scalar::i();
    let c = c_over_sqrt_n(spec);
    // sum_{m != k} V_km n_k K_km = sum V_km psi_k^+ psi_m with the model potential
    let mut lhs = spec.zero();
    let mut rhs = spec.zero();
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let mut bk = spec.d(k).scale_scalar(&-i.clone());
        for m in 0..n {
            if m == k {
                continue;
            }
            let v = spec.potential(k, m);
            let kk = spec.fermion(&exchange_operator(k, m, n)?);
            lhs = &lhs + &(&spec.fermion(&FermionPoly::occupation(k)) * &kk).scale(&v);
            rhs = &rhs + &spec.fermion(&(&FermionPoly::cre(k) * &FermionPoly::ann(m))).scale(&v);
            bk = &bk + &kk.scale(&v.scale(&i));
        }
        b.push(bk);
    }
    ck.equal("sum V n_k K = sum V psi^+ psi", &lhs, &rhs);
    let lax = relative_blocks(ctx, &op(ctx, "Lax")?);
    let blocks = dunkl(ctx, Variant::Plain)?;
    for m in 0..n {
        let frac = spec.constant(&Scalar::frac(m as i64, n as i64));
        let route = (0..n).fold(spec.zero(), |acc, k| {
            &acc + &(&(&spec.fermion(&FermionPoly::occupation(k)) - &frac) * &b[k])
        });
        let v = ctx.jacobi.free_vectors(m);
        let via = route.matrix_elements(&v, &v, BasisTag::Jacobi);
        ck.mat_equal(&format!("M={m}: definition = occupation route"), &blocks[m], &via);
        let shift = OperatorMatrix::diagonal(&spec.d_yn().scale_scalar(&c.scale_int(m as i64)), v.len(), BasisTag::Jacobi);
        ck.mat_equal(&format!("M={m}: occupation route = <L> + i M d_y / sqrt N"), &via, &lax[m].add(&shift));
    }
    Ok(())
}

fn app4_aux(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let n = ctx.spec().n;
    let mut rng = ctx.rng(4);
    for sample in 0..20 {
        let a = random_fermion_poly(&mut rng, n);
        ck.fermion_equal(
            &format!("sample {sample}: {}", a.to_text()),
            &ctx.jacobi.relative_projection(&a),
            &ctx.jacobi.projection_closed_form(&a),
        );
    }
    Ok(())
}

/// `A - N^{-1/2} sum A_km [psi_k^+ phi_N + phi_N^+ psi_m] + N^{-1} phi_N^+ phi_N sum A_km`.
fn bilinear_projection(spec: &ModelSpec, a: &OperatorMatrix) -> Operator {
    let n = spec.n;
    let (phi, phi_dag) = (spec.fermion(&spec.phi_n()), spec.fermion(&spec.phi_n_dag()));
    let mut out = model::bilinear(spec, a);
    let mut cross = spec.zero();
    for k in 0..n {
        for m in 0..n {
            let e = a.get(k, m);
            if e.is_zero() {
                continue;
            }
            cross = &cross + &(e * &(&(&spec.psi_dag(k) * &phi) + &(&phi_dag * &spec.psi(m))));
        }
    }
    out = &out - &cross.scale_scalar(&spec.inv_sqrt_n());
    &out + &(&(&phi_dag * &phi) * &a.total_sum()).scale_scalar(&Scalar::frac(1, n as i64))
}

fn app4_aa(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let n = spec.n;
    let mut rng = ctx.rng(5);
    for sample in 0..10 {
        let (a, p) = random_bilinear(&mut rng, n);
        let am = OperatorMatrix::from_scalars(n, spec.chart(), &a, BasisTag::Particle)?;
        let lhs = spec.fermion(&ctx.jacobi.relative_projection(&p));
        ck.equal(&format!("random bilinear {sample}"), &lhs, &bilinear_projection(spec, &am));
    }
    let lax = op(ctx, "Lax")?;
    let d1 = jacobi::assemble(spec, &ctx.jacobi, &relative_blocks(ctx, &lax));
    let l = model::lax_matrix(&jacobi::free_part(spec));
    ck.equal("projection of the super Lax operator", &d1, &bilinear_projection(spec, &l));
    Ok(())
}

fn app4_lkm(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let n = spec.n;
    let free = jacobi::free_part(spec);
    let l = model::lax_matrix(&free);
    let (cm, cp) = model::component_charges(&free);
    let (qm, qp) = model::supercharges(&free);
    let i = Scalar::i();
    let mut all = spec.zero();
    let mut with_cre = spec.zero();
    let mut with_ann = spec.zero();
    for k in 0..n {
        let row = (0..n).fold(spec.zero(), |a, m| &a + l.get(k, m));
        ck.equal(&format!("sum_m L_{}m = -i Q_{}^-", k + 1, k + 1), &row, &cm[k].scale_scalar(&-i.clone()));
        let col = (0..n).fold(spec.zero(), |a, m| &a + l.get(m, k));
        ck.equal(&format!("sum_k L_k{} = i Q_{}^+", k + 1, k + 1), &col, &cp[k].scale_scalar(&i));
        for m in 0..n {
            all = &all + l.get(k, m);
            with_cre = &with_cre + &(l.get(k, m) * &spec.psi_dag(k));
            with_ann = &with_ann + &(l.get(k, m) * &spec.psi(m));
        }
    }
    let total = spec.d_yn().scale_scalar(&(&-i.clone() * &Scalar::sqrt(n as u64)?));
    ck.equal("sum L_km = -i sqrt N d_y", &all, &total);
    ck.equal("sum L_km psi_k^+ = -i Q+", &with_cre, &qp.scale_scalar(&-i.clone()));
    ck.equal("sum L_km psi_m = i Q-", &with_ann, &qm.scale_scalar(&i));
    Ok(())
}

fn app4_dd2(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let n = spec.n;
    let jac = &ctx.jacobi;
    let c = c_over_sqrt_n(spec);
    let dy = spec.d_yn().scale_scalar(&c);
    let blocks: Vec<OperatorMatrix> =
        (0..n).map(|m| OperatorMatrix::diagonal(&dy.scale_int(m as i64), binomial(n - 1, m), BasisTag::Jacobi)).collect();
    let d2 = jacobi::assemble(spec, jac, &blocks);
    let occ = (0..n - 1).fold(FermionPoly::zero(), |a, b| &a + &(jac.phi_dag(b) * jac.phi(b)));
    ck.equal("D2 = i d_y sum phi_b^+ phi_b / sqrt N", &d2, &(&dy * &spec.fermion(&occ)));
    let n_cm = jac.phi_dag(n - 1) * jac.phi(n - 1);
    let weighted = (0..n).fold(FermionPoly::zero(), |a, m| {
        jac.free_states(m).into_iter().fold(a, |a, s| &a + &jac.outer(s, s).scale(&Scalar::from_int(m as i64)))
    });
    ck.fermion_equal("sum M |s><s| = sum phi_b^+ phi_b (1 - n_N)", &weighted, &(&occ * &(&FermionPoly::one() - &n_cm)));
    ck.fermion_equal(
        "phi_N^+ S phi_N = sum phi_b^+ phi_b n_N",
        &(&(jac.phi_dag(n - 1) * &weighted) * jac.phi(n - 1)),
        &(&occ * &n_cm),
    );
    Ok(())
}

fn app4_dd1fin(ctx: &Context, ck: &mut Checker) -> Result<()> {
    let spec = ctx.spec();
    let n = spec.n;
    let c = c_over_sqrt_n(spec);
    let lax = op(ctx, "Lax")?;
    let d1 = jacobi::assemble(spec, &ctx.jacobi, &relative_blocks(ctx, &lax));
    let (qm, qp) = model::supercharges(&jacobi::free_part(spec));
    let (phi, phi_dag) = (spec.fermion(&spec.phi_n()), spec.fermion(&spec.phi_n_dag()));
    let inner = &(&(&qp * &phi) - &(&phi_dag * &qm)) - &(&(&phi_dag * &phi) * &spec.d_yn());
    ck.equal("D1 closed form", &d1, &(&lax + &inner.scale_scalar(&c)));
    let dy = spec.d_yn().scale_scalar(&c);
    let blocks: Vec<OperatorMatrix> =
        (0..n).map(|m| OperatorMatrix::diagonal(&dy.scale_int(m as i64), binomial(n - 1, m), BasisTag::Jacobi)).collect();
    let d2 = jacobi::assemble(spec, &ctx.jacobi, &blocks);
    ck.equal("D = D1 + D2", &op(ctx, "D")?, &(&d1 + &d2));
    Ok(())
}
