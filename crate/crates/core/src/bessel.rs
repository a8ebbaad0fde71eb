//! The unramified local computation: Whittaker and Bessel values, the Cauchy
//! identity, the zeta series, and the identities tying them together.
//!
//! Scalars: `Q = q^{1/2}`, `X = q^{-s}`. The series variable `Z` stands for
//! `q_E^{-(1/2+s)}`, i.e. `Q^{-2} X^2` at inert places and `Q^{-1} X` at
//! split ones.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{series_expand, RationalFunction, TruncatedSeries, VarId, VarTable};
use crate::lfactors::{
    adjoint_op, asai_op, block_middle, block_r, itimes, lfactor_scaled, linear_star, modulus_exponents,
    modulus_q_power, star_coords, star_embed, delta_constant, DeltaKind, LRepOperator, ModulusContext,
    SatakeData,
};
use crate::lgroup::{
    char_eval, classify_weight, enumerate_lambda_pp_at, is_dominant_cocharacter, is_lambda_pp, levi_weyl_group,
    twisted_weyl_group, weyl_act, Cocharacter, GroupSpec, Place, TwistedTorusElement, Weight, WeightClass,
    WeylElement,
};
use crate::report::{outcome, run_check, Outcome, Params};
use crate::wcf::{char_fixed_point_sum, d_factor, inv_d_factor, is_regular, ParabolicSpec};

pub use crate::report::VerificationReport;

/// Largest `n+1` handled by fully symbolic identity checks.
pub const SYMBOLIC_CAPACITY: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Symbolic,
    Specialized,
    Numeric,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Symbolic => "symbolic",
            Mode::Specialized => "specialized",
            Mode::Numeric => "numeric",
        }
    }
}

fn recip(op: &LRepOperator, scalar: &RationalFunction) -> Result<RationalFunction> {
    lfactor_scaled(op, scalar)?.reciprocal()
}

fn q_pow(data: &SatakeData, e: i64) -> Result<RationalFunction> {
    Ok(data.q.powi(e as i32)?)
}

fn inv_d_borel(s: &TwistedTorusElement) -> Result<RationalFunction> {
    inv_d_factor(&ParabolicSpec::borel(&s.group), s)
}

fn sum(vars: &VarTable, terms: impl IntoIterator<Item = RationalFunction>) -> Result<RationalFunction> {
    let mut total = RationalFunction::zero(vars);
    for t in terms {
        total = total.try_add(&t)?;
    }
    Ok(total.reduce())
}

fn tau_group(data: &SatakeData) -> GroupSpec {
    GroupSpec::linear(data.r, data.place)
}

/// `S_{tau,s}` as it pairs with `sigma_m`: at split places the Galois
/// conjugate `(B, A)` (no effect at inert places).
fn tau_for_sigma_m(data: &SatakeData) -> Result<TwistedTorusElement> {
    SatakeData::conjugate(&data.s_tau_s())
}

fn check_cocharacter(t: &Cocharacter, data: &SatakeData) -> Result<()> {
    let len = if data.place.is_inert() { data.r } else { 2 * data.r };
    if t.t.len() != len {
        return Err(Error::Mismatch(format!("cocharacter {t} has the wrong length for r = {}", data.r)));
    }
    Ok(())
}

/// `delta_B(t)^{1/2} ch_t(S_tau)` on `Lambda_r^+`, zero elsewhere.
pub fn whittaker_value(t: &Cocharacter, data: &SatakeData) -> Result<RationalFunction> {
    check_cocharacter(t, data)?;
    if !is_dominant_cocharacter(t, data.r) {
        return Ok(RationalFunction::zero(&data.vars));
    }
    let g = tau_group(data);
    let ch = char_fixed_point_sum(&Weight::from_cocharacter(&g, t)?, &data.s_tau)?;
    let lambda = modulus_exponents(ModulusContext::BorelR, data.r, data.m, data.place);
    Ok(ch.try_mul(&q_pow(data, modulus_q_power(&lambda, &t.t, data.place, 1))?)?)
}

fn delta_p_half(t: &Cocharacter, data: &SatakeData) -> Result<RationalFunction> {
    let lambda = modulus_exponents(ModulusContext::P, data.r, data.m, data.place);
    q_pow(data, modulus_q_power(&lambda, &t.t, data.place, 1))
}

/// Per-`w` pieces of the regrouped sum: the `t`-independent factor and the block
/// `(wS_{n+1})^{(r)}` whose character is taken.
pub struct LemmaTerms {
    pub weyl: Vec<WeylElement>,
    pub base: Vec<RationalFunction>,
    pub blocks: Vec<TwistedTorusElement>,
}

pub fn lemma_terms(data: &SatakeData) -> Result<LemmaTerms> {
    let weyl = twisted_weyl_group(&data.s_n1.group)?;
    let emb_m = star_embed(&data.s_m)?;
    let qinv = data.q.inv()?;
    let pieces = weyl
        .par_iter()
        .map(|w| {
            let ws = weyl_act(w, &data.s_n1)?;
            let br = block_r(&ws, data.r)?;
            let det = recip(&itimes(&emb_m, &linear_star(&br)?)?, &qinv)?;
            Ok((det.try_mul(&inv_d_borel(&ws)?)?, br))
        })
        .collect::<Result<Vec<_>>>()?;
    let (base, blocks) = pieces.into_iter().unzip();
    Ok(LemmaTerms { weyl, base, blocks })
}

fn lemma_value_from(terms: &LemmaTerms, t: &Cocharacter, data: &SatakeData) -> Result<RationalFunction> {
    check_cocharacter(t, data)?;
    if !is_lambda_pp(t, data.r) {
        return Ok(RationalFunction::zero(&data.vars));
    }
    let g = tau_group(data);
    let chi = Weight::from_cocharacter(&g, t)?;
    let parts = terms
        .base
        .par_iter()
        .zip(&terms.blocks)
        .map(|(b, br)| Ok(b.try_mul(&char_fixed_point_sum(&chi, br)?)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(sum(&data.vars, parts)?.try_mul(&delta_p_half(t, data)?)?.reduce())
}

/// The Bessel value as a sum over `W(U_{n+1})` with `ch_t` of the `(r)` block.
pub fn bessel_value_lemma(t: &Cocharacter, data: &SatakeData) -> Result<RationalFunction> {
    lemma_value_from(&lemma_terms(data)?, t, data)
}

/// Restriction of `S_k (x)~ S_l` to the pairs `(i, j)` (1-based) with
/// `i + j > bound`, in both copies.
pub fn itimes_lower(sk: &TwistedTorusElement, sl: &TwistedTorusElement, bound: usize) -> Result<LRepOperator> {
    let full = itimes(sk, sl)?;
    let (k, l) = (sk.group.rank(), sl.group.rank());
    let keep: Vec<usize> = (0..2)
        .flat_map(|c| (0..k).flat_map(move |i| (0..l).map(move |j| (c, i, j))))
        .filter(|&(_, i, j)| i + j + 2 > bound)
        .map(|(c, i, j)| c * k * l + i * l + j)
        .collect();
    let m = full.matrix();
    let vars = sk.vars().clone();
    LRepOperator::new(crate::exact::Matrix::from_fn(&vars, keep.len(), keep.len(), |a, b| {
        m.get(keep[a], keep[b]).clone()
    }))
}

/// Per-`(w_m, w_{n+1})` pieces of the Weyl sum with `R_-`.
pub struct LiuTerms {
    pub base: Vec<RationalFunction>,
    pub blocks: Vec<TwistedTorusElement>,
}

pub fn liu_terms(data: &SatakeData) -> Result<LiuTerms> {
    let wm = twisted_weyl_group(&data.s_m.group)?;
    let wn = twisted_weyl_group(&data.s_n1.group)?;
    let pairs: Vec<(&WeylElement, &WeylElement)> = wm.iter().flat_map(|a| wn.iter().map(move |b| (a, b))).collect();
    let qinv = data.q.inv()?;
    let bound = data.m + data.r + 1;
    let pieces = pairs
        .par_iter()
        .map(|(a, b)| {
            let sm = weyl_act(a, &data.s_m)?;
            let sn = weyl_act(b, &data.s_n1)?;
            let det = recip(&itimes_lower(&star_embed(&sm)?, &star_embed(&sn)?, bound)?, &qinv)?;
            let base = det.try_mul(&inv_d_borel(&sm)?)?.try_mul(&inv_d_borel(&sn)?)?;
            Ok((base, block_r(&sn, data.r)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (base, blocks) = pieces.into_iter().unzip();
    Ok(LiuTerms { base, blocks })
}

fn liu_value_from(terms: &LiuTerms, t: &Cocharacter, data: &SatakeData) -> Result<RationalFunction> {
    check_cocharacter(t, data)?;
    if !is_lambda_pp(t, data.r) {
        return Ok(RationalFunction::zero(&data.vars));
    }
    let chi = Weight::from_cocharacter(&tau_group(data), t)?;
    let parts = terms
        .base
        .iter()
        .zip(&terms.blocks)
        .map(|(b, br)| Ok(b.try_mul(&char_eval(&chi, br)?)?))
        .collect::<Result<Vec<_>>>()?;
    // (Delta^U_m)^{-1} is prod L(i, eta^i)
    let norm = delta_constant(DeltaKind::Unitary, data.m, data.place, &data.q)?.value;
    Ok(sum(&data.vars, parts)?.try_mul(&norm)?.try_mul(&delta_p_half(t, data)?)?.reduce())
}

/// The Bessel value as a sum over `W(U_m) x W(U_{n+1})` with the restricted
/// representation `R_-` and the plain character `chi_t`.
pub fn bessel_value_liu(t: &Cocharacter, data: &SatakeData) -> Result<RationalFunction> {
    for s in [&data.s_m, &data.s_n1] {
        if !is_regular(s)? {
            return Err(Error::NotRegular);
        }
    }
    liu_value_from(&liu_terms(data)?, t, data)
}

/// `prod L(i, eta^i) * sum_{W(U_m) x W(U_{m+1})} det(1 - Q^{-1} R~_-) / D = 1`
/// for generic `(S_m, S_{m+1})`.
pub fn verify_liu_normalization(m: usize, place: Place) -> VerificationReport {
    run_check("liu_normalization", Params::ranks(0, m, place).mode("symbolic"), |params| {
        let data = SatakeData::symbolic(0, m, place)?;
        data.s_n1.group.check_capacity(SYMBOLIC_CAPACITY)?;
        let terms = liu_terms(&data)?;
        params.detail.insert("weyl_terms".into(), terms.base.len().to_string());
        let value = liu_value_from(&terms, &Cocharacter::new(vec![]), &data)?;
        Ok(outcome(value.is_one(), terms.base.len(), || format!("normalized sum = {value}")))
    })
}

/// Liu's formula against the regrouped sum for every `t` in `Lambda^{++}` of size at
/// most `order`, plus the `W(L_{n+1})`-invariance used to regroup the sum
/// and the coset count behind the bijection.
pub fn verify_lemma_equivalence(r: usize, m: usize, place: Place, order: usize) -> VerificationReport {
    let params = Params::ranks(r, m, place).order(order).mode("symbolic");
    run_check("bessel_equivalence", params, |params| {
        let data = SatakeData::symbolic(r, m, place)?;
        data.s_n1.group.check_capacity(SYMBOLIC_CAPACITY)?;
        let lemma = lemma_terms(&data)?;
        let liu = liu_terms(&data)?;

        let g = data.s_n1.group;
        let levi = levi_weyl_group(&g, &levi_labels(r, m))?;
        let cosets: BTreeSet<Vec<Vec<usize>>> = lemma
            .weyl
            .iter()
            .map(|w| {
                let mut c: Vec<Vec<usize>> = levi.iter().map(|l| w.compose(l).perm).collect();
                c.sort();
                c
            })
            .collect();
        params.detail.insert("cosets".into(), cosets.len().to_string());
        if cosets.len() * levi.len() != lemma.weyl.len() {
            return Ok(Outcome::Fail {
                witness: format!("{} cosets of a subgroup of order {} in a group of order {}", cosets.len(), levi.len(), lemma.weyl.len()),
            });
        }

        let ts = enumerate_lambda_pp_at(r, place, order);
        for t in &ts {
            // the regrouped function is W(L)-invariant term by term
            let chi = Weight::from_cocharacter(&tau_group(&data), t)?;
            let h = |s: &TwistedTorusElement| -> Result<RationalFunction> {
                let br = block_r(s, r)?;
                let det = recip(&itimes(&star_embed(&data.s_m)?, &linear_star(&br)?)?, &data.q.inv()?)?;
                Ok(det.try_mul(&char_fixed_point_sum(&chi, &br)?)?)
            };
            let h0 = h(&data.s_n1)?;
            for w in &levi {
                if h(&weyl_act(w, &data.s_n1)?)? != h0 {
                    return Ok(Outcome::Fail { witness: format!("summand not invariant under {w} at t = {t}") });
                }
            }
            let a = lemma_value_from(&lemma, t, &data)?;
            let b = liu_value_from(&liu, t, &data)?;
            if a != b {
                return Ok(Outcome::Fail { witness: format!("t = {t}: lemma - liu = {}", a.try_sub(&b)?) });
            }
        }
        Ok(Outcome::Pass { checked: ts.len() })
    })
}

/// Block labels `(1..1, m+1, 1..1)` of the Levi `L_{n+1}`.
pub fn levi_labels(r: usize, m: usize) -> Vec<usize> {
    levi_composition(r, m).iter().enumerate().flat_map(|(b, &s)| std::iter::repeat(b).take(s)).collect()
}

fn levi_composition(r: usize, m: usize) -> Vec<usize> {
    let mut c = vec![1; r];
    c.push(m + 1);
    c.extend(vec![1; r]);
    c
}

/// `Z^k <-> Q^{-2k} X^{2k}` (inert) or `Q^{-k} X^k` (split): the
/// coefficient of `Z^k` is `c_{ek} Q^{ek}` where `c_j` is the `X^j`
/// coefficient and `e` the `X`-degree of `Z`.
pub fn x_series_to_z(
    f: &RationalFunction,
    q: &RationalFunction,
    x: VarId,
    z: VarId,
    place: Place,
    order: usize,
) -> Result<TruncatedSeries> {
    let e = if place.is_inert() { 2 } else { 1 };
    let s = series_expand(f, x, e * order)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=e * order {
        if k % e != 0 {
            if !s.coeff(k).is_zero() {
                return Err(Error::Mismatch(format!("odd X-coefficient {k} does not vanish")));
            }
            continue;
        }
        coeffs.push(s.coeff(k).try_mul(&q.powi(k as i32)?)?.reduce());
    }
    Ok(TruncatedSeries::from_coeffs(z, coeffs))
}

fn series_witness(lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Option<String> {
    lhs.first_mismatch(rhs).map(|k| {
        let diff = lhs.coeff(k).try_sub(rhs.coeff(k)).map(|d| d.to_string()).unwrap_or_default();
        format!("coefficient of Z^{k} differs by {diff}")
    })
}

/// `sum_t |det t|^{1/2+s} ch_t(S1) ch_t(S2)` against
/// `det(1 - Q^{-1} S_{1,s} (x)~ S2)^{-1}`, coefficientwise in `Z` up to
/// `order`. The variable table must contain `Q`, `X` and `Z`.
pub fn cauchy_check(s1: &TwistedTorusElement, s2: &TwistedTorusElement, order: usize) -> VerificationReport {
    let (r, place) = (s1.group.rank(), s1.group.place);
    let params = Params::ranks(r, 0, place).order(order).mode("symbolic");
    run_check("cauchy", params, |_| {
        if s2.group != s1.group {
            return Err(Error::Mismatch("Cauchy check needs two elements of the same group".into()));
        }
        let (lhs, rhs) = cauchy_series(s1, s2, order)?;
        Ok(match series_witness(&lhs, &rhs) {
            None => Outcome::Pass { checked: order + 1 },
            Some(w) => Outcome::Fail { witness: w },
        })
    })
}

/// [`cauchy_check`] on two generic symbolic elements of `G_r`; at `r = 1`
/// inert the convention pin is folded into the same report.
pub fn verify_cauchy(r: usize, place: Place, order: usize) -> VerificationReport {
    let g = GroupSpec::linear(r, place);
    let names: Vec<String> = ["a", "b", "c", "d"]
        .iter()
        .flat_map(|p| (1..=r).map(move |i| format!("{p}{i}")))
        .chain(["Q", "X", "Z"].map(String::from))
        .collect();
    let built = VarTable::new(&names).map_err(Error::from).and_then(|vars| {
        let s1 = TwistedTorusElement::symbolic(g, &vars, &names[..2 * r])?;
        let s2 = TwistedTorusElement::symbolic(g, &vars, &names[2 * r..4 * r])?;
        Ok((s1, s2))
    });
    let mut rep = match built {
        Ok((s1, s2)) => cauchy_check(&s1, &s2, order),
        Err(e) => return run_check("cauchy", Params::ranks(r, 0, place).order(order), |_| Err(e)),
    };
    if r == 1 && place.is_inert() {
        let pin = cauchy_convention_pin(order);
        rep.params.detail.insert("convention".into(), pin.params.detail["convention"].clone());
        rep.elapsed_ms += pin.elapsed_ms;
        if rep.passed() && !pin.passed() {
            rep.status = pin.status;
            rep.witness = pin.witness;
            rep.params.detail.remove("checked");
        }
    }
    rep
}

fn qxz(vars: &VarTable) -> Result<(RationalFunction, RationalFunction, VarId, VarId)> {
    let (qi, xi, zi) = (vars.id("Q")?, vars.id("X")?, vars.id("Z")?);
    Ok((RationalFunction::var(vars, qi), RationalFunction::var(vars, xi), xi, zi))
}

fn cauchy_series(
    s1: &TwistedTorusElement,
    s2: &TwistedTorusElement,
    order: usize,
) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let vars = s1.vars();
    let (q, x, xi, zi) = qxz(vars)?;
    let (r, place) = (s1.group.rank(), s1.group.place);
    let mut coeffs = vec![RationalFunction::zero(vars); order + 1];
    for t in enumerate_lambda_pp_at(r, place, order) {
        let chi = Weight::from_cocharacter(&s1.group, &t)?;
        let term = char_fixed_point_sum(&chi, s1)?.try_mul(&char_fixed_point_sum(&chi, s2)?)?;
        let k = t.size() as usize;
        coeffs[k] = coeffs[k].try_add(&term)?;
    }
    let lhs = TruncatedSeries::from_coeffs(zi, coeffs.into_iter().map(|c| c.reduce()).collect());
    let closed = recip(&itimes(&s1.scaled(&x), s2)?, &q.inv()?)?.inv()?;
    let rhs = x_series_to_z(&closed, &q, xi, zi, place, order)?;
    Ok((lhs, rhs))
}

/// Rank-one inert Cauchy check against the closed forms
/// `sum_k (a1 a2 b1 b2)^k Z^k = 1/(1 - Z a1 a2 b1 b2)`, together with the
/// negative control that reading `Z` as `Q^{-1} X` breaks it.
pub fn cauchy_convention_pin(order: usize) -> VerificationReport {
    let params = Params::ranks(1, 0, Place::Inert).order(order).mode("symbolic");
    run_check("cauchy", params.with("convention", "q_E = q^2"), |_| {
        let vars = VarTable::new(&["a1", "a2", "b1", "b2", "Q", "X", "Z"])?;
        let g = GroupSpec::linear(1, Place::Inert);
        let s1 = TwistedTorusElement::symbolic(g, &vars, &["a1".into(), "a2".into()])?;
        let s2 = TwistedTorusElement::symbolic(g, &vars, &["b1".into(), "b2".into()])?;
        let (lhs, rhs) = cauchy_series(&s1, &s2, order)?;
        let (q, x, xi, zi) = qxz(&vars)?;
        let p = ["a1", "a2", "b1", "b2"]
            .iter()
            .try_fold(RationalFunction::one(&vars), |acc, n| acc.try_mul(&RationalFunction::var(&vars, vars.id(n)?)))?;
        let z = RationalFunction::var(&vars, zi);
        let closed_z = RationalFunction::one(&vars).try_sub(&z.try_mul(&p)?)?.inv()?;
        let oracle = series_expand(&closed_z, zi, order)?;
        let geometric = (0..=order).all(|k| lhs.coeff(k) == &p.powi(k as i32).unwrap());
        if !geometric || oracle != lhs || rhs != lhs {
            return Ok(Outcome::Fail { witness: "rank-one closed forms disagree".into() });
        }
        // Z = Q^{-1} X: read X^k Q^k as the Z^k coefficient
        let closed = recip(&itimes(&s1.scaled(&x), &s2)?, &q.inv()?)?.inv()?;
        let wrong = series_expand(&closed, xi, order)?;
        let wrong_z: Vec<RationalFunction> =
            (0..=order).map(|k| Ok(wrong.coeff(k).try_mul(&q.powi(k as i32)?)?)).collect::<Result<_>>()?;
        let control_breaks = order == 0 || TruncatedSeries::from_coeffs(zi, wrong_z) != lhs;
        Ok(outcome(control_breaks, order + 1, || "the q_E = q reading also matched".into()))
    })
}

/// The local zeta sum as a series in `Z`. The coefficient of `Z^k` collects
/// the terms with `|t| = k`; each term is `W(t) B(t) delta_Q^{1/2}
/// delta_{P'}^{-1}` divided by the `Q`-part of `Z^k` (the `X`-parts of
/// `|det t|^s` and `Z^k` cancel).
pub fn zeta_series(data: &SatakeData, order: usize) -> Result<TruncatedSeries> {
    let terms = lemma_terms(data)?;
    zeta_series_with(data, order, |t| lemma_value_from(&terms, t, data))
}

/// As [`zeta_series`] but with the Bessel value computed by Liu's formula.
pub fn zeta_series_liu(data: &SatakeData, order: usize) -> Result<TruncatedSeries> {
    let terms = liu_terms(data)?;
    zeta_series_with(data, order, |t| liu_value_from(&terms, t, data))
}

fn zeta_series_with(
    data: &SatakeData,
    order: usize,
    bessel: impl Fn(&Cocharacter) -> Result<RationalFunction> + Sync,
) -> Result<TruncatedSeries> {
    let zi = data.vars.id("Z")?;
    let (r, m, place) = (data.r, data.m, data.place);
    let lq = modulus_exponents(ModulusContext::Qn, r, m, place);
    let lp = modulus_exponents(ModulusContext::PPrime, r, m, place);
    let per_z = if place.is_inert() { 2 } else { 1 };
    let ts = enumerate_lambda_pp_at(r, place, order);
    let terms = ts
        .par_iter()
        .map(|t| {
            let w = whittaker_value(t, data)?;
            if w.is_zero() {
                return Ok((t.size() as usize, w));
            }
            let e = modulus_q_power(&lq, &t.t, place, 1) + modulus_q_power(&lp, &t.t, place, -2) + per_z * t.size();
            Ok((t.size() as usize, w.try_mul(&bessel(t)?)?.try_mul(&q_pow(data, e)?)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut coeffs = vec![RationalFunction::zero(&data.vars); order + 1];
    for (k, v) in terms {
        coeffs[k] = coeffs[k].try_add(&v)?;
    }
    Ok(TruncatedSeries::from_coeffs(zi, coeffs.into_iter().map(|c| c.reduce()).collect()))
}

/// `L(1/2+s, tau x sigma_{n+1}) / (L(1+s, tau x sigma_m) L(1+2s, tau, As))`.
pub fn proposition_closed_form(data: &SatakeData) -> Result<RationalFunction> {
    let q1 = data.q.inv()?;
    let q2 = data.q.powi(-2)?;
    let tau_s = data.s_tau_s();
    let num = recip(&itimes(&tau_for_sigma_m(data)?, &star_embed(&data.s_m)?)?, &q2)?
        .try_mul(&recip(&asai_op(&tau_s, data.m)?, &q2)?)?;
    let den = recip(&itimes(&tau_s, &star_embed(&data.s_n1)?)?, &q1)?;
    Ok(num.try_div(&den)?.reduce())
}

/// The zeta series against the expansion of the closed form.
pub fn verify_unramified_proposition(r: usize, m: usize, place: Place, order: usize) -> VerificationReport {
    let params = Params::ranks(r, m, place).order(order).mode("symbolic");
    run_check("proposition", params, |params| {
        let data = SatakeData::symbolic(r, m, place)?;
        data.s_n1.group.check_capacity(SYMBOLIC_CAPACITY)?;
        let lhs = zeta_series(&data, order)?;
        let (xi, zi) = (data.vars.id("X")?, data.vars.id("Z")?);
        let rhs = x_series_to_z(&proposition_closed_form(&data)?, &data.q, xi, zi, place, order)?;
        params.detail.insert("t0".into(), lhs.coeff(0).to_string());
        Ok(match series_witness(&lhs, &rhs) {
            None => Outcome::Pass { checked: order + 1 },
            Some(w) => Outcome::Fail { witness: w },
        })
    })
}

/// `det(1 - q^{-1} S_{tau,s} (x)~ S_m) det(1 - q^{-1} As_m(S_{tau,s}))`.
pub fn key_lhs(data: &SatakeData) -> Result<RationalFunction> {
    let q2 = data.q.powi(-2)?;
    Ok(recip(&itimes(&tau_for_sigma_m(data)?, &star_embed(&data.s_m)?)?, &q2)?
        .try_mul(&recip(&asai_op(&data.s_tau_s(), data.m)?, &q2)?)?
        .reduce())
}

/// The three determinant factors of the `w`-summand, before division by `D`.
pub fn key_summand_factors(data: &SatakeData, ws: &TwistedTorusElement) -> Result<Vec<RationalFunction>> {
    let q1 = data.q.inv()?;
    let tau_s = data.s_tau_s();
    let brs = linear_star(&block_r(ws, data.r)?)?;
    let mid = star_embed(&block_middle(ws, data.r)?)?;
    let mut out = lfactor_scaled(&itimes(&star_embed(&data.s_m)?, &brs)?, &q1)?.factors().to_vec();
    out.extend(lfactor_scaled(&itimes(&tau_s, &brs)?, &q1)?.factors().iter().cloned());
    out.extend(lfactor_scaled(&itimes(&tau_s, &mid)?, &q1)?.factors().iter().cloned());
    Ok(out)
}

fn product(vars: &VarTable, fs: &[RationalFunction]) -> Result<RationalFunction> {
    fs.iter().try_fold(RationalFunction::one(vars), |acc, f| Ok(acc.try_mul(f)?))
}

/// `sum_w N(wS) / D(wS)` over `W(U_{n+1})`.
pub fn key_rhs(data: &SatakeData) -> Result<RationalFunction> {
    let weyl = twisted_weyl_group(&data.s_n1.group)?;
    let terms = weyl
        .par_iter()
        .map(|w| {
            let ws = weyl_act(w, &data.s_n1)?;
            let n = product(&data.vars, &key_summand_factors(data, &ws)?)?;
            Ok(n.try_mul(&inv_d_borel(&ws)?)?)
        })
        .collect::<Result<Vec<_>>>()?;
    sum(&data.vars, terms)
}

/// `S_{n+1} = diag(q^{1/2} A*, A_{m+1}, q^{-1/2} B) Frob` with
/// `S_{tau,s} = (A, B)` and `A_{m+1} = (e_1..e_{m+1})` generic.
pub fn specialize(data: &SatakeData) -> Result<SatakeData> {
    let tau_s = data.s_tau_s();
    let (a, b) = tau_s.halves();
    let mut coords: Vec<RationalFunction> =
        star_coords(a)?.iter().map(|c| Ok(c.try_mul(&data.q)?)).collect::<Result<_>>()?;
    for i in 1..=data.m + 1 {
        coords.push(RationalFunction::var(&data.vars, data.vars.id(&format!("e{i}"))?));
    }
    let qinv = data.q.inv()?;
    coords.extend(b.iter().map(|c| c * &qinv));
    let s_n1 = TwistedTorusElement::new(data.s_n1.group, &data.vars, coords)?;
    Ok(SatakeData { s_n1, ..data.clone() })
}

fn e_element(data: &SatakeData) -> Result<TwistedTorusElement> {
    let names: Vec<String> = (1..=data.m + 1).map(|i| format!("e{i}")).collect();
    TwistedTorusElement::symbolic(GroupSpec::unitary(data.m + 1, data.place), &data.vars, &names)
}

/// Every `d`-exponent vector of the summand numerator at `w = 1`, with
/// `chi + rho` either singular or in the dot-orbit of `0`, and within the
/// coordinate bounds. Returns the number of weights or a witness.
fn classify_summand_weights(data: &SatakeData, params: &mut Params) -> Result<std::result::Result<usize, String>> {
    let num = product(&data.vars, &key_summand_factors(data, &data.s_n1)?)?;
    let poly = num.as_laurent().ok_or_else(|| Error::Mismatch("summand numerator is not a Laurent polynomial".into()))?;
    let dids: Vec<VarId> = (1..=data.n1()).map(|i| data.vars.id(&format!("d{i}"))).collect::<std::result::Result<_, _>>()?;
    let weights: BTreeSet<Vec<i64>> =
        poly.terms().iter().map(|(mono, _)| dids.iter().map(|&i| mono[i] as i64).collect()).collect();
    let g = data.s_n1.group;
    let (r, m) = (data.r as i64, data.m as i64);
    let (mut singular, mut zero_orbit) = (0usize, 0usize);
    for lambda in &weights {
        for (i, &l) in lambda.iter().enumerate() {
            let i = i as i64 + 1;
            let ok = if i <= r {
                (-m - r..=0).contains(&l)
            } else if i <= r + m + 1 {
                (-r..=r).contains(&l)
            } else {
                (0..=m + r).contains(&l)
            };
            if !ok {
                return Ok(Err(format!("weight {lambda:?} violates the coordinate bounds at index {i}")));
            }
        }
        match classify_weight(&g, &Weight::new(lambda.clone())) {
            WeightClass::Singular => singular += 1,
            WeightClass::RegularOrbit { chi_plus, .. } if chi_plus.lambda.iter().all(|&x| x == 0) => zero_orbit += 1,
            WeightClass::RegularOrbit { chi_plus, .. } => {
                return Ok(Err(format!("weight {lambda:?} is regular with dominant form {chi_plus}")))
            }
        }
    }
    params.detail.insert("weights_singular".into(), singular.to_string());
    params.detail.insert("weights_zero_orbit".into(), zero_orbit.to_string());
    Ok(Ok(weights.len()))
}

/// Constancy of the right-hand side in `S_{n+1}`, by direct expansion and
/// by classifying the characters of the summand.
pub fn verify_rhs_constancy(r: usize, m: usize, place: Place) -> VerificationReport {
    run_check("rhs_constancy", Params::ranks(r, m, place).mode("symbolic"), |params| {
        let data = SatakeData::symbolic(r, m, place)?;
        data.s_n1.group.check_capacity(SYMBOLIC_CAPACITY)?;
        let rhs = key_rhs(&data)?;
        let dids: Vec<VarId> = (1..=data.n1()).map(|i| data.vars.id(&format!("d{i}"))).collect::<std::result::Result<_, _>>()?;
        let direct = dids.iter().all(|&i| !rhs.contains_var(i));
        params.detail.insert("route_direct".into(), if direct { "pass" } else { "fail" }.into());
        let route = classify_summand_weights(&data, params)?;
        params.detail.insert("route_weights".into(), if route.is_ok() { "pass" } else { "fail" }.into());
        Ok(match (direct, route) {
            (true, Ok(n)) => Outcome::Pass { checked: n },
            (false, _) => Outcome::Fail { witness: format!("right-hand side depends on S_(n+1): {rhs}") },
            (_, Err(w)) => Outcome::Fail { witness: w },
        })
    })
}

/// Constancy, then the two-step argument at the specialized point.
fn specialized_proof(data: &SatakeData, params: &mut Params) -> Result<Outcome> {
    let (r, m) = (data.r, data.m);
    match classify_summand_weights(data, params)? {
        Ok(n) => params.detail.insert("constancy_weights".into(), n.to_string()),
        Err(w) => return Ok(Outcome::Fail { witness: format!("constancy: {w}") }),
    };
    let sp = specialize(data)?;
    let s = &sp.s_n1;
    if !is_regular(s)? {
        return Ok(Outcome::Fail { witness: "specialized S_(n+1) is not regular".into() });
    }
    let g = s.group;
    let levi = levi_weyl_group(&g, &levi_labels(r, m))?;
    let weyl = twisted_weyl_group(&g)?;
    let n0 = key_summand_factors(&sp, s)?;
    let n0_prod = product(&sp.vars, &n0)?;
    let mut survivors = 0;
    for w in &weyl {
        let ws = weyl_act(w, s)?;
        let factors = key_summand_factors(&sp, &ws)?;
        let vanishes = factors.iter().any(|f| f.is_zero());
        let in_levi = levi.contains(w);
        if vanishes == in_levi {
            return Ok(Outcome::Fail { witness: format!("term {w}: vanishes = {vanishes}, in W(L) = {in_levi}") });
        }
        if in_levi {
            survivors += 1;
            if product(&sp.vars, &factors)? != n0_prod {
                return Ok(Outcome::Fail { witness: format!("numerator not W(L)-invariant at {w}") });
            }
        }
    }
    params.detail.insert("survivors".into(), format!("{survivors}/{}", weyl.len()));

    let qspec = ParabolicSpec::new(&g, levi_composition(r, m))?;
    let d_q = d_factor(&qspec, s)?;
    let levi_sum = sum(&sp.vars, levi.iter().map(|w| inv_d_borel(&weyl_act(w, s)?)).collect::<Result<Vec<_>>>()?)?;
    if levi_sum != d_q.inv()? {
        return Ok(Outcome::Fail { witness: "sum over W(L) of 1/D_B differs from 1/D_Q".into() });
    }

    let q1 = sp.q.inv()?;
    let q2 = sp.q.powi(-2)?;
    let tau_s = sp.s_tau_s();
    let tau_bar = SatakeData::conjugate(&tau_s)?;
    let emb_m = star_embed(&sp.s_m)?;
    let brs = linear_star(&block_r(s, r)?)?;
    let emb_e = star_embed(&e_element(&sp)?)?;
    let checks: [(&str, RationalFunction, RationalFunction); 4] = [
        ("sigma_m block", recip(&itimes(&emb_m, &brs)?, &q1)?, recip(&itimes(&tau_bar, &emb_m)?, &q2)?),
        ("tau block", recip(&itimes(&tau_s, &brs)?, &q1)?, recip(&itimes(&tau_s, &tau_bar)?, &q2)?),
        (
            "middle block",
            recip(&itimes(&tau_s, &star_embed(&block_middle(s, r)?)?)?, &q1)?,
            recip(&itimes(&tau_s, &emb_e)?, &q1)?,
        ),
        (
            "D_Q",
            d_q.clone(),
            recip(&asai_op(&tau_s, m + 1)?, &q2)?.try_mul(&recip(&itimes(&tau_s, &emb_e)?, &q1)?)?,
        ),
    ];
    for (name, a, b) in &checks {
        if a != b {
            return Ok(Outcome::Fail { witness: format!("{name}: difference {}", a.try_sub(b)?) });
        }
    }
    let as_pair = recip(&asai_op(&tau_s, m)?, &q2)?.try_mul(&recip(&asai_op(&tau_s, m + 1)?, &q2)?)?;
    if as_pair != checks[1].2 {
        return Ok(Outcome::Fail { witness: "As_m As_(m+1) differs from the self pairing".into() });
    }
    let assembled = n0_prod.try_div(&d_q)?;
    let lhs = key_lhs(&sp)?;
    Ok(outcome(assembled == lhs, weyl.len(), || format!("assembly: difference {}", assembled.try_sub(&lhs).unwrap())))
}

/// The key identity in one of three modes: full symbolic equality, the
/// two-step proof at a specialized point, or exact evaluation at `trials`
/// random rational points drawn from `seed`.
pub fn verify_key_identity(r: usize, m: usize, place: Place, mode: Mode, trials: usize, seed: u64) -> VerificationReport {
    let mut params = Params::ranks(r, m, place).mode(mode.name());
    if mode == Mode::Numeric {
        params = params.seed(seed).with("trials", trials);
    }
    run_check("key_identity", params, |params| {
        let n1 = m + 2 * r + 1;
        match mode {
            Mode::Symbolic | Mode::Specialized => {
                if n1 > SYMBOLIC_CAPACITY {
                    params.detail.insert("hint".into(), "use --mode numeric".into());
                    return Err(Error::CapacityExceeded { rank: n1, bound: SYMBOLIC_CAPACITY });
                }
                let data = SatakeData::symbolic(r, m, place)?;
                if mode == Mode::Specialized {
                    return specialized_proof(&data, params);
                }
                let (lhs, rhs) = (key_lhs(&data)?, key_rhs(&data)?);
                Ok(outcome(lhs == rhs, twisted_weyl_group(&data.s_n1.group)?.len(), || {
                    format!("lhs - rhs = {}", lhs.try_sub(&rhs).unwrap())
                }))
            }
            Mode::Numeric => {
                GroupSpec::unitary(n1, place).check_capacity(crate::lgroup::DEFAULT_CAPACITY)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut checked = 0;
                while checked < trials {
                    let data = sample_regular(r, m, place, &mut rng)?;
                    let (lhs, rhs) = (key_lhs(&data)?, key_rhs(&data)?);
                    if lhs != rhs {
                        return Ok(Outcome::Fail { witness: format!("trial {checked}: lhs = {lhs}, rhs = {rhs}") });
                    }
                    checked += 1;
                }
                Ok(Outcome::Pass { checked })
            }
        }
    })
}

fn sample_regular(r: usize, m: usize, place: Place, rng: &mut ChaCha8Rng) -> Result<SatakeData> {
    for _ in 0..100 {
        let data = SatakeData::numeric(r, m, place, false, rng)?;
        if is_regular(&data.s_n1)? && is_regular(&data.s_m)? && is_regular(&data.s_tau)? {
            return Ok(data);
        }
    }
    Err(Error::Precondition("no regular sample point found".into()))
}

/// Both sides of the L-quotient identity, cross-multiplied so that each is
/// a product of reciprocal L-factors. `with_asai = false` drops the Asai
/// factors from the right-hand side.
fn lquotient_sides(data: &SatakeData, with_asai: bool) -> Result<(crate::lfactors::LFactor, crate::lfactors::LFactor)> {
    let q1 = data.q.inv()?;
    let q2 = data.q.powi(-2)?;
    let emb_d = star_embed(&data.s_n1)?;
    let s_n = data.s_n_s()?;
    let mut lhs = lfactor_scaled(&adjoint_op(&s_n)?, &q2)?
        .mul(&lfactor_scaled(&itimes(&star_embed(&data.s_m)?, &emb_d)?, &q1)?);
    let mut rhs = lfactor_scaled(&itimes(&star_embed(&s_n)?, &emb_d)?, &q1)?
        .mul(&lfactor_scaled(&adjoint_op(&data.s_tau)?, &q2)?)
        .mul(&lfactor_scaled(&adjoint_op(&data.s_m)?, &q2)?);
    for d in [data.clone(), data.inverted()?] {
        let tau_s = d.s_tau_s();
        lhs = lhs.mul(&lfactor_scaled(&itimes(&tau_s, &star_embed(&d.s_n1)?)?, &q1)?);
        rhs = rhs.mul(&lfactor_scaled(&itimes(&tau_for_sigma_m(&d)?, &star_embed(&d.s_m)?)?, &q2)?);
        if with_asai {
            rhs = rhs.mul(&lfactor_scaled(&asai_op(&tau_s, d.m)?, &q2)?);
        }
    }
    Ok((lhs, rhs))
}

/// `L(1/2, sigma_{n,s} x sigma_{n+1}) / L(1, sigma_{n,s}, Ad)` against its
/// factorization through the Levi data, with `|.|^2` realized by inverting
/// every coordinate and `s -> -s`.
pub fn verify_lquotient_factorization(r: usize, m: usize, place: Place) -> VerificationReport {
    run_check("lquotient", Params::ranks(r, m, place).mode("symbolic"), |params| {
        let data = SatakeData::symbolic(r, m, place)?;
        data.s_n1.group.check_capacity(SYMBOLIC_CAPACITY)?;
        let ad_tau = adjoint_op(&data.s_tau)?;
        let ad_m = adjoint_op(&data.s_m)?;
        let dim = ad_tau.dim() + ad_m.dim();
        params.detail.insert("levi_ad_dim".into(), dim.to_string());
        if dim != 2 * r * r + m * m {
            return Ok(Outcome::Fail { witness: format!("adjoint blocks have dimension {dim}") });
        }
        let (lhs, rhs) = lquotient_sides(&data, true)?;
        Ok(outcome(lhs.same_factors(&rhs)?, lhs.factors().len(), || {
            let (a, b) = (lhs.reciprocal().unwrap(), rhs.reciprocal().unwrap());
            format!("lhs / rhs = {}", a.try_div(&b).unwrap().reduce())
        }))
    })
}
