//! Representations of the L-groups, local L-factors through their
//! reciprocal polynomials, modulus characters and Euler-factor constants.

use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::{rat, ratio, Matrix, Rat, RationalFunction, VarTable};
use crate::lgroup::{GroupKind, GroupSpec, Place, TwistedTorusElement};
use crate::report::{outcome, run_check, Params, VerificationReport};

/// An operator `R(S)` on a representation space of the L-group.
#[derive(Clone, Debug)]
pub struct LRepOperator {
    matrix: Matrix,
}

impl LRepOperator {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::Mismatch("operator matrix is not square".into()));
        }
        Ok(LRepOperator { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn direct_sum(&self, other: &LRepOperator) -> LRepOperator {
        LRepOperator { matrix: self.matrix.direct_sum(&other.matrix) }
    }
}

/// Reciprocal polynomial of a local L-factor, kept as its list of factors.
#[derive(Clone, Debug)]
pub struct LFactor {
    vars: VarTable,
    factors: Vec<RationalFunction>,
    dim: usize,
}

impl LFactor {
    pub fn trivial(vars: &VarTable) -> Self {
        LFactor { vars: vars.clone(), factors: Vec::new(), dim: 0 }
    }

    pub fn factors(&self) -> &[RationalFunction] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `L(s)^{-1}` as a single function.
    pub fn reciprocal(&self) -> Result<RationalFunction> {
        let mut out = RationalFunction::one(&self.vars);
        for f in &self.factors {
            out = out.try_mul(f)?;
        }
        Ok(out.reduce())
    }

    /// `L(s)` itself.
    pub fn value(&self) -> Result<RationalFunction> {
        Ok(self.reciprocal()?.inv()?)
    }

    /// Equality as multisets of normalized factors, avoiding the expansion
    /// of long products. Falls back to comparing reciprocals when a factor
    /// is not a Laurent polynomial.
    pub fn same_factors(&self, other: &LFactor) -> Result<bool> {
        let key = |l: &LFactor| -> Option<Vec<_>> {
            let mut v = Vec::with_capacity(l.factors.len());
            for f in &l.factors {
                let p = f.as_laurent()?;
                if p.is_one() {
                    continue;
                }
                let (unit, monic) = p.normalize_unit();
                v.push((monic, unit));
            }
            v.sort();
            Some(v)
        };
        match (key(self), key(other)) {
            (Some(a), Some(b)) => {
                if a == b {
                    return Ok(true);
                }
                Ok(self.reciprocal()?.try_eq(&other.reciprocal()?)?)
            }
            _ => Ok(self.reciprocal()?.try_eq(&other.reciprocal()?)?),
        }
    }

    pub fn mul(&self, other: &LFactor) -> LFactor {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        LFactor { vars: self.vars.clone(), factors, dim: self.dim + other.dim }
    }
}

/// `det(1 - scalar * op)`, factored along cycles when `op` is monomial.
pub fn lfactor_scaled(op: &LRepOperator, scalar: &RationalFunction) -> Result<LFactor> {
    let vars = scalar.vars().clone();
    let factors = match op.matrix.det_one_minus_factors(scalar) {
        Some(f) => f,
        None => vec![op.matrix.det_one_minus(scalar)?],
    };
    Ok(LFactor { vars, factors, dim: op.dim() })
}

/// `det(1 - Q^{-shift2} X op)`: the L-factor at `s + shift2/2`.
pub fn lfactor(op: &LRepOperator, q: &RationalFunction, x: &RationalFunction, shift2: i32) -> Result<LFactor> {
    lfactor_scaled(op, &q.powi(-shift2)?.try_mul(x)?)
}

fn place_of(s: &TwistedTorusElement) -> Place {
    s.group.place
}

fn linear_halves(s: &TwistedTorusElement, what: &str) -> Result<(Vec<RationalFunction>, Vec<RationalFunction>)> {
    match s.group.kind {
        GroupKind::Linear(_) => {
            let (a, b) = s.halves();
            Ok((a.to_vec(), b.to_vec()))
        }
        GroupKind::Unitary(_) => Err(Error::Mismatch(format!("{what} expects a linear-kind element"))),
    }
}

fn linear_element(
    vars: &VarTable,
    place: Place,
    g1: Vec<RationalFunction>,
    g2: Vec<RationalFunction>,
) -> Result<TwistedTorusElement> {
    let k = g1.len();
    let mut coords = g1;
    coords.extend(g2);
    TwistedTorusElement::new(GroupSpec::linear(k, place), vars, coords)
}

/// `d*_i = d_{l+1-i}^{-1}`.
pub fn star_coords(d: &[RationalFunction]) -> Result<Vec<RationalFunction>> {
    d.iter().rev().map(|c| Ok(c.inv()?)).collect()
}

/// `S_k (x)~ S_l` on two copies of `C^k (x) C^l`; at inert places the
/// Frobenius sends copy 0 to copy 1 scaled by the first factors and back by
/// the second.
pub fn itimes(sk: &TwistedTorusElement, sl: &TwistedTorusElement) -> Result<LRepOperator> {
    if place_of(sk) != place_of(sl) || sk.frobenius != sl.frobenius {
        return Err(Error::Mismatch("itimes: place mismatch".into()));
    }
    let (g1, g2) = linear_halves(sk, "itimes")?;
    let (h1, h2) = linear_halves(sl, "itimes")?;
    let (k, l) = (g1.len(), h1.len());
    let block = k * l;
    let vars = sk.vars().clone();
    let mut m = Matrix::zeros(&vars, 2 * block, 2 * block);
    for i in 0..k {
        for j in 0..l {
            let p = i * l + j;
            let v1 = &g1[i] * &h1[j];
            let v2 = &g2[i] * &h2[j];
            if sk.frobenius {
                m.set(block + p, p, v1);
                m.set(p, block + p, v2);
            } else {
                m.set(p, p, v1);
                m.set(block + p, block + p, v2);
            }
        }
    }
    LRepOperator::new(m)
}

/// Base change `g -> (g, g*)` from the unitary to the linear dual.
pub fn star_embed(s: &TwistedTorusElement) -> Result<TwistedTorusElement> {
    match s.group.kind {
        GroupKind::Unitary(_) => linear_element(s.vars(), s.group.place, s.coords.clone(), star_coords(&s.coords)?),
        GroupKind::Linear(_) => Err(Error::Mismatch("star_embed expects a unitary-kind element".into())),
    }
}

/// `(g1, g2) -> (g2*, g1*)`.
pub fn linear_star(s: &TwistedTorusElement) -> Result<TwistedTorusElement> {
    let (g1, g2) = linear_halves(s, "linear_star")?;
    linear_element(s.vars(), s.group.place, star_coords(&g2)?, star_coords(&g1)?)
}

/// Asai representation on `C^r (x) C^r`. Inert: `e_i (x) e_j` goes to
/// `(-1)^parity a_i b_j e_j (x) e_i`. Split: the plain tensor product.
pub fn asai_op(s: &TwistedTorusElement, parity: usize) -> Result<LRepOperator> {
    let (a, b) = linear_halves(s, "asai_op")?;
    let r = a.len();
    let vars = s.vars().clone();
    let sign = if parity % 2 == 0 { rat(1) } else { rat(-1) };
    let mut m = Matrix::zeros(&vars, r * r, r * r);
    for i in 0..r {
        for j in 0..r {
            let v = &a[i] * &b[j];
            if s.frobenius {
                m.set(j * r + i, i * r + j, v.scale(&sign));
            } else {
                m.set(i * r + j, i * r + j, v);
            }
        }
    }
    LRepOperator::new(m)
}

/// `S^{(r)}`: the first `r` coordinates of `S` paired with the first `r` of `S*`.
pub fn block_r(s: &TwistedTorusElement, r: usize) -> Result<TwistedTorusElement> {
    let star = star_coords(&s.coords)?;
    linear_element(s.vars(), s.group.place, s.coords[..r].to_vec(), star[..r].to_vec())
}

/// `S^{(m+1)}`: the middle unitary block.
pub fn block_middle(s: &TwistedTorusElement, r: usize) -> Result<TwistedTorusElement> {
    let n1 = s.coords.len();
    let mid = s.coords[r..n1 - r].to_vec();
    TwistedTorusElement::new(GroupSpec::unitary(mid.len(), s.group.place), s.vars(), mid)
}

/// The three blocks of `S_tau (x)~ S_{n+1}` along `(r) + (m+1) + (r)*`.
pub fn block_decompose_itimes(
    s_tau: &TwistedTorusElement,
    s_n1: &TwistedTorusElement,
) -> Result<(LRepOperator, LRepOperator, LRepOperator)> {
    let r = s_tau.group.rank();
    let br = block_r(s_n1, r)?;
    Ok((
        itimes(s_tau, &br)?,
        itimes(s_tau, &star_embed(&block_middle(s_n1, r)?)?)?,
        itimes(s_tau, &linear_star(&br)?)?,
    ))
}

/// Adjoint representation on the whole of `gl`, torus included. For the
/// unitary dual at inert places the Frobenius sends `E_ij` to
/// `(-1)^{i+j+1} E_{j'i'}` with `i' = l+1-i`; for the linear dual it swaps
/// the two factors.
pub fn adjoint_op(s: &TwistedTorusElement) -> Result<LRepOperator> {
    let vars = s.vars().clone();
    let c = &s.coords;
    match s.group.kind {
        GroupKind::Unitary(l) => {
            let mut m = Matrix::zeros(&vars, l * l, l * l);
            for i in 0..l {
                for j in 0..l {
                    if s.frobenius {
                        let (ip, jp) = (l - 1 - i, l - 1 - j);
                        let sign = if (i + j) % 2 == 0 { rat(-1) } else { rat(1) };
                        m.set(jp * l + ip, i * l + j, c[jp].try_div(&c[ip])?.scale(&sign));
                    } else {
                        m.set(i * l + j, i * l + j, c[i].try_div(&c[j])?);
                    }
                }
            }
            LRepOperator::new(m)
        }
        GroupKind::Linear(k) => {
            let mut m = Matrix::zeros(&vars, 2 * k * k, 2 * k * k);
            for f in 0..2 {
                for i in 0..k {
                    for j in 0..k {
                        let idx = f * k * k + i * k + j;
                        if s.frobenius {
                            let g = (1 - f) * k;
                            m.set((1 - f) * k * k + i * k + j, idx, c[g + i].try_div(&c[g + j])?);
                        } else {
                            m.set(idx, idx, c[f * k + i].try_div(&c[f * k + j])?);
                        }
                    }
                }
            }
            LRepOperator::new(m)
        }
    }
}

/// Groups whose modulus characters enter the unfolding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusContext {
    /// Borel of `G_r`.
    BorelR,
    /// Parabolic of `U_{n+1}` with blocks `(1..1, m+1, 1..1)`.
    P,
    /// Parabolic of `U_n` with blocks `(r, m, r)`.
    Qn,
    /// Parabolic of `U_n` with blocks `(1..1, m, 1..1)`.
    PPrime,
}

/// Linear form `lambda` with `delta(t) = q_E^{-<lambda, t>}`. The cocharacter
/// has `r` entries at inert places and `2r` at split ones. Found by summing
/// torus weights over the unipotent radical of the explicit matrix model
/// (basis `x_1..x_r, h, v_0, y_r..y_1`).
pub fn modulus_exponents(ctx: ModulusContext, r: usize, m: usize, place: Place) -> Vec<i64> {
    let len = if place.is_inert() { r } else { 2 * r };
    let unit = |i: usize, sign: i64| {
        let mut v = vec![0i64; len];
        v[i] = sign;
        v
    };
    if ctx == ModulusContext::BorelR {
        let rho: Vec<i64> = (0..r).map(|i| r as i64 - 1 - 2 * i as i64).collect();
        return if place.is_inert() { rho } else { rho.iter().chain(&rho).copied().collect() };
    }
    let with_v0 = ctx == ModulusContext::P;
    let mid = if with_v0 { m + 1 } else { m };
    let mut weights: Vec<Vec<i64>> = (0..r).map(|i| unit(i, 1)).collect();
    weights.extend(std::iter::repeat(vec![0; len]).take(mid));
    for i in (0..r).rev() {
        weights.push(if place.is_inert() { unit(i, -1) } else { unit(r + i, -1) });
    }
    let blocks: Vec<usize> = match ctx {
        ModulusContext::Qn => [r, m, r].into_iter().filter(|&b| b > 0).collect(),
        _ => std::iter::repeat(1)
            .take(r)
            .chain((mid > 0).then_some(mid))
            .chain(std::iter::repeat(1).take(r))
            .collect(),
    };
    let labels: Vec<usize> = blocks.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat(b).take(s)).collect();
    let mut lambda = vec![0i64; len];
    for a in 0..weights.len() {
        for b in a + 1..weights.len() {
            if labels[a] != labels[b] {
                for (l, (wa, wb)) in lambda.iter_mut().zip(weights[a].iter().zip(&weights[b])) {
                    *l += wa - wb;
                }
            }
        }
    }
    if place.is_inert() {
        // E_ab and its hermitian partner span one E-line of the unitary Lie algebra
        for l in lambda.iter_mut() {
            debug_assert!(*l % 2 == 0);
            *l /= 2;
        }
    }
    lambda
}

/// Exponent of `Q` in `delta(t)^{e/2}`.
pub fn modulus_q_power(lambda: &[i64], t: &[i64], place: Place, e: i64) -> i64 {
    let pairing: i64 = lambda.iter().zip(t).map(|(l, x)| l * x).sum();
    if place.is_inert() {
        -2 * e * pairing
    } else {
        -e * pairing
    }
}

/// `delta_P + delta_{B_r} + delta_{Q_n} - 2 delta_{P'}` against the exponent
/// vector of `|det|`.
pub fn verify_modulus_identity(r: usize, m: usize, place: Place) -> VerificationReport {
    run_check("modulus_identity", Params::ranks(r, m, place), |params| {
        let e = |c| modulus_exponents(c, r, m, place);
        let (p, b, q, pp) = (e(ModulusContext::P), e(ModulusContext::BorelR), e(ModulusContext::Qn), e(ModulusContext::PPrime));
        let combined: Vec<i64> = (0..p.len()).map(|i| p[i] + b[i] + q[i] - 2 * pp[i]).collect();
        params.detail.insert("combined".into(), format!("{combined:?}"));
        Ok(outcome(combined.iter().all(|&x| x == 1), combined.len(), || format!("exponents {combined:?}")))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaKind {
    /// `prod zeta_E(i)`.
    Linear,
    /// `prod L(i, eta^i)`.
    Unitary,
}

#[derive(Clone, Debug)]
pub struct DeltaConstant {
    pub kind: DeltaKind,
    pub rank: usize,
    pub value: RationalFunction,
}

/// Local Euler-factor constant as a function of `Q = q^{1/2}`.
pub fn delta_constant(kind: DeltaKind, rank: usize, place: Place, q: &RationalFunction) -> Result<DeltaConstant> {
    let one = RationalFunction::one(q.vars());
    let mut value = one.clone();
    for i in 1..=rank as i32 {
        let recips: Vec<RationalFunction> = match (kind, place) {
            (DeltaKind::Linear, Place::Inert) => vec![&one - &q.powi(-4 * i)?],
            (DeltaKind::Linear, Place::Split) => vec![&one - &q.powi(-2 * i)?; 2],
            (DeltaKind::Unitary, Place::Inert) => {
                let eta = if i % 2 == 0 { rat(1) } else { rat(-1) };
                vec![&one - &q.powi(-2 * i)?.scale(&eta)]
            }
            (DeltaKind::Unitary, Place::Split) => vec![&one - &q.powi(-2 * i)?],
        };
        for f in recips {
            value = value.try_div(&f)?;
        }
    }
    Ok(DeltaConstant { kind, rank, value: value.reduce() })
}

/// Satake parameters of `tau`, `sigma_m`, `sigma_{n+1}` with the scalars
/// `Q = q^{1/2}` and `X = q^{-s}`.
#[derive(Clone, Debug)]
pub struct SatakeData {
    pub r: usize,
    pub m: usize,
    pub place: Place,
    pub vars: VarTable,
    pub q: RationalFunction,
    pub x: RationalFunction,
    pub s_tau: TwistedTorusElement,
    pub s_m: TwistedTorusElement,
    pub s_n1: TwistedTorusElement,
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl SatakeData {
    pub fn n1(&self) -> usize {
        self.m + 2 * self.r + 1
    }

    /// Variable names of a fully symbolic table: `a, b, c, d, e, Q, X, Z`.
    pub fn symbolic_names(r: usize, m: usize) -> Vec<String> {
        let n1 = m + 2 * r + 1;
        let mut all = names("a", r);
        all.extend(names("b", r));
        all.extend(names("c", m));
        all.extend(names("d", n1));
        all.extend(names("e", m + 1));
        all.extend(["Q", "X", "Z"].map(String::from));
        all
    }

    pub fn symbolic(r: usize, m: usize, place: Place) -> Result<Self> {
        let vars = VarTable::new(&Self::symbolic_names(r, m))?;
        let mut tau = names("a", r);
        tau.extend(names("b", r));
        let s_tau = TwistedTorusElement::symbolic(GroupSpec::linear(r, place), &vars, &tau)?;
        let s_m = TwistedTorusElement::symbolic(GroupSpec::unitary(m, place), &vars, &names("c", m))?;
        let s_n1 = TwistedTorusElement::symbolic(GroupSpec::unitary(m + 2 * r + 1, place), &vars, &names("d", m + 2 * r + 1))?;
        let q = RationalFunction::var(&vars, vars.id("Q")?);
        let x = RationalFunction::var(&vars, vars.id("X")?);
        Ok(SatakeData { r, m, place, vars, q, x, s_tau, s_m, s_n1 })
    }

    /// Random rational Satake coordinates. With `symbolic_qx` the scalars
    /// `Q` and `X` stay variables, otherwise they are sampled as well.
    pub fn numeric<R: Rng>(r: usize, m: usize, place: Place, symbolic_qx: bool, rng: &mut R) -> Result<Self> {
        let vars = VarTable::new(&["Q", "X", "Z"])?;
        let mut sample = |rng: &mut R| -> RationalFunction {
            let num = rng.gen_range(1..=29i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let den = rng.gen_range(1..=13i64);
            RationalFunction::constant(&vars, ratio(num, den))
        };
        let coords = |n: usize, rng: &mut R, sample: &mut dyn FnMut(&mut R) -> RationalFunction| {
            (0..n).map(|_| sample(rng)).collect::<Vec<_>>()
        };
        let s_tau = TwistedTorusElement::new(GroupSpec::linear(r, place), &vars, coords(2 * r, rng, &mut sample))?;
        let s_m = TwistedTorusElement::new(GroupSpec::unitary(m, place), &vars, coords(m, rng, &mut sample))?;
        let s_n1 = TwistedTorusElement::new(
            GroupSpec::unitary(m + 2 * r + 1, place),
            &vars,
            coords(m + 2 * r + 1, rng, &mut sample),
        )?;
        let (q, x) = if symbolic_qx {
            (RationalFunction::var(&vars, vars.id("Q")?), RationalFunction::var(&vars, vars.id("X")?))
        } else {
            let qv = rng.gen_range(2..=7i64);
            let xv = ratio(rng.gen_range(1..=9i64), rng.gen_range(10..=23i64));
            (RationalFunction::constant(&vars, rat(qv)), RationalFunction::constant(&vars, xv))
        };
        Ok(SatakeData { r, m, place, vars, q, x, s_tau, s_m, s_n1 })
    }

    /// `eta(varpi)`: `-1` inert, `1` split.
    pub fn eta(&self) -> Rat {
        if self.place.is_inert() {
            rat(-1)
        } else {
            rat(1)
        }
    }

    /// `S_{tau,s} = q^{-s} S_tau`.
    pub fn s_tau_s(&self) -> TwistedTorusElement {
        self.s_tau.scaled(&self.x)
    }

    /// Galois conjugate `(B, A)` of a linear-kind element; at inert places it
    /// has the same invariants as the original.
    pub fn conjugate(s: &TwistedTorusElement) -> Result<TwistedTorusElement> {
        let (a, b) = linear_halves(s, "conjugate")?;
        linear_element(s.vars(), s.group.place, b, a)
    }

    /// `S_n = (A, c, B*)`, the parameter of the Levi representation `tau (+) sigma_m (+) tau*`.
    pub fn s_n(&self) -> Result<TwistedTorusElement> {
        let (a, b) = linear_halves(&self.s_tau, "s_n")?;
        let mut coords = a;
        coords.extend(self.s_m.coords.iter().cloned());
        coords.extend(star_coords(&b)?);
        TwistedTorusElement::new(GroupSpec::unitary(coords.len(), self.place), &self.vars, coords)
    }

    /// `(q^{-s} A, c, (q^{-s} B)*)`.
    pub fn s_n_s(&self) -> Result<TwistedTorusElement> {
        let (a, b) = linear_halves(&self.s_tau_s(), "s_n_s")?;
        let mut coords = a;
        coords.extend(self.s_m.coords.iter().cloned());
        coords.extend(star_coords(&b)?);
        TwistedTorusElement::new(GroupSpec::unitary(coords.len(), self.place), &self.vars, coords)
    }

    /// Every Satake coordinate inverted and `s -> -s`.
    pub fn inverted(&self) -> Result<SatakeData> {
        let inv = |e: &TwistedTorusElement| -> Result<TwistedTorusElement> {
            let coords = e.coords.iter().map(|c| Ok(c.inv()?)).collect::<Result<Vec<_>>>()?;
            TwistedTorusElement::new(e.group, &self.vars, coords)
        };
        Ok(SatakeData {
            x: self.x.inv()?,
            s_tau: inv(&self.s_tau)?,
            s_m: inv(&self.s_m)?,
            s_n1: inv(&self.s_n1)?,
            ..self.clone()
        })
    }

    /// `prod_{i <= k} L(s + i - 1/2, eta^i)` through its reciprocal factors.
    pub fn eta_factors(&self, k: usize) -> Result<LFactor> {
        let one = RationalFunction::one(&self.vars);
        let mut factors = Vec::with_capacity(k);
        for i in 1..=k as i32 {
            let eta = if self.place.is_inert() && i % 2 == 1 { rat(-1) } else { rat(1) };
            factors.push(&one - &self.q.powi(1 - 2 * i)?.try_mul(&self.x)?.scale(&eta));
        }
        Ok(LFactor { vars: self.vars.clone(), factors, dim: k })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientKind {
    /// `Pi` on `G_n x G_{n+1}` from the Eisenstein parameter `(A, c, B*)`.
    Corank1,
    /// `Pi` on `G_m x G_{n+1}`.
    Bessel,
}

/// `prod L(s+i-1/2, eta^i) L(s, Pi) / L(s+1/2, Pi, As')` assembled from
/// reciprocal factors. A factor vanishing identically is a pole or zero of
/// the quotient and is reported.
pub fn normalized_l_quotient(data: &SatakeData, which: QuotientKind) -> Result<RationalFunction> {
    let (left, left_rank) = match which {
        QuotientKind::Corank1 => (data.s_n()?, data.m + 2 * data.r),
        QuotientKind::Bessel => (data.s_m.clone(), data.m),
    };
    let n1 = data.n1();
    let pi_a = star_embed(&left)?;
    let pi_b = star_embed(&data.s_n1)?;
    let denominators = data.eta_factors(n1)?.mul(&lfactor(&itimes(&pi_a, &pi_b)?, &data.q, &data.x, 0)?);
    let numerators = lfactor(&asai_op(&pi_a, left_rank)?, &data.q, &data.x, 1)?
        .mul(&lfactor(&asai_op(&pi_b, n1)?, &data.q, &data.x, 1)?);
    for f in denominators.factors().iter().chain(numerators.factors()) {
        if f.is_zero() {
            return Err(Error::Precondition("pole/zero collision in L-quotient assembly".into()));
        }
    }
    Ok(numerators.reciprocal()?.try_div(&denominators.reciprocal()?)?.reduce())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lgroup::{twisted_weyl_group, weyl_act};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn table(names: &[&str]) -> VarTable {
        VarTable::new(names).unwrap()
    }

    fn v(t: &VarTable, name: &str) -> RationalFunction {
        RationalFunction::var(t, t.id(name).unwrap())
    }

    fn lin(t: &VarTable, place: Place, names: &[&str]) -> TwistedTorusElement {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        TwistedTorusElement::symbolic(GroupSpec::linear(names.len() / 2, place), t, &names).unwrap()
    }

    fn uni(t: &VarTable, place: Place, names: &[&str]) -> TwistedTorusElement {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        TwistedTorusElement::symbolic(GroupSpec::unitary(names.len(), place), t, &names).unwrap()
    }

    fn recip(op: &LRepOperator, z: &RationalFunction) -> RationalFunction {
        lfactor_scaled(op, z).unwrap().reciprocal().unwrap()
    }

    #[test]
    fn itimes_rank_one() {
        let t = table(&["a1", "a2", "b1", "b2", "z"]);
        let (a1, a2, b1, b2, z) = (v(&t, "a1"), v(&t, "a2"), v(&t, "b1"), v(&t, "b2"), v(&t, "z"));
        let one = RationalFunction::one(&t);
        let op = itimes(&lin(&t, Place::Inert, &["a1", "a2"]), &lin(&t, Place::Inert, &["b1", "b2"])).unwrap();
        assert_eq!(op.matrix().get(1, 0), &(&a1 * &b1));
        assert_eq!(op.matrix().get(0, 1), &(&a2 * &b2));
        assert!(op.matrix().get(0, 0).is_zero());
        let expect = &one - &(&(&z * &z) * &(&(&a1 * &a2) * &(&b1 * &b2)));
        assert_eq!(recip(&op, &z), expect);
        assert_eq!(op.matrix().det_one_minus(&z).unwrap(), expect);

        let op = itimes(&lin(&t, Place::Split, &["a1", "a2"]), &lin(&t, Place::Split, &["b1", "b2"])).unwrap();
        let expect = &(&one - &(&z * &(&a1 * &b1))) * &(&one - &(&z * &(&a2 * &b2)));
        assert_eq!(recip(&op, &z), expect);
    }

    #[test]
    fn frobenius_square_is_block_diagonal() {
        let t = table(&["a1", "a2", "b1", "b2"]);
        let op = itimes(&lin(&t, Place::Inert, &["a1", "a2"]), &lin(&t, Place::Inert, &["b1", "b2"])).unwrap();
        let sq = op.matrix().mul(op.matrix()).unwrap();
        let prod = &(&v(&t, "a1") * &v(&t, "a2")) * &(&v(&t, "b1") * &v(&t, "b2"));
        assert_eq!(sq.get(0, 0), &prod);
        assert_eq!(sq.get(1, 1), &prod);
        assert!(sq.get(0, 1).is_zero() && sq.get(1, 0).is_zero());
    }

    #[test]
    fn itimes_place_mismatch() {
        let t = table(&["a1", "a2", "b1", "b2"]);
        let r = itimes(&lin(&t, Place::Inert, &["a1", "a2"]), &lin(&t, Place::Split, &["b1", "b2"]));
        assert!(matches!(r, Err(Error::Mismatch(_))));
    }

    #[test]
    fn star_embed_examples() {
        let t = table(&["c1", "c2"]);
        let s = star_embed(&uni(&t, Place::Inert, &["c1"])).unwrap();
        assert_eq!(s.coords, vec![v(&t, "c1"), v(&t, "c1").inv().unwrap()]);
        let s = star_embed(&uni(&t, Place::Inert, &["c1", "c2"])).unwrap();
        let inv = |n| v(&t, n).inv().unwrap();
        assert_eq!(s.coords, vec![v(&t, "c1"), v(&t, "c2"), inv("c2"), inv("c1")]);
        // star twice
        let back = star_coords(&star_coords(&s.coords[..2]).unwrap()).unwrap();
        assert_eq!(back, s.coords[..2].to_vec());
    }

    #[test]
    fn asai_examples() {
        let t = table(&["a1", "a2", "z"]);
        let one = RationalFunction::one(&t);
        let z = v(&t, "z");
        let a = &v(&t, "a1") * &v(&t, "a2");
        let s = lin(&t, Place::Inert, &["a1", "a2"]);
        assert_eq!(recip(&asai_op(&s, 0).unwrap(), &z), &one - &(&z * &a));
        assert_eq!(recip(&asai_op(&s, 1).unwrap(), &z), &one + &(&z * &a));
        let s = lin(&t, Place::Split, &["a1", "a2"]);
        assert_eq!(recip(&asai_op(&s, 1).unwrap(), &z), &one - &(&z * &a));
    }

    #[test]
    fn asai_parities_multiply_to_self_pairing() {
        for r in 1..=2 {
            let a = names("a", r);
            let b = names("b", r);
            let mut all: Vec<String> = a.iter().chain(&b).cloned().collect();
            all.push("z".into());
            let t = VarTable::new(&all).unwrap();
            let z = v(&t, "z");
            let coords: Vec<String> = a.iter().chain(&b).cloned().collect();
            let s = TwistedTorusElement::symbolic(GroupSpec::linear(r, Place::Inert), &t, &coords).unwrap();
            let prod = &recip(&asai_op(&s, 0).unwrap(), &z) * &recip(&asai_op(&s, 1).unwrap(), &z);
            assert_eq!(prod, recip(&itimes(&s, &s).unwrap(), &z), "r = {r}");
            // split: As . As = S (x) conj(S)
            let s = TwistedTorusElement::symbolic(GroupSpec::linear(r, Place::Split), &t, &coords).unwrap();
            let sq = recip(&asai_op(&s, 0).unwrap(), &z).powi(2).unwrap();
            assert_eq!(sq, recip(&itimes(&s, &SatakeData::conjugate(&s).unwrap()).unwrap(), &z));
        }
    }

    #[test]
    fn lfactor_examples() {
        let t = table(&["Q", "X"]);
        let (q, x) = (v(&t, "Q"), v(&t, "X"));
        let empty = LRepOperator::new(Matrix::zeros(&t, 0, 0)).unwrap();
        assert!(lfactor(&empty, &q, &x, 0).unwrap().reciprocal().unwrap().is_one());
        let one = RationalFunction::one(&t);
        // L(s, eta): eta(varpi) = -1 inert, 1 split
        let eta = |e: i64| LRepOperator::new(Matrix::diagonal(&t, &[RationalFunction::constant(&t, rat(e))])).unwrap();
        assert_eq!(lfactor(&eta(-1), &q, &x, 0).unwrap().reciprocal().unwrap(), &one + &x);
        assert_eq!(lfactor(&eta(1), &q, &x, 0).unwrap().reciprocal().unwrap(), &one - &x);
        // shift 1/2
        let l = lfactor(&eta(1), &q, &x, 1).unwrap().reciprocal().unwrap();
        assert_eq!(l, &one - &(&x / &q));
    }

    #[test]
    fn lfactor_direct_sum() {
        let t = table(&["a1", "a2", "b1", "b2", "c1", "z"]);
        let z = v(&t, "z");
        let op1 = itimes(&lin(&t, Place::Inert, &["a1", "a2"]), &lin(&t, Place::Inert, &["b1", "b2"])).unwrap();
        let op2 = asai_op(&lin(&t, Place::Inert, &["a1", "b2"]), 1).unwrap();
        let op3 = itimes(&lin(&t, Place::Inert, &["a1", "a2"]), &star_embed(&uni(&t, Place::Inert, &["c1"])).unwrap()).unwrap();
        let sum = op1.direct_sum(&op2).direct_sum(&op3);
        let lhs = lfactor_scaled(&sum, &z).unwrap();
        let rhs = lfactor_scaled(&op1, &z).unwrap().mul(&lfactor_scaled(&op2, &z).unwrap()).mul(&lfactor_scaled(&op3, &z).unwrap());
        assert_eq!(lhs.dim(), rhs.dim());
        assert_eq!(lhs.reciprocal().unwrap(), rhs.reciprocal().unwrap());
        assert_eq!(lhs.reciprocal().unwrap(), sum.matrix().det_one_minus(&z).unwrap());
    }

    #[test]
    fn star_duality_of_itimes() {
        // itimes(S*, S'*) at z equals itimes(S, S') with inverted coordinates
        for place in [Place::Inert, Place::Split] {
            let t = table(&["c1", "c2", "d1", "d2", "d3", "z"]);
            let z = v(&t, "z");
            let s = uni(&t, place, &["c1", "c2"]);
            let s2 = uni(&t, place, &["d1", "d2", "d3"]);
            let lhs = recip(&itimes(&star_embed(&s).unwrap(), &star_embed(&s2).unwrap()).unwrap(), &z);
            let inverted = |e: &TwistedTorusElement| {
                let coords = e.coords.iter().map(|c| c.inv().unwrap()).collect();
                TwistedTorusElement::new(e.group, &t, coords).unwrap()
            };
            let lin_s = star_embed(&s).unwrap();
            let lin_s2 = star_embed(&s2).unwrap();
            let rhs = recip(&itimes(&linear_star(&lin_s).unwrap(), &linear_star(&lin_s2).unwrap()).unwrap(), &z);
            assert_eq!(lhs, rhs, "star_embed lands in the star-fixed locus");
            let rhs = recip(&itimes(&inverted(&lin_s), &inverted(&lin_s2)).unwrap(), &z);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn block_decomposition_product() {
        for (r, m) in [(1, 0), (1, 1), (2, 0)] {
            for place in [Place::Inert, Place::Split] {
                let data = SatakeData::symbolic(r, m, place).unwrap();
                let s_tau = data.s_tau_s();
                let z = data.q.inv().unwrap();
                for w in twisted_weyl_group(&data.s_n1.group).unwrap() {
                    let ws = weyl_act(&w, &data.s_n1).unwrap();
                    let (b1, b2, b3) = block_decompose_itimes(&s_tau, &ws).unwrap();
                    let whole = itimes(&s_tau, &star_embed(&ws).unwrap()).unwrap();
                    let parts = lfactor_scaled(&b1, &z).unwrap().mul(&lfactor_scaled(&b2, &z).unwrap()).mul(&lfactor_scaled(&b3, &z).unwrap());
                    assert_eq!(parts.dim(), 2 * r * data.n1());
                    assert!(parts.same_factors(&lfactor_scaled(&whole, &z).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn identity_block_reads_first_and_last() {
        let data = SatakeData::symbolic(1, 0, Place::Inert).unwrap();
        let br = block_r(&data.s_n1, 1).unwrap();
        let d = |n| v(&data.vars, n);
        assert_eq!(br.coords, vec![d("d1"), d("d3").inv().unwrap()]);
        assert_eq!(block_middle(&data.s_n1, 1).unwrap().coords, vec![d("d2")]);
    }

    #[test]
    fn adjoint_rank_one() {
        let t = table(&["c1", "a1", "b1", "z"]);
        let one = RationalFunction::one(&t);
        let z = v(&t, "z");
        // U_1 inert: E_11 -> -E_11
        let op = adjoint_op(&uni(&t, Place::Inert, &["c1"])).unwrap();
        assert_eq!(recip(&op, &z), &one + &z);
        // G_1 inert: the two copies are swapped, weights 1
        let op = adjoint_op(&lin(&t, Place::Inert, &["a1", "b1"])).unwrap();
        assert_eq!(recip(&op, &z), &one - &(&z * &z));
        let op = adjoint_op(&uni(&t, Place::Split, &["c1"])).unwrap();
        assert_eq!(recip(&op, &z), &one - &z);
    }

    #[test]
    fn adjoint_cycles_match_dense() {
        for place in [Place::Inert, Place::Split] {
            let t = table(&["d1", "d2", "d3", "a1", "a2", "b1", "b2", "z"]);
            let z = v(&t, "z");
            for s in [uni(&t, place, &["d1", "d2", "d3"]), lin(&t, place, &["a1", "a2", "b1", "b2"])] {
                let op = adjoint_op(&s).unwrap();
                assert_eq!(recip(&op, &z), op.matrix().det_one_minus(&z).unwrap());
            }
        }
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(modulus_exponents(ModulusContext::BorelR, 2, 0, Place::Inert), vec![1, -1]);
        assert_eq!(modulus_exponents(ModulusContext::BorelR, 2, 0, Place::Split), vec![1, -1, 1, -1]);
        assert_eq!(modulus_exponents(ModulusContext::P, 1, 0, Place::Inert), vec![2]);
        assert_eq!(modulus_exponents(ModulusContext::BorelR, 1, 0, Place::Inert), vec![0]);
        assert_eq!(modulus_exponents(ModulusContext::Qn, 1, 0, Place::Inert), vec![1]);
        assert_eq!(modulus_exponents(ModulusContext::PPrime, 1, 0, Place::Inert), vec![1]);
    }

    #[test]
    fn modulus_identity() {
        for r in 0..=3 {
            for m in 0..=3 {
                for place in [Place::Inert, Place::Split] {
                    let rep = verify_modulus_identity(r, m, place);
                    assert!(rep.passed(), "{rep:?}");
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        let t = table(&["Q"]);
        let q = v(&t, "Q");
        let one = RationalFunction::one(&t);
        assert!(delta_constant(DeltaKind::Linear, 0, Place::Inert, &q).unwrap().value.is_one());
        let d1 = delta_constant(DeltaKind::Linear, 1, Place::Inert, &q).unwrap().value;
        assert_eq!(d1, (&one - &q.powi(-4).unwrap()).inv().unwrap());
        let d2 = delta_constant(DeltaKind::Linear, 2, Place::Split, &q).unwrap().value;
        let expect = (&(&one - &q.powi(-2).unwrap()) * &(&one - &q.powi(-4).unwrap())).powi(-2).unwrap();
        assert_eq!(d2, expect);
        let u2 = delta_constant(DeltaKind::Unitary, 2, Place::Inert, &q).unwrap().value;
        let expect = (&(&one + &q.powi(-2).unwrap()) * &(&one - &q.powi(-4).unwrap())).inv().unwrap();
        assert_eq!(u2, expect);
    }

    #[test]
    fn quotient_degenerate_ranks() {
        for place in [Place::Inert, Place::Split] {
            let data = SatakeData::symbolic(0, 0, place).unwrap();
            let l = normalized_l_quotient(&data, QuotientKind::Bessel).unwrap();
            // only the eta factor survives, and it cancels against As^- of (d, 1/d)
            let eta = data.eta_factors(1).unwrap().reciprocal().unwrap();
            let as_minus = lfactor(&asai_op(&star_embed(&data.s_n1).unwrap(), 1).unwrap(), &data.q, &data.x, 1).unwrap();
            assert_eq!(as_minus.reciprocal().unwrap(), eta);
            assert!(l.is_one());
        }
    }

    #[test]
    fn quotient_discrete_case_agrees() {
        for m in 0..=2 {
            for place in [Place::Inert, Place::Split] {
                let data = SatakeData::symbolic(0, m, place).unwrap();
                let a = normalized_l_quotient(&data, QuotientKind::Corank1).unwrap();
                let b = normalized_l_quotient(&data, QuotientKind::Bessel).unwrap();
                assert_eq!(a, b);
                assert!(a.numerator().degree_range(data.vars.id("X").unwrap()).is_some());
            }
        }
    }

    // Independent dense construction of the four constituents.
    fn dense_quotient(data: &SatakeData) -> RationalFunction {
        let t = &data.vars;
        let one = RationalFunction::one(t);
        let inert = data.place.is_inert();
        let emb = |c: &[RationalFunction]| -> (Vec<RationalFunction>, Vec<RationalFunction>) {
            (c.to_vec(), c.iter().rev().map(|x| x.inv().unwrap()).collect())
        };
        let (c1, c2) = emb(&data.s_m.coords);
        let (d1, d2) = emb(&data.s_n1.coords);
        let (k, l) = (c1.len(), d1.len());
        // Rankin-Selberg: Frobenius as the Kronecker product with [[0,1],[1,0]]
        let mut rs = Matrix::zeros(t, 2 * k * l, 2 * k * l);
        for i in 0..k {
            for j in 0..l {
                let p = i * l + j;
                if inert {
                    rs.set(k * l + p, p, &c1[i] * &d1[j]);
                    rs.set(p, k * l + p, &c2[i] * &d2[j]);
                } else {
                    rs.set(p, p, &c1[i] * &d1[j]);
                    rs.set(k * l + p, k * l + p, &c2[i] * &d2[j]);
                }
            }
        }
        let asai = |g1: &[RationalFunction], g2: &[RationalFunction], sign: i64| {
            let n = g1.len();
            let mut a = Matrix::zeros(t, n * n, n * n);
            for i in 0..n {
                for j in 0..n {
                    if inert {
                        a.set(j * n + i, i * n + j, (&g1[i] * &g2[j]).scale(&rat(sign)));
                    } else {
                        a.set(i * n + j, i * n + j, &g1[i] * &g2[j]);
                    }
                }
            }
            a
        };
        let sgn = |p: usize| if p % 2 == 0 { 1 } else { -1 };
        let half = &data.x / &data.q;
        let as_m = asai(&c1, &c2, sgn(data.m)).det_one_minus(&half).unwrap();
        let as_n1 = asai(&d1, &d2, sgn(l)).det_one_minus(&half).unwrap();
        let rs = rs.det_one_minus(&data.x).unwrap();
        let mut eta = one.clone();
        for i in 1..=l as i32 {
            let e = if inert && i % 2 == 1 { -1 } else { 1 };
            eta = &eta * &(&one - &(&data.x * &data.q.powi(1 - 2 * i).unwrap()).scale(&rat(e)));
        }
        &(&as_m * &as_n1) / &(&eta * &rs)
    }

    #[test]
    fn quotient_matches_dense_assembly() {
        for place in [Place::Inert, Place::Split] {
            let data = SatakeData::symbolic(1, 1, place).unwrap();
            let l = normalized_l_quotient(&data, QuotientKind::Bessel).unwrap();
            assert_eq!(l, dense_quotient(&data));
        }
    }

    #[test]
    fn quotient_reports_vanishing_factor() {
        let t = table(&["Q", "X", "Z"]);
        let one = RationalFunction::one(&t);
        let x = v(&t, "X");
        let mut data = SatakeData::symbolic(0, 0, Place::Split).unwrap();
        data.vars = t.clone();
        data.q = RationalFunction::constant(&t, rat(1));
        data.x = x.clone();
        data.s_tau = TwistedTorusElement::new(GroupSpec::linear(0, Place::Split), &t, vec![]).unwrap();
        data.s_m = TwistedTorusElement::new(GroupSpec::unitary(0, Place::Split), &t, vec![]).unwrap();
        data.s_n1 = TwistedTorusElement::new(GroupSpec::unitary(1, Place::Split), &t, vec![one]).unwrap();
        assert!(normalized_l_quotient(&data, QuotientKind::Bessel).is_ok());
        // X = Q = 1 kills the eta factor 1 - X/Q outright
        data.x = RationalFunction::one(&t);
        assert!(matches!(normalized_l_quotient(&data, QuotientKind::Bessel), Err(Error::Precondition(_))));
    }

    #[test]
    fn numeric_data_is_deterministic() {
        let a = SatakeData::numeric(1, 1, Place::Inert, false, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = SatakeData::numeric(1, 1, Place::Inert, false, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a.s_n1.coords, b.s_n1.coords);
        assert_eq!(a.x, b.x);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn quotient_matches_dense_numerically(seed in 0u64..1000, m in 0usize..3, r in 0usize..2, inert in any::<bool>()) {
            let place = if inert { Place::Inert } else { Place::Split };
            let data = SatakeData::numeric(r, m, place, false, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            if r == 0 {
                if let Ok(l) = normalized_l_quotient(&data, QuotientKind::Bessel) {
                    prop_assert_eq!(l, dense_quotient(&data));
                }
            }
            let parts = block_decompose_itimes(&data.s_tau, &data.s_n1).unwrap();
            let whole = itimes(&data.s_tau, &star_embed(&data.s_n1).unwrap()).unwrap();
            let z = &data.x;
            let lhs = lfactor_scaled(&parts.0.direct_sum(&parts.1).direct_sum(&parts.2), z).unwrap().reciprocal().unwrap();
            prop_assert_eq!(lhs, lfactor_scaled(&whole, z).unwrap().reciprocal().unwrap());
        }
    }
}
