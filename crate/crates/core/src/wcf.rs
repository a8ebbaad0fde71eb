//! Weyl character formula on (possibly twisted) torus cosets.
//!
//! `D_{G/Q}(S)` is `det(1 - Ad(S))` on the span of the root spaces `E_ij`,
//! `i > j`, lying outside `Lie(Q)`; this is the tangent space of the flag
//! variety at the base point. On a Frobenius coset, `Ad(S)` permutes those
//! root spaces, so the determinant factors over the cycles of a monomial
//! matrix.

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{Matrix, RationalFunction, VarTable};
use crate::lgroup::{
    char_eval, classify_weight, enumerate_lambda_pp, levi_weyl_group, twisted_weyl_group, weyl_act, Cocharacter,
    GroupKind, GroupSpec, Place, TwistedTorusElement, Weight, WeightClass,
};
use crate::report::{outcome, run_check, Outcome, Params, VerificationReport};

/// Standard parabolic of the dual group, given as a composition of the flat
/// coordinate list. For the linear dual the composition covers both factors
/// and must break at the factor boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicSpec {
    pub composition: Vec<usize>,
}

impl ParabolicSpec {
    pub fn new(g: &GroupSpec, composition: Vec<usize>) -> Result<Self> {
        if composition.iter().any(|&b| b == 0) || composition.iter().sum::<usize>() != g.coord_len() {
            return Err(Error::Precondition(format!("{composition:?} is not a composition of {}", g.coord_len())));
        }
        let q = ParabolicSpec { composition };
        if let GroupKind::Linear(k) = g.kind {
            let mut acc = 0;
            if !q.composition.iter().any(|b| {
                acc += b;
                acc == k
            }) {
                return Err(Error::Precondition("composition must split at the factor boundary".into()));
            }
        }
        if !q.is_gamma_stable(g) {
            return Err(Error::Precondition(format!("{:?} is not Galois-stable", q.composition)));
        }
        Ok(q)
    }

    pub fn borel(g: &GroupSpec) -> Self {
        ParabolicSpec { composition: vec![1; g.coord_len()] }
    }

    /// The whole group (one block per factor).
    pub fn full(g: &GroupSpec) -> Self {
        ParabolicSpec { composition: g.factors().iter().map(|r| r.len()).collect() }
    }

    /// Block label of every coordinate.
    pub fn labels(&self) -> Vec<usize> {
        self.composition.iter().enumerate().flat_map(|(b, &len)| std::iter::repeat(b).take(len)).collect()
    }

    pub fn is_gamma_stable(&self, g: &GroupSpec) -> bool {
        if !g.is_twisted() {
            return true;
        }
        match g.kind {
            GroupKind::Unitary(_) => self.composition.iter().eq(self.composition.iter().rev()),
            GroupKind::Linear(_) => {
                let h = self.composition.len() / 2;
                self.composition.len() % 2 == 0 && self.composition[..h] == self.composition[h..]
            }
        }
    }
}

/// All Galois-stable compositions of the group's coordinates.
pub fn stable_parabolics(g: &GroupSpec) -> Vec<ParabolicSpec> {
    let n = g.coord_len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        let mut comp = Vec::new();
        let mut len = 1;
        for i in 0..n - 1 {
            if mask & (1 << i) != 0 {
                comp.push(len);
                len = 1;
            } else {
                len += 1;
            }
        }
        comp.push(len);
        if let Ok(q) = ParabolicSpec::new(g, comp) {
            out.push(q);
        }
    }
    out
}

/// Negative root spaces `(i, j)`, `i > j`, either outside `Lie(Q)` or (with
/// `inside`) in the Levi of `Q`.
fn negative_roots(g: &GroupSpec, q: &ParabolicSpec, inside: bool) -> Vec<(usize, usize)> {
    let labels = q.labels();
    let mut out = Vec::new();
    for f in g.factors() {
        for i in f.clone() {
            for j in f.start..i {
                if (labels[i] == labels[j]) == inside {
                    out.push((i, j));
                }
            }
        }
    }
    out
}

/// Matrix of `Ad(S)` on the quotient root spaces `Lie(G)/Lie(Q)`.
pub fn adjoint_matrix(q: &ParabolicSpec, s: &TwistedTorusElement) -> Result<Matrix> {
    adjoint_on(&negative_roots(&s.group, q, false), s)
}

fn adjoint_on(roots: &[(usize, usize)], s: &TwistedTorusElement) -> Result<Matrix> {
    let g = &s.group;
    let vars = s.vars().clone();
    let mut m = Matrix::zeros(&vars, roots.len(), roots.len());
    let index = |r: (usize, usize)| roots.iter().position(|&x| x == r);
    let c = &s.coords;
    for (col, &(i, j)) in roots.iter().enumerate() {
        let (target, scale) = if !s.frobenius {
            ((i, j), c[i].try_div(&c[j])?)
        } else {
            match g.kind {
                GroupKind::Unitary(_) => {
                    // theta(E_ij) = (-1)^(i+j+1) E_j'i', then Ad(d).
                    let (ip, jp) = (g.galois_index(i), g.galois_index(j));
                    let sign = if (i + j) % 2 == 0 { -1 } else { 1 };
                    let v = c[jp].try_div(&c[ip])?.scale(&crate::exact::rat(sign));
                    ((jp, ip), v)
                }
                GroupKind::Linear(_) => {
                    let (is, js) = (g.galois_index(i), g.galois_index(j));
                    ((is, js), c[is].try_div(&c[js])?)
                }
            }
        };
        let row = index(target).ok_or_else(|| Error::Mismatch("parabolic is not Galois-stable".into()))?;
        m.set(row, col, scale);
    }
    Ok(m)
}

fn det_parts(m: &Matrix, s: &TwistedTorusElement) -> Result<Vec<RationalFunction>> {
    let one = RationalFunction::one(s.vars());
    m.det_one_minus_factors(&one).ok_or_else(|| Error::Mismatch("adjoint action is not monomial".into()))
}

/// `D_{L/B_L}(S)` for the Levi `L` of `Q`.
pub fn levi_d_factor(q: &ParabolicSpec, s: &TwistedTorusElement) -> Result<RationalFunction> {
    let parts = det_parts(&adjoint_on(&negative_roots(&s.group, q, true), s)?, s)?;
    Ok(parts.iter().fold(RationalFunction::one(s.vars()), |acc, p| &acc * p))
}

/// The factors `1 - (cycle monomial)` whose product is `D_{G/Q}(S)`.
pub fn d_factor_parts(q: &ParabolicSpec, s: &TwistedTorusElement) -> Result<Vec<RationalFunction>> {
    det_parts(&adjoint_matrix(q, s)?, s)
}

pub fn d_factor(q: &ParabolicSpec, s: &TwistedTorusElement) -> Result<RationalFunction> {
    let parts = d_factor_parts(q, s)?;
    Ok(parts.iter().fold(RationalFunction::one(s.vars()), |acc, p| &acc * p))
}

/// `D_{G/Q}(S)^{-1}` with one denominator factor per cycle.
pub fn inv_d_factor(q: &ParabolicSpec, s: &TwistedTorusElement) -> Result<RationalFunction> {
    let mut out = RationalFunction::one(s.vars());
    for p in d_factor_parts(q, s)? {
        if p.is_zero() {
            return Err(Error::NotRegular);
        }
        out = out.try_mul(&p.inv()?)?;
    }
    Ok(out)
}

/// `D_{G/B}(S) != 0`.
pub fn is_regular(s: &TwistedTorusElement) -> Result<bool> {
    Ok(d_factor_parts(&ParabolicSpec::borel(&s.group), s)?.iter().all(|p| !p.is_zero()))
}

/// `sum_w chi(wS) / D_{G/B}(wS)` over the twisted Weyl group, reduced.
pub fn char_fixed_point_sum(chi: &Weight, s: &TwistedTorusElement) -> Result<RationalFunction> {
    let g = s.group;
    if let (GroupKind::Linear(k), Place::Split) = (g.kind, g.place) {
        // W and D both split over the two GL_k factors.
        let h = GroupSpec::unitary(k, Place::Split);
        let (a, b) = s.halves();
        let sa = TwistedTorusElement::new(h, s.vars(), a.to_vec())?;
        let sb = TwistedTorusElement::new(h, s.vars(), b.to_vec())?;
        let ca = char_fixed_point_sum(&Weight::new(chi.lambda[..k].to_vec()), &sa)?;
        if ca.is_zero() {
            return Ok(ca);
        }
        let cb = char_fixed_point_sum(&Weight::new(chi.lambda[k..].to_vec()), &sb)?;
        return Ok(ca.try_mul(&cb)?.reduce());
    }
    fixed_point_sum_direct(chi, s)
}

/// The fixed-point sum without the product shortcut for split linear groups.
pub fn fixed_point_sum_direct(chi: &Weight, s: &TwistedTorusElement) -> Result<RationalFunction> {
    if !chi.is_gamma_invariant(&s.group) {
        return Err(Error::Precondition(format!("{chi} is not Galois-invariant")));
    }
    let borel = ParabolicSpec::borel(&s.group);
    let mut total = RationalFunction::zero(s.vars());
    for w in twisted_weyl_group(&s.group)? {
        let ws = weyl_act(&w, s)?;
        let term = char_eval(chi, &ws)?.try_mul(&inv_d_factor(&borel, &ws)?)?;
        total = total.try_add(&term)?;
    }
    Ok(total.reduce())
}

/// Fully symbolic element `x1..xn` of the given group.
pub fn generic_element(g: &GroupSpec) -> Result<(VarTable, TwistedTorusElement)> {
    let names: Vec<String> = match g.kind {
        GroupKind::Unitary(l) => (1..=l).map(|i| format!("x{i}")).collect(),
        GroupKind::Linear(k) => (1..=k).map(|i| format!("a{i}")).chain((1..=k).map(|i| format!("b{i}"))).collect(),
    };
    let vt = VarTable::new(&names)?;
    let s = TwistedTorusElement::symbolic(*g, &vt, &names)?;
    Ok((vt, s))
}

fn group_label(g: &GroupSpec) -> String {
    match g.kind {
        GroupKind::Linear(k) => format!("G_{k} {}", g.place),
        GroupKind::Unitary(l) => format!("U_{l} {}", g.place),
    }
}

/// Singular `chi + rho` forces the fixed-point sum to vanish.
pub fn verify_singular_vanishing(g: &GroupSpec, chi: &Weight) -> VerificationReport {
    let params = Params { place: Some(g.place), ..Default::default() }
        .with("group", group_label(g))
        .with("chi", chi);
    run_check("singular_vanishing", params, |_| {
        if classify_weight(g, chi) != WeightClass::Singular {
            return Err(Error::Precondition(format!("{chi} + rho is regular")));
        }
        let (_, s) = generic_element(g)?;
        let sum = char_fixed_point_sum(chi, &s)?;
        Ok(outcome(sum.is_zero(), 1, || format!("nonzero sum: {sum}")))
    })
}

/// For regular `chi + rho`, the sum equals `eps * ch_{chi+}` with `eps` a
/// root of unity; `eps` is recorded. For Galois-trivial elements it must be
/// the sign of `w_chi`.
pub fn verify_epsilon_orbit(g: &GroupSpec, chi: &Weight) -> VerificationReport {
    let params = Params { place: Some(g.place), ..Default::default() }
        .with("group", group_label(g))
        .with("chi", chi);
    run_check("epsilon_orbit", params, |params| {
        let WeightClass::RegularOrbit { w_chi, chi_plus } = classify_weight(g, chi) else {
            return Err(Error::Precondition(format!("{chi} + rho is singular")));
        };
        let (_, s) = generic_element(g)?;
        let lhs = char_fixed_point_sum(chi, &s)?;
        let rhs = char_fixed_point_sum(&chi_plus, &s)?;
        let ratio = lhs.try_div(&rhs)?.reduce();
        let Some(eps) = ratio.as_constant() else {
            return Ok(Outcome::Fail { witness: format!("ratio is not constant: {ratio}") });
        };
        params.detail.insert("epsilon".into(), eps.to_string());
        params.detail.insert("chi_plus".into(), chi_plus.to_string());
        let unit = eps == crate::exact::rat(1) || eps == crate::exact::rat(-1);
        if !unit {
            return Ok(Outcome::Fail { witness: format!("epsilon {eps} is not a root of unity") });
        }
        if !g.is_twisted() {
            let predicted = crate::exact::rat(w_chi.sign());
            return Ok(outcome(eps == predicted, 1, || format!("epsilon {eps}, expected {predicted}")));
        }
        Ok(Outcome::Pass { checked: 1 })
    })
}

/// `sum_{w in W^L} D_{G/B}(wS)^{-1} = D_{G/Q}(S)^{-1}`.
pub fn verify_parabolic_d_sum(g: &GroupSpec, q: &ParabolicSpec) -> VerificationReport {
    let params = Params { place: Some(g.place), ..Default::default() }
        .with("group", group_label(g))
        .with("parabolic", format!("{:?}", q.composition));
    run_check("parabolic_d_sum", params, |_| {
        let (vt, s) = generic_element(g)?;
        let borel = ParabolicSpec::borel(g);
        let wl = levi_weyl_group(g, &q.labels())?;
        let mut lhs = RationalFunction::zero(&vt);
        for w in &wl {
            lhs = lhs.try_add(&inv_d_factor(&borel, &weyl_act(w, &s)?)?)?;
        }
        let rhs = inv_d_factor(q, &s)?;
        let ok = lhs.try_eq(&rhs)?;
        Ok(outcome(ok, wl.len(), || format!("difference: {}", (&lhs - &rhs).reduce())))
    })
}

/// Complete homogeneous symmetric polynomials `h_0 .. h_k` of `values`.
fn complete_homogeneous(values: &[RationalFunction], k: usize, vt: &VarTable) -> Vec<RationalFunction> {
    // h_j(x_1..x_i) = h_j(x_1..x_{i-1}) + x_i h_{j-1}(x_1..x_i)
    let mut h = vec![RationalFunction::zero(vt); k + 1];
    h[0] = RationalFunction::one(vt);
    for x in values {
        for j in 1..=k {
            h[j] = &h[j] + &(x * &h[j - 1]);
        }
    }
    h
}

/// Schur polynomial `s_t(values)` by the Jacobi-Trudi determinant
/// `det(h_{t_i - i + j})`.
pub fn schur_oracle(t: &Cocharacter, values: &[RationalFunction]) -> Result<RationalFunction> {
    let vt = values
        .first()
        .map(|v| v.vars().clone())
        .ok_or_else(|| Error::Precondition("no values".into()))?;
    if t.t.windows(2).any(|p| p[0] < p[1]) || t.t.iter().any(|&x| x < 0) {
        return Err(Error::Precondition(format!("{t} is not a partition")));
    }
    let n = t.t.len();
    if n == 0 {
        return Ok(RationalFunction::one(&vt));
    }
    let kmax = (t.t[0] as usize) + n;
    let h = complete_homogeneous(values, kmax, &vt);
    let m = Matrix::from_fn(&vt, n, n, |i, j| {
        let idx = t.t[i] - i as i64 + j as i64;
        if idx < 0 {
            RationalFunction::zero(&vt)
        } else {
            h[idx as usize].clone()
        }
    });
    Ok(m.det()?)
}

/// Galois-invariant weights with entries in `[-bound, bound]`.
pub fn invariant_weights(g: &GroupSpec, bound: i64) -> Vec<Weight> {
    (0..g.coord_len())
        .map(|_| -bound..=bound)
        .multi_cartesian_product()
        .map(Weight::new)
        .filter(|w| w.is_gamma_invariant(g))
        .collect()
}

/// Singular vanishing for every invariant weight in the box `[-bound, bound]`.
pub fn verify_singular_vanishing_box(g: &GroupSpec, bound: i64) -> VerificationReport {
    let params = Params { place: Some(g.place), ..Default::default() }
        .with("group", group_label(g))
        .with("box", bound);
    run_check("singular_vanishing", params, |params| {
        let (_, s) = generic_element(g)?;
        let singular: Vec<Weight> =
            invariant_weights(g, bound).into_iter().filter(|c| classify_weight(g, c) == WeightClass::Singular).collect();
        params.detail.insert("singular_weights".into(), singular.len().to_string());
        let bad = singular
            .par_iter()
            .map(|chi| Ok((chi, char_fixed_point_sum(chi, &s)?.is_zero())))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .find(|(_, zero)| !zero);
        Ok(match bad {
            None => Outcome::Pass { checked: singular.len() },
            Some((chi, _)) => Outcome::Fail { witness: format!("nonzero sum at {chi}") },
        })
    })
}

/// The orbit relation for every invariant regular weight in the box, with
/// the multiset of observed `eps` recorded.
pub fn verify_epsilon_orbit_box(g: &GroupSpec, bound: i64) -> VerificationReport {
    let params = Params { place: Some(g.place), ..Default::default() }
        .with("group", group_label(g))
        .with("box", bound);
    run_check("epsilon_orbit", params, |params| {
        let regular: Vec<Weight> =
            invariant_weights(g, bound).into_iter().filter(|c| classify_weight(g, c) != WeightClass::Singular).collect();
        let reports: Vec<VerificationReport> = regular.par_iter().map(|chi| verify_epsilon_orbit(g, chi)).collect();
        let mut counts = std::collections::BTreeMap::<String, usize>::new();
        for (chi, rep) in regular.iter().zip(&reports) {
            if !rep.passed() {
                return Ok(Outcome::Fail { witness: format!("{chi}: {}", rep.witness.clone().unwrap_or_default()) });
            }
            *counts.entry(rep.params.detail["epsilon"].clone()).or_default() += 1;
        }
        params.detail.insert("epsilon_counts".into(), format!("{counts:?}"));
        Ok(Outcome::Pass { checked: regular.len() })
    })
}

/// The parabolic sum for every Galois-stable standard parabolic.
pub fn verify_parabolic_d_sums(g: &GroupSpec) -> VerificationReport {
    let params = Params { place: Some(g.place), ..Default::default() }.with("group", group_label(g));
    run_check("parabolic_d_sum", params, |params| {
        let qs = stable_parabolics(g);
        params.detail.insert("parabolics".into(), qs.len().to_string());
        let reports: Vec<VerificationReport> = qs.par_iter().map(|q| verify_parabolic_d_sum(g, q)).collect();
        Ok(match qs.iter().zip(&reports).find(|(_, r)| !r.passed()) {
            None => Outcome::Pass { checked: qs.len() },
            Some((q, r)) => {
                Outcome::Fail { witness: format!("{:?}: {}", q.composition, r.witness.clone().unwrap_or_default()) }
            }
        })
    })
}

/// Fixed-point sums of the connected group `U_k` (split) against
/// Jacobi-Trudi determinants for every partition of size at most `order`.
pub fn verify_schur_oracle(k: usize, order: usize) -> VerificationReport {
    let g = GroupSpec::unitary(k, Place::Split);
    let params = Params { place: Some(Place::Split), order: Some(order), ..Default::default() }
        .with("group", group_label(&g));
    run_check("schur_oracle", params, |_| {
        let (_, s) = generic_element(&g)?;
        let ts = enumerate_lambda_pp(k, order);
        for t in &ts {
            let lhs = char_fixed_point_sum(&Weight::new(t.t.clone()), &s)?;
            let rhs = schur_oracle(t, &s.coords)?;
            if lhs != rhs {
                return Ok(Outcome::Fail { witness: format!("t = {t}: difference {}", (&lhs - &rhs).reduce()) });
            }
        }
        Ok(Outcome::Pass { checked: ts.len() })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lgroup::{enumerate_lambda_pp, full_weyl_group};

    fn var(vt: &VarTable, n: &str) -> RationalFunction {
        RationalFunction::var(vt, vt.id(n).unwrap())
    }

    #[test]
    fn gl2_and_gl3_d_factors() {
        let g = GroupSpec::unitary(2, Place::Split);
        let (vt, s) = generic_element(&g).unwrap();
        let one = RationalFunction::one(&vt);
        let (x1, x2) = (var(&vt, "x1"), var(&vt, "x2"));
        assert_eq!(d_factor(&ParabolicSpec::borel(&g), &s).unwrap(), &one - &(&x2 / &x1));

        let g3 = GroupSpec::unitary(3, Place::Split);
        let (vt, s) = generic_element(&g3).unwrap();
        let one = RationalFunction::one(&vt);
        let (a, b, c) = (var(&vt, "x1"), var(&vt, "x2"), var(&vt, "x3"));
        let q = ParabolicSpec::new(&g3, vec![2, 1]).unwrap();
        let expect = (&one - &(&c / &a)) * (&one - &(&c / &b));
        assert_eq!(d_factor(&q, &s).unwrap(), expect);
    }

    #[test]
    fn cycle_factorization_matches_dense_determinant() {
        for g in [
            GroupSpec::unitary(3, Place::Inert),
            GroupSpec::unitary(4, Place::Inert),
            GroupSpec::linear(2, Place::Inert),
            GroupSpec::linear(2, Place::Split),
        ] {
            let (_, s) = generic_element(&g).unwrap();
            for q in stable_parabolics(&g) {
                let m = adjoint_matrix(&q, &s).unwrap();
                assert_eq!(m.rows(), negative_roots(&g, &q, false).len());
                let dense = m.det_one_minus(&RationalFunction::one(s.vars())).unwrap();
                assert_eq!(d_factor(&q, &s).unwrap(), dense, "{g:?} {q:?}");
            }
        }
    }

    #[test]
    fn d_factor_is_multiplicative() {
        for g in [
            GroupSpec::unitary(4, Place::Inert),
            GroupSpec::unitary(4, Place::Split),
            GroupSpec::linear(2, Place::Inert),
        ] {
            let (_, s) = generic_element(&g).unwrap();
            let borel = d_factor(&ParabolicSpec::borel(&g), &s).unwrap();
            for q in stable_parabolics(&g) {
                let prod = &d_factor(&q, &s).unwrap() * &levi_d_factor(&q, &s).unwrap();
                assert_eq!(prod, borel, "{g:?} {q:?}");
            }
        }
    }

    #[test]
    fn regularity() {
        let g = GroupSpec::unitary(2, Place::Split);
        let (vt, _) = generic_element(&g).unwrap();
        let a = var(&vt, "x1");
        let s = TwistedTorusElement::new(g, &vt, vec![a.clone(), a]).unwrap();
        assert!(!is_regular(&s).unwrap());
        let (_, s) = generic_element(&GroupSpec::unitary(5, Place::Inert)).unwrap();
        assert!(is_regular(&s).unwrap());
    }

    #[test]
    fn standard_rep_trace() {
        let g = GroupSpec::unitary(2, Place::Split);
        let (vt, s) = generic_element(&g).unwrap();
        let sum = char_fixed_point_sum(&Weight::new(vec![1, 0]), &s).unwrap();
        assert_eq!(sum, &var(&vt, "x1") + &var(&vt, "x2"));
        assert!(char_fixed_point_sum(&Weight::zero(2), &s).unwrap().is_one());
    }

    #[test]
    fn twisted_rank_one_linear() {
        let g = GroupSpec::linear(1, Place::Inert);
        let (vt, s) = generic_element(&g).unwrap();
        let chi = Weight::from_cocharacter(&g, &Cocharacter::new(vec![2])).unwrap();
        let ab = &var(&vt, "a1") * &var(&vt, "b1");
        assert_eq!(char_fixed_point_sum(&chi, &s).unwrap(), &ab * &ab);
    }

    #[test]
    fn twisted_linear_character_is_schur_of_products() {
        let g = GroupSpec::linear(2, Place::Inert);
        let (vt, s) = generic_element(&g).unwrap();
        let prods = vec![&var(&vt, "a1") * &var(&vt, "b1"), &var(&vt, "a2") * &var(&vt, "b2")];
        for t in enumerate_lambda_pp(2, 3) {
            let chi = Weight::from_cocharacter(&g, &t).unwrap();
            assert_eq!(char_fixed_point_sum(&chi, &s).unwrap(), schur_oracle(&t, &prods).unwrap());
        }
    }

    #[test]
    fn split_linear_shortcut_matches_direct_sum() {
        let g = GroupSpec::linear(2, Place::Split);
        let (_, s) = generic_element(&g).unwrap();
        for lam in [vec![1, 0, 2, 1], vec![0, 1, 1, 0], vec![-1, 0, 0, 0]] {
            let chi = Weight::new(lam);
            assert_eq!(char_fixed_point_sum(&chi, &s).unwrap(), fixed_point_sum_direct(&chi, &s).unwrap());
        }
    }

    #[test]
    fn schur_examples() {
        let vt = VarTable::new(&["a", "b", "c"]).unwrap();
        let (a, b, c) = (var(&vt, "a"), var(&vt, "b"), var(&vt, "c"));
        let t = |v: &[i64]| Cocharacter::new(v.to_vec());
        assert_eq!(schur_oracle(&t(&[1, 0]), &[a.clone(), b.clone()]).unwrap(), &a + &b);
        assert_eq!(schur_oracle(&t(&[1, 1]), &[a.clone(), b.clone()]).unwrap(), &a * &b);
        // s_(2,1)(a,b,c) by semistandard tableaux of shape (2,1).
        let vals = [a.clone(), b.clone(), c.clone()];
        let mut tableaux = RationalFunction::zero(&vt);
        for x in 0..3 {
            for y in x..3 {
                for z in (x + 1)..3 {
                    tableaux = &tableaux + &(&(&vals[x] * &vals[y]) * &vals[z]);
                }
            }
        }
        assert_eq!(schur_oracle(&t(&[2, 1, 0]), &vals).unwrap(), tableaux);
    }

    #[test]
    fn epsilon_examples() {
        let g = GroupSpec::unitary(2, Place::Split);
        let r = verify_epsilon_orbit(&g, &Weight::new(vec![-2, 0]));
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.params.detail["epsilon"], "-1");
        let r = verify_epsilon_orbit(&g, &Weight::new(vec![3, 1]));
        assert_eq!(r.params.detail["epsilon"], "1");
        let r = verify_singular_vanishing(&g, &Weight::new(vec![-1, 0]));
        assert!(r.passed(), "{r:?}");
        assert!(!verify_singular_vanishing(&g, &Weight::new(vec![0, 0])).passed());
    }

    #[test]
    fn singular_search_u3() {
        let g = GroupSpec::unitary(3, Place::Inert);
        let chi = (-3..=3)
            .map(|x| Weight::new(vec![x, 0, -x]))
            .find(|c| classify_weight(&g, c) == WeightClass::Singular)
            .unwrap();
        assert!(verify_singular_vanishing(&g, &chi).passed());
        // chi = -2 rho in doubled coordinates: 2 chi + 2 rho = -2 rho, regular.
        let g2 = GroupSpec::unitary(3, Place::Split);
        let minus_rho2 = Weight::new(vec![-2, 0, 2]);
        assert!(matches!(classify_weight(&g2, &minus_rho2), WeightClass::RegularOrbit { .. }));
        let minus_rho = Weight::new(vec![-1, 0, 1]);
        assert_eq!(classify_weight(&g2, &minus_rho), WeightClass::Singular);
        assert!(verify_singular_vanishing(&g2, &minus_rho).passed());
    }

    #[test]
    fn corollary_small_cases() {
        let g = GroupSpec::unitary(3, Place::Split);
        assert!(verify_parabolic_d_sum(&g, &ParabolicSpec::new(&g, vec![2, 1]).unwrap()).passed());
        let g4 = GroupSpec::unitary(4, Place::Inert);
        assert!(verify_parabolic_d_sum(&g4, &ParabolicSpec::new(&g4, vec![1, 2, 1]).unwrap()).passed());
        assert!(ParabolicSpec::new(&g4, vec![1, 3]).is_err());
        assert!(verify_parabolic_d_sum(&g4, &ParabolicSpec::full(&g4)).passed());
    }

    #[test]
    fn weyl_invariance_of_character_and_regularity() {
        for g in [GroupSpec::unitary(3, Place::Inert), GroupSpec::unitary(4, Place::Inert), GroupSpec::linear(2, Place::Inert)] {
            let (_, s) = generic_element(&g).unwrap();
            let chi = if let GroupKind::Unitary(l) = g.kind {
                let mut v = vec![0; l];
                v[0] = 2;
                v[l - 1] = -2;
                Weight::new(v)
            } else {
                Weight::new(vec![2, 1, 2, 1])
            };
            let base = char_fixed_point_sum(&chi, &s).unwrap();
            for w in twisted_weyl_group(&g).unwrap() {
                let ws = weyl_act(&w, &s).unwrap();
                assert!(is_regular(&ws).unwrap());
                assert_eq!(char_fixed_point_sum(&chi, &ws).unwrap(), base);
                // chi(wS) = (w^-1 chi)(S)
                assert_eq!(char_eval(&chi, &ws).unwrap(), char_eval(&chi.act(&w.inverse()), &s).unwrap());
            }
        }
        // full Weyl group of a split GL_3 acting on characters
        let g = GroupSpec::unitary(3, Place::Split);
        let (_, s) = generic_element(&g).unwrap();
        let chi = Weight::new(vec![2, -1, 0]);
        for w in full_weyl_group(&g, 8).unwrap() {
            let ws = weyl_act(&w, &s).unwrap();
            assert_eq!(char_eval(&chi, &ws).unwrap(), char_eval(&chi.act(&w.inverse()), &s).unwrap());
        }
    }

    #[test]
    fn batch_checks_small() {
        for g in [GroupSpec::unitary(2, Place::Inert), GroupSpec::linear(1, Place::Split)] {
            assert!(verify_singular_vanishing_box(&g, 2).passed());
            assert!(verify_epsilon_orbit_box(&g, 2).passed());
            assert!(verify_parabolic_d_sums(&g).passed());
        }
        let r = verify_schur_oracle(3, 3);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.params.detail["checked"], "7");
        // U_2 inert: (x, -x) is invariant for every x in the box
        assert_eq!(invariant_weights(&GroupSpec::unitary(2, Place::Inert), 3).len(), 7);
    }
}
