//! Combinatorics of the dual groups of `G_k = Res GL_k` and `U_l`.
//!
//! Torus coordinates are stored flat. For the unitary dual `GL_l` there are
//! `l` coordinates; for the linear dual `GL_k x GL_k` there are `2k`, the
//! first factor followed by the second. Weyl elements are permutations of
//! the flat coordinate list that preserve the factors.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{RationalFunction, VarTable};

/// Largest rank for which Weyl groups are enumerated.
pub const DEFAULT_CAPACITY: usize = 8;

pub use crate::wcf::is_regular;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Place {
    Inert,
    Split,
}

impl Place {
    pub fn is_inert(self) -> bool {
        self == Place::Inert
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Place::Inert => "inert",
            Place::Split => "split",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `Res_{E/F} GL_k`, dual `GL_k x GL_k` with the factors swapped by Frobenius.
    Linear(usize),
    /// `U_l`, dual `GL_l` with Frobenius acting by `g -> J transpose(g)^-1 J^-1`.
    Unitary(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub place: Place,
}

impl GroupSpec {
    pub fn linear(k: usize, place: Place) -> Self {
        GroupSpec { kind: GroupKind::Linear(k), place }
    }

    pub fn unitary(l: usize, place: Place) -> Self {
        GroupSpec { kind: GroupKind::Unitary(l), place }
    }

    pub fn rank(&self) -> usize {
        match self.kind {
            GroupKind::Linear(k) | GroupKind::Unitary(k) => k,
        }
    }

    /// Number of torus coordinates.
    pub fn coord_len(&self) -> usize {
        match self.kind {
            GroupKind::Linear(k) => 2 * k,
            GroupKind::Unitary(l) => l,
        }
    }

    pub fn is_twisted(&self) -> bool {
        self.place.is_inert()
    }

    /// Coordinate ranges of the `GL` factors of the dual group.
    pub fn factors(&self) -> Vec<std::ops::Range<usize>> {
        match self.kind {
            GroupKind::Linear(k) => vec![0..k, k..2 * k],
            GroupKind::Unitary(l) => vec![0..l],
        }
    }

    /// Index of the factor containing coordinate `i`.
    pub fn factor_of(&self, i: usize) -> usize {
        match self.kind {
            GroupKind::Linear(k) if i >= k => 1,
            _ => 0,
        }
    }

    /// `2 rho`: `(k-1, k-3, .., 1-k)` on each factor.
    pub fn rho2(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.coord_len());
        for f in self.factors() {
            let k = f.len() as i64;
            out.extend((0..k).map(|i| k - 1 - 2 * i));
        }
        out
    }

    /// Image of coordinate `i` under the Galois action on the torus.
    pub fn galois_index(&self, i: usize) -> usize {
        match self.kind {
            GroupKind::Linear(k) => (i + k) % (2 * k),
            GroupKind::Unitary(l) => l - 1 - i,
        }
    }

    pub fn check_capacity(&self, bound: usize) -> Result<()> {
        if self.rank() > bound {
            Err(Error::CapacityExceeded { rank: self.rank(), bound })
        } else {
            Ok(())
        }
    }
}

/// A point of `T^` (split) or of the coset `T^ Frob` (inert).
#[derive(Clone, Debug)]
pub struct TwistedTorusElement {
    pub group: GroupSpec,
    pub vars: VarTable,
    pub coords: Vec<RationalFunction>,
    pub frobenius: bool,
}

impl TwistedTorusElement {
    pub fn new(group: GroupSpec, vars: &VarTable, coords: Vec<RationalFunction>) -> Result<Self> {
        if coords.len() != group.coord_len() {
            return Err(Error::Mismatch(format!(
                "expected {} coordinates, got {}",
                group.coord_len(),
                coords.len()
            )));
        }
        if coords.iter().any(|c| c.is_zero()) {
            return Err(Error::Precondition("torus coordinates must be nonzero".into()));
        }
        if coords.iter().any(|c| !c.vars().same(vars)) {
            return Err(Error::Exact(crate::exact::ExactError::VarTableMismatch));
        }
        Ok(TwistedTorusElement { group, vars: vars.clone(), coords, frobenius: group.is_twisted() })
    }

    /// Element whose coordinates are the given variables.
    pub fn symbolic(group: GroupSpec, vars: &VarTable, names: &[String]) -> Result<Self> {
        let coords = names
            .iter()
            .map(|n| Ok(RationalFunction::var(vars, vars.id(n)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, vars, coords)
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    /// Multiplies every coordinate by a central scalar.
    pub fn scaled(&self, c: &RationalFunction) -> Self {
        TwistedTorusElement {
            group: self.group,
            vars: self.vars.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
            frobenius: self.frobenius,
        }
    }

    /// For the linear dual, the two factors `(g1, g2)`.
    pub fn halves(&self) -> (&[RationalFunction], &[RationalFunction]) {
        let k = self.group.rank();
        match self.group.kind {
            GroupKind::Linear(_) => (&self.coords[..k], &self.coords[k..]),
            GroupKind::Unitary(_) => (&self.coords[..], &[]),
        }
    }
}

/// Permutation of the flat coordinate list; `perm[i]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement {
    pub perm: Vec<usize>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement { perm: (0..n).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement { perm: other.perm.iter().map(|&j| self.perm[j]).collect() }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        WeylElement { perm: inv }
    }

    pub fn sign(&self) -> i64 {
        let mut seen = vec![false; self.perm.len()];
        let mut sign = 1;
        for s in 0..self.perm.len() {
            if seen[s] {
                continue;
            }
            let mut j = s;
            let mut len = 0;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// Per-factor permutations (one for the unitary dual, two for the linear).
    pub fn factor_perms(&self, g: &GroupSpec) -> Vec<Vec<usize>> {
        g.factors()
            .into_iter()
            .map(|r| self.perm[r.clone()].iter().map(|&p| p - r.start).collect())
            .collect()
    }

    /// Image under the Galois action on the Weyl group.
    pub fn galois(&self, g: &GroupSpec) -> WeylElement {
        let n = self.perm.len();
        let mut out = vec![0; n];
        for i in 0..n {
            out[g.galois_index(i)] = g.galois_index(self.perm[i]);
        }
        WeylElement { perm: out }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.perm.iter().map(|p| (p + 1).to_string()).join(" "))
    }
}

fn ambient_weyl_group(g: &GroupSpec) -> Vec<WeylElement> {
    let factors = g.factors();
    let per_factor: Vec<Vec<Vec<usize>>> =
        factors.iter().map(|r| r.clone().permutations(r.len()).collect()).collect();
    per_factor
        .into_iter()
        .multi_cartesian_product()
        .map(|parts| WeylElement { perm: parts.concat() })
        .collect()
}

/// The full Weyl group of the dual group (ignoring the Galois action), for
/// ranks up to `bound`.
pub fn full_weyl_group(g: &GroupSpec, bound: usize) -> Result<Vec<WeylElement>> {
    g.check_capacity(bound)?;
    let mut w = ambient_weyl_group(g);
    w.sort();
    Ok(w)
}

/// Weyl group of `^L T`: Galois-fixed permutations at inert places, the full
/// Weyl group at split places. Sorted, identity first.
pub fn twisted_weyl_group(g: &GroupSpec) -> Result<Vec<WeylElement>> {
    twisted_weyl_group_bounded(g, DEFAULT_CAPACITY)
}

pub fn twisted_weyl_group_bounded(g: &GroupSpec, bound: usize) -> Result<Vec<WeylElement>> {
    g.check_capacity(bound)?;
    let mut out = match (g.kind, g.place) {
        (_, Place::Split) => ambient_weyl_group(g),
        (GroupKind::Unitary(_), Place::Inert) => {
            ambient_weyl_group(g).into_iter().filter(|w| w.galois(g) == *w).collect()
        }
        (GroupKind::Linear(k), Place::Inert) => (0..k)
            .permutations(k)
            .map(|p| {
                let mut perm = p.clone();
                perm.extend(p.iter().map(|x| x + k));
                WeylElement { perm }
            })
            .collect(),
    };
    out.sort();
    Ok(out)
}

/// Elements of the twisted Weyl group that preserve every block of `blocks`
/// (a block label per coordinate).
pub fn levi_weyl_group(g: &GroupSpec, blocks: &[usize]) -> Result<Vec<WeylElement>> {
    Ok(twisted_weyl_group(g)?
        .into_iter()
        .filter(|w| w.perm.iter().enumerate().all(|(i, &p)| blocks[i] == blocks[p]))
        .collect())
}

/// `(wS)_{w(i)} = S_i`.
pub fn weyl_act(w: &WeylElement, s: &TwistedTorusElement) -> Result<TwistedTorusElement> {
    if w.perm.len() != s.coords.len() {
        return Err(Error::Mismatch("Weyl element and torus element ranks differ".into()));
    }
    let mut coords = s.coords.clone();
    for (i, &p) in w.perm.iter().enumerate() {
        coords[p] = s.coords[i].clone();
    }
    Ok(TwistedTorusElement { group: s.group, vars: s.vars.clone(), coords, frobenius: s.frobenius })
}

/// Integral character of the dual torus, one entry per flat coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub lambda: Vec<i64>,
}

impl Weight {
    pub fn new(lambda: Vec<i64>) -> Self {
        Weight { lambda }
    }

    pub fn zero(n: usize) -> Self {
        Weight { lambda: vec![0; n] }
    }

    /// The character `chi_t` attached to a cocharacter of the torus of `G_r`
    /// (`t` of length `r`, or `2r` for a split pair), or `t` itself for the
    /// unitary dual.
    pub fn from_cocharacter(g: &GroupSpec, t: &Cocharacter) -> Result<Self> {
        let n = g.coord_len();
        match g.kind {
            GroupKind::Linear(k) if t.t.len() == k => {
                Ok(Weight { lambda: t.t.iter().chain(t.t.iter()).copied().collect() })
            }
            _ if t.t.len() == n => Ok(Weight { lambda: t.t.clone() }),
            _ => Err(Error::Mismatch(format!("cocharacter of length {} for {:?}", t.t.len(), g))),
        }
    }

    /// `(w lambda)_{w(i)} = lambda_i`.
    pub fn act(&self, w: &WeylElement) -> Weight {
        let mut out = self.lambda.clone();
        for (i, &p) in w.perm.iter().enumerate() {
            out[p] = self.lambda[i];
        }
        Weight { lambda: out }
    }

    pub fn is_gamma_invariant(&self, g: &GroupSpec) -> bool {
        !g.is_twisted()
            || match g.kind {
                GroupKind::Unitary(_) => {
                    (0..self.lambda.len()).all(|i| self.lambda[i] == -self.lambda[g.galois_index(i)])
                }
                GroupKind::Linear(_) => {
                    (0..self.lambda.len()).all(|i| self.lambda[i] == self.lambda[g.galois_index(i)])
                }
            }
    }

    pub fn is_dominant(&self, g: &GroupSpec) -> bool {
        g.factors()
            .into_iter()
            .all(|r| self.lambda[r].windows(2).all(|p| p[0] >= p[1]))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.lambda.iter().join(","))
    }
}

/// `w . chi = w(chi + rho) - rho`, computed in the doubled lattice.
pub fn dot_action(g: &GroupSpec, w: &WeylElement, chi: &Weight) -> Weight {
    let rho2 = g.rho2();
    let shifted = Weight { lambda: chi.lambda.iter().zip(&rho2).map(|(c, r)| 2 * c + r).collect() };
    let moved = shifted.act(w);
    Weight {
        lambda: moved
            .lambda
            .iter()
            .zip(&rho2)
            .map(|(v, r)| {
                debug_assert_eq!((v - r) % 2, 0);
                (v - r) / 2
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightClass {
    Singular,
    RegularOrbit { w_chi: WeylElement, chi_plus: Weight },
}

/// Singular if `chi + rho` lies on a wall; otherwise the unique `w` with
/// `w . chi` dominant.
pub fn classify_weight(g: &GroupSpec, chi: &Weight) -> WeightClass {
    let rho2 = g.rho2();
    let v: Vec<i64> = chi.lambda.iter().zip(&rho2).map(|(c, r)| 2 * c + r).collect();
    let mut perm = vec![0; v.len()];
    for r in g.factors() {
        let mut idx: Vec<usize> = r.clone().collect();
        idx.sort_by(|&a, &b| v[b].cmp(&v[a]));
        if idx.windows(2).any(|p| v[p[0]] == v[p[1]]) {
            return WeightClass::Singular;
        }
        for (pos, &i) in idx.iter().enumerate() {
            perm[i] = r.start + pos;
        }
    }
    let w_chi = WeylElement { perm };
    let chi_plus = dot_action(g, &w_chi, chi);
    WeightClass::RegularOrbit { w_chi, chi_plus }
}

/// Cocharacter of the torus of `G_r`: `r` entries at inert places, a pair
/// `(t1, t2)` flattened to `2r` entries at split places.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cocharacter {
    pub t: Vec<i64>,
}

impl Cocharacter {
    pub fn new(t: Vec<i64>) -> Self {
        Cocharacter { t }
    }

    pub fn size(&self) -> i64 {
        self.t.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for Cocharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.t.iter().join(","))
    }
}

/// Partitions with at most `r` parts and size at most `bound`, graded by size
/// and lexicographic within a size.
pub fn enumerate_lambda_pp(r: usize, bound: usize) -> Vec<Cocharacter> {
    let mut out = Vec::new();
    for size in 0..=bound {
        let mut level = Vec::new();
        partitions_of(size as i64, r, size as i64, &mut Vec::new(), &mut level);
        level.sort();
        out.extend(level.into_iter().map(Cocharacter::new));
    }
    out
}

fn partitions_of(left: i64, parts: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if cur.len() == parts {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for p in (0..=max.min(left)).rev() {
        cur.push(p);
        partitions_of(left - p, parts, p, cur, out);
        cur.pop();
    }
}

/// `Lambda_r^{++}` at the given place: partitions at inert places, pairs of
/// partitions (total size at most `bound`) at split places.
pub fn enumerate_lambda_pp_at(r: usize, place: Place, bound: usize) -> Vec<Cocharacter> {
    match place {
        Place::Inert => enumerate_lambda_pp(r, bound),
        Place::Split => {
            let single = enumerate_lambda_pp(r, bound);
            let mut out: Vec<Cocharacter> = single
                .iter()
                .cartesian_product(single.iter())
                .filter(|(a, b)| (a.size() + b.size()) as usize <= bound)
                .map(|(a, b)| Cocharacter::new([a.t.as_slice(), b.t.as_slice()].concat()))
                .collect();
            out.sort_by_key(|c| (c.size(), c.t.clone()));
            out
        }
    }
}

/// Whether `t` is dominant in the sense of `Lambda_r^+` (each factor weakly
/// decreasing).
pub fn is_dominant_cocharacter(t: &Cocharacter, r: usize) -> bool {
    t.t.chunks(r.max(1)).all(|c| c.windows(2).all(|p| p[0] >= p[1]))
}

/// `Lambda_r^{++}` membership: dominant with non-negative last entries.
pub fn is_lambda_pp(t: &Cocharacter, r: usize) -> bool {
    is_dominant_cocharacter(t, r) && t.t.iter().all(|&x| x >= 0)
}

/// `chi(S) = prod S_i^{lambda_i}`; the Frobenius part contributes 1.
pub fn char_eval(chi: &Weight, s: &TwistedTorusElement) -> Result<RationalFunction> {
    if chi.lambda.len() != s.coords.len() {
        return Err(Error::Mismatch("weight and torus element ranks differ".into()));
    }
    let mut out = RationalFunction::one(s.vars());
    for (c, &e) in s.coords.iter().zip(&chi.lambda) {
        if e != 0 {
            out = out.try_mul(&c.powi(e as i32)?)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::VarTable;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn unitary(l: usize) -> GroupSpec {
        GroupSpec::unitary(l, Place::Inert)
    }

    #[test]
    fn twisted_weyl_group_orders() {
        assert_eq!(twisted_weyl_group(&unitary(2)).unwrap().len(), 2);
        assert_eq!(twisted_weyl_group(&unitary(3)).unwrap().len(), 2);
        assert_eq!(twisted_weyl_group(&unitary(4)).unwrap().len(), 8);
        assert_eq!(twisted_weyl_group(&unitary(6)).unwrap().len(), 48);
        assert_eq!(twisted_weyl_group(&GroupSpec::linear(2, Place::Split)).unwrap().len(), 4);
        assert_eq!(twisted_weyl_group(&GroupSpec::linear(3, Place::Inert)).unwrap().len(), 6);
        assert_eq!(twisted_weyl_group(&GroupSpec::unitary(3, Place::Split)).unwrap().len(), 6);
    }

    #[test]
    fn linear_inert_matches_brute_force() {
        for k in 1..=3 {
            let g = GroupSpec::linear(k, Place::Inert);
            let mut brute: Vec<_> =
                ambient_weyl_group(&g).into_iter().filter(|w| w.galois(&g) == *w).collect();
            brute.sort();
            assert_eq!(brute, twisted_weyl_group(&g).unwrap());
        }
    }

    #[test]
    fn capacity_bound() {
        let err = twisted_weyl_group(&unitary(9)).unwrap_err();
        assert_eq!(err, Error::CapacityExceeded { rank: 9, bound: 8 });
    }

    #[test]
    fn groups_are_closed() {
        for g in [unitary(3), unitary(4), unitary(5), GroupSpec::linear(2, Place::Inert)] {
            let w = twisted_weyl_group(&g).unwrap();
            let set: HashSet<_> = w.iter().cloned().collect();
            for a in &w {
                assert!(set.contains(&a.inverse()));
                for b in &w {
                    assert!(set.contains(&a.compose(b)));
                }
            }
        }
    }

    #[test]
    fn weyl_act_examples() {
        let vt = VarTable::new(&["a1", "a2", "b1", "b2"]).unwrap();
        let g = GroupSpec::linear(2, Place::Split);
        let s = TwistedTorusElement::symbolic(g, &vt, vt.names()).unwrap();
        let swap_first = WeylElement { perm: vec![1, 0, 2, 3] };
        let ws = weyl_act(&swap_first, &s).unwrap();
        let names: Vec<String> = ws.coords.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["a2", "a1", "b1", "b2"]);
        let id = WeylElement::identity(4);
        assert_eq!(weyl_act(&id, &s).unwrap().coords, s.coords);

        let g2 = unitary(2);
        let w = twisted_weyl_group(&g2).unwrap();
        let gen = w.iter().find(|x| !x.is_identity()).unwrap();
        assert!(gen.compose(gen).is_identity());
    }

    #[test]
    fn dot_action_examples() {
        let g = GroupSpec::unitary(2, Place::Split);
        let s = WeylElement { perm: vec![1, 0] };
        assert_eq!(dot_action(&g, &s, &Weight::new(vec![0, 0])).lambda, vec![-1, 1]);
        assert_eq!(classify_weight(&g, &Weight::new(vec![-1, 0])), WeightClass::Singular);
        match classify_weight(&g, &Weight::new(vec![-2, 0])) {
            WeightClass::RegularOrbit { w_chi, chi_plus } => {
                assert_eq!(w_chi, s);
                assert_eq!(chi_plus.lambda, vec![-1, -1]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let dom = Weight::new(vec![2, 0]);
        assert_eq!(
            classify_weight(&g, &dom),
            WeightClass::RegularOrbit { w_chi: WeylElement::identity(2), chi_plus: dom }
        );
    }

    #[test]
    fn lambda_pp_enumeration() {
        let t = |v: &[i64]| Cocharacter::new(v.to_vec());
        assert_eq!(enumerate_lambda_pp(1, 3), vec![t(&[0]), t(&[1]), t(&[2]), t(&[3])]);
        assert_eq!(enumerate_lambda_pp(2, 2), vec![t(&[0, 0]), t(&[1, 0]), t(&[1, 1]), t(&[2, 0])]);
        assert_eq!(enumerate_lambda_pp(2, 4).len(), 9);
        assert_eq!(enumerate_lambda_pp_at(1, Place::Split, 2).len(), 6);
    }

    #[test]
    fn char_eval_rank_one_linear() {
        let vt = VarTable::new(&["a1", "a2"]).unwrap();
        let g = GroupSpec::linear(1, Place::Inert);
        let s = TwistedTorusElement::symbolic(g, &vt, vt.names()).unwrap();
        let chi = Weight::from_cocharacter(&g, &Cocharacter::new(vec![3])).unwrap();
        let a1 = RationalFunction::var(&vt, 0);
        let a2 = RationalFunction::var(&vt, 1);
        assert_eq!(char_eval(&chi, &s).unwrap(), (&a1 * &a2).powi(3).unwrap());
        assert!(char_eval(&Weight::zero(2), &s).unwrap().is_one());
    }

    fn arb_group() -> impl Strategy<Value = GroupSpec> {
        prop_oneof![
            (1usize..5).prop_map(|l| GroupSpec::unitary(l, Place::Inert)),
            (1usize..5).prop_map(|l| GroupSpec::unitary(l, Place::Split)),
            (1usize..3).prop_map(|k| GroupSpec::linear(k, Place::Split)),
            (1usize..3).prop_map(|k| GroupSpec::linear(k, Place::Inert)),
        ]
    }

    proptest! {
        #[test]
        fn dot_action_is_an_action(g in arb_group(), seed in any::<u64>(), raw in proptest::collection::vec(-3i64..4, 8)) {
            let w = full_weyl_group(&g, 8).unwrap();
            let a = &w[(seed as usize) % w.len()];
            let b = &w[(seed as usize / 7) % w.len()];
            let chi = Weight::new(raw[..g.coord_len()].to_vec());
            prop_assert_eq!(
                dot_action(&g, &a.compose(b), &chi),
                dot_action(&g, a, &dot_action(&g, b, &chi))
            );
        }

        #[test]
        fn classification_is_unique(g in arb_group(), raw in proptest::collection::vec(-3i64..4, 8)) {
            let chi = Weight::new(raw[..g.coord_len()].to_vec());
            let w = full_weyl_group(&g, 8).unwrap();
            let dominant: Vec<_> = w.iter().filter(|x| dot_action(&g, x, &chi).is_dominant(&g)).collect();
            match classify_weight(&g, &chi) {
                WeightClass::Singular => {
                    // a wall: some reflection fixes chi under the dot action
                    prop_assert!(w.iter().any(|x| !x.is_identity() && dot_action(&g, x, &chi) == chi));
                }
                WeightClass::RegularOrbit { w_chi, chi_plus } => {
                    prop_assert_eq!(dominant.len(), 1);
                    prop_assert_eq!(dominant[0], &w_chi);
                    prop_assert_eq!(dot_action(&g, &w_chi, &chi), chi_plus);
                    if g.is_twisted() && chi.is_gamma_invariant(&g) {
                        prop_assert_eq!(w_chi.galois(&g), w_chi);
                    }
                }
            }
        }
    }
}
