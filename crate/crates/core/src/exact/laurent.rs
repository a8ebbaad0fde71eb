use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{ExactError, Rat, RationalFunction, Result, VarId, VarTable};

/// Exponent vector, one entry per variable of the owning table.
pub type Monomial = Box<[i32]>;

/// Sparse Laurent polynomial with rational coefficients.
///
/// Terms are kept sorted by exponent vector (lexicographic, ascending) with no
/// zero coefficients, so structural equality is polynomial equality.
#[derive(Clone)]
pub struct LaurentPoly {
    vars: VarTable,
    terms: Vec<(Monomial, Rat)>,
}

/// Binary operation selector for [`LaurentPoly::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

impl LaurentPoly {
    pub fn zero(vars: &VarTable) -> Self {
        LaurentPoly { vars: vars.clone(), terms: Vec::new() }
    }

    pub fn one(vars: &VarTable) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn constant(vars: &VarTable, c: Rat) -> Self {
        Self::monomial(vars, vec![0; vars.len()].into(), c)
    }

    pub fn monomial(vars: &VarTable, exps: Monomial, c: Rat) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let terms = if c.is_zero() { Vec::new() } else { vec![(exps, c)] };
        LaurentPoly { vars: vars.clone(), terms }
    }

    /// The variable `id` raised to `power` (negative allowed).
    pub fn var_pow(vars: &VarTable, id: VarId, power: i32) -> Self {
        let mut e = vec![0; vars.len()];
        e[id] = power;
        Self::monomial(vars, e.into(), Rat::one())
    }

    pub fn var(vars: &VarTable, id: VarId) -> Self {
        Self::var_pow(vars, id, 1)
    }

    /// Builds from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(vars: &VarTable, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut acc: HashMap<Monomial, Rat> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "exponent vector length");
            *acc.entry(m).or_insert_with(Rat::zero) += c;
        }
        Self::from_map(vars, acc)
    }

    fn from_map(vars: &VarTable, acc: HashMap<Monomial, Rat>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        LaurentPoly { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The coefficient if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if m.iter().all(|&e| e == 0) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<&(Monomial, Rat)> {
        self.terms.last()
    }

    /// Whether `id` occurs with nonzero exponent in some term.
    pub fn contains_var(&self, id: VarId) -> bool {
        self.terms.iter().any(|(m, _)| m[id] != 0)
    }

    /// Checked arithmetic: errors when the operands use different tables.
    pub fn arith(&self, other: &Self, op: PolyOp) -> Result<Self> {
        self.vars.check(&other.vars)?;
        Ok(match op {
            PolyOp::Add => self.add_impl(other, false),
            PolyOp::Sub => self.add_impl(other, true),
            PolyOp::Mul => self.mul_impl(other),
        })
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let (m, c) = &b[j];
                    out.push((m.clone(), if negate { -c.clone() } else { c.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        LaurentPoly { vars: self.vars.clone(), terms: out }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.vars);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let n = self.vars.len();
        let mut acc: HashMap<Monomial, Rat> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        let mut buf = vec![0i32; n];
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                for k in 0..n {
                    buf[k] = ma[k] + mb[k];
                }
                let c = ca * cb;
                match acc.get_mut(buf.as_slice()) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(buf.clone().into_boxed_slice(), c);
                    }
                }
            }
        }
        Self::from_map(&self.vars, acc)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let e: Monomial = m.iter().zip(shift).map(|(a, b)| a + b).collect();
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Non-negative integer power.
    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Inverse of a single-term polynomial.
    pub fn monomial_inverse(&self) -> Option<Self> {
        match self.terms.as_slice() {
            [(m, c)] => {
                let e: Monomial = m.iter().map(|x| -x).collect();
                Some(Self::monomial(&self.vars, e, c.recip()))
            }
            _ => None,
        }
    }

    /// Per-variable minimum exponent (the monomial content).
    pub fn min_exponents(&self) -> Vec<i32> {
        let mut out = vec![i32::MAX; self.vars.len()];
        for (m, _) in &self.terms {
            for (o, &e) in out.iter_mut().zip(m.iter()) {
                *o = (*o).min(e);
            }
        }
        if self.terms.is_empty() {
            out.iter_mut().for_each(|o| *o = 0);
        }
        out
    }

    /// Splits `self = unit * f` with `unit` a monomial times a scalar and `f`
    /// free of monomial content with leading coefficient one. Zero input is
    /// returned unchanged with a zero unit.
    pub fn normalize_unit(&self) -> (LaurentPoly, LaurentPoly) {
        if self.is_zero() {
            return (Self::zero(&self.vars), self.clone());
        }
        let min = self.min_exponents();
        let lead = self.terms.last().unwrap().1.clone();
        let neg: Vec<i32> = min.iter().map(|x| -x).collect();
        let f = self.shift(&neg).scale(&lead.recip());
        let unit = Self::monomial(&self.vars, min.into(), lead);
        (unit, f)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder (or the divisor is zero).
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(&self.vars));
        }
        if let Some(inv) = divisor.monomial_inverse() {
            return Some(self * &inv);
        }
        let (fu, f) = self.normalize_unit();
        let (gu, g) = divisor.normalize_unit();
        // Both f and g are now honest polynomials without monomial content.
        let (glm, glc) = g.terms.last().unwrap().clone();
        let mut rem = f;
        let mut quot: Vec<(Monomial, Rat)> = Vec::new();
        while let Some((lm, lc)) = rem.terms.last().cloned() {
            if lm.iter().zip(glm.iter()).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Monomial = lm.iter().zip(glm.iter()).map(|(a, b)| a - b).collect();
            let qc = &lc / &glc;
            let step = g.shift(&qm).scale(&qc);
            rem = &rem - &step;
            quot.push((qm, qc));
        }
        let q = Self::from_terms(&self.vars, quot);
        let ginv = gu.monomial_inverse().expect("unit is a monomial");
        Some(&(&q * &fu) * &ginv)
    }

    /// Evaluates at a point; `None` if a variable with negative exponent is 0.
    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        assert_eq!(point.len(), self.vars.len());
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (&e, x) in m.iter().zip(point) {
                if e == 0 {
                    continue;
                }
                if e < 0 && x.is_zero() {
                    return None;
                }
                t *= num_traits::pow::Pow::pow(x, e);
            }
            total += t;
        }
        Some(total)
    }

    /// Groups terms by the exponent of `id`, stripping that variable.
    pub fn coefficients_in(&self, id: VarId) -> Vec<(i32, LaurentPoly)> {
        let mut groups: std::collections::BTreeMap<i32, Vec<(Monomial, Rat)>> = Default::default();
        for (m, c) in &self.terms {
            let mut stripped = m.clone();
            stripped[id] = 0;
            groups.entry(m[id]).or_default().push((stripped, c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, ts)| (k, Self::from_terms(&self.vars, ts)))
            .collect()
    }

    /// Substitutes rational functions for some variables (same table).
    pub fn substitute(&self, bindings: &[(VarId, RationalFunction)]) -> Result<RationalFunction> {
        for (_, v) in bindings {
            self.vars.check(v.vars())?;
        }
        let mut bound: Vec<Option<&RationalFunction>> = vec![None; self.vars.len()];
        for (id, v) in bindings {
            bound[*id] = Some(v);
        }
        // Fast path: monomial images keep the result polynomial.
        let mono: Option<Vec<Option<LaurentPoly>>> = bound
            .iter()
            .map(|b| match b {
                None => Some(None),
                Some(v) => v.as_laurent().filter(|p| p.is_monomial()).map(Some),
            })
            .collect();
        if let Some(images) = mono {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let mut e = vec![0i32; self.vars.len()];
                let mut coeff = c.clone();
                for (id, &k) in m.iter().enumerate() {
                    match &images[id] {
                        None => e[id] += k,
                        Some(img) => {
                            let (im, ic) = &img.terms[0];
                            for (t, &x) in e.iter_mut().zip(im.iter()) {
                                *t += x * k;
                            }
                            coeff *= num_traits::pow::Pow::pow(ic, k);
                        }
                    }
                }
                terms.push((e.into_boxed_slice(), coeff));
            }
            return Ok(RationalFunction::from_poly(Self::from_terms(&self.vars, terms)));
        }
        let mut cache: HashMap<(VarId, i32), RationalFunction> = HashMap::new();
        let mut total = RationalFunction::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut free = vec![0i32; self.vars.len()];
            let mut factor = RationalFunction::one(&self.vars);
            for (id, &k) in m.iter().enumerate() {
                match bound[id] {
                    None => free[id] = k,
                    Some(v) if k != 0 => {
                        let p = match cache.get(&(id, k)) {
                            Some(p) => p.clone(),
                            None => {
                                let p = v.powi(k)?;
                                cache.insert((id, k), p.clone());
                                p
                            }
                        };
                        factor = &factor * &p;
                    }
                    Some(_) => {}
                }
            }
            let mono = RationalFunction::from_poly(Self::monomial(&self.vars, free.into(), c.clone()));
            total = &total + &(&factor * &mono);
        }
        Ok(total)
    }

    /// Total degree range (min, max) of the variable `id`.
    pub fn degree_range(&self, id: VarId) -> Option<(i32, i32)> {
        let mut it = self.terms.iter().map(|(m, _)| m[id]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Partial evaluation: fixes the listed variables to rational values.
    pub fn eval_partial(&self, values: &[(VarId, Rat)]) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = m.clone();
            let mut coeff = c.clone();
            for (id, x) in values {
                let k = e[*id];
                if k != 0 {
                    if k < 0 && x.is_zero() {
                        return Err(ExactError::DivisionByZero);
                    }
                    coeff *= num_traits::pow::Pow::pow(x, k);
                    e[*id] = 0;
                }
            }
            terms.push((e, coeff));
        }
        Ok(Self::from_terms(&self.vars, terms))
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.vars.same(&other.vars) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl std::hash::Hash for LaurentPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.terms.len().cmp(&other.terms.len()).then_with(|| self.terms.cmp(&other.terms))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.arith(rhs, $op).expect("variable table mismatch")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, PolyOp::Add);
forward_binop!(Sub, sub, PolyOp::Sub);
forward_binop!(Mul, mul, PolyOp::Mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let is_const = m.iter().all(|&e| e == 0);
            if !abs.is_one() || is_const {
                write!(f, "{}", abs)?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (id, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.vars.name(id))?;
                if e != 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn table() -> VarTable {
        VarTable::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let vt = table();
        let x = LaurentPoly::var(&vt, 0);
        let one = LaurentPoly::one(&vt);
        let p = (&x + &one) * (&x - &one);
        assert_eq!(p, &x.pow(2) - &one);
    }

    #[test]
    fn zero_absorbs_and_laurent_cancels() {
        let vt = table();
        let x = LaurentPoly::var(&vt, 0);
        let y = LaurentPoly::var(&vt, 1);
        let p = &x + &y;
        assert!((&p * &LaurentPoly::zero(&vt)).is_zero());
        let xinv = LaurentPoly::var_pow(&vt, 0, -1);
        assert!((&xinv * &x).is_one());
    }

    #[test]
    fn mismatched_tables_error() {
        let a = LaurentPoly::var(&table(), 0);
        let b = LaurentPoly::var(&VarTable::new(&["z"]).unwrap(), 0);
        assert_eq!(a.arith(&b, PolyOp::Add), Err(ExactError::VarTableMismatch));
    }

    #[test]
    fn exact_division() {
        let vt = table();
        let x = LaurentPoly::var(&vt, 0);
        let y = LaurentPoly::var(&vt, 1);
        let f = (&x - &y) * (&x + &y.pow(3));
        assert_eq!(f.exact_div(&(&x - &y)), Some(&x + &y.pow(3)));
        assert_eq!(f.exact_div(&(&x + &y)), None);
        // Laurent shifts on both sides.
        let xi = LaurentPoly::var_pow(&vt, 0, -2);
        let g = &(&LaurentPoly::one(&vt) - &(&y * &xi)) * &x;
        assert_eq!(g.exact_div(&(&x.pow(2) - &y)), Some(LaurentPoly::var_pow(&vt, 0, -1)));
    }

    #[test]
    fn normalize_unit_strips_content() {
        let vt = table();
        let x = LaurentPoly::var(&vt, 0);
        let y = LaurentPoly::var(&vt, 1);
        let p = (&x.pow(2) * &y).scale(&rat(3)) - (&x * &y).scale(&rat(6));
        let (u, f) = p.normalize_unit();
        assert_eq!(&u * &f, p);
        assert_eq!(f.min_exponents(), vec![0, 0]);
        assert!(f.leading().unwrap().1.is_one());
    }
}
