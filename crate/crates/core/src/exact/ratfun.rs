use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{ExactError, LaurentPoly, Rat, Result, VarId, VarTable};

/// Quotient of a Laurent polynomial by a product of normalized factors.
///
/// Each denominator factor has no monomial content, is not a monomial, and
/// has leading coefficient one. Factors are kept sorted with multiplicities,
/// so common denominators are found by merging rather than by gcd.
#[derive(Clone)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: Vec<(LaurentPoly, u32)>,
}

impl RationalFunction {
    pub fn zero(vars: &VarTable) -> Self {
        Self::from_poly(LaurentPoly::zero(vars))
    }

    pub fn one(vars: &VarTable) -> Self {
        Self::from_poly(LaurentPoly::one(vars))
    }

    pub fn constant(vars: &VarTable, c: Rat) -> Self {
        Self::from_poly(LaurentPoly::constant(vars, c))
    }

    pub fn var(vars: &VarTable, id: VarId) -> Self {
        Self::from_poly(LaurentPoly::var(vars, id))
    }

    pub fn var_pow(vars: &VarTable, id: VarId, power: i32) -> Self {
        Self::from_poly(LaurentPoly::var_pow(vars, id, power))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction { num: p, den: Vec::new() }
    }

    /// `num / prod(factors)`; errors if a factor is zero.
    pub fn from_factors(num: LaurentPoly, factors: &[LaurentPoly]) -> Result<Self> {
        let mut r = Self::from_poly(num);
        for f in factors {
            r = &r * &Self::from_poly(f.clone()).inv()?;
        }
        Ok(r)
    }

    /// `num / den` for polynomials.
    pub fn quotient(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        Ok(&Self::from_poly(num) * &Self::from_poly(den).inv()?)
    }

    pub fn vars(&self) -> &VarTable {
        self.num.vars()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(LaurentPoly, u32)] {
        &self.den
    }

    pub fn denominator(&self) -> LaurentPoly {
        let mut d = LaurentPoly::one(self.vars());
        for (f, k) in &self.den {
            d = &d * &f.pow(*k);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// The polynomial, if the denominator is trivial (call [`reduce`] first to
    /// detect removable denominators).
    ///
    /// [`reduce`]: RationalFunction::reduce
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        if self.den.is_empty() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Cancels denominator factors that divide the numerator.
    pub fn reduce(&self) -> Self {
        if self.num.is_zero() {
            return Self::zero(self.vars());
        }
        let mut num = self.num.clone();
        let mut den = Vec::with_capacity(self.den.len());
        for (f, k) in &self.den {
            let mut left = *k;
            while left > 0 {
                match num.exact_div(f) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den.push((f.clone(), left));
            }
        }
        RationalFunction { num, den }
    }

    /// Checked multiplication.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.vars().check(other.vars())?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.vars()));
        }
        let num = &self.num * &other.num;
        let den = merge(&self.den, &other.den, |a, b| a + b);
        Ok(RationalFunction { num, den })
    }

    /// Checked addition.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.vars().check(other.vars())?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            return Ok(RationalFunction { num: &self.num + &other.num, den: self.den.clone() });
        }
        let lcm = merge(&self.den, &other.den, |a, b| a.max(b));
        let a = &self.num * &missing(&lcm, &self.den, self.vars());
        let b = &other.num * &missing(&lcm, &other.den, self.vars());
        let num = &a + &b;
        if num.is_zero() {
            return Ok(Self::zero(self.vars()));
        }
        Ok(RationalFunction { num, den: lcm })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Multiplicative inverse; `DivisionByZero` for the zero function.
    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let (unit, f) = self.num.normalize_unit();
        let uinv = unit.monomial_inverse().expect("unit is a monomial");
        let mut num = uinv;
        let mut den: Vec<(LaurentPoly, u32)> = Vec::new();
        let mut f_pending = !f.is_one();
        for (g, k) in &self.den {
            let mut k = *k;
            if f_pending && *g == f {
                // f / f cancels one power.
                k -= 1;
                f_pending = false;
            }
            if k > 0 {
                num = &num * &g.pow(k);
            }
        }
        if f_pending {
            den.push((f, 1));
        }
        Ok(RationalFunction { num, den })
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn powi(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        if e == 0 {
            return Ok(Self::one(self.vars()));
        }
        let num = base.num.pow(e);
        let den = base.den.iter().map(|(f, k)| (f.clone(), k * e)).collect();
        Ok(RationalFunction { num, den })
    }

    /// Exact equality as rational functions.
    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        self.vars().check(other.vars())?;
        if self.den == other.den {
            return Ok(self.num == other.num);
        }
        let lcm = merge(&self.den, &other.den, |a, b| a.max(b));
        let a = &self.num * &missing(&lcm, &self.den, self.vars());
        let b = &other.num * &missing(&lcm, &other.den, self.vars());
        Ok(a == b)
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        let mut d = Rat::one();
        for (f, k) in &self.den {
            let v = f.eval(point).ok_or(ExactError::DivisionByZero)?;
            if v.is_zero() {
                return Err(ExactError::DivisionByZero);
            }
            d *= num_traits::pow::Pow::pow(&v, *k);
        }
        let n = self.num.eval(point).ok_or(ExactError::DivisionByZero)?;
        Ok(n / d)
    }

    /// Fixes some variables to rational values.
    pub fn eval_partial(&self, values: &[(VarId, Rat)]) -> Result<Self> {
        let num = self.num.eval_partial(values)?;
        let mut r = Self::from_poly(num);
        for (f, k) in &self.den {
            let g = f.eval_partial(values)?;
            if g.is_zero() {
                return Err(ExactError::DivisionByZero);
            }
            r = r.try_mul(&Self::from_poly(g).inv()?.powi(*k as i32)?)?;
        }
        Ok(r)
    }

    /// Substitutes rational functions for variables. A denominator factor that
    /// becomes identically zero is reported as `DegenerateSubstitution`.
    pub fn substitute(&self, bindings: &[(VarId, RationalFunction)]) -> Result<Self> {
        let mut r = self.num.substitute(bindings)?;
        for (f, k) in &self.den {
            let g = f.substitute(bindings)?;
            if g.is_zero() {
                return Err(ExactError::DegenerateSubstitution);
            }
            r = r.try_mul(&g.inv()?.powi(*k as i32)?)?;
        }
        Ok(r)
    }

    /// Whether the variable occurs anywhere (numerator or denominator).
    pub fn contains_var(&self, id: VarId) -> bool {
        self.num.contains_var(id) || self.den.iter().any(|(f, _)| f.contains_var(id))
    }
}

/// Merges two sorted factor lists, combining multiplicities of shared factors.
fn merge(
    a: &[(LaurentPoly, u32)],
    b: &[(LaurentPoly, u32)],
    both: impl Fn(u32, u32) -> u32,
) -> Vec<(LaurentPoly, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0.clone(), both(a[i].1, b[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Product of the factor powers present in `full` but not in `part`.
fn missing(full: &[(LaurentPoly, u32)], part: &[(LaurentPoly, u32)], vars: &VarTable) -> LaurentPoly {
    let mut out = LaurentPoly::one(vars);
    let mut j = 0;
    for (f, k) in full {
        while j < part.len() && part[j].0 < *f {
            j += 1;
        }
        let have = if j < part.len() && part[j].0 == *f { part[j].1 } else { 0 };
        if *k > have {
            out = &out * &f.pow(k - have);
        }
    }
    out
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.try_eq(other).unwrap_or(false)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                self.$imp(rhs).expect("rational function arithmetic")
            }
        }
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / (", self.num)?;
        for (i, (g, k)) in self.den.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "({})", g)?;
            if *k > 1 {
                write!(f, "^{}", k)?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self)
    }
}
