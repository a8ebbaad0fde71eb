use std::fmt;

use super::{ExactError, LaurentPoly, RationalFunction, Result, VarId, VarTable};

/// Power series in one variable truncated after `order`. Coefficients are
/// rational functions in the remaining variables and never contain `var`.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    var: VarId,
    coeffs: Vec<RationalFunction>,
}

impl TruncatedSeries {
    pub fn zero(vars: &VarTable, var: VarId, order: usize) -> Self {
        TruncatedSeries { var, coeffs: vec![RationalFunction::zero(vars); order + 1] }
    }

    pub fn one(vars: &VarTable, var: VarId, order: usize) -> Self {
        let mut s = Self::zero(vars, var, order);
        s.coeffs[0] = RationalFunction::one(vars);
        s
    }

    /// Builds from coefficients `c_0 .. c_order`.
    pub fn from_coeffs(var: VarId, coeffs: Vec<RationalFunction>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        TruncatedSeries { var, coeffs }
    }

    pub fn var(&self) -> VarId {
        self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn vars(&self) -> &VarTable {
        self.coeffs[0].vars()
    }

    pub fn coeff(&self, k: usize) -> &RationalFunction {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn add_to_coeff(&mut self, k: usize, c: &RationalFunction) {
        if k < self.coeffs.len() {
            self.coeffs[k] = &self.coeffs[k] + c;
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        TruncatedSeries { var: self.var, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.var != other.var {
            return Err(ExactError::VarTableMismatch);
        }
        self.vars().check(other.vars())?;
        let n = self.order().min(other.order());
        let vars = self.vars().clone();
        let mut out = vec![RationalFunction::zero(&vars); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].try_add(&a.try_mul(b)?)?;
                }
            }
        }
        Ok(TruncatedSeries { var: self.var, coeffs: out })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.var != other.var {
            return Err(ExactError::VarTableMismatch);
        }
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| self.coeffs[k].try_add(&other.coeffs[k]))
            .collect::<Result<_>>()?;
        Ok(TruncatedSeries { var: self.var, coeffs })
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(
        &self,
        f: impl Fn(&RationalFunction) -> Result<RationalFunction>,
    ) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<_>>()?;
        Ok(TruncatedSeries { var: self.var, coeffs })
    }

    /// Index of the first coefficient where the two series differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k])
    }
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var
            && self.order() == other.order()
            && self.first_mismatch(other).is_none()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.vars().name(self.var);
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*{}", c, name)?,
                _ => write!(f, "({})*{}^{}", c, name, k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", name, self.order() + 1)
    }
}

/// Splits a polynomial into coefficients of `var^0 .. var^order`.
fn poly_coeffs(p: &LaurentPoly, var: VarId, order: usize) -> Result<Vec<RationalFunction>> {
    let vars = p.vars();
    let mut out = vec![RationalFunction::zero(vars); order + 1];
    for (k, c) in p.coefficients_in(var) {
        if k < 0 {
            return Err(ExactError::PoleAtOrigin(vars.name(var).to_string()));
        }
        if (k as usize) <= order {
            out[k as usize] = RationalFunction::from_poly(c);
        }
    }
    Ok(out)
}

/// Series of `1 / f` for a polynomial with nonzero constant term in `var`.
fn inverse_series(f: &LaurentPoly, var: VarId, order: usize) -> Result<Vec<RationalFunction>> {
    let fc = poly_coeffs(f, var, order)?;
    if fc[0].is_zero() {
        return Err(ExactError::PoleAtOrigin(f.vars().name(var).to_string()));
    }
    let g0 = fc[0].inv()?;
    let nz: Vec<usize> = (1..=order).filter(|&j| !fc[j].is_zero()).collect();
    let mut g = Vec::with_capacity(order + 1);
    g.push(g0.clone());
    for k in 1..=order {
        let mut acc = RationalFunction::zero(f.vars());
        for &j in nz.iter().take_while(|&&j| j <= k) {
            acc = &acc + &(&fc[j] * &g[k - j]);
        }
        g.push(-(&g0 * &acc));
    }
    Ok(g)
}

/// Expands `f` as a power series in `var` through `var^order`.
///
/// Fails with `PoleAtOrigin` if `f` has a pole at `var = 0`.
pub fn series_expand(f: &RationalFunction, var: VarId, order: usize) -> Result<TruncatedSeries> {
    let vars = f.vars().clone();
    let mut acc = TruncatedSeries::from_coeffs(var, poly_coeffs(f.numerator(), var, order)?);
    for (factor, mult) in f.denominator_factors() {
        if !factor.contains_var(var) {
            let inv = RationalFunction::from_poly(factor.clone()).inv()?.powi(*mult as i32)?;
            acc = acc.map_coeffs(|c| c.try_mul(&inv))?;
            continue;
        }
        let inv = TruncatedSeries::from_coeffs(var, inverse_series(factor, var, order)?);
        for _ in 0..*mult {
            acc = acc.mul(&inv)?;
        }
    }
    debug_assert!(acc.vars().same(&vars));
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio, Rat};
    use proptest::prelude::*;

    fn vt() -> VarTable {
        VarTable::new(&["z", "a"]).unwrap()
    }

    #[test]
    fn geometric_series() {
        let v = vt();
        let one = RationalFunction::one(&v);
        let z = RationalFunction::var(&v, 0);
        let a = RationalFunction::var(&v, 1);
        let f = &one / &(&one - &(&a * &z));
        let s = series_expand(&f, 0, 5).unwrap();
        for k in 0..=5 {
            assert_eq!(s.coeff(k), &a.powi(k as i32).unwrap());
        }
    }

    #[test]
    fn long_division_example() {
        // (1 - z^2)/(1 - z) = 1 + z
        let v = vt();
        let one = RationalFunction::one(&v);
        let z = RationalFunction::var(&v, 0);
        let f = &(&one - &(&z * &z)) / &(&one - &z);
        let s = series_expand(&f, 0, 4).unwrap();
        let got: Vec<Option<Rat>> = (0..=4).map(|k| s.coeff(k).as_constant()).collect();
        assert_eq!(got, [1, 1, 0, 0, 0].map(|c| Some(rat(c))));
        let g = series_expand(&(&one / &(&one - &z)), 0, 3).unwrap();
        assert!((0..=3).all(|k| g.coeff(k).is_one()));
    }

    #[test]
    fn pole_at_origin() {
        let v = vt();
        let one = RationalFunction::one(&v);
        let z = RationalFunction::var(&v, 0);
        let f = &one / &z;
        assert!(matches!(series_expand(&f, 0, 3), Err(ExactError::PoleAtOrigin(_))));
        // A pole in another variable is fine.
        let a = RationalFunction::var(&v, 1);
        let g = &z / &(&a - &one);
        let s = series_expand(&g, 0, 2).unwrap();
        assert_eq!(s.coeff(1), &(&one / &(&a - &one)));
    }

    #[test]
    fn non_monic_constant_term() {
        // 1/(2 - z) = sum z^k / 2^(k+1)
        let v = vt();
        let z = RationalFunction::var(&v, 0);
        let two = RationalFunction::constant(&v, rat(2));
        let f = &RationalFunction::one(&v) / &(&two - &z);
        let s = series_expand(&f, 0, 4).unwrap();
        for k in 0..=4 {
            let expect: Rat = ratio(1, 1 << (k + 1));
            assert_eq!(s.coeff(k).as_constant(), Some(expect));
        }
    }

    fn arb_ratfun() -> impl Strategy<Value = RationalFunction> {
        let v = vt();
        (
            proptest::collection::vec((0i32..3, -1i32..2, -3i64..4), 1..4),
            proptest::collection::vec((1i32..3, -1i32..2, -3i64..4), 0..3),
        )
            .prop_map(move |(n, d)| {
                let num = LaurentPoly::from_terms(
                    &v,
                    n.into_iter().map(|(i, j, c)| (vec![i, j].into_boxed_slice(), rat(c))),
                );
                let den = &LaurentPoly::one(&v)
                    + &LaurentPoly::from_terms(
                        &v,
                        d.into_iter().map(|(i, j, c)| (vec![i, j].into_boxed_slice(), rat(c))),
                    );
                RationalFunction::quotient(num, den).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn expansion_is_multiplicative(f in arb_ratfun(), g in arb_ratfun()) {
            let n = 5;
            let fg = series_expand(&(&f * &g), 0, n).unwrap();
            let prod = series_expand(&f, 0, n).unwrap().mul(&series_expand(&g, 0, n).unwrap()).unwrap();
            prop_assert_eq!(fg, prod);
        }

        #[test]
        fn expansion_is_additive(f in arb_ratfun(), g in arb_ratfun()) {
            let n = 4;
            let s = series_expand(&(&f + &g), 0, n).unwrap();
            let t = series_expand(&f, 0, n).unwrap().add(&series_expand(&g, 0, n).unwrap()).unwrap();
            prop_assert_eq!(s, t);
        }
    }
}
