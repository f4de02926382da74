use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Name of the indeterminate. `SqrtT` stores powers of `t^{1/2}`, so the
/// exponent `e` stands for `t^{e/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    T,
    Z,
    A,
    SqrtT,
}

impl Variable {
    fn symbol(&self) -> &'static str {
        match self {
            Variable::T | Variable::SqrtT => "t",
            Variable::Z => "z",
            Variable::A => "A",
        }
    }
}

/// Integer Laurent polynomial in one variable. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    var: Variable,
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(var: Variable) -> Self {
        LaurentPolynomial { var, terms: BTreeMap::new() }
    }

    pub fn one(var: Variable) -> Self {
        Self::monomial(var, 0, 1)
    }

    pub fn monomial(var: Variable, exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(var);
        p.add_term(exp, coeff.into());
        p
    }

    pub fn from_terms<C: Into<BigInt>>(var: Variable, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero(var);
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Coefficients from exponent `low` upwards.
    pub fn from_coeffs(var: Variable, low: i64, coeffs: &[i64]) -> Self {
        Self::from_terms(var, coeffs.iter().enumerate().map(|(k, c)| (low + k as i64, *c)))
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    pub fn with_var(mut self, var: Variable) -> Self {
        self.var = var;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPolynomial { var: self.var, terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_terms(self.var, self.terms.iter().map(|(e, c)| (*e, c * k)))
    }

    /// Substitutes `var -> var^k` (`k` may be negative).
    pub fn map_exponents(&self, f: impl Fn(i64) -> i64) -> Self {
        Self::from_terms(self.var, self.terms.iter().map(|(e, c)| (f(*e), c.clone())))
    }

    /// Value at `var = x` for `x = ±1`.
    pub fn eval_unit(&self, minus: bool) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| if minus && e.is_odd() { -c.clone() } else { c.clone() })
            .sum()
    }

    /// Reads coefficients the same backwards: `p(t) = t^k p(1/t)` for some `k`.
    pub fn is_palindromic(&self) -> bool {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else { return true };
        self.terms.iter().all(|(e, c)| self.terms.get(&(lo + hi - e)) == Some(c))
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (Some(dlo), Some(dhi)) = (divisor.min_exp(), divisor.max_exp()) else { return None };
        let lead = divisor.leading_coeff()?.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.var);
        while let Some(rhi) = rem.max_exp() {
            if rhi - dhi < rem.min_exp()? - dlo {
                return None;
            }
            let (q, r) = rem.coeff(rhi).div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            let step = Self::monomial(self.var, rhi - dhi, q);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        Some(quot)
    }

    fn format_exp(&self, e: i64) -> String {
        if self.var == Variable::SqrtT {
            if e % 2 == 0 {
                (e / 2).to_string()
            } else {
                format!("{e}/2")
            }
        } else {
            e.to_string()
        }
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero(self.var);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { var: self.var, terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Descending powers, e.g. `t^2 - t + 1` or `t^-1 + 2 - t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let x = self.var.symbol();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let unit = mag.is_one();
            match *e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}")?;
                    }
                    let shown = self.format_exp(*e);
                    if shown == "1" {
                        write!(f, "{x}")?;
                    } else if shown.contains('/') || shown.starts_with('-') {
                        write!(f, "{x}^({shown})")?;
                    } else {
                        write!(f, "{x}^{shown}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(low: i64, c: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial::from_coeffs(Variable::T, low, c)
    }

    #[test]
    fn display() {
        assert_eq!(t(0, &[1, -1, 1]).to_string(), "t^2 - t + 1");
        assert_eq!(t(-2, &[1, -1, 1]).to_string(), "1 - t^(-1) + t^(-2)");
        assert_eq!(t(0, &[0, -3]).to_string(), "-3t");
        assert_eq!(LaurentPolynomial::zero(Variable::Z).to_string(), "0");
        let v = LaurentPolynomial::from_terms(Variable::SqrtT, [(3, 1), (-1, -2)]);
        assert_eq!(v.to_string(), "t^(3/2) - 2t^(-1/2)");
    }

    #[test]
    fn arithmetic() {
        let a = t(0, &[1, 1]);
        let b = t(0, &[-1, 1]);
        assert_eq!(&a * &b, t(0, &[-1, 0, 1]));
        assert!((&a - &a).is_zero());
        assert_eq!((&a * &b).div_exact(&a), Some(b.clone()));
        assert_eq!(t(0, &[1, 0, 1]).div_exact(&a), None);
        assert_eq!(t(0, &[1, 1, 1]).eval_unit(true), BigInt::from(1));
        assert!(t(0, &[1, -1, 1]).is_palindromic());
        assert!(!t(0, &[1, -1, 2]).is_palindromic());
    }
}
