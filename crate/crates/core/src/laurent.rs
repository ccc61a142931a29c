//! Laurent polynomials in one variable `t` and the `t`-adic valuation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Ring;

/// Order of vanishing at `t = 0`. `Infinite` is the valuation of zero and
/// compares greater than every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("+inf"),
        }
    }
}

/// A finite sum `Σ c_k t^k` with `k ∈ Z`.
///
/// Terms are kept sorted by exponent with no zero coefficients, so derived
/// equality is equality of polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent<F> {
    terms: Vec<(i64, F)>,
}

impl<F: Ring> Laurent<F> {
    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// summing repeated exponents and dropping zeros.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, F)>,
    {
        let mut raw: Vec<(i64, F)> = terms.into_iter().collect();
        raw.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(i64, F)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = lc.add_ref(&c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Laurent { terms: out }
    }

    pub fn monomial(coeff: F, exp: i64) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            Laurent { terms: vec![(exp, coeff)] }
        }
    }

    /// `t^exp`
    pub fn t_pow(exp: i64) -> Self {
        Self::monomial(F::one(), exp)
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, 0)
    }

    pub fn terms(&self) -> &[(i64, F)] {
        &self.terms
    }

    pub fn coeff(&self, exp: i64) -> F {
        self.terms
            .binary_search_by_key(&exp, |(e, _)| *e)
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| F::zero())
    }

    pub fn valuation(&self) -> Valuation {
        self.terms
            .first()
            .map_or(Valuation::Infinite, |(e, _)| Valuation::Finite(*e))
    }

    pub fn degree(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// The constant term, defined when the valuation is nonnegative.
    pub fn eval_at_zero(&self) -> Result<F> {
        match self.valuation() {
            Valuation::Finite(v) if v < 0 => Err(Error::NegativeValuation(v)),
            _ => Ok(self.coeff(0)),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (*e, x.mul_ref(c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    /// `self + c * t^k * other`, the workhorse of matrix-vector products.
    pub fn add_scaled_shifted(&self, c: &F, k: i64, other: &Self) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let rhs = other.terms.iter().map(|(e, x)| (e + k, x.mul_ref(c)));
        Laurent { terms: merge(self.terms.iter().cloned(), rhs) }
    }

    fn add_impl(&self, rhs: &Self) -> Self {
        Laurent { terms: merge(self.terms.iter().cloned(), rhs.terms.iter().cloned()) }
    }

    fn sub_impl(&self, rhs: &Self) -> Self {
        Laurent {
            terms: merge(
                self.terms.iter().cloned(),
                rhs.terms.iter().map(|(e, c)| (*e, c.neg_ref())),
            ),
        }
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return rhs.scale(c).shift(*e);
        }
        if rhs.terms.len() == 1 {
            let (e, c) = &rhs.terms[0];
            return self.scale(c).shift(*e);
        }
        let lo = self.terms[0].0 + rhs.terms[0].0;
        let hi = self.degree().unwrap() + rhs.degree().unwrap();
        let mut dense = vec![F::zero(); (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let slot = &mut dense[(ea + eb - lo) as usize];
                *slot = slot.add_ref(&ca.mul_ref(cb));
            }
        }
        Laurent {
            terms: dense
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i64, c))
                .collect(),
        }
    }
}

fn merge<F: Ring>(
    a: impl Iterator<Item = (i64, F)>,
    b: impl Iterator<Item = (i64, F)>,
) -> Vec<(i64, F)> {
    let mut a = a.peekable();
    let mut b = b.peekable();
    let mut out = Vec::new();
    loop {
        let ord = match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (Some((ea, _)), Some((eb, _))) => ea.cmp(eb),
        };
        match ord {
            Ordering::Less => out.push(a.next().unwrap()),
            Ordering::Greater => out.push(b.next().unwrap()),
            Ordering::Equal => {
                let (e, x) = a.next().unwrap();
                let (_, y) = b.next().unwrap();
                let s = x.add_ref(&y);
                if !s.is_zero() {
                    out.push((e, s));
                }
            }
        }
    }
    out
}

impl<F: Ring> Zero for Laurent<F> {
    fn zero() -> Self {
        Laurent { terms: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Ring> One for Laurent<F> {
    fn one() -> Self {
        Self::constant(F::one())
    }
}

impl<F: Ring> From<F> for Laurent<F> {
    fn from(c: F) -> Self {
        Self::constant(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl<'a, F: Ring> $tr<&'a Laurent<F>> for &'a Laurent<F> {
            type Output = Laurent<F>;
            fn $method(self, rhs: &'a Laurent<F>) -> Laurent<F> {
                self.$imp(rhs)
            }
        }
        impl<F: Ring> $tr for Laurent<F> {
            type Output = Laurent<F>;
            fn $method(self, rhs: Laurent<F>) -> Laurent<F> {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);

impl<F: Ring> Neg for &Laurent<F> {
    type Output = Laurent<F>;
    fn neg(self) -> Laurent<F> {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, c.neg_ref())).collect() }
    }
}

impl<F: Ring> Neg for Laurent<F> {
    type Output = Laurent<F>;
    fn neg(self) -> Laurent<F> {
        -&self
    }
}

impl<F: Ring + fmt::Display> fmt::Display for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match *e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{e}")?,
            }
        }
        Ok(())
    }
}

impl<F: Ring> fmt::Debug for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(e, c)| (e, c))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{LaurentPoly, Rational};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, q(c, 1))))
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(lp(&[(2, 1), (5, 3)]).valuation(), Valuation::Finite(2));
        assert_eq!(LaurentPoly::one().valuation(), Valuation::Finite(0));
        assert_eq!(LaurentPoly::zero().valuation(), Valuation::Infinite);
        assert!(Valuation::Finite(i64::MAX) < Valuation::Infinite);
    }

    #[test]
    fn arithmetic_examples() {
        let a = lp(&[(-1, 1), (0, 1)]);
        assert_eq!(&a + &lp(&[(0, -1)]), LaurentPoly::t_pow(-1));
        assert_eq!(LaurentPoly::t_pow(-1) * LaurentPoly::t_pow(1), LaurentPoly::one());
        let p = lp(&[(0, 1), (1, 1)]) * lp(&[(0, 1), (1, -1)]);
        assert_eq!(p, lp(&[(0, 1), (2, -1)]));
    }

    #[test]
    fn eval_at_zero_examples() {
        assert_eq!(lp(&[(0, 2), (1, 5)]).eval_at_zero().unwrap(), q(2, 1));
        assert_eq!(lp(&[(3, 1)]).eval_at_zero().unwrap(), q(0, 1));
        assert_eq!(lp(&[(-1, 1), (0, 1)]).eval_at_zero(), Err(Error::NegativeValuation(-1)));
    }

    #[test]
    fn from_terms_cancels() {
        let p = LaurentPoly::from_terms(vec![(1, q(1, 2)), (1, q(-1, 2)), (0, q(0, 1))]);
        assert!(p.is_zero());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-50i64..=50, 1i64..=50).prop_map(|(n, d)| q(n, d))
    }

    pub(crate) fn arb_laurent() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i64..=6, arb_rational()), 0..5)
            .prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!((&a * &b) * c.clone(), &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
            prop_assert_eq!(&a + &LaurentPoly::zero(), a.clone());
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn valuation_laws(a in arb_laurent(), b in arb_laurent()) {
            if !a.is_zero() && !b.is_zero() {
                let (va, vb) = (a.valuation().finite().unwrap(), b.valuation().finite().unwrap());
                prop_assert_eq!((&a * &b).valuation(), Valuation::Finite(va + vb));
                let s = (&a + &b).valuation();
                prop_assert!(s >= Valuation::Finite(va.min(vb)));
                if va != vb {
                    prop_assert_eq!(s, Valuation::Finite(va.min(vb)));
                }
            }
        }

        #[test]
        fn eval_at_zero_is_a_homomorphism(a in arb_laurent(), b in arb_laurent()) {
            let (a, b) = (a.shift(6), b.shift(6));
            let (ea, eb) = (a.eval_at_zero().unwrap(), b.eval_at_zero().unwrap());
            prop_assert_eq!((&a * &b).eval_at_zero().unwrap(), &ea * &eb);
            prop_assert_eq!((&a + &b).eval_at_zero().unwrap(), &ea + &eb);
            prop_assert_eq!(LaurentPoly::one().eval_at_zero().unwrap(), q(1, 1));
        }

        #[test]
        fn add_scaled_shifted_matches_definition(a in arb_laurent(), b in arb_laurent(), c in arb_rational(), k in -4i64..4) {
            let expected = &a + &(LaurentPoly::monomial(c.clone(), k) * b.clone());
            prop_assert_eq!(a.add_scaled_shifted(&c, k, &b), expected);
        }
    }
}
