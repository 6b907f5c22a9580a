//! Rational functions as unreduced numerator/denominator pairs.

use super::poly::MultiPoly;
use super::ring::Ring;
use crate::error::{KzpError, Result};

#[derive(Clone, Debug)]
pub struct RationalFn<R: Ring> {
    num: MultiPoly<R>,
    den: MultiPoly<R>,
}

impl<R: Ring> RationalFn<R> {
    pub fn new(num: MultiPoly<R>, den: MultiPoly<R>) -> Result<Self> {
        if den.is_zero() {
            return Err(KzpError::InvalidParameters("zero denominator".into()));
        }
        if num.layout() != den.layout() {
            return Err(KzpError::LayoutMismatch("numerator and denominator layouts differ".into()));
        }
        Ok(RationalFn { num, den })
    }

    pub fn from_poly(p: MultiPoly<R>) -> Self {
        let one = MultiPoly::one(p.ring().clone(), p.layout());
        RationalFn { num: p, den: one }
    }

    pub fn num(&self) -> &MultiPoly<R> {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly<R> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality by cross-multiplication.
    pub fn equals(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RationalFn { num: self.num.add(&o.num), den: self.den.clone() };
        }
        RationalFn { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFn { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.num.is_zero() {
            return Err(KzpError::InvalidParameters("division by zero rational function".into()));
        }
        Ok(RationalFn { num: self.num.mul(&o.den), den: self.den.mul(&o.num) })
    }

    pub fn derivative(&self, v: usize) -> Self {
        let n = self.num.derivative(v).mul(&self.den).sub(&self.num.mul(&self.den.derivative(v)));
        RationalFn { num: n, den: self.den.mul(&self.den) }
    }

    /// `None` when the denominator vanishes at the point.
    pub fn eval(&self, point: &[R::Elem]) -> Option<R::Elem> {
        let r = self.num.ring().clone();
        let d = self.den.eval(point);
        r.div(&self.num.eval(point), &d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Layout;
    use crate::algebra::ring::PrimeField;

    #[test]
    fn cross_multiplication_equality() {
        let f = PrimeField::new(7).unwrap();
        let l = Layout::z_only(2);
        let x = MultiPoly::z(f, l, 0);
        let y = MultiPoly::z(f, l, 1);
        // (x² − y²)/(x − y) = (x + y)/1
        let a = RationalFn::new(x.pow(2).sub(&y.pow(2)), x.sub(&y)).unwrap();
        let b = RationalFn::from_poly(x.add(&y));
        assert!(a.equals(&b));
        assert!(!a.equals(&RationalFn::from_poly(x.clone())));
    }

    #[test]
    fn quotient_rule() {
        let f = PrimeField::new(101).unwrap();
        let l = Layout::z_only(1);
        let x = MultiPoly::z(f, l, 0);
        // d/dx (1/x) = −1/x²
        let a = RationalFn::new(MultiPoly::one(f, l), x.clone()).unwrap();
        let expect = RationalFn::new(MultiPoly::one(f, l).neg(), x.pow(2)).unwrap();
        assert!(a.derivative(0).equals(&expect));
        assert!(RationalFn::new(x.clone(), MultiPoly::zero(f, l)).is_err());
    }
}
