//! Normalized rational functions over the rationals.
//!
//! Canonical form: `gcd(numer, denom) = 1` and the denominator is monic,
//! with the unit absorbed into the numerator. Equality is structural
//! equality of normal forms.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::poly::Poly;
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    numer: Poly,
    denom: Poly,
}

/// Result of complex evaluation near a possible pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexValue {
    Value(Complex64),
    NearPole,
}

impl ComplexValue {
    pub fn value(self) -> Option<Complex64> {
        match self {
            ComplexValue::Value(v) => Some(v),
            ComplexValue::NearPole => None,
        }
    }
}

/// Default pole-proximity threshold for numeric evaluation.
pub const EPS_POLE: f64 = 1e-9;

impl RatFunc {
    pub fn new(numer: Poly, denom: Poly) -> Result<RatFunc, AlgebraError> {
        if denom.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if numer.is_zero() {
            return Ok(RatFunc {
                numer: Poly::zero(),
                denom: Poly::one(),
            });
        }
        let g = numer.gcd(&denom);
        let mut n = numer.exact_div(&g);
        let d = denom.exact_div(&g);
        let (d, lead) = d.monic();
        n = n.scale(&lead.recip());
        Ok(RatFunc { numer: n, denom: d })
    }

    pub fn zero() -> RatFunc {
        RatFunc {
            numer: Poly::zero(),
            denom: Poly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_q(Q::one())
    }

    pub fn var() -> RatFunc {
        RatFunc::from_poly(Poly::var())
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc {
            numer: p,
            denom: Poly::one(),
        }
    }

    pub fn from_q(c: Q) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn from_i64(c: i64) -> RatFunc {
        RatFunc::from_q(Q::from_integer(c.into()))
    }

    pub fn numer(&self) -> &Poly {
        &self.numer
    }

    pub fn denom(&self) -> &Poly {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.numer.is_one() && self.denom.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.is_one()
    }

    /// The constant when the function reduces to one, otherwise `None`.
    pub fn constant_value(&self) -> Option<Q> {
        if self.denom.is_one() && self.numer.is_constant() {
            Some(self.numer.coeff(0))
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn recip(&self) -> Result<RatFunc, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        RatFunc::new(self.denom.clone(), self.numer.clone())
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc, AlgebraError> {
        Ok(self * &rhs.recip()?)
    }

    /// Exact quotient-rule derivative.
    pub fn derivative(&self) -> RatFunc {
        let n = &(&self.numer.derivative() * &self.denom)
            - &(&self.numer * &self.denom.derivative());
        RatFunc::new(n, &self.denom * &self.denom).expect("denominator square is nonzero")
    }

    /// Polynomial part plus proper part, `deg numer(proper) < deg denom`.
    pub fn split(&self) -> (Poly, RatFunc) {
        let (q, r) = self.numer.div_rem(&self.denom);
        (
            q,
            RatFunc::new(r, self.denom.clone()).expect("denominator is nonzero"),
        )
    }

    pub fn poly_part(&self) -> Poly {
        self.split().0
    }

    pub fn proper_part(&self) -> RatFunc {
        self.split().1
    }

    /// `(d, eta)` with `f(z) = eta z^d (1 + o(1))` at infinity.
    pub fn degree_at_infinity(&self) -> Result<(i64, Q), AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroFunction);
        }
        let dn = self.numer.degree().unwrap() as i64;
        let dd = self.denom.degree().unwrap() as i64;
        Ok((dn - dd, self.numer.leading() / self.denom.leading()))
    }

    /// Exact evaluation; `None` at a pole.
    pub fn eval_q(&self, x: &Q) -> Option<Q> {
        let d = self.denom.eval_q(x);
        if d.is_zero() {
            return None;
        }
        Some(self.numer.eval_q(x) / d)
    }

    /// Horner evaluation of numerator and denominator in complex doubles,
    /// with a near-pole marker when `|denom(z)| < eps_pole`.
    pub fn eval_complex(&self, z: Complex64, eps_pole: f64) -> ComplexValue {
        let d = eval_poly_c(&self.denom, z);
        if d.norm() < eps_pole {
            return ComplexValue::NearPole;
        }
        ComplexValue::Value(eval_poly_c(&self.numer, z) / d)
    }

    /// Composition with `z + s`.
    pub fn shift(&self, s: &Q) -> RatFunc {
        RatFunc::new(self.numer.shift(s), self.denom.shift(s)).expect("shift keeps denom nonzero")
    }

    /// Integer power; negative exponents invert (error on zero base).
    pub fn powi(&self, e: i64) -> Result<RatFunc, AlgebraError> {
        if e < 0 {
            return self.recip()?.powi(-e);
        }
        let mut acc = RatFunc::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Exact Taylor coefficients at a rational base point, to order `n`
    /// inclusive. Errors if the denominator vanishes there.
    pub fn taylor_q(&self, z0: &Q, n: usize) -> Result<Vec<Q>, AlgebraError> {
        let num = self.numer.shift(z0);
        let den = self.denom.shift(z0);
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(AlgebraError::PoleAtPoint);
        }
        // Power series division: c = num * den^{-1}.
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = num.coeff(k);
            for j in 0..k {
                acc = acc - den.coeff(k - j) * &out[j];
            }
            out.push(acc / &d0);
        }
        Ok(out)
    }
}

fn eval_poly_c(p: &Poly, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in p.coeffs().iter().rev() {
        acc = acc * z + crate::q_to_f64(c);
    }
    acc
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        let n = &(&self.numer * &rhs.denom) + &(&rhs.numer * &self.denom);
        RatFunc::new(n, &self.denom * &rhs.denom).expect("denominators nonzero")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        let n = &(&self.numer * &rhs.denom) - &(&rhs.numer * &self.denom);
        RatFunc::new(n, &self.denom * &rhs.denom).expect("denominators nonzero")
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.numer * &rhs.numer, &self.denom * &rhs.denom)
            .expect("denominators nonzero")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            numer: -&self.numer,
            denom: self.denom.clone(),
        }
    }
}

impl Mul<&Q> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &Q) -> RatFunc {
        if rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            numer: self.numer.scale(rhs),
            denom: self.denom.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "({})/({})", self.numer, self.denom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_i64(n), Poly::from_i64(d)).unwrap()
    }

    #[test]
    fn normalization() {
        // (z^2 - 1)/(z - 1) = z + 1
        assert_eq!(rf(&[-1, 0, 1], &[-1, 1]), RatFunc::from_poly(Poly::from_i64(&[1, 1])));
        // (2z)/4 = z/2 with monic denominator
        let f = rf(&[0, 2], &[4]);
        assert!(f.denom().is_one());
        assert_eq!(f.numer().coeff(1), Q::new(1.into(), 2.into()));
        // (0, z) -> 0/1
        assert_eq!(rf(&[], &[0, 1]), RatFunc::zero());
        // zero denominator rejected
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn arithmetic() {
        let inv_z = rf(&[1], &[0, 1]);
        assert_eq!(&inv_z + &inv_z, rf(&[2], &[0, 1]));
        let a = rf(&[0, 1], &[1, 1]);
        let b = rf(&[1, 1], &[0, 1]);
        assert_eq!(&a * &b, RatFunc::one());
        // 1/(z-1) - 1/(z+1) = 2/(z^2-1)
        assert_eq!(&rf(&[1], &[-1, 1]) - &rf(&[1], &[1, 1]), rf(&[2], &[-1, 0, 1]));
        // division by zero is an error
        assert!(RatFunc::one().div(&RatFunc::zero()).is_err());
    }

    #[test]
    fn derivative() {
        assert_eq!(rf(&[0, 0, 1], &[1]).derivative(), rf(&[0, 2], &[1]));
        assert_eq!(rf(&[1], &[0, 1]).derivative(), rf(&[-1], &[0, 0, 1]));
        // (z/(z+1))' = 1/(z+1)^2
        assert_eq!(rf(&[0, 1], &[1, 1]).derivative(), rf(&[1], &[1, 2, 1]));
    }

    #[test]
    fn split_and_degree() {
        let (p, r) = rf(&[1, 0, 1], &[0, 1]).split();
        assert_eq!(p, Poly::var());
        assert_eq!(r, rf(&[1], &[0, 1]));
        let (p, r) = rf(&[0, 0, 0, 1], &[-1, 1]).split();
        assert_eq!(p, Poly::from_i64(&[1, 1, 1]));
        assert_eq!(r, rf(&[1], &[-1, 1]));

        assert_eq!(rf(&[1, 0, 2], &[0, 1]).degree_at_infinity().unwrap(), (1, qi(2)));
        assert_eq!(rf(&[1], &[0, 0, 1]).degree_at_infinity().unwrap(), (-2, qi(1)));
        assert_eq!(rf(&[0, -1, 0, 3], &[7, 0, 0, 1]).degree_at_infinity().unwrap(), (0, qi(3)));
        assert!(RatFunc::zero().degree_at_infinity().is_err());
    }

    #[test]
    fn complex_eval() {
        let f = rf(&[1], &[0, 1]);
        let v = f.eval_complex(Complex64::new(2.0, 0.0), EPS_POLE).value().unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let g = rf(&[0, 0, 1], &[1]);
        let v = g.eval_complex(Complex64::new(1.0, 1.0), EPS_POLE).value().unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        assert_eq!(
            rf(&[1], &[-1, 1]).eval_complex(Complex64::new(1.0, 0.0), EPS_POLE),
            ComplexValue::NearPole
        );
    }

    #[test]
    fn taylor_at_rational_point() {
        // 1/(1 - z) at 0: all ones.
        let f = rf(&[1], &[1, -1]);
        assert_eq!(f.taylor_q(&qi(0), 4).unwrap(), alloc::vec![qi(1); 5]);
        // pole at the base point is an error
        assert!(rf(&[1], &[0, 1]).taylor_q(&qi(0), 3).is_err());
    }
}
