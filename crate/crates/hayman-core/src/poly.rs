//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are arbitrary-precision rationals indexed by the power of
//! `z`; the zero polynomial is the empty coefficient vector and its degree
//! is `None`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Q>,
}

/// One squarefree factor together with its multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SquarefreeFactor {
    pub factor: Poly,
    pub multiplicity: u32,
}

/// Yun-style squarefree decomposition: `unit * prod factor_i^multiplicity_i`
/// reconstructs the input exactly; the factors are monic, squarefree and
/// pairwise coprime.
#[derive(Debug, Clone, PartialEq)]
pub struct SquarefreeDecomp {
    pub unit: Q,
    pub factors: Vec<SquarefreeFactor>,
}

impl SquarefreeDecomp {
    pub fn reconstruct(&self) -> Poly {
        let mut p = Poly::constant(self.unit.clone());
        for f in &self.factors {
            p = &p * &f.factor.pow(f.multiplicity);
        }
        p
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    /// The variable `z`.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![Q::zero(), Q::one()])
    }

    pub fn constant(c: Q) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Q, power: usize) -> Self {
        let mut coeffs = vec![Q::zero(); power + 1];
        coeffs[power] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| Q::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Coefficient of `z^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` encodes the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Splits off the leading coefficient: `self = lead * monic`.
    pub fn monic(&self) -> (Poly, Q) {
        if self.is_zero() {
            return (Poly::zero(), Q::one());
        }
        let lead = self.leading();
        (self.scale(&lead.recip()), lead)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer(i.into()))
                .collect(),
        )
    }

    /// Exact antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i + 1] = c / Q::from_integer((i as i64 + 1).into());
        }
        Poly::from_coeffs(coeffs)
    }

    /// Horner evaluation at an exact rational point.
    pub fn eval_q(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Composition with `z + s` (shift of the argument).
    pub fn shift(&self, s: &Q) -> Poly {
        let mut acc = Poly::zero();
        let zs = Poly::from_coeffs(vec![s.clone(), Q::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &zs) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let dlead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Poly::zero(), self.clone());
        }
        let qlen = rem.len() - dd;
        let mut quot = vec![Q::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dd] / &dlead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = dc * &c;
                    rem[i + j] = &rem[i + j] - t;
                }
            }
            quot[i] = c;
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Division known to be exact; panics if a remainder appears.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Integer coefficients with content and denominators cleared; used to
    /// keep Euclidean remainder sequences from exploding.
    fn primitive(&self) -> Poly {
        Poly::from_coeffs(
            self.integerized()
                .into_iter()
                .map(Q::from_integer)
                .collect(),
        )
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.  Remainders are
    /// reduced to primitive integer form at every step: a plain
    /// fraction-arithmetic remainder sequence grows coefficient sizes
    /// exponentially in the degree.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic().0
    }

    /// Squarefree radical `p / gcd(p, p')`, monic.
    pub fn radical(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).monic().0
    }

    /// Yun's squarefree decomposition; errors on the zero polynomial.
    pub fn squarefree_decomposition(&self) -> Result<SquarefreeDecomp, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let (p, unit) = self.monic();
        let mut factors = Vec::new();
        if p.is_constant() {
            return Ok(SquarefreeDecomp { unit, factors });
        }
        let dp = p.derivative();
        let g = p.gcd(&dp);
        let mut c = p.exact_div(&g);
        let mut d = &dp.exact_div(&g) - &c.derivative();
        let mut mult = 1u32;
        while !c.is_constant() {
            let f = c.gcd(&d);
            if !f.is_constant() {
                factors.push(SquarefreeFactor {
                    factor: f.clone(),
                    multiplicity: mult,
                });
            }
            c = c.exact_div(&f);
            d = &d.exact_div(&f) - &c.derivative();
            mult += 1;
        }
        Ok(SquarefreeDecomp { unit, factors })
    }

    /// Clears denominators and the integer content; keeps the sign of the
    /// leading coefficient.
    pub fn integerized(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * &lcm / c.denom())
            .collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if content.is_zero() || content.is_one() {
            return ints;
        }
        ints.iter().map(|c| c / &content).collect()
    }

    /// All rational roots with multiplicity, by divisor enumeration of the
    /// integerized trailing and leading coefficients.
    pub fn rational_roots(&self) -> Result<Vec<(Q, u32)>, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let mut p = self.clone();
        let mut roots = Vec::new();
        // Strip the root at the origin first.
        let mut zero_mult = 0u32;
        while !p.is_constant() && p.coeff(0).is_zero() {
            p = p.exact_div(&Poly::var());
            zero_mult += 1;
        }
        if zero_mult > 0 {
            roots.push((Q::zero(), zero_mult));
        }
        if p.is_constant() {
            return Ok(roots);
        }
        let ints = p.integerized();
        let trailing = ints[0].abs();
        let leading = ints.last().unwrap().abs();
        for num in divisors(&trailing) {
            for den in divisors(&leading) {
                for sign in [1i64, -1] {
                    let cand = Q::new(&num * BigInt::from(sign), den.clone());
                    if !p.eval_q(&cand).is_zero() {
                        continue;
                    }
                    let lin = Poly::from_coeffs(vec![-cand.clone(), Q::one()]);
                    let mut mult = 0u32;
                    loop {
                        let (q, r) = p.div_rem(&lin);
                        if !r.is_zero() {
                            break;
                        }
                        p = q;
                        mult += 1;
                    }
                    if mult > 0 {
                        roots.push((cand, mult));
                    }
                }
            }
            if p.is_constant() {
                break;
            }
        }
        Ok(roots)
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Trial division; inputs here come from small catalog/test data.
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut remaining = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= remaining {
        let mut count = 0u32;
        while (&remaining % &d).is_zero() {
            remaining = remaining / &d;
            count += 1;
        }
        if count > 0 {
            primes.push((d.clone(), count));
        }
        d += 1;
    }
    if remaining > BigInt::one() {
        primes.push((remaining, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let base = divs.clone();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk = &pk * &p;
            divs.extend(base.iter().map(|d| d * &pk));
        }
    }
    divs
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let write_coeff = !abs.is_one() || i == 0;
            if write_coeff {
                write!(f, "{}", abs)?;
            }
            if i > 0 {
                if write_coeff {
                    write!(f, "*")?;
                }
                write!(f, "z")?;
                if i > 1 {
                    write!(f, "^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi;

    #[test]
    fn gcd_examples() {
        // (z^2 - 1, z - 1) -> z - 1
        let p = Poly::from_i64(&[-1, 0, 1]);
        let q = Poly::from_i64(&[-1, 1]);
        assert_eq!(p.gcd(&q), q);
        // (z, 1) -> 1
        assert_eq!(Poly::var().gcd(&Poly::one()), Poly::one());
        // (z^3 - 2z^2 + z, z^2 - z) -> z^2 - z
        let p = Poly::from_i64(&[0, 1, -2, 1]);
        let q = Poly::from_i64(&[0, -1, 1]);
        assert_eq!(p.gcd(&q), q);
        // gcd(0, 0) = 0
        assert_eq!(Poly::zero().gcd(&Poly::zero()), Poly::zero());
    }

    #[test]
    fn squarefree_examples() {
        // z^2 + 2z + 1 -> [(z + 1, 2)], unit 1
        let p = Poly::from_i64(&[1, 2, 1]);
        let d = p.squarefree_decomposition().unwrap();
        assert_eq!(d.unit, qi(1));
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].factor, Poly::from_i64(&[1, 1]));
        assert_eq!(d.factors[0].multiplicity, 2);
        // z -> [(z, 1)], unit 1
        let d = Poly::var().squarefree_decomposition().unwrap();
        assert_eq!(d.factors, vec![SquarefreeFactor { factor: Poly::var(), multiplicity: 1 }]);
        // 4z^3 - 4z -> [(z^3 - z, 1)], unit 4
        let p = Poly::from_i64(&[0, -4, 0, 4]);
        let d = p.squarefree_decomposition().unwrap();
        assert_eq!(d.unit, qi(4));
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].factor, Poly::from_i64(&[0, -1, 0, 1]));
        assert_eq!(d.factors[0].multiplicity, 1);
        assert_eq!(d.reconstruct(), p);
        // zero polynomial is rejected
        assert!(Poly::zero().squarefree_decomposition().is_err());
    }

    #[test]
    fn rational_roots_examples() {
        let roots = Poly::from_i64(&[-1, 0, 1]).rational_roots().unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&(qi(1), 1)));
        assert!(roots.contains(&(qi(-1), 1)));

        let roots = Poly::from_i64(&[-3, 2]).rational_roots().unwrap();
        assert_eq!(roots, vec![(Q::new(3.into(), 2.into()), 1)]);

        assert!(Poly::from_i64(&[-2, 0, 1]).rational_roots().unwrap().is_empty());
    }

    #[test]
    fn shift_and_eval() {
        // (z^2)(z -> z + 1) = z^2 + 2z + 1
        let p = Poly::from_i64(&[0, 0, 1]).shift(&qi(1));
        assert_eq!(p, Poly::from_i64(&[1, 2, 1]));
        assert_eq!(p.eval_q(&qi(2)), qi(9));
    }

    #[test]
    fn display_roundtrip_shape() {
        let p = Poly::from_coeffs(vec![qi(4), Q::new((-1).into(), 2.into()), qi(3)]);
        assert_eq!(alloc::format!("{}", p), "3*z^2 - 1/2*z + 4");
    }
}
