use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{int, to_f64, BigRational};

/// Univariate polynomial with exact rational coefficients, stored sparsely
/// as exponent -> coefficient. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<u32, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn monomial(c: BigRational, exp: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// Builds from ascending integer coefficients, `[a0, a1, ...]`.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(e, &c)| (e as u32, int(c))),
        )
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, BigRational)>>(it: I) -> Self {
        let mut terms: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (e, c) in it {
            *terms.entry(e).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.values().next_back()
    }

    pub fn coeff(&self, exp: u32) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Dense ascending coefficient vector (empty for the zero polynomial).
    pub fn dense(&self) -> Vec<BigRational> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|e| self.coeff(e)).collect(),
        }
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.dense().iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn eval_f64(&self, at: f64) -> f64 {
        self.dense().iter().rev().fold(0.0, |acc, c| acc * at + to_f64(c))
    }

    pub fn eval_complex(&self, at: Complex64) -> Complex64 {
        self.dense()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * at + to_f64(c))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c * k)))
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| **e > 0)
                .map(|(e, c)| (e - 1, c * int(*e as i64))),
        )
    }

    /// `p(x + a)`.
    pub fn shift(&self, a: &BigRational) -> Self {
        // Horner in the polynomial ring: ((c_d)(x+a) + c_{d-1})(x+a) + ...
        let xa = Poly::from_terms([(1, BigRational::one()), (0, a.clone())]);
        let mut acc = Poly::zero();
        for c in self.dense().iter().rev() {
            acc = &(&acc * &xa) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading_coeff().unwrap().clone();
        let mut quotient = BTreeMap::new();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let k = rem.leading_coeff().unwrap() / &lead;
            let shift = rd - dd;
            let sub = Poly::from_terms(divisor.terms.iter().map(|(e, c)| (e + shift, c * &k)));
            rem = &rem - &sub;
            quotient.insert(shift, k);
        }
        (Poly { terms: quotient }, rem)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Sign (-1, 0, 1) of `self(at)`. Integer coefficients take a fraction-free
    /// Horner pass over `q^d p(n/q)`; anything else falls back to [`Poly::eval`].
    pub fn sign_at(&self, at: &BigRational) -> i8 {
        let sign = |v: &BigInt| match v.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        };
        let Some(d) = self.degree() else {
            return 0;
        };
        if !self.terms.values().all(|c| c.is_integer()) {
            let v = self.eval(at);
            return sign(&(v.numer() * v.denom().signum()));
        }
        let (n, q) = (at.numer(), at.denom());
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for e in (0..=d).rev() {
            acc = acc * n + self.coeff(e).numer() * &qpow;
            qpow *= q;
        }
        sign(&acc)
    }

    /// Divides by the positive rational content, leaving coprime integer
    /// coefficients with the original signs.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<(u32, BigInt)> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.numer() * (&lcm / c.denom())))
            .collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |acc, (_, n)| acc.gcd(n));
        Poly {
            terms: ints
                .into_iter()
                .map(|(e, n)| (e, BigRational::from_integer(n / &g)))
                .collect(),
        }
    }

    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn square_free(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Largest exponent `k` with `x^k | self`.
    pub fn x_valuation(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    /// Cauchy bound: every root satisfies `|r| < bound`.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.leading_coeff().expect("zero polynomial").abs();
        let d = self.degree().unwrap();
        let m = self
            .terms
            .iter()
            .filter(|(e, _)| **e < d)
            .map(|(_, c)| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (*e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match *e {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(e, c)| (*e, c.clone())),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut terms: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                *terms.entry(ea + eb).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = &Poly::from_ints(&[1, 2]) - &Poly::from_ints(&[1, 2]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
        assert_eq!(Poly::from_ints(&[0, 0, 3, 0]).degree(), Some(2));
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-2)(x+1) and (x-2)(x+3)
        let a = Poly::from_ints(&[-2, -1, 1]);
        let b = Poly::from_ints(&[-6, 1, 1]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-2, 1]));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = Poly::from_ints(&[8, -4, -4, 1]);
        let b = Poly::from_ints(&[-2, 0, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn shift_evaluates_consistently() {
        let p = Poly::from_ints(&[8, -4, -4, 1]);
        let s = p.shift(&rat(1, 1));
        assert_eq!(s.coeff(0), p.eval(&rat(1, 1)));
        assert_eq!(s.eval(&rat(3, 2)), p.eval(&rat(5, 2)));
    }

    #[test]
    fn square_free_removes_repeated_factor() {
        // (x^2-2)^2 (x-1)
        let a = Poly::from_ints(&[-2, 0, 1]);
        let p = &(&a * &a) * &Poly::from_ints(&[-1, 1]);
        assert_eq!(p.square_free(), (&a * &Poly::from_ints(&[-1, 1])).monic());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(Poly::from_ints(&[8, -4, -4, 1]).to_string(), "x^3 - 4*x^2 - 4*x + 8");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
