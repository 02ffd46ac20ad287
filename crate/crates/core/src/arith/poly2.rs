use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{pow, BigRational, Poly};

/// Bivariate polynomial in `x` (length marker) and `y` (width marker),
/// stored sparsely as `(i, j) -> coefficient of x^i y^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(BigRational::one(), 0, 1)
    }

    pub fn monomial(c: BigRational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), BigRational)>>(it: I) -> Self {
        let mut terms: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        for (e, c) in it {
            *terms.entry(e).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    /// Embeds a univariate polynomial in `x`.
    pub fn from_x(p: &Poly) -> Self {
        Self::from_terms(p.terms().map(|(e, c)| ((e, 0), c.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigRational {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0, 0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|(i, _)| *i).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0)
    }

    pub fn has_y(&self) -> bool {
        self.terms.keys().any(|(_, j)| *j > 0)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c * k)))
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.terms
            .iter()
            .map(|((i, j), c)| c * pow(x, *i) * pow(y, *j))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Substitutes `y := value`, leaving a polynomial in `x`.
    pub fn at_y(&self, value: &BigRational) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|((i, j), c)| (*i, c * pow(value, *j))),
        )
    }

    /// Substitutes `x := value`, leaving a polynomial in `y` (reported in
    /// the single-variable [`Poly`] type).
    pub fn at_x(&self, value: &BigRational) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .map(|((i, j), c)| (*j, c * pow(value, *i))),
        )
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), c) in self.terms.iter().rev() {
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
            let mut parts = Vec::new();
            if !a.is_one() || (*i == 0 && *j == 0) {
                parts.push(a.to_string());
            }
            match *i {
                0 => {}
                1 => parts.push("x".into()),
                _ => parts.push(format!("x^{i}")),
            }
            match *j {
                0 => {}
                1 => parts.push("y".into()),
                _ => parts.push(format!("y^{j}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        Poly2::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(e, c)| (*e, c.clone())),
        )
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &(-rhs)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut terms: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        for ((ia, ja), ca) in &self.terms {
            for ((ib, jb), cb) in &rhs.terms {
                *terms
                    .entry((ia + ib, ja + jb))
                    .or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly2 { terms }
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Poly2) -> Poly2 {
        &self + &rhs
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Poly2) -> Poly2 {
        &self - &rhs
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Poly2) -> Poly2 {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn substitution_matches_full_evaluation() {
        // x^3 y (x y - 2)
        let p = &Poly2::monomial(int(1), 3, 1) * &(&Poly2::monomial(int(1), 1, 1) - &Poly2::constant(int(2)));
        let a = rat(2, 3);
        let b = rat(5, 7);
        assert_eq!(p.at_y(&b).eval(&a), p.eval(&a, &b));
        assert_eq!(p.at_x(&a).eval(&b), p.eval(&a, &b));
    }

    #[test]
    fn display_orders_terms() {
        let p = &Poly2::monomial(int(-4), 2, 1) + &Poly2::constant(int(8));
        assert_eq!(p.to_string(), "-4*x^2*y + 8");
    }
}
