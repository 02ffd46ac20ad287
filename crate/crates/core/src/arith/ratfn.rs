use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use super::{int, ArithError, BigRational, Poly, Poly2, Result};

/// Which indeterminate to substitute in [`RatFn2::specialize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Mean and variance of a probability generating function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Moments {
    #[serde(serialize_with = "super::ser_fraction")]
    pub mean: BigRational,
    #[serde(serialize_with = "super::ser_fraction")]
    pub variance: BigRational,
}

/// Univariate rational function `num(x) / den(x)`.
///
/// Values are kept in the shape they were built in; [`RatFn::reduced`]
/// cancels the polynomial gcd, and every evaluation goes through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Cancels `gcd(num, den)` and normalises the denominator so that its
    /// constant term is 1 (or, if it vanishes at 0, so that it is monic).
    pub fn reduced(&self) -> RatFn {
        let g = self.num.gcd(&self.den);
        let (mut num, mut den) = if g.is_zero() || g.degree() == Some(0) {
            (self.num.clone(), self.den.clone())
        } else {
            (self.num.div_rem(&g).0, self.den.div_rem(&g).0)
        };
        let d0 = den.coeff(0);
        let k = if d0.is_zero() {
            den.leading_coeff().unwrap().recip()
        } else {
            d0.recip()
        };
        num = num.scale(&k);
        den = den.scale(&k);
        RatFn { num, den }
    }

    pub fn evaluate(&self, at: &BigRational) -> Result<BigRational> {
        let r = self.reduced();
        let d = r.den.eval(at);
        if d.is_zero() {
            return Err(ArithError::Pole(at.to_string()));
        }
        Ok(r.num.eval(at) / d)
    }

    /// Exact Taylor coefficients `a_0..=a_n_max` about the origin.
    ///
    /// With `den = sum d_k x^k`, `d_0 != 0`, the coefficients obey
    /// `d_0 a_n = num_n - sum_{k>=1} d_k a_{n-k}`.
    pub fn series_coefficients(&self, n_max: usize) -> Result<Vec<BigRational>> {
        let f = if self.den.coeff(0).is_zero() {
            self.reduced()
        } else {
            self.clone()
        };
        let d0 = f.den.coeff(0);
        if d0.is_zero() {
            return Err(ArithError::NotExpandable);
        }
        let inv = d0.recip();
        let den: Vec<(usize, BigRational)> = f
            .den
            .terms()
            .filter(|(e, _)| *e > 0)
            .map(|(e, c)| (e as usize, c.clone()))
            .collect();
        let mut out: Vec<BigRational> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut acc = f.num.coeff(n as u32);
            for (k, dk) in &den {
                if *k > n {
                    break;
                }
                acc -= dk * &out[n - k];
            }
            out.push(acc * &inv);
        }
        Ok(out)
    }

    pub fn derivative(&self) -> RatFn {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFn {
            num,
            den: &self.den * &self.den,
        }
    }

    /// Mean `f'(1)` and variance `f''(1) + f'(1) - f'(1)^2` of a probability
    /// generating function. Requires `f(1) = 1` exactly.
    pub fn mean_variance(&self) -> Result<Moments> {
        let one = BigRational::one();
        let r = if self.den.eval(&one).is_zero() {
            self.reduced()
        } else {
            self.clone()
        };
        // f(1 + t) = a0 + a1 t + a2 t^2 + ...  with a1 = f'(1), a2 = f''(1)/2
        let shifted = RatFn {
            num: r.num.shift(&one),
            den: r.den.shift(&one),
        };
        if shifted.den.coeff(0).is_zero() {
            return Err(ArithError::Pole("1".into()));
        }
        let a = shifted.series_coefficients(2)?;
        if !a[0].is_one() {
            return Err(ArithError::NotADistribution(a[0].to_string()));
        }
        let mean = a[1].clone();
        let variance = &a[2] * int(2) + &mean - &mean * &mean;
        Ok(Moments { mean, variance })
    }

    /// Cross-multiplied identity test: `a/b == c/d` iff `a d - b c == 0`.
    pub fn same_function(&self, other: &RatFn) -> bool {
        (&(&self.num * &other.den) - &(&self.den * &other.num)).is_zero()
    }

    pub fn checked_div(&self, rhs: &RatFn) -> Result<RatFn> {
        if rhs.num.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(RatFn {
            num: &self.num * &rhs.den,
            den: &self.den * &rhs.num,
        })
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        RatFn {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}

/// Bivariate rational function `num(x, y) / den(x, y)`.
///
/// No multivariate gcd is attempted. The constant term of the denominator
/// is normalised to 1 whenever it is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn2 {
    num: Poly2,
    den: Poly2,
}

impl RatFn2 {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self> {
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Self { num, den }.normalized())
    }

    pub fn from_poly(p: Poly2) -> Self {
        Self {
            num: p,
            den: Poly2::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(Poly2::constant(c))
    }

    /// Embeds a univariate function of `x`.
    pub fn from_x(f: &RatFn) -> Self {
        Self {
            num: Poly2::from_x(&f.num),
            den: Poly2::from_x(&f.den),
        }
        .normalized()
    }

    /// Cancels common factors when the function does not involve `y`.
    pub fn reduced_in_x(&self) -> Self {
        if self.has_y() {
            return self.clone();
        }
        let one = BigRational::one();
        match self.specialize(Var::Y, &one) {
            Ok(f) => Self::from_x(&f),
            Err(_) => self.clone(),
        }
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    fn normalized(self) -> Self {
        let d0 = self.den.constant_term();
        if d0.is_zero() || d0.is_one() {
            return self;
        }
        let k = d0.recip();
        Self {
            num: self.num.scale(&k),
            den: self.den.scale(&k),
        }
    }

    pub fn has_y(&self) -> bool {
        self.num.has_y() || self.den.has_y()
    }

    /// Restriction to one variable, e.g. `f(x, 1)` for lengths or `f(1, y)`
    /// for widths. The result is gcd-reduced.
    pub fn specialize(&self, var: Var, value: &BigRational) -> Result<RatFn> {
        let (num, den) = match var {
            Var::Y => (self.num.at_y(value), self.den.at_y(value)),
            Var::X => (self.num.at_x(value), self.den.at_x(value)),
        };
        Ok(RatFn::new(num, den)?.reduced())
    }

    /// Exact value at `(x, y)`. Removable singularities are handled by
    /// reducing along each axis in turn.
    pub fn evaluate(&self, x: &BigRational, y: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x, y);
        if !d.is_zero() {
            return Ok(self.num.eval(x, y) / d);
        }
        let pole = || ArithError::Pole(format!("({x}, {y})"));
        if let Ok(f) = self.specialize(Var::Y, y) {
            if let Ok(v) = f.evaluate(x) {
                return Ok(v);
            }
        }
        self.specialize(Var::X, x)
            .map_err(|_| pole())?
            .evaluate(y)
            .map_err(|_| pole())
    }

    /// Coefficient table `a[i][j]` of `x^i y^j`, `i <= i_max`, `j <= j_max`.
    pub fn coefficient_grid(&self, i_max: usize, j_max: usize) -> Result<Vec<Vec<BigRational>>> {
        let d00 = self.den.constant_term();
        if d00.is_zero() {
            return Err(ArithError::NotExpandable);
        }
        let inv = d00.recip();
        let den: Vec<((usize, usize), BigRational)> = self
            .den
            .terms()
            .filter(|((i, j), _)| (*i, *j) != (0, 0))
            .map(|((i, j), c)| ((i as usize, j as usize), c.clone()))
            .collect();
        let mut a = vec![vec![BigRational::zero(); j_max + 1]; i_max + 1];
        for i in 0..=i_max {
            for j in 0..=j_max {
                let mut acc = self.num.coeff(i as u32, j as u32);
                for ((di, dj), c) in &den {
                    if *di <= i && *dj <= j {
                        acc -= c * &a[i - di][j - dj];
                    }
                }
                a[i][j] = acc * &inv;
            }
        }
        Ok(a)
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Result<BigRational> {
        Ok(self.coefficient_grid(i, j)?[i][j].clone())
    }

    pub fn same_function(&self, other: &RatFn2) -> bool {
        (&(&self.num * &other.den) - &(&self.den * &other.num)).is_zero()
    }

    pub fn checked_div(&self, rhs: &RatFn2) -> Result<RatFn2> {
        if rhs.num.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        RatFn2::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// `1 / (1 - self)`-style helper: returns `1 - self`.
    pub fn one_minus(&self) -> RatFn2 {
        &RatFn2::constant(BigRational::one()) - self
    }
}

impl fmt::Display for RatFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl Add for &RatFn2 {
    type Output = RatFn2;
    fn add(self, rhs: &RatFn2) -> RatFn2 {
        if self.den == rhs.den {
            return RatFn2 {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        RatFn2 {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl Neg for &RatFn2 {
    type Output = RatFn2;
    fn neg(self) -> RatFn2 {
        RatFn2 {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RatFn2 {
    type Output = RatFn2;
    fn sub(self, rhs: &RatFn2) -> RatFn2 {
        self + &(-rhs)
    }
}

impl Mul for &RatFn2 {
    type Output = RatFn2;
    fn mul(self, rhs: &RatFn2) -> RatFn2 {
        RatFn2 {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn geometric() -> RatFn {
        RatFn::new(Poly::one(), Poly::from_ints(&[1, -1])).unwrap()
    }

    #[test]
    fn geometric_series() {
        assert_eq!(geometric().series_coefficients(3).unwrap(), vec![int(1); 4]);
    }

    #[test]
    fn non_expandable_denominator() {
        let f = RatFn::new(Poly::one(), Poly::x()).unwrap();
        assert_eq!(f.series_coefficients(3), Err(ArithError::NotExpandable));
        let g = RatFn2::new(Poly2::one(), Poly2::y()).unwrap();
        assert_eq!(g.coefficient(0, 0), Err(ArithError::NotExpandable));
    }

    #[test]
    fn removable_singularity_is_cancelled() {
        // y (y - 2) / ((y - 2)(y^2 - 8y + 8)) at y = 2
        let num = Poly::from_ints(&[0, -2, 1]);
        let den = &Poly::from_ints(&[-2, 1]) * &Poly::from_ints(&[8, -8, 1]);
        let f = RatFn::new(num, den).unwrap();
        assert_eq!(f.evaluate(&int(2)).unwrap(), rat(-1, 2));
        let g = RatFn::new(Poly::one(), Poly::from_ints(&[-1, 1])).unwrap();
        assert!(matches!(g.evaluate(&int(1)), Err(ArithError::Pole(_))));
    }

    #[test]
    fn moments_of_geometric_distribution() {
        // P(n) = (1/2)^(n+1): f = (1/2) / (1 - x/2); mean 1, variance 2
        let f = RatFn::new(Poly::constant(rat(1, 2)), Poly::from_terms([(0, int(1)), (1, rat(-1, 2))])).unwrap();
        let m = f.mean_variance().unwrap();
        assert_eq!(m.mean, int(1));
        assert_eq!(m.variance, int(2));
    }

    #[test]
    fn moments_reject_non_distribution() {
        assert!(matches!(
            geometric().mean_variance(),
            Err(ArithError::Pole(_))
        ));
        let half = RatFn::from_poly(Poly::constant(rat(1, 2)));
        assert!(matches!(
            half.mean_variance(),
            Err(ArithError::NotADistribution(_))
        ));
    }

    #[test]
    fn identity_test_cross_multiplies() {
        let a = RatFn::new(Poly::from_ints(&[2]), Poly::from_ints(&[2, -2])).unwrap();
        assert!(a.same_function(&geometric()));
        assert!(!a.same_function(&RatFn::from_poly(Poly::one())));
    }

    #[test]
    fn bivariate_specialisation_of_constant() {
        let f = RatFn2::constant(int(1));
        let g = f.specialize(Var::Y, &int(1)).unwrap();
        assert_eq!(g.evaluate(&int(5)).unwrap(), int(1));
    }

    #[test]
    fn specialisation_zeroing_denominator_errors() {
        // 1 / (1 - y)  with y := 1
        let f = RatFn2::new(Poly2::one(), &Poly2::one() - &Poly2::y()).unwrap();
        assert_eq!(f.specialize(Var::Y, &int(1)), Err(ArithError::ZeroDenominator));
    }
}
