//! Published closed forms, kept verbatim as reference data.
//!
//! Nothing here feeds the distributions; these exist to be compared against
//! the compositions in [`super::walk_gf`]. Several are known to be wrong and
//! are reported as such by the errata checks.

use num_traits::One;
use serde::Serialize;

use super::precursors::{geometric, mono, precursor_gf, Precursor};
use super::{LadderModel, Lattice, Observable, Result};
use crate::arith::{int, rat, ser_fraction, BigRational, Moments, Poly, Poly2, RatFn, RatFn2};

fn p2(terms: &[((u32, u32), i64)]) -> Poly2 {
    Poly2::from_terms(terms.iter().map(|&(e, c)| (e, int(c))))
}

fn p1(coeffs: &[i64]) -> Poly {
    Poly::from_ints(coeffs)
}

fn ratfn2(num: Poly2, den: Poly2) -> RatFn2 {
    RatFn2::new(num, den).expect("nonzero denominator")
}

fn ratfn(num: Poly, den: Poly) -> RatFn {
    RatFn::new(num, den).expect("nonzero denominator")
}

/// `x^3 y^2 - 4 x^2 y - 4 x y + 8`
fn square_cubic() -> Poly2 {
    p2(&[((3, 2), 1), ((2, 1), -4), ((1, 1), -4), ((0, 0), 8)])
}

/// `x^2 y - 2`
fn square_quadratic() -> Poly2 {
    p2(&[((2, 1), 1), ((0, 0), -2)])
}

/// `x^4 - 6x^3 + 2x^2 - 30x + 36`
fn triangular_quartic() -> Poly {
    p1(&[36, -30, 2, -6, 1])
}

/// `x^3 y (x y - 2) / ((x^2 y - 2)(x^3 y^2 - 4 x^2 y - 4 x y + 8))`
pub fn one_sided_square() -> RatFn2 {
    ratfn2(
        &p2(&[((3, 1), 1)]) * &p2(&[((1, 1), 1), ((0, 0), -2)]),
        &square_quadratic() * &square_cubic(),
    )
}

fn two_sided_square_with(width_power: u32) -> RatFn2 {
    let q = square_quadratic();
    ratfn2(
        &p2(&[((5, 2), 1)]) * &p2(&[((0, 0), 4), ((3, width_power), -1)]),
        &(&(&q * &q) * &square_cubic()) * &p2(&[((0, 0), 3)]),
    )
}

/// Published two-sided square closed form, numerator `x^5 y^2 (4 - x^3 y)`.
pub fn two_sided_square_stated() -> RatFn2 {
    two_sided_square_with(1)
}

/// The two-sided square form reached at the end of its derivation,
/// numerator `x^5 y^2 (4 - x^3 y^2)`.
pub fn two_sided_square_derived() -> RatFn2 {
    two_sided_square_with(2)
}

/// `x^3 (x - 2) / ((x^2 - 2)(x^3 - 4x^2 - 4x + 8))`
pub fn one_sided_square_length() -> RatFn {
    ratfn(
        &p1(&[0, 0, 0, 1]) * &p1(&[-2, 1]),
        &p1(&[-2, 0, 1]) * &p1(&[8, -4, -4, 1]),
    )
}

/// `y (y - 2) / ((y - 2)(y^2 - 8y + 8))`
pub fn one_sided_square_width() -> RatFn {
    ratfn(&p1(&[0, 1]) * &p1(&[-2, 1]), &p1(&[-2, 1]) * &p1(&[8, -8, 1]))
}

/// `x^5 (4 - x^3) / (3 (x^2 - 2)^2 (x^3 - 4x^2 - 4x + 8))`
pub fn two_sided_square_length() -> RatFn {
    let q = p1(&[-2, 0, 1]);
    ratfn(
        &p1(&[0, 0, 0, 0, 0, 1]) * &p1(&[4, 0, 0, -1]),
        &(&(&q * &q) * &p1(&[8, -4, -4, 1])) * &p1(&[3]),
    )
}

/// As printed: `y^2 (4 - y) / (3 (y - 2)^2 (y^2 - 8y + 8))`.
pub fn two_sided_square_width() -> RatFn {
    let q = p1(&[-2, 1]);
    ratfn(
        &p1(&[0, 0, 1]) * &p1(&[4, -1]),
        &(&(&q * &q) * &p1(&[8, -8, 1])) * &p1(&[3]),
    )
}

/// `x^2 (x + 2)(x - 3)(x - 2) / ((3 - x^2)(x^4 - 6x^3 + 2x^2 - 30x + 36))`
pub fn wide_corner() -> RatFn {
    ratfn(
        &(&(&p1(&[0, 0, 1]) * &p1(&[2, 1])) * &p1(&[-3, 1])) * &p1(&[-2, 1]),
        &p1(&[3, 0, -1]) * &triangular_quartic(),
    )
}

/// `x^3 (x + 2)(x - 3) / ((x^2 - 3)(x^4 - 6x^3 + 2x^2 - 30x + 36))`
pub fn narrow_corner() -> RatFn {
    ratfn(
        &(&p1(&[0, 0, 0, 1]) * &p1(&[2, 1])) * &p1(&[-3, 1]),
        &p1(&[-3, 0, 1]) * &triangular_quartic(),
    )
}

/// `x^4 (2 + x)(x^4 + x^3 - 6x - 12) / (4 (x^2 - 3)^2 (x^4 - 6x^3 + 2x^2 - 30x + 36))`
pub fn two_sided_triangular() -> RatFn {
    let q = p1(&[-3, 0, 1]);
    ratfn(
        &(&p1(&[0, 0, 0, 0, 1]) * &p1(&[2, 1])) * &p1(&[-12, -6, 0, 1, 1]),
        &(&(&q * &q) * &triangular_quartic()) * &p1(&[4]),
    )
}

/// Published wide-corner form, missing the crooked-path term:
/// `W = (H^d + H^u) / (1 - T^u - x T^d/(2-x) - x^3/(3(2-x)))`.
pub fn wide_corner_without_crooked() -> Result<RatFn> {
    let model = LadderModel::unbiased(Lattice::TriangularWide);
    let g = |w| precursor_gf(&model, w).map(|e| e.expr);
    let step = geometric(BigRational::one(), 1, 0, int(2), 1, 0);
    let cubic = geometric(rat(1, 3), 3, 0, int(2), 1, 0);
    let loop_sum = &(&g(Precursor::TwistUp)? + &(&step * &g(Precursor::TwistDown)?)) + &cubic;
    let num = &g(Precursor::HookDown)? + &g(Precursor::HookUp)?;
    let w = num.checked_div(&loop_sum.one_minus())?;
    Ok(w.specialize(crate::arith::Var::Y, &BigRational::one())?)
}

/// Published simplified weighted wall twist, missing
/// the leading `C x^2 y / (C + 1)` term.
pub fn wall_twist_boxed(c: &BigRational) -> RatFn2 {
    let one = BigRational::one();
    let c1 = c + &one;
    let c2 = c * c + &one;
    let two = int(2);
    &mono((&two * &c1 * &c2).recip(), 3, 2) + &geometric((&two * &c1 * &c1).recip(), 4, 3, two, 1, 1)
}

/// `sum c_k C^k` for coefficients listed from the constant term up.
fn in_c(coeffs: &[i64], c: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::from_integer(0.into()), |acc, &k| acc * c + int(k))
}

/// `2C^2 + C + 1`
fn q(c: &BigRational) -> BigRational {
    in_c(&[1, 1, 2], c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrintedMoments {
    pub source: &'static str,
    #[serde(serialize_with = "ser_fraction")]
    pub mean: BigRational,
    #[serde(serialize_with = "ser_fraction")]
    pub variance: BigRational,
}

impl PrintedMoments {
    fn new(source: &'static str, mean: BigRational, variance: BigRational) -> Self {
        Self {
            source,
            mean,
            variance,
        }
    }

    pub fn as_moments(&self) -> Moments {
        Moments {
            mean: self.mean.clone(),
            variance: self.variance.clone(),
        }
    }
}

/// Mean trapping length on the two-sided square ladder as a function of `C`.
pub fn two_sided_mean_in_c(c: &BigRational) -> BigRational {
    int(2) * in_c(&[12, 38, 51, 56, 41, 6], c) / (int(3) * c * (c + int(1)) * q(c))
}

/// Weighted closed forms, evaluated at the model's `C`.
fn weighted(model: &LadderModel, observable: Observable) -> Option<(BigRational, BigRational)> {
    let c = model.bias();
    let c2 = c * c;
    let c1 = c + int(1);
    let qq = q(c) * q(c);
    let cubic = in_c(&[0, 1, 1, 2], c); // 2C^3 + C^2 + C
    let r = match (model.lattice(), model.is_wall(), observable) {
        (Lattice::SquareTwoSided, _, Observable::Length) => (
            two_sided_mean_in_c(c),
            int(2)
                * in_c(&[288, 1242, 2773, 4551, 5822, 5864, 4693, 2975, 1312, 360, 72], c)
                / (int(9) * &c2 * &c1 * &c1 * &qq),
        ),
        (Lattice::SquareTwoSided, _, Observable::Width) => (
            in_c(&[18, 28, 28, 32, 6], c) / in_c(&[0, 3, 3, 6], c),
            int(2) * in_c(&[162, 315, 541, 686, 590, 445, 229, 54, 18], c) / (int(9) * &c2 * &qq),
        ),
        (Lattice::SquareOneSided, false, Observable::Length) => (
            in_c(&[16, 42, 51, 59, 36, 4], c) / in_c(&[0, 2, 4, 6, 4], c),
            in_c(&[256, 1104, 2488, 3998, 4981, 4864, 3769, 2292, 1000, 288, 48], c)
                / (int(4) * &c2 * &c1 * &c1 * &qq),
        ),
        (Lattice::SquareOneSided, false, Observable::Width) => (
            in_c(&[6, 6, 8, 7, 1], c) / &cubic,
            &c1 * in_c(&[36, 34, 84, 62, 59, 33, 9, 3], c) / (&c2 * &qq),
        ),
        (Lattice::SquareOneSided, true, Observable::Length) => (
            in_c(&[8, 14, 12, 14, 4], c) / &cubic,
            int(2) * in_c(&[32, 74, 127, 169, 159, 119, 72, 24, 8], c) / (&c2 * &qq),
        ),
        (Lattice::SquareOneSided, true, Observable::Width) => (
            in_c(&[6, 7, 7, 6, 2], c) / &cubic,
            int(2) * in_c(&[18, 35, 59, 74, 60, 45, 21, 6, 2], c) / (&c2 * &qq),
        ),
        _ => return None,
    };
    Some(r)
}

/// Every published value of the mean and variance for `model`: the
/// unweighted constants (at `C = 1`) and the weighted closed forms.
pub fn printed_moments(model: &LadderModel, observable: Observable) -> Vec<PrintedMoments> {
    let mut out = Vec::new();
    if model.is_unbiased() && !model.is_wall() {
        let constants = match (model.lattice(), observable) {
            (Lattice::SquareOneSided, Observable::Length) => Some((int(13), int(98))),
            (Lattice::SquareOneSided, Observable::Width) => Some((int(7), int(40))),
            (Lattice::SquareTwoSided, Observable::Length) => Some((int(17), int(104))),
            (Lattice::SquareTwoSided, Observable::Width) => Some((rat(28, 3), rat(740, 9))),
            (Lattice::TriangularWide, Observable::Length) => Some((rat(91, 6), rat(793, 4))),
            (Lattice::TriangularNarrow, Observable::Length) => Some((rat(103, 6), rat(801, 4))),
            (Lattice::TriangularTwoSided, Observable::Length) => {
                Some((rat(941, 48), rat(51919, 256)))
            }
            _ => None,
        };
        if let Some((m, v)) = constants {
            out.push(PrintedMoments::new("unweighted closed form", m, v));
        }
    }
    if let Some((m, v)) = weighted(model, observable) {
        out.push(PrintedMoments::new("weighted closed form", m, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_two_sided_forms_differ_only_in_width_power() {
        let a = two_sided_square_stated();
        let b = two_sided_square_derived();
        assert!(!a.same_function(&b));
        let one = BigRational::one();
        assert_eq!(a.evaluate(&one, &one).unwrap(), b.evaluate(&one, &one).unwrap());
    }

    #[test]
    fn printed_triangular_sign() {
        assert_eq!(two_sided_triangular().evaluate(&int(1)).unwrap(), int(-1));
        assert_eq!(wide_corner().evaluate(&int(1)).unwrap(), int(1));
        assert_eq!(narrow_corner().evaluate(&int(1)).unwrap(), int(1));
    }

    #[test]
    fn weighted_closed_forms_at_one() {
        let m = LadderModel::unbiased(Lattice::SquareTwoSided);
        let w = printed_moments(&m, Observable::Length);
        assert_eq!(w.len(), 2);
        assert_eq!(w[1].mean, int(17));
        assert_eq!(w[1].variance, int(104));
        let width = printed_moments(&m, Observable::Width);
        assert_eq!(width[1].mean, rat(28, 3));
        assert_eq!(width[1].variance, rat(380, 9));
        assert_eq!(width[0].variance, rat(740, 9));
    }

    #[test]
    fn displayed_wide_corner_equation_loses_mass() {
        assert_eq!(
            wide_corner_without_crooked().unwrap().evaluate(&int(1)).unwrap(),
            rat(3, 5)
        );
    }
}
