use num_traits::One;
use serde::Serialize;

use super::{CatalogError, GfEntry, LadderModel, Lattice, Result};
use crate::arith::{int, rat, BigRational, Poly2, RatFn2};

/// Path families whose generating functions compose into the walk
/// generating functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precursor {
    /// `E^n N W^n`, terminating, on the one-sided square ladder.
    HookOneSided,
    /// `E^n N E` on the one-sided square ladder.
    TwistOneSided,
    /// First segment `E^n N W^(n+1)` on the two-sided square ladder.
    Hook,
    /// First segment `E^(n+1) N E` on the two-sided square ladder.
    Twist,
    /// Terminating hook with a phantom occupied column behind the start.
    WallHook,
    /// Twist with a phantom occupied column behind the start.
    WallTwist,
    /// Triangular, from the wide corner: `E^n S_u E`.
    TwistUp,
    /// Triangular, from the wide corner: `E^n S_u N_u`.
    Crooked,
    /// Triangular, from the wide corner: `E^n S_u W^(n+1)`.
    HookUp,
    /// Triangular, from the wide corner: `E^(n+1) S_d E`.
    TwistDown,
    /// Triangular, from the wide corner: `E^(n+1) S_d W^(n+1)`.
    HookDown,
}

impl Precursor {
    pub fn symbol(self) -> &'static str {
        match self {
            Precursor::HookOneSided => "H*",
            Precursor::TwistOneSided => "T*",
            Precursor::Hook => "H",
            Precursor::Twist => "T",
            Precursor::WallHook => "H_*",
            Precursor::WallTwist => "T_*",
            Precursor::TwistUp => "T^u",
            Precursor::Crooked => "C",
            Precursor::HookUp => "H^u",
            Precursor::TwistDown => "T^d",
            Precursor::HookDown => "H^d",
        }
    }

    fn valid_for(self, model: &LadderModel) -> bool {
        use Precursor::*;
        match model.lattice() {
            Lattice::SquareOneSided if model.is_wall() => matches!(self, WallHook | WallTwist),
            Lattice::SquareOneSided => matches!(self, HookOneSided | TwistOneSided),
            Lattice::SquareTwoSided => matches!(self, Hook | Twist),
            _ => matches!(self, TwistUp | Crooked | HookUp | TwistDown | HookDown),
        }
    }
}

/// `c x^i y^j`
pub(crate) fn mono(c: BigRational, i: u32, j: u32) -> RatFn2 {
    RatFn2::from_poly(Poly2::monomial(c, i, j))
}

/// `c x^i y^j / (a - x^di y^dj)`
pub(crate) fn geometric(c: BigRational, i: u32, j: u32, a: BigRational, di: u32, dj: u32) -> RatFn2 {
    let den = &Poly2::constant(a) - &Poly2::monomial(BigRational::one(), di, dj);
    RatFn2::new(Poly2::monomial(c, i, j), den).expect("nonzero denominator")
}

/// The precursor generating function for `model`. Square ladders with
/// `C != 1` (and the wall variant at any `C`) use the self-attraction
/// weighted forms; otherwise the unweighted forms.
pub fn precursor_gf(model: &LadderModel, which: Precursor) -> Result<GfEntry> {
    if !which.valid_for(model) {
        return Err(CatalogError::UnknownPrecursor {
            lattice: model.lattice(),
            which,
        });
    }
    if model.lattice().is_square() {
        if model.is_unbiased() && !model.is_wall() {
            return Ok(unbiased_square(which));
        }
        return biased_precursor_gf(model.bias(), which);
    }
    if !model.is_unbiased() {
        return Err(CatalogError::UnsupportedBias(model.lattice()));
    }
    Ok(triangular(which))
}

fn entry(which: Precursor, expr: RatFn2, provenance: &'static str) -> GfEntry {
    GfEntry {
        name: which.symbol().to_string(),
        expr,
        provenance,
    }
}

fn unbiased_square(which: Precursor) -> GfEntry {
    match which {
        // x^3 y / (8 - 4 x^2 y)
        Precursor::HookOneSided => entry(
            which,
            geometric(rat(1, 4), 3, 1, int(2), 2, 1),
            "hook paths E^n N W^n, probability 2^-(n+2)",
        ),
        // x^2 y / 2 + x^3 y^2 / (8 - 4 x y)
        Precursor::TwistOneSided => entry(
            which,
            &mono(rat(1, 2), 2, 1) + &geometric(rat(1, 4), 3, 2, int(2), 1, 1),
            "twist paths E^n N E, probability 1/2 (n = 0) or 2^-(n+2)",
        ),
        // 2 x^2 y / (6 - 3 x^2 y)
        Precursor::Hook => entry(
            which,
            geometric(rat(2, 3), 2, 1, int(2), 2, 1),
            "two-sided hooks, probability 1/(3 2^n)",
        ),
        // x^3 y^2 / (6 - 3 x y)
        Precursor::Twist => entry(
            which,
            geometric(rat(1, 3), 3, 2, int(2), 1, 1),
            "two-sided twists, probability 1/(3 2^(n+1))",
        ),
        _ => unreachable!("{which:?} is not an unweighted square precursor"),
    }
}

fn triangular(which: Precursor) -> GfEntry {
    match which {
        // x^2 / (9 - 3x)
        Precursor::TwistUp => entry(which, geometric(rat(1, 3), 2, 0, int(3), 1, 0), "probability 3^-(n+2)"),
        // x^2 / (9 - 3x)
        Precursor::Crooked => entry(which, geometric(rat(1, 3), 2, 0, int(3), 1, 0), "probability 3^-(n+2)"),
        // x^2 / (9 - 3x^2)
        Precursor::HookUp => entry(which, geometric(rat(1, 3), 2, 0, int(3), 2, 0), "probability 3^-(n+2)"),
        // x^3 / (18 - 6x)
        Precursor::TwistDown => entry(which, geometric(rat(1, 6), 3, 0, int(3), 1, 0), "probability 1/(2 3^(n+2))"),
        // x^3 / (18 - 6x^2)
        Precursor::HookDown => entry(which, geometric(rat(1, 6), 3, 0, int(3), 2, 0), "probability 1/(2 3^(n+2))"),
        _ => unreachable!("{which:?} is not triangular"),
    }
}

/// Self-attraction weighted precursors of the square ladders, with the
/// weight `c` substituted exactly.
pub fn biased_precursor_gf(c: &BigRational, which: Precursor) -> Result<GfEntry> {
    let one = BigRational::one();
    let c1 = c + &one; // 1 + C
    let c2 = c * c + &one; // 1 + C^2
    let two = int(2);
    let e = match which {
        // C/(1+C) * x^3 y / (4 - 2 x^2 y)
        Precursor::HookOneSided => entry(
            which,
            geometric(c / (&c1 * &two), 3, 1, two.clone(), 2, 1),
            "weighted hook: final turn W taken with probability C/(1+C)",
        ),
        // x^2 y / 2 + x^3 y^2 / ((1+C)(4 - 2 x y))
        Precursor::TwistOneSided => entry(
            which,
            &mono(rat(1, 2), 2, 1) + &geometric((&c1 * &two).recip(), 3, 2, two.clone(), 1, 1),
            "weighted twist: final E taken with probability 1/(1+C)",
        ),
        // C^2 x^3 y / (2(1+C)(1+C^2)) + C x^5 y^2 / (2 (1+C)^2 (2 - x^2 y))
        Precursor::WallHook => entry(
            which,
            &mono(c * c / (&two * &c1 * &c2), 3, 1)
                + &geometric(c / (&two * &c1 * &c1), 5, 2, two.clone(), 2, 1),
            "weighted hook beside a phantom occupied column",
        ),
        // C x^2 y / (C+1) + x^3 y^2 / (2(1+C)(1+C^2)) + x^4 y^3 / (2 (1+C)^2 (2 - x y))
        Precursor::WallTwist => entry(
            which,
            &(&mono(c / &c1, 2, 1) + &mono((&two * &c1 * &c2).recip(), 3, 2))
                + &geometric((&two * &c1 * &c1).recip(), 4, 3, two.clone(), 1, 1),
            "weighted twist beside a phantom occupied column",
        ),
        // x^2 y / 3 + 2 C x^4 y^2 / (3 (1+C) (2 - x^2 y))
        Precursor::Hook => entry(
            which,
            &mono(rat(1, 3), 2, 1) + &geometric(&two * c / (int(3) * &c1), 4, 2, two.clone(), 2, 1),
            "weighted two-sided hook",
        ),
        // 2 x^3 y^2 / (3 (1+C) (2 - x y))
        Precursor::Twist => entry(
            which,
            geometric(&two / (int(3) * &c1), 3, 2, two.clone(), 1, 1),
            "weighted two-sided twist",
        ),
        _ => {
            return Err(CatalogError::UnknownPrecursor {
                lattice: Lattice::TriangularWide,
                which,
            })
        }
    };
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly2;

    fn unbiased(l: Lattice, p: Precursor) -> RatFn2 {
        precursor_gf(&LadderModel::unbiased(l), p).unwrap().expr
    }

    #[test]
    fn hook_matches_closed_form() {
        // x^3 y / (8 - 4 x^2 y)
        let printed = RatFn2::new(
            Poly2::monomial(int(1), 3, 1),
            &Poly2::constant(int(8)) - &Poly2::monomial(int(4), 2, 1),
        )
        .unwrap();
        assert!(unbiased(Lattice::SquareOneSided, Precursor::HookOneSided).same_function(&printed));
        let h = unbiased(Lattice::SquareOneSided, Precursor::HookOneSided);
        assert_eq!(h.coefficient(3, 1).unwrap(), rat(1, 8));
        assert_eq!(h.coefficient(4, 1).unwrap(), int(0));
    }

    #[test]
    fn hook_up_starts_at_one_ninth() {
        let h = unbiased(Lattice::TriangularWide, Precursor::HookUp);
        assert_eq!(h.coefficient(2, 0).unwrap(), rat(1, 9));
    }

    #[test]
    fn biased_reduce_to_unbiased_at_one() {
        for (l, p) in [
            (Lattice::SquareOneSided, Precursor::HookOneSided),
            (Lattice::SquareOneSided, Precursor::TwistOneSided),
            (Lattice::SquareTwoSided, Precursor::Hook),
            (Lattice::SquareTwoSided, Precursor::Twist),
        ] {
            let b = biased_precursor_gf(&int(1), p).unwrap().expr;
            assert!(b.same_function(&unbiased(l, p)), "{p:?}");
        }
    }

    #[test]
    fn invalid_precursors_are_rejected() {
        let m = LadderModel::unbiased(Lattice::SquareTwoSided);
        assert!(matches!(
            precursor_gf(&m, Precursor::Crooked),
            Err(CatalogError::UnknownPrecursor { .. })
        ));
        let t = LadderModel::biased(Lattice::TriangularWide, int(2)).unwrap();
        assert_eq!(
            precursor_gf(&t, Precursor::Crooked).unwrap_err(),
            CatalogError::UnsupportedBias(Lattice::TriangularWide)
        );
        assert!(biased_precursor_gf(&int(2), Precursor::HookUp).is_err());
    }
}
