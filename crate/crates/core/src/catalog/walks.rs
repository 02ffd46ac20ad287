use num_traits::One;

use super::precursors::{biased_precursor_gf, geometric, mono, precursor_gf, Precursor};
use super::{CatalogError, GfEntry, LadderModel, Lattice, Result};
use crate::arith::{int, rat, BigRational, RatFn2};

fn gf(model: &LadderModel, which: Precursor) -> Result<RatFn2> {
    Ok(precursor_gf(model, which)?.expr)
}

/// `a / (1 - b)`
fn resolvent(a: &RatFn2, b: &RatFn2) -> Result<RatFn2> {
    Ok(a.checked_div(&b.one_minus())?)
}

fn entry(name: &str, expr: RatFn2, provenance: &'static str) -> GfEntry {
    GfEntry {
        name: name.to_string(),
        expr,
        provenance,
    }
}

/// Trapping generating function of `model`, composed from its precursors.
///
/// Unbiased square ladders use the unweighted hook/twist families; any
/// other `C`, and the wall variant, go through the weighted families.
pub fn walk_gf(model: &LadderModel) -> Result<GfEntry> {
    if model.is_wall() || (model.lattice().is_square() && !model.is_unbiased()) {
        return biased_walk_gf(model);
    }
    match model.lattice() {
        Lattice::SquareOneSided => {
            let h = gf(model, Precursor::HookOneSided)?;
            let t = gf(model, Precursor::TwistOneSided)?;
            Ok(entry("L*", resolvent(&h, &t)?, "L* = H* / (1 - T*)"))
        }
        Lattice::SquareTwoSided => {
            let one_sided = walk_gf(&LadderModel::unbiased(Lattice::SquareOneSided))?.expr;
            let h = gf(model, Precursor::Hook)?;
            let t = gf(model, Precursor::Twist)?;
            Ok(entry("L", &(&t + &h) * &one_sided, "L = (T + H) L*"))
        }
        lattice => {
            if !model.is_unbiased() {
                return Err(CatalogError::UnsupportedBias(lattice));
            }
            let t = Triangular::new()?;
            Ok(match lattice {
                Lattice::TriangularWide => entry(
                    "W",
                    t.wide,
                    "W = (H^d + H^u) / (1 - T^u - x T^d/(2-x) - x C/(2-x) - x^3/(3(2-x)))",
                ),
                Lattice::TriangularNarrow => entry("N", t.narrow, "N = x W / (2 - x)"),
                _ => entry("S", t.two_sided()?, "first-step case split over W and N"),
            })
        }
    }
}

/// The weighted composition for square ladders, used at every `C`
/// including `C = 1`.
pub fn biased_walk_gf(model: &LadderModel) -> Result<GfEntry> {
    if !model.lattice().is_square() {
        return Err(CatalogError::UnsupportedBias(model.lattice()));
    }
    let c = model.bias();
    let p = |w| biased_precursor_gf(c, w).map(|e| e.expr);
    let wall = resolvent(&p(Precursor::WallHook)?, &p(Precursor::WallTwist)?)?;
    Ok(match (model.lattice(), model.is_wall()) {
        (Lattice::SquareOneSided, true) => entry("L_*", wall, "L_* = H_* / (1 - T_*)"),
        (Lattice::SquareOneSided, false) => entry(
            "L*",
            &(&p(Precursor::TwistOneSided)? * &wall) + &p(Precursor::HookOneSided)?,
            "L* = T* L_* + H*",
        ),
        _ => entry(
            "L",
            &(&p(Precursor::Hook)? + &p(Precursor::Twist)?) * &wall,
            "L = (H + T) L_*",
        ),
    })
}

/// The one-sided triangular pieces, built once and shared by `S`.
struct Triangular {
    tu: RatFn2,
    crooked: RatFn2,
    hu: RatFn2,
    td: RatFn2,
    hd: RatFn2,
    wide: RatFn2,
    narrow: RatFn2,
}

impl Triangular {
    fn new() -> Result<Self> {
        let model = LadderModel::unbiased(Lattice::TriangularWide);
        let tu = gf(&model, Precursor::TwistUp)?;
        let crooked = gf(&model, Precursor::Crooked)?;
        let hu = gf(&model, Precursor::HookUp)?;
        let td = gf(&model, Precursor::TwistDown)?;
        let hd = gf(&model, Precursor::HookDown)?;
        // x / (2 - x)
        let step = geometric(BigRational::one(), 1, 0, int(2), 1, 0);
        // x^3 / (3 (2 - x))
        let cubic = geometric(rat(1, 3), 3, 0, int(2), 1, 0);
        let loop_sum = &(&(&tu + &(&step * &td)) + &(&step * &crooked)) + &cubic;
        let wide = resolvent(&(&hd + &hu), &loop_sum)?.reduced_in_x();
        let narrow = (&step * &wide).reduced_in_x();
        Ok(Self {
            tu,
            crooked,
            hu,
            td,
            hd,
            wide,
            narrow,
        })
    }

    fn two_sided(&self) -> Result<RatFn2> {
        let x = mono(BigRational::one(), 1, 0);
        let half_x = mono(rat(1, 2), 1, 0);
        let (w, n) = (&self.wide, &self.narrow);
        // first step vertical: (2x/3) N + (x/3) W
        let vertical = &(&mono(rat(2, 3), 1, 0) * n) + &(&mono(rat(1, 3), 1, 0) * w);
        // first step along the ladder
        let hooks = &(&(&self.hd + &self.hu) * &x) * n;
        let rest = &(&(&self.td + &self.crooked) + &mono(rat(1, 3), 2, 0)) * n;
        let along = &(&hooks + &(&self.tu * w)) + &rest;
        Ok((&half_x * &(&vertical + &along)).reduced_in_x())
    }
}
