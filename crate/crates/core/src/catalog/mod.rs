//! Generating functions for trapping on two-row ladders.
//!
//! Walk generating functions are always *built* from the precursor
//! (hook/twist/crooked path) generating functions through the structural
//! composition equations. The simplified closed forms that were published
//! for them live in [`printed`] and are used only as reference data.

mod distribution;
pub mod printed;
mod precursors;
mod walks;

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_positive, ArithError, BigRational, RatFn2};

pub use distribution::{
    bias_sweep, decay_rate, exact_distribution, exact_joint_distribution, exact_moments, MomentReport,
    SweepRow, TrappingDistribution,
};
pub use precursors::{biased_precursor_gf, precursor_gf, Precursor};
pub use walks::{biased_walk_gf, walk_gf};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CatalogError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("precursor {which:?} is not defined for {lattice}")]
    UnknownPrecursor { lattice: Lattice, which: Precursor },
    #[error("observable {observable} is not available for {lattice}")]
    UnsupportedObservable {
        lattice: Lattice,
        observable: Observable,
    },
    #[error("no biased generating functions exist for {0}")]
    UnsupportedBias(Lattice),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

pub type Result<T> = std::result::Result<T, CatalogError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lattice {
    SquareOneSided,
    SquareTwoSided,
    /// One-sided triangular ladder, walk started at the wide corner.
    TriangularWide,
    /// One-sided triangular ladder, walk started at the narrow corner.
    TriangularNarrow,
    TriangularTwoSided,
}

impl Lattice {
    pub const ALL: [Lattice; 5] = [
        Lattice::SquareOneSided,
        Lattice::SquareTwoSided,
        Lattice::TriangularWide,
        Lattice::TriangularNarrow,
        Lattice::TriangularTwoSided,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Lattice::SquareOneSided => "square-one-sided",
            Lattice::SquareTwoSided => "square-two-sided",
            Lattice::TriangularWide => "triangular-wide",
            Lattice::TriangularNarrow => "triangular-narrow",
            Lattice::TriangularTwoSided => "triangular-two-sided",
        }
    }

    pub fn is_square(self) -> bool {
        matches!(self, Lattice::SquareOneSided | Lattice::SquareTwoSided)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Lattice {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self> {
        Lattice::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| CatalogError::InvalidModel(format!("unknown lattice {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    Length,
    Width,
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Observable::Length => "length",
            Observable::Width => "width",
        })
    }
}

/// A ladder lattice together with the self-attraction weight `C`
/// (`C = 1` is the unbiased walk) and, for the one-sided square ladder,
/// the choice of a phantom occupied column behind the start.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderModel {
    lattice: Lattice,
    #[serde(serialize_with = "crate::arith::ser_fraction")]
    bias: BigRational,
    wall: bool,
}

impl LadderModel {
    pub fn new(lattice: Lattice, bias: BigRational, wall: bool) -> Result<Self> {
        if !is_positive(&bias) {
            return Err(CatalogError::InvalidModel(format!(
                "bias C must be positive, got {bias}"
            )));
        }
        if wall && lattice != Lattice::SquareOneSided {
            return Err(CatalogError::InvalidModel(format!(
                "the phantom-wall variant only exists for {}",
                Lattice::SquareOneSided
            )));
        }
        Ok(Self {
            lattice,
            bias,
            wall,
        })
    }

    pub fn unbiased(lattice: Lattice) -> Self {
        Self {
            lattice,
            bias: BigRational::one(),
            wall: false,
        }
    }

    pub fn biased(lattice: Lattice, bias: BigRational) -> Result<Self> {
        Self::new(lattice, bias, false)
    }

    /// The one-sided square ladder with a phantom occupied column.
    pub fn wall(bias: BigRational) -> Result<Self> {
        Self::new(Lattice::SquareOneSided, bias, true)
    }

    /// Parses CLI model names; `square-one-sided-wall` selects the
    /// phantom-wall variant.
    pub fn parse(name: &str, bias: BigRational) -> Result<Self> {
        match name.strip_suffix("-wall") {
            Some(base) if base == Lattice::SquareOneSided.as_str() => Self::wall(bias),
            _ => match name.parse() {
                Ok(l) => Self::new(l, bias, false),
                Err(_) => {
                    let names: Vec<&str> = Lattice::ALL.iter().map(|l| l.as_str()).collect();
                    Err(CatalogError::InvalidModel(format!(
                        "unknown model {name:?}; expected one of {}, square-one-sided-wall",
                        names.join(", ")
                    )))
                }
            },
        }
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn bias(&self) -> &BigRational {
        &self.bias
    }

    pub fn is_wall(&self) -> bool {
        self.wall
    }

    pub fn is_unbiased(&self) -> bool {
        self.bias.is_one()
    }

    pub fn name(&self) -> String {
        if self.wall {
            format!("{}-wall", self.lattice)
        } else {
            self.lattice.to_string()
        }
    }
}

impl fmt::Display for LadderModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (C = {})", self.name(), self.bias)
    }
}

/// One generating function of the catalog.
#[derive(Clone, Debug)]
pub struct GfEntry {
    pub name: String,
    pub expr: RatFn2,
    pub provenance: &'static str,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn model_invariants() {
        assert!(LadderModel::new(Lattice::SquareTwoSided, int(0), false).is_err());
        assert!(LadderModel::new(Lattice::SquareTwoSided, rat(-1, 2), false).is_err());
        assert!(LadderModel::new(Lattice::SquareTwoSided, int(1), true).is_err());
        assert!(LadderModel::wall(rat(1, 2)).is_ok());
    }

    #[test]
    fn model_names_parse() {
        for l in Lattice::ALL {
            assert_eq!(LadderModel::parse(l.as_str(), int(1)).unwrap().lattice(), l);
        }
        let w = LadderModel::parse("square-one-sided-wall", int(2)).unwrap();
        assert!(w.is_wall());
        assert_eq!(w.name(), "square-one-sided-wall");
        assert!(LadderModel::parse("hexagonal", int(1)).is_err());
    }
}
