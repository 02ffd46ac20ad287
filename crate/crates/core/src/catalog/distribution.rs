use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::printed::{printed_moments, PrintedMoments};
use super::{walk_gf, CatalogError, LadderModel, Observable, Result};
use crate::arith::{dominant_decay_rate, ser_fraction, BigRational, Moments, RatFn, Var};

/// Exact trapping probabilities up to a step budget.
///
/// `entries` holds only nonzero probabilities. `residual_mass` is the
/// probability of not having trapped within `n_max` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrappingDistribution {
    pub n_max: usize,
    pub entries: BTreeMap<usize, BigRational>,
    /// `(length, width) -> probability`, when widths are available.
    pub joint: Option<BTreeMap<(usize, usize), BigRational>>,
    pub residual_mass: BigRational,
}

impl TrappingDistribution {
    pub fn from_coefficients(coeffs: &[BigRational]) -> Self {
        let entries: BTreeMap<usize, BigRational> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(n, p)| (n, p.clone()))
            .collect();
        let total = entries
            .values()
            .fold(BigRational::zero(), |acc, p| acc + p);
        Self {
            n_max: coeffs.len().saturating_sub(1),
            entries,
            joint: None,
            residual_mass: BigRational::one() - total,
        }
    }

    pub fn probability(&self, n: usize) -> BigRational {
        self.entries.get(&n).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Dense list `P_0..=P_n_max`.
    pub fn dense(&self) -> Vec<BigRational> {
        (0..=self.n_max).map(|n| self.probability(n)).collect()
    }
}

fn length_gf(model: &LadderModel) -> Result<RatFn> {
    Ok(walk_gf(model)?.expr.specialize(Var::Y, &BigRational::one())?)
}

fn width_gf(model: &LadderModel) -> Result<RatFn> {
    if !model.lattice().is_square() {
        return Err(CatalogError::UnsupportedObservable {
            lattice: model.lattice(),
            observable: Observable::Width,
        });
    }
    Ok(walk_gf(model)?.expr.specialize(Var::X, &BigRational::one())?)
}

/// Trapping-length distribution read off the composed generating function.
pub fn exact_distribution(model: &LadderModel, n_max: usize) -> Result<TrappingDistribution> {
    let coeffs = length_gf(model)?.series_coefficients(n_max)?;
    Ok(TrappingDistribution::from_coefficients(&coeffs))
}

/// As [`exact_distribution`], with the joint `(length, width)` table filled
/// in. Square ladders only.
pub fn exact_joint_distribution(model: &LadderModel, n_max: usize) -> Result<TrappingDistribution> {
    width_gf(model)?;
    let grid = walk_gf(model)?.expr.coefficient_grid(n_max, n_max)?;
    let mut joint = BTreeMap::new();
    let mut lengths = vec![BigRational::zero(); n_max + 1];
    for (n, row) in grid.into_iter().enumerate() {
        for (w, p) in row.into_iter().enumerate() {
            if !p.is_zero() {
                lengths[n] += &p;
                joint.insert((n, w), p);
            }
        }
    }
    let mut d = TrappingDistribution::from_coefficients(&lengths);
    d.joint = Some(joint);
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomentReport {
    pub observable: Observable,
    #[serde(serialize_with = "ser_fraction")]
    pub mean: BigRational,
    #[serde(serialize_with = "ser_fraction")]
    pub variance: BigRational,
    /// Published values for the same quantity, if any.
    pub printed: Vec<PrintedMoments>,
}

impl MomentReport {
    pub fn moments(&self) -> Moments {
        Moments {
            mean: self.mean.clone(),
            variance: self.variance.clone(),
        }
    }
}

pub fn exact_moments(model: &LadderModel, observable: Observable) -> Result<MomentReport> {
    let f = match observable {
        Observable::Length => length_gf(model)?,
        Observable::Width => width_gf(model)?,
    };
    let m = f.mean_variance()?;
    Ok(MomentReport {
        observable,
        mean: m.mean,
        variance: m.variance,
        printed: printed_moments(model, observable),
    })
}

/// Geometric decay rate of the trapping-length tail.
pub fn decay_rate(model: &LadderModel) -> Result<f64> {
    Ok(dominant_decay_rate(&length_gf(model)?)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(serialize_with = "ser_fraction")]
    pub c: BigRational,
    #[serde(serialize_with = "ser_fraction")]
    pub mean: BigRational,
    pub decay: f64,
}

/// Mean trapping length and tail decay rate of `model` at each `C`.
pub fn bias_sweep(model: &LadderModel, c_values: &[BigRational]) -> Result<Vec<SweepRow>> {
    let row = |c: &BigRational| {
        let m = LadderModel::new(model.lattice(), c.clone(), model.is_wall())?;
        let f = length_gf(&m)?;
        Ok(SweepRow {
            c: c.clone(),
            mean: f.mean_variance()?.mean,
            decay: dominant_decay_rate(&f)?,
        })
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        c_values.par_iter().map(row).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        c_values.iter().map(row).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::catalog::Lattice;

    #[test]
    fn two_sided_square_initial_values() {
        let d = exact_distribution(&LadderModel::unbiased(Lattice::SquareTwoSided), 7).unwrap();
        assert_eq!(d.entries.len(), 3);
        assert_eq!(d.probability(5), rat(1, 24));
        assert_eq!(d.probability(6), rat(1, 48));
        assert_eq!(d.probability(7), rat(7, 96));
        assert_eq!(d.residual_mass, int(1) - rat(1, 24) - rat(1, 48) - rat(7, 96));
    }

    #[test]
    fn empty_budget() {
        let d = exact_distribution(&LadderModel::unbiased(Lattice::TriangularWide), 0).unwrap();
        assert!(d.entries.is_empty());
        assert_eq!(d.residual_mass, int(1));
    }

    #[test]
    fn joint_marginal_matches_length_distribution() {
        let m = LadderModel::biased(Lattice::SquareTwoSided, rat(1, 2)).unwrap();
        let j = exact_joint_distribution(&m, 12).unwrap();
        assert_eq!(j.entries, exact_distribution(&m, 12).unwrap().entries);
    }

    #[test]
    fn width_rejected_on_triangular() {
        let m = LadderModel::unbiased(Lattice::TriangularTwoSided);
        assert!(matches!(
            exact_moments(&m, Observable::Width),
            Err(CatalogError::UnsupportedObservable { .. })
        ));
    }

    #[test]
    fn sweep_reproduces_unbiased_mean() {
        let m = LadderModel::unbiased(Lattice::SquareTwoSided);
        let rows = bias_sweep(&m, &[int(1)]).unwrap();
        assert_eq!(rows[0].mean, int(17));
        assert!((rows[0].decay - (std::f64::consts::PI / 7.0).cos()).abs() < 1e-12);
    }
}
