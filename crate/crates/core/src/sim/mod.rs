//! Monte Carlo growth of self-avoiding walks until trapping.
//!
//! Walks are split over `streams` independent substreams. Substream `k`
//! draws from `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(k)` and
//! runs `walks / streams` walks (the first `walks % streams` substreams run
//! one more). Results are merged in substream order, so the output depends
//! only on `(topology, C, walks, seed, streams)` and never on thread count.

mod topology;
mod walk;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{fraction_string, is_positive, BigRational};

pub use topology::{
    Corner, LatticeTopology, Site, Sublattice, TopologyKind, DEFAULT_BOX_HALF_WIDTH, MAX_DEGREE,
};
pub use walk::{run_one, step, Bias, StepOutcome, WalkState};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("invalid simulation parameters: {0}")]
    InvalidParameters(String),
    #[error("{profile} needs a {expected} summary, got {got}")]
    WrongTopology {
        profile: &'static str,
        expected: &'static str,
        got: String,
    },
}

pub type Result<T> = std::result::Result<T, SimError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Execution {
    Sequential,
    /// Substreams run on the rayon pool; identical output to `Sequential`.
    /// Without the `parallel` feature this runs sequentially.
    #[default]
    Parallel,
}

/// Counts from one substream, or from a merge of several.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Tally {
    walks: u64,
    wall_hits: u64,
    lengths: BTreeMap<usize, u64>,
    widths: BTreeMap<usize, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.walks += other.walks;
        self.wall_hits += other.wall_hits;
        for (k, v) in other.lengths {
            *self.lengths.entry(k).or_default() += v;
        }
        for (k, v) in other.widths {
            *self.widths.entry(k).or_default() += v;
        }
        self
    }
}

fn run_stream(topology: &LatticeTopology, bias: &Bias, seed: u64, stream: u64, walks: u64) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut state = WalkState::new(topology);
    let mut t = Tally {
        walks,
        ..Tally::default()
    };
    for _ in 0..walks {
        match run_one(&mut state, topology, bias, &mut rng) {
            StepOutcome::Trapped => {
                *t.lengths.entry(state.steps()).or_default() += 1;
                *t.widths.entry(state.width()).or_default() += 1;
            }
            _ => t.wall_hits += 1,
        }
    }
    t
}

/// Mean, variance (unbiased sample) and standard deviation of a histogram.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HistStats {
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub stddev: f64,
}

impl HistStats {
    pub fn of(hist: &BTreeMap<usize, u64>) -> Self {
        let count: u64 = hist.values().sum();
        if count == 0 {
            return Self {
                count,
                mean: f64::NAN,
                variance: f64::NAN,
                stddev: f64::NAN,
            };
        }
        let s1: u128 = hist.iter().map(|(&k, &v)| k as u128 * v as u128).sum();
        let s2: u128 = hist.iter().map(|(&k, &v)| (k as u128).pow(2) * v as u128).sum();
        let n = count as f64;
        let mean = s1 as f64 / n;
        let variance = if count > 1 {
            // (s2 - s1^2/n) / (n - 1), computed without cancellation in u128
            let num = (s2 * count as u128) as f64 - (s1 * s1) as f64;
            num / (n * (n - 1.0))
        } else {
            0.0
        };
        Self {
            count,
            mean,
            variance,
            stddev: variance.sqrt(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimSummary {
    pub topology: LatticeTopology,
    pub lattice: String,
    pub c: String,
    pub walks: u64,
    pub seed: u64,
    pub streams: u64,
    pub wall_hits: u64,
    /// Set when a non-unit `C` is applied to a substrate other than a
    /// square ladder, where no exact results exist to compare against.
    pub bias_extrapolated: bool,
    pub length: HistStats,
    pub width: HistStats,
    pub histogram_length: BTreeMap<usize, u64>,
    pub histogram_width: BTreeMap<usize, u64>,
}

impl SimSummary {
    pub fn mean(&self) -> f64 {
        self.length.mean
    }

    pub fn variance(&self) -> f64 {
        self.length.variance
    }

    pub fn stddev(&self) -> f64 {
        self.length.stddev
    }

    /// Fraction of all walks trapped at exactly `n` steps.
    pub fn frequency(&self, n: usize) -> f64 {
        *self.histogram_length.get(&n).unwrap_or(&0) as f64 / self.walks as f64
    }
}

pub fn run_walks(
    topology: &LatticeTopology,
    c: &BigRational,
    walks: u64,
    seed: u64,
    streams: u64,
) -> Result<SimSummary> {
    run_walks_with(topology, c, walks, seed, streams, Execution::default())
}

pub fn run_walks_with(
    topology: &LatticeTopology,
    c: &BigRational,
    walks: u64,
    seed: u64,
    streams: u64,
    execution: Execution,
) -> Result<SimSummary> {
    if walks == 0 || streams == 0 {
        return Err(SimError::InvalidParameters(format!(
            "walks = {walks} and streams = {streams} must both be at least 1"
        )));
    }
    if !is_positive(c) {
        return Err(SimError::InvalidParameters(format!("C must be positive, got {c}")));
    }
    if topology.is_infinite() && topology.box_half_width < 2 {
        return Err(SimError::InvalidParameters(format!(
            "box half-width {} too small",
            topology.box_half_width
        )));
    }
    let bias = Bias::new(c);
    let share = |k: u64| walks / streams + u64::from(k < walks % streams);
    let job = |k: u64| run_stream(topology, &bias, seed, k, share(k));
    let tallies: Vec<Tally> = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..streams).into_par_iter().map(job).collect()
        }
        _ => (0..streams).map(job).collect(),
    };
    let total = tallies.into_iter().fold(Tally::default(), Tally::merge);
    let square_ladder = matches!(
        topology.kind,
        TopologyKind::SquareLadderOneSided
            | TopologyKind::SquareLadderOneSidedWall
            | TopologyKind::SquareLadderTwoSided
    );
    Ok(SimSummary {
        topology: *topology,
        lattice: topology.name(),
        c: fraction_string(c),
        walks: total.walks,
        seed,
        streams,
        wall_hits: total.wall_hits,
        bias_extrapolated: !bias.is_uniform() && !square_ladder,
        length: HistStats::of(&total.lengths),
        width: HistStats::of(&total.widths),
        histogram_length: total.lengths,
        histogram_width: total.widths,
    })
}

/// Trapped-walk mass by residue class of the trapping length.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityProfile {
    pub modulus: usize,
    pub n_min: usize,
    pub n_max: usize,
    /// `mass[r]`: fraction of trapped walks in range with length `= r (mod modulus)`.
    pub mass: Vec<f64>,
    pub counts: Vec<u64>,
}

impl ParityProfile {
    /// Residue class carrying the most mass (the smallest one on ties).
    pub fn dominant(&self) -> usize {
        let mut best = 0;
        for r in 1..self.modulus {
            if self.counts[r] > self.counts[best] {
                best = r;
            }
        }
        best
    }
}

pub fn parity_profile(
    hist: &BTreeMap<usize, u64>,
    modulus: usize,
    n_min: usize,
    n_max: usize,
) -> ParityProfile {
    let mut counts = vec![0u64; modulus];
    for (&n, &v) in hist.range(n_min..=n_max) {
        counts[n % modulus] += v;
    }
    let total: u64 = counts.iter().sum();
    let mass = counts
        .iter()
        .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
        .collect();
    ParityProfile {
        modulus,
        n_min,
        n_max,
        mass,
        counts,
    }
}

/// Length mass modulo 4 over all lengths, for honeycomb runs.
pub fn honeycomb_parity_profile(summary: &SimSummary) -> Result<ParityProfile> {
    if !matches!(summary.topology.kind, TopologyKind::InfiniteHoneycomb(_)) {
        return Err(SimError::WrongTopology {
            profile: "honeycomb parity profile",
            expected: "honeycomb",
            got: summary.lattice.clone(),
        });
    }
    Ok(parity_profile(&summary.histogram_length, 4, 0, usize::MAX))
}
