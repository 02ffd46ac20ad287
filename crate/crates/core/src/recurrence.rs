//! Inhomogeneous linear recursions for the ladder trapping probabilities.
//!
//! `P_N = sum_k a_k P_{N-k} + g(N)` where `g` has one closed form for even
//! `N` and another for odd `N`, each of the shape
//! `scale * (slope N + intercept) * base^(-(N + shift) / 2)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{int, pow, rat, ser_fraction, BigRational};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RecurrenceError {
    #[error("malformed recursion: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, RecurrenceError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LadderKind {
    Square,
    Triangular,
}

impl std::str::FromStr for LadderKind {
    type Err = RecurrenceError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(LadderKind::Square),
            "triangular" => Ok(LadderKind::Triangular),
            _ => Err(RecurrenceError::Malformed(format!("unknown ladder {s:?}"))),
        }
    }
}

impl std::fmt::Display for LadderKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LadderKind::Square => "square",
            LadderKind::Triangular => "triangular",
        })
    }
}

/// `scale * (slope N + intercept) * base^(-(N + shift) / 2)`, used only for
/// `N` with `N + shift` even.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearPowerTerm {
    #[serde(serialize_with = "ser_fraction")]
    pub scale: BigRational,
    #[serde(serialize_with = "ser_fraction")]
    pub slope: BigRational,
    #[serde(serialize_with = "ser_fraction")]
    pub intercept: BigRational,
    pub base: u32,
    pub shift: u32,
}

impl LinearPowerTerm {
    pub fn eval(&self, n: usize) -> BigRational {
        let e = n as u32 + self.shift;
        debug_assert!(e.is_multiple_of(2), "parity branch used for the wrong parity");
        let lin = &self.slope * int(n as i64) + &self.intercept;
        &self.scale * lin / pow(&int(self.base as i64), e / 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParitySplit {
    pub even: LinearPowerTerm,
    pub odd: LinearPowerTerm,
}

impl ParitySplit {
    pub fn eval(&self, n: usize) -> BigRational {
        if n.is_multiple_of(2) {
            self.even.eval(n)
        } else {
            self.odd.eval(n)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionSpec {
    pub order: usize,
    /// `a_1..=a_order`, the coefficients of `P_{N-1}..P_{N-order}`.
    #[serde(serialize_with = "ser_fractions")]
    pub homogeneous: Vec<BigRational>,
    pub inhomogeneous: ParitySplit,
    #[serde(serialize_with = "ser_fraction_map")]
    pub initial_values: BTreeMap<usize, BigRational>,
    pub start: usize,
}

fn ser_fractions<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

fn ser_fraction_map<S: serde::Serializer>(
    m: &BTreeMap<usize, BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v.to_string())))
}

impl RecursionSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.homogeneous.len() != self.order {
            return Err(RecurrenceError::Malformed(format!(
                "order {} with {} homogeneous coefficients",
                self.order,
                self.homogeneous.len()
            )));
        }
        let expected: Vec<usize> = (self.start..self.start + self.order).collect();
        let got: Vec<usize> = self.initial_values.keys().copied().collect();
        if got != expected {
            return Err(RecurrenceError::Malformed(format!(
                "initial values at {got:?}, expected {expected:?}"
            )));
        }
        for t in [&self.inhomogeneous.even, &self.inhomogeneous.odd] {
            if t.base < 2 {
                return Err(RecurrenceError::Malformed(format!("base {}", t.base)));
            }
        }
        if !self.inhomogeneous.even.shift.is_multiple_of(2) || (self.inhomogeneous.odd.shift % 2) != 1 {
            return Err(RecurrenceError::Malformed(
                "parity shifts do not give integer exponents".into(),
            ));
        }
        Ok(())
    }

    pub fn inhomogeneous_term(&self, n: usize) -> BigRational {
        self.inhomogeneous.eval(n)
    }

    /// Same recursion with both inhomogeneous branches multiplied by `k`.
    pub fn scaled_inhomogeneous(&self, k: &BigRational) -> RecursionSpec {
        let mut s = self.clone();
        s.inhomogeneous.even.scale *= k;
        s.inhomogeneous.odd.scale *= k;
        s
    }
}

fn term(scale: BigRational, slope: BigRational, intercept: BigRational, base: u32, shift: u32) -> LinearPowerTerm {
    LinearPowerTerm {
        scale,
        slope,
        intercept,
        base,
        shift,
    }
}

/// The published recursions, verbatim.
///
/// Square: `P_N = P_{N-1}/2 + P_{N-2}/2 - P_{N-3}/8 + g(N)` with
/// `g = -(N-6) 2^(-(N+4)/2)` (even), `(N-3) 2^(-(N+3)/2)` (odd).
///
/// Triangular: `P_N = 5/6 P_{N-1} - 1/18 P_{N-2} + 1/6 P_{N-3} - 1/36 P_{N-4} + g(N)`
/// with `g = 1/16 (5N/2 + 7) 3^(-(N+2)/2)` (even), `1/16 (3N/2 + 7/2) 3^(-(N+1)/2)` (odd).
pub fn builtin_spec(which: LadderKind) -> RecursionSpec {
    match which {
        LadderKind::Square => RecursionSpec {
            order: 3,
            homogeneous: vec![rat(1, 2), rat(1, 2), rat(-1, 8)],
            inhomogeneous: ParitySplit {
                even: term(int(1), int(-1), int(6), 2, 4),
                odd: term(int(1), int(1), int(-3), 2, 3),
            },
            initial_values: BTreeMap::from([(5, rat(1, 24)), (6, rat(1, 48)), (7, rat(7, 96))]),
            start: 5,
        },
        LadderKind::Triangular => RecursionSpec {
            order: 4,
            homogeneous: vec![rat(5, 6), rat(-1, 18), rat(1, 6), rat(-1, 36)],
            inhomogeneous: ParitySplit {
                even: term(rat(1, 16), rat(5, 2), int(7), 3, 2),
                odd: term(rat(1, 16), rat(3, 2), rat(7, 2), 3, 1),
            },
            initial_values: BTreeMap::from([
                (4, rat(1, 54)),
                (5, rat(11, 324)),
                (6, rat(43, 972)),
                (7, rat(95, 1944)),
            ]),
            start: 4,
        },
    }
}

/// The recursion that the generating functions actually satisfy. The
/// square inhomogeneous term is one third of the published one; the
/// triangular recursion is unchanged.
pub fn corrected_spec(which: LadderKind) -> RecursionSpec {
    let spec = builtin_spec(which);
    match which {
        LadderKind::Square => spec.scaled_inhomogeneous(&rat(1, 3)),
        LadderKind::Triangular => spec,
    }
}

/// `P_0..=P_n_max`, zero below `spec.start`. A budget shorter than the
/// initial values returns the initial values it covers.
pub fn eval_recursion(spec: &RecursionSpec, n_max: usize) -> Result<Vec<BigRational>> {
    spec.validate()?;
    let mut p = vec![BigRational::zero(); n_max + 1];
    for (&n, v) in &spec.initial_values {
        if n <= n_max {
            p[n] = v.clone();
        }
    }
    for n in spec.start + spec.order..=n_max {
        let mut acc = spec.inhomogeneous_term(n);
        for (k, a) in spec.homogeneous.iter().enumerate() {
            acc += a * &p[n - k - 1];
        }
        p[n] = acc;
    }
    Ok(p)
}

/// First index at which `values` departs from `reference`, if any.
pub fn first_disagreement(values: &[BigRational], reference: &[BigRational]) -> Option<usize> {
    values
        .iter()
        .zip(reference)
        .position(|(a, b)| a != b)
}

/// The ratio `(P_N - sum_k a_k P_{N-k}) / g(N)` at `n`, measuring how far
/// a reference sequence is from satisfying `spec`.
pub fn inhomogeneous_ratio(spec: &RecursionSpec, reference: &[BigRational], n: usize) -> Option<BigRational> {
    if n < spec.order || n >= reference.len() {
        return None;
    }
    let mut g = reference[n].clone();
    for (k, a) in spec.homogeneous.iter().enumerate() {
        g -= a * &reference[n - k - 1];
    }
    let printed = spec.inhomogeneous_term(n);
    if printed.is_zero() {
        return if g.is_zero() { Some(BigRational::one()) } else { None };
    }
    Some(g / printed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn shapes() {
        let s = builtin_spec(LadderKind::Square);
        assert_eq!((s.order, s.start), (3, 5));
        let t = builtin_spec(LadderKind::Triangular);
        assert_eq!((t.order, t.start), (4, 4));
        assert!(s.validate().is_ok() && t.validate().is_ok());
    }

    #[test]
    fn square_term_vanishes_at_six() {
        assert_eq!(builtin_spec(LadderKind::Square).inhomogeneous_term(6), int(0));
        assert_eq!(builtin_spec(LadderKind::Square).inhomogeneous_term(8), rat(-2, 64));
    }

    #[test]
    fn short_budget_echoes_initial_values() {
        let p = eval_recursion(&builtin_spec(LadderKind::Square), 7).unwrap();
        assert_eq!(p[..5], vec![int(0); 5][..]);
        assert_eq!(p[5..], [rat(1, 24), rat(1, 48), rat(7, 96)]);
        let q = eval_recursion(&builtin_spec(LadderKind::Triangular), 5).unwrap();
        assert_eq!(q.len(), 6);
        assert_eq!(q[5], rat(11, 324));
    }

    #[test]
    fn sign_patterns() {
        let t = builtin_spec(LadderKind::Triangular);
        assert!((4..=60).all(|n| t.inhomogeneous_term(n).is_positive()));
        let s = builtin_spec(LadderKind::Square);
        for n in 7..=60 {
            let g = s.inhomogeneous_term(n);
            assert_eq!(g.is_positive(), n % 2 == 1, "n = {n}");
        }
    }

    #[test]
    fn malformed_specs_are_rejected() {
        let mut s = builtin_spec(LadderKind::Square);
        s.homogeneous.pop();
        assert!(eval_recursion(&s, 10).is_err());
        let mut t = builtin_spec(LadderKind::Triangular);
        t.initial_values.remove(&5);
        assert!(eval_recursion(&t, 10).is_err());
    }
}
