//! Real root isolation by Sturm sequences and exact bisection, plus a
//! floating-point all-roots solver used only to rule out complex poles that
//! are closer to the origin than the nearest real one.

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::{rat, to_f64, ArithError, BigRational, Poly, RatFn, Result};

/// Half-open isolating interval `(lo, hi]` containing exactly one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.primitive(), p.derivative().primitive()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r.primitive());
    }
    seq
}

fn sign_changes(seq: &[Poly], at: &BigRational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let s = p.sign_at(at);
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of distinct real roots in `(lo, hi]`.
pub fn count_roots(seq: &[Poly], lo: &BigRational, hi: &BigRational) -> usize {
    sign_changes(seq, lo) - sign_changes(seq, hi)
}

/// Isolating intervals for every distinct real root of `p`, in increasing order.
pub fn isolate_real_roots(p: &Poly) -> Vec<RootInterval> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = p.square_free();
    let seq = sturm_sequence(&sf);
    let b = sf.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match count_roots(&seq, &lo, &hi) {
            0 => {}
            1 => out.push(RootInterval { lo, hi }),
            _ => {
                let mid = (&lo + &hi) / rat(2, 1);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Shrinks an isolating interval of the square-free `p` by exact bisection
/// until its width is at most `tol`, returning the midpoint.
pub fn refine_root(p: &Poly, iv: &RootInterval, tol: f64) -> f64 {
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    let shi = p.sign_at(&hi);
    if shi == 0 {
        return to_f64(&hi);
    }
    let two = rat(2, 1);
    while to_f64(&(&hi - &lo)) > tol {
        let mid = (&lo + &hi) / &two;
        match p.sign_at(&mid) {
            0 => return to_f64(&mid),
            s if s == shi => hi = mid,
            _ => lo = mid,
        }
    }
    to_f64(&((lo + hi) / two))
}

/// Distinct real roots of `p` to absolute accuracy ~1e-15.
pub fn real_roots(p: &Poly) -> Vec<f64> {
    let sf = p.square_free().primitive();
    isolate_real_roots(&sf)
        .iter()
        .map(|iv| {
            let scale = to_f64(&iv.hi.abs()).max(to_f64(&iv.lo.abs())).max(1.0);
            refine_root(&sf, iv, 1e-15 * scale)
        })
        .collect()
}

/// All complex roots of `p` (with multiplicity) by Aberth iteration.
pub fn complex_roots(p: &Poly) -> Vec<Complex64> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    let deg = deg as usize;
    if deg == 0 {
        return Vec::new();
    }
    let monic = p.monic();
    let dp = monic.derivative();
    let r = to_f64(&monic.root_bound());
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64;
            Complex64::from_polar(0.5 * r, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let f = monic.eval_complex(z[i]);
            let fp = dp.eval_complex(z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / fp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm());
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Geometric decay rate `1/|rho|` of the coefficients of `f`, where `rho`
/// is the real pole of smallest modulus after gcd cancellation.
pub fn dominant_decay_rate(f: &RatFn) -> Result<f64> {
    let r = f.reduced();
    let den = r.den();
    if den.degree().unwrap_or(0) == 0 {
        return Err(ArithError::NoPole);
    }
    let sf = den.square_free().primitive();
    let intervals = isolate_real_roots(&sf);
    // only the roots either side of the origin can be nearest to it
    let zero = BigRational::zero();
    let candidates = [
        intervals.iter().find(|iv| iv.hi > zero),
        intervals.iter().rev().find(|iv| iv.lo < zero),
    ];
    let real_modulus = candidates
        .into_iter()
        .flatten()
        .map(|iv| {
            let scale = to_f64(&iv.hi.abs()).max(to_f64(&iv.lo.abs())).max(1.0);
            refine_root(&sf, iv, 1e-15 * scale).abs()
        })
        .fold(f64::INFINITY, f64::min);
    if !real_modulus.is_finite() {
        return Err(ArithError::NoRealPole);
    }
    let complex_modulus = complex_roots(&sf)
        .into_iter()
        .filter(|z| z.im.abs() > 1e-7 * z.norm().max(1.0))
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min);
    if complex_modulus < real_modulus * (1.0 - 1e-9) {
        return Err(ArithError::ComplexDominantPole {
            complex_modulus,
            real_modulus,
        });
    }
    Ok(1.0 / real_modulus)
}
