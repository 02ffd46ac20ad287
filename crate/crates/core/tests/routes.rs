use std::collections::BTreeMap;

use gsaw_core::arith::{int, rat, to_f64, BigRational, Var};
use gsaw_core::catalog::{exact_distribution, exact_joint_distribution, exact_moments, walk_gf, LadderModel, Lattice, Observable};
use gsaw_core::oracle::{enumerate, enumerate_from, enumerate_model, marginal, model_topology, Axis};
use gsaw_core::recurrence::{builtin_spec, corrected_spec, eval_recursion, first_disagreement, LadderKind};
use gsaw_core::sim::{Execution, LatticeTopology, TopologyKind};
use num_traits::{One, Zero};

fn models() -> Vec<LadderModel> {
    let mut v: Vec<LadderModel> = Lattice::ALL.iter().map(|&l| LadderModel::unbiased(l)).collect();
    for c in [rat(1, 2), int(2)] {
        v.push(LadderModel::biased(Lattice::SquareOneSided, c.clone()).unwrap());
        v.push(LadderModel::biased(Lattice::SquareTwoSided, c.clone()).unwrap());
        v.push(LadderModel::wall(c).unwrap());
    }
    v
}

#[test]
fn moments_match_truncated_series_sums() {
    for m in models() {
        let p = exact_distribution(&m, 1200).unwrap().dense();
        let (mut s1, mut s2) = (0.0f64, 0.0f64);
        for (n, q) in p.iter().enumerate() {
            let q = to_f64(q);
            s1 += n as f64 * q;
            s2 += (n * n) as f64 * q;
        }
        let exact = exact_moments(&m, Observable::Length).unwrap();
        let mean = to_f64(&exact.mean);
        let var = to_f64(&exact.variance);
        assert!((s1 - mean).abs() < 1e-9 * mean, "{m}: {s1} vs {mean}");
        assert!((s2 - s1 * s1 - var).abs() < 1e-8 * var, "{m}: variance");
    }
}

#[test]
fn joint_distribution_matches_oracle() {
    let one = BigRational::one();
    for m in models().into_iter().filter(|m| m.lattice().is_square()) {
        let d = exact_joint_distribution(&m, 15).unwrap();
        let o = enumerate_model(&m, 15).unwrap();
        assert_eq!(d.joint.as_ref().unwrap(), &o.trapped, "{m}");
        let widths = walk_gf(&m).unwrap().expr.specialize(Var::X, &one).unwrap();
        assert!(widths.evaluate(&one).unwrap() == one);
    }
}

#[test]
fn width_marginal_small_budget() {
    let r = enumerate(&LatticeTopology::new(TopologyKind::SquareLadderOneSided), &int(1), 3).unwrap();
    assert_eq!(marginal(&r, Axis::Width), BTreeMap::from([(1, rat(1, 8))]));
}

#[test]
fn one_sided_start_rows_are_symmetric() {
    let t = LatticeTopology::new(TopologyKind::SquareLadderOneSided);
    for c in [rat(1, 2), int(1), int(2)] {
        let bottom = enumerate_from(&t, (0, 0), &c, 14, Execution::Sequential).unwrap();
        let top = enumerate_from(&t, (0, 1), &c, 14, Execution::Sequential).unwrap();
        assert_eq!(bottom, top);
    }
}

#[test]
fn mass_conservation_grid() {
    for kind in [
        TopologyKind::SquareLadderOneSided,
        TopologyKind::SquareLadderOneSidedWall,
        TopologyKind::SquareLadderTwoSided,
        TopologyKind::TriangularLadderTwoSided,
    ] {
        for c in [rat(1, 2), int(1), int(2)] {
            for n in [6, 10, 14] {
                let r = enumerate(&LatticeTopology::new(kind), &c, n).unwrap();
                assert_eq!(r.total_trapped() + &r.alive_mass, int(1), "{kind} {c} {n}");
            }
        }
    }
}

#[test]
fn recursions_against_generating_functions() {
    for (l, k) in [
        (Lattice::SquareTwoSided, LadderKind::Square),
        (Lattice::TriangularTwoSided, LadderKind::Triangular),
    ] {
        let gf = exact_distribution(&LadderModel::unbiased(l), 80).unwrap().dense();
        assert_eq!(eval_recursion(&corrected_spec(k), 80).unwrap(), gf);
    }
    let gf = exact_distribution(&LadderModel::unbiased(Lattice::SquareTwoSided), 40)
        .unwrap()
        .dense();
    let printed = eval_recursion(&builtin_spec(LadderKind::Square), 40).unwrap();
    assert_eq!(first_disagreement(&printed, &gf), Some(8));
    assert_eq!(printed[8], rat(1, 96));
    assert_eq!(gf[8], rat(1, 32));
}

#[test]
fn oracle_start_and_model_topology() {
    for m in models() {
        let t = model_topology(&m);
        assert!(t.is_ladder());
        let r = enumerate_from(&t, t.start(), m.bias(), 8, Execution::Parallel).unwrap();
        assert!(r.trapped.values().all(|p| !p.is_zero()));
    }
}
