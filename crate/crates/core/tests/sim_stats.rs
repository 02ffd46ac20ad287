use gsaw_core::arith::{int, rat, to_f64};
use gsaw_core::catalog::{exact_distribution, LadderModel, Lattice};
use gsaw_core::sim::{
    honeycomb_parity_profile, run_walks, step, Bias, LatticeTopology, StepOutcome, Sublattice, TopologyKind,
    WalkState, MAX_DEGREE,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Chi-squared critical value, 2 degrees of freedom, alpha = 0.001.
const CHI2_2_001: f64 = 13.815510557964274;

#[test]
fn first_step_is_uniform_when_unbiased() {
    let t = LatticeTopology::new(TopologyKind::SquareLadderTwoSided);
    let mut state = WalkState::new(&t);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let bias = Bias::unbiased();
    let trials = 1_000_000u64;
    let mut counts = [0u64; 3];
    for _ in 0..trials {
        state.reset(&t);
        assert_eq!(step(&mut state, &t, &bias, &mut rng), StepOutcome::Continued);
        let i = match state.head() {
            (1, 0) => 0,
            (-1, 0) => 1,
            (0, 1) => 2,
            h => panic!("unexpected first step {h:?}"),
        };
        counts[i] += 1;
    }
    let e = trials as f64 / 3.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    assert!(chi2 < CHI2_2_001, "chi2 = {chi2}, counts {counts:?}");
}

fn empirical(t: &LatticeTopology, path: &[(i32, i32)], c: i64, trials: u32) -> Vec<((i32, i32), f64)> {
    let bias = Bias::new(&int(c));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut state = WalkState::new(t);
    let mut tally: Vec<((i32, i32), u32)> = Vec::new();
    for _ in 0..trials {
        state.reset(t);
        for &s in path {
            state.advance(s);
        }
        step(&mut state, t, &bias, &mut rng);
        let h = state.head();
        match tally.iter_mut().find(|(s, _)| *s == h) {
            Some(e) => e.1 += 1,
            None => tally.push((h, 1)),
        }
    }
    tally.sort();
    tally.into_iter().map(|(s, k)| (s, k as f64 / trials as f64)).collect()
}

#[test]
fn attraction_weights_one_contact() {
    // Head at (1, 1) after (0, 0) -> (1, 0) -> (1, 1); only (0, 1) touches the path.
    let t = LatticeTopology::new(TopologyKind::InfiniteSquare);
    let path = [(1, 0), (1, 1)];
    let mut state = WalkState::new(&t);
    for &s in &path {
        state.advance(s);
    }
    let mut cand = [((0, 0), 0usize); MAX_DEGREE];
    let m = state.candidates(&t, &mut cand);
    let mut got = cand[..m].to_vec();
    got.sort();
    assert_eq!(got, vec![((0, 1), 1), ((1, 2), 0), ((2, 1), 0)]);

    let c = 3.0;
    let trials = 300_000;
    let freq = empirical(&t, &path, 3, trials);
    let want = [1.0 / (2.0 + c), c / (2.0 + c)];
    for (s, f) in freq {
        let p = if s == (0, 1) { want[1] } else { want[0] };
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((f - p).abs() < 5.0 * se, "{s:?}: {f} vs {p}");
    }
}

#[test]
fn wall_first_step_prefers_north() {
    let t = LatticeTopology::new(TopologyKind::SquareLadderOneSidedWall);
    let trials = 300_000;
    for c in [2i64, 5] {
        let freq = empirical(&t, &[], c, trials);
        let north = freq.iter().find(|(s, _)| *s == (0, 1)).unwrap().1;
        let p = c as f64 / (1.0 + c as f64);
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((north - p).abs() < 5.0 * se, "C = {c}: {north} vs {p}");
    }
}

#[test]
fn ladder_frequencies_match_exact_values() {
    let walks = 10_000_000;
    let t = LatticeTopology::new(TopologyKind::SquareLadderTwoSided);
    let s = run_walks(&t, &int(1), walks, 314, 16).unwrap();
    let exact = exact_distribution(&LadderModel::unbiased(Lattice::SquareTwoSided), 20)
        .unwrap()
        .dense();
    for (n, p) in exact.iter().enumerate() {
        let p = to_f64(p);
        let se = (p * (1.0 - p) / walks as f64).sqrt();
        assert!((s.frequency(n) - p).abs() <= 5.0 * se, "n = {n}");
    }
}

#[test]
fn biased_ladder_mean_matches_exact() {
    let m = LadderModel::biased(Lattice::SquareTwoSided, rat(5, 2)).unwrap();
    let exact = gsaw_core::catalog::exact_moments(&m, gsaw_core::catalog::Observable::Length).unwrap();
    let t = LatticeTopology::new(TopologyKind::SquareLadderTwoSided);
    let s = run_walks(&t, &rat(5, 2), 400_000, 3, 8).unwrap();
    let se = (to_f64(&exact.variance) / s.walks as f64).sqrt();
    assert!((s.mean() - to_f64(&exact.mean)).abs() < 5.0 * se);
    assert!(!s.bias_extrapolated);
}

#[test]
fn honeycomb_one_mod_four_dominates() {
    let t = LatticeTopology::new(TopologyKind::InfiniteHoneycomb(Sublattice::B));
    let s = run_walks(&t, &int(1), 300_000, 11, 8).unwrap();
    assert_eq!(honeycomb_parity_profile(&s).unwrap().dominant(), 1);
}
