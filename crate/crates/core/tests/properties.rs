use gsaw_core::arith::{fraction_string, int, parse_rational, rat, BigRational, Poly, RatFn};
use gsaw_core::catalog::{exact_distribution, LadderModel, Lattice};
use gsaw_core::oracle::{enumerate, enumerate_model};
use gsaw_core::sim::{Corner, LatticeTopology, TopologyKind};
use num_traits::Zero;
use proptest::prelude::*;

/// Power series of `num / den` by plain long division.
fn long_division(num: &[i64], den: &[i64], n_max: usize) -> Vec<BigRational> {
    let d0 = int(den[0]);
    let mut a: Vec<BigRational> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut acc = num.get(n).map_or_else(BigRational::zero, |&c| int(c));
        for k in 1..=n.min(den.len() - 1) {
            acc -= int(den[k]) * &a[n - k];
        }
        a.push(acc / &d0);
    }
    a
}

fn ladder_kind() -> impl Strategy<Value = TopologyKind> {
    prop_oneof![
        Just(TopologyKind::SquareLadderOneSided),
        Just(TopologyKind::SquareLadderOneSidedWall),
        Just(TopologyKind::SquareLadderTwoSided),
        Just(TopologyKind::TriangularLadderOneSided(Corner::Wide)),
        Just(TopologyKind::TriangularLadderOneSided(Corner::Narrow)),
        Just(TopologyKind::TriangularLadderTwoSided),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_matches_long_division(
        num in prop::collection::vec(-9i64..=9, 1..6),
        mut den in prop::collection::vec(-9i64..=9, 1..6),
    ) {
        if den[0] == 0 {
            den[0] = 1;
        }
        let f = RatFn::new(Poly::from_ints(&num), Poly::from_ints(&den)).unwrap();
        prop_assert_eq!(f.series_coefficients(25).unwrap(), long_division(&num, &den, 25));
    }

    #[test]
    fn fraction_strings_round_trip(n in any::<i64>(), d in 1i64..=i64::MAX) {
        let r = BigRational::new(n.into(), d.into());
        prop_assert_eq!(parse_rational(&fraction_string(&r)).unwrap(), r);
    }

    #[test]
    fn decimals_parse_exactly(whole in 0u32..1000, frac in 0u32..1000) {
        let text = format!("{whole}.{frac:03}");
        let want = int(whole as i64) + rat(frac as i64, 1000);
        prop_assert_eq!(parse_rational(&text).unwrap(), want);
    }

    #[test]
    fn oracle_conserves_mass(kind in ladder_kind(), p in 1i64..=5, q in 1i64..=5, n_max in 0usize..=9) {
        let r = enumerate(&LatticeTopology::new(kind), &rat(p, q), n_max).unwrap();
        prop_assert_eq!(r.total_trapped() + &r.alive_mass, int(1));
        prop_assert!(r.trapped.keys().all(|&(n, _)| n <= n_max));
    }

    #[test]
    fn square_gf_matches_oracle(
        which in 0usize..3, p in 1i64..=4, q in 1i64..=4,
    ) {
        let c = rat(p, q);
        let m = match which {
            0 => LadderModel::biased(Lattice::SquareOneSided, c).unwrap(),
            1 => LadderModel::biased(Lattice::SquareTwoSided, c).unwrap(),
            _ => LadderModel::wall(c).unwrap(),
        };
        let gf = exact_distribution(&m, 11).unwrap().dense();
        prop_assert_eq!(gf, enumerate_model(&m, 11).unwrap().length_probabilities(11));
    }
}
