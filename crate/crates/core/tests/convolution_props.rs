mod common;

use proptest::prelude::*;
use rigidconv::convolution::{identity_check_counts, subspace_k, subspace_l};
use rigidconv::rational::{int, rat};
use rigidconv::{
    mc_rank, middle_convolution, naive_convolution, round_trip_check, Error, FuchsianSystem, MatQ,
    Rational,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn system(n: usize) -> impl Strategy<Value = FuchsianSystem> {
    proptest::collection::vec(proptest::collection::vec(rational(), n * n), 1..=3).prop_map(
        move |data| {
            let points = [0, 1, -1][..data.len()].iter().map(|&q| int(q)).collect();
            let residues = data
                .into_iter()
                .map(|v| MatQ::new(n, n, v).unwrap())
                .collect();
            FuchsianSystem::new(n, points, residues).unwrap()
        },
    )
}

fn lambda() -> impl Strategy<Value = Rational> {
    prop_oneof![
        Just(rat(1, 2)),
        Just(rat(1, 3)),
        Just(rat(-2, 3)),
        Just(rat(1, 5)),
        Just(rat(5, 6))
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identities_hold_on_random_inputs(n in 1usize..=2, seed in any::<u64>(), l in lambda()) {
        let mut rng = common::rng(seed);
        let points = [0, 1, -1];
        let f = common::random_system(&mut rng, n, &points[..1 + (seed % 3) as usize], 2, &[1, 2, 3]);
        let (g, ws) = middle_convolution(&f, &l).unwrap();
        prop_assert_eq!(g.rank(), mc_rank(&f, &l).unwrap());
        prop_assert_eq!(ws.k_basis.len() + ws.l_basis.len() + g.rank(), n * f.points().len());
        for (k, (a, b)) in f.residues().iter().zip(g.residues()).enumerate() {
            let free = Rational::from_integer((n - a.nullity()).into());
            prop_assert_eq!(b.trace(), a.trace() + &l * free, "residue {}", k);
        }
    }

    #[test]
    fn subspaces_are_invariant(f in system(2), l in lambda()) {
        let blocks = naive_convolution(&f, &l).unwrap();
        let spanning: Vec<Vec<Rational>> = subspace_k(&f).into_iter().chain(subspace_l(&f, &l)).collect();
        let rn = 2 * f.points().len();
        if spanning.is_empty() {
            return Ok(());
        }
        let span = MatQ::from_columns(rn, &spanning);
        for b in blocks.residues() {
            for v in &spanning {
                let image = b.mul_vec(v);
                let mut extended = spanning.clone();
                extended.push(image);
                prop_assert_eq!(MatQ::from_columns(rn, &extended).rank(), span.rank());
            }
        }
    }

    #[test]
    fn integer_parameters_are_refused(f in system(1), k in -3i64..=3) {
        prop_assert!(matches!(middle_convolution(&f, &int(k)), Err(Error::IntegerParameter(_))));
    }
}

#[test]
fn round_trip_on_random_irreducible_systems() {
    let lambdas = [rat(1, 5), rat(1, 7), rat(2, 9)];
    let mut rng = common::rng(2024);
    let (mut passed, mut skipped) = (0, 0);
    for i in 0..50 {
        let f = common::random_irreducible_rank_two(&mut rng);
        match round_trip_check(&f, &lambdas[i % 3]) {
            Ok(true) => passed += 1,
            Ok(false) => panic!("round trip failed for system {i}"),
            Err(Error::PreconditionSkipped(_)) => skipped += 1,
            Err(e) => panic!("system {i}: {e}"),
        }
    }
    assert_eq!(passed + skipped, 50);
    assert!(skipped < 5, "{skipped} skipped");
    let (_, violations) = identity_check_counts();
    assert_eq!(violations, 0);
}
