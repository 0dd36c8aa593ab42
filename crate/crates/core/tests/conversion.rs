mod common;

use lhv_bell::conversion::{verify_rank_formula, ConstraintMatrix, ConversionMatrix};
use lhv_bell::linalg::{rat, Rational};
use lhv_bell::scenario::Scenario;
use proptest::prelude::*;

use common::{bareiss_rank, incidence_rows, vertex};

#[test]
fn binary_table_matches_golden() {
    let m = ConversionMatrix::build(Scenario::binary());
    assert_eq!(m.p_to_q_table(), include_str!("golden/appendix_a.txt"));
}

#[test]
fn columns_are_deterministic_strategies() {
    for spec in ["2,2,2,2", "2,3,2,2", "3,1,2,4", "1,1,1,1"] {
        let s: Scenario = spec.parse().unwrap();
        let m = ConversionMatrix::build(s);
        for (c, q) in s.q_indices().enumerate() {
            let col: Vec<i64> = m.column(c).into_iter().map(i64::from).collect();
            assert_eq!(col, vertex(s, q), "scenario {spec}, column {c}");
        }
    }
}

#[test]
fn named_ranks() {
    for (spec, rank) in [
        ("2,2,2,2", 9),
        ("2,3,2,2", 12),
        ("2,3,2,3", 16),
        ("3,3,3,3", 25),
    ] {
        let r = verify_rank_formula(spec.parse().unwrap()).unwrap();
        assert_eq!(r.computed_rank, rank, "{spec}");
        assert!(r.agrees);
    }
}

#[test]
fn rank_sweep_against_independent_elimination() {
    for m in 1..=4 {
        for mp in 1..=4 {
            for n in 1..=4 {
                for np in 1..=4 {
                    let s = Scenario::new(m, mp, n, np).unwrap();
                    let r = verify_rank_formula(s).unwrap();
                    assert!(
                        r.agrees,
                        "{s}: rank {} vs {}",
                        r.computed_rank, r.predicted_n_i
                    );
                    if m * mp * n * np <= 64 {
                        assert_eq!(bareiss_rank(incidence_rows(s)), r.computed_rank, "{s}");
                    }
                    let c = ConstraintMatrix::build(s);
                    assert_eq!(c.rank(), s.n_c(), "{s}");
                    assert_eq!(c.rank() + r.computed_rank, s.n_p(), "{s}");
                }
            }
        }
    }
}

#[test]
fn size_guard_rejects_huge_scenarios() {
    let s = Scenario::new(60, 60, 60, 60).unwrap();
    assert!(matches!(
        verify_rank_formula(s),
        Err(lhv_bell::Error::Size(_))
    ));
}

fn scenario_strategy() -> impl Strategy<Value = Scenario> {
    (1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3)
        .prop_map(|(a, b, c, d)| Scenario::new(a, b, c, d).unwrap())
}

proptest! {
    #[test]
    fn local_tables_satisfy_every_constraint(
        s in scenario_strategy(),
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = ConversionMatrix::build(s);
        let w: Vec<i64> = (0..s.n_q()).map(|_| rng.gen_range(1..50)).collect();
        let total: i64 = w.iter().sum();
        let q: Vec<Rational> = w.iter().map(|&x| Rational::new(x.into(), total.into())).collect();
        let p = m.apply(&q);
        let c = ConstraintMatrix::build(s);
        let got = c.evaluate(&p);
        let want: Vec<Rational> = c.expected_values().into_iter().map(rat).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn every_column_has_one_entry_per_setting_pair(s in scenario_strategy()) {
        let m = ConversionMatrix::build(s);
        for c in 0..m.n_cols() {
            prop_assert_eq!(m.column(c).iter().map(|&x| u32::from(x)).sum::<u32>(), 4);
        }
    }
}
