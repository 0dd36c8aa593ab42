mod common;

use lhv_bell::builtins;
use lhv_bell::conversion::ConversionMatrix;
use lhv_bell::enumeration::{enumerate_binary, search_bounded, SearchConfig};
use lhv_bell::expression::BellExpression;
use lhv_bell::lhv::{expand, is_complementary, local_bounds};
use lhv_bell::linalg::{rat, Rational};
use lhv_bell::scenario::{PIndex, Scenario};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn catalog_expressions() -> Vec<BellExpression> {
    let s = Scenario::binary();
    let mut out = vec![
        builtins::e1(),
        builtins::e2(),
        builtins::ch(),
        builtins::eq33(),
        builtins::eq34(),
    ];
    for (c, d, cap) in [(1, 0, 200), (1, 1, 100), (2, 1, 100)] {
        let cfg = SearchConfig::new(s, c, d, cap, false).unwrap();
        let cat = if (c, d) == (1, 0) {
            enumerate_binary(&cfg).unwrap()
        } else {
            search_bounded(&cfg).unwrap()
        };
        out.extend(cat.entries.into_iter().map(|e| e.lambda));
    }
    out
}

#[test]
fn local_mixtures_never_violate_cataloged_bounds() {
    let s = Scenario::binary();
    let m = ConversionMatrix::build(s);
    let exprs = catalog_expressions();
    let checks: Vec<(IntExpr, Rational, Rational)> = exprs
        .iter()
        .map(|e| {
            let (lo, hi) = local_bounds(&expand(e, &m).unwrap());
            (IntExpr::new(e), lo, hi)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let (w, total) = random_weights(&mut rng, s.n_q());
        let p = mixture_p(s, &w);
        for (e, lo, hi) in &checks {
            assert!(within(e.scaled_value(&p), e.den, total, lo, hi));
        }
    }
}

#[test]
fn complementary_pairs_sum_to_one_on_local_tables() {
    let s = Scenario::binary();
    let cat = enumerate_binary(&SearchConfig::new(s, 1, 0, 1000, false).unwrap()).unwrap();
    let mut pairs: Vec<(BellExpression, BellExpression)> = cat
        .pairs
        .iter()
        .map(|[i, j]| {
            (
                cat.entries[*i].lambda.clone(),
                cat.entries[*j].lambda.clone(),
            )
        })
        .collect();
    pairs.push((builtins::e1(), builtins::e2()));
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let (w, total) = random_weights(&mut rng, s.n_q());
        let p: Vec<Rational> = mixture_p(s, &w)
            .into_iter()
            .map(|x| Rational::new(x.into(), total.into()))
            .collect();
        for (a, b) in &pairs {
            let sum = rat_abs(a.evaluate_exact(&p)) + rat_abs(b.evaluate_exact(&p));
            assert_eq!(sum, rat(1));
        }
    }
}

#[test]
fn cataloged_pairs_are_complementary() {
    let s = Scenario::binary();
    let m = ConversionMatrix::build(s);
    let cat = enumerate_binary(&SearchConfig::new(s, 1, 0, 1000, false).unwrap()).unwrap();
    for [i, j] in &cat.pairs {
        let a = expand(&cat.entries[*i].lambda, &m).unwrap();
        let b = expand(&cat.entries[*j].lambda, &m).unwrap();
        assert!(is_complementary(&a, &b));
    }
}

fn random_expression(rng: &mut ChaCha8Rng, s: Scenario) -> BellExpression {
    let terms: Vec<(PIndex, i64)> = s.p_indices().map(|p| (p, rng.gen_range(-3..=3))).collect();
    BellExpression::from_terms(s, terms).unwrap()
}

#[test]
fn expansion_bounds_match_vertex_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in [Scenario::binary(), Scenario::new(2, 3, 2, 2).unwrap()] {
        let m = ConversionMatrix::build(s);
        for _ in 0..200 {
            let e = random_expression(&mut rng, s);
            let values = vertex_values(&e);
            let expansion = expand(&e, &m).unwrap();
            assert_eq!(expansion.coeffs(), values.as_slice());
            let (lo, hi) = local_bounds(&expansion);
            assert_eq!(&lo, values.iter().min().unwrap());
            assert_eq!(&hi, values.iter().max().unwrap());
        }
    }
}

#[test]
fn builtin_patterns() {
    // Coefficient groupings of the expanded expressions over q.
    let e1 = integer_pattern(&builtins::e1());
    let e2 = integer_pattern(&builtins::e2());
    assert!(e1.iter().zip(&e2).all(|(a, b)| a + b == 1));
    let ch = integer_pattern(&builtins::ch());
    assert_eq!(ch, vec![0, 0, 1, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0]);
    let k = integer_pattern(&builtins::eq33());
    assert_eq!(k, ch.iter().map(|x| 2 * x - 1).collect::<Vec<_>>());
    let j = integer_pattern(&builtins::eq34());
    assert_eq!(j, ch.iter().map(|x| 3 * x - 1).collect::<Vec<_>>());
}

fn dense_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 16)
}

proptest! {
    #[test]
    fn expansion_is_linear(a in dense_strategy(), b in dense_strategy(), alpha in -4i64..=4, beta in -4i64..=4) {
        let s = Scenario::binary();
        let m = ConversionMatrix::build(s);
        let to_expr = |v: &[i64]| {
            BellExpression::from_terms(s, s.p_indices().zip(v.iter().copied())).unwrap()
        };
        let (ea, eb) = (to_expr(&a), to_expr(&b));
        let combined = ea.combine(&rat(alpha), &eb, &rat(beta)).unwrap();
        let lhs = expand(&combined, &m).unwrap();
        let qa = expand(&ea, &m).unwrap();
        let qb = expand(&eb, &m).unwrap();
        for ((l, x), y) in lhs.coeffs().iter().zip(qa.coeffs()).zip(qb.coeffs()) {
            prop_assert_eq!(l.clone(), rat(alpha) * x + rat(beta) * y);
        }
    }
}
