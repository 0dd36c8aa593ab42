//! Oracles shared by the integration tests. None of them go through the
//! conversion matrix.

#![allow(dead_code)]

use lhv_bell::expression::BellExpression;
use lhv_bell::linalg::Rational;
use lhv_bell::scenario::{PIndex, QIndex, Scenario};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

/// P-vector of a deterministic strategy: A answers `i` (setting 1) or `ip`
/// (setting 2), B answers `j` or `jp`.
pub fn vertex(scenario: Scenario, q: QIndex) -> Vec<i64> {
    scenario
        .p_indices()
        .map(|p: PIndex| {
            let a = if p.s == 1 { q.i } else { q.ip };
            let b = if p.t == 1 { q.j } else { q.jp };
            i64::from(a == p.k && b == p.l)
        })
        .collect()
}

pub fn vertices(scenario: Scenario) -> Vec<Vec<i64>> {
    scenario.q_indices().map(|q| vertex(scenario, q)).collect()
}

/// Value of an expression at each deterministic strategy, in q order.
pub fn vertex_values(expr: &BellExpression) -> Vec<Rational> {
    let dense = expr.dense();
    vertices(expr.scenario())
        .iter()
        .map(|v| {
            dense
                .iter()
                .zip(v)
                .filter(|(_, &x)| x == 1)
                .map(|(c, _)| c.clone())
                .sum()
        })
        .collect()
}

pub fn integer_pattern(expr: &BellExpression) -> Vec<i64> {
    vertex_values(expr)
        .iter()
        .map(|v| {
            assert!(v.is_integer(), "non-integer vertex value {v}");
            v.to_integer().to_i64().unwrap()
        })
        .collect()
}

/// Rank by fraction-free (Bareiss) elimination over `i128`.
pub fn bareiss_rank(mut rows: Vec<Vec<i128>>) -> usize {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..n_cols {
        let Some(p) = (rank..n_rows).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in rank + 1..n_rows {
            for c in col + 1..n_cols {
                rows[r][c] = (rows[r][c] * rows[rank][col] - rows[r][col] * rows[rank][c]) / prev;
            }
            rows[r][col] = 0;
        }
        prev = rows[rank][col];
        rank += 1;
        if rank == n_rows {
            break;
        }
    }
    rank
}

/// Rows of the q-to-P incidence, one per P, built from `vertex`.
pub fn incidence_rows(scenario: Scenario) -> Vec<Vec<i128>> {
    let vs = vertices(scenario);
    (0..scenario.n_p())
        .map(|p| vs.iter().map(|v| i128::from(v[p])).collect())
        .collect()
}

/// Membership in the span of `rows` by a rank comparison.
pub struct SpanOracle {
    rows: Vec<Vec<i128>>,
    rank: usize,
}

impl SpanOracle {
    pub fn new(rows: Vec<Vec<i128>>) -> Self {
        let rank = bareiss_rank(rows.clone());
        Self { rows, rank }
    }

    pub fn contains(&self, target: &[i64]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(target.iter().map(|&x| i128::from(x)).collect());
        bareiss_rank(rows) == self.rank
    }
}

/// Random point of the probability simplex with integer weights; returns
/// the weights and their total.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> (Vec<i64>, i64) {
    let w: Vec<i64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.2) {
                0
            } else {
                rng.gen_range(0..1000)
            }
        })
        .collect();
    let total: i64 = w.iter().sum();
    if total == 0 {
        let mut w = w;
        w[0] = 1;
        return (w, 1);
    }
    (w, total)
}

/// Observable probabilities (times `total`) of an LHV mixture.
pub fn mixture_p(scenario: Scenario, weights: &[i64]) -> Vec<i64> {
    let vs = vertices(scenario);
    let mut p = vec![0i64; scenario.n_p()];
    for (w, v) in weights.iter().zip(&vs) {
        for (pi, vi) in p.iter_mut().zip(v) {
            *pi += w * vi;
        }
    }
    p
}

/// An expression written as integer numerators over a common denominator.
pub struct IntExpr {
    pub num: Vec<i128>,
    pub den: i128,
}

impl IntExpr {
    pub fn new(expr: &BellExpression) -> Self {
        let dense = expr.dense();
        let den = dense
            .iter()
            .fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        let num = dense
            .iter()
            .map(|c| {
                (c * Rational::from_integer(den.clone()))
                    .to_integer()
                    .to_i128()
                    .unwrap()
            })
            .collect();
        Self {
            num,
            den: den.to_i128().unwrap(),
        }
    }

    /// `den * total * value` for P given as integers over `total`.
    pub fn scaled_value(&self, p: &[i64]) -> i128 {
        self.num
            .iter()
            .zip(p)
            .map(|(a, &b)| a * i128::from(b))
            .sum()
    }
}

/// Whether `lo <= value <= hi` for `value = scaled / (den * total)`.
pub fn within(scaled: i128, den: i128, total: i64, lo: &Rational, hi: &Rational) -> bool {
    let value = Rational::new(BigInt::from(scaled), BigInt::from(den * i128::from(total)));
    lo <= &value && &value <= hi
}

pub fn rat_abs(r: Rational) -> Rational {
    if r < Rational::zero() {
        -r
    } else {
        r
    }
}

pub fn repo_root() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn schema_validator(name: &str) -> jsonschema::Validator {
    let path = repo_root()
        .join("docs/schema")
        .join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

pub fn assert_valid(name: &str, value: &serde_json::Value) {
    let v = schema_validator(name);
    let errors: Vec<String> = v.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name} schema violations: {errors:?}");
}
