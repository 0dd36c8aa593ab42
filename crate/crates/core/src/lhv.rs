//! Bell expressions rewritten over the LHV joint probabilities.
//!
//! Substituting `P = M q` turns a Bell expression into a linear form over
//! the q-simplex. The extreme coefficients of that form are its exact local
//! bounds, and two forms whose coefficients are nonnegative and add up to
//! one everywhere give a local equality `|E1| + |E2| = 1`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::conversion::ConversionMatrix;
use crate::error::{Error, Result};
use crate::expression::BellExpression;
use crate::linalg::Rational;
use crate::scenario::Scenario;

/// Coefficients of a Bell expression over the `N_Q` LHV probabilities,
/// together with its nonnegative bounds `c` and `d` (`-d <= B <= c`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    scenario: Scenario,
    coeffs: Vec<Rational>,
    c: Rational,
    d: Rational,
}

impl QExpansion {
    pub fn from_coeffs(scenario: Scenario, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != scenario.n_q() {
            return Err(Error::Contract(format!(
                "expansion needs {} coefficients, got {}",
                scenario.n_q(),
                coeffs.len()
            )));
        }
        let zero = Rational::zero();
        let max = coeffs.iter().max().cloned().unwrap_or_default();
        let min = coeffs.iter().min().cloned().unwrap_or_default();
        Ok(Self {
            scenario,
            c: max.max(zero.clone()),
            d: (-min).max(zero),
            coeffs,
        })
    }

    pub fn from_ints(scenario: Scenario, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(
            scenario,
            coeffs.iter().map(|&x| crate::linalg::rat(x)).collect(),
        )
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    /// Exact value on an LHV distribution.
    pub fn evaluate(&self, q: &[Rational]) -> Rational {
        self.coeffs.iter().zip(q).map(|(a, b)| a * b).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|x| !x.is_negative())
    }
}

/// `coeffs = lambda · M`.
pub fn expand(expr: &BellExpression, m: &ConversionMatrix) -> Result<QExpansion> {
    if expr.scenario() != m.scenario() {
        return Err(Error::Contract(format!(
            "expression scenario {} does not match matrix scenario {}",
            expr.scenario(),
            m.scenario()
        )));
    }
    let lambda = expr.dense();
    let mut coeffs = vec![Rational::zero(); m.n_cols()];
    for (l, row) in lambda.iter().zip(m.rows()) {
        if l.is_zero() {
            continue;
        }
        for (c, &e) in coeffs.iter_mut().zip(row) {
            if e == 1 {
                *c += l;
            }
        }
    }
    QExpansion::from_coeffs(expr.scenario(), coeffs)
}

/// Exact minimum and maximum of the expansion over the q-simplex.
///
/// A linear form on a simplex is extremal at a vertex, and the vertices are
/// the deterministic strategies, so the bounds are the extreme coefficients.
pub fn local_bounds(expansion: &QExpansion) -> (Rational, Rational) {
    let lower = expansion.coeffs.iter().min().cloned().unwrap_or_default();
    let upper = expansion.coeffs.iter().max().cloned().unwrap_or_default();
    (lower, upper)
}

/// True iff both expansions are nonnegative and add up to the all-ones
/// vector, so that `|E1| + |E2| = 1` for every LHV model.
pub fn is_complementary(e1: &QExpansion, e2: &QExpansion) -> bool {
    if e1.scenario != e2.scenario || e1.coeffs.len() != e2.coeffs.len() {
        return false;
    }
    let one = Rational::one();
    e1.is_nonnegative()
        && e2.is_nonnegative()
        && e1.coeffs.iter().zip(&e2.coeffs).all(|(a, b)| a + b == one)
}

/// Two complementary Bell expressions forming a local equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityPair {
    pub first: BellExpression,
    pub second: BellExpression,
}

impl EqualityPair {
    /// Validates that the two expressions are complementary.
    pub fn new(first: BellExpression, second: BellExpression) -> Result<Self> {
        if first.scenario() != second.scenario() {
            return Err(Error::Contract(
                "pair members have different scenarios".into(),
            ));
        }
        let m = ConversionMatrix::build(first.scenario());
        let (x1, x2) = (expand(&first, &m)?, expand(&second, &m)?);
        if !is_complementary(&x1, &x2) {
            return Err(Error::Contract(format!(
                "expressions {} and {} are not complementary",
                first.name().unwrap_or("first"),
                second.name().unwrap_or("second")
            )));
        }
        Ok(Self { first, second })
    }

    pub fn scenario(&self) -> Scenario {
        self.first.scenario()
    }
}
