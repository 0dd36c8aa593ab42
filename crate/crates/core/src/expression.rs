//! Bell expressions: rational combinations of the observable `P_{st}^{kl}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Rational};
use crate::scenario::{PIndex, Scenario};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellExpression {
    scenario: Scenario,
    lambda: BTreeMap<PIndex, Rational>,
    name: Option<String>,
}

impl BellExpression {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            lambda: BTreeMap::new(),
            name: None,
        }
    }

    /// Builds an expression from integer coefficients.
    pub fn from_terms(
        scenario: Scenario,
        terms: impl IntoIterator<Item = (PIndex, i64)>,
    ) -> Result<Self> {
        let mut expr = Self::new(scenario);
        for (p, c) in terms {
            expr.add_term(p, linalg::rat(c))?;
        }
        Ok(expr)
    }

    /// Builds an expression from a dense coefficient vector in P-row order.
    pub fn from_dense(scenario: Scenario, coeffs: &[Rational]) -> Result<Self> {
        if coeffs.len() != scenario.n_p() {
            return Err(Error::Contract(format!(
                "expected {} coefficients, got {}",
                scenario.n_p(),
                coeffs.len()
            )));
        }
        let mut expr = Self::new(scenario);
        for (r, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                expr.add_term(scenario.p_from_flat(r)?, c.clone())?;
            }
        }
        Ok(expr)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn add_term(&mut self, p: PIndex, coeff: Rational) -> Result<()> {
        self.scenario.p_flat_index(p)?;
        let entry = self.lambda.entry(p).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.lambda.remove(&p);
        }
        Ok(())
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PIndex, &Rational)> {
        self.lambda.iter()
    }

    pub fn coeff(&self, p: PIndex) -> Rational {
        self.lambda.get(&p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Coefficients in P-row order.
    pub fn dense(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.scenario.n_p()];
        for (p, c) in &self.lambda {
            let r = self.scenario.p_flat_index(*p).expect("validated on insert");
            v[r] = c.clone();
        }
        v
    }

    /// Sum of all coefficients.
    pub fn coefficient_sum(&self) -> Rational {
        self.lambda.values().sum()
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: &Rational, other: &Self, beta: &Rational) -> Result<Self> {
        if self.scenario != other.scenario {
            return Err(Error::Contract(
                "combining expressions of different scenarios".into(),
            ));
        }
        let mut out = Self::new(self.scenario);
        for (p, c) in &self.lambda {
            out.add_term(*p, alpha * c)?;
        }
        for (p, c) in &other.lambda {
            out.add_term(*p, beta * c)?;
        }
        Ok(out)
    }

    /// Exact value on a rational P-vector given in row order.
    pub fn evaluate_exact(&self, p: &[Rational]) -> Rational {
        self.lambda
            .iter()
            .map(|(idx, c)| c * &p[self.scenario.p_flat_index(*idx).expect("valid")])
            .sum()
    }

    pub fn to_json(&self) -> Result<ExpressionJson> {
        let terms = self
            .lambda
            .iter()
            .map(|(p, c)| {
                let num = c.numer().to_i64();
                let den = c.denom().to_i64();
                match (num, den) {
                    (Some(coeff_num), Some(coeff_den)) => Ok(TermJson {
                        s: p.s,
                        t: p.t,
                        k: p.k,
                        l: p.l,
                        coeff_num,
                        coeff_den,
                    }),
                    _ => Err(Error::Contract(format!(
                        "coefficient {c} does not fit in i64"
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpressionJson {
            scenario: self.scenario,
            terms,
            name: self.name.clone(),
        })
    }

    pub fn from_json(json: &ExpressionJson) -> Result<Self> {
        let mut expr = Self::new(json.scenario);
        for t in &json.terms {
            if t.coeff_den == 0 {
                return Err(Error::Parse(format!(
                    "zero denominator in term for P_{{{}{}}}^{{{}{}}}",
                    t.s, t.t, t.k, t.l
                )));
            }
            expr.add_term(
                PIndex::new(t.s, t.t, t.k, t.l),
                linalg::ratio(t.coeff_num, t.coeff_den),
            )?;
        }
        expr.name = json.name.clone();
        Ok(expr)
    }
}

impl fmt::Display for BellExpression {
    /// Signed sum such as `+P_{11}^{10} - P_{12}^{11} + 2P_{21}^{11}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lambda.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.lambda {
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            let mag = if mag == linalg::rat(1) {
                String::new()
            } else if mag.is_integer() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            if first {
                write!(f, "{sign}{mag}{p}")?;
                first = false;
            } else {
                write!(f, " {sign} {mag}{p}")?;
            }
        }
        Ok(())
    }
}

/// Wire form of one term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub s: u8,
    pub t: u8,
    pub k: usize,
    pub l: usize,
    pub coeff_num: i64,
    pub coeff_den: i64,
}

/// Wire form: `{scenario, terms: [{s,t,k,l,coeff_num,coeff_den}], name}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpressionJson {
    pub scenario: Scenario,
    pub terms: Vec<TermJson>,
    #[serde(default)]
    pub name: Option<String>,
}

impl Serialize for BellExpression {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json()
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BellExpression {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = ExpressionJson::deserialize(d)?;
        Self::from_json(&json).map_err(serde::de::Error::custom)
    }
}
