//! Step-by-step transcripts showing how a Bell expression reduces to its
//! q-terms, and what bound or equality follows.
//!
//! The transcript layout is fixed to the 16 LHV probabilities of the
//! 2-outcome scenario.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::builtins::Subject;
use crate::conversion::{q_label, ConversionMatrix};
use crate::error::{Error, Result};
use crate::expression::BellExpression;
use crate::lhv::{expand, local_bounds, EqualityPair};
use crate::linalg::{rat, Rational};
use crate::scenario::Scenario;

/// Reduction of one expression to q-terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub name: String,
    /// Columns whose contributions add up to zero.
    pub cancelled: Vec<usize>,
    /// Surviving columns grouped by their net coefficient.
    pub groups: BTreeMap<Rational, Vec<usize>>,
    pub lower: Rational,
    pub upper: Rational,
    lines: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTranscript {
    pub reductions: Vec<Reduction>,
    pub conclusion: String,
    lines: Vec<String>,
}

impl ProofTranscript {
    pub fn text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ProofTranscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn coeff_prefix(c: &Rational, leading: bool) -> String {
    let sign = if c.is_negative() { "-" } else { "+" };
    let mag = c.abs();
    let mag = if mag == rat(1) {
        String::new()
    } else {
        mag.to_string()
    };
    if leading && sign == "+" {
        mag
    } else if leading {
        format!("-{mag}")
    } else {
        format!("{sign} {mag}")
    }
}

fn join_q(scenario: &Scenario, cols: &[usize], sign: &str) -> String {
    cols.iter()
        .map(|&c| format!("{sign} {}", q_label(scenario, c)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn reduce(expr: &BellExpression, m: &ConversionMatrix, name: &str) -> Result<Reduction> {
    let scenario = expr.scenario();
    let mut lines = Vec::new();
    lines.push(format!("{name} = {expr}"));
    lines.push("Substituting each P by its q-terms:".to_string());

    // Per-column list of contributions, in term order.
    let mut contributions: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
    for (p, c) in expr.terms() {
        let row = m.row(*p)?;
        let cols: Vec<usize> = (0..row.len()).filter(|&k| row[k] == 1).collect();
        for &col in &cols {
            contributions.entry(col).or_default().push(c.clone());
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        let body = join_q(&scenario, &cols, "+");
        let body = body.trim_start_matches("+ ").to_string();
        let rendered = if mag == rat(1) {
            if c.is_negative() {
                join_q(&scenario, &cols, "-")
            } else {
                join_q(&scenario, &cols, "+")
            }
        } else {
            format!("{sign} {mag}({body})")
        };
        lines.push(format!("  {}{p} -> {rendered}", coeff_prefix(c, true)));
    }

    lines.push("Collecting terms:".to_string());
    let mut cancelled = Vec::new();
    let mut groups: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for (&col, parts) in &contributions {
        let net: Rational = parts.iter().sum();
        let shown: Vec<String> = parts
            .iter()
            .map(|c| {
                let s = if c.is_negative() { "-" } else { "+" };
                format!("{s}{}", c.abs())
            })
            .collect();
        let label = q_label(&scenario, col);
        if net.is_zero() {
            lines.push(format!("  {label}: {} = 0 (cancels)", shown.join(" ")));
            cancelled.push(col);
        } else {
            lines.push(format!("  {label}: {} = {net}", shown.join(" ")));
            groups.entry(net).or_default().push(col);
        }
    }
    if cancelled.is_empty() {
        lines.push("Cancelled: none".to_string());
    } else {
        let names: Vec<String> = cancelled.iter().map(|&c| q_label(&scenario, c)).collect();
        lines.push(format!("Cancelled: {}", names.join(", ")));
    }

    let grouped: Vec<String> = groups
        .iter()
        .enumerate()
        .map(|(i, (c, cols))| {
            let inner: Vec<String> = cols.iter().map(|&k| q_label(&scenario, k)).collect();
            format!("{}({})", coeff_prefix(c, i == 0), inner.join(" + "))
        })
        .collect();
    let rhs = if grouped.is_empty() {
        "0".to_string()
    } else {
        grouped.join(" ")
    };
    lines.push(format!("{name} = {rhs}"));

    let expansion = expand(expr, m)?;
    let (lower, upper) = local_bounds(&expansion);
    Ok(Reduction {
        name: name.to_string(),
        cancelled,
        groups,
        lower,
        upper,
        lines,
    })
}

fn check_scenario(s: Scenario) -> Result<()> {
    if s != Scenario::binary() {
        return Err(Error::Unsupported(format!(
            "proof transcripts cover the 2,2,2,2 scenario only, got {s}"
        )));
    }
    Ok(())
}

fn replay_expression(expr: &BellExpression) -> Result<ProofTranscript> {
    check_scenario(expr.scenario())?;
    let m = ConversionMatrix::build(expr.scenario());
    let name = expr.name().unwrap_or("B");
    let r = reduce(expr, &m, name)?;
    let mut lines = r.lines.clone();
    lines.push(format!(
        "Every q is nonnegative and all {} q's sum to 1, so {name} is a convex combination of its coefficients, which lie between {} and {}.",
        m.n_cols(),
        r.lower,
        r.upper
    ));
    let conclusion = format!("{} <= {name} <= {}", r.lower, r.upper);
    lines.push(conclusion.clone());
    Ok(ProofTranscript {
        reductions: vec![r],
        conclusion,
        lines,
    })
}

fn replay_pair(pair: &EqualityPair) -> Result<ProofTranscript> {
    check_scenario(pair.scenario())?;
    let m = ConversionMatrix::build(pair.scenario());
    let n1 = pair.first.name().unwrap_or("E1").to_string();
    let n2 = pair.second.name().unwrap_or("E2").to_string();
    let r1 = reduce(&pair.first, &m, &n1)?;
    let r2 = reduce(&pair.second, &m, &n2)?;

    let mut lines = vec![format!("E = |{n1}| + |{n2}|"), String::new()];
    lines.extend(r1.lines.iter().cloned());
    lines.push(String::new());
    lines.extend(r2.lines.iter().cloned());
    lines.push(String::new());
    lines.push(format!(
        "Every q is nonnegative, so {n1} = |{n1}| and {n2} = |{n2}|."
    ));

    let scenario = pair.scenario();
    let mut all: Vec<usize> = r1
        .groups
        .values()
        .chain(r2.groups.values())
        .flatten()
        .copied()
        .collect();
    all.sort_unstable();
    let positive_unit = |r: &Reduction| r.groups.keys().all(|c| *c == rat(1));
    let covers =
        all == (0..m.n_cols()).collect::<Vec<_>>() && positive_unit(&r1) && positive_unit(&r2);
    if !covers {
        return Err(Error::Contract(format!(
            "{n1} and {n2} do not partition the q's with unit coefficients"
        )));
    }
    lines.push(format!(
        "E = {}",
        join_q(&scenario, &all, "+").trim_start_matches("+ ")
    ));
    lines.push(format!(
        "Each of the {} q's appears exactly once and they sum to 1, hence",
        m.n_cols()
    ));
    let conclusion = "E = 1".to_string();
    lines.push(conclusion.clone());
    Ok(ProofTranscript {
        reductions: vec![r1, r2],
        conclusion,
        lines,
    })
}

/// Replays the direct proof for an expression (bound) or a complementary
/// pair (equality).
pub fn replay_appendix_proof(subject: &Subject) -> Result<ProofTranscript> {
    match subject {
        Subject::Expression(e) => replay_expression(e),
        Subject::Pair(p) => replay_pair(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{self, Builtin};
    use crate::scenario::{PIndex, QIndex};

    fn cols(labels: &[&str]) -> Vec<usize> {
        let s = Scenario::binary();
        labels
            .iter()
            .map(|l| {
                let d: Vec<usize> = l.bytes().map(|b| (b - b'0') as usize).collect();
                s.q_flat_index(QIndex::new(d[0], d[1], d[2], d[3])).unwrap()
            })
            .collect()
    }

    #[test]
    fn equality_transcript() {
        let t = replay_appendix_proof(&Builtin::Equality.subject()).unwrap();
        assert_eq!(t.conclusion, "E = 1");
        assert!(t.text().trim_end().ends_with("E = 1"));
        let e1 = &t.reductions[0];
        assert_eq!(
            e1.groups[&rat(1)],
            cols(&["0001", "0011", "0110", "0111", "1000", "1001", "1100", "1110"])
        );
        assert_eq!(e1.cancelled, cols(&["1011", "1101", "1111"]));
        let e2 = &t.reductions[1];
        assert_eq!(
            e2.groups[&rat(1)],
            cols(&["0000", "0010", "0100", "0101", "1010", "1011", "1101", "1111"])
        );
    }

    #[test]
    fn j_transcript_groups() {
        let t = replay_appendix_proof(&Builtin::Eq34.subject()).unwrap();
        let r = &t.reductions[0];
        assert_eq!(r.groups.len(), 2);
        assert_eq!(
            r.groups[&rat(-1)],
            cols(&["0000", "0001", "0101", "0111", "1000", "1010", "1110", "1111"])
        );
        assert_eq!(
            r.groups[&rat(2)],
            cols(&["0010", "0011", "0100", "0110", "1001", "1011", "1100", "1101"])
        );
        assert_eq!(t.conclusion, "-1 <= J <= 2");
        let text = t.text();
        assert!(text.contains("J = -(q_{1212}^{0000} + "));
        assert!(text.contains(" + 2(q_{1212}^{0010} + "));
    }

    #[test]
    fn single_e1_lists_survivors() {
        let t = replay_appendix_proof(&Subject::Expression(builtins::e1())).unwrap();
        assert_eq!(t.reductions[0].groups[&rat(1)].len(), 8);
        assert_eq!(t.conclusion, "0 <= E1 <= 1");
    }

    #[test]
    fn other_scenarios_are_unsupported() {
        let s = Scenario::new(2, 3, 2, 2).unwrap();
        let e = BellExpression::from_terms(s, [(PIndex::new(1, 1, 0, 0), 1)]).unwrap();
        assert!(matches!(
            replay_appendix_proof(&Subject::Expression(e)),
            Err(Error::Unsupported(_))
        ));
    }
}
