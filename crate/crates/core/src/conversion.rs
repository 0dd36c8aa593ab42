//! The conversion matrix `M` with `P = M Q`, and the linear constraints it
//! implies on the observable probabilities.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Rational};
use crate::scenario::{PIndex, Scenario};

/// Largest `N_P * N_Q` for which a dense matrix is built.
pub const MATRIX_SIZE_GUARD: usize = 10_000_000;

/// Dense 0/1 matrix: one row per `P_{st}^{kl}`, one column per LHV
/// assignment `q^{i ip j jp}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionMatrix {
    scenario: Scenario,
    entries: Vec<Vec<u8>>,
}

impl ConversionMatrix {
    pub fn build(scenario: Scenario) -> Self {
        let qs: Vec<_> = scenario.q_indices().collect();
        let entries = scenario
            .p_indices()
            .map(|p| qs.iter().map(|q| u8::from(q.contributes_to(p))).collect())
            .collect();
        Self { scenario, entries }
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.entries
    }

    pub fn n_rows(&self) -> usize {
        self.entries.len()
    }

    pub fn n_cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.entries[row][col]
    }

    pub fn row(&self, p: PIndex) -> Result<&[u8]> {
        let r = self.scenario.p_flat_index(p)?;
        Ok(&self.entries[r])
    }

    /// Column `c`: the P-vector of the deterministic strategy `c`.
    pub fn column(&self, c: usize) -> Vec<u8> {
        self.entries.iter().map(|r| r[c]).collect()
    }

    pub fn to_rational(&self) -> Vec<Vec<Rational>> {
        linalg::from_ints(&self.entries)
    }

    /// Exact rank by rational elimination.
    pub fn rank_exact(&self) -> usize {
        linalg::rank(&self.to_rational())
    }

    /// `P = M q` for a rational LHV distribution.
    pub fn apply(&self, q: &[Rational]) -> Vec<Rational> {
        assert_eq!(q.len(), self.n_cols());
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(q)
                    .filter(|(&e, _)| e == 1)
                    .map(|(_, x)| x.clone())
                    .sum()
            })
            .collect()
    }

    /// CSV dump with `P_{st}^{kl}` row headers and `q^{i ip j jp}` column
    /// headers.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("P\\q");
        for q in self.scenario.q_indices() {
            write!(out, ",{q}").unwrap();
        }
        out.push('\n');
        for (p, row) in self.scenario.p_indices().zip(&self.entries) {
            write!(out, "{p}").unwrap();
            for e in row {
                write!(out, ",{e}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// The P-to-q listing, one line per row:
    /// `P_{11}^{00} = q_{1212}^{0000} + q_{1212}^{0001} + ...`.
    pub fn p_to_q_table(&self) -> String {
        let mut out = String::new();
        for (p, row) in self.scenario.p_indices().zip(&self.entries) {
            let terms: Vec<String> = row
                .iter()
                .enumerate()
                .filter(|(_, &e)| e == 1)
                .map(|(c, _)| q_label(&self.scenario, c))
                .collect();
            writeln!(out, "{p} = {}", terms.join(" + ")).unwrap();
        }
        out
    }
}

/// `q_{1212}^{i ip j jp}` in the notation of the P-to-q listing.
pub fn q_label(scenario: &Scenario, col: usize) -> String {
    let q = scenario.q_from_flat(col).expect("column in range");
    format!("q_{{1212}}^{{{}{}{}{}}}", q.i, q.ip, q.j, q.jp)
}

fn size_guard(scenario: &Scenario) -> Result<()> {
    let size = scenario.n_p() * scenario.n_q();
    if size > MATRIX_SIZE_GUARD {
        return Err(Error::Size(format!(
            "N_P * N_Q = {size} exceeds {MATRIX_SIZE_GUARD} for scenario {scenario}"
        )));
    }
    Ok(())
}

pub fn build_matrix(scenario: Scenario) -> ConversionMatrix {
    ConversionMatrix::build(scenario)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub scenario: Scenario,
    pub computed_rank: usize,
    pub predicted_n_i: usize,
    pub agrees: bool,
}

/// Compares the exact rank of `M` with the closed-form count `N_I`.
pub fn verify_rank_formula(scenario: Scenario) -> Result<RankReport> {
    size_guard(&scenario)?;
    let computed_rank = build_matrix(scenario).rank_exact();
    let predicted_n_i = scenario.n_i();
    Ok(RankReport {
        scenario,
        computed_rank,
        predicted_n_i,
        agrees: computed_rank == predicted_n_i,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// A setting-pair block sums to one.
    Normalization,
    /// A's marginal for one outcome does not depend on B's setting.
    NoSignalingA,
    /// B's marginal for one outcome does not depend on A's setting.
    NoSignalingB,
}

/// Normalization and no-signaling rows over P-space.
///
/// Redundant rows are kept; their redundancy shows up in the rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintMatrix {
    scenario: Scenario,
    rows: Vec<Vec<i64>>,
    kinds: Vec<ConstraintKind>,
}

impl ConstraintMatrix {
    pub fn build(scenario: Scenario) -> Self {
        let ps: Vec<PIndex> = scenario.p_indices().collect();
        let row_from = |f: &dyn Fn(&PIndex) -> i64| ps.iter().map(f).collect::<Vec<i64>>();
        let mut rows = Vec::new();
        let mut kinds = Vec::new();

        for (s, t) in Scenario::SETTING_PAIRS {
            rows.push(row_from(&|p| i64::from(p.s == s && p.t == t)));
            kinds.push(ConstraintKind::Normalization);
        }
        // A's outcome k under setting s, summed over B's outcomes, agrees for t = 1 and t = 2.
        for s in [1u8, 2] {
            for k in 0..scenario.a_outcomes(s) {
                rows.push(row_from(&|p| {
                    if p.s != s || p.k != k {
                        0
                    } else if p.t == 1 {
                        1
                    } else {
                        -1
                    }
                }));
                kinds.push(ConstraintKind::NoSignalingA);
            }
        }
        for t in [1u8, 2] {
            for l in 0..scenario.b_outcomes(t) {
                rows.push(row_from(&|p| {
                    if p.t != t || p.l != l {
                        0
                    } else if p.s == 1 {
                        1
                    } else {
                        -1
                    }
                }));
                kinds.push(ConstraintKind::NoSignalingB);
            }
        }
        Self {
            scenario,
            rows,
            kinds,
        }
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn kinds(&self) -> &[ConstraintKind] {
        &self.kinds
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rank of the rows as plain linear forms. Normalization rows carry the
    /// affine offset, so this is one more than [`Self::rank`].
    pub fn linear_rank(&self) -> usize {
        linalg::rank(&linalg::from_ints(&self.rows))
    }

    /// Number of independent constraints the rows impose on the span of the
    /// P-vectors: normalization rows are taken relative to the first one
    /// (which fixes the overall scale), then the homogeneous system is
    /// ranked. Equals `N_C`.
    pub fn rank(&self) -> usize {
        linalg::rank(&linalg::from_ints(&self.homogeneous_rows()))
    }

    /// No-signaling rows plus differences of normalization rows. Every row
    /// annihilates the columns of `M`.
    pub fn homogeneous_rows(&self) -> Vec<Vec<i64>> {
        let first_norm = self
            .rows
            .iter()
            .zip(&self.kinds)
            .find(|(_, k)| **k == ConstraintKind::Normalization)
            .map(|(r, _)| r.clone());
        let mut seen_first = false;
        self.rows
            .iter()
            .zip(&self.kinds)
            .filter_map(|(r, k)| match k {
                ConstraintKind::Normalization => {
                    if !seen_first {
                        seen_first = true;
                        return None;
                    }
                    let base = first_norm.as_ref().expect("normalization row exists");
                    Some(r.iter().zip(base).map(|(a, b)| a - b).collect())
                }
                _ => Some(r.clone()),
            })
            .collect()
    }

    /// `row · P`, exactly.
    pub fn evaluate(&self, p: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(p)
                    .filter(|(&c, _)| c != 0)
                    .map(|(&c, x)| linalg::rat(c) * x)
                    .sum()
            })
            .collect()
    }

    /// Value every LHV P-vector gives for each row: 1 for normalization, 0
    /// for no-signaling.
    pub fn expected_values(&self) -> Vec<i64> {
        self.kinds
            .iter()
            .map(|k| i64::from(*k == ConstraintKind::Normalization))
            .collect()
    }
}

pub fn build_constraints(scenario: Scenario) -> ConstraintMatrix {
    ConstraintMatrix::build(scenario)
}

/// Checks `C · M` row by row: normalization rows must give the all-ones row
/// over q-space and no-signaling rows the zero row.
pub fn nullspace_consistency(scenario: Scenario) -> Result<bool> {
    size_guard(&scenario)?;
    let m = build_matrix(scenario);
    let c = build_constraints(scenario);
    let n_q = m.n_cols();
    for (row, expect) in c.rows().iter().zip(c.expected_values()) {
        for col in 0..n_q {
            let v: i64 = row
                .iter()
                .zip(m.rows())
                .map(|(&a, mr)| a * i64::from(mr[col]))
                .sum();
            if v != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::QIndex;

    fn sc(m: usize, mp: usize, n: usize, np: usize) -> Scenario {
        Scenario::new(m, mp, n, np).unwrap()
    }

    fn selected(m: &ConversionMatrix, p: PIndex) -> Vec<QIndex> {
        let s = m.scenario();
        m.row(p)
            .unwrap()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e == 1)
            .map(|(c, _)| s.q_from_flat(c).unwrap())
            .collect()
    }

    #[test]
    fn appendix_rows() {
        let m = build_matrix(Scenario::binary());
        let q = |s: &str| {
            let d: Vec<usize> = s.bytes().map(|b| (b - b'0') as usize).collect();
            QIndex::new(d[0], d[1], d[2], d[3])
        };
        assert_eq!(
            selected(&m, PIndex::new(1, 1, 0, 0)),
            ["0000", "0001", "0100", "0101"].map(q)
        );
        assert_eq!(
            selected(&m, PIndex::new(2, 2, 1, 1)),
            ["0101", "0111", "1101", "1111"].map(q)
        );
    }

    #[test]
    fn trivial_scenario_matrix() {
        let m = build_matrix(sc(1, 1, 1, 1));
        assert_eq!(m.rows(), &[vec![1], vec![1], vec![1], vec![1]]);
        assert_eq!(m.rank_exact(), 1);
    }

    #[test]
    fn column_and_block_sums() {
        for s in [sc(2, 2, 2, 2), sc(2, 3, 2, 3), sc(1, 3, 2, 1)] {
            let m = build_matrix(s);
            for c in 0..m.n_cols() {
                let col = m.column(c);
                assert_eq!(col.iter().map(|&x| x as usize).sum::<usize>(), 4);
                for (bs, bt) in Scenario::SETTING_PAIRS {
                    let block: usize = s
                        .p_indices()
                        .zip(&col)
                        .filter(|(p, _)| p.s == bs && p.t == bt)
                        .map(|(_, &x)| x as usize)
                        .sum();
                    assert_eq!(block, 1);
                }
            }
        }
    }

    #[test]
    fn paper_ranks() {
        assert_eq!(build_matrix(sc(2, 2, 2, 2)).rank_exact(), 9);
        assert_eq!(build_matrix(sc(2, 3, 2, 2)).rank_exact(), 12);
        assert_eq!(build_matrix(sc(2, 3, 2, 3)).rank_exact(), 16);
    }

    #[test]
    fn rank_formula_examples() {
        let r = verify_rank_formula(sc(2, 2, 2, 2)).unwrap();
        assert!(r.agrees);
        assert_eq!(r.computed_rank, 9);
        let r = verify_rank_formula(sc(3, 3, 3, 3)).unwrap();
        assert!(r.agrees);
        assert_eq!(r.computed_rank, 25);
        let r = verify_rank_formula(sc(1, 1, 1, 1)).unwrap();
        assert_eq!((r.computed_rank, r.agrees), (1, true));
    }

    #[test]
    fn size_guard_rejects_huge_scenarios() {
        // 60 * 60 rows times 30^4 columns
        let big = sc(30, 30, 30, 30);
        assert!(matches!(verify_rank_formula(big), Err(Error::Size(_))));
        assert!(matches!(nullspace_consistency(big), Err(Error::Size(_))));
    }

    #[test]
    fn constraint_rows_and_rank() {
        let c = build_constraints(sc(2, 2, 2, 2));
        assert_eq!(c.len(), 12);
        assert_eq!(c.rank(), 7);
        assert_eq!(c.linear_rank(), 8);
        assert_eq!(build_constraints(sc(2, 3, 2, 3)).rank(), 9);
        for (row, kind) in c.rows().iter().zip(c.kinds()) {
            match kind {
                ConstraintKind::Normalization => assert!(row.iter().all(|&x| x == 0 || x == 1)),
                _ => {
                    assert!(row.iter().all(|&x| (-1..=1).contains(&x)));
                    assert_eq!(row.iter().sum::<i64>(), 0);
                }
            }
        }
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace_consistency(sc(2, 2, 2, 2)).unwrap());
        assert!(nullspace_consistency(sc(2, 3, 2, 2)).unwrap());
        assert!(nullspace_consistency(sc(1, 1, 1, 1)).unwrap());
    }

    #[test]
    fn csv_headers() {
        let csv = build_matrix(Scenario::binary()).to_csv();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("P\\q,q^{0000},q^{0001},"));
        assert_eq!(
            lines.next().unwrap(),
            "P_{11}^{00},1,1,0,0,1,1,0,0,0,0,0,0,0,0,0,0"
        );
        assert_eq!(csv.lines().count(), 17);
    }
}
