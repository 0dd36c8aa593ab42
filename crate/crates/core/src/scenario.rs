//! Two-party, two-setting measurement scenarios and their index spaces.
//!
//! Party A measures either `a` (with `m` outcomes) or `a'` (with `mp`
//! outcomes); party B measures `b` (`n` outcomes) or `b'` (`np` outcomes).
//! A local hidden variable model assigns a probability `q^{i ip j jp}` to
//! every joint assignment of outcomes to all four measurements, and the
//! observable probabilities `P_{st}^{kl}` are marginals of it.
//!
//! Settings are numbered 1 and 2; outcomes are numbered from 0.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawScenario")]
pub struct Scenario {
    pub m: usize,
    pub mp: usize,
    pub n: usize,
    pub np: usize,
}

#[derive(Deserialize)]
struct RawScenario {
    m: usize,
    mp: usize,
    n: usize,
    np: usize,
}

impl TryFrom<RawScenario> for Scenario {
    type Error = Error;

    fn try_from(raw: RawScenario) -> Result<Self> {
        Scenario::new(raw.m, raw.mp, raw.n, raw.np)
    }
}

/// The four scenario sizes `(N_Q, N_P, N_C, N_I)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub n_q: usize,
    pub n_p: usize,
    pub n_c: usize,
    pub n_i: usize,
}

impl Scenario {
    pub fn new(m: usize, mp: usize, n: usize, np: usize) -> Result<Self> {
        if m == 0 || mp == 0 || n == 0 || np == 0 {
            return Err(Error::InvalidScenario(format!(
                "all outcome counts must be at least 1, got {m},{mp},{n},{np}"
            )));
        }
        Ok(Self { m, mp, n, np })
    }

    /// The 2-outcome scenario used throughout the quantum analysis.
    pub const fn binary() -> Self {
        Self {
            m: 2,
            mp: 2,
            n: 2,
            np: 2,
        }
    }

    /// Number of LHV joint probabilities `q`.
    pub fn n_q(&self) -> usize {
        self.m * self.mp * self.n * self.np
    }

    /// Number of observable joint probabilities `P`.
    pub fn n_p(&self) -> usize {
        (self.m + self.mp) * (self.n + self.np)
    }

    /// Number of independent linear constraints among the `P`'s.
    pub fn n_c(&self) -> usize {
        self.m + self.mp + self.n + self.np - 1
    }

    /// Number of independent `P`'s.
    pub fn n_i(&self) -> usize {
        self.n_p() - self.n_c()
    }

    pub fn counts(&self) -> Counts {
        Counts {
            n_q: self.n_q(),
            n_p: self.n_p(),
            n_c: self.n_c(),
            n_i: self.n_i(),
        }
    }

    /// Outcome count of A's measurement for setting `s`.
    pub fn a_outcomes(&self, s: u8) -> usize {
        if s == 1 {
            self.m
        } else {
            self.mp
        }
    }

    /// Outcome count of B's measurement for setting `t`.
    pub fn b_outcomes(&self, t: u8) -> usize {
        if t == 1 {
            self.n
        } else {
            self.np
        }
    }

    /// Setting pairs in row-block order.
    pub const SETTING_PAIRS: [(u8, u8); 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];

    /// Offset of the `(s, t)` block among the flattened `P`'s.
    pub fn block_offset(&self, s: u8, t: u8) -> usize {
        let mut offset = 0;
        for (bs, bt) in Self::SETTING_PAIRS {
            if (bs, bt) == (s, t) {
                return offset;
            }
            offset += self.a_outcomes(bs) * self.b_outcomes(bt);
        }
        unreachable!("settings are validated before lookup")
    }

    pub fn q_flat_index(&self, q: QIndex) -> Result<usize> {
        q.check(self)?;
        Ok(((q.i * self.mp + q.ip) * self.n + q.j) * self.np + q.jp)
    }

    pub fn q_from_flat(&self, flat: usize) -> Result<QIndex> {
        if flat >= self.n_q() {
            return Err(Error::Index(format!(
                "q column {flat} out of range for N_Q = {}",
                self.n_q()
            )));
        }
        let jp = flat % self.np;
        let rest = flat / self.np;
        let j = rest % self.n;
        let rest = rest / self.n;
        let ip = rest % self.mp;
        let i = rest / self.mp;
        Ok(QIndex { i, ip, j, jp })
    }

    pub fn p_flat_index(&self, p: PIndex) -> Result<usize> {
        p.check(self)?;
        Ok(self.block_offset(p.s, p.t) + p.k * self.b_outcomes(p.t) + p.l)
    }

    pub fn p_from_flat(&self, flat: usize) -> Result<PIndex> {
        let mut offset = 0;
        for (s, t) in Self::SETTING_PAIRS {
            let cols = self.b_outcomes(t);
            let size = self.a_outcomes(s) * cols;
            if flat < offset + size {
                let local = flat - offset;
                return Ok(PIndex {
                    s,
                    t,
                    k: local / cols,
                    l: local % cols,
                });
            }
            offset += size;
        }
        Err(Error::Index(format!(
            "P row {flat} out of range for N_P = {}",
            self.n_p()
        )))
    }

    /// All `q` indices in column order.
    pub fn q_indices(&self) -> impl Iterator<Item = QIndex> + '_ {
        (0..self.n_q()).map(move |c| self.q_from_flat(c).expect("in range"))
    }

    /// All `P` indices in row order.
    pub fn p_indices(&self) -> impl Iterator<Item = PIndex> + '_ {
        (0..self.n_p()).map(move |r| self.p_from_flat(r).expect("in range"))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.m, self.mp, self.n, self.np)
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("scenario component {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match parts.as_slice() {
            &[m, mp, n, np] => Scenario::new(m, mp, n, np),
            _ => Err(Error::Parse(format!(
                "scenario must be four comma-separated counts m,mp,n,np, got {s:?}"
            ))),
        }
    }
}

/// Outcomes of all four measurements in one LHV assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QIndex {
    pub i: usize,
    pub ip: usize,
    pub j: usize,
    pub jp: usize,
}

impl QIndex {
    pub fn new(i: usize, ip: usize, j: usize, jp: usize) -> Self {
        Self { i, ip, j, jp }
    }

    fn check(&self, sc: &Scenario) -> Result<()> {
        if self.i >= sc.m || self.ip >= sc.mp || self.j >= sc.n || self.jp >= sc.np {
            return Err(Error::Index(format!(
                "q index ({},{},{},{}) outside scenario {sc}",
                self.i, self.ip, self.j, self.jp
            )));
        }
        Ok(())
    }

    /// A's outcome for setting `s`.
    pub fn a_outcome(&self, s: u8) -> usize {
        if s == 1 {
            self.i
        } else {
            self.ip
        }
    }

    /// B's outcome for setting `t`.
    pub fn b_outcome(&self, t: u8) -> usize {
        if t == 1 {
            self.j
        } else {
            self.jp
        }
    }

    /// Whether this assignment contributes to `P_{st}^{kl}`.
    pub fn contributes_to(&self, p: PIndex) -> bool {
        self.a_outcome(p.s) == p.k && self.b_outcome(p.t) == p.l
    }
}

impl fmt::Display for QIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{{{}{}{}{}}}", self.i, self.ip, self.j, self.jp)
    }
}

/// One observable joint probability `P_{st}^{kl}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PIndex {
    pub s: u8,
    pub t: u8,
    pub k: usize,
    pub l: usize,
}

impl PIndex {
    pub fn new(s: u8, t: u8, k: usize, l: usize) -> Self {
        Self { s, t, k, l }
    }

    fn check(&self, sc: &Scenario) -> Result<()> {
        if !(1..=2).contains(&self.s) || !(1..=2).contains(&self.t) {
            return Err(Error::Index(format!(
                "settings must be 1 or 2, got s={} t={}",
                self.s, self.t
            )));
        }
        if self.k >= sc.a_outcomes(self.s) || self.l >= sc.b_outcomes(self.t) {
            return Err(Error::Index(format!(
                "outcomes ({},{}) outside setting pair ({},{}) of scenario {sc}",
                self.k, self.l, self.s, self.t
            )));
        }
        Ok(())
    }
}

impl fmt::Display for PIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P_{{{}{}}}^{{{}{}}}", self.s, self.t, self.k, self.l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(m: usize, mp: usize, n: usize, np: usize) -> Scenario {
        Scenario::new(m, mp, n, np).unwrap()
    }

    #[test]
    fn q_flat_examples() {
        let s = sc(2, 2, 2, 2);
        assert_eq!(s.q_flat_index(QIndex::new(0, 0, 0, 0)).unwrap(), 0);
        assert_eq!(s.q_flat_index(QIndex::new(1, 1, 1, 1)).unwrap(), 15);
    }

    #[test]
    fn q_flat_matches_lexicographic_enumeration() {
        let s = sc(2, 3, 2, 2);
        let mut tuples = Vec::new();
        for i in 0..2 {
            for ip in 0..3 {
                for j in 0..2 {
                    for jp in 0..2 {
                        tuples.push((i, ip, j, jp));
                    }
                }
            }
        }
        let rank = tuples.iter().position(|&t| t == (1, 2, 1, 1)).unwrap();
        assert_eq!(rank, 23);
        assert_eq!(s.q_flat_index(QIndex::new(1, 2, 1, 1)).unwrap(), rank);
    }

    #[test]
    fn p_flat_examples() {
        let s = sc(2, 2, 2, 2);
        assert_eq!(s.p_flat_index(PIndex::new(1, 1, 0, 0)).unwrap(), 0);
        assert_eq!(s.p_flat_index(PIndex::new(2, 2, 1, 1)).unwrap(), 15);
        assert_eq!(s.p_flat_index(PIndex::new(1, 2, 1, 0)).unwrap(), 6);
    }

    #[test]
    fn out_of_range_indices_are_rejected() {
        let s = sc(2, 2, 2, 2);
        assert!(matches!(
            s.q_flat_index(QIndex::new(2, 0, 0, 0)),
            Err(Error::Index(_))
        ));
        assert!(matches!(
            s.p_flat_index(PIndex::new(3, 1, 0, 0)),
            Err(Error::Index(_))
        ));
        assert!(matches!(
            s.p_flat_index(PIndex::new(1, 2, 0, 2)),
            Err(Error::Index(_))
        ));
        assert!(s.q_from_flat(16).is_err());
        assert!(s.p_from_flat(16).is_err());
    }

    #[test]
    fn counts_examples() {
        let c = |s: Scenario| {
            let c = s.counts();
            (c.n_q, c.n_p, c.n_c, c.n_i)
        };
        assert_eq!(c(sc(2, 2, 2, 2)), (16, 16, 7, 9));
        assert_eq!(c(sc(2, 3, 2, 2)), (24, 20, 8, 12));
        assert_eq!(c(sc(2, 3, 2, 3)), (36, 25, 9, 16));
        assert_eq!(c(sc(1, 1, 1, 1)), (1, 4, 3, 1));
    }

    #[test]
    fn independent_count_differs_from_alternative_counts() {
        assert_eq!(sc(2, 2, 2, 2).n_i(), 9);
        assert_eq!(sc(2, 3, 2, 3).n_i(), 16);
        for alt in [8, 11, 14, 19, 20] {
            assert_ne!(sc(2, 2, 2, 2).n_i(), alt);
            assert_ne!(sc(2, 3, 2, 2).n_i(), alt);
            assert_ne!(sc(2, 3, 2, 3).n_i(), alt);
        }
    }

    #[test]
    fn zero_count_is_invalid() {
        assert!(Scenario::new(0, 2, 2, 2).is_err());
        assert!("0,2,2,2".parse::<Scenario>().is_err());
        assert!("2,2,2".parse::<Scenario>().is_err());
        assert!("2,x,2,2".parse::<Scenario>().is_err());
        assert_eq!("2, 3,2,2".parse::<Scenario>().unwrap(), sc(2, 3, 2, 2));
    }

    #[test]
    fn json_shape() {
        let s = sc(2, 3, 2, 2);
        let v = serde_json::to_value(s).unwrap();
        assert_eq!(v, serde_json::json!({"m": 2, "mp": 3, "n": 2, "np": 2}));
        let bad: std::result::Result<Scenario, _> =
            serde_json::from_value(serde_json::json!({"m": 0, "mp": 3, "n": 2, "np": 2}));
        assert!(bad.is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn scenario() -> impl Strategy<Value = Scenario> {
            (1usize..=5, 1usize..=5, 1usize..=5, 1usize..=5)
                .prop_map(|(m, mp, n, np)| Scenario::new(m, mp, n, np).unwrap())
        }

        proptest! {
            #[test]
            fn flat_indices_round_trip(s in scenario()) {
                for c in 0..s.n_q() {
                    let q = s.q_from_flat(c).unwrap();
                    prop_assert_eq!(s.q_flat_index(q).unwrap(), c);
                }
                for r in 0..s.n_p() {
                    let p = s.p_from_flat(r).unwrap();
                    prop_assert_eq!(s.p_flat_index(p).unwrap(), r);
                }
            }

            #[test]
            fn independent_count_is_symmetric(s in scenario()) {
                let swap_a = Scenario::new(s.mp, s.m, s.n, s.np).unwrap();
                let swap_b = Scenario::new(s.m, s.mp, s.np, s.n).unwrap();
                prop_assert_eq!(s.n_i(), swap_a.n_i());
                prop_assert_eq!(s.n_i(), swap_b.n_i());
            }
        }
    }
}
