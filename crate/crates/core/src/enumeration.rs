//! Search for Bell expressions with small integer q-space coefficients.
//!
//! The search runs over q-space targets rather than over coefficient
//! vectors `lambda`: a target is any integer vector with entries in
//! `[-d, c]`, and it is a Bell expression exactly when it lies in the row
//! space of the conversion matrix. A `lambda` realizing it is then
//! recovered by an exact solve.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::conversion::ConversionMatrix;
use crate::error::{Error, Result};
use crate::expression::BellExpression;
use crate::lhv::{is_complementary, QExpansion};
use crate::linalg::{self, Rational, RowSpace};
use crate::scenario::{QIndex, Scenario};

/// Largest number of candidate vectors a search may visit.
pub const SEARCH_GUARD: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub scenario: Scenario,
    pub c_target: u32,
    pub d_target: u32,
    pub max_candidates: usize,
    pub dedup: bool,
}

impl SearchConfig {
    pub fn new(
        scenario: Scenario,
        c_target: u32,
        d_target: u32,
        max_candidates: usize,
        dedup: bool,
    ) -> Result<Self> {
        if c_target + d_target == 0 {
            return Err(Error::Contract("c + d must be at least 1".into()));
        }
        if max_candidates == 0 {
            return Err(Error::Contract("max_candidates must be at least 1".into()));
        }
        Ok(Self {
            scenario,
            c_target,
            d_target,
            max_candidates,
            dedup,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub target: Vec<i64>,
    pub lambda: BellExpression,
    pub c: i64,
    pub d: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub config: SearchConfig,
    pub entries: Vec<CatalogEntry>,
    /// Indices of complementary entries, `i < j`.
    pub pairs: Vec<[usize; 2]>,
    pub truncated: bool,
}

impl Catalog {
    pub fn position(&self, target: &[i64]) -> Option<usize> {
        self.entries.iter().position(|e| e.target == target)
    }

    pub fn contains(&self, target: &[i64]) -> bool {
        self.position(target).is_some()
    }

    pub fn has_pair(&self, a: &[i64], b: &[i64]) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => {
                let key = [i.min(j), i.max(j)];
                self.pairs.contains(&key)
            }
            _ => false,
        }
    }
}

/// Recovers Bell expressions from q-space targets.
///
/// Rows of `M` are inserted in P order; the first independent ones form a
/// fixed basis, and every representable target gets the unique `lambda`
/// supported on that basis.
#[derive(Debug, Clone)]
pub struct Representer {
    scenario: Scenario,
    space: RowSpace,
    nullspace: Vec<Vec<i64>>,
}

impl Representer {
    pub fn new(m: &ConversionMatrix) -> Self {
        let rows = m.to_rational();
        let nullspace = linalg::integer_nullspace(&rows, m.n_cols());
        Self {
            scenario: m.scenario(),
            space: RowSpace::new(&rows),
            nullspace,
        }
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    /// Fast membership test for integer targets.
    pub fn contains_int(&self, target: &[i64]) -> bool {
        self.nullspace
            .iter()
            .all(|v| v.iter().zip(target).map(|(a, b)| a * b).sum::<i64>() == 0)
    }

    pub fn represent(&self, target: &[Rational]) -> Option<BellExpression> {
        if target.len() != self.scenario.n_q() {
            return None;
        }
        let lambda = self.space.express(target)?;
        Some(BellExpression::from_dense(self.scenario, &lambda).expect("dense length matches"))
    }

    pub fn represent_int(&self, target: &[i64]) -> Option<BellExpression> {
        let t: Vec<Rational> = target.iter().map(|&x| linalg::rat(x)).collect();
        self.represent(&t)
    }
}

/// A `lambda` whose expansion equals `target`, if one exists.
pub fn representable(target: &[Rational], m: &ConversionMatrix) -> Option<BellExpression> {
    Representer::new(m).represent(target)
}

/// Relabelings of the scenario (parties, settings, outcomes) as
/// permutations of q columns.
#[derive(Debug, Clone)]
pub struct Symmetries {
    perms: Vec<Vec<usize>>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

impl Symmetries {
    pub fn new(scenario: Scenario) -> Self {
        let s = scenario;
        let swap_parties: &[bool] = if (s.m, s.mp) == (s.n, s.np) {
            &[false, true]
        } else {
            &[false]
        };
        let swap_a: &[bool] = if s.m == s.mp {
            &[false, true]
        } else {
            &[false]
        };
        let swap_b: &[bool] = if s.n == s.np {
            &[false, true]
        } else {
            &[false]
        };
        let (pa, pap, pb, pbp) = (
            permutations(s.m),
            permutations(s.mp),
            permutations(s.n),
            permutations(s.np),
        );
        let qs: Vec<QIndex> = s.q_indices().collect();
        let mut perms = Vec::new();
        let mut seen = HashSet::new();
        for &party in swap_parties {
            for &sa in swap_a {
                for &sb in swap_b {
                    for a in &pa {
                        for ap in &pap {
                            for b in &pb {
                                for bp in &pbp {
                                    let perm: Vec<usize> = qs
                                        .iter()
                                        .map(|q| {
                                            let (mut i, mut ip, mut j, mut jp) =
                                                (a[q.i], ap[q.ip], b[q.j], bp[q.jp]);
                                            if sa {
                                                std::mem::swap(&mut i, &mut ip);
                                            }
                                            if sb {
                                                std::mem::swap(&mut j, &mut jp);
                                            }
                                            if party {
                                                (i, ip, j, jp) = (j, jp, i, ip);
                                            }
                                            s.q_flat_index(QIndex::new(i, ip, j, jp))
                                                .expect("relabeling stays in range")
                                        })
                                        .collect();
                                    if seen.insert(perm.clone()) {
                                        perms.push(perm);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Self { perms }
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn images<'a>(&'a self, target: &'a [i64]) -> impl Iterator<Item = Vec<i64>> + 'a {
        self.perms.iter().map(move |perm| {
            let mut img = vec![0; target.len()];
            for (c, &x) in target.iter().enumerate() {
                img[perm[c]] = x;
            }
            img
        })
    }

    /// Lexicographically smallest image.
    pub fn canonical(&self, target: &[i64]) -> Vec<i64> {
        self.images(target).min().unwrap_or_else(|| target.to_vec())
    }

    pub fn is_canonical(&self, target: &[i64]) -> bool {
        self.images(target).all(|img| img.as_slice() >= target)
    }
}

fn make_entry(rep: &Representer, target: Vec<i64>) -> Result<CatalogEntry> {
    let lambda = rep
        .represent_int(&target)
        .ok_or_else(|| Error::Contract("accepted target is not representable".into()))?;
    let c = target.iter().copied().max().unwrap_or(0).max(0);
    let d = (-target.iter().copied().min().unwrap_or(0)).max(0);
    Ok(CatalogEntry {
        target,
        lambda,
        c,
        d,
    })
}

fn complementary_pairs(scenario: Scenario, entries: &[CatalogEntry]) -> Result<Vec<[usize; 2]>> {
    let index: HashMap<&[i64], usize> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| (e.target.as_slice(), i))
        .collect();
    let mut pairs = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        if e.target.iter().any(|&x| x < 0) {
            continue;
        }
        let complement: Vec<i64> = e.target.iter().map(|&x| 1 - x).collect();
        if let Some(&j) = index.get(complement.as_slice()) {
            if i < j {
                let a = QExpansion::from_ints(scenario, &e.target)?;
                let b = QExpansion::from_ints(scenario, &complement)?;
                if is_complementary(&a, &b) {
                    pairs.push([i, j]);
                }
            }
        }
    }
    Ok(pairs)
}

/// Visits every 0/1 target in lexicographic order and keeps the
/// representable ones, including the all-zero and all-one targets.
pub fn enumerate_binary(config: &SearchConfig) -> Result<Catalog> {
    if (config.c_target, config.d_target) != (1, 0) {
        return Err(Error::Contract(
            "binary enumeration needs c = 1 and d = 0".into(),
        ));
    }
    let scenario = config.scenario;
    let n_q = scenario.n_q();
    if n_q > 24 {
        return Err(Error::Size(format!(
            "2^{n_q} binary targets exceed the 2^24 guard for scenario {scenario}"
        )));
    }
    let m = ConversionMatrix::build(scenario);
    let rep = Representer::new(&m);
    let sym = config.dedup.then(|| Symmetries::new(scenario));

    let mut accepted = Vec::new();
    let mut truncated = false;
    let mut target = vec![0i64; n_q];
    for mask in 0u64..(1u64 << n_q) {
        // First column is the most significant bit, so masks run in
        // lexicographic order of targets.
        for (c, t) in target.iter_mut().enumerate() {
            *t = ((mask >> (n_q - 1 - c)) & 1) as i64;
        }
        if !rep.contains_int(&target) {
            continue;
        }
        if let Some(sym) = &sym {
            if !sym.is_canonical(&target) {
                continue;
            }
        }
        if accepted.len() == config.max_candidates {
            truncated = true;
            break;
        }
        accepted.push(target.clone());
    }

    let entries = accepted
        .into_iter()
        .map(|t| make_entry(&rep, t))
        .collect::<Result<Vec<_>>>()?;
    let pairs = complementary_pairs(scenario, &entries)?;
    Ok(Catalog {
        config: *config,
        entries,
        pairs,
        truncated,
    })
}

/// All representable targets with entries in `[-d, c]` that attain both
/// `c` and `-d`, ordered by number of extreme entries (most first), then
/// lexicographically; at most `max_candidates` are kept.
///
/// A vector in the row space is fixed by its values on the pivot columns
/// of the echelon basis, so the search walks those values over `[-d, c]`
/// and keeps the integral in-range results. This visits every qualifying
/// target without testing the non-members.
pub fn search_bounded(config: &SearchConfig) -> Result<Catalog> {
    let (c, d) = (i64::from(config.c_target), i64::from(config.d_target));
    if c > 2 || d > 2 {
        return Err(Error::Contract(format!(
            "bounded search supports c, d <= 2, got c = {c}, d = {d}"
        )));
    }
    let scenario = config.scenario;
    let m = ConversionMatrix::build(scenario);
    let rep = Representer::new(&m);
    let rank = rep.rank();
    let width = (c + d + 1) as u64;
    let visits = (0..rank).try_fold(1u64, |acc, _| acc.checked_mul(width));
    if visits.is_none_or(|v| v > SEARCH_GUARD) {
        return Err(Error::Size(format!(
            "{width}^{rank} pivot assignments exceed the 2^24 guard for scenario {scenario}"
        )));
    }

    // Echelon rows scaled to integers over a common denominator.
    let echelon = rep.space.echelon();
    let denom = echelon
        .iter()
        .flatten()
        .fold(num_bigint::BigInt::from(1), |acc, x| {
            num_integer::Integer::lcm(&acc, x.denom())
        });
    let denom: i64 = num_traits::ToPrimitive::to_i64(&denom)
        .ok_or_else(|| Error::Size("echelon denominators do not fit in 64 bits".into()))?;
    let scaled: Vec<Vec<i64>> = echelon
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let v = x * linalg::rat(denom);
                    num_traits::ToPrimitive::to_i64(v.numer()).expect("scaled entry fits")
                })
                .collect()
        })
        .collect();

    let n_q = scenario.n_q();
    let mut found: Vec<Vec<i64>> = Vec::new();
    let mut values = vec![-d; rank];
    let mut acc = vec![0i64; n_q];
    'outer: loop {
        acc.iter_mut().for_each(|x| *x = 0);
        for (v, row) in values.iter().zip(&scaled) {
            if *v != 0 {
                for (a, r) in acc.iter_mut().zip(row) {
                    *a += v * r;
                }
            }
        }
        if acc.iter().all(|x| x % denom == 0) {
            let t: Vec<i64> = acc.iter().map(|x| x / denom).collect();
            let in_range = t.iter().all(|&x| (-d..=c).contains(&x));
            if in_range && t.contains(&c) && t.contains(&-d) {
                found.push(t);
            }
        }
        // odometer
        for v in values.iter_mut().rev() {
            if *v < c {
                *v += 1;
                continue 'outer;
            }
            *v = -d;
        }
        break;
    }

    if config.dedup {
        let sym = Symmetries::new(scenario);
        found.retain(|t| sym.is_canonical(t));
    }
    let extremes = |t: &[i64]| t.iter().filter(|&&x| x == c || x == -d).count();
    found.sort_by(|a, b| extremes(b).cmp(&extremes(a)).then_with(|| a.cmp(b)));
    let truncated = found.len() > config.max_candidates;
    found.truncate(config.max_candidates);

    let entries = found
        .into_iter()
        .map(|t| make_entry(&rep, t))
        .collect::<Result<Vec<_>>>()?;
    let pairs = complementary_pairs(scenario, &entries)?;
    Ok(Catalog {
        config: *config,
        entries,
        pairs,
        truncated,
    })
}
