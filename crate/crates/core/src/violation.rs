//! Quantum values of Bell expressions, violation factors and white-noise
//! tolerances.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::builtins::Subject;
use crate::conversion::ConversionMatrix;
use crate::error::{Error, Result};
use crate::expression::BellExpression;
use crate::lhv::{expand, is_complementary, local_bounds, EqualityPair};
use crate::linalg::{self, Rational};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::quantum::{apply_noise, joint_table, QuantumJointTable, ReducedAngles};
use crate::scenario::Scenario;

/// Slack used when deciding whether a floating-point value crosses a bound.
pub const VIOLATION_EPS: f64 = 1e-9;

/// Grid spacing of the deterministic optimizer starts.
pub const GRID_STEP_DEG: f64 = 11.25;

/// Best grid points refined in addition to the random starts.
const GRID_STARTS: usize = 4;

fn require_binary(s: Scenario) -> Result<()> {
    if s != Scenario::binary() {
        return Err(Error::Contract(format!(
            "quantum tables exist for the 2,2,2,2 scenario only, got {s}"
        )));
    }
    Ok(())
}

/// `sum lambda * P` on a quantum table.
pub fn evaluate(expr: &BellExpression, table: &QuantumJointTable) -> Result<f64> {
    require_binary(expr.scenario())?;
    let probs = table.probs();
    let dense = expr.dense();
    Ok(dense
        .iter()
        .zip(probs)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, p)| linalg::to_f64(c) * p)
        .sum())
}

/// Value of the expression on pure white noise, `sum lambda / 4`.
pub fn noise_value(expr: &BellExpression) -> Rational {
    expr.coefficient_sum() * linalg::ratio(1, 4)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualityCheck {
    pub lhs_first: f64,
    pub lhs_second: f64,
    pub sum: f64,
    /// What a local theory would predict for `|first|` given `|second|`.
    pub local_prediction_first: f64,
    pub violated: bool,
}

pub fn check_equality(pair: &EqualityPair, table: &QuantumJointTable) -> Result<EqualityCheck> {
    require_binary(pair.scenario())?;
    let m = ConversionMatrix::build(pair.scenario());
    if !is_complementary(&expand(&pair.first, &m)?, &expand(&pair.second, &m)?) {
        return Err(Error::Contract("pair is not complementary".into()));
    }
    let lhs_first = evaluate(&pair.first, table)?.abs();
    let lhs_second = evaluate(&pair.second, table)?.abs();
    let sum = lhs_first + lhs_second;
    Ok(EqualityCheck {
        lhs_first,
        lhs_second,
        sum,
        local_prediction_first: 1.0 - lhs_second,
        violated: (sum - 1.0).abs() > VIOLATION_EPS,
    })
}

/// Outcome of a white-noise tolerance computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Tolerance {
    /// The violation persists for every noise fraction below `gamma`.
    Tolerates { gamma: f64 },
    /// Nothing to tolerate: the noiseless value is already local.
    NoViolation,
    /// The noiseless value equals the pure-noise value.
    Degenerate,
}

impl Tolerance {
    pub fn gamma(&self) -> Option<f64> {
        match self {
            Tolerance::Tolerates { gamma } => Some(*gamma),
            _ => None,
        }
    }
}

/// Noise fraction at which the mixed value `gamma * noise + (1 - gamma) * v`
/// reaches `bound`.
///
/// The pure-noise value always lies on the local side of the bound, so `v`
/// is a violation only if it sits strictly on the other side.
pub fn noise_tolerance(value: f64, bound: f64, noise_value: f64) -> Tolerance {
    if value == noise_value {
        return Tolerance::Degenerate;
    }
    let side = value - bound;
    if side.abs() <= VIOLATION_EPS || (noise_value - bound) * side > 0.0 {
        return Tolerance::NoViolation;
    }
    let gamma = ((value - bound) / (value - noise_value)).clamp(0.0, 1.0);
    Tolerance::Tolerates { gamma }
}

fn noisy_sum(pair: &EqualityPair, table: &QuantumJointTable, gamma: f64) -> Result<f64> {
    let noisy = apply_noise(table, gamma)?;
    Ok(evaluate(&pair.first, &noisy)?.abs() + evaluate(&pair.second, &noisy)?.abs())
}

/// Smallest noise fraction at which `|E1| + |E2| = 1` holds again, with
/// noise applied to both terms. Found by bisection to `1e-10`.
pub fn equality_tolerance_self_consistent(
    pair: &EqualityPair,
    angles: ReducedAngles,
) -> Result<Tolerance> {
    let table = joint_table(angles.to_full());
    let violated =
        |g: f64| -> Result<bool> { Ok((noisy_sum(pair, &table, g)? - 1.0).abs() > VIOLATION_EPS) };
    if !violated(0.0)? {
        return Ok(Tolerance::NoViolation);
    }
    if violated(1.0)? {
        return Ok(Tolerance::Tolerates { gamma: 1.0 });
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if violated(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Tolerance::Tolerates { gamma: hi })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    MaximizeUpper,
    MinimizeLower,
    MaximizeEqualityGap,
}

impl Objective {
    pub fn id(self) -> &'static str {
        match self {
            Objective::MaximizeUpper => "maximize_upper",
            Objective::MinimizeLower => "minimize_lower",
            Objective::MaximizeEqualityGap => "maximize_equality_gap",
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maximize_upper" => Ok(Objective::MaximizeUpper),
            "minimize_lower" => Ok(Objective::MinimizeLower),
            "maximize_equality_gap" => Ok(Objective::MaximizeEqualityGap),
            _ => Err(Error::Parse(format!(
                "unknown objective {s:?}; expected maximize_upper, minimize_lower or maximize_equality_gap"
            ))),
        }
    }
}

/// Angles as reported: degrees rounded to 4 decimals and full radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportAngles {
    pub x_deg: f64,
    pub y_deg: f64,
    pub z_deg: f64,
    pub w_deg: f64,
    pub x_rad: f64,
    pub y_rad: f64,
    pub z_rad: f64,
    pub w_rad: f64,
}

fn round4(x: f64) -> f64 {
    let r = (x * 1e4).round() / 1e4;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl From<ReducedAngles> for ReportAngles {
    fn from(r: ReducedAngles) -> Self {
        Self {
            x_deg: round4(r.x.to_degrees()),
            y_deg: round4(r.y.to_degrees()),
            z_deg: round4(r.z.to_degrees()),
            w_deg: round4(r.w().to_degrees()),
            x_rad: r.x,
            y_rad: r.y,
            z_rad: r.z,
            w_rad: r.w(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchInfo {
    pub restarts: usize,
    pub seed: u64,
    pub grid_step_deg: f64,
    pub local_searches: usize,
    pub evaluations: usize,
}

/// Quantum value of an expression or equality at given angles, with the
/// local bound it is compared against and its noise tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub subject: String,
    pub objective: Option<Objective>,
    pub angles: ReportAngles,
    pub gamma: f64,
    /// Signed value of each expression (one, or two for a pair).
    pub values: Vec<NamedValue>,
    /// Exact local range of an expression; absent for equalities.
    pub local_lower: Option<String>,
    pub local_upper: Option<String>,
    /// The value compared against the local bound. For an equality this is
    /// the larger of `|E1|`, `|E2|`.
    pub quantum_value: f64,
    /// The bound being tested. For an equality this is `1 - (smaller term)`.
    pub local_bound: Option<f64>,
    pub violated: bool,
    pub violation_factor: Option<f64>,
    pub objective_value: Option<f64>,
    pub noise_value: f64,
    pub noise_value_exact: String,
    /// Tolerance with the local bound held at its noiseless value.
    pub tolerance_paper: Tolerance,
    /// Tolerance with noise applied to every term.
    pub tolerance_self_consistent: Tolerance,
    pub equality: Option<EqualityCheck>,
    pub search: Option<SearchInfo>,
}

fn subject_name(subject: &Subject) -> String {
    match subject {
        Subject::Expression(e) => e.name().unwrap_or("expression").to_string(),
        Subject::Pair(p) => format!(
            "|{}| + |{}| = 1",
            p.first.name().unwrap_or("E1"),
            p.second.name().unwrap_or("E2")
        ),
    }
}

fn objective_fits(subject: &Subject, objective: Objective) -> Result<()> {
    match (subject, objective) {
        (Subject::Pair(_), Objective::MaximizeEqualityGap) => Ok(()),
        (Subject::Expression(_), Objective::MaximizeUpper | Objective::MinimizeLower) => Ok(()),
        (Subject::Pair(_), _) => Err(Error::Contract(
            "equalities are optimized with maximize_equality_gap".into(),
        )),
        (Subject::Expression(_), _) => Err(Error::Contract(
            "maximize_equality_gap needs an equality pair".into(),
        )),
    }
}

/// Objective value to maximize at the given angles.
fn objective_value(subject: &Subject, objective: Objective, angles: ReducedAngles) -> f64 {
    let table = joint_table(angles.to_full());
    match subject {
        Subject::Expression(e) => {
            let v = evaluate(e, &table).expect("binary scenario checked");
            match objective {
                Objective::MinimizeLower => -v,
                _ => v,
            }
        }
        Subject::Pair(p) => {
            let a = evaluate(&p.first, &table)
                .expect("binary scenario checked")
                .abs();
            let b = evaluate(&p.second, &table)
                .expect("binary scenario checked")
                .abs();
            a + b - 1.0
        }
    }
}

/// Builds the report for a subject at fixed angles.
///
/// With `objective` set, the bound on that side is the one tested; without
/// it, whichever bound is crossed (if any).
pub fn report_at(
    subject: &Subject,
    angles: ReducedAngles,
    gamma: f64,
    objective: Option<Objective>,
) -> Result<ViolationReport> {
    if let Some(o) = objective {
        objective_fits(subject, o)?;
    }
    let clean = joint_table(angles.to_full());
    let table = apply_noise(&clean, gamma)?;
    match subject {
        Subject::Expression(e) => expression_report(e, angles, &clean, &table, objective),
        Subject::Pair(p) => pair_report(p, angles, &clean, &table, objective),
    }
}

fn expression_report(
    expr: &BellExpression,
    angles: ReducedAngles,
    clean: &QuantumJointTable,
    table: &QuantumJointTable,
    objective: Option<Objective>,
) -> Result<ViolationReport> {
    require_binary(expr.scenario())?;
    let m = ConversionMatrix::build(expr.scenario());
    let (lower, upper) = local_bounds(&expand(expr, &m)?);
    let (lo, hi) = (linalg::to_f64(&lower), linalg::to_f64(&upper));
    let value = evaluate(expr, table)?;
    let clean_value = evaluate(expr, clean)?;
    let nv = noise_value(expr);
    let nvf = linalg::to_f64(&nv);

    let side_bound = match objective {
        Some(Objective::MaximizeUpper) => Some(hi),
        Some(Objective::MinimizeLower) => Some(lo),
        _ if value > hi + VIOLATION_EPS => Some(hi),
        _ if value < lo - VIOLATION_EPS => Some(lo),
        _ => None,
    };
    let violated = value > hi + VIOLATION_EPS || value < lo - VIOLATION_EPS;
    let factor = side_bound
        .filter(|b| *b != 0.0)
        .map(|b| value.abs() / b.abs());
    let tolerance = match side_bound {
        Some(b) => noise_tolerance(clean_value, b, nvf),
        None => Tolerance::NoViolation,
    };
    Ok(ViolationReport {
        subject: subject_name(&Subject::Expression(expr.clone())),
        objective,
        angles: angles.into(),
        gamma: table.gamma(),
        values: vec![NamedValue {
            name: expr.name().unwrap_or("expression").to_string(),
            value,
        }],
        local_lower: Some(lower.to_string()),
        local_upper: Some(upper.to_string()),
        quantum_value: value,
        local_bound: side_bound,
        violated,
        violation_factor: factor,
        objective_value: objective.map(|o| match o {
            Objective::MinimizeLower => -value,
            _ => value,
        }),
        noise_value: nvf,
        noise_value_exact: nv.to_string(),
        tolerance_paper: tolerance,
        // The bound of an inequality does not move with noise, so both
        // readings coincide.
        tolerance_self_consistent: tolerance,
        equality: None,
        search: None,
    })
}

fn pair_report(
    pair: &EqualityPair,
    angles: ReducedAngles,
    clean: &QuantumJointTable,
    table: &QuantumJointTable,
    objective: Option<Objective>,
) -> Result<ViolationReport> {
    let check = check_equality(pair, table)?;
    let clean_check = check_equality(pair, clean)?;
    let v1 = evaluate(&pair.first, table)?;
    let v2 = evaluate(&pair.second, table)?;

    // The dominant term is compared against what locality predicts from
    // the other one.
    let first_dominates = clean_check.lhs_first >= clean_check.lhs_second;
    let (dominant_expr, dom, other, clean_dom, clean_other) = if first_dominates {
        (
            &pair.first,
            check.lhs_first,
            check.lhs_second,
            clean_check.lhs_first,
            clean_check.lhs_second,
        )
    } else {
        (
            &pair.second,
            check.lhs_second,
            check.lhs_first,
            clean_check.lhs_second,
            clean_check.lhs_first,
        )
    };
    let bound = 1.0 - other;
    let factor = (check.violated && bound != 0.0).then(|| dom / bound.abs());
    let nv = noise_value(dominant_expr);
    let nvf = linalg::to_f64(&nv);
    let tolerance_paper = if clean_check.violated {
        noise_tolerance(clean_dom, 1.0 - clean_other, nvf)
    } else {
        Tolerance::NoViolation
    };
    let tolerance_self_consistent = equality_tolerance_self_consistent(pair, angles)?;

    Ok(ViolationReport {
        subject: subject_name(&Subject::Pair(pair.clone())),
        objective,
        angles: angles.into(),
        gamma: table.gamma(),
        values: vec![
            NamedValue {
                name: pair.first.name().unwrap_or("E1").to_string(),
                value: v1,
            },
            NamedValue {
                name: pair.second.name().unwrap_or("E2").to_string(),
                value: v2,
            },
        ],
        local_lower: None,
        local_upper: None,
        quantum_value: dom,
        local_bound: Some(bound),
        violated: check.violated,
        violation_factor: factor,
        objective_value: objective.map(|_| check.sum - 1.0),
        noise_value: nvf,
        noise_value_exact: nv.to_string(),
        tolerance_paper,
        tolerance_self_consistent,
        equality: Some(check),
        search: None,
    })
}

/// Reduces each angle into `[0, pi)`; every probability has period `pi` in
/// each of `x`, `y`, `z`.
fn normalize(x: [f64; 3]) -> [f64; 3] {
    x.map(|a| {
        let r = a.rem_euclid(std::f64::consts::PI);
        if r >= std::f64::consts::PI {
            0.0
        } else {
            r
        }
    })
}

fn better(a: (f64, [f64; 3]), b: (f64, [f64; 3])) -> bool {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => {
            a.1.iter()
                .zip(&b.1)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .is_some_and(|o| o.is_lt())
        }
    }
}

/// Multi-start search over `(x, y, z)` for the strongest violation.
///
/// Starts are the best points of an 11.25-degree grid plus `restarts`
/// uniformly random points drawn from `seed`; each is refined by a
/// Nelder-Mead search. The result depends only on `(restarts, seed)`.
pub fn optimize(
    subject: &Subject,
    objective: Objective,
    restarts: usize,
    seed: u64,
) -> Result<ViolationReport> {
    if restarts == 0 {
        return Err(Error::Contract("restarts must be at least 1".into()));
    }
    objective_fits(subject, objective)?;
    let scenario = match subject {
        Subject::Expression(e) => e.scenario(),
        Subject::Pair(p) => p.scenario(),
    };
    require_binary(scenario)?;

    let f =
        |x: &[f64; 3]| objective_value(subject, objective, ReducedAngles::new(x[0], x[1], x[2]));
    let mut evaluations = 0;

    let steps = (180.0 / GRID_STEP_DEG).round() as usize;
    let step = GRID_STEP_DEG.to_radians();
    let mut grid: Vec<(f64, [f64; 3])> = Vec::with_capacity(steps.pow(3));
    for a in 0..steps {
        for b in 0..steps {
            for c in 0..steps {
                let x = [a as f64 * step, b as f64 * step, c as f64 * step];
                grid.push((f(&x), x));
            }
        }
    }
    evaluations += grid.len();
    grid.sort_by(|p, q| q.0.total_cmp(&p.0));

    let mut starts: Vec<[f64; 3]> = grid.iter().take(GRID_STARTS).map(|g| g.1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        starts.push(std::array::from_fn(|_| {
            rng.gen_range(0.0..std::f64::consts::PI)
        }));
    }

    let opts = NelderMeadOptions::default();
    let mut best: Option<(f64, [f64; 3])> = None;
    for start in &starts {
        let m = nelder_mead(|x: &[f64; 3]| -f(x), *start, opts);
        evaluations += m.evaluations;
        let x = normalize(m.x);
        let candidate = (f(&x), x);
        if best.is_none_or(|b| better(candidate, b)) {
            best = Some(candidate);
        }
    }
    let (_, x) = best.expect("at least one start");
    let mut report = report_at(
        subject,
        ReducedAngles::new(x[0], x[1], x[2]),
        0.0,
        Some(objective),
    )?;
    report.search = Some(SearchInfo {
        restarts,
        seed,
        grid_step_deg: GRID_STEP_DEG,
        local_searches: starts.len(),
        evaluations,
    });
    Ok(report)
}
