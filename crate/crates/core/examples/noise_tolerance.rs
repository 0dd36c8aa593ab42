//! How much white noise each violation survives.
//!
//! For the equality two readings are printed: with the local prediction
//! frozen at its noiseless value, and with both sides recomputed on the
//! noisy table.

use lhv_bell::builtins::Builtin;
use lhv_bell::quantum::ReducedAngles;
use lhv_bell::violation::{report_at, Objective, Tolerance};

fn show(t: Tolerance) -> String {
    t.gamma()
        .map_or_else(|| format!("{t:?}"), |g| format!("{g:.4}"))
}

fn main() -> Result<(), lhv_bell::Error> {
    let upper = ReducedAngles::from_degrees(-67.5, 202.5, -67.5);
    let lower = ReducedAngles::from_degrees(22.5, -67.5, 22.5);
    let cases = [
        (Builtin::Ch, upper, Some(Objective::MaximizeUpper)),
        (Builtin::Eq33, lower, Some(Objective::MinimizeLower)),
        (Builtin::Eq34, lower, Some(Objective::MinimizeLower)),
        (
            Builtin::Equality,
            ReducedAngles::from_degrees(247.5, 67.5, 157.5),
            None,
        ),
    ];
    println!(
        "{:<9} {:>12} {:>16}",
        "subject", "fixed bound", "self-consistent"
    );
    for (b, angles, objective) in cases {
        let r = report_at(&b.subject(), angles, 0.0, objective)?;
        println!(
            "{:<9} {:>12} {:>16}",
            b.id(),
            show(r.tolerance_paper),
            show(r.tolerance_self_consistent)
        );
    }

    // The violation fades as noise is mixed in.
    let subject = Builtin::Eq34.subject();
    for gamma in [0.0, 0.1, 0.2, 0.29, 0.3] {
        let r = report_at(&subject, lower, gamma, Some(Objective::MinimizeLower))?;
        println!(
            "gamma {gamma:.2}: J = {:+.4}, violated = {}",
            r.quantum_value, r.violated
        );
    }
    Ok(())
}
