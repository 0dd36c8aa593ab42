//! The local equality `|E1| + |E2| = 1` evaluated on the entangled state.
//!
//! Locality fixes `|E1|` once `|E2|` is measured; the quantum value of
//! `|E1|` overshoots that prediction.

use lhv_bell::builtins::Builtin;
use lhv_bell::quantum::ReducedAngles;
use lhv_bell::violation::report_at;

fn main() -> Result<(), lhv_bell::Error> {
    let subject = Builtin::Equality.subject();
    for (x, y, z) in [
        (247.46, 67.49, 157.50),
        (247.5, 67.5, 157.5),
        (0.0, 0.0, 0.0),
    ] {
        let r = report_at(&subject, ReducedAngles::from_degrees(x, y, z), 0.0, None)?;
        let eq = r.equality.expect("pair report");
        println!("x = {x}, y = {y}, z = {z}");
        println!(
            "  |E1| = {:.4}  |E2| = {:.4}  sum = {:.4}",
            eq.lhs_first, eq.lhs_second, eq.sum
        );
        match r.violation_factor {
            Some(f) => println!(
                "  local prediction {:.4}, quantum {:.4}, factor {f:.4}",
                r.local_bound.unwrap_or(f64::NAN),
                r.quantum_value
            ),
            None => println!("  no violation"),
        }
    }
    Ok(())
}
