//! Multi-start search for the angles giving the largest violation of each
//! builtin. Fixed seed, so the output is reproducible.

use lhv_bell::builtins::Builtin;
use lhv_bell::violation::{optimize, Objective};

fn main() -> Result<(), lhv_bell::Error> {
    let runs = [
        (Builtin::Ch, Objective::MaximizeUpper),
        (Builtin::Ch, Objective::MinimizeLower),
        (Builtin::Eq33, Objective::MinimizeLower),
        (Builtin::Eq34, Objective::MinimizeLower),
        (Builtin::Eq34, Objective::MaximizeUpper),
        (Builtin::Equality, Objective::MaximizeEqualityGap),
    ];
    for (b, objective) in runs {
        let r = optimize(&b.subject(), objective, 16, 7)?;
        let a = r.angles;
        println!(
            "{:<8} {:<22} value {:+.5}  violated {:<5}  at x = {}, y = {}, z = {}",
            b.id(),
            objective.id(),
            r.quantum_value,
            r.violated,
            a.x_deg,
            a.y_deg,
            a.z_deg
        );
    }
    Ok(())
}
