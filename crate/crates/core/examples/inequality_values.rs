//! Quantum values of the three inequalities at the two angle triples that
//! push them past their upper and lower local bounds.

use lhv_bell::builtins;
use lhv_bell::conversion::ConversionMatrix;
use lhv_bell::lhv::{expand, local_bounds};
use lhv_bell::quantum::{joint_table, ReducedAngles};
use lhv_bell::scenario::Scenario;
use lhv_bell::violation::evaluate;

fn main() -> Result<(), lhv_bell::Error> {
    let m = ConversionMatrix::build(Scenario::binary());
    let exprs = [builtins::ch(), builtins::eq33(), builtins::eq34()];
    for (x, y, z) in [(-67.5, 202.5, -67.5), (22.5, -67.5, 22.5)] {
        let table = joint_table(ReducedAngles::from_degrees(x, y, z).to_full());
        println!("x = {x}, y = {y}, z = {z}");
        for e in &exprs {
            let (lo, hi) = local_bounds(&expand(e, &m)?);
            let v = evaluate(e, &table)?;
            println!(
                "  {:<3} = {v:+.5}   local range [{lo}, {hi}]",
                e.name().unwrap_or("?")
            );
        }
    }
    Ok(())
}
