//! Which LHV probabilities `q` feed each observable probability `P` in the
//! two-outcome scenario, plus the same matrix as CSV.

use lhv_bell::conversion::ConversionMatrix;
use lhv_bell::scenario::Scenario;

fn main() {
    let m = ConversionMatrix::build(Scenario::binary());
    print!("{}", m.p_to_q_table());
    println!();
    print!("{}", m.to_csv());
}
