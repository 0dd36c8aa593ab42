//! Rank of the conversion matrix for a few scenarios, next to the
//! closed-form count of independent probabilities.
//!
//! ```bash
//! cargo run -p lhv-bell --example rank_check
//! ```

use lhv_bell::conversion::{verify_rank_formula, ConstraintMatrix};
use lhv_bell::scenario::Scenario;

fn main() -> Result<(), lhv_bell::Error> {
    println!("scenario   N_Q  N_P  rank(M)  N_I  rank(C)  N_C");
    for spec in ["2,2,2,2", "2,3,2,2", "2,3,2,3", "3,3,3,3", "4,1,2,3"] {
        let s: Scenario = spec.parse()?;
        let r = verify_rank_formula(s)?;
        let c = ConstraintMatrix::build(s);
        println!(
            "{:<9} {:>4} {:>4} {:>8} {:>4} {:>8} {:>4}{}",
            s.to_string(),
            s.n_q(),
            s.n_p(),
            r.computed_rank,
            r.predicted_n_i,
            c.rank(),
            s.n_c(),
            if r.agrees { "" } else { "  MISMATCH" }
        );
    }
    Ok(())
}
