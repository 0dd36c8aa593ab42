//! Prints the term-by-term reduction behind the local equality
//! `|E1| + |E2| = 1` and behind the bound `-1 <= J <= 2`.
//!
//! ```bash
//! cargo run -p lhv-bell --example prove_equality
//! ```

use lhv_bell::builtins::Builtin;
use lhv_bell::proof::replay_appendix_proof;

fn main() -> Result<(), lhv_bell::Error> {
    for builtin in [Builtin::Equality, Builtin::Eq34] {
        let transcript = replay_appendix_proof(&builtin.subject())?;
        println!("==== {builtin} ====");
        print!("{transcript}");
        println!();
    }
    Ok(())
}
