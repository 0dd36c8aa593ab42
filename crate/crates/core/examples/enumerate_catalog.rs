//! Finds Bell expressions by searching q-space targets.
//!
//! The 0/1 search turns up the complementary pair behind the equality; the
//! bounded searches turn up the patterns of the two larger inequalities.
//!
//! ```bash
//! cargo run -p lhv-bell --example enumerate_catalog
//! ```

use lhv_bell::builtins;
use lhv_bell::conversion::ConversionMatrix;
use lhv_bell::enumeration::{enumerate_binary, search_bounded, SearchConfig};
use lhv_bell::expression::BellExpression;
use lhv_bell::lhv::expand;
use lhv_bell::scenario::Scenario;
use num_traits::ToPrimitive;

fn pattern(e: &BellExpression) -> Vec<i64> {
    let m = ConversionMatrix::build(e.scenario());
    expand(e, &m)
        .expect("same scenario")
        .coeffs()
        .iter()
        .map(|c| c.to_integer().to_i64().expect("small"))
        .collect()
}

fn main() -> Result<(), lhv_bell::Error> {
    let s = Scenario::binary();

    let binary = enumerate_binary(&SearchConfig::new(s, 1, 0, 1000, false)?)?;
    println!(
        "0/1 targets: {} representable, {} complementary pairs",
        binary.entries.len(),
        binary.pairs.len()
    );
    let (e1, e2) = (pattern(&builtins::e1()), pattern(&builtins::e2()));
    println!("  E1/E2 pair present: {}", binary.has_pair(&e1, &e2));
    let deduped = enumerate_binary(&SearchConfig::new(s, 1, 0, 1000, true)?)?;
    println!("  up to relabeling: {}", deduped.entries.len());

    for (c, d, expr) in [(1, 1, builtins::eq33()), (2, 1, builtins::eq34())] {
        let cat = search_bounded(&SearchConfig::new(s, c, d, 100, false)?)?;
        let target = pattern(&expr);
        println!(
            "c = {c}, d = {d}: kept {} (truncated: {}), {} at position {:?}",
            cat.entries.len(),
            cat.truncated,
            expr.name().unwrap_or("?"),
            cat.position(&target)
        );
        if let Some(i) = cat.position(&target) {
            println!("  lambda: {}", cat.entries[i].lambda);
        }
    }
    Ok(())
}
