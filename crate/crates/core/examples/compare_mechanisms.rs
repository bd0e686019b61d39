//! Both mechanisms over a valuation grid, with figure tables written to a
//! directory.
//!
//! cargo run --release --example compare_mechanisms -- out/compare

use std::path::PathBuf;

use tullock::bench::{compare, Scenario};

fn main() -> tullock::Result<()> {
    let out = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "out/compare".into()),
    );
    let (cmp, files) = compare(&Scenario::paper(), None, &out)?;

    println!(
        "{:>5} {:>10} {:>10} {:>7} {:>10} {:>10} {:>7}",
        "nu", "pi_fixed", "pi_opf", "ratio", "U_fixed", "U_opf", "ratio"
    );
    for r in &cmp.rows {
        println!(
            "{:>5} {:>10.4} {:>10.4} {:>7.4} {:>10.4} {:>10.4} {:>7.4}",
            r.nu,
            r.profit_benchmark,
            r.profit_opf,
            r.profit_ratio,
            r.welfare_benchmark,
            r.welfare_opf,
            r.welfare_ratio
        );
    }
    for u in &cmp.uplift {
        println!(
            "nu = {}: contribution uplift {:.0}% at c_lo, {:.0}% at c_hi",
            u.nu, u.at_c_lo, u.at_c_hi
        );
    }
    println!("wrote {} files under {}", files.len(), out.display());
    Ok(())
}
