//! Conjectured limits of the average `p`-torsion for small primes.
//!
//!     cargo run --example conjecture_targets

use monocubic::asymptote;
use monocubic::cubicforms::DiscSign;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>3} {:>12} {:>12} {:>10}", "p", "positive", "negative", "difference");
    for p in [2u64, 3, 5, 7, 11, 13] {
        let pos = asymptote::conjecture_target(p, DiscSign::Positive)?;
        let neg = asymptote::conjecture_target(p, DiscSign::Negative)?;
        let diff = asymptote::target_difference(p)?;
        println!(
            "{p:>3} {:>12} {:>12} {:>10}{}",
            pos.value.to_string(),
            neg.value.to_string(),
            diff.to_string(),
            if pos.flagged { "   (not expected to hold)" } else { "" }
        );
    }
    Ok(())
}
