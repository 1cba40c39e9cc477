//! Fraction of monogenized orders that are maximal, against `1/ζ(2)`.
//!
//!     cargo run --release --example maximality_ratios -- 2000000

use monocubic::cubicforms::SignFilter;
use monocubic::survey::{self, SurveyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ymax: u64 = std::env::args().nth(1).map_or(Ok(2_000_000), |s| s.parse())?;
    let zeta2_inv = 6.0 / std::f64::consts::PI.powi(2);

    for sign in [SignFilter::Positive, SignFilter::Negative] {
        let mut cfg = SurveyConfig::new(ymax, sign, vec![]);
        cfg.checkpoints = survey::geometric_checkpoints(ymax, 2);
        println!("{} discriminant", sign.as_str());
        for r in survey::run_survey(&cfg)? {
            if r.n == 0 {
                continue;
            }
            let ratio = r.n_max as f64 / r.n as f64;
            println!(
                "  Y = {:>9}  N = {:>7}  N_max = {:>7}  ratio {ratio:.5} ({:+.2}% vs 1/ζ(2))",
                r.y,
                r.n,
                r.n_max,
                100.0 * (ratio / zeta2_inv - 1.0)
            );
        }
    }
    Ok(())
}
