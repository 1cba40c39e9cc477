//! Average `p`-torsion of class groups over the height-bounded family,
//! written as survey CSV to stdout.
//!
//!     cargo run --release --example torsion_survey -- 100000 > survey.csv

use monocubic::cubicforms::SignFilter;
use monocubic::survey::{self, SurveyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ymax: u64 = std::env::args().nth(1).map_or(Ok(100_000), |s| s.parse())?;
    let mut records = Vec::new();
    for sign in [SignFilter::Positive, SignFilter::Negative] {
        let cfg = SurveyConfig::new(ymax, sign, vec![2, 3, 5]);
        let r = survey::run_survey(&cfg)?;
        let last = r.last().expect("one record per checkpoint");
        eprintln!(
            "{}: N = {}, N_max = {}, mu_2 = {}, mu_3 = {}",
            sign.as_str(),
            last.n,
            last.n_max,
            last.mu(2).map_or("NA".into(), |m| format!("{:.4}", *m.numer() as f64 / *m.denom() as f64)),
            last.mu(3).map_or("NA".into(), |m| format!("{:.4}", *m.numer() as f64 / *m.denom() as f64)),
        );
        records.extend(r);
    }
    survey::write_survey_csv(std::io::stdout().lock(), &records)?;
    Ok(())
}
