//! Interrupt a survey half way, resume it from the checkpoint file and
//! compare with an uninterrupted run.
//!
//!     cargo run --release --example resume_survey

use monocubic::cubicforms::SignFilter;
use monocubic::survey::{self, RunOptions, SurveyConfig, SurveyError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = SurveyConfig::new(100_000, SignFilter::Negative, vec![2, 3]);
    cfg.tile_width = 8;
    cfg.workers = 2;
    let path = std::env::temp_dir().join("monocubic-resume-example.jsonl");
    let _ = std::fs::remove_file(&path);

    let tiles = cfg.tiles().len();
    let opts = RunOptions { checkpoint_file: Some(path.clone()), resume: true, stop_after_tiles: Some(tiles / 2) };
    match survey::run_survey_with(&cfg, &opts) {
        Err(SurveyError::Interrupted { completed, total }) => println!("interrupted after {completed}/{total} tiles"),
        other => return Err(format!("expected an interruption, got {other:?}").into()),
    }

    let resumed = survey::run_survey_with(&cfg, &RunOptions { stop_after_tiles: None, ..opts })?;
    let straight = survey::run_survey(&cfg)?;
    println!("resumed run identical to uninterrupted run: {}", resumed == straight);
    let last = resumed.last().expect("records");
    println!("Y = {}: N = {}, N_max = {}, mu_2 = {:?}", last.y, last.n, last.n_max, last.mu(2));
    std::fs::remove_file(&path)?;
    Ok(())
}
