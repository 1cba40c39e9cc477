//! Height-bounded surveys: enumerate → maximality → class group → averages.
//!
//! Work is split into tiles of consecutive `I` values. Each tile yields one
//! accumulator per checkpoint bucket (forms with `Y_{c-1} ≤ H < Y_c`), and
//! records are prefix sums of the buckets, so the output does not depend on
//! tile width, worker count or completion order.

mod checkpoint;
mod csv_io;

use std::path::PathBuf;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arith;
use crate::classgroup::{self, ClassGroupConfig, ClassGroupError};
use crate::cubicfield::{CubicFieldData, FieldError};
use crate::cubicforms::{self, EnumeratedForm, FormError, SignFilter};

pub use checkpoint::CheckpointFile;
pub use csv_io::{read_survey_csv, write_forms_csv, write_survey_csv, FormRow};

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("invalid survey configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    ClassGroup(#[from] ClassGroupError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed checkpoint file: {0}")]
    Checkpoint(String),
    #[error("checkpoint was written for a different configuration (hash {found}, expected {expected})")]
    ConfigMismatch { expected: String, found: String },
    #[error("malformed survey csv: {0}")]
    Csv(String),
    #[error("stopped after {completed} of {total} tiles")]
    Interrupted { completed: usize, total: usize },
    #[error("thread pool: {0}")]
    Pool(String),
}

impl SurveyError {
    /// Whether the failure is an arithmetic overflow somewhere in the pipeline.
    pub fn is_arithmetic(&self) -> bool {
        matches!(
            self,
            SurveyError::Form(FormError::Overflow(_) | FormError::EnumerationOverflow { .. })
                | SurveyError::Field(FieldError::Overflow(_))
                | SurveyError::ClassGroup(ClassGroupError::Overflow(_))
        )
    }
}

/// Geometric checkpoints, `per_decade` per factor of ten from 10 up, plus `ymax`.
pub fn geometric_checkpoints(ymax: u64, per_decade: u32) -> Vec<u64> {
    let mut out = Vec::new();
    if per_decade > 0 {
        for k in per_decade.. {
            let y = 10f64.powf(k as f64 / per_decade as f64).round() as u64;
            if y >= ymax {
                break;
            }
            if out.last() != Some(&y) {
                out.push(y);
            }
        }
    }
    out.push(ymax);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyConfig {
    pub ymax: u64,
    pub sign: SignFilter,
    pub primes: Vec<u64>,
    /// Ascending heights, all `≤ ymax`; one record per entry.
    pub checkpoints: Vec<u64>,
    /// Number of consecutive `I` values per work unit.
    pub tile_width: u64,
    pub workers: usize,
    pub classgroup: ClassGroupConfig,
}

impl SurveyConfig {
    /// Geometric grid with 10 checkpoints per decade, 64-wide tiles, one worker.
    pub fn new(ymax: u64, sign: SignFilter, primes: Vec<u64>) -> Self {
        SurveyConfig {
            ymax,
            sign,
            primes,
            checkpoints: geometric_checkpoints(ymax, 10),
            tile_width: 64,
            workers: 1,
            classgroup: ClassGroupConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<(), SurveyError> {
        let bad = |m: String| Err(SurveyError::Config(m));
        if self.ymax < 1 {
            return bad("ymax must be at least 1".into());
        }
        if self.checkpoints.is_empty() {
            return bad("no checkpoints".into());
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("checkpoints must be strictly ascending".into());
        }
        if self.checkpoints.iter().any(|&y| y < 1 || y > self.ymax) {
            return bad(format!("checkpoints must lie in [1, {}]", self.ymax));
        }
        if let Some(p) = self.primes.iter().find(|&&p| !arith::is_prime(p)) {
            return bad(format!("{p} is not prime"));
        }
        let mut sorted = self.primes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.primes.len() {
            return bad("primes must be distinct".into());
        }
        if self.tile_width < 1 {
            return bad("tile width must be positive".into());
        }
        if self.workers < 1 {
            return bad("at least one worker is required".into());
        }
        Ok(())
    }

    /// SHA-256 over everything that affects the stored partial results;
    /// the worker count is deliberately left out.
    pub fn hash(&self) -> String {
        #[derive(Serialize)]
        struct Keyed<'a> {
            version: u32,
            ymax: u64,
            sign: SignFilter,
            primes: &'a [u64],
            checkpoints: &'a [u64],
            tile_width: u64,
            classgroup: &'a ClassGroupConfig,
        }
        let key = Keyed {
            version: checkpoint::FORMAT_VERSION,
            ymax: self.ymax,
            sign: self.sign,
            primes: &self.primes,
            checkpoints: &self.checkpoints,
            tile_width: self.tile_width,
            classgroup: &self.classgroup,
        };
        let json = serde_json::to_vec(&key).expect("config serializes");
        let digest = Sha256::digest(&json);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Tiles as inclusive `I` ranges, ascending.
    pub fn tiles(&self) -> Vec<(i128, i128)> {
        let bound = *self.checkpoints.last().unwrap_or(&self.ymax) as i128;
        let range = cubicforms::i_range(bound);
        let w = self.tile_width as i128;
        let mut out = Vec::new();
        let mut lo = *range.start();
        while lo <= *range.end() {
            let hi = (lo + w - 1).min(*range.end());
            out.push((lo, hi));
            lo = hi + 1;
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyAccumulator {
    /// Canonical forms with nonzero discriminant (reducible ones included).
    pub n_forms: u64,
    pub n_irreducible: u64,
    pub n_max: u64,
    /// `Σ |Cl(K)[p]|` over maximal forms, one entry per configured prime.
    pub torsion_sums: Vec<u64>,
    pub n_uncertified: u64,
}

impl SurveyAccumulator {
    pub fn zero(n_primes: usize) -> Self {
        SurveyAccumulator { torsion_sums: vec![0; n_primes], ..Default::default() }
    }

    /// Componentwise sum; a shorter `torsion_sums` is padded with zeros.
    pub fn merge(&self, other: &SurveyAccumulator) -> SurveyAccumulator {
        let n = self.torsion_sums.len().max(other.torsion_sums.len());
        let at = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        SurveyAccumulator {
            n_forms: self.n_forms + other.n_forms,
            n_irreducible: self.n_irreducible + other.n_irreducible,
            n_max: self.n_max + other.n_max,
            torsion_sums: (0..n)
                .map(|i| at(&self.torsion_sums, i) + at(&other.torsion_sums, i))
                .collect(),
            n_uncertified: self.n_uncertified + other.n_uncertified,
        }
    }
}

/// Survey output at one checkpoint height.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub y: u64,
    pub sign: SignFilter,
    pub n: u64,
    pub n_max: u64,
    pub n_uncertified: u64,
    /// `(p, μ_p)`; `None` when `N_max = 0`.
    pub mu: Vec<(u64, Option<Ratio<u64>>)>,
}

impl SurveyRecord {
    pub fn mu(&self, p: u64) -> Option<Ratio<u64>> {
        self.mu.iter().find(|(q, _)| *q == p).and_then(|(_, m)| *m)
    }
}

/// Options that steer a run without changing its results.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub checkpoint_file: Option<PathBuf>,
    pub resume: bool,
    /// Stop (with `SurveyError::Interrupted`) once this many tiles are done
    /// in total; used to exercise resumption.
    pub stop_after_tiles: Option<usize>,
}

/// Per-checkpoint buckets for one tile.
pub(crate) type Buckets = Vec<SurveyAccumulator>;

fn bucket_of(checkpoints: &[u64], height4: i128) -> Option<usize> {
    // first checkpoint with H < Y, i.e. height4 < 4Y
    let c = checkpoints.partition_point(|&y| 4 * y as i128 <= height4);
    (c < checkpoints.len()).then_some(c)
}

/// Contribution of a single enumerated form to `acc`.
fn accumulate(
    acc: &mut SurveyAccumulator,
    e: &EnumeratedForm,
    cfg: &SurveyConfig,
) -> Result<(), SurveyError> {
    acc.n_forms += 1;
    if !e.irreducible {
        return Ok(());
    }
    acc.n_irreducible += 1;
    let k = CubicFieldData::from_form(&e.form)?;
    if !k.maximal {
        return Ok(());
    }
    acc.n_max += 1;
    if cfg.primes.is_empty() {
        return Ok(());
    }
    let r = classgroup::class_group(&e.form, &k, &cfg.classgroup)?;
    for (sum, &p) in acc.torsion_sums.iter_mut().zip(&cfg.primes) {
        *sum += classgroup::p_torsion_size(&r.group, p)?;
    }
    if !r.stabilized {
        acc.n_uncertified += 1;
    }
    Ok(())
}

fn run_tile(cfg: &SurveyConfig, tile: (i128, i128)) -> Result<Buckets, SurveyError> {
    let bound = *cfg.checkpoints.last().expect("validated") as i128;
    let mut buckets = vec![SurveyAccumulator::zero(cfg.primes.len()); cfg.checkpoints.len()];
    for e in cubicforms::enumerate_tile(bound, cfg.sign, tile.0..=tile.1) {
        let e = e?;
        if let Some(c) = bucket_of(&cfg.checkpoints, e.inv.height4) {
            accumulate(&mut buckets[c], &e, cfg)?;
        }
    }
    Ok(buckets)
}

fn merge_buckets(into: &mut Buckets, other: &Buckets) {
    for (a, b) in into.iter_mut().zip(other) {
        *a = a.merge(b);
    }
}

/// Cumulative records from per-bucket accumulators.
pub fn records_from_buckets(cfg: &SurveyConfig, buckets: &[SurveyAccumulator]) -> Vec<SurveyRecord> {
    let mut total = SurveyAccumulator::zero(cfg.primes.len());
    cfg.checkpoints
        .iter()
        .zip(buckets)
        .map(|(&y, b)| {
            total = total.merge(b);
            SurveyRecord {
                y,
                sign: cfg.sign,
                n: total.n_forms,
                n_max: total.n_max,
                n_uncertified: total.n_uncertified,
                mu: cfg
                    .primes
                    .iter()
                    .zip(&total.torsion_sums)
                    .map(|(&p, &s)| (p, (total.n_max > 0).then(|| Ratio::new(s, total.n_max))))
                    .collect(),
            }
        })
        .collect()
}

/// Run (or resume) a survey and return one record per checkpoint.
pub fn run_survey(cfg: &SurveyConfig) -> Result<Vec<SurveyRecord>, SurveyError> {
    run_survey_with(cfg, &RunOptions::default())
}

pub fn run_survey_with(cfg: &SurveyConfig, opts: &RunOptions) -> Result<Vec<SurveyRecord>, SurveyError> {
    cfg.validate()?;
    let tiles = cfg.tiles();
    let mut state = match (&opts.checkpoint_file, opts.resume) {
        (Some(path), true) if path.exists() => {
            let state = CheckpointFile::load(path)?;
            state.check_config(cfg)?;
            state
        }
        _ => CheckpointFile::fresh(cfg),
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| SurveyError::Pool(e.to_string()))?;
    let pending: Vec<(i128, i128)> = tiles
        .iter()
        .copied()
        .filter(|t| !state.completed.contains(t))
        .collect();
    let batch = cfg.workers.max(1) * 2;
    let mut done = state.completed.len();
    for chunk in pending.chunks(batch) {
        let allowed = match opts.stop_after_tiles {
            Some(limit) if done >= limit => {
                return Err(SurveyError::Interrupted { completed: done, total: tiles.len() });
            }
            Some(limit) => (limit - done).min(chunk.len()),
            None => chunk.len(),
        };
        let chunk = &chunk[..allowed];
        let results: Vec<Result<Buckets, SurveyError>> =
            pool.install(|| chunk.par_iter().map(|&t| run_tile(cfg, t)).collect());
        // fold in ascending tile order regardless of completion order
        for (t, r) in chunk.iter().zip(results) {
            merge_buckets(&mut state.buckets, &r?);
            state.completed.push(*t);
        }
        done += chunk.len();
        if let Some(path) = &opts.checkpoint_file {
            state.save(path)?;
        }
    }
    if let Some(limit) = opts.stop_after_tiles {
        if done < tiles.len() && done >= limit {
            return Err(SurveyError::Interrupted { completed: done, total: tiles.len() });
        }
    }
    Ok(records_from_buckets(cfg, &state.buckets))
}

/// All canonical forms below `ymax`, with their maximality, for the forms CSV.
pub fn enumerate_rows(
    ymax: u64,
    sign: SignFilter,
    only_maximal: bool,
) -> Result<Vec<FormRow>, SurveyError> {
    let mut rows = Vec::new();
    for e in cubicforms::enumerate(ymax as i128, sign)? {
        let e = e?;
        let maximal = e.irreducible && CubicFieldData::from_form(&e.form)?.maximal;
        if only_maximal && !maximal {
            continue;
        }
        rows.push(FormRow {
            i: e.inv.i,
            j: e.inv.j,
            f1: e.form.f1,
            f2: e.form.f2,
            f3: e.form.f3,
            disc: e.inv.disc,
            height4: e.inv.height4,
            irreducible: e.irreducible,
            maximal,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_grid() {
        assert_eq!(geometric_checkpoints(1, 10), vec![1]);
        let g = geometric_checkpoints(1000, 10);
        assert_eq!(g.first(), Some(&10));
        assert_eq!(g.last(), Some(&1000));
        assert!(g.contains(&100) && g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.len(), 21);
    }

    #[test]
    fn empty_family() {
        let cfg = SurveyConfig::new(1, SignFilter::Both, vec![2]);
        let r = run_survey(&cfg).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].n, r[0].n_max), (0, 0));
        assert_eq!(r[0].mu(2), None);
    }

    #[test]
    fn merge_identity_and_commutativity() {
        let a = SurveyAccumulator { n_forms: 5, n_irreducible: 4, n_max: 3, torsion_sums: vec![4, 3], n_uncertified: 1 };
        let b = SurveyAccumulator { n_forms: 2, n_irreducible: 2, n_max: 1, torsion_sums: vec![2, 1], n_uncertified: 0 };
        assert_eq!(a.merge(&SurveyAccumulator::zero(2)), a);
        assert_eq!(a.merge(&b), b.merge(&a));
    }

    #[test]
    fn config_validation() {
        let mut cfg = SurveyConfig::new(100, SignFilter::Positive, vec![2, 4]);
        assert!(cfg.validate().is_err());
        cfg.primes = vec![2, 2];
        assert!(cfg.validate().is_err());
        cfg.primes = vec![2];
        cfg.checkpoints = vec![50, 40];
        assert!(cfg.validate().is_err());
        cfg.checkpoints = vec![40, 100];
        assert!(cfg.validate().is_ok());
    }
}
