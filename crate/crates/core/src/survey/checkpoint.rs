//! Resumable survey state as line-delimited JSON.
//!
//! Line 1 is a header (format tag, version, config hash), line 2 lists the
//! finished tiles, and each further line holds the partial accumulator of
//! one checkpoint bucket.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{SurveyAccumulator, SurveyConfig, SurveyError};

pub(crate) const FORMAT_VERSION: u32 = 1;
const FORMAT_TAG: &str = "monocubic-survey-checkpoint";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckpointFile {
    pub version: u32,
    pub config_hash: String,
    /// Finished tiles as inclusive `I` ranges, in merge order.
    pub completed: Vec<(i128, i128)>,
    pub checkpoints: Vec<u64>,
    /// Partial accumulator per checkpoint bucket.
    pub buckets: Vec<SurveyAccumulator>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    config_hash: String,
}

#[derive(Serialize, Deserialize)]
struct Completed {
    completed: Vec<(i64, i64)>,
}

#[derive(Serialize, Deserialize)]
struct BucketLine {
    checkpoint: u64,
    acc: SurveyAccumulator,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SurveyError + '_ {
    move |source| SurveyError::Io { path: path.to_path_buf(), source }
}

fn bad(msg: impl Into<String>) -> SurveyError {
    SurveyError::Checkpoint(msg.into())
}

impl CheckpointFile {
    pub fn fresh(cfg: &SurveyConfig) -> Self {
        CheckpointFile {
            version: FORMAT_VERSION,
            config_hash: cfg.hash(),
            completed: Vec::new(),
            checkpoints: cfg.checkpoints.clone(),
            buckets: vec![SurveyAccumulator::zero(cfg.primes.len()); cfg.checkpoints.len()],
        }
    }

    pub fn check_config(&self, cfg: &SurveyConfig) -> Result<(), SurveyError> {
        let expected = cfg.hash();
        if self.config_hash != expected {
            return Err(SurveyError::ConfigMismatch { expected, found: self.config_hash.clone() });
        }
        if self.checkpoints != cfg.checkpoints {
            return Err(bad("checkpoint grid differs from the configuration"));
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let header = Header {
            format: FORMAT_TAG.into(),
            version: self.version,
            config_hash: self.config_hash.clone(),
        };
        let completed = Completed {
            completed: self.completed.iter().map(|&(a, b)| (a as i64, b as i64)).collect(),
        };
        out.push_str(&serde_json::to_string(&header).expect("header serializes"));
        out.push('\n');
        out.push_str(&serde_json::to_string(&completed).expect("tiles serialize"));
        out.push('\n');
        for (&checkpoint, acc) in self.checkpoints.iter().zip(&self.buckets) {
            let line = BucketLine { checkpoint, acc: acc.clone() };
            out.push_str(&serde_json::to_string(&line).expect("bucket serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, SurveyError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Header = serde_json::from_str(lines.next().ok_or_else(|| bad("empty file"))?)
            .map_err(|e| bad(format!("header: {e}")))?;
        if header.format != FORMAT_TAG {
            return Err(bad(format!("unknown format tag {:?}", header.format)));
        }
        if header.version != FORMAT_VERSION {
            return Err(bad(format!("unsupported version {}", header.version)));
        }
        let completed: Completed = serde_json::from_str(lines.next().ok_or_else(|| bad("missing tile list"))?)
            .map_err(|e| bad(format!("tile list: {e}")))?;
        let mut checkpoints = Vec::new();
        let mut buckets = Vec::new();
        for line in lines {
            let b: BucketLine = serde_json::from_str(line).map_err(|e| bad(format!("bucket: {e}")))?;
            checkpoints.push(b.checkpoint);
            buckets.push(b.acc);
        }
        Ok(CheckpointFile {
            version: header.version,
            config_hash: header.config_hash,
            completed: completed.completed.into_iter().map(|(a, b)| (a as i128, b as i128)).collect(),
            checkpoints,
            buckets,
        })
    }

    pub fn load(path: &Path) -> Result<Self, SurveyError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_jsonl(&text)
    }

    /// Atomic save: write a sibling temp file, flush, then rename over `path`.
    pub fn save(&self, path: &Path) -> Result<(), SurveyError> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = Path::new(&tmp);
        {
            let mut f = fs::File::create(tmp).map_err(io_err(tmp))?;
            f.write_all(self.to_jsonl().as_bytes()).map_err(io_err(tmp))?;
            f.sync_all().map_err(io_err(tmp))?;
        }
        fs::rename(tmp, path).map_err(io_err(path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubicforms::SignFilter;

    #[test]
    fn jsonl_roundtrip() {
        let cfg = SurveyConfig::new(1000, SignFilter::Negative, vec![2, 3]);
        let mut state = CheckpointFile::fresh(&cfg);
        state.completed = vec![(-10, -3), (-2, 5)];
        state.buckets[3].n_forms = 7;
        state.buckets[3].torsion_sums = vec![9, 8];
        let back = CheckpointFile::from_jsonl(&state.to_jsonl()).unwrap();
        assert_eq!(back, state);
        assert!(back.check_config(&cfg).is_ok());
        let other = SurveyConfig::new(1000, SignFilter::Negative, vec![2, 5]);
        assert!(matches!(back.check_config(&other), Err(SurveyError::ConfigMismatch { .. })));
    }
}
