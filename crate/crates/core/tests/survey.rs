mod common;

use monocubic::cubicforms::SignFilter;
use monocubic::survey::{self, CheckpointFile, RunOptions, SurveyAccumulator, SurveyConfig, SurveyError};
use num_rational::Ratio;
use proptest::prelude::*;

fn sign_name(s: SignFilter) -> &'static str {
    s.as_str()
}

#[test]
fn matches_cas_survey_fixture() {
    let oracle = common::survey_oracle();
    for sign in [SignFilter::Positive, SignFilter::Negative] {
        let want: Vec<_> = oracle.iter().filter(|r| r.sign == sign_name(sign)).collect();
        let mut cfg = SurveyConfig::new(100_000, sign, vec![2, 3, 5]);
        cfg.checkpoints = want.iter().map(|r| r.y).collect();
        let got = survey::run_survey(&cfg).unwrap();
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert_eq!((g.y, g.n, g.n_max, g.n_uncertified), (w.y, w.n, w.n_max, 0), "{sign:?} Y = {}", w.y);
            for (k, p) in [2, 3, 5].into_iter().enumerate() {
                let expected = (w.n_max > 0).then(|| Ratio::new(w.sums[k], w.n_max));
                assert_eq!(g.mu(p), expected, "{sign:?} Y = {} p = {p}", w.y);
            }
        }
    }
}

#[test]
fn both_signs_aggregate() {
    let run = |s| {
        let mut cfg = SurveyConfig::new(30_000, s, vec![2]);
        cfg.checkpoints = vec![1_000, 30_000];
        survey::run_survey(&cfg).unwrap()
    };
    let (pos, neg, both) = (run(SignFilter::Positive), run(SignFilter::Negative), run(SignFilter::Both));
    for k in 0..2 {
        assert_eq!(both[k].n, pos[k].n + neg[k].n);
        assert_eq!(both[k].n_max, pos[k].n_max + neg[k].n_max);
        let sum = |r: &survey::SurveyRecord| r.mu(2).map_or(0, |m| (m * r.n_max).to_integer());
        assert_eq!(sum(&both[k]), sum(&pos[k]) + sum(&neg[k]));
    }
}

#[test]
fn independent_of_tiles_and_workers() {
    let base = SurveyConfig::new(20_000, SignFilter::Both, vec![2, 3]);
    let reference = survey::run_survey(&base).unwrap();
    for width in [1, 8, 64, 1000] {
        for workers in [1, 4] {
            let cfg = SurveyConfig { tile_width: width, workers, ..base.clone() };
            assert_eq!(survey::run_survey(&cfg).unwrap(), reference, "width {width}, workers {workers}");
        }
    }
}

#[test]
fn interrupted_run_resumes_to_same_result() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.jsonl");
    let mut cfg = SurveyConfig::new(30_000, SignFilter::Negative, vec![2, 3]);
    cfg.tile_width = 4;
    let reference = survey::run_survey(&cfg).unwrap();
    let total = cfg.tiles().len();

    for stop in [1, total / 3, total - 1] {
        let _ = std::fs::remove_file(&path);
        let opts = RunOptions { checkpoint_file: Some(path.clone()), resume: true, stop_after_tiles: Some(stop) };
        match survey::run_survey_with(&cfg, &opts) {
            Err(SurveyError::Interrupted { completed, .. }) => assert!(completed >= stop),
            other => panic!("expected interruption, got {other:?}"),
        }
        let saved = CheckpointFile::load(&path).unwrap();
        assert!(saved.check_config(&cfg).is_ok());
        assert!(!saved.completed.is_empty() && saved.completed.len() < total);
        // a different worker count may pick the run up
        let more = SurveyConfig { workers: 3, ..cfg.clone() };
        let resumed = survey::run_survey_with(&more, &RunOptions { stop_after_tiles: None, ..opts }).unwrap();
        assert_eq!(resumed, reference, "stopped after {stop}");
    }
}

#[test]
fn resume_rejects_changed_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.jsonl");
    let cfg = SurveyConfig::new(5_000, SignFilter::Positive, vec![2]);
    let opts = RunOptions { checkpoint_file: Some(path.clone()), resume: true, stop_after_tiles: None };
    survey::run_survey_with(&cfg, &opts).unwrap();
    let changed = SurveyConfig { primes: vec![3], ..cfg.clone() };
    assert!(matches!(survey::run_survey_with(&changed, &opts), Err(SurveyError::ConfigMismatch { .. })));
    std::fs::write(&path, "not json\n").unwrap();
    assert!(matches!(survey::run_survey_with(&cfg, &opts), Err(SurveyError::Checkpoint(_))));
}

#[test]
fn csv_roundtrip_of_a_real_survey() {
    let cfg = SurveyConfig::new(50_000, SignFilter::Both, vec![2, 3]);
    let records = survey::run_survey(&cfg).unwrap();
    let mut buf = Vec::new();
    survey::write_survey_csv(&mut buf, &records).unwrap();
    assert_eq!(survey::read_survey_csv(&buf[..]).unwrap(), records);
}

#[test]
fn enumerate_rows_only_maximal() {
    let all = survey::enumerate_rows(10_000, SignFilter::Both, false).unwrap();
    let max = survey::enumerate_rows(10_000, SignFilter::Both, true).unwrap();
    assert_eq!(all.len() as u64, { let c = common::brute_counts(10_000); c.pos + c.neg });
    assert!(max.iter().all(|r| r.maximal && r.irreducible));
    assert_eq!(max.len(), all.iter().filter(|r| r.maximal).count());
}

fn accumulator() -> impl Strategy<Value = SurveyAccumulator> {
    (0u64..1000, 0u64..1000, 0u64..1000, proptest::collection::vec(0u64..5000, 3), 0u64..10).prop_map(
        |(n_forms, n_irreducible, n_max, torsion_sums, n_uncertified)| SurveyAccumulator {
            n_forms,
            n_irreducible,
            n_max,
            torsion_sums,
            n_uncertified,
        },
    )
}

proptest! {
    #[test]
    fn merge_is_commutative_and_associative(a in accumulator(), b in accumulator(), c in accumulator()) {
        prop_assert_eq!(a.merge(&b), b.merge(&a));
        prop_assert_eq!(a.merge(&b).merge(&c), a.merge(&b.merge(&c)));
        prop_assert_eq!(a.merge(&SurveyAccumulator::zero(3)), a);
    }

    #[test]
    fn geometric_grid_is_increasing(ymax in 10u64..10_000_000, n in 1u32..=20) {
        let g = survey::geometric_checkpoints(ymax, n);
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(g.last().copied(), Some(ymax));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn records_are_monotone(ymax in 100u64..20_000) {
        let cfg = SurveyConfig::new(ymax, SignFilter::Both, vec![2]);
        let r = survey::run_survey(&cfg).unwrap();
        for w in r.windows(2) {
            prop_assert!(w[0].n <= w[1].n && w[0].n_max <= w[1].n_max);
        }
        for rec in &r {
            prop_assert!(rec.n_max <= rec.n);
            if let Some(m) = rec.mu(2) {
                prop_assert!(m >= Ratio::from_integer(1));
            }
        }
    }
}
