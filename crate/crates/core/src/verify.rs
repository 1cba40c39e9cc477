//! Self-checks behind `monocubic verify`.
//!
//! `Quick` keeps every check under a few seconds; `Full` runs the published
//! scales (the μ₂ survey at `Y = 10⁶` dominates).

use std::collections::HashSet;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptote::{self, DataSeries, FixedParams};
use crate::classgroup::{self, AbelianGroupStructure, ClassGroupConfig};
use crate::cubicfield::{CubicFieldData, MonicCubic};
use crate::cubicforms::{self, BinaryCubicForm, DiscSign, ShearMap, SignFilter};
use crate::survey::{self, RunOptions, SurveyConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

impl CheckResult {
    fn new(id: u32, name: &'static str, ok: bool, detail: String) -> Self {
        let outcome = if ok { Outcome::Pass } else { Outcome::Fail };
        CheckResult { id, name, outcome, detail }
    }
}

/// `f1,f2,f3,field_disc,class_group` rows; see the fixture generator.
pub const DEFAULT_ORACLE: &str = include_str!("../tests/fixtures/cas_oracle.csv");

pub fn run(level: Level, oracle_csv: &str) -> Vec<CheckResult> {
    let checks: Vec<fn(Level, &str) -> CheckResult> = vec![
        |_, _| counts(),
        |_, _| ratios(),
        |_, _| asymptotic_counts(),
        |_, o| oracle(o),
        |l, _| identities(l),
        |_, _| shear_action(),
        |_, _| torsion(),
        |_, _| snf_properties(),
        |l, _| mu2(l),
        |_, _| fitter(),
        |_, _| targets(),
        |l, _| determinism(l),
    ];
    checks.into_iter().map(|c| c(level, oracle_csv)).collect()
}

fn counts_at(y: u64, sign: SignFilter) -> Result<(u64, u64), String> {
    let mut cfg = SurveyConfig::new(y, sign, vec![]);
    cfg.checkpoints = vec![y];
    let r = survey::run_survey(&cfg).map_err(|e| e.to_string())?;
    Ok((r[0].n, r[0].n_max))
}

fn counts() -> CheckResult {
    let got = counts_at(2_000_000, SignFilter::Positive).and_then(|p| Ok((p, counts_at(2_000_000, SignFilter::Negative)?)));
    match got {
        Ok((pos, neg)) => CheckResult::new(
            1,
            "exact counts at Y = 2e6",
            pos == (10405, 6318) && neg == (42143, 25662),
            format!("N+ = {}, Nmax+ = {}, N- = {}, Nmax- = {}", pos.0, pos.1, neg.0, neg.1),
        ),
        Err(e) => CheckResult::new(1, "exact counts at Y = 2e6", false, e),
    }
}

fn ratios() -> CheckResult {
    let zeta2_inv = 6.0 / std::f64::consts::PI.powi(2);
    let mut ok = true;
    let mut detail = Vec::new();
    for sign in [SignFilter::Positive, SignFilter::Negative] {
        match counts_at(2_000_000, sign) {
            Ok((n, m)) => {
                let r = m as f64 / n as f64;
                let rel = (r - zeta2_inv).abs() / zeta2_inv;
                ok &= rel < 0.002;
                detail.push(format!("{}: {r:.6} ({:.3}%)", sign.as_str(), 100.0 * rel));
            }
            Err(e) => return CheckResult::new(2, "maximality ratios", false, e),
        }
    }
    CheckResult::new(2, "maximality ratios within 0.2% of 1/zeta(2)", ok, detail.join(", "))
}

fn asymptotic_counts() -> CheckResult {
    let mut ok = true;
    let mut detail = Vec::new();
    for y in [100_000u64, 1_000_000, 2_000_000] {
        for (sign, c) in [(SignFilter::Positive, 8.0 / 135.0), (SignFilter::Negative, 32.0 / 135.0)] {
            match counts_at(y, sign) {
                Ok((n, _)) => {
                    let expect = c * (y as f64).powf(5.0 / 6.0);
                    let rel = (n as f64 - expect).abs() / expect;
                    ok &= rel < 0.03;
                    detail.push(format!("{}@{y}: {:.2}%", sign.as_str(), 100.0 * rel));
                }
                Err(e) => return CheckResult::new(3, "count asymptotics", false, e),
            }
        }
    }
    CheckResult::new(3, "count asymptotics within 3%", ok, detail.join(", "))
}

fn oracle(csv_text: &str) -> CheckResult {
    let name = "class groups match the oracle fixture";
    let cfg = ClassGroupConfig::default();
    let (mut checked, mut bad, mut unstable) = (0, 0, 0);
    let mut first_bad = String::new();
    for line in csv_text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let c: Vec<&str> = line.split(',').collect();
        let parsed = (|| -> Option<(BinaryCubicForm, i128, AbelianGroupStructure)> {
            let f = BinaryCubicForm::monic(c.first()?.parse().ok()?, c.get(1)?.parse().ok()?, c.get(2)?.parse().ok()?);
            Some((f, c.get(3)?.parse().ok()?, c.get(4)?.parse().ok()?))
        })();
        let Some((f, field_disc, want)) = parsed else {
            return CheckResult::new(4, name, false, format!("bad fixture line {line:?}"));
        };
        let k = match CubicFieldData::from_form(&f) {
            Ok(k) => k,
            Err(e) => return CheckResult::new(4, name, false, format!("{f}: {e}")),
        };
        if k.maximal != (k.disc == field_disc) {
            bad += 1;
            first_bad = format!("{f}: maximality disagrees");
            continue;
        }
        if !k.maximal {
            continue;
        }
        checked += 1;
        match classgroup::class_group(&f, &k, &cfg) {
            Ok(r) => {
                unstable += usize::from(!r.stabilized);
                if r.group != want {
                    bad += 1;
                    first_bad = format!("{f}: got {} want {want}", r.group);
                }
            }
            Err(e) => {
                bad += 1;
                first_bad = format!("{f}: {e}");
            }
        }
    }
    let detail = format!("{checked} maximal fields, {bad} mismatches, {unstable} unstabilized {first_bad}");
    CheckResult::new(4, name, checked > 0 && bad == 0 && unstable == 0, detail.trim_end().to_string())
}

fn identities(level: Level) -> CheckResult {
    let y: i128 = if level == Level::Full { 1_000_000 } else { 100_000 };
    let name = "invariant identities and (I, J) roundtrip";
    let mut seen = HashSet::new();
    let (mut n, mut bad) = (0u64, 0u64);
    let iter = match cubicforms::enumerate(y, SignFilter::Both) {
        Ok(it) => it,
        Err(e) => return CheckResult::new(5, name, false, e.to_string()),
    };
    for e in iter {
        let Ok(e) = e else {
            bad += 1;
            continue;
        };
        n += 1;
        let f = e.form;
        let direct = MonicCubic::new(f.f1, f.f2, f.f3).discriminant().unwrap_or(0);
        let (i, j) = (e.inv.i, e.inv.j);
        let ok = 27 * direct == 4 * i * i * i - j * j
            && direct == e.inv.disc
            && cubicforms::form_from_ij(i, j) == Some(f)
            && seen.insert((i, j));
        bad += u64::from(!ok);
    }
    CheckResult::new(5, name, bad == 0 && n > 0, format!("{n} forms below {y}, {bad} violations"))
}

fn shear_action() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = 0;
    for _ in 0..1000 {
        let f = BinaryCubicForm::monic(rng.gen_range(-50..=50), rng.gen_range(-50..=50), rng.gen_range(-50..=50));
        let s = ShearMap::new(rng.gen_range(-20..=20));
        let ok = (|| -> Option<bool> {
            let g = s.apply(&f).ok()?;
            let (fi, gi) = (cubicforms::invariants(&f).ok()?, cubicforms::invariants(&g).ok()?);
            let (rf, _) = cubicforms::reduce(&f).ok()?;
            let (rg, _) = cubicforms::reduce(&g).ok()?;
            let (rr, _) = cubicforms::reduce(&rf).ok()?;
            Some((fi.i, fi.j) == (gi.i, gi.j) && g.f0 == f.f0 && rf == rg && rr == rf)
        })();
        bad += usize::from(ok != Some(true));
    }
    CheckResult::new(6, "shear action properties (1000 pairs)", bad == 0, format!("{bad} failures"))
}

/// Every divisibility chain with product at most `max_order`.
pub fn abelian_groups(max_order: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, order: u64, max: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let start = prefix.last().copied().unwrap_or(2);
        let mut d = start;
        while order * d <= max {
            if prefix.last().map_or(true, |&l| d % l == 0) {
                prefix.push(d);
                extend(prefix, order * d, max, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_order, &mut out);
    out
}

fn brute_torsion(factors: &[u64], p: u64) -> u64 {
    let order: u64 = factors.iter().product();
    (0..order)
        .filter(|&idx| {
            // mixed-radix decode into ⊕ Z/d_i
            let mut rest = idx;
            factors.iter().all(|&d| {
                let x = rest % d;
                rest /= d;
                (p * x) % d == 0
            })
        })
        .count() as u64
}

fn torsion() -> CheckResult {
    let groups = abelian_groups(200);
    let mut bad = 0;
    for g in &groups {
        let s = AbelianGroupStructure::new(g.clone()).expect("chain");
        for p in [2, 3, 5, 7, 11] {
            bad += usize::from(classgroup::p_torsion_size(&s, p).ok() != Some(brute_torsion(g, p)));
        }
    }
    CheckResult::new(7, "p-torsion vs brute force", bad == 0, format!("{} groups, {bad} mismatches", groups.len()))
}

fn det(m: &[Vec<i128>]) -> i128 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * det(&minor)
        })
        .sum()
}

fn snf_properties() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = 0;
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let m: Vec<Vec<i128>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-20..=20)).collect()).collect();
        let Ok(s) = classgroup::smith_normal_form(&m) else {
            bad += 1;
            continue;
        };
        let d = &s.diagonal;
        let mut ok = d.windows(2).all(|w| w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        if r == c {
            let dm = det(&m);
            if dm != 0 {
                ok &= d.iter().product::<i128>() == dm.abs();
            }
        }
        bad += usize::from(!ok);
    }
    CheckResult::new(8, "SNF divisibility and |det| (1000 matrices)", bad == 0, format!("{bad} failures"))
}

fn mu2(level: Level) -> CheckResult {
    let name = "mu_2 separation at Y = 1e6";
    if level == Level::Quick {
        return CheckResult { id: 9, name, outcome: Outcome::Skipped, detail: "full level only".into() };
    }
    let mut mus = Vec::new();
    for sign in [SignFilter::Positive, SignFilter::Negative] {
        let mut cfg = SurveyConfig::new(1_000_000, sign, vec![2]);
        cfg.checkpoints = vec![1_000_000];
        match survey::run_survey(&cfg) {
            Ok(r) => match r[0].mu(2) {
                Some(m) => mus.push(*m.numer() as f64 / *m.denom() as f64),
                None => return CheckResult::new(9, name, false, "mu_2 undefined".into()),
            },
            Err(e) => return CheckResult::new(9, name, false, e.to_string()),
        }
    }
    let (pos, neg) = (mus[0], mus[1]);
    let ok = neg - pos >= 0.15 && (1.0..=1.2).contains(&pos) && (1.25..=1.55).contains(&neg);
    CheckResult::new(9, name, ok, format!("mu2+ = {pos:.5}, mu2- = {neg:.5}"))
}

fn geometric_series(a: f64, b: f64, g: f64, n: usize, noise: Option<&mut ChaCha8Rng>) -> DataSeries {
    let mut noise = noise;
    let pts = (0..n)
        .map(|i| {
            let y = 10f64.powf(3.0 + 5.0 * i as f64 / (n - 1) as f64);
            let e = noise.as_mut().map_or(0.0, |r| r.gen_range(-1e-3..=1e-3));
            (y, a + b * y.powf(g) + e)
        })
        .collect();
    DataSeries::new(pts).expect("increasing")
}

fn fitter() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (a, b, g) = (rng.gen_range(1.0..=2.0), rng.gen_range(-3.0..=-0.1), rng.gen_range(-0.3..=-0.02));
        match asymptote::fit_model(&geometric_series(a, b, g, 20, None), FixedParams::default()) {
            Ok(m) => worst = worst.max((m.alpha - a).abs()).max((m.beta - b).abs()).max((m.gamma - g).abs()),
            Err(_) => worst = f64::INFINITY,
        }
    }
    let mut pass = 0;
    for _ in 0..100 {
        let d = geometric_series(2.0, -1.95, -0.0832, 20, Some(&mut rng));
        if let Ok(m) = asymptote::fit_model(&d, FixedParams::default()) {
            pass += usize::from((m.alpha - 2.0).abs() < 0.02);
        }
    }
    CheckResult::new(
        10,
        "power-law fitter recovery",
        worst < 1e-3 && pass >= 95,
        format!("noiseless max error {worst:.2e}, noisy alpha pass {pass}/100"),
    )
}

fn targets() -> CheckResult {
    let t = |p, s| asymptote::conjecture_target(p, s).map(|t| t.value);
    let mut ok = t(2, DiscSign::Positive) == Ok(Ratio::new(3, 2)) && t(2, DiscSign::Negative) == Ok(Ratio::from_integer(2));
    for p in [2u64, 5, 7, 11] {
        ok &= asymptote::target_difference(p) == Ok(Ratio::new(1, p));
    }
    CheckResult::new(11, "conjecture targets", ok, "3/2, 2 and differences 1/p".into())
}

fn determinism(level: Level) -> CheckResult {
    let name = "determinism across tiles, workers and resume";
    let (y, kill_y) = if level == Level::Full { (30_000, 100_000) } else { (5_000, 20_000) };
    let base = {
        let mut c = SurveyConfig::new(y, SignFilter::Both, vec![2, 3]);
        c.tile_width = 64;
        c
    };
    let reference = match survey::run_survey(&base) {
        Ok(r) => r,
        Err(e) => return CheckResult::new(12, name, false, e.to_string()),
    };
    let mut ok = true;
    for tile_width in [1, 8, 64] {
        for workers in [1, 4] {
            let cfg = SurveyConfig { tile_width, workers, ..base.clone() };
            ok &= survey::run_survey(&cfg).ok().as_ref() == Some(&reference);
        }
    }
    let resumed = (|| -> Result<bool, String> {
        let dir = std::env::temp_dir().join(format!("monocubic-verify-{}", std::process::id()));
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let path = dir.join("state.jsonl");
        let _ = std::fs::remove_file(&path);
        let mut cfg = SurveyConfig::new(kill_y, SignFilter::Negative, vec![2]);
        cfg.tile_width = 4;
        let full = survey::run_survey(&cfg).map_err(|e| e.to_string())?;
        let half = cfg.tiles().len() / 2;
        let opts = RunOptions { checkpoint_file: Some(path.clone()), resume: true, stop_after_tiles: Some(half) };
        let first = survey::run_survey_with(&cfg, &opts);
        let opts = RunOptions { stop_after_tiles: None, ..opts };
        let second = survey::run_survey_with(&cfg, &opts).map_err(|e| e.to_string())?;
        let _ = std::fs::remove_dir_all(&dir);
        Ok(matches!(first, Err(survey::SurveyError::Interrupted { .. })) && second == full)
    })();
    let resume_ok = resumed.as_ref().map_or(false, |&b| b);
    CheckResult::new(
        12,
        name,
        ok && resume_ok,
        format!("tile/worker grid {}, kill/resume {}", if ok { "identical" } else { "differs" }, match resumed {
            Ok(true) => "identical".to_string(),
            Ok(false) => "differs".to_string(),
            Err(e) => e,
        }),
    )
}
