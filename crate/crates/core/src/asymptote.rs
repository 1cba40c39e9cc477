//! Power-law asymptotes `μ(Y) ≈ α + β·Y^γ` and the conjectured limits.
//!
//! For fixed `γ` the model is linear in `(α, β)`, so the fit scans a `γ`
//! grid solving the linear least-squares problem exactly at each node and
//! polishes the best node by golden-section search.

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::cubicforms::DiscSign;
use crate::survey::SurveyRecord;

pub const GAMMA_MIN: f64 = -1.0;
pub const GAMMA_MAX: f64 = 0.5;
pub const GAMMA_STEP: f64 = 1e-3;
const GAMMA_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("Y values must be strictly increasing")]
    NotIncreasing,
    #[error("degenerate series: all Y equal")]
    Degenerate,
    #[error("non-finite value in series")]
    NonFinite,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no mu_{0} values in the survey records")]
    NoData(u64),
}

/// `(Y, μ)` samples with strictly increasing `Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSeries {
    points: Vec<(f64, f64)>,
}

impl DataSeries {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, FitError> {
        if points.iter().any(|(y, m)| !y.is_finite() || !m.is_finite() || *y <= 0.0) {
            return Err(FitError::NonFinite);
        }
        if points.len() >= 2 && points.iter().all(|p| p.0 == points[0].0) {
            return Err(FitError::Degenerate);
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(FitError::NotIncreasing);
        }
        Ok(DataSeries { points })
    }

    /// The defined `μ_p` values of a survey, in checkpoint order.
    pub fn from_records(records: &[SurveyRecord], p: u64) -> Result<Self, FitError> {
        let pts: Vec<(f64, f64)> = records
            .iter()
            .filter_map(|r| r.mu(p).map(|m| (r.y as f64, *m.numer() as f64 / *m.denom() as f64)))
            .collect();
        if pts.is_empty() {
            return Err(FitError::NoData(p));
        }
        DataSeries::new(pts)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn shifted(&self, c: f64) -> DataSeries {
        DataSeries { points: self.points.iter().map(|&(y, m)| (y, m + c)).collect() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FixedParams {
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
}

impl FixedParams {
    pub fn alpha(a: f64) -> Self {
        FixedParams { alpha: Some(a), gamma: None }
    }

    pub fn gamma(g: f64) -> Self {
        FixedParams { alpha: None, gamma: Some(g) }
    }

    fn count(&self) -> usize {
        self.alpha.is_some() as usize + self.gamma.is_some() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawModel {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mse: f64,
    /// Optimum on the edge of the `γ` range, next to the excluded `γ = 0`,
    /// or `β ≈ 0` (so `γ` is not identified).
    pub boundary: bool,
    pub fixed: FixedParams,
}

impl PowerLawModel {
    pub fn eval(&self, y: f64) -> f64 {
        self.alpha + self.beta * y.powf(self.gamma)
    }
}

// Best (α, β, mse) for one γ.
fn solve_linear(data: &DataSeries, gamma: f64, alpha: Option<f64>) -> (f64, f64, f64) {
    let n = data.len() as f64;
    let xs: Vec<f64> = data.points.iter().map(|&(y, _)| y.powf(gamma)).collect();
    let ms: Vec<f64> = data.points.iter().map(|&(_, m)| m).collect();
    let (a, b) = match alpha {
        Some(a) => {
            let sxx: f64 = xs.iter().map(|x| x * x).sum();
            let sxy: f64 = xs.iter().zip(&ms).map(|(x, m)| x * (m - a)).sum();
            (a, if sxx > 0.0 { sxy / sxx } else { 0.0 })
        }
        None => {
            let xbar = xs.iter().sum::<f64>() / n;
            let mbar = ms.iter().sum::<f64>() / n;
            let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
            let sxy: f64 = xs.iter().zip(&ms).map(|(x, m)| (x - xbar) * (m - mbar)).sum();
            let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
            (mbar - b * xbar, b)
        }
    };
    let mse = xs.iter().zip(&ms).map(|(x, m)| (a + b * x - m).powi(2)).sum::<f64>() / n;
    (a, b, mse)
}

/// Least-squares fit of `α + β·Y^γ`, holding any fixed parameters.
pub fn fit_model(data: &DataSeries, fixed: FixedParams) -> Result<PowerLawModel, FitError> {
    let needed = 4 - fixed.count();
    if data.len() < needed {
        return Err(FitError::TooFewPoints { needed, got: data.len() });
    }
    let model = |gamma: f64, boundary: bool| {
        let (alpha, beta, mse) = solve_linear(data, gamma, fixed.alpha);
        PowerLawModel { alpha, beta, gamma, mse, boundary, fixed }
    };
    if let Some(g) = fixed.gamma {
        let m = model(g, false);
        let degenerate = m.beta.abs() < 1e-12;
        return Ok(PowerLawModel { boundary: degenerate, ..m });
    }

    let steps = ((GAMMA_MAX - GAMMA_MIN) / GAMMA_STEP).round() as i64;
    let mut best: Option<(f64, f64)> = None; // (mse, γ)
    for k in 0..=steps {
        let g = GAMMA_MIN + k as f64 * GAMMA_STEP;
        if g.abs() < GAMMA_STEP / 2.0 {
            continue;
        }
        let (_, _, mse) = solve_linear(data, g, fixed.alpha);
        let better = match best {
            None => true,
            Some((bm, bg)) => mse < bm || (mse == bm && g.abs() < bg.abs()),
        };
        if better {
            best = Some((mse, g));
        }
    }
    let (grid_mse, g0) = best.expect("grid is non-empty");

    let at_edge = g0 <= GAMMA_MIN + GAMMA_STEP / 2.0 || g0 >= GAMMA_MAX - GAMMA_STEP / 2.0;
    let next_to_zero = g0.abs() < 1.5 * GAMMA_STEP;
    // golden-section on the neighbouring cells, never crossing 0
    let (mut lo, mut hi) = ((g0 - GAMMA_STEP).max(GAMMA_MIN), (g0 + GAMMA_STEP).min(GAMMA_MAX));
    if g0 > 0.0 {
        lo = lo.max(GAMMA_STEP / 2.0);
    } else {
        hi = hi.min(-GAMMA_STEP / 2.0);
    }
    let refined = golden_section(|g| solve_linear(data, g, fixed.alpha).2, lo, hi);
    let gamma = if solve_linear(data, refined, fixed.alpha).2 <= grid_mse { refined } else { g0 };
    let mut m = model(gamma, false);
    let degenerate = m.beta.abs() < 1e-12;
    m.boundary = at_edge || next_to_zero || degenerate;
    Ok(m)
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > GAMMA_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinetuneResult {
    /// Free fit of the positive series.
    pub initial: PowerLawModel,
    /// Positive series refit with `α` held.
    pub positive: PowerLawModel,
    /// Negative series fit with the positive exponent.
    pub negative: PowerLawModel,
}

/// Three-stage fit: free positive fit, positive refit at `fixed_alpha_pos`,
/// then the negative series with `γ` transferred from the positive refit.
pub fn finetune_pipeline(
    pos: &DataSeries,
    neg: &DataSeries,
    fixed_alpha_pos: f64,
) -> Result<FinetuneResult, FitError> {
    let initial = fit_model(pos, FixedParams::default())?;
    let positive = fit_model(pos, FixedParams::alpha(fixed_alpha_pos))?;
    let negative = fit_model(neg, FixedParams::gamma(positive.gamma))?;
    Ok(FinetuneResult { initial, positive, negative })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureTarget {
    pub p: u64,
    pub sign: DiscSign,
    pub value: Ratio<u64>,
    /// The conjectures are not expected to hold at `p = 3`.
    pub flagged: bool,
}

impl ConjectureTarget {
    pub fn as_f64(&self) -> f64 {
        *self.value.numer() as f64 / *self.value.denom() as f64
    }
}

/// `1 + 1/(p(p−1))` for positive and `1 + 1/(p−1)` for negative discriminants.
pub fn conjecture_target(p: u64, sign: DiscSign) -> Result<ConjectureTarget, FitError> {
    if !arith::is_prime(p) {
        return Err(FitError::NotPrime(p));
    }
    let one = Ratio::from_integer(1u64);
    let value = match sign {
        DiscSign::Positive => one + Ratio::new(1, p * (p - 1)),
        DiscSign::Negative => one + Ratio::new(1, p - 1),
    };
    Ok(ConjectureTarget { p, sign, value, flagged: p == 3 })
}

/// Negative target minus positive target, which is `1/p`.
pub fn target_difference(p: u64) -> Result<Ratio<u64>, FitError> {
    let pos = conjecture_target(p, DiscSign::Positive)?.value;
    let neg = conjecture_target(p, DiscSign::Negative)?.value;
    Ok(neg - pos)
}

/// Contents of the `fit` report file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub p: u64,
    pub sign: DiscSign,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mse: f64,
    pub boundary_flag: bool,
    pub fixed_params: FixedParams,
    pub conjecture_target: f64,
    pub conjecture_target_exact: String,
    pub conjecture_flagged: bool,
    pub abs_gap_to_target: f64,
    pub points: usize,
}

impl FitReport {
    pub fn new(model: &PowerLawModel, target: &ConjectureTarget, points: usize) -> Self {
        FitReport {
            p: target.p,
            sign: target.sign,
            alpha: model.alpha,
            beta: model.beta,
            gamma: model.gamma,
            mse: model.mse,
            boundary_flag: model.boundary,
            fixed_params: model.fixed,
            conjecture_target: target.as_f64(),
            conjecture_target_exact: target.value.to_string(),
            conjecture_flagged: target.flagged,
            abs_gap_to_target: (model.alpha - target.as_f64()).abs(),
            points,
        }
    }
}

/// Plain SVG chart of the data (dots) and the fitted curve, log-scaled `Y`.
pub fn plot_svg(data: &DataSeries, model: &PowerLawModel, title: &str) -> String {
    let (w, h, pad) = (640.0, 400.0, 50.0);
    let pts = data.points();
    let lx = |y: f64| y.log10();
    let (x0, x1) = match (pts.first(), pts.last()) {
        (Some(a), Some(b)) if b.0 > a.0 => (lx(a.0), lx(b.0)),
        (Some(a), _) => (lx(a.0) - 0.5, lx(a.0) + 0.5),
        _ => (0.0, 1.0),
    };
    let curve: Vec<(f64, f64)> = (0..=200)
        .map(|i| {
            let t = x0 + (x1 - x0) * i as f64 / 200.0;
            (t, model.eval(10f64.powf(t)))
        })
        .collect();
    let ys = pts.iter().map(|p| p.1).chain(curve.iter().map(|c| c.1));
    let (mut y0, mut y1) = ys.fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
    if y1 - y0 < 1e-9 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#, w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{pad} {pad} V{} H{}" stroke="black" fill="none"/>"#,
        h - pad,
        w - pad
    );
    let _ = writeln!(s, r#"<text x="{pad}" y="{}" font-family="sans-serif" font-size="11">log10 Y = {x0:.2}</text>"#, h - pad + 18.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{x1:.2}</text>"#, w - pad, h - pad + 18.0);
    let _ = writeln!(s, r#"<text x="5" y="{}" font-family="sans-serif" font-size="11">{y1:.3}</text>"#, pad);
    let _ = writeln!(s, r#"<text x="5" y="{}" font-family="sans-serif" font-size="11">{y0:.3}</text>"#, h - pad);
    let path: Vec<String> = curve
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| format!("{}{:.2} {:.2}", if i == 0 { 'M' } else { 'L' }, sx(x), sy(y)))
        .collect();
    let _ = writeln!(s, r#"<path d="{}" stroke="crimson" stroke-width="2" fill="none"/>"#, path.join(" "));
    for &(y, m) in pts {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, sx(lx(y)), sy(m));
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="12">{:.4} {} {:.4}·Y^{:.4}</text>"#,
        w - pad,
        pad,
        model.alpha,
        if model.beta < 0.0 { '-' } else { '+' },
        model.beta.abs(),
        model.gamma
    );
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(a: f64, b: f64, g: f64, n: usize) -> DataSeries {
        let pts = (0..n)
            .map(|i| {
                let y = 10f64.powf(3.0 + 5.0 * i as f64 / (n - 1) as f64);
                (y, a + b * y.powf(g))
            })
            .collect();
        DataSeries::new(pts).unwrap()
    }

    #[test]
    fn noiseless_recovery() {
        let m = fit_model(&synthetic(1.5, -1.34, -0.081, 20), FixedParams::default()).unwrap();
        assert!((m.alpha - 1.5).abs() < 1e-3, "{m:?}");
        assert!((m.beta + 1.34).abs() < 1e-3, "{m:?}");
        assert!((m.gamma + 0.081).abs() < 1e-3, "{m:?}");
        assert!(!m.boundary);
    }

    #[test]
    fn constant_series() {
        let d = DataSeries::new((1..=6).map(|i| (10f64.powi(i), 1.25)).collect()).unwrap();
        let m = fit_model(&d, FixedParams::default()).unwrap();
        assert!((m.alpha - 1.25).abs() < 1e-12 && m.beta.abs() < 1e-12 && m.mse < 1e-20);
        assert!(m.boundary);
    }

    #[test]
    fn point_requirements() {
        let d = synthetic(1.0, -1.0, -0.1, 3);
        assert!(matches!(fit_model(&d, FixedParams::default()), Err(FitError::TooFewPoints { .. })));
        assert!(fit_model(&d, FixedParams::alpha(1.0)).is_ok());
        assert!(DataSeries::new(vec![(10.0, 1.0), (10.0, 2.0)]).is_err());
    }

    #[test]
    fn targets() {
        let t = |p, s| conjecture_target(p, s).unwrap().value;
        assert_eq!(t(2, DiscSign::Positive), Ratio::new(3, 2));
        assert_eq!(t(2, DiscSign::Negative), Ratio::from_integer(2));
        assert_eq!(t(5, DiscSign::Positive), Ratio::new(21, 20));
        assert_eq!(t(11, DiscSign::Negative), Ratio::new(11, 10));
        assert!(conjecture_target(3, DiscSign::Positive).unwrap().flagged);
        assert!(conjecture_target(9, DiscSign::Positive).is_err());
        assert_eq!(target_difference(7).unwrap(), Ratio::new(1, 7));
    }

    #[test]
    fn svg_is_well_formed() {
        let d = synthetic(1.5, -1.34, -0.081, 8);
        let m = fit_model(&d, FixedParams::default()).unwrap();
        let svg = plot_svg(&d, &m, "mu_2 <pos>");
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 8);
        assert!(svg.contains("&lt;pos&gt;"));
    }
}
