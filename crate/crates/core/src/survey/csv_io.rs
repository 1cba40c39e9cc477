//! CSV formats: survey records and enumerated forms.

use std::io::{Read, Write};

use num_rational::Ratio;

use super::{SurveyError, SurveyRecord};
use crate::cubicforms::SignFilter;

const UNDEFINED: &str = "NA";

/// One line of the forms CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormRow {
    pub i: i128,
    pub j: i128,
    pub f1: i128,
    pub f2: i128,
    pub f3: i128,
    pub disc: i128,
    pub height4: i128,
    pub irreducible: bool,
    pub maximal: bool,
}

fn csv_err(e: impl std::fmt::Display) -> SurveyError {
    SurveyError::Csv(e.to_string())
}

/// Decimal rendering with `digits` significant digits.
pub(crate) fn significant(v: f64, digits: i32) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32 + 1;
    let decimals = (digits - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn write_forms_csv<W: Write>(out: W, rows: &[FormRow]) -> Result<(), SurveyError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["I", "J", "f1", "f2", "f3", "disc", "height4", "irreducible", "maximal"])
        .map_err(csv_err)?;
    for r in rows {
        let fields = [r.i, r.j, r.f1, r.f2, r.f3, r.disc, r.height4, r.irreducible as i128, r.maximal as i128];
        w.write_record(fields.iter().map(i128::to_string)).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

pub fn write_survey_csv<W: Write>(out: W, records: &[SurveyRecord]) -> Result<(), SurveyError> {
    let mut w = csv::Writer::from_writer(out);
    let primes: Vec<u64> = records
        .first()
        .map(|r| r.mu.iter().map(|(p, _)| *p).collect())
        .unwrap_or_default();
    let mut header: Vec<String> = ["Y", "sign", "N", "N_max", "n_uncertified"].map(String::from).to_vec();
    for p in &primes {
        header.extend([format!("mu_{p}"), format!("mu_{p}_num"), format!("mu_{p}_den")]);
    }
    w.write_record(&header).map_err(csv_err)?;
    for r in records {
        let mut row = vec![
            r.y.to_string(),
            r.sign.as_str().to_string(),
            r.n.to_string(),
            r.n_max.to_string(),
            r.n_uncertified.to_string(),
        ];
        for (_, mu) in &r.mu {
            match mu {
                Some(q) => row.extend([
                    significant(*q.numer() as f64 / *q.denom() as f64, 12),
                    q.numer().to_string(),
                    q.denom().to_string(),
                ]),
                None => row.extend([UNDEFINED; 3].map(String::from)),
            }
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

/// Parse a survey CSV back into records; `μ_p` comes from the exact columns.
pub fn read_survey_csv<R: Read>(input: R) -> Result<Vec<SurveyRecord>, SurveyError> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    let fixed = ["Y", "sign", "N", "N_max", "n_uncertified"];
    if header.len() < fixed.len() || header.iter().zip(fixed).any(|(h, f)| h != f) {
        return Err(csv_err(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let extra = header.len() - fixed.len();
    if extra % 3 != 0 {
        return Err(csv_err("mu columns must come in triples"));
    }
    let mut primes = Vec::new();
    for k in 0..extra / 3 {
        let name = &header[fixed.len() + 3 * k];
        let p = name
            .strip_prefix("mu_")
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(|| csv_err(format!("bad column {name:?}")))?;
        primes.push(p);
    }
    let num = |s: &str| s.parse::<u64>().map_err(|e| csv_err(format!("{s:?}: {e}")));
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let sign: SignFilter = rec[1].parse().map_err(csv_err)?;
        let mut mu = Vec::with_capacity(primes.len());
        for (k, &p) in primes.iter().enumerate() {
            let base = fixed.len() + 3 * k;
            let (n, d) = (&rec[base + 1], &rec[base + 2]);
            let value = if n == UNDEFINED || d == UNDEFINED {
                None
            } else {
                Some(Ratio::new(num(n)?, num(d)?))
            };
            mu.push((p, value));
        }
        out.push(SurveyRecord {
            y: num(&rec[0])?,
            sign,
            n: num(&rec[2])?,
            n_max: num(&rec[3])?,
            n_uncertified: num(&rec[4])?,
            mu,
        });
    }
    Ok(out)
}
