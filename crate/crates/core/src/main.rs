use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use monocubic::asymptote::{self, DataSeries, FitError, FitReport, FixedParams};
use monocubic::cubicforms::{DiscSign, SignFilter};
use monocubic::survey::{self, RunOptions, SurveyConfig, SurveyError};
use monocubic::verify::{self, Level, Outcome};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ARITH: u8 = 3;

#[derive(Parser)]
#[command(name = "monocubic", version, about = "Class-group statistics of monogenized cubic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Pos,
    Neg,
    Both,
}

impl From<SignArg> for SignFilter {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Pos => SignFilter::Positive,
            SignArg::Neg => SignFilter::Negative,
            SignArg::Both => SignFilter::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Write every canonical form of height below ymax as CSV
    Enumerate {
        #[arg(long)]
        ymax: u64,
        #[arg(long, value_enum, default_value = "both")]
        sign: SignArg,
        #[arg(long)]
        only_maximal: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Counts and mu_p averages at checkpoint heights
    Survey {
        #[arg(long)]
        ymax: u64,
        #[arg(long, value_enum, default_value = "both")]
        sign: SignArg,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        primes: Vec<u64>,
        /// `geometric:<per decade>` or `list:<y1,y2,...>`
        #[arg(long, default_value = "geometric:10")]
        checkpoints: String,
        #[arg(long, default_value_t = 64)]
        tile_width: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        checkpoint_file: Option<PathBuf>,
        #[arg(long, requires = "checkpoint_file")]
        resume: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit mu ≈ alpha + beta·Y^gamma to one column of a survey CSV
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long)]
        fix_alpha: Option<f64>,
        #[arg(long)]
        fix_gamma: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the conjectured limits of mu_p for both signs
    Conjecture {
        #[arg(long)]
        p: u64,
    },
    /// Run the built-in acceptance checks
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
        /// Class-group fixture (defaults to the bundled one)
        #[arg(long)]
        oracle: Option<PathBuf>,
    },
    /// SVG chart of a survey column and its fitted curve
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure with the exit code it maps to.
struct Failure(u8, String);

impl From<SurveyError> for Failure {
    fn from(e: SurveyError) -> Self {
        let code = match &e {
            e if e.is_arithmetic() => EXIT_ARITH,
            SurveyError::Config(_) | SurveyError::ConfigMismatch { .. } | SurveyError::Csv(_) => EXIT_USAGE,
            SurveyError::Checkpoint(_) | SurveyError::Io { .. } => EXIT_USAGE,
            _ => EXIT_ARITH,
        };
        Failure(code, e.to_string())
    }
}

impl From<FitError> for Failure {
    fn from(e: FitError) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn create(path: &Path) -> Result<io::BufWriter<fs::File>, Failure> {
    fs::File::create(path)
        .map(io::BufWriter::new)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_checkpoints(spec: &str, ymax: u64) -> Result<Vec<u64>, Failure> {
    if let Some(n) = spec.strip_prefix("geometric:") {
        let n: u32 = n.parse().map_err(|_| usage(format!("bad checkpoint spec {spec:?}")))?;
        return Ok(survey::geometric_checkpoints(ymax, n));
    }
    if let Some(list) = spec.strip_prefix("list:") {
        return list
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| usage(format!("bad checkpoint {s:?}"))))
            .collect();
    }
    Err(usage(format!("checkpoints must be geometric:<n> or list:<csv>, got {spec:?}")))
}

fn workers(cli_value: usize) -> Result<usize, Failure> {
    match std::env::var("MONOCUBIC_WORKERS") {
        Ok(v) => v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| usage(format!("MONOCUBIC_WORKERS must be a positive integer, got {v:?}"))),
        Err(_) => Ok(cli_value),
    }
}

fn single_sign(s: SignArg) -> Result<DiscSign, Failure> {
    match s {
        SignArg::Pos => Ok(DiscSign::Positive),
        SignArg::Neg => Ok(DiscSign::Negative),
        SignArg::Both => Err(usage("fit needs --sign pos or --sign neg")),
    }
}

fn load_series(input: &Path, p: u64, sign: SignArg) -> Result<DataSeries, Failure> {
    let file = fs::File::open(input).map_err(|e| usage(format!("{}: {e}", input.display())))?;
    let want: SignFilter = sign.into();
    let records: Vec<_> = survey::read_survey_csv(file)?
        .into_iter()
        .filter(|r| r.sign == want)
        .collect();
    Ok(DataSeries::from_records(&records, p)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Enumerate { ymax, sign, only_maximal, out } => {
            let rows = survey::enumerate_rows(ymax, sign.into(), only_maximal)?;
            survey::write_forms_csv(create(&out)?, &rows)?;
            eprintln!("{} forms written to {}", rows.len(), out.display());
        }
        Command::Survey { ymax, sign, primes, checkpoints, tile_width, workers: w, checkpoint_file, resume, out } => {
            let cfg = SurveyConfig {
                ymax,
                sign: sign.into(),
                primes,
                checkpoints: parse_checkpoints(&checkpoints, ymax)?,
                tile_width,
                workers: workers(w)?,
                classgroup: Default::default(),
            };
            let opts = RunOptions { checkpoint_file, resume, stop_after_tiles: None };
            let records = survey::run_survey_with(&cfg, &opts)?;
            survey::write_survey_csv(create(&out)?, &records)?;
            if let Some(last) = records.last() {
                eprintln!("Y = {}: N = {}, N_max = {}, uncertified = {}", last.y, last.n, last.n_max, last.n_uncertified);
            }
        }
        Command::Fit { input, p, sign, fix_alpha, fix_gamma, out } => {
            let target = asymptote::conjecture_target(p, single_sign(sign)?)?;
            let data = load_series(&input, p, sign)?;
            let model = asymptote::fit_model(&data, FixedParams { alpha: fix_alpha, gamma: fix_gamma })?;
            let report = FitReport::new(&model, &target, data.len());
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            let mut w = create(&out)?;
            writeln!(w, "{json}").map_err(|e| usage(e.to_string()))?;
            println!(
                "mu_{p} ≈ {:.4} {} {:.4}·Y^{:.4} (mse {:.3e}{})",
                model.alpha,
                if model.beta < 0.0 { '-' } else { '+' },
                model.beta.abs(),
                model.gamma,
                model.mse,
                if model.boundary { ", boundary" } else { "" }
            );
        }
        Command::Conjecture { p } => {
            for sign in [DiscSign::Positive, DiscSign::Negative] {
                let t = asymptote::conjecture_target(p, sign)?;
                println!("{}: {} ≈ {:.6}", sign.as_str(), t.value, t.as_f64());
            }
            println!("difference: {}", asymptote::target_difference(p)?);
            if p == 3 {
                println!("note: the conjectured values are not expected to hold for p = 3");
            }
        }
        Command::Verify { level, oracle } => {
            let text = match oracle {
                Some(path) => fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?,
                None => verify::DEFAULT_ORACLE.to_string(),
            };
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let results = verify::run(level, &text);
            let mut failed = 0;
            for r in &results {
                let tag = match r.outcome {
                    Outcome::Pass => "PASS",
                    Outcome::Fail => {
                        failed += 1;
                        "FAIL"
                    }
                    Outcome::Skipped => "SKIP",
                };
                println!("[{tag}] {:>2} {} — {}", r.id, r.name, r.detail);
            }
            if failed > 0 {
                return Err(Failure(EXIT_VERIFY, format!("{failed} check(s) failed")));
            }
        }
        Command::Plot { input, p, sign, out } => {
            let data = load_series(&input, p, sign)?;
            let model = asymptote::fit_model(&data, FixedParams::default())?;
            let title = format!("mu_{p} ({})", SignFilter::from(sign).as_str());
            fs::write(&out, asymptote::plot_svg(&data, &model, &title))
                .map_err(|e| usage(format!("{}: {e}", out.display())))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
