use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use jmshuffle::mixing::{
    character_expectations, curve_rows, cutoff_markers, cutoff_step, l2_curve, limit_profile,
    lower_bound_curve, profile_comparison_bound_with, write_rows_csv, write_rows_json, CurveKind,
    CurvePoint, L2Series, MixingCurve, TruncatedL2,
};
use jmshuffle::oracle::{exact_tv_curve_from, sample_walk};
use jmshuffle::spectrum::{spectrum_general_with, spectrum_kstar_with, write_csv, write_jsonl};
use jmshuffle::verify::{run_suite, VerifyOptions};
use jmshuffle::{Capacity, Error, ShuffleSpec};

/// Exact spectra, mixing bounds and oracles for Jucys–Murphy transposition
/// shuffles.
#[derive(Debug, Parser)]
#[command(name = "jmshuffle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Closed-form eigenvalues with multiplicities.
    Spectrum,
    /// ℓ² upper bound, lower bound and exact TV curves with cutoff markers.
    Mixing,
    /// Poisson limit profile next to the comparison bound.
    Profile,
    /// Runs the consistency suite.
    Verify,
    /// Monte Carlo statistics of the fixed points.
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
struct Flags {
    /// Deck size.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Block size of the k-star shuffle.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Active set A as a comma list, e.g. 3,5.
    #[arg(long, global = true, value_delimiter = ',')]
    set: Option<Vec<usize>>,
    /// Cutoff parameters c as a comma list.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    c: Option<Vec<f64>>,
    /// Last step of the curves.
    #[arg(long, global = true)]
    tmax: Option<u64>,
    /// Steps per walk for `sample` (default ⌈t_{n,k}(0)⌉).
    #[arg(long, global = true)]
    t: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (default standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Extend the kernel-based checks of `verify` to the requested n.
    #[arg(long, global = true)]
    #[serde(default)]
    deep: bool,
    /// JSON file with any of the flags above; flags given on the command
    /// line win.
    #[arg(long, global = true)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

impl Flags {
    fn merged_over(self, base: Flags) -> Flags {
        Flags {
            n: self.n.or(base.n),
            k: self.k.or(base.k),
            set: self.set.or(base.set),
            c: self.c.or(base.c),
            tmax: self.tmax.or(base.tmax),
            t: self.t.or(base.t),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            deep: self.deep || base.deep,
            config: None,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Capacity(String),
    Verification(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Capacity(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Capacity(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity { .. } => Failure::Capacity(format!(
                "{e} (set {}=<factor>|unlimited to raise the guards)",
                jmshuffle::capacity::OVERRIDE_ENV
            )),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(format!("i/o error: {e}"))
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// A validated configuration.
struct RunConfig {
    command: Command,
    flags: Flags,
    format: Format,
    cap: Capacity,
}

impl RunConfig {
    fn n(&self) -> CmdResult<usize> {
        self.flags
            .n
            .ok_or_else(|| Failure::Invalid("--n is required".into()))
    }

    fn spec(&self) -> CmdResult<ShuffleSpec> {
        let n = self.n()?;
        match (self.flags.k, &self.flags.set) {
            (Some(k), None) => Ok(ShuffleSpec::kstar(n, k)?),
            (None, Some(set)) => Ok(ShuffleSpec::general(n, set.iter().copied())?),
            (Some(_), Some(_)) => Err(Failure::Invalid("give exactly one of --k and --set".into())),
            (None, None) => Err(Failure::Invalid("one of --k or --set is required".into())),
        }
    }

    fn kstar(&self) -> CmdResult<(usize, usize)> {
        let spec = self.spec()?;
        match spec.k() {
            Some(k) => Ok((spec.n(), k)),
            None => Err(Failure::Invalid(format!(
                "{:?} needs a k-star shuffle (--k)",
                self.command
            ))),
        }
    }

    fn c_grid(&self, default: &[f64]) -> CmdResult<Vec<f64>> {
        let c = self.flags.c.clone().unwrap_or_else(|| default.to_vec());
        if c.is_empty() || c.iter().any(|x| !x.is_finite()) {
            return Err(Failure::Invalid(
                "the c grid must be a nonempty list of numbers".into(),
            ));
        }
        Ok(c)
    }

    fn writer(&self) -> CmdResult<Box<dyn Write>> {
        Ok(match &self.flags.out {
            Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
                Failure::Invalid(format!("cannot create {}: {e}", path.display()))
            })?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn load_config(cli: Cli) -> CmdResult<RunConfig> {
    let base = match &cli.flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<Flags>(&text)
                .map_err(|e| Failure::Invalid(format!("bad config {}: {e}", path.display())))?
        }
        None => Flags::default(),
    };
    let flags = cli.flags.merged_over(base);
    let (cap, overridden) = Capacity::from_env();
    if overridden {
        eprintln!(
            "WARNING: {} is set; capacity guards are raised and runs may be very slow or exhaust memory",
            jmshuffle::capacity::OVERRIDE_ENV
        );
    }
    Ok(RunConfig {
        command: cli.command,
        format: flags.format.unwrap_or(Format::Csv),
        flags,
        cap,
    })
}

fn cmd_spectrum(cfg: &RunConfig) -> CmdResult<()> {
    let spec = cfg.spec()?;
    let records = match spec.k() {
        Some(k) => spectrum_kstar_with(spec.n(), k, &cfg.cap)?,
        None => spectrum_general_with(&spec, &cfg.cap)?,
    };
    let mut out = cfg.writer()?;
    match cfg.format {
        Format::Csv => write_csv(&records, &mut out)?,
        Format::Json => write_jsonl(&records, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

/// Depth of the exactly summed region when the spectrum is too large to
/// enumerate.
const TRUNCATION_DEPTH: usize = 12;

fn cmd_mixing(cfg: &RunConfig) -> CmdResult<()> {
    let spec = cfg.spec()?;
    let n = spec.n();
    let cs = cfg.c_grid(&[0.0])?;
    let marker_k = spec.k().unwrap_or(n);
    let t_max = match cfg.flags.tmax {
        Some(t) => t,
        None => 2 * cutoff_step(n, marker_k, cs.iter().copied().fold(0.0, f64::max)).max(1),
    };
    let ts: Vec<u64> = (0..=t_max).collect();
    let mut curves = Vec::new();
    let l2 = match spec.k() {
        Some(k) => match spectrum_kstar_with(n, k, &cfg.cap) {
            Ok(records) => l2_curve(&L2Series::new(&records)?, &ts)?,
            Err(Error::Capacity { .. }) => {
                eprintln!(
                    "note: spectrum too large to enumerate; using the certified truncated ℓ² bound (exact region depth {TRUNCATION_DEPTH})"
                );
                let tr = TruncatedL2::new(n, k, TRUNCATION_DEPTH)?;
                let points = ts
                    .iter()
                    .map(|&t| CurvePoint {
                        t,
                        value: tr.bound(t),
                    })
                    .collect();
                MixingCurve::new(CurveKind::L2Upper, points)?
            }
            Err(e) => return Err(e.into()),
        },
        None => l2_curve(
            &L2Series::new(&spectrum_general_with(&spec, &cfg.cap)?)?,
            &ts,
        )?,
    };
    curves.push(l2);
    if let Some(k) = spec.k() {
        curves.push(lower_bound_curve(n, k, &ts)?);
    }
    if n <= cfg.cap.max_oracle_n {
        curves.push(exact_tv_curve_from(&spec, 0, t_max, &cfg.cap)?);
    }
    let markers = cutoff_markers(n, marker_k, &cs);
    let label = k_label(&spec);
    let rows = curve_rows(n, &label, &curves, &markers);
    let mut out = cfg.writer()?;
    match cfg.format {
        Format::Csv => write_rows_csv(&rows, &mut out)?,
        Format::Json => write_rows_json(&rows, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn k_label(spec: &ShuffleSpec) -> String {
    match spec.k() {
        Some(k) => k.to_string(),
        None => {
            let items: Vec<String> = spec.active_set().iter().map(|j| j.to_string()).collect();
            format!("A={}", items.join(";"))
        }
    }
}

#[derive(Serialize)]
struct ProfileRow {
    c: f64,
    limit_profile: f64,
    profile_comparison: f64,
    n: usize,
    k: usize,
}

fn cmd_profile(cfg: &RunConfig) -> CmdResult<()> {
    let (n, k) = cfg.kstar()?;
    let cs = cfg.c_grid(&[-2.0, -1.0, 0.0, 1.0, 2.0])?;
    let rows = cs
        .iter()
        .map(|&c| {
            Ok(ProfileRow {
                c,
                limit_profile: limit_profile(c),
                profile_comparison: profile_comparison_bound_with(n, k, c, &cfg.cap)?,
                n,
                k,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut out = cfg.writer()?;
    match cfg.format {
        Format::Csv => {
            writeln!(out, "c,limit_profile,profile_comparison,n,k")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:?},{:?},{:?},{},{}",
                    r.c, r.limit_profile, r.profile_comparison, r.n, r.k
                )?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &rows).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CheckRow<'a> {
    name: &'a str,
    passed: bool,
    detail: &'a str,
}

fn cmd_verify(cfg: &RunConfig) -> CmdResult<()> {
    let opts = VerifyOptions {
        max_n: cfg.flags.n.unwrap_or(6),
        deep: cfg.flags.deep,
    };
    let results = run_suite(opts, &cfg.cap)?;
    let mut out = cfg.writer()?;
    match cfg.format {
        Format::Csv => {
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {}: {}", r.name, r.detail)?;
            }
        }
        Format::Json => {
            let rows: Vec<CheckRow> = results
                .iter()
                .map(|r| CheckRow {
                    name: &r.name,
                    passed: r.passed,
                    detail: &r.detail,
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &rows).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}

#[derive(Serialize)]
struct SampleReport {
    n: usize,
    k: String,
    t: u64,
    trials: u64,
    seed: u64,
    mean: f64,
    variance: f64,
    standard_error: f64,
    closed_form_mean: Option<f64>,
    histogram: Vec<u64>,
}

fn cmd_sample(cfg: &RunConfig) -> CmdResult<()> {
    let spec = cfg.spec()?;
    let n = spec.n();
    let t = match (cfg.flags.t, spec.k()) {
        (Some(t), _) => t,
        (None, Some(k)) => cutoff_step(n, k, 0.0),
        (None, None) => return Err(Failure::Invalid("--t is required for a general set".into())),
    };
    let trials = cfg.flags.trials.unwrap_or(10_000);
    let seed = cfg.flags.seed.unwrap_or(0);
    let stats = sample_walk(&spec, t, trials, seed)?;
    let closed_form_mean = match spec.k() {
        Some(k) => character_expectations(n, k, t)?.standard,
        None => None,
    };
    let report = SampleReport {
        n,
        k: k_label(&spec),
        t,
        trials,
        seed,
        mean: stats.mean,
        variance: stats.variance,
        standard_error: stats.standard_error(),
        closed_form_mean,
        histogram: stats.histogram.clone(),
    };
    let mut out = cfg.writer()?;
    match cfg.format {
        Format::Csv => {
            writeln!(
                out,
                "n,k,t,trials,seed,mean,variance,standard_error,closed_form_mean,histogram"
            )?;
            let hist: Vec<String> = report.histogram.iter().map(|c| c.to_string()).collect();
            writeln!(
                out,
                "{},{},{},{},{},{:?},{:?},{:?},{},{}",
                report.n,
                report.k,
                report.t,
                report.trials,
                report.seed,
                report.mean,
                report.variance,
                report.standard_error,
                report
                    .closed_form_mean
                    .map(|m| format!("{m:?}"))
                    .unwrap_or_default(),
                hist.join(";")
            )?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> CmdResult<()> {
    let cfg = load_config(cli)?;
    match cfg.command {
        Command::Spectrum => cmd_spectrum(&cfg),
        Command::Mixing => cmd_mixing(&cfg),
        Command::Profile => cmd_profile(&cfg),
        Command::Verify => cmd_verify(&cfg),
        Command::Sample => cmd_sample(&cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
