//! Command-line front end. [`run`] returns the process exit code:
//! 0 success, 1 usage, 2 unreadable input, 3 numerical failure (including
//! optimizer budgets exhausted without convergence).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dimwit_core::optimizer::{default_n_max, DimensionProfile};
use dimwit_core::search::{
    enumerate_classes, scan_for_witnesses, EnumerationConfig, EnumerationMode, ScanConfig,
};
use dimwit_core::sphere::{self, SIntegrals, SphereDim};
use dimwit_core::tsirelson::{realize, verify_realization, CMatrix};
use dimwit_core::{
    bgamma_analytic, bgamma_classical, bgamma_matrix, detect_gaps, dimension_profile,
    max_over_restarts, optimal_alice, BellExpression, Error, OptimizerConfig, Strategy,
};
use serde_json::{json, Value};

use crate::io::{self, ParseError};
use crate::report::{self, ReportEnvelope};
use crate::Parallel;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "dimwit",
    version,
    about = "Dimension witnesses from correlation Bell expressions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimension profile and gaps of a Bell expression.
    Analyze(AnalyzeArgs),
    /// Built-in expression families.
    Family {
        #[command(subcommand)]
        family: Family,
    },
    /// The continuum expression on the sphere.
    Sphere {
        #[command(subcommand)]
        action: SphereCmd,
    },
    /// Optimize at dimension n and realize the optimum with Clifford observables.
    Realize(RealizeArgs),
    /// Enumerate {-1,0,1}-type expressions up to symmetry and scan for gaps.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
struct OptArgs {
    /// Random restarts per dimension.
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    max_sweeps: usize,
    /// Relative improvement below which a see-saw run has converged.
    #[arg(long, default_value_t = 1e-11)]
    conv_tol: f64,
    /// Worker threads; defaults to $JOBS, then the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
}

impl OptArgs {
    fn config(&self, gap_tol: f64) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            max_sweeps: self.max_sweeps,
            conv_tol: self.conv_tol,
            gap_tol,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Matrix file (text or JSON), `-` for stdin.
    matrix: PathBuf,
    /// Largest dimension; defaults to min(m_A, m_B).
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long, default_value_t = 1e-5)]
    tol_gap: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    opt: OptArgs,
}

#[derive(Debug, Subcommand)]
enum Family {
    /// The family B_gamma with m_B Bob settings.
    Bgamma(BgammaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Matrix,
    Report,
}

#[derive(Debug, Args)]
struct BgammaArgs {
    #[arg(long)]
    mb: usize,
    #[arg(long, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = Emit::Report)]
    emit: Emit,
    /// Also run the dimension profile, with the closed-form maximum at n = m_B.
    #[arg(long)]
    profile: bool,
    #[arg(long, default_value_t = 1e-5)]
    tol_gap: f64,
    #[command(flatten)]
    opt: OptArgs,
}

#[derive(Debug, Subcommand)]
enum SphereCmd {
    /// Closed-form T^n and T^n / T^1.
    Table {
        #[arg(long)]
        nmax: usize,
        /// Sphere dimension m (points on S^{m-1}) or `inf`.
        #[arg(long, default_value = "inf", value_parser = parse_sphere_dim)]
        m: SphereDim,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Random K x K discretization and its see-saw profile.
    Discretize {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        nmax: usize,
        #[command(flatten)]
        opt: OptArgs,
    },
}

#[derive(Debug, Args)]
struct RealizeArgs {
    matrix: PathBuf,
    #[arg(long)]
    n: usize,
    /// Include the observables and the state.
    #[arg(long)]
    dump: bool,
    #[command(flatten)]
    opt: OptArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Auto,
    Generate,
    Augment,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    ma: usize,
    #[arg(long)]
    mb: usize,
    /// Comma-separated coefficient alphabet, closed under negation.
    #[arg(long, default_value = "-1,0,1", allow_hyphen_values = true, value_parser = parse_alphabet)]
    alphabet: Alphabet,
    /// The pair `n,n+1` flagged as a gap.
    #[arg(long, default_value = "3,4", value_parser = parse_flag)]
    flag_gap: (usize, usize),
    /// JSONL file receiving one record per class.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Keep classes with an all-zero row or column.
    #[arg(long)]
    keep_trivial: bool,
    #[arg(long, default_value_t = 1e-5)]
    tol_gap: f64,
    #[command(flatten)]
    opt: OptArgs,
}

#[derive(Debug, Clone)]
struct Alphabet(Vec<i8>);

fn parse_sphere_dim(s: &str) -> Result<SphereDim, String> {
    match s {
        "inf" | "infinity" => Ok(SphereDim::Infinite),
        _ => match s.parse::<usize>() {
            Ok(m) if m > 0 => Ok(SphereDim::Finite(m)),
            _ => Err(format!("`{s}` is neither a positive integer nor `inf`")),
        },
    }
}

fn parse_alphabet(s: &str) -> Result<Alphabet, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i8>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(Alphabet)
}

fn parse_flag(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let nums: Vec<usize> = parts.iter().filter_map(|p| p.trim().parse().ok()).collect();
    match nums[..] {
        [lo, hi] if parts.len() == 2 && lo >= 1 && hi == lo + 1 => Ok((lo, hi)),
        _ => Err(format!("`{s}` is not of the form n,n+1")),
    }
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    /// The report was written but a run did not converge.
    #[error("{0}")]
    NotConverged(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Core(Error::Numerical(_)) | Failure::NotConverged(_) => EXIT_NUMERICAL,
            Failure::Core(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_PARSE,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(f) => {
            let _ = writeln!(err, "dimwit: {f}");
            f.code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Analyze(a) => analyze(a, out),
        Command::Family {
            family: Family::Bgamma(a),
        } => bgamma(a, out),
        Command::Sphere {
            action: SphereCmd::Table { nmax, m, format },
        } => sphere_table(nmax, m, format, out),
        Command::Sphere {
            action:
                SphereCmd::Discretize {
                    m,
                    points,
                    nmax,
                    opt,
                },
        } => sphere_discretize(m, points, nmax, opt, out),
        Command::Realize(a) => realize_cmd(a, out),
        Command::Search(a) => search(a, out),
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn unconverged(profile: &DimensionProfile) -> Option<Failure> {
    let bad: Vec<usize> = profile
        .entries
        .iter()
        .filter(|e| !e.converged)
        .map(|e| e.n)
        .collect();
    (!bad.is_empty()).then(|| Failure::NotConverged(format!("no converged run at n = {bad:?}")))
}

fn analyze(a: AnalyzeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let start = Instant::now();
    let expr = io::read_matrix(&a.matrix)?;
    let config = a.opt.config(a.tol_gap);
    let exec = Parallel::new(a.opt.jobs);
    let n_max = a.nmax.unwrap_or_else(|| default_n_max(&expr));
    let profile = dimension_profile(&expr, n_max, &config, &exec)?;
    let witness = detect_gaps(&profile, &config);

    match a.format {
        Format::Csv => report::write_profile_csv(out, &witness.profile)?,
        Format::Json => {
            let payload = json!({
                "matrix": io::matrix_json(&expr),
                "n_max": n_max,
                "witness": witness,
                "warnings": profile.warnings,
            });
            ReportEnvelope::new(
                "analyze",
                Some(config.seed),
                json!(config),
                payload,
                elapsed_ms(start),
            )
            .write_to(out)?;
        }
    }
    unconverged(&profile).map_or(Ok(()), Err)
}

fn bgamma(a: BgammaArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let start = Instant::now();
    let expr = bgamma_matrix(a.mb, a.gamma)?;
    if a.emit == Emit::Matrix {
        out.write_all(io::format_text(&expr).as_bytes())?;
        return Ok(());
    }
    let analytic = bgamma_analytic(a.mb, a.gamma)?;
    let classical = bgamma_classical(a.mb, a.gamma)?;
    let mut payload = json!({
        "matrix": io::matrix_json(&expr),
        "mb": a.mb,
        "gamma": a.gamma,
        "T_max": analytic.t_max,
        "x_star": analytic.x_star,
        "classical": classical.value,
        "k_max": classical.k_max,
        "delta": classical.delta,
    });
    let config = a.opt.config(a.tol_gap);
    let mut failure = None;
    if a.profile {
        let exec = Parallel::new(a.opt.jobs);
        let mut profile = dimension_profile(&expr, a.mb, &config, &exec)?;
        failure = unconverged(&profile);
        profile.inject_analytic(a.mb, analytic.t_max)?;
        payload["witness"] = json!(detect_gaps(&profile, &config));
    }
    ReportEnvelope::new(
        "family bgamma",
        Some(config.seed),
        json!(config),
        payload,
        elapsed_ms(start),
    )
    .write_to(out)?;
    failure.map_or(Ok(()), Err)
}

fn sphere_table(
    nmax: usize,
    m: SphereDim,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let start = Instant::now();
    let t1 = sphere::analytic_tn(m, 1)?;
    let mut rows = Vec::with_capacity(nmax);
    for n in 1..=nmax {
        let t = sphere::analytic_tn(m, n)?;
        rows.push((n, t, t / t1));
    }
    match format {
        Format::Csv => {
            writeln!(out, "n,value,ratio")?;
            for (n, t, r) in &rows {
                writeln!(out, "{n},{t},{r}")?;
            }
        }
        Format::Json => {
            let m_json = match m {
                SphereDim::Finite(m) => json!(m),
                SphereDim::Infinite => json!("inf"),
            };
            let s = SIntegrals::up_to(nmax);
            let table: Vec<Value> = rows
                .iter()
                .map(|&(n, t, r)| json!({ "n": n, "value": t, "ratio": r, "s_n": s.get(n) }))
                .collect();
            let payload = json!({ "m": m_json, "rows": table });
            ReportEnvelope::new(
                "sphere table",
                None,
                json!({ "nmax": nmax, "m": m_json }),
                payload,
                elapsed_ms(start),
            )
            .write_to(out)?;
        }
    }
    Ok(())
}

fn sphere_discretize(
    m: usize,
    points: usize,
    nmax: usize,
    opt: OptArgs,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let start = Instant::now();
    let config = opt.config(1e-5);
    let sample = sphere::discretize_sphere_expression(m, points, opt.seed)?;
    let exec = Parallel::new(opt.jobs);
    let profile = dimension_profile(&sample.expr, nmax, &config, &exec)?;
    let mut rows = Vec::with_capacity(nmax);
    for e in &profile.entries {
        let exact = sphere::analytic_tn(SphereDim::Finite(m), e.n)?;
        rows.push(json!({
            "n": e.n,
            "value": e.value,
            "analytic": exact,
            "relative_error": (e.value - exact) / exact,
            "converged": e.converged,
        }));
    }
    let payload = json!({ "m": m, "points": points, "rows": rows, "warnings": profile.warnings });
    let cfg = json!({ "m": m, "points": points, "nmax": nmax, "optimizer": config });
    ReportEnvelope::new(
        "sphere discretize",
        Some(opt.seed),
        cfg,
        payload,
        elapsed_ms(start),
    )
    .write_to(out)?;
    unconverged(&profile).map_or(Ok(()), Err)
}

fn complex_json(m: &CMatrix) -> Value {
    let re: Vec<f64> = m.entries().iter().map(|z| z.re).collect();
    let im: Vec<f64> = m.entries().iter().map(|z| z.im).collect();
    json!({ "dim": m.dim(), "real": re, "imag": im })
}

fn realize_cmd(a: RealizeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let start = Instant::now();
    let expr: BellExpression = io::read_matrix(&a.matrix)?;
    let config = a.opt.config(1e-5);
    let exec = Parallel::new(a.opt.jobs);
    let run = max_over_restarts(&expr, a.n, &config, &exec)?;
    let alice = optimal_alice(&expr, &run.bob)?;
    let strategy = Strategy::new(alice, run.bob.clone())?;
    let q = realize(&strategy.alice, &strategy.bob)?;
    let check = verify_realization(&q, &expr, &strategy)?;

    let mut payload = json!({
        "n": a.n,
        "value": run.value,
        "converged": run.converged,
        "strategy": strategy,
        "verification": check,
    });
    if a.dump {
        let re: Vec<f64> = q.state.iter().map(|z| z.re).collect();
        let im: Vec<f64> = q.state.iter().map(|z| z.im).collect();
        payload["alice_observables"] = q.alice_obs.iter().map(complex_json).collect();
        payload["bob_observables"] = q.bob_obs.iter().map(complex_json).collect();
        payload["state"] = json!({ "dim": q.state.len(), "real": re, "imag": im });
    }
    let cfg = json!({ "n": a.n, "optimizer": config });
    ReportEnvelope::new(
        "realize",
        Some(config.seed),
        cfg,
        payload,
        elapsed_ms(start),
    )
    .write_to(out)?;
    if !check.passed {
        return Err(Failure::NotConverged(
            "realization failed verification".into(),
        ));
    }
    if !run.converged {
        return Err(Failure::NotConverged(format!(
            "no converged run at n = {}",
            a.n
        )));
    }
    Ok(())
}

fn search(a: SearchArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let start = Instant::now();
    let exec = Parallel::new(a.opt.jobs);
    let config = a.opt.config(a.tol_gap);
    let mut enum_cfg = EnumerationConfig::new(a.ma, a.mb, &a.alphabet.0);
    enum_cfg.filter_trivial = !a.keep_trivial;
    enum_cfg.mode = match a.mode {
        Mode::Auto => EnumerationMode::Auto,
        Mode::Generate => EnumerationMode::Generate,
        Mode::Augment => EnumerationMode::RowAugmentation,
    };
    let classes = enumerate_classes(&enum_cfg, &exec)?;
    let scan_cfg = ScanConfig {
        n_list: (1..=a.flag_gap.1).collect(),
        flag: a.flag_gap,
        optimizer: config,
    };
    let records = scan_for_witnesses(&classes, &scan_cfg, &exec)?;
    if let Some(path) = &a.out {
        let mut file = BufWriter::new(File::create(path)?);
        report::write_jsonl(&mut file, &records)?;
        file.flush()?;
    }
    let hits: Vec<_> = records.iter().filter(|r| r.hit.is_some()).collect();
    let payload = json!({
        "classes": classes.len(),
        "rank_one": classes.iter().filter(|c| c.rank_one).count(),
        "hits": hits,
    });
    let cfg = json!({
        "ma": a.ma,
        "mb": a.mb,
        "alphabet": a.alphabet.0,
        "flag_gap": [a.flag_gap.0, a.flag_gap.1],
        "filter_trivial": enum_cfg.filter_trivial,
        "optimizer": config,
    });
    ReportEnvelope::new("search", Some(config.seed), cfg, payload, elapsed_ms(start))
        .write_to(out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_and_alphabet_parsers() {
        assert_eq!(parse_flag("3,4"), Ok((3, 4)));
        assert!(parse_flag("3,5").is_err());
        assert!(parse_flag("0,1").is_err());
        assert!(parse_flag("3").is_err());
        assert_eq!(parse_alphabet("-1,0,1").unwrap().0, vec![-1, 0, 1]);
        assert!(parse_alphabet("1,x").is_err());
        assert_eq!(parse_sphere_dim("inf"), Ok(SphereDim::Infinite));
        assert_eq!(parse_sphere_dim("3"), Ok(SphereDim::Finite(3)));
        assert!(parse_sphere_dim("0").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["dimwit", "bogus"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(
            run(["dimwit", "sphere", "table"], &mut o, &mut e),
            EXIT_USAGE
        );
        assert_eq!(run(["dimwit", "--help"], &mut o, &mut e), 0);
    }

    #[test]
    fn domain_errors_exit_one() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(
            ["dimwit", "family", "bgamma", "--mb", "3", "--gamma", "-1"],
            &mut o,
            &mut e,
        );
        assert_eq!(code, EXIT_USAGE);
    }
}
