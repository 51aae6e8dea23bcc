//! Command-line front end. Every command prints one CSV table or one JSON
//! document; output is byte-identical for identical arguments.

mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use rayon::prelude::*;

use crate::error::Error;
use crate::oracle_well;
use crate::overlap::{self, QuadratureConfig};
use crate::states::{self, Coupling, Dimension, Phase, ScatteringState};
use output::{Cell, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;
pub const EXIT_NO_BOUND_STATE: i32 = 5;
pub const EXIT_INCONSISTENT: i32 = 6;

const AFTER_HELP: &str = "\
Units: hbar = 2m = 1 throughout, so E = k^2. There is no units switch.

Exit codes:
  0  success
  1  I/O error (config, samples or output file)
  2  usage error
  3  domain error (invalid input, degenerate wavenumbers, zero phase, no root in bracket)
  4  convergence failure or cross-check mismatch
  5  no bound state
  6  inconsistent family (samples disagree)";

#[derive(Debug, Parser)]
#[command(name = "point-interaction", version, about = "Point interactions in two and three dimensions", after_help = AFTER_HELP)]
pub struct Cli {
    /// File of `key = value` lines mirroring the long flags; command-line flags win
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Phase function on a wavenumber grid
    EtaTable {
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long)]
        k_min: f64,
        #[arg(long)]
        k_max: f64,
        #[arg(long, default_value_t = 11)]
        n: usize,
        /// Logarithmic spacing
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form orthogonality residual of two states
    Residual {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Regularized numeric overlap compared with the closed form
    Overlap {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Phase at l that cancels the overlap with a reference state at k
    SolvePhase {
        #[command(flatten)]
        coupling: CouplingArgs,
        /// Reference wavenumber
        #[arg(long)]
        k: f64,
        /// Reference tan(eta); taken from the coupling when omitted
        #[arg(long, allow_negative_numbers = true)]
        tan_k: Option<f64>,
        /// Target wavenumbers (comma separated)
        #[arg(long, value_delimiter = ',', required = true)]
        l: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Coupling recovered from (k, tan eta) samples
    Infer {
        #[arg(long, value_parser = parse_dim)]
        dim: Dimension,
        /// File with one `k, tan_eta` pair per line (`#` comments)
        #[arg(long, value_name = "PATH")]
        samples: Option<PathBuf>,
        /// Inline samples `k:tan_eta` (comma separated)
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        sample: Vec<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Bound-state decay constant and radial profile
    BoundState {
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long, default_value_t = 0.01)]
        r_min: f64,
        #[arg(long, default_value_t = 10.0)]
        r_max: f64,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long)]
        log: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Measured delta-normalization coefficient
    DeltaNorm {
        #[command(flatten)]
        coupling: CouplingArgs,
        /// Wavenumbers (comma separated)
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<f64>,
        /// Half-width of the l window
        #[arg(long, default_value_t = 0.05)]
        window: f64,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Finite-range wells tuned to the coupling as the radius shrinks
    WellLimit {
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long)]
        k: f64,
        /// Strictly descending radii (comma separated)
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct CouplingArgs {
    #[arg(long, value_parser = parse_dim)]
    dim: Dimension,
    /// 2D coupling k_b > 0
    #[arg(long, conflicts_with_all = ["kbprime", "unitary"])]
    kb: Option<f64>,
    /// 3D coupling k_b' (bound state when negative)
    #[arg(long, allow_negative_numbers = true, conflicts_with = "unitary")]
    kbprime: Option<f64>,
    /// 3D unitary limit k_b' = 0
    #[arg(long)]
    unitary: bool,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[command(flatten)]
    coupling: CouplingArgs,
    #[arg(long)]
    k: f64,
    #[arg(long)]
    l: f64,
    /// Explicit tan(eta) at k instead of the coupling's (`inf` allowed)
    #[arg(long, allow_negative_numbers = true, requires = "tan_l")]
    tan_k: Option<f64>,
    /// Explicit tan(eta) at l
    #[arg(long, allow_negative_numbers = true, requires = "tan_k")]
    tan_l: Option<f64>,
}

#[derive(Debug, Args)]
struct QuadArgs {
    #[arg(long)]
    tol: Option<f64>,
    /// Lower cutoff of the boundary-term check
    #[arg(long)]
    eps: Option<f64>,
    /// Ascending upper cutoffs (comma separated)
    #[arg(long, value_delimiter = ',')]
    cutoffs: Option<Vec<f64>>,
    /// Decreasing Abel damping values (comma separated)
    #[arg(long, value_delimiter = ',')]
    damping: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Significant digits
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u8).range(6..=17))]
    precision: u8,
}

fn parse_dim(s: &str) -> Result<Dimension, String> {
    match s {
        "2" => Ok(Dimension::Two),
        "3" => Ok(Dimension::Three),
        _ => Err(format!("dimension must be 2 or 3, got '{s}'")),
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Lib(e) => match e {
                Error::ConvergenceFailure { .. } | Error::CrossCheck { .. } => EXIT_CONVERGENCE,
                Error::NoBoundState(_) => EXIT_NO_BOUND_STATE,
                Error::InconsistentFamily(_) => EXIT_INCONSISTENT,
                _ => EXIT_DOMAIN,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Runs the CLI on raw arguments and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    if let Some(path) = config::find_config_path(&args) {
        match config::merge(&Cli::command(), args, Path::new(&path)) {
            Ok(merged) => args = merged,
            Err(config::ConfigError::Io(e)) => {
                eprintln!("error: cannot read config {}: {e}", Path::new(&path).display());
                return EXIT_IO;
            }
            Err(config::ConfigError::Syntax(m)) => {
                eprintln!("error: {m}");
                return EXIT_USAGE;
            }
        }
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    let (table, out) = match command {
        Command::EtaTable {
            coupling,
            k_min,
            k_max,
            n,
            log,
            out,
        } => (eta_table(&coupling, k_min, k_max, n, log)?, out),
        Command::Residual { pair, out } => (residual(&pair)?, out),
        Command::Overlap { pair, quad, out } => (overlap_cmd(&pair, &quad)?, out),
        Command::SolvePhase {
            coupling,
            k,
            tan_k,
            l,
            out,
        } => (solve_phase(&coupling, k, tan_k, &l)?, out),
        Command::Infer {
            dim,
            samples,
            sample,
            out,
        } => (infer(dim, samples.as_deref(), &sample)?, out),
        Command::BoundState {
            coupling,
            r_min,
            r_max,
            n,
            log,
            out,
        } => (bound_state(&coupling, r_min, r_max, n, log)?, out),
        Command::DeltaNorm {
            coupling,
            k,
            window,
            quad,
            out,
        } => (delta_norm(&coupling, &k, window, &quad)?, out),
        Command::WellLimit {
            coupling,
            k,
            radii,
            out,
        } => (well_limit(&coupling, k, &radii)?, out),
    };
    let text = table.render(out.format, out.precision as usize);
    match &out.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write output: {e}")))
        }
    }
}

fn coupling_of(args: &CouplingArgs) -> Result<Coupling, CliError> {
    match args.dim {
        Dimension::Two => {
            if args.kbprime.is_some() || args.unitary {
                return Err(usage("--kbprime and --unitary are 3D couplings; use --kb with --dim 2"));
            }
            let kb = args.kb.ok_or_else(|| usage("--dim 2 needs --kb"))?;
            Ok(Coupling::two_d(kb)?)
        }
        Dimension::Three => {
            if args.kb.is_some() {
                return Err(usage("--kb is a 2D coupling; use --kbprime or --unitary with --dim 3"));
            }
            if args.unitary {
                return Ok(Coupling::UnitaryLimit);
            }
            let kbp = args
                .kbprime
                .ok_or_else(|| usage("--dim 3 needs --kbprime or --unitary"))?;
            Ok(Coupling::three_d(kbp)?)
        }
    }
}

fn has_coupling(args: &CouplingArgs) -> bool {
    args.kb.is_some() || args.kbprime.is_some() || args.unitary
}

fn grid(lo: f64, hi: f64, n: usize, log: bool, what: &str) -> Result<Vec<f64>, CliError> {
    if n < 2 {
        return Err(usage(format!("--n must be at least 2, got {n}")));
    }
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(usage(format!("{what} grid needs 0 < min < max, got [{lo}, {hi}]")));
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let t = i as f64 / last;
            if log {
                (lo.ln() + t * (hi / lo).ln()).exp()
            } else {
                lo + t * (hi - lo)
            }
        })
        .collect())
}

fn eta_table(args: &CouplingArgs, k_min: f64, k_max: f64, n: usize, log: bool) -> Result<Table, CliError> {
    let coupling = coupling_of(args)?;
    let ks = grid(k_min, k_max, n, log, "k")?;
    let phases = ks
        .par_iter()
        .map(|&k| coupling.phase(k))
        .collect::<Result<Vec<Phase>, Error>>()?;
    let mut t = Table::new("eta-table", vec!["k", "cos_eta", "sin_eta", "tan_eta"]);
    t.meta.push(("dim", Cell::Int(args.dim.as_int() as i64)));
    t.meta.push(("coupling", Cell::Num(coupling.value())));
    for (k, p) in ks.iter().zip(&phases) {
        t.rows.push(vec![(*k).into(), p.cos().into(), p.sin().into(), p.tan().into()]);
    }
    Ok(t)
}

/// Phases of the two states of a pair command.
fn pair_phases(pair: &PairArgs) -> Result<(Phase, Phase), CliError> {
    if pair.k <= 0.0 || pair.l <= 0.0 || !pair.k.is_finite() || !pair.l.is_finite() {
        return Err(Error::Domain(format!("wavenumbers must be positive, got k = {}, l = {}", pair.k, pair.l)).into());
    }
    match (pair.tan_k, pair.tan_l) {
        (Some(tk), Some(tl)) => {
            if has_coupling(&pair.coupling) {
                return Err(usage("give either a coupling or --tan-k/--tan-l, not both"));
            }
            Ok((Phase::from_tan(tk)?, Phase::from_tan(tl)?))
        }
        _ => {
            let c = coupling_of(&pair.coupling)?;
            Ok((c.phase(pair.k)?, c.phase(pair.l)?))
        }
    }
}

fn residual(pair: &PairArgs) -> Result<Table, CliError> {
    let (pk, pl) = pair_phases(pair)?;
    if pair.k == pair.l {
        return Err(Error::DegenerateWavenumbers { k: pair.k }.into());
    }
    let value = overlap::residual(pair.coupling.dim, pair.k, pair.l, pk.tan(), pl.tan())?;
    let mut t = Table::new("residual", vec!["k", "l", "tan_eta_k", "tan_eta_l", "residual"]);
    t.rows.push(vec![
        pair.k.into(),
        pair.l.into(),
        pk.tan().into(),
        pl.tan().into(),
        value.into(),
    ]);
    Ok(t)
}

fn quad_config(dim: Dimension, k: f64, l: f64, q: &QuadArgs) -> QuadratureConfig {
    let mut cfg = QuadratureConfig::for_pair(dim, k, l);
    if let Some(t) = q.tol {
        cfg = cfg.with_tolerance(t, k.max(l));
    }
    if let Some(e) = q.eps {
        cfg.lower_eps = e;
    }
    if let Some(c) = &q.cutoffs {
        cfg.upper_cutoffs = c.clone();
    }
    if let Some(d) = &q.damping {
        cfg.abel_damping = d.clone();
    }
    cfg
}

fn overlap_cmd(pair: &PairArgs, q: &QuadArgs) -> Result<Table, CliError> {
    let dim = pair.coupling.dim;
    let (pk, pl) = pair_phases(pair)?;
    let a = ScatteringState::new(dim, pair.k, pk)?;
    let b = ScatteringState::new(dim, pair.l, pl)?;
    let cfg = quad_config(dim, pair.k, pair.l, q);
    let o = overlap::overlap_numeric(&a, &b, &cfg)?;
    let closed = if pk.is_pole() || pl.is_pole() {
        f64::NAN
    } else {
        overlap::residual(dim, pair.k, pair.l, pk.tan(), pl.tan())?
    };
    let mut t = Table::new(
        "overlap",
        vec![
            "k",
            "l",
            "tan_eta_k",
            "tan_eta_l",
            "closed_form",
            "numeric",
            "difference",
            "raw_overlap",
            "lower_limit",
            "upper_limit",
            "tail_discarded",
            "extrapolation_spread",
        ],
    );
    t.meta.push(("tolerance", Cell::Num(cfg.tolerance)));
    t.rows.push(vec![
        pair.k.into(),
        pair.l.into(),
        pk.tan().into(),
        pl.tan().into(),
        closed.into(),
        o.finite_part.into(),
        (o.finite_part - closed).into(),
        o.raw_overlap.into(),
        o.lower_limit_contribution.into(),
        o.upper_limit_contribution.into(),
        o.oscillatory_tail_discarded.into(),
        o.extrapolation_spread.into(),
    ]);
    Ok(t)
}

fn solve_phase(args: &CouplingArgs, k: f64, tan_k: Option<f64>, ls: &[f64]) -> Result<Table, CliError> {
    let tk = match tan_k {
        Some(t) => {
            if has_coupling(args) {
                return Err(usage("give either a coupling or --tan-k, not both"));
            }
            t
        }
        None => coupling_of(args)?.phase(k)?.tan(),
    };
    let dim = args.dim;
    let solved = ls
        .par_iter()
        .map(|&l| overlap::solve_phase(l, k, tk, dim).map(|s| (l, s)))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut t = Table::new("solve-phase", vec!["k", "tan_eta_k", "l", "tan_eta_l", "closed_form"]);
    for (l, s) in solved {
        let closed = overlap::phase_family_closed_form(dim, l, k, tk).tan();
        t.rows.push(vec![k.into(), tk.into(), l.into(), s.tan().into(), closed.into()]);
    }
    Ok(t)
}

fn parse_sample(s: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = s
        .split(|c: char| c == ',' || c == ':' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .collect();
    match parts.as_slice() {
        [k, t] => {
            let k = k.parse().map_err(|_| usage(format!("bad sample wavenumber '{k}'")))?;
            let t = t.parse().map_err(|_| usage(format!("bad sample tan eta '{t}'")))?;
            Ok((k, t))
        }
        _ => Err(usage(format!("sample '{s}' must be 'k, tan_eta'"))),
    }
}

fn infer(dim: Dimension, file: Option<&Path>, inline: &[String]) -> Result<Table, CliError> {
    let mut samples = Vec::new();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                samples.push(parse_sample(line)?);
            }
        }
    }
    for s in inline {
        samples.push(parse_sample(s)?);
    }
    if samples.is_empty() {
        return Err(usage("infer needs --samples or --sample"));
    }
    let c = overlap::infer_coupling(&samples, dim)?;
    let kind = match c {
        Coupling::TwoD { .. } => "kb",
        Coupling::ThreeD { .. } => "kbprime",
        Coupling::UnitaryLimit => "unitary",
    };
    let mut t = Table::new("infer", vec!["dim", "parameter", "value", "samples"]);
    t.rows.push(vec![
        Cell::Int(dim.as_int() as i64),
        kind.into(),
        c.value().into(),
        Cell::Int(samples.len() as i64),
    ]);
    Ok(t)
}

fn bound_state(args: &CouplingArgs, r_min: f64, r_max: f64, n: usize, log: bool) -> Result<Table, CliError> {
    let coupling = coupling_of(args)?;
    let rs = grid(r_min, r_max, n, log, "r")?;
    let bs = states::bound_state(&coupling)?;
    let values = rs
        .par_iter()
        .map(|&r| bs.psi(r))
        .collect::<Result<Vec<f64>, Error>>()?;
    let mut t = Table::new("bound-state", vec!["kappa", "energy", "r", "psi"]);
    for (r, v) in rs.iter().zip(values) {
        t.rows.push(vec![bs.kappa.into(), bs.energy.into(), (*r).into(), v.into()]);
    }
    Ok(t)
}

/// Relative deviation above which a measured delta coefficient is flagged.
const DELTA_FLAG: f64 = 1e-2;

fn delta_norm(args: &CouplingArgs, ks: &[f64], window: f64, q: &QuadArgs) -> Result<Table, CliError> {
    if q.eps.is_some() || q.damping.is_some() {
        return Err(usage("delta-norm uses only --tol and --cutoffs"));
    }
    let coupling = coupling_of(args)?;
    let dim = args.dim;
    let measured = ks
        .par_iter()
        .map(|&k| {
            let cfg = QuadratureConfig {
                lower_eps: 1e-6,
                upper_cutoffs: q.cutoffs.clone().unwrap_or_default(),
                abel_damping: Vec::new(),
                tolerance: q.tol.unwrap_or(match dim {
                    Dimension::Two => overlap::DEFAULT_TOLERANCE_2D,
                    Dimension::Three => overlap::DEFAULT_TOLERANCE_3D,
                }),
            };
            overlap::delta_coefficient(dim, &coupling, k, window, &cfg)
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    let mut t = Table::new(
        "delta-norm",
        vec!["k", "window", "measured", "expected", "relative_deviation", "flagged"],
    );
    for (k, m) in ks.iter().zip(measured) {
        let expected = overlap::expected_delta_coefficient(dim, *k);
        let dev = (m - expected) / expected;
        t.rows.push(vec![
            (*k).into(),
            window.into(),
            m.into(),
            expected.into(),
            dev.into(),
            (dev.abs() > DELTA_FLAG).into(),
        ]);
    }
    Ok(t)
}

fn well_limit(args: &CouplingArgs, k: f64, radii: &[f64]) -> Result<Table, CliError> {
    let coupling = coupling_of(args)?;
    let table = oracle_well::zero_range_limit_study(args.dim, &coupling, k, radii)?;
    let mut t = Table::new(
        "well-limit",
        vec!["radius", "depth", "delta0", "tan_eta_well", "tan_eta_target", "error"],
    );
    t.meta.push(("k", Cell::Num(k)));
    t.meta.push(("monotone_tail", Cell::Flag(table.monotone_tail)));
    t.meta.push(("observed_rate", Cell::Num(table.observed_rate.unwrap_or(f64::NAN))));
    for r in &table.rows {
        t.rows.push(vec![
            r.radius.into(),
            r.depth.into(),
            r.delta0.into(),
            r.tan_eta_well.into(),
            r.tan_eta_target.into(),
            r.error.into(),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes_by_error() {
        assert_eq!(CliError::Lib(Error::NoBoundState(String::new())).exit_code(), EXIT_NO_BOUND_STATE);
        assert_eq!(CliError::Lib(Error::DegenerateWavenumbers { k: 1.0 }).exit_code(), EXIT_DOMAIN);
        assert_eq!(
            CliError::Lib(Error::InconsistentFamily(String::new())).exit_code(),
            EXIT_INCONSISTENT
        );
    }

    #[test]
    fn grids() {
        assert_eq!(grid(1.0, 2.0, 2, false, "k").unwrap(), vec![1.0, 2.0]);
        assert!(grid(1.0, 2.0, 1, false, "k").is_err());
        let g = grid(0.1, 10.0, 3, true, "k").unwrap();
        assert!((g[1] - 1.0).abs() < 1e-15);
    }
}
