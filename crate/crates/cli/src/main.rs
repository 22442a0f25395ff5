//! `qotto` — evaluate single cycles, emit parameter sweeps and run the
//! reproduction checks.
//!
//! Exit codes: 0 success, 1 failed checks / I/O / integration failure,
//! 2 usage or validation error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use qotto::analysis::{linspace, region_map, sweep_efficiency_vs_phot, sweep_efficiency_vs_ratio, sweep_xi_vs_tau, SweepTable};
use qotto::otto::{engine_condition, stroke_oracle};
use qotto::propagator::DEFAULT_STEPS;
use qotto::verify::{self, VerifyConfig};
use qotto::{CyclePoint, RampProtocol, ReservoirSpec};

#[derive(Parser)]
#[command(name = "qotto", version, about = "Spin-1/2 Otto engine with a population-inverted hot bath")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one cycle and print work, heats and efficiency.
    Cycle {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit a parameter sweep as CSV or JSON.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Run the reproduction checks; exits 1 if any fails.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Random cycles drawn for the oracle comparison.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Run a single check by number.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
        only: Option<u8>,
    },
}

#[derive(Subcommand)]
enum SweepKind {
    /// Transition probability against ramp duration.
    XiTau {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Ramp durations in seconds, comma separated [default: 100 to 400 us in 25 us steps].
        #[arg(long, value_delimiter = ',')]
        tau_list: Option<Vec<f64>>,
    },
    /// Engine regime over a (p_hot, xi) grid.
    Region {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_parser = parse_range, default_value = "0.51:0.99:49")]
        p_hot_range: Range,
        #[arg(long, value_parser = parse_range, default_value = "0:0.5:51")]
        xi_range: Range,
    },
    /// Efficiency against hot-bath population, one curve per ramp duration.
    EtaPhot {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_delimiter = ',', default_value = "100e-6,200e-6,300e-6,400e-6")]
        tau_list: Vec<f64>,
        #[arg(long, value_parser = parse_range, default_value = "0.55:0.95:81")]
        p_hot_range: Range,
    },
    /// Efficiency against hot-bath population, one curve per ν_cold/ν_hot.
    EtaRatio {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.4,0.5,0.6,0.7")]
        ratio_list: Vec<f64>,
        #[arg(long, value_parser = parse_range, default_value = "0.55:0.95:81")]
        p_hot_range: Range,
    },
}

/// Physical parameters; flags override `--config`, which overrides defaults.
#[derive(Args, Default)]
struct ParamArgs {
    /// TOML file with any of: nu_cold, nu_hot, tau, steps, p_cold, p_hot.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Cold-stroke splitting in Hz [default: 2000].
    #[arg(long)]
    nu_cold: Option<f64>,
    /// Hot-stroke splitting in Hz [default: 3600].
    #[arg(long)]
    nu_hot: Option<f64>,
    /// Ramp duration in seconds [default: 200e-6].
    #[arg(long)]
    tau: Option<f64>,
    /// Integration steps per ramp [default: 4096].
    #[arg(long)]
    steps: Option<usize>,
    /// Excited-state population of the cold bath [default: 0.261].
    #[arg(long)]
    p_cold: Option<f64>,
    /// Excited-state population of the hot bath, > 0.5 [default: 0.813].
    #[arg(long)]
    p_hot: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file, or `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy)]
struct Range {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Range {
    fn points(self) -> Vec<f64> {
        linspace(self.lo, self.hi, self.n)
    }
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(format!("expected lo:hi:n, got {s:?}"));
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    let n: usize = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
    if n == 0 {
        return Err("range needs at least one point".into());
    }
    Ok(Range { lo: num(lo)?, hi: num(hi)?, n })
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    nu_cold: Option<f64>,
    nu_hot: Option<f64>,
    tau: Option<f64>,
    steps: Option<usize>,
    p_cold: Option<f64>,
    p_hot: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Params {
    nu_cold: f64,
    nu_hot: f64,
    tau: f64,
    steps: usize,
    p_cold: f64,
    p_hot: f64,
}

impl Params {
    fn protocol(&self) -> Result<RampProtocol, Failure> {
        Ok(RampProtocol::new(self.nu_cold, self.nu_hot, self.tau)?.with_steps(self.steps)?)
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<qotto::Error> for Failure {
    fn from(e: qotto::Error) -> Self {
        match e {
            qotto::Error::Accuracy { .. } => Failure::Runtime(format!("{e}; raise --steps")),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn resolve(args: &ParamArgs) -> Result<Params, Failure> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            toml::from_str::<FileConfig>(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    Ok(Params {
        nu_cold: args.nu_cold.or(file.nu_cold).unwrap_or(2000.0),
        nu_hot: args.nu_hot.or(file.nu_hot).unwrap_or(3600.0),
        tau: args.tau.or(file.tau).unwrap_or(200e-6),
        steps: args.steps.or(file.steps).unwrap_or(DEFAULT_STEPS),
        p_cold: args.p_cold.or(file.p_cold).unwrap_or(0.261),
        p_hot: args.p_hot.or(file.p_hot).unwrap_or(0.813),
    })
}

fn emit(out: &Path, body: &str) -> Result<(), Failure> {
    if out == Path::new("-") {
        let mut stdout = io::stdout().lock();
        stdout.write_all(body.as_bytes())?;
        stdout.flush()?;
    } else {
        fs::write(out, body).map_err(|e| Failure::Runtime(format!("{}: {e}", out.display())))?;
    }
    Ok(())
}

fn describe(out: &Path) -> String {
    if out == Path::new("-") {
        "stdout".into()
    } else {
        out.display().to_string()
    }
}

/// Field suffixes carry units: energies in h·Hz, β in 1/Hz.
#[derive(Serialize)]
#[allow(non_snake_case)]
struct CycleReport {
    nu_cold_Hz: f64,
    nu_hot_Hz: f64,
    tau_s: f64,
    steps: usize,
    p_cold_plus: f64,
    p_hot_plus: f64,
    beta_cold_per_Hz: f64,
    beta_hot_per_Hz: f64,
    xi: f64,
    work_hHz: f64,
    q_hot_hHz: f64,
    q_cold_hHz: f64,
    efficiency: Option<f64>,
    eta_otto: f64,
    work_adiabatic_hHz: f64,
    inner_friction_hHz: f64,
    /// `None` when every ξ yields an engine.
    engine_xi_bound: Option<f64>,
    regime: &'static str,
}

fn cycle(params: &ParamArgs, output: &OutputArgs) -> Result<(), Failure> {
    let p = resolve(params)?;
    let proto = p.protocol()?;
    let cold = ReservoirSpec::from_population(p.nu_cold, p.p_cold)?;
    let hot = ReservoirSpec::from_population(p.nu_hot, p.p_hot)?;
    let point = CyclePoint::from_protocol(p.p_cold, p.p_hot, &proto)?;
    let r = stroke_oracle(&cold, &hot, &proto)?.result;
    let bound = engine_condition(&point).xi_bound;
    let report = CycleReport {
        nu_cold_Hz: p.nu_cold,
        nu_hot_Hz: p.nu_hot,
        tau_s: p.tau,
        steps: p.steps,
        p_cold_plus: p.p_cold,
        p_hot_plus: p.p_hot,
        beta_cold_per_Hz: cold.beta(),
        beta_hot_per_Hz: hot.beta(),
        xi: r.xi,
        work_hHz: r.work,
        q_hot_hHz: r.q_hot,
        q_cold_hHz: r.q_cold,
        efficiency: r.efficiency,
        eta_otto: r.eta_otto,
        work_adiabatic_hHz: r.work_adiabatic,
        inner_friction_hHz: r.inner_friction,
        engine_xi_bound: bound.is_finite().then_some(bound),
        regime: r.regime.label(),
    };
    let body = match output.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => {
            let value = serde_json::to_value(&report).expect("report serializes");
            let map = value.as_object().expect("struct serializes to an object");
            let cells: Vec<String> = map
                .values()
                .map(|v| match v {
                    serde_json::Value::Null => String::new(),
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            let keys: Vec<&str> = map.keys().map(String::as_str).collect();
            format!("{}\n{}\n", keys.join(","), cells.join(","))
        }
    };
    emit(&output.out, &body)
}

fn default_tau_grid() -> Vec<f64> {
    (0..13).map(|k| (100.0 + 25.0 * k as f64) * 1e-6).collect()
}

fn sweep(kind: &SweepKind) -> Result<(), Failure> {
    let (table, output): (SweepTable, &OutputArgs) = match kind {
        SweepKind::XiTau { params, output, tau_list } => {
            let p = resolve(params)?;
            let taus = tau_list.clone().unwrap_or_else(default_tau_grid);
            (sweep_xi_vs_tau(&p.protocol()?, &taus)?, output)
        }
        SweepKind::Region { params, output, p_hot_range, xi_range } => {
            let p = resolve(params)?;
            (region_map(p.p_cold, p.nu_cold, p.nu_hot, &p_hot_range.points(), &xi_range.points())?, output)
        }
        SweepKind::EtaPhot { params, output, tau_list, p_hot_range } => {
            let p = resolve(params)?;
            (sweep_efficiency_vs_phot(p.p_cold, &p.protocol()?, tau_list, &p_hot_range.points())?, output)
        }
        SweepKind::EtaRatio { params, output, ratio_list, p_hot_range } => {
            let p = resolve(params)?;
            (sweep_efficiency_vs_ratio(p.p_cold, &p.protocol()?, ratio_list, &p_hot_range.points())?, output)
        }
    };
    let body = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json() + "\n",
    };
    emit(&output.out, &body)?;
    eprintln!(
        "{}: {} rows x {} columns -> {}",
        table.metadata.get("kind").map_or("sweep", String::as_str),
        table.rows.len(),
        table.columns.len(),
        describe(&output.out)
    );
    Ok(())
}

fn run_verify(params: &ParamArgs, output: &OutputArgs, samples: usize, seed: Option<u64>, only: Option<u8>) -> Result<bool, Failure> {
    let p = resolve(params)?;
    let defaults = VerifyConfig::default();
    let cfg = VerifyConfig {
        nu_cold: p.nu_cold,
        nu_hot: p.nu_hot,
        tau: p.tau,
        steps: p.steps,
        samples,
        seed: seed.unwrap_or(defaults.seed),
        ..defaults
    };
    let outcomes = match only {
        Some(id) => verify::run_one(&cfg, id).into_iter().collect(),
        None => verify::run(&cfg),
    };
    let body = match output.format.unwrap_or(Format::Csv) {
        Format::Json => serde_json::to_string_pretty(&outcomes).expect("outcomes serialize") + "\n",
        Format::Csv => outcomes
            .iter()
            .map(|o| format!("[{}] {:>2} {}: {}\n", if o.passed { "PASS" } else { "FAIL" }, o.id, o.name, o.detail))
            .collect(),
    };
    emit(&output.out, &body)?;
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    eprintln!("verify: {} passed, {failed} failed", outcomes.len() - failed);
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Cycle { params, output } => cycle(params, output).map(|()| true),
        Command::Sweep { kind } => sweep(kind).map(|()| true),
        Command::Verify { params, output, samples, seed, only } => run_verify(params, output, *samples, *seed, *only),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
