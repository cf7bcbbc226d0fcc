//! `rlnc`: throughput analysis, sweeps, optimisation and Monte Carlo
//! validation for random linear coding over a length-dependent erasure
//! channel. All output is CSV.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rlnc_core::model::{self, CodingConfig, GvForm, ModelOptions, QamArgument};
use rlnc_core::montecarlo::{self, EstimateRow, SimError, SimMode, TrialPlan};
use rlnc_core::sweep::{self, Objective, PrecodeMode, SweepSpec, Variable};
use rlnc_core::table::{fmt_num, metrics_cells, CsvTable, METRICS_HEADER};

const EXIT_USAGE: u8 = 1;
const EXIT_ABORT: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "rlnc", version, about = "Random linear coding throughput over a length-dependent erasure channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the model at one operating point.
    Analyze(AnalyzeArgs),
    /// Evaluate the model over a grid of n, u or k.
    Sweep(SweepArgs),
    /// Monte Carlo estimate of throughput and data rate.
    Simulate(SimulateArgs),
    /// Exhaustive search for the best n, u or k in a range.
    Optimize(OptimizeArgs),
}

#[derive(Args, Debug, Clone)]
struct ModelFlags {
    /// Apply Q to 3 g log2 q / (q - 1) directly instead of its square root.
    #[arg(long)]
    eq4_literal: bool,
    /// Report the Gilbert-Varshamov infimum instead of the guaranteed distance.
    #[arg(long)]
    gv_literal: bool,
    /// Fixed erasure probability replacing the length-dependent model.
    #[arg(long, value_name = "E")]
    const_epsilon: Option<f64>,
}

impl ModelFlags {
    fn options(&self) -> ModelOptions {
        ModelOptions {
            qam: if self.eq4_literal {
                QamArgument::Literal
            } else {
                QamArgument::SquareRoot
            },
            gv: if self.gv_literal {
                GvForm::Infimum
            } else {
                GvForm::Guaranteed
            },
            constant_erasure: self.const_epsilon,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct OutputFlags {
    /// Write the table to a file instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Generation size.
    #[arg(long = "K")]
    generation_size: u64,
    /// Symbol exponent; q = 2^u.
    #[arg(long)]
    u: u32,
    /// Symbols per packet.
    #[arg(long)]
    n: u64,
    /// SNR per bit in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_db: f64,
    /// Information symbols per packet; enables the pre-code.
    #[arg(long)]
    precode_k: Option<u64>,
    #[command(flatten)]
    model: ModelFlags,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args, Debug)]
struct BaseFlags {
    /// Generation size.
    #[arg(long = "K")]
    generation_size: Option<u64>,
    /// Symbol exponent; q = 2^u.
    #[arg(long)]
    u: Option<u32>,
    /// Symbols per packet.
    #[arg(long)]
    n: Option<u64>,
    /// SNR per bit in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<f64>,
    /// Hold k fixed (pre-code on).
    #[arg(long, conflicts_with = "precode_rate")]
    precode_k: Option<u64>,
    /// Use k = ceil(rate * n) (pre-code on).
    #[arg(long)]
    precode_rate: Option<f64>,
}

impl BaseFlags {
    fn precode(&self) -> PrecodeMode {
        match (self.precode_k, self.precode_rate) {
            (Some(k), _) => PrecodeMode::FixedInfo { k },
            (None, Some(rate)) => PrecodeMode::FixedRate { rate },
            (None, None) => PrecodeMode::None,
        }
    }

    /// Base configuration for a scan over `variable`; the scanned field is
    /// filled in per grid point, so it may be absent here.
    fn base_config(&self, variable: Variable, options: ModelOptions) -> Result<CodingConfig, String> {
        let missing = |flag: &str| format!("missing required flag --{flag}");
        let generation_size = self.generation_size.ok_or_else(|| missing("K"))?;
        let snr_db = self.snr_db.ok_or_else(|| missing("snr-db"))?;
        let u = match (variable, self.u) {
            (Variable::FieldBits, u) => u.unwrap_or(1),
            (_, Some(u)) => u,
            (_, None) => return Err(missing("u")),
        };
        let n = match (variable, self.n) {
            (Variable::PacketLen, n) => n.unwrap_or(1),
            (_, Some(n)) => n,
            (_, None) => return Err(missing("n")),
        };
        Ok(CodingConfig::uncoded(generation_size, n, u, snr_db).with_options(options))
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Figure preset: 1, 2, 3, 4a or 4b.
    #[arg(long, conflicts_with_all = ["var", "from", "to", "step"])]
    figure: Option<String>,
    /// Swept variable: n, u or k.
    #[arg(long, required_unless_present = "figure")]
    var: Option<Variable>,
    #[arg(long, required_unless_present = "figure")]
    from: Option<u64>,
    #[arg(long, required_unless_present = "figure")]
    to: Option<u64>,
    #[arg(long, default_value_t = 1)]
    step: u64,
    #[command(flatten)]
    base: BaseFlags,
    #[command(flatten)]
    model: ModelFlags,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    /// Scanned variable: n, u or k.
    #[arg(long)]
    var: Variable,
    #[arg(long)]
    from: u64,
    #[arg(long)]
    to: u64,
    /// Objective: S or R.
    #[arg(long, default_value = "S")]
    maximize: Objective,
    #[command(flatten)]
    base: BaseFlags,
    #[command(flatten)]
    model: ModelFlags,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    PacketErasure,
    SymbolLevel,
}

impl From<ModeArg> for SimMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::PacketErasure => SimMode::PacketErasure,
            ModeArg::SymbolLevel => SimMode::SymbolLevel,
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Generation size
    #[arg(long = "K")]
    generation_size: u64,
    /// Symbol exponent; q = 2^u
    #[arg(long)]
    u: u32,
    /// Symbols per packet
    #[arg(long)]
    n: u64,
    /// SNR per bit in dB
    #[arg(long, allow_hyphen_values = true)]
    snr_db: f64,
    /// Information symbols per packet; enables the pre-code
    #[arg(long)]
    precode_k: Option<u64>,
    /// Generations to transmit
    #[arg(long)]
    trials: u64,
    /// Base seed; trial i uses stream i of this key
    #[arg(long)]
    seed: u64,
    /// Channel realisation
    #[arg(long, value_enum, default_value = "packet-erasure")]
    mode: ModeArg,
    /// Run both modes and compare against the model
    #[arg(long)]
    validate: bool,
    #[command(flatten)]
    model: ModelFlags,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Abort(String),
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::TrialCap => Failure::Abort(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn point_config(
    generation_size: u64,
    n: u64,
    u: u32,
    snr_db: f64,
    precode_k: Option<u64>,
    options: ModelOptions,
) -> CodingConfig {
    match precode_k {
        Some(k) => CodingConfig::precoded(generation_size, n, k, u, snr_db),
        None => CodingConfig::uncoded(generation_size, n, u, snr_db),
    }
    .with_options(options)
}

fn analyze(args: &AnalyzeArgs) -> Result<CsvTable, Failure> {
    let config = point_config(
        args.generation_size,
        args.n,
        args.u,
        args.snr_db,
        args.precode_k,
        args.model.options(),
    );
    let row = model::throughput(&config).map_err(usage)?;
    let mut table = CsvTable::new(["K", "u", "n", "k", "snr_db"].into_iter().chain(METRICS_HEADER));
    let mut cells = vec![
        config.generation_size.to_string(),
        config.field_bits.to_string(),
        config.packet_len.to_string(),
        config.info_len.to_string(),
        fmt_num(config.snr_db),
    ];
    cells.extend(metrics_cells(&row));
    table.push(cells).map_err(usage)?;
    Ok(table)
}

fn sweep_table(variable: Variable, result: &sweep::SweepResult) -> Result<CsvTable, Failure> {
    let mut table = CsvTable::new([variable.name()].into_iter().chain(METRICS_HEADER));
    for (value, row) in result.grid.iter().zip(&result.rows) {
        let mut cells = vec![value.to_string()];
        cells.extend(metrics_cells(row));
        table.push(cells).map_err(usage)?;
    }
    Ok(table)
}

fn sweep_cmd(args: &SweepArgs) -> Result<CsvTable, Failure> {
    let options = args.model.options();
    let spec = match &args.figure {
        Some(name) => sweep::figure_preset(name).and_then(|p| p.spec(options)).map_err(usage)?,
        None => {
            let variable = args.var.expect("clap enforces --var");
            let grid = sweep::linear_grid(
                args.from.expect("clap enforces --from"),
                args.to.expect("clap enforces --to"),
                args.step,
            )
            .map_err(usage)?;
            SweepSpec {
                base: args.base.base_config(variable, options).map_err(Failure::Usage)?,
                variable,
                grid,
                precode: args.base.precode(),
            }
        }
    };
    let result = sweep::run_sweep(&spec).map_err(usage)?;
    let mut table = sweep_table(spec.variable, &result)?;
    table.comment(format!("argmax_S={} argmax_R={}", result.argmax_s, result.argmax_r));
    Ok(table)
}

fn optimize_cmd(args: &OptimizeArgs) -> Result<CsvTable, Failure> {
    let base = args
        .base
        .base_config(args.var, args.model.options())
        .map_err(Failure::Usage)?;
    let (best, row) =
        sweep::optimize(&base, args.base.precode(), args.var, args.from, args.to, args.maximize).map_err(usage)?;
    let mut table = CsvTable::new([args.var.name()].into_iter().chain(METRICS_HEADER));
    let mut cells = vec![best.to_string()];
    cells.extend(metrics_cells(&row));
    table.push(cells).map_err(usage)?;
    let objective = match args.maximize {
        Objective::S => "S",
        Objective::R => "R",
    };
    table.comment(format!("maximize={objective} range={}..={}", args.from, args.to));
    Ok(table)
}

const ESTIMATE_HEADER: [&str; 12] = [
    "mode",
    "seed",
    "trials",
    "mean_T",
    "stderr_T",
    "epsilon_hat",
    "S_hat",
    "stderr_S",
    "ci95_S",
    "R_hat",
    "stderr_R",
    "ci95_R",
];

fn estimate_cells(mode: SimMode, seed: u64, e: &EstimateRow) -> Vec<String> {
    vec![
        mode.name().to_string(),
        seed.to_string(),
        e.trials.to_string(),
        fmt_num(e.mean_t),
        fmt_num(e.stderr_t),
        fmt_num(e.epsilon_hat),
        fmt_num(e.s_hat),
        fmt_num(e.stderr_s),
        fmt_num(e.ci95_s),
        fmt_num(e.r_hat),
        fmt_num(e.stderr_r),
        fmt_num(e.ci95_r),
    ]
}

fn simulate(args: &SimulateArgs) -> Result<CsvTable, Failure> {
    if args.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let config = point_config(
        args.generation_size,
        args.n,
        args.u,
        args.snr_db,
        args.precode_k,
        args.model.options(),
    );
    if !args.validate {
        let mode = SimMode::from(args.mode);
        let estimate = montecarlo::run(&TrialPlan {
            config,
            trials: args.trials,
            base_seed: args.seed,
            mode,
        })?;
        let mut table = CsvTable::new(ESTIMATE_HEADER);
        table.push(estimate_cells(mode, args.seed, &estimate)).map_err(usage)?;
        return Ok(table);
    }
    let report = montecarlo::validate(&config, args.trials, args.seed)?;
    let mut table = CsvTable::new(
        ESTIMATE_HEADER
            .into_iter()
            .chain(["S_model", "R_model", "z_S", "z_R", "agree"]),
    );
    for check in &report.checks {
        let mut cells = estimate_cells(check.mode, check.seed, &check.estimate);
        cells.extend([
            fmt_num(check.target_s),
            fmt_num(check.target_r),
            fmt_num(check.z_s),
            fmt_num(check.z_r),
            check.agrees.to_string(),
        ]);
        table.push(cells).map_err(usage)?;
    }
    table.comment(format!(
        "z_limit={} all_agree={}",
        fmt_num(montecarlo::Z_LIMIT),
        report.all_agree()
    ));
    Ok(table)
}

fn emit(table: &CsvTable, output: &OutputFlags) -> Result<(), Failure> {
    let text = table.render();
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Analyze(a) => emit(&analyze(a)?, &a.output),
        Command::Sweep(a) => emit(&sweep_cmd(a)?, &a.output),
        Command::Simulate(a) => emit(&simulate(a)?, &a.output),
        Command::Optimize(a) => emit(&optimize_cmd(a)?, &a.output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Abort(msg)) => {
            eprintln!("aborted: {msg}");
            ExitCode::from(EXIT_ABORT)
        }
    }
}
