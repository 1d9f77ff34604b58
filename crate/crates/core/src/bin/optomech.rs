use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use optomech_core::config::{self, Config};
use optomech_core::criticality::{
    critical_values, critical_values_exact, critical_values_harmonic, critical_values_perturbative, CriticalValues,
};
use optomech_core::fluctuations::{analyze, FluctuationReport, Method};
use optomech_core::output::{Cell, Table};
use optomech_core::presets::{figure_preset, NAMES};
use optomech_core::steady_state::{operating_branch, solve_branches, SteadyStateBranch};
use optomech_core::sweep::{all_failed, run_sweep, Axis, AxisRange, Constraint, Scale, SweepConfig, SweepSpec};
use optomech_core::{Error, NormalizedParams};

const EXIT_CONFIG: u8 = 2;
const EXIT_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "optomech", version, about = "Duffing optomechanical cavity with an intracavity OPA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON config: SystemParams fields plus an optional "sweep" object
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a parameter, e.g. --set detuning_over_omegam=0.8 --set opa_phase=pi/8
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    sets: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// All steady-state branches with their stability
    SteadyState,
    /// Critical point of the multistability region
    Critical {
        #[arg(long, value_enum, default_value_t = CritMethod::Auto)]
        method: CritMethod,
    },
    /// Routh-Hurwitz terms and drift-matrix eigenvalues per branch
    Stability,
    /// Quadrature variances, phonon number, temperature and squeezing
    Fluctuations {
        #[arg(long, value_enum, default_value_t = FlucMethod::Both)]
        method: FlucMethod,
        /// Branch index (ascending beta); default is the brightest stable branch
        #[arg(long)]
        branch: Option<usize>,
    },
    /// Parameter sweep from the config's "sweep" object and/or flags
    Sweep(SweepArgs),
    /// Run a figure preset
    Figure {
        /// Preset name (fig2 ... fig12); omit with --list
        name: Option<String>,
        /// Print the preset names and captions
        #[arg(long)]
        list: bool,
        /// Override the number of axis points
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        branch: Option<usize>,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    axis: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    stop: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum)]
    scale: Option<ScaleArg>,
    #[arg(long, value_enum)]
    constraint: Option<ConstraintArg>,
    /// Comma-separated output columns
    #[arg(long, value_delimiter = ',')]
    outputs: Vec<String>,
    #[arg(long)]
    branch: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CritMethod {
    Auto,
    Exact,
    Perturbative,
    Harmonic,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlucMethod {
    Lyapunov,
    Spectral,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstraintArg {
    None,
    OptimalDetuning,
}

enum Failure {
    Config(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::InvalidInput(_) | Error::Config(_) | Error::UnknownPreset(_) => {
                Failure::Config(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_FAILED)
        }
    }
}

fn load(common: &Common) -> Result<Config, Failure> {
    let mut cfg = match &common.config {
        Some(path) => config::load(path)?,
        None => Config {
            params: config::default_params(),
            sweep: None,
        },
    };
    config::apply_overrides(&mut cfg.params, &common.sets)?;
    cfg.params.validate()?;
    Ok(cfg)
}

fn emit(table: &Table, common: &Common) -> Result<(), Failure> {
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => table.write_csv(&mut buf)?,
        Format::Json => table.write_json(&mut buf)?,
    }
    let written = match &common.out {
        Some(p) => std::fs::write(p, &buf),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(&buf).and_then(|_| out.flush())
        }
    };
    match written {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Config(format!("cannot write output: {e}"))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let common = &cli.common;
    if let Command::Figure { list: true, .. } = &cli.command {
        let mut t = Table::new(&["name", "caption"]);
        for n in NAMES {
            t.push(vec![Cell::from(*n), Cell::from(figure_preset(n)?.caption)]);
        }
        return emit(&t, common);
    }
    let cfg = load(common)?;
    let table = match cli.command {
        Command::SteadyState => steady_state_table(&cfg.params.normalize()?)?,
        Command::Critical { method } => critical_table(&cfg.params.normalize()?, method)?,
        Command::Stability => stability_table(&cfg.params.normalize()?)?,
        Command::Fluctuations { method, branch } => fluctuation_table(&cfg.params.normalize()?, method, branch)?,
        Command::Sweep(args) => {
            let spec = sweep_spec(cfg, args)?;
            sweep_table(&spec)?
        }
        Command::Figure { name, points, branch, .. } => {
            let name = name.ok_or_else(|| Failure::Config("figure name required (or --list)".into()))?;
            let mut spec = figure_preset(&name)?.spec;
            config::apply_overrides(&mut spec.fixed, &common.sets)?;
            if let Some(n) = points {
                spec.range.points = n;
            }
            spec.branch = branch.or(spec.branch);
            sweep_table(&spec)?
        }
    };
    emit(&table, common)
}

fn branch_cells(i: usize, b: &SteadyStateBranch) -> Vec<Cell> {
    vec![
        i.into(),
        b.beta.into(),
        b.alpha.into(),
        b.intensity.into(),
        b.eff_detuning.into(),
        b.stable.into(),
        b.marginal.into(),
        b.verdict.max_real.into(),
        b.validity.beta_large.into(),
        b.validity.duffing_small.into(),
        b.near_degenerate.into(),
    ]
}

fn steady_state_table(p: &NormalizedParams) -> Result<Table, Failure> {
    let branches = solve_branches(p)?;
    let mut t = Table::new(&[
        "branch",
        "beta",
        "alpha",
        "intensity",
        "eff_detuning",
        "stable",
        "marginal",
        "max_real",
        "beta_large",
        "duffing_small",
        "near_degenerate",
    ]);
    for (i, b) in branches.iter().enumerate() {
        t.push(branch_cells(i, b));
    }
    Ok(t)
}

fn critical_table(p: &NormalizedParams, method: CritMethod) -> Result<Table, Failure> {
    let mut t = Table::new(&["method", "beta_crit", "detuning_crit", "eps2_crit", "power_crit_w", "trusted", "error"]);
    let push = |t: &mut Table, name: &str, r: optomech_core::Result<CriticalValues>| match r {
        Ok(c) => t.push(vec![
            c.method.as_str().into(),
            c.beta.into(),
            c.detuning.into(),
            c.eps2.into(),
            c.power.into(),
            c.trusted.into(),
            "".into(),
        ]),
        Err(e) => t.push(vec![
            name.into(),
            f64::NAN.into(),
            f64::NAN.into(),
            f64::NAN.into(),
            f64::NAN.into(),
            Cell::Bool(None),
            Cell::Text(e.to_string()),
        ]),
    };
    match method {
        CritMethod::Auto => push(&mut t, "auto", Ok(critical_values(p)?)),
        CritMethod::Exact => push(&mut t, "exact", Ok(critical_values_exact(p)?)),
        CritMethod::Perturbative => push(&mut t, "perturbative", Ok(critical_values_perturbative(p)?)),
        CritMethod::Harmonic => push(&mut t, "harmonic", Ok(critical_values_harmonic(p)?)),
        CritMethod::All => {
            push(&mut t, "exact", critical_values_exact(p));
            push(&mut t, "perturbative", critical_values_perturbative(p));
            push(&mut t, "harmonic", critical_values_harmonic(p));
        }
    }
    Ok(t)
}

fn stability_table(p: &NormalizedParams) -> Result<Table, Failure> {
    let branches = solve_branches(p)?;
    let mut cols = vec!["branch", "beta", "eff_detuning", "s1", "s2", "s3", "rh_stable", "eigen_stable", "marginal", "regime_positive", "max_real"];
    let eig_cols = ["eig0_re", "eig0_im", "eig1_re", "eig1_im", "eig2_re", "eig2_im", "eig3_re", "eig3_im"];
    cols.extend(eig_cols);
    let mut t = Table::new(&cols);
    for (i, b) in branches.iter().enumerate() {
        let v = &b.verdict;
        let mut row: Vec<Cell> = vec![
            i.into(),
            b.beta.into(),
            b.eff_detuning.into(),
            v.s1.into(),
            v.s2.into(),
            v.s3.into(),
            v.rh_stable.into(),
            v.eigen_stable.into(),
            v.marginal.into(),
            v.regime_positive.into(),
            v.max_real.into(),
        ];
        for z in &v.eigenvalues {
            row.push(z.re.into());
            row.push(z.im.into());
        }
        t.push(row);
    }
    Ok(t)
}

fn report_cells(branch: usize, f: &FluctuationReport) -> Vec<Cell> {
    vec![
        f.method.as_str().into(),
        branch.into(),
        f.var_q.into(),
        f.var_p.into(),
        f.var_q_t.into(),
        f.var_p_t.into(),
        f.cov_qp_t.into(),
        f.n_eff.into(),
        f.n_eff_t.into(),
        f.n_eff_clamped.into(),
        f.t_eff.into(),
        f.d_q.into(),
        f.d_p.into(),
        f.eta.into(),
        f.squeeze.into(),
        f.validity.beta_large.into(),
        f.validity.duffing_small.into(),
    ]
}

fn fluctuation_table(p: &NormalizedParams, method: FlucMethod, branch: Option<usize>) -> Result<Table, Failure> {
    let branches = solve_branches(p)?;
    let k = match branch {
        Some(k) if k < branches.len() => k,
        Some(k) => return Err(Failure::Config(format!("branch {k} out of range ({} branches)", branches.len()))),
        None => operating_branch(&branches).ok_or_else(|| Failure::Compute("no stable steady-state branch".into()))?,
    };
    let b = &branches[k];
    let mut t = Table::new(&[
        "method",
        "branch",
        "var_q",
        "var_p",
        "var_q_t",
        "var_p_t",
        "cov_qp_t",
        "n_eff",
        "n_eff_t",
        "n_eff_clamped",
        "t_eff",
        "d_q",
        "d_p",
        "eta",
        "squeeze",
        "beta_large",
        "duffing_small",
    ]);
    let methods: &[Method] = match method {
        FlucMethod::Lyapunov => &[Method::Lyapunov],
        FlucMethod::Spectral => &[Method::Spectral],
        FlucMethod::Both => &[Method::Lyapunov, Method::Spectral],
    };
    let reports: Vec<FluctuationReport> = methods.iter().map(|m| analyze(b, p, *m)).collect::<Result<_, _>>()?;
    if let [a, s] = reports.as_slice() {
        let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
        let worst = rel(a.var_q_t, s.var_q_t).max(rel(a.var_p_t, s.var_p_t));
        if worst > 1e-6 {
            eprintln!("warning: Lyapunov and spectral variances differ by {worst:e} (relative)");
        }
    }
    for r in &reports {
        t.push(report_cells(k, r));
    }
    Ok(t)
}

fn sweep_spec(cfg: Config, a: SweepArgs) -> Result<SweepSpec, Failure> {
    let base = match (cfg.sweep, &a.axis) {
        (Some(s), _) => s,
        (None, Some(axis)) => SweepConfig {
            axis: Axis::parse(axis)?,
            range: AxisRange {
                start: a.start.ok_or_else(|| Failure::Config("--start is required".into()))?,
                stop: a.stop.ok_or_else(|| Failure::Config("--stop is required".into()))?,
                points: a.points.unwrap_or(2),
                scale: Scale::Linear,
            },
            constraint: Constraint::None,
            outputs: Vec::new(),
            series: Vec::new(),
            branch: None,
            min_beta: None,
        },
        (None, None) => return Err(Failure::Config("no sweep: give --axis/--start/--stop or a config \"sweep\" object".into())),
    };
    let mut spec = base.with_fixed(cfg.params);
    if let Some(axis) = &a.axis {
        spec.axis = Axis::parse(axis)?;
    }
    if let Some(v) = a.start {
        spec.range.start = v;
    }
    if let Some(v) = a.stop {
        spec.range.stop = v;
    }
    if let Some(v) = a.points {
        spec.range.points = v;
    }
    if let Some(s) = a.scale {
        spec.range.scale = match s {
            ScaleArg::Linear => Scale::Linear,
            ScaleArg::Log => Scale::Log,
        };
    }
    if let Some(c) = a.constraint {
        spec.constraint = match c {
            ConstraintArg::None => Constraint::None,
            ConstraintArg::OptimalDetuning => Constraint::OptimalDetuning,
        };
    }
    if !a.outputs.is_empty() {
        spec.outputs = a.outputs;
    }
    spec.branch = a.branch.or(spec.branch);
    Ok(spec)
}

fn sweep_table(spec: &SweepSpec) -> Result<Table, Failure> {
    let rows = run_sweep(spec)?;
    if all_failed(&rows) {
        return Err(Failure::Compute(format!(
            "all {} sweep points failed; first error: {}",
            rows.len(),
            rows[0].error
        )));
    }
    Ok(optomech_core::sweep::table(&rows, &spec.columns()))
}
