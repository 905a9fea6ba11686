//! Command-line harness: `gen-ham`, `run` and `resources`.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 runtime error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::ansatz::{AnsatzError, AnsatzSpec};
use crate::dense;
use crate::gradients::{Method, QndmConfig, ShotConfig, Shots};
use crate::optimizer::{run_optimization, ConvergenceTrace, OptimizerConfig, OptimizerError};
use crate::output::fmt_f64;
use crate::pauli::{
    gen_random_hamiltonian, parse_hamiltonian, serialize_hamiltonian, Hamiltonian,
    HamiltonianError, PauliString, PauliTerm, RandomHamSpec,
};
use crate::resources::{scaling_sweep, sweep_csv, CostModel, ResourceError, ResourceReport};
use crate::statevector::Axis;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("Hamiltonian {path}: {source}")]
    Hamiltonian {
        path: String,
        #[source]
        source: HamiltonianError,
    },
    #[error(transparent)]
    Optimizer(#[from] OptimizerError),
    #[error(transparent)]
    Resources(#[from] ResourceError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            _ => 2,
        }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

#[derive(Debug, Parser)]
#[command(
    name = "vqa-lab",
    version,
    about = "Variational energy minimization with DM and QNDM gradients"
)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "VQA_LAB_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random Gaussian-coefficient Hamiltonian file.
    GenHam(GenHamArgs),
    /// Run an experiment described by a JSON config.
    Run(RunArgs),
    /// Gate-count sweep over the number of Hamiltonian terms.
    Resources(ResourcesArgs),
}

#[derive(Debug, Args)]
pub struct GenHamArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub j: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub allow_identity: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct ResourcesArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub l: usize,
    /// Comma-separated term counts.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub j: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use `J` copies of this string (coefficient `mu`) instead of random strings.
    #[arg(long)]
    pub string: Option<String>,
    /// Multiply totals by this many optimization iterations.
    #[arg(long)]
    pub include_iterations: Option<u64>,
    /// JSON file overriding cost-model constants.
    #[arg(long)]
    pub cost_model: Option<PathBuf>,
    /// Output CSV path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Experiment config

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub hamiltonian: HamiltonianSource,
    pub ansatz: AnsatzConfig,
    pub optimizer: OptimizerSection,
    pub shots: ShotsSetting,
    #[serde(default)]
    pub qndm: QndmSection,
    pub outputs: OutputsSection,
    #[serde(default)]
    pub cost_model: CostModel,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum HamiltonianSource {
    File(PathBuf),
    Random(RandomSection),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSection {
    pub n: usize,
    pub j: usize,
    #[serde(default = "default_mu")]
    pub mu: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub allow_identity: bool,
}

fn default_mu() -> f64 {
    1.0
}

fn default_sigma() -> f64 {
    0.1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzConfig {
    pub n: Option<usize>,
    pub layers: usize,
    #[serde(default = "default_axis")]
    pub axis: Axis,
}

fn default_axis() -> Axis {
    Axis::Y
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodSetting {
    Exact,
    Dm,
    Qndm,
    Both,
}

impl MethodSetting {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodSetting::Exact => vec![Method::Exact],
            MethodSetting::Dm => vec![Method::Dm],
            MethodSetting::Qndm => vec![Method::Qndm],
            MethodSetting::Both => vec![Method::Dm, Method::Qndm],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSection {
    pub method: MethodSetting,
    pub eta: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    #[serde(default)]
    pub master_seed: u64,
}

/// `1000` or `"infinite"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ShotsSetting {
    Count(u64),
    Keyword(String),
}

impl ShotsSetting {
    fn to_shots(&self) -> Result<Shots, CliError> {
        match self {
            ShotsSetting::Count(0) => Err(CliError::Config("field `shots`: must be >= 1".into())),
            ShotsSetting::Count(n) => Ok(Shots::Finite(*n)),
            ShotsSetting::Keyword(k) if k == "infinite" => Ok(Shots::Infinite),
            ShotsSetting::Keyword(k) => Err(CliError::Config(format!(
                "field `shots`: expected a positive integer or \"infinite\", got \"{k}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QndmSection {
    pub lambda: f64,
    #[serde(default = "default_shift")]
    pub s: f64,
}

fn default_shift() -> f64 {
    std::f64::consts::FRAC_PI_2
}

impl Default for QndmSection {
    fn default() -> Self {
        Self {
            lambda: 0.1,
            s: default_shift(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    pub directory: PathBuf,
    #[serde(default)]
    pub emit_per_restart: bool,
    /// Also report resource totals multiplied by `max_iterations`.
    #[serde(default)]
    pub include_iterations: bool,
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

fn load_hamiltonian_file(path: &Path) -> Result<Hamiltonian, CliError> {
    let text = fs::read_to_string(path)
        .map_err(io_err(format!("reading Hamiltonian {}", path.display())))?;
    parse_hamiltonian(&text).map_err(|source| CliError::Hamiltonian {
        path: path.display().to_string(),
        source,
    })
}

/// Everything needed to execute a validated config.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub hamiltonian: Hamiltonian,
    pub ansatz: AnsatzSpec,
    pub methods: Vec<Method>,
    pub optimizer: OptimizerConfig,
    pub cost_model: CostModel,
    pub output_dir: PathBuf,
    pub emit_per_restart: bool,
    pub include_iterations: bool,
}

/// Validates `config`; relative paths resolve against `base_dir`.
pub fn build_experiment(
    config: &ExperimentConfig,
    base_dir: &Path,
) -> Result<Experiment, CliError> {
    let hamiltonian = match &config.hamiltonian {
        HamiltonianSource::File(p) => load_hamiltonian_file(&base_dir.join(p))?,
        HamiltonianSource::Random(r) => {
            let spec = RandomHamSpec {
                n: r.n,
                j: r.j,
                mu: r.mu,
                sigma: r.sigma,
                seed: r.seed,
                allow_identity: r.allow_identity,
            };
            gen_random_hamiltonian(&spec)
                .map_err(|e| CliError::Config(format!("field `hamiltonian.random`: {e}")))?
        }
    };
    let n = config.ansatz.n.unwrap_or(hamiltonian.n_qubits());
    if n != hamiltonian.n_qubits() {
        return Err(CliError::Config(format!(
            "field `ansatz.n`: {n} does not match the Hamiltonian's {} qubits",
            hamiltonian.n_qubits()
        )));
    }
    let ansatz =
        AnsatzSpec::new(n, config.ansatz.layers, config.ansatz.axis).map_err(|e| match e {
            AnsatzError::BadShape { .. } => CliError::Config(format!("field `ansatz.layers`: {e}")),
            other => CliError::Config(other.to_string()),
        })?;
    let opt = &config.optimizer;
    let optimizer = OptimizerConfig {
        eta: opt.eta,
        max_iterations: opt.max_iterations,
        method: Method::Exact,
        shots: ShotConfig {
            shots: config.shots.to_shots()?,
            seed: 0,
        },
        qndm: QndmConfig {
            lambda: config.qndm.lambda,
            shift: config.qndm.s,
        },
        restarts: opt.restarts,
        master_seed: opt.master_seed,
        shared_restart_seed: false,
    };
    if !(opt.eta.is_finite() && opt.eta > 0.0) {
        return Err(CliError::Config(format!(
            "field `optimizer.eta`: must be > 0, got {}",
            opt.eta
        )));
    }
    if opt.max_iterations < 1 {
        return Err(CliError::Config(
            "field `optimizer.max_iterations`: must be >= 1".into(),
        ));
    }
    if opt.restarts < 1 {
        return Err(CliError::Config(
            "field `optimizer.restarts`: must be >= 1".into(),
        ));
    }
    let methods = opt.method.methods();
    if methods.contains(&Method::Qndm)
        && !(config.qndm.lambda.is_finite() && config.qndm.lambda > 0.0)
    {
        return Err(CliError::Config(format!(
            "field `qndm.lambda`: must be > 0, got {}",
            config.qndm.lambda
        )));
    }
    if config.qndm.s.sin().abs() < 1e-12 {
        return Err(CliError::Config(format!(
            "field `qndm.s`: sin(s) = 0 for s = {}",
            config.qndm.s
        )));
    }
    Ok(Experiment {
        hamiltonian,
        ansatz,
        methods,
        optimizer,
        cost_model: config.cost_model,
        output_dir: base_dir.join(&config.outputs.directory),
        emit_per_restart: config.outputs.emit_per_restart,
        include_iterations: config.outputs.include_iterations,
    })
}

pub fn trace_csv(trace: &ConvergenceTrace, per_restart: bool) -> String {
    let mut out = String::from("iteration,mean_energy,std_energy");
    if per_restart {
        for r in &trace.restarts {
            out.push_str(&format!(",restart_{}", r.restart));
        }
    }
    out.push('\n');
    for i in 0..trace.mean.len() {
        out.push_str(&format!(
            "{},{},{}",
            i,
            fmt_f64(trace.mean[i]),
            fmt_f64(trace.std[i])
        ));
        if per_restart {
            for r in &trace.restarts {
                out.push(',');
                out.push_str(&fmt_f64(r.energies[i]));
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub traces: Vec<ConvergenceTrace>,
    pub ground_energy: Option<f64>,
    pub resources: Option<ResourceReport>,
    pub files: Vec<(PathBuf, String)>,
}

fn summary_text(exp: &Experiment, outcome: &RunOutcome) -> String {
    let h = &exp.hamiltonian;
    let mut s = String::new();
    s.push_str(&format!("n_qubits: {}\n", h.n_qubits()));
    s.push_str(&format!("n_terms: {}\n", h.n_terms()));
    s.push_str(&format!("layers: {}\n", exp.ansatz.layers()));
    s.push_str(&format!("gate_count_k: {}\n", exp.ansatz.gate_count()));
    s.push_str(&format!("param_count_d: {}\n", exp.ansatz.param_count()));
    s.push_str(&format!("restarts: {}\n", exp.optimizer.restarts));
    s.push_str(&format!(
        "max_iterations: {}\n",
        exp.optimizer.max_iterations
    ));
    match outcome.ground_energy {
        Some(e) => s.push_str(&format!("exact_ground_energy: {}\n", fmt_f64(e))),
        None => s.push_str("exact_ground_energy: unavailable\n"),
    }
    for t in &outcome.traces {
        let m = t.method.as_str();
        s.push_str(&format!(
            "{m}.final_mean_energy: {}\n",
            fmt_f64(t.final_mean())
        ));
        s.push_str(&format!(
            "{m}.final_std_energy: {}\n",
            fmt_f64(t.final_std())
        ));
        s.push_str(&format!("{m}.total_circuits: {}\n", t.total_circuits));
        if t.method == Method::Qndm {
            let product = exp.optimizer.qndm.lambda * h.one_norm();
            s.push_str(&format!(
                "qndm.lambda_times_one_norm: {}\n",
                fmt_f64(product)
            ));
        }
    }
    if let Some(r) = &outcome.resources {
        let ran = |m: Method| exp.methods.contains(&m);
        if ran(Method::Dm) {
            s.push_str(&format!("r_dm_per_gradient: {}\n", r.r_dm));
        }
        if ran(Method::Qndm) {
            s.push_str(&format!("r_qndm_per_gradient: {}\n", r.r_qndm));
        }
        if ran(Method::Dm) && ran(Method::Qndm) {
            s.push_str(&format!("reduction: {}\n", fmt_f64(r.reduction())));
        }
        if exp.include_iterations {
            let iters = exp.optimizer.max_iterations as u64;
            if let Ok(total) = r.scaled(iters) {
                if ran(Method::Dm) {
                    s.push_str(&format!("r_dm_total: {}\n", total.r_dm));
                }
                if ran(Method::Qndm) {
                    s.push_str(&format!("r_qndm_total: {}\n", total.r_qndm));
                }
            }
        }
        s.push_str(&format!("regime: {}\n", r.regime));
    }
    s
}

/// Runs every configured method and renders the output files without writing them.
pub fn execute(exp: &Experiment) -> Result<RunOutcome, CliError> {
    let mut traces = Vec::new();
    for &method in &exp.methods {
        let cfg = OptimizerConfig {
            method,
            ..exp.optimizer.clone()
        };
        traces.push(run_optimization(&exp.hamiltonian, &exp.ansatz, &cfg)?);
    }
    let ground_energy = dense::ground_energy(&exp.hamiltonian);
    let resources = match exp.optimizer.shots.shots {
        Shots::Finite(_) => Some(ResourceReport::new(
            &exp.hamiltonian,
            &exp.ansatz,
            exp.optimizer.shots.shots,
            &exp.cost_model,
        )?),
        Shots::Infinite => None,
    };
    let mut outcome = RunOutcome {
        traces,
        ground_energy,
        resources,
        files: Vec::new(),
    };
    let single = outcome.traces.len() == 1;
    for t in &outcome.traces {
        let name = if single {
            "trace.csv".to_string()
        } else {
            format!("trace_{}.csv", t.method.as_str())
        };
        outcome.files.push((
            exp.output_dir.join(name),
            trace_csv(t, exp.emit_per_restart),
        ));
    }
    let summary = summary_text(exp, &outcome);
    outcome
        .files
        .push((exp.output_dir.join("summary.txt"), summary));
    Ok(outcome)
}

pub fn cmd_run(args: &RunArgs) -> Result<RunOutcome, CliError> {
    let text = fs::read_to_string(&args.config).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => {
            CliError::Config(format!("config file {} not found", args.config.display()))
        }
        _ => CliError::Io {
            context: format!("reading {}", args.config.display()),
            source: e,
        },
    })?;
    let config = parse_config(&text)?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let exp = build_experiment(&config, base)?;
    let outcome = execute(&exp)?;
    fs::create_dir_all(&exp.output_dir)
        .map_err(io_err(format!("creating {}", exp.output_dir.display())))?;
    for (path, body) in &outcome.files {
        fs::write(path, body).map_err(io_err(format!("writing {}", path.display())))?;
    }
    Ok(outcome)
}

pub fn cmd_gen_ham(args: &GenHamArgs) -> Result<Hamiltonian, CliError> {
    let spec = RandomHamSpec {
        n: args.n,
        j: args.j,
        mu: args.mu,
        sigma: args.sigma,
        seed: args.seed,
        allow_identity: args.allow_identity,
    };
    let h = gen_random_hamiltonian(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    fs::write(&args.out, serialize_hamiltonian(&h))
        .map_err(io_err(format!("writing {}", args.out.display())))?;
    Ok(h)
}

pub fn cmd_resources(args: &ResourcesArgs) -> Result<String, CliError> {
    if args.j.is_empty() {
        return Err(CliError::Usage("--j needs at least one term count".into()));
    }
    if args.shots == 0 {
        return Err(CliError::Usage("--shots must be >= 1".into()));
    }
    let spec = AnsatzSpec::with_y(args.n, args.l).map_err(|e| CliError::Usage(e.to_string()))?;
    let model = match &args.cost_model {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_err(format!("reading {}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("cost model {}: {e}", p.display())))?
        }
        None => CostModel::default(),
    };
    let shots = Shots::Finite(args.shots);
    let mut reports = match &args.string {
        Some(s) => {
            let string: PauliString = s
                .parse()
                .map_err(|e: HamiltonianError| CliError::Usage(format!("--string: {e}")))?;
            if string.len() != args.n {
                return Err(CliError::Usage(format!(
                    "--string has {} qubits, --n is {}",
                    string.len(),
                    args.n
                )));
            }
            args.j
                .iter()
                .map(|&j| {
                    if j == 0 {
                        return Err(CliError::Usage("term counts must be >= 1".into()));
                    }
                    let terms = vec![PauliTerm::new(args.mu, string.clone()); j];
                    let h = Hamiltonian::new(terms).map_err(|e| CliError::Usage(e.to_string()))?;
                    Ok(ResourceReport::new(&h, &spec, shots, &model)?)
                })
                .collect::<Result<Vec<_>, CliError>>()?
        }
        None => {
            let template = RandomHamSpec::new(args.n, 1, args.mu, args.sigma, args.seed);
            scaling_sweep(&spec, &args.j, shots, &template, &model).map_err(|e| match e {
                ResourceError::Hamiltonian(h) => CliError::Usage(h.to_string()),
                other => other.into(),
            })?
        }
    };
    if let Some(iters) = args.include_iterations {
        reports = reports
            .iter()
            .map(|r| r.scaled(iters))
            .collect::<Result<_, _>>()?;
    }
    let csv = sweep_csv(&reports);
    if let Some(out) = &args.out {
        fs::write(out, &csv).map_err(io_err(format!("writing {}", out.display())))?;
    }
    Ok(csv)
}

fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

/// Parses `args` and runs the subcommand; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = configure_threads(cli.threads).and_then(|()| match &cli.command {
        Command::GenHam(a) => cmd_gen_ham(a).map(|h| {
            log::info!("wrote {} terms to {}", h.n_terms(), a.out.display());
        }),
        Command::Run(a) => cmd_run(a).map(|o| {
            if let Some((_, summary)) = o.files.last() {
                print!("{summary}");
            }
        }),
        Command::Resources(a) => cmd_resources(a).map(|csv| {
            if a.out.is_none() {
                print!("{csv}");
            }
        }),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "hamiltonian": {"random": {"n": 2, "j": 3, "seed": 4}},
        "ansatz": {"layers": 1},
        "optimizer": {"method": "exact", "eta": 0.1, "max_iterations": 5, "restarts": 2},
        "shots": "infinite",
        "outputs": {"directory": "out"}
    }"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = parse_config(MINIMAL).unwrap();
        let exp = build_experiment(&cfg, Path::new("/tmp")).unwrap();
        assert_eq!(exp.ansatz.n_qubits(), 2);
        assert_eq!(exp.methods, vec![Method::Exact]);
        assert_eq!(exp.optimizer.shots.shots, Shots::Infinite);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let bad = MINIMAL.replace("\"eta\"", "\"etta\"");
        let err = parse_config(&bad).unwrap_err();
        assert!(err.to_string().contains("etta"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn two_hamiltonian_sources_rejected() {
        let bad = MINIMAL.replace(
            r#"{"random": {"n": 2, "j": 3, "seed": 4}}"#,
            r#"{"random": {"n": 2, "j": 3}, "file": "h.txt"}"#,
        );
        assert!(parse_config(&bad).is_err());
    }

    #[test]
    fn inconsistent_n_rejected() {
        let bad = MINIMAL.replace(r#""layers": 1"#, r#""n": 3, "layers": 1"#);
        let cfg = parse_config(&bad).unwrap();
        let err = build_experiment(&cfg, Path::new("/tmp")).unwrap_err();
        assert!(err.to_string().contains("ansatz.n"), "{err}");
    }

    #[test]
    fn bad_field_values_named() {
        let cfg = parse_config(&MINIMAL.replace("\"eta\": 0.1", "\"eta\": -1")).unwrap();
        assert!(build_experiment(&cfg, Path::new("/tmp"))
            .unwrap_err()
            .to_string()
            .contains("optimizer.eta"));
        let cfg = parse_config(&MINIMAL.replace("\"infinite\"", "\"lots\"")).unwrap();
        assert!(build_experiment(&cfg, Path::new("/tmp"))
            .unwrap_err()
            .to_string()
            .contains("shots"));
    }

    #[test]
    fn trace_csv_columns() {
        let cfg = parse_config(&MINIMAL.replace(
            r#""directory": "out""#,
            r#""directory": "out", "emit_per_restart": true"#,
        ))
        .unwrap();
        let exp = build_experiment(&cfg, Path::new("/tmp")).unwrap();
        let outcome = execute(&exp).unwrap();
        let csv = &outcome.files[0].1;
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert_eq!(
            header,
            "iteration,mean_energy,std_energy,restart_0,restart_1"
        );
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.split(',').count() == 5));
        assert!(outcome.files[1].0.ends_with("summary.txt"));
    }
}
