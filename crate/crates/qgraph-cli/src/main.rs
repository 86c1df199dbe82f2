//! `qgraph`: parse `.qg` graph files, compute Laplacian spectra and density
//! matrices, generate entangled two-qubit states, and run the property
//! suites. Every command prints one deterministic JSON report on stdout.
//!
//! Exit codes: 0 ok, 1 parse error, 2 compute/precondition error,
//! 3 property failure.

mod checks;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgraph::analogies::{
    coates_determinant, diffuse, permanent, stationary_distribution, transition_matrix,
};
use qgraph::dsl::{parse_complex, parse_graph};
use qgraph::entanglers::{
    bell_pair, default_require_zero_diagonal, density_from_product, product_multi,
    werner_from_loops, BellKind, ProductRecipe,
};
use qgraph::laplacians::{adjacency, kernel_multiplicity, laplacian, MatrixFlavor};
use qgraph::spectra::{hermitian_eigen, Complex, ComplexMatrix};
use qgraph::states::{
    classify, density_from_graph, ppt_verdict, spectral_mixture, DensityMatrix, StateKind,
};
use qgraph::{GraphKind, WeightedDigraph};
use report::{print_error, value_of, Report};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qgraph",
    version,
    about = "Complex-weighted digraphs as quantum states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    L,
    Q,
}

impl From<FlavorArg> for MatrixFlavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::L => MatrixFlavor::Combinatorial,
            FlavorArg::Q => MatrixFlavor::Signless,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Laplacian,
    Purity,
    Separability,
}

#[derive(Subcommand)]
enum Command {
    /// Laplacian matrix, spectrum, and kernel multiplicity of a graph file
    Spectrum {
        file: String,
        /// L = D - A (combinatorial) or Q = D + A (signless)
        #[arg(long, value_enum, ignore_case = true, default_value = "l")]
        matrix: FlavorArg,
    },
    /// Density matrix, purity, spectral mixture, and (for two qubits) the
    /// PPT separability verdict
    State {
        file: String,
        #[arg(long, value_enum, ignore_case = true, default_value = "l")]
        matrix: FlavorArg,
    },
    /// Generate entangled two-qubit states from closed forms or recipe files
    Entangle(EntangleArgs),
    /// Run property suites on a graph file or on fuzzed random graphs
    Check(CheckArgs),
    /// Physical analogies: random walk, diffusion, determinant, permanent
    Analogy {
        #[command(subcommand)]
        what: AnalogyCommand,
    },
}

#[derive(Args)]
struct EntangleArgs {
    /// bell-phi-, bell-phi+, bell-psi-, bell-psi+, or werner
    #[arg(long, conflicts_with = "recipe_file")]
    recipe: Option<String>,
    /// JSON file with adjacency matrices, flavor, and function chains
    #[arg(long)]
    recipe_file: Option<String>,
    /// Vertex weights of the first qubit graph (complex literals)
    #[arg(long, default_value = "1")]
    w1: String,
    #[arg(long, default_value = "1")]
    w2: String,
    /// Vertex weights of the second qubit graph
    #[arg(long, default_value = "1")]
    w1p: String,
    #[arg(long, default_value = "1")]
    w2p: String,
    /// Loop weights for the werner recipe
    #[arg(long, default_value_t = 1.0)]
    r1: f64,
    #[arg(long, default_value_t = 1.0)]
    r2: f64,
    /// Unit edge weights for the werner recipe
    #[arg(long, default_value = "1")]
    w: String,
    #[arg(long, default_value = "1")]
    wp: String,
}

#[derive(Args)]
struct CheckArgs {
    /// Graph file to check (omit with --fuzz)
    file: Option<String>,
    /// Generate random graphs instead of reading a file
    #[arg(long)]
    fuzz: bool,
    /// Maximum vertex count for fuzzed graphs
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Number of fuzz trials (and separability trials)
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    /// JSON file with golden eigenvalues to compare against
    #[arg(long)]
    golden: Option<String>,
}

#[derive(Subcommand)]
enum AnalogyCommand {
    /// Stationary distribution of the edge-weighted random walk
    Walk { file: String },
    /// Explicit-Euler diffusion on a unit-weight graph
    Diffuse {
        file: String,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Comma-separated initial amounts (default: everything at vertex 1)
        #[arg(long)]
        psi0: Option<String>,
    },
    /// Determinant of the graph adjacency via linear subgraphs
    Det { file: String },
    /// Permanent of the graph adjacency
    Perm { file: String },
}

enum CmdError {
    Parse(String),
    Compute(String),
    PropertyFailure,
}

impl CmdError {
    fn compute(e: impl std::fmt::Display) -> Self {
        CmdError::Compute(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Spectrum { file, matrix } => cmd_spectrum(&file, matrix.into()),
        Command::State { file, matrix } => cmd_state(&file, matrix.into()),
        Command::Entangle(args) => cmd_entangle(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Analogy { what } => cmd_analogy(&what),
    };
    match outcome {
        Ok(report) => {
            report.print();
            ExitCode::SUCCESS
        }
        Err(CmdError::Parse(msg)) => {
            print_error("parse", msg);
            ExitCode::from(1)
        }
        Err(CmdError::Compute(msg)) => {
            print_error("compute", msg);
            ExitCode::from(2)
        }
        Err(CmdError::PropertyFailure) => {
            print_error(
                "property",
                "one or more properties failed; see the report on stdout",
            );
            ExitCode::from(3)
        }
    }
}

fn load_graph(path: &str) -> Result<WeightedDigraph, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Compute(format!("cannot read {path}: {e}")))?;
    parse_graph(&text).map_err(|e| CmdError::Parse(format!("{path}:{e}")))
}

fn kind_name(kind: GraphKind) -> &'static str {
    match kind {
        GraphKind::EdgeUnit => "edge-unit",
        GraphKind::VertexWeighted => "vertex",
        GraphKind::EdgeLoop => "edge-loop",
    }
}

#[derive(Serialize)]
struct SpectrumResult {
    kind: &'static str,
    n: usize,
    flavor: &'static str,
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
    kernel_multiplicity: usize,
    residual: f64,
}

fn cmd_spectrum(file: &str, flavor: MatrixFlavor) -> Result<Report, CmdError> {
    let g = load_graph(file)?;
    let k = laplacian(&g, flavor);
    let eig = hermitian_eigen(&k, 1e-10).map_err(CmdError::compute)?;
    let result = SpectrumResult {
        kind: kind_name(g.kind()),
        n: g.vertex_count(),
        flavor: flavor_name(flavor),
        matrix: k,
        kernel_multiplicity: kernel_multiplicity(&eig.values),
        eigenvalues: eig.values,
        residual: eig.residual,
    };
    Ok(Report {
        command: "spectrum".into(),
        inputs: serde_json::json!({ "file": file, "matrix": flavor_name(flavor) }),
        result: value_of(&result),
        warnings: vec![],
    })
}

#[derive(Serialize)]
struct MixtureTerm {
    weight: f64,
    vector: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct PptJson {
    separable: bool,
    min_eigenvalue: f64,
    borderline: bool,
}

#[derive(Serialize)]
struct StateResult {
    flavor: &'static str,
    normalizer: Option<f64>,
    density: ComplexMatrix,
    purity: f64,
    class: &'static str,
    mixture: Vec<MixtureTerm>,
    ppt: Option<PptJson>,
}

fn state_payload(
    rho: &DensityMatrix,
    flavor: MatrixFlavor,
    normalizer: Option<f64>,
) -> Result<StateResult, CmdError> {
    let class = classify(rho);
    let mixture = spectral_mixture(rho)
        .map_err(CmdError::compute)?
        .terms
        .into_iter()
        .map(|(weight, v)| MixtureTerm {
            weight,
            vector: v.iter().map(|z| [z.re, z.im]).collect(),
        })
        .collect();
    let ppt = if rho.dim() == 4 {
        let v = ppt_verdict(rho).map_err(CmdError::compute)?;
        Some(PptJson {
            separable: v.separable,
            min_eigenvalue: v.min_eigenvalue,
            borderline: v.borderline,
        })
    } else {
        None
    };
    Ok(StateResult {
        flavor: flavor_name(flavor),
        normalizer,
        density: rho.matrix().clone(),
        purity: class.purity,
        class: match class.kind {
            StateKind::Pure => "pure",
            StateKind::Mixed => "mixed",
        },
        mixture,
        ppt,
    })
}

fn cmd_state(file: &str, flavor: MatrixFlavor) -> Result<Report, CmdError> {
    let g = load_graph(file)?;
    let k = laplacian(&g, flavor);
    let rho = density_from_graph(&g, flavor).map_err(CmdError::compute)?;
    let result = state_payload(&rho, flavor, Some(k.trace().re))?;
    Ok(Report {
        command: "state".into(),
        inputs: serde_json::json!({ "file": file, "matrix": flavor_name(flavor) }),
        result: value_of(&result),
        warnings: vec![],
    })
}

#[derive(Deserialize)]
struct RecipeFile {
    a_g: ComplexMatrix,
    a_h: ComplexMatrix,
    /// "L" or "Q"
    flavor: String,
    pairs: Vec<qgraph::entanglers::RecipePair>,
    #[serde(default)]
    require_zero_diagonal: Option<bool>,
}

fn complex_arg(text: &str, name: &str) -> Result<Complex, CmdError> {
    parse_complex(text)
        .ok_or_else(|| CmdError::Compute(format!("bad complex literal for --{name}: `{text}`")))
}

fn cmd_entangle(args: &EntangleArgs) -> Result<Report, CmdError> {
    let mut warnings = Vec::new();
    let (result, inputs) = if let Some(path) = &args.recipe_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CmdError::Compute(format!("cannot read {path}: {e}")))?;
        let spec: RecipeFile =
            serde_json::from_str(&text).map_err(|e| CmdError::Parse(format!("{path}: {e}")))?;
        let flavor = match spec.flavor.as_str() {
            "L" => MatrixFlavor::Combinatorial,
            "Q" => MatrixFlavor::Signless,
            other => {
                return Err(CmdError::Compute(format!(
                    "unknown flavor `{other}` (L | Q)"
                )))
            }
        };
        let recipe = ProductRecipe {
            pairs: spec.pairs,
            require_zero_diagonal: spec
                .require_zero_diagonal
                .unwrap_or_else(|| default_require_zero_diagonal(&spec.a_g, &spec.a_h)),
        };
        let aprod = product_multi(&spec.a_g, &spec.a_h, &recipe).map_err(CmdError::compute)?;
        let rho = density_from_product(&aprod, flavor).map_err(CmdError::compute)?;
        let state = state_payload(&rho, flavor, None)?;
        let result =
            serde_json::json!({ "adjacency": value_of(&aprod), "state": value_of(&state) });
        (result, serde_json::json!({ "recipe_file": path }))
    } else {
        let name = args.recipe.as_deref().unwrap_or_default();
        match name {
            "bell-phi-" | "bell-phi+" | "bell-psi-" | "bell-psi+" => {
                let kind = match name {
                    "bell-phi-" => BellKind::PhiMinus,
                    "bell-phi+" => BellKind::PhiPlus,
                    "bell-psi-" => BellKind::PsiMinus,
                    _ => BellKind::PsiPlus,
                };
                let w1 = complex_arg(&args.w1, "w1")?;
                let w2 = complex_arg(&args.w2, "w2")?;
                let w1p = complex_arg(&args.w1p, "w1p")?;
                let w2p = complex_arg(&args.w2p, "w2p")?;
                let rho = bell_pair(kind, w1, w2, w1p, w2p).map_err(CmdError::compute)?;
                let state = state_payload(&rho, kind.flavor(), None)?;
                (
                    serde_json::json!({ "state": value_of(&state) }),
                    serde_json::json!({
                        "recipe": name,
                        "w1": [w1.re, w1.im], "w2": [w2.re, w2.im],
                        "w1p": [w1p.re, w1p.im], "w2p": [w2p.re, w2p.im],
                    }),
                )
            }
            "werner" => {
                let w = complex_arg(&args.w, "w")?;
                let wp = complex_arg(&args.wp, "wp")?;
                let (bell, werner) =
                    werner_from_loops(w, wp, args.r1, args.r2).map_err(CmdError::compute)?;
                let state = state_payload(&werner, MatrixFlavor::Signless, None)?;
                let companion = state_payload(&bell, MatrixFlavor::Combinatorial, None)?;
                (
                    serde_json::json!({
                        "state": value_of(&state),
                        "companion_combinatorial": value_of(&companion),
                    }),
                    serde_json::json!({
                        "recipe": "werner",
                        "w": [w.re, w.im], "wp": [wp.re, wp.im],
                        "r1": args.r1, "r2": args.r2,
                    }),
                )
            }
            "" => {
                return Err(CmdError::Compute(
                    "one of --recipe or --recipe-file is required".into(),
                ))
            }
            other => return Err(CmdError::Compute(format!(
                "unknown recipe `{other}` (bell-phi- | bell-phi+ | bell-psi- | bell-psi+ | werner)"
            ))),
        }
    };
    if let Some(ppt) = result
        .get("state")
        .and_then(|s| s.get("ppt"))
        .and_then(|p| p.as_object())
    {
        if ppt.get("borderline").and_then(Value::as_bool) == Some(true) {
            warnings.push(
                "PPT verdict is borderline: minimum eigenvalue within tolerance of zero".into(),
            );
        }
    }
    Ok(Report {
        command: "entangle".into(),
        inputs,
        result,
        warnings,
    })
}

#[derive(Deserialize)]
struct GoldenFile {
    #[serde(default)]
    eigenvalues_l: Option<Vec<f64>>,
    #[serde(default)]
    eigenvalues_q: Option<Vec<f64>>,
    #[serde(default = "default_golden_tol")]
    tolerance: f64,
}

fn default_golden_tol() -> f64 {
    5e-5
}

fn cmd_check(args: &CheckArgs) -> Result<Report, CmdError> {
    let mut graphs = Vec::new();
    let mut inputs = serde_json::Map::new();
    inputs.insert("suite".into(), suite_name(args.suite).into());
    inputs.insert("seed".into(), args.seed.into());
    if args.fuzz {
        graphs.extend(checks::fuzz_graphs(args.n, args.trials, args.seed));
        inputs.insert("fuzz".into(), true.into());
        inputs.insert("n".into(), args.n.into());
        inputs.insert("trials".into(), args.trials.into());
    }
    if let Some(file) = &args.file {
        graphs.push(load_graph(file)?);
        inputs.insert("file".into(), file.as_str().into());
    }
    if graphs.is_empty() {
        return Err(CmdError::Compute(
            "nothing to check: pass a FILE or --fuzz".into(),
        ));
    }

    let mut properties = Vec::new();
    if matches!(args.suite, SuiteArg::All | SuiteArg::Laplacian) {
        properties.extend(checks::laplacian_suite(&graphs));
    }
    if matches!(args.suite, SuiteArg::All | SuiteArg::Purity) {
        properties.extend(checks::purity_suite(&graphs));
    }
    if matches!(args.suite, SuiteArg::All | SuiteArg::Separability) {
        properties.extend(checks::separability_suite(&graphs, args.trials, args.seed));
    }
    if let Some(golden_path) = &args.golden {
        let file = args
            .file
            .as_deref()
            .ok_or_else(|| CmdError::Compute("--golden needs a graph FILE".into()))?;
        let text = std::fs::read_to_string(golden_path)
            .map_err(|e| CmdError::Compute(format!("cannot read {golden_path}: {e}")))?;
        let golden: GoldenFile = serde_json::from_str(&text)
            .map_err(|e| CmdError::Parse(format!("{golden_path}: {e}")))?;
        let g = load_graph(file)?;
        properties.extend(checks::golden_suite(
            &g,
            golden.eigenvalues_l.as_deref(),
            golden.eigenvalues_q.as_deref(),
            golden.tolerance,
        ));
    }

    let pass = properties.iter().all(|p| p.pass);
    let report = Report {
        command: "check".into(),
        inputs: Value::Object(inputs),
        result: serde_json::json!({
            "graphs_checked": graphs.len(),
            "pass": pass,
            "properties": value_of(&properties),
        }),
        warnings: vec![],
    };
    if pass {
        Ok(report)
    } else {
        // The report still goes to stdout so the counterexample is visible.
        report.print();
        Err(CmdError::PropertyFailure)
    }
}

fn suite_name(s: SuiteArg) -> &'static str {
    match s {
        SuiteArg::All => "all",
        SuiteArg::Laplacian => "laplacian",
        SuiteArg::Purity => "purity",
        SuiteArg::Separability => "separability",
    }
}

fn cmd_analogy(what: &AnalogyCommand) -> Result<Report, CmdError> {
    match what {
        AnalogyCommand::Walk { file } => {
            let g = load_graph(file)?;
            let gamma = stationary_distribution(&g).map_err(CmdError::compute)?;
            let p = transition_matrix(&g).map_err(CmdError::compute)?;
            let n = g.vertex_count();
            let residual = (0..n)
                .map(|j| {
                    let back: f64 = (0..n).map(|i| gamma[i] * p[i][j]).sum();
                    (back - gamma[j]).abs()
                })
                .fold(0.0, f64::max);
            Ok(Report {
                command: "analogy.walk".into(),
                inputs: serde_json::json!({ "file": file }),
                result: serde_json::json!({ "stationary": gamma, "fixed_point_residual": residual }),
                warnings: vec![],
            })
        }
        AnalogyCommand::Diffuse {
            file,
            alpha,
            dt,
            steps,
            psi0,
        } => {
            let g = load_graph(file)?;
            let n = g.vertex_count();
            let psi0: Vec<f64> = match psi0 {
                Some(text) => text
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| CmdError::Compute(format!("bad --psi0: {e}")))?,
                None => {
                    let mut v = vec![0.0; n];
                    v[0] = 1.0;
                    v
                }
            };
            let out = diffuse(&g, &psi0, *alpha, *dt, *steps).map_err(CmdError::compute)?;
            let mass: f64 = out.psi.iter().sum();
            Ok(Report {
                command: "analogy.diffuse".into(),
                inputs: serde_json::json!({
                    "file": file, "alpha": alpha, "dt": dt, "steps": steps, "psi0": psi0,
                }),
                result: serde_json::json!({ "psi": out.psi, "t": out.t, "mass": mass }),
                warnings: vec![],
            })
        }
        AnalogyCommand::Det { file } => {
            let g = load_graph(file)?;
            let det = coates_determinant(&adjacency(&g)).map_err(CmdError::compute)?;
            Ok(Report {
                command: "analogy.det".into(),
                inputs: serde_json::json!({ "file": file }),
                result: serde_json::json!({ "determinant": [det.re, det.im] }),
                warnings: vec![],
            })
        }
        AnalogyCommand::Perm { file } => {
            let g = load_graph(file)?;
            let perm = permanent(&adjacency(&g)).map_err(CmdError::compute)?;
            Ok(Report {
                command: "analogy.perm".into(),
                inputs: serde_json::json!({ "file": file }),
                result: serde_json::json!({ "permanent": [perm.re, perm.im] }),
                warnings: vec![],
            })
        }
    }
}

fn flavor_name(flavor: MatrixFlavor) -> &'static str {
    match flavor {
        MatrixFlavor::Combinatorial => "L",
        MatrixFlavor::Signless => "Q",
    }
}
