//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 input-file error, 4 model
//! validation error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::abelian::FgAbGroup;
use crate::cohomotopy::{
    classify_4manifold_type, pi2_enumerate, pi2_fiber, sphere_maps, CohomotopyError, FiberReport, QKernelSearch,
};
use crate::model::{load_algebraic_model, model_from_simplicial, CohomologyModel, Coefficients, ModelError, SimplicialCohomology};
use crate::simplicial::SimplicialComplex;
use crate::torsor::{FiniteBiTorsor, FiniteGroup};

#[derive(Parser, Debug)]
#[command(name = "cohomotopy", version, about = "Cohomotopy groups and sets of low-dimensional complexes")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest k for Z/2^k coefficients when computing from a facet file.
    #[arg(long, global = true, value_name = "K")]
    k_max: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print cohomology groups.
    Cohomology {
        path: PathBuf,
        /// Only this degree.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value = "Z")]
        coefficients: String,
    },
    /// Print [X, S^n] with its extension data.
    SphereMaps {
        path: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Fibers of [X, S^2] → H^2(X;Z).
    Pi2 {
        path: PathBuf,
        /// β as comma separated coordinates in the H^2(X;Z) generators.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "enumerate")]
        beta: Option<Vec<BigInt>>,
        /// Enumerate every β with free coordinates in [−N, N].
        #[arg(long, value_name = "N")]
        enumerate: Option<u64>,
    },
    /// Type 1, 2 or 3 of a closed orientable 4-manifold model.
    ClassifyType { path: PathBuf },
    /// γ_x isomorphisms of a translation bi-torsor.
    TorsorDemo {
        /// s3, s4, d<n>, q8 or z<n>.
        #[arg(long, default_value = "s3")]
        group: String,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
    Validation(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Validation(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Validation(m) => m,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Json(_) | ModelError::Simplicial(_) => CliError::Input(e.to_string()),
            ModelError::MissingGroup { .. } | ModelError::MissingMap(_) | ModelError::CoordinateLength { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<CohomotopyError> for CliError {
    fn from(e: CohomotopyError) -> Self {
        match e {
            CohomotopyError::Usage(m) => CliError::Usage(m),
            CohomotopyError::Model(m) => m.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// Runs the CLI, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(output) => {
            let _ = write!(out, "{output}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Cohomology {
            path,
            degree,
            coefficients,
        } => cmd_cohomology(cli, path, *degree, coefficients),
        Command::SphereMaps { path, n } => cmd_sphere_maps(cli, path, *n),
        Command::Pi2 { path, beta, enumerate } => cmd_pi2(cli, path, beta.as_deref(), *enumerate),
        Command::ClassifyType { path } => cmd_classify_type(cli, path),
        Command::TorsorDemo { group } => cmd_torsor_demo(cli, group),
    }
}

enum Input {
    Facets(SimplicialComplex),
    Algebraic(String),
}

fn read_input(path: &Path) -> Result<Input, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) || text.trim_start().starts_with('{');
    if is_json {
        Ok(Input::Algebraic(text))
    } else {
        SimplicialComplex::parse(&text)
            .map(Input::Facets)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

fn load_model(cli: &Cli, path: &Path) -> Result<CohomologyModel, CliError> {
    match read_input(path)? {
        Input::Facets(x) => Ok(model_from_simplicial(&x, cli.k_max)?),
        Input::Algebraic(text) => load_algebraic_model(&text).map_err(|e| match e {
            ModelError::Json(m) => CliError::Input(format!("{}: {m}", path.display())),
            other => other.into(),
        }),
    }
}

fn group_json(g: &FgAbGroup) -> Value {
    json!({
        "free_rank": g.free_rank(),
        "torsion": g.torsion().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "display": g.to_string(),
    })
}

fn coords_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| json!(x.to_string())).collect())
}

fn coords_text(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_cohomology(cli: &Cli, path: &Path, degree: Option<usize>, coefficients: &str) -> Result<String, CliError> {
    let c: Coefficients = coefficients.parse().map_err(CliError::Usage)?;
    let input = read_input(path)?;
    let mut rows: Vec<(usize, FgAbGroup, Vec<String>)> = Vec::new();
    match input {
        Input::Facets(x) => {
            let dim = x.dimension();
            let degrees: Vec<usize> = degree.map_or_else(|| (0..=dim).collect(), |q| vec![q]);
            let mut coh = SimplicialCohomology::new(x);
            for q in degrees {
                if q > dim {
                    rows.push((q, FgAbGroup::trivial(), Vec::new()));
                    continue;
                }
                let g = coh.compute(q, c)?.group.clone();
                let names = (0..g.ngens())
                    .map(|i| match c {
                        Coefficients::Integers => format!("e{q}.{i}"),
                        _ => format!("e{q}.{i}[{c}]"),
                    })
                    .collect();
                rows.push((q, g, names));
            }
        }
        Input::Algebraic(text) => {
            let model = load_algebraic_model(&text)?;
            let degrees: Vec<usize> = degree.map_or_else(|| (0..=model.dimension()).collect(), |q| vec![q]);
            for q in degrees {
                rows.push((q, model.group(q, c)?.clone(), model.generator_names(q, c)?.to_vec()));
            }
        }
    }
    if cli.json {
        let v: Vec<Value> = rows
            .iter()
            .map(|(q, g, names)| {
                json!({ "degree": q, "coefficients": c.to_string(), "group": group_json(g), "generators": names })
            })
            .collect();
        return Ok(pretty(&Value::Array(v)));
    }
    let mut out = String::new();
    for (q, g, names) in rows {
        let suffix = if c == Coefficients::Integers { String::new() } else { format!(";{c}") };
        if suffix.is_empty() {
            out.push_str(&format!("H^{q} = {g}\n"));
        } else {
            out.push_str(&format!("H^{q}(X{suffix}) = {g}\n"));
        }
        if !names.is_empty() {
            out.push_str(&format!("  generators: {}\n", names.join(", ")));
        }
    }
    Ok(out)
}

fn cmd_sphere_maps(cli: &Cli, path: &Path, n: usize) -> Result<String, CliError> {
    let model = load_model(cli, path)?;
    let s = sphere_maps(&model, n)?;
    let split = s.is_split();
    if cli.json {
        let rels: Vec<Value> = s
            .relations
            .iter()
            .map(|r| {
                json!({
                    "summand": r.summand,
                    "order": r.order.to_string(),
                    "gamma": coords_json(&r.gamma),
                    "gamma_prime": coords_json(&r.gamma_prime),
                    "sq2_term": coords_json(&r.sq2_term),
                })
            })
            .collect();
        return Ok(pretty(&json!({
            "n": n,
            "group": group_json(&s.group),
            "coker_sq2": group_json(&s.coker),
            "cohomology": group_json(s.cohomology()),
            "split": split,
            "relations": rels,
        })));
    }
    let mut out = format!("[X,S^{n}] = {}\n", s.group);
    out.push_str(&format!("  0 → coker(Sq2) = {} → [X,S^{n}] → H^{n}(X;Z) = {} → 0\n", s.coker, s.cohomology()));
    out.push_str(if split { "  extension: split (coker ⊕ H^n)\n" } else { "  extension: nonsplit\n" });
    for r in &s.relations {
        out.push_str(&format!(
            "  relation: {}·g{} = ι{}  (γ = {}, γ' = {})\n",
            r.order,
            r.summand,
            coords_text(&r.sq2_term),
            coords_text(&r.gamma),
            coords_text(&r.gamma_prime)
        ));
    }
    Ok(out)
}

fn report_json(r: &FiberReport) -> Value {
    json!({
        "beta": coords_json(&r.beta.coords),
        "realizable": r.realizable,
        "beta_squared": coords_json(&r.beta_squared),
        "fiber": r.fiber.as_ref().map(group_json),
        "p_beta": group_json(&r.p_beta),
        "q_kernel": r.q_kernel.iter().map(|k| coords_json(k)).collect::<Vec<_>>(),
        "q_kernel_search": match r.q_kernel_search {
            QKernelSearch::Exhaustive => "exhaustive",
            QKernelSearch::KernelGenerators => "kernel-generators",
        },
    })
}

fn report_text(r: &FiberReport) -> String {
    let beta = coords_text(&r.beta.coords);
    match &r.fiber {
        None => format!("β = {beta}: not realizable (β∪β ≠ 0)\n"),
        Some(f) => {
            let kernel = if r.q_kernel.is_empty() {
                "0".to_string()
            } else {
                r.q_kernel.iter().map(|k| coords_text(k)).collect::<Vec<_>>().join(", ")
            };
            format!("β = {beta}: realizable, fiber = {f}, P_β = {}, ker q = ⟨{kernel}⟩\n", r.p_beta)
        }
    }
}

fn cmd_pi2(cli: &Cli, path: &Path, beta: Option<&[BigInt]>, enumerate: Option<u64>) -> Result<String, CliError> {
    let model = load_model(cli, path)?;
    if let Some(coords) = beta {
        let g = model.group(2, Coefficients::Integers)?;
        if coords.len() != g.ngens() {
            return Err(CliError::Usage(format!(
                "β needs {} coordinates (H^2(X;Z) = {g}), got {}",
                g.ngens(),
                coords.len()
            )));
        }
        let b = model.class(2, Coefficients::Integers, coords)?;
        let r = pi2_fiber(&model, &b)?;
        return Ok(if cli.json { pretty(&report_json(&r)) } else { report_text(&r) });
    }
    let Some(bound) = enumerate else {
        return Err(CliError::Usage("pass --beta or --enumerate".into()));
    };
    let e = pi2_enumerate(&model, Some(bound))?;
    if cli.json {
        return Ok(pretty(&json!({
            "reports": e.reports.iter().map(report_json).collect::<Vec<_>>(),
            "total": e.total.as_ref().map(ToString::to_string),
        })));
    }
    let mut out: String = e.reports.iter().map(report_text).collect();
    if let Some(t) = e.total {
        out.push_str(&format!("total: {t}\n"));
    }
    Ok(out)
}

fn cmd_classify_type(cli: &Cli, path: &Path) -> Result<String, CliError> {
    let model = load_model(cli, path)?;
    let t = classify_4manifold_type(&model)?;
    Ok(if cli.json {
        pretty(&json!({ "type": t.number() }))
    } else {
        format!("type {}\n", t.number())
    })
}

fn parse_group(spec: &str) -> Result<FiniteGroup, CliError> {
    let s = spec.to_ascii_lowercase();
    let num = |rest: &str| -> Result<usize, CliError> {
        rest.parse::<usize>()
            .ok()
            .filter(|&n| (1..=24).contains(&n))
            .ok_or_else(|| CliError::Usage(format!("bad group size in {spec:?}")))
    };
    match s.as_str() {
        "s3" => Ok(FiniteGroup::symmetric(3)),
        "s4" => Ok(FiniteGroup::symmetric(4)),
        "q8" => Ok(FiniteGroup::quaternion()),
        _ if s.starts_with('z') => Ok(FiniteGroup::cyclic(num(&s[1..])?)),
        _ if s.starts_with('d') => {
            let n = num(&s[1..])?;
            if !(3..=12).contains(&n) {
                return Err(CliError::Usage(format!("dihedral groups d3..d12 only, got {spec:?}")));
            }
            Ok(FiniteGroup::dihedral(n))
        }
        _ => Err(CliError::Usage(format!("unknown group {spec:?} (s3, s4, q8, z<n>, d<n>)"))),
    }
}

fn cmd_torsor_demo(cli: &Cli, group: &str) -> Result<String, CliError> {
    let g = parse_group(group)?;
    let b = FiniteBiTorsor::translation(&g);
    let e = g.identity();
    let mut rows = Vec::new();
    for x in 0..b.size() {
        let gamma = b.gamma_x(x).map_err(|e| CliError::Validation(e.to_string()))?;
        let h = b.verify_conjugacy(x, e).map_err(|e| CliError::Validation(e.to_string()))?;
        rows.push((x, gamma, h));
    }
    if cli.json {
        let v: Vec<Value> = rows
            .iter()
            .map(|(x, gamma, h)| json!({ "x": x, "gamma": gamma, "conjugator": h }))
            .collect();
        return Ok(pretty(&json!({ "order": g.order(), "abelian": g.is_abelian(), "points": v })));
    }
    let mut out = format!("translation bi-torsor of a group of order {}\n", g.order());
    for (x, gamma, h) in rows {
        let img: Vec<String> = gamma.iter().map(ToString::to_string).collect();
        out.push_str(&format!("γ_{x} = [{}]  conjugate to γ_{e} by {h}\n", img.join(" ")));
    }
    Ok(out)
}
