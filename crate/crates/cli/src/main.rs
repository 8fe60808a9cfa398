use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hdx_core::combinatorics::binomial;
use hdx_core::complex::{complete_complex, punctured_complete_complex, sparsified_complex};
use hdx_core::expansion::{
    expansion, expansion_lower_bound, link_expansion_profile, nonexpansion_link_search,
    tightness_fixture_bm,
};
use hdx_core::level_set::LevelSetBasis;
use hdx_core::local_spectral::gamma_report;
use hdx_core::strips::{measured_residuals, st_rank, stripping_report, walk_lambdas};
use hdx_core::unique_games::{
    expander_fallback_check, iterated_link_rounding, plant_instance, AffineUGInstance,
    RoundingConfig,
};
use hdx_core::walk::{walk_graph, WalkSpec};
use hdx_core::{Complex, Face, HdxError};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug, Serialize)]
#[command(name = "hdx", version, about = "Spectra and expansion of higher-order random walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Generate a complex and write it as JSON.
    Complex(ComplexArgs),
    /// Strip report of a walk's spectrum.
    Spectrum(SpectrumArgs),
    /// Edge expansion of links, explicit sets or the B_m fixture.
    Expansion(ExpansionArgs),
    /// Plant an affine unique game on the walk's graph and solve it by link rounding.
    Ug(UgArgs),
}

#[derive(Args, Debug, Serialize)]
struct ComplexArgs {
    /// Complete complex J(n, d).
    #[arg(long, num_args = 2, value_names = ["N", "D"], group = "source")]
    complete: Option<Vec<usize>>,
    /// All triangles on [n] except {1,2,3}.
    #[arg(long, value_name = "N", group = "source")]
    punctured: Option<usize>,
    /// Random subcomplex of J(n, d) keeping each top face with probability p.
    #[arg(long, num_args = 3, value_names = ["N", "D", "P"], group = "source")]
    sparsify: Option<Vec<String>>,
    /// Re-read an existing complex file.
    #[arg(long, group = "source")]
    file: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also compute the local-spectral constant.
    #[arg(long)]
    gamma: bool,
    #[arg(short, long = "out")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SpectrumArgs {
    complex: PathBuf,
    walk: String,
    /// Thresholds for the ST-rank; repeatable.
    #[arg(long = "delta")]
    deltas: Vec<f64>,
    /// Measure residuals on the level-set decomposition and evaluate the stripping bounds.
    #[arg(long)]
    residuals: bool,
    #[arg(short, long = "out")]
    out: Option<PathBuf>,
    /// Write `eigenvalue<TAB>nearest strip value` rows for plotting.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ExpansionArgs {
    complex: PathBuf,
    walk: String,
    /// Expansion of every link against 1 − λ_i.
    #[arg(long, group = "mode")]
    links: bool,
    /// JSON list of k-faces.
    #[arg(long, group = "mode")]
    set: Option<PathBuf>,
    /// The set C([n/m], k) and its closed-form expansion, for S^{k−t}_k.
    #[arg(long, num_args = 2, value_names = ["M", "T"], group = "mode")]
    bm: Option<Vec<usize>>,
    /// Most correlated links for a set file.
    #[arg(long, group = "mode")]
    planted_search: Option<PathBuf>,
    #[arg(long = "delta")]
    deltas: Vec<f64>,
    /// Tolerance for the exact identities checked in `--links` and `--bm`.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(short, long = "out")]
    out: Option<PathBuf>,
    /// CSV of the per-link rows (`--links` only).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write `alpha<TAB>phi` rows for plotting.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct UgArgs {
    complex: PathBuf,
    walk: String,
    #[arg(long)]
    m: usize,
    /// Fraction of constraint weight whose shifts are re-randomized.
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    seed: u64,
    /// ε used to choose the link level; defaults to `--eps`.
    #[arg(long)]
    rounding_eps: Option<f64>,
    /// Fix the link level instead of deriving it from the ST-rank.
    #[arg(long)]
    r: Option<usize>,
    #[arg(short, long = "out")]
    out: Option<PathBuf>,
    /// Also write the planted instance.
    #[arg(long)]
    instance_out: Option<PathBuf>,
}

/// Failure categories mapped to exit codes.
enum Failure {
    Usage(String),
    Analysis(String),
}

impl From<HdxError> for Failure {
    fn from(e: HdxError) -> Self {
        match e {
            HdxError::MalformedInput(_)
            | HdxError::UnknownFace(_)
            | HdxError::ParseError(_)
            | HdxError::MalformedWalk(_)
            | HdxError::Io(_) => Failure::Usage(e.to_string()),
            _ => Failure::Analysis(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Failure::Usage(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    let io = |e: std::io::Error| Failure::Usage(format!("{}: {e}", path.display()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, config: &Value, report: Value) -> Result<(), Failure> {
    let doc = json!({ "config": config, "report": report });
    let text = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
    match out {
        Some(p) => write_atomic(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_complex(path: &Path) -> Result<Complex, Failure> {
    Complex::load(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_set(complex: &Complex, k: usize, path: &Path) -> Result<Vec<usize>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let faces: Vec<Vec<usize>> = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    faces
        .into_iter()
        .map(|v| {
            let face = Face::new(v)?;
            if face.level() != k {
                return Err(HdxError::MalformedInput(format!("{face} is not a {k}-face")));
            }
            complex.index_of(&face).ok_or(HdxError::UnknownFace(face))
        })
        .collect::<hdx_core::Result<_>>()
        .map_err(Failure::from)
}

fn cmd_complex(args: &ComplexArgs) -> Outcome {
    let complex = if let Some(v) = &args.complete {
        complete_complex(v[0], v[1])?
    } else if let Some(n) = args.punctured {
        punctured_complete_complex(n)?
    } else if let Some(v) = &args.sparsify {
        let bad = |s: &String| Failure::Usage(format!("bad number {s}"));
        let n: usize = v[0].parse().map_err(|_| bad(&v[0]))?;
        let d: usize = v[1].parse().map_err(|_| bad(&v[1]))?;
        let p: f64 = v[2].parse().map_err(|_| bad(&v[2]))?;
        let seed = args
            .seed
            .ok_or_else(|| Failure::Usage("--sparsify needs --seed".into()))?;
        sparsified_complex(n, d, p, seed)?
    } else if let Some(path) = &args.file {
        load_complex(path)?
    } else {
        return Err(Failure::Usage(
            "one of --complete, --punctured, --sparsify, --file is required".into(),
        ));
    };
    println!("level\tfaces");
    for (i, s) in complex.level_sizes().iter().enumerate() {
        println!("{i}\t{s}");
    }
    if args.gamma {
        let g = gamma_report(&complex)?;
        println!("gamma\t{}", g.gamma);
        if g.any_disconnected() {
            println!("warning: some link skeleton is disconnected");
        }
    }
    if let Some(p) = &args.out {
        write_atomic(p, &complex.to_json())?;
    }
    Ok(true)
}

fn cmd_spectrum(args: &SpectrumArgs, config: &Value) -> Outcome {
    let complex = load_complex(&args.complex)?;
    let walk = WalkSpec::parse(&args.walk)?.build(&complex)?;
    let residuals = if args.residuals {
        let basis = LevelSetBasis::new(&complex, walk.k)?;
        Some(measured_residuals(&walk, &basis, &walk_lambdas(&walk)))
    } else {
        None
    };
    let report = stripping_report(&walk, residuals);
    let ranks: Vec<Value> = args
        .deltas
        .iter()
        .map(|&d| {
            let r = st_rank(&report, d);
            json!({ "delta": d, "rank_predicted": r.predicted, "rank_empirical": r.empirical })
        })
        .collect();
    if let Some(p) = &args.plot_data {
        let mut rows = String::from("eigenvalue\tstrip\n");
        for (mu, s) in report.spectrum.values.iter().zip(&report.assignment) {
            rows.push_str(&format!("{mu}\t{}\n", report.lambdas[*s]));
        }
        write_atomic(p, &rows)?;
    }
    let pass = report.pass.unwrap_or(true);
    let mut body = serde_json::to_value(&report).expect("report serializes");
    body["st_rank"] = Value::Array(ranks);
    body["walk"] = json!(walk.label);
    emit(&args.out, config, body)?;
    Ok(pass)
}

fn cmd_expansion(args: &ExpansionArgs, config: &Value) -> Outcome {
    let complex = load_complex(&args.complex)?;
    let spec = WalkSpec::parse(&args.walk)?;
    let k = spec.level();
    if let Some(v) = &args.bm {
        let (m, t) = (v[0], v[1]);
        match spec {
            WalkSpec::Swap { j, .. } if j + t == k => {}
            _ => {
                return Err(Failure::Usage(format!(
                    "--bm {m} {t} needs the walk S:{k}:{}",
                    k.saturating_sub(t)
                )))
            }
        }
        let (n, d) = (complex.n(), complex.dim());
        if complex.level_size(d) as f64 != binomial(n, d) {
            return Err(Failure::Usage("--bm needs a complete complex".into()));
        }
        let fx = tightness_fixture_bm(n, m, k, t, d)?;
        let ok = (fx.measured_phi - fx.exact_phi).abs() <= args.tol;
        if let Some(p) = &args.plot_data {
            write_atomic(p, &format!("alpha\tphi\n{}\t{}\n", fx.alpha, fx.measured_phi))?;
        }
        emit(&args.out, config, serde_json::to_value(&fx).expect("serializes"))?;
        return Ok(ok);
    }
    let walk = spec.build(&complex)?;
    if args.links {
        let profile = link_expansion_profile(&complex, &walk)?;
        if let Some(p) = &args.csv {
            write_atomic(p, &profile.to_csv())?;
        }
        if let Some(p) = &args.plot_data {
            let mut rows = String::from("alpha\tphi\n");
            for l in profile.levels.iter().flat_map(|l| &l.links) {
                rows.push_str(&format!("{}\t{}\n", l.alpha, l.phi));
            }
            write_atomic(p, &rows)?;
        }
        emit(&args.out, config, serde_json::to_value(&profile).expect("serializes"))?;
        return Ok(true);
    }
    if let Some(path) = &args.set {
        let members = load_set(&complex, k, path)?;
        let rec = expansion(&walk, &members)?;
        let mut bounds = Vec::new();
        if walk.is_complete {
            for &d in &args.deltas {
                bounds.push(serde_json::to_value(expansion_lower_bound(&complex, &walk, &members, d, 0.0)?).expect("serializes"));
            }
        }
        let mut body = serde_json::to_value(&rec).expect("serializes");
        body["bounds"] = Value::Array(bounds);
        if let Some(p) = &args.plot_data {
            write_atomic(p, &format!("alpha\tphi\n{}\t{}\n", rec.alpha, rec.phi))?;
        }
        emit(&args.out, config, body)?;
        return Ok(true);
    }
    if let Some(path) = &args.planted_search {
        let members = load_set(&complex, k, path)?;
        let delta = args.deltas.first().copied().unwrap_or(0.1);
        let rep = nonexpansion_link_search(&complex, &walk, &members, delta, 4.0)?;
        emit(&args.out, config, serde_json::to_value(&rep).expect("serializes"))?;
        return Ok(!rep.non_expanding || rep.witnessed());
    }
    Err(Failure::Usage(
        "one of --links, --set, --bm, --planted-search is required".into(),
    ))
}

fn cmd_ug(args: &UgArgs, config: &Value) -> Outcome {
    if args.m < 1 {
        return Err(Failure::Usage("--m must be at least 1".into()));
    }
    let complex = load_complex(&args.complex)?;
    let walk = WalkSpec::parse(&args.walk)?.build(&complex)?;
    let inst = if args.m == 1 {
        AffineUGInstance::consistent(walk_graph(&walk)?, 1)?
    } else {
        plant_instance(&walk, args.m, args.eps, args.seed)?.0
    };
    if let Some(p) = &args.instance_out {
        write_atomic(p, &inst.to_json())?;
    }
    let rounding_eps = args.rounding_eps.unwrap_or(args.eps);
    let fallback = expander_fallback_check(&walk, rounding_eps);
    let cfg = RoundingConfig {
        eps: rounding_eps,
        seed: args.seed,
        r_override: args.r,
    };
    let report = iterated_link_rounding(&complex, &walk, &inst, &cfg)?;
    let mut body = serde_json::to_value(&report).expect("serializes");
    body["fallback"] = serde_json::to_value(fallback).expect("serializes");
    emit(&args.out, config, body)?;
    Ok(report.accounting_holds())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = serde_json::to_value(&cli.command).expect("config serializes");
    let outcome = match &cli.command {
        Command::Complex(a) => cmd_complex(a),
        Command::Spectrum(a) => cmd_spectrum(a, &config),
        Command::Expansion(a) => cmd_expansion(a, &config),
        Command::Ug(a) => cmd_ug(a, &config),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("analysis check failed");
            ExitCode::from(1)
        }
        Err(Failure::Analysis(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
