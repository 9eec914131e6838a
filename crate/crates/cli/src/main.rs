use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tamari_cy::homalg::{interval_module, serre_iterate, PosetRep};
use tamari_cy::interval_poset::{enumerate_ips, IntervalPoset};
use tamari_cy::noncrossing::{enumerate_nc, psi, theta, NoncrossingTree};
use tamari_cy::poset::PosetJson;
use tamari_cy::tamari::enumerate_trees;
use tamari_cy::verify::{
    coxeter_check, k_class_check, serre_orbit, verify_bijections, verify_coxeter, verify_coxeter_ex_dyck, verify_cy,
    verify_serre, VerificationReport, MAX_BIJECTION_SIZE, MAX_COXETER_SIZE, MAX_CY_SIZE, MAX_KCLASS_SIZE,
    MAX_SERRE_SIZE, MAX_SERRE_SIZE_EXTENDED,
};
use tamari_cy::{FinitePoset, TamariLattice};

#[derive(Parser)]
#[command(
    name = "tamari-cy",
    version,
    about = "Tamari lattices, noncrossing trees and the Serre functor"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List (or count) combinatorial objects of size n.
    Enumerate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Apply one of the bijections or tree operations to a JSON file.
    Map {
        #[arg(long, value_enum)]
        via: Via,
        #[arg(long)]
        input: PathBuf,
    },
    /// Iterate the Serre functor.
    Serre {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Mode::Combinatorial)]
        mode: Mode,
    },
    /// Run verification campaigns and print their reports.
    Verify {
        #[arg(long, value_enum, default_value_t = Check::All)]
        check: Check,
        #[arg(long)]
        n: Option<usize>,
        /// Allow the homological check at its extended size.
        #[arg(long)]
        extended: bool,
        /// Generic poset JSON for the Coxeter check.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Period expected with --input.
        #[arg(long)]
        period: Option<u32>,
    },
    /// Export Tam_n or the Hasse diagram of an interval-poset.
    Export {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Trees,
    Intervals,
    Ips,
    Nctrees,
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    Psi,
    PsiInv,
    Theta,
    ThetaInv,
    Dual,
    Rotate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Combinatorial,
    Homological,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Serre,
    Cy,
    Coxeter,
    Bijections,
    Kclass,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Lattice,
    Hasse,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// Errors that end the run with exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

enum Outcome {
    Done,
    Failed,
}

fn read_json(path: &Path) -> Result<Value, Usage> {
    let text = fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, Usage> {
    serde_json::from_value(v).map_err(|e| Usage(format!("expected {what}: {e}")))
}

// a closed pipe (e.g. `| head`) is not an error worth reporting
fn emit(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

fn print(v: &impl serde::Serialize) {
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(v).expect("serializable output")
    ));
}

fn need_n(n: Option<usize>) -> Result<usize, Usage> {
    n.ok_or_else(|| Usage("--n is required".into()))
}

fn enumerate(kind: Kind, n: usize, count_only: bool) -> Result<Outcome, Usage> {
    let items: Vec<Value> = match kind {
        Kind::Trees => enumerate_trees(n)?.iter().map(|t| t.to_json()).collect(),
        Kind::Intervals => {
            let lattice = TamariLattice::new(n)?;
            if count_only {
                emit(&format!("{}\n", lattice.poset().num_intervals()));
                return Ok(Outcome::Done);
            }
            lattice
                .poset()
                .intervals()
                .into_iter()
                .map(|(s, t)| json!([lattice.tree(s).to_json(), lattice.tree(t).to_json()]))
                .collect()
        }
        Kind::Ips => enumerate_ips(n)?.iter().map(|ip| json!(ip)).collect(),
        Kind::Nctrees => enumerate_nc(n)?.iter().map(|t| json!(t)).collect(),
    };
    if count_only {
        emit(&format!("{}\n", items.len()));
    } else {
        print(&items);
    }
    Ok(Outcome::Done)
}

fn map(via: Via, input: &Path) -> Result<Outcome, Usage> {
    let v = read_json(input)?;
    let out = match via {
        Via::Psi | Via::Theta => {
            let ip: IntervalPoset = parse(v, "an interval-poset")?;
            let tree = if matches!(via, Via::Psi) {
                psi(&ip)?
            } else {
                theta(&ip)?
            };
            json!(tree)
        }
        _ => {
            let tree: NoncrossingTree = parse(v, "a noncrossing tree")?;
            match via {
                Via::PsiInv => json!(tree.psi_inv()),
                Via::ThetaInv => json!(tree.theta_inv()),
                Via::Dual => json!(tree.planar_dual()),
                _ => json!(tree.rotate()),
            }
        }
    };
    print(&out);
    Ok(Outcome::Done)
}

/// A module given either as an interval-poset (over Tam_n) or as
/// `{"poset": .., "module": {"kind": "projective"|"injective"|"simple", "at": label}}`
/// or `{"poset": .., "support": [labels]}`.
fn read_module(v: Value) -> Result<PosetRep, Usage> {
    if v.get("poset").is_none() {
        let ip: IntervalPoset = parse(v, "an interval-poset or a poset with a module")?;
        let lattice = TamariLattice::new(ip.size())?;
        return Ok(interval_module(&ip, &lattice)?);
    }
    let poset: PosetJson = parse(v["poset"].clone(), "a poset")?;
    let poset = Arc::new(FinitePoset::from_json(&poset)?);
    if let Some(support) = v.get("support") {
        let labels: Vec<String> = parse(support.clone(), "a list of labels")?;
        let mut mask = vec![false; poset.len()];
        for l in labels {
            mask[poset.index_of(&l)?] = true;
        }
        return Ok(PosetRep::thin(poset, &mask)?);
    }
    let kind = v["module"]["kind"].as_str().unwrap_or("");
    let at = v["module"]["at"]
        .as_str()
        .ok_or_else(|| Usage("module.at must be an element label".into()))?;
    let x = poset.index_of(at)?;
    match kind {
        "projective" => Ok(PosetRep::projective(poset, x)),
        "injective" => Ok(PosetRep::injective(poset, x)),
        "simple" => Ok(PosetRep::simple(poset, x)),
        other => Err(Usage(format!("unknown module kind `{other}`"))),
    }
}

fn serre(input: &Path, steps: usize, mode: Mode) -> Result<Outcome, Usage> {
    let v = read_json(input)?;
    if mode == Mode::Combinatorial {
        let ip: IntervalPoset = parse(v, "an exceptional interval-poset")?;
        let orbit = serre_orbit(&ip)?;
        let n = ip.size();
        // serre_orbit always runs 2n+2 steps; extend by whole orbits if more are asked
        let mut out = Vec::with_capacity(steps);
        let mut offset = 0;
        while out.len() < steps {
            for s in &orbit.steps {
                if out.len() == steps {
                    break;
                }
                out.push(json!({ "ip": s.ip, "shift": s.shift, "cumulative_shift": s.cumulative_shift + offset }));
            }
            offset += orbit.total_shift();
        }
        print(&json!({
            "start": ip,
            "steps": out,
            "orbit_closes": orbit.closed,
            "orbit_length": 2 * n + 2,
            "orbit_shift": orbit.total_shift(),
        }));
        return Ok(Outcome::Done);
    }
    let m = read_module(v)?;
    let it = serre_iterate(&m, steps)?;
    let labels = m.poset().labels().to_vec();
    let named = |dims: &[usize]| -> Value {
        labels
            .iter()
            .zip(dims)
            .filter(|(_, &d)| d > 0)
            .map(|(l, &d)| (l.clone(), json!(d)))
            .collect::<serde_json::Map<_, _>>()
            .into()
    };
    let steps_json: Vec<Value> = it
        .steps
        .iter()
        .map(|s| {
            json!({
                "homology": s.homology.iter().map(|(k, d)| json!({"degree": k, "dimensions": named(d)})).collect::<Vec<_>>(),
                "shift": s.shift,
            })
        })
        .collect();
    print(&json!({
        "steps": steps_json,
        "halted": it.halted,
        "shift": it.shift,
        "module": named(it.module.dimvec()),
        "convention": "differentials lower degree; the start module sits in degree 0",
    }));
    Ok(Outcome::Done)
}

fn verify(
    check: Check,
    n: Option<usize>,
    extended: bool,
    input: Option<&Path>,
    period: Option<u32>,
) -> Result<Outcome, Usage> {
    let mut reports: Vec<VerificationReport> = Vec::new();
    if let Some(path) = input {
        if check != Check::Coxeter {
            return Err(Usage("--input is only accepted with --check coxeter".into()));
        }
        let poset: PosetJson = parse(read_json(path)?, "a poset")?;
        let poset = FinitePoset::from_json(&poset)?;
        let period = period.ok_or_else(|| Usage("--period is required with --input".into()))?;
        reports.push(coxeter_check(&path.display().to_string(), &poset, period, false)?);
    } else if check == Check::All {
        let n = need_n(n)?;
        let serre_max = if extended {
            MAX_SERRE_SIZE_EXTENDED
        } else {
            MAX_SERRE_SIZE
        };
        if n <= serre_max {
            reports.push(verify_serre(n, extended)?);
        }
        if n <= MAX_CY_SIZE {
            reports.push(verify_cy(n)?);
        }
        if n <= MAX_COXETER_SIZE {
            reports.push(verify_coxeter(n)?);
        }
        if n <= MAX_BIJECTION_SIZE {
            reports.push(verify_bijections(n)?);
        }
        if n <= MAX_KCLASS_SIZE {
            reports.push(k_class_check(n)?);
        }
        if reports.is_empty() {
            return Err(Usage(format!("no campaign accepts n = {n}")));
        }
    } else {
        let report = match (check, n) {
            (Check::Coxeter, None) => verify_coxeter_ex_dyck()?,
            (Check::Serre, n) => verify_serre(need_n(n)?, extended)?,
            (Check::Cy, n) => verify_cy(need_n(n)?)?,
            (Check::Coxeter, Some(n)) => verify_coxeter(n)?,
            (Check::Bijections, n) => verify_bijections(need_n(n)?)?,
            (Check::Kclass, n) => k_class_check(need_n(n)?)?,
            (Check::All, _) => unreachable!(),
        };
        reports.push(report);
    }
    let pass = reports.iter().all(|r| r.pass);
    if reports.len() == 1 {
        print(&reports[0]);
    } else {
        print(&reports);
    }
    Ok(if pass { Outcome::Done } else { Outcome::Failed })
}

fn ip_hasse_dot(ip: &IntervalPoset) -> String {
    let mut out = String::from("digraph ip {\n");
    for v in 1..=ip.size() {
        out.push_str(&format!("  \"{v}\";\n"));
    }
    for (a, b) in ip.hasse().pairs() {
        out.push_str(&format!("  \"{a}\" -> \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}

fn export(what: What, n: Option<usize>, input: Option<&Path>, format: Format) -> Result<Outcome, Usage> {
    match what {
        What::Lattice => {
            let lattice = TamariLattice::new(need_n(n)?)?;
            match format {
                Format::Dot => emit(&lattice.poset().to_dot(&format!("tam{}", lattice.size()))),
                Format::Json => print(&lattice.poset().to_json()),
            }
        }
        What::Hasse => {
            let path = input.ok_or_else(|| Usage("--input is required for --what hasse".into()))?;
            let ip: IntervalPoset = parse(read_json(path)?, "an interval-poset")?;
            match format {
                Format::Dot => emit(&ip_hasse_dot(&ip)),
                Format::Json => print(&json!({
                    "n": ip.size(),
                    "covers": ip.hasse().pairs().iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
                })),
            }
        }
    }
    Ok(Outcome::Done)
}

fn run(cli: Cli) -> Result<Outcome, Usage> {
    match cli.command {
        Command::Enumerate { kind, n, count_only } => enumerate(kind, n, count_only),
        Command::Map { via, input } => map(via, &input),
        Command::Serre { input, steps, mode } => serre(&input, steps, mode),
        Command::Verify {
            check,
            n,
            extended,
            input,
            period,
        } => verify(check, n, extended, input.as_deref(), period),
        Command::Export { what, n, input, format } => export(what, n, input.as_deref(), format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
