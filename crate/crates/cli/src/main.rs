use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use voronoi_core::complex::{self, barycentric_subdivision, Coefficients, RegularComplex, SimplicialComplex};
use voronoi_core::exact::SymMatrix;
use voronoi_core::par::Execution;
use voronoi_core::perfect::{Catalog, EnumerateOptions, Enumeration};
use voronoi_core::{parabolics, reduce, retract_sl2, shelling, sp4};

/// Environment variable naming the default catalog directory.
const CATALOG_DIR_VAR: &str = "VORONOI_CATALOG_DIR";

#[derive(Parser)]
#[command(name = "voronoi", version, about = "Perfect forms, Voronoi reduction and cell-complex tools")]
struct Cli {
    /// Run data-parallel stages on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Perfect-form catalogs.
    Perfect {
        #[command(subcommand)]
        command: PerfectCommand,
    },
    /// Locate the Voronoi cone containing a positive-definite form.
    Reduce(ReduceArgs),
    /// Quotients of the Farey tessellation by principal congruence subgroups.
    Sl2(Sl2Args),
    /// Search for a shelling and certify spheres.
    Shell(ShellArgs),
    /// Counting identities for the genus-two symplectic 4-cell.
    Sp4 {
        #[command(subcommand)]
        command: Sp4Command,
    },
    /// Quotient of the Tits building of SL_n by SL_n(Z).
    Building(BuildingArgs),
    /// Homology of a cell or simplicial complex.
    Homology(HomologyArgs),
}

#[derive(Subcommand)]
enum PerfectCommand {
    /// Run Voronoi's algorithm in dimension n.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    /// Continue from a partial catalog after verifying its hashes.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Output file; default `$VORONOI_CATALOG_DIR/perfect-<n>.json`, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stop after this many class expansions.
    #[arg(long)]
    max_expansions: Option<usize>,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    form: PathBuf,
    /// Default `$VORONOI_CATALOG_DIR/perfect-<n>.json`.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Maximum number of facet crossings.
    #[arg(long, default_value_t = reduce::DEFAULT_STEP_CAP)]
    step_cap: usize,
}

#[derive(Args)]
struct Sl2Args {
    #[arg(long)]
    level: u32,
    /// Write `tessellation.json`, `dual.json` or `report.json` (chosen by
    /// file stem). May be repeated.
    #[arg(long)]
    emit: Vec<PathBuf>,
}

#[derive(Args)]
struct ShellArgs {
    /// Simplicial complex, or a cell complex (which is subdivided first).
    #[arg(long)]
    complex: PathBuf,
    #[arg(long, default_value_t = 10_000_000, value_parser = parse_budget)]
    budget: u64,
    /// Write the shelling order here when one is found.
    #[arg(long)]
    order: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sp4Command {
    /// Check all identities and negative controls.
    Verify,
}

#[derive(Args)]
struct BuildingArgs {
    #[arg(long)]
    n: u32,
    /// Write the quotient as a cell complex.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Args)]
struct HomologyArgs {
    #[arg(long)]
    complex: PathBuf,
    /// Integer coefficients (default: rational).
    #[arg(long)]
    integer: bool,
}

fn parse_budget(s: &str) -> Result<u64, String> {
    let v: u64 = s.replace('_', "").parse().map_err(|e| format!("{e}"))?;
    if v == 0 {
        return Err("budget must be positive".into());
    }
    Ok(v)
}

/// Exit code 1 is a failed verification, 2 a usage or input error.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: anyhow::Error) -> Failure {
    Failure { code: 2, error }
}

fn verification(error: anyhow::Error) -> Failure {
    Failure { code: 1, error }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        usage(error)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let result = match cli.command {
        Command::Perfect { command: PerfectCommand::Enumerate(a) } => enumerate(a, exec),
        Command::Reduce(a) => reduce_form(a),
        Command::Sl2(a) => sl2(a),
        Command::Shell(a) => shell(a),
        Command::Sp4 { command: Sp4Command::Verify } => sp4_verify(),
        Command::Building(a) => building(a),
        Command::Homology(a) => homology(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_json(path, &text)
}

fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> anyhow::Result<T> {
    serde_json::from_str(text)
        .map_err(|e| anyhow!("{}:{}:{}: {}", path.display(), e.line(), e.column(), strip_position(&e.to_string())))
}

/// serde_json appends " at line L column C"; the location is already given.
fn strip_position(msg: &str) -> &str {
    msg.rfind(" at line ").map_or(msg, |i| &msg[..i])
}

fn to_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn default_catalog(n: usize) -> Option<PathBuf> {
    std::env::var_os(CATALOG_DIR_VAR).map(|d| PathBuf::from(d).join(format!("perfect-{n}.json")))
}

fn enumerate(a: EnumerateArgs, exec: Execution) -> CmdResult {
    let mut e = match &a.resume {
        Some(path) => {
            let cat: Catalog = read_json(path)?;
            if cat.n != a.n {
                return Err(usage(anyhow!("{} is a catalog for n = {}, not {}", path.display(), cat.n, a.n)));
            }
            cat.to_enumeration().map_err(|e| verification(anyhow!("{}: {e}", path.display())))?
        }
        None => Enumeration::seeded(a.n).map_err(|e| usage(e.into()))?,
    };
    let opts = EnumerateOptions { exec, max_expansions: a.max_expansions, reverse_facets: false };
    e.run(&opts).map_err(|e| verification(e.into()))?;
    let catalog = Catalog::from_enumeration(&e);
    let text = to_text(&catalog);
    let summary = json!({
        "format": 1,
        "n": e.n,
        "classes": e.classes.len(),
        "expanded": e.expanded,
        "complete": e.is_complete(),
        "failed_facets": e.failed.len(),
    });
    match a.out.or_else(|| default_catalog(a.n)) {
        Some(path) => {
            write_text(&path, &text)?;
            print!("{}", to_text(&summary));
        }
        None => print!("{text}"),
    }
    if !e.failed.is_empty() {
        let (c, f, why) = &e.failed[0];
        return Err(verification(anyhow!("neighbor step failed at class {c} facet {f}: {why}")));
    }
    Ok(())
}

fn reduce_form(a: ReduceArgs) -> CmdResult {
    let form: SymMatrix = read_json(&a.form)?;
    if !form.is_positive_definite() {
        return Err(usage(anyhow!("{}: form is not positive-definite", a.form.display())));
    }
    let path = a
        .catalog
        .or_else(|| default_catalog(form.n()))
        .ok_or_else(|| usage(anyhow!("no --catalog given and {CATALOG_DIR_VAR} is not set")))?;
    let catalog: Catalog = read_json(&path)?;
    let e = catalog.to_enumeration().map_err(|e| verification(anyhow!("{}: {e}", path.display())))?;
    let (result, trace) = reduce::reduce_walk_trace(&form, &e, a.step_cap).map_err(|e| usage(e.into()))?;
    if !result.reconstructs(&form) {
        return Err(verification(anyhow!("coefficients do not reproduce the form")));
    }
    let mut out = serde_json::to_value(&result).expect("result serializes");
    out["format"] = json!(1);
    out["steps"] = json!(trace.len());
    print!("{}", to_text(&out));
    Ok(())
}

fn sl2(a: Sl2Args) -> CmdResult {
    let t = retract_sl2::QuotientTessellation::build(a.level).map_err(|e| usage(e.into()))?;
    let mut kinds = Vec::new();
    for path in &a.emit {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        if !["tessellation", "dual", "report"].contains(&stem.as_str()) {
            return Err(usage(anyhow!("--emit {}: file stem must be tessellation, dual or report", path.display())));
        }
        kinds.push((path, stem));
    }
    let genus = retract_sl2::genus_of(&t);
    let h1 = retract_sl2::h1_rank(&t);
    let vcd = retract_sl2::vcd_vanishing_check(&t);
    let consistent = h1 as u64 == 2 * genus.genus + genus.cusps as u64 - 1;
    let report = json!({
        "format": 1,
        "level": a.level,
        "group_order": t.group().order(),
        "triangles": genus.triangles,
        "edges": genus.edges,
        "cusps": genus.cusps,
        "genus": genus.genus,
        "euler_characteristic": genus.euler_characteristic,
        "genus_ratio": genus.ratio,
        "dual_graph": {"vertices": t.triangles.len(), "edges": t.edges.len()},
        "h1_rank": h1,
        "h1_matches_genus": consistent,
        "h2_vanishes": vcd,
    });
    for (path, kind) in kinds {
        let text = match kind.as_str() {
            "tessellation" => to_text(&t.surface()),
            "dual" => to_text(&t.dual_graph()),
            _ => to_text(&report),
        };
        write_text(path, &text)?;
    }
    print!("{}", to_text(&report));
    if !(consistent && vcd) {
        return Err(verification(anyhow!("cohomology checks failed at level {}", a.level)));
    }
    Ok(())
}

enum AnyComplex {
    Simplicial(SimplicialComplex),
    Cells(RegularComplex),
}

fn read_complex(path: &Path) -> anyhow::Result<AnyComplex> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let v: serde_json::Value = parse_json(path, &text)?;
    if v.get("maximal_faces").is_some() {
        Ok(AnyComplex::Simplicial(parse_json(path, &text)?))
    } else if v.get("cells").is_some() {
        Ok(AnyComplex::Cells(parse_json(path, &text)?))
    } else {
        Err(anyhow!("{}: expected a \"maximal_faces\" or \"cells\" field", path.display()))
    }
}

fn shell(a: ShellArgs) -> CmdResult {
    let c = match read_complex(&a.complex)? {
        AnyComplex::Simplicial(s) => s,
        AnyComplex::Cells(c) => barycentric_subdivision(&c),
    };
    let (verdict, sh) = shelling::certify_sphere(&c, a.budget).map_err(|e| usage(e.into()))?;
    if let Some(s) = &sh {
        shelling::verify_shelling(&c, s).map_err(|e| verification(anyhow!("shelling failed verification: {e}")))?;
    }
    let mut out = json!({
        "format": 1,
        "verdict": verdict,
        "dim": c.dim(),
        "facets": c.facets().len(),
        "budget": a.budget,
    });
    if let (Some(path), Some(s)) = (&a.order, &sh) {
        let order = json!({"format": 1, "facets": c.facets(), "order": s.order, "restrictions": s.restrictions});
        write_text(path, &to_text(&order))?;
        out["order_file"] = json!(path.display().to_string());
    }
    print!("{}", to_text(&out));
    Ok(())
}

fn sp4_verify() -> CmdResult {
    let r = sp4::report();
    print!("{}", to_text(&r));
    if !r.pass {
        return Err(verification(anyhow!("some identities failed")));
    }
    Ok(())
}

fn building(a: BuildingArgs) -> CmdResult {
    let b = parabolics::building_quotient(a.n).map_err(|e| usage(e.into()))?;
    let parts = parabolics::proper_partitions(a.n).map_err(|e| usage(e.into()))?;
    let mut rows = Vec::with_capacity(parts.len());
    for p in &parts {
        let d = parabolics::langlands_dims(p).map_err(|e| verification(e.into()))?;
        let n = u64::from(a.n);
        if d.dim_a + d.dim_m != n * n - 1 - 2 * d.dim_n {
            return Err(verification(anyhow!("block dimensions of {p} are inconsistent")));
        }
        rows.push(json!({
            "partition": p.to_string(),
            "dim": p.parts().len() - 2,
            "walls": parabolics::chamber_face_walls(p).map_err(|e| verification(e.into()))?,
            "dim_n": d.dim_n,
            "dim_a": d.dim_a,
            "dim_m": d.dim_m,
        }));
    }
    let cells = b.cell_complex();
    if let Some(path) = &a.emit {
        write_text(path, &to_text(&cells))?;
    }
    let out = json!({
        "format": 1,
        "n": a.n,
        "simplices": parts.len(),
        "f_vector": b.f_vector(),
        "partitions": rows,
    });
    print!("{}", to_text(&out));
    Ok(())
}

fn homology(a: HomologyArgs) -> CmdResult {
    let c = match read_complex(&a.complex)? {
        AnyComplex::Simplicial(s) => RegularComplex::from_simplicial(&s),
        AnyComplex::Cells(c) => c,
    };
    let coeff = if a.integer { Coefficients::Integers } else { Coefficients::Rationals };
    let groups: Vec<serde_json::Value> = complex::homology(&c, coeff)
        .iter()
        .enumerate()
        .map(|(k, g)| json!({"degree": k, "betti": g.betti, "torsion": g.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(), "group": g.to_string()}))
        .collect();
    let out = json!({
        "format": 1,
        "coefficients": if a.integer { "Z" } else { "Q" },
        "f_vector": c.f_vector(),
        "euler_characteristic": c.euler_characteristic(),
        "homology": groups,
    });
    print!("{}", to_text(&out));
    Ok(())
}
