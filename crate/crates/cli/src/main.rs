//! `essentri`: inspect triangulations and certify their edges.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use essentri_core::angles::{enumerate_taut, solve_angle_lp, AngleMode};
use essentri_core::certify::{certify_essential, certify_strongly_essential, parse_methods, CertifyOptions, TriangulationVerdict};
use essentri_core::format::{parse_document, to_json, to_table, ParsedDocument};
use essentri_core::gaussian::GaussianRational;
use essentri_core::geom::{solve_shapes_newton, verify_shapes};
use essentri_core::moves::{pachner_2_3, pachner_3_2, pillow_0_2};
use essentri_core::pi1::{
    peripheral_system, presentation_closed_with, simplify_presentation, spine_presentation_with, Abelianization, Answer,
    Budget, Presentation,
};
use essentri_core::skeleton::{build_skeleton, Classification, SkeletonSummary};
use essentri_core::{Mode, Triangulation};

const BUDGET_HELP: &str = "Group budget overrides as key=value,... with keys rewrite_steps (default 20000), \
coset_nodes (200000), quotient_degree (6), quotient_homs (2000000), factor_depth (3), simplify_length (2000)";

#[derive(Parser, Debug)]
#[command(name = "essentri", version, about = "Triangulations of 3-manifolds: skeleta, angle structures, shapes and essential-edge certificates")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, env = "ESSENTRI_BUDGET", help = BUDGET_HELP)]
    budget: Option<String>,
    /// Accepted for scripting stability; every search is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check gluing consistency; exit 0 iff valid.
    Validate {
        file: PathBuf,
        /// Allow unglued faces.
        #[arg(long)]
        boundary: bool,
    },
    /// Edge, face and vertex classes.
    Info { file: PathBuf },
    /// Angle structure linear programs.
    Angles(AnglesArgs),
    /// Fundamental group presentation.
    Pi1 {
        file: PathBuf,
        #[arg(long)]
        simplify: bool,
        #[arg(long)]
        peripheral: bool,
    },
    /// Verify or solve the gluing equations.
    Shapes(ShapesArgs),
    /// Apply a 2-3, 3-2 or 0-2 move.
    Move(MoveArgs),
    /// Certify essential or strongly essential; exit 0 yes, 1 no, 2 unknown.
    Certify(CertifyArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("kind").required(true).args(["semi", "strict", "taut"])))]
struct AnglesArgs {
    file: PathBuf,
    #[arg(long)]
    semi: bool,
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    taut: bool,
    /// Most taut structures to list.
    #[arg(long, default_value_t = 16)]
    limit: usize,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("action").required(true).args(["verify", "solve"])))]
struct ShapesArgs {
    file: PathBuf,
    /// `--verify` checks the file's shape column; `--verify=PATH` reads exact
    /// shapes from PATH, one per line.
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "")]
    verify: Option<String>,
    #[arg(long)]
    solve: bool,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    iters: usize,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("move").required(true).args(["two_three", "three_two", "zero_two"])))]
struct MoveArgs {
    file: PathBuf,
    /// Face class to replace by three tetrahedra.
    #[arg(long)]
    two_three: Option<usize>,
    /// Degree-three edge class to remove.
    #[arg(long)]
    three_two: Option<usize>,
    /// `E,F1,F2`: split edge class E between its corners F1 and F2.
    #[arg(long)]
    zero_two: Option<String>,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("question").required(true).args(["essential", "strong"])))]
struct CertifyArgs {
    file: PathBuf,
    #[arg(long)]
    essential: bool,
    #[arg(long)]
    strong: bool,
    /// Comma-separated subset of combinatorial, angles, homology, geometry, group.
    #[arg(long)]
    methods: Option<String>,
    /// Development radius for the geometric scan.
    #[arg(long, default_value_t = 3)]
    radius: usize,
    /// Run every method and report disagreements.
    #[arg(long)]
    exhaustive: bool,
}

fn load(path: &Path) -> Result<ParsedDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_document(&text).with_context(|| format!("parsing {}", path.display()))
}

fn budget(cli: &Cli) -> Result<Budget> {
    match &cli.budget {
        Some(spec) => Ok(Budget::default().with_overrides(spec)?),
        None => Ok(Budget::default()),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn exit_for(answer: Answer) -> u8 {
    match answer {
        Answer::Yes => 0,
        Answer::No => 1,
        Answer::Unknown => 2,
    }
}

fn validate(cli: &Cli, file: &Path, boundary: bool) -> Result<u8> {
    let doc = load(file)?;
    let mode = if boundary { Mode::Boundary } else { Mode::Closed };
    let report = doc.triangulation.validate_mode(mode);
    if cli.json {
        print_json(&json!({ "valid": report.is_valid(), "violations": report.violations }))?;
    } else if report.is_valid() {
        println!("valid ({} tetrahedra)", doc.triangulation.tet_count());
    } else {
        println!("invalid");
        for v in &report.violations {
            println!("  {v}");
        }
    }
    Ok(if report.is_valid() { 0 } else { 1 })
}

fn print_skeleton(skel: &SkeletonSummary) {
    println!("tetrahedra: {}  vertices: {}  edges: {}  faces: {}", skel.tet_count, skel.vertex_count, skel.edge_count(), skel.faces.len());
    println!("classification: {:?}  euler characteristic: {}", skel.classification, skel.euler_characteristic);
    println!();
    println!("edge  degree  cycle");
    for e in &skel.edges {
        let cycle: Vec<String> =
            e.corners.iter().map(|c| format!("{}({}{})", c.tet, c.vertices[0], c.vertices[1])).collect();
        let mark = if e.boundary { " [boundary]" } else { "" };
        println!("{:>4}  {:>6}  {}{mark}", e.index, e.degree(), cycle.join(" "));
    }
    println!();
    println!("vertex  link");
    for l in &skel.links {
        println!("{:>6}  {} ({} triangles)", l.vertex, l.surface_kind, l.triangle_count);
    }
}

fn info(cli: &Cli, file: &Path) -> Result<u8> {
    let doc = load(file)?;
    let skel = build_skeleton(&doc.triangulation)?;
    if cli.json {
        print_json(&skel)?;
    } else {
        print_skeleton(&skel);
    }
    Ok(0)
}

fn angles(cli: &Cli, a: &AnglesArgs) -> Result<u8> {
    let tri = load(&a.file)?.triangulation;
    if a.taut {
        let found = enumerate_taut(&tri, a.limit)?;
        if cli.json {
            print_json(&found)?;
        } else {
            println!("taut: {} found (limit {})", found.len(), a.limit);
            for x in &found {
                println!("  {x}");
            }
        }
        return Ok(if found.is_empty() { 1 } else { 0 });
    }
    let mode = if a.strict { AngleMode::Strict } else { AngleMode::Semi };
    let out = solve_angle_lp(&tri, mode)?;
    if cli.json {
        print_json(&out)?;
    } else {
        let name = if a.strict { "strict" } else { "semi" };
        let status = if out.is_feasible() { "feasible" } else { "infeasible" };
        match &out.optimum {
            Some(t) => println!("{name}: {status} (t* = {t})"),
            None => println!("{name}: {status}"),
        }
        if let Some(w) = &out.witness {
            println!("witness: {w}");
        }
    }
    Ok(if out.is_feasible() { 0 } else { 1 })
}

fn pi1(cli: &Cli, file: &Path, simplify: bool, peripheral: bool) -> Result<u8> {
    let tri = load(file)?.triangulation;
    tri.require_valid(Mode::Closed)?;
    let skel = build_skeleton(&tri)?;
    let spine = if skel.classification == Classification::ClosedManifold1Vertex {
        None
    } else {
        Some(spine_presentation_with(&tri, &skel)?)
    };
    let presentation: Presentation = match &spine {
        Some(s) => s.presentation.clone(),
        None => presentation_closed_with(&tri, &skel)?,
    };
    let shown = if simplify {
        simplify_presentation(&presentation, budget(cli)?.simplify_length).presentation
    } else {
        presentation.clone()
    };
    let homology = Abelianization::new(&presentation).invariants();
    let mut curves = Vec::new();
    if peripheral {
        let Some(spine) = &spine else { bail!("peripheral curves need torus cusps") };
        for v in 0..skel.vertex_count {
            curves.push(peripheral_system(&tri, &skel, spine, v)?);
        }
    }
    if cli.json {
        print_json(&json!({ "presentation": shown, "homology": homology, "peripheral": curves }))?;
    } else {
        println!("{shown}");
        println!("H1 = {homology}");
        for c in &curves {
            println!("cusp {}: {} , {}", c.vertex, c.curves[0].word, c.curves[1].word);
        }
    }
    Ok(0)
}

fn read_shapes(path: &str) -> Result<Vec<GaussianRational>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.parse::<GaussianRational>().map_err(anyhow::Error::msg))
        .collect()
}

fn shapes(cli: &Cli, a: &ShapesArgs) -> Result<u8> {
    let doc = load(&a.file)?;
    let tri = &doc.triangulation;
    if let Some(source) = &a.verify {
        let z = if source.is_empty() {
            doc.shapes.clone().context("no shape column in the input; pass a shape file to --verify")?
        } else {
            read_shapes(source)?
        };
        let report = verify_shapes(tri, &z)?;
        if cli.json {
            print_json(&report)?;
        } else {
            println!("edge  product  argument/π");
            for e in &report.edges {
                println!("{:>4}  {:>7}  {:.12}", e.edge, e.product.to_string(), e.argument_sum);
            }
            println!("flat: {:?}", report.flat);
            if !report.negatively_oriented.is_empty() {
                println!("negatively oriented: {:?}", report.negatively_oriented);
            }
            if let Some(cusps) = &report.cusps {
                for c in cusps {
                    println!("cusp {}: holonomy {} , {}  complete: {}", c.vertex, c.holonomy[0], c.holonomy[1], c.complete);
                }
            }
            println!("{}", if report.passed { "passed" } else { "failed" });
        }
        return Ok(if report.passed { 0 } else { 1 });
    }
    let start = vec![Complex64::new(0.5, 0.75f64.sqrt()); tri.tet_count()];
    let out = solve_shapes_newton(tri, &start, a.tol, a.iters)?;
    if cli.json {
        print_json(&json!({
            "shapes": out.shapes.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "residual": out.residual,
            "iterations": out.iterations,
        }))?;
    } else {
        for (t, z) in out.shapes.iter().enumerate() {
            println!("{t}: {:.15} {:+.15}i", z.re, z.im);
        }
        println!("residual {:.3e} after {} iterations", out.residual, out.iterations);
    }
    Ok(0)
}

fn parse_zero_two(spec: &str) -> Result<(usize, [usize; 2])> {
    let parts: Vec<usize> = spec
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("--zero-two expects E,F1,F2, got {spec:?}"))?;
    match parts[..] {
        [e, i, j] => Ok((e, [i, j])),
        _ => bail!("--zero-two expects E,F1,F2, got {spec:?}"),
    }
}

fn apply_move(cli: &Cli, a: &MoveArgs) -> Result<u8> {
    let tri = load(&a.file)?.triangulation;
    let (out, record): (Triangulation, _) = if let Some(f) = a.two_three {
        pachner_2_3(&tri, f)?
    } else if let Some(e) = a.three_two {
        pachner_3_2(&tri, e)?
    } else {
        let (e, side) = parse_zero_two(a.zero_two.as_deref().unwrap_or_default())?;
        pillow_0_2(&tri, e, side)?
    };
    let is_json = a.output.extension().is_some_and(|x| x == "json");
    let text = if is_json { to_json(&out) } else { to_table(&out, None) };
    fs::write(&a.output, text).with_context(|| format!("writing {}", a.output.display()))?;
    if cli.json {
        print_json(&record)?;
    } else {
        println!("{:?}: {} -> {} tetrahedra, written to {}", record.kind, tri.tet_count(), out.tet_count(), a.output.display());
    }
    Ok(0)
}

fn print_verdict(v: &TriangulationVerdict) {
    println!("{v}");
    println!();
    println!("edge  essential  certificate");
    for e in &v.edges {
        println!("{:>4}  {:>9}  {}", e.edge, e.essential.to_string(), e.certificate.tag());
    }
    if v.strongly_essential.is_some() {
        let shown: Vec<_> = v.pairs.iter().filter(|p| p.parallel != Answer::No).collect();
        println!();
        println!("pairs: {} checked, {} not certified distinct", v.pairs.len(), shown.len());
        for p in shown {
            println!("  {:?}  parallel: {}  ({})", p.edges, p.parallel, p.certificate.tag());
        }
    }
    println!();
    for l in &v.log {
        println!("[{}] {}", l.method, l.note);
    }
    for (subject, ev) in v.conflicts() {
        println!("conflict on {subject:?}: {ev:?}");
    }
}

fn certify(cli: &Cli, a: &CertifyArgs) -> Result<u8> {
    let doc = load(&a.file)?;
    let opts = CertifyOptions {
        budget: budget(cli)?,
        methods: match &a.methods {
            Some(m) => parse_methods(m)?,
            None => CertifyOptions::default().methods,
        },
        shapes: doc.shapes.clone(),
        radius: a.radius,
        exhaustive: a.exhaustive,
    };
    let v = if a.strong {
        certify_strongly_essential(&doc.triangulation, &opts)?
    } else {
        certify_essential(&doc.triangulation, &opts)?
    };
    if cli.json {
        print_json(&v)?;
    } else {
        print_verdict(&v);
    }
    Ok(exit_for(v.answer()))
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Validate { file, boundary } => validate(cli, file, *boundary),
        Command::Info { file } => info(cli, file),
        Command::Angles(a) => angles(cli, a),
        Command::Pi1 { file, simplify, peripheral } => pi1(cli, file, *simplify, *peripheral),
        Command::Shapes(a) => shapes(cli, a),
        Command::Move(a) => apply_move(cli, a),
        Command::Certify(a) => certify(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 3 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
