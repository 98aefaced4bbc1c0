//! pkmet: generate weighted hyperplane arrangements, inspect intersection
//! lattices, decide the polyhedral-Kahler existence criterion, and verify the
//! wonderful-model cohomology identities, all in exact rational arithmetic.
//!
//! Exit codes: 0 success / verdict true / all identities hold; 1 verdict
//! false or an identity mismatch; 2 invalid input or parameters.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use pkmet_core::arrangement::{
    gen_bm, gen_braid, gen_generic, gen_seven_lines, Arrangement, ArrangementFile,
};
use pkmet_core::chern;
use pkmet_core::checker::{self, CheckReport};
use pkmet_core::lattice::{build_lattice, IntersectionLattice};
use pkmet_core::linalg::{format_rational, parse_rational, rat_int, Rational};
use pkmet_core::sampling;
use pkmet_core::weights::WeightedArrangement;
use pkmet_core::wonder::{H2Key, PresentationOracle, WonderModel};

#[derive(Parser)]
#[command(
    name = "pkmet",
    about = "Exact combinatorial checks for polyhedral Kahler metrics on weighted hyperplane arrangements",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named arrangement file (always JSON)
    Gen(GenArgs),
    /// Print the intersection lattice of an arrangement file
    Lattice { input: PathBuf },
    /// Decide the existence criterion for a weighted arrangement file
    Check { input: PathBuf },
    /// Verify cohomology identities on a weighted arrangement file
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: Family,
}

#[derive(Subcommand)]
enum Family {
    /// Braid arrangement on k labels: C(k,2) hyperplanes in CP^{k-2}
    Braid {
        k: usize,
        #[arg(long)]
        weights: Option<String>,
    },
    /// Type-B reflection arrangement: m^2 hyperplanes in CP^{m-1}
    Bm {
        m: usize,
        #[arg(long)]
        weights: Option<String>,
    },
    /// The seven-line arrangement in CP^2
    SevenLines {
        #[arg(long)]
        weights: Option<String>,
    },
    /// k generic hyperplanes in CP^n, deterministic in the seed
    Generic {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        weights: Option<String>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    /// Verify the second-Chern defect against its closed form
    #[arg(long)]
    omega: bool,
    /// Verify the parabolic second Chern character against its closed form
    #[arg(long)]
    pch2: bool,
    /// Verify the first Chern identity
    #[arg(long)]
    eta: bool,
    /// Sweep every degree-two monomial, reduction table versus oracle
    #[arg(long)]
    oracle: bool,
    /// Random weight vectors per identity suite
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Constrain random weights to sum to n+1 and compare all coordinates
    #[arg(long)]
    cy: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Gen(args) => cmd_gen(cli, args),
        Command::Lattice { input } => cmd_lattice(cli, input),
        Command::Check { input } => cmd_check(cli, input),
        Command::Verify(args) => cmd_verify(cli, args),
    }
}

fn emit(cli: &Cli, content: &str) -> Result<(), String> {
    match &cli.out {
        Some(path) => std::fs::write(path, content).map_err(|e| e.to_string()),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load(path: &PathBuf) -> Result<(Arrangement, Option<Vec<Rational>>), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file = ArrangementFile::from_json(&text).map_err(|e| e.to_string())?;
    let weights = match &file.weights {
        None => None,
        Some(ws) => {
            let parsed: Result<Vec<Rational>, _> =
                ws.iter().map(|s| parse_rational(s)).collect();
            Some(parsed.map_err(|e| e.to_string())?)
        }
    };
    match weights {
        None => {
            let arr = Arrangement::new(file.dim, file.hyperplanes).map_err(|e| e.to_string())?;
            Ok((arr, None))
        }
        Some(ws) => {
            if ws.len() != file.hyperplanes.len() {
                return Err(format!(
                    "{} weights for {} hyperplanes",
                    ws.len(),
                    file.hyperplanes.len()
                ));
            }
            let (arr, ws) = Arrangement::new_with_payload(file.dim, file.hyperplanes, ws)
                .map_err(|e| e.to_string())?;
            Ok((arr, Some(ws)))
        }
    }
}

fn parse_weight_spec(arr: &Arrangement, spec: &str) -> Result<Vec<Rational>, String> {
    if spec == "uniform" {
        return Ok(checker::uniform_reflection_weights(arr));
    }
    if let Some(list) = spec.strip_prefix("braid:") {
        let a: Result<Vec<Rational>, _> = list.split(',').map(parse_rational).collect();
        return checker::braid_weights(arr, &a.map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string());
    }
    let ws: Result<Vec<Rational>, _> = spec.split(',').map(parse_rational).collect();
    let ws = ws.map_err(|e| e.to_string())?;
    if ws.len() != arr.len() {
        return Err(format!("{} weights for {} hyperplanes", ws.len(), arr.len()));
    }
    Ok(ws)
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> Result<ExitCode, String> {
    let (arr, weight_spec) = match &args.family {
        Family::Braid { k, weights } => (gen_braid(*k).map_err(|e| e.to_string())?, weights),
        Family::Bm { m, weights } => (gen_bm(*m).map_err(|e| e.to_string())?, weights),
        Family::SevenLines { weights } => (gen_seven_lines(), weights),
        Family::Generic { dim, count, seed, weights } => {
            (gen_generic(*dim, *count, *seed).map_err(|e| e.to_string())?, weights)
        }
    };
    let weights = match weight_spec {
        None => None,
        Some(spec) => {
            let ws = parse_weight_spec(&arr, spec)?;
            // reject malformed families up front
            WeightedArrangement::new(arr.clone(), ws.clone()).map_err(|e| e.to_string())?;
            Some(ws)
        }
    };
    let file = ArrangementFile::for_arrangement(&arr, weights.as_deref());
    emit(cli, &file.to_json())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct LatticeFlatRow {
    closure: Vec<u32>,
    rank: usize,
    multiplicity: Option<usize>,
    irreducible: bool,
    empty_subspace: bool,
}

#[derive(Serialize)]
struct LatticeReport {
    dim: usize,
    hyperplanes: usize,
    essential: bool,
    irreducible: bool,
    g_count: usize,
    delta1: Option<usize>,
    delta2: Option<usize>,
    flats: Vec<LatticeFlatRow>,
}

fn lattice_report(arr: &Arrangement, lat: &IntersectionLattice) -> LatticeReport {
    let (delta1, delta2) = match WonderModel::new(arr, lat) {
        Ok(model) => (Some(model.delta1().len()), Some(model.delta2().len())),
        Err(_) => (None, None),
    };
    let flats = (0..lat.flats().len())
        .map(|id| LatticeFlatRow {
            closure: lat.flat(id).closure.clone(),
            rank: lat.rank(id),
            multiplicity: (lat.rank(id) == 2 && Some(id) != lat.empty_flat())
                .then(|| lat.multiplicity(id)),
            irreducible: lat.is_irreducible_flat(id),
            empty_subspace: Some(id) == lat.empty_flat(),
        })
        .collect();
    LatticeReport {
        dim: arr.dim(),
        hyperplanes: arr.len(),
        essential: lat.essential(),
        irreducible: lat.arrangement_irreducible(),
        g_count: (0..lat.flats().len()).filter(|&id| lat.is_irreducible_flat(id)).count(),
        delta1,
        delta2,
        flats,
    }
}

fn render_lattice_text(r: &LatticeReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} hyperplanes in CP^{} (essential: {}, irreducible: {})\n",
        r.hyperplanes, r.dim, r.essential, r.irreducible
    ));
    out.push_str(&format!("irreducible flats |G| = {}", r.g_count));
    if let (Some(d1), Some(d2)) = (r.delta1, r.delta2) {
        out.push_str(&format!(", |Delta_1| = {d1}, |Delta_2| = {d2}"));
    }
    out.push('\n');
    let mut rank = 0;
    for f in &r.flats {
        if f.rank != rank {
            rank = f.rank;
            out.push_str(&format!("rank {rank}:\n"));
        }
        let mult = f
            .multiplicity
            .map(|m| format!(" multiplicity {m}"))
            .unwrap_or_default();
        let tag = if f.empty_subspace {
            " (empty subspace)"
        } else if f.irreducible {
            " irreducible"
        } else {
            " reducible"
        };
        out.push_str(&format!("  {:?}{mult}{tag}\n", f.closure));
    }
    out
}

fn cmd_lattice(cli: &Cli, input: &PathBuf) -> Result<ExitCode, String> {
    let (arr, _) = load(input)?;
    let lat = build_lattice(&arr);
    let report = lattice_report(&arr, &lat);
    let content = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => render_lattice_text(&report),
    };
    emit(cli, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(cli: &Cli, input: &PathBuf) -> Result<ExitCode, String> {
    let (arr, weights) = load(input)?;
    let weights = weights.ok_or("input file has no weights")?;
    let w = WeightedArrangement::new(arr, weights).map_err(|e| e.to_string())?;
    let report: CheckReport = checker::check_theorem(&w);
    let content = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    emit(cli, &content)?;
    Ok(if report.verdict { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct SuiteOutcome {
    suite: String,
    checks: usize,
    failures: usize,
    detail: Vec<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    input: String,
    seed: u64,
    trials: usize,
    cy: bool,
    suites: Vec<SuiteOutcome>,
    all_ok: bool,
}

fn render_verify_text(r: &VerifyReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "verify {} (seed {}, trials {}, cy {})\n",
        r.input, r.seed, r.trials, r.cy
    ));
    for s in &r.suites {
        out.push_str(&format!(
            "  {:<8} {:>6} checks  {:>3} failures  -> {}\n",
            s.suite,
            s.checks,
            s.failures,
            if s.failures == 0 { "ok" } else { "MISMATCH" }
        ));
        for d in &s.detail {
            out.push_str(&format!("    {d}\n"));
        }
    }
    out.push_str(&format!("result: {}\n", if r.all_ok { "all identities hold" } else { "MISMATCH" }));
    out
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode, String> {
    let (arr, file_weights) = load(&args.input)?;
    let lat = build_lattice(&arr);
    let model = WonderModel::new(&arr, &lat).map_err(|e| e.to_string())?;
    let run_all = !(args.omega || args.pch2 || args.eta || args.oracle);
    let n = arr.dim() as i64;
    let target = rat_int(n + 1);

    // weight vectors for the identity suites: the file's own weights first
    // when present and admissible for the mode, then seeded random draws
    let mut rng = StdRng::seed_from_u64(args.seed);
    let mut vectors: Vec<(String, Vec<Rational>)> = Vec::new();
    if let Some(ws) = &file_weights {
        if args.cy && ws.iter().sum::<Rational>() != target {
            return Err(format!(
                "file weights sum to {}, but --cy requires {}",
                format_rational(&ws.iter().sum::<Rational>()),
                format_rational(&target)
            ));
        }
        vectors.push(("file".to_string(), ws.clone()));
    }
    for t in 0..args.trials {
        let ws = if args.cy {
            sampling::constrained_sum_weights(&mut rng, arr.len(), &target)
        } else {
            sampling::open01_weights(&mut rng, arr.len())
        };
        vectors.push((format!("trial {t}"), ws));
    }

    let mut suites: Vec<SuiteOutcome> = Vec::new();

    if run_all || args.oracle {
        let oracle = PresentationOracle::new(&model).map_err(|e| e.to_string())?;
        let mut checks = 0;
        let mut failures = 0;
        let mut detail = Vec::new();
        for a in 0..model.g_len() {
            for b in a..model.g_len() {
                checks += 1;
                if model.reduce_monomial(a, b) != oracle.reduce(a, b) {
                    failures += 1;
                    if detail.len() < 5 {
                        detail.push(format!("monomial ({a},{b}) disagrees with the oracle"));
                    }
                }
            }
        }
        detail.insert(
            0,
            format!(
                "quotient dimension {} = |Delta_2| {}",
                oracle.quotient_dimension(),
                model.delta2().len()
            ),
        );
        suites.push(SuiteOutcome { suite: "oracle".into(), checks, failures, detail });
    }

    if run_all || args.eta {
        let mut checks = 0;
        let mut failures = 0;
        let mut detail = Vec::new();
        for (label, ws) in &vectors {
            let w = match WeightedArrangement::new(arr.clone(), ws.clone()) {
                Ok(w) => w,
                Err(e) => return Err(e.to_string()),
            };
            checks += 1;
            let e = chern::eta(&w, &model);
            let expected = rat_int(n + 1) - w.total();
            let ok = e.coeff(&H2Key::HPull) == expected
                && e.iter().filter(|(k, _)| **k != H2Key::HPull).count() == 0;
            if !ok {
                failures += 1;
                if detail.len() < 5 {
                    detail.push(format!("{label}: eta does not reduce to the pullback multiple"));
                }
            }
        }
        suites.push(SuiteOutcome { suite: "eta".into(), checks, failures, detail });
    }

    for (flag, name) in [(args.omega, "omega"), (args.pch2, "pch2")] {
        if !(run_all || flag) {
            continue;
        }
        let mut checks = 0;
        let mut failures = 0;
        let mut detail = Vec::new();
        for (label, ws) in &vectors {
            let w = match WeightedArrangement::new(arr.clone(), ws.clone()) {
                Ok(w) => w,
                Err(e) => return Err(e.to_string()),
            };
            let reports = chern::verify_identities(&w, &model, args.cy).map_err(|e| e.to_string())?;
            let report = if name == "omega" { &reports.omega } else { &reports.parch2 };
            for row in &report.rows {
                if !row.compared {
                    continue;
                }
                checks += 1;
                if !row.equal {
                    failures += 1;
                    if detail.len() < 8 {
                        detail.push(format!(
                            "{label}: {} computed {} closed {}",
                            row.key, row.computed, row.closed_form
                        ));
                    }
                }
            }
        }
        suites.push(SuiteOutcome { suite: name.into(), checks, failures, detail });
    }

    let all_ok = suites.iter().all(|s| s.failures == 0);
    let report = VerifyReport {
        input: args.input.display().to_string(),
        seed: args.seed,
        trials: args.trials,
        cy: args.cy,
        suites,
        all_ok,
    };
    let content = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => render_verify_text(&report),
    };
    emit(cli, &content)?;
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
