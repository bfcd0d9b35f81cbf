use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use okounkov_core::convex::{normal_fan_rays, polytope_equal, theorem_simplex, RationalPolytope};
use okounkov_core::exactmath::Rat;
use okounkov_core::okounkov::{
    body_estimate, generation_degree, semigroup_with, vertex_criterion, OkounkovSemigroup, SystemKind,
};
use okounkov_core::valuation::ValuationVector;
use okounkov_core::varieties::{
    case_from_fixture, lemma_sweep, make_case, negative_control, verify_flag, CaseStudy, EcPoint,
    EllipticCurveFp, CASE_NAMES,
};
use okounkov_core::Error;

const USAGE: u8 = 1;
const FAILED: u8 = 2;
const COMPUTATION: u8 = 3;

#[derive(Parser)]
#[command(name = "okounkov", version, about = "Okounkov bodies and semigroups of flagged projective varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the semigroup, write semigroup and polytope files, compare with the predicted simplex
    Compute(Opts),
    /// Certify finite generation by the vertex criterion
    Certify(Opts),
    /// Check the flag conditions of a case study
    VerifyFlag(Opts),
    /// Search single-point members of degree-d classes on an elliptic curve over F_p
    LemmaEc(Opts),
    /// Write the normal fan rays of the computed body
    ExportToric(Opts),
    /// Print the comparison table for all shipped case studies
    Demo(Opts),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Powers,
    Complete,
    Both,
}

impl KindArg {
    fn kinds(self) -> Vec<SystemKind> {
        match self {
            KindArg::Powers => vec![SystemKind::Powers],
            KindArg::Complete => vec![SystemKind::Complete],
            KindArg::Both => SystemKind::ALL.to_vec(),
        }
    }
}

#[derive(Args, Clone)]
struct Opts {
    /// Case study name, or a path to a fixture JSON file
    #[arg(long)]
    case: Option<String>,
    /// Multiple of the hyperplane class, D = cH
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    c: Option<u64>,
    /// Highest enumerated level M
    #[arg(long = "max-level", default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    max_level: u32,
    #[arg(long, value_enum, default_value_t = KindArg::Both)]
    kind: KindArg,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Prime for the elliptic curve
    #[arg(long, default_value_t = 101)]
    p: u64,
    /// Degree of the sampled divisor classes
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    d: u64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    verbose: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_computational() { COMPUTATION } else { USAGE };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Compute(o) => compute(o),
        Command::Certify(o) => certify(o),
        Command::VerifyFlag(o) => verify(o),
        Command::LemmaEc(o) => lemma_ec(o),
        Command::ExportToric(o) => export_toric(o),
        Command::Demo(o) => demo(o),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load_case(opts: &Opts) -> Result<CaseStudy, Failure> {
    let name = opts.case.as_deref().ok_or_else(|| fail(USAGE, "--case is required"))?;
    let case = if name.ends_with(".json") {
        let text = fs::read_to_string(name).map_err(|e| fail(USAGE, format!("cannot read {name}: {e}")))?;
        case_from_fixture(&text)?
    } else if name == "quadric_nontangent" {
        negative_control()
    } else {
        make_case(name, 1)?
    };
    let c = opts.c.unwrap_or(if name.ends_with(".json") { case.c } else { 1 });
    Ok(case.with_c(c)?)
}

/// Refuses flags that fail verification.
fn guarded_case(opts: &Opts) -> Result<CaseStudy, Failure> {
    let case = load_case(opts)?;
    let report = verify_flag(&case);
    if !report.passed() {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        return Err(fail(FAILED, format!("flag of {} fails verification: {}", case.name, failed.join(", "))));
    }
    Ok(case)
}

fn show_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        x.to_string()
    }
}

fn show_point(p: &[Rat]) -> String {
    format!("({})", p.iter().map(show_rat).collect::<Vec<_>>().join(","))
}

fn show_vertices(p: &RationalPolytope) -> String {
    p.vertices().iter().map(|v| show_point(v)).collect::<Vec<_>>().join(" ")
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| fail(USAGE, format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, format!("{text}\n")).map_err(|e| fail(USAGE, format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn stem(case: &CaseStudy, max_level: u32) -> String {
    format!("{}_c{}_M{}", case.name, case.c, max_level)
}

fn enumerate(case: &CaseStudy, opts: &Opts) -> Result<Vec<OkounkovSemigroup>, Failure> {
    let valuator = case.valuator()?;
    let mut out = Vec::new();
    for kind in opts.kind.kinds() {
        let gamma = semigroup_with(case, kind, opts.max_level, &valuator)?;
        if opts.verbose {
            let sizes: Vec<String> = gamma.levels.iter().map(|(m, v)| format!("{m}:{}", v.len())).collect();
            println!("{kind}: value-set sizes {}", sizes.join(" "));
        }
        out.push(gamma);
    }
    Ok(out)
}

fn compute(opts: &Opts) -> Outcome {
    let case = guarded_case(opts)?;
    let predicted = theorem_simplex(case.n, case.c, case.d)?;
    println!("case {} (n={}, r={}, c={}, d={}), M = {}", case.name, case.n, case.r, case.c, case.d, opts.max_level);
    println!("predicted simplex: {}", show_vertices(&predicted));
    let mut all_equal = true;
    for gamma in enumerate(&case, opts)? {
        let body = body_estimate(&gamma)?;
        let base = format!("{}_{}", stem(&case, opts.max_level), gamma.kind);
        let sg = write_file(&opts.out, &format!("{base}_semigroup.json"), &gamma.to_json())?;
        let pt = write_file(&opts.out, &format!("{base}_polytope.json"), &body.to_json())?;
        let equal = polytope_equal(&body, &predicted);
        all_equal &= equal;
        println!("{}: body {}", gamma.kind, show_vertices(&body));
        println!("{}: equals predicted simplex: {}", gamma.kind, if equal { "yes" } else { "no" });
        if opts.verbose {
            println!("wrote {} and {}", sg.display(), pt.display());
        }
    }
    Ok(if all_equal { 0 } else { FAILED })
}

fn inside(simplex: &RationalPolytope, gamma: &OkounkovSemigroup) -> bool {
    gamma.graded_points().iter().all(|gp| {
        let level = Rat::from_integer(gp.level.into());
        let p: Vec<Rat> = gp.value.iter().map(|&v| Rat::from_integer(v.into()) / &level).collect();
        simplex.contains_point(&p)
    })
}

fn certify(opts: &Opts) -> Outcome {
    let case = guarded_case(opts)?;
    let simplex = theorem_simplex(case.n, case.c, case.d)?;
    println!("case {} (n={}, c={}, d={}), M = {}", case.name, case.n, case.c, case.d, opts.max_level);
    let mut all = true;
    let mut level1_sets: Vec<BTreeSet<ValuationVector>> = Vec::new();
    for gamma in enumerate(&case, opts)? {
        let level1 = gamma.level(1).cloned().unwrap_or_default();
        let bounded = inside(&simplex, &gamma);
        let certified = bounded && vertex_criterion(&simplex, &level1);
        all &= certified;
        if certified {
            println!("{}: CERTIFIED finitely generated (vertex criterion)", gamma.kind);
        } else if !bounded {
            println!("{}: NOT CERTIFIED (values leave the predicted simplex)", gamma.kind);
        } else {
            println!("{}: NOT CERTIFIED (a simplex vertex is missing from the level-1 values)", gamma.kind);
        }
        match generation_degree(&gamma, opts.max_level) {
            Some(k) => println!("{}: empirical generation degree k = {k} (levels <= {})", gamma.kind, opts.max_level),
            None => println!("{}: empirical generation degree not found up to {}", gamma.kind, opts.max_level),
        }
        level1_sets.push(level1);
    }
    if level1_sets.len() == 2 {
        let same = level1_sets[0] == level1_sets[1];
        println!("level-1 value sets identical across kinds: {}", if same { "yes" } else { "no" });
    }
    for v in level1_sets.first().into_iter().flatten() {
        if opts.verbose {
            println!("level-1 value {v}");
        }
    }
    Ok(if all { 0 } else { FAILED })
}

fn verify(opts: &Opts) -> Outcome {
    let case = load_case(opts)?;
    let report = verify_flag(&case);
    println!("flag verification for {}", report.case);
    for c in &report.checks {
        println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("{}", if report.passed() { "all checks pass" } else { "verification FAILED" });
    Ok(if report.passed() { 0 } else { FAILED })
}

fn lemma_ec(opts: &Opts) -> Outcome {
    let curve = EllipticCurveFp::new(opts.p, 1, 1)?;
    let order = curve.order() as i64;
    let p = opts.p as i64;
    // |#E - (p + 1)| <= 2 sqrt(p)
    let hasse = (order - p - 1).pow(2) <= 4 * p;
    println!("curve y^2 = x^3 + x + 1 over F_{}: {} points, Hasse bound {}", opts.p, order, if hasse { "holds" } else { "VIOLATED" });
    let report = lemma_sweep(&curve, opts.d, opts.samples, opts.seed)?;
    let mut wrong = 0;
    for (i, e) in report.entries.iter().enumerate() {
        let divisor: Vec<String> = e.divisor.iter().map(EcPoint::to_string).collect();
        match e.witness {
            Some(w) => {
                if curve.ec_mul(opts.d as i64, &w)? != e.class {
                    wrong += 1;
                }
                println!("#{i}: D = {} ~ {} * {w}", divisor.join(" + "), opts.d);
            }
            None => println!("#{i}: D = {}: no F_p-witness", divisor.join(" + ")),
        }
    }
    println!(
        "d = {}: {} classes sampled, {} with a witness, {} without",
        opts.d,
        report.entries.len(),
        report.solved(),
        report.unsolved()
    );
    if wrong > 0 || !hasse {
        return Err(fail(COMPUTATION, format!("{wrong} witnesses failed the check d P = sigma(D)")));
    }
    Ok(0)
}

fn export_toric(opts: &Opts) -> Outcome {
    let case = guarded_case(opts)?;
    let kind = opts.kind.kinds()[opts.kind.kinds().len() - 1];
    let valuator = case.valuator()?;
    let gamma = semigroup_with(&case, kind, opts.max_level, &valuator)?;
    let body = body_estimate(&gamma)?;
    let rays = normal_fan_rays(&body)?;
    let text: Vec<String> = rays
        .iter()
        .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    let doc = format!("{{\"dim\":{},\"rays\":[{}]}}", body.dim(), text.join(","));
    let path = write_file(&opts.out, &format!("{}_fan.json", stem(&case, opts.max_level)), &doc)?;
    println!("body {}", show_vertices(&body));
    for r in &rays {
        println!("ray ({})", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    }
    if opts.verbose {
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn demo(opts: &Opts) -> Outcome {
    let c = opts.c.unwrap_or(1);
    println!("{:<16} {:>2} {:>2} {:>2} {:>2}  {:<36} {:<36} {:<10} gen", "case", "n", "r", "c", "d", "predicted", "computed", "certified");
    let mut ok = true;
    for name in CASE_NAMES {
        let case = make_case(name, c)?;
        let predicted = theorem_simplex(case.n, case.c, case.d)?;
        let gamma = semigroup_with(&case, SystemKind::Complete, opts.max_level, &case.valuator()?)?;
        let body = body_estimate(&gamma)?;
        let certified = inside(&predicted, &gamma) && vertex_criterion(&predicted, gamma.level(1).expect("level 1"));
        let k = generation_degree(&gamma, opts.max_level).map_or("-".to_string(), |k| k.to_string());
        ok &= certified && polytope_equal(&body, &predicted);
        println!(
            "{:<16} {:>2} {:>2} {:>2} {:>2}  {:<36} {:<36} {:<10} {}",
            name,
            case.n,
            case.r,
            case.c,
            case.d,
            show_vertices(&predicted),
            show_vertices(&body),
            if certified { "yes" } else { "no" },
            k
        );
    }
    Ok(if ok { 0 } else { FAILED })
}
