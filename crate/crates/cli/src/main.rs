use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dcec::certificates::{self, Check};
use dcec::curves::{
    f2_char0_cached, f2_fixed_ab, f2_mod_p, model_for_j, supersingular_models, CurveError, DcecInstance, EllipticModel,
};
use dcec::enumeration::{
    bielliptic_involutions, classify_type, enumerate, is_isomorphic, quotient_datum, EnumerateOptions, EnumerationError,
    EnumerationReport,
};
use dcec::ff::{is_prime, FieldElement, FieldTower};
use dcec::mpoly::{MPoly, MonomialOrder};
use dcec::Ring;

/// Largest characteristic the enumeration supports.
const MAX_P: u32 = 23;
/// Characteristics that need `--long-run`.
const LONG_RUN_FROM: u32 = 17;

#[derive(Parser)]
#[command(name = "dcec", version, about = "Superspecial genus-4 double covers of elliptic curves")]
struct Cli {
    /// Cache directory for f2 and enumeration checkpoints.
    #[arg(long, global = true, env = "DCEC_CACHE", default_value = ".dcec-cache")]
    cache_dir: PathBuf,
    /// Progress messages on standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate superspecial curves up to isomorphism and count them by type.
    Enumerate(EnumerateArgs),
    /// Run a suite of identity checks.
    Verify(VerifyArgs),
    /// Compute f2 and write it as JSON.
    F2(F2Args),
    /// List the supersingular models.
    Supersingular {
        #[arg(long)]
        p: u32,
    },
    /// Decide whether two curves are isomorphic.
    Isom {
        #[arg(long)]
        file1: PathBuf,
        #[arg(long)]
        file2: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = translation_order)]
        translation_order: i64,
    },
    /// Bielliptic involutions, elliptic quotients and type of a curve.
    Classify {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Report file; defaults to `reports/p<p>.json` in the cache directory.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Allow the long computations for p = 17, 19, 23.
    #[arg(long)]
    long_run: bool,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Order of the torsion translations used to compare covers (3 or 6).
    #[arg(long, default_value_t = 3, value_parser = translation_order)]
    translation_order: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Maintheorem1,
    Lemma32,
    Prop33,
    Radical,
    Hassewitt,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    p: Option<u32>,
}

#[derive(Args)]
struct F2Args {
    /// Over the integers.
    #[arg(long, group = "mode")]
    char0: bool,
    /// Reduced modulo `--p`.
    #[arg(long, group = "mode")]
    modp: bool,
    /// With `A`, `B` fixed by `--j` or by `--a` and `--b`.
    #[arg(long, group = "mode")]
    fixed: bool,
    #[arg(long)]
    p: Option<u32>,
    /// j-invariant as an integer mod p, or coefficients `c0_c1` in F_{p^2}.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    j: Option<String>,
    #[arg(long, requires = "b", allow_hyphen_values = true)]
    a: Option<i64>,
    #[arg(long, requires = "a", allow_hyphen_values = true)]
    b: Option<i64>,
    /// Output file; defaults to a file in the cache directory.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn translation_order(s: &str) -> Result<i64, String> {
    match s {
        "3" => Ok(3),
        "6" => Ok(6),
        _ => Err("translation order must be 3 or 6".into()),
    }
}

/// A failed command: exit code and message.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure { code: 2, message: m.into() }
    }
    fn verification(m: impl Into<String>) -> Self {
        Failure { code: 1, message: m.into() }
    }
    fn internal(m: impl Into<String>) -> Self {
        Failure { code: 3, message: m.into() }
    }
}

impl From<EnumerationError> for Failure {
    fn from(e: EnumerationError) -> Self {
        match e {
            EnumerationError::Curve(c) => c.into(),
            other => Failure::internal(other.to_string()),
        }
    }
}

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::BadPrime(_) => Failure::usage("p must be prime ≥ 5"),
            CurveError::Cache(m) => Failure::internal(format!("cache: {m}")),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<dcec::ff::FfError> for Failure {
    fn from(e: dcec::ff::FfError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(&cli, a),
        Command::Verify(a) => cmd_verify(&cli, a),
        Command::F2(a) => cmd_f2(&cli, a),
        Command::Supersingular { p } => cmd_supersingular(*p),
        Command::Isom { file1, file2, translation_order } => cmd_isom(file1, file2, *translation_order),
        Command::Classify { file } => cmd_classify(file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn progress(cli: &Cli, msg: &str) {
    if cli.verbose {
        eprintln!("{msg}");
    }
}

fn check_prime(p: u32) -> Outcome {
    if p < 5 || !is_prime(p as u64) {
        return Err(Failure::usage("p must be prime ≥ 5"));
    }
    Ok(())
}

fn check_supported(p: u32, long_run: bool) -> Outcome {
    check_prime(p)?;
    if p > MAX_P {
        return Err(Failure::usage(format!("p = {p} is outside the supported range p ≤ {MAX_P}")));
    }
    if p >= LONG_RUN_FROM && !long_run {
        return Err(Failure::usage(format!("p = {p} takes hours; pass --long-run")));
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

/// `j` as printed in reports: its value mod `p` (with `1728` kept as is)
/// when it lies in F_p, otherwise its coefficients joined by `_`.
fn j_label(p: u32, j: &FieldElement) -> String {
    match j.0.as_slice() {
        [v] if *v == 1728 % p => "1728".to_string(),
        [v] => v.to_string(),
        cs => cs.iter().map(u32::to_string).collect::<Vec<_>>().join("_"),
    }
}

fn parse_j(p: u32, s: &str) -> Result<FieldElement, Failure> {
    let bad = || Failure::usage(format!("cannot read j = {s}"));
    let cs: Vec<u32> = s
        .split('_')
        .map(|c| c.trim().parse::<i64>().map(|v| v.rem_euclid(p as i64) as u32))
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    match cs.len() {
        1 => Ok(FieldElement(cs)),
        2 => {
            let tower = FieldTower::shared(p)?;
            let e = FieldElement(cs);
            Ok(tower.descend(&e, tower.minimal_level(&e)).unwrap())
        }
        _ => Err(bad()),
    }
}

fn counts_row(r: &EnumerationReport) -> String {
    let c = &r.counts;
    format!("{} | {} | {} | {} | {}", r.p, c.all, c.udcec, c.howe, c.other)
}

fn render_table(r: &EnumerationReport) -> String {
    let mut out = String::from("p | all | UDCEC | Howe | others\n");
    out.push_str(&counts_row(r));
    out.push('\n');
    if !r.classes.is_empty() {
        out.push_str("\nid | j | type | degree | involutions | q\n");
        for c in &r.classes {
            let a: Vec<String> = c.a.iter().map(|e| e.to_string()).collect();
            out.push_str(&format!(
                "{} | {} | {} | {} | {} | {}\n",
                c.id,
                j_label(r.p, &c.j),
                c.kind,
                c.field_degree,
                c.involutions,
                a.join(" ")
            ));
        }
    }
    out
}

fn render_csv(r: &EnumerationReport) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(vec![]);
    let js: Vec<String> = r.supersingular.iter().map(|m| j_label(r.p, &m.j)).collect();
    let c = &r.counts;
    let row = [r.p.to_string(), js.join(","), c.all.to_string(), c.udcec.to_string(), c.howe.to_string(), c.other.to_string()];
    let res = w
        .write_record(["p", "ssing_j_invariants", "all", "udcec", "howe", "others"])
        .and_then(|_| w.write_record(&row));
    res.map_err(|e| Failure::internal(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| Failure::internal(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cmd_enumerate(cli: &Cli, args: &EnumerateArgs) -> Outcome {
    check_supported(args.p, args.long_run)?;
    let workers = args.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let opts = EnumerateOptions {
        translation_order: args.translation_order,
        checkpoint_dir: Some(cli.cache_dir.join("checkpoints")),
        workers,
    };
    progress(cli, &format!("enumerating p = {} with {workers} worker(s)", args.p));
    let report = enumerate(args.p, &opts)?;
    let path = args.output.clone().unwrap_or_else(|| cli.cache_dir.join("reports").join(format!("p{}.json", args.p)));
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write_file(&path, &(json.clone() + "\n"))?;
    progress(cli, &format!("report written to {}", path.display()));
    match args.format {
        Format::Json => println!("{json}"),
        Format::Csv => print!("{}", render_csv(&report)?),
        Format::Table => print!("{}", render_table(&report)),
    }
    Ok(())
}

fn finish(checks: Vec<Check>) -> Outcome {
    for c in &checks {
        println!("{c}");
    }
    if let Some(bad) = checks.iter().find(|c| !c.pass) {
        println!("FAIL: {}: {}", bad.name, bad.detail);
        return Err(Failure::verification(format!("{} failed", bad.name)));
    }
    let details: Vec<&str> = checks.iter().map(|c| c.detail.as_str()).collect();
    println!("PASS: {}", details.join(", "));
    Ok(())
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Outcome {
    let checks = match args.suite {
        Suite::Maintheorem1 => {
            progress(cli, "computing f2 in characteristic 0");
            let f2 = f2_char0_cached(&cli.cache_dir)?;
            certificates::main_theorem(&f2)
        }
        Suite::Lemma32 => certificates::lemma_f3(),
        Suite::Prop33 => certificates::prop_a1_a3(&f2_char0_cached(&cli.cache_dir)?),
        Suite::Radical => {
            let p = args.p.ok_or_else(|| Failure::usage("radical needs --p"))?;
            check_supported(p, true)?;
            certificates::radical(p)?
        }
        Suite::Hassewitt => {
            let ps = match args.p {
                Some(p) => {
                    check_prime(p)?;
                    vec![p]
                }
                None => certificates::SMALL_PRIMES.to_vec(),
            };
            let mut out = vec![];
            for p in ps {
                out.extend(certificates::hasse_witt_corner(p)?);
            }
            out
        }
    };
    finish(checks)
}

fn describe<R: Ring>(f: &MPoly<R>) -> String {
    let lowest = f.lowest_term(MonomialOrder::Grevlex).map(|(m, c)| f.ring().term(m, c).to_string());
    format!("{} terms\nlowest term: {}", f.nterms(), lowest.unwrap_or_else(|| "none".into()))
}

fn cmd_f2(cli: &Cli, args: &F2Args) -> Outcome {
    let need_p = || -> Result<u32, Failure> {
        let p = args.p.ok_or_else(|| Failure::usage("this mode needs --p"))?;
        check_prime(p)?;
        Ok(p)
    };
    if !(args.char0 || args.modp || args.fixed) {
        return Err(Failure::usage("choose one of --char0, --modp, --fixed"));
    }
    let (default_path, json, summary) = if args.char0 {
        progress(cli, "computing f2 in characteristic 0");
        let f = f2_char0_cached(&cli.cache_dir)?;
        (cli.cache_dir.join("f2_char0.json"), f.to_json(), describe(&f))
    } else if args.modp {
        let p = need_p()?;
        let f = f2_mod_p(p);
        (cli.cache_dir.join(format!("f2_p{p}.json")), f.to_json(), describe(&f))
    } else {
        let p = need_p()?;
        let model = match (&args.j, args.a, args.b) {
            (Some(j), _, _) => model_for_j(p, &parse_j(p, j)?)?,
            (None, Some(a), Some(b)) => EllipticModel::from_ints(p, a, b)
                .map_err(|_| Failure::usage(format!("(A, B) = ({a}, {b}) is singular mod {p}")))?,
            _ => return Err(Failure::usage("--fixed needs --j or both --a and --b")),
        };
        let field = model.tower().level(model.level());
        let f = f2_fixed_ab(&field, &model.a, &model.b);
        let label = j_label(p, &model.j_invariant_descended());
        (cli.cache_dir.join(format!("f2_p{p}_j{label}.json")), f.to_json(), describe(&f))
    };
    let text = serde_json::to_string(&json).expect("polynomial serializes") + "\n";
    write_file(&default_path, &text)?;
    if let Some(out) = &args.output {
        write_file(out, &text)?;
    }
    println!("{summary}");
    println!("written to {}", args.output.as_ref().unwrap_or(&default_path).display());
    Ok(())
}

fn cmd_supersingular(p: u32) -> Outcome {
    check_prime(p)?;
    println!("j | A | B");
    for m in supersingular_models(p)? {
        println!("{} | {} | {}", j_label(p, &m.j_invariant_descended()), m.a, m.b);
    }
    Ok(())
}

fn read_curve(path: &Path) -> Result<DcecInstance, Failure> {
    let text = fs::read_to_string(path)?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let c = DcecInstance::from_json(&v).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if !c.is_nonsingular() {
        return Err(Failure::usage(format!("{}: the curve is singular", path.display())));
    }
    Ok(c)
}

fn cmd_isom(file1: &Path, file2: &Path, n: i64) -> Outcome {
    let (c1, c2) = (read_curve(file1)?, read_curve(file2)?);
    if c1.p() != c2.p() {
        return Err(Failure::usage("the curves have different characteristics"));
    }
    let iso = is_isomorphic(&c1, &c2, n)?;
    println!("{}", if iso { "isomorphic" } else { "not isomorphic" });
    Ok(())
}

fn cmd_classify(file: &Path) -> Outcome {
    let c = read_curve(file)?;
    let invs = bielliptic_involutions(&c)?;
    let quotients = invs
        .iter()
        .filter(|i| !i.is_defining())
        .map(|i| quotient_datum(&c, i))
        .collect::<Result<Vec<_>, _>>()?;
    let p = c.p();
    println!("superspecial: {}", c.is_superspecial());
    println!("bielliptic involutions: {}", invs.len());
    for q in &quotients {
        println!("quotient j: {}", j_label(p, &q.curve.model.j_invariant_descended()));
    }
    println!("type: {}", classify_type(&c, &quotients));
    Ok(())
}
