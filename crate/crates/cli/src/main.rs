use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use formaffine::affinity::{
    self, check_orthogonality, construct_h_p, extract_ext_coeffs, extract_ext_int_canonical, extract_int_coeffs,
    is_ext_int_one_affine, is_ext_one_affine, is_int_one_affine, solve_d_kernel, Verdict, Witness,
};
use formaffine::verify::{self, SuiteParams};
use formaffine::{Error, FunctionSpec, LineMode};

#[derive(Parser)]
#[command(name = "formaffine", version, about = "Affinity classification of polynomial functions on exterior forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ext,
    Int,
    ExtInt,
}

impl From<Mode> for LineMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Ext => LineMode::Ext,
            Mode::Int => LineMode::Int,
            Mode::ExtInt => LineMode::ExtInt,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership in an affine class.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// Extract canonical coefficients of an affine function.
    Extract {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long)]
        json: bool,
    },
    /// Show a worked example.
    Demo {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Coefficient families annihilating F_p on rank-one directions.
    Kernel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long)]
        json: bool,
    },
}

/// A failed command: message for stderr and exit status.
struct Failure {
    message: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::Validation(_)
            | Error::InvalidArgument(_)
            | Error::SignatureMismatch(_)
            | Error::GradeMismatch(_)
            | Error::DimensionMismatch(..) => 2,
            _ => 1,
        };
        Failure { message: e.to_string(), code }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { message: message.into(), code: 2 }
}

fn read_function(path: &PathBuf) -> Result<FunctionSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(FunctionSpec::from_json(&text)?)
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn describe_witness(w: &Witness) -> String {
    let base: Vec<String> = w.base.iter().map(|b| b.to_string()).collect();
    format!(
        "witness: base = ({}), a = {}, b = {}, coefficient of t^{} = {}",
        base.join(", "),
        w.a,
        w.b,
        w.t_power,
        w.value
    )
}

fn classify(f: &FunctionSpec, mode: Mode) -> Result<Verdict, Failure> {
    Ok(match mode {
        Mode::Ext => is_ext_one_affine(f)?,
        Mode::Int => is_int_one_affine(f)?,
        Mode::ExtInt => is_ext_int_one_affine(f)?,
    })
}

fn mode_name(mode: Mode) -> &'static str {
    LineMode::from(mode).name()
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify { input, mode, json } => {
            let f = read_function(&input)?;
            let verdict = classify(&f, mode)?;
            if json {
                print_json(&verdict);
            } else if verdict.is_member {
                println!("{} one affine: yes", mode_name(mode));
                if let Some(c) = &verdict.canonical {
                    match c {
                        affinity::Canonical::Ext(rep) => println!("{rep}"),
                        affinity::Canonical::ExtInt(rep) => println!("{rep}"),
                    }
                }
            } else {
                println!("{} one affine: no", mode_name(mode));
                if let Some(w) = &verdict.witness {
                    println!("{}", describe_witness(w));
                }
            }
            Ok(0)
        }
        Command::Extract { input, mode, json } => {
            let f = read_function(&input)?;
            let (value, text) = match mode {
                Mode::Ext => {
                    let rep = extract_ext_coeffs(&f, true)?;
                    (serde_json::to_value(&rep), rep.to_string())
                }
                Mode::Int => {
                    let rep = extract_int_coeffs(&f, true)?;
                    (serde_json::to_value(&rep), rep.to_string())
                }
                Mode::ExtInt => {
                    let rep = extract_ext_int_canonical(&f, true)?;
                    (serde_json::to_value(&rep), rep.to_string())
                }
            };
            if json {
                print_json(&value.expect("serializable"));
            } else {
                println!("{text}");
            }
            Ok(0)
        }
        Command::Verify { suite, n, k, p, seed, cases, json } => {
            let params = SuiteParams { n, k, p, seed, cases };
            let report = verify::run_suite(&suite, &params)?;
            if json {
                print_json(&report);
            } else {
                println!(
                    "suite {}: {} cases, {} failures",
                    report.suite,
                    report.cases_run,
                    report.failures.len()
                );
                for f in &report.failures {
                    println!("  FAIL {}: expected {}, got {}", f.case, f.expected, f.got);
                }
            }
            eprintln!("wall time: {} ms", report.wall_time.as_millis());
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Demo { name, n, k, json } => demo(&name, n, k, json),
        Command::Kernel { n, k, p, json } => kernel(n, k, p, json),
    }
}

fn demo(name: &str, n: usize, k: usize, json: bool) -> Result<u8, Failure> {
    match name {
        "thm53-counterexample" => {
            if n != 2 * k || k % 2 == 1 {
                return Err(usage(format!("the counterexample needs n = 2k with k even, got n={n}, k={k}")));
            }
            let f = verify::middle_grade_square(k);
            let ext = is_ext_one_affine(&f)?.is_member;
            let int = is_int_one_affine(&f)?.is_member;
            let degree = f.degree();
            if json {
                print_json(&json!({
                    "function": serde_json::from_str::<Value>(&f.to_json()).expect("valid json"),
                    "ext_one_affine": ext,
                    "int_one_affine": int,
                    "degree": degree,
                    "affine": degree <= 1,
                }));
            } else {
                println!("f(w) = <e^{}; w^w> = {}", formaffine::MultiIndex::full(n), f.body());
                println!("ext. one affine: {}", yes_no(ext));
                println!("int. one affine: {}", yes_no(int));
                println!("degree {degree}: {}", if degree <= 1 { "affine" } else { "not affine" });
            }
            Ok(0)
        }
        "remark36" => {
            let f = verify::remark_function();
            let verdict = is_ext_int_one_affine(&f)?;
            let convexity = affinity::falsify_convexity(&f, LineMode::ExtInt)?;
            if json {
                print_json(&json!({
                    "function": serde_json::from_str::<Value>(&f.to_json()).expect("valid json"),
                    "verdict": verdict,
                    "non_convexity": convexity,
                }));
            } else {
                println!("f(xi, eta) = {}", f.body());
                println!("ext-int. one affine: {}", yes_no(verdict.is_member));
                if let Some(w) = &verdict.witness {
                    println!("{}", describe_witness(w));
                }
                if let Some(w) = &convexity {
                    println!("g''(0) = {} along a = {}, b = {}", w.second_derivative, w.a, w.b);
                }
            }
            Ok(0)
        }
        other => Err(usage(format!("unknown demo {other:?}; expected thm53-counterexample or remark36"))),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn kernel(n: usize, k: usize, p: usize, json: bool) -> Result<u8, Failure> {
    let basis = solve_d_kernel(n, k, p)?;
    let mut entries = Vec::new();
    let mut all_passed = true;
    for d in &basis {
        let h = construct_h_p(d)?;
        let identity = affinity::h_p_identity_holds(d, &h)?;
        let relations = if p == 1 { Some(check_orthogonality(d)?) } else { None };
        all_passed &= identity && relations.as_ref().is_none_or(|r| r.passed());
        entries.push((d, h, identity, relations));
    }
    if json {
        let basis: Vec<Value> = entries
            .iter()
            .map(|(d, h, identity, relations)| {
                json!({
                    "members": d.members().map(|(a, f)| json!({"index": a, "form": f})).collect::<Vec<_>>(),
                    "h": h,
                    "identity_holds": identity,
                    "relations": relations.as_ref().map(|r| r.relations.iter().map(|c| json!({
                        "name": c.name,
                        "cases": c.cases,
                        "first_failure": c.first_failure,
                    })).collect::<Vec<_>>()),
                })
            })
            .collect();
        print_json(&json!({"n": n, "k": k, "p": p, "dimension": entries.len(), "basis": basis}));
    } else {
        println!("kernel dimension at (n, k, p) = ({n}, {k}, {p}): {}", entries.len());
        for (b, (d, h, identity, relations)) in entries.iter().enumerate() {
            println!("basis element {b}:");
            for (a, f) in d.members() {
                println!("  D^{a} = {f}");
            }
            println!("  H = {h} (identity {})", if *identity { "holds" } else { "FAILS" });
            for rel in relations.iter().flat_map(|r| &r.relations) {
                match &rel.first_failure {
                    None => println!("  {}: ok ({} cases)", rel.name, rel.cases),
                    Some(f) => println!("  {}: FAILS at {f}", rel.name),
                }
            }
        }
    }
    Ok(if all_passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
