//! `lagfib`: classify integral affine lattices on surfaces and build, verify
//! and enumerate Lagrangian fibrations over them.
//!
//! Results are JSON on standard output (or `--out FILE`). Failures print a
//! JSON error object and exit with 1 (unparseable input), 2 (well-formed input
//! violating a precondition) or 3 (`verify` found a failing check).

mod svg;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lagfib::cohomology::{h2, twisting_moduli};
use lagfib::fibration::{build_fibration, build_t3_example, enumerate_fibrations, verify};
use lagfib::lattice_classifier::{is_isomorphic, normalize};
use lagfib::{Error, FibrationSpec, IntAffine2, LatticeNF, Rat};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "lagfib", version, about = "Exact classification of Lagrangian fibrations over surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the result to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a list of integral affine generators to its normal form.
    Normalize {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Print only the normal form instead of the full certificate.
        #[arg(long)]
        lattice_only: bool,
    },
    /// Decide whether two normal forms (a JSON pair) are isomorphic.
    Isomorphic {
        #[command(flatten)]
        input: Input,
    },
    /// Obstruction group and twisting moduli of a lattice.
    Cohomology {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// One fibration per obstruction class (untwisted) over a lattice.
    Enumerate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lattice: LatticeArgs,
    },
    /// Gluing maps and symplectic form of one fibration.
    Build {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m0: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n0: i64,
        /// Twisting coefficient, as `p/q`.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        lambda: String,
        /// Build the six-dimensional almost Lagrangian example over T³ instead.
        #[arg(long)]
        t3: bool,
    },
    /// Check a fibration record (or a JSON list of them) exactly.
    Verify {
        #[command(flatten)]
        input: Input,
    },
    /// Draw the fundamental domain of a lattice as SVG.
    RenderDomain {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 480)]
        width: u32,
        #[arg(long, default_value_t = 480)]
        height: u32,
    },
}

/// JSON input: inline, from a file, or from standard input.
#[derive(Args)]
struct Input {
    /// Inline JSON input.
    #[arg(long, value_name = "JSON")]
    json: Option<String>,

    /// Read JSON input from FILE.
    #[arg(long, value_name = "FILE", conflicts_with = "json")]
    input: Option<PathBuf>,
}

/// Flag shortcuts for a normal form; used instead of JSON input when
/// `--series` is given.
#[derive(Args)]
struct LatticeArgs {
    /// One of R2, C2uv, C2ny, M2, T2uvwz, T2nyx, K2.
    #[arg(long)]
    series: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
    #[arg(long)]
    delta: Option<i64>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
}

enum Failure {
    Parse(String),
    Precondition(Error),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) | Failure::Io(_) => 1,
            Failure::Precondition(_) => 2,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            Failure::Parse(m) => ("parse".to_string(), m.clone()),
            Failure::Io(m) => ("io".to_string(), m.clone()),
            Failure::Precondition(e) => (error_kind(e).to_string(), e.to_string()),
        };
        json!({ "error": { "code": self.code(), "kind": kind, "message": message } })
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Parse(e.to_string()),
            e => Failure::Precondition(e),
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::NotRational(_) => "not_rational",
        Error::SingularInput => "singular_input",
        Error::EmptyOrAllZero => "empty_or_all_zero",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::ShapeMismatch(_) => "shape_mismatch",
        Error::NotPrimitive(..) => "not_primitive",
        Error::NoUnitEigenvalue => "no_unit_eigenvalue",
        Error::UnsupportedPresentation(_) => "unsupported_presentation",
        Error::NotFreeAction(_) => "not_free_action",
        Error::ConstraintViolation { .. } => "constraint_violation",
        Error::NonCompactBase => "non_compact_base",
        Error::TrivialAmbient => "trivial_ambient",
        Error::UnrealizableForm(_) => "unrealizable_form",
        Error::InvalidParameters(_) => "invalid_parameters",
        Error::SingularLattice => "singular_lattice",
        Error::UnrecognizedShape(_) => "unrecognized_shape",
        Error::Overflow(_) => "overflow",
    }
}

/// Syntax errors are parse failures; well-formed JSON of the wrong shape or
/// with inexact numbers violates a precondition.
fn from_json<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| {
        let msg = e.to_string();
        if let Some(rest) = msg.strip_prefix("input is not an exact rational: ") {
            Failure::Precondition(Error::NotRational(rest.to_string()))
        } else {
            Failure::Precondition(Error::InvalidParameters(format!("{what}: {msg}")))
        }
    })
}

impl Input {
    fn read(&self) -> Result<Value, Failure> {
        let text = match (&self.json, &self.input) {
            (Some(s), _) => s.clone(),
            (None, Some(path)) => {
                std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
            }
            (None, None) => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
                s
            }
        };
        serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("input is not valid JSON: {e}")))
    }
}

fn rat(flag: &str, value: &Option<String>) -> Result<Rat, Failure> {
    let s = value.as_deref().ok_or_else(|| Failure::Parse(format!("--{flag} is required for this series")))?;
    Ok(s.parse::<Rat>()?)
}

fn int(flag: &str, value: Option<i64>) -> Result<i64, Failure> {
    value.ok_or_else(|| Failure::Parse(format!("--{flag} is required for this series")))
}

impl LatticeArgs {
    fn parse_flags(&self, series: &str) -> Result<LatticeNF, Failure> {
        let nf = match series.to_ascii_lowercase().as_str() {
            "r2" => LatticeNF::R2,
            "c2uv" => LatticeNF::C2uv { u: rat("u", &self.u)?, v: rat("v", &self.v)? },
            "c2ny" => LatticeNF::C2ny { n: int("n", self.n)?, y: rat("y", &self.y)? },
            "m2" => LatticeNF::M2 { delta: int("delta", self.delta)?, x: rat("x", &self.x)? },
            "t2uvwz" => LatticeNF::T2uvwz {
                u: rat("u", &self.u)?,
                v: rat("v", &self.v)?,
                w: rat("w", &self.w)?,
                z: rat("z", &self.z)?,
            },
            "t2nyx" => LatticeNF::T2nyx { n: int("n", self.n)?, y: rat("y", &self.y)?, x: rat("x", &self.x)? },
            "k2" => LatticeNF::K2 {
                m: int("m", self.m)?,
                delta: int("delta", self.delta)?,
                x: rat("x", &self.x)?,
                y: rat("y", &self.y)?,
            },
            other => {
                return Err(Failure::Parse(format!(
                    "unknown series {other:?}; expected R2, C2uv, C2ny, M2, T2uvwz, T2nyx or K2"
                )))
            }
        };
        Ok(nf)
    }

    /// The lattice from flags, or else from JSON input: a normal form, a
    /// normalization certificate, or a list of generators to normalize.
    fn lattice(&self, input: &Input) -> Result<LatticeNF, Failure> {
        let nf = match &self.series {
            Some(series) => self.parse_flags(series)?,
            None => lattice_from_json(input.read()?)?,
        };
        nf.validate()?;
        Ok(nf)
    }
}

fn lattice_from_json(v: Value) -> Result<LatticeNF, Failure> {
    match v {
        Value::Array(_) => {
            let gens: Vec<IntAffine2> = from_json(v, "generators")?;
            Ok(normalize(&gens)?.lattice)
        }
        Value::Object(mut o) if o.contains_key("lattice") => from_json(o.remove("lattice").unwrap(), "lattice"),
        v => from_json(v, "lattice"),
    }
}

enum Output {
    Json(Value),
    Text(String),
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("results serialize")
}

fn run(command: &Command) -> Result<(Output, bool), Failure> {
    let ok = |v: Value| Ok((Output::Json(v), true));
    match command {
        Command::Normalize { input, lattice, lattice_only } => {
            let gens: Vec<IntAffine2> = match &lattice.series {
                Some(_) => lattice.lattice(input)?.generators(),
                None => from_json(input.read()?, "generators")?,
            };
            let cert = normalize(&gens)?;
            if *lattice_only {
                ok(to_value(&cert.lattice))
            } else {
                ok(to_value(&cert))
            }
        }
        Command::Isomorphic { input } => {
            let v = input.read()?;
            let pair: Vec<Value> = match v {
                Value::Array(items) if items.len() == 2 => items,
                _ => return Err(Failure::Precondition(Error::InvalidParameters("expected a JSON array of two lattices".into()))),
            };
            let mut nfs = Vec::with_capacity(2);
            for item in pair {
                let nf = lattice_from_json(item)?;
                nf.validate()?;
                nfs.push(nf);
            }
            ok(to_value(&is_isomorphic(&nfs[0], &nfs[1])))
        }
        Command::Cohomology { input, lattice } => {
            let nf = lattice.lattice(input)?;
            let mut out = to_value(&h2(&nf));
            let obj = out.as_object_mut().expect("obstruction group is an object");
            obj.insert("lattice".into(), to_value(&nf));
            obj.insert("twisting".into(), to_value(&twisting_moduli(&nf)));
            ok(out)
        }
        Command::Enumerate { input, lattice } => {
            let nf = lattice.lattice(input)?;
            ok(to_value(&enumerate_fibrations(&nf)?.specs))
        }
        Command::Build { input, lattice, m0, n0, lambda, t3 } => {
            if *t3 {
                return ok(to_value(&build_t3_example()));
            }
            let nf = lattice.lattice(input)?;
            let lambda: Rat = lambda.parse()?;
            ok(to_value(&build_fibration(&nf, *m0, *n0, &lambda)?))
        }
        Command::Verify { input } => {
            let v = input.read()?;
            if v.is_array() {
                let specs: Vec<FibrationSpec> = from_json(v, "fibration records")?;
                let reports: Vec<_> = specs.iter().map(verify).collect();
                let pass = reports.iter().all(|r| r.all_pass());
                Ok((Output::Json(to_value(&reports)), pass))
            } else {
                let spec: FibrationSpec = from_json(v, "fibration record")?;
                let report = verify(&spec);
                Ok((Output::Json(to_value(&report)), report.all_pass()))
            }
        }
        Command::RenderDomain { input, lattice, width, height } => {
            if *width == 0 || *height == 0 {
                return Err(Failure::Precondition(Error::InvalidParameters("width and height must be positive".into())));
            }
            let nf = lattice.lattice(input)?;
            Ok((Output::Text(svg::render(&nf, *width, *height)), true))
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn render(output: &Output, pretty: bool) -> String {
    match output {
        Output::Json(v) if pretty => serde_json::to_string_pretty(v).expect("values serialize") + "\n",
        Output::Json(v) => serde_json::to_string(v).expect("values serialize") + "\n",
        Output::Text(s) => s.clone(),
    }
}

fn fail(f: Failure) -> ExitCode {
    let v = f.to_json();
    eprintln!("lagfib: {}", v["error"]["message"].as_str().unwrap_or_default());
    println!("{}", serde_json::to_string(&v).expect("error serializes"));
    ExitCode::from(f.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return fail(Failure::Parse(first.to_string()));
        }
    };
    match run(&cli.command).and_then(|(output, pass)| emit(&cli.out, &render(&output, cli.pretty)).map(|_| pass)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(f) => fail(f),
    }
}
