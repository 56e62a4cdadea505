mod commands;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use alcove::rootdata::{CartanType, Isogeny};
use alcove::rgroup::PointSpec;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Version of the JSON documents written on standard output.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the default Weyl enumeration cap.
pub const CAP_ENV: &str = "ALCOVE_WEYL_CAP";

#[derive(Parser, Debug)]
#[command(name = "alcove", version, about = "Root data, folding, alcove stabilizers and R-groups")]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build (or load) a based root datum and report its invariants.
    Datum {
        #[command(flatten)]
        ty: TypeArgs,
        /// Validate a datum given as JSON instead of building one.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// The alcove stabilizer group of the (folded) datum.
    Omega {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum, default_value_t = Method::Cosets)]
        method: Method,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Fold a twisted type along its diagram automorphism.
    Restrict {
        #[command(flatten)]
        ty: TypeArgs,
    },
    /// Stabilizer of a point of the closed alcove.
    Rgroup {
        #[command(flatten)]
        ty: TypeArgs,
        /// `c0`, comma-separated coordinates like `1/2,0,1/4`, or `face:I`.
        #[arg(long, default_value = "c0")]
        point: String,
    },
    /// Which subgroups of the stabilizer group occur as point stabilizers.
    Classify {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Stabilizer groups for the standard list of types, with the expected column.
    Table1 {
        /// Exit 1 when a computed group differs from the expected column.
        #[arg(long)]
        strict: bool,
    },
    /// Run a verification sweep.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Restrict the sweep to one type.
        #[arg(long = "type", value_name = "TYPE")]
        ty: Option<String>,
        #[arg(long, value_enum, default_value_t = IsogenyArg::Sc)]
        isogeny: IsogenyArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        cap: CapArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct TypeArgs {
    /// Cartan type such as `A3`, `2A5`, `3D4`, `E6`.
    #[arg(long = "type", value_name = "TYPE")]
    ty: Option<String>,
    #[arg(long, value_enum, default_value_t = IsogenyArg::Sc)]
    isogeny: IsogenyArg,
}

#[derive(Args, Debug, Clone)]
struct CapArgs {
    /// Bound on enumerated Weyl group elements.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum IsogenyArg {
    Sc,
    Adjoint,
}

impl From<IsogenyArg> for Isogeny {
    fn from(i: IsogenyArg) -> Self {
        match i {
            IsogenyArg::Sc => Isogeny::SimplyConnected,
            IsogenyArg::Adjoint => Isogeny::Adjoint,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Cosets,
    Barycenter,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Iota,
    Yu,
    Compat,
    Classify,
    All,
}

/// Failure modes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Math(String),
}

impl From<alcove::Error> for Failure {
    fn from(e: alcove::Error) -> Self {
        use alcove::Error as E;
        match e {
            E::InvalidDatum(_) | E::NonTermination(_) => Failure::Math(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// A JSON document plus whether it records a mathematical mismatch.
pub struct Outcome {
    pub json: serde_json::Value,
    pub mismatch: bool,
}

fn parse_type(s: Option<&str>) -> Result<CartanType, Failure> {
    let s = s.ok_or_else(|| Failure::Usage("--type is required".into()))?;
    s.parse().map_err(|e: alcove::Error| Failure::Usage(e.to_string()))
}

fn resolve_cap(arg: Option<usize>) -> Result<usize, Failure> {
    if let Some(c) = arg {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{CAP_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(alcove::weyl::DEFAULT_WEYL_CAP),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Datum { ty, input } => match input {
            Some(_) if ty.ty.is_some() => Err(Failure::Usage("--input and --type are exclusive".into())),
            Some(path) => commands::datum_from_file(path),
            None => commands::datum(&parse_type(ty.ty.as_deref())?, ty.isogeny.into()),
        },
        Command::Omega { ty, method, cap } => commands::omega(
            &parse_type(ty.ty.as_deref())?,
            ty.isogeny.into(),
            *method,
            resolve_cap(cap.cap)?,
        ),
        Command::Restrict { ty } => commands::restrict(&parse_type(ty.ty.as_deref())?, ty.isogeny.into()),
        Command::Rgroup { ty, point } => {
            let spec: PointSpec = point
                .parse()
                .map_err(|e: alcove::Error| Failure::Usage(e.to_string()))?;
            commands::rgroup(&parse_type(ty.ty.as_deref())?, ty.isogeny.into(), &spec)
        }
        Command::Classify { ty, seed } => {
            commands::classify(&parse_type(ty.ty.as_deref())?, ty.isogeny.into(), *seed)
        }
        Command::Table1 { strict } => commands::table1(*strict),
        Command::Verify {
            suite,
            ty,
            isogeny,
            samples,
            seed,
            cap,
        } => {
            let ty = ty.as_deref().map(|s| parse_type(Some(s))).transpose()?;
            verify::run(
                *suite,
                ty.as_ref(),
                (*isogeny).into(),
                *samples,
                *seed,
                resolve_cap(cap.cap)?,
            )
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Datum { .. } => "datum",
        Command::Omega { .. } => "omega",
        Command::Restrict { .. } => "restrict",
        Command::Rgroup { .. } => "rgroup",
        Command::Classify { .. } => "classify",
        Command::Table1 { .. } => "table1",
        Command::Verify { .. } => "verify",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Math(msg)) => {
            eprintln!("mismatch: {msg}");
            return ExitCode::from(1);
        }
    };
    let mut doc = serde_json::Map::new();
    doc.insert("schema_version".into(), SCHEMA_VERSION.into());
    doc.insert("command".into(), command_name(&cli.command).into());
    if let serde_json::Value::Object(m) = outcome.json {
        doc.extend(m);
    }
    let text = serde_json::to_string_pretty(&serde_json::Value::Object(doc)).expect("serializable") + "\n";
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if outcome.mismatch {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
