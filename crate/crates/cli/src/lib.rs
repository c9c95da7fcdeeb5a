//! Command-line front end: argument parsing, precision dispatch and output formatting.

mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use torus_wrt::asymptotics::{convergence_sweep, expansion_report, SWEEP_HEADER};
use torus_wrt::indexsets::{
    enumerate_h, enumerate_r, enumerate_s2_and_stilde, labels_to_csv, labels_to_json,
    points_to_csv, points_to_json,
};
use torus_wrt::reps::{invariant_table, invariant_table_csv};
use torus_wrt::scalar::MpFloat;
use torus_wrt::wrt::tau_hat_with_parts;
use torus_wrt::{Error, Real, SurgerySpec, F150, F256};

pub use verify::{run_checks, CheckGroup, CheckOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const SUPPORTED_PRECISIONS: &[u32] = &[53, 100, 150, 256];

#[derive(Parser, Debug)]
#[command(
    name = "torus-wrt",
    version,
    about = "WRT invariants of surgeries on torus knots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact value of the invariant at one level.
    Tau(SpecArgs),
    /// Exact value, both expansion coefficients and the residual at one level.
    Expand(SpecArgs),
    /// Residual table over a range of levels.
    Sweep(SweepArgs),
    /// Run the built-in consistency checks.
    Verify(VerifyArgs),
    /// Export per-label tables.
    Tables(TableArgs),
}

#[derive(Args, Debug)]
pub struct KnotArgs {
    #[arg(short = 'a', allow_negative_numbers = true)]
    pub a: i64,
    #[arg(short = 'b', allow_negative_numbers = true)]
    pub b: i64,
    #[arg(short = 'p', allow_negative_numbers = true)]
    pub p: i64,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the primary output here instead of stdout.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpecArgs {
    #[command(flatten)]
    pub knot: KnotArgs,
    #[arg(short = 'n', allow_negative_numbers = true)]
    pub n: i64,
    /// Working precision in bits (53 is binary64).
    #[arg(long, default_value_t = 53)]
    pub precision: u32,
    /// Threads for the colour sum.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub knot: KnotArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub n_from: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub n_to: i64,
    #[arg(long, default_value_t = 53)]
    pub precision: u32,
    /// Threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Run only these groups.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub only: Vec<CheckGroup>,
    /// Seed for the randomized identity spot checks; without it only fixed points are used.
    #[arg(long)]
    pub check_seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[command(flatten)]
    pub knot: KnotArgs,
    #[arg(long, value_enum, default_value_t = TableKind::Invariants)]
    pub table: TableKind,
    #[arg(long, default_value_t = 53)]
    pub precision: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// Class, Chern-Simons values and amplitudes for every irreducible label.
    Invariants,
    /// Irreducible labels `(h, k, l)`.
    Labels,
    /// Lattice points `(g, m)`.
    Lattice,
    /// Summation set in `(l, m)` coordinates.
    S2,
    /// Summation set in `(g, m)` coordinates.
    Stilde,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Validation(_)
            | Error::Empty(_)
            | Error::Precondition(_)
            | Error::Domain(_)
            | Error::InvalidModulus(_) => EXIT_VALIDATION,
            _ => EXIT_VERIFY,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<Output, Failure>;

/// Primary output of a command plus an optional diagnostic block for stderr.
pub struct Output {
    pub body: String,
    pub diagnostics: Option<String>,
    pub code: i32,
}

impl Output {
    fn ok(body: String) -> Self {
        Output {
            body,
            diagnostics: None,
            code: EXIT_OK,
        }
    }
}

fn header(spec: Option<Value>, bits: Option<u32>) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("spec".into(), spec.unwrap_or(Value::Null));
    m.insert(
        "precision_bits".into(),
        bits.map_or(Value::Null, Value::from),
    );
    m.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
    m
}

fn with_header(spec: Option<Value>, bits: Option<u32>, extra: Value) -> String {
    let mut m = header(spec, bits);
    if let Value::Object(rest) = extra {
        m.extend(rest);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
    s.push('\n');
    s
}

fn validate(knot: &KnotArgs, n: i64) -> Result<SurgerySpec, Failure> {
    Ok(SurgerySpec::new(knot.a, knot.b, knot.p, n)?)
}

fn check_precision(bits: u32) -> Result<(), Failure> {
    if SUPPORTED_PRECISIONS.contains(&bits) {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_VALIDATION,
            format!("precision must be one of {SUPPORTED_PRECISIONS:?}, got {bits}"),
        ))
    }
}

macro_rules! dispatch {
    ($bits:expr, $f:ident ( $($arg:expr),* )) => {
        match $bits {
            53 => $f::<f64>($($arg),*),
            100 => $f::<MpFloat<100>>($($arg),*),
            150 => $f::<F150>($($arg),*),
            256 => $f::<F256>($($arg),*),
            other => unreachable!("unchecked precision {other}"),
        }
    };
}

fn tau_cmd<T: Real>(spec: &SurgerySpec, workers: usize, format: Format) -> CmdResult {
    let v = tau_hat_with_parts::<T>(spec, workers.max(1));
    Ok(Output::ok(match format {
        Format::Json => with_header(
            Some(spec.to_json()),
            Some(T::PRECISION_BITS),
            json!({"tau": v.to_json()}),
        ),
        Format::Csv => format!(
            "n,tau_re,tau_im\n{},{},{}\n",
            spec.n,
            v.value.re.to_decimal(),
            v.value.im.to_decimal()
        ),
    }))
}

fn expand_cmd<T: Real>(spec: &SurgerySpec, format: Format) -> CmdResult {
    let r = expansion_report::<T>(spec)?;
    Ok(Output::ok(match format {
        Format::Json => with_header(
            Some(spec.to_json()),
            Some(T::PRECISION_BITS),
            json!({"report": r.to_json()}),
        ),
        Format::Csv => format!("{SWEEP_HEADER}\n{}\n", r.csv_row()),
    }))
}

fn sweep_cmd<T: Real>(spec: &SurgerySpec, ns: &[i64], workers: usize, format: Format) -> CmdResult {
    let sw = convergence_sweep::<T>(spec, ns, workers)?;
    let summary = sw.summary.to_json();
    let spec_json = json!({"a": spec.a, "b": spec.b, "p": spec.p, "n": Value::Null});
    Ok(match format {
        Format::Json => Output::ok(with_header(
            Some(spec_json),
            Some(T::PRECISION_BITS),
            json!({
                "n_values": ns,
                "rows": sw.rows.iter().map(|r| json!({
                    "n": r.n,
                    "tau": torus_wrt::phase::complex_to_json(&r.tau_exact),
                    "A": torus_wrt::phase::complex_to_json(&r.a),
                    "B": torus_wrt::phase::complex_to_json(&r.b),
                    "residual": r.residual.to_decimal(),
                    "n_times_residual": r.n_times_residual().to_decimal(),
                })).collect::<Vec<_>>(),
                "summary": summary,
            }),
        )),
        Format::Csv => {
            let mut body = format!("{SWEEP_HEADER}\n");
            for r in &sw.rows {
                body.push_str(&r.csv_row());
                body.push('\n');
            }
            Output {
                body,
                diagnostics: Some(serde_json::to_string_pretty(&summary).expect("json")),
                code: EXIT_OK,
            }
        }
    })
}

fn tables_cmd<T: Real>(spec: &SurgerySpec, kind: TableKind, format: Format) -> CmdResult {
    let spec_json = json!({"a": spec.a, "b": spec.b, "p": spec.p, "n": Value::Null});
    let bits = Some(T::PRECISION_BITS);
    let (csv, json_rows) = match kind {
        TableKind::Invariants => {
            let rows = invariant_table::<T>(spec)?;
            let js = rows
                .iter()
                .map(|r| {
                    json!({
                        "label": [r.label.h, r.label.k, r.label.l],
                        "class": r.class.name(),
                        "cs_plus": r.cs_plus.to_string(),
                        "cs_minus": r.cs_minus.to_string(),
                        "t_plus": r.t_plus.to_decimal(),
                        "t_minus": r.t_minus.to_decimal(),
                    })
                })
                .collect::<Vec<_>>();
            (invariant_table_csv(&rows), Value::from(js))
        }
        TableKind::Labels => {
            let h = enumerate_h(spec);
            (labels_to_csv(&h), labels_to_json(&h))
        }
        TableKind::Lattice => {
            let r = enumerate_r(spec);
            (points_to_csv(&r, ("g", "m")), points_to_json(&r))
        }
        TableKind::S2 | TableKind::Stilde => {
            let (s2, st) = enumerate_s2_and_stilde(spec);
            if kind == TableKind::S2 {
                (points_to_csv(&s2, ("l", "m")), points_to_json(&s2))
            } else {
                (points_to_csv(&st, ("g", "m")), points_to_json(&st))
            }
        }
    };
    Ok(Output::ok(match format {
        Format::Csv => csv,
        Format::Json => with_header(Some(spec_json), bits, json!({"rows": json_rows})),
    }))
}

fn odd_range(from: i64, to: i64) -> Vec<i64> {
    (from..=to).filter(|n| n.rem_euclid(2) == 1).collect()
}

fn verify_cmd(args: &VerifyArgs) -> CmdResult {
    let outcomes = run_checks(&args.only, args.check_seed);
    let failed: Vec<_> = outcomes
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.clone())
        .collect();
    let code = if failed.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    };
    let body = match args.format {
        Format::Json => with_header(
            None,
            None,
            json!({
                "checks": outcomes.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                "failed": failed,
                "check_seed": args.check_seed,
            }),
        ),
        Format::Csv => {
            let mut s = String::from("group,name,pass,context,detail\n");
            for c in &outcomes {
                s.push_str(&format!(
                    "{},{},{},\"{}\",\"{}\"\n",
                    c.group.name(),
                    c.name,
                    c.pass,
                    c.context,
                    c.detail
                ));
            }
            s
        }
    };
    let listing = outcomes
        .iter()
        .map(|c| {
            format!(
                "{} {} ({})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.context
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output {
        body,
        diagnostics: Some(listing),
        code,
    })
}

/// Runs a parsed command, returning its output and exit code.
pub fn execute(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Tau(a) => {
            check_precision(a.precision)?;
            let spec = validate(&a.knot, a.n)?;
            dispatch!(a.precision, tau_cmd(&spec, a.workers, a.out.format))
        }
        Command::Expand(a) => {
            check_precision(a.precision)?;
            let spec = validate(&a.knot, a.n)?;
            dispatch!(a.precision, expand_cmd(&spec, a.out.format))
        }
        Command::Sweep(a) => {
            check_precision(a.precision)?;
            let ns = odd_range(a.n_from, a.n_to);
            if ns.is_empty() {
                return Err(Failure::new(
                    EXIT_VALIDATION,
                    format!("no odd levels in [{}, {}]", a.n_from, a.n_to),
                ));
            }
            let spec = validate(&a.knot, ns[0])?;
            let workers = a
                .workers
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |x| x.get()));
            dispatch!(a.precision, sweep_cmd(&spec, &ns, workers, a.out.format))
        }
        Command::Verify(a) => verify_cmd(a),
        Command::Tables(a) => {
            check_precision(a.precision)?;
            let spec = validate(&a.knot, 3)?;
            dispatch!(a.precision, tables_cmd(&spec, a.table, a.format))
        }
    }
}

fn output_path(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::Tau(a) | Command::Expand(a) => a.out.output.as_ref(),
        Command::Sweep(a) => a.out.output.as_ref(),
        Command::Tables(a) => a.output.as_ref(),
        Command::Verify(_) => None,
    }
}

/// Full run: execute, write outputs, and return the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let out = match execute(cli) {
        Ok(o) => o,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            return f.code;
        }
    };
    if let Some(d) = &out.diagnostics {
        let _ = writeln!(stderr, "{d}");
    }
    let written = match output_path(cli) {
        Some(path) => std::fs::write(path, &out.body)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout
            .write_all(out.body.as_bytes())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    match written {
        Ok(()) => out.code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_IO
        }
    }
}
