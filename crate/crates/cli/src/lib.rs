//! Command implementations behind the `extgini` binary.
//!
//! Every command returns a [`CommandResult`]: one JSON payload for standard
//! output, human-readable diagnostics for standard error, and an exit code
//! (0 success, 1 invalid certificate or failed bound, 2 malformed input).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use extgini::equity::{
    case4_scan, case_decomposition_check, check_anonymity, prop2_probe, verify_transfer,
    Prop1Checker, TransferInstance, Variant,
};
use extgini::generate::sparse_power_values;
use extgini::gini::{compare, convergence_trace, welfare_estimate, welfare_exact, LiminfTrace};
use extgini::stream::Stream;
use extgini::{Execution, Rational};
use serde_json::{json, Value};

pub mod csv_out;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;

#[derive(Debug)]
pub struct CommandResult {
    pub exit_code: i32,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

impl CommandResult {
    fn ok(payload: Value) -> Self {
        CommandResult { exit_code: EXIT_OK, payload, diagnostics: vec![] }
    }

    fn malformed(msg: impl Into<String>) -> Self {
        let msg = msg.into();
        CommandResult {
            exit_code: EXIT_MALFORMED,
            payload: json!({ "error": msg }),
            diagnostics: vec![format!("error: {msg}")],
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "extgini", version, about = "Extended Gini index on infinite utility streams")]
pub struct Cli {
    /// Run batch work on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    /// ⟨2, 3, 5, 2, 3, 5, ...⟩
    Motivating235,
    /// ⟨1, 4, 5, 1, 4, 5, ...⟩
    Motivating145,
    /// 1 at generations 10^k, 4 elsewhere.
    Sparse10,
    /// 2 at generations 10^k, 3 elsewhere.
    Sparse10Equal,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact welfare W of a stream.
    Welfare {
        stream: Option<PathBuf>,
        #[arg(long, conflicts_with = "stream")]
        demo: Option<Demo>,
    },
    /// Order two streams by welfare.
    Compare { a: PathBuf, b: PathBuf },
    /// Certify a transfer instance against one principle.
    Verify {
        instance: PathBuf,
        #[arg(long)]
        variant: String,
    },
    /// Check the finite-horizon quadratic bound for N = 1..=N_max.
    Prop1 {
        instance: PathBuf,
        #[arg(long = "n-max")]
        n_max: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Trace W_N and its running liminf.
    Convergence {
        stream: Option<PathBuf>,
        #[arg(long, conflicts_with = "stream")]
        demo: Option<Demo>,
        #[arg(long)]
        h: u64,
        #[arg(long = "n-max")]
        n_max: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exhaustive scan of the five-pair inequality on an integer grid.
    Case4Scan {
        #[arg(long = "value-max")]
        value_max: u32,
        #[arg(long = "eps-max")]
        eps_max: u32,
    },
    /// Vanishing-gap family over levels 1/2 ± 1/(k+1).
    Prop2 {
        #[arg(long = "k-max")]
        k_max: u64,
        #[arg(long, default_value_t = 2)]
        h: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check welfare and prefix invariance under swapping generations i and j.
    Anonymity {
        stream: PathBuf,
        #[arg(long)]
        i: u64,
        #[arg(long)]
        j: u64,
    },
    /// Classify all index pairs up to N·h and check each case.
    Cases {
        instance: PathBuf,
        #[arg(long)]
        n: u64,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CommandResult> {
    let text = fs::read_to_string(path)
        .map_err(|e| CommandResult::malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CommandResult::malformed(format!("cannot parse {}: {e}", path.display())))
}

fn demo_stream(demo: Demo) -> Result<Stream, CommandResult> {
    match demo {
        Demo::Motivating235 => Ok(Stream::periodic_ints(&[2, 3, 5]).expect("literal")),
        Demo::Motivating145 => Ok(Stream::periodic_ints(&[1, 4, 5]).expect("literal")),
        Demo::Sparse10 | Demo::Sparse10Equal => Err(CommandResult::malformed(
            "sparse demos are not eventually periodic; use them with `convergence`",
        )),
    }
}

fn load_stream(path: Option<&PathBuf>, demo: Option<Demo>) -> Result<Stream, CommandResult> {
    match (path, demo) {
        (Some(p), _) => read_json(p),
        (None, Some(d)) => demo_stream(d),
        (None, None) => Err(CommandResult::malformed("give a stream file or --demo")),
    }
}

fn rational_json(r: &Rational) -> Value {
    json!(r.to_string())
}

fn cmd_welfare(s: &Stream) -> CommandResult {
    let w = welfare_exact(s);
    CommandResult::ok(json!({ "W": rational_json(&w), "W_decimal": w.to_decimal(12) }))
}

fn cmd_compare(a: &Stream, b: &Stream) -> CommandResult {
    let order = match compare(a, b) {
        std::cmp::Ordering::Greater => "greater",
        std::cmp::Ordering::Less => "less",
        std::cmp::Ordering::Equal => "equal",
    };
    CommandResult::ok(json!({
        "order": order,
        "W_a": rational_json(&welfare_exact(a)),
        "W_b": rational_json(&welfare_exact(b)),
    }))
}

fn cmd_verify(inst: &TransferInstance, variant: Variant) -> CommandResult {
    let cert = verify_transfer(inst, variant);
    let diagnostics = cert.violations.iter().map(|v| v.to_string()).collect();
    CommandResult {
        exit_code: if cert.valid { EXIT_OK } else { EXIT_INVALID },
        payload: serde_json::to_value(&cert).expect("certificate serializes"),
        diagnostics,
    }
}

fn cmd_prop1(inst: &TransferInstance, n_max: u64, csv: Option<&Path>, exec: Execution) -> CommandResult {
    if n_max == 0 {
        return CommandResult::malformed("--n-max must be at least 1");
    }
    let cert = verify_transfer(inst, Variant::SApd);
    if !cert.valid {
        return CommandResult {
            exit_code: EXIT_INVALID,
            payload: json!({ "error": "instance is not a valid s-apd transfer", "certificate": cert }),
            diagnostics: cert.violations.iter().map(|v| v.to_string()).collect(),
        };
    }
    let rows = Prop1Checker::new(inst).rows(n_max, exec);
    if let Some(path) = csv {
        if let Err(e) = csv_out::write_prop1(path, &rows) {
            return CommandResult::malformed(format!("cannot write {}: {e}", path.display()));
        }
    }
    let failures: Vec<u64> = rows.iter().filter(|r| !r.holds).map(|r| r.big_n).collect();
    let min_slack = rows.iter().map(|r| &r.slack).min().expect("n_max >= 1");
    let first = &rows[0];
    let last = rows.last().expect("n_max >= 1");
    CommandResult {
        exit_code: if failures.is_empty() { EXIT_OK } else { EXIT_INVALID },
        diagnostics: failures.iter().map(|n| format!("bound fails at N={n}")).collect(),
        payload: json!({
            "rows": rows.len(),
            "all_hold": failures.is_empty(),
            "failures": failures,
            "min_slack": rational_json(min_slack),
            "first": first,
            "last": last,
        }),
    }
}

fn trace_payload(trace: &LiminfTrace, mode: &str) -> Value {
    let last = trace.last();
    json!({
        "mode": mode,
        "h": trace.h,
        "N_max": last.big_n,
        "H_N": last.horizon,
        "final_W_N": rational_json(&last.w_n),
        "running_liminf": rational_json(&last.running_liminf),
        "running_liminf_decimal": last.running_liminf.to_decimal(12),
    })
}

fn cmd_convergence(
    stream: Option<&PathBuf>,
    demo: Option<Demo>,
    h: u64,
    n_max: u64,
    csv: Option<&Path>,
    exec: Execution,
) -> CommandResult {
    if h == 0 || n_max == 0 {
        return CommandResult::malformed("--h and --n-max must be at least 1");
    }
    let (trace, mode) = match demo {
        Some(Demo::Sparse10) | Some(Demo::Sparse10Equal) => {
            let (inside, outside) = if demo == Some(Demo::Sparse10) { (1, 4) } else { (2, 3) };
            let values = sparse_power_values(10, Rational::from(inside), Rational::from(outside))
                .expect("base 10 is valid");
            match welfare_estimate(values, h, n_max) {
                Ok(t) => (t, "estimated"),
                Err(e) => return CommandResult::malformed(e.to_string()),
            }
        }
        _ => {
            let s = match load_stream(stream, demo) {
                Ok(s) => s,
                Err(e) => return e,
            };
            (convergence_trace(&s, h, n_max, exec).expect("h, N_max >= 1"), "periodic")
        }
    };
    if let Some(path) = csv {
        if let Err(e) = csv_out::write_trace(path, &trace) {
            return CommandResult::malformed(format!("cannot write {}: {e}", path.display()));
        }
    }
    CommandResult::ok(trace_payload(&trace, mode))
}

fn cmd_case4(value_max: u32, eps_max: u32, exec: Execution) -> CommandResult {
    if value_max < 2 || eps_max < 1 {
        return CommandResult::malformed("need --value-max >= 2 and --eps-max >= 1");
    }
    let report = case4_scan(value_max, eps_max, exec);
    let n_viol = report.violations.len();
    CommandResult {
        exit_code: if n_viol == 0 { EXIT_OK } else { EXIT_INVALID },
        diagnostics: vec![format!(
            "{} configurations, {} violations, {} where gain < 2*eps_j",
            report.configurations, n_viol, report.eps_j_form_violations
        )],
        payload: serde_json::to_value(&report).expect("report serializes"),
    }
}

fn cmd_prop2(k_max: u64, h: usize, csv: Option<&Path>) -> CommandResult {
    if k_max == 0 {
        return CommandResult::malformed("--k-max must be at least 1");
    }
    let rows = match prop2_probe(k_max, h) {
        Ok(r) => r,
        Err(e) => return CommandResult::malformed(e.to_string()),
    };
    if let Some(path) = csv {
        if let Err(e) = csv_out::write_prop2(path, &rows) {
            return CommandResult::malformed(format!("cannot write {}: {e}", path.display()));
        }
    }
    let decreasing = rows.windows(2).all(|w| w[1].gap < w[0].gap);
    let last = rows.last().expect("k_max >= 1");
    CommandResult::ok(json!({
        "k_max": k_max,
        "gaps_strictly_decreasing": decreasing,
        "all_strictly_preferred": rows.iter().all(|r| r.gap.is_positive()),
        "final_gap": rational_json(&last.gap),
        "final_gap_decimal": last.gap.to_decimal(12),
        "rows": rows,
    }))
}

fn cmd_anonymity(s: &Stream, i: u64, j: u64) -> CommandResult {
    match check_anonymity(s, i, j) {
        Ok(rep) => CommandResult {
            exit_code: if rep.holds { EXIT_OK } else { EXIT_INVALID },
            payload: serde_json::to_value(&rep).expect("report serializes"),
            diagnostics: vec![],
        },
        Err(e) => CommandResult::malformed(e.to_string()),
    }
}

fn cmd_cases(inst: &TransferInstance, n: u64, exec: Execution) -> CommandResult {
    match case_decomposition_check(inst, n, exec) {
        Ok(rep) => CommandResult {
            exit_code: if rep.holds { EXIT_OK } else { EXIT_INVALID },
            payload: serde_json::to_value(&rep).expect("report serializes"),
            diagnostics: vec![],
        },
        Err(e) => CommandResult::malformed(e.to_string()),
    }
}

pub fn execute(cli: Cli) -> CommandResult {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let result = (|| -> Result<CommandResult, CommandResult> {
        Ok(match &cli.command {
            Command::Welfare { stream, demo } => cmd_welfare(&load_stream(stream.as_ref(), *demo)?),
            Command::Compare { a, b } => cmd_compare(&read_json(a)?, &read_json(b)?),
            Command::Verify { instance, variant } => {
                let variant: Variant = variant
                    .parse()
                    .map_err(|e: extgini::Error| CommandResult::malformed(e.to_string()))?;
                cmd_verify(&read_json(instance)?, variant)
            }
            Command::Prop1 { instance, n_max, csv } => {
                cmd_prop1(&read_json(instance)?, *n_max, csv.as_deref(), exec)
            }
            Command::Convergence { stream, demo, h, n_max, csv } => {
                cmd_convergence(stream.as_ref(), *demo, *h, *n_max, csv.as_deref(), exec)
            }
            Command::Case4Scan { value_max, eps_max } => cmd_case4(*value_max, *eps_max, exec),
            Command::Prop2 { k_max, h, csv } => cmd_prop2(*k_max, *h, csv.as_deref()),
            Command::Anonymity { stream, i, j } => cmd_anonymity(&read_json(stream)?, *i, *j),
            Command::Cases { instance, n } => cmd_cases(&read_json(instance)?, *n, exec),
        })
    })();
    result.unwrap_or_else(|e| e)
}

/// Parses arguments and runs. Help and version requests come back as
/// `Err(text)` for the caller to print verbatim.
pub fn run<I, T>(args: I) -> Result<CommandResult, String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => Ok(execute(cli)),
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp
            | clap::error::ErrorKind::DisplayVersion
            | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                Err(e.render().to_string())
            }
            _ => Ok(CommandResult::malformed(e.render().to_string().trim().to_string())),
        },
    }
}
