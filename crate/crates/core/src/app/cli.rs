//! `dswe` command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::app::output::{sweep_csv, write_file, write_run};
use crate::app::runner::run;
use crate::app::scenario::{builtin, builtin_default_eps, parse_scenario, Scenario, BUILTINS};
use crate::diagnostics::{convergence_order, HydroField, NormKind};
use crate::error::Error;

#[derive(Debug, Parser)]
#[command(name = "dswe", version, about = "Shallow water flows through a dispersive NLS regularization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario file or a builtin and write snapshot CSVs.
    Run {
        /// Path to a TOML scenario, or a builtin name.
        scenario: String,
        #[arg(long)]
        eps: Option<f64>,
        /// Output directory (defaults to the scenario's).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stop at this time instead of the scenario's last output time.
        #[arg(long)]
        tfinal: Option<f64>,
    },
    /// Run a builtin at several eps and report errors and the fitted order.
    Sweep {
        builtin: String,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        eps_list: Vec<f64>,
        #[arg(long, default_value = "l1", value_parser = parse_norm)]
        norm: NormKind,
        #[arg(long, default_value = "height", value_parser = parse_field)]
        field: HydroField,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tfinal: Option<f64>,
    },
    /// List the builtin scenarios.
    List,
}

fn parse_norm(s: &str) -> Result<NormKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "l1" => Ok(NormKind::L1),
        "l2" => Ok(NormKind::L2),
        "linf" | "inf" | "max" => Ok(NormKind::Linf),
        _ => Err(format!("unknown norm `{s}` (expected L1, L2 or Linf)")),
    }
}

fn parse_field(s: &str) -> Result<HydroField, String> {
    match s.to_ascii_lowercase().as_str() {
        "height" | "h" => Ok(HydroField::Height),
        "discharge" | "q" => Ok(HydroField::Discharge),
        "surface" | "eta" => Ok(HydroField::Surface),
        _ => Err(format!("unknown field `{s}` (expected height, discharge or surface)")),
    }
}

/// Failure of a subcommand together with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::UndefinedWavenumber | Error::UnsupportedDegree(_) | Error::InvalidMesh(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

fn load(source: &str, eps: Option<f64>, tfinal: Option<f64>) -> Result<Scenario, Failure> {
    let path = Path::new(source);
    let mut s = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::from(Error::io(path, e)))?;
        parse_scenario(&text)?
    } else if let Some(s) = builtin(source, builtin_default_eps(source)) {
        s
    } else {
        return Err(usage(format!(
            "`{source}` is neither a scenario file nor a builtin ({})",
            BUILTINS.join(", ")
        )));
    };
    if let Some(eps) = eps {
        s = s.with_eps(eps);
    }
    if let Some(t) = tfinal {
        s = s.with_t_final(t);
    }
    s.validate()?;
    Ok(s)
}

fn run_command(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure {
        code: 1,
        message: e.to_string(),
    };
    match cmd {
        Command::List => {
            for name in BUILTINS {
                writeln!(out, "{name}").map_err(io)?;
            }
        }
        Command::Run {
            scenario,
            eps,
            out: dir,
            tfinal,
        } => {
            let s = load(&scenario, eps, tfinal)?;
            let dir = dir.unwrap_or_else(|| PathBuf::from(&s.output.directory));
            writeln!(out, "# settings\n{}", s.describe()).map_err(io)?;
            let result = run(&s)?;
            for path in write_run(&result, &dir)? {
                writeln!(out, "wrote {}", path.display()).map_err(io)?;
            }
            writeln!(out, "steps = {}", result.steps).map_err(io)?;
        }
        Command::Sweep {
            builtin: name,
            eps_list,
            norm,
            field,
            out: dir,
            tfinal,
        } => {
            if builtin(&name, 0.1).is_none() {
                return Err(usage(format!("unknown builtin `{name}` ({})", BUILTINS.join(", "))));
            }
            let scenarios = eps_list
                .iter()
                .map(|&eps| load(&name, Some(eps), tfinal))
                .collect::<Result<Vec<_>, _>>()?;
            let results: Vec<_> = std::thread::scope(|scope| {
                let handles: Vec<_> = scenarios
                    .iter()
                    .map(|s| {
                        scope.spawn(move || {
                            let r = run(s)?;
                            r.error(r.last(), field, norm, None).map(|e| e.value)
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("sweep worker panicked"))
                    .collect()
            });
            let mut rows = Vec::new();
            for (eps, r) in eps_list.iter().zip(results) {
                rows.push((*eps, r?));
            }
            write!(out, "{}", sweep_csv(&rows)).map_err(io)?;
            if rows.len() >= 2 {
                let order = convergence_order(&rows)?;
                writeln!(out, "# order = {order:.4}").map_err(io)?;
            }
            if let Some(dir) = dir {
                let path = dir.join(format!("sweep_{name}.csv"));
                write_file(&path, &sweep_csv(&rows))?;
                writeln!(out, "wrote {}", path.display()).map_err(io)?;
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and executes the command.
/// Returns the process exit code.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code().clamp(0, 255) as u8;
        }
    };
    match run_command(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn cli_main() -> ExitCode {
    let code = run_cli(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["dswe"];
        full.extend_from_slice(args);
        let code = run_cli(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn list_prints_builtins() {
        let (code, out, _) = call(&["list"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().collect::<Vec<_>>(), BUILTINS.to_vec());
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["run", "no_such_thing"]).0, 2);
        assert_eq!(call(&["run", "dam_break_dry", "--eps", "-1"]).0, 2);
        assert_eq!(call(&["sweep", "dam_break_dry"]).0, 2);
        assert_eq!(call(&["sweep", "dam_break_dry", "--eps-list", "0.1", "--norm", "L7"]).0, 2);
    }

    #[test]
    fn norm_and_field_names() {
        assert_eq!(parse_norm("L1"), Ok(NormKind::L1));
        assert_eq!(parse_norm("linf"), Ok(NormKind::Linf));
        assert_eq!(parse_field("eta"), Ok(HydroField::Surface));
        assert!(parse_field("velocity").is_err());
    }
}
