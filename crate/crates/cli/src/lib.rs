//! Command-line front end for bracketlab: an expression language for
//! polynomials, forms, multivectors and vector-valued forms, workspace files,
//! and one subcommand per operation.
//!
//! [`execute`] runs a full invocation and returns what would be printed, so
//! the binary is a thin wrapper and tests need no subprocess.

pub mod commands;
pub mod expr;
pub mod workspace;

use std::io::BufRead;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value as Json};

pub use commands::{Cli, Command, Report};
pub use expr::{parse, ParseError, Scope, Value};
pub use workspace::Workspace;

/// Version of the `--json` output layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Global cap on coefficient degrees when BRACKETLAB_MAX_DEGREE is unset.
pub const DEFAULT_MAX_DEGREE: u32 = 8;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("argument {src:?}: {err}")]
    Parse { src: String, err: ParseError },
    #[error(transparent)]
    Workspace(#[from] workspace::WorkspaceError),
    #[error(transparent)]
    Math(#[from] bracketlab_core::Error),
    #[error("{0}")]
    Usage(String),
}

/// Printed output and exit code of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    /// 0 on success, 2 when the answer is "no solution" or "no
    /// representative", 1 on usage and input errors.
    pub code: i32,
}

impl Outcome {
    fn failure(json: bool, command: Option<&str>, msg: String) -> Self {
        let stdout = if json {
            format!(
                "{}\n",
                json!({"schema_version": SCHEMA_VERSION, "command": command, "error": msg, "exit_code": 1})
            )
        } else {
            String::new()
        };
        Outcome {
            stdout,
            stderr: format!("error: {msg}\n"),
            code: 1,
        }
    }
}

/// Run `bracketlab` with `args` (the first element is the program name).
pub fn execute<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    return Outcome {
                        stdout: e.to_string(),
                        stderr: String::new(),
                        code: 0,
                    }
                }
                _ => 1,
            };
            return Outcome {
                stdout: String::new(),
                stderr: e.to_string(),
                code,
            };
        }
    };
    if let Command::Batch { file } = &cli.command {
        return batch(file);
    }
    match commands::run(&cli) {
        Ok(rep) => Outcome {
            stdout: rep.render(cli.global.json, cli.global.verbose),
            stderr: String::new(),
            code: rep.code,
        },
        Err(e) => Outcome::failure(cli.global.json, Some(cli.command.name()), e.to_string()),
    }
}

/// One JSON array of arguments per line (blank lines and lines starting
/// with `#` are skipped); one JSON object per line out. The exit code is the
/// largest of the individual codes.
fn batch(path: &std::path::Path) -> Outcome {
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) => {
            return Outcome::failure(
                false,
                Some("batch"),
                format!("cannot open {}: {e}", path.display()),
            )
        }
    };
    let mut stdout = String::new();
    let mut code = 0;
    for (no, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                return Outcome::failure(false, Some("batch"), format!("line {}: {e}", no + 1))
            }
        };
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let out = match serde_json::from_str::<Vec<String>>(line) {
            Ok(args) if args.first().is_some_and(|a| a == "batch") => Outcome::failure(
                true,
                Some("batch"),
                format!("line {}: batch files cannot nest", no + 1),
            ),
            Ok(args) => {
                let mut full = vec!["bracketlab".to_string()];
                full.extend(args);
                full.push("--json".into());
                execute(full)
            }
            Err(e) => Outcome::failure(
                true,
                None,
                format!("line {}: expected a JSON array of strings: {e}", no + 1),
            ),
        };
        let obj = if out.stdout.trim().is_empty() {
            // clap errors print nothing on stdout
            json!({"schema_version": SCHEMA_VERSION, "command": Json::Null, "error": out.stderr.trim(), "exit_code": out.code})
        } else {
            serde_json::from_str::<Json>(out.stdout.trim()).expect("commands print one JSON object")
        };
        stdout.push_str(&obj.to_string());
        stdout.push('\n');
        code = code.max(out.code);
    }
    Outcome {
        stdout,
        stderr: String::new(),
        code,
    }
}
