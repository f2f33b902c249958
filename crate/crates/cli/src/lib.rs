pub mod args;
pub mod charspec;
pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Format};
use config::{parse_config, ConfigEntry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

// global flags whose value may follow as a separate token
const GLOBAL_VALUED: [&str; 5] = ["--format", "--output", "--config", "--workers", "--rel-tol"];

fn error_json(kind: &str, message: &str) -> String {
    let v = serde_json::json!({ "error": { "kind": kind, "message": message } });
    format!("{v}\n")
}

fn usage(err: &mut dyn Write, message: &str) -> i32 {
    let _ = writeln!(err, "error: {message}");
    EXIT_USAGE
}

fn flag_name(token: &str) -> Option<&str> {
    let rest = token.strip_prefix("--")?;
    Some(rest.split_once('=').map_or(rest, |(k, _)| k))
}

/// First positional token, i.e. the subcommand name, skipping global flags.
fn subcommand_name(argv: &[String]) -> Option<&str> {
    let mut i = 1;
    while i < argv.len() {
        let t = argv[i].as_str();
        if t.starts_with('-') {
            if GLOBAL_VALUED.contains(&t) {
                i += 1;
            }
        } else {
            return Some(t);
        }
        i += 1;
    }
    None
}

fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter().skip(1);
    while let Some(t) = it.next() {
        if t == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = t.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Appends the config entries the command line does not already set.
fn merge_config(argv: &mut Vec<String>, entries: &[ConfigEntry]) -> Result<(), String> {
    let root = Cli::command();
    let given: Vec<String> = argv.iter().filter_map(|t| flag_name(t)).map(str::to_string).collect();
    let sub_name = subcommand_name(argv).map(str::to_string);
    let sub = sub_name.as_deref().and_then(|n| root.find_subcommand(n));
    let lookup = |cmd: &clap::Command, key: &str| cmd.get_arguments().find(|a| a.get_long() == Some(key)).cloned();
    for e in entries {
        if e.key == "config" {
            return Err(format!("config line {}: config files cannot nest", e.line));
        }
        let arg = lookup(&root, &e.key).or_else(|| sub.and_then(|s| lookup(s, &e.key)));
        let Some(arg) = arg else {
            if root.get_subcommands().any(|s| lookup(s, &e.key).is_some()) {
                continue;
            }
            return Err(format!("config line {}: unknown key '{}'", e.line, e.key));
        };
        if given.iter().any(|g| *g == e.key) {
            continue;
        }
        let user_has = |k: &str| given.iter().any(|g| g == k);
        if e.key == "chi" && (user_has("q") || user_has("chi-index")) {
            continue;
        }
        if (e.key == "q" || e.key == "chi-index") && user_has("chi") {
            continue;
        }
        if arg.get_action().takes_values() {
            argv.push(format!("--{}={}", e.key, e.value));
        } else {
            match e.value.as_str() {
                "true" => argv.push(format!("--{}", e.key)),
                "false" => {}
                other => return Err(format!("config line {}: {} expects true or false, got '{other}'", e.line, e.key)),
            }
        }
    }
    Ok(())
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run(argv: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut args = Vec::with_capacity(argv.len());
    for a in argv {
        match a.into_string() {
            Ok(s) => args.push(s),
            Err(a) => return usage(err, &format!("argument is not valid UTF-8: {a:?}")),
        }
    }
    if args.is_empty() {
        args.push("poincare".into());
    }

    if let Some(path) = config_path(&args) {
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => return usage(err, &format!("cannot read config {path}: {e}")),
        };
        let entries = match parse_config(&text) {
            Ok(v) => v,
            Err(e) => return usage(err, &format!("config {path}: {e}")),
        };
        if let Err(m) = merge_config(&mut args, &entries) {
            return usage(err, &m);
        }
    }

    let cli = match Cli::command().try_get_matches_from(&args).and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };

    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers.unwrap_or(1) as usize).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = err.write_all(error_json("Resource", &e.to_string()).as_bytes());
            return EXIT_COMPUTATION;
        }
    };
    let outcome = match pool.install(|| commands::execute(&cli.command, cli.rel_tol)) {
        Ok(o) => o,
        Err(e) => {
            let _ = err.write_all(error_json(e.kind(), &e.to_string()).as_bytes());
            return EXIT_COMPUTATION;
        }
    };

    let text = match cli.format {
        Format::Csv => outcome.report.to_csv(),
        Format::Json => outcome.report.to_json(),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => out.write_all(text.as_bytes()).and_then(|_| out.flush()),
    };
    if let Err(e) = written {
        let _ = err.write_all(error_json("Io", &e.to_string()).as_bytes());
        return EXIT_COMPUTATION;
    }
    if let Some(msg) = outcome.failure {
        let _ = err.write_all(error_json("VerificationFailed", &msg).as_bytes());
        return EXIT_COMPUTATION;
    }
    EXIT_OK
}
