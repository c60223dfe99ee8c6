//! `--scenario` files: `key = value` lines spliced in ahead of the command
//! line flags, so that flags given explicitly win.

use std::collections::HashSet;
use std::fs;

use clap::CommandFactory;

use crate::args::Cli;
use crate::CliError;

/// Parameterizations that exclude each other, per axis suffix.
const RAW: [&str; 3] = ["omega", "omega-prime", "d"];
const DIMENSIONLESS: [&str; 2] = ["ratio", "D"];
const SUFFIXES: [&str; 3] = ["", "-x", "-y"];

struct Entry {
    key: String,
    value: String,
}

fn parse(path: &str, text: &str) -> Result<Vec<Entry>, CliError> {
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::invalid(format!(
                "--scenario {path}:{}: expected `key = value`, got `{line}`",
                lineno + 1
            )));
        };
        entries.push(Entry {
            key: key.trim().replace('_', "-"),
            value: value.trim().to_string(),
        });
    }
    Ok(entries)
}

fn flag_name(token: &str) -> Option<&str> {
    let rest = token.strip_prefix("--")?;
    Some(rest.split_once('=').map_or(rest, |(k, _)| k))
}

fn scenario_path(args: &[String]) -> Option<String> {
    args.iter().enumerate().find_map(|(i, a)| {
        if a == "--scenario" {
            args.get(i + 1).cloned()
        } else {
            a.strip_prefix("--scenario=").map(str::to_string)
        }
    })
}

/// Known long flags of a subcommand.
fn known_flags(subcommand: &str) -> Option<HashSet<String>> {
    let cmd = Cli::command();
    let sub = cmd.find_subcommand(subcommand)?;
    Some(sub.get_arguments().filter_map(|a| a.get_long().map(str::to_string)).collect())
}

/// Rewrites `argv` with the scenario file's entries inserted after the
/// subcommand.
pub fn expand(argv: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(path) = scenario_path(&argv) else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::invalid(format!("--scenario {path}: {e}")))?;
    let mut entries = parse(&path, &text)?;

    let given = argv.get(1).filter(|a| !a.starts_with('-')).cloned();
    let kind = entries.iter().position(|e| e.key == "kind").map(|i| entries.remove(i).value);
    let subcommand = match (given.as_deref(), kind.as_deref()) {
        (Some(g), Some(k)) if g != k => {
            return Err(CliError::invalid(format!(
                "--scenario {path}: kind `{k}` does not match subcommand `{g}`"
            )))
        }
        (Some(g), _) => g.to_string(),
        (None, Some(k)) => k.to_string(),
        (None, None) => {
            return Err(CliError::invalid(format!(
                "--scenario {path}: no subcommand given and no `kind` key"
            )))
        }
    };
    let Some(known) = known_flags(&subcommand) else {
        return Err(CliError::invalid(format!("unknown subcommand `{subcommand}`")));
    };
    for e in &entries {
        if e.key == "scenario" || !known.contains(&e.key) {
            return Err(CliError::invalid(format!(
                "--scenario {path}: unknown key `{}` for {subcommand}",
                e.key
            )));
        }
    }

    let rest = &argv[if given.is_some() { 2 } else { 1 }..];
    let explicit: HashSet<&str> = rest.iter().filter_map(|a| flag_name(a)).collect();
    // an explicit parameterization replaces the file's other one on that axis
    entries.retain(|e| {
        SUFFIXES.iter().all(|s| {
            let in_group = |group: &[&str]| group.iter().any(|g| format!("{g}{s}") == e.key);
            let chosen = |group: &[&str]| group.iter().any(|g| explicit.contains(format!("{g}{s}").as_str()));
            !(in_group(&RAW) && chosen(&DIMENSIONLESS) || in_group(&DIMENSIONLESS) && chosen(&RAW))
        })
    });

    let mut out = vec![argv[0].clone(), subcommand];
    out.extend(entries.iter().map(|e| format!("--{}={}", e.key, e.value)));
    out.extend(rest.iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    fn with_file(body: &str, f: impl FnOnce(&str)) {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(body.as_bytes()).unwrap();
        f(file.path().to_str().unwrap());
    }

    #[test]
    fn no_scenario_is_untouched() {
        let a = argv("selfoc spectrum1d --ratio 3");
        assert_eq!(expand(a.clone()).unwrap(), a);
    }

    #[test]
    fn file_entries_precede_flags() {
        with_file("kind = spectrum1d\nratio = 3\nD = 9 # comment\n", |p| {
            let out = expand(argv(&format!("selfoc --scenario {p} --D 16"))).unwrap();
            assert_eq!(out[1], "spectrum1d");
            assert_eq!(&out[2..4], ["--ratio=3", "--D=9"]);
            assert_eq!(out.last().unwrap(), "16");
        });
    }

    #[test]
    fn explicit_raw_flags_drop_file_ratio() {
        with_file("ratio = 3\nD = 9\nn = 2\n", |p| {
            let out = expand(argv(&format!("selfoc spectrum1d --scenario {p} --omega-prime 2"))).unwrap();
            assert!(out.iter().all(|a| !a.starts_with("--ratio") && !a.starts_with("--D")));
            assert!(out.contains(&"--n=2".to_string()));
        });
    }

    #[test]
    fn rejects_unknown_keys_and_mismatched_kind() {
        with_file("omega_z = 1\n", |p| {
            let e = expand(argv(&format!("selfoc spectrum2d --scenario {p}"))).unwrap_err();
            assert!(e.message.contains("omega-z"), "{}", e.message);
        });
        with_file("kind = matrix\n", |p| {
            assert!(expand(argv(&format!("selfoc spectrum1d --scenario {p}"))).is_err());
        });
        with_file("just text\n", |p| {
            assert!(expand(argv(&format!("selfoc spectrum1d --scenario {p}"))).is_err());
        });
    }
}
