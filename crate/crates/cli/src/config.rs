//! `--config` files: `key = value` lines whose keys are long flag names.
//! Entries are spliced in front of the command-line flags, and since every
//! flag overrides earlier occurrences of itself the command line wins.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Command;

fn find_config(args: &[OsString]) -> Result<Option<PathBuf>, String> {
    let mut found = None;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let Some(s) = a.to_str() else { continue };
        if s == "--" {
            break;
        }
        if s == "--config" {
            let v = it.next().ok_or("`--config` needs a path")?;
            found = Some(PathBuf::from(v));
        } else if let Some(v) = s.strip_prefix("--config=") {
            found = Some(PathBuf::from(v));
        }
    }
    Ok(found)
}

/// Flags from a config file for subcommand `sub`. Unknown keys, keys the
/// subcommand does not accept, and malformed lines are errors naming the key.
pub fn config_flags(sub: &Command, path: &Path) -> Result<Vec<OsString>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut flags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
        if line.is_empty() {
            continue;
        }
        let at = format!("{}:{}", path.display(), i + 1);
        let (key, value) = line.split_once('=').ok_or_else(|| format!("{at}: expected `key = value`"))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() {
            return Err(format!("{at}: missing key"));
        }
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .filter(|_| key != "config" && key != "help" && key != "version")
            .ok_or_else(|| format!("{at}: unknown key `{key}` for `{}`", sub.get_name()))?;
        if arg.get_action().takes_values() {
            flags.push(OsString::from(format!("--{key}={value}")));
        } else {
            match value {
                "true" => flags.push(OsString::from(format!("--{key}"))),
                "false" => {}
                _ => return Err(format!("{at}: key `{key}` takes true or false, got `{value}`")),
            }
        }
    }
    Ok(flags)
}

/// Returns `argv` with config-file flags inserted right after the subcommand.
pub fn expand(cmd: &Command, argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(name) = argv.get(1).and_then(|s| s.to_str()) else {
        return Ok(argv);
    };
    let Some(sub) = cmd.find_subcommand(name) else {
        return Ok(argv);
    };
    let Some(path) = find_config(&argv[2..])? else {
        return Ok(argv);
    };
    let extra = config_flags(sub, &path)?;
    let mut out = argv[..2].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[2..]);
    Ok(out)
}
