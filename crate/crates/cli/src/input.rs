//! Resolution of command arguments to JSON values.

use std::path::{Path, PathBuf};

use cartankit::io::parse_json;
use cartankit::{Error, Result};
use serde_json::Value;

/// Environment variable overriding the bundled fixture directory.
pub const FIXTURES_ENV: &str = "CARTANKIT_FIXTURES";

pub fn fixture_dir() -> PathBuf {
    match std::env::var_os(FIXTURES_ENV) {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"),
    }
}

/// Reads `name.json` from the fixture directory.
pub fn fixture(name: &str) -> Result<Value> {
    let path = fixture_dir().join(format!("{name}.json"));
    read_file(&path)
}

fn read_file(path: &Path) -> Result<Value> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// An argument is inline JSON, a file path, or the name of a bundled fixture.
pub fn load(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return parse_json(arg).map_err(|e| Error::Parse(format!("inline JSON: {e}")));
    }
    let path = Path::new(arg);
    if path.is_file() {
        return read_file(path);
    }
    let name = arg.strip_suffix(".json").unwrap_or(arg);
    let candidate = fixture_dir().join(format!("{name}.json"));
    if candidate.is_file() {
        return read_file(&candidate);
    }
    Err(Error::Parse(format!(
        "\"{arg}\" is neither JSON, a file, nor a fixture name"
    )))
}
