//! Fixture configurations compiled into the binary.

use std::path::Path;

use crate::config::{load_config, parse_config, ConfigError, SpecConfig};

pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
}

pub const FIXTURES: [Fixture; 3] = [
    Fixture {
        name: "flat2d",
        summary: "flat connection on [-2,2]², all coefficients zero",
        source: include_str!("../fixtures/flat2d.toml"),
    },
    Fixture {
        name: "sphere_lc",
        summary: "Levi-Civita connection of the unit sphere in (θ, φ)",
        source: include_str!("../fixtures/sphere_lc.toml"),
    },
    Fixture {
        name: "relative_weitzenbock",
        summary: "relative connection of the frame {∂1, x1 ∂2}: flat, with torsion",
        source: include_str!("../fixtures/relative_weitzenbock.toml"),
    },
];

/// Looks a fixture up by name, with or without the `.toml` suffix.
pub fn find(name: &str) -> Option<&'static Fixture> {
    let stem = name.strip_suffix(".toml").unwrap_or(name);
    FIXTURES.iter().find(|f| f.name == stem)
}

/// Loads `arg` from disk, or from the catalog when no such file exists.
pub fn open(arg: &str) -> Result<SpecConfig, ConfigError> {
    let path = Path::new(arg);
    match find(arg) {
        Some(f) if !path.exists() => parse_config(f.source, &format!("{}.toml", f.name)),
        _ => load_config(path),
    }
}
