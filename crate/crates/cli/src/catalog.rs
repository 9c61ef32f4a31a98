//! Metrics bundled with the binary.

use std::path::Path;

use crate::gmet::{parse_metric, GmetError, MetricSpec};

pub const CATALOG: [(&str, &str); 7] = [
    ("minkowski_cartesian", include_str!("../catalog/minkowski_cartesian.gmet")),
    ("minkowski_spherical", include_str!("../catalog/minkowski_spherical.gmet")),
    ("schwarzschild", include_str!("../catalog/schwarzschild.gmet")),
    ("kasner", include_str!("../catalog/kasner.gmet")),
    ("pp_wave", include_str!("../catalog/pp_wave.gmet")),
    ("de_sitter", include_str!("../catalog/de_sitter.gmet")),
    ("flrw_radiation", include_str!("../catalog/flrw_radiation.gmet")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    CATALOG.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// A bundled metric by name.
pub fn load(name: &str) -> Option<Result<MetricSpec, GmetError>> {
    source(name).map(parse_metric)
}

pub fn parse_metric_file(path: &Path) -> Result<MetricSpec, GmetError> {
    let text = std::fs::read_to_string(path).map_err(|e| GmetError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_metric(&text)
}

/// A catalog name, or otherwise a path to a `.gmet` file.
pub fn resolve(name_or_path: &str) -> Result<MetricSpec, GmetError> {
    match load(name_or_path) {
        Some(spec) => spec,
        None => parse_metric_file(Path::new(name_or_path)),
    }
}
