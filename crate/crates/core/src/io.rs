//! CSV and JSON serialisation of the domain types.
//!
//! CSV files carry one row per site (or lag, or grid point) with floats
//! printed at 17 significant digits, enough for a bit-exact `f64` round
//! trip; metadata travels in leading `# key=value` comment lines. JSON
//! mirrors go through serde and round-trip exactly as well.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::combs::{LatticeConfig2D, PointSet2D, SequenceWindow};
use crate::correlation::{Autocorrelation1D, Autocorrelation2D};
use crate::entropy::EntropyReport;
use crate::error::{Error, Result};
use crate::spectra::{Spectrum1D, Spectrum2D};

/// Format a float with 17 significant digits (bit-exact round trip).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serialise any report type to pretty JSON.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("domain types serialise")
}

/// Parse any report type from JSON.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))
}

fn parse_f64(field: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(format!("bad float '{field}'")))
}

fn parse_i64(field: &str) -> Result<i64> {
    field
        .trim()
        .parse::<i64>()
        .map_err(|_| Error::parse(format!("bad integer '{field}'")))
}

fn comment_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.strip_prefix("# ")
        .and_then(|rest| rest.strip_prefix(key))
        .and_then(|rest| rest.strip_prefix('='))
}

pub fn window_to_csv(w: &SequenceWindow) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# label={}", w.label());
    out.push_str("index,weight\n");
    for (n, v) in w.sites() {
        let _ = writeln!(out, "{n},{}", fmt_f64(v));
    }
    out
}

pub fn window_from_csv(text: &str) -> Result<SequenceWindow> {
    let mut label = String::new();
    let mut indices = Vec::new();
    let mut weights = Vec::new();
    for line in text.lines() {
        if let Some(v) = comment_value(line, "label") {
            label = v.to_string();
            continue;
        }
        if line.starts_with('#') || line.starts_with("index") || line.trim().is_empty() {
            continue;
        }
        let (idx, weight) = line
            .split_once(',')
            .ok_or_else(|| Error::parse(format!("bad row '{line}'")))?;
        indices.push(parse_i64(idx)?);
        weights.push(parse_f64(weight)?);
    }
    if indices.is_empty() {
        return Err(Error::parse("no data rows"));
    }
    for pair in indices.windows(2) {
        if pair[1] != pair[0] + 1 {
            return Err(Error::parse("window indices must be consecutive"));
        }
    }
    SequenceWindow::new(indices[0], weights, label)
}

pub fn lattice_to_csv(c: &LatticeConfig2D) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# label={}", c.label());
    let _ = writeln!(out, "# origin={},{}", c.origin().0, c.origin().1);
    let _ = writeln!(out, "# dims={}x{}", c.width(), c.height());
    out.push_str("x,y,weight\n");
    for row in 0..c.height() {
        for col in 0..c.width() {
            let x = c.origin().0 + col as i64;
            let y = c.origin().1 + row as i64;
            let _ = writeln!(out, "{x},{y},{}", fmt_f64(c.at(col, row)));
        }
    }
    out
}

pub fn lattice_from_csv(text: &str) -> Result<LatticeConfig2D> {
    let mut label = String::new();
    let mut origin = (0i64, 0i64);
    let mut dims = (0usize, 0usize);
    let mut weights = Vec::new();
    for line in text.lines() {
        if let Some(v) = comment_value(line, "label") {
            label = v.to_string();
            continue;
        }
        if let Some(v) = comment_value(line, "origin") {
            let (x, y) = v
                .split_once(',')
                .ok_or_else(|| Error::parse("bad origin"))?;
            origin = (parse_i64(x)?, parse_i64(y)?);
            continue;
        }
        if let Some(v) = comment_value(line, "dims") {
            let (w, h) = v.split_once('x').ok_or_else(|| Error::parse("bad dims"))?;
            dims = (
                w.parse().map_err(|_| Error::parse("bad width"))?,
                h.parse().map_err(|_| Error::parse("bad height"))?,
            );
            continue;
        }
        if line.starts_with('#') || line.starts_with("x,") || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::parse(format!("bad row '{line}'")));
        }
        weights.push(parse_f64(fields[2])?);
    }
    LatticeConfig2D::new(origin, dims.0, dims.1, weights, label)
}

pub fn pointset_to_csv(ps: &PointSet2D) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# radius={}", fmt_f64(ps.window_radius()));
    out.push_str("m,n\n");
    for &(m, n) in ps.points() {
        let _ = writeln!(out, "{m},{n}");
    }
    out
}

pub fn pointset_from_csv(text: &str) -> Result<PointSet2D> {
    let mut radius = 0.0;
    let mut points = Vec::new();
    for line in text.lines() {
        if let Some(v) = comment_value(line, "radius") {
            radius = parse_f64(v)?;
            continue;
        }
        if line.starts_with('#') || line.starts_with("m,") || line.trim().is_empty() {
            continue;
        }
        let (m, n) = line
            .split_once(',')
            .ok_or_else(|| Error::parse(format!("bad row '{line}'")))?;
        points.push((parse_i64(m)?, parse_i64(n)?));
    }
    PointSet2D::new(points, radius)
}

pub fn autocorr_1d_to_csv(est: &Autocorrelation1D) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# label={}", est.label());
    let _ = writeln!(out, "# window_size={}", est.window_size());
    out.push_str("lag,eta\n");
    for (&lag, &eta) in est.lags().iter().zip(est.coefficients()) {
        let _ = writeln!(out, "{lag},{}", fmt_f64(eta));
    }
    out
}

pub fn autocorr_2d_to_csv(est: &Autocorrelation2D) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# label={}", est.label());
    let _ = writeln!(out, "# window_size={}", est.window_size());
    out.push_str("lag1,lag2,eta\n");
    for (&[m1, m2], &eta) in est.lags().iter().zip(est.coefficients()) {
        let _ = writeln!(out, "{m1},{m2},{}", fmt_f64(eta));
    }
    out
}

fn seeds_comment(seeds: &[u64]) -> String {
    if seeds.is_empty() {
        return String::new();
    }
    let list: Vec<String> = seeds.iter().map(u64::to_string).collect();
    format!("# seeds={}\n", list.join(","))
}

pub fn spectrum_1d_to_csv(est: &Spectrum1D) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# label={}", est.label());
    let _ = writeln!(out, "# window_size={}", est.window_size());
    let _ = writeln!(out, "# blocks={}", est.blocks());
    out.push_str(&seeds_comment(est.seeds()));
    out.push_str("k,density\n");
    for (&k, &d) in est.k_grid().iter().zip(est.density()) {
        let _ = writeln!(out, "{},{}", fmt_f64(k), fmt_f64(d));
    }
    out
}

pub fn spectrum_2d_to_csv(est: &Spectrum2D) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# label={}", est.label());
    let _ = writeln!(out, "# window_size={}", est.window_size());
    let _ = writeln!(out, "# blocks={}", est.blocks());
    out.push_str(&seeds_comment(est.seeds()));
    out.push_str("k1,k2,density\n");
    for (&[k1, k2], &d) in est.k_grid().iter().zip(est.density()) {
        let _ = writeln!(out, "{},{},{}", fmt_f64(k1), fmt_f64(k2), fmt_f64(d));
    }
    out
}

pub fn point_masses_1d_to_csv(est: &Spectrum1D) -> String {
    let mut out = String::from("k,mass,stderr,detected\n");
    for pm in est.point_masses() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(pm.k),
            fmt_f64(pm.mass),
            fmt_f64(pm.stderr),
            pm.detected
        );
    }
    out
}

pub fn point_masses_2d_to_csv(est: &Spectrum2D) -> String {
    let mut out = String::from("k1,k2,mass,stderr,detected\n");
    for pm in est.point_masses() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(pm.k[0]),
            fmt_f64(pm.k[1]),
            fmt_f64(pm.mass),
            fmt_f64(pm.stderr),
            pm.detected
        );
    }
    out
}

pub fn entropy_to_csv(report: &EntropyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# label={}", report.label);
    if !report.patch_counts.is_empty() {
        out.push_str("L,count\n");
        for &(side, count) in &report.patch_counts {
            let _ = writeln!(out, "{side},{count}");
        }
        return out;
    }
    out.push_str("L,H_bits,rate\n");
    for (i, (&l, &h)) in report
        .block_lengths
        .iter()
        .zip(&report.block_entropies)
        .enumerate()
    {
        let rate = report
            .rate_estimates
            .get(i)
            .map(|&r| fmt_f64(r))
            .unwrap_or_default();
        let _ = writeln!(out, "{l},{},{rate}", fmt_f64(h));
    }
    out
}
