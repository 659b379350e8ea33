//! Implementations of the compute / scan / graph commands. Every payload is
//! built from pre-rounded floats so identical configurations serialize
//! byte-identically.

use crate::output::{csv_row, float_field, num};
use ksl_core::charsum::{self, KsOptions};
use ksl_core::extremal;
use ksl_core::ring::{poly, Ring, RingSpec};
use ksl_core::sgraph;
use ksl_core::{Error, Result};
use serde_json::Value;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tolerance: f64,
    pub guard: u64,
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

/// `compute`: Kloosterman-Salem report with the bound ledger, as JSON.
pub fn compute_json(ring_text: &str, cfg: &RunConfig) -> Result<Value> {
    let ring = Ring::parse(ring_text, cfg.guard)?;
    let opts = KsOptions { tolerance: cfg.tolerance, record_table: false };
    let report = charsum::kloosterman_salem(&ring, &opts)?;
    let cert = extremal::is_extremal(&ring)?;
    let ledger = charsum::bound_ledger(&ring, &report)?;
    let bounds: Vec<Value> = ledger
        .iter()
        .map(|b| {
            object(vec![
                ("name", Value::String(b.name.to_string())),
                ("claim", Value::String(b.claim.clone())),
                ("lhs", num(b.lhs)),
                ("rhs", num(b.rhs)),
                ("pass", Value::Bool(b.pass)),
            ])
        })
        .collect();
    let argmax: Vec<Value> = report
        .argmax
        .iter()
        .map(|&(m, n)| Value::Array(vec![Value::from(m), Value::from(n)]))
        .collect();
    Ok(object(vec![
        ("schema", Value::from(1)),
        ("ring", Value::String(report.ring.clone())),
        ("size", Value::from(report.size)),
        ("units", Value::from(report.units)),
        ("C", num(report.c)),
        ("C_squared", num(report.c * report.c)),
        ("sqrt_units", num((report.units as f64).sqrt())),
        ("argmax", Value::Array(argmax)),
        ("extremal", Value::Bool(cert.extremal)),
        ("bounds", Value::Array(bounds)),
    ]))
}

/// `compute --format csv`: the full coefficient table, flattened.
pub fn compute_csv(ring_text: &str, cfg: &RunConfig) -> Result<String> {
    let ring = Ring::parse(ring_text, cfg.guard)?;
    let opts = KsOptions { tolerance: cfg.tolerance, record_table: true };
    let report = charsum::kloosterman_salem(&ring, &opts)?;
    let table = report.table.expect("table requested");
    let mut out = String::from("m,n,re,im,abs\n");
    let size = report.size;
    for (idx, k) in table.iter().enumerate() {
        let (m, n) = (idx as u64 / size, idx as u64 % size);
        out.push_str(&csv_row(&[
            m.to_string(),
            n.to_string(),
            float_field(k.re),
            float_field(k.im),
            float_field(k.norm()),
        ]));
        out.push('\n');
    }
    Ok(out)
}

/// Family patterns for `scan`: `fields:q<=N`, `zmod:n<=N`, or
/// `list:SPEC;SPEC;...`.
pub fn parse_family(text: &str) -> Result<Vec<String>> {
    let bad = |msg: &str| Error::InvalidParameter(format!("family '{text}': {msg}"));
    if let Some(rest) = text.strip_prefix("list:") {
        let specs: Vec<String> =
            rest.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        if specs.is_empty() {
            return Err(bad("empty list"));
        }
        return Ok(specs);
    }
    let (kind, bound) = text
        .split_once(":")
        .ok_or_else(|| bad("expected fields:q<=N, zmod:n<=N, or list:..."))?;
    let limit: u64 = bound
        .trim()
        .strip_prefix("q<=")
        .or_else(|| bound.trim().strip_prefix("n<="))
        .ok_or_else(|| bad("expected a <= bound"))?
        .trim()
        .parse()
        .map_err(|_| bad("bound is not an integer"))?;
    match kind {
        "fields" => Ok((2..=limit)
            .filter(|&q| poly::prime_power(q).is_some())
            .map(|q| format!("GF({q})"))
            .collect()),
        "zmod" => {
            if limit < 2 {
                return Err(bad("zmod bound must be >= 2"));
            }
            Ok((2..=limit).map(|n| format!("Z/{n}")).collect())
        }
        _ => Err(bad("unknown family kind")),
    }
}

pub struct ScanRow {
    pub ring: String,
    pub size: u64,
    pub units: u64,
    pub c: f64,
    pub c_over_sqrt_units: f64,
    pub extremal: bool,
    pub is_field: bool,
    pub is_boolean: bool,
}

/// `scan`: classification rows for a ring family.
pub fn scan(family: &str, cfg: &RunConfig) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for text in parse_family(family)? {
        let ring = Ring::parse(&text, cfg.guard)?;
        let c = charsum::salem_constant(&ring)?;
        let cert = extremal::is_extremal(&ring)?;
        let units = ring.units().len() as u64;
        rows.push(ScanRow {
            ring: ring.spec().to_string(),
            size: ring.size(),
            units,
            c,
            c_over_sqrt_units: c / (units as f64).sqrt(),
            extremal: cert.extremal,
            is_field: ring.is_field(),
            is_boolean: ring.is_boolean(),
        });
    }
    Ok(rows)
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("ring,size,units,C,C_over_sqrt_units,extremal,is_field,is_boolean\n");
    for r in rows {
        out.push_str(&csv_row(&[
            r.ring.clone(),
            r.size.to_string(),
            r.units.to_string(),
            float_field(r.c),
            float_field(r.c_over_sqrt_units),
            r.extremal.to_string(),
            r.is_field.to_string(),
            r.is_boolean.to_string(),
        ]));
        out.push('\n');
    }
    out
}

pub fn scan_json(rows: &[ScanRow]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            object(vec![
                ("ring", Value::String(r.ring.clone())),
                ("size", Value::from(r.size)),
                ("units", Value::from(r.units)),
                ("C", num(r.c)),
                ("C_over_sqrt_units", num(r.c_over_sqrt_units)),
                ("extremal", Value::Bool(r.extremal)),
                ("is_field", Value::Bool(r.is_field)),
                ("is_boolean", Value::Bool(r.is_boolean)),
            ])
        })
        .collect();
    object(vec![("schema", Value::from(1)), ("rows", Value::Array(rows))])
}

/// `graph`: spectral report of the hyperbola graph, as JSON.
pub fn graph_json(ring_text: &str, cfg: &RunConfig) -> Result<Value> {
    let ring = Ring::parse(ring_text, cfg.guard)?;
    let c = charsum::salem_constant(&ring)?;
    let cert = extremal::is_extremal(&ring)?;
    let graph = sgraph::hyperbola_graph(&ring)?;
    let spectral = sgraph::spectrum(&graph)?;
    let conn = sgraph::connectivity_report(&graph, Some(&spectral))?;
    let (epsilon, ramanujan) = if cert.extremal {
        (Value::Null, Value::Null)
    } else {
        let rep = sgraph::expander_and_ramanujan(&ring, c)?;
        (num(rep.epsilon), Value::Bool(rep.ramanujan))
    };
    Ok(object(vec![
        ("schema", Value::from(1)),
        ("ring", Value::String(ring.spec().to_string())),
        ("vertices", Value::from(graph.vertices())),
        ("degree", Value::from(graph.degree())),
        ("C", num(c)),
        ("extremal", Value::Bool(cert.extremal)),
        ("connected", Value::Bool(conn.connected)),
        ("components", Value::from(conn.components as u64)),
        ("bipartite", Value::Bool(conn.bipartite)),
        ("bipartite_components", Value::from(conn.bipartite_components as u64)),
        ("lambda2", num(spectral.lambda2)),
        ("spectral_gap", num(spectral.spectral_gap)),
        ("epsilon", epsilon),
        ("ramanujan", ramanujan),
    ]))
}

/// `graph --format edges`: the deterministic edge-list text.
pub fn graph_edges(ring_text: &str, cfg: &RunConfig) -> Result<String> {
    let ring = Ring::parse(ring_text, cfg.guard)?;
    let graph = sgraph::hyperbola_graph(&ring)?;
    graph.edge_list()
}

/// Hand-rolled spec constructors used by tests to reach unusual cases.
pub fn build_ring(spec: RingSpec, cfg: &RunConfig) -> Result<Ring> {
    Ring::with_guard(spec, cfg.guard)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RunConfig {
        RunConfig { tolerance: 1e-9, guard: 4096 }
    }

    #[test]
    fn family_patterns() {
        assert_eq!(
            parse_family("fields:q<=9").unwrap(),
            vec!["GF(2)", "GF(3)", "GF(4)", "GF(5)", "GF(7)", "GF(8)", "GF(9)"]
        );
        assert_eq!(parse_family("zmod:n<=4").unwrap(), vec!["Z/2", "Z/3", "Z/4"]);
        assert_eq!(
            parse_family("list:Z/6; GF(4) x Z/3").unwrap(),
            vec!["Z/6", "GF(4) x Z/3"]
        );
        assert!(parse_family("primes:p<=5").is_err());
        assert!(parse_family("fields:q<5").is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)] // the literal is the 12-digit rounding
    fn compute_json_fields() {
        let v = compute_json("GF(3)", &cfg()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["ring"], "GF(3)");
        assert_eq!(v["size"], 3);
        assert_eq!(v["units"], 2);
        assert_eq!(v["extremal"], true);
        let c = v["C"].as_f64().unwrap();
        assert!((c - 1.41421356237).abs() < 1e-11);
        assert_eq!(v["argmax"].as_array().unwrap().len(), 2);
        assert!(v["bounds"].as_array().unwrap().iter().all(|b| b["pass"] == true));
    }

    #[test]
    fn compute_csv_has_full_table() {
        let text = compute_csv("Z/4", &cfg()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "m,n,re,im,abs");
        assert_eq!(lines.len(), 1 + 16);
    }

    #[test]
    fn graph_json_extremal_flags() {
        let v = graph_json("Z/8", &cfg()).unwrap();
        assert_eq!(v["extremal"], true);
        assert_eq!(v["epsilon"], Value::Null);
        assert_eq!(v["ramanujan"], Value::Null);
        assert_eq!(v["connected"], false);
        // 8 bipartite components
        assert_eq!(v["components"], 8);
        assert_eq!(v["bipartite_components"], 8);
        assert_eq!(v["bipartite"], true);

        let v = graph_json("GF(5)", &cfg()).unwrap();
        assert_eq!(v["extremal"], false);
        assert_eq!(v["connected"], true);
        assert_eq!(v["ramanujan"], true);
    }

    #[test]
    fn edge_counts() {
        // 25 vertices, 4-regular: 50 edges
        let text = graph_edges("GF(5)", &cfg()).unwrap();
        assert_eq!(text.lines().count() - 1, 50);
        // 9 vertices, 2-regular: 9 edges
        let text = graph_edges("GF(3)", &cfg()).unwrap();
        assert_eq!(text.lines().count() - 1, 9);
    }

    #[test]
    fn scan_rows_fields_to_13() {
        let rows = scan("fields:q<=13", &cfg()).unwrap();
        assert_eq!(rows.len(), 9);
        for row in &rows {
            assert_eq!(row.extremal, matches!(row.size, 2 | 3 | 4), "{}", row.ring);
            assert!(row.is_field);
            assert_eq!(row.is_boolean, row.size == 2);
        }
    }
}
