//! Geodesic configuration files.
//!
//! The format is TOML with exact scalars written as strings:
//!
//! ```toml
//! [manifold]
//! d = 2
//! n = 1
//!
//! [field]
//! radicand = 2
//!
//! [[geodesic]]
//! name = "c1"
//! initial_index = 1
//! blocks = [{ type = "R", a = "0", b = "1/2" }]
//! ```
//!
//! A rotation angle is given either as `x = "1/2√2"` or as the pair
//! `a`, `b` meaning `a + b√D₀`. Floating-point literals are rejected.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;
use toml::{Table, Value};

use crate::betti::ManifoldClass;
use crate::field::{is_square_free, parse_rational, ExactScalar};
use crate::index::GeodesicRecord;
use crate::normal_form::{BlockSpec, PoincareDecomposition, ValidationMode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemanticError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SemanticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
    Semantic(Vec<SemanticError>),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Meta {
    pub description: Option<String>,
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeodesicConfig {
    pub manifold: ManifoldClass,
    pub radicand: u64,
    pub meta: Meta,
    pub geodesics: Vec<GeodesicRecord>,
}

impl GeodesicConfig {
    pub fn dn_minus_1(&self) -> usize {
        (self.manifold.dim() - 1) as usize
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}

struct Walker {
    errors: Vec<SemanticError>,
}

impl Walker {
    fn err(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(SemanticError { path: path.into(), message: message.into() });
    }

    fn find_floats(&mut self, value: &Value, path: &str) {
        match value {
            Value::Float(f) => self.err(path, format!("floating-point literal {f} is not allowed; write an exact string")),
            Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    self.find_floats(v, &format!("{path}[{i}]"));
                }
            }
            Value::Table(t) => {
                for (k, v) in t {
                    let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                    self.find_floats(v, &p);
                }
            }
            _ => {}
        }
    }

    fn table<'a>(&mut self, root: &'a Table, key: &str) -> Option<&'a Table> {
        match root.get(key) {
            Some(Value::Table(t)) => Some(t),
            Some(_) => {
                self.err(key, "expected a table");
                None
            }
            None => {
                self.err(key, "missing section");
                None
            }
        }
    }

    fn uint(&mut self, t: &Table, path: &str, key: &str) -> Option<u64> {
        match t.get(key) {
            Some(Value::Integer(v)) if *v >= 0 => Some(*v as u64),
            Some(Value::Integer(v)) => {
                self.err(format!("{path}.{key}"), format!("expected a non-negative integer, got {v}"));
                None
            }
            Some(Value::Float(_)) => None,
            Some(_) => {
                self.err(format!("{path}.{key}"), "expected an integer");
                None
            }
            None => {
                self.err(format!("{path}.{key}"), "missing");
                None
            }
        }
    }

    fn string<'a>(&mut self, t: &'a Table, path: &str, key: &str, required: bool) -> Option<&'a str> {
        match t.get(key) {
            Some(Value::String(s)) => Some(s),
            Some(Value::Float(_)) => None,
            Some(_) => {
                self.err(format!("{path}.{key}"), "expected a string");
                None
            }
            None => {
                if required {
                    self.err(format!("{path}.{key}"), "missing");
                }
                None
            }
        }
    }

    fn rational(&mut self, t: &Table, path: &str, key: &str) -> Option<BigRational> {
        let s = self.string(t, path, key, true)?;
        match parse_rational(s) {
            Ok(q) => Some(q),
            Err(e) => {
                self.err(format!("{path}.{key}"), e.to_string());
                None
            }
        }
    }

    fn angle(&mut self, t: &Table, path: &str, radicand: u64) -> Option<ExactScalar> {
        if t.contains_key("x") {
            if t.contains_key("a") || t.contains_key("b") {
                self.err(path, "give either x or the pair a, b, not both");
                return None;
            }
            let s = self.string(t, path, "x", true)?;
            return match ExactScalar::parse_with_radicand(s) {
                Ok((x, Some(r))) if r != radicand => {
                    self.err(format!("{path}.x"), format!("radicand {r} differs from the field radicand {radicand}"));
                    let _ = x;
                    None
                }
                Ok((x, _)) => Some(x),
                Err(e) => {
                    self.err(format!("{path}.x"), e.to_string());
                    None
                }
            };
        }
        let a = self.rational(t, path, "a");
        let b = self.rational(t, path, "b");
        match ExactScalar::new(a?, b?, radicand) {
            Ok(x) => Some(x),
            Err(e) => {
                self.err(path, e.to_string());
                None
            }
        }
    }

    fn block(&mut self, value: &Value, path: &str, radicand: u64) -> Option<BlockSpec> {
        let Value::Table(t) = value else {
            self.err(path, "expected an inline table");
            return None;
        };
        let kind = self.string(t, path, "type", true)?;
        let allowed: &[&str] = match kind {
            "R" => &["type", "x", "a", "b"],
            "N2" => &["type", "x", "a", "b", "nontrivial"],
            "N1" => &["type", "lambda", "a"],
            "H" => &["type", "sign"],
            other => {
                self.err(format!("{path}.type"), format!("unknown block type {other:?}; expected R, N2, N1 or H"));
                return None;
            }
        };
        for key in t.keys().filter(|k| !allowed.contains(&k.as_str())) {
            self.err(format!("{path}.{key}"), format!("unexpected key for a {kind} block"));
        }
        match kind {
            "R" => self.angle(t, path, radicand).map(BlockSpec::rotation),
            "N2" => {
                let nontrivial = match t.get("nontrivial") {
                    Some(Value::Boolean(b)) => Some(*b),
                    Some(_) => {
                        self.err(format!("{path}.nontrivial"), "expected a boolean");
                        None
                    }
                    None => {
                        self.err(format!("{path}.nontrivial"), "missing");
                        None
                    }
                };
                let angle = self.angle(t, path, radicand);
                Some(BlockSpec::n2(angle?, nontrivial?))
            }
            "N1" => {
                let small = |w: &mut Walker, key: &str| match t.get(key) {
                    Some(Value::Integer(v)) if (-1..=1).contains(v) => Some(*v as i8),
                    _ => {
                        w.err(format!("{path}.{key}"), "expected -1, 0 or 1");
                        None
                    }
                };
                let lambda = small(self, "lambda");
                let a = small(self, "a");
                Some(BlockSpec::N1 { lambda: lambda?, a: a? })
            }
            _ => match t.get("sign") {
                Some(Value::Integer(1)) => Some(BlockSpec::H { positive: true }),
                Some(Value::Integer(-1)) => Some(BlockSpec::H { positive: false }),
                _ => {
                    self.err(format!("{path}.sign"), "expected 1 or -1");
                    None
                }
            },
        }
    }
}

/// Parses and validates a configuration; all semantic errors are collected.
pub fn parse_config(text: &str) -> Result<GeodesicConfig, ConfigError> {
    let root: Table = text.parse().map_err(|e: toml::de::Error| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        ConfigError::Syntax { line, column, message: e.message().trim().to_string() }
    })?;
    let mut w = Walker { errors: Vec::new() };
    for (k, v) in &root {
        w.find_floats(v, k);
    }
    for key in root.keys().filter(|k| !["manifold", "field", "meta", "geodesic"].contains(&k.as_str())) {
        w.err(key.as_str(), "unknown section");
    }

    let manifold = w.table(&root, "manifold").and_then(|t| {
        let d = w.uint(t, "manifold", "d");
        let n = w.uint(t, "manifold", "n");
        match ManifoldClass::new(d?, n?) {
            Ok(m) => Some(m),
            Err(e) => {
                w.err("manifold", e.to_string());
                None
            }
        }
    });
    let radicand = w.table(&root, "field").and_then(|t| w.uint(t, "field", "radicand")).and_then(|r| {
        if r >= 1 && is_square_free(r) {
            Some(r)
        } else {
            w.err("field.radicand", format!("{r} is not a positive square-free integer"));
            None
        }
    });
    let meta = match root.get("meta") {
        Some(Value::Table(t)) => Meta {
            description: w.string(t, "meta", "description", false).map(str::to_string),
            source: w.string(t, "meta", "source", false).map(str::to_string),
        },
        Some(_) => {
            w.err("meta", "expected a table");
            Meta::default()
        }
        None => Meta::default(),
    };

    let mut geodesics = Vec::new();
    let mut names = BTreeSet::new();
    match root.get("geodesic") {
        Some(Value::Array(items)) => {
            for (g, item) in items.iter().enumerate() {
                let path = format!("geodesic[{g}]");
                let Value::Table(t) = item else {
                    w.err(&path, "expected a table");
                    continue;
                };
                for key in t.keys().filter(|k| !["name", "initial_index", "blocks"].contains(&k.as_str())) {
                    w.err(format!("{path}.{key}"), "unexpected key");
                }
                let name = w.string(t, &path, "name", true).map(str::to_string);
                if let Some(name) = &name {
                    if !names.insert(name.clone()) {
                        w.err(format!("{path}.name"), format!("duplicate geodesic name {name:?}"));
                    }
                }
                let index = w.uint(t, &path, "initial_index");
                let blocks = match (t.get("blocks"), radicand) {
                    (Some(Value::Array(bs)), Some(r)) => {
                        let parsed: Vec<_> =
                            bs.iter().enumerate().map(|(b, v)| w.block(v, &format!("{path}.blocks[{b}]"), r)).collect();
                        parsed.into_iter().collect::<Option<Vec<_>>>()
                    }
                    (Some(Value::Array(_)), None) => None,
                    (Some(_), _) => {
                        w.err(format!("{path}.blocks"), "expected an array of blocks");
                        None
                    }
                    (None, _) => {
                        w.err(format!("{path}.blocks"), "missing");
                        None
                    }
                };
                if let (Some(name), Some(index), Some(blocks), Some(m)) = (name, index, blocks, manifold) {
                    let decomp = PoincareDecomposition::new(blocks);
                    for v in decomp.validate((m.dim() - 1) as usize, ValidationMode::General) {
                        w.err(format!("{path}.blocks"), v.to_string());
                    }
                    geodesics.push(GeodesicRecord::new(name, index, decomp));
                }
            }
        }
        Some(_) => w.err("geodesic", "expected an array of tables ([[geodesic]])"),
        None => {}
    }

    if !w.errors.is_empty() {
        return Err(ConfigError::Semantic(w.errors));
    }
    Ok(GeodesicConfig {
        manifold: manifold.expect("checked"),
        radicand: radicand.expect("checked"),
        meta,
        geodesics,
    })
}

fn quoted(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

fn emit_block(block: &BlockSpec) -> String {
    match block {
        BlockSpec::R { angle } => format!("{{ type = \"R\", x = {} }}", quoted(&angle.to_string())),
        BlockSpec::N2 { angle, nontrivial } => {
            format!("{{ type = \"N2\", x = {}, nontrivial = {nontrivial} }}", quoted(&angle.to_string()))
        }
        BlockSpec::N1 { lambda, a } => format!("{{ type = \"N1\", lambda = {lambda}, a = {a} }}"),
        BlockSpec::H { positive } => format!("{{ type = \"H\", sign = {} }}", if *positive { 1 } else { -1 }),
    }
}

/// Canonical text form; `parse_config` reads it back unchanged.
pub fn emit_config(config: &GeodesicConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("[manifold]\nd = {}\nn = {}\n\n", config.manifold.d, config.manifold.n));
    out.push_str(&format!("[field]\nradicand = {}\n", config.radicand));
    if config.meta.description.is_some() || config.meta.source.is_some() {
        out.push_str("\n[meta]\n");
        if let Some(d) = &config.meta.description {
            out.push_str(&format!("description = {}\n", quoted(d)));
        }
        if let Some(s) = &config.meta.source {
            out.push_str(&format!("source = {}\n", quoted(s)));
        }
    }
    for rec in &config.geodesics {
        out.push_str(&format!("\n[[geodesic]]\nname = {}\ninitial_index = {}\n", quoted(&rec.name), rec.initial_index));
        let blocks: Vec<String> = rec.decomp.blocks.iter().map(emit_block).collect();
        out.push_str(&format!("blocks = [{}]\n", blocks.join(", ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const S2: &str = include_str!("../examples/s2_sqrt2.cfg");

    fn semantic(text: &str) -> Vec<SemanticError> {
        match parse_config(text) {
            Err(ConfigError::Semantic(v)) => v,
            other => panic!("expected semantic errors, got {other:?}"),
        }
    }

    #[test]
    fn bundled_s2() {
        let c = parse_config(S2).unwrap();
        assert_eq!(c.manifold, ManifoldClass::new(2, 1).unwrap());
        assert_eq!(c.radicand, 2);
        assert_eq!(c.geodesics.len(), 2);
        assert_eq!(c.geodesics[1].initial_index, 3);
        assert_eq!(c.geodesics[0].decomp.blocks, vec![BlockSpec::rotation("1/2√2".parse().unwrap())]);
        let again = parse_config(&emit_config(&c)).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_bad_input() {
        let mixed = S2.replace("blocks = [{ type = \"R\", a = \"0\", b = \"1/2\" }]", "blocks = [{ type = \"R\", x = \"1/2√3\" }]");
        assert_ne!(mixed, S2);
        let errs = semantic(&mixed);
        assert!(errs[0].path.starts_with("geodesic[0].blocks[0]"), "{errs:?}");
        let half = S2.replacen("a = \"0\", b = \"1/2\"", "x = \"1/2\"", 1);
        let errs = semantic(&half);
        assert!(errs.iter().any(|e| e.message.contains("angle 1/2")), "{errs:?}");
        let float = S2.replace("radicand = 2", "radicand = 2.0");
        assert!(semantic(&float).iter().any(|e| e.path == "field.radicand" && e.message.contains("floating")));
        let dup = S2.replace("name = \"c2\"", "name = \"c1\"");
        assert!(semantic(&dup).iter().any(|e| e.message.contains("duplicate")));
        match parse_config("[manifold]\nd = = 2\n") {
            Err(ConfigError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
