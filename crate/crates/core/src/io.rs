//! JSON lattice files and machine-readable reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chains::GridEmbedding;
use crate::error::{Error, Result};
use crate::lattice::{build_lattice, FiniteLattice};
use crate::retract::{Homomorphism, Verdict};
use crate::slim::{SlimDiagram, WitnessReport};

/// `{"name", "elements", "covers", "sub"?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub name: String,
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub: Option<Vec<String>>,
}

impl LatticeFile {
    /// Elements in lattice order, covers sorted lexicographically.
    pub fn from_lattice(name: &str, l: &FiniteLattice) -> Self {
        Self { name: name.into(), elements: l.ids().to_vec(), covers: l.cover_ids(), sub: None }
    }

    pub fn with_sub(mut self, l: &FiniteLattice, sub: &[usize]) -> Self {
        self.sub = Some(sub.iter().map(|&x| l.id(x).to_string()).collect());
        self
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice> {
        build_lattice(self.elements.iter().cloned(), self.covers.iter().cloned())
    }

    /// The `sub` field resolved against `l`.
    pub fn sub_indices(&self, l: &FiniteLattice) -> Result<Option<Vec<usize>>> {
        let Some(sub) = &self.sub else {
            return Ok(None);
        };
        sub.iter()
            .map(|s| l.index_of(s).ok_or_else(|| Error::UnknownElement(s.clone(), "sub".into())))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lattice files serialize")
    }
}

/// Parses a lattice file; syntax and schema errors carry a line and column.
pub fn parse_lattice_file(text: &[u8]) -> Result<(LatticeFile, FiniteLattice)> {
    let file: LatticeFile = serde_json::from_slice(text)
        .map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    let lattice = file.to_lattice()?;
    Ok((file, lattice))
}

/// Output of one command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    pub payload: Value,
}

impl Report {
    pub fn new(command: &str, verdict: &str, payload: Value) -> Self {
        Self { command: command.into(), verdict: verdict.into(), payload }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// `source id → target id`.
pub fn id_map(source: &FiniteLattice, target: &FiniteLattice, map: &[usize]) -> BTreeMap<String, String> {
    source.elements().map(|x| (source.id(x).to_string(), target.id(map[x]).to_string())).collect()
}

fn ids(l: &FiniteLattice, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| l.id(x).to_string()).collect()
}

pub fn embedding_json(e: &GridEmbedding) -> Value {
    json!({
        "target": LatticeFile::from_lattice("grid", e.target.lattice()),
        "sizes": e.target.sizes(),
        "map": id_map(&e.source, e.target.lattice(), &e.map),
        "coordinateChains": e.coordinate_chains.iter().map(|c| ids(&e.source, c)).collect::<Vec<_>>(),
    })
}

pub fn retraction_json(f: &Homomorphism) -> Value {
    json!({
        "map": id_map(f.source(), f.target(), f.map()),
        "image": ids(f.target(), &f.image()),
    })
}

pub fn verdict_json(d: &FiniteLattice, v: &Verdict) -> Value {
    match v {
        Verdict::IsAbsoluteRetract { boolean, grid } => json!({ "boolean": boolean, "grid": grid }),
        Verdict::Not(r) => json!({
            "case": r.case,
            "witness": LatticeFile::from_lattice("witness", &r.witness).with_sub(&r.witness, &r.embedding),
            "embedding": id_map(d, &r.witness, &r.embedding),
            "certificate": r.certificate,
        }),
    }
}

pub fn diagram_json(name: &str, d: &SlimDiagram) -> Value {
    json!({
        "lattice": LatticeFile::from_lattice(name, d.lattice()),
        "cells": d.cells(),
    })
}

pub fn witness_json(w: &WitnessReport) -> Value {
    let k = w.k.lattice();
    json!({
        "L": LatticeFile::from_lattice("L", &w.l),
        "R": LatticeFile::from_lattice("R", w.r.lattice()),
        "script": w.script,
        "m": w.m,
        "n": w.n,
        "t": w.t,
        "K": LatticeFile::from_lattice("K", k).with_sub(k, &w.l_prime),
        "LPrime": ids(k, &w.l_prime),
        "embedding": id_map(&w.l, k, &w.l_embedding),
        "innerCoatoms": ids(k, &w.inner_coatoms),
        "b": k.id(w.b),
        "gPrime": w.g_prime.iter().map(|row| ids(k, row)).collect::<Vec<_>>(),
        "retractionFound": w.retraction_found,
        "searchNodes": w.search_nodes,
        "swing": w.swing.iter().map(|s| json!({ "i": s.i, "j": s.j, "collapses": s.collapses })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::canonical_s7;

    #[test]
    fn parse_chain() {
        let text = br#"{"name":"C3","elements":["0","a","1"],"covers":[["0","a"],["a","1"]]}"#;
        let (file, l) = parse_lattice_file(text).unwrap();
        assert_eq!(file.name, "C3");
        assert_eq!(l.len(), 3);
        assert!(l.is_chain());
    }

    #[test]
    fn missing_endpoint() {
        let text = br#"{"name":"x","elements":["0","1"],"covers":[["0","a"]]}"#;
        assert!(matches!(parse_lattice_file(text), Err(Error::UnknownElement(..))));
    }

    #[test]
    fn syntax_error_position() {
        let text = b"{\"name\": \"x\",\n  \"elements\": [\"0\",, ]}";
        match parse_lattice_file(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn s7_round_trip() {
        let s7 = canonical_s7();
        let text = LatticeFile::from_lattice("S7", &s7).to_json();
        let (_, back) = parse_lattice_file(text.as_bytes()).unwrap();
        assert_eq!(back, s7);
    }

    #[test]
    fn report_round_trip() {
        let r = Report::new("dim", "ok", json!({ "dimension": 2 }));
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
