//! JSON catalog of groups, input file formats, and result records.
//!
//! Integers are written as decimal strings; keys come out in a fixed order so
//! identical inputs give byte-identical files.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::abgrp::{FgAbelianGroup, Invariants};
use crate::cech::CechInput;
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::gammamod::FiniteGroup;
use crate::report::{Check, Report};
use crate::rootdata::{ReductiveDatum, RootDatum};
use crate::tres::SesData;

pub const CATALOG_SCHEMA: &str = "redinv-catalog/1";
pub const RESULT_SCHEMA: &str = "redinv-result/1";
pub const SES_SCHEMA: &str = "redinv-ses/1";
pub const CECH_SCHEMA: &str = "redinv-cech/1";
/// Provenance string stored with every expected value.
pub const ORACLE: &str = "snf";

/// Groups in the shipped catalog, in file order.
pub const DEFAULT_SPECS: &[&str] = &[
    "T(1)",
    "T(2)",
    "GL(1)",
    "GL(2)",
    "GL(3)",
    "GL(4)",
    "SL(2)",
    "SL(3)",
    "SL(4)",
    "PGL(2)",
    "PGL(3)",
    "PGL(4)",
    "Sp(4)",
    "PSp(4)",
    "Sp(6)",
    "SO(5)",
    "Spin(5)",
    "SO(7)",
    "SO(8)",
    "Spin(8)",
    "PSO(8)",
    "SO(10)",
    "PSO(10)",
    "G2",
    "F4",
    "E6sc",
    "E6ad",
    "E7sc",
    "E7ad",
    "E8",
    "SL(2)*T(1)",
    "SL(2)*PGL(3)",
    "SL(3) xΓ:flip",
    "PGL(3) xΓ:flip",
    "GL(3) xΓ:flip",
    "Spin(8) xG:triality",
    "PSO(8) xG:triality",
];

const SHIPPED_CATALOG: &str = include_str!("../../../catalog/groups.json");

fn schema_err(location: impl Into<String>, reason: impl ToString) -> Error {
    Error::Schema { location: location.into(), reason: reason.to_string() }
}

fn json_err(e: serde_json::Error) -> Error {
    schema_err(format!("line {}, column {}", e.line(), e.column()), e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumWire {
    pub rank: usize,
    pub roots: IntMatrix,
    pub coroots: IntMatrix,
    /// Multiplication table; absent for the trivial group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<IntMatrix>>,
}

impl DatumWire {
    pub fn from_datum(d: &ReductiveDatum) -> Self {
        let split = d.is_split();
        DatumWire {
            rank: d.rank(),
            roots: d.datum().roots().clone(),
            coroots: d.datum().coroots().clone(),
            gamma: (!split).then(|| d.gamma().table().to_vec()),
            action: (!split).then(|| d.action().to_vec()),
        }
    }

    pub fn build(&self, name: &str) -> Result<ReductiveDatum> {
        let n = self.rank;
        let roots = self.roots.clone().reshape_empty(self.roots.rows(), n)?;
        let coroots = self.coroots.clone().reshape_empty(self.coroots.rows(), n)?;
        let datum = RootDatum::new(n, roots, coroots)?;
        let d = match (&self.gamma, &self.action) {
            (None, None) => ReductiveDatum::split(name, datum),
            (Some(t), Some(a)) => {
                let a = a.iter().map(|m| m.clone().reshape_empty(n, n)).collect::<Result<Vec<_>>>()?;
                ReductiveDatum::new(name, datum, Arc::new(FiniteGroup::new(t.clone())?), a)?
            }
            _ => return Err(Error::InvalidDatum("gamma and action must be given together".into())),
        };
        d.ensure_valid()?;
        Ok(d)
    }
}

/// A group given by a mini-language spec or by explicit data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Spec(String),
    Datum(DatumWire),
}

impl GroupRef {
    pub fn build(&self, name: &str) -> Result<ReductiveDatum> {
        match self {
            GroupRef::Spec(s) => ReductiveDatum::from_spec(s),
            GroupRef::Datum(w) => w.build(name),
        }
    }

    /// A spec string when it reproduces `d`, explicit data otherwise.
    pub fn of(d: &ReductiveDatum) -> Self {
        match ReductiveDatum::from_spec(d.name()) {
            Ok(e) if e == *d => GroupRef::Spec(d.name().to_string()),
            _ => GroupRef::Datum(DatumWire::from_datum(d)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub characters: Invariants,
    pub mu_dual: Invariants,
    pub pi1: Invariants,
    pub provenance: String,
}

impl Expected {
    pub fn compute(d: &ReductiveDatum) -> Result<Self> {
        Ok(Expected {
            characters: d.character_group()?.invariants().clone(),
            mu_dual: d.mu_dual()?.invariants().clone(),
            pi1: d.pi1()?.invariants().clone(),
            provenance: ORACLE.into(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub group: GroupRef,
    pub expected: Expected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFile {
    pub schema: String,
    pub entries: Vec<CatalogEntry>,
}

impl CatalogFile {
    /// Fills in expected values from the SNF computations.
    pub fn from_specs(specs: &[&str]) -> Result<Self> {
        let entries = specs
            .iter()
            .map(|s| {
                let d = ReductiveDatum::from_spec(s)?;
                Ok(CatalogEntry { name: s.to_string(), group: GroupRef::Spec(s.to_string()), expected: Expected::compute(&d)? })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CatalogFile { schema: CATALOG_SCHEMA.into(), entries })
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub file: CatalogFile,
    pub data: Vec<ReductiveDatum>,
}

impl Catalog {
    pub fn get(&self, name: &str) -> Option<&ReductiveDatum> {
        self.file.entries.iter().position(|e| e.name == name).map(|i| &self.data[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CatalogEntry, &ReductiveDatum)> {
        self.file.entries.iter().zip(&self.data)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Parses, builds and validates every entry, then re-derives the expected values.
pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let file: CatalogFile = serde_json::from_str(text).map_err(json_err)?;
    if file.schema != CATALOG_SCHEMA {
        return Err(schema_err("schema", format!("expected {CATALOG_SCHEMA:?}, found {:?}", file.schema)));
    }
    let mut data = Vec::with_capacity(file.entries.len());
    for (i, e) in file.entries.iter().enumerate() {
        let at = |field: &str| format!("entries[{i}] ({}){field}", e.name);
        if file.entries[..i].iter().any(|f| f.name == e.name) {
            return Err(schema_err(at(".name"), "duplicate name"));
        }
        let d = e.group.build(&e.name).map_err(|err| schema_err(at(".group"), err))?;
        if e.expected.provenance != ORACLE {
            return Err(schema_err(at(".expected.provenance"), format!("expected {ORACLE:?}")));
        }
        data.push(d);
    }
    let cat = Catalog { file, data };
    let rep = self_test(&cat)?;
    if let Some(first) = rep.failures().next().cloned() {
        return Err(schema_err(first.name, format!("stored value disagrees with recomputation: {}", first.witness.unwrap_or_default())));
    }
    Ok(cat)
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_catalog(&text).map_err(|e| match e {
        Error::Schema { location, reason } => Error::Schema { location: format!("{}: {location}", path.display()), reason },
        other => other,
    })
}

pub fn shipped_catalog() -> Catalog {
    parse_catalog(SHIPPED_CATALOG).expect("shipped catalog is valid")
}

pub fn save_catalog(file: &CatalogFile, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, file.to_json())?;
    Ok(())
}

/// One check per entry and field. Entries are recomputed in parallel; the
/// report keeps file order.
pub fn self_test(cat: &Catalog) -> Result<Report> {
    let computed: Vec<Expected> = cat.data.par_iter().map(Expected::compute).collect::<Result<_>>()?;
    let mut rep = Report::new();
    for (i, ((e, _), got)) in cat.iter().zip(&computed).enumerate() {
        for (field, want, have) in [
            ("characters", &e.expected.characters, &got.characters),
            ("mu_dual", &e.expected.mu_dual, &got.mu_dual),
            ("pi1", &e.expected.pi1, &got.pi1),
        ] {
            rep.push(Check::from_bool(format!("entries[{i}] ({}).expected.{field}", e.name), want == have, || {
                format!("stored {want}, computed {have}")
            }));
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SesFile {
    pub schema: String,
    pub g1: GroupRef,
    pub g2: GroupRef,
    pub g3: GroupRef,
    pub inclusion: IntMatrix,
    pub restriction: IntMatrix,
    pub part1: Vec<[usize; 2]>,
    pub part3: Vec<[usize; 2]>,
}

impl SesFile {
    pub fn of(s: &SesData) -> Self {
        SesFile {
            schema: SES_SCHEMA.into(),
            g1: GroupRef::of(&s.g1),
            g2: GroupRef::of(&s.g2),
            g3: GroupRef::of(&s.g3),
            inclusion: s.inclusion.clone(),
            restriction: s.restriction.clone(),
            part1: s.part1.iter().map(|&(a, b)| [a, b]).collect(),
            part3: s.part3.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn build(&self) -> Result<SesData> {
        if self.schema != SES_SCHEMA {
            return Err(schema_err("schema", format!("expected {SES_SCHEMA:?}, found {:?}", self.schema)));
        }
        let g1 = self.g1.build("G1").map_err(|e| schema_err("g1", e))?;
        let g2 = self.g2.build("G2").map_err(|e| schema_err("g2", e))?;
        let g3 = self.g3.build("G3").map_err(|e| schema_err("g3", e))?;
        let inclusion = self.inclusion.clone().reshape_empty(g2.rank(), g3.rank()).map_err(|e| schema_err("inclusion", e))?;
        let restriction =
            self.restriction.clone().reshape_empty(g1.rank(), g2.rank()).map_err(|e| schema_err("restriction", e))?;
        Ok(SesData {
            g1,
            g2,
            g3,
            inclusion,
            restriction,
            part1: self.part1.iter().map(|p| (p[0], p[1])).collect(),
            part3: self.part3.iter().map(|p| (p[0], p[1])).collect(),
        })
    }
}

pub fn parse_ses(text: &str) -> Result<SesData> {
    serde_json::from_str::<SesFile>(text).map_err(json_err)?.build()
}

/// An abelian group as a presentation or by its invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupWire {
    Presentation(PresentationWire),
    Invariants(Invariants),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationWire {
    pub generators: usize,
    pub relations: IntMatrix,
}

impl GroupWire {
    pub fn build(&self) -> Result<FgAbelianGroup> {
        match self {
            GroupWire::Presentation(p) => FgAbelianGroup::new(p.generators, p.relations.clone()),
            GroupWire::Invariants(inv) => Ok(FgAbelianGroup::from_invariants(inv)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CechFile {
    pub schema: String,
    pub fx: GroupWire,
    pub fg: GroupWire,
    pub phi: IntMatrix,
}

pub fn parse_cech(text: &str) -> Result<CechInput> {
    let f: CechFile = serde_json::from_str(text).map_err(json_err)?;
    if f.schema != CECH_SCHEMA {
        return Err(schema_err("schema", format!("expected {CECH_SCHEMA:?}, found {:?}", f.schema)));
    }
    let fx = f.fx.build().map_err(|e| schema_err("fx", e))?;
    let fg = f.fg.build().map_err(|e| schema_err("fg", e))?;
    let phi = f.phi.reshape_empty(fg.ambient_rank(), fx.ambient_rank()).map_err(|e| schema_err("phi", e))?;
    CechInput::new(fx, fg, phi).map_err(|e| schema_err("phi", e))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Bare(IntMatrix),
    Wrapped {
        matrix: IntMatrix,
    },
}

/// Either a bare array of rows or `{"matrix": rows}`.
pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    match serde_json::from_str::<MatrixFile>(text).map_err(json_err)? {
        MatrixFile::Bare(m) | MatrixFile::Wrapped { matrix: m } => Ok(m),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeGroup {
    pub degree: i32,
    pub group: Invariants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub schema: String,
    pub command: String,
    pub input: String,
    pub input_digest: String,
    pub groups: BTreeMap<String, Invariants>,
    pub complexes: BTreeMap<String, Vec<DegreeGroup>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub matrices: BTreeMap<String, IntMatrix>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, String>,
    pub verdicts: Vec<Check>,
    pub passed: bool,
}

impl ResultRecord {
    pub fn new(command: impl Into<String>, input: impl Into<String>) -> Self {
        let input = input.into();
        ResultRecord {
            schema: RESULT_SCHEMA.into(),
            command: command.into(),
            input_digest: sha256_hex(input.as_bytes()),
            input,
            groups: BTreeMap::new(),
            complexes: BTreeMap::new(),
            matrices: BTreeMap::new(),
            labels: BTreeMap::new(),
            verdicts: Vec::new(),
            passed: true,
        }
    }

    pub fn group(&mut self, key: impl Into<String>, inv: Invariants) -> &mut Self {
        self.groups.insert(key.into(), inv);
        self
    }

    pub fn complex(&mut self, key: impl Into<String>, cohomology: Vec<(i32, Invariants)>) -> &mut Self {
        let v = cohomology.into_iter().map(|(degree, group)| DegreeGroup { degree, group }).collect();
        self.complexes.insert(key.into(), v);
        self
    }

    pub fn matrix(&mut self, key: impl Into<String>, m: IntMatrix) -> &mut Self {
        self.matrices.insert(key.into(), m);
        self
    }

    pub fn label(&mut self, key: impl Into<String>, v: impl Into<String>) -> &mut Self {
        self.labels.insert(key.into(), v.into());
        self
    }

    pub fn verdicts(&mut self, rep: &Report) -> &mut Self {
        self.verdicts.extend(rep.checks.iter().cloned());
        self.passed = self.verdicts.iter().all(|c| c.pass);
        self
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: ResultRecord = serde_json::from_str(text).map_err(json_err)?;
        if r.schema != RESULT_SCHEMA {
            return Err(schema_err("schema", format!("expected {RESULT_SCHEMA:?}, found {:?}", r.schema)));
        }
        if r.input_digest != sha256_hex(r.input.as_bytes()) {
            return Err(schema_err("input_digest", "does not match input"));
        }
        Ok(r)
    }
}

pub fn write_result(rec: &ResultRecord, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, rec.to_json())?;
    Ok(())
}

pub fn read_result(path: impl AsRef<Path>) -> Result<ResultRecord> {
    ResultRecord::from_json(&std::fs::read_to_string(path)?)
}
