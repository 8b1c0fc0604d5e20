//! File ingestion and emission: Burmeister contexts, JSON contexts,
//! posets, algebras (with presets), valued matrices and the combined
//! input of the universal-property check.

use dualkit::bits::{SetFamily, Subset};
use dualkit::context::IncidenceStructure;
use dualkit::poset::Poset;
use dualkit::setfam::{generate_boolean_with_cap, GeneratedFamily};
use dualkit::ualg::{boolean2, lattice2, FiniteAlgebra, Operation, ValuedMatrix};
use serde::Deserialize;
use std::fmt;

#[derive(Debug)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for FormatError {}

fn err<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(msg.into()))
}

/// Burmeister format, strictly: `B`, empty line, object count, attribute
/// count, empty line, object names, attribute names, then data rows over
/// `.` and `X`.
pub fn parse_cxt(
    text: &str,
) -> Result<(IncidenceStructure, Vec<String>, Vec<String>), FormatError> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() < 5 {
        return err("context file has fewer than 5 header lines");
    }
    if lines[0].trim_end() != "B" {
        return err("line 1 must be exactly 'B'");
    }
    if !lines[1].trim().is_empty() {
        return err("line 2 must be empty");
    }
    let m: usize = lines[2]
        .trim()
        .parse()
        .map_err(|_| FormatError("line 3 must be the object count".into()))?;
    let n: usize = lines[3]
        .trim()
        .parse()
        .map_err(|_| FormatError("line 4 must be the attribute count".into()))?;
    if !lines[4].trim().is_empty() {
        return err("line 5 must be empty");
    }
    let expected = 5 + m + n + m;
    if lines.len() < expected {
        return err(format!(
            "context file has {} lines, expected at least {expected}",
            lines.len()
        ));
    }
    let objects: Vec<String> = (0..m).map(|i| lines[5 + i].to_string()).collect();
    let attributes: Vec<String> = (0..n).map(|j| lines[5 + m + j].to_string()).collect();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let line = lines[5 + m + n + i];
        if line.chars().count() != n {
            return err(format!(
                "data row {} has {} characters, expected {n}",
                i + 1,
                line.chars().count()
            ));
        }
        let mut row = Subset::empty(n);
        for (j, c) in line.chars().enumerate() {
            match c {
                'X' => row.insert(j),
                '.' => {}
                other => {
                    return err(format!(
                        "data row {} has invalid character {other:?}",
                        i + 1
                    ))
                }
            }
        }
        rows.push(row);
    }
    let structure = IncidenceStructure::from_rows(n, rows)
        .map_err(|e| FormatError(format!("invalid context: {e}")))?;
    Ok((structure, objects, attributes))
}

pub fn write_cxt(r: &IncidenceStructure, objects: &[String], attributes: &[String]) -> String {
    let mut out = String::from("B\n\n");
    out.push_str(&format!("{}\n{}\n\n", r.m(), r.n()));
    for name in objects {
        out.push_str(name);
        out.push('\n');
    }
    for name in attributes {
        out.push_str(name);
        out.push('\n');
    }
    for i in 0..r.m() {
        for j in 0..r.n() {
            out.push(if r.incident(i, j) { 'X' } else { '.' });
        }
        out.push('\n');
    }
    out
}

pub fn default_names(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

#[derive(Deserialize)]
struct ContextJson {
    m: usize,
    n: usize,
    rows: Vec<String>,
}

pub fn parse_context_json(text: &str) -> Result<IncidenceStructure, FormatError> {
    let parsed: ContextJson =
        serde_json::from_str(text).map_err(|e| FormatError(format!("context JSON: {e}")))?;
    if parsed.rows.len() != parsed.m {
        return err(format!(
            "context JSON declares m={} but has {} rows",
            parsed.m,
            parsed.rows.len()
        ));
    }
    let mut rows = Vec::with_capacity(parsed.m);
    for (i, row) in parsed.rows.iter().enumerate() {
        if row.len() != parsed.n {
            return err(format!(
                "row {i} has length {}, expected n={}",
                row.len(),
                parsed.n
            ));
        }
        let sub = Subset::from_bitstring(row)
            .ok_or_else(|| FormatError(format!("row {i} is not a 0/1 string")))?;
        rows.push(sub);
    }
    IncidenceStructure::from_rows(parsed.n, rows)
        .map_err(|e| FormatError(format!("invalid context: {e}")))
}

pub fn context_to_json(r: &IncidenceStructure) -> serde_json::Value {
    serde_json::json!({
        "m": r.m(),
        "n": r.n(),
        "rows": (0..r.m()).map(|i| r.row(i).unwrap().bitstring()).collect::<Vec<_>>(),
    })
}

/// Reads a context file, deciding the format by extension unless `force_json`.
pub fn read_context(path: &str, force_json: bool) -> Result<IncidenceStructure, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FormatError(format!("cannot read {path}: {e}")))?;
    if force_json || path.ends_with(".json") {
        parse_context_json(&text)
    } else {
        parse_cxt(&text).map(|(r, _, _)| r)
    }
}

#[derive(Deserialize)]
struct PosetJson {
    elements: Vec<String>,
    relation: Vec<(usize, usize)>,
}

/// Poset JSON: element names plus any sub-relation of the intended order;
/// the loader takes the reflexive-transitive closure and validates
/// antisymmetry.
pub fn parse_poset_json(text: &str) -> Result<Poset, FormatError> {
    let parsed: PosetJson =
        serde_json::from_str(text).map_err(|e| FormatError(format!("poset JSON: {e}")))?;
    let p = Poset::from_pairs(parsed.elements.len(), &parsed.relation)
        .map_err(|e| FormatError(format!("invalid poset: {e}")))?;
    p.with_labels(parsed.elements)
        .map_err(|e| FormatError(format!("invalid labels: {e}")))
}

pub fn poset_to_json(p: &Poset) -> serde_json::Value {
    let elements: Vec<String> = match p.labels() {
        Some(labels) => labels.to_vec(),
        None => default_names("x", p.size()),
    };
    let mut relation = Vec::new();
    for x in 0..p.size() {
        for y in 0..p.size() {
            if x != y && p.leq(x, y) {
                relation.push((x, y));
            }
        }
    }
    serde_json::json!({ "elements": elements, "relation": relation })
}

pub fn read_poset(path: &str) -> Result<Poset, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FormatError(format!("cannot read {path}: {e}")))?;
    parse_poset_json(&text)
}

#[derive(Deserialize)]
struct OpJson {
    name: String,
    arity: usize,
    table: Vec<usize>,
}

#[derive(Deserialize)]
struct AlgebraJson {
    size: usize,
    ops: Vec<OpJson>,
}

pub fn parse_algebra_json(text: &str) -> Result<FiniteAlgebra, FormatError> {
    let parsed: AlgebraJson =
        serde_json::from_str(text).map_err(|e| FormatError(format!("algebra JSON: {e}")))?;
    algebra_from_parts(parsed)
}

fn algebra_from_parts(parsed: AlgebraJson) -> Result<FiniteAlgebra, FormatError> {
    let mut ops = Vec::new();
    for op in parsed.ops {
        let built = Operation::new(parsed.size, op.arity, op.table)
            .map_err(|e| FormatError(format!("operation {}: {e}", op.name)))?;
        ops.push((op.name, built));
    }
    FiniteAlgebra::new(parsed.size, ops).map_err(|e| FormatError(format!("invalid algebra: {e}")))
}

pub fn preset_algebra(name: &str) -> Option<FiniteAlgebra> {
    match name {
        "boolean2" => Some(boolean2()),
        "lattice2" => Some(lattice2()),
        _ => None,
    }
}

/// Loads an algebra from `--preset` or a JSON file (exactly one of them).
pub fn load_algebra(
    path: Option<&str>,
    preset: Option<&str>,
) -> Result<FiniteAlgebra, FormatError> {
    match (path, preset) {
        (Some(_), Some(_)) => err("give either an algebra file or --preset, not both"),
        (None, None) => err("an algebra file or --preset is required"),
        (None, Some(p)) => {
            preset_algebra(p).ok_or_else(|| FormatError(format!("unknown preset {p:?}")))
        }
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| FormatError(format!("cannot read {path}: {e}")))?;
            parse_algebra_json(&text)
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AlgebraRef {
    Preset(String),
    Inline(AlgebraJson),
}

#[derive(Deserialize)]
struct MatrixJson {
    algebra: AlgebraRef,
    entries: Vec<Vec<usize>>,
}

pub fn parse_matrix_json(text: &str) -> Result<ValuedMatrix, FormatError> {
    let parsed: MatrixJson =
        serde_json::from_str(text).map_err(|e| FormatError(format!("matrix JSON: {e}")))?;
    let algebra = match parsed.algebra {
        AlgebraRef::Preset(name) => {
            preset_algebra(&name).ok_or_else(|| FormatError(format!("unknown preset {name:?}")))?
        }
        AlgebraRef::Inline(parts) => algebra_from_parts(parts)?,
    };
    ValuedMatrix::new(algebra, parsed.entries)
        .map_err(|e| FormatError(format!("invalid matrix: {e}")))
}

pub fn read_matrix(path: &str) -> Result<ValuedMatrix, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FormatError(format!("cannot read {path}: {e}")))?;
    parse_matrix_json(&text)
}

#[derive(Deserialize)]
struct BooleanFamilyJson {
    ground: usize,
    generators: Vec<String>,
}

#[derive(Deserialize)]
struct UniversalJson {
    poset: serde_json::Value,
    algebra: BooleanFamilyJson,
    map: Vec<String>,
}

/// Combined input of the universal-property check: a poset, a Boolean
/// set-algebra given by generators over a ground set, and the map as one
/// member bitstring per poset element.
pub struct UniversalInput {
    pub poset: Poset,
    pub algebra: GeneratedFamily,
    pub map: Vec<usize>,
}

pub fn parse_universal_json(text: &str, cap: usize) -> Result<UniversalInput, FormatError> {
    let parsed: UniversalJson =
        serde_json::from_str(text).map_err(|e| FormatError(format!("universal JSON: {e}")))?;
    let poset = parse_poset_json(&parsed.poset.to_string())?;
    let mut gens = Vec::new();
    for (i, g) in parsed.algebra.generators.iter().enumerate() {
        if g.len() != parsed.algebra.ground {
            return err(format!(
                "generator {i} has length {}, expected {}",
                g.len(),
                parsed.algebra.ground
            ));
        }
        gens.push(
            Subset::from_bitstring(g)
                .ok_or_else(|| FormatError(format!("generator {i} is not a 0/1 string")))?,
        );
    }
    let family = SetFamily::from_subsets(parsed.algebra.ground, gens);
    let algebra = generate_boolean_with_cap(&family, cap)
        .map_err(|e| FormatError(format!("algebra generation: {e}")))?;
    let mut map = Vec::new();
    for (x, entry) in parsed.map.iter().enumerate() {
        let s = Subset::from_bitstring(entry)
            .ok_or_else(|| FormatError(format!("map entry {x} is not a 0/1 string")))?;
        match algebra.position(&s) {
            Some(idx) => map.push(idx),
            None => {
                return err(format!(
                    "map entry {x} ({entry}) is not a member of the algebra"
                ))
            }
        }
    }
    Ok(UniversalInput {
        poset,
        algebra,
        map,
    })
}

pub fn read_universal(path: &str, cap: usize) -> Result<UniversalInput, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FormatError(format!("cannot read {path}: {e}")))?;
    parse_universal_json(&text, cap)
}

/// Parses a relation given inline as JSON tuples.
pub fn parse_relation_arg(
    universe: usize,
    arity: Option<usize>,
    text: &str,
) -> Result<dualkit::ualg::Relation, FormatError> {
    let tuples: Vec<Vec<usize>> =
        serde_json::from_str(text).map_err(|e| FormatError(format!("relation JSON: {e}")))?;
    let arity = match arity.or_else(|| tuples.first().map(|t| t.len())) {
        Some(a) => a,
        None => return err("empty relation needs an explicit arity"),
    };
    dualkit::ualg::Relation::new(universe, arity, tuples)
        .map_err(|e| FormatError(format!("invalid relation: {e}")))
}

pub fn parse_tuples_arg(text: &str) -> Result<Vec<Vec<usize>>, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError(format!("tuple JSON: {e}")))
}

pub fn family_bitstrings(fam: &SetFamily) -> Vec<String> {
    fam.iter().map(|s| s.bitstring()).collect()
}
