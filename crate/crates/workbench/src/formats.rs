//! JSON encodings of the core types.
//!
//! * `FinSeq`: an array of naturals.
//! * `CylExpr`: `{"op": ..., "args": [...]}` with ops `empty`, `full`,
//!   `atom` (args: the stem), `union`, `intersection`, `difference` (args:
//!   two subexpressions).
//! * Finite space: `{"points": n | [0, 1, ...], "opens": [[...], ...]}`;
//!   `∅` and the whole set are added when missing.
//! * Prefix map: `{"depth", "entries": [{"stem", "point"}], "default",
//!   "points", "opens"?}`; without `opens` the target is discrete.
//! * Scheme dump: `{"window": {"depth", "breadth"}, "nodes": [{"node", "set"}]}`.
//! * Run transcript: `[{"player": "I" | "II", "set": ...}, ...]`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use souslin_core::choquet::GameHistory;
use souslin_core::selectors::PrefixMap;
use souslin_core::space::SpaceError;
use souslin_core::{CylExpr, FinSeq, FiniteSpaceModel, Nat, PointSet, Scheme, SpaceModel, Window};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Shape(String),
    #[error("not a topology: {0:?}")]
    Space(SpaceError),
    #[error("bad prefix map: {0}")]
    Map(souslin_core::selectors::SelectorError),
}

fn shape(msg: impl Into<String>) -> FormatError {
    FormatError::Shape(msg.into())
}

pub fn seq_to_json(s: &FinSeq) -> Value {
    json!(s.entries())
}

pub fn seq_from_json(v: &Value) -> Result<FinSeq, FormatError> {
    let items = v.as_array().ok_or_else(|| shape("a sequence must be an array"))?;
    items
        .iter()
        .map(|x| x.as_u64().ok_or_else(|| shape(format!("{x} is not a natural number"))))
        .collect::<Result<Vec<Nat>, _>>()
        .map(FinSeq::from)
}

pub fn expr_to_json(e: &CylExpr) -> Value {
    match e {
        CylExpr::Empty => json!({"op": "empty", "args": []}),
        CylExpr::Full => json!({"op": "full", "args": []}),
        CylExpr::Atom(a) => json!({"op": "atom", "args": a.entries()}),
        CylExpr::Union(a, b) => json!({"op": "union", "args": [expr_to_json(a), expr_to_json(b)]}),
        CylExpr::Intersection(a, b) => {
            json!({"op": "intersection", "args": [expr_to_json(a), expr_to_json(b)]})
        }
        CylExpr::Difference(a, b) => {
            json!({"op": "difference", "args": [expr_to_json(a), expr_to_json(b)]})
        }
    }
}

pub fn expr_from_json(v: &Value) -> Result<CylExpr, FormatError> {
    let op = v.get("op").and_then(Value::as_str).ok_or_else(|| shape("expression needs an \"op\""))?;
    let args = match v.get("args") {
        None => Vec::new(),
        Some(a) => a.as_array().cloned().ok_or_else(|| shape("\"args\" must be an array"))?,
    };
    let two = |args: &[Value]| -> Result<(CylExpr, CylExpr), FormatError> {
        match args {
            [a, b] => Ok((expr_from_json(a)?, expr_from_json(b)?)),
            _ => Err(shape(format!("\"{op}\" takes two arguments"))),
        }
    };
    Ok(match op {
        "empty" => CylExpr::Empty,
        "full" => CylExpr::Full,
        "atom" => CylExpr::cylinder(seq_from_json(&Value::Array(args))?),
        "union" => {
            let (a, b) = two(&args)?;
            a.union(b)
        }
        "intersection" => {
            let (a, b) = two(&args)?;
            a.intersect(b)
        }
        "difference" => {
            let (a, b) = two(&args)?;
            a.minus(b)
        }
        other => return Err(shape(format!("unknown op \"{other}\""))),
    })
}

pub fn set_to_json(s: PointSet) -> Value {
    json!(s.points().collect::<Vec<_>>())
}

pub fn set_from_json(v: &Value) -> Result<PointSet, FormatError> {
    let items = v.as_array().ok_or_else(|| shape("a point set must be an array"))?;
    let mut out = PointSet::EMPTY;
    for x in items {
        let x = x.as_u64().filter(|&x| x < 64).ok_or_else(|| shape(format!("{x} is not a point index")))?;
        out = out | PointSet::singleton(x as usize);
    }
    Ok(out)
}

fn points_from_json(v: Option<&Value>) -> Result<usize, FormatError> {
    match v {
        Some(Value::Number(n)) => n.as_u64().map(|n| n as usize).ok_or_else(|| shape("bad point count")),
        Some(Value::Array(items)) => {
            for (i, x) in items.iter().enumerate() {
                if x.as_u64() != Some(i as u64) {
                    return Err(shape("points must be listed as 0, 1, 2, ..."));
                }
            }
            Ok(items.len())
        }
        _ => Err(shape("\"points\" must be a count or a list")),
    }
}

pub fn space_to_json(space: &FiniteSpaceModel) -> Value {
    json!({
        "points": (0..space.points()).collect::<Vec<_>>(),
        "opens": space.opens().iter().map(|o| set_to_json(*o)).collect::<Vec<_>>(),
    })
}

pub fn space_from_json(v: &Value) -> Result<FiniteSpaceModel, FormatError> {
    let points = points_from_json(v.get("points"))?;
    let opens = v.get("opens").and_then(Value::as_array).ok_or_else(|| shape("\"opens\" must be a list"))?;
    let mut sets = opens.iter().map(set_from_json).collect::<Result<Vec<_>, _>>()?;
    sets.push(PointSet::EMPTY);
    sets.push(PointSet::all(points));
    FiniteSpaceModel::new(points, sets).map_err(FormatError::Space)
}

#[derive(Debug, Serialize, Deserialize)]
struct MapEntry {
    stem: Vec<Nat>,
    point: usize,
}

pub fn prefix_map_to_json(f: &PrefixMap) -> Value {
    let entries: Vec<MapEntry> =
        f.table().iter().map(|(s, &x)| MapEntry { stem: s.entries().to_vec(), point: x }).collect();
    json!({
        "depth": f.depth(),
        "entries": entries,
        "default": f.default_point(),
        "points": (0..f.target().points()).collect::<Vec<_>>(),
        "opens": f.target().opens().iter().map(|o| set_to_json(*o)).collect::<Vec<_>>(),
    })
}

pub fn prefix_map_from_json(v: &Value) -> Result<PrefixMap, FormatError> {
    let depth = v.get("depth").and_then(Value::as_u64).ok_or_else(|| shape("\"depth\" missing"))? as usize;
    let default = v.get("default").and_then(Value::as_u64).ok_or_else(|| shape("\"default\" missing"))? as usize;
    let entries: Vec<MapEntry> = serde_json::from_value(v.get("entries").cloned().unwrap_or(json!([])))?;
    let target = if v.get("opens").is_some() {
        space_from_json(v)?
    } else {
        FiniteSpaceModel::discrete(points_from_json(v.get("points"))?)
    };
    let table = entries.into_iter().map(|e| (FinSeq::from(e.stem), e.point));
    PrefixMap::new(target, depth, table, default).map_err(FormatError::Map)
}

/// Set encodings per space model.
pub trait OpenJson: SpaceModel {
    fn open_to_json(&self, o: &Self::Open) -> Value;
}

impl OpenJson for FiniteSpaceModel {
    fn open_to_json(&self, o: &PointSet) -> Value {
        set_to_json(*o)
    }
}

impl OpenJson for souslin_core::BaireSpaceModel {
    fn open_to_json(&self, o: &CylExpr) -> Value {
        expr_to_json(o)
    }
}

/// Every window node and its value, shortest nodes first.
pub fn scheme_dump<M: OpenJson>(v: &Scheme<M>, window: &Window) -> Result<Value, FormatError> {
    let mut nodes = Vec::new();
    for a in window.nodes() {
        let set = v.try_node(&a).map_err(|e| shape(format!("node {a}: {e}")))?;
        nodes.push(json!({"node": seq_to_json(&a), "set": v.space().open_to_json(&set)}));
    }
    Ok(json!({
        "window": {"depth": window.depth(), "breadth": window.breadth()},
        "nodes": nodes,
    }))
}

pub fn transcript<M: OpenJson>(space: &M, history: &GameHistory<M::Open>) -> Value {
    let mut moves = Vec::new();
    for (u, v) in history.pairs() {
        moves.push(json!({"player": "I", "set": space.open_to_json(u)}));
        moves.push(json!({"player": "II", "set": space.open_to_json(v)}));
    }
    Value::Array(moves)
}

pub fn read_json(path: &Path) -> Result<Value, FormatError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions_round_trip() {
        let e: CylExpr = "S(0,1) | (S(2) \\ S(2,0)) & S()".parse().unwrap();
        let j = expr_to_json(&e);
        assert_eq!(expr_from_json(&j).unwrap(), e);
        assert_eq!(expr_to_json(&CylExpr::cylinder([4])), json!({"op": "atom", "args": [4]}));
        assert!(expr_from_json(&json!({"op": "xor", "args": []})).is_err());
    }

    #[test]
    fn spaces_round_trip() {
        let s = FiniteSpaceModel::sierpinski();
        assert_eq!(space_from_json(&space_to_json(&s)).unwrap(), s);
        let terse = json!({"points": 2, "opens": [[1]]});
        assert_eq!(space_from_json(&terse).unwrap(), s);
        assert!(matches!(
            space_from_json(&json!({"points": 3, "opens": [[0], [1, 2], [0, 1]]})),
            Err(FormatError::Space(_))
        ));
    }

    #[test]
    fn prefix_maps_round_trip() {
        for (_, f) in PrefixMap::presets() {
            assert_eq!(prefix_map_from_json(&prefix_map_to_json(&f)).unwrap(), f);
        }
        let discrete = json!({"depth": 1, "entries": [{"stem": [0], "point": 0}], "default": 1, "points": [0, 1]});
        let f = prefix_map_from_json(&discrete).unwrap();
        assert_eq!(f.target(), &FiniteSpaceModel::discrete(2));
    }

    #[test]
    fn scheme_dump_lists_window_nodes() {
        let v = souslin_core::schemes::standard_scheme();
        let d = scheme_dump(&v, &Window::new(1, 2)).unwrap();
        assert_eq!(d["nodes"].as_array().unwrap().len(), 3);
        assert_eq!(d["nodes"][1]["set"], json!({"op": "atom", "args": [0]}));
    }
}
