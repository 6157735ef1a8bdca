//! JSON and DOT serialization.
//!
//! Scalars are written with [`Scalar::to_text`] (`"p/q"` for rationals) and
//! cells with their textual syntax `[n; x:p=b,...]`, so round trips are
//! exact. Object keys are sorted, which makes the output deterministic.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::dyadic::{Axis, BitMap, Branch, Cell, CellSet, Class, PosMap, Space, Src};
use crate::ell::Basis;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graphing::Graphing;
use crate::project::{Project, TestBundle};
use crate::scalar::{Ext, Scalar};
use crate::thick::{Dial, Sliced, ThickGraph};

fn bad(what: &str) -> Error {
    Error::Parse(format!("malformed {what}"))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(v, key)?.as_array().ok_or_else(|| bad(key))
}

fn text<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(what))
}

fn uint(v: &Value, key: &str) -> Result<u32> {
    field(v, key)?.as_u64().and_then(|n| u32::try_from(n).ok()).ok_or_else(|| bad(key))
}

fn scalar<W: Scalar>(v: &Value, what: &str) -> Result<W> {
    W::parse_text(text(v, what)?).ok_or_else(|| bad(what))
}

fn ext<W: Scalar>(v: &Value, what: &str) -> Result<Ext<W>> {
    Ext::parse_text(text(v, what)?).ok_or_else(|| bad(what))
}

pub fn graph_to_json<W: Scalar>(g: &Graph<W>) -> Value {
    json!({
        "vertices": g.vertices.iter().collect::<Vec<_>>(),
        "edges": g.edges.iter().map(|e| json!({"id": e.id, "src": e.src, "dst": e.dst, "weight": e.weight.to_text()})).collect::<Vec<_>>(),
    })
}

pub fn graph_from_json<W: Scalar>(v: &Value) -> Result<Graph<W>> {
    let vs = array(v, "vertices")?.iter().map(|x| text(x, "vertex").map(String::from)).collect::<Result<Vec<_>>>()?;
    let mut g = Graph::new(vs);
    for e in array(v, "edges")? {
        let s = |k: &str| -> Result<String> { Ok(text(field(e, k)?, k)?.to_string()) };
        g.add_edge(s("id")?, s("src")?, s("dst")?, scalar(field(e, "weight")?, "weight")?);
    }
    g.validate()?;
    Ok(g)
}

fn dial_from(v: &Value) -> Result<Dial> {
    v.as_array().ok_or_else(|| bad("dialect element"))?.iter().map(|a| text(a, "atom").map(String::from)).collect()
}

fn tvertex_from(v: &Value) -> Result<(String, Dial)> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([s, d]) => Ok((text(s, "vertex")?.to_string(), dial_from(d)?)),
        _ => Err(bad("thick vertex")),
    }
}

/// `{carrier, dialect, edges}` with vertices written `[s, [atoms]]`.
pub fn thick_to_json<W: Scalar>(g: &ThickGraph<W>) -> Value {
    json!({
        "carrier": g.carrier.iter().collect::<Vec<_>>(),
        "dialect": g.dialect,
        "edges": g.graph.edges.iter().map(|e| json!({
            "id": e.id,
            "src": [e.src.0, e.src.1],
            "dst": [e.dst.0, e.dst.1],
            "weight": e.weight.to_text(),
        })).collect::<Vec<_>>(),
    })
}

pub fn thick_from_json<W: Scalar>(v: &Value) -> Result<ThickGraph<W>> {
    let carrier = array(v, "carrier")?.iter().map(|x| text(x, "carrier").map(String::from)).collect::<Result<Vec<_>>>()?;
    let dialect = array(v, "dialect")?.iter().map(dial_from).collect::<Result<Vec<_>>>()?;
    let mut g = ThickGraph::new(carrier, dialect);
    for e in array(v, "edges")? {
        let id = text(field(e, "id")?, "id")?;
        g.graph.add_edge(id, tvertex_from(field(e, "src")?)?, tvertex_from(field(e, "dst")?)?, scalar(field(e, "weight")?, "weight")?);
    }
    g.validate()?;
    Ok(g)
}

pub fn sliced_to_json<W: Scalar>(s: &Sliced<W>) -> Value {
    json!({"slices": s.slices.iter().map(|(c, g)| json!({"coeff": c.to_text(), "graph": thick_to_json(g)})).collect::<Vec<_>>()})
}

pub fn sliced_from_json<W: Scalar>(v: &Value) -> Result<Sliced<W>> {
    let mut slices = Vec::new();
    for s in array(v, "slices")? {
        slices.push((scalar(field(s, "coeff")?, "coeff")?, thick_from_json(field(s, "graph")?)?));
    }
    let s = Sliced { slices };
    s.validate()?;
    Ok(s)
}

fn space_name(s: Space) -> &'static str {
    match s {
        Space::Line => "line",
        Space::Plane => "plane",
    }
}

fn space_from(v: &Value) -> Result<Space> {
    match v.as_str() {
        Some("line") => Ok(Space::Line),
        Some("plane") => Ok(Space::Plane),
        _ => Err(bad("space")),
    }
}

pub fn cellset_to_json(s: &CellSet) -> Value {
    json!({"space": space_name(s.space), "cells": s.cells().iter().map(|c| c.to_string()).collect::<Vec<_>>()})
}

pub fn cellset_from_json(v: &Value) -> Result<CellSet> {
    let space = space_from(field(v, "space")?)?;
    let cells = array(v, "cells")?.iter().map(|c| Cell::parse(text(c, "cell")?)).collect::<Result<Vec<_>>>()?;
    CellSet::new(space, cells)
}

fn axis_from(s: &str) -> Result<Axis> {
    match s {
        "x" => Ok(Axis::X),
        "y" => Ok(Axis::Y),
        _ => Err(bad("axis")),
    }
}

fn posmap_to_json(p: &PosMap) -> Value {
    json!({
        "head": p.head().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "tail": p.tail().iter().map(|c| json!({"axis": c.axis.name().to_string(), "slope": c.slope, "offset": c.offset})).collect::<Vec<_>>(),
    })
}

fn src_from(s: &str) -> Result<Src> {
    match s {
        "0" => Ok(Src::Const(false)),
        "1" => Ok(Src::Const(true)),
        _ if s.len() > 1 && s.is_char_boundary(1) => {
            let p: u32 = s[1..].parse().map_err(|_| bad("digit source"))?;
            Ok(Src::In(axis_from(&s[..1])?, p))
        }
        _ => Err(bad("digit source")),
    }
}

fn posmap_from(v: &Value) -> Result<PosMap> {
    let head = array(v, "head")?.iter().map(|s| src_from(text(s, "digit source")?)).collect::<Result<Vec<_>>>()?;
    let mut tail = Vec::new();
    for c in array(v, "tail")? {
        tail.push(Class { axis: axis_from(text(field(c, "axis")?, "axis")?)?, slope: uint(c, "slope")?, offset: uint(c, "offset")? });
    }
    PosMap::from_parts(head, tail)
}

/// `{from, to, branches: [{guard, base, out: [{head, tail}]}]}`. A digit
/// source is `"0"`, `"1"` or an axis letter followed by a position.
pub fn bitmap_to_json(m: &BitMap) -> Value {
    json!({
        "from": space_name(m.from),
        "to": space_name(m.to),
        "branches": m.branches.iter().map(|b| json!({
            "guard": b.guard.to_string(),
            "base": b.base,
            "out": b.out.iter().map(posmap_to_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn bitmap_from_json(v: &Value) -> Result<BitMap> {
    let mut branches = Vec::new();
    for b in array(v, "branches")? {
        let guard = Cell::parse(text(field(b, "guard")?, "guard")?)?;
        let base = field(b, "base")?.as_i64().ok_or_else(|| bad("base"))?;
        let out = array(b, "out")?.iter().map(posmap_from).collect::<Result<Vec<_>>>()?;
        branches.push(Branch::new(guard, base, out)?);
    }
    BitMap::new(space_from(field(v, "from")?)?, space_from(field(v, "to")?)?, branches)
}

pub fn graphing_to_json<W: Scalar>(g: &Graphing<W>) -> Value {
    json!({
        "carrier": cellset_to_json(&g.carrier),
        "dialect": g.dialect,
        "edges": g.edges.iter().map(|e| json!({
            "id": e.id,
            "weight": e.weight.to_text(),
            "src_dial": e.src_dial,
            "dst_dial": e.dst_dial,
            "map": bitmap_to_json(&e.map),
        })).collect::<Vec<_>>(),
    })
}

pub fn graphing_from_json<W: Scalar>(v: &Value) -> Result<Graphing<W>> {
    let mut g = Graphing::new(cellset_from_json(field(v, "carrier")?)?, uint(v, "dialect")?);
    for e in array(v, "edges")? {
        let id = text(field(e, "id")?, "id")?;
        let w = scalar(field(e, "weight")?, "weight")?;
        g = g.edge(id, w, (uint(e, "src_dial")?, uint(e, "dst_dial")?), bitmap_from_json(field(e, "map")?)?);
    }
    g.validate()?;
    Ok(g)
}

/// `{wager, carrier, slices: [{coeff, graphing}]}`; the wager may be `"inf"`.
pub fn project_to_json<W: Scalar>(p: &Project<W>) -> Value {
    json!({
        "wager": p.wager.to_text(),
        "carrier": cellset_to_json(&p.carrier),
        "slices": p.slices.iter().map(|(c, g)| json!({"coeff": c.to_text(), "graphing": graphing_to_json(g)})).collect::<Vec<_>>(),
    })
}

pub fn project_from_json<W: Scalar>(v: &Value) -> Result<Project<W>> {
    let mut slices = Vec::new();
    for s in array(v, "slices")? {
        slices.push((scalar(field(s, "coeff")?, "coeff")?, graphing_from_json(field(s, "graphing")?)?));
    }
    let p = Project { wager: ext(field(v, "wager")?, "wager")?, carrier: cellset_from_json(field(v, "carrier")?)?, slices };
    p.validate()?;
    Ok(p)
}

fn bundle_to_json<W: Scalar>(b: &TestBundle<W>) -> Value {
    json!({
        "generators": b.generators.iter().map(project_to_json).collect::<Vec<_>>(),
        "tests": b.tests.iter().map(project_to_json).collect::<Vec<_>>(),
    })
}

fn bundle_from_json<W: Scalar>(v: &Value) -> Result<TestBundle<W>> {
    Ok(TestBundle {
        generators: array(v, "generators")?.iter().map(project_from_json).collect::<Result<_>>()?,
        tests: array(v, "tests")?.iter().map(project_from_json).collect::<Result<_>>()?,
    })
}

/// Variable name to bundle; the key `"*"` holds the bundle used for names
/// without one. Bundles live on `[0,1)` and are translated into place.
pub fn basis_to_json<W: Scalar>(b: &Basis<W>) -> Value {
    let mut m = Map::new();
    for (k, v) in &b.bundles {
        m.insert(k.to_string(), bundle_to_json(v));
    }
    if let Some(f) = &b.fallback {
        m.insert("*".into(), bundle_to_json(f));
    }
    Value::Object(m)
}

pub fn basis_from_json<W: Scalar>(v: &Value) -> Result<Basis<W>> {
    let obj = v.as_object().ok_or_else(|| bad("basis"))?;
    let mut bundles = BTreeMap::new();
    let mut fallback = None;
    for (k, b) in obj {
        let b = bundle_from_json(b)?;
        if k == "*" {
            fallback = Some(b);
        } else {
            let name: u32 = k.parse().map_err(|_| Error::Parse(format!("basis key `{k}` is not a variable index")))?;
            bundles.insert(name, b);
        }
    }
    Ok(Basis { bundles, fallback })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn graph_to_dot<W: Scalar>(g: &Graph<W>) -> String {
    let mut out = String::from("digraph G {\n");
    for v in &g.vertices {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for e in &g.edges {
        let _ = writeln!(out, "  {} -> {} [label={}];", quote(&e.src), quote(&e.dst), quote(&format!("{} {}", e.id, e.weight.to_text())));
    }
    out.push_str("}\n");
    out
}

/// One cluster per carrier vertex, one node per dialect element.
pub fn thick_to_dot<W: Scalar>(g: &ThickGraph<W>) -> String {
    let node = |s: &str, d: &Dial| quote(&format!("{s}.{}", d.join(".")));
    let mut out = String::from("digraph G {\n");
    for (i, s) in g.carrier.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{\n    label={};", quote(s));
        for d in &g.dialect {
            let _ = writeln!(out, "    {};", node(s, d));
        }
        out.push_str("  }\n");
    }
    for e in &g.graph.edges {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            node(&e.src.0, &e.src.1),
            node(&e.dst.0, &e.dst.1),
            quote(&format!("{} {}", e.id, e.weight.to_text()))
        );
    }
    out.push_str("}\n");
    out
}

/// Nodes are (unit interval, dialect element); each edge is drawn from
/// every interval its source meets to every interval its target meets,
/// labelled with the cells involved.
pub fn graphing_to_dot<W: Scalar>(g: &Graphing<W>) -> String {
    let mut out = String::from("digraph G {\n");
    write_graphing(&mut out, g, "");
    out.push_str("}\n");
    out
}

fn write_graphing<W: Scalar>(out: &mut String, g: &Graphing<W>, prefix: &str) {
    let node = |b: i64, d: u32| quote(&format!("{prefix}[{b},{})@{d}", b + 1));
    for b in g.carrier.bases() {
        for d in 0..g.dialect {
            let _ = writeln!(out, "  {};", node(b, d));
        }
    }
    for e in &g.edges {
        let (src, dst) = (e.source(), e.target());
        let label = quote(&format!("{} {}: {} -> {}", e.id, e.weight.to_text(), src, dst));
        for a in src.bases() {
            for b in dst.bases() {
                let _ = writeln!(out, "  {} -> {} [label={}];", node(a, e.src_dial), node(b, e.dst_dial), label);
            }
        }
    }
}

/// One cluster per slice.
pub fn project_to_dot<W: Scalar>(p: &Project<W>) -> String {
    let mut out = format!("digraph G {{\n  label={};\n", quote(&format!("wager {}", p.wager.to_text())));
    for (i, (c, g)) in p.slices.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{\n  label={};", quote(&format!("slice {i}, coefficient {}", c.to_text())));
        write_graphing(&mut out, g, &format!("s{i}:"));
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

/// Recognizes the object by its fields and renders it.
pub fn json_to_dot(v: &Value) -> Result<String> {
    use crate::scalar::Rational;
    let has = |k: &str| v.get(k).is_some();
    if has("wager") {
        Ok(project_to_dot(&project_from_json::<Rational>(v)?))
    } else if has("slices") {
        let s = sliced_from_json::<Rational>(v)?;
        Ok(s.slices.iter().map(|(_, g)| thick_to_dot(g)).collect())
    } else if has("dialect") && v.get("carrier").is_some_and(|c| c.is_object()) {
        Ok(graphing_to_dot(&graphing_from_json::<Rational>(v)?))
    } else if has("dialect") {
        Ok(thick_to_dot(&thick_from_json::<Rational>(v)?))
    } else if has("vertices") {
        Ok(graph_to_dot(&graph_from_json::<Rational>(v)?))
    } else {
        Err(Error::Parse("not a graph, thick graph, sliced graph, graphing or project".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ell::interp::standard_bundle;
    use crate::samples;
    use crate::scalar::{rat, Rational};

    #[test]
    fn projects_round_trip() {
        let b = standard_bundle::<Rational>();
        for p in b.generators.iter().chain(b.tests.iter()) {
            let v = project_to_json(p);
            assert_eq!(&project_from_json::<Rational>(&v).unwrap(), p);
            let back = serde_json::to_string(&project_to_json(&project_from_json::<Rational>(&v).unwrap())).unwrap();
            assert_eq!(back, serde_json::to_string(&v).unwrap());
        }
        let d = Project::<Rational>::daemon(rat(1, 3), &CellSet::intervals([0, 2]));
        assert_eq!(project_from_json::<Rational>(&project_to_json(&d)).unwrap(), d);
    }

    #[test]
    fn graphs_round_trip() {
        for g in [samples::thick_g(), samples::thick_h(), samples::ctr_b()] {
            assert_eq!(thick_from_json::<Rational>(&thick_to_json(&g)).unwrap(), g);
            assert!(thick_to_dot(&g).starts_with("digraph"));
        }
        let (f, h) = samples::universal_pair();
        assert_eq!(sliced_from_json::<Rational>(&sliced_to_json(&f)).unwrap(), f);
        assert_eq!(sliced_from_json::<Rational>(&sliced_to_json(&h)).unwrap(), h);
        let g: Graph<Rational> = Graph::new(["a".to_string(), "b".to_string()]).edge("e", "a".into(), "b".into(), rat(2, 3));
        let v = graph_to_json(&g);
        assert_eq!(v["edges"][0]["weight"], "2/3");
        assert_eq!(graph_from_json::<Rational>(&v).unwrap(), g);
    }

    #[test]
    fn basis_round_trips() {
        let b = Basis::<Rational>::standard();
        let v = basis_to_json(&b);
        let c = basis_from_json::<Rational>(&v).unwrap();
        assert_eq!(c.fallback, b.fallback);
        assert_eq!(c.bundles, b.bundles);
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(project_from_json::<Rational>(&json!({"wager": "1/0", "carrier": {"space": "line", "cells": []}, "slices": []})).is_err());
        assert!(cellset_from_json(&json!({"space": "line", "cells": ["[0; x:0=1]"]})).is_err());
        assert!(graph_from_json::<Rational>(&json!({"vertices": ["a"], "edges": [{"id": "e", "src": "a", "dst": "z", "weight": "1"}]})).is_err());
    }
}
