//! JSON workspaces: named, type-tagged structures plus run configuration.
//!
//! ```json
//! {
//!   "bindings": {
//!     "c2": {"poset": {"elements": ["a", "b"], "le": [["a", "b"]]}},
//!     "r": {"relation": {"source": "c2", "target": "c2", "pairs": [["a", "b"], ["b", "b"]]}}
//!   },
//!   "config": {"cap_sets": 4, "seed": 0}
//! }
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use reldual::duality::{Coalgebra, OperatorAlgebra};
use reldual::finstruct::{build_poset, FinPoset, SpecRelation};
use reldual::lattice::{classify_map, downset_lattice, DistLattice, LatticeMap};
use reldual::monoidal::Bimorphism;

use crate::error::InputError;

/// Size caps, seed and parallelism for suites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Largest set in law and duality sweeps.
    pub cap_sets: usize,
    /// Largest poset in law and duality sweeps.
    pub cap_posets: usize,
    /// Largest space in sweeps over pairs and triples of spaces.
    pub cap_pairs: usize,
    /// Largest space in bimorphism and relation-pair sweeps.
    pub cap_tensor: usize,
    pub seed: u64,
    /// Worker threads; `None` lets the pool decide.
    pub jobs: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cap_sets: 4,
            cap_posets: 4,
            cap_pairs: 3,
            cap_tensor: 2,
            seed: 0,
            jobs: None,
        }
    }
}

/// A poset given by name or written out in place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetRef {
    pub name: Option<String>,
    pub poset: Arc<FinPoset>,
}

/// A lattice as written: explicitly, or as the down-sets of a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeDef {
    pub lattice: Arc<DistLattice>,
    pub from_poset: Option<PosetRef>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeRef {
    pub name: Option<String>,
    pub def: LatticeDef,
}

impl LatticeRef {
    pub fn lattice(&self) -> &Arc<DistLattice> {
        &self.def.lattice
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Poset(Arc<FinPoset>),
    Lattice(LatticeDef),
    Relation {
        source: PosetRef,
        target: PosetRef,
        relation: SpecRelation,
    },
    Map {
        source: LatticeRef,
        target: LatticeRef,
        map: LatticeMap,
    },
    Coalgebra {
        carrier: PosetRef,
        coalgebra: Coalgebra,
    },
    Operator {
        lattice: LatticeRef,
        operator: OperatorAlgebra,
    },
    Bimorphism {
        left: LatticeRef,
        right: LatticeRef,
        target: LatticeRef,
        bimorphism: Bimorphism,
    },
}

pub const TAGS: [&str; 7] = ["poset", "lattice", "relation", "map", "coalgebra", "operator", "bimorphism"];

impl Binding {
    pub fn tag(&self) -> &'static str {
        match self {
            Binding::Poset(_) => "poset",
            Binding::Lattice(_) => "lattice",
            Binding::Relation { .. } => "relation",
            Binding::Map { .. } => "map",
            Binding::Coalgebra { .. } => "coalgebra",
            Binding::Operator { .. } => "operator",
            Binding::Bimorphism { .. } => "bimorphism",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Workspace {
    pub bindings: BTreeMap<String, Binding>,
    pub config: Config,
}

type Res<T> = Result<T, InputError>;

fn obj<'a>(v: &'a Value, path: &str) -> Res<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| InputError::schema(path, "expected an object"))
}

fn arr<'a>(v: &'a Value, path: &str) -> Res<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| InputError::schema(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Res<&'a str> {
    v.as_str().ok_or_else(|| InputError::schema(path, "expected a string"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Res<&'a Value> {
    m.get(key).ok_or_else(|| InputError::schema(path, format!("missing field `{key}`")))
}

fn only_keys(m: &Map<String, Value>, allowed: &[&str], path: &str) -> Res<()> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(InputError::schema(path, format!("unexpected field `{k}`"))),
        None => Ok(()),
    }
}

/// `[[x, y], ...]` as label pairs.
fn pairs(v: &Value, path: &str) -> Res<Vec<(String, String)>> {
    arr(v, path)?
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let here = format!("{path}[{i}]");
            match arr(p, &here)?.as_slice() {
                [a, b] => Ok((string(a, &here)?.to_string(), string(b, &here)?.to_string())),
                _ => Err(InputError::schema(&here, "expected a pair")),
            }
        })
        .collect()
}

type Order = (Vec<String>, Vec<(String, String)>);

fn order_body(v: &Value, path: &str) -> Res<Order> {
    let m = obj(v, path)?;
    only_keys(m, &["elements", "le"], path)?;
    let elements = arr(field(m, "elements", path)?, &format!("{path}.elements"))?
        .iter()
        .enumerate()
        .map(|(i, e)| string(e, &format!("{path}.elements[{i}]")).map(str::to_string))
        .collect::<Res<Vec<_>>>()?;
    let le = match m.get("le") {
        Some(v) => pairs(v, &format!("{path}.le"))?,
        None => Vec::new(),
    };
    Ok((elements, le))
}

fn order_to_json(p: &FinPoset) -> Value {
    let le: Vec<Value> = p.covers().into_iter().map(|(a, b)| json!([p.label(a), p.label(b)])).collect();
    json!({"elements": p.labels(), "le": le})
}

struct Parser {
    posets: BTreeMap<String, Arc<FinPoset>>,
    lattices: BTreeMap<String, LatticeDef>,
}

impl Parser {
    fn poset_body(&self, v: &Value, path: &str, object: &str) -> Res<Arc<FinPoset>> {
        let (elements, le) = order_body(v, path)?;
        build_poset(&elements, &le).map(Arc::new).map_err(|e| InputError::validation(object, e))
    }

    fn poset_ref(&self, v: &Value, path: &str, object: &str) -> Res<PosetRef> {
        if let Some(name) = v.as_str() {
            let poset = self.posets.get(name).cloned().ok_or_else(|| {
                InputError::schema(path, format!("`{name}` is not a poset binding"))
            })?;
            return Ok(PosetRef {
                name: Some(name.to_string()),
                poset,
            });
        }
        let m = obj(v, path)?;
        let poset = match m.get("poset") {
            Some(inner) if m.len() == 1 => self.poset_body(inner, &format!("{path}.poset"), object)?,
            _ => self.poset_body(v, path, object)?,
        };
        Ok(PosetRef { name: None, poset })
    }

    fn lattice_body(&self, v: &Value, path: &str, object: &str) -> Res<LatticeDef> {
        let m = obj(v, path)?;
        if let Some(p) = m.get("from_poset") {
            only_keys(m, &["from_poset"], path)?;
            let src = self.poset_ref(p, &format!("{path}.from_poset"), object)?;
            return Ok(LatticeDef {
                lattice: Arc::new(downset_lattice(&src.poset)),
                from_poset: Some(src),
            });
        }
        let (elements, le) = order_body(v, path)?;
        let carrier = build_poset(&elements, &le).map_err(|e| InputError::validation(object, e))?;
        let lattice = DistLattice::from_order(carrier).map_err(|e| InputError::validation(object, e))?;
        Ok(LatticeDef {
            lattice: Arc::new(lattice),
            from_poset: None,
        })
    }

    fn lattice_ref(&self, v: &Value, path: &str, object: &str) -> Res<LatticeRef> {
        if let Some(name) = v.as_str() {
            let def = self.lattices.get(name).cloned().ok_or_else(|| {
                InputError::schema(path, format!("`{name}` is not a lattice binding"))
            })?;
            return Ok(LatticeRef {
                name: Some(name.to_string()),
                def,
            });
        }
        let m = obj(v, path)?;
        let def = match m.get("lattice") {
            Some(inner) if m.len() == 1 => self.lattice_body(inner, &format!("{path}.lattice"), object)?,
            _ => self.lattice_body(v, path, object)?,
        };
        Ok(LatticeRef { name: None, def })
    }

    fn element(&self, l: &DistLattice, label: &str, path: &str) -> Res<usize> {
        l.index_of(label)
            .ok_or_else(|| InputError::schema(path, format!("`{label}` is not an element of {l}")))
    }

    /// `{x: y}` covering every element of `l`.
    fn table(&self, v: &Value, l: &DistLattice, m: &DistLattice, path: &str) -> Res<Vec<usize>> {
        let t = obj(v, path)?;
        let mut out = vec![usize::MAX; l.len()];
        for (k, y) in t {
            let here = format!("{path}.{k}");
            let x = self.element(l, k, &here)?;
            out[x] = self.element(m, string(y, &here)?, &here)?;
        }
        if let Some(x) = out.iter().position(|&y| y == usize::MAX) {
            return Err(InputError::schema(path, format!("no value for `{}`", l.label(x))));
        }
        Ok(out)
    }

    fn binding(&self, tag: &str, body: &Value, path: &str, name: &str) -> Res<Binding> {
        let m = obj(body, path)?;
        let sub = |k: &str| format!("{path}.{k}");
        let invalid = |e: reldual::Error| InputError::validation(name, e);
        Ok(match tag {
            "poset" => Binding::Poset(self.poset_body(body, path, name)?),
            "lattice" => Binding::Lattice(self.lattice_body(body, path, name)?),
            "relation" => {
                only_keys(m, &["source", "target", "pairs"], path)?;
                let source = self.poset_ref(field(m, "source", path)?, &sub("source"), name)?;
                let target = self.poset_ref(field(m, "target", path)?, &sub("target"), name)?;
                let ps = pairs(field(m, "pairs", path)?, &sub("pairs"))?;
                let relation =
                    SpecRelation::from_labels(source.poset.clone(), target.poset.clone(), &ps).map_err(invalid)?;
                Binding::Relation {
                    source,
                    target,
                    relation,
                }
            }
            "map" => {
                only_keys(m, &["source", "target", "table"], path)?;
                let source = self.lattice_ref(field(m, "source", path)?, &sub("source"), name)?;
                let target = self.lattice_ref(field(m, "target", path)?, &sub("target"), name)?;
                let table = self.table(field(m, "table", path)?, source.lattice(), target.lattice(), &sub("table"))?;
                let map = classify_map(table, source.lattice(), target.lattice()).map_err(invalid)?;
                Binding::Map { source, target, map }
            }
            "coalgebra" => {
                only_keys(m, &["carrier", "pairs"], path)?;
                let carrier = self.poset_ref(field(m, "carrier", path)?, &sub("carrier"), name)?;
                let ps = pairs(field(m, "pairs", path)?, &sub("pairs"))?;
                let step =
                    SpecRelation::from_labels(carrier.poset.clone(), carrier.poset.clone(), &ps).map_err(invalid)?;
                let coalgebra = Coalgebra::new(step).map_err(invalid)?;
                Binding::Coalgebra { carrier, coalgebra }
            }
            "operator" => {
                only_keys(m, &["lattice", "table"], path)?;
                let lattice = self.lattice_ref(field(m, "lattice", path)?, &sub("lattice"), name)?;
                let l = lattice.lattice();
                let table = self.table(field(m, "table", path)?, l, l, &sub("table"))?;
                let op = classify_map(table, l, l).map_err(invalid)?;
                let operator = OperatorAlgebra::new(op).map_err(invalid)?;
                Binding::Operator { lattice, operator }
            }
            "bimorphism" => {
                only_keys(m, &["left", "right", "target", "table"], path)?;
                let left = self.lattice_ref(field(m, "left", path)?, &sub("left"), name)?;
                let right = self.lattice_ref(field(m, "right", path)?, &sub("right"), name)?;
                let target = self.lattice_ref(field(m, "target", path)?, &sub("target"), name)?;
                let (l, r, t) = (left.lattice(), right.lattice(), target.lattice());
                let mut table = vec![usize::MAX; l.len() * r.len()];
                for (i, row) in arr(field(m, "table", path)?, &sub("table"))?.iter().enumerate() {
                    let here = format!("{path}.table[{i}]");
                    match arr(row, &here)?.as_slice() {
                        [a, b, c] => {
                            let a = self.element(l, string(a, &here)?, &here)?;
                            let b = self.element(r, string(b, &here)?, &here)?;
                            table[a * r.len() + b] = self.element(t, string(c, &here)?, &here)?;
                        }
                        _ => return Err(InputError::schema(&here, "expected [left, right, value]")),
                    }
                }
                if let Some(k) = table.iter().position(|&v| v == usize::MAX) {
                    return Err(InputError::schema(
                        &sub("table"),
                        format!("no value for ({}, {})", l.label(k / r.len()), r.label(k % r.len())),
                    ));
                }
                let bimorphism = Bimorphism::new(l.clone(), r.clone(), t.clone(), table).map_err(invalid)?;
                Binding::Bimorphism {
                    left,
                    right,
                    target,
                    bimorphism,
                }
            }
            other => return Err(InputError::schema(path, format!("unknown tag `{other}`"))),
        })
    }
}

fn tagged(v: &Value, path: &str) -> Res<(String, Value)> {
    let m = obj(v, path)?;
    match (m.len(), m.iter().next()) {
        (1, Some((k, body))) if TAGS.contains(&k.as_str()) => Ok((k.clone(), body.clone())),
        _ => Err(InputError::schema(path, format!("expected exactly one of {}", TAGS.join(", ")))),
    }
}

/// Parse and validate a workspace document. A document that is a single
/// tagged structure becomes a workspace with one binding named after the tag.
pub fn parse(doc: &Value) -> Res<Workspace> {
    let top = obj(doc, "$")?;
    let wrapped;
    let (bindings_v, config_v) = if top.len() == 1 && TAGS.contains(&top.keys().next().unwrap().as_str()) {
        let (k, _) = top.iter().next().unwrap();
        wrapped = Value::Object(Map::from_iter([(k.clone(), doc.clone())]));
        (Some(&wrapped), None)
    } else {
        only_keys(top, &["bindings", "config"], "$")?;
        (top.get("bindings"), top.get("config"))
    };
    let config = match config_v {
        Some(c) => Config::deserialize(c).map_err(|e| InputError::schema("$.config", e.to_string()))?,
        None => Config::default(),
    };
    let empty = Map::new();
    let raw = match bindings_v {
        Some(b) => obj(b, "$.bindings")?,
        None => &empty,
    };
    let mut tags = BTreeMap::new();
    for (name, v) in raw {
        tags.insert(name.clone(), tagged(v, &format!("$.bindings.{name}"))?);
    }
    let mut p = Parser {
        posets: BTreeMap::new(),
        lattices: BTreeMap::new(),
    };
    let mut bindings = BTreeMap::new();
    // posets first, then lattices, then everything that refers to them
    for phase in [&["poset"][..], &["lattice"], &["relation", "map", "coalgebra", "operator", "bimorphism"]] {
        for (name, (tag, body)) in &tags {
            if !phase.contains(&tag.as_str()) {
                continue;
            }
            let path = format!("$.bindings.{name}.{tag}");
            let b = p.binding(tag, body, &path, name)?;
            match &b {
                Binding::Poset(x) => {
                    p.posets.insert(name.clone(), x.clone());
                }
                Binding::Lattice(d) => {
                    p.lattices.insert(name.clone(), d.clone());
                }
                _ => {}
            }
            bindings.insert(name.clone(), b);
        }
    }
    Ok(Workspace { bindings, config })
}

pub fn parse_str(text: &str) -> Res<Workspace> {
    let v: Value = serde_json::from_str(text).map_err(|e| InputError::schema("$", e.to_string()))?;
    parse(&v)
}

fn poset_ref_json(r: &PosetRef) -> Value {
    match &r.name {
        Some(n) => json!(n),
        None => order_to_json(&r.poset),
    }
}

fn lattice_def_json(d: &LatticeDef) -> Value {
    match &d.from_poset {
        Some(p) => json!({"from_poset": poset_ref_json(p)}),
        None => order_to_json(d.lattice.carrier()),
    }
}

fn lattice_ref_json(r: &LatticeRef) -> Value {
    match &r.name {
        Some(n) => json!(n),
        None => lattice_def_json(&r.def),
    }
}

fn pairs_json(r: &SpecRelation) -> Value {
    json!(r.label_pairs().into_iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>())
}

fn table_json(m: &LatticeMap) -> Value {
    let (s, t) = (m.source(), m.target());
    Value::Object((0..s.len()).map(|x| (s.label(x).to_string(), json!(t.label(m.apply(x))))).collect())
}

pub fn binding_json(b: &Binding) -> Value {
    let body = match b {
        Binding::Poset(p) => order_to_json(p),
        Binding::Lattice(d) => lattice_def_json(d),
        Binding::Relation {
            source,
            target,
            relation,
        } => json!({"source": poset_ref_json(source), "target": poset_ref_json(target), "pairs": pairs_json(relation)}),
        Binding::Map { source, target, map } => {
            json!({"source": lattice_ref_json(source), "target": lattice_ref_json(target), "table": table_json(map)})
        }
        Binding::Coalgebra { carrier, coalgebra } => {
            json!({"carrier": poset_ref_json(carrier), "pairs": pairs_json(&coalgebra.step)})
        }
        Binding::Operator { lattice, operator } => {
            json!({"lattice": lattice_ref_json(lattice), "table": table_json(&operator.op)})
        }
        Binding::Bimorphism {
            left,
            right,
            target,
            bimorphism,
        } => {
            let (l, r, t) = (&bimorphism.left, &bimorphism.right, &bimorphism.target);
            let rows: Vec<Value> = (0..l.len())
                .flat_map(|a| (0..r.len()).map(move |b| (a, b)))
                .map(|(a, b)| json!([l.label(a), r.label(b), t.label(bimorphism.apply(a, b))]))
                .collect();
            json!({
                "left": lattice_ref_json(left),
                "right": lattice_ref_json(right),
                "target": lattice_ref_json(target),
                "table": rows,
            })
        }
    };
    json!({ b.tag(): body })
}

pub fn serialize(ws: &Workspace) -> Value {
    let bindings: Map<String, Value> = ws.bindings.iter().map(|(k, b)| (k.clone(), binding_json(b))).collect();
    json!({
        "bindings": bindings,
        "config": serde_json::to_value(&ws.config).expect("config serializes"),
    })
}

/// Convenience wrappers for standalone objects.
pub fn poset_json(p: &FinPoset) -> Value {
    json!({ "poset": order_to_json(p) })
}

pub fn lattice_json(l: &DistLattice) -> Value {
    json!({ "lattice": order_to_json(l.carrier()) })
}

pub fn relation_json(r: &SpecRelation) -> Value {
    json!({"relation": {
        "source": order_to_json(r.source()),
        "target": order_to_json(r.target()),
        "pairs": pairs_json(r),
    }})
}

pub fn map_json(m: &LatticeMap) -> Value {
    json!({"map": {
        "source": order_to_json(m.source().carrier()),
        "target": order_to_json(m.target().carrier()),
        "table": table_json(m),
    }})
}

impl Workspace {
    pub fn get(&self, name: &str) -> Res<&Binding> {
        self.bindings.get(name).ok_or_else(|| InputError::UnknownBinding(name.to_string()))
    }

    fn wrong(name: &str, want: &str, b: &Binding) -> InputError {
        InputError::Usage(format!("`{name}` is a {}, expected a {want}", b.tag()))
    }

    pub fn poset(&self, name: &str) -> Res<Arc<FinPoset>> {
        match self.get(name)? {
            Binding::Poset(p) => Ok(p.clone()),
            b => Err(Self::wrong(name, "poset", b)),
        }
    }

    pub fn lattice(&self, name: &str) -> Res<Arc<DistLattice>> {
        match self.get(name)? {
            Binding::Lattice(d) => Ok(d.lattice.clone()),
            b => Err(Self::wrong(name, "lattice", b)),
        }
    }

    pub fn relation(&self, name: &str) -> Res<SpecRelation> {
        match self.get(name)? {
            Binding::Relation { relation, .. } => Ok(relation.clone()),
            Binding::Coalgebra { coalgebra, .. } => Ok(coalgebra.step.clone()),
            b => Err(Self::wrong(name, "relation", b)),
        }
    }
}
