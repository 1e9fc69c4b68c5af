//! The subcommands, as functions from a workspace to output text.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use reldual::catalog::{lattices_up_to, posets_up_to, sets_up_to};
use reldual::duality::{coalg_to_operator, from_hemimorphism, operator_to_coalg, spectrum, spectrum_relation, DualityPackage};
use reldual::finstruct::{poset_product, FinPoset, SpecRelation};
use reldual::instances::relation_to_kleisli;
use reldual::lattice::{downset_lattice, DistLattice, LatticeMap};
use reldual::monoidal::{
    all_factorizations, copairing, factor_bimorphism, is_partial_map, is_total, joint_successor, lattice_tensor, pairing,
    present, specrel_product, tensor_rel, Bimorphism, Verdict,
};

use crate::error::InputError;
use crate::render;
use crate::report::{all_passed, render as render_report};
use crate::suites::run_suite;
use crate::workspace::{binding_json, serialize, Binding, Config, LatticeDef, LatticeRef, PosetRef, Workspace};

/// Output text and whether every check it reports passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn json(v: Value) -> Self {
        Outcome {
            text: format!("{}\n", serde_json::to_string_pretty(&v).expect("values serialize")),
            passed: true,
        }
    }
}

type Res<T> = Result<T, InputError>;

fn core(e: reldual::error::Error) -> InputError {
    InputError::Usage(e.to_string())
}

fn inline(p: &Arc<FinPoset>) -> PosetRef {
    PosetRef {
        name: None,
        poset: p.clone(),
    }
}

/// `J x` written as the down-sets of `x`.
fn dual_ref(x: &Arc<FinPoset>, jx: &Arc<DistLattice>) -> LatticeRef {
    LatticeRef {
        name: None,
        def: LatticeDef {
            lattice: jx.clone(),
            from_poset: Some(inline(x)),
        },
    }
}

fn plain_ref(l: &Arc<DistLattice>) -> LatticeRef {
    LatticeRef {
        name: None,
        def: LatticeDef {
            lattice: l.clone(),
            from_poset: None,
        },
    }
}

fn lattice_ref(l: &Arc<DistLattice>) -> LatticeRef {
    match l.generators() {
        Some(g) => dual_ref(&g.poset, l),
        None => plain_ref(l),
    }
}

fn relation_binding(r: &SpecRelation) -> Binding {
    Binding::Relation {
        source: inline(r.source()),
        target: inline(r.target()),
        relation: r.clone(),
    }
}

fn map_binding(m: &LatticeMap) -> Binding {
    Binding::Map {
        source: lattice_ref(m.source()),
        target: lattice_ref(m.target()),
        map: m.clone(),
    }
}

/// A workspace document holding the given bindings.
fn document(bindings: Vec<(&str, Binding)>) -> Value {
    let m: Map<String, Value> = bindings.into_iter().map(|(k, b)| (k.to_string(), binding_json(&b))).collect();
    json!({ "bindings": m })
}

/// A lattice binding, or the down-sets of a poset binding.
fn lattice_arg(ws: &Workspace, name: &str) -> Res<Arc<DistLattice>> {
    match ws.get(name)? {
        Binding::Poset(p) => Ok(Arc::new(downset_lattice(p))),
        Binding::Lattice(d) => Ok(d.lattice.clone()),
        b => Err(InputError::Usage(format!("`{name}` is a {}, expected a lattice or poset", b.tag()))),
    }
}

pub fn validate(ws: &Workspace) -> Outcome {
    Outcome::json(serialize(ws))
}

/// `J` of a relation through a package, or the relation of a hemimorphism.
pub fn dualize(ws: &Workspace, name: &str, package: &str) -> Res<Outcome> {
    let pkg = DualityPackage::by_name(package).ok_or_else(|| InputError::Usage(format!("unknown package `{package}`")))?;
    match ws.get(name)? {
        Binding::Map { map, .. } => {
            let r = from_hemimorphism(map).map_err(core)?;
            Ok(Outcome::json(document(vec![(name, relation_binding(&r))])))
        }
        _ => {
            let r = ws.relation(name)?;
            for x in [r.source(), r.target()] {
                if !pkg.admits(x) {
                    return Err(InputError::validation(name, format!("{} only takes discrete spaces, got {x}", pkg.name())));
                }
            }
            let m = pkg.dualize(&relation_to_kleisli(&r)).map_err(core)?;
            Ok(Outcome::json(document(vec![(name, map_binding(&m))])))
        }
    }
}

/// The points of a lattice, or the relation between spectra dual to a map.
pub fn spectrum_of(ws: &Workspace, name: &str) -> Res<Outcome> {
    match ws.get(name)? {
        Binding::Map { map, .. } => {
            let (sm, sl) = (spectrum(map.source()), spectrum(map.target()));
            let r = spectrum_relation(map, &sl, &sm).map_err(core)?;
            Ok(Outcome::json(document(vec![(name, relation_binding(&r))])))
        }
        _ => {
            let l = lattice_arg(ws, name)?;
            Ok(Outcome::json(document(vec![(name, Binding::Poset(spectrum(&l).points))])))
        }
    }
}

pub fn compose(ws: &Workspace, r: &str, s: &str) -> Res<Outcome> {
    let c = ws.relation(r)?.compose(&ws.relation(s)?).map_err(core)?;
    Ok(Outcome::json(document(vec![("composite", relation_binding(&c))])))
}

/// Two spaces: their product with projections and injections. Two
/// relations: the pairing (same source) or copairing (same target).
pub fn product(ws: &Workspace, a: &str, b: &str) -> Res<Outcome> {
    if let (Binding::Poset(x1), Binding::Poset(x2)) = (ws.get(a)?, ws.get(b)?) {
        let bp = specrel_product(x1, x2);
        return Ok(Outcome::json(document(vec![
            ("product", Binding::Poset(bp.sum.clone())),
            ("p1", relation_binding(&bp.p1)),
            ("p2", relation_binding(&bp.p2)),
            ("q1", relation_binding(&bp.q1)),
            ("q2", relation_binding(&bp.q2)),
        ])));
    }
    let (r, s) = (ws.relation(a)?, ws.relation(b)?);
    let (tag, out) = if r.source() == s.source() {
        ("pairing", pairing(&r, &s))
    } else {
        ("copairing", copairing(&r, &s))
    };
    Ok(Outcome::json(document(vec![(tag, relation_binding(&out.map_err(core)?))])))
}

/// Product of spaces, tensor of relations, or tensor of lattices with its
/// universal bimorphism.
pub fn tensor(ws: &Workspace, a: &str, b: &str) -> Res<Outcome> {
    match (ws.get(a)?, ws.get(b)?) {
        (Binding::Poset(x), Binding::Poset(y)) => {
            let (p, _, _) = poset_product(x, y);
            Ok(Outcome::json(document(vec![("tensor", Binding::Poset(p))])))
        }
        (Binding::Relation { .. } | Binding::Coalgebra { .. }, _) => {
            let t = tensor_rel(&ws.relation(a)?, &ws.relation(b)?);
            Ok(Outcome::json(document(vec![("tensor", relation_binding(&t))])))
        }
        _ => {
            let (la, lb) = (lattice_arg(ws, a)?, lattice_arg(ws, b)?);
            let (l, m) = (present(&la).0, present(&lb).0);
            let t = lattice_tensor(&l, &m).map_err(core)?;
            let p = t.universal.clone();
            Ok(Outcome::json(document(vec![
                ("tensor", Binding::Lattice(lattice_ref(&t.tensor).def)),
                (
                    "p",
                    Binding::Bimorphism {
                        left: lattice_ref(&p.left),
                        right: lattice_ref(&p.right),
                        target: lattice_ref(&p.target),
                        bimorphism: p,
                    },
                ),
            ])))
        }
    }
}

/// The hemimorphism out of the tensor through which a bimorphism factors.
/// Fails the check when the factorization is not unique.
pub fn factor(ws: &Workspace, name: &str) -> Res<Outcome> {
    let f = match ws.get(name)? {
        Binding::Bimorphism { bimorphism, .. } => bimorphism.clone(),
        b => return Err(InputError::Usage(format!("`{name}` is a {}, expected a bimorphism", b.tag()))),
    };
    let (l, il) = present(&f.left);
    let (m, im) = present(&f.right);
    let mut table = vec![0; l.len() * m.len()];
    for a in 0..f.left.len() {
        for b in 0..f.right.len() {
            table[il[a] * m.len() + im[b]] = f.apply(a, b);
        }
    }
    let f = Bimorphism::new(l.clone(), m.clone(), f.target.clone(), table).map_err(core)?;
    let t = lattice_tensor(&l, &m).map_err(core)?;
    let g = factor_bimorphism(&f, &t).map_err(core)?;
    let unique = all_factorizations(&f, &t).len() == 1;
    let mut out = Outcome::json(document(vec![("factor", map_binding(&g))]));
    out.passed = unique;
    Ok(out)
}

fn verdict_json(v: &Verdict) -> Value {
    json!({"holds": v.value(), "direct": v.direct, "composite": v.composite, "algebraic": v.algebraic})
}

/// Totality, partial-map and joint-successor verdicts by every route.
/// Fails the check when two routes disagree.
pub fn props(ws: &Workspace, r: &str, s: Option<&str>) -> Res<Outcome> {
    let rel = ws.relation(r)?;
    let total = is_total(&rel);
    let pm = is_partial_map(&rel);
    let mut v = json!({
        "relation": r,
        "total": verdict_json(&total),
        "partial_map": {
            "holds": pm.value(),
            "smallest": pm.smallest,
            "down_directed": pm.down_directed,
            "diagonal": pm.diagonal,
            "meets": pm.meets,
        },
    });
    let mut passed = total.consistent() && pm.consistent();
    if let Some(s) = s {
        let js = joint_successor(&rel, &ws.relation(s)?).map_err(core)?;
        passed &= js.consistent();
        v["joint_successor"] = json!({ "with": s, "verdict": verdict_json(&js) });
    }
    let mut out = Outcome::json(v);
    out.passed = passed;
    Ok(out)
}

/// Coalgebra to operator algebra on `J` of the carrier, or back.
pub fn coalg(ws: &Workspace, name: &str) -> Res<Outcome> {
    match ws.get(name)? {
        Binding::Coalgebra { coalgebra, .. } => {
            let a = coalg_to_operator(coalgebra);
            let b = Binding::Operator {
                lattice: dual_ref(&coalgebra.carrier, &a.lattice),
                operator: a,
            };
            Ok(Outcome::json(document(vec![(name, b)])))
        }
        Binding::Operator { operator, .. } => {
            let c = operator_to_coalg(operator).map_err(core)?;
            let b = Binding::Coalgebra {
                carrier: inline(&c.carrier),
                coalgebra: c,
            };
            Ok(Outcome::json(document(vec![(name, b)])))
        }
        b => Err(InputError::Usage(format!("`{name}` is a {}, expected a coalgebra or operator", b.tag()))),
    }
}

pub fn check(suite: &str, cfg: &Config, timings: bool) -> Res<Outcome> {
    let lines = run_suite(suite, cfg)?;
    Ok(Outcome {
        text: render_report(&lines, timings),
        passed: all_passed(&lines),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
}

pub fn render_binding(ws: &Workspace, name: &str, format: Format) -> Res<Outcome> {
    let b = ws.get(name)?;
    Ok(match format {
        Format::Dot => Outcome {
            text: render::binding(name, b),
            passed: true,
        },
        Format::Json => Outcome::json(document(vec![(name, b.clone())])),
    })
}

/// Catalog entries up to isomorphism: `sets` and `posets` by number of
/// points, `lattices` by number of elements.
pub fn enumerate(kind: &str, n: usize) -> Res<Outcome> {
    let items: Vec<Binding> = match kind {
        "sets" => sets_up_to(n).into_iter().map(Binding::Poset).collect(),
        "posets" => posets_up_to(n).into_iter().map(Binding::Poset).collect(),
        "lattices" => lattices_up_to(n)
            .into_iter()
            .map(|l| Binding::Lattice(plain_ref(&Arc::new(l)).def))
            .collect(),
        other => return Err(InputError::Usage(format!("cannot enumerate `{other}` (sets, posets or lattices)"))),
    };
    let width = items.len().to_string().len();
    let names: Vec<String> = (0..items.len()).map(|i| format!("{kind}_{i:0width$}")).collect();
    Ok(Outcome::json(document(names.iter().map(String::as_str).zip(items).collect())))
}
