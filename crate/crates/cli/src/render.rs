//! DOT output: Hasse diagrams for orders, bipartite digraphs for relations
//! and maps. Nodes are emitted in element order.

use std::fmt::Write;

use reldual::finstruct::{FinPoset, SpecRelation};
use reldual::lattice::LatticeMap;

use crate::workspace::Binding;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn hasse_body(out: &mut String, p: &FinPoset, prefix: &str, indent: &str) {
    for i in 0..p.len() {
        let _ = writeln!(out, "{indent}{} [label={}];", quote(&format!("{prefix}{i}")), quote(p.label(i)));
    }
    for (a, b) in p.covers() {
        let _ = writeln!(out, "{indent}{} -> {};", quote(&format!("{prefix}{a}")), quote(&format!("{prefix}{b}")));
    }
}

/// Transitive reduction, smaller elements at the bottom.
pub fn hasse(name: &str, p: &FinPoset) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=BT;\n", quote(name));
    hasse_body(&mut out, p, "n", "  ");
    out.push_str("}\n");
    out
}

fn bipartite(name: &str, s: &FinPoset, t: &FinPoset, edges: &[(usize, usize)], style: &str) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=LR;\n", quote(name));
    for (tag, p, prefix) in [("source", s, "s"), ("target", t, "t")] {
        let _ = writeln!(out, "  subgraph {} {{\n    label={};", quote(&format!("cluster_{tag}")), quote(tag));
        for i in 0..p.len() {
            let _ = writeln!(out, "    {} [label={}];", quote(&format!("{prefix}{i}")), quote(p.label(i)));
        }
        out.push_str("  }\n");
    }
    for (a, b) in edges {
        let _ = writeln!(out, "  {} -> {}{style};", quote(&format!("s{a}")), quote(&format!("t{b}")));
    }
    out.push_str("}\n");
    out
}

pub fn relation(name: &str, r: &SpecRelation) -> String {
    bipartite(name, r.source(), r.target(), &r.pairs(), "")
}

pub fn map(name: &str, m: &LatticeMap) -> String {
    let edges: Vec<_> = (0..m.source().len()).map(|x| (x, m.apply(x))).collect();
    bipartite(name, m.source().carrier(), m.target().carrier(), &edges, "")
}

/// Order edges solid, the extra structure dashed on the same nodes.
fn decorated(name: &str, p: &FinPoset, extra: &[(usize, usize)]) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=BT;\n", quote(name));
    hasse_body(&mut out, p, "n", "  ");
    for (a, b) in extra {
        let _ = writeln!(out, "  {} -> {} [style=dashed, constraint=false];", quote(&format!("n{a}")), quote(&format!("n{b}")));
    }
    out.push_str("}\n");
    out
}

pub fn binding(name: &str, b: &Binding) -> String {
    match b {
        Binding::Poset(p) => hasse(name, p),
        Binding::Lattice(d) => hasse(name, d.lattice.carrier()),
        Binding::Relation { relation, .. } => self::relation(name, relation),
        Binding::Map { map, .. } => self::map(name, map),
        Binding::Coalgebra { coalgebra, .. } => decorated(name, &coalgebra.carrier, &coalgebra.step.pairs()),
        Binding::Operator { operator, .. } => {
            let l = &operator.lattice;
            let edges: Vec<_> = (0..l.len()).map(|x| (x, operator.op.apply(x))).collect();
            decorated(name, l.carrier(), &edges)
        }
        Binding::Bimorphism { bimorphism, .. } => {
            let (l, r, t) = (&bimorphism.left, &bimorphism.right, &bimorphism.target);
            let mut out = format!("digraph {} {{\n  rankdir=LR;\n", quote(name));
            for a in 0..l.len() {
                for b in 0..r.len() {
                    let _ = writeln!(
                        out,
                        "  {} -> {};",
                        quote(&format!("({},{})", l.label(a), r.label(b))),
                        quote(t.label(bimorphism.apply(a, b)))
                    );
                }
            }
            out.push_str("}\n");
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use reldual::lattice::downset_lattice;
    use std::sync::Arc;

    fn edges(dot: &str) -> usize {
        dot.lines().filter(|l| l.contains("->")).count()
    }

    #[test]
    fn small_hasse_diagrams() {
        assert_eq!(edges(&hasse("p", &FinPoset::singleton())), 0);
        assert_eq!(hasse("p", &FinPoset::singleton()).matches("label=").count(), 1);
        assert_eq!(edges(&hasse("p", &FinPoset::chain(2))), 1);
        let j = downset_lattice(&Arc::new(FinPoset::chain(2)));
        let dot = hasse("j", j.carrier());
        assert_eq!(j.len(), 3);
        assert_eq!(edges(&dot), 2);
    }

    #[test]
    fn relations_are_bipartite() {
        let c = Arc::new(FinPoset::chain(2));
        let r = SpecRelation::identity(c);
        let dot = relation("r", &r);
        assert!(dot.contains("cluster_source") && dot.contains("cluster_target"));
        assert_eq!(edges(&dot), r.pairs().len());
    }
}
