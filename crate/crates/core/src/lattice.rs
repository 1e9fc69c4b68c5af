//! Finite distributive lattices, their structure-preserving maps, and the
//! Birkhoff correspondence with finite posets.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::finstruct::{down_set_masks, poset_iso, FinPoset, Mask};

/// A finite distributive lattice stored with explicit join and meet tables.
#[derive(Clone, PartialEq, Eq)]
pub struct DistLattice {
    carrier: FinPoset,
    join: Vec<u32>,
    meet: Vec<u32>,
    bottom: usize,
    top: usize,
    generators: Option<Generators>,
}

/// The poset a down-set lattice was built from, with each element's mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub poset: Arc<FinPoset>,
    pub masks: Vec<Mask>,
    index: BTreeMap<Mask, usize>,
}

impl DistLattice {
    /// Validate an order as a distributive lattice and tabulate its operations.
    pub fn from_order(carrier: FinPoset) -> Result<Self> {
        let n = carrier.len();
        if n == 0 {
            return Err(Error::NotALattice("a lattice needs a bottom and a top".into()));
        }
        let lub = |x: usize, y: usize| -> Option<usize> {
            let ubs: Vec<usize> = (0..n).filter(|&z| carrier.le(x, z) && carrier.le(y, z)).collect();
            ubs.iter().copied().find(|&z| ubs.iter().all(|&w| carrier.le(z, w)))
        };
        let glb = |x: usize, y: usize| -> Option<usize> {
            let lbs: Vec<usize> = (0..n).filter(|&z| carrier.le(z, x) && carrier.le(z, y)).collect();
            lbs.iter().copied().find(|&z| lbs.iter().all(|&w| carrier.le(w, z)))
        };
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let missing = |what: &str| {
                    Error::NotALattice(format!(
                        "`{}` and `{}` have no {what}",
                        carrier.label(x),
                        carrier.label(y)
                    ))
                };
                join[x * n + y] = lub(x, y).ok_or_else(|| missing("least upper bound"))? as u32;
                meet[x * n + y] = glb(x, y).ok_or_else(|| missing("greatest lower bound"))? as u32;
            }
        }
        let bottom = (0..n).find(|&b| (0..n).all(|x| carrier.le(b, x)));
        let top = (0..n).find(|&t| (0..n).all(|x| carrier.le(x, t)));
        let (bottom, top) = match (bottom, top) {
            (Some(b), Some(t)) => (b, t),
            _ => return Err(Error::NotALattice("missing bottom or top".into())),
        };
        let l = DistLattice {
            carrier,
            join,
            meet,
            bottom,
            top,
            generators: None,
        };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)) {
                        return Err(Error::NotDistributive(
                            l.label(x).to_string(),
                            l.label(y).to_string(),
                            l.label(z).to_string(),
                        ));
                    }
                }
            }
        }
        Ok(l)
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    /// Never true: a lattice has at least a bottom.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn carrier(&self) -> &FinPoset {
        &self.carrier
    }

    pub fn label(&self, x: usize) -> &str {
        self.carrier.label(x)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.carrier.index_of(label)
    }

    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.carrier.le(x, y)
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y] as usize
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y] as usize
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |a, x| self.join(a, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |a, x| self.meet(a, x))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn generators(&self) -> Option<&Generators> {
        self.generators.as_ref()
    }

    /// The down-set an element stands for, when built by [`downset_lattice`].
    pub fn mask_of(&self, x: usize) -> Option<Mask> {
        self.generators.as_ref().map(|g| g.masks[x])
    }

    /// The element standing for a down-set, when built by [`downset_lattice`].
    pub fn element_of(&self, mask: Mask) -> Option<usize> {
        self.generators.as_ref().and_then(|g| g.index.get(&mask).copied())
    }

    /// Elements in an order where everything below `x` precedes `x`.
    pub fn linear_extension(&self) -> Vec<usize> {
        self.carrier.linear_extension()
    }

    /// Indices of the join-irreducible elements, in index order.
    pub fn join_irreducible_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| {
                x != self.bottom && self.join_all((0..self.len()).filter(|&y| self.carrier.lt(y, x))) != x
            })
            .collect()
    }

    /// Join-irreducibles as a poset, labelled like the lattice elements.
    pub fn join_irreducibles(&self) -> FinPoset {
        let ji = self.join_irreducible_elements();
        let labels = ji.iter().map(|&x| self.label(x).to_string()).collect();
        FinPoset::from_fn_unchecked(labels, |a, b| self.le(ji[a], ji[b]))
    }

    /// Complements of every element, if they all exist.
    pub fn is_boolean(&self) -> Option<BoolWitness> {
        let n = self.len();
        let complement = (0..n)
            .map(|x| {
                (0..n).find(|&y| self.join(x, y) == self.top && self.meet(x, y) == self.bottom)
            })
            .collect::<Option<Vec<usize>>>()?;
        Some(BoolWitness { complement })
    }

    /// Lattice with the same shape whose elements carry the given labels.
    pub fn relabel(&self, labels: Vec<String>) -> Result<Self> {
        Ok(DistLattice {
            carrier: self.carrier.relabel(labels)?,
            ..self.clone()
        })
    }
}

impl fmt::Debug for DistLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DistLattice{}", self.carrier)
    }
}

impl fmt::Display for DistLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.carrier, f)
    }
}

/// Complement table of a Boolean lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolWitness {
    pub complement: Vec<usize>,
}

/// The lattice of down-sets of `p` under inclusion, elements in canonical
/// down-set order and labelled like `{a,b}`.
pub fn downset_lattice(p: &Arc<FinPoset>) -> DistLattice {
    let masks = down_set_masks(p);
    let n = masks.len();
    let index: BTreeMap<Mask, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let labels: Vec<String> = masks.iter().map(|&m| p.mask_label(m)).collect();
    let carrier = FinPoset::from_fn_unchecked(labels, |a, b| masks[a] & !masks[b] == 0);
    let mut join = vec![0u32; n * n];
    let mut meet = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            join[a * n + b] = index[&(masks[a] | masks[b])] as u32;
            meet[a * n + b] = index[&(masks[a] & masks[b])] as u32;
        }
    }
    DistLattice {
        carrier,
        join,
        meet,
        bottom: 0,
        top: n - 1,
        generators: Some(Generators {
            poset: p.clone(),
            masks,
            index,
        }),
    }
}

/// The `n`-element chain lattice.
pub fn chain_lattice(n: usize) -> DistLattice {
    assert!(n >= 1, "a lattice has at least one element");
    downset_lattice(&Arc::new(FinPoset::chain(n - 1)))
}

/// The two-element lattice `{} < {*}`.
pub fn two() -> DistLattice {
    downset_lattice(&Arc::new(FinPoset::singleton()))
}

/// Which operations a map between lattices is known to preserve.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Preservation(u8);

impl Preservation {
    pub const NONE: Self = Preservation(0);
    pub const BOTTOM: Self = Preservation(1);
    pub const JOINS: Self = Preservation(2);
    pub const TOP: Self = Preservation(4);
    pub const MEETS: Self = Preservation(8);
    /// Bottom and binary joins: a hemimorphism.
    pub const HEMI: Self = Preservation(1 | 2);
    /// Top and binary meets.
    pub const DUAL_HEMI: Self = Preservation(4 | 8);
    pub const HOM: Self = Preservation(15);

    const NAMES: [(Self, &'static str); 4] = [
        (Self::BOTTOM, "preserves_bottom"),
        (Self::JOINS, "preserves_finite_joins"),
        (Self::TOP, "preserves_top"),
        (Self::MEETS, "preserves_finite_meets"),
    ];

    pub fn contains(self, other: Self) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn union(self, other: Self) -> Self {
        Preservation(self.0 | other.0)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn names(self) -> Vec<&'static str> {
        Self::NAMES
            .iter()
            .filter(|(p, _)| self.contains(*p))
            .map(|(_, n)| *n)
            .collect()
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "none" => Some(Self::NONE),
            "hemi" | "bottom_join" => Some(Self::HEMI),
            "dual_hemi" | "top_meet" => Some(Self::DUAL_HEMI),
            "hom" => Some(Self::HOM),
            _ => Self::NAMES.iter().find(|(_, n)| *n == name).map(|(p, _)| *p),
        }
    }
}

impl core::ops::BitOr for Preservation {
    type Output = Self;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl fmt::Debug for Preservation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(", "))
    }
}

/// A map between lattice carriers together with every flag it satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    source: Arc<DistLattice>,
    target: Arc<DistLattice>,
    table: Vec<usize>,
    class: Preservation,
}

fn preservation_of(table: &[usize], l: &DistLattice, m: &DistLattice) -> Preservation {
    let n = l.len();
    let mut class = Preservation::NONE;
    if table[l.bottom()] == m.bottom() {
        class = class | Preservation::BOTTOM;
    }
    if table[l.top()] == m.top() {
        class = class | Preservation::TOP;
    }
    let all = |op: &dyn Fn(&DistLattice, usize, usize) -> usize| {
        (0..n).all(|x| (0..n).all(|y| table[op(l, x, y)] == op(m, table[x], table[y])))
    };
    if all(&|k, x, y| k.join(x, y)) {
        class = class | Preservation::JOINS;
    }
    if all(&|k, x, y| k.meet(x, y)) {
        class = class | Preservation::MEETS;
    }
    class
}

/// Record exactly the preservation flags that hold of `table`.
pub fn classify_map(table: Vec<usize>, l: &Arc<DistLattice>, m: &Arc<DistLattice>) -> Result<LatticeMap> {
    if table.len() != l.len() {
        return Err(Error::TableLength {
            expected: l.len(),
            got: table.len(),
        });
    }
    if let Some(&bad) = table.iter().find(|&&y| y >= m.len()) {
        return Err(Error::UnknownElement(format!("index {bad}")));
    }
    let class = preservation_of(&table, l, m);
    Ok(LatticeMap {
        source: l.clone(),
        target: m.clone(),
        table,
        class,
    })
}

impl LatticeMap {
    pub fn identity(l: &Arc<DistLattice>) -> Self {
        LatticeMap {
            source: l.clone(),
            target: l.clone(),
            table: (0..l.len()).collect(),
            class: Preservation::HOM,
        }
    }

    pub fn constant(l: &Arc<DistLattice>, m: &Arc<DistLattice>, y: usize) -> Result<Self> {
        classify_map(vec![y; l.len()], l, m)
    }

    pub fn source(&self) -> &Arc<DistLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DistLattice> {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn class(&self) -> Preservation {
        self.class
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_hemimorphism(&self) -> bool {
        self.class.contains(Preservation::HEMI)
    }

    /// Fail unless every flag of `class` holds.
    pub fn require(&self, class: Preservation) -> Result<&Self> {
        if self.class.contains(class) {
            return Ok(self);
        }
        let missing = Preservation(class.0 & !self.class.0).names().join(", ");
        let msg = format!("map does not satisfy {missing}");
        Err(if class == Preservation::HEMI {
            Error::NotHemimorphism(msg)
        } else {
            Error::NotHomomorphism(msg)
        })
    }

    /// `self` first, then `g`.
    pub fn then(&self, g: &LatticeMap) -> Result<LatticeMap> {
        if *self.target != *g.source {
            return Err(Error::SourceTargetMismatch(format!(
                "cannot compose maps into {} with maps out of {}",
                self.target, g.source
            )));
        }
        let table = self.table.iter().map(|&y| g.table[y]).collect();
        classify_map(table, &self.source, &g.target)
    }
}

/// Every map `l -> m` satisfying at least the flags in `class`, in
/// lexicographic table order.
///
/// Elements of `l` are assigned in a linear extension, so each join
/// `a | b` is checked as soon as it is assigned and each meet as soon as
/// the later of its operands is.
pub fn enumerate_maps(l: &Arc<DistLattice>, m: &Arc<DistLattice>, class: Preservation) -> Vec<LatticeMap> {
    let n = l.len();
    let order = l.linear_extension();
    let mut pos = vec![0; n];
    for (k, &x) in order.iter().enumerate() {
        pos[x] = k;
    }
    let monotone = class.contains(Preservation::JOINS) || class.contains(Preservation::MEETS);
    // pairs whose join is x, both strictly below x
    let mut join_pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    if class.contains(Preservation::JOINS) {
        for a in 0..n {
            for b in a + 1..n {
                let j = l.join(a, b);
                if j != a && j != b {
                    join_pairs[j].push((a, b));
                }
            }
        }
    }
    struct Ctx<'a> {
        l: &'a DistLattice,
        m: &'a DistLattice,
        class: Preservation,
        monotone: bool,
        order: &'a [usize],
        pos: &'a [usize],
        join_pairs: &'a [Vec<(usize, usize)>],
    }
    fn ok(c: &Ctx, k: usize, x: usize, v: usize, table: &[usize]) -> bool {
        let (l, m) = (c.l, c.m);
        if c.class.contains(Preservation::BOTTOM) && x == l.bottom() && v != m.bottom() {
            return false;
        }
        if c.class.contains(Preservation::TOP) && x == l.top() && v != m.top() {
            return false;
        }
        for &y in &c.order[..k] {
            if c.monotone && l.le(y, x) && !m.le(table[y], v) {
                return false;
            }
            if c.class.contains(Preservation::MEETS) {
                let z = l.meet(x, y);
                let hz = if z == x { v } else { table[z] };
                if c.pos[z] <= k && hz != m.meet(v, table[y]) {
                    return false;
                }
            }
            if c.class.contains(Preservation::JOINS) {
                let z = l.join(x, y);
                if z == x && m.join(v, table[y]) != v {
                    return false;
                }
            }
        }
        c.join_pairs[x].iter().all(|&(a, b)| m.join(table[a], table[b]) == v)
    }
    fn go(c: &Ctx, k: usize, table: &mut [usize], out: &mut Vec<Vec<usize>>) {
        if k == c.order.len() {
            out.push(table.to_vec());
            return;
        }
        let x = c.order[k];
        for v in 0..c.m.len() {
            if ok(c, k, x, v, table) {
                table[x] = v;
                go(c, k + 1, table, out);
            }
        }
    }
    let ctx = Ctx {
        l,
        m,
        class,
        monotone,
        order: &order,
        pos: &pos,
        join_pairs: &join_pairs,
    };
    let mut tables = Vec::new();
    go(&ctx, 0, &mut vec![0; n], &mut tables);
    tables.sort();
    tables
        .into_iter()
        .map(|t| {
            let class = preservation_of(&t, l, m);
            debug_assert!(class.contains(ctx.class));
            LatticeMap {
                source: l.clone(),
                target: m.clone(),
                table: t,
                class,
            }
        })
        .collect()
}

/// An isomorphism `l -> m`, if one exists.
///
/// Both lattices are reduced to their join-irreducible posets, those are
/// matched by [`poset_iso`], and the match is extended by joins and then
/// verified as an order isomorphism.
pub fn lattice_iso(l: &DistLattice, m: &DistLattice) -> Option<Vec<usize>> {
    if l.len() != m.len() {
        return None;
    }
    let (jl, jm) = (l.join_irreducible_elements(), m.join_irreducible_elements());
    let phi = poset_iso(&l.join_irreducibles(), &m.join_irreducibles())?;
    let table: Vec<usize> = (0..l.len())
        .map(|x| {
            m.join_all(
                jl.iter()
                    .enumerate()
                    .filter(|(_, &j)| l.le(j, x))
                    .map(|(a, _)| jm[phi[a]]),
            )
        })
        .collect();
    let mut hit = vec![false; m.len()];
    for &y in &table {
        if core::mem::replace(&mut hit[y], true) {
            return None;
        }
    }
    for x in 0..l.len() {
        for y in 0..l.len() {
            if l.le(x, y) != m.le(table[x], table[y]) {
                return None;
            }
        }
    }
    Some(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finstruct::build_poset;

    fn lat(p: FinPoset) -> Arc<DistLattice> {
        Arc::new(downset_lattice(&Arc::new(p)))
    }

    #[test]
    fn downset_lattice_shapes() {
        let one = lat(FinPoset::empty());
        assert_eq!(one.len(), 1);
        assert_eq!(one.bottom(), one.top());
        let c3 = lat(FinPoset::chain(2));
        assert_eq!(c3.len(), 3);
        assert!(c3.carrier().covers().len() == 2);
        let diamond = lat(FinPoset::antichain(2));
        assert_eq!(diamond.len(), 4);
        assert_eq!(diamond.join(1, 2), 3);
        assert_eq!(diamond.meet(1, 2), 0);
    }

    #[test]
    fn join_irreducible_examples() {
        let c3 = lat(FinPoset::chain(2));
        let ji = c3.join_irreducibles();
        assert!(poset_iso(&ji, &FinPoset::chain(2)).is_some());
        let diamond = lat(FinPoset::antichain(2));
        assert!(diamond.join_irreducibles().is_antichain());
        assert_eq!(diamond.join_irreducibles().len(), 2);
        assert!(lat(FinPoset::empty()).join_irreducibles().is_empty());
    }

    #[test]
    fn classify_examples() {
        let c3 = lat(FinPoset::chain(2));
        assert_eq!(LatticeMap::identity(&c3).class(), Preservation::HOM);
        let bot = LatticeMap::constant(&c3, &c3, c3.bottom()).unwrap();
        assert_eq!(bot.class(), Preservation::HEMI | Preservation::MEETS);
        assert!(bot.class().contains(Preservation::HEMI));
        assert!(matches!(
            classify_map(vec![0, 1], &c3, &c3),
            Err(Error::TableLength { .. })
        ));
        assert!(matches!(
            classify_map(vec![0, 1, 7], &c3, &c3),
            Err(Error::UnknownElement(_))
        ));
    }

    #[test]
    fn hemimorphisms_of_three_chain() {
        // brute force over all 27 tables
        let c3 = lat(FinPoset::chain(2));
        let mut count = 0;
        for t in 0..27usize {
            let table = vec![t % 3, (t / 3) % 3, t / 9];
            if classify_map(table, &c3, &c3).unwrap().is_hemimorphism() {
                count += 1;
            }
        }
        assert_eq!(count, 6);
        assert_eq!(enumerate_maps(&c3, &c3, Preservation::HEMI).len(), 6);
    }

    #[test]
    fn booleanity() {
        assert!(lat(FinPoset::antichain(2)).is_boolean().is_some());
        assert!(lat(FinPoset::chain(2)).is_boolean().is_none());
        assert!(lat(FinPoset::empty()).is_boolean().is_some());
    }

    #[test]
    fn iso_examples() {
        let c3 = lat(FinPoset::chain(2));
        let diamond = lat(FinPoset::antichain(2));
        assert_eq!(lattice_iso(&c3, &c3), Some(vec![0, 1, 2]));
        assert!(lattice_iso(&c3, &diamond).is_none());
    }

    #[test]
    fn from_order_rejects_non_lattices_and_non_distributive() {
        let v = build_poset(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        assert!(matches!(DistLattice::from_order(v), Err(Error::NotALattice(_))));
        let m3 = build_poset(
            &["0", "x", "y", "z", "1"],
            &[("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")],
        )
        .unwrap();
        assert!(matches!(DistLattice::from_order(m3), Err(Error::NotDistributive(..))));
        let d = build_poset(
            &["0", "x", "y", "1"],
            &[("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")],
        )
        .unwrap();
        let d = DistLattice::from_order(d).unwrap();
        assert!(lattice_iso(&d, &lat(FinPoset::antichain(2))).is_some());
    }
}
