//! Finite posets read as finite spectral spaces.
//!
//! The order `x <= y` means `y` lies in the closure of `{x}`. Under this
//! convention the open sets are exactly the down-sets and the closed sets are
//! the up-sets; the Sierpinski space `{0, 1}` with `{1}` open has `1 < 0`.
//!
//! Subsets are bit masks over the element indices, so every operation that
//! works with subsets requires at most [`MASK_BITS`] elements.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result, WeakeningWitness};

pub type Mask = u64;

/// Largest carrier a [`Mask`] can index.
pub const MASK_BITS: usize = 64;

/// Default bound on user supplied posets.
pub const DEFAULT_SIZE_CAP: usize = 16;

#[inline]
pub fn bit(i: usize) -> Mask {
    1 << i
}

/// Iterate the indices set in a mask, lowest first.
pub fn mask_iter(mut mask: Mask) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Default element names: `a`, `b`, ... and `x26`, `x27`, ... past `z`.
pub fn letter_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

/// A finite partial order on labelled elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinPoset {
    labels: Vec<String>,
    le: Vec<bool>,
    // Principal down-/up-sets, only populated when the carrier fits a mask.
    down: Vec<Mask>,
    up: Vec<Mask>,
}

impl FinPoset {
    /// Build from an order predicate, checking the partial order axioms.
    pub fn from_fn(labels: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        check_distinct(&labels)?;
        let n = labels.len();
        let table: Vec<bool> = (0..n * n).map(|k| le(k / n, k % n)).collect();
        for x in 0..n {
            if !table[x * n + x] {
                return Err(Error::NotALattice(format!(
                    "order is not reflexive at `{}`",
                    labels[x]
                )));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && table[x * n + y] && table[y * n + x] {
                    return Err(Error::AntisymmetryViolation(
                        labels[x].clone(),
                        labels[y].clone(),
                    ));
                }
                if !table[x * n + y] {
                    continue;
                }
                for z in 0..n {
                    if table[y * n + z] && !table[x * n + z] {
                        return Err(Error::NotALattice(format!(
                            "order is not transitive at `{}` <= `{}` <= `{}`",
                            labels[x], labels[y], labels[z]
                        )));
                    }
                }
            }
        }
        Ok(Self::from_table_unchecked(labels, table))
    }

    /// The caller guarantees `table` is a partial order.
    pub(crate) fn from_table_unchecked(labels: Vec<String>, le: Vec<bool>) -> Self {
        let n = labels.len();
        debug_assert_eq!(le.len(), n * n);
        let (mut down, mut up) = (Vec::new(), Vec::new());
        if n <= MASK_BITS {
            down = (0..n)
                .map(|x| (0..n).filter(|&y| le[y * n + x]).fold(0, |m, y| m | bit(y)))
                .collect();
            up = (0..n)
                .map(|x| (0..n).filter(|&y| le[x * n + y]).fold(0, |m, y| m | bit(y)))
                .collect();
        }
        FinPoset { labels, le, down, up }
    }

    pub(crate) fn from_fn_unchecked(labels: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Self {
        let n = labels.len();
        let table = (0..n * n).map(|k| le(k / n, k % n)).collect();
        Self::from_table_unchecked(labels, table)
    }

    pub fn empty() -> Self {
        Self::from_table_unchecked(Vec::new(), Vec::new())
    }

    /// Discrete order on the given labels: a finite set, or a finite Stone space.
    pub fn discrete(labels: Vec<String>) -> Result<Self> {
        check_distinct(&labels)?;
        Ok(Self::from_fn_unchecked(labels, |x, y| x == y))
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_fn_unchecked(letter_labels(n), |x, y| x == y)
    }

    /// `a < b < c < ...`
    pub fn chain(n: usize) -> Self {
        Self::from_fn_unchecked(letter_labels(n), |x, y| x <= y)
    }

    pub fn singleton() -> Self {
        Self::from_fn_unchecked(vec!["*".to_string()], |_, _| true)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn index_of_or_err(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.le[x * self.len() + y]
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.le(x, y)
    }

    pub fn fits_mask(&self) -> bool {
        self.len() <= MASK_BITS
    }

    fn assert_mask(&self) {
        assert!(
            self.fits_mask(),
            "subset operations need at most {MASK_BITS} elements, got {}",
            self.len()
        );
    }

    pub fn full_mask(&self) -> Mask {
        self.assert_mask();
        if self.len() == MASK_BITS {
            Mask::MAX
        } else {
            bit(self.len()) - 1
        }
    }

    /// `{y | y <= x}`
    #[inline]
    pub fn down_of(&self, x: usize) -> Mask {
        self.down[x]
    }

    /// `{y | x <= y}`, the closure of `{x}`.
    #[inline]
    pub fn up_of(&self, x: usize) -> Mask {
        self.up[x]
    }

    pub fn down_closure(&self, mask: Mask) -> Mask {
        self.assert_mask();
        mask_iter(mask).fold(0, |m, x| m | self.down[x])
    }

    pub fn up_closure(&self, mask: Mask) -> Mask {
        self.assert_mask();
        mask_iter(mask).fold(0, |m, x| m | self.up[x])
    }

    pub fn is_down_set(&self, mask: Mask) -> bool {
        self.down_closure(mask) == mask
    }

    pub fn is_up_set(&self, mask: Mask) -> bool {
        self.up_closure(mask) == mask
    }

    pub fn is_antichain(&self) -> bool {
        (0..self.len()).all(|x| (0..self.len()).all(|y| x == y || !self.le(x, y)))
    }

    /// Cover pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Topological order, minimal elements first; ties broken by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let next = (0..n)
                .find(|&x| !placed[x] && (0..n).all(|y| placed[y] || y == x || !self.le(y, x)))
                .expect("partial order has a minimal element");
            placed[next] = true;
            out.push(next);
        }
        out
    }

    /// Render a subset as `{a,b}`.
    pub fn mask_label(&self, mask: Mask) -> String {
        let mut s = String::from("{");
        for (k, i) in mask_iter(mask).enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(&self.labels[i]);
        }
        s.push('}');
        s
    }

    pub fn mask_from_labels<'a>(&self, labels: impl IntoIterator<Item = &'a str>) -> Result<Mask> {
        self.assert_mask();
        labels
            .into_iter()
            .try_fold(0, |m, l| Ok(m | bit(self.index_of_or_err(l)?)))
    }

    /// The same order with new labels.
    pub fn relabel(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::TableLength {
                expected: self.len(),
                got: labels.len(),
            });
        }
        check_distinct(&labels)?;
        Ok(Self::from_table_unchecked(labels, self.le.clone()))
    }

    /// Induced order on a subset, with the kept indices in increasing order.
    pub fn restrict(&self, mask: Mask) -> (FinPoset, Vec<usize>) {
        let keep: Vec<usize> = mask_iter(mask).collect();
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let sub = Self::from_fn_unchecked(labels, |a, b| self.le(keep[a], keep[b]));
        (sub, keep)
    }
}

impl fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}", self.labels.join(", "))?;
        let covers = self.covers();
        if !covers.is_empty() {
            write!(f, " |")?;
            for (k, (x, y)) in covers.iter().enumerate() {
                let sep = if k == 0 { " " } else { ", " };
                write!(f, "{sep}{}<{}", self.labels[*x], self.labels[*y])?;
            }
        }
        write!(f, "}}")
    }
}

fn check_distinct(labels: &[String]) -> Result<()> {
    let mut seen = BTreeMap::new();
    for l in labels {
        if seen.insert(l.as_str(), ()).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Reflexive-transitive closure of `pairs` over `labels`.
pub fn build_poset<S: AsRef<str>>(labels: &[S], pairs: &[(S, S)]) -> Result<FinPoset> {
    build_poset_capped(labels, pairs, DEFAULT_SIZE_CAP)
}

pub fn build_poset_capped<S: AsRef<str>>(
    labels: &[S],
    pairs: &[(S, S)],
    cap: usize,
) -> Result<FinPoset> {
    let labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
    if labels.len() > cap {
        return Err(Error::TooLarge {
            size: labels.len(),
            cap,
        });
    }
    check_distinct(&labels)?;
    let n = labels.len();
    let index = |l: &str| {
        labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Error::UnknownLabel(l.to_string()))
    };
    let mut le = vec![false; n * n];
    for x in 0..n {
        le[x * n + x] = true;
    }
    for (a, b) in pairs {
        let (x, y) = (index(a.as_ref())?, index(b.as_ref())?);
        le[x * n + y] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if le[i * n + k] {
                for j in 0..n {
                    if le[k * n + j] {
                        le[i * n + j] = true;
                    }
                }
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if le[x * n + y] && le[y * n + x] {
                return Err(Error::AntisymmetryViolation(labels[x].clone(), labels[y].clone()));
            }
        }
    }
    Ok(FinPoset::from_table_unchecked(labels, le))
}

/// Whether a subset is down-closed, up-closed, or carries no closure promise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    Down,
    Up,
    None,
}

/// A subset of a poset: an open (down), a closed set (up), or arbitrary.
#[derive(Debug, Clone, Copy)]
pub struct SubSet<'a> {
    pub parent: &'a FinPoset,
    pub mask: Mask,
    pub kind: Closure,
}

impl<'a> SubSet<'a> {
    pub fn new(parent: &'a FinPoset, mask: Mask, kind: Closure) -> Result<Self> {
        let ok = match kind {
            Closure::Down => parent.is_down_set(mask),
            Closure::Up => parent.is_up_set(mask),
            Closure::None => mask & !parent.full_mask() == 0,
        };
        if !ok {
            return Err(Error::Mismatch(format!(
                "{} is not {:?}-closed",
                parent.mask_label(mask),
                kind
            )));
        }
        Ok(SubSet { parent, mask, kind })
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask & bit(x) != 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        mask_iter(self.mask)
    }
}

impl PartialEq for SubSet<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask
            && self.kind == other.kind
            && (core::ptr::eq(self.parent, other.parent) || self.parent == other.parent)
    }
}

impl fmt::Display for SubSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.parent.mask_label(self.mask))
    }
}

fn canonical_sort(masks: &mut [Mask]) {
    masks.sort_by_key(|m| (m.count_ones(), *m));
}

/// All down-closed masks of an order on `0..n`, in canonical order
/// (by cardinality, then by numeric mask value).
///
/// `le` must be a partial order. Elements are visited in a linear extension so
/// every branch of the search yields a down-set.
pub fn enumerate_down_masks(n: usize, le: impl Fn(usize, usize) -> bool) -> Vec<Mask> {
    enumerate_down_masks_limited(n, le, usize::MAX).expect("no limit")
}

/// Like [`enumerate_down_masks`] but gives up once more than `limit`
/// down-sets have been found.
pub fn enumerate_down_masks_limited(
    n: usize,
    le: impl Fn(usize, usize) -> bool,
    limit: usize,
) -> Option<Vec<Mask>> {
    if n > MASK_BITS {
        return None;
    }
    let below: Vec<Mask> = (0..n)
        .map(|x| (0..n).filter(|&y| y != x && le(y, x)).fold(0, |m, y| m | bit(y)))
        .collect();
    // minimal-first order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| below[x].count_ones());
    let mut out = Vec::new();
    fn go(k: usize, cur: Mask, order: &[usize], below: &[Mask], limit: usize, out: &mut Vec<Mask>) -> bool {
        if k == order.len() {
            out.push(cur);
            return out.len() <= limit;
        }
        let x = order[k];
        if !go(k + 1, cur, order, below, limit, out) {
            return false;
        }
        if below[x] & !cur == 0 {
            return go(k + 1, cur | bit(x), order, below, limit, out);
        }
        true
    }
    if !go(0, 0, &order, &below, limit, &mut out) {
        return None;
    }
    canonical_sort(&mut out);
    Some(out)
}

pub fn enumerate_up_masks_limited(
    n: usize,
    le: impl Fn(usize, usize) -> bool,
    limit: usize,
) -> Option<Vec<Mask>> {
    enumerate_down_masks_limited(n, |x, y| le(y, x), limit)
}

/// All up-closed masks of an order on `0..n`, in canonical order.
pub fn enumerate_up_masks(n: usize, le: impl Fn(usize, usize) -> bool) -> Vec<Mask> {
    let mut out = enumerate_down_masks(n, |x, y| le(y, x));
    canonical_sort(&mut out);
    out
}

pub fn down_set_masks(p: &FinPoset) -> Vec<Mask> {
    p.assert_mask();
    enumerate_down_masks(p.len(), |x, y| p.le(x, y))
}

pub fn up_set_masks(p: &FinPoset) -> Vec<Mask> {
    p.assert_mask();
    enumerate_up_masks(p.len(), |x, y| p.le(x, y))
}

/// The opens of `p`: every down-closed subset, canonically ordered.
pub fn down_sets(p: &FinPoset) -> Vec<SubSet<'_>> {
    down_set_masks(p)
        .into_iter()
        .map(|mask| SubSet {
            parent: p,
            mask,
            kind: Closure::Down,
        })
        .collect()
}

/// The closed sets of `p`: every up-closed subset, canonically ordered.
pub fn up_sets(p: &FinPoset) -> Vec<SubSet<'_>> {
    up_set_masks(p)
        .into_iter()
        .map(|mask| SubSet {
            parent: p,
            mask,
            kind: Closure::Up,
        })
        .collect()
}

/// A monotone (equivalently, at finite scale, spectral) map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    source: Arc<FinPoset>,
    target: Arc<FinPoset>,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: Arc<FinPoset>, target: Arc<FinPoset>, table: Vec<usize>) -> Result<Self> {
        if table.len() != source.len() {
            return Err(Error::TableLength {
                expected: source.len(),
                got: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&y| y >= target.len()) {
            return Err(Error::UnknownElement(format!("index {bad}")));
        }
        for x in 0..source.len() {
            for y in 0..source.len() {
                if source.le(x, y) && !target.le(table[x], table[y]) {
                    return Err(Error::NotMonotone(
                        source.label(x).to_string(),
                        source.label(y).to_string(),
                    ));
                }
            }
        }
        Ok(MonotoneMap {
            source,
            target,
            table,
        })
    }

    pub(crate) fn new_unchecked(source: Arc<FinPoset>, target: Arc<FinPoset>, table: Vec<usize>) -> Self {
        debug_assert!(Self::new(source.clone(), target.clone(), table.clone()).is_ok());
        MonotoneMap {
            source,
            target,
            table,
        }
    }

    pub fn identity(p: Arc<FinPoset>) -> Self {
        let table = (0..p.len()).collect();
        MonotoneMap {
            source: p.clone(),
            target: p,
            table,
        }
    }

    pub fn constant(source: Arc<FinPoset>, target: Arc<FinPoset>, y: usize) -> Result<Self> {
        let table = vec![y; source.len()];
        Self::new(source, target, table)
    }

    pub fn source(&self) -> &Arc<FinPoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinPoset> {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self` first, then `g`.
    pub fn then(&self, g: &MonotoneMap) -> Result<MonotoneMap> {
        if *self.target != *g.source {
            return Err(Error::SourceTargetMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source, self.target, g.source, g.target
            )));
        }
        Ok(MonotoneMap {
            source: self.source.clone(),
            target: g.target.clone(),
            table: self.table.iter().map(|&y| g.table[y]).collect(),
        })
    }

    pub fn image(&self, mask: Mask) -> Mask {
        mask_iter(mask).fold(0, |m, x| m | bit(self.table[x]))
    }

    pub fn preimage(&self, mask: Mask) -> Mask {
        (0..self.source.len())
            .filter(|&x| mask & bit(self.table[x]) != 0)
            .fold(0, |m, x| m | bit(x))
    }

    /// Images of opens are open. Checking principal down-sets suffices since
    /// images commute with unions. Returns the first offending down-set.
    pub fn open_map_violation(&self) -> Option<Mask> {
        (0..self.source.len())
            .map(|x| self.source.down_of(x))
            .find(|&d| !self.target.is_down_set(self.image(d)))
    }

    pub fn is_open_map(&self) -> bool {
        self.open_map_violation().is_none()
    }

    /// Every monotone map `source -> target`, in lexicographic table order.
    pub fn all(source: &Arc<FinPoset>, target: &Arc<FinPoset>) -> Vec<MonotoneMap> {
        let n = source.len();
        let order = source.linear_extension();
        let mut table = vec![0usize; n];
        let mut out = Vec::new();
        fn go(
            k: usize,
            order: &[usize],
            table: &mut [usize],
            s: &FinPoset,
            t: &FinPoset,
            out: &mut Vec<Vec<usize>>,
        ) {
            if k == order.len() {
                out.push(table.to_vec());
                return;
            }
            let x = order[k];
            for v in 0..t.len() {
                // everything below x is already assigned
                if order[..k].iter().all(|&y| !s.le(y, x) || t.le(table[y], v)) {
                    table[x] = v;
                    go(k + 1, order, table, s, t, out);
                }
            }
        }
        let mut tables = Vec::new();
        go(0, &order, &mut table, source, target, &mut tables);
        tables.sort();
        for t in tables {
            out.push(MonotoneMap {
                source: source.clone(),
                target: target.clone(),
                table: t,
            });
        }
        out
    }
}

/// A weakening-closed relation between finite posets: a morphism of the
/// category of spectral spaces and spectral relations.
///
/// Stored as fibers `r(x) = {y | x r y}`, each an up-set, antitone in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecRelation {
    source: Arc<FinPoset>,
    target: Arc<FinPoset>,
    rows: Vec<Mask>,
}

/// Validate a raw pair set, reporting the first violating quadruple.
pub fn check_spec_relation(
    pairs: &[(usize, usize)],
    source: Arc<FinPoset>,
    target: Arc<FinPoset>,
) -> Result<SpecRelation> {
    target.assert_mask();
    let mut rows = vec![0; source.len()];
    for &(x, y) in pairs {
        if x >= source.len() {
            return Err(Error::UnknownElement(format!("source index {x}")));
        }
        if y >= target.len() {
            return Err(Error::UnknownElement(format!("target index {y}")));
        }
        rows[x] |= bit(y);
    }
    SpecRelation::from_rows(source, target, rows)
}

impl SpecRelation {
    pub fn from_rows(source: Arc<FinPoset>, target: Arc<FinPoset>, rows: Vec<Mask>) -> Result<Self> {
        if rows.len() != source.len() {
            return Err(Error::TableLength {
                expected: source.len(),
                got: rows.len(),
            });
        }
        let r = SpecRelation {
            source,
            target,
            rows,
        };
        match r.weakening_violation() {
            Some(w) => Err(Error::NotWeakeningClosed(w)),
            None => Ok(r),
        }
    }

    pub(crate) fn from_rows_unchecked(source: Arc<FinPoset>, target: Arc<FinPoset>, rows: Vec<Mask>) -> Self {
        let r = SpecRelation {
            source,
            target,
            rows,
        };
        debug_assert!(r.weakening_violation().is_none());
        r
    }

    pub fn from_labels<S: AsRef<str>>(
        source: Arc<FinPoset>,
        target: Arc<FinPoset>,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let idx = pairs
            .iter()
            .map(|(a, b)| Ok((source.index_of_or_err(a.as_ref())?, target.index_of_or_err(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        check_spec_relation(&idx, source, target)
    }

    /// First quadruple `(x, x', y', y)` breaking the weakening law, scanning
    /// `(x', y')` in row order, then `x` and `y` by index.
    pub fn weakening_violation(&self) -> Option<WeakeningWitness> {
        let (s, t) = (&*self.source, &*self.target);
        for xp in 0..s.len() {
            for yp in mask_iter(self.rows[xp]) {
                for x in 0..s.len() {
                    if !s.le(x, xp) {
                        continue;
                    }
                    for y in 0..t.len() {
                        if t.le(yp, y) && self.rows[x] & bit(y) == 0 {
                            return Some(WeakeningWitness {
                                x: s.label(x).to_string(),
                                x_above: s.label(xp).to_string(),
                                y_below: t.label(yp).to_string(),
                                y: t.label(y).to_string(),
                            });
                        }
                    }
                }
            }
        }
        None
    }

    /// The Kleisli identity: the order relation `<=` itself.
    pub fn identity(p: Arc<FinPoset>) -> Self {
        let rows = (0..p.len()).map(|x| p.up_of(x)).collect();
        SpecRelation {
            source: p.clone(),
            target: p,
            rows,
        }
    }

    pub fn empty(source: Arc<FinPoset>, target: Arc<FinPoset>) -> Self {
        let rows = vec![0; source.len()];
        SpecRelation {
            source,
            target,
            rows,
        }
    }

    pub fn full(source: Arc<FinPoset>, target: Arc<FinPoset>) -> Self {
        let rows = vec![target.full_mask(); source.len()];
        SpecRelation {
            source,
            target,
            rows,
        }
    }

    pub fn source(&self) -> &Arc<FinPoset> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinPoset> {
        &self.target
    }

    pub fn rows(&self) -> &[Mask] {
        &self.rows
    }

    /// `r(x)`, an up-set of the target.
    #[inline]
    pub fn fiber(&self, x: usize) -> Mask {
        self.rows[x]
    }

    #[inline]
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.rows[x] & bit(y) != 0
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.source.len())
            .flat_map(|x| mask_iter(self.rows[x]).map(move |y| (x, y)))
            .collect()
    }

    pub fn label_pairs(&self) -> Vec<(String, String)> {
        self.pairs()
            .into_iter()
            .map(|(x, y)| (self.source.label(x).to_string(), self.target.label(y).to_string()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Relational composite: first `self`, then `s`.
    pub fn compose(&self, s: &SpecRelation) -> Result<SpecRelation> {
        if *self.target != *s.source {
            return Err(Error::SourceTargetMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source, self.target, s.source, s.target
            )));
        }
        let rows: Vec<Mask> = self
            .rows
            .iter()
            .map(|&r| mask_iter(r).fold(0, |m, y| m | s.rows[y]))
            .collect();
        let out = SpecRelation::from_rows_unchecked(self.source.clone(), s.target.clone(), rows);
        #[cfg(debug_assertions)]
        {
            let kleisli = self.compose_via_vietoris(s)?;
            debug_assert_eq!(out, kleisli, "relational and Kleisli composites differ");
        }
        Ok(out)
    }

    /// The Kleisli composite `m . V(s^) . r^` through the lower Vietoris
    /// monad, evaluated literally: `V(s^)` sends `r(x)` to the up-closure of
    /// `{s(y) | y in r(x)}` inside `VZ` (all closed sets below some `s(y)` in
    /// reverse inclusion), and `m` takes the union.
    pub fn compose_via_vietoris(&self, s: &SpecRelation) -> Result<SpecRelation> {
        if *self.target != *s.source {
            return Err(Error::SourceTargetMismatch(String::from("middle objects differ")));
        }
        let vz = up_set_masks(&s.target);
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let family: Vec<Mask> = vz
                    .iter()
                    .copied()
                    .filter(|&c| mask_iter(r).any(|y| c & !s.rows[y] == 0))
                    .collect();
                family.iter().fold(0, |m, c| m | c)
            })
            .collect();
        SpecRelation::from_rows(self.source.clone(), s.target.clone(), rows)
    }

    /// `f_*`: `x f_* y` iff `f(x) <= y`.
    pub fn lower_graph(f: &MonotoneMap) -> SpecRelation {
        let t = f.target();
        let rows = f.table().iter().map(|&fx| t.up_of(fx)).collect();
        SpecRelation::from_rows_unchecked(f.source().clone(), t.clone(), rows)
    }

    /// `f^*`: `y f^* x` iff `y <= f(x)`, a relation from the target of `f`
    /// back to its source.
    pub fn upper_graph(f: &MonotoneMap, openness_required: bool) -> Result<SpecRelation> {
        if openness_required {
            if let Some(d) = f.open_map_violation() {
                return Err(Error::NotOpenMap(f.source().mask_label(d)));
            }
        }
        let (s, t) = (f.source(), f.target());
        let rows = (0..t.len())
            .map(|y| {
                (0..s.len())
                    .filter(|&x| t.le(y, f.apply(x)))
                    .fold(0, |m, x| m | bit(x))
            })
            .collect();
        SpecRelation::from_rows(t.clone(), s.clone(), rows)
    }

    /// Every weakening-closed relation `source -> target`.
    ///
    /// Fibers are chosen maximal elements first; each fiber must contain the
    /// fibers of everything above it, so no branch is wasted.
    pub fn all(source: &Arc<FinPoset>, target: &Arc<FinPoset>) -> Vec<SpecRelation> {
        let ups = up_set_masks(target);
        let mut order = source.linear_extension();
        order.reverse();
        let mut rows = vec![0; source.len()];
        let mut out = Vec::new();
        fn go(
            k: usize,
            order: &[usize],
            ups: &[Mask],
            s: &FinPoset,
            rows: &mut [Mask],
            out: &mut Vec<Vec<Mask>>,
        ) {
            if k == order.len() {
                out.push(rows.to_vec());
                return;
            }
            let x = order[k];
            let need = order[..k]
                .iter()
                .filter(|&&y| s.le(x, y))
                .fold(0, |m, &y| m | rows[y]);
            for &u in ups {
                if need & !u == 0 {
                    rows[x] = u;
                    go(k + 1, order, ups, s, rows, out);
                }
            }
        }
        let mut all_rows = Vec::new();
        go(0, &order, &ups, source, &mut rows, &mut all_rows);
        all_rows.sort();
        for r in all_rows {
            out.push(SpecRelation {
                source: source.clone(),
                target: target.clone(),
                rows: r,
            });
        }
        out
    }
}

impl fmt::Display for SpecRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (x, y)) in self.label_pairs().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x},{y})")?;
        }
        write!(f, "}}")
    }
}

/// Disjoint union with no order between the summands, and its injections.
///
/// Labels are namespaced as `1:a` and `2:a`.
pub fn poset_sum(x1: &Arc<FinPoset>, x2: &Arc<FinPoset>) -> (Arc<FinPoset>, MonotoneMap, MonotoneMap) {
    let (n1, n2) = (x1.len(), x2.len());
    let labels = x1
        .labels()
        .iter()
        .map(|l| format!("1:{l}"))
        .chain(x2.labels().iter().map(|l| format!("2:{l}")))
        .collect();
    let sum = Arc::new(FinPoset::from_fn_unchecked(labels, |a, b| {
        if a < n1 && b < n1 {
            x1.le(a, b)
        } else if a >= n1 && b >= n1 {
            x2.le(a - n1, b - n1)
        } else {
            false
        }
    }));
    let i1 = MonotoneMap::new_unchecked(x1.clone(), sum.clone(), (0..n1).collect());
    let i2 = MonotoneMap::new_unchecked(x2.clone(), sum.clone(), (n1..n1 + n2).collect());
    (sum, i1, i2)
}

/// Index of `(a, b)` in [`poset_product`].
#[inline]
pub fn pair_index(a: usize, b: usize, right_len: usize) -> usize {
    a * right_len + b
}

/// Cartesian product with the componentwise order, and its projections.
/// Element `(a, b)` sits at `a * |X2| + b` and is labelled `(a,b)`.
pub fn poset_product(x1: &Arc<FinPoset>, x2: &Arc<FinPoset>) -> (Arc<FinPoset>, MonotoneMap, MonotoneMap) {
    let (n1, n2) = (x1.len(), x2.len());
    let mut labels = Vec::with_capacity(n1 * n2);
    for a in 0..n1 {
        for b in 0..n2 {
            labels.push(format!("({},{})", x1.label(a), x2.label(b)));
        }
    }
    let prod = Arc::new(FinPoset::from_fn_unchecked(labels, |p, q| {
        x1.le(p / n2, q / n2) && x2.le(p % n2, q % n2)
    }));
    let p1 = MonotoneMap::new_unchecked(prod.clone(), x1.clone(), (0..n1 * n2).map(|p| p / n2).collect());
    let p2 = MonotoneMap::new_unchecked(prod.clone(), x2.clone(), (0..n1 * n2).map(|p| p % n2).collect());
    (prod, p1, p2)
}

/// An order isomorphism `p -> q`, if any, as an index table.
///
/// Backtracking over elements of `p`, candidates filtered by the sizes of
/// principal down- and up-sets; the first solution in index order wins.
pub fn poset_iso(p: &FinPoset, q: &FinPoset) -> Option<Vec<usize>> {
    let n = p.len();
    if n != q.len() {
        return None;
    }
    let sig = |s: &FinPoset, x: usize| {
        let down = (0..s.len()).filter(|&y| s.le(y, x)).count();
        let up = (0..s.len()).filter(|&y| s.le(x, y)).count();
        (down, up)
    };
    let ps: Vec<_> = (0..n).map(|x| sig(p, x)).collect();
    let qs: Vec<_> = (0..n).map(|x| sig(q, x)).collect();
    let mut a = ps.clone();
    let mut b = qs.clone();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        x: usize,
        p: &FinPoset,
        q: &FinPoset,
        ps: &[(usize, usize)],
        qs: &[(usize, usize)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if x == p.len() {
            return true;
        }
        for y in 0..q.len() {
            if used[y] || ps[x] != qs[y] {
                continue;
            }
            if (0..x).all(|z| p.le(z, x) == q.le(map[z], y) && p.le(x, z) == q.le(y, map[z])) {
                map[x] = y;
                used[y] = true;
                if go(x + 1, p, q, ps, qs, map, used) {
                    return true;
                }
                used[y] = false;
            }
        }
        false
    }
    if go(0, p, q, &ps, &qs, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(p: FinPoset) -> Arc<FinPoset> {
        Arc::new(p)
    }

    #[test]
    fn build_poset_examples() {
        let empty = build_poset::<&str>(&[], &[]).unwrap();
        assert!(empty.is_empty());
        let chain = build_poset(&["a", "b"], &[("a", "b")]).unwrap();
        assert!(chain.lt(0, 1) && !chain.le(1, 0));
        assert_eq!(
            build_poset(&["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(Error::AntisymmetryViolation("a".into(), "b".into()))
        );
        assert_eq!(
            build_poset(&["a"], &[("a", "z")]),
            Err(Error::UnknownLabel("z".into()))
        );
        assert!(matches!(
            build_poset(&["a", "a"], &[]),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn closure_is_transitive() {
        let p = build_poset(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(p.le(0, 2));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn size_cap_is_enforced() {
        let labels = letter_labels(5);
        let err = build_poset_capped::<String>(&labels, &[], 4).unwrap_err();
        assert_eq!(err, Error::TooLarge { size: 5, cap: 4 });
    }

    #[test]
    fn down_and_up_sets_of_small_posets() {
        let empty = FinPoset::empty();
        assert_eq!(down_set_masks(&empty), vec![0]);
        let c2 = FinPoset::chain(2);
        assert_eq!(down_set_masks(&c2), vec![0, 0b01, 0b11]);
        assert_eq!(up_set_masks(&c2), vec![0, 0b10, 0b11]);
        let a2 = FinPoset::antichain(2);
        assert_eq!(down_set_masks(&a2), vec![0, 0b01, 0b10, 0b11]);
        assert_eq!(up_set_masks(&FinPoset::singleton()), vec![0, 1]);
        assert!(down_sets(&c2).iter().all(|s| s.kind == Closure::Down));
    }

    #[test]
    fn weakening_witness_on_chain() {
        let c2 = arc(FinPoset::chain(2));
        let err = check_spec_relation(&[(1, 1)], c2.clone(), c2.clone()).unwrap_err();
        assert_eq!(
            err,
            Error::NotWeakeningClosed(WeakeningWitness {
                x: "a".into(),
                x_above: "b".into(),
                y_below: "b".into(),
                y: "b".into(),
            })
        );
        assert!(check_spec_relation(&[], c2.clone(), c2.clone()).is_ok());
        let full: Vec<_> = (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).collect();
        assert!(check_spec_relation(&full, c2.clone(), c2).is_ok());
    }

    #[test]
    fn lower_graph_examples() {
        let c2 = arc(FinPoset::chain(2));
        let id = MonotoneMap::identity(c2.clone());
        assert_eq!(SpecRelation::lower_graph(&id), SpecRelation::identity(c2.clone()));
        let top = MonotoneMap::constant(c2.clone(), c2.clone(), 1).unwrap();
        assert_eq!(SpecRelation::lower_graph(&top).pairs(), vec![(0, 1), (1, 1)]);
        let a2 = arc(FinPoset::antichain(2));
        let bottom = MonotoneMap::constant(a2, c2, 0).unwrap();
        assert_eq!(
            SpecRelation::lower_graph(&bottom).pairs(),
            vec![(0, 0), (0, 1), (1, 0), (1, 1)]
        );
    }

    #[test]
    fn upper_graph_of_identity_relates_y_to_everything_above() {
        // y id^* x iff y <= x, i.e. x >= y read from the source side
        let c2 = arc(FinPoset::chain(2));
        let r = SpecRelation::upper_graph(&MonotoneMap::identity(c2.clone()), true).unwrap();
        assert_eq!(r.pairs(), vec![(0, 0), (0, 1), (1, 1)]);
        assert_eq!(r, SpecRelation::identity(c2));
    }

    #[test]
    fn non_open_maps_are_rejected_when_required() {
        // antichain {a, b} -> chain a<b sending both to the top
        let a2 = arc(FinPoset::antichain(2));
        let c2 = arc(FinPoset::chain(2));
        let f = MonotoneMap::constant(a2, c2, 1).unwrap();
        assert!(matches!(SpecRelation::upper_graph(&f, true), Err(Error::NotOpenMap(_))));
        // without the requirement the relation is still weakening-closed
        assert!(SpecRelation::upper_graph(&f, false).is_ok());
    }

    #[test]
    fn sum_and_product_shapes() {
        let one = arc(FinPoset::singleton());
        let (s, _, _) = poset_sum(&one, &one);
        assert!(s.is_antichain() && s.len() == 2);
        let c2 = arc(FinPoset::chain(2));
        let (s, i1, i2) = poset_sum(&c2, &one);
        assert_eq!(s.len(), 3);
        assert_eq!(s.covers().len(), 1);
        assert_eq!(i1.table(), &[0, 1]);
        assert_eq!(i2.table(), &[2]);
        let (p, _, _) = poset_product(&c2, &c2);
        assert_eq!(down_set_masks(&p).len(), 6);
        let (p, _, _) = poset_product(&arc(FinPoset::empty()), &c2);
        assert!(p.is_empty());
        let (p, _, _) = poset_product(&one, &c2);
        assert!(poset_iso(&p, &c2).is_some());
    }

    #[test]
    fn compose_unit_and_singletons() {
        let c2 = arc(FinPoset::chain(2));
        let r = SpecRelation::from_rows(c2.clone(), c2.clone(), vec![0b11, 0b10]).unwrap();
        let id = SpecRelation::identity(c2.clone());
        assert_eq!(r.compose(&id).unwrap(), r);
        assert_eq!(id.compose(&r).unwrap(), r);
        let one = arc(FinPoset::singleton());
        let full = SpecRelation::full(one.clone(), one.clone());
        assert_eq!(full.compose(&full).unwrap(), full);
        let other = SpecRelation::empty(c2.clone(), one.clone());
        assert!(matches!(
            full.compose(&other),
            Err(Error::SourceTargetMismatch(_))
        ));
    }

    #[test]
    fn monotone_map_enumeration_counts() {
        let c2 = arc(FinPoset::chain(2));
        let a2 = arc(FinPoset::antichain(2));
        assert_eq!(MonotoneMap::all(&c2, &c2).len(), 3);
        assert_eq!(MonotoneMap::all(&a2, &a2).len(), 4);
        assert_eq!(MonotoneMap::all(&c2, &a2).len(), 2);
        let e = arc(FinPoset::empty());
        assert_eq!(MonotoneMap::all(&e, &c2).len(), 1);
        assert_eq!(MonotoneMap::all(&c2, &e).len(), 0);
    }

    #[test]
    fn iso_detects_shape() {
        let v = build_poset(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        let w = build_poset(&["x", "y", "z"], &[("z", "x"), ("z", "y")]).unwrap();
        let map = poset_iso(&v, &w).unwrap();
        assert_eq!(map[0], 2);
        let c3 = FinPoset::chain(3);
        assert!(poset_iso(&v, &c3).is_none());
    }
}
