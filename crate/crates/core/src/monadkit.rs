//! Monads on categories of finite structures, Kleisli categories,
//! adjunctions, Eilenberg-Moore algebras and monad morphisms, each with a
//! law checker that reports the first counterexample it meets.
//!
//! A monad is described level by level: an [`Obj`] is `T^depth` applied to a
//! finite poset, and its elements are [`Elem`] trees. Levels that are small
//! enough are enumerated outright; larger ones are sampled from a seeded
//! generator so reports stay reproducible.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finstruct::{enumerate_down_masks_limited, mask_iter, FinPoset, Mask, MonotoneMap};
use crate::lattice::{downset_lattice, enumerate_maps, two, Preservation};

/// An element of some level `T^d X`: an index into `X`, or a finite set of
/// elements one level down.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    Atom(u32),
    Set(Vec<Elem>),
}

impl Elem {
    pub fn atom(i: usize) -> Elem {
        Elem::Atom(i as u32)
    }

    /// A set element; members are sorted and deduplicated.
    pub fn set(mut members: Vec<Elem>) -> Elem {
        members.sort();
        members.dedup();
        Elem::Set(members)
    }

    pub fn empty() -> Elem {
        Elem::Set(Vec::new())
    }

    /// The atoms of a mask.
    pub fn from_mask(mask: Mask) -> Elem {
        Elem::Set(mask_iter(mask).map(Elem::atom).collect())
    }

    /// Index of an atom. Panics on sets.
    pub fn index(&self) -> usize {
        match self {
            Elem::Atom(i) => *i as usize,
            Elem::Set(_) => panic!("expected an atom, found a set"),
        }
    }

    /// Members of a set. Panics on atoms.
    pub fn members(&self) -> &[Elem] {
        match self {
            Elem::Set(m) => m,
            Elem::Atom(_) => panic!("expected a set, found an atom"),
        }
    }

    pub fn is_set(&self) -> bool {
        matches!(self, Elem::Set(_))
    }

    pub fn has(&self, e: &Elem) -> bool {
        self.members().binary_search(e).is_ok()
    }

    pub fn is_subset(&self, other: &Elem) -> bool {
        self.members().iter().all(|m| other.has(m))
    }

    /// Mask of a set of atoms.
    pub fn to_mask(&self) -> Mask {
        self.members().iter().fold(0, |m, a| m | (1 << a.index()))
    }

    /// Replace every atom `i` by `table[i]`.
    pub fn substitute(&self, table: &[Elem]) -> Elem {
        match self {
            Elem::Atom(i) => table[*i as usize].clone(),
            Elem::Set(m) => Elem::set(m.iter().map(|e| e.substitute(table)).collect()),
        }
    }

    /// Text form with atoms written as labels of `base`.
    pub fn render(&self, base: &FinPoset) -> String {
        let mut s = String::new();
        self.render_into(base, &mut s);
        s
    }

    fn render_into(&self, base: &FinPoset, s: &mut String) {
        match self {
            Elem::Atom(i) => match base.labels().get(*i as usize) {
                Some(l) => s.push_str(l),
                None => s.push_str(&format!("#{i}")),
            },
            Elem::Set(m) => {
                s.push('{');
                for (k, e) in m.iter().enumerate() {
                    if k > 0 {
                        s.push(',');
                    }
                    e.render_into(base, s);
                }
                s.push('}');
            }
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Atom(i) => write!(f, "{i}"),
            Elem::Set(m) => {
                write!(f, "{{")?;
                for (k, e) in m.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e:?}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// `T^depth(base)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Obj {
    pub base: Arc<FinPoset>,
    pub depth: usize,
}

impl Obj {
    pub fn new(base: Arc<FinPoset>) -> Self {
        Obj { base, depth: 0 }
    }

    /// One more application of the monad.
    pub fn t(&self) -> Obj {
        Obj {
            base: self.base.clone(),
            depth: self.depth + 1,
        }
    }

    /// One application fewer. Panics at depth zero.
    pub fn below(&self) -> Obj {
        assert!(self.depth > 0, "no level below the base");
        Obj {
            base: self.base.clone(),
            depth: self.depth - 1,
        }
    }

    pub fn render(&self, e: &Elem) -> String {
        e.render(&self.base)
    }
}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.depth {
            write!(f, "T")?;
        }
        write!(f, "{}", self.base)
    }
}

/// A monad on finite sets or finite posets, described level by level.
///
/// Methods prefixed `t_` describe `T(below)` in terms of the level `below`;
/// the free functions [`level_le`], [`level_elements`] and friends handle the
/// base level and recurse.
pub trait FiniteMonad: Send + Sync {
    fn name(&self) -> &str;

    /// Whether `base` is an object of the underlying category.
    fn admits(&self, base: &FinPoset) -> bool;

    fn t_le(&self, below: &Obj, a: &Elem, b: &Elem) -> bool;

    fn t_contains(&self, below: &Obj, a: &Elem) -> bool;

    /// All of `T(below)` given all of `below`, or `None` past `limit`.
    fn t_elements(&self, below: &Obj, below_elems: &[Elem], limit: usize) -> Option<Vec<Elem>>;

    /// A random element of `T(below)`.
    fn t_sample(&self, below: &Obj, rng: &mut dyn RngCore, limit: usize) -> Option<Elem>;

    /// `e_x`, applied to an element of `x`.
    fn unit(&self, x: &Obj, a: &Elem) -> Elem;

    /// `m_x`, applied to an element of `T T x`.
    fn mult(&self, x: &Obj, a: &Elem) -> Elem;

    /// `T f`, applied to an element of `T (f.src)`.
    fn map(&self, f: &Morph, a: &Elem) -> Elem;

    /// Reading of an element of `T 1` as a truth value.
    fn one_bit(&self, a: &Elem) -> bool {
        a.is_set() && a.members().len() == 1
    }
}

pub type Monad = Arc<dyn FiniteMonad>;

pub fn level_le(t: &dyn FiniteMonad, level: &Obj, a: &Elem, b: &Elem) -> bool {
    if level.depth == 0 {
        level.base.le(a.index(), b.index())
    } else {
        t.t_le(&level.below(), a, b)
    }
}

pub fn level_contains(t: &dyn FiniteMonad, level: &Obj, a: &Elem) -> bool {
    if level.depth == 0 {
        matches!(a, Elem::Atom(i) if (*i as usize) < level.base.len())
    } else {
        t.t_contains(&level.below(), a)
    }
}

/// Every element of `level`, or `None` if some level on the way has more
/// than `limit` elements.
pub fn level_elements(t: &dyn FiniteMonad, level: &Obj, limit: usize) -> Option<Vec<Elem>> {
    if level.depth == 0 {
        if level.base.len() > limit {
            return None;
        }
        return Some((0..level.base.len()).map(Elem::atom).collect());
    }
    let below = level.below();
    let below_elems = level_elements(t, &below, limit)?;
    t.t_elements(&below, &below_elems, limit)
}

pub fn level_sample(t: &dyn FiniteMonad, level: &Obj, rng: &mut dyn RngCore, limit: usize) -> Option<Elem> {
    if level.depth == 0 {
        if level.base.is_empty() {
            return None;
        }
        return Some(Elem::atom(rng.gen_range(0..level.base.len())));
    }
    t.t_sample(&level.below(), rng, limit)
}

/// A level as an explicit poset whose element `i` is `elems[i]`.
pub fn materialize(t: &dyn FiniteMonad, level: &Obj, limit: usize) -> Option<(Arc<FinPoset>, Vec<Elem>)> {
    let elems = level_elements(t, level, limit)?;
    let mut labels: Vec<String> = elems.iter().map(|e| level.render(e)).collect();
    let mut sorted = labels.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != labels.len() {
        labels = (0..elems.len()).map(|i| format!("e{i}")).collect();
    }
    let p = FinPoset::from_fn_unchecked(labels, |a, b| level_le(t, level, &elems[a], &elems[b]));
    Some((Arc::new(p), elems))
}

type MorphFn = dyn Fn(&Elem) -> Elem + Send + Sync;

/// A morphism of the underlying category between two levels.
#[derive(Clone)]
pub struct Morph {
    pub src: Obj,
    pub dst: Obj,
    f: Arc<MorphFn>,
}

impl Morph {
    pub fn new(src: Obj, dst: Obj, f: impl Fn(&Elem) -> Elem + Send + Sync + 'static) -> Self {
        Morph {
            src,
            dst,
            f: Arc::new(f),
        }
    }

    pub fn from_monotone(f: &MonotoneMap) -> Self {
        let table = f.table().to_vec();
        Morph::new(Obj::new(f.source().clone()), Obj::new(f.target().clone()), move |a| {
            Elem::atom(table[a.index()])
        })
    }

    pub fn identity(x: &Obj) -> Self {
        Morph::new(x.clone(), x.clone(), |a| a.clone())
    }

    #[inline]
    pub fn apply(&self, a: &Elem) -> Elem {
        (self.f)(a)
    }

    /// `self` first, then `g`.
    pub fn then(&self, g: &Morph) -> Result<Morph> {
        if self.dst != g.src {
            return Err(Error::Mismatch(format!(
                "cannot compose a morphism into {} with one out of {}",
                self.dst, g.src
            )));
        }
        let (f, h) = (self.f.clone(), g.f.clone());
        Ok(Morph {
            src: self.src.clone(),
            dst: g.dst.clone(),
            f: Arc::new(move |a| h(&f(a))),
        })
    }
}

impl fmt::Debug for Morph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morph({} -> {})", self.src, self.dst)
    }
}

/// `e_x : x -> T x`
pub fn unit_morph(t: &Monad, x: &Obj) -> Morph {
    let (t, xo) = (t.clone(), x.clone());
    Morph::new(x.clone(), x.t(), move |a| t.unit(&xo, a))
}

/// `m_x : T T x -> T x`
pub fn mult_morph(t: &Monad, x: &Obj) -> Morph {
    let (t, xo) = (t.clone(), x.clone());
    Morph::new(x.t().t(), x.t(), move |a| t.mult(&xo, a))
}

/// `T f : T x -> T y`
pub fn t_morph(t: &Monad, f: &Morph) -> Morph {
    let (t, fo) = (t.clone(), f.clone());
    Morph::new(f.src.t(), f.dst.t(), move |a| t.map(&fo, a))
}

/// The first element of `elems` where `f` and `g` disagree.
pub fn first_difference(f: &Morph, g: &Morph, elems: &[Elem]) -> Option<String> {
    elems.iter().find_map(|a| {
        let (x, y) = (f.apply(a), g.apply(a));
        (x != y).then(|| {
            format!(
                "at {}: {} vs {}",
                f.src.render(a),
                f.dst.render(&x),
                g.dst.render(&y)
            )
        })
    })
}

/// The identity monad, on whichever posets it is given.
pub struct IdentityMonad;

impl FiniteMonad for IdentityMonad {
    fn name(&self) -> &str {
        "identity"
    }

    fn admits(&self, _: &FinPoset) -> bool {
        true
    }

    fn t_le(&self, below: &Obj, a: &Elem, b: &Elem) -> bool {
        level_le(self, below, a, b)
    }

    fn t_contains(&self, below: &Obj, a: &Elem) -> bool {
        level_contains(self, below, a)
    }

    fn t_elements(&self, _: &Obj, below_elems: &[Elem], _: usize) -> Option<Vec<Elem>> {
        Some(below_elems.to_vec())
    }

    fn t_sample(&self, below: &Obj, rng: &mut dyn RngCore, limit: usize) -> Option<Elem> {
        level_sample(self, below, rng, limit)
    }

    fn unit(&self, _: &Obj, a: &Elem) -> Elem {
        a.clone()
    }

    fn mult(&self, _: &Obj, a: &Elem) -> Elem {
        a.clone()
    }

    fn map(&self, f: &Morph, a: &Elem) -> Elem {
        f.apply(a)
    }
}

/// Outcome of one law on one object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCheck {
    pub law: String,
    pub object: String,
    pub passed: bool,
    /// Number of instances evaluated.
    pub checked: usize,
    /// Whether every instance of the law on this object was evaluated.
    pub exhaustive: bool,
    pub witness: Option<String>,
}

/// Budgets for law sweeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawConfig {
    /// Levels with at most this many elements are enumerated.
    pub budget: usize,
    /// Elements drawn from a level that is too large to enumerate.
    pub samples: usize,
    /// Morphisms tried per pair of objects.
    pub maps_per_pair: usize,
    pub seed: u64,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            budget: 4096,
            samples: 128,
            maps_per_pair: 12,
            seed: 0,
        }
    }
}

struct Tally {
    law: &'static str,
    object: String,
    checked: usize,
    exhaustive: bool,
    witness: Option<String>,
}

impl Tally {
    fn new(law: &'static str, object: &str) -> Self {
        Tally {
            law,
            object: object.to_string(),
            checked: 0,
            exhaustive: true,
            witness: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn partial(&mut self, exhaustive: bool) {
        self.exhaustive &= exhaustive;
    }

    fn done(self) -> LawCheck {
        LawCheck {
            law: self.law.to_string(),
            object: self.object,
            passed: self.witness.is_none(),
            checked: self.checked,
            exhaustive: self.exhaustive,
            witness: self.witness,
        }
    }
}

/// A deterministic generator for one (seed, object, law) triple.
pub fn rng_for(seed: u64, object: usize, salt: u64) -> ChaCha8Rng {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((object as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .wrapping_add(salt.wrapping_mul(0x94D0_49BB_1331_11EB));
    ChaCha8Rng::seed_from_u64(mix)
}

/// Elements of a level: all of them when few enough, else a sample.
pub struct Supply {
    pub elems: Vec<Elem>,
    pub exhaustive: bool,
}

pub fn supply(t: &dyn FiniteMonad, level: &Obj, cfg: &LawConfig, rng: &mut dyn RngCore) -> Supply {
    if let Some(elems) = level_elements(t, level, cfg.budget) {
        return Supply {
            elems,
            exhaustive: true,
        };
    }
    let mut elems: Vec<Elem> = (0..cfg.samples)
        .filter_map(|_| level_sample(t, level, rng, cfg.budget))
        .collect();
    elems.sort();
    elems.dedup();
    Supply {
        elems,
        exhaustive: false,
    }
}

/// Up to `cap` monotone maps `x -> y`, all of them when there are few.
fn some_maps(x: &Arc<FinPoset>, y: &Arc<FinPoset>, cap: usize, rng: &mut dyn RngCore) -> (Vec<MonotoneMap>, bool) {
    let mut all = MonotoneMap::all(x, y);
    if all.len() <= cap {
        return (all, true);
    }
    all.shuffle(rng);
    all.truncate(cap);
    (all, false)
}

/// Pairs from `elems` to compare for monotonicity.
fn some_pairs(elems: &[Elem], cap: usize, rng: &mut dyn RngCore) -> (Vec<(usize, usize)>, bool) {
    let n = elems.len();
    if n * n <= cap {
        return ((0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect(), true);
    }
    if n == 0 {
        return (Vec::new(), true);
    }
    let pairs = (0..cap).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    (pairs, false)
}

/// Functoriality, naturality of `e` and `m`, the unit and associativity
/// laws, monotonicity of the structure maps, and typing of their results.
///
/// Naturality is tested against maps from each object into itself and into
/// every admitted sample object with at most two elements.
pub fn check_monad_laws(t: &Monad, objects: &[Obj], cfg: &LawConfig) -> Vec<LawCheck> {
    let targets: Vec<Arc<FinPoset>> = objects
        .iter()
        .filter(|o| o.depth == 0 && o.base.len() <= 2 && t.admits(&o.base))
        .map(|o| o.base.clone())
        .collect();
    let mut out = Vec::new();
    for (k, x) in objects.iter().enumerate() {
        out.extend(laws_on(t, k, x, &targets, cfg));
    }
    out
}

fn laws_on(t: &Monad, k: usize, x: &Obj, targets: &[Arc<FinPoset>], cfg: &LawConfig) -> Vec<LawCheck> {
    let tm: &dyn FiniteMonad = &**t;
    let name = format!("{}", x);
    let (tx, ttx) = (x.t(), x.t().t());
    let atoms = level_elements(tm, x, usize::MAX).expect("base level is finite");
    let s1 = supply(tm, &tx, cfg, &mut rng_for(cfg.seed, k, 1));
    let s2 = supply(tm, &ttx, cfg, &mut rng_for(cfg.seed, k, 2));
    let s3 = supply(tm, &ttx.t(), cfg, &mut rng_for(cfg.seed, k, 3));
    let (e, m) = (unit_morph(t, x), mult_morph(t, x));

    let mut typing = Tally::new("typing", &name);
    for a in &atoms {
        let r = e.apply(a);
        typing.check(level_contains(tm, &tx, &r), || format!("e({}) = {} is not in T X", x.render(a), x.render(&r)));
    }
    for a in &s2.elems {
        let r = m.apply(a);
        typing.check(level_contains(tm, &tx, &r), || format!("m({}) = {} is not in T X", x.render(a), x.render(&r)));
    }
    typing.partial(s2.exhaustive);

    let mut fid = Tally::new("functor_identity", &name);
    let tid = t_morph(t, &Morph::identity(x));
    for a in &s1.elems {
        let r = tid.apply(a);
        fid.check(r == *a, || format!("T(id)({}) = {}", x.render(a), x.render(&r)));
    }
    fid.partial(s1.exhaustive);

    let mut fcomp = Tally::new("functor_composition", &name);
    let mut unat = Tally::new("unit_naturality", &name);
    let mut mnat = Tally::new("mult_naturality", &name);
    let mut mono = Tally::new("monotone", &name);
    let mut rng = rng_for(cfg.seed, k, 4);
    let mut codomains: Vec<Arc<FinPoset>> = targets.to_vec();
    codomains.push(x.base.clone());
    for y in &codomains {
        let yo = Obj::new(y.clone());
        let (fs, all_f) = some_maps(&x.base, y, cfg.maps_per_pair, &mut rng);
        let (gs, all_g) = some_maps(y, &x.base, cfg.maps_per_pair, &mut rng);
        for part in [&mut fcomp, &mut unat, &mut mnat, &mut mono, &mut typing] {
            part.partial(all_f);
        }
        fcomp.partial(all_g);
        let ey = unit_morph(t, &yo);
        let my = mult_morph(t, &yo);
        for f in &fs {
            let fm = Morph::from_monotone(f);
            let tf = t_morph(t, &fm);
            let ttf = t_morph(t, &tf);
            for a in &atoms {
                let (l, r) = (tf.apply(&e.apply(a)), ey.apply(&fm.apply(a)));
                unat.check(l == r, || format!("f = {:?}, x = {}: T f(e(x)) = {} but e(f(x)) = {}", f.table(), x.render(a), yo.render(&l), yo.render(&r)));
            }
            for a in &s1.elems {
                let r = tf.apply(a);
                typing.check(level_contains(tm, &yo.t(), &r), || format!("T f({}) = {} is not in T Y", x.render(a), yo.render(&r)));
            }
            for a in &s2.elems {
                let (l, r) = (tf.apply(&m.apply(a)), my.apply(&ttf.apply(a)));
                mnat.check(l == r, || format!("f = {:?}, A = {}: T f(m(A)) = {} but m(T T f(A)) = {}", f.table(), x.render(a), yo.render(&l), yo.render(&r)));
            }
            let (pairs, all_pairs) = some_pairs(&s1.elems, cfg.budget, &mut rng);
            mono.partial(all_pairs && s1.exhaustive);
            for (i, j) in pairs {
                let (a, b) = (&s1.elems[i], &s1.elems[j]);
                if level_le(tm, &tx, a, b) {
                    let (fa, fb) = (tf.apply(a), tf.apply(b));
                    mono.check(level_le(tm, &yo.t(), &fa, &fb), || format!("T f is not monotone at {} <= {}", x.render(a), x.render(b)));
                }
            }
            for g in gs.iter().take(cfg.maps_per_pair.max(1)) {
                let gm = Morph::from_monotone(g);
                let fg = fm.then(&gm).expect("matching objects");
                let (tfg, tg) = (t_morph(t, &fg), t_morph(t, &gm));
                for a in &s1.elems {
                    let (l, r) = (tfg.apply(a), tg.apply(&tf.apply(a)));
                    fcomp.check(l == r, || format!("f = {:?}, g = {:?} at {}: {} vs {}", f.table(), g.table(), x.render(a), x.render(&l), x.render(&r)));
                }
            }
        }
    }
    fcomp.partial(s1.exhaustive);
    unat.partial(true);
    mnat.partial(s2.exhaustive);

    let mut lunit = Tally::new("left_unit", &name);
    let mut runit = Tally::new("right_unit", &name);
    let etx = unit_morph(t, &tx);
    let te = t_morph(t, &e);
    for a in &s1.elems {
        let l = m.apply(&etx.apply(a));
        lunit.check(l == *a, || format!("m(e_T({})) = {}", x.render(a), x.render(&l)));
        let r = m.apply(&te.apply(a));
        runit.check(r == *a, || format!("m(T e({})) = {}", x.render(a), x.render(&r)));
    }
    lunit.partial(s1.exhaustive);
    runit.partial(s1.exhaustive);

    let mut assoc = Tally::new("associativity", &name);
    let mtx = mult_morph(t, &tx);
    let tmx = t_morph(t, &m);
    for a in &s3.elems {
        let (l, r) = (m.apply(&mtx.apply(a)), m.apply(&tmx.apply(a)));
        assoc.check(l == r, || format!("at {}: m(m_T) = {} but m(T m) = {}", x.render(a), x.render(&l), x.render(&r)));
    }
    assoc.partial(s3.exhaustive);

    for (i, a) in atoms.iter().enumerate() {
        for b in &atoms[i..] {
            for (p, q) in [(a, b), (b, a)] {
                if level_le(tm, x, p, q) {
                    let (ep, eq) = (e.apply(p), e.apply(q));
                    mono.check(level_le(tm, &tx, &ep, &eq), || format!("e is not monotone at {} <= {}", x.render(p), x.render(q)));
                }
            }
        }
    }
    let (pairs, all_pairs) = some_pairs(&s2.elems, cfg.budget, &mut rng);
    mono.partial(all_pairs && s2.exhaustive);
    for (i, j) in pairs {
        let (a, b) = (&s2.elems[i], &s2.elems[j]);
        if level_le(tm, &ttx, a, b) {
            let (ma, mb) = (m.apply(a), m.apply(b));
            mono.check(level_le(tm, &tx, &ma, &mb), || format!("m is not monotone at {} <= {}", x.render(a), x.render(b)));
        }
    }

    vec![
        typing.done(),
        fid.done(),
        fcomp.done(),
        unat.done(),
        mnat.done(),
        lunit.done(),
        runit.done(),
        assoc.done(),
        mono.done(),
    ]
}

/// An Eilenberg-Moore algebra `structure : T carrier -> carrier`.
#[derive(Clone, Debug)]
pub struct EmAlgebra {
    pub carrier: Obj,
    pub structure: Morph,
}

/// `alpha . e = 1` and `alpha . m = alpha . T alpha`.
pub fn check_em_algebra(t: &Monad, a: &EmAlgebra, cfg: &LawConfig) -> Vec<LawCheck> {
    let tm: &dyn FiniteMonad = &**t;
    let x = &a.carrier;
    let name = format!("{}", x);
    let alpha = &a.structure;
    let mut unit = Tally::new("em_unit", &name);
    let mut mult = Tally::new("em_mult", &name);
    let (e, m) = (unit_morph(t, x), mult_morph(t, x));
    let s0 = supply(tm, x, cfg, &mut rng_for(cfg.seed, 0, 10));
    for p in &s0.elems {
        let r = alpha.apply(&e.apply(p));
        unit.check(r == *p, || format!("alpha(e({})) = {}", x.render(p), x.render(&r)));
    }
    unit.partial(s0.exhaustive);
    let talpha = t_morph(t, alpha);
    let s2 = supply(tm, &x.t().t(), cfg, &mut rng_for(cfg.seed, 0, 11));
    for p in &s2.elems {
        let (l, r) = (alpha.apply(&m.apply(p)), alpha.apply(&talpha.apply(p)));
        mult.check(l == r, || format!("at {}: alpha(m) = {} but alpha(T alpha) = {}", x.render(p), x.render(&l), x.render(&r)));
    }
    mult.partial(s2.exhaustive);
    vec![unit.done(), mult.done()]
}

/// A morphism `src -> dst` of the Kleisli category: `arrow : src -> T dst`.
#[derive(Clone, Debug)]
pub struct KleisliMorphism {
    pub src: Obj,
    pub dst: Obj,
    pub arrow: Morph,
}

impl KleisliMorphism {
    pub fn new(src: Obj, dst: Obj, arrow: Morph) -> Result<Self> {
        if arrow.src != src || arrow.dst != dst.t() {
            return Err(Error::Mismatch(format!(
                "arrow {} -> {} does not go from {} to T {}",
                arrow.src, arrow.dst, src, dst
            )));
        }
        Ok(KleisliMorphism { src, dst, arrow })
    }
}

/// `e_x`, the identity of the Kleisli category.
pub fn kleisli_identity(t: &Monad, x: &Obj) -> KleisliMorphism {
    KleisliMorphism {
        src: x.clone(),
        dst: x.clone(),
        arrow: unit_morph(t, x),
    }
}

/// `g . f = m_Z . T g . f`
pub fn kleisli_compose(t: &Monad, f: &KleisliMorphism, g: &KleisliMorphism) -> Result<KleisliMorphism> {
    if f.dst != g.src {
        return Err(Error::Mismatch(format!(
            "Kleisli composite needs {} = {}",
            f.dst, g.src
        )));
    }
    let arrow = f.arrow.then(&t_morph(t, &g.arrow))?.then(&mult_morph(t, &g.dst))?;
    Ok(KleisliMorphism {
        src: f.src.clone(),
        dst: g.dst.clone(),
        arrow,
    })
}

/// `F_T f = e_Y . f`
pub fn kleisli_left_adjoint(t: &Monad, f: &Morph) -> KleisliMorphism {
    KleisliMorphism {
        src: f.src.clone(),
        dst: f.dst.clone(),
        arrow: f.then(&unit_morph(t, &f.dst)).expect("matching objects"),
    }
}

/// `G_T f = m_Y . T f : T X -> T Y`
pub fn kleisli_right_adjoint(t: &Monad, f: &KleisliMorphism) -> Morph {
    t_morph(t, &f.arrow)
        .then(&mult_morph(t, &f.dst))
        .expect("matching objects")
}

/// A category given by its composition, identities, and a decision
/// procedure for equality of parallel morphisms.
pub trait FinCategory {
    type Ob: Clone + fmt::Display;
    type Mor: Clone;

    fn source(&self, f: &Self::Mor) -> Self::Ob;
    fn target(&self, f: &Self::Mor) -> Self::Ob;
    fn identity(&self, x: &Self::Ob) -> Self::Mor;
    /// `f` first, then `g`.
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    /// `None` if `f = g`, else a witness.
    fn differ(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Option<String>>;
}

/// Levels of one monad's tower, with its morphisms.
pub struct BaseCategory {
    pub tower: Monad,
    pub limit: usize,
}

impl FinCategory for BaseCategory {
    type Ob = Obj;
    type Mor = Morph;

    fn source(&self, f: &Morph) -> Obj {
        f.src.clone()
    }

    fn target(&self, f: &Morph) -> Obj {
        f.dst.clone()
    }

    fn identity(&self, x: &Obj) -> Morph {
        Morph::identity(x)
    }

    fn compose(&self, f: &Morph, g: &Morph) -> Result<Morph> {
        f.then(g)
    }

    fn differ(&self, f: &Morph, g: &Morph) -> Result<Option<String>> {
        if f.src != g.src || f.dst != g.dst {
            return Ok(Some(format!(
                "{} -> {} vs {} -> {}",
                f.src, f.dst, g.src, g.dst
            )));
        }
        let elems = level_elements(&*self.tower, &f.src, self.limit)
            .ok_or_else(|| Error::TooLarge {
                size: self.limit + 1,
                cap: self.limit,
            })?;
        Ok(first_difference(f, g, &elems))
    }
}

pub struct KleisliCategory {
    pub monad: Monad,
    pub limit: usize,
}

impl FinCategory for KleisliCategory {
    type Ob = Obj;
    type Mor = KleisliMorphism;

    fn source(&self, f: &KleisliMorphism) -> Obj {
        f.src.clone()
    }

    fn target(&self, f: &KleisliMorphism) -> Obj {
        f.dst.clone()
    }

    fn identity(&self, x: &Obj) -> KleisliMorphism {
        kleisli_identity(&self.monad, x)
    }

    fn compose(&self, f: &KleisliMorphism, g: &KleisliMorphism) -> Result<KleisliMorphism> {
        kleisli_compose(&self.monad, f, g)
    }

    fn differ(&self, f: &KleisliMorphism, g: &KleisliMorphism) -> Result<Option<String>> {
        BaseCategory {
            tower: self.monad.clone(),
            limit: self.limit,
        }
        .differ(&f.arrow, &g.arrow)
    }
}

pub type ObOf<C> = <C as FinCategory>::Ob;
pub type MorOf<C> = <C as FinCategory>::Mor;

/// `F -| G` with `F : L -> R`, unit `1 -> G F`, counit `F G -> 1`.
pub trait Adjunction {
    type L: FinCategory;
    type R: FinCategory;

    fn left_cat(&self) -> &Self::L;
    fn right_cat(&self) -> &Self::R;
    fn left_obj(&self, x: &ObOf<Self::L>) -> ObOf<Self::R>;
    fn right_obj(&self, y: &ObOf<Self::R>) -> ObOf<Self::L>;
    fn left(&self, f: &MorOf<Self::L>) -> MorOf<Self::R>;
    fn right(&self, g: &MorOf<Self::R>) -> MorOf<Self::L>;
    fn unit(&self, x: &ObOf<Self::L>) -> MorOf<Self::L>;
    fn counit(&self, y: &ObOf<Self::R>) -> MorOf<Self::R>;
}

/// The triangle identities `eps_F . F eta = 1` and `G eps . eta_G = 1`.
pub fn check_adjunction<A: Adjunction>(
    adj: &A,
    left_objs: &[ObOf<A::L>],
    right_objs: &[ObOf<A::R>],
) -> Vec<LawCheck> {
    let (lc, rc) = (adj.left_cat(), adj.right_cat());
    let mut out = Vec::new();
    for x in left_objs {
        let mut tally = Tally::new("triangle_left", &format!("{x}"));
        let fx = adj.left_obj(x);
        let verdict = rc
            .compose(&adj.left(&adj.unit(x)), &adj.counit(&fx))
            .and_then(|c| rc.differ(&c, &rc.identity(&fx)));
        match verdict {
            Ok(w) => tally.check(w.is_none(), || w.unwrap_or_default()),
            Err(e) => tally.check(false, || format!("{e}")),
        }
        out.push(tally.done());
    }
    for y in right_objs {
        let mut tally = Tally::new("triangle_right", &format!("{y}"));
        let gy = adj.right_obj(y);
        let verdict = lc
            .compose(&adj.unit(&gy), &adj.right(&adj.counit(y)))
            .and_then(|c| lc.differ(&c, &lc.identity(&gy)));
        match verdict {
            Ok(w) => tally.check(w.is_none(), || w.unwrap_or_default()),
            Err(e) => tally.check(false, || format!("{e}")),
        }
        out.push(tally.done());
    }
    out
}

/// The comparison functor on a Kleisli morphism `f : X -> G F Y` of the
/// monad induced by `adj`: `C f = eps_{F Y} . F f`.
pub fn comparison_c<A: Adjunction>(adj: &A, f: &MorOf<A::L>, y: &ObOf<A::L>) -> Result<MorOf<A::R>> {
    adj.right_cat().compose(&adj.left(f), &adj.counit(&adj.left_obj(y)))
}

type CounitFn = dyn Fn(&Obj) -> Morph + Send + Sync;

/// `F_T -| G_T` between the base and the Kleisli category of `T`.
pub struct KleisliAdjunction {
    base: BaseCategory,
    kleisli: KleisliCategory,
    counit_override: Option<Box<CounitFn>>,
}

impl KleisliAdjunction {
    pub fn new(t: &Monad, limit: usize) -> Self {
        KleisliAdjunction {
            base: BaseCategory {
                tower: t.clone(),
                limit,
            },
            kleisli: KleisliCategory {
                monad: t.clone(),
                limit,
            },
            counit_override: None,
        }
    }

    /// Replace the counit arrow `T Y -> T Y` at every object; used to check
    /// that the triangle identities notice a broken counit.
    pub fn with_counit(mut self, f: impl Fn(&Obj) -> Morph + Send + Sync + 'static) -> Self {
        self.counit_override = Some(Box::new(f));
        self
    }

    fn monad(&self) -> &Monad {
        &self.kleisli.monad
    }
}

impl Adjunction for KleisliAdjunction {
    type L = BaseCategory;
    type R = KleisliCategory;

    fn left_cat(&self) -> &BaseCategory {
        &self.base
    }

    fn right_cat(&self) -> &KleisliCategory {
        &self.kleisli
    }

    fn left_obj(&self, x: &Obj) -> Obj {
        x.clone()
    }

    fn right_obj(&self, y: &Obj) -> Obj {
        y.t()
    }

    fn left(&self, f: &Morph) -> KleisliMorphism {
        kleisli_left_adjoint(self.monad(), f)
    }

    fn right(&self, g: &KleisliMorphism) -> Morph {
        kleisli_right_adjoint(self.monad(), g)
    }

    fn unit(&self, x: &Obj) -> Morph {
        unit_morph(self.monad(), x)
    }

    fn counit(&self, y: &Obj) -> KleisliMorphism {
        let arrow = match &self.counit_override {
            Some(f) => f(y),
            None => Morph::identity(&y.t()),
        };
        KleisliMorphism {
            src: y.t(),
            dst: y.clone(),
            arrow,
        }
    }
}

/// `1 -| 1` on a base category.
pub struct IdentityAdjunction {
    base: BaseCategory,
}

impl IdentityAdjunction {
    pub fn new(limit: usize) -> Self {
        IdentityAdjunction {
            base: BaseCategory {
                tower: Arc::new(IdentityMonad),
                limit,
            },
        }
    }
}

impl Adjunction for IdentityAdjunction {
    type L = BaseCategory;
    type R = BaseCategory;

    fn left_cat(&self) -> &BaseCategory {
        &self.base
    }

    fn right_cat(&self) -> &BaseCategory {
        &self.base
    }

    fn left_obj(&self, x: &Obj) -> Obj {
        x.clone()
    }

    fn right_obj(&self, y: &Obj) -> Obj {
        y.clone()
    }

    fn left(&self, f: &Morph) -> Morph {
        f.clone()
    }

    fn right(&self, g: &Morph) -> Morph {
        g.clone()
    }

    fn unit(&self, x: &Obj) -> Morph {
        Morph::identity(x)
    }

    fn counit(&self, y: &Obj) -> Morph {
        Morph::identity(y)
    }
}

type ComponentFn = dyn Fn(&Obj, &Elem) -> Elem + Send + Sync;

/// A family `j_X : T X -> T' X` meant to commute with units and
/// multiplications.
#[derive(Clone)]
pub struct MonadMorphism {
    pub source: Monad,
    pub target: Monad,
    component: Arc<ComponentFn>,
}

impl MonadMorphism {
    pub fn new(source: Monad, target: Monad, component: impl Fn(&Obj, &Elem) -> Elem + Send + Sync + 'static) -> Self {
        MonadMorphism {
            source,
            target,
            component: Arc::new(component),
        }
    }

    /// `j_x(a)` for `a` in `T x`.
    pub fn component(&self, x: &Obj, a: &Elem) -> Elem {
        (self.component)(x, a)
    }

    /// `j_x` as a morphism `T x -> T' x`.
    pub fn component_morph(&self, x: &Obj) -> Morph {
        let (c, xo) = (self.component.clone(), x.clone());
        Morph::new(x.t(), x.t(), move |a| c(&xo, a))
    }
}

/// The identity monad morphism `T -> T`.
pub fn identity_monad_morphism(t: &Monad) -> MonadMorphism {
    MonadMorphism::new(t.clone(), t.clone(), |_, a| a.clone())
}

/// Unit square `j . e = e'`, multiplication square `j . m = m' . j_T' . T j`,
/// naturality, typing and injectivity of each component.
///
/// The multiplication square needs `T' X` as a base object; it is evaluated
/// only when `T' T' X` fits the budget.
pub fn check_monad_morphism(mm: &MonadMorphism, objects: &[Obj], cfg: &LawConfig) -> Vec<LawCheck> {
    let (s, t) = (&mm.source, &mm.target);
    let (sd, td): (&dyn FiniteMonad, &dyn FiniteMonad) = (&**s, &**t);
    let mut out = Vec::new();
    for (k, x) in objects.iter().enumerate() {
        let name = format!("{}", x);
        let tx = x.t();
        let atoms = level_elements(sd, x, usize::MAX).expect("base level is finite");
        let s1 = supply(sd, &tx, cfg, &mut rng_for(cfg.seed, k, 20));
        let jx = mm.component_morph(x);

        let mut typing = Tally::new("morphism_typing", &name);
        let mut inj = Tally::new("component_injective", &name);
        let images: Vec<Elem> = s1.elems.iter().map(|a| jx.apply(a)).collect();
        for (a, r) in s1.elems.iter().zip(&images) {
            typing.check(level_contains(td, &tx, r), || format!("j({}) = {} is not in T' X", x.render(a), x.render(r)));
        }
        let mut sorted: Vec<(&Elem, &Elem)> = images.iter().zip(&s1.elems).collect();
        sorted.sort();
        for w in sorted.windows(2) {
            inj.check(w[0].0 != w[1].0, || format!("j({}) = j({})", x.render(w[0].1), x.render(w[1].1)));
        }
        typing.partial(s1.exhaustive);
        inj.partial(s1.exhaustive);

        let mut unit = Tally::new("morphism_unit", &name);
        for a in &atoms {
            let (l, r) = (mm.component(x, &s.unit(x, a)), t.unit(x, a));
            unit.check(l == r, || format!("j(e({})) = {} but e'({}) = {}", x.render(a), x.render(&l), x.render(a), x.render(&r)));
        }

        let mut nat = Tally::new("morphism_naturality", &name);
        let mut rng = rng_for(cfg.seed, k, 21);
        let (fs, all) = some_maps(&x.base, &x.base, cfg.maps_per_pair, &mut rng);
        nat.partial(all && s1.exhaustive);
        for f in &fs {
            let fm = Morph::from_monotone(f);
            let (tf, t2f) = (t_morph(s, &fm), t_morph(t, &fm));
            for a in &s1.elems {
                let (l, r) = (mm.component(x, &tf.apply(a)), t2f.apply(&jx.apply(a)));
                nat.check(l == r, || format!("f = {:?} at {}: {} vs {}", f.table(), x.render(a), x.render(&l), x.render(&r)));
            }
        }

        let mut mult = Tally::new("morphism_mult", &name);
        match materialize(td, &tx, cfg.budget) {
            Some((b, list)) if level_elements(td, &Obj::new(b.clone()).t(), cfg.budget).is_some() => {
                let bo = Obj::new(b.clone());
                let lookup = list.clone();
                let jc = mm.component.clone();
                let xo = x.clone();
                let to_b = Morph::new(tx.clone(), bo.clone(), move |a| {
                    let r = jc(&xo, a);
                    Elem::atom(lookup.binary_search(&r).unwrap_or_else(|_| {
                        lookup.iter().position(|e| *e == r).expect("component lands in T' X")
                    }))
                });
                let tj = t_morph(s, &to_b);
                let s2 = supply(sd, &tx.t(), cfg, &mut rng_for(cfg.seed, k, 22));
                for a in &s2.elems {
                    let l = mm.component(x, &s.mult(x, a));
                    let over_b = mm.component(&bo, &tj.apply(a));
                    let r = t.mult(x, &over_b.substitute(&list));
                    mult.check(l == r, || format!("at {}: j(m) = {} but m'(j j) = {}", x.render(a), x.render(&l), x.render(&r)));
                }
                mult.partial(s2.exhaustive);
            }
            _ => mult.partial(false),
        }
        out.extend([typing.done(), inj.done(), unit.done(), nat.done(), mult.done()]);
    }
    out
}

/// How hom-objects into the two-element lattice are ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomOrder {
    /// Pointwise in the Sierpinski order `1 < 0`.
    Sierpinski,
    Discrete,
}

/// The monad `G' F'` of the adjunction between finite posets and finite
/// distributive lattices given by down-sets and maps into `2` of a fixed
/// preservation class.
///
/// An element of `G' F' X` is stored as the set of down-sets it sends to 1.
pub struct InducedMonad {
    name: String,
    class: Preservation,
    order: HomOrder,
}

impl InducedMonad {
    pub fn new(name: &str, class: Preservation, order: HomOrder) -> Self {
        InducedMonad {
            name: name.to_string(),
            class,
            order,
        }
    }

    pub fn class(&self) -> Preservation {
        self.class
    }
}

/// Down-sets of a level, as sets of its elements, in canonical order.
pub fn level_down_sets(t: &dyn FiniteMonad, level: &Obj, elems: &[Elem], limit: usize) -> Option<Vec<Elem>> {
    let masks = enumerate_down_masks_limited(elems.len(), |a, b| level_le(t, level, &elems[a], &elems[b]), limit)?;
    Some(
        masks
            .into_iter()
            .map(|m| Elem::set(mask_iter(m).map(|i| elems[i].clone()).collect()))
            .collect(),
    )
}

impl FiniteMonad for InducedMonad {
    fn name(&self) -> &str {
        &self.name
    }

    fn admits(&self, base: &FinPoset) -> bool {
        self.order == HomOrder::Sierpinski || base.is_antichain()
    }

    fn t_le(&self, _: &Obj, a: &Elem, b: &Elem) -> bool {
        match self.order {
            HomOrder::Sierpinski => b.is_subset(a),
            HomOrder::Discrete => a == b,
        }
    }

    fn t_contains(&self, below: &Obj, a: &Elem) -> bool {
        match level_elements(self, below, usize::MAX) {
            Some(elems) => self
                .t_elements(below, &elems, usize::MAX)
                .is_some_and(|all| all.binary_search(a).is_ok()),
            None => false,
        }
    }

    fn t_elements(&self, below: &Obj, below_elems: &[Elem], limit: usize) -> Option<Vec<Elem>> {
        let downs = level_down_sets(self, below, below_elems, limit)?;
        let labels = (0..below_elems.len()).map(|i| format!("{i}")).collect();
        let p = Arc::new(FinPoset::from_fn_unchecked(labels, |a, b| {
            level_le(self, below, &below_elems[a], &below_elems[b])
        }));
        let l = Arc::new(downset_lattice(&p));
        let maps = enumerate_maps(&l, &Arc::new(two()), self.class);
        if maps.len() > limit {
            return None;
        }
        // lattice elements follow the same canonical down-set order as `downs`
        let mut out: Vec<Elem> = maps
            .iter()
            .map(|phi| Elem::set((0..l.len()).filter(|&u| phi.apply(u) == 1).map(|u| downs[u].clone()).collect()))
            .collect();
        out.sort();
        Some(out)
    }

    fn t_sample(&self, below: &Obj, rng: &mut dyn RngCore, limit: usize) -> Option<Elem> {
        let elems = level_elements(self, below, limit)?;
        let all = self.t_elements(below, &elems, limit)?;
        all.choose(rng).cloned()
    }

    fn unit(&self, x: &Obj, a: &Elem) -> Elem {
        let elems = level_elements(self, x, usize::MAX).expect("finite level");
        let downs = level_down_sets(self, x, &elems, usize::MAX).expect("finite level");
        Elem::set(downs.into_iter().filter(|u| u.has(a)).collect())
    }

    fn mult(&self, x: &Obj, a: &Elem) -> Elem {
        let elems = level_elements(self, x, usize::MAX).expect("finite level");
        let downs = level_down_sets(self, x, &elems, usize::MAX).expect("finite level");
        let tx = self.t_elements(x, &elems, usize::MAX).expect("finite level");
        Elem::set(
            downs
                .into_iter()
                .filter(|u| a.has(&Elem::set(tx.iter().filter(|phi| phi.has(u)).cloned().collect())))
                .collect(),
        )
    }

    fn map(&self, f: &Morph, a: &Elem) -> Elem {
        let src = level_elements(self, &f.src, usize::MAX).expect("finite level");
        let dst = level_elements(self, &f.dst, usize::MAX).expect("finite level");
        let downs = level_down_sets(self, &f.dst, &dst, usize::MAX).expect("finite level");
        let images: Vec<Elem> = src.iter().map(|e| f.apply(e)).collect();
        Elem::set(
            downs
                .into_iter()
                .filter(|v| {
                    let pre = Elem::set(
                        src.iter()
                            .zip(&images)
                            .filter(|(_, y)| v.has(y))
                            .map(|(e, _)| e.clone())
                            .collect(),
                    );
                    a.has(&pre)
                })
                .collect(),
        )
    }

    fn one_bit(&self, a: &Elem) -> bool {
        // join-preserving maps are read off at {*}, meet-preserving ones at the empty down-set
        let probe = if self.class.contains(Preservation::BOTTOM) { 1 } else { 0 };
        a.members().iter().any(|u| u.members().len() == probe)
    }
}

/// `h_U : x -> T 1`, the map sending `U` to the true element of `T 1`.
pub fn characteristic(t: &Monad, x: &Obj, u: &Elem) -> Morph {
    let one = Obj::new(Arc::new(FinPoset::singleton())).t();
    let t1 = level_elements(&**t, &one, usize::MAX).expect("T 1 is finite");
    let yes = t1.iter().find(|e| t.one_bit(e)).expect("T 1 has a true element").clone();
    let no = t1.iter().find(|e| !t.one_bit(e)).expect("T 1 has a false element").clone();
    let u = u.clone();
    Morph::new(x.clone(), one, move |a| if u.has(a) { yes.clone() } else { no.clone() })
}

/// `h-bar = m_1 . T h`, the extension of `h : x -> T 1` to `T x`.
pub fn extension(t: &Monad, h: &Morph) -> Morph {
    let one = Obj::new(Arc::new(FinPoset::singleton()));
    t_morph(t, h).then(&mult_morph(t, &one)).expect("h lands in T 1")
}

/// The canonical `j : T -> G' F'` with
/// `j_X(a) = { U | h_U-bar(a) is true }`.
pub fn induced_monad_morphism(t: &Monad, target: &Arc<InducedMonad>) -> MonadMorphism {
    let src = t.clone();
    let tgt: Monad = target.clone();
    MonadMorphism::new(t.clone(), tgt, move |x, a| {
        let elems = level_elements(&*src, x, usize::MAX).expect("finite level");
        let downs = level_down_sets(&*src, x, &elems, usize::MAX).expect("finite level");
        Elem::set(
            downs
                .into_iter()
                .filter(|u| {
                    let hbar = extension(&src, &characteristic(&src, x, u));
                    src.one_bit(&hbar.apply(a))
                })
                .collect(),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elem_sets_are_canonical() {
        let a = Elem::set(vec![Elem::atom(2), Elem::atom(0), Elem::atom(2)]);
        assert_eq!(a, Elem::Set(vec![Elem::atom(0), Elem::atom(2)]));
        assert!(a.has(&Elem::atom(2)));
        assert_eq!(a.to_mask(), 0b101);
        assert_eq!(Elem::from_mask(0b101), a);
        let p = FinPoset::chain(3);
        assert_eq!(a.render(&p), "{a,c}");
    }

    #[test]
    fn identity_monad_passes_everything() {
        let t: Monad = Arc::new(IdentityMonad);
        let objs: Vec<Obj> = [FinPoset::empty(), FinPoset::chain(2), FinPoset::antichain(2)]
            .into_iter()
            .map(|p| Obj::new(Arc::new(p)))
            .collect();
        let report = check_monad_laws(&t, &objs, &LawConfig::default());
        assert!(report.iter().all(|c| c.passed), "{report:?}");
        assert!(check_adjunction(&IdentityAdjunction::new(64), &objs, &objs)
            .iter()
            .all(|c| c.passed));
        let id = identity_monad_morphism(&t);
        assert!(check_monad_morphism(&id, &objs, &LawConfig::default())
            .iter()
            .all(|c| c.passed));
    }

    #[test]
    fn morph_composition_checks_objects() {
        let a = Obj::new(Arc::new(FinPoset::chain(2)));
        let b = Obj::new(Arc::new(FinPoset::antichain(2)));
        let f = Morph::identity(&a);
        let g = Morph::identity(&b);
        assert!(matches!(f.then(&g), Err(Error::Mismatch(_))));
        assert!(f.then(&f).is_ok());
    }
}
