//! Dualities between finite spaces with relations and finite lattices with
//! operators: the functor `J`, its inverse, spectra, the monad morphism into
//! the monad of the ambient adjunction, and the translation between
//! coalgebras and lattices with an operator.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::finstruct::{bit, FinPoset, Mask, MonotoneMap, SpecRelation};
use crate::instances::{relation_to_kleisli, Filter, Powerset, Vietoris};
use crate::lattice::{classify_map, downset_lattice, enumerate_maps, lattice_iso, two, DistLattice, LatticeMap, Preservation};
use crate::monadkit::{
    characteristic, comparison_c, extension, induced_monad_morphism, level_elements, Adjunction, Elem, FinCategory,
    HomOrder, InducedMonad, KleisliMorphism, Monad, MonadMorphism, Obj,
};

/// The top of the two-element lattice.
const TRUE: usize = 1;

pub const PACKAGE_NAMES: [&str; 4] = ["rel_cabool", "setF_cabool_meet", "specrel_dlat", "stonerel_bool"];

/// A monad on finite spaces together with the class of maps into `2` that
/// makes its Kleisli category dual to a category of lattices.
#[derive(Clone)]
pub struct DualityPackage {
    name: &'static str,
    monad: Monad,
    class: Preservation,
    order: HomOrder,
    sets_only: bool,
}

impl DualityPackage {
    pub fn by_name(name: &str) -> Option<Self> {
        let (name, monad, class, order, sets_only): (_, Monad, _, _, _) = match name {
            "rel_cabool" => (PACKAGE_NAMES[0], Arc::new(Powerset), Preservation::HEMI, HomOrder::Discrete, true),
            "setF_cabool_meet" => (PACKAGE_NAMES[1], Arc::new(Filter), Preservation::DUAL_HEMI, HomOrder::Discrete, true),
            "specrel_dlat" => (PACKAGE_NAMES[2], Arc::new(Vietoris::new()), Preservation::HEMI, HomOrder::Sierpinski, false),
            "stonerel_bool" => (PACKAGE_NAMES[3], Arc::new(Vietoris::hat()), Preservation::HEMI, HomOrder::Discrete, true),
            _ => return None,
        };
        Some(DualityPackage {
            name,
            monad,
            class,
            order,
            sets_only,
        })
    }

    pub fn all() -> Vec<Self> {
        PACKAGE_NAMES.iter().filter_map(|n| Self::by_name(n)).collect()
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn monad(&self) -> &Monad {
        &self.monad
    }

    pub fn class(&self) -> Preservation {
        self.class
    }

    pub fn order(&self) -> HomOrder {
        self.order
    }

    /// Whether the package's spaces are discrete.
    pub fn sets_only(&self) -> bool {
        self.sets_only
    }

    pub fn admits(&self, x: &FinPoset) -> bool {
        !self.sets_only || x.is_antichain()
    }

    /// The monad `G' F'` of the ambient adjunction.
    pub fn induced(&self) -> Arc<InducedMonad> {
        Arc::new(InducedMonad::new(&format!("{}'", self.monad.name()), self.class, self.order))
    }

    /// `j : T -> G' F'`.
    pub fn j(&self) -> MonadMorphism {
        induced_monad_morphism(&self.monad, &self.induced())
    }

    pub fn ambient(&self) -> AmbientAdjunction {
        AmbientAdjunction {
            class: self.class,
            order: self.order,
            spaces: Spaces,
            algebras: AlgebrasOp,
        }
    }

    /// `J` on a Kleisli morphism, through the comparison functor of the
    /// ambient adjunction applied to `j_Y . f`.
    pub fn dualize(&self, f: &KleisliMorphism) -> Result<LatticeMap> {
        let adj = self.ambient();
        let y = f.dst.base.clone();
        let g = self.kleisli_to_ambient(f)?;
        Ok(comparison_c(&adj, &g, &y)?.0)
    }

    /// `j_Y . f : X -> G' F' Y` as a monotone map into the hom-space poset.
    pub fn kleisli_to_ambient(&self, f: &KleisliMorphism) -> Result<MonotoneMap> {
        if f.src.depth != 0 || f.dst.depth != 0 {
            return Err(Error::Mismatch(format!("{} -> {} is not between base objects", f.src, f.dst)));
        }
        let (x, y) = (f.src.base.clone(), f.dst.base.clone());
        let jy = Arc::new(downset_lattice(&y));
        let space = hom_space(&jy, self.class, self.order);
        let j = self.j();
        let table = (0..x.len())
            .map(|i| {
                let phi = j.component(&f.dst, &f.arrow.apply(&Elem::atom(i)));
                let ones = phi
                    .members()
                    .iter()
                    .map(|u| jy.element_of(u.to_mask()).ok_or_else(|| Error::Mismatch("j produced a non-down-set".into())))
                    .collect::<Result<Vec<usize>>>()?;
                space
                    .index_of_ones(&ones)
                    .ok_or_else(|| Error::Mismatch(format!("j({}) is not a map of the class", x.label(i))))
            })
            .collect::<Result<Vec<usize>>>()?;
        MonotoneMap::new(x, space.points.clone(), table)
    }
}

/// Maps `l -> 2` of a preservation class, as the points of a poset.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub points: Arc<FinPoset>,
    pub maps: Vec<LatticeMap>,
}

impl HomSpace {
    /// The point sending exactly `ones` to the top.
    pub fn index_of_ones(&self, ones: &[usize]) -> Option<usize> {
        self.maps.iter().position(|m| {
            let top = m.target().top();
            (0..m.source().len()).all(|b| (m.apply(b) == top) == ones.contains(&b))
        })
    }
}

fn ones_of(m: &LatticeMap) -> Vec<usize> {
    let top = m.target().top();
    (0..m.source().len()).filter(|&b| m.apply(b) == top).collect()
}

/// The maps `l -> 2` of class `class`, ordered pointwise with `1 < 0`
/// (a map is below another when it sends more elements to the top) or
/// discretely.
pub fn hom_space(l: &Arc<DistLattice>, class: Preservation, order: HomOrder) -> HomSpace {
    let maps = enumerate_maps(l, &Arc::new(two()), class);
    let ones: Vec<Vec<usize>> = maps.iter().map(ones_of).collect();
    let labels = ones
        .iter()
        .map(|o| {
            let parts: Vec<&str> = o.iter().map(|&b| l.label(b)).collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    let points = FinPoset::from_fn_unchecked(labels, |a, b| match order {
        HomOrder::Sierpinski => ones[b].iter().all(|u| ones[a].contains(u)),
        HomOrder::Discrete => a == b,
    });
    HomSpace {
        points: Arc::new(points),
        maps,
    }
}

/// The points of `l`: lattice homomorphisms `l -> 2` in the pointwise
/// Sierpinski order.
pub fn spectrum(l: &Arc<DistLattice>) -> HomSpace {
    hom_space(l, Preservation::HOM, HomOrder::Sierpinski)
}

/// `x -> ev_x`, from `x` into the given space of maps `J x -> 2`.
pub fn evaluation(x: &Arc<FinPoset>, jx: &DistLattice, space: &HomSpace) -> Result<MonotoneMap> {
    let table = (0..x.len())
        .map(|i| {
            let ones: Vec<usize> = (0..jx.len())
                .filter(|&b| jx.mask_of(b).is_some_and(|m| m & bit(i) != 0))
                .collect();
            space
                .index_of_ones(&ones)
                .ok_or_else(|| Error::Mismatch(format!("ev_{} is not among the points", x.label(i))))
        })
        .collect::<Result<Vec<usize>>>()?;
    MonotoneMap::new(x.clone(), space.points.clone(), table)
}

/// Whether `f` is bijective and reflects the order.
pub fn is_order_iso(f: &MonotoneMap) -> bool {
    let (s, t) = (f.source(), f.target());
    if s.len() != t.len() {
        return false;
    }
    let mut seen = alloc::vec![false; t.len()];
    for &y in f.table() {
        if core::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    (0..s.len()).all(|a| (0..s.len()).all(|b| s.le(a, b) == t.le(f.apply(a), f.apply(b))))
}

/// The relation between spectra dual to `h : M -> L`: a point `p` of `L` is
/// related to a point `q` of `M` iff `q(b) = 1` implies `p(h(b)) = 1`.
pub fn spectrum_relation(h: &LatticeMap, sl: &HomSpace, sm: &HomSpace) -> Result<SpecRelation> {
    let m = h.source();
    let rows = sl
        .maps
        .iter()
        .map(|p| {
            sm.maps.iter().enumerate().fold(0, |acc, (k, q)| {
                let ok = (0..m.len()).all(|b| q.apply(b) != TRUE || p.apply(h.apply(b)) == TRUE);
                if ok {
                    acc | bit(k)
                } else {
                    acc
                }
            })
        })
        .collect();
    SpecRelation::from_rows(sl.points.clone(), sm.points.clone(), rows)
}

/// `J r : J Y -> J X`, `B -> {x | x r y for some y in B}`.
pub fn j_spec(r: &SpecRelation) -> LatticeMap {
    let jx = Arc::new(downset_lattice(r.source()));
    let jy = Arc::new(downset_lattice(r.target()));
    j_spec_in(r, &jx, &jy)
}

/// [`j_spec`] with the down-set lattices supplied.
pub fn j_spec_in(r: &SpecRelation, jx: &Arc<DistLattice>, jy: &Arc<DistLattice>) -> LatticeMap {
    let n = r.source().len();
    let table = (0..jy.len())
        .map(|b| {
            let bm = jy.mask_of(b).expect("down-set lattice");
            let m = (0..n).filter(|&x| r.fiber(x) & bm != 0).fold(0, |m, x| m | bit(x));
            jx.element_of(m).expect("preimage of a down-set is a down-set")
        })
        .collect();
    let out = classify_map(table, jy, jx).expect("table in range");
    #[cfg(debug_assertions)]
    if n <= 4 && r.target().len() <= 4 {
        debug_assert_eq!(Some(&out), j_spec_via_extension(r).ok().as_ref(), "J r disagrees with the extension route");
    }
    out
}

/// `J r (B) = {x | h_B-bar(r(x)) = 1}`, with `h_B-bar` the extension of the
/// characteristic map of `B` through the lower Vietoris monad.
pub fn j_spec_via_extension(r: &SpecRelation) -> Result<LatticeMap> {
    let v: Monad = Arc::new(Vietoris::new());
    let (x, y) = (r.source(), r.target());
    let (jx, jy) = (Arc::new(downset_lattice(x)), Arc::new(downset_lattice(y)));
    let yo = Obj::new(y.clone());
    let table = (0..jy.len())
        .map(|b| {
            let u = Elem::from_mask(jy.mask_of(b).expect("down-set lattice"));
            let hbar = extension(&v, &characteristic(&v, &yo, &u));
            let m = (0..x.len())
                .filter(|&i| v.one_bit(&hbar.apply(&Elem::from_mask(r.fiber(i)))))
                .fold(0, |m, i| m | bit(i));
            jx.element_of(m)
                .ok_or_else(|| Error::Mismatch(format!("{} is not a down-set", x.mask_label(m))))
        })
        .collect::<Result<Vec<usize>>>()?;
    classify_map(table, &jy, &jx)
}

/// `J r` through the comparison functor of the spectral package.
pub fn j_spec_via_comparison(r: &SpecRelation) -> Result<LatticeMap> {
    DualityPackage::by_name("specrel_dlat")
        .expect("registered package")
        .dualize(&relation_to_kleisli(r))
}

fn generating_poset(l: &DistLattice) -> Result<Arc<FinPoset>> {
    l.generators()
        .map(|g| g.poset.clone())
        .ok_or_else(|| Error::Mismatch(format!("lattice {l} carries no generating poset")))
}

/// The relation `X -> Y` with `x r y` iff `x` lies in `h(down y)`, for a
/// hemimorphism `h : J Y -> J X`.
pub fn from_hemimorphism(h: &LatticeMap) -> Result<SpecRelation> {
    h.require(Preservation::HEMI)?;
    let (jy, jx) = (h.source(), h.target());
    let (y, x) = (generating_poset(jy)?, generating_poset(jx)?);
    let principal: Vec<Mask> = (0..y.len())
        .map(|k| jx.mask_of(h.apply(jy.element_of(y.down_of(k)).expect("principal down-set"))).expect("down-set lattice"))
        .collect();
    let rows = (0..x.len())
        .map(|i| (0..y.len()).filter(|&k| principal[k] & bit(i) != 0).fold(0, |m, k| m | bit(k)))
        .collect();
    SpecRelation::from_rows(x, y, rows)
}

/// `J f : P Y -> P X`, `B -> {x | B in f(x)}`, for a Kleisli morphism of the
/// filter monad. `f(x)` is the filter generated by the encoded set.
pub fn filter_duality_j(f: &KleisliMorphism) -> Result<LatticeMap> {
    if f.src.depth != 0 || f.dst.depth != 0 {
        return Err(Error::Mismatch(format!("{} -> {} is not between base objects", f.src, f.dst)));
    }
    let (x, y) = (f.src.base.clone(), f.dst.base.clone());
    let (px, py) = (Arc::new(downset_lattice(&x)), Arc::new(downset_lattice(&y)));
    let gens: Vec<Mask> = (0..x.len()).map(|i| f.arrow.apply(&Elem::atom(i)).to_mask()).collect();
    let table = (0..py.len())
        .map(|b| {
            let bm = py.mask_of(b).expect("down-set lattice");
            let m = (0..x.len()).filter(|&i| gens[i] & !bm == 0).fold(0, |m, i| m | bit(i));
            px.element_of(m).ok_or_else(|| Error::Mismatch("source is not discrete".into()))
        })
        .collect::<Result<Vec<usize>>>()?;
    classify_map(table, &py, &px)
}

/// Finite posets with monotone maps.
pub struct Spaces;

impl FinCategory for Spaces {
    type Ob = Arc<FinPoset>;
    type Mor = MonotoneMap;

    fn source(&self, f: &MonotoneMap) -> Arc<FinPoset> {
        f.source().clone()
    }

    fn target(&self, f: &MonotoneMap) -> Arc<FinPoset> {
        f.target().clone()
    }

    fn identity(&self, x: &Arc<FinPoset>) -> MonotoneMap {
        MonotoneMap::identity(x.clone())
    }

    fn compose(&self, f: &MonotoneMap, g: &MonotoneMap) -> Result<MonotoneMap> {
        f.then(g)
    }

    fn differ(&self, f: &MonotoneMap, g: &MonotoneMap) -> Result<Option<String>> {
        if f.source() != g.source() || f.target() != g.target() {
            return Ok(Some("different endpoints".to_string()));
        }
        Ok((0..f.source().len()).find(|&i| f.apply(i) != g.apply(i)).map(|i| {
            format!(
                "at {}: {} vs {}",
                f.source().label(i),
                f.target().label(f.apply(i)),
                g.target().label(g.apply(i))
            )
        }))
    }
}

/// An arrow `L -> M` of the opposite of a lattice category, stored as the
/// lattice map `M -> L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpMap(pub LatticeMap);

/// Finite distributive lattices, arrows reversed.
pub struct AlgebrasOp;

impl FinCategory for AlgebrasOp {
    type Ob = Arc<DistLattice>;
    type Mor = OpMap;

    fn source(&self, f: &OpMap) -> Arc<DistLattice> {
        f.0.target().clone()
    }

    fn target(&self, f: &OpMap) -> Arc<DistLattice> {
        f.0.source().clone()
    }

    fn identity(&self, l: &Arc<DistLattice>) -> OpMap {
        OpMap(LatticeMap::identity(l))
    }

    fn compose(&self, f: &OpMap, g: &OpMap) -> Result<OpMap> {
        Ok(OpMap(g.0.then(&f.0)?))
    }

    fn differ(&self, f: &OpMap, g: &OpMap) -> Result<Option<String>> {
        if f.0.source() != g.0.source() || f.0.target() != g.0.target() {
            return Ok(Some("different endpoints".to_string()));
        }
        let (l, m) = (f.0.source(), f.0.target());
        Ok((0..l.len()).find(|&b| f.0.apply(b) != g.0.apply(b)).map(|b| {
            format!("at {}: {} vs {}", l.label(b), m.label(f.0.apply(b)), m.label(g.0.apply(b)))
        }))
    }
}

/// `F' -| G'` between finite posets and the opposite of finite distributive
/// lattices: `F' X = J X` and `G' L` is the space of maps `L -> 2` of the
/// package's class.
pub struct AmbientAdjunction {
    class: Preservation,
    order: HomOrder,
    spaces: Spaces,
    algebras: AlgebrasOp,
}

impl AmbientAdjunction {
    pub fn new(class: Preservation, order: HomOrder) -> Self {
        AmbientAdjunction {
            class,
            order,
            spaces: Spaces,
            algebras: AlgebrasOp,
        }
    }

    pub fn hom_space(&self, l: &Arc<DistLattice>) -> HomSpace {
        hom_space(l, self.class, self.order)
    }
}

impl Adjunction for AmbientAdjunction {
    type L = Spaces;
    type R = AlgebrasOp;

    fn left_cat(&self) -> &Spaces {
        &self.spaces
    }

    fn right_cat(&self) -> &AlgebrasOp {
        &self.algebras
    }

    fn left_obj(&self, x: &Arc<FinPoset>) -> Arc<DistLattice> {
        Arc::new(downset_lattice(x))
    }

    fn right_obj(&self, l: &Arc<DistLattice>) -> Arc<FinPoset> {
        self.hom_space(l).points
    }

    /// Preimage along `f`.
    fn left(&self, f: &MonotoneMap) -> OpMap {
        let (jx, jy) = (self.left_obj(f.source()), self.left_obj(f.target()));
        let table = (0..jy.len())
            .map(|b| jx.element_of(f.preimage(jy.mask_of(b).expect("down-set lattice"))).expect("preimage of a down-set"))
            .collect();
        OpMap(classify_map(table, &jy, &jx).expect("table in range"))
    }

    /// Precomposition `p -> p . g`.
    fn right(&self, g: &OpMap) -> MonotoneMap {
        let (m, l) = (g.0.source(), g.0.target());
        let (sl, sm) = (self.hom_space(l), self.hom_space(m));
        let table = sl
            .maps
            .iter()
            .map(|p| {
                let ones: Vec<usize> = (0..m.len()).filter(|&b| p.apply(g.0.apply(b)) == TRUE).collect();
                sm.index_of_ones(&ones).expect("precomposition stays in the class")
            })
            .collect();
        MonotoneMap::new(sl.points, sm.points, table).expect("precomposition is monotone")
    }

    fn unit(&self, x: &Arc<FinPoset>) -> MonotoneMap {
        let jx = self.left_obj(x);
        evaluation(x, &jx, &self.hom_space(&jx)).expect("evaluations belong to every class")
    }

    /// `b -> {p | p(b) = 1}`.
    fn counit(&self, l: &Arc<DistLattice>) -> OpMap {
        let space = self.hom_space(l);
        let jg = self.left_obj(&space.points);
        let table = (0..l.len())
            .map(|b| {
                let m = space
                    .maps
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.apply(b) == p.target().top())
                    .fold(0, |m, (k, _)| m | bit(k));
                jg.element_of(m).expect("evaluation at b is a down-set")
            })
            .collect();
        OpMap(classify_map(table, l, &jg).expect("table in range"))
    }
}

/// The component `j_X` compared against every element of `G' F' X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JComponent {
    pub package: String,
    pub object: String,
    pub source_size: usize,
    pub target_size: usize,
    pub injective: bool,
    pub surjective: bool,
    pub witness: Option<String>,
}

pub fn j_component(pkg: &DualityPackage, x: &Arc<FinPoset>, limit: usize) -> Result<JComponent> {
    let xo = Obj::new(x.clone());
    let too_large = || Error::TooLarge {
        size: limit + 1,
        cap: limit,
    };
    let tx = level_elements(&**pkg.monad(), &xo.t(), limit).ok_or_else(too_large)?;
    let induced = pkg.induced();
    let mut target = level_elements(&*induced, &xo.t(), limit).ok_or_else(too_large)?;
    target.sort();
    let j = pkg.j();
    let mut images: Vec<(Elem, &Elem)> = tx.iter().map(|a| (j.component(&xo, a), a)).collect();
    images.sort();
    let mut witness = None;
    let mut injective = true;
    for w in images.windows(2) {
        if w[0].0 == w[1].0 {
            injective = false;
            witness.get_or_insert_with(|| format!("j({}) = j({})", xo.render(w[0].1), xo.render(w[1].1)));
        }
    }
    let mut hit: Vec<Elem> = images.iter().map(|(e, _)| e.clone()).collect();
    hit.dedup();
    let surjective = hit == target;
    if !surjective && witness.is_none() {
        witness = target
            .iter()
            .find(|t| hit.binary_search(t).is_err())
            .map(|t| format!("{} is not in the image", xo.render(t)))
            .or_else(|| Some("j lands outside G' F' X".to_string()));
    }
    Ok(JComponent {
        package: pkg.name().to_string(),
        object: format!("{x}"),
        source_size: tx.len(),
        target_size: target.len(),
        injective,
        surjective,
        witness,
    })
}

/// For every lattice of the package's image class (Boolean lattices for the
/// discrete packages), a space from `spaces` whose `J` is isomorphic to it.
pub fn essentially_surjective(
    pkg: &DualityPackage,
    lattices: &[DistLattice],
    spaces: &[Arc<FinPoset>],
) -> Vec<(String, Option<String>)> {
    let images: Vec<(Arc<FinPoset>, DistLattice)> = spaces
        .iter()
        .filter(|x| pkg.admits(x))
        .map(|x| (x.clone(), downset_lattice(x)))
        .collect();
    lattices
        .iter()
        .filter(|l| !pkg.sets_only() || l.is_boolean().is_some())
        .map(|l| {
            let hit = images
                .iter()
                .find(|(_, jx)| jx.len() == l.len() && lattice_iso(jx, l).is_some())
                .map(|(x, _)| format!("{x}"));
            (format!("{l}"), hit)
        })
        .collect()
}

/// A space with a relation to itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    pub carrier: Arc<FinPoset>,
    pub step: SpecRelation,
}

impl Coalgebra {
    pub fn new(step: SpecRelation) -> Result<Self> {
        if step.source() != step.target() {
            return Err(Error::SourceTargetMismatch(format!(
                "a coalgebra needs an endo-relation, got {} -> {}",
                step.source(),
                step.target()
            )));
        }
        Ok(Coalgebra {
            carrier: step.source().clone(),
            step,
        })
    }
}

/// A lattice with a join-preserving operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorAlgebra {
    pub lattice: Arc<DistLattice>,
    pub op: LatticeMap,
}

impl OperatorAlgebra {
    pub fn new(op: LatticeMap) -> Result<Self> {
        if op.source() != op.target() {
            return Err(Error::SourceTargetMismatch("an operator maps a lattice to itself".into()));
        }
        op.require(Preservation::HEMI)?;
        Ok(OperatorAlgebra {
            lattice: op.source().clone(),
            op,
        })
    }
}

pub fn coalg_to_operator(c: &Coalgebra) -> OperatorAlgebra {
    let jx = Arc::new(downset_lattice(&c.carrier));
    let op = j_spec_in(&c.step, &jx, &jx);
    OperatorAlgebra { lattice: jx, op }
}

pub fn operator_to_coalg(a: &OperatorAlgebra) -> Result<Coalgebra> {
    Coalgebra::new(from_hemimorphism(&a.op)?)
}

/// `F f . c = d . F f` in the Kleisli category: `c` then `f_*` equals `f_*`
/// then `d`.
pub fn is_coalgebra_morphism(f: &MonotoneMap, c: &Coalgebra, d: &Coalgebra) -> Result<bool> {
    if f.source() != &c.carrier || f.target() != &d.carrier {
        return Err(Error::SourceTargetMismatch("map does not join the carriers".into()));
    }
    let fs = SpecRelation::lower_graph(f);
    Ok(c.step.compose(&fs)? == fs.compose(&d.step)?)
}

/// A lattice homomorphism `g` with `g . op_a = op_b . g`.
pub fn is_operator_morphism(g: &LatticeMap, a: &OperatorAlgebra, b: &OperatorAlgebra) -> Result<bool> {
    if g.source() != &a.lattice || g.target() != &b.lattice {
        return Err(Error::SourceTargetMismatch("map does not join the lattices".into()));
    }
    Ok(g.class().contains(Preservation::HOM) && a.op.then(g)?.table() == g.then(&b.op)?.table())
}

/// The dual of a coalgebra morphism `f : (X, c) -> (X', d)`: the
/// homomorphism `J f_* : J X' -> J X`, a morphism from the operator algebra
/// of `d` to that of `c`.
pub fn coalg_morphism_to_operator(f: &MonotoneMap) -> LatticeMap {
    j_spec(&SpecRelation::lower_graph(f))
}

/// Object and morphism counts of the two sides of the coalgebra translation
/// on one carrier, with the first disagreement found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgebraReport {
    pub carrier: String,
    pub coalgebras: usize,
    pub operators: usize,
    pub coalgebra_morphisms: usize,
    pub operator_morphisms: usize,
    pub witness: Option<String>,
}

impl CoalgebraReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn pack(xs: impl Iterator<Item = usize>, width: u32) -> u128 {
    xs.fold(0u128, |acc, v| (acc << width) | v as u128)
}

/// Checks that `J` is a bijection from coalgebras on `x` to operators on
/// `J x`, from monotone endomaps of `x` to homomorphisms of `J x`, that it
/// turns coalgebra morphisms into operator morphisms and nothing else, and
/// that it respects identities and composition.
pub fn coalgebra_translation(x: &Arc<FinPoset>) -> CoalgebraReport {
    let jx = Arc::new(downset_lattice(x));
    let coalgs: Vec<Coalgebra> = SpecRelation::all(x, x)
        .into_iter()
        .map(|r| Coalgebra::new(r).expect("endo-relation"))
        .collect();
    let ops = enumerate_maps(&jx, &jx, Preservation::HEMI);
    let mut report = CoalgebraReport {
        carrier: format!("{x}"),
        coalgebras: coalgs.len(),
        operators: ops.len(),
        coalgebra_morphisms: 0,
        operator_morphisms: 0,
        witness: None,
    };
    fn fail(w: String, r: &mut CoalgebraReport) {
        r.witness.get_or_insert(w);
    }

    let translated: Vec<OperatorAlgebra> = coalgs
        .iter()
        .map(|c| OperatorAlgebra {
            lattice: jx.clone(),
            op: j_spec_in(&c.step, &jx, &jx),
        })
        .collect();
    let mut tables: Vec<&[usize]> = translated.iter().map(|a| a.op.table()).collect();
    tables.sort();
    tables.dedup();
    let mut op_tables: Vec<&[usize]> = ops.iter().map(|o| o.table()).collect();
    op_tables.sort();
    if tables != op_tables {
        fail(format!("{} coalgebras give {} distinct operators out of {}", coalgs.len(), tables.len(), ops.len()), &mut report);
    }
    for (c, a) in coalgs.iter().zip(&translated) {
        match operator_to_coalg(a) {
            Ok(back) if back == *c => {}
            _ => fail(format!("coalgebra {:?} does not survive the round trip", c.step.label_pairs()), &mut report),
        }
    }

    let maps = MonotoneMap::all(x, x);
    let homs = enumerate_maps(&jx, &jx, Preservation::HOM);
    let duals: Vec<LatticeMap> = maps.iter().map(|f| j_spec_in(&SpecRelation::lower_graph(f), &jx, &jx)).collect();
    let mut dual_tables: Vec<&[usize]> = duals.iter().map(|g| g.table()).collect();
    dual_tables.sort();
    dual_tables.dedup();
    let mut hom_tables: Vec<&[usize]> = homs.iter().map(|g| g.table()).collect();
    hom_tables.sort();
    if dual_tables != hom_tables {
        fail(format!("{} monotone maps give {} distinct homomorphisms out of {}", maps.len(), dual_tables.len(), homs.len()), &mut report);
    }
    if duals.iter().any(|g| !g.class().contains(Preservation::HOM)) {
        fail("a map dualizes to a non-homomorphism".into(), &mut report);
    }
    let id = MonotoneMap::identity(x.clone());
    if j_spec_in(&SpecRelation::lower_graph(&id), &jx, &jx) != LatticeMap::identity(&jx) {
        fail("J does not preserve the identity".into(), &mut report);
    }
    for (f, gf) in maps.iter().zip(&duals) {
        for (g, gg) in maps.iter().zip(&duals) {
            let fg = f.then(g).expect("endomaps");
            let composite = j_spec_in(&SpecRelation::lower_graph(&fg), &jx, &jx);
            if gg.then(gf).map(|h| h.table() != composite.table()).unwrap_or(true) {
                fail(format!("J(({:?} then {:?})_*) is not J g_* then J f_*", f.table(), g.table()), &mut report);
            }
        }
    }

    let width = usize::BITS - jx.len().leading_zeros();
    for (f, g) in maps.iter().zip(&duals) {
        let fs = SpecRelation::lower_graph(f);
        let mut rel_left = Vec::with_capacity(coalgs.len());
        let mut rel_right = Vec::with_capacity(coalgs.len());
        let mut alg_left = Vec::with_capacity(coalgs.len());
        let mut alg_right = Vec::with_capacity(coalgs.len());
        for (c, a) in coalgs.iter().zip(&translated) {
            let l = c.step.compose(&fs).expect("endo-relations");
            let r = fs.compose(&c.step).expect("endo-relations");
            rel_left.push(l.rows().to_vec());
            rel_right.push(r.rows().to_vec());
            // c -> d is a morphism iff op_c . g = g . op_d on J x
            alg_left.push(pack((0..jx.len()).map(|b| a.op.apply(g.apply(b))), width));
            alg_right.push(pack((0..jx.len()).map(|b| g.apply(a.op.apply(b))), width));
        }
        for ci in 0..coalgs.len() {
            for di in 0..coalgs.len() {
                let rel = rel_left[ci] == rel_right[di];
                let alg = alg_left[ci] == alg_right[di];
                report.coalgebra_morphisms += rel as usize;
                report.operator_morphisms += alg as usize;
                if rel != alg {
                    fail(
                        format!(
                            "f = {:?} from {:?} to {:?}: coalgebra morphism {rel}, operator morphism {alg}",
                            f.table(),
                            coalgs[ci].step.label_pairs(),
                            coalgs[di].step.label_pairs()
                        ),
                        &mut report,
                    );
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::chain_lattice;

    fn chain(n: usize) -> Arc<FinPoset> {
        Arc::new(FinPoset::chain(n))
    }

    #[test]
    fn j_of_identity_and_empty() {
        let x = chain(2);
        assert_eq!(j_spec(&SpecRelation::identity(x.clone())).table(), &[0, 1, 2]);
        assert_eq!(j_spec(&SpecRelation::empty(x.clone(), x)).table(), &[0, 0, 0]);
    }

    #[test]
    fn spec_relations_on_two_chain_match_hemimorphisms() {
        let x = chain(2);
        let rels = SpecRelation::all(&x, &x);
        assert_eq!(rels.len(), 6);
        let mut tables: Vec<Vec<usize>> = rels.iter().map(|r| j_spec(r).table().to_vec()).collect();
        tables.sort();
        tables.dedup();
        let l = Arc::new(chain_lattice(3));
        let mut hemis: Vec<Vec<usize>> = enumerate_maps(&l, &l, Preservation::HEMI).iter().map(|h| h.table().to_vec()).collect();
        hemis.sort();
        assert_eq!(tables, hemis);
        for r in &rels {
            assert_eq!(&from_hemimorphism(&j_spec(r)).unwrap(), r);
            assert_eq!(&j_spec_via_comparison(r).unwrap(), &j_spec(r));
        }
    }

    #[test]
    fn spectrum_of_three_chain() {
        let l = Arc::new(chain_lattice(3));
        let s = spectrum(&l);
        assert_eq!(s.points.len(), 2);
        let x = chain(2);
        let jx = downset_lattice(&x);
        let ev = evaluation(&x, &jx, &spectrum(&Arc::new(jx.clone()))).unwrap();
        assert!(is_order_iso(&ev));
        assert_eq!(spectrum(&Arc::new(two())).points.len(), 1);
    }

    #[test]
    fn ambient_triangles() {
        use crate::monadkit::check_adjunction;
        for pkg in DualityPackage::all() {
            let adj = pkg.ambient();
            let spaces: Vec<Arc<FinPoset>> = [FinPoset::empty(), FinPoset::singleton(), FinPoset::chain(2), FinPoset::antichain(2)]
                .into_iter()
                .filter(|p| pkg.admits(p))
                .map(Arc::new)
                .collect();
            let lattices: Vec<Arc<DistLattice>> = spaces.iter().map(|x| Arc::new(downset_lattice(x))).collect();
            let report = check_adjunction(&adj, &spaces, &lattices);
            assert!(report.iter().all(|c| c.passed), "{}: {report:?}", pkg.name());
        }
    }

    #[test]
    fn j_components_on_small_spaces() {
        for pkg in DualityPackage::all() {
            for x in [FinPoset::empty(), FinPoset::singleton(), FinPoset::chain(2), FinPoset::antichain(2)] {
                if !pkg.admits(&x) {
                    continue;
                }
                let c = j_component(&pkg, &Arc::new(x), 4096).unwrap();
                assert!(c.injective && c.surjective, "{c:?}");
            }
        }
    }

    #[test]
    fn filter_dual_of_improper_filter_is_top() {
        use crate::monadkit::Morph;
        let x = Obj::new(Arc::new(FinPoset::antichain(2)));
        let arrow = Morph::new(x.clone(), x.t(), |_| Elem::empty());
        let f = KleisliMorphism::new(x.clone(), x.clone(), arrow).unwrap();
        let g = filter_duality_j(&f).unwrap();
        assert!(g.table().iter().all(|&b| b == 3));
        let pkg = DualityPackage::by_name("setF_cabool_meet").unwrap();
        assert_eq!(pkg.dualize(&f).unwrap(), g);
    }

    #[test]
    fn coalgebras_on_two_chain() {
        let r = coalgebra_translation(&chain(2));
        assert_eq!((r.coalgebras, r.operators), (6, 6));
        assert!(r.passed(), "{r:?}");
    }
}
