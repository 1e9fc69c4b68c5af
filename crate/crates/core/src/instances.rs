//! The concrete monads: powerset and filters on finite sets, the lower
//! Vietoris monad on finite posets, and its transfer to finite discrete
//! spaces.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::finstruct::{
    enumerate_up_masks, enumerate_up_masks_limited, mask_iter, up_set_masks, FinPoset, Mask, MonotoneMap, SpecRelation,
};
use crate::monadkit::{
    level_contains, level_elements, level_le, level_sample, Elem, FiniteMonad, KleisliMorphism, Monad, Morph, Obj,
};

/// Members drawn when sampling a set-valued element.
const SAMPLE_MEMBERS: usize = 3;

fn all_subsets(elems: &[Elem], limit: usize) -> Option<Vec<Elem>> {
    let k = elems.len();
    if k >= usize::BITS as usize - 1 || (1usize << k) > limit || k > 63 {
        return None;
    }
    let mut masks: Vec<Mask> = (0..1u64 << k).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    Some(
        masks
            .into_iter()
            .map(|m| Elem::Set(mask_iter(m).map(|i| elems[i].clone()).collect()))
            .collect(),
    )
}

fn sample_members(t: &dyn FiniteMonad, below: &Obj, rng: &mut dyn RngCore, limit: usize) -> Vec<Elem> {
    let k = rng.gen_range(0..=SAMPLE_MEMBERS);
    (0..k).filter_map(|_| level_sample(t, below, rng, limit)).collect()
}

fn union(a: &Elem) -> Elem {
    Elem::set(a.members().iter().flat_map(|m| m.members().iter().cloned()).collect())
}

fn is_canonical_set(a: &Elem) -> bool {
    match a {
        Elem::Set(m) => m.windows(2).all(|w| w[0] < w[1]),
        Elem::Atom(_) => false,
    }
}

/// `P`: subsets, direct images, singletons and unions.
pub struct Powerset;

impl FiniteMonad for Powerset {
    fn name(&self) -> &str {
        "powerset"
    }

    fn admits(&self, base: &FinPoset) -> bool {
        base.is_antichain()
    }

    fn t_le(&self, _: &Obj, a: &Elem, b: &Elem) -> bool {
        a == b
    }

    fn t_contains(&self, below: &Obj, a: &Elem) -> bool {
        is_canonical_set(a) && a.members().iter().all(|m| level_contains(self, below, m))
    }

    fn t_elements(&self, _: &Obj, below_elems: &[Elem], limit: usize) -> Option<Vec<Elem>> {
        all_subsets(below_elems, limit)
    }

    fn t_sample(&self, below: &Obj, rng: &mut dyn RngCore, limit: usize) -> Option<Elem> {
        Some(Elem::set(sample_members(self, below, rng, limit)))
    }

    fn unit(&self, _: &Obj, a: &Elem) -> Elem {
        Elem::Set(alloc::vec![a.clone()])
    }

    fn mult(&self, _: &Obj, a: &Elem) -> Elem {
        union(a)
    }

    fn map(&self, f: &Morph, a: &Elem) -> Elem {
        Elem::set(a.members().iter().map(|m| f.apply(m)).collect())
    }
}

/// `F`: filters on a finite set. Every such filter is principal, so the
/// filter `{B | A subset of B}` is stored as `A`; the improper filter is the
/// empty set.
pub struct Filter;

impl FiniteMonad for Filter {
    fn name(&self) -> &str {
        "filter"
    }

    fn admits(&self, base: &FinPoset) -> bool {
        base.is_antichain()
    }

    fn t_le(&self, _: &Obj, a: &Elem, b: &Elem) -> bool {
        a == b
    }

    fn t_contains(&self, below: &Obj, a: &Elem) -> bool {
        is_canonical_set(a) && a.members().iter().all(|m| level_contains(self, below, m))
    }

    fn t_elements(&self, _: &Obj, below_elems: &[Elem], limit: usize) -> Option<Vec<Elem>> {
        all_subsets(below_elems, limit)
    }

    fn t_sample(&self, below: &Obj, rng: &mut dyn RngCore, limit: usize) -> Option<Elem> {
        Some(Elem::set(sample_members(self, below, rng, limit)))
    }

    /// The principal ultrafilter at `a`.
    fn unit(&self, _: &Obj, a: &Elem) -> Elem {
        Elem::Set(alloc::vec![a.clone()])
    }

    /// `A` belongs to `m(F)` iff `A#` belongs to `F`. With `F` generated by
    /// the filters generated by `A_1, ..., A_k`, this holds iff every `A_i`
    /// is a subset of `A`, so `m(F)` is generated by the union of the `A_i`.
    fn mult(&self, _: &Obj, a: &Elem) -> Elem {
        union(a)
    }

    /// The image filter of the filter generated by `A` is generated by `f[A]`.
    fn map(&self, f: &Morph, a: &Elem) -> Elem {
        Elem::set(a.members().iter().map(|m| f.apply(m)).collect())
    }

    /// The improper filter reads as true, the ultrafilter at `*` as false.
    fn one_bit(&self, a: &Elem) -> bool {
        a.members().is_empty()
    }
}

fn validate_filter_of_filters(n: usize, encoded: &Elem) -> Result<Vec<Mask>> {
    let outer = match encoded {
        Elem::Set(m) => m,
        Elem::Atom(_) => return Err(Error::EncodingError("expected a set of generators".into())),
    };
    let mut gens = Vec::with_capacity(outer.len());
    for g in outer {
        let inner = match g {
            Elem::Set(m) => m,
            Elem::Atom(_) => return Err(Error::EncodingError(format!("generator {g:?} is not a set"))),
        };
        let mut mask: Mask = 0;
        for a in inner {
            match a {
                Elem::Atom(i) if (*i as usize) < n => mask |= 1 << *i,
                _ => return Err(Error::EncodingError(format!("{a:?} is not an element of the base set"))),
            }
        }
        gens.push(mask);
    }
    Ok(gens)
}

/// `m_X` of the filter monad on an encoded filter of filters, computed
/// through the principal encoding and, for sets of at most four elements,
/// cross-checked against [`filter_mult_literal`] in debug builds.
pub fn filter_mult(x: &FinPoset, encoded: &Elem) -> Result<Elem> {
    let gens = validate_filter_of_filters(x.len(), encoded)?;
    let out = Elem::from_mask(gens.iter().fold(0, |m, g| m | g));
    #[cfg(debug_assertions)]
    if x.len() <= 4 {
        debug_assert_eq!(Some(&out), filter_mult_literal(x.len(), encoded).ok().as_ref());
    }
    Ok(out)
}

/// `m_X(F) = {A | A# in F}` evaluated by brute force over explicit families
/// of subsets. Requires `n <= 4`.
///
/// Filters on `X` are indexed by their generators `B` (bit `B` of a mask over
/// `FX`). The filter of filters generated by the encoded `{B_1, ..., B_k}` is
/// listed as every subset of `FX` containing all `B_i`; `A#` is the set of
/// filters containing `A`. The resulting family of subsets of `X` is decoded
/// back to its generator after checking it is principal.
pub fn filter_mult_literal(n: usize, encoded: &Elem) -> Result<Elem> {
    if n > 4 {
        return Err(Error::TooLarge { size: n, cap: 4 });
    }
    let gens = validate_filter_of_filters(n, encoded)?;
    let fx = 1usize << n;
    // the generated filter on FX, as an explicit list of members
    let required: u64 = gens.iter().fold(0, |m, &g| m | (1 << g));
    let big: Vec<u64> = (0..(1u128 << fx) as u64)
        .filter(|s| s & required == required)
        .collect();
    let family: Vec<Mask> = (0..fx as Mask)
        .filter(|&a| {
            // filters generated by some B containing A as a member
            let sharp: u64 = (0..fx as Mask).filter(|&b| b & !a == 0).fold(0, |m, b| m | (1 << b));
            big.binary_search(&sharp).is_ok()
        })
        .collect();
    let meet = family.iter().fold((fx - 1) as Mask, |m, &a| m & a);
    let principal: Vec<Mask> = (0..fx as Mask).filter(|&a| meet & !a == 0).collect();
    if family != principal {
        return Err(Error::EncodingError("result is not a principal filter".into()));
    }
    Ok(Elem::from_mask(meet))
}

/// The lower Vietoris monad `V` on finite posets: closed (up-) sets ordered
/// by reverse inclusion, closures of images, principal up-sets and unions.
///
/// With `discrete` set, every level above the base is given the discrete
/// order; on discrete bases this is the transferred monad on finite Stone
/// spaces.
pub struct Vietoris {
    discrete: bool,
}

impl Vietoris {
    pub fn new() -> Self {
        Vietoris { discrete: false }
    }

    /// The monad on finite discrete spaces.
    pub fn hat() -> Self {
        Vietoris { discrete: true }
    }

    /// Smallest up-set of `level` containing `members`.
    pub fn up_closure(&self, level: &Obj, members: &[Elem]) -> Elem {
        if level.depth == 0 {
            let mask = members.iter().fold(0, |m, a| m | level.base.up_of(a.index()));
            return Elem::from_mask(mask);
        }
        if self.discrete {
            return Elem::set(members.to_vec());
        }
        // above `s` in reverse inclusion: the up-sets contained in `s`
        let below = level.below();
        let mut out = Vec::new();
        for s in members {
            let ms = s.members();
            for mask in enumerate_up_masks(ms.len(), |a, b| level_le(self, &below, &ms[a], &ms[b])) {
                out.push(Elem::Set(mask_iter(mask).map(|i| ms[i].clone()).collect()));
            }
        }
        Elem::set(out)
    }
}

impl Default for Vietoris {
    fn default() -> Self {
        Self::new()
    }
}

impl FiniteMonad for Vietoris {
    fn name(&self) -> &str {
        if self.discrete {
            "vhat"
        } else {
            "vietoris"
        }
    }

    fn admits(&self, base: &FinPoset) -> bool {
        !self.discrete || base.is_antichain()
    }

    fn t_le(&self, _: &Obj, a: &Elem, b: &Elem) -> bool {
        if self.discrete {
            a == b
        } else {
            b.is_subset(a)
        }
    }

    fn t_contains(&self, below: &Obj, a: &Elem) -> bool {
        is_canonical_set(a)
            && a.members().iter().all(|m| level_contains(self, below, m))
            && self.up_closure(below, a.members()) == *a
    }

    fn t_elements(&self, below: &Obj, below_elems: &[Elem], limit: usize) -> Option<Vec<Elem>> {
        let masks = enumerate_up_masks_limited(below_elems.len(), |a, b| level_le(self, below, &below_elems[a], &below_elems[b]), limit)?;
        Some(
            masks
                .into_iter()
                .map(|m| Elem::Set(mask_iter(m).map(|i| below_elems[i].clone()).collect()))
                .collect(),
        )
    }

    fn t_sample(&self, below: &Obj, rng: &mut dyn RngCore, limit: usize) -> Option<Elem> {
        let members = sample_members(self, below, rng, limit);
        Some(self.up_closure(below, &members))
    }

    /// The closure of `{a}`.
    fn unit(&self, x: &Obj, a: &Elem) -> Elem {
        self.up_closure(x, core::slice::from_ref(a))
    }

    fn mult(&self, _: &Obj, a: &Elem) -> Elem {
        union(a)
    }

    /// The closure of the image.
    fn map(&self, f: &Morph, a: &Elem) -> Elem {
        let image: Vec<Elem> = a.members().iter().map(|m| f.apply(m)).collect();
        self.up_closure(&f.dst, &image)
    }
}

/// Instance by its command-line name: `powerset`, `filter`, `vietoris`, `vhat`.
pub fn instance(name: &str) -> Option<Monad> {
    match name {
        "powerset" => Some(Arc::new(Powerset)),
        "filter" => Some(Arc::new(Filter)),
        "vietoris" => Some(Arc::new(Vietoris::new())),
        "vhat" => Some(Arc::new(Vietoris::hat())),
        _ => None,
    }
}

pub const INSTANCE_NAMES: [&str; 4] = ["powerset", "filter", "vietoris", "vhat"];

/// `VX` as an explicit poset: up-sets of `x` in canonical order, ordered by
/// reverse inclusion and labelled like `{a,b}`.
pub fn vietoris_object(x: &Arc<FinPoset>) -> Arc<FinPoset> {
    let ups = up_set_masks(x);
    let labels: Vec<String> = ups.iter().map(|&m| x.mask_label(m)).collect();
    Arc::new(FinPoset::from_fn_unchecked(labels, |a, b| ups[b] & !ups[a] == 0))
}

/// `Vf : VX -> VY`, sending `A` to the up-closure of `f[A]`.
pub fn vietoris_map(f: &MonotoneMap) -> MonotoneMap {
    let (x, y) = (f.source(), f.target());
    let (vx, vy) = (vietoris_object(x), vietoris_object(y));
    let ups_x = up_set_masks(x);
    let ups_y = up_set_masks(y);
    let table = ups_x
        .iter()
        .map(|&a| {
            let img = y.up_closure(f.image(a));
            ups_y.iter().position(|&b| b == img).expect("closure is an up-set")
        })
        .collect();
    MonotoneMap::new(vx, vy, table).expect("V f is monotone")
}

/// Every element of `T X` for a base object, in the monad's own order.
pub fn t_elements_of(t: &dyn FiniteMonad, x: &Arc<FinPoset>, limit: usize) -> Option<Vec<Elem>> {
    level_elements(t, &Obj::new(x.clone()).t(), limit)
}

/// The Kleisli arrow `x -> T y` sending each point to its fiber. Valid for
/// every instance whose elements of `T y` are subsets of `y`.
pub fn relation_to_kleisli(r: &SpecRelation) -> KleisliMorphism {
    let (x, y) = (Obj::new(r.source().clone()), Obj::new(r.target().clone()));
    let rows = r.rows().to_vec();
    let arrow = Morph::new(x.clone(), y.t(), move |a| Elem::from_mask(rows[a.index()]));
    KleisliMorphism::new(x, y, arrow).expect("arrow lands in T y")
}

/// The relation `x r y` iff `y` belongs to `f(x)`.
pub fn kleisli_to_relation(f: &KleisliMorphism) -> Result<SpecRelation> {
    if f.src.depth != 0 || f.dst.depth != 0 {
        return Err(Error::Mismatch(format!("{} -> {} is not between base objects", f.src, f.dst)));
    }
    let rows = (0..f.src.base.len())
        .map(|i| {
            let fx = f.arrow.apply(&Elem::atom(i));
            if fx.members().iter().any(|m| m.is_set() || m.index() >= f.dst.base.len()) {
                return Err(Error::Mismatch(format!("f({}) is not a subset of the target", f.src.base.label(i))));
            }
            Ok(fx.to_mask())
        })
        .collect::<Result<Vec<Mask>>>()?;
    SpecRelation::from_rows(f.src.base.clone(), f.dst.base.clone(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monadkit::{check_monad_laws, LawConfig};

    fn obj(p: FinPoset) -> Obj {
        Obj::new(Arc::new(p))
    }

    #[test]
    fn powerset_mult_example() {
        // m({{0},{0,1}}) = {0,1}
        let x = obj(FinPoset::antichain(2));
        let a = Elem::set(alloc::vec![Elem::from_mask(0b01), Elem::from_mask(0b11)]);
        assert_eq!(Powerset.mult(&x, &a), Elem::from_mask(0b11));
    }

    #[test]
    fn vietoris_objects() {
        let one = Arc::new(FinPoset::singleton());
        let v1 = vietoris_object(&one);
        // {*} < {} : the Sierpinski space
        assert_eq!(v1.labels(), &["{}", "{*}"]);
        assert!(v1.lt(1, 0));
        assert_eq!(vietoris_object(&Arc::new(FinPoset::empty())).len(), 1);
        let v2 = vietoris_object(&Arc::new(FinPoset::chain(2)));
        assert_eq!(v2.len(), 3);
        assert!(crate::finstruct::poset_iso(&v2, &FinPoset::chain(3)).is_some());
    }

    #[test]
    fn vietoris_of_constant_to_bottom() {
        let c2 = Arc::new(FinPoset::chain(2));
        let f = MonotoneMap::constant(c2.clone(), c2.clone(), 0).unwrap();
        let vf = vietoris_map(&f);
        let ups = up_set_masks(&c2);
        for (i, &a) in ups.iter().enumerate() {
            let expect = if a == 0 { 0 } else { c2.up_of(0) };
            assert_eq!(ups[vf.apply(i)], expect);
        }
    }

    #[test]
    fn filter_mult_examples() {
        let x = FinPoset::antichain(2);
        let a = Elem::from_mask(0b01);
        let unit_of_a = Elem::set(alloc::vec![a.clone()]);
        assert_eq!(filter_mult(&x, &unit_of_a).unwrap(), a);
        let improper = Elem::set(alloc::vec![Elem::empty()]);
        assert_eq!(filter_mult(&x, &improper).unwrap(), Elem::empty());
        assert!(matches!(
            filter_mult(&x, &Elem::atom(0)),
            Err(Error::EncodingError(_))
        ));
    }

    #[test]
    fn filter_mult_matches_literal_on_two_points() {
        let x = Obj::new(Arc::new(FinPoset::antichain(2)));
        let all = level_elements(&Filter, &x.t().t(), usize::MAX).unwrap();
        assert_eq!(all.len(), 16);
        for f in &all {
            assert_eq!(filter_mult(&x.base, f).unwrap(), filter_mult_literal(2, f).unwrap());
        }
    }

    #[test]
    fn instances_pass_on_small_objects() {
        for name in INSTANCE_NAMES {
            let t = instance(name).unwrap();
            let objs: Vec<Obj> = [FinPoset::empty(), FinPoset::singleton(), FinPoset::antichain(2), FinPoset::chain(2)]
                .into_iter()
                .filter(|p| t.admits(p))
                .map(obj)
                .collect();
            let report = check_monad_laws(&t, &objs, &LawConfig::default());
            let bad: Vec<_> = report.iter().filter(|c| !c.passed).collect();
            assert!(bad.is_empty(), "{name}: {bad:?}");
        }
    }
}
