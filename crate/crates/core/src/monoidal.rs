//! Products, the tensor of relations, the tensor of down-set lattices
//! representing bimorphisms, and relational properties read off on the
//! lattice side.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::duality::j_spec;
use crate::error::{Error, Result};
use crate::finstruct::{bit, mask_iter, pair_index, poset_product, poset_sum, up_set_masks, FinPoset, Mask, MonotoneMap, SpecRelation};
use crate::instances::{vietoris_map, vietoris_object};
use crate::lattice::{classify_map, downset_lattice, enumerate_maps, lattice_iso, two, DistLattice, LatticeMap, Preservation};

/// `X1 + X2` with the projections `i1^*`, `i2^*` of the product of
/// relations and the injections `i1_*`, `i2_*` of the coproduct.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub sum: Arc<FinPoset>,
    pub i1: MonotoneMap,
    pub i2: MonotoneMap,
    pub p1: SpecRelation,
    pub p2: SpecRelation,
    pub q1: SpecRelation,
    pub q2: SpecRelation,
}

pub fn specrel_product(x1: &Arc<FinPoset>, x2: &Arc<FinPoset>) -> Biproduct {
    let (sum, i1, i2) = poset_sum(x1, x2);
    let p1 = SpecRelation::upper_graph(&i1, true).expect("injections are open");
    let p2 = SpecRelation::upper_graph(&i2, true).expect("injections are open");
    let q1 = SpecRelation::lower_graph(&i1);
    let q2 = SpecRelation::lower_graph(&i2);
    Biproduct {
        sum,
        i1,
        i2,
        p1,
        p2,
        q1,
        q2,
    }
}

/// `z <r,s> x` iff `x` is in the first summand and `z r x`, or in the
/// second and `z s x`.
pub fn pairing(r: &SpecRelation, s: &SpecRelation) -> Result<SpecRelation> {
    if r.source() != s.source() {
        return Err(Error::Mismatch(format!("pairing needs a shared source, got {} and {}", r.source(), s.source())));
    }
    let n1 = r.target().len();
    let (sum, _, _) = poset_sum(r.target(), s.target());
    let rows: Vec<Mask> = (0..r.source().len()).map(|z| r.fiber(z) | (s.fiber(z) << n1)).collect();
    let out = SpecRelation::from_rows(r.source().clone(), sum, rows)?;
    #[cfg(debug_assertions)]
    {
        let iso = vietoris_sum_iso(r.target(), s.target());
        debug_assert_eq!(out, iso.pair_through(r, s), "pairing disagrees with V(X1) x V(X2) = V(X1 + X2)");
    }
    Ok(out)
}

/// `[r, s] : X1 + X2 -> Z`, the copairing of the coproduct.
pub fn copairing(r: &SpecRelation, s: &SpecRelation) -> Result<SpecRelation> {
    if r.target() != s.target() {
        return Err(Error::Mismatch(format!("copairing needs a shared target, got {} and {}", r.target(), s.target())));
    }
    let (sum, _, _) = poset_sum(r.source(), s.source());
    let rows = r.rows().iter().chain(s.rows()).copied().collect();
    SpecRelation::from_rows(sum, r.target().clone(), rows)
}

/// The mediating relations for a candidate product or coproduct: each
/// pair of legs must be reached by exactly one relation, and that relation
/// must be the (co)pairing.
fn unique_mediators(
    cands: &[SpecRelation],
    legs: impl Fn(&SpecRelation) -> Result<(SpecRelation, SpecRelation)>,
    expected: &[(SpecRelation, SpecRelation)],
    mediator: impl Fn(&SpecRelation, &SpecRelation) -> Result<SpecRelation>,
) -> Result<Option<String>> {
    let mut hits: BTreeMap<(Vec<Mask>, Vec<Mask>), Vec<usize>> = BTreeMap::new();
    for (k, t) in cands.iter().enumerate() {
        let (a, b) = legs(t)?;
        hits.entry((a.rows().to_vec(), b.rows().to_vec())).or_default().push(k);
    }
    for (r, s) in expected {
        let found = hits.get(&(r.rows().to_vec(), s.rows().to_vec())).map(Vec::as_slice).unwrap_or(&[]);
        let m = mediator(r, s)?;
        match found {
            [k] if cands[*k] == m => {}
            _ => {
                return Ok(Some(format!(
                    "legs {:?}, {:?}: {} mediators, expected exactly the canonical one",
                    r.label_pairs(),
                    s.label_pairs(),
                    found.len()
                )))
            }
        }
    }
    Ok(None)
}

/// For every `r : Z -> X1` and `s : Z -> X2`, the pairing is the only
/// `t : Z -> X1 + X2` with `t` then `i1^*` equal to `r` and `t` then `i2^*`
/// equal to `s`.
pub fn check_product_universal(z: &Arc<FinPoset>, x1: &Arc<FinPoset>, x2: &Arc<FinPoset>) -> Result<Option<String>> {
    let b = specrel_product(x1, x2);
    let cands = SpecRelation::all(z, &b.sum);
    let (rs, ss) = (SpecRelation::all(z, x1), SpecRelation::all(z, x2));
    let expected: Vec<_> = rs.iter().flat_map(|r| ss.iter().map(move |s| (r.clone(), s.clone()))).collect();
    unique_mediators(&cands, |t| Ok((t.compose(&b.p1)?, t.compose(&b.p2)?)), &expected, pairing)
}

/// For every `r : X1 -> Z` and `s : X2 -> Z`, the copairing is the only
/// `t : X1 + X2 -> Z` with `i1_*` then `t` equal to `r` and `i2_*` then `t`
/// equal to `s`.
pub fn check_coproduct_universal(z: &Arc<FinPoset>, x1: &Arc<FinPoset>, x2: &Arc<FinPoset>) -> Result<Option<String>> {
    let b = specrel_product(x1, x2);
    let cands = SpecRelation::all(&b.sum, z);
    let (rs, ss) = (SpecRelation::all(x1, z), SpecRelation::all(x2, z));
    let expected: Vec<_> = rs.iter().flat_map(|r| ss.iter().map(move |s| (r.clone(), s.clone()))).collect();
    unique_mediators(&cands, |t| Ok((b.q1.compose(t)?, b.q2.compose(t)?)), &expected, copairing)
}

/// `(x, y) (r (x) s) (x', y')` iff `x r x'` and `y s y'`.
pub fn tensor_rel(r: &SpecRelation, s: &SpecRelation) -> SpecRelation {
    let (src, _, _) = poset_product(r.source(), s.source());
    let (dst, _, _) = poset_product(r.target(), s.target());
    let m2 = s.target().len();
    let rows = (0..r.source().len())
        .flat_map(|x| (0..s.source().len()).map(move |y| (x, y)))
        .map(|(x, y)| {
            let mut row = 0;
            for a in mask_iter(r.fiber(x)) {
                for b in mask_iter(s.fiber(y)) {
                    row |= bit(pair_index(a, b, m2));
                }
            }
            row
        })
        .collect();
    let out = SpecRelation::from_rows(src, dst, rows).expect("componentwise relation is weakening-closed");
    #[cfg(debug_assertions)]
    if r.target().len() * s.target().len() <= 9 {
        let adj = VietorisProduct::new(r.target(), s.target());
        let through_pi: Vec<Mask> = (0..r.source().len())
            .flat_map(|x| (0..s.source().len()).map(move |y| (x, y)))
            .map(|(x, y)| adj.pi_masks(r.fiber(x), s.fiber(y)))
            .collect();
        debug_assert_eq!(out.rows(), &through_pi[..], "tensor disagrees with Pi . (r x s)");
    }
    out
}

/// `V(X1 + X2)` and `V X1 x V X2` with `f(C) = (C n X1, C n X2)` and
/// `g(A1, A2) = A1 + A2`.
#[derive(Clone, Debug)]
pub struct SumIso {
    pub f: MonotoneMap,
    pub g: MonotoneMap,
    ups1: Vec<Mask>,
    ups2: Vec<Mask>,
    ups_sum: Vec<Mask>,
    sum: Arc<FinPoset>,
}

pub fn vietoris_sum_iso(x1: &Arc<FinPoset>, x2: &Arc<FinPoset>) -> SumIso {
    let (sum, _, _) = poset_sum(x1, x2);
    let n1 = x1.len();
    let (ups1, ups2, ups_sum) = (up_set_masks(x1), up_set_masks(x2), up_set_masks(&sum));
    let v_sum = vietoris_object(&sum);
    let (v_prod, _, _) = poset_product(&vietoris_object(x1), &vietoris_object(x2));
    let low = bit(n1) - 1;
    let pos = |ups: &[Mask], m: Mask| ups.iter().position(|&u| u == m).expect("restriction of an up-set");
    let f_table = ups_sum
        .iter()
        .map(|&c| pair_index(pos(&ups1, c & low), pos(&ups2, c >> n1), ups2.len()))
        .collect();
    let g_table = ups1
        .iter()
        .flat_map(|&a1| ups2.iter().map(move |&a2| a1 | (a2 << n1)))
        .map(|c| pos(&ups_sum, c))
        .collect();
    SumIso {
        f: MonotoneMap::new(v_sum.clone(), v_prod.clone(), f_table).expect("f is monotone"),
        g: MonotoneMap::new(v_prod, v_sum, g_table).expect("g is monotone"),
        ups1,
        ups2,
        ups_sum,
        sum,
    }
}

impl SumIso {
    /// `f . g` and `g . f` are identities.
    pub fn is_inverse_pair(&self) -> bool {
        let fg = self.f.then(&self.g).expect("composable");
        let gf = self.g.then(&self.f).expect("composable");
        fg == MonotoneMap::identity(self.f.source().clone()) && gf == MonotoneMap::identity(self.g.source().clone())
    }

    /// The relation `Z -> X1 + X2` of `z -> g(r(z), s(z))`.
    pub fn pair_through(&self, r: &SpecRelation, s: &SpecRelation) -> SpecRelation {
        let pos = |ups: &[Mask], m: Mask| ups.iter().position(|&u| u == m).expect("fibers are up-sets");
        let rows = (0..r.source().len())
            .map(|z| {
                let k = pair_index(pos(&self.ups1, r.fiber(z)), pos(&self.ups2, s.fiber(z)), self.ups2.len());
                self.ups_sum[self.g.apply(k)]
            })
            .collect();
        SpecRelation::from_rows(r.source().clone(), self.sum.clone(), rows)
            .expect("fibers of a relation into the sum")
    }
}

/// `Pi : V X1 x V X2 -> V(X1 x X2)` and `can = <V pi1, V pi2>`.
#[derive(Clone, Debug)]
pub struct VietorisProduct {
    pub pi: MonotoneMap,
    pub can: MonotoneMap,
    ups1: Vec<Mask>,
    ups2: Vec<Mask>,
    ups_prod: Vec<Mask>,
}

impl VietorisProduct {
    pub fn new(x1: &Arc<FinPoset>, x2: &Arc<FinPoset>) -> Self {
        let (prod, p1, p2) = poset_product(x1, x2);
        let n2 = x2.len();
        let (ups1, ups2, ups_prod) = (up_set_masks(x1), up_set_masks(x2), up_set_masks(&prod));
        let (v1, v2) = (vietoris_object(x1), vietoris_object(x2));
        let (vv, _, _) = poset_product(&v1, &v2);
        let vp = vietoris_object(&prod);
        let rect = |a: Mask, b: Mask| {
            let mut m = 0;
            for x in mask_iter(a) {
                for y in mask_iter(b) {
                    m |= bit(pair_index(x, y, n2));
                }
            }
            m
        };
        let pi_table = ups1
            .iter()
            .flat_map(|&a| ups2.iter().map(move |&b| (a, b)))
            .map(|(a, b)| ups_prod.iter().position(|&w| w == rect(a, b)).expect("rectangles of up-sets are up-sets"))
            .collect();
        let (vp1, vp2) = (vietoris_map(&p1), vietoris_map(&p2));
        let can_table = (0..vp.len()).map(|w| pair_index(vp1.apply(w), vp2.apply(w), ups2.len())).collect();
        VietorisProduct {
            pi: MonotoneMap::new(vv.clone(), vp.clone(), pi_table).expect("Pi is monotone"),
            can: MonotoneMap::new(vp, vv, can_table).expect("can is monotone"),
            ups1,
            ups2,
            ups_prod,
        }
    }

    /// `Pi(A, B)` for up-sets given as masks.
    pub fn pi_masks(&self, a: Mask, b: Mask) -> Mask {
        let i = self.ups1.iter().position(|&u| u == a).expect("up-set");
        let j = self.ups2.iter().position(|&u| u == b).expect("up-set");
        self.ups_prod[self.pi.apply(pair_index(i, j, self.ups2.len()))]
    }

    /// `(A, B) <= can(Pi(A, B))` for every pair and `Pi(can(W)) <= W` for
    /// every `W`, in the orders of `V X1 x V X2` and `V(X1 x X2)`. Returns
    /// the first failure.
    pub fn check(&self) -> Option<String> {
        let (vv, vp) = (self.pi.source(), self.pi.target());
        for ab in 0..vv.len() {
            let back = self.can.apply(self.pi.apply(ab));
            if !vv.le(ab, back) {
                return Some(format!("{} is not below can(Pi) = {}", vv.label(ab), vv.label(back)));
            }
        }
        for w in 0..vp.len() {
            let back = self.pi.apply(self.can.apply(w));
            if !vp.le(back, w) {
                return Some(format!("Pi(can({})) = {} is not below it", vp.label(w), vp.label(back)));
            }
        }
        None
    }
}

/// Report of [`VietorisProduct::check`] for `X1`, `X2`.
pub fn vietoris_prod_adjunction(x1: &Arc<FinPoset>, x2: &Arc<FinPoset>) -> Option<String> {
    VietorisProduct::new(x1, x2).check()
}

/// A map `L x M -> N` that preserves bottom and binary joins in each
/// variable. The value at `(a, b)` sits at `a * |M| + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimorphism {
    pub left: Arc<DistLattice>,
    pub right: Arc<DistLattice>,
    pub target: Arc<DistLattice>,
    table: Vec<usize>,
}

impl Bimorphism {
    pub fn new(left: Arc<DistLattice>, right: Arc<DistLattice>, target: Arc<DistLattice>, table: Vec<usize>) -> Result<Self> {
        let (n, m) = (left.len(), right.len());
        if table.len() != n * m {
            return Err(Error::TableLength {
                expected: n * m,
                got: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= target.len()) {
            return Err(Error::UnknownElement(format!("index {bad}")));
        }
        let at = |a: usize, b: usize| table[pair_index(a, b, m)];
        for a in 0..n {
            if at(a, right.bottom()) != target.bottom() {
                return Err(Error::NotBimorphism(format!("f({}, bottom) is not bottom", left.label(a))));
            }
            for b in 0..m {
                for b2 in 0..m {
                    if at(a, right.join(b, b2)) != target.join(at(a, b), at(a, b2)) {
                        return Err(Error::NotBimorphism(format!(
                            "f({}, -) does not preserve {} v {}",
                            left.label(a),
                            right.label(b),
                            right.label(b2)
                        )));
                    }
                }
            }
        }
        for b in 0..m {
            if at(left.bottom(), b) != target.bottom() {
                return Err(Error::NotBimorphism(format!("f(bottom, {}) is not bottom", right.label(b))));
            }
            for a in 0..n {
                for a2 in 0..n {
                    if at(left.join(a, a2), b) != target.join(at(a, b), at(a2, b)) {
                        return Err(Error::NotBimorphism(format!(
                            "f(-, {}) does not preserve {} v {}",
                            right.label(b),
                            left.label(a),
                            left.label(a2)
                        )));
                    }
                }
            }
        }
        Ok(Bimorphism {
            left,
            right,
            target,
            table,
        })
    }

    pub fn apply(&self, a: usize, b: usize) -> usize {
        self.table[pair_index(a, b, self.right.len())]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Binary meet of a lattice, as a bimorphism `L x L -> L`.
    pub fn meet(l: &Arc<DistLattice>) -> Self {
        let n = l.len();
        let table = (0..n * n).map(|k| l.meet(k / n, k % n)).collect();
        Bimorphism::new(l.clone(), l.clone(), l.clone(), table).expect("meets distribute over joins")
    }
}

/// Every bimorphism `L x M -> N`. Each `f(a, -)` is a hemimorphism
/// `M -> N`; rows of join-reducible `a` are forced by the rows below.
pub fn enumerate_bimorphisms(l: &Arc<DistLattice>, m: &Arc<DistLattice>, n: &Arc<DistLattice>) -> Vec<Bimorphism> {
    let rows: Vec<Vec<usize>> = enumerate_maps(m, n, Preservation::HEMI).into_iter().map(|h| h.table().to_vec()).collect();
    let order = l.linear_extension();
    let irreducible = l.join_irreducible_elements();
    let mut chosen: Vec<Option<Vec<usize>>> = alloc::vec![None; l.len()];
    let mut out = Vec::new();
    struct Ctx<'a> {
        l: &'a DistLattice,
        n: &'a DistLattice,
        rows: &'a [Vec<usize>],
        order: &'a [usize],
        irreducible: &'a [usize],
    }
    fn go(k: usize, c: &Ctx<'_>, chosen: &mut [Option<Vec<usize>>], out: &mut Vec<Vec<usize>>) {
        if k == c.order.len() {
            out.push(chosen.iter().flat_map(|r| r.as_ref().expect("assigned").iter().copied()).collect());
            return;
        }
        let a = c.order[k];
        let below: Vec<usize> = c.order[..k].iter().copied().filter(|&z| c.l.le(z, a)).collect();
        let candidates: Vec<Vec<usize>> = if a == c.l.bottom() {
            c.rows.iter().filter(|r| r.iter().all(|&v| v == c.n.bottom())).cloned().collect()
        } else if !c.irreducible.contains(&a) {
            let mut forced = alloc::vec![c.n.bottom(); c.rows[0].len()];
            for z in &below {
                let rz = chosen[*z].as_ref().expect("assigned");
                for (f, &v) in forced.iter_mut().zip(rz) {
                    *f = c.n.join(*f, v);
                }
            }
            alloc::vec![forced]
        } else {
            c.rows
                .iter()
                .filter(|r| {
                    below.iter().all(|z| {
                        let rz = chosen[*z].as_ref().expect("assigned");
                        r.iter().zip(rz).all(|(&v, &w)| c.n.le(w, v))
                    })
                })
                .cloned()
                .collect()
        };
        for row in candidates {
            chosen[a] = Some(row);
            go(k + 1, c, chosen, out);
        }
        chosen[a] = None;
    }
    if !rows.is_empty() {
        let ctx = Ctx {
            l,
            n,
            rows: &rows,
            order: &order,
            irreducible: &irreducible,
        };
        go(0, &ctx, &mut chosen, &mut out);
    }
    out.sort();
    out.into_iter()
        .filter_map(|t| Bimorphism::new(l.clone(), m.clone(), n.clone(), t).ok())
        .collect()
}

/// `J X (x) J Y = J(X x Y)` with the universal bimorphism `p(A, B) = A x B`.
#[derive(Clone, Debug)]
pub struct TensorPackage {
    pub left_poset: Arc<FinPoset>,
    pub right_poset: Arc<FinPoset>,
    pub product: Arc<FinPoset>,
    pub tensor: Arc<DistLattice>,
    pub universal: Bimorphism,
}

/// `L` as a down-set lattice: itself when it already is one, otherwise the
/// down-sets of its join-irreducibles with the isomorphism from `L`.
pub fn present(l: &DistLattice) -> (Arc<DistLattice>, Vec<usize>) {
    if l.generators().is_some() {
        return (Arc::new(l.clone()), (0..l.len()).collect());
    }
    let jl = Arc::new(downset_lattice(&Arc::new(l.join_irreducibles())));
    let iso = lattice_iso(l, &jl).expect("a finite distributive lattice is the down-sets of its join-irreducibles");
    (jl, iso)
}

/// The tensor of two down-set lattices. Lattices without a generating
/// poset should go through [`present`] first.
pub fn lattice_tensor(l: &Arc<DistLattice>, m: &Arc<DistLattice>) -> Result<TensorPackage> {
    let gens = |k: &DistLattice| {
        k.generators()
            .map(|g| g.poset.clone())
            .ok_or_else(|| Error::Mismatch(format!("lattice {k} carries no generating poset")))
    };
    let (x, y) = (gens(l)?, gens(m)?);
    let (product, _, _) = poset_product(&x, &y);
    let tensor = Arc::new(downset_lattice(&product));
    let n2 = y.len();
    let mut table = Vec::with_capacity(l.len() * m.len());
    for a in 0..l.len() {
        for b in 0..m.len() {
            let (am, bm) = (l.mask_of(a).expect("generated"), m.mask_of(b).expect("generated"));
            let mut w = 0;
            for i in mask_iter(am) {
                for j in mask_iter(bm) {
                    w |= bit(pair_index(i, j, n2));
                }
            }
            table.push(tensor.element_of(w).expect("rectangles of down-sets are down-sets"));
        }
    }
    let universal = Bimorphism::new(l.clone(), m.clone(), tensor.clone(), table)?;
    Ok(TensorPackage {
        left_poset: x,
        right_poset: y,
        product,
        tensor,
        universal,
    })
}

/// The hemimorphism `g` with `g . p = f`: `g(W)` is the join of all
/// `f(A, B)` with `A x B` inside `W`.
pub fn factor_bimorphism(f: &Bimorphism, t: &TensorPackage) -> Result<LatticeMap> {
    let p = &t.universal;
    if f.left != p.left || f.right != p.right {
        return Err(Error::Mismatch("bimorphism and tensor have different factors".into()));
    }
    let (l, m, n) = (&f.left, &f.right, &f.target);
    let table = (0..t.tensor.len())
        .map(|w| {
            let wm = t.tensor.mask_of(w).expect("down-set lattice");
            n.join_all(
                (0..l.len())
                    .flat_map(|a| (0..m.len()).map(move |b| (a, b)))
                    .filter(|&(a, b)| t.tensor.mask_of(p.apply(a, b)).expect("down-set lattice") & !wm == 0)
                    .map(|(a, b)| f.apply(a, b)),
            )
        })
        .collect();
    let g = classify_map(table, &t.tensor, n)?;
    g.require(Preservation::HEMI)?;
    for a in 0..l.len() {
        for b in 0..m.len() {
            if g.apply(p.apply(a, b)) != f.apply(a, b) {
                return Err(Error::NotBimorphism(format!(
                    "factor misses f({}, {})",
                    l.label(a),
                    m.label(b)
                )));
            }
        }
    }
    Ok(g)
}

/// Every hemimorphism `g` out of the tensor with `g . p = f`.
pub fn all_factorizations(f: &Bimorphism, t: &TensorPackage) -> Vec<LatticeMap> {
    let p = &t.universal;
    enumerate_maps(&t.tensor, &f.target, Preservation::HEMI)
        .into_iter()
        .filter(|g| (0..f.left.len()).all(|a| (0..f.right.len()).all(|b| g.apply(p.apply(a, b)) == f.apply(a, b))))
        .collect()
}

/// The tensor of two lattices built without Birkhoff duality: bi-ideals of
/// `L x M` (down-sets containing `L x 0` and `0 x M`, closed under joins in
/// either coordinate with the other fixed), ordered by inclusion.
#[derive(Clone, Debug)]
pub struct BiIdealTensor {
    pub left: Arc<DistLattice>,
    pub right: Arc<DistLattice>,
    /// Bi-ideals as masks over `pair_index(a, b, |M|)`, in discovery order.
    pub members: Vec<Mask>,
    /// Index of the bi-ideal generated by `(a, b)`, at `pair_index(a, b, |M|)`.
    pub pure: Vec<usize>,
}

impl BiIdealTensor {
    pub fn new(l: &Arc<DistLattice>, m: &Arc<DistLattice>) -> Result<Self> {
        let (nl, nm) = (l.len(), m.len());
        if nl * nm > 64 {
            return Err(Error::TooLarge {
                size: nl * nm,
                cap: 64,
            });
        }
        let at = |a: usize, b: usize| pair_index(a, b, nm);
        let downs: Vec<Mask> = (0..nl * nm)
            .map(|k| {
                let (a, b) = (k / nm, k % nm);
                (0..nl * nm)
                    .filter(|&q| l.le(q / nm, a) && m.le(q % nm, b))
                    .fold(0, |acc, q| acc | bit(q))
            })
            .collect();
        let base = (0..nl).fold(0, |acc, a| acc | bit(at(a, m.bottom())))
            | (0..nm).fold(0, |acc, b| acc | bit(at(l.bottom(), b)));
        let close = |seed: Mask| -> Mask {
            let mut s = seed | base;
            loop {
                let mut next = mask_iter(s).fold(s, |acc, k| acc | downs[k]);
                for k in mask_iter(s) {
                    let (a, b) = (k / nm, k % nm);
                    for k2 in mask_iter(s) {
                        let (a2, b2) = (k2 / nm, k2 % nm);
                        if b == b2 {
                            next |= bit(at(l.join(a, a2), b));
                        }
                        if a == a2 {
                            next |= bit(at(a, m.join(b, b2)));
                        }
                    }
                }
                if next == s {
                    return s;
                }
                s = next;
            }
        };
        let generators: Vec<Mask> = (0..nl * nm).map(|k| close(bit(k))).collect();
        let mut members: Vec<Mask> = Vec::new();
        let mut index: BTreeMap<Mask, usize> = BTreeMap::new();
        let mut push = |x: Mask, members: &mut Vec<Mask>| -> usize {
            *index.entry(x).or_insert_with(|| {
                members.push(x);
                members.len() - 1
            })
        };
        let pure: Vec<usize> = generators.iter().map(|&g| push(g, &mut members)).collect();
        let mut k = 0;
        while k < members.len() {
            let x = members[k];
            for &g in &generators {
                if g & !x != 0 {
                    push(close(x | g), &mut members);
                }
            }
            k += 1;
        }
        Ok(BiIdealTensor {
            left: l.clone(),
            right: m.clone(),
            members,
            pure,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Compare the bi-ideal tensor of two down-set lattices with the down-sets
/// of the product of their generating posets through
/// `psi(B) = union of A x B' over (A, B') in B`. `None` when `psi` is an
/// order isomorphism sending each generated bi-ideal to the rectangle.
pub fn tensor_comparison(l: &Arc<DistLattice>, m: &Arc<DistLattice>) -> Result<Option<String>> {
    let t = lattice_tensor(l, m)?;
    let b = BiIdealTensor::new(l, m)?;
    let (nm, n2) = (m.len(), t.right_poset.len());
    let rect = |a: usize, c: usize| {
        let (am, cm) = (l.mask_of(a).expect("generated"), m.mask_of(c).expect("generated"));
        mask_iter(am).fold(0, |acc, i| mask_iter(cm).fold(acc, |acc, j| acc | bit(pair_index(i, j, n2))))
    };
    let psi: Vec<Mask> = b
        .members
        .iter()
        .map(|&x| mask_iter(x).fold(0, |acc, k| acc | rect(k / nm, k % nm)))
        .collect();
    if b.len() != t.tensor.len() {
        return Ok(Some(format!("{} bi-ideals but {} down-sets of the product", b.len(), t.tensor.len())));
    }
    let mut seen = alloc::vec![false; t.tensor.len()];
    for (i, &w) in psi.iter().enumerate() {
        let Some(e) = t.tensor.element_of(w) else {
            return Ok(Some(format!("psi of bi-ideal {i} is not a down-set")));
        };
        if core::mem::replace(&mut seen[e], true) {
            return Ok(Some(format!("psi is not injective at {}", t.tensor.label(e))));
        }
    }
    for i in 0..b.len() {
        for j in 0..b.len() {
            let below = b.members[i] & !b.members[j] == 0;
            if below != (psi[i] & !psi[j] == 0) {
                return Ok(Some(format!("psi does not reflect the order between bi-ideals {i} and {j}")));
            }
        }
    }
    for a in 0..l.len() {
        for c in 0..nm {
            if psi[b.pure[pair_index(a, c, nm)]] != rect(a, c) {
                return Ok(Some(format!("generator ({}, {}) is not sent to its rectangle", l.label(a), m.label(c))));
            }
        }
    }
    Ok(None)
}

/// `Delta_* : X -> X x X`.
pub fn diag_rel(x: &Arc<FinPoset>) -> SpecRelation {
    let (prod, _, _) = poset_product(x, x);
    let n = x.len();
    let d = MonotoneMap::new(x.clone(), prod, (0..n).map(|i| pair_index(i, i, n)).collect()).expect("diagonal is monotone");
    SpecRelation::lower_graph(&d)
}

/// `!_* : X -> 1`.
pub fn bang_rel(x: &Arc<FinPoset>) -> SpecRelation {
    let bang = MonotoneMap::constant(x.clone(), Arc::new(FinPoset::singleton()), 0).expect("constant maps are monotone");
    SpecRelation::lower_graph(&bang)
}

/// The map `2 -> J X` sending `0` to the bottom and `1` to the top.
pub fn bottom_top_map(jx: &Arc<DistLattice>) -> LatticeMap {
    classify_map(alloc::vec![jx.bottom(), jx.top()], &Arc::new(two()), jx).expect("table in range")
}

/// A relational property computed directly, through a composite of
/// relations, and on the lattice side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub direct: bool,
    pub composite: bool,
    pub algebraic: bool,
}

impl Verdict {
    pub fn value(&self) -> bool {
        self.direct
    }

    pub fn consistent(&self) -> bool {
        self.direct == self.composite && self.direct == self.algebraic
    }
}

/// Every point has a successor; `r` then `!_*` is `!_*`; `J r` keeps the top.
pub fn is_total(r: &SpecRelation) -> Verdict {
    let direct = (0..r.source().len()).all(|x| r.fiber(x) != 0);
    let composite = r.compose(&bang_rel(r.target())).expect("composable") == bang_rel(r.source());
    let jr = j_spec(r);
    let algebraic = jr.apply(jr.source().top()) == jr.target().top();
    Verdict {
        direct,
        composite,
        algebraic,
    }
}

/// Every point has a successor for `r` or for `s`; `<r, s>` then `!_*` is
/// `!_*`; `J r(top) v J s(top) = top`.
pub fn joint_successor(r: &SpecRelation, s: &SpecRelation) -> Result<Verdict> {
    if r.source() != s.source() || r.target() != s.target() {
        return Err(Error::Mismatch("joint successors need parallel relations".into()));
    }
    let direct = (0..r.source().len()).all(|x| r.fiber(x) | s.fiber(x) != 0);
    let paired = pairing(r, s)?;
    let composite = paired.compose(&bang_rel(paired.target()))? == bang_rel(r.source());
    let (jr, js) = (j_spec(r), j_spec(s));
    let a = jr.target();
    let top = jr.source().top();
    let algebraic = a.join(jr.apply(top), js.apply(top)) == a.top();
    Ok(Verdict {
        direct,
        composite,
        algebraic,
    })
}

/// The partial-map conditions, each evaluated on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartialMapVerdict {
    /// Every fiber is empty or has a smallest element.
    pub smallest: bool,
    /// Every fiber is empty or down-directed.
    pub down_directed: bool,
    /// `Delta_*` then `r (x) r` equals `r` then `Delta_*`.
    pub diagonal: bool,
    /// `J r` preserves binary meets.
    pub meets: bool,
}

impl PartialMapVerdict {
    pub fn value(&self) -> bool {
        self.smallest
    }

    pub fn consistent(&self) -> bool {
        self.smallest == self.down_directed && self.smallest == self.diagonal && self.smallest == self.meets
    }
}

pub fn is_partial_map(r: &SpecRelation) -> PartialMapVerdict {
    let y = r.target();
    let fibers: Vec<Mask> = (0..r.source().len()).map(|x| r.fiber(x)).collect();
    let smallest = fibers
        .iter()
        .all(|&f| f == 0 || mask_iter(f).any(|a| mask_iter(f).all(|b| y.le(a, b))));
    let down_directed = fibers.iter().all(|&f| {
        mask_iter(f).all(|a| mask_iter(f).all(|b| mask_iter(f).any(|c| y.le(c, a) && y.le(c, b))))
    });
    let left = diag_rel(r.source()).compose(&tensor_rel(r, r)).expect("composable");
    let right = r.compose(&diag_rel(y)).expect("composable");
    let jr = j_spec(r);
    let (b, a) = (jr.source(), jr.target());
    let meets = (0..b.len()).all(|u| (0..b.len()).all(|v| jr.apply(b.meet(u, v)) == a.meet(jr.apply(u), jr.apply(v))));
    PartialMapVerdict {
        smallest,
        down_directed,
        diagonal: left == right,
        meets,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: FinPoset) -> Arc<FinPoset> {
        Arc::new(x)
    }

    #[test]
    fn product_of_points_is_two_points() {
        let one = p(FinPoset::singleton());
        let b = specrel_product(&one, &one);
        assert!(b.sum.is_antichain() && b.sum.len() == 2);
        assert_eq!(SpecRelation::all(&one, &b.sum).len(), 4);
        let (t, _, _) = poset_product(&one, &one);
        assert_eq!(SpecRelation::all(&one, &t).len(), 2);
    }

    #[test]
    fn universal_properties_small() {
        let ps = [p(FinPoset::empty()), p(FinPoset::singleton()), p(FinPoset::chain(2))];
        for z in &ps {
            for x1 in &ps {
                for x2 in &ps {
                    assert_eq!(check_product_universal(z, x1, x2).unwrap(), None);
                    assert_eq!(check_coproduct_universal(z, x1, x2).unwrap(), None);
                }
            }
        }
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let c = p(FinPoset::chain(2));
        let a = p(FinPoset::antichain(2));
        let t = tensor_rel(&SpecRelation::identity(c.clone()), &SpecRelation::identity(a.clone()));
        let (prod, _, _) = poset_product(&c, &a);
        assert_eq!(t, SpecRelation::identity(prod));
    }

    #[test]
    fn sum_iso_and_pi_adjunction() {
        let one = p(FinPoset::singleton());
        let iso = vietoris_sum_iso(&one, &one);
        assert_eq!(iso.f.source().len(), 4);
        assert!(iso.is_inverse_pair());
        let c = p(FinPoset::chain(2));
        let vp = VietorisProduct::new(&c, &c);
        assert_eq!(vp.check(), None);
        // W = {(a,b),(b,a),(b,b)} in the 2x2 grid
        let w: Mask = bit(1) | bit(2) | bit(3);
        let wi = vp.ups_prod.iter().position(|&u| u == w).unwrap();
        assert_eq!(vp.ups_prod[vp.pi.apply(vp.can.apply(wi))], 0b1111);
    }

    #[test]
    fn tensor_of_three_chains() {
        let l = Arc::new(downset_lattice(&p(FinPoset::chain(2))));
        let t = lattice_tensor(&l, &l).unwrap();
        assert_eq!(t.tensor.len(), 6);
        let g = factor_bimorphism(&t.universal, &t).unwrap();
        assert_eq!(g, LatticeMap::identity(&t.tensor));
    }

    #[test]
    fn bi_ideals_of_small_lattices() {
        let two = Arc::new(downset_lattice(&p(FinPoset::singleton())));
        assert_eq!(BiIdealTensor::new(&two, &two).unwrap().len(), 2);
        let c3 = Arc::new(downset_lattice(&p(FinPoset::chain(2))));
        let a4 = Arc::new(downset_lattice(&p(FinPoset::antichain(2))));
        assert_eq!(BiIdealTensor::new(&c3, &a4).unwrap().len(), 9);
        assert_eq!(tensor_comparison(&c3, &a4).unwrap(), None);
    }

    #[test]
    fn diagonal_and_bang() {
        let c = p(FinPoset::chain(2));
        let jc = Arc::new(downset_lattice(&c));
        let t = lattice_tensor(&jc, &jc).unwrap();
        let g = factor_bimorphism(&Bimorphism::meet(&jc), &t).unwrap();
        assert_eq!(j_spec(&diag_rel(&c)), g);
        assert_eq!(j_spec(&bang_rel(&c)).table(), bottom_top_map(&jc).table());
        let one = p(FinPoset::singleton());
        assert_eq!(diag_rel(&one).rows(), SpecRelation::identity(one.clone()).rows());
    }

    #[test]
    fn partial_map_on_antichain_fiber() {
        let a = p(FinPoset::antichain(2));
        let one = p(FinPoset::singleton());
        let r = SpecRelation::full(one, a);
        let v = is_partial_map(&r);
        assert!(v.consistent());
        assert!(!v.value());
    }

    #[test]
    fn bimorphisms_match_tensor_hemimorphisms() {
        let l = Arc::new(downset_lattice(&p(FinPoset::chain(2))));
        let m = Arc::new(downset_lattice(&p(FinPoset::antichain(2))));
        let n = Arc::new(two());
        let t = lattice_tensor(&l, &m).unwrap();
        let bis = enumerate_bimorphisms(&l, &m, &n);
        assert_eq!(bis.len(), enumerate_maps(&t.tensor, &n, Preservation::HEMI).len());
        for f in &bis {
            assert_eq!(all_factorizations(f, &t), [factor_bimorphism(f, &t).unwrap()]);
        }
    }
}
