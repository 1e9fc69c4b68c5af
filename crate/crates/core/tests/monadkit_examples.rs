use std::sync::Arc;

use rand::RngCore;
use reldual::catalog::sets_up_to;
use reldual::duality::DualityPackage;
use reldual::finstruct::{FinPoset, SpecRelation};
use reldual::instances::{instance, kleisli_to_relation, relation_to_kleisli, Powerset, INSTANCE_NAMES};
use reldual::monadkit::{
    check_adjunction, check_em_algebra, check_monad_laws, first_difference, kleisli_compose, kleisli_identity,
    kleisli_left_adjoint, kleisli_right_adjoint, level_elements, level_le, mult_morph, EmAlgebra, Elem,
    FiniteMonad, KleisliAdjunction, KleisliMorphism, LawConfig, Monad, Morph, Obj,
};

fn obj(p: FinPoset) -> Obj {
    Obj::new(Arc::new(p))
}

/// Powerset with intersection in place of union.
struct Broken;

impl FiniteMonad for Broken {
    fn name(&self) -> &str {
        "broken"
    }
    fn admits(&self, base: &FinPoset) -> bool {
        Powerset.admits(base)
    }
    fn t_le(&self, below: &Obj, a: &Elem, b: &Elem) -> bool {
        Powerset.t_le(below, a, b)
    }
    fn t_contains(&self, below: &Obj, a: &Elem) -> bool {
        Powerset.t_contains(below, a)
    }
    fn t_elements(&self, below: &Obj, below_elems: &[Elem], limit: usize) -> Option<Vec<Elem>> {
        Powerset.t_elements(below, below_elems, limit)
    }
    fn t_sample(&self, below: &Obj, rng: &mut dyn RngCore, limit: usize) -> Option<Elem> {
        Powerset.t_sample(below, rng, limit)
    }
    fn unit(&self, x: &Obj, a: &Elem) -> Elem {
        Powerset.unit(x, a)
    }
    fn mult(&self, _: &Obj, a: &Elem) -> Elem {
        let mut it = a.members().iter();
        match it.next() {
            None => Elem::empty(),
            Some(first) => Elem::set(
                first
                    .members()
                    .iter()
                    .filter(|m| it.clone().all(|s| s.has(m)))
                    .cloned()
                    .collect(),
            ),
        }
    }
    fn map(&self, f: &Morph, a: &Elem) -> Elem {
        Powerset.map(f, a)
    }
}

#[test]
fn powerset_multiplication_example() {
    let t: Monad = Arc::new(Powerset);
    let x = obj(FinPoset::antichain(2));
    let a = Elem::set(vec![Elem::set(vec![Elem::atom(0)]), Elem::set(vec![Elem::atom(0), Elem::atom(1)])]);
    assert_eq!(mult_morph(&t, &x).apply(&a), Elem::from_mask(0b11));
}

#[test]
fn intersection_multiplication_is_caught() {
    let t: Monad = Arc::new(Broken);
    let objs: Vec<Obj> = sets_up_to(2).into_iter().map(Obj::new).collect();
    let report = check_monad_laws(&t, &objs, &LawConfig::default());
    let failed: Vec<_> = report.iter().filter(|c| !c.passed).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c.witness.is_some()));
    assert!(failed.iter().any(|c| c.law.contains("unit") || c.law.contains("assoc")), "{failed:?}");
}

#[test]
fn kleisli_adjunction_triangles() {
    let t: Monad = Arc::new(Powerset);
    let objs: Vec<Obj> = sets_up_to(3).into_iter().map(Obj::new).collect();
    let adj = KleisliAdjunction::new(&t, 1 << 12);
    assert!(check_adjunction(&adj, &objs, &objs).iter().all(|c| c.passed));

    let broken = KleisliAdjunction::new(&t, 1 << 12).with_counit(|y| Morph::new(y.t(), y.t(), |_| Elem::empty()));
    let report = check_adjunction(&broken, &objs[1..], &objs[1..]);
    let bad: Vec<_> = report.iter().filter(|c| !c.passed).collect();
    assert!(!bad.is_empty() && bad.iter().all(|c| c.witness.is_some()));
}

#[test]
fn em_algebras_for_powerset() {
    let t: Monad = Arc::new(Powerset);
    let cfg = LawConfig::default();
    let x = obj(FinPoset::antichain(2));

    let free = EmAlgebra {
        carrier: x.t(),
        structure: mult_morph(&t, &x),
    };
    assert!(check_em_algebra(&t, &free, &cfg).iter().all(|c| c.passed));

    // {0, 1} with 0 below 1: alpha is the largest member, and 0 on the empty set
    let max = EmAlgebra {
        carrier: x.clone(),
        structure: Morph::new(x.t(), x.clone(), |a| {
            Elem::atom(a.members().iter().map(Elem::index).max().unwrap_or(0))
        }),
    };
    assert!(check_em_algebra(&t, &max, &cfg).iter().all(|c| c.passed));

    let constant = EmAlgebra {
        carrier: x.clone(),
        structure: Morph::new(x.t(), x.clone(), |_| Elem::atom(0)),
    };
    let report = check_em_algebra(&t, &constant, &cfg);
    let unit = report.iter().find(|c| c.law == "em_unit").unwrap();
    assert!(!unit.passed && unit.witness.is_some());
}

/// Every monotone `x -> T y`.
fn kleisli_arrows(t: &Monad, x: &Obj, y: &Obj) -> Vec<KleisliMorphism> {
    let ty = y.t();
    let targets = level_elements(&**t, &ty, 1 << 12).unwrap();
    let n = x.base.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let monotone =
            (0..n).all(|a| (0..n).all(|b| !x.base.le(a, b) || level_le(&**t, &ty, &targets[idx[a]], &targets[idx[b]])));
        if monotone {
            let table: Vec<Elem> = idx.iter().map(|&i| targets[i].clone()).collect();
            let arrow = Morph::new(x.clone(), ty.clone(), move |a| table[a.index()].clone());
            out.push(KleisliMorphism::new(x.clone(), y.clone(), arrow).unwrap());
        }
        let mut k = 0;
        while k < n && idx[k] + 1 == targets.len() {
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        idx[k] += 1;
    }
    out
}

fn same(f: &KleisliMorphism, g: &KleisliMorphism) -> bool {
    let elems: Vec<Elem> = (0..f.src.base.len()).map(Elem::atom).collect();
    first_difference(&f.arrow, &g.arrow, &elems).is_none()
}

#[test]
fn kleisli_category_laws_at_size_two() {
    let small = [FinPoset::empty(), FinPoset::singleton(), FinPoset::antichain(2), FinPoset::chain(2)];
    for name in INSTANCE_NAMES {
        let t = instance(name).unwrap();
        let objs: Vec<Obj> = small.iter().filter(|p| t.admits(p)).cloned().map(obj).collect();
        for x in &objs {
            for y in &objs {
                for f in kleisli_arrows(&t, x, y) {
                    assert!(same(&kleisli_compose(&t, &kleisli_identity(&t, x), &f).unwrap(), &f));
                    assert!(same(&kleisli_compose(&t, &f, &kleisli_identity(&t, y)).unwrap(), &f));
                }
            }
        }
        let pick = |p: &FinPoset| objs.iter().find(|o| *o.base == *p).cloned();
        let Some(x) = pick(&small[2]).or_else(|| pick(&small[3])) else { continue };
        let fs = kleisli_arrows(&t, &x, &x);
        for f in &fs {
            for g in &fs {
                let fg = kleisli_compose(&t, f, g).unwrap();
                for h in &fs {
                    let left = kleisli_compose(&t, &fg, h).unwrap();
                    let right = kleisli_compose(&t, f, &kleisli_compose(&t, g, h).unwrap()).unwrap();
                    assert!(same(&left, &right), "{name}");
                }
            }
        }
    }
}

#[test]
fn powerset_kleisli_composition_is_relational_composition() {
    let t: Monad = Arc::new(Powerset);
    let sets = sets_up_to(3);
    for x in &sets {
        for y in &sets {
            let rs = SpecRelation::all(x, y);
            for z in &sets {
                let ss = SpecRelation::all(y, z);
                for r in &rs {
                    let kr = relation_to_kleisli(r);
                    for s in &ss {
                        let k = kleisli_compose(&t, &kr, &relation_to_kleisli(s)).unwrap();
                        assert_eq!(kleisli_to_relation(&k).unwrap(), r.compose(s).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn powerset_left_and_right_adjoints() {
    let t: Monad = Arc::new(Powerset);
    let x = obj(FinPoset::antichain(2));
    let swap = Morph::new(x.clone(), x.clone(), |a| Elem::atom(1 - a.index()));
    let graph = kleisli_left_adjoint(&t, &swap);
    assert_eq!(kleisli_to_relation(&graph).unwrap().rows(), &[0b10, 0b01]);

    let g = kleisli_right_adjoint(&t, &kleisli_identity(&t, &x));
    for a in level_elements(&*t, &x.t(), 64).unwrap() {
        assert_eq!(g.apply(&a), a);
    }
    // direct image under the relation {0 -> {0, 1}, 1 -> {}}
    let r = SpecRelation::from_rows(x.base.clone(), x.base.clone(), vec![0b11, 0]).unwrap();
    let image = kleisli_right_adjoint(&t, &relation_to_kleisli(&r));
    assert_eq!(image.apply(&Elem::from_mask(0b01)), Elem::from_mask(0b11));
    assert_eq!(image.apply(&Elem::from_mask(0b10)), Elem::empty());
}

#[test]
fn powerset_j_tests_for_meeting_sets() {
    let pkg = DualityPackage::by_name("rel_cabool").unwrap();
    let j = pkg.j();
    for x in sets_up_to(3) {
        let o = Obj::new(x.clone());
        let n = x.len();
        for a in 0u64..1 << n {
            let got: Vec<u64> = j.component(&o, &Elem::from_mask(a)).members().iter().map(Elem::to_mask).collect();
            let want: Vec<u64> = (0u64..1 << n).filter(|u| u & a != 0).collect();
            let mut got = got;
            got.sort();
            assert_eq!(got, want, "A = {a:b}");
        }
    }
}
