use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reldual::catalog::{canonical_form, random_poset};
use reldual::duality::{from_hemimorphism, j_spec, j_spec_via_extension};
use reldual::finstruct::{poset_iso, FinPoset, SpecRelation};
use reldual::lattice::{downset_lattice, Preservation};
use reldual::monoidal::{is_partial_map, is_total, joint_successor, tensor_rel, vietoris_sum_iso, VietorisProduct};

fn poset(max: usize) -> impl Strategy<Value = Arc<FinPoset>> {
    (0..=max, 0.0f64..1.0, any::<u64>()).prop_map(|(n, d, seed)| {
        Arc::new(random_poset(n, d, &mut ChaCha8Rng::seed_from_u64(seed)))
    })
}

/// A weakening-closed relation built from arbitrary seeds: the fiber of `x`
/// is the up-closure of the seeds at or above `x`.
fn relation(x: Arc<FinPoset>, y: Arc<FinPoset>, seeds: Vec<u64>) -> SpecRelation {
    let full = if y.is_empty() { 0 } else { (1u64 << y.len()) - 1 };
    let rows = (0..x.len())
        .map(|a| {
            let m = (0..x.len()).filter(|&z| x.le(a, z)).fold(0, |m, z| m | (seeds[z] & full));
            y.up_closure(m)
        })
        .collect();
    SpecRelation::from_rows(x, y, rows).unwrap()
}

fn rel_between(x: Arc<FinPoset>, y: Arc<FinPoset>) -> impl Strategy<Value = SpecRelation> {
    let n = x.len();
    prop::collection::vec(any::<u64>(), n).prop_map(move |s| relation(x.clone(), y.clone(), s))
}

fn endo(max: usize) -> impl Strategy<Value = SpecRelation> {
    poset(max).prop_flat_map(|x| rel_between(x.clone(), x))
}

fn pair(max: usize) -> impl Strategy<Value = (SpecRelation, SpecRelation)> {
    (poset(max), poset(max), poset(max)).prop_flat_map(|(x, y, z)| (rel_between(x, y.clone()), rel_between(y, z)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonical_form_is_an_invariant(p in poset(6), seed in any::<u64>()) {
        let n = p.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(&mut perm[..], &mut rng);
        let q = FinPoset::from_fn(p.labels().to_vec(), |a, b| p.le(perm[a], perm[b])).unwrap();
        prop_assert_eq!(canonical_form(&p).0, canonical_form(&q).0);
        prop_assert!(poset_iso(&p, &q).is_some());
    }

    #[test]
    fn down_set_lattices_are_distributive(p in poset(5)) {
        let l = downset_lattice(&p);
        for a in 0..l.len() {
            for b in 0..l.len() {
                for c in 0..l.len() {
                    prop_assert_eq!(l.meet(a, l.join(b, c)), l.join(l.meet(a, b), l.meet(a, c)));
                }
            }
        }
        prop_assert!(poset_iso(&l.join_irreducibles(), &p).is_some());
    }

    #[test]
    fn j_spec_is_a_hemimorphism_and_invertible(r in endo(4)) {
        let h = j_spec(&r);
        prop_assert!(h.class().contains(Preservation::HEMI));
        prop_assert_eq!(from_hemimorphism(&h).unwrap(), r.clone());
        if r.source().len() <= 3 {
            prop_assert_eq!(j_spec_via_extension(&r).unwrap(), h);
        }
    }

    #[test]
    fn j_spec_reverses_composition((r, s) in pair(3)) {
        let rs = r.compose(&s).unwrap();
        prop_assert_eq!(j_spec(&rs), j_spec(&s).then(&j_spec(&r)).unwrap());
    }

    #[test]
    fn composition_is_associative((r, s) in pair(3), seeds in prop::collection::vec(any::<u64>(), 3)) {
        let t = relation(s.target().clone(), r.source().clone(), seeds);
        let left = r.compose(&s).unwrap().compose(&t).unwrap();
        let right = r.compose(&s.compose(&t).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn tensor_is_functorial((r, s) in pair(2), (r2, s2) in pair(2)) {
        let lhs = tensor_rel(&r, &r2).compose(&tensor_rel(&s, &s2)).unwrap();
        let rhs = tensor_rel(&r.compose(&s).unwrap(), &r2.compose(&s2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vietoris_structure_holds(x1 in poset(3), x2 in poset(3)) {
        prop_assert!(vietoris_sum_iso(&x1, &x2).is_inverse_pair());
        prop_assert_eq!(VietorisProduct::new(&x1, &x2).check(), None);
    }

    #[test]
    fn dictionary_routes_agree(r in endo(4), seeds in prop::collection::vec(any::<u64>(), 4)) {
        prop_assert!(is_total(&r).consistent());
        prop_assert!(is_partial_map(&r).consistent());
        let s = relation(r.source().clone(), r.target().clone(), seeds);
        prop_assert!(joint_successor(&r, &s).unwrap().consistent());
    }
}
