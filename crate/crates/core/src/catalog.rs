//! Deterministic catalogs of small finite structures: sets, posets up to
//! isomorphism, distributive lattices up to isomorphism, and seeded random
//! posets.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::Rng;

use crate::finstruct::{down_set_masks, letter_labels, FinPoset};
use crate::lattice::DistLattice;

/// Which family of objects to list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Finite sets, as antichains.
    Sets,
    /// Finite posets up to isomorphism.
    Posets,
}

/// An isomorphism invariant code together with the element order realizing it.
///
/// Elements are first grouped by the sizes of their principal down- and
/// up-sets; the code is the least order table, read row by row, over all
/// orderings that respect the grouping.
pub fn canonical_form(p: &FinPoset) -> (Vec<bool>, Vec<usize>) {
    let n = p.len();
    let sig = |x: usize| {
        let down = (0..n).filter(|&y| p.le(y, x)).count();
        let up = (0..n).filter(|&y| p.le(x, y)).count();
        (down, up)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (sig(x), x));
    let sigs: Vec<_> = order.iter().map(|&x| sig(x)).collect();
    let mut best: Option<(Vec<bool>, Vec<usize>)> = None;
    let mut perm = Vec::with_capacity(n);
    let mut used = alloc::vec![false; n];
    fn go(
        k: usize,
        p: &FinPoset,
        order: &[usize],
        sigs: &[(usize, usize)],
        perm: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut Option<(Vec<bool>, Vec<usize>)>,
    ) {
        let n = order.len();
        if k == n {
            let code: Vec<bool> = (0..n * n).map(|i| p.le(perm[i / n], perm[i % n])).collect();
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, perm.clone()));
            }
            return;
        }
        for (i, &x) in order.iter().enumerate() {
            if used[i] || sigs[i] != sigs[k] {
                continue;
            }
            used[i] = true;
            perm.push(x);
            go(k + 1, p, order, sigs, perm, used, best);
            perm.pop();
            used[i] = false;
        }
    }
    go(0, p, &order, &sigs, &mut perm, &mut used, &mut best);
    best.expect("at least one ordering")
}

/// `p` with elements reordered canonically and relabelled `a`, `b`, ...
pub fn canonical(p: &FinPoset) -> FinPoset {
    let (_, perm) = canonical_form(p);
    FinPoset::from_fn_unchecked(letter_labels(p.len()), |a, b| p.le(perm[a], perm[b]))
}

/// All posets with exactly `n` elements up to isomorphism, canonically
/// labelled and sorted by canonical code.
///
/// Every poset with `n + 1` elements arises from one with `n` by adding a
/// new maximal element above some down-set, so the levels are built in turn.
pub fn posets_of_size(n: usize) -> Vec<FinPoset> {
    let mut level: Vec<FinPoset> = alloc::vec![FinPoset::empty()];
    for size in 0..n {
        let mut next: BTreeMap<Vec<bool>, FinPoset> = BTreeMap::new();
        for p in &level {
            for d in down_set_masks(p) {
                let q = FinPoset::from_fn_unchecked(letter_labels(size + 1), |a, b| {
                    if b == size {
                        a == size || d & (1 << a) != 0
                    } else {
                        a != size && p.le(a, b)
                    }
                });
                let (code, _) = canonical_form(&q);
                next.entry(code).or_insert_with(|| canonical(&q));
            }
        }
        level = next.into_values().collect();
    }
    level
}

/// Posets of every size up to `max`, smallest first.
pub fn posets_up_to(max: usize) -> Vec<Arc<FinPoset>> {
    (0..=max).flat_map(|n| posets_of_size(n).into_iter().map(Arc::new)).collect()
}

/// The sets `0, 1, ..., max` as antichains.
pub fn sets_up_to(max: usize) -> Vec<Arc<FinPoset>> {
    (0..=max).map(|n| Arc::new(FinPoset::antichain(n))).collect()
}

pub fn catalog(kind: Kind, max: usize) -> Vec<Arc<FinPoset>> {
    match kind {
        Kind::Sets => sets_up_to(max),
        Kind::Posets => posets_up_to(max),
    }
}

/// Every distributive lattice with at most `max` elements, up to
/// isomorphism: each one is a bounded poset around a catalog poset with two
/// fewer elements.
pub fn lattices_up_to(max: usize) -> Vec<DistLattice> {
    let mut out = Vec::new();
    if max >= 1 {
        let one = FinPoset::from_fn_unchecked(letter_labels(1), |_, _| true);
        out.push(DistLattice::from_order(one).expect("one-element lattice"));
    }
    for n in 2..=max {
        for mid in posets_of_size(n - 2) {
            let m = mid.len();
            // bottom at 0, middle at 1..=m, top at m + 1
            let bounded = FinPoset::from_fn_unchecked(letter_labels(n), |a, b| {
                a == 0 || b == m + 1 || (a != m + 1 && b != 0 && mid.le(a - 1, b - 1))
            });
            if let Ok(l) = DistLattice::from_order(bounded) {
                out.push(l);
            }
        }
    }
    out
}

/// A random poset on `n` elements: each pair `i < j` is related with
/// probability `density`, then closed under transitivity.
pub fn random_poset(n: usize, density: f64, rng: &mut impl Rng) -> FinPoset {
    let mut le = alloc::vec![false; n * n];
    for i in 0..n {
        le[i * n + i] = true;
        for j in i + 1..n {
            le[i * n + j] = rng.gen_bool(density);
        }
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
    FinPoset::from_table_unchecked(letter_labels(n), le)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finstruct::poset_iso;
    use rand::SeedableRng;

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| posets_of_size(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn catalog_entries_are_pairwise_non_isomorphic() {
        let ps = posets_of_size(4);
        for (i, p) in ps.iter().enumerate() {
            for q in &ps[i + 1..] {
                assert!(poset_iso(p, q).is_none());
            }
        }
    }

    #[test]
    fn canonical_form_is_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = random_poset(5, 0.4, &mut rng);
            let q = canonical(&p);
            assert_eq!(canonical_form(&p).0, canonical_form(&q).0);
            assert!(poset_iso(&p, &q).is_some());
        }
    }

    #[test]
    fn small_lattice_counts() {
        // distributive lattices with n elements: 1, 1, 1, 2, 3, 5, 8
        let ls = lattices_up_to(7);
        let mut counts = [0usize; 8];
        for l in &ls {
            counts[l.len()] += 1;
        }
        assert_eq!(&counts[1..], &[1, 1, 1, 2, 3, 5, 8]);
    }

    #[test]
    fn sets_catalog() {
        let s = catalog(Kind::Sets, 0);
        assert_eq!(s.len(), 1);
        assert!(s[0].is_empty());
        assert!(catalog(Kind::Sets, 3)[3].is_antichain());
    }
}
