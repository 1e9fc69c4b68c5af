//! Brute-force recounts of the catalogs and hom-sets, written without the
//! library's enumeration routines.

use std::collections::BTreeMap;
use std::sync::Arc;

use reldual::catalog::{lattices_up_to, posets_of_size, posets_up_to};
use reldual::finstruct::{down_set_masks, poset_iso, up_set_masks, FinPoset, SpecRelation};
use reldual::lattice::{downset_lattice, enumerate_maps, lattice_iso, DistLattice, Preservation};
use reldual::monoidal::enumerate_bimorphisms;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Every order on `0..n`, from all sets of off-diagonal pairs.
fn labelled_posets(n: usize) -> Vec<FinPoset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
    let mut out = Vec::new();
    for s in 0u64..1 << pairs.len() {
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if s >> k & 1 == 1 {
                le[a * n + b] = true;
            }
        }
        let antisym = (0..n).all(|a| (0..n).all(|b| a == b || !(le[a * n + b] && le[b * n + a])));
        let trans = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(le[a * n + b] && le[b * n + c]) || le[a * n + c])));
        if antisym && trans {
            out.push(FinPoset::from_fn(labels(n), |a, b| le[a * n + b]).unwrap());
        }
    }
    out
}

fn dedupe(ps: Vec<FinPoset>) -> Vec<FinPoset> {
    let mut reps: Vec<FinPoset> = Vec::new();
    for p in ps {
        if !reps.iter().any(|q| poset_iso(&p, q).is_some()) {
            reps.push(p);
        }
    }
    reps
}

#[test]
fn poset_catalog_matches_labelled_enumeration() {
    let labelled_counts = [1, 1, 3, 19, 219];
    for (n, &count) in labelled_counts.iter().enumerate() {
        let all = labelled_posets(n);
        assert_eq!(all.len(), count);
        let reps = dedupe(all);
        let cat = posets_of_size(n);
        assert_eq!(reps.len(), cat.len(), "n = {n}");
        for r in &reps {
            assert_eq!(cat.iter().filter(|c| poset_iso(r, c).is_some()).count(), 1);
        }
    }
}

#[test]
fn lattice_catalog_matches_down_set_lattices() {
    // down-set lattices of all posets with at most 8 down-sets
    let mut by_size: BTreeMap<usize, Vec<DistLattice>> = BTreeMap::new();
    for p in posets_up_to(7) {
        let l = downset_lattice(&p);
        if l.len() > 8 {
            continue;
        }
        let bucket = by_size.entry(l.len()).or_default();
        if !bucket.iter().any(|m| lattice_iso(&l, m).is_some()) {
            bucket.push(l);
        }
    }
    let cat = lattices_up_to(8);
    for n in 1..=8 {
        let here: Vec<_> = cat.iter().filter(|l| l.len() == n).collect();
        let want = by_size.get(&n).map_or(0, Vec::len);
        assert_eq!(here.len(), want, "size {n}");
        for l in here {
            assert!(by_size[&n].iter().any(|m| lattice_iso(l, m).is_some()));
        }
    }
    assert_eq!((1..=8).map(|n| by_size[&n].len()).collect::<Vec<_>>(), [1, 1, 1, 2, 3, 5, 8, 15]);
}

#[test]
fn up_and_down_sets_by_subset_scan() {
    for p in posets_up_to(4) {
        let n = p.len();
        let closed = |m: u64, up: bool| {
            (0..n).all(|a| {
                m >> a & 1 == 0 || (0..n).all(|b| (if up { !p.le(a, b) } else { !p.le(b, a) }) || m >> b & 1 == 1)
            })
        };
        let ups: Vec<u64> = (0u64..1 << n).filter(|&m| closed(m, true)).collect();
        let downs: Vec<u64> = (0u64..1 << n).filter(|&m| closed(m, false)).collect();
        let mut lu = up_set_masks(&p);
        let mut ld = down_set_masks(&p);
        lu.sort();
        ld.sort();
        assert_eq!(lu, ups);
        assert_eq!(ld, downs);
    }
}

/// All weakening-closed pair sets `X -> Y`, as row masks.
fn spec_relations(x: &FinPoset, y: &FinPoset) -> Vec<Vec<u64>> {
    let (n, m) = (x.len(), y.len());
    let mut out = Vec::new();
    for s in 0u64..1 << (n * m) {
        let rel = |a: usize, b: usize| s >> (a * m + b) & 1 == 1;
        let closed = (0..n).all(|a| {
            (0..m).all(|b| {
                !rel(a, b) || (0..n).all(|a2| (0..m).all(|b2| !(x.le(a2, a) && y.le(b, b2)) || rel(a2, b2)))
            })
        });
        if closed {
            out.push((0..n).map(|a| (0..m).filter(|&b| rel(a, b)).fold(0, |r, b| r | 1 << b)).collect());
        }
    }
    out.sort();
    out
}

/// Join-preserving maps `l -> m` by backtracking over a linear extension.
fn hemimorphism_count(l: &DistLattice, m: &DistLattice) -> usize {
    let order = l.linear_extension();
    let mut val = vec![usize::MAX; l.len()];
    fn go(k: usize, order: &[usize], l: &DistLattice, m: &DistLattice, val: &mut Vec<usize>) -> usize {
        if k == order.len() {
            return 1;
        }
        let a = order[k];
        let mut total = 0;
        for v in 0..m.len() {
            if a == l.bottom() && v != m.bottom() {
                continue;
            }
            val[a] = v;
            let done = &order[..=k];
            let ok = done.iter().all(|&b| {
                done.iter().all(|&c| {
                    let j = l.join(b, c);
                    val[j] == usize::MAX || val[j] == m.join(val[b], val[c])
                })
            });
            if ok {
                total += go(k + 1, order, l, m, val);
            }
        }
        val[a] = usize::MAX;
        total
    }
    go(0, &order, l, m, &mut val)
}

#[test]
fn spec_relations_match_pair_set_scan() {
    let ps = posets_up_to(3);
    for x in &ps {
        for y in &ps {
            let mut lib: Vec<Vec<u64>> = SpecRelation::all(x, y).iter().map(|r| r.rows().to_vec()).collect();
            lib.sort();
            assert_eq!(lib, spec_relations(x, y), "{x} -> {y}");
        }
    }
    let c2 = Arc::new(FinPoset::chain(2));
    assert_eq!(spec_relations(&c2, &c2).len(), 6);
}

#[test]
fn hemimorphism_counts_match_backtracking() {
    let ps = posets_up_to(3);
    let ls: Vec<Arc<DistLattice>> = ps.iter().map(|p| Arc::new(downset_lattice(p))).collect();
    for (i, x) in ps.iter().enumerate() {
        for (j, y) in ps.iter().enumerate() {
            let brute = hemimorphism_count(&ls[j], &ls[i]);
            assert_eq!(enumerate_maps(&ls[j], &ls[i], Preservation::HEMI).len(), brute);
            assert_eq!(SpecRelation::all(x, y).len(), brute, "{x} -> {y}");
        }
    }
}

/// Bimorphism tables by filling cells in order and checking every
/// constraint whose cells are all filled.
fn bimorphism_tables(l: &DistLattice, m: &DistLattice, n: &DistLattice) -> Vec<Vec<usize>> {
    let (a, b) = (l.len(), m.len());
    let mut t = vec![usize::MAX; a * b];
    let mut out = Vec::new();
    fn ok(t: &[usize], l: &DistLattice, m: &DistLattice, n: &DistLattice) -> bool {
        let b = m.len();
        let at = |x: usize, y: usize| t[x * b + y];
        for x in 0..l.len() {
            for y in 0..b {
                let v = at(x, y);
                if v == usize::MAX {
                    continue;
                }
                if (x == l.bottom() || y == m.bottom()) && v != n.bottom() {
                    return false;
                }
                for y2 in 0..b {
                    let (w, j) = (at(x, y2), at(x, m.join(y, y2)));
                    if w != usize::MAX && j != usize::MAX && j != n.join(v, w) {
                        return false;
                    }
                }
                for x2 in 0..l.len() {
                    let (w, j) = (at(x2, y), at(l.join(x, x2), y));
                    if w != usize::MAX && j != usize::MAX && j != n.join(v, w) {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn go(k: usize, t: &mut Vec<usize>, l: &DistLattice, m: &DistLattice, n: &DistLattice, out: &mut Vec<Vec<usize>>) {
        if k == t.len() {
            out.push(t.clone());
            return;
        }
        for v in 0..n.len() {
            t[k] = v;
            if ok(t, l, m, n) {
                go(k + 1, t, l, m, n, out);
            }
        }
        t[k] = usize::MAX;
    }
    go(0, &mut t, l, m, n, &mut out);
    out.sort();
    out
}

#[test]
fn bimorphisms_match_cellwise_search() {
    let ps = posets_up_to(2);
    let ls: Vec<Arc<DistLattice>> = ps.iter().map(|p| Arc::new(downset_lattice(p))).collect();
    for l in &ls {
        for m in &ls {
            for n in &ls {
                let lib: Vec<Vec<usize>> = enumerate_bimorphisms(l, m, n).iter().map(|f| f.table().to_vec()).collect();
                assert_eq!(lib, bimorphism_tables(l, m, n));
            }
        }
    }
}
