//! Exhaustive sweeps over the catalogs, reported line by line.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use reldual::catalog::{lattices_up_to, posets_up_to, sets_up_to};
use reldual::duality::{
    coalgebra_translation, essentially_surjective, from_hemimorphism, j_component, j_spec, j_spec_in,
    j_spec_via_comparison, DualityPackage,
};
use reldual::finstruct::{poset_product, FinPoset, Mask, SpecRelation};
use reldual::instances::{instance, INSTANCE_NAMES};
use reldual::lattice::{downset_lattice, enumerate_maps, DistLattice, LatticeMap, Preservation};
use reldual::monadkit::{check_adjunction, check_monad_laws, check_monad_morphism, LawConfig, Obj};
use reldual::monoidal::{
    all_factorizations, bang_rel, bottom_top_map, check_coproduct_universal, check_product_universal, diag_rel,
    enumerate_bimorphisms, factor_bimorphism, is_partial_map, is_total, joint_successor, lattice_tensor,
    specrel_product, tensor_comparison, vietoris_sum_iso, Bimorphism, VietorisProduct,
};

use crate::error::InputError;
use crate::report::{timed, Line};
use crate::workspace::Config;

pub const SUITES: [&str; 5] = ["monad-laws", "duality", "monoidal", "dictionary", "all"];

/// Each acceptance criterion, its suite, and a short title.
pub const CRITERIA: [(u8, &str, &str); 8] = [
    (1, "monad-laws", "monad laws for powerset, filter, vietoris, vhat"),
    (2, "duality", "hom-set bijection SpecRel(X,Y) = Hemi(JY,JX)"),
    (3, "duality", "j is bijective for every package"),
    (4, "monoidal", "Vietoris sum isomorphism and product adjunction"),
    (5, "monoidal", "products and coproducts of relations"),
    (6, "monoidal", "J of a product space is the tensor of lattices; bimorphisms factor uniquely"),
    (7, "dictionary", "relational properties vs lattice properties"),
    (8, "duality", "coalgebras vs lattices with operators"),
];

fn law_config(cfg: &Config) -> LawConfig {
    LawConfig {
        budget: 1 << 14,
        samples: 2048,
        maps_per_pair: 32,
        seed: cfg.seed,
    }
}

/// Sets up to `cap_sets` and the remaining posets up to `cap_posets`.
pub fn spaces(cfg: &Config) -> Vec<Arc<FinPoset>> {
    let mut v = sets_up_to(cfg.cap_sets);
    v.extend(
        posets_up_to(cfg.cap_posets)
            .into_iter()
            .filter(|p| !(p.is_antichain() && p.len() <= cfg.cap_sets)),
    );
    v
}

fn dl(p: &Arc<FinPoset>) -> Arc<DistLattice> {
    Arc::new(downset_lattice(p))
}

pub fn monad_laws(cfg: &Config) -> Vec<Line> {
    let lc = law_config(cfg);
    let objects = spaces(cfg);
    INSTANCE_NAMES
        .par_iter()
        .map(|name| {
            let t = instance(name).expect("registered instance");
            let objs: Vec<Obj> = objects.iter().filter(|p| t.admits(p)).cloned().map(Obj::new).collect();
            let start = std::time::Instant::now();
            let report = check_monad_laws(&t, &objs, &lc);
            let ms = start.elapsed().as_millis() as u64;
            report
                .into_iter()
                .map(|c| {
                    let how = if c.exhaustive { "exhaustive" } else { "sampled" };
                    let item = format!("{name}/{}/{}/{} {how}", c.law, c.object, c.checked);
                    let mut l = Line::new("monad-laws", item, c.witness);
                    l.millis = Some(ms);
                    l
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect()
}

/// Relations `X -> Y`, their duals, and rows to position.
type HomSet = (Vec<SpecRelation>, Vec<LatticeMap>, HashMap<Vec<Mask>, usize>);

struct HomSets {
    posets: Vec<Arc<FinPoset>>,
    lattices: Vec<Arc<DistLattice>>,
    rels: HashMap<(usize, usize), HomSet>,
}

fn hom_sets(cap: usize) -> HomSets {
    let posets = posets_up_to(cap);
    let lattices: Vec<_> = posets.iter().map(dl).collect();
    let n = posets.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let rels = pairs
        .par_iter()
        .map(|&(i, j)| {
            let rs = SpecRelation::all(&posets[i], &posets[j]);
            let js: Vec<LatticeMap> = rs.iter().map(|r| j_spec_in(r, &lattices[i], &lattices[j])).collect();
            let index = rs.iter().enumerate().map(|(k, r)| (r.rows().to_vec(), k)).collect();
            ((i, j), (rs, js, index))
        })
        .collect();
    HomSets { posets, lattices, rels }
}

pub fn homset_bijection(cfg: &Config) -> Vec<Line> {
    let h = hom_sets(cfg.cap_pairs);
    let n = h.posets.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mut out: Vec<Line> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&h.posets[i], &h.posets[j]);
            let (rs, js, _) = &h.rels[&(i, j)];
            let hemis: BTreeSet<Vec<usize>> = enumerate_maps(&h.lattices[j], &h.lattices[i], Preservation::HEMI)
                .into_iter()
                .map(|m| m.table().to_vec())
                .collect();
            let item = format!("homset/{x} -> {y}/{} relations, {} hemimorphisms", rs.len(), hemis.len());
            timed("duality", item, || {
                if rs.len() != hemis.len() {
                    return Some("counts differ".into());
                }
                let mut seen = BTreeSet::new();
                for (r, m) in rs.iter().zip(js) {
                    if !hemis.contains(m.table()) {
                        return Some(format!("J of {:?} is not a hemimorphism", r.label_pairs()));
                    }
                    if !seen.insert(m.table().to_vec()) {
                        return Some(format!("J is not injective at {:?}", r.label_pairs()));
                    }
                    match from_hemimorphism(m) {
                        Ok(back) if back == *r => {}
                        _ => return Some(format!("J of {:?} does not invert", r.label_pairs())),
                    }
                    if x.len() <= 2 && y.len() <= 2 {
                        match j_spec_via_comparison(r) {
                            Ok(c) if c.table() == m.table() => {}
                            _ => return Some(format!("comparison route differs at {:?}", r.label_pairs())),
                        }
                    }
                }
                None
            })
        })
        .collect();
    out.extend(h.posets.iter().enumerate().map(|(i, x)| {
        timed("duality", format!("identity/{x}"), || {
            let m = j_spec_in(&SpecRelation::identity(x.clone()), &h.lattices[i], &h.lattices[i]);
            (m != LatticeMap::identity(&h.lattices[i])).then(|| "J(id) is not the identity".to_string())
        })
    }));
    let middles: Vec<usize> = (0..n).collect();
    out.par_extend(middles.par_iter().map(|&j| {
        timed("duality", format!("composition/through {}", h.posets[j]), || {
            for i in 0..n {
                for k in 0..n {
                    let (rs, jr, _) = &h.rels[&(i, j)];
                    let (ss, js, _) = &h.rels[&(j, k)];
                    let (_, jc, index) = &h.rels[&(i, k)];
                    for (r, a) in rs.iter().zip(jr) {
                        for (s, b) in ss.iter().zip(js) {
                            let c = r.compose(s).expect("composable");
                            let Some(&pos) = index.get(c.rows()) else {
                                return Some(format!("composite {:?} is not weakening-closed", c.label_pairs()));
                            };
                            let expected = b.table().iter().map(|&v| a.apply(v));
                            if !jc[pos].table().iter().copied().eq(expected) {
                                return Some(format!(
                                    "J({:?} ; {:?}) is not J s then J r",
                                    r.label_pairs(),
                                    s.label_pairs()
                                ));
                            }
                        }
                    }
                }
            }
            None
        })
    }));
    let c2 = Arc::new(FinPoset::chain(2));
    out.push(timed("duality", "homset/count 2-chain -> 2-chain is 6", || {
        let k = SpecRelation::all(&c2, &c2).len();
        (k != 6).then(|| format!("found {k}"))
    }));
    out
}

pub fn j_bijective(cfg: &Config) -> Vec<Line> {
    let objects = spaces(cfg);
    let pkgs = DualityPackage::all();
    let work: Vec<(usize, Arc<FinPoset>)> = pkgs
        .iter()
        .enumerate()
        .flat_map(|(k, p)| objects.iter().filter(|x| p.admits(x)).map(move |x| (k, x.clone())))
        .collect();
    work.par_iter()
        .map(|(k, x)| {
            let pkg = &pkgs[*k];
            timed("duality", format!("j/{}/{x}", pkg.name()), || match j_component(pkg, x, 1 << 16) {
                Ok(c) if c.injective && c.surjective => None,
                Ok(c) => Some(format!(
                    "{} -> {}: injective {}, surjective {}: {}",
                    c.source_size,
                    c.target_size,
                    c.injective,
                    c.surjective,
                    c.witness.unwrap_or_default()
                )),
                Err(e) => Some(e.to_string()),
            })
        })
        .collect()
}

/// Monad-morphism equations for each `j` and the triangle identities of the
/// ambient adjunctions, on spaces with at most two points.
pub fn j_morphisms(cfg: &Config) -> Vec<Line> {
    let lc = law_config(cfg);
    let small: Vec<Arc<FinPoset>> = posets_up_to(2);
    DualityPackage::all()
        .par_iter()
        .map(|pkg| {
            let xs: Vec<Arc<FinPoset>> = small.iter().filter(|x| pkg.admits(x)).cloned().collect();
            let objs: Vec<Obj> = xs.iter().cloned().map(Obj::new).collect();
            let mut lines: Vec<Line> = check_monad_morphism(&pkg.j(), &objs, &lc)
                .into_iter()
                .map(|c| Line::new("duality", format!("j-morphism/{}/{}/{}", pkg.name(), c.law, c.object), c.witness))
                .collect();
            let ls: Vec<Arc<DistLattice>> = xs.iter().map(dl).collect();
            lines.extend(
                check_adjunction(&pkg.ambient(), &xs, &ls)
                    .into_iter()
                    .map(|c| Line::new("duality", format!("ambient/{}/{}/{}", pkg.name(), c.law, c.object), c.witness)),
            );
            lines
        })
        .flatten()
        .collect()
}

/// Every distributive lattice with at most eight elements (Boolean ones
/// for the set packages) is `J X` for some catalog space.
pub fn surjectivity(_cfg: &Config) -> Vec<Line> {
    let lattices = lattices_up_to(8);
    let spaces = posets_up_to(7);
    DualityPackage::all()
        .par_iter()
        .map(|pkg| {
            essentially_surjective(pkg, &lattices, &spaces)
                .into_iter()
                .map(|(l, hit)| {
                    let witness = hit.is_none().then(|| "no space found".to_string());
                    Line::new("duality", format!("surjective/{}/{l}", pkg.name()), witness)
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect()
}

pub fn coalgebras(cfg: &Config) -> Vec<Line> {
    posets_up_to(cfg.cap_pairs)
        .par_iter()
        .map(|x| {
            timed("duality", format!("coalgebra/{x}"), || {
                let r = coalgebra_translation(x);
                if !r.passed() {
                    return r.witness;
                }
                (r.coalgebras != r.operators || r.coalgebra_morphisms != r.operator_morphisms).then(|| {
                    format!(
                        "{} coalgebras vs {} operators, {} vs {} morphisms",
                        r.coalgebras, r.operators, r.coalgebra_morphisms, r.operator_morphisms
                    )
                })
            })
        })
        .collect()
}

fn pairs_of(ps: &[Arc<FinPoset>]) -> Vec<(Arc<FinPoset>, Arc<FinPoset>)> {
    ps.iter().flat_map(|a| ps.iter().map(move |b| (a.clone(), b.clone()))).collect()
}

pub fn vietoris_structure(cfg: &Config) -> Vec<Line> {
    pairs_of(&posets_up_to(cfg.cap_pairs))
        .par_iter()
        .flat_map_iter(|(x1, x2)| {
            [
                timed("monoidal", format!("vietoris-sum/{x1} + {x2}"), || {
                    (!vietoris_sum_iso(x1, x2).is_inverse_pair()).then(|| "f and g are not inverse".to_string())
                }),
                timed("monoidal", format!("vietoris-product/{x1} x {x2}"), || VietorisProduct::new(x1, x2).check()),
            ]
        })
        .collect()
}

pub fn products(cfg: &Config) -> Vec<Line> {
    let one = Arc::new(FinPoset::singleton());
    let mut out = vec![
        timed("monoidal", "product/1 x 1 is the 2-antichain", || {
            let b = specrel_product(&one, &one);
            (!(b.sum.is_antichain() && b.sum.len() == 2)).then(|| format!("got {}", b.sum))
        }),
        timed("monoidal", "product/4 relations 1 -> 1 x 1, 2 relations 1 -> 1 (x) 1", || {
            let sum = specrel_product(&one, &one).sum;
            let (tensor, _, _) = poset_product(&one, &one);
            let (a, b) = (SpecRelation::all(&one, &sum).len(), SpecRelation::all(&one, &tensor).len());
            (a != 4 || b != 2).then(|| format!("{a} and {b}"))
        }),
    ];
    let ps = posets_up_to(cfg.cap_tensor);
    let triples: Vec<_> = ps
        .iter()
        .flat_map(|z| pairs_of(&ps).into_iter().map(move |(a, b)| (z.clone(), a, b)))
        .collect();
    out.par_extend(triples.par_iter().flat_map_iter(|(z, x1, x2)| {
        [
            timed("monoidal", format!("product-universal/{z} -> {x1} + {x2}"), || {
                check_product_universal(z, x1, x2).unwrap_or_else(|e| Some(e.to_string()))
            }),
            timed("monoidal", format!("coproduct-universal/{x1} + {x2} -> {z}"), || {
                check_coproduct_universal(z, x1, x2).unwrap_or_else(|e| Some(e.to_string()))
            }),
        ]
    }));
    out
}

pub fn tensor(cfg: &Config) -> Vec<Line> {
    let mut out: Vec<Line> = pairs_of(&posets_up_to(cfg.cap_pairs))
        .par_iter()
        .map(|(x, y)| {
            timed("monoidal", format!("tensor-iso/{x} (x) {y}"), || {
                tensor_comparison(&dl(x), &dl(y)).unwrap_or_else(|e| Some(e.to_string()))
            })
        })
        .collect();
    let ps = posets_up_to(cfg.cap_tensor);
    let triples: Vec<_> = ps
        .iter()
        .flat_map(|z| pairs_of(&ps).into_iter().map(move |(a, b)| (a, b, z.clone())))
        .collect();
    out.par_extend(triples.par_iter().map(|(x, y, z)| {
        let (jx, jy, jz) = (dl(x), dl(y), dl(z));
        let bis = enumerate_bimorphisms(&jx, &jy, &jz);
        timed("monoidal", format!("factor/{x} (x) {y} -> {z}/{} bimorphisms", bis.len()), || {
            let t = match lattice_tensor(&jx, &jy) {
                Ok(t) => t,
                Err(e) => return Some(e.to_string()),
            };
            let hemis = enumerate_maps(&t.tensor, &jz, Preservation::HEMI).len();
            if hemis != bis.len() {
                return Some(format!("{} bimorphisms but {hemis} hemimorphisms out of the tensor", bis.len()));
            }
            for f in &bis {
                let g = match factor_bimorphism(f, &t) {
                    Ok(g) => g,
                    Err(e) => return Some(e.to_string()),
                };
                let all = all_factorizations(f, &t);
                if all != [g] {
                    return Some(format!("{} factorizations of {:?}", all.len(), f.table()));
                }
            }
            None
        })
    }));
    out
}

pub fn dictionary(cfg: &Config) -> Vec<Line> {
    let mut out: Vec<Line> = pairs_of(&posets_up_to(cfg.cap_pairs))
        .par_iter()
        .flat_map_iter(|(x, y)| {
            let rs = SpecRelation::all(x, y);
            let total = rs.iter().filter(|r| is_total(r).value()).count();
            let partial = rs.iter().filter(|r| is_partial_map(r).value()).count();
            [
                timed("dictionary", format!("total/{x} -> {y}/{total} of {}", rs.len()), || {
                    rs.iter()
                        .find(|r| !is_total(r).consistent())
                        .map(|r| format!("{:?}: {:?}", r.label_pairs(), is_total(r)))
                }),
                timed("dictionary", format!("partial-map/{x} -> {y}/{partial} of {}", rs.len()), || {
                    rs.iter()
                        .find(|r| !is_partial_map(r).consistent())
                        .map(|r| format!("{:?}: {:?}", r.label_pairs(), is_partial_map(r)))
                }),
            ]
        })
        .collect();
    out.par_extend(pairs_of(&posets_up_to(cfg.cap_tensor)).par_iter().map(|(x, y)| {
        let rs = SpecRelation::all(x, y);
        timed("dictionary", format!("joint-successor/{x} -> {y}/{} pairs", rs.len() * rs.len()), || {
            for r in &rs {
                for s in &rs {
                    match joint_successor(r, s) {
                        Ok(v) if v.consistent() => {}
                        Ok(v) => return Some(format!("{:?}, {:?}: {v:?}", r.label_pairs(), s.label_pairs())),
                        Err(e) => return Some(e.to_string()),
                    }
                }
            }
            None
        })
    }));
    out.par_extend(posets_up_to(cfg.cap_pairs).par_iter().flat_map_iter(|x| {
        let jx = dl(x);
        [
            timed("dictionary", format!("diagonal/{x}"), || {
                let t = match lattice_tensor(&jx, &jx) {
                    Ok(t) => t,
                    Err(e) => return Some(e.to_string()),
                };
                let meet = Bimorphism::meet(&jx);
                let jd = j_spec(&diag_rel(x));
                match factor_bimorphism(&meet, &t) {
                    Ok(g) if g == jd => {}
                    Ok(_) => return Some("J(diagonal) is not the factor of the meet".into()),
                    Err(e) => return Some(e.to_string()),
                }
                (0..jx.len())
                    .flat_map(|a| (0..jx.len()).map(move |b| (a, b)))
                    .find(|&(a, b)| jd.apply(t.universal.apply(a, b)) != jx.meet(a, b))
                    .map(|(a, b)| format!("J(diagonal) . p differs from the meet at ({}, {})", jx.label(a), jx.label(b)))
            }),
            timed("dictionary", format!("bang/{x}"), || {
                let jb = j_spec(&bang_rel(x));
                (jb.table() != bottom_top_map(&jx).table()).then(|| format!("J(!) = {:?}", jb.table()))
            }),
        ]
    }));
    out
}

/// All lines for one criterion.
pub fn criterion(n: u8, cfg: &Config) -> Vec<Line> {
    match n {
        1 => monad_laws(cfg),
        2 => homset_bijection(cfg),
        3 => [j_bijective(cfg), j_morphisms(cfg)].concat(),
        4 => vietoris_structure(cfg),
        5 => products(cfg),
        6 => tensor(cfg),
        7 => dictionary(cfg),
        8 => coalgebras(cfg),
        _ => Vec::new(),
    }
}

fn run_inner(name: &str, cfg: &Config) -> Result<Vec<Line>, InputError> {
    Ok(match name {
        "monad-laws" => monad_laws(cfg),
        "duality" => [homset_bijection(cfg), j_bijective(cfg), j_morphisms(cfg), surjectivity(cfg), coalgebras(cfg)].concat(),
        "monoidal" => [vietoris_structure(cfg), products(cfg), tensor(cfg)].concat(),
        "dictionary" => dictionary(cfg),
        "all" => {
            let mut v = Vec::new();
            for s in &SUITES[..4] {
                v.extend(run_inner(s, cfg)?);
            }
            v
        }
        other => return Err(InputError::UnknownSuite(other.to_string())),
    })
}

/// Run a suite on a pool of `cfg.jobs` workers. Line order depends only on
/// the suite and the caps.
pub fn run_suite(name: &str, cfg: &Config) -> Result<Vec<Line>, InputError> {
    if !SUITES.contains(&name) {
        return Err(InputError::UnknownSuite(name.to_string()));
    }
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        b = b.num_threads(j);
    }
    match b.build() {
        Ok(pool) => pool.install(|| run_inner(name, cfg)),
        Err(_) => run_inner(name, cfg),
    }
}
