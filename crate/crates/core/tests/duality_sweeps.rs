use std::sync::Arc;

use reldual::catalog::{catalog, posets_up_to, Kind};
use reldual::duality::{coalgebra_translation, j_component, DualityPackage};
use reldual::finstruct::FinPoset;

fn spaces() -> Vec<Arc<FinPoset>> {
    let mut v = catalog(Kind::Sets, 4);
    v.extend(catalog(Kind::Posets, 4).into_iter().filter(|p| !p.is_antichain()));
    v
}

#[test]
fn j_components_are_bijective_on_catalog() {
    for pkg in DualityPackage::all() {
        let start = std::time::Instant::now();
        for x in spaces().iter().filter(|x| pkg.admits(x)) {
            let c = j_component(&pkg, x, 1 << 16).unwrap();
            assert!(c.injective && c.surjective, "{c:?}");
        }
        eprintln!("{}: {:?}", pkg.name(), start.elapsed());
    }
}

#[test]
fn coalgebra_translation_up_to_three() {
    for x in posets_up_to(3) {
        let start = std::time::Instant::now();
        let r = coalgebra_translation(&x);
        eprintln!("{x}: {} coalgebras, {} morphisms, {:?}", r.coalgebras, r.coalgebra_morphisms, start.elapsed());
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.coalgebras, r.operators);
        assert_eq!(r.coalgebra_morphisms, r.operator_morphisms);
    }
}
