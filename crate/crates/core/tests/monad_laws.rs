use std::sync::Arc;

use reldual::catalog::{catalog, Kind};
use reldual::instances::{instance, INSTANCE_NAMES};
use reldual::monadkit::{check_monad_laws, LawConfig, Obj};

#[test]
fn instances_pass_on_catalog() {
    let cfg = LawConfig::default();
    for name in INSTANCE_NAMES {
        let t = instance(name).unwrap();
        let mut objs: Vec<Obj> = Vec::new();
        for p in catalog(Kind::Sets, 4).into_iter().chain(catalog(Kind::Posets, 4)) {
            if t.admits(&p) {
                objs.push(Obj::new(Arc::clone(&p)));
            }
        }
        let start = std::time::Instant::now();
        let report = check_monad_laws(&t, &objs, &cfg);
        let bad: Vec<_> = report.iter().filter(|c| !c.passed).collect();
        eprintln!("{name}: {} checks over {} objects in {:?}", report.len(), objs.len(), start.elapsed());
        assert!(bad.is_empty(), "{name}: {:?}", &bad[..bad.len().min(3)]);
    }
}
