use criterion::{black_box, criterion_group, criterion_main, Criterion};

use pillowcase_core::catalog::tangles;
use pillowcase_core::khovanov::reduced_khovanov;
use pillowcase_core::pairing::{cohomology, pair};
use pillowcase_core::pillowcase::{verify_ainfty, verify_module_relations};
use pillowcase_core::pipeline::twisted_complex;
use pillowcase_core::tangle::{close, TangleDiagram};
use pillowcase_core::twisted::{eliminate_all, verify_twisted};

fn named(name: &str) -> TangleDiagram {
    tangles().into_iter().find(|t| t.name == name).expect("catalogued").diagram().expect("builds")
}

fn tables(c: &mut Criterion) {
    c.bench_function("verify_ainfty", |b| b.iter(verify_ainfty));
    c.bench_function("verify_module_relations", |b| b.iter(|| (verify_module_relations(0), verify_module_relations(1))));
}

fn pipeline(c: &mut Criterion) {
    for name in ["trefoil_right", "figure_eight", "torus_2_8"] {
        let d = named(name);
        let k = if name == "figure_eight" { 1 } else { 0 };
        c.bench_function(&format!("build/{name}"), |b| b.iter(|| twisted_complex(black_box(&d), false)));
        let tc = twisted_complex(&d, false);
        c.bench_function(&format!("verify_twisted/{name}"), |b| b.iter(|| verify_twisted(black_box(&tc))));
        c.bench_function(&format!("pair_cohomology/{name}"), |b| {
            b.iter(|| cohomology(&pair(black_box(&tc), k).unwrap()).unwrap())
        });
        c.bench_function(&format!("eliminate_all/{name}"), |b| b.iter(|| eliminate_all(black_box(&tc)).unwrap()));
        let link = close(&d, k);
        c.bench_function(&format!("oracle/{name}"), |b| b.iter(|| reduced_khovanov(black_box(&link)).unwrap()));
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = tables, pipeline
}
criterion_main!(benches);
