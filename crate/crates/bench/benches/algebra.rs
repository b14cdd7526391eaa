use cartan_super::cohomology::{derivation_space, h2_trivial, Mode};
use cartan_super::weights::weight_decomposition;
use cartan_super::{build_algebra, CartanParams, Family};
use criterion::{criterion_group, criterion_main, Criterion};

fn construction(c: &mut Criterion) {
    for family in [Family::HO, Family::KO] {
        let params = CartanParams::new(family, 2, &[1, 1], 5).unwrap();
        c.bench_function(&format!("build {family}(2;(1,1)) p=5"), |b| {
            b.iter(|| build_algebra(&params).unwrap())
        });
    }
}

fn weights(c: &mut Criterion) {
    let x = build_algebra(&CartanParams::new(Family::KO, 2, &[1, 1], 5).unwrap()).unwrap();
    c.bench_function("weight decomposition KO", |b| {
        b.iter(|| weight_decomposition(&x).unwrap())
    });
}

fn cohomology(c: &mut Criterion) {
    let mut g = c.benchmark_group("cohomology");
    g.sample_size(10);
    let ho = build_algebra(&CartanParams::new(Family::HO, 2, &[1, 1], 5).unwrap()).unwrap();
    g.bench_function("H2 HO blockwise", |b| {
        b.iter(|| h2_trivial(&ho, Mode::Blockwise).unwrap())
    });
    g.bench_function("H2 HO full", |b| {
        b.iter(|| h2_trivial(&ho, Mode::Full).unwrap())
    });
    g.bench_function("Der HO", |b| {
        b.iter(|| derivation_space(&ho, false).unwrap())
    });
    g.finish();
}

criterion_group!(benches, construction, weights, cohomology);
criterion_main!(benches);
