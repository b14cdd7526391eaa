use cartan_super::linalg::dense_rank;
use cartan_super::{Fp, PrimeField, SparseMatrix};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random(n: usize, density: f64, seed: u64) -> Vec<Vec<Fp>> {
    let f = PrimeField::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(density) {
                        f.elem(rng.gen_range(1..5))
                    } else {
                        Fp::ZERO
                    }
                })
                .collect()
        })
        .collect()
}

fn rank(c: &mut Criterion) {
    let f = PrimeField::new(5).unwrap();
    let mut g = c.benchmark_group("rank");
    for n in [100, 400] {
        let dense = random(n, 0.02, n as u64);
        let m = SparseMatrix::from_dense(n, &dense).unwrap();
        g.bench_with_input(BenchmarkId::new("sparse", n), &m, |b, m| {
            b.iter(|| m.rank_sparse(&f))
        });
        g.bench_with_input(BenchmarkId::new("dense", n), &dense, |b, d| {
            b.iter(|| dense_rank(&f, d))
        });
    }
    g.finish();
}

fn kernel(c: &mut Criterion) {
    let f = PrimeField::new(5).unwrap();
    let m = SparseMatrix::from_dense(
        300,
        &random(200, 0.03, 1)
            .into_iter()
            .map(|mut r| {
                r.resize(300, Fp::ZERO);
                r
            })
            .collect::<Vec<_>>(),
    )
    .unwrap();
    c.bench_function("kernel 200x300", |b| b.iter(|| m.kernel_basis(&f)));
}

criterion_group!(benches, rank, kernel);
criterion_main!(benches);
