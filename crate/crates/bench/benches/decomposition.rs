use criterion::{black_box, criterion_group, criterion_main, Criterion};

use doldkan_core::dkengine::{closed_form_binary, decompose, exact_unique_factorization};
use doldkan_core::orders::{TotalOrder, Variant};
use doldkan_core::seeding::rng_from_seed;
use doldkan_core::sgroup::{ChainComplexData, ExpInstance, FiniteGroup, GammaInstance, SGroup};

fn bench_decompose_exponential(c: &mut Criterion) {
    let inst = ExpInstance::new(3, FiniteGroup::symmetric_s3()).unwrap();
    let n = 3;
    let order = TotalOrder::binary(n, Variant::Simplicial);
    let mut rng = rng_from_seed(1);
    let elements: Vec<_> = (0..16).map(|_| inst.sample(n, &mut rng)).collect();
    c.bench_function("decompose_exponential_s3_level_3", |b| {
        b.iter(|| {
            for g in &elements {
                let dec =
                    decompose(&inst, n, black_box(g), &order, Variant::Simplicial, false).unwrap();
                black_box(dec);
            }
        })
    });
    c.bench_function("closed_form_binary_exponential_level_3", |b| {
        b.iter(|| {
            for g in &elements {
                for k in 0..(1usize << n) {
                    black_box(closed_form_binary(&inst, n, black_box(g), k).unwrap());
                }
            }
        })
    });
}

fn bench_exact_factorization(c: &mut Criterion) {
    let chain = ChainComplexData::new(
        vec![vec![2], vec![4], vec![2], vec![3]],
        vec![vec![vec![1]], vec![vec![2]], vec![vec![0]]],
    )
    .unwrap();
    let inst = GammaInstance::new(chain).unwrap();
    let order = TotalOrder::binary(3, Variant::Simplicial);
    c.bench_function("exact_unique_factorization_gamma_level_3", |b| {
        b.iter(|| {
            let w = exact_unique_factorization(&inst, 3, &order, Variant::Simplicial).unwrap();
            assert!(w.is_none());
        })
    });
}

criterion_group!(benches, bench_decompose_exponential, bench_exact_factorization);
criterion_main!(benches);
