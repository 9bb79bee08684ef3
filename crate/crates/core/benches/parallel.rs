use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use koszul_core::certificates::certify_map;
use koszul_core::koszul::truncated_homology_dim;
use koszul_core::sampling::{random_chain_map, trial_seed};
use koszul_core::{Char, ChainMap, ComplexDescriptor, Execution, Grading, RankOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn maps(n: usize, count: u64) -> Vec<ChainMap> {
    let desc = ComplexDescriptor::new(n, 1, Char::Zero).unwrap();
    (0..count)
        .map(|i| random_chain_map(desc, Grading::Full, &mut ChaCha8Rng::seed_from_u64(trial_seed(11, i))))
        .collect()
}

fn modular_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("modular_rank");
    for n in [5, 6] {
        let g = &maps(n, 1)[0];
        for (name, exec) in MODES {
            let opts = RankOptions { exec, trials: 8, ..RankOptions::default() };
            group.bench_with_input(BenchmarkId::new(name, n), &opts, |b, opts| b.iter(|| g.rank_with(opts).unwrap()));
        }
    }
    group.finish();
}

fn certify_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify_sweep");
    group.sample_size(10);
    let batch = maps(5, 8);
    for (name, exec) in MODES {
        let opts = RankOptions { exec, ..RankOptions::default() };
        group.bench_function(name, |b| {
            b.iter(|| {
                koszul_core::par::map_indexed(exec, batch.len(), |i| certify_map(&batch[i], &opts).unwrap().len())
            })
        });
    }
    group.finish();
}

fn homology(c: &mut Criterion) {
    let mut group = c.benchmark_group("homology");
    group.sample_size(10);
    let desc = ComplexDescriptor::new(5, 1, Char::Zero).unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| truncated_homology_dim(desc, desc.default_max_degree(), exec)));
    }
    group.finish();
}

criterion_group!(benches, modular_rank, certify_sweep, homology);
criterion_main!(benches);
