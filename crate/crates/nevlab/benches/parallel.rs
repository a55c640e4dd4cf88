use criterion::{criterion_group, criterion_main, Criterion};
use expoly_nevlab::{analyze, ExecMode, ExpPolyFunction, RGrid, ZeroOptions};

fn zeros_and_samples(c: &mut Criterion) {
    let f = ExpPolyFunction::parse("exp[z] + exp[i*z] + exp[z^2]").unwrap();
    let radii = RGrid::new(2.0, 8.0, 7, false).unwrap().radii();
    let mut group = c.benchmark_group("analyze_r8");
    group.sample_size(10);
    for (name, mode) in [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)] {
        let opts = ZeroOptions::default().with_mode(mode);
        group.bench_function(name, |b| b.iter(|| analyze(&f, &radii, &[1, 2], &opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, zeros_and_samples);
criterion_main!(benches);
