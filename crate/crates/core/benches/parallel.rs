//! Sequential vs parallel execution of the data-parallel stages.
//! Built without the `parallel` feature, both variants run sequentially.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use covfix::dre::dominated_rows_with;
use covfix::harness::greedy_ub;
use covfix::orlib::UbTable;
use covfix::pipeline::{run_suite, NamedInstance, PipelineConfig, Procedure};
use covfix::sls::{generate, generate_batch_with, SlsParams};
use covfix::strong::{strong_fix, SfConfig};
use covfix::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn sls(n: usize, seed: u64) -> covfix::ScpInstance {
    generate(&SlsParams { seed, ..SlsParams::with_sites(n) }).expect("generator")
}

fn strong(c: &mut Criterion) {
    let inst = sls(300, 1);
    let (ub, _) = greedy_ub(&inst);
    let mut g = c.benchmark_group("strong_fix");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SfConfig { exec, ..SfConfig::default() };
        g.bench_with_input(BenchmarkId::new(name, inst.n_cols()), &cfg, |b, cfg| {
            b.iter(|| strong_fix(&inst, ub, cfg).unwrap())
        });
    }
    g.finish();
}

fn suite(c: &mut Criterion) {
    let instances: Vec<NamedInstance> = (0..6)
        .map(|s| NamedInstance {
            name: format!("sls_{s}"),
            instance: sls(400, s),
        })
        .collect();
    let mut ubs = UbTable::new();
    for named in &instances {
        ubs.insert(named.name.clone(), greedy_ub(&named.instance).0).unwrap();
    }
    let procs = [Procedure::RcfDre, Procedure::DpfDre, Procedure::IterDpfDre];
    let mut g = c.benchmark_group("run_suite");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = PipelineConfig { exec, ..PipelineConfig::default() };
        g.bench_function(name, |b| b.iter(|| run_suite(&instances, &ubs, &procs, &cfg, exec).unwrap()));
    }
    g.finish();
}

fn generator(c: &mut Criterion) {
    let params = SlsParams { seed: 3, ..SlsParams::with_sites(500) };
    let mut g = c.benchmark_group("generate_batch");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| generate_batch_with(&params, 8, exec).unwrap()));
    }
    g.finish();
}

fn dominance(c: &mut Criterion) {
    let inst = sls(1000, 2);
    let mut g = c.benchmark_group("dominated_rows");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| dominated_rows_with(&inst, exec)));
    }
    g.finish();
}

criterion_group!(benches, strong, suite, generator, dominance);
criterion_main!(benches);
