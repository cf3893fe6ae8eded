use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sweepdec::bits::DenseBits;
use sweepdec::complex::Chain;
use sweepdec::decoder;
use sweepdec::lattices::{self, LatticeFamily, LatticeSpec};
use sweepdec::noise::{self, NoiseParams};
use sweepdec::sweep::{Rule, Ruleset, SweepConfig};
use sweepdec::verify;

fn lattice_build(c: &mut Criterion) {
    c.bench_function("lattice_build_bcc_l8", |b| {
        b.iter(|| lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, 8)).unwrap())
    });
}

fn rule_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("rule_step");
    for l in [8u32, 16] {
        let lat = lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, l)).unwrap();
        let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let eps = noise::sample_error(&lat, 0.01, &mut rng);
        let sigma0 = lat.complex.boundary(&eps).unwrap().to_dense_bits();
        let nq = lat.complex.ncells(2) as usize;
        group.bench_function(format!("bcc_l{l}_p0.01"), |b| {
            b.iter_batched(
                || (sigma0.clone(), DenseBits::zeros(nq)),
                |(mut sigma, mut rho)| rs.step_dense(&mut sigma, &mut rho, 0),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn decode_small_errors(c: &mut Criterion) {
    let lat = lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, 8)).unwrap();
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let t_max = decoder::default_t_max(&lat);
    let eps = Chain::from_cells(&lat.complex, 2, [7u32, 1000, 4000]).unwrap();
    let sigma = lat.complex.boundary(&eps).unwrap();
    c.bench_function("decode_weight3_bcc_l8", |b| {
        b.iter(|| decoder::decode(&lat, &rs, &sigma, t_max))
    });
}

fn memory_cycle(c: &mut Criterion) {
    let lat = lattices::build(&LatticeSpec::new(LatticeFamily::Bcc3d, 8)).unwrap();
    let rs = Ruleset::new(&lat, SweepConfig::new(Rule::Greedy)).unwrap();
    let t_max = decoder::default_t_max(&lat);
    let noise = NoiseParams::uniform(0.01, 16);
    c.bench_function("memory_trial_bcc_l8_16cycles", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed += 1;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            noise::run_memory_trial(&lat, &rs, &noise, t_max, seed, &mut rng)
        })
    });
}

fn chunk_decomposition(c: &mut Criterion) {
    let lat = lattices::build(&LatticeSpec::new(LatticeFamily::Cubic3d, 16)).unwrap();
    let cells: Vec<u32> = (0..12u32).map(|i| i * 977).collect();
    let eps = Chain::from_cells(&lat.complex, 2, cells).unwrap();
    c.bench_function("chunk_decomposition_12cells", |b| {
        b.iter(|| verify::decompose_chunks(&lat, &eps, 36).unwrap())
    });
}

criterion_group!(
    benches,
    lattice_build,
    rule_step,
    decode_small_errors,
    memory_cycle,
    chunk_decomposition
);
criterion_main!(benches);
