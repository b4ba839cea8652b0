//! Sequential vs parallel execution of the data-parallel sweeps.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use liftcollapse::certificate::{matrix_a, omega};
use liftcollapse::exact::{rat, RVector};
use liftcollapse::instances::{cropped_cube, parity, sts_optimal_face};
use liftcollapse::par::{self, Exec};
use liftcollapse::polytope::HPolytope;
use liftcollapse::sa::{build_mk, sa_emptiness};
use liftcollapse::Limits;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn limits(exec: Exec) -> Limits {
    Limits::default().with_exec(exec)
}

fn face_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("face_sweep");
    g.sample_size(10);
    let p = parity(9).unwrap();
    for (name, exec) in MODES {
        let l = limits(exec);
        g.bench_function(BenchmarkId::new(name, "parity9_k3"), |b| {
            b.iter(|| p.intersects_all_faces(3, false, &l).unwrap().holds)
        });
    }
    g.finish();
}

fn lifted_system(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_mk");
    g.sample_size(10);
    let p = cropped_cube(6).unwrap();
    for (name, exec) in MODES {
        let l = limits(exec);
        g.bench_function(BenchmarkId::new(name, "cropped6_k3"), |b| b.iter(|| build_mk(&p, 3, &l).unwrap().rows.len()));
    }
    g.finish();
}

fn vertex_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("vertices");
    g.sample_size(10);
    let p = cropped_cube(4).unwrap();
    for (name, exec) in MODES {
        let mut l = limits(exec);
        l.vertex_rows = 64;
        g.bench_function(BenchmarkId::new(name, "cropped4"), |b| b.iter(|| p.vertices(&l).unwrap().len()));
    }
    g.finish();
}

fn sa_lp(c: &mut Criterion) {
    let mut g = c.benchmark_group("sa_emptiness");
    g.sample_size(10);
    let cases: [(&str, HPolytope, usize); 2] = [("parity5_k3", parity(5).unwrap(), 3), ("sts_face_k1", sts_optimal_face(2).unwrap(), 1)];
    for (case, p, k) in &cases {
        for (name, exec) in MODES {
            let l = limits(exec);
            g.bench_function(BenchmarkId::new(name, case), |b| b.iter(|| sa_emptiness(p, *k, &l).unwrap().empty));
        }
    }
    g.finish();
}

fn determinant_identity(c: &mut Criterion) {
    let mut g = c.benchmark_group("det_identity");
    g.sample_size(10);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let thetas: Vec<RVector> = (0..400)
        .map(|_| {
            (0..7)
                .map(|_| {
                    let d = rng.gen_range(2..=60i64);
                    rat(rng.gen_range(1..d), d)
                })
                .collect()
        })
        .collect();
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, "t6_x400"), |b| {
            b.iter(|| {
                par::map(exec, &thetas, |th| matrix_a(6, th).unwrap().det().unwrap() == omega(6, th).unwrap())
                    .into_iter()
                    .all(|ok| ok)
            })
        });
    }
    g.finish();
}

criterion_group!(benches, face_sweep, lifted_system, vertex_enumeration, sa_lp, determinant_identity);
criterion_main!(benches);
