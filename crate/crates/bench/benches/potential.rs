use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use horizon_core::potential::{field, potential};
use horizon_core::{
    BallUnion, MassDistribution, PhysicalConstants, QuadratureOptions, RadialProfile, Shell, UniformBall, Vector3,
    VoxelGrid,
};

fn voxel(n: usize) -> MassDistribution {
    let densities = (0..n * n * n).map(|i| 1.0 + 0.25 * ((i % 5) as f64)).collect();
    VoxelGrid::new(Vector3::new(-0.5, -0.5, -0.5), 1.0 / n as f64, [n, n, n], densities)
        .unwrap()
        .into()
}

fn bodies() -> Vec<(&'static str, MassDistribution)> {
    let c = Vector3::ZERO;
    vec![
        ("uniform_ball", UniformBall::new(c, 0.5, 1.0).unwrap().into()),
        (
            "radial_profile",
            RadialProfile::from_shells(
                c,
                vec![
                    Shell {
                        outer_radius: 0.2,
                        density: 5.0,
                    },
                    Shell {
                        outer_radius: 0.5,
                        density: 1.0,
                    },
                ],
            )
            .unwrap()
            .into(),
        ),
        (
            "ball_union",
            BallUnion::new(vec![
                UniformBall::new(Vector3::new(-0.3, 0.0, 0.0), 0.2, 1.0).unwrap(),
                UniformBall::new(Vector3::new(0.3, 0.0, 0.0), 0.2, 1.0).unwrap(),
            ])
            .unwrap()
            .into(),
        ),
        ("voxel_8", voxel(8)),
    ]
}

fn bench_potential(c: &mut Criterion) {
    let consts = PhysicalConstants::unit();
    let opts = QuadratureOptions::default();
    let u = Vector3::new(1.3, 0.4, -0.2);
    let mut group = c.benchmark_group("potential");
    for (name, body) in bodies() {
        group.bench_function(name, |b| {
            b.iter(|| potential(&body, black_box(u), &consts, &opts).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("voxel_field");
    for n in [4, 8, 16] {
        let body = voxel(n);
        for (label, opts) in [
            ("exact", QuadratureOptions::default()),
            ("adaptive", QuadratureOptions::adaptive()),
        ] {
            group.bench_with_input(BenchmarkId::new(label, n), &body, |b, body| {
                b.iter(|| field(body, black_box(u), &consts, &opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_potential);
criterion_main!(benches);
