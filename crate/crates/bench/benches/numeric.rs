use birational_core::jacquet::special::bessel_k;
use birational_core::jacquet::{gl2_continued, gl2_direct, BumpSpec, IBPScheme, QuadratureParams};
use birational_core::Complex64;
use criterion::{criterion_group, criterion_main, Criterion};

fn bessel(c: &mut Criterion) {
    let nu = Complex64::new(0.3, 0.7);
    c.bench_function("bessel_k x=0.5", |b| b.iter(|| bessel_k(nu, 0.5)));
    c.bench_function("bessel_k x=2pi", |b| {
        b.iter(|| bessel_k(nu, 2.0 * std::f64::consts::PI))
    });
}

fn gl2(c: &mut Criterion) {
    let q = QuadratureParams::default();
    let bump = BumpSpec::default();
    let mut g = c.benchmark_group("gl2");
    g.sample_size(20);
    g.bench_function("direct mu=1", |b| {
        b.iter(|| gl2_direct(Complex64::new(1.0, 0.0), &q).unwrap())
    });
    for (mu, k) in [(0.25, 4), (-0.5, 8)] {
        let scheme = IBPScheme::new(k).unwrap();
        g.bench_function(format!("continued mu={mu} k={k}"), |b| {
            b.iter(|| gl2_continued(Complex64::new(mu, 0.0), &scheme, &bump, &q).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bessel, gl2);
criterion_main!(benches);
