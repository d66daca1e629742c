use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use qrlab::intlinalg::smith_normal_form;
use qrlab::relmod::{bar_h2, qr_check_lattice};
use qrlab::{parse_presentation, todd_coxeter, Config, IntMatrix, RelationLattice};

const Q16: &str = "gens: a,b; relators: a^4 = b^2, a*b*a = b; prime: 2;";
const M16: &str = "gens: a,b; relators: a^8, b^2, b*a*b^-1 = a^5; prime: 2;";
const C27: &str = "gens: a; relators: a^27; prime: 3;";

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("todd_coxeter");
    for (name, text) in [("q16", Q16), ("m16", M16), ("c27", C27)] {
        let pres = parse_presentation(text).unwrap();
        g.bench_function(name, |b| b.iter(|| todd_coxeter(black_box(&pres), 100_000).unwrap()));
    }
    g.finish();
}

fn smith(c: &mut Criterion) {
    // deterministic, moderately dense
    let n = 24;
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| ((i * 31 + j * 17 + i * j) % 23) as i64 - 11).collect())
        .collect();
    let m = IntMatrix::from_rows(n, &rows);
    c.bench_function("smith_normal_form/24x24", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

fn multiplier(c: &mut Criterion) {
    let mut g = c.benchmark_group("h2");
    g.sample_size(10);
    let pres = parse_presentation(Q16).unwrap();
    let tbl = Arc::new(todd_coxeter(&pres, 100_000).unwrap());
    g.bench_function("bar/q16", |b| b.iter(|| bar_h2(black_box(&tbl), 64).unwrap()));
    let lat = RelationLattice::new(&pres, Arc::clone(&tbl)).unwrap();
    let cfg = Config::default();
    g.bench_function("qr_check/q16", |b| b.iter(|| qr_check_lattice(black_box(&lat), 2, &cfg).unwrap()));
    g.finish();
}

criterion_group!(benches, enumeration, smith, multiplier);
criterion_main!(benches);
