use criterion::{black_box, criterion_group, criterion_main, Criterion};
use quiverhecke::{nilhecke, skew, Localizer, ModuleElement, Poly};

fn build(c: &mut Criterion) {
    for label in ["A3", "B3"] {
        let cfg = nilhecke(label).unwrap();
        c.bench_function(&format!("model {label}"), |b| b.iter(|| cfg.to_model().unwrap()));
    }
}

fn demazure(c: &mut Criterion) {
    let m = nilhecke("B3").unwrap().to_model().unwrap();
    let g = m.group();
    let op = m.sigma_word(0, g.reduced_word(g.longest()));
    let f = (0..3).fold(Poly::one(3), |acc, k| &acc * &Poly::var(3, k).pow(k as u32 + 3));
    let el = ModuleElement::single(1, 0, f);
    c.bench_function("longest word on B3 monomial", |b| b.iter(|| m.apply(black_box(&op), &el).unwrap()));
}

fn braid(c: &mut Criterion) {
    let m = skew("B2").unwrap().to_model().unwrap();
    c.bench_function("skew B2 braid defect", |b| b.iter(|| m.braid_defect(0, 0, 1).unwrap()));
}

fn localize(c: &mut Criterion) {
    let m = nilhecke("A3").unwrap().to_model().unwrap();
    let l = Localizer::new(&m).unwrap();
    let a = l.localize_sigma(0, 0).unwrap();
    let b = l.localize_sigma(0, 1).unwrap();
    c.bench_function("fixed-point product A3", |bn| bn.iter(|| l.fp_mul(black_box(&a), &b)));
}

criterion_group!(benches, build, demazure, braid, localize);
criterion_main!(benches);
