use cac_bench::{corpus, numeral};
use cac_core::recursor::generate_and_validate;
use cac_core::syntax::parse_term;
use cac_core::{check_source, normalize, Fuel};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn check(c: &mut Criterion) {
    for name in ["nat.cac", "trm.cac", "dlist.cac"] {
        let src = corpus(name);
        c.bench_function(&format!("check {name}"), |b| b.iter(|| check_source(black_box(&src), None).unwrap()));
    }
}

fn normalization(c: &mut Criterion) {
    let s = check_source(&corpus("nat.cac"), None).unwrap();
    let fuel = Fuel::new(1_000_000);
    for n in [5, 10, 20] {
        let t = s.resolve(&parse_term(&format!("× ({}) ({})", numeral(n), numeral(n))).unwrap());
        c.bench_function(&format!("normalize {n}×{n}"), |b| b.iter(|| normalize(&s.sig, black_box(&t), fuel).unwrap()));
    }
    let trm = check_source(&corpus("trm.cac"), None).unwrap();
    let t = trm.resolve(&parse_term("rec A y1 y2 y3 (fun n (cons trm (var 0) (cons trm (var (s 0)) (nil trm))))").unwrap());
    c.bench_function("normalize trm recursor", |b| b.iter(|| normalize(&trm.sig, black_box(&t), fuel).unwrap()));
}

fn genrec(c: &mut Criterion) {
    for (name, target) in [("nat.cac", "nat"), ("list.cac", "list"), ("dlist.cac", "dlist")] {
        let s = check_source(&corpus(name), None).unwrap();
        c.bench_function(&format!("genrec {target}"), |b| b.iter(|| generate_and_validate(&s.sig, black_box(target), s.fuel).unwrap()));
    }
}

criterion_group!(benches, check, normalization, genrec);
criterion_main!(benches);
