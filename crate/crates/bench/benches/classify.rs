use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use weil_core::arith::prime_powers_up_to;
use weil_core::classify::enumerate_order_divisible;
use weil_core::smallfield::base_field;
use weil_core::{q_squared_closed_form, PrimePower};

fn enumeration(c: &mut Criterion) {
    let q200 = PrimePower::new(199).unwrap();
    c.bench_function("enumerate q=199 k=2", |b| {
        b.iter(|| enumerate_order_divisible(black_box(q200), 2))
    });
    c.bench_function("closed form vs brute force q<=200", |b| {
        b.iter(|| {
            prime_powers_up_to(200).into_iter().all(|q| {
                let brute: Vec<_> = enumerate_order_divisible(q, 2)
                    .iter()
                    .map(|r| (r.a, r.b))
                    .collect();
                brute == q_squared_closed_form(q)
            })
        })
    });
}

fn field_arithmetic(c: &mut Criterion) {
    let field = base_field(3, 6).unwrap();
    let elements: Vec<_> = field.elements().collect();
    c.bench_function("F_729 all products", |b| {
        b.iter(|| {
            let mut acc = field.one();
            for &x in &elements {
                for &y in &elements[..64] {
                    acc = field.add(acc, field.mul(x, y));
                }
            }
            acc
        })
    });
}

criterion_group!(benches, enumeration, field_arithmetic);
criterion_main!(benches);
