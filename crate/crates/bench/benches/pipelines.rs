use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;
use num_rational::BigRational;

use movcat_core::catbounds::{surface_products_table, SurfacePattern};
use movcat_core::complexes::fixtures;
use movcat_core::exactalg::{
    annihilator_rank1, homology_over_fraction_field, lowest_coeff_ideal, smith_normal_form,
    IntMatrix,
};
use movcat_core::movability::{decide_movable_field, decide_movable_int, DecisionOptions};
use movcat_core::novikov::{nov_invert, truncated_diagonalize, NovikovSeries};
use movcat_core::{parse_poly, XiOrder};

fn exact_algebra(c: &mut Criterion) {
    let m = IntMatrix::from_rows(&[
        vec![12, 18, -6, 4],
        vec![7, 3, 21, -9],
        vec![-4, 10, 8, 14],
        vec![5, -15, 25, 35],
    ]);
    c.bench_function("smith_normal_form_4x4", |b| {
        b.iter(|| smith_normal_form(black_box(&m)))
    });

    let fx = fixtures::bs12(1);
    c.bench_function("annihilator_and_lowest_coefficient_bs12", |b| {
        b.iter(|| {
            let ann = annihilator_rank1(&fx.complex, &fx.cycle, None).unwrap();
            lowest_coeff_ideal(&ann, fx.complex.xi()).unwrap()
        })
    });

    let g4 = fixtures::genus(4);
    c.bench_function("generic_homology_genus4", |b| {
        b.iter(|| homology_over_fraction_field(black_box(&g4.complex), 1))
    });
}

fn novikov(c: &mut Criterion) {
    let xi = XiOrder::parse("1").unwrap();
    let cutoff = BigRational::from_integer(BigInt::from(40));
    let u = NovikovSeries::new(
        parse_poly("1 - 2*t1 + 3*t1^2 - t1^5", 1).unwrap(),
        cutoff.clone(),
        &xi,
    );
    c.bench_function("novikov_inverse_cutoff_40", |b| {
        b.iter(|| nov_invert(black_box(&u)).unwrap())
    });

    let g3 = fixtures::genus(3);
    let cutoff = BigRational::from_integer(BigInt::from(8));
    c.bench_function("diagonalize_genus3_cutoff_8", |b| {
        b.iter(|| truncated_diagonalize(black_box(&g3.complex), &cutoff))
    });
}

fn movability(c: &mut Criterion) {
    let corpus = fixtures::corpus();
    c.bench_function("decide_movable_int_corpus", |b| {
        b.iter(|| {
            for fx in &corpus {
                decide_movable_int(&fx.complex, &fx.cycle, &DecisionOptions::default()).unwrap();
            }
        })
    });
    c.bench_function("decide_movable_field_corpus", |b| {
        b.iter(|| {
            for fx in &corpus {
                decide_movable_field(&fx.complex, &fx.cycle).unwrap();
            }
        })
    });
}

fn surfaces(c: &mut Criterion) {
    let p: SurfacePattern = "2:nz,3:z,2:nz".parse().unwrap();
    c.bench_function("surface_table_three_factors", |b| {
        b.iter(|| surface_products_table(black_box(&p)).unwrap())
    });
}

criterion_group!(benches, exact_algebra, novikov, movability, surfaces);
criterion_main!(benches);
