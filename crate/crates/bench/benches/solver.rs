use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use lpdual::linalg::{dot, int, rat, Matrix, Rational, Vector};
use lpdual::oracle::vertex_optimum;
use lpdual::{maximize, solve_game, PayoffMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn example() -> (Matrix, Vector, Vector) {
    let a = Matrix::from_rows(
        2,
        vec![
            vec![int(2), int(1)],
            vec![int(-1), int(2)],
            vec![rat(1, 2), rat(-1, 2)],
            vec![int(-1), int(-1)],
        ],
    )
    .unwrap();
    let b = Vector::new(vec![int(5), int(2), rat(1, 2), int(-1)]);
    (a, b, Vector::from_ints(&[7, 1]))
}

fn small_rat(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

/// Feasible by construction; bounded with high probability once rows > cols.
fn random_lp(rng: &mut impl Rng, rows: usize, cols: usize) -> (Matrix, Vector, Vector) {
    let a: Vec<Vec<Rational>> = (0..rows)
        .map(|_| (0..cols).map(|_| small_rat(rng)).collect())
        .collect();
    let p: Vector = (0..cols).map(|_| small_rat(rng)).collect();
    let b = a
        .iter()
        .map(|r| dot(&Vector::new(r.clone()), &p).unwrap() + int(rng.gen_range(0..=3)))
        .collect();
    let c = (0..cols).map(|_| small_rat(rng)).collect();
    (Matrix::from_rows(cols, a).unwrap(), b, c)
}

fn bench_examples(cr: &mut Criterion) {
    let (a, b, c) = example();
    cr.bench_function("maximize/example", |bch| {
        bch.iter(|| maximize(black_box(&a), black_box(&b), black_box(&c)))
    });
    cr.bench_function("vertex_optimum/example", |bch| {
        bch.iter(|| vertex_optimum(black_box(&a), black_box(&b), black_box(&c)))
    });

    let rps = PayoffMatrix::new(Matrix::from_int_rows(&[
        &[0, -1, 1],
        &[1, 0, -1],
        &[-1, 1, 0],
    ]))
    .unwrap();
    cr.bench_function("solve_game/rps", |bch| {
        bch.iter(|| solve_game(black_box(&rps)))
    });
}

fn bench_random(cr: &mut Criterion) {
    let mut group = cr.benchmark_group("maximize/random");
    for (rows, cols) in [(6, 3), (12, 6), (18, 9)] {
        let mut rng = ChaCha8Rng::seed_from_u64(rows as u64);
        group.bench_function(format!("{rows}x{cols}"), |bch| {
            bch.iter_batched(
                || random_lp(&mut rng, rows, cols),
                |(a, b, c)| maximize(&a, &b, &c),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

criterion_group!(benches, bench_examples, bench_random);
criterion_main!(benches);
