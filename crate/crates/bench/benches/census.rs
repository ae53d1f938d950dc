use criterion::{black_box, criterion_group, criterion_main, Criterion};
use tcline::census::{census_lines, census_quartics};
use tcline::klein::Line;
use tcline::quartic::QuarticForm;
use tcline::rep_theory::rep_check_grid;
use tcline::make_field;

fn classify(c: &mut Criterion) {
    let f = make_field(13, 1).unwrap();
    let forms: Vec<_> = (0..200u64)
        .map(|i| QuarticForm::from_index(f.one(), 1 + i * 131 % (QuarticForm::count(13) - 1)))
        .collect();
    c.bench_function("quartic classify q=13 x200", |b| {
        b.iter(|| forms.iter().filter_map(|g| g.orbit_label().ok()).count())
    });
    let lines: Vec<_> = Line::all(&f).into_iter().step_by(97).take(200).collect();
    c.bench_function("line classify q=13 x200", |b| {
        b.iter(|| lines.iter().filter_map(|l| l.classify().ok()).count())
    });
}

fn censuses(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    for q in [5u64, 7, 11] {
        let f = make_field(q, 1).unwrap();
        g.bench_function(format!("quartics q={q}"), |b| b.iter(|| census_quartics(black_box(&f)).unwrap()));
    }
    for q in [5u64, 7] {
        let f = make_field(q, 1).unwrap();
        g.bench_function(format!("lines q={q}"), |b| b.iter(|| census_lines(black_box(&f)).unwrap()));
    }
    g.finish();
}

fn rep_grid(c: &mut Criterion) {
    let fields: Vec<_> = [(5, 1), (7, 1), (13, 1), (5, 2)].map(|(p, k)| make_field(p, k).unwrap()).into();
    c.bench_function("rep-check grid m<=8", |b| b.iter(|| rep_check_grid(8, &fields, 6).unwrap()));
}

criterion_group!(benches, classify, censuses, rep_grid);
criterion_main!(benches);
