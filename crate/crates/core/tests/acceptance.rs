//! One line per acceptance criterion, exact comparisons throughout.
//! Exits nonzero if any criterion fails.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tcline::census::{
    census_checks, census_lines, census_quartics, j_set_checks, line_cells, prime_power,
    quartic_cells, sweep, verify_tables, OrbitCensus, OrbitLabel, VerifyOptions,
};
use tcline::field_tower::{make_field, FieldCtx, FieldElem, Fq};
use tcline::klein::{
    generic_labels, line_representative, table_generators, Branch, Line, LineLabel, NongenericLabel,
};
use tcline::linalg::{matmul, transpose};
use tcline::projective::{cross_ratio, pgl2_elements, points, ProjPoint};
use tcline::quartic::{
    all_labels, degenerate_orbit_size, expected_stabilizer, quadratic_product, representative,
    resultant_quadratics, Perm, QuarticForm, QuarticLabel,
};
use tcline::rep_theory::{a_matrix, dual_sym_matrix, rep_check_grid};
use tcline::klein::g_bracket;

type Outcome = Result<String, String>;

fn field(q: u64) -> FieldCtx {
    let (p, k) = prime_power(q).unwrap();
    make_field(p, k).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_failures(cells: &[tcline::census::Cell], checks: &[tcline::census::Check]) -> Vec<String> {
    let mut out: Vec<String> = cells
        .iter()
        .filter(|c| !c.pass())
        .map(|c| format!("{} {} {}: expected {} got {}", c.table, c.row, c.col, c.expected, c.actual))
        .collect();
    out.extend(checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)));
    out
}

fn quartic_census(q: u64) -> Result<(FieldCtx, OrbitCensus), String> {
    let f = field(q);
    let c = census_quartics(&f).map_err(|e| e.to_string())?;
    Ok((f, c))
}

fn criterion1() -> Outcome {
    let mut notes = Vec::new();
    for q in [5u64, 7, 11, 13, 25] {
        let t = Instant::now();
        let (f, c) = quartic_census(q)?;
        let nondeg: Vec<_> = c.orbits.iter().filter(|o| o.j.is_some()).collect();
        let want = 2 * q as i64 + 2 + f.mu();
        ensure(nondeg.len() as i64 == want, || format!("q={q}: {} orbits, want {want}", nondeg.len()))?;
        let sum: u64 = nondeg.iter().map(|o| o.size).sum();
        ensure(sum == q.pow(4) - q * q, || format!("q={q}: sizes sum to {sum}"))?;
        let (cells, mut checks) = quartic_cells(&c, &f).map_err(|e| e.to_string())?;
        checks.extend(census_checks(&c));
        let bad = table_failures(&cells, &checks);
        ensure(bad.is_empty(), || format!("q={q}: {bad:?}"))?;
        notes.push(format!("{q}->{} ({:.1}s)", nondeg.len(), t.elapsed().as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn criterion2() -> Outcome {
    for q in [5u64, 7, 11, 13] {
        let (_, c) = quartic_census(q)?;
        let mut sizes: Vec<u64> = c.orbits.iter().filter(|o| o.j.is_none()).map(|o| o.size).collect();
        let mut want = vec![q + 1, q * (q + 1), (q * q + q) / 2, (q * q - q) / 2, (q * q * q - q) / 2, (q * q * q - q) / 2];
        sizes.sort_unstable();
        want.sort_unstable();
        ensure(sizes == want, || format!("q={q}: sizes {sizes:?}, want {want:?}"))?;
        for n in 1..=6u8 {
            let label = OrbitLabel::Quartic(QuarticLabel::Degenerate(n));
            let o = c.orbits.iter().find(|o| o.label == label).ok_or(format!("q={q}: orbit {n} missing"))?;
            ensure(o.size == degenerate_orbit_size(n, q), || format!("q={q}: orbit {n} size {}", o.size))?;
        }
    }
    Ok("6 orbits with the stated sizes at q=5,7,11,13".into())
}

fn criterion3() -> Outcome {
    let mut notes = Vec::new();
    for (q, want_generic) in [(5u64, 6usize), (7, 12), (11, 18), (13, 24)] {
        let t = Instant::now();
        let f = field(q);
        let c = census_lines(&f).map_err(|e| e.to_string())?;
        let g = q * q * q - q;
        let generic: Vec<_> = c
            .orbits
            .iter()
            .filter(|o| matches!(o.label, OrbitLabel::Line(LineLabel::Generic(..))))
            .collect();
        ensure(generic.len() == want_generic, || format!("q={q}: {} generic orbits", generic.len()))?;
        if q == 5 {
            let mut sizes: Vec<u64> = generic.iter().map(|o| o.size).collect();
            sizes.sort_unstable();
            ensure(sizes == vec![g / 2, g / 2, g / 2, g / 2, g, g], || format!("q=5 sizes {sizes:?}"))?;
        }
        for n in NongenericLabel::ALL {
            let label = OrbitLabel::Line(LineLabel::Nongeneric(n));
            let hits: Vec<_> = c.orbits.iter().filter(|o| o.label == label).collect();
            ensure(hits.len() == 1 && hits[0].size == n.orbit_size(q), || format!("q={q}: {n} wrong"))?;
        }
        let (cells, mut checks) = line_cells(&c, &f).map_err(|e| e.to_string())?;
        checks.extend(census_checks(&c));
        let bad = table_failures(&cells, &checks);
        ensure(bad.is_empty() && c.polarity_mismatches == 0, || format!("q={q}: {bad:?}"))?;
        if q == 13 {
            let j1728 = (1728 % q) as u32;
            let quarter: Vec<_> = generic.iter().filter(|o| o.j == Some(j1728) && o.size == g / 4).collect();
            let sd = quarter
                .iter()
                .filter(|o| matches!(o.label, OrbitLabel::Line(LineLabel::Generic(_, Branch::SelfDual))))
                .count();
            // confirm the tag against the star of the stored representative
            let reps_sd = quarter
                .iter()
                .filter(|o| {
                    let p: Vec<_> = o.representative.iter().map(|&v| f.elem(v as u64).unwrap()).collect();
                    let l = Line::from_plucker(p.try_into().unwrap()).unwrap();
                    l.orbit().contains(&l.hodge_star())
                })
                .count();
            ensure(quarter.len() == 4 && sd == 2 && reps_sd == 2, || {
                format!("q=13 j=1728 |G|/4 orbits={} self-dual={sd}/{reps_sd}", quarter.len())
            })?;
        }
        notes.push(format!("{q}->{} ({:.1}s)", generic.len(), t.elapsed().as_secs_f64()));
    }
    Ok(format!("{}; q=13 j=1728: 2 of 4 quarter-size orbits self-dual", notes.join(", ")))
}

fn criterion4() -> Outcome {
    let (mut nq, mut nl, mut nt) = (0, 0, 0);
    for q in [5u64, 7, 11, 13] {
        let f = field(q);
        let group = pgl2_elements(&f);
        for label in all_labels(&f).map_err(|e| e.to_string())? {
            let rep = representative(&f, label).map_err(|e| e.to_string())?;
            let c = rep.classify().map_err(|e| e.to_string())?;
            ensure(c.label == label, || format!("q={q}: {label} classified as {}", c.label))?;
            if let Some(s) = c.stabilizer {
                let scan = rep.stabilizer().map_err(|e| e.to_string())?;
                ensure(
                    expected_stabilizer(c.kind, label, q) == Some(s) && scan.label == s,
                    || format!("q={q}: {label} stabilizer {s}"),
                )?;
            }
            nq += 1;
        }
        for label in generic_labels(&f).map_err(|e| e.to_string())? {
            let l = line_representative(&f, label).map_err(|e| e.to_string())?;
            let c = l.classify().map_err(|e| e.to_string())?;
            ensure(c.label == label, || format!("q={q}: line {label} classified as {}", c.label))?;
            let scan = group.iter().filter(|g| l.act(g) == l).count() as u64;
            ensure(scan == c.stabilizer_order && scan * c.orbit_size == q * q * q - q, || {
                format!("q={q}: line {label} stabilizer {scan} vs {}", c.stabilizer_order)
            })?;
            nl += 1;
        }
        // every closed-form generator matrix lands in a generic orbit over its quartic
        for ql in all_labels(&f).map_err(|e| e.to_string())? {
            if matches!(ql, QuarticLabel::Degenerate(_)) {
                continue;
            }
            let mut hit = false;
            for m in table_generators(&f, ql).map_err(|e| e.to_string())? {
                let Ok(l) = Line::from_points(m[0], m[1]) else { continue };
                if !l.is_generic() {
                    continue;
                }
                let c = l.classify().map_err(|e| e.to_string())?;
                let LineLabel::Generic(got, _) = c.label else { continue };
                if got != ql {
                    continue;
                }
                let scan = group.iter().filter(|g| l.act(g) == l).count() as u64;
                ensure(scan == c.stabilizer_order, || format!("q={q}: generator for {ql} stabilizer {scan}"))?;
                hit = true;
                nt += 1;
            }
            let lifts = generic_labels(&f).map_err(|e| e.to_string())?.iter().any(|l| matches!(l, LineLabel::Generic(x, _) if *x == ql));
            ensure(hit || !lifts, || format!("q={q}: no closed-form matrix for {ql}"))?;
        }
    }
    Ok(format!("{nq} quartic labels, {nl} line labels, {nt} generator matrices"))
}

fn criterion5() -> Outcome {
    let mut n = 0;
    for q in 5..=101u64 {
        let Some((p, _)) = prime_power(q) else { continue };
        if p < 5 {
            continue;
        }
        let t = Instant::now();
        let f = field(q);
        let checks = j_set_checks(&f).map_err(|e| e.to_string())?;
        let bad = table_failures(&[], &checks);
        ensure(bad.is_empty(), || format!("q={q}: {bad:?}"))?;
        ensure(t.elapsed().as_secs_f64() < 1.0, || format!("q={q}: slow"))?;
        n += 1;
    }
    Ok(format!("{n} fields up to 101, including 25 and 49"))
}

/// `(Y s - X t)(Y s' - X t')` in coefficients of `X^k Y^(2-k)`.
fn quad<'a>(a: &ProjPoint<Fq<'a>>, b: &ProjPoint<Fq<'a>>) -> [Fq<'a>; 3] {
    [a.s() * b.s(), -(a.s() * b.t() + a.t() * b.s()), a.t() * b.t()]
}

/// Seeded sampling version of the identity suite; 256 samples per identity
/// and field.
fn criterion6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut total = 0usize;
    for q in [5u64, 7, 13] {
        let f = field(q);
        let group = pgl2_elements(&f);
        let lines = Line::all(&f);
        let pts = points(&f);
        let el = |rng: &mut ChaCha8Rng| f.elem(rng.gen_range(0..q)).unwrap();
        for _ in 0..256 {
            // weight laws and the discriminant identity
            let z = [el(&mut rng), el(&mut rng), el(&mut rng), el(&mut rng), el(&mut rng)];
            let Ok(h) = QuarticForm::new(z) else { continue };
            let g = &group[rng.gen_range(0..group.len())];
            let d = g.det().inv().unwrap();
            let gh = h.act_affine(g);
            let (i, j) = (h.invariant_i(), h.invariant_j());
            ensure(gh.invariant_i() == d.pow(4) * i && gh.invariant_j() == d.pow(6) * j, || format!("q={q}: weight law at {h}"))?;
            ensure(h.discriminant() == i * i * i - j * j, || format!("q={q}: discriminant at {h}"))?;

            // equivariance of the projection and the star
            let l = &lines[rng.gen_range(0..lines.len())];
            ensure(l.act(g).pi().same_projective(&l.pi().act(g)), || format!("q={q}: pi at {l}"))?;
            ensure(l.act(g).hodge_star() == l.hodge_star().act(g), || format!("q={q}: star at {l}"))?;

            // resultant identity
            let idx: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..pts.len()));
            let p = idx.map(|k| pts[k]);
            if let Ok(lambda) = cross_ratio(p) {
                let (f1, f2) = (quad(&p[0], &p[1]), quad(&p[2], &p[3]));
                let res = resultant_quadratics(f1, f2).unwrap();
                let prod = quadratic_product(f1, f2).unwrap();
                let o = f.one();
                ensure(f.int(36) * prod.invariant_i() == (lambda + o / lambda - o) * res, || format!("q={q}: resultant"))?;
            }
            total += 1;
        }
        // sign criterion on sampled generic, non-self-dual lines
        let candidates: Vec<_> = lines.iter().filter(|l| l.is_generic() && !l.is_self_dual()).collect();
        for _ in 0..40 {
            let l = candidates[rng.gen_range(0..candidates.len())];
            let h = l.pi().normalized();
            let rm = h.roots();
            let roots: Vec<_> = rm.roots.iter().map(|(p, _)| *p).collect();
            for g in h.stabilizer().map_err(|e| e.to_string())?.elements {
                let ge = g.embed(rm.ext);
                let img: Vec<usize> = roots.iter().map(|r| roots.iter().position(|x| *x == ge.act(r)).unwrap()).collect();
                let sign = Perm([img[0], img[1], img[2], img[3]]).sign();
                let gl = l.act(&g);
                ensure(gl == *l || gl == l.hodge_star(), || format!("q={q}: stabilizer leaves fibre"))?;
                ensure((gl != *l) == (sign == -1), || format!("q={q}: sign criterion at {l}, g={g}"))?;
            }
        }
    }
    // exhaustive at q = 5
    let f = field(5);
    let pts = points(&f);
    for l in Line::all(&f) {
        let z = l.z();
        ensure(z[5] * z[5] == l.pi().invariant_i(), || format!("z5^2 != I at {l}"))?;
        let pi = l.pi();
        for x in &pts {
            ensure(l.meets_tangent(x.s(), x.t()) == pi.eval(x.s(), x.t()).is_zero(), || format!("tangent incidence at {l}"))?;
        }
    }
    // similitude identity
    let mut sims = 0;
    for q in [5u64, 7, 13] {
        let f = field(q);
        let group = pgl2_elements(&f);
        for m in 1..=6usize {
            if m as u64 + 2 > q {
                continue;
            }
            for _ in 0..40 {
                let e = group[rng.gen_range(0..group.len())].entries();
                let det = e[0] * e[3] - e[1] * e[2];
                let dm = det.pow(m as u128);
                let gb = g_bracket(m, e);
                let a = a_matrix(m as u32, &f);
                let scale = |x: Vec<Vec<_>>| -> Vec<Vec<_>> { x.into_iter().map(|r| r.into_iter().map(|v| v * dm).collect()).collect() };
                ensure(matmul(&a, &gb) == scale(matmul(&dual_sym_matrix(m, e), &a)), || format!("q={q} m={m}: A g = det^m g_m A"))?;
                ensure(matmul(&matmul(&transpose(&gb), &a), &gb) == scale(a.clone()), || format!("q={q} m={m}: similitude"))?;
                sims += 1;
            }
        }
    }
    Ok(format!("{total} random forms/lines/quadruples, {sims} similitude samples, exhaustive q=5, zero failures"))
}

fn criterion7() -> Outcome {
    let t = Instant::now();
    let fields: Vec<_> = [5u64, 7, 13, 25].map(field).into();
    let grid = rep_check_grid(8, &fields, 6).map_err(|e| e.to_string())?;
    let bad: Vec<_> = grid.iter().filter(|r| !r.consistent()).map(|r| (r.m, r.q)).collect();
    ensure(bad.is_empty(), || format!("disagreements at {bad:?}"))?;
    let hom = grid.iter().filter(|r| r.m <= 6).all(|r| r.dim_a == Some(1) && r.dim_t == Some(1));
    ensure(hom, || "Hom dimension differs from 1".into())?;
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{} grid points, {} with vanishing binomials ({secs:.2}s)", grid.len(), grid.iter().filter(|r| !r.cond1).count()))
}

fn criterion8() -> Outcome {
    let f = field(7);
    let a = verify_tables(&f, VerifyOptions::default()).to_string();
    let b = verify_tables(&f, VerifyOptions::default()).to_string();
    ensure(a == b, || "verify output differs between runs".into())?;
    let base = std::env::temp_dir().join(format!("tcline-acceptance-{}", std::process::id()));
    let qs = [5u64, 7, 9, 11];
    let one = sweep(&qs, 1, &base.join("j1"), VerifyOptions::default()).map_err(|e| e.to_string())?;
    let many = sweep(&qs, 8, &base.join("j8"), VerifyOptions::default()).map_err(|e| e.to_string())?;
    let again = sweep(&qs, 8, &base.join("j8b"), VerifyOptions::default()).map_err(|e| e.to_string())?;
    for ((x, _), ((y, _), (z, _))) in one.iter().zip(many.iter().zip(&again)) {
        let (bx, by, bz) = (std::fs::read(x).unwrap(), std::fs::read(y).unwrap(), std::fs::read(z).unwrap());
        ensure(bx == by && by == bz, || format!("{} differs", x.display()))?;
    }
    let in_sweep = std::fs::read_to_string(base.join("j1").join("report-q7.txt")).unwrap();
    ensure(in_sweep == a, || "sweep report differs from verify".into())?;
    let _ = std::fs::remove_dir_all(&base);
    Ok(format!("q={qs:?}, jobs 1 vs 8, byte-identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("quartic census", criterion1),
        ("discriminant-zero census", criterion2),
        ("line census", criterion3),
        ("representative round trips", criterion4),
        ("j-set sizes", criterion5),
        ("identity suite", criterion6),
        ("D_m V grid", criterion7),
        ("determinism", criterion8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
