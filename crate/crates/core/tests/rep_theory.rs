use tcline::linalg::{matmul, transpose};
use tcline::make_field;
use tcline::klein::g_bracket;
use tcline::rep_theory::*;
use tcline::{Error, FieldElem};

#[test]
fn worked_examples() {
    let f5 = make_field(5, 1).unwrap();
    let f7 = make_field(7, 1).unwrap();
    assert!(condition_arith(4, 5));
    assert!(!condition_arith(5, 5));
    assert!(binomials_nonzero(3, &f5).unwrap());
    assert_eq!(hom_space_dim(3, &f7, HomVariant::A).unwrap(), 1);
    assert_eq!(hom_space_dim(3, &f5, HomVariant::T).unwrap(), 1);
    let f11 = make_field(11, 1).unwrap();
    assert!(binomials_nonzero(5, &f5).is_err());
    assert!(binomials_nonzero(5, &f11).unwrap());
    assert!(matches!(
        osculating_intersection_dim(6, &f5),
        Err(Error::AssumptionViolated { .. })
    ));
}

#[test]
fn reducible_case_kernel() {
    // over F_25, C(5, i) vanishes for 0 < i < 5
    let f = make_field(5, 2).unwrap();
    assert!(!binomials_nonzero(5, &f).unwrap());
    assert_eq!(osculating_intersection_dim(5, &f).unwrap(), 4);
    assert_eq!(osculating_intersection_direct(5, &f).unwrap(), 4);
    assert!(!is_irreducible_dmv(5, &f).unwrap());
}

#[test]
fn module_identities() {
    for (p, k) in [(7u64, 1u32), (11, 1), (13, 1), (5, 2)] {
        let f = make_field(p, k).unwrap();
        let els: Vec<_> = f.elements().collect();
        for m in 1..=6u32 {
            if m as u64 + 2 > f.q() {
                continue;
            }
            let n = m as usize;
            let a = a_matrix(m, &f);
            let t = t_matrix(m, &f);
            for (ix, &x) in els.iter().enumerate().step_by(3) {
                for &y in els.iter().skip(ix % 5).step_by(4) {
                    let g = [x, y, els[(ix + 1) % els.len()], els[(ix * 7 + 2) % els.len()]];
                    let det = g[0] * g[3] - g[1] * g[2];
                    if det.is_zero() {
                        continue;
                    }
                    let gb = g_bracket(n, g);
                    let up = sym_matrix(n, g);
                    let low = dual_sym_matrix(n, g);
                    assert_eq!(matmul(&t, &gb), matmul(&up, &t), "T at q={} m={m}", f.q());
                    let dm = det.pow(m as u128);
                    let lhs = matmul(&a, &gb);
                    let rhs: Vec<Vec<_>> = matmul(&low, &a)
                        .into_iter()
                        .map(|r| r.into_iter().map(|v| v * dm).collect())
                        .collect();
                    assert_eq!(lhs, rhs, "A at q={} m={m}", f.q());
                    let sim = matmul(&matmul(&transpose(&gb), &a), &gb);
                    let want: Vec<Vec<_>> =
                        a.iter().map(|r| r.iter().map(|&v| v * dm).collect()).collect();
                    assert_eq!(sim, want, "similitude at q={} m={m}", f.q());
                }
            }
        }
    }
}

#[test]
fn grid_is_consistent() {
    let fields: Vec<_> = [(5u64, 1u32), (7, 1), (11, 1), (13, 1), (5, 2)]
        .into_iter()
        .map(|(p, k)| make_field(p, k).unwrap())
        .collect();
    let grid = rep_check_grid(8, &fields, 6).unwrap();
    assert!(!grid.is_empty());
    for r in &grid {
        assert!(r.consistent(), "{r:?}");
    }
    assert!(grid.iter().any(|r| !r.cond1));
}
