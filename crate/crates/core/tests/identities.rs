//! Property tests for the algebraic identities behind the classification.

use std::sync::OnceLock;

use proptest::prelude::*;
use tcline::field_tower::{make_field, FieldCtx, FieldElem, Fq};
use tcline::klein::{g_bracket, twisted_cubic, Line};
use tcline::projective::{cross_ratio, pgl2_elements, points, Pgl2, ProjPoint};
use tcline::quartic::{quadratic_product, resultant_quadratics, Perm, QuarticForm};
use tcline::rep_theory::{a_matrix, dual_sym_matrix};
use tcline::linalg::{matmul, transpose};

const PRIMES: [u64; 3] = [5, 7, 13];

struct Fixture {
    field: &'static FieldCtx,
    lines: Vec<Line<'static>>,
    group: Vec<Pgl2<Fq<'static>>>,
}

fn fixture(i: usize) -> &'static Fixture {
    static CELLS: [OnceLock<Fixture>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CELLS[i].get_or_init(|| {
        let field: &'static FieldCtx = Box::leak(Box::new(make_field(PRIMES[i], 1).unwrap()));
        Fixture {
            field,
            lines: Line::all(field),
            group: pgl2_elements(field),
        }
    })
}

fn elem(f: &FieldCtx, raw: u64) -> Fq<'_> {
    f.elem(raw % f.q()).unwrap()
}

fn form(f: &FieldCtx, raw: [u64; 5]) -> Option<QuarticForm<'_>> {
    QuarticForm::new(raw.map(|r| elem(f, r))).ok()
}

fn gl2(f: &FieldCtx, raw: [u64; 4]) -> Option<Pgl2<Fq<'_>>> {
    let [a, b, c, d] = raw.map(|r| elem(f, r));
    Pgl2::new(a, b, c, d).ok()
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(256)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn invariant_weights(fi in 0..3usize, z in any::<[u64; 5]>(), g in any::<[u64; 4]>()) {
        let f = fixture(fi).field;
        let (Some(h), Some(g)) = (form(f, z), gl2(f, g)) else { return Ok(()) };
        // act_affine includes the det^-4 factor, so I and J pick up det^-4 and det^-6
        let d = g.det().inv().unwrap();
        let gh = h.act_affine(&g);
        prop_assert_eq!(gh.invariant_i(), d.pow(4) * h.invariant_i());
        prop_assert_eq!(gh.invariant_j(), d.pow(6) * h.invariant_j());
    }

    #[test]
    fn discriminant_identity(fi in 0..3usize, z in any::<[u64; 5]>()) {
        let f = fixture(fi).field;
        let Some(h) = form(f, z) else { return Ok(()) };
        let (i, j) = (h.invariant_i(), h.invariant_j());
        prop_assert_eq!(h.discriminant(), i * i * i - j * j);
        // a repeated root exists exactly on the discriminant locus
        let repeated = h.roots().roots.iter().any(|(_, m)| *m > 1);
        prop_assert_eq!(repeated, h.discriminant().is_zero());
    }

    #[test]
    fn projection_and_star_equivariance(fi in 0..3usize, li in any::<usize>(), gi in any::<usize>()) {
        let fx = fixture(fi);
        let l = &fx.lines[li % fx.lines.len()];
        let g = &fx.group[gi % fx.group.len()];
        prop_assert!(l.act(g).pi().same_projective(&l.pi().act(g)));
        prop_assert_eq!(l.act(g).hodge_star(), l.hodge_star().act(g));
        prop_assert_eq!(l.hodge_star().hodge_star(), *l);
        let z = l.z();
        prop_assert_eq!(z[5] * z[5], l.pi().invariant_i());
    }

    #[test]
    fn resultant_identity(fi in 0..3usize, r in any::<[u64; 4]>(), c in any::<[u64; 2]>()) {
        let f = fixture(fi).field;
        let pts = points(f);
        let idx = r.map(|x| (x % pts.len() as u64) as usize);
        let p: [ProjPoint<Fq<'_>>; 4] = idx.map(|i| pts[i]);
        let Ok(lambda) = cross_ratio(p) else { return Ok(()) };
        let (c1, c2) = (elem(f, c[0] % (f.q() - 1) + 1), elem(f, c[1] % (f.q() - 1) + 1));
        // (Y s - X t)(Y s' - X t') in coefficients of X^k Y^(2-k)
        let quad = |a: &ProjPoint<Fq<'static>>, b: &ProjPoint<Fq<'static>>, k: Fq<'static>| {
            [k * a.s() * b.s(), -k * (a.s() * b.t() + a.t() * b.s()), k * a.t() * b.t()]
        };
        let f1 = quad(&p[0], &p[1], c1);
        let f2 = quad(&p[2], &p[3], c2);
        let res = resultant_quadratics(f1, f2).unwrap();
        let prod = quadratic_product(f1, f2).unwrap();
        let o = f.one();
        prop_assert_eq!(f.int(36) * prod.invariant_i(), (lambda + o / lambda - o) * res);
    }

    #[test]
    fn similitude_and_veronese(fi in 0..3usize, m in 1usize..7, g in any::<[u64; 4]>(), v in any::<[u64; 2]>()) {
        let f = fixture(fi).field;
        if m as u64 + 2 > f.q() { return Ok(()) }
        let Some(g) = gl2(f, g) else { return Ok(()) };
        let e = g.entries();
        let gb = g_bracket(m, e);
        let a = a_matrix(m as u32, f);
        let dm = g.det().pow(m as u128);
        let lhs = matmul(&a, &gb);
        let rhs: Vec<Vec<_>> = matmul(&dual_sym_matrix(m, e), &a)
            .into_iter()
            .map(|r| r.into_iter().map(|x| x * dm).collect())
            .collect();
        prop_assert_eq!(&lhs, &rhs);
        let sim = matmul(&matmul(&transpose(&gb), &a), &gb);
        let want: Vec<Vec<_>> = a.iter().map(|r| r.iter().map(|&x| x * dm).collect()).collect();
        prop_assert_eq!(sim, want);
        let (s, t) = (elem(f, v[0]), elem(f, v[1]));
        let nu = |s: Fq<'static>, t: Fq<'static>| -> Vec<Fq<'static>> {
            (0..=m).map(|i| s.pow((m - i) as u128) * t.pow(i as u128)).collect()
        };
        let (gs, gt) = (e[0] * s + e[1] * t, e[2] * s + e[3] * t);
        let image: Vec<_> = (0..=m)
            .map(|i| (0..=m).fold(f.zero(), |acc, j| acc + gb[i][j] * nu(s, t)[j]))
            .collect();
        prop_assert_eq!(nu(gs, gt), image);
        if m == 3 {
            prop_assert_eq!(twisted_cubic(s, t).to_vec(), nu(s, t));
        }
    }
}

/// The permutation a stabilizer element induces on the roots of `pi(L)`.
fn root_permutation<'a>(h: &QuarticForm<'a>, g: &Pgl2<Fq<'a>>) -> Perm {
    let rm = h.roots();
    let roots: Vec<_> = rm.roots.iter().map(|(p, _)| *p).collect();
    let ge = g.embed(rm.ext);
    let img: Vec<usize> = roots
        .iter()
        .map(|r| roots.iter().position(|x| *x == ge.act(r)).expect("stabilizer permutes roots"))
        .collect();
    Perm([img[0], img[1], img[2], img[3]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn swap_iff_odd_permutation(fi in 0..3usize, li in any::<usize>()) {
        let fx = fixture(fi);
        let n = fx.lines.len();
        // walk to the next generic, non-self-dual line
        let Some(l) = (0..n)
            .map(|k| &fx.lines[(li + k) % n])
            .find(|l| l.is_generic() && !l.is_self_dual())
        else { return Ok(()) };
        let h = l.pi().normalized();
        let perp = l.hodge_star();
        for g in h.stabilizer().unwrap().elements {
            let gl = l.act(&g);
            prop_assert!(gl == *l || gl == perp);
            let sign = root_permutation(&h, &g).sign();
            prop_assert_eq!(gl == perp, sign == -1, "g={}", g);
        }
    }
}

#[test]
fn z5_squared_is_i_exhaustive() {
    let fx = fixture(0);
    for l in &fx.lines {
        let z = l.z();
        assert_eq!(z[5] * z[5], l.pi().invariant_i(), "{l}");
    }
}

#[test]
fn meets_tangent_exhaustive() {
    let fx = fixture(0);
    let pts = points(fx.field);
    for l in &fx.lines {
        let pi = l.pi();
        for x in &pts {
            assert_eq!(l.meets_tangent(x.s(), x.t()), pi.eval(x.s(), x.t()).is_zero());
        }
    }
}
