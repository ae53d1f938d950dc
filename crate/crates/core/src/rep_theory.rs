//! The representations `D_m V`, `Sym^m V` and `Sym^m(V*)` of `GL2(q)`:
//! the pairing matrix `A_m`, the binomial diagonal `T_m`, and brute-force
//! checks that five characterizations of "all binomials `C(m,i)` nonzero"
//! agree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field_tower::{FieldCtx, FieldElem, Fq};
use crate::klein::g_bracket;
use crate::linalg;

type Mat<'a> = Vec<Vec<Fq<'a>>>;

fn binom_mod(m: u64, i: u64, f: &FieldCtx) -> Fq<'_> {
    // Lucas: product of digit binomials
    let p = f.p();
    let (mut a, mut b) = (m, i);
    let mut out = f.one();
    while a > 0 || b > 0 {
        let (x, y) = (a % p, b % p);
        if y > x {
            return f.zero();
        }
        let c = (0..y).fold(1u128, |acc, k| acc * (x - k) as u128 / (k + 1) as u128);
        out = out * f.int((c % p as u128) as i64);
        a /= p;
        b /= p;
    }
    out
}

fn require_assumption(m: u32, f: &FieldCtx) -> Result<()> {
    if m == 0 || m as u64 + 2 > f.q() {
        return Err(Error::AssumptionViolated { m, q: f.q() });
    }
    Ok(())
}

/// The anti-diagonal matrix with `(A_m)[i][m-i] = (-1)^i C(m,i)`.
pub fn a_matrix(m: u32, f: &FieldCtx) -> Mat<'_> {
    let n = m as usize + 1;
    let mut a = vec![vec![f.zero(); n]; n];
    for i in 0..n {
        let c = binom_mod(m as u64, i as u64, f);
        a[i][n - 1 - i] = if i % 2 == 0 { c } else { -c };
    }
    a
}

/// The diagonal matrix `diag(C(m,0), .., C(m,m))`.
pub fn t_matrix(m: u32, f: &FieldCtx) -> Mat<'_> {
    let n = m as usize + 1;
    let mut t = vec![vec![f.zero(); n]; n];
    for (i, row) in t.iter_mut().enumerate() {
        row[i] = binom_mod(m as u64, i as u64, f);
    }
    t
}

/// Action of `g` on `Sym^m V`: entry `(i, j)` is the coefficient of
/// `e1^(m-i) e2^i` in `(a e1 + c e2)^(m-j) (b e1 + d e2)^j`.
pub fn sym_matrix<E: FieldElem>(m: usize, g: [E; 4]) -> Vec<Vec<E>> {
    let [a, b, c, d] = g;
    let t = g_bracket(m, [a, c, b, d]);
    linalg::transpose(&t)
}

/// Action of `g` on binary forms of degree `m` in the basis
/// `X^(m-i) Y^i`: `f -> det^(-m) f(dX - bY, aY - cX)`.
pub fn dual_sym_matrix<E: FieldElem>(m: usize, g: [E; 4]) -> Vec<Vec<E>> {
    let [a, b, c, d] = g;
    let det = a * d - b * c;
    let scale = det.inv().expect("invertible").pow(m as u128);
    // X -> dX - bY, Y -> -cX + aY; column j is the image of X^(m-j) Y^j
    let t = g_bracket(m, [d, -b, -c, a]);
    let mut out = linalg::transpose(&t);
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = *x * scale;
        }
    }
    out
}

/// The generating set `diag(1, gamma)`, the swap, and `[[1,0],[1,1]]`.
pub fn gl2_generators(f: &FieldCtx) -> Vec<[Fq<'_>; 4]> {
    let (z, o) = (f.zero(), f.one());
    vec![[o, z, z, f.generator()], [z, o, o, z], [o, z, o, o]]
}

/// Whether every `C(m,i)` is nonzero in the field.
pub fn binomials_nonzero(m: u32, f: &FieldCtx) -> Result<bool> {
    require_assumption(m, f)?;
    Ok((0..=m as u64).all(|i| !binom_mod(m as u64, i, f).is_zero()))
}

/// With `m + 1 = p^a b` and `p` not dividing `b`: whether `b < p`.
pub fn condition_arith(m: u32, p: u64) -> bool {
    let mut b = m as u64 + 1;
    while b % p == 0 {
        b /= p;
    }
    b < p
}

/// Dimension of the common intersection of the osculating hyperplanes of
/// `C_m`, as the kernel of `A_m`.
pub fn osculating_intersection_dim(m: u32, f: &FieldCtx) -> Result<usize> {
    require_assumption(m, f)?;
    Ok(m as usize + 1 - linalg::rank(&a_matrix(m, f)))
}

/// The same dimension computed from the hyperplanes themselves:
/// `A_m nu_m(s,t)` over all `(s,t)` in `P^1(F_q)`.
pub fn osculating_intersection_direct(m: u32, f: &FieldCtx) -> Result<usize> {
    require_assumption(m, f)?;
    let a = a_matrix(m, f);
    let n = m as usize + 1;
    let mut rows = vec![];
    let mut pts = vec![(f.zero(), f.one())];
    pts.extend(f.elements().map(|t| (f.one(), t)));
    for (s, t) in pts {
        let v: Vec<Fq<'_>> = (0..n).map(|i| s.pow((n - 1 - i) as u128) * t.pow(i as u128)).collect();
        rows.push((0..n).map(|i| (0..n).fold(f.zero(), |acc, j| acc + a[i][j] * v[j])).collect());
    }
    Ok(n - linalg::rank(&rows))
}

fn coordinate_invariant(mats: &[Mat<'_>], subset: u32, n: usize) -> bool {
    mats.iter().all(|m| {
        (0..n).filter(|j| subset >> j & 1 == 1).all(|j| {
            (0..n).all(|i| subset >> i & 1 == 1 || m[i][j].is_zero())
        })
    })
}

/// Whether `D_m V` is irreducible, decided over the proper coordinate
/// subspaces; the echelon argument reduces any invariant subspace to one of
/// these.
pub fn is_irreducible_dmv(m: u32, f: &FieldCtx) -> Result<bool> {
    require_assumption(m, f)?;
    let n = m as usize + 1;
    let mats: Vec<Mat<'_>> = gl2_generators(f).into_iter().map(|g| g_bracket(n - 1, g)).collect();
    let full = (1u32 << n) - 1;
    Ok(!(1..full).any(|s| coordinate_invariant(&mats, s, n)))
}

/// Samples `count` random proper subspaces of `D_m V` and returns how many
/// are invariant. Used to back the coordinate-subspace reduction.
pub fn random_invariant_subspaces(m: u32, f: &FieldCtx, count: usize, seed: u64) -> Result<usize> {
    require_assumption(m, f)?;
    let n = m as usize + 1;
    let mats: Vec<Mat<'_>> = gl2_generators(f).into_iter().map(|g| g_bracket(n - 1, g)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = f.q();
    let mut hits = 0;
    for _ in 0..count {
        let r = rng.gen_range(1..n);
        let mut basis: Mat<'_> = (0..r)
            .map(|_| (0..n).map(|_| f.elem(rng.gen_range(0..q)).unwrap()).collect())
            .collect();
        let rank = linalg::rank(&basis);
        if rank == 0 || rank == n {
            continue;
        }
        linalg::rref(&mut basis);
        basis.truncate(rank);
        let invariant = mats.iter().all(|g| {
            let mut stacked = basis.clone();
            for v in &basis {
                stacked.push((0..n).map(|i| (0..n).fold(f.zero(), |acc, j| acc + g[i][j] * v[j])).collect());
            }
            linalg::rank(&stacked) == rank
        });
        if invariant {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Which intertwining equation [`hom_space_dim`] solves.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HomVariant {
    /// `(g^[m])^t X g^[m] = det(g)^m X`.
    A,
    /// `X g^[m] = g^m X`.
    T,
}

/// Dimension of the space of intertwiners, with a spanning vector.
pub fn hom_space(m: u32, f: &FieldCtx, variant: HomVariant) -> Result<Vec<Mat<'_>>> {
    require_assumption(m, f)?;
    let n = m as usize + 1;
    let idx = |i: usize, j: usize| i * n + j;
    let mut rows: Vec<Vec<Fq<'_>>> = Vec::new();
    for g in gl2_generators(f) {
        let gb = g_bracket(n - 1, g);
        let det = g[0] * g[3] - g[1] * g[2];
        match variant {
            HomVariant::A => {
                let dm = det.pow(m as u128);
                for i in 0..n {
                    for j in 0..n {
                        let mut row = vec![f.zero(); n * n];
                        for k in 0..n {
                            for l in 0..n {
                                row[idx(k, l)] = row[idx(k, l)] + gb[k][i] * gb[l][j];
                            }
                        }
                        row[idx(i, j)] = row[idx(i, j)] - dm;
                        rows.push(row);
                    }
                }
            }
            HomVariant::T => {
                let h = sym_matrix(n - 1, g);
                for i in 0..n {
                    for j in 0..n {
                        let mut row = vec![f.zero(); n * n];
                        for k in 0..n {
                            row[idx(i, k)] = row[idx(i, k)] + gb[k][j];
                            row[idx(k, j)] = row[idx(k, j)] - h[i][k];
                        }
                        rows.push(row);
                    }
                }
            }
        }
    }
    let ker = linalg::kernel(&rows, n * n, f.zero());
    Ok(ker
        .into_iter()
        .map(|v| v.chunks(n).map(|r| r.to_vec()).collect())
        .collect())
}

pub fn hom_space_dim(m: u32, f: &FieldCtx, variant: HomVariant) -> Result<usize> {
    Ok(hom_space(m, f, variant)?.len())
}

fn proportional(a: &Mat<'_>, b: &Mat<'_>) -> bool {
    let flat_a: Vec<_> = a.iter().flatten().copied().collect();
    let flat_b: Vec<_> = b.iter().flatten().copied().collect();
    let Some(k) = flat_a.iter().position(|x| !x.is_zero()) else {
        return flat_b.iter().all(|x| x.is_zero());
    };
    if flat_b[k].is_zero() {
        return false;
    }
    let c = flat_b[k] / flat_a[k];
    flat_a.iter().zip(&flat_b).all(|(x, y)| *x * c == *y)
}

/// One grid point of the equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepCheckResult {
    pub m: u32,
    pub q: u64,
    /// Binomials nonzero.
    pub cond1: bool,
    /// `b < p` for `m + 1 = p^a b`.
    pub cond2: bool,
    /// Osculating hyperplanes meet trivially.
    pub cond3: bool,
    /// `D_m V` irreducible.
    pub cond4: bool,
    /// `A_m` and `T_m` invertible, so the three modules are isomorphic.
    pub cond5: bool,
    pub osculating_kernel_dim: usize,
    pub osculating_direct_dim: usize,
    /// Random subspaces found invariant although the coordinate scan says
    /// irreducible.
    pub spot_contradictions: usize,
    /// Dimensions of the two intertwiner spaces, when computed.
    pub dim_a: Option<usize>,
    pub dim_t: Option<usize>,
    /// Whether the intertwiner spaces are spanned by `A_m` and `T_m`.
    pub spanned_by_a: Option<bool>,
    pub spanned_by_t: Option<bool>,
}

impl RepCheckResult {
    /// True when the five conditions agree and every cross-check holds.
    pub fn consistent(&self) -> bool {
        let c = [self.cond2, self.cond3, self.cond4, self.cond5];
        c.iter().all(|&x| x == self.cond1)
            && self.osculating_kernel_dim == self.osculating_direct_dim
            && self.spot_contradictions == 0
            && self.dim_a.map_or(true, |d| d == 1)
            && self.dim_t.map_or(true, |d| d == 1)
            && self.spanned_by_a != Some(false)
            && self.spanned_by_t != Some(false)
    }
}

/// Evaluates every condition at `(m, q)`; intertwiner spaces are solved when
/// `m <= hom_max`.
pub fn rep_check(m: u32, f: &FieldCtx, hom_max: u32) -> Result<RepCheckResult> {
    let cond1 = binomials_nonzero(m, f)?;
    let cond2 = condition_arith(m, f.p());
    let kd = osculating_intersection_dim(m, f)?;
    let dd = osculating_intersection_direct(m, f)?;
    let cond4 = is_irreducible_dmv(m, f)?;
    let n = m as usize + 1;
    let cond5 = linalg::rank(&a_matrix(m, f)) == n && linalg::rank(&t_matrix(m, f)) == n;
    let spot = if cond4 {
        random_invariant_subspaces(m, f, 200, 0x7c1e ^ (m as u64) ^ (f.q() << 8))?
    } else {
        0
    };
    let (mut dim_a, mut dim_t, mut sa, mut st) = (None, None, None, None);
    if m <= hom_max {
        let ha = hom_space(m, f, HomVariant::A)?;
        let ht = hom_space(m, f, HomVariant::T)?;
        dim_a = Some(ha.len());
        dim_t = Some(ht.len());
        if ha.len() == 1 {
            sa = Some(proportional(&a_matrix(m, f), &ha[0]));
        }
        if ht.len() == 1 {
            st = Some(proportional(&t_matrix(m, f), &ht[0]));
        }
    }
    Ok(RepCheckResult {
        m,
        q: f.q(),
        cond1,
        cond2,
        cond3: kd == 0,
        cond4,
        cond5,
        osculating_kernel_dim: kd,
        osculating_direct_dim: dd,
        spot_contradictions: spot,
        dim_a,
        dim_t,
        spanned_by_a: sa,
        spanned_by_t: st,
    })
}

/// The grid over `1 <= m <= m_max` for each field, skipping `m + 2 > q`.
pub fn rep_check_grid(m_max: u32, fields: &[FieldCtx], hom_max: u32) -> Result<Vec<RepCheckResult>> {
    let mut out = Vec::new();
    for f in fields {
        for m in 1..=m_max {
            if m as u64 + 2 > f.q() {
                continue;
            }
            out.push(rep_check(m, f, hom_max)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::make_field;

    #[test]
    fn binomial_examples() {
        let f5 = make_field(5, 1).unwrap();
        let f49 = make_field(7, 2).unwrap();
        assert!(binomials_nonzero(3, &f5).unwrap());
        assert!(binomials_nonzero(6, &f49).unwrap());
        assert!(!binomials_nonzero(7, &f49).unwrap());
        assert!(condition_arith(4, 5));
        assert!(!condition_arith(5, 5));
        assert!(matches!(
            binomials_nonzero(4, &f5),
            Err(Error::AssumptionViolated { m: 4, q: 5 })
        ));
    }

    #[test]
    fn t_matrix_diagonal() {
        let f = make_field(7, 1).unwrap();
        let t = t_matrix(4, &f);
        let want = [1, 4, 6, 4, 1].map(|x| f.int(x));
        for i in 0..5 {
            assert_eq!(t[i][i], want[i]);
        }
    }

    #[test]
    fn a_matrix_symmetry() {
        let f = make_field(13, 1).unwrap();
        for m in 1..=6u32 {
            let a = a_matrix(m, &f);
            let at = linalg::transpose(&a);
            let sign = if m % 2 == 0 { f.one() } else { -f.one() };
            for i in 0..=m as usize {
                for j in 0..=m as usize {
                    assert_eq!(at[i][j], sign * a[i][j]);
                }
            }
        }
    }
}
