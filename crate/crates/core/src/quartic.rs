//! Binary quartic and cubic forms over `F_q`: invariants, the `PGL2`
//! action, roots, orbit labels, stabilizers and canonical representatives.
//!
//! A quartic is stored by `z = (z0, .., z4)` with
//! `f = z0 Y^4 - 4 z1 Y^3 X + 6 z2 Y^2 X^2 - 4 z3 Y X^3 + z4 X^4`.
//! Its "plain" coefficients `a_k` are those of `X^k Y^(4-k)`, so
//! `a = (z0, -4 z1, 6 z2, -4 z3, z4)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field_tower::{Ext, ExtCtx, FieldCtx, FieldElem, Fq};
use crate::linalg;
use crate::poly::Poly;
use crate::projective::{cross_ratio, j_of_lambda, pgl2_elements_like, Pgl2, ProjPoint};

// ---------------------------------------------------------------------------
// Homogeneous binary forms as coefficient vectors in powers of X.

/// Product of binary forms given by coefficients of `X^k Y^(n-k)`.
pub(crate) fn bmul<E: FieldElem>(a: &[E], b: &[E]) -> Vec<E> {
    let mut out = vec![a[0].zero_like(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

fn badd<E: FieldElem>(a: &[E], b: &[E]) -> Vec<E> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

fn bscale<E: FieldElem>(a: &[E], s: E) -> Vec<E> {
    a.iter().map(|&x| x * s).collect()
}

/// `f(X', Y')` for `X' = lx`, `Y' = ly` linear forms.
fn substitute<E: FieldElem>(c: &[E], lx: [E; 2], ly: [E; 2]) -> Vec<E> {
    let n = c.len() - 1;
    let z = c[0].zero_like();
    let mut out = vec![z; n + 1];
    for (k, &ck) in c.iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        let mut term = vec![ck];
        for _ in 0..k {
            term = bmul(&term, &lx);
        }
        for _ in 0..(n - k) {
            term = bmul(&term, &ly);
        }
        out = badd(&out, &term);
    }
    out
}

fn check_char(x: Fq<'_>) -> Result<()> {
    match x.p() {
        2 | 3 => Err(Error::UnsupportedCharacteristic(x.p())),
        _ => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// Quartic forms.

/// A binary quartic in the `(1, -4, 6, -4, 1)` convention.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QuarticForm<'a> {
    z: [Fq<'a>; 5],
}

impl<'a> QuarticForm<'a> {
    /// From `z`-coordinates. Characteristic 2 and 3 are rejected since the
    /// coefficient convention divides by 4 and 6.
    pub fn new(z: [Fq<'a>; 5]) -> Result<Self> {
        check_char(z[0])?;
        if z.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroInput);
        }
        Ok(QuarticForm { z })
    }

    /// From plain coefficients `a_k` of `X^k Y^(4-k)`.
    pub fn from_plain(a: [Fq<'a>; 5]) -> Result<Self> {
        check_char(a[0])?;
        let i4 = a[0].int_like(4).inv().unwrap();
        let i6 = a[0].int_like(6).inv().unwrap();
        Self::new([a[0], -a[1] * i4, a[2] * i6, -a[3] * i4, a[4]])
    }

    /// From canonical encodings of `z0..z4`.
    pub fn from_encodings(f: &'a FieldCtx, z: [u64; 5]) -> Result<Self> {
        let mut v = [f.zero(); 5];
        for (slot, &n) in v.iter_mut().zip(&z) {
            *slot = f.elem(n)?;
        }
        Self::new(v)
    }

    pub fn z(&self) -> [Fq<'a>; 5] {
        self.z
    }

    /// Plain coefficients `a_k` of `X^k Y^(4-k)`.
    pub fn plain(&self) -> [Fq<'a>; 5] {
        let z = self.z;
        let s = |n: i64| z[0].int_like(n);
        [z[0], s(-4) * z[1], s(6) * z[2], s(-4) * z[3], z[4]]
    }

    pub fn sample(&self) -> Fq<'a> {
        self.z[0]
    }

    /// Scaled so the first nonzero coordinate is 1.
    pub fn normalized(&self) -> Self {
        let lead = self.z.iter().find(|x| !x.is_zero()).unwrap();
        let inv = lead.inv().unwrap();
        QuarticForm {
            z: self.z.map(|x| x * inv),
        }
    }

    /// Equality as points of projective space.
    pub fn same_projective(&self, o: &Self) -> bool {
        self.normalized() == o.normalized()
    }

    pub fn scale(&self, c: Fq<'a>) -> Result<Self> {
        Self::new(self.z.map(|x| x * c))
    }

    /// `(z0 z4 - 4 z1 z3 + 3 z2^2) / 3`.
    pub fn invariant_i(&self) -> Fq<'a> {
        let [z0, z1, z2, z3, z4] = self.z;
        let s = |n: i64| z0.int_like(n);
        (z0 * z4 - s(4) * z1 * z3 + s(3) * z2 * z2) / s(3)
    }

    /// Determinant of the catalecticant `[[z0,z1,z2],[z1,z2,z3],[z2,z3,z4]]`.
    pub fn invariant_j(&self) -> Fq<'a> {
        let [z0, z1, z2, z3, z4] = self.z;
        z0 * (z2 * z4 - z3 * z3) - z1 * (z1 * z4 - z2 * z3) + z2 * (z1 * z3 - z2 * z2)
    }

    /// `I^3 - J^2`.
    pub fn discriminant(&self) -> Fq<'a> {
        let i = self.invariant_i();
        let j = self.invariant_j();
        i * i * i - j * j
    }

    /// `1728 I^3 / (I^3 - J^2)`.
    pub fn j_invariant(&self) -> Result<Fq<'a>> {
        let d = self.discriminant();
        if d.is_zero() {
            return Err(Error::DiscriminantZero);
        }
        let i = self.invariant_i();
        Ok(d.int_like(1728) * i * i * i / d)
    }

    /// `det(g)^-4 f(dX - bY, aY - cX)`, without projective normalization.
    pub fn act_affine(&self, g: &Pgl2<Fq<'a>>) -> Self {
        let [a, b, c, d] = g.entries();
        let img = substitute(&self.plain(), [-b, d], [a, -c]);
        let dinv = g.det().inv().unwrap();
        let w = dinv * dinv * dinv * dinv;
        let arr: [Fq<'a>; 5] = std::array::from_fn(|k| img[k] * w);
        Self::from_plain(arr).expect("action preserves nonzero forms")
    }

    /// Projective action, normalized.
    pub fn act(&self, g: &Pgl2<Fq<'a>>) -> Self {
        let [a, b, c, d] = g.entries();
        let img = substitute(&self.plain(), [-b, d], [a, -c]);
        let arr: [Fq<'a>; 5] = std::array::from_fn(|k| img[k]);
        Self::from_plain(arr)
            .expect("action preserves nonzero forms")
            .normalized()
    }

    pub fn eval(&self, s: Fq<'a>, t: Fq<'a>) -> Fq<'a> {
        let a = self.plain();
        let mut acc = s.zero_like();
        let mut xp = s.one_like();
        for (k, &ak) in a.iter().enumerate() {
            acc += ak * xp * t.pow(4 - k as u128);
            xp *= s;
        }
        acc
    }

    /// `f(1, u)` as a polynomial in `u`.
    pub fn dehomogenize(&self) -> Poly<Fq<'a>> {
        let a = self.plain();
        Poly::new((0..5).map(|i| a[4 - i]).collect())
    }

    fn pattern(&self) -> Pattern<'a> {
        let g = self.dehomogenize();
        let mut rational = Vec::new();
        let mut residual = g.clone();
        for (r, m) in g.roots() {
            rational.push((ProjPoint::affine(r), m));
            let lin = Poly::new(vec![-r, r.one_like()]);
            for _ in 0..m {
                residual = residual.divrem(&lin).0;
            }
        }
        let deg = g.degree().unwrap_or(0);
        if deg < 4 {
            rational.push((ProjPoint::infinity(self.sample()), 4 - deg));
        }
        Pattern {
            rational,
            residual: residual.monic(),
        }
    }

    /// Degree of the splitting field over `F_q`.
    pub fn splitting_degree(&self) -> usize {
        let p = self.pattern();
        match p.residual.degree().unwrap_or(0) {
            0 => 1,
            2 => 2,
            3 => 3,
            _ => {
                if p.residual_splits_quadratically() {
                    2
                } else {
                    4
                }
            }
        }
    }

    /// All projective roots over the splitting field, with multiplicities.
    pub fn roots(&self) -> RootMultiset<'a> {
        let d = self.splitting_degree();
        let ext = self.sample().tower(d);
        let g = self.dehomogenize();
        let ge = Poly::new(g.coeffs().iter().map(|&c| ext.embed(c)).collect());
        let mut roots: Vec<(ProjPoint<Ext<'a>>, usize)> = ge
            .roots()
            .into_iter()
            .map(|(r, m)| (ProjPoint::affine(r), m))
            .collect();
        let deg = g.degree().unwrap_or(0);
        if deg < 4 {
            roots.push((ProjPoint::infinity(ext.zero()), 4 - deg));
        }
        roots.sort_by_key(|(p, _)| p.encode());
        RootMultiset { ext, roots }
    }

    /// Restricted ordering of the four distinct roots and the permutation
    /// induced by Frobenius.
    pub fn restricted_ordering(&self) -> Result<RestrictedOrdering<'a>> {
        if self.discriminant().is_zero() {
            return Err(Error::DiscriminantZero);
        }
        let kind = self.kind_nonsingular();
        let rm = self.roots();
        let ext = rm.ext;
        let all: Vec<ProjPoint<Ext<'a>>> = rm.roots.iter().map(|(p, _)| *p).collect();
        let frob = |p: &ProjPoint<Ext<'a>>| frob_point(p);
        let rational: Vec<_> = all.iter().copied().filter(|p| frob(p) == *p).collect();
        let irr: Vec<_> = all.iter().copied().filter(|p| frob(p) != *p).collect();
        let (roots, sigma) = match kind {
            QuarticType::F4 => ([all[0], all[1], all[2], all[3]], Perm::ID),
            QuarticType::F4Prime => {
                let r1 = all[0];
                let r2 = frob(&r1);
                let rest: Vec<_> = all.iter().copied().filter(|p| *p != r1 && *p != r2).collect();
                let r3 = rest[0];
                ([r1, r2, r3, frob(&r3)], Perm([1, 0, 3, 2]))
            }
            QuarticType::F2 => {
                let r3 = irr[0];
                ([rational[0], rational[1], r3, frob(&r3)], Perm([0, 1, 3, 2]))
            }
            QuarticType::F2Prime => {
                let r1 = all[0];
                let p1 = frob(&r1);
                let p2 = frob(&p1);
                let p3 = frob(&p2);
                ([r1, p2, p1, p3], Perm([2, 3, 1, 0]))
            }
            QuarticType::F1 => {
                let r2 = irr[0];
                let p1 = frob(&r2);
                ([rational[0], r2, p1, frob(&p1)], Perm([0, 2, 3, 1]))
            }
            QuarticType::F0 => unreachable!(),
        };
        Ok(RestrictedOrdering {
            ext,
            roots,
            sigma,
            kind,
        })
    }

    /// The cross-ratio of the restricted ordering and its orbit under the
    /// reorderings that keep the ordering restricted.
    pub fn lambda_class(&self) -> Result<LambdaClass<'a>> {
        let ro = self.restricted_ordering()?;
        let lambda = cross_ratio(ro.roots)?;
        let mut orbit: Vec<Ext<'a>> = Vec::new();
        for pi in Perm::all() {
            if pi.compose(&ro.sigma) != ro.sigma.compose(&pi) {
                continue;
            }
            let r = ro.roots;
            let l = cross_ratio([r[pi.0[0]], r[pi.0[1]], r[pi.0[2]], r[pi.0[3]]])?;
            if !orbit.contains(&l) {
                orbit.push(l);
            }
        }
        orbit.sort_by_key(|x| x.encode());
        Ok(LambdaClass { lambda, orbit })
    }

    /// Type from the factorization pattern, assuming nonzero discriminant.
    fn kind_nonsingular(&self) -> QuarticType {
        let p = self.pattern();
        match p.rational.len() {
            4 => QuarticType::F4,
            2 => QuarticType::F2,
            1 => QuarticType::F1,
            _ => {
                if p.residual_splits_quadratically() {
                    QuarticType::F4Prime
                } else {
                    QuarticType::F2Prime
                }
            }
        }
    }

    /// Splitting type; `F0` for discriminant zero.
    pub fn kind(&self) -> QuarticType {
        if self.discriminant().is_zero() {
            QuarticType::F0
        } else {
            self.kind_nonsingular()
        }
    }

    fn degenerate_label(&self) -> u8 {
        let p = self.pattern();
        let mut m: Vec<usize> = p.rational.iter().map(|(_, m)| *m).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        match (m.as_slice(), p.residual.degree().unwrap_or(0)) {
            ([4], _) => 1,
            ([3, 1], _) => 2,
            ([2, 2], _) => 3,
            ([], 4) => 4,
            ([2, 1, 1], _) => 5,
            ([2], 2) => 6,
            other => unreachable!("pattern {other:?} has nonzero discriminant"),
        }
    }

    /// Orbit label without the stabilizer scan; cheap enough to apply to
    /// every form in a census.
    pub fn orbit_label(&self) -> Result<(QuarticType, QuarticLabel)> {
        let s = self.sample();
        require_classifiable(s)?;
        if self.discriminant().is_zero() {
            return Ok((QuarticType::F0, QuarticLabel::Degenerate(self.degenerate_label())));
        }
        let kind = self.kind_nonsingular();
        let j = self.j_invariant()?;
        let is1728 = j == s.int_like(1728);
        let label = match kind {
            QuarticType::F4Prime => QuarticLabel::PsiPrime(self.f4prime_lambda().value()),
            QuarticType::F2Prime => QuarticLabel::UpsPrime(j.value()),
            _ if j.is_zero() => match kind {
                QuarticType::F1 => {
                    let c = s.int_like(16) * self.invariant_j();
                    QuarticLabel::CubeTwist((c.log().unwrap() % 3) as u8)
                }
                _ => QuarticLabel::Cusp,
            },
            QuarticType::F4 if is1728 => QuarticLabel::Psi1728,
            QuarticType::F2 if is1728 => QuarticLabel::Ups0,
            _ => QuarticLabel::E(j.value()),
        };
        Ok((kind, label))
    }

    /// `min(lambda, 1/lambda)` for a form of type F4'.
    fn f4prime_lambda(&self) -> Fq<'a> {
        let ext = self.sample().tower(2);
        let r = Poly::new(self.pattern().residual.coeffs().iter().map(|&c| ext.embed(c)).collect());
        let roots = r.distinct_roots();
        let r1 = roots[0];
        let r2 = r1.frobenius();
        let r3 = *roots.iter().find(|x| **x != r1 && **x != r2).unwrap();
        let pts = [r1, r2, r3, r3.frobenius()].map(ProjPoint::affine);
        let l = cross_ratio(pts).unwrap().to_base().expect("lambda in F_q");
        let li = l.inv().unwrap();
        if li.value() < l.value() {
            li
        } else {
            l
        }
    }

    /// Full classification including the exhaustive stabilizer scan.
    pub fn classify(&self) -> Result<QuarticClass> {
        let (kind, label) = self.orbit_label()?;
        let s = self.sample();
        let q = s.q();
        let group = q * q * q - q;
        let disc = self.discriminant();
        let i = self.invariant_i();
        if kind == QuarticType::F0 {
            let QuarticLabel::Degenerate(n) = label else {
                unreachable!()
            };
            let size = degenerate_orbit_size(n, q);
            return Ok(QuarticClass {
                label,
                kind,
                j: None,
                i_square: i.is_square(),
                discriminant: disc.value(),
                stabilizer_order: group / size,
                stabilizer: None,
                orbit_size: size,
            });
        }
        let stab = self.stabilizer()?;
        let order = stab.elements.len() as u64;
        Ok(QuarticClass {
            label,
            kind,
            j: Some(self.j_invariant()?.value()),
            i_square: i.is_square(),
            discriminant: disc.value(),
            stabilizer_order: order,
            stabilizer: Some(stab.label),
            orbit_size: group / order,
        })
    }

    /// `{g : g.f = f}` by exhaustive scan of `PGL2(q)`.
    pub fn stabilizer(&self) -> Result<Stabilizer<'a>> {
        if self.discriminant().is_zero() {
            return Err(Error::DiscriminantZero);
        }
        let me = self.normalized();
        let elements: Vec<_> = pgl2_elements_like(self.sample())
            .into_iter()
            .filter(|g| me.act(g) == me)
            .collect();
        let label = StabLabel::identify(&elements);
        Ok(Stabilizer { elements, label })
    }

    /// The resolvent cubic `-4Y^3 + 3 I Y X^2 - J X^3`.
    pub fn resolvent(&self) -> Result<CubicForm<'a>> {
        if self.discriminant().is_zero() {
            return Err(Error::DiscriminantZero);
        }
        let s = self.sample();
        CubicForm::new([s.int_like(-4), s.zero_like(), self.invariant_i(), self.invariant_j()])
    }

    /// Rank of the normalized coordinate tuple in lexicographic order of
    /// encodings. Ranks run over `0 .. (q^5 - 1)/(q - 1)`.
    pub fn index(&self) -> u64 {
        let n = self.normalized();
        let q = self.sample().q();
        let first = n.z.iter().position(|x| !x.is_zero()).unwrap();
        let offset = (q.pow(4 - first as u32) - 1) / (q - 1);
        let mut v = 0u64;
        for x in &n.z[first + 1..] {
            v = v * q + x.value() as u64;
        }
        offset + v
    }

    /// Inverse of [`QuarticForm::index`].
    pub fn from_index(sample: Fq<'a>, idx: u64) -> Self {
        let q = sample.q();
        let mut first = 4;
        while first > 0 && idx >= (q.pow(4 - first as u32 + 1) - 1) / (q - 1) {
            first -= 1;
        }
        let offset = (q.pow(4 - first as u32) - 1) / (q - 1);
        let mut v = idx - offset;
        let mut z = [sample.zero_like(); 5];
        z[first] = sample.one_like();
        for k in (first + 1..5).rev() {
            z[k] = sample.decode_like((v % q) as u128);
            v /= q;
        }
        QuarticForm { z }
    }

    /// Number of projective quartics, `(q^5 - 1)/(q - 1)`.
    pub fn count(q: u64) -> u64 {
        (q.pow(5) - 1) / (q - 1)
    }
}

impl fmt::Display for QuarticForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.z;
        write!(f, "({},{},{},{},{})", z[0], z[1], z[2], z[3], z[4])
    }
}

fn require_classifiable(s: Fq<'_>) -> Result<()> {
    check_char(s)?;
    if s.q() <= 4 {
        return Err(Error::FieldTooSmall(s.q()));
    }
    Ok(())
}

struct Pattern<'a> {
    rational: Vec<(ProjPoint<Fq<'a>>, usize)>,
    residual: Poly<Fq<'a>>,
}

impl<'a> Pattern<'a> {
    /// True if the residual factor has a root in `F_{q^2}`.
    fn residual_splits_quadratically(&self) -> bool {
        let r = &self.residual;
        let s = r.coeffs()[0];
        let q = s.field_size();
        let x = Poly::x(s);
        let xq2 = x.powmod(q * q, r);
        xq2.sub(&x).gcd(r).degree().unwrap_or(0) > 0
    }
}

fn frob_point<'a>(p: &ProjPoint<Ext<'a>>) -> ProjPoint<Ext<'a>> {
    ProjPoint::new(p.s().frobenius(), p.t().frobenius()).unwrap()
}

/// Orbit sizes of the six discriminant-zero orbits.
pub fn degenerate_orbit_size(n: u8, q: u64) -> u64 {
    match n {
        1 => q + 1,
        2 => q * (q + 1),
        3 => (q * q + q) / 2,
        4 => (q * q - q) / 2,
        _ => (q * q * q - q) / 2,
    }
}

/// Roots of a quartic over its splitting field.
#[derive(Clone, Debug)]
pub struct RootMultiset<'a> {
    pub ext: ExtCtx<'a>,
    pub roots: Vec<(ProjPoint<Ext<'a>>, usize)>,
}

impl<'a> RootMultiset<'a> {
    pub fn splitting_degree(&self) -> u32 {
        self.ext.degree()
    }

    /// Plain coefficients of `prod (X t_i - Y s_i)^(m_i)` over the
    /// splitting field.
    pub fn reconstruct(&self) -> Vec<Ext<'a>> {
        let mut acc = vec![self.ext.one()];
        for (p, m) in &self.roots {
            for _ in 0..*m {
                acc = bmul(&acc, &[-p.s(), p.t()]);
            }
        }
        acc
    }
}

/// A permutation of `{0,1,2,3}` with `p.0[i]` the image of `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Perm(pub [usize; 4]);

impl Perm {
    pub const ID: Perm = Perm([0, 1, 2, 3]);

    pub fn compose(&self, o: &Perm) -> Perm {
        Perm(o.0.map(|i| self.0[i]))
    }

    pub fn all() -> Vec<Perm> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let v = [a, b, c, d];
                        let set: BTreeSet<_> = v.iter().collect();
                        if set.len() == 4 {
                            out.push(Perm(v));
                        }
                    }
                }
            }
        }
        out
    }

    /// Parity: `1` for even, `-1` for odd.
    pub fn sign(&self) -> i32 {
        let mut s = 1;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.0[i] > self.0[j] {
                    s = -s;
                }
            }
        }
        s
    }
}

impl fmt::Display for Perm {
    /// Cycle notation on `1..=4`, e.g. `(1324)`; `e` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = [false; 4];
        let mut any = false;
        for start in 0..4 {
            if seen[start] || self.0[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                write!(f, "{}", i + 1)?;
                i = self.0[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "e")?;
        }
        Ok(())
    }
}

/// A Galois-compatible ordering of the roots.
#[derive(Clone, Debug)]
pub struct RestrictedOrdering<'a> {
    pub ext: ExtCtx<'a>,
    pub roots: [ProjPoint<Ext<'a>>; 4],
    /// Frobenius sends `roots[i]` to `roots[sigma.0[i]]`.
    pub sigma: Perm,
    pub kind: QuarticType,
}

#[derive(Clone, Debug)]
pub struct LambdaClass<'a> {
    pub lambda: Ext<'a>,
    pub orbit: Vec<Ext<'a>>,
}

/// Splitting types of quartics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum QuarticType {
    /// Discriminant zero.
    F0,
    F1,
    F2,
    F2Prime,
    F4,
    F4Prime,
}

impl fmt::Display for QuarticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuarticType::F0 => "F0",
            QuarticType::F1 => "F1",
            QuarticType::F2 => "F2",
            QuarticType::F2Prime => "F2'",
            QuarticType::F4 => "F4",
            QuarticType::F4Prime => "F4'",
        })
    }
}

/// Canonical `PGL2(q)`-orbit label of a quartic. Field values are stored
/// by canonical encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum QuarticLabel {
    /// Discriminant zero, orbits 1..=6: `X^4`, `X^3 Y`, `X^2 Y^2`,
    /// `(X^2 - eps Y^2)^2`, `X^2 Y (Y - X)`, `X^2 (X^2 - eps Y^2)`.
    Degenerate(u8),
    /// `E_r` for `j = r` outside `{0, 1728}`; type F4, F2 or F1.
    E(u32),
    /// `XY(Y - X)(Y + X)`.
    Psi1728,
    /// `X(Y^3 - X^3)`.
    Cusp,
    /// `XY(Y^2 - eps X^2)`.
    Ups0,
    /// `X(Y^3 - gamma^i X^3)`, `i` in `{1, 2}`.
    CubeTwist(u8),
    /// Type F4' with `{lambda, 1/lambda}` represented by the smaller
    /// encoding.
    PsiPrime(u32),
    /// Type F2' with the given `j`.
    UpsPrime(u32),
}

impl fmt::Display for QuarticLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuarticLabel::Degenerate(n) => write!(f, "F0.{n}"),
            QuarticLabel::E(r) => write!(f, "E({r})"),
            QuarticLabel::Psi1728 => write!(f, "psi(-1)"),
            QuarticLabel::Cusp => write!(f, "cusp"),
            QuarticLabel::Ups0 => write!(f, "ups(0)"),
            QuarticLabel::CubeTwist(i) => write!(f, "cubic({i})"),
            QuarticLabel::PsiPrime(l) => write!(f, "psi'({l})"),
            QuarticLabel::UpsPrime(j) => write!(f, "ups'({j})"),
        }
    }
}

impl FromStr for QuarticLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLabel(s.to_string());
        let arg = |prefix: &str| -> Option<u32> {
            s.strip_prefix(prefix)?.strip_suffix(')')?.parse().ok()
        };
        Ok(match s {
            "psi(-1)" => QuarticLabel::Psi1728,
            "cusp" => QuarticLabel::Cusp,
            "ups(0)" => QuarticLabel::Ups0,
            _ => {
                if let Some(n) = s.strip_prefix("F0.") {
                    QuarticLabel::Degenerate(n.parse().map_err(|_| bad())?)
                } else if let Some(v) = arg("E(") {
                    QuarticLabel::E(v)
                } else if let Some(v) = arg("cubic(") {
                    QuarticLabel::CubeTwist(v as u8)
                } else if let Some(v) = arg("psi'(") {
                    QuarticLabel::PsiPrime(v)
                } else if let Some(v) = arg("ups'(") {
                    QuarticLabel::UpsPrime(v)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

/// Isomorphism types of stabilizers.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum StabLabel {
    Trivial,
    Z2,
    Z3,
    Z4,
    V4,
    D4,
    A4,
    Other(usize),
}

impl StabLabel {
    /// Identifies a finite subgroup of `PGL2` from its order and element
    /// orders.
    pub fn identify<E: FieldElem>(g: &[Pgl2<E>]) -> StabLabel {
        let orders: Vec<usize> = g.iter().map(|x| x.order()).collect();
        let count = |k: usize| orders.iter().filter(|&&o| o == k).count();
        match g.len() {
            1 => StabLabel::Trivial,
            2 => StabLabel::Z2,
            3 => StabLabel::Z3,
            4 if count(4) > 0 => StabLabel::Z4,
            4 => StabLabel::V4,
            8 if count(4) == 2 && count(2) == 5 => StabLabel::D4,
            12 if count(3) == 8 && count(2) == 3 => StabLabel::A4,
            n => StabLabel::Other(n),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            StabLabel::Trivial => 1,
            StabLabel::Z2 => 2,
            StabLabel::Z3 => 3,
            StabLabel::Z4 | StabLabel::V4 => 4,
            StabLabel::D4 => 8,
            StabLabel::A4 => 12,
            StabLabel::Other(n) => *n,
        }
    }
}

impl fmt::Display for StabLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabLabel::Trivial => write!(f, "trivial"),
            StabLabel::Z2 => write!(f, "Z/2"),
            StabLabel::Z3 => write!(f, "Z/3"),
            StabLabel::Z4 => write!(f, "Z/4"),
            StabLabel::V4 => write!(f, "Z/2xZ/2"),
            StabLabel::D4 => write!(f, "D4"),
            StabLabel::A4 => write!(f, "A4"),
            StabLabel::Other(n) => write!(f, "order-{n}"),
        }
    }
}

/// The stabilizer of a quartic, as found by scanning the whole group.
#[derive(Clone, Debug)]
pub struct Stabilizer<'a> {
    pub elements: Vec<Pgl2<Fq<'a>>>,
    pub label: StabLabel,
}

/// Classification record for a quartic.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuarticClass {
    pub label: QuarticLabel,
    pub kind: QuarticType,
    /// Encoding of `j`, absent on the discriminant locus.
    pub j: Option<u32>,
    pub i_square: bool,
    pub discriminant: u32,
    pub stabilizer_order: u64,
    /// Isomorphism type; only computed for nonzero discriminant.
    pub stabilizer: Option<StabLabel>,
    pub orbit_size: u64,
}

/// Stabilizer type predicted from the splitting type and the orbit label,
/// without scanning the group.
pub fn expected_stabilizer(kind: QuarticType, label: QuarticLabel, q: u64) -> Option<StabLabel> {
    use QuarticLabel as L;
    use QuarticType as T;
    let minus_one = (q - 1) as u32;
    Some(match (kind, label) {
        (T::F0, _) => return None,
        (T::F4, L::E(_)) => StabLabel::V4,
        (T::F4, L::Psi1728) => StabLabel::D4,
        (T::F4, L::Cusp) => StabLabel::A4,
        (T::F4Prime, L::PsiPrime(l)) if l == minus_one => StabLabel::D4,
        (T::F4Prime, _) => StabLabel::V4,
        (T::F2, L::Ups0) => StabLabel::V4,
        (T::F2, _) => StabLabel::Z2,
        (T::F2Prime, L::UpsPrime(j)) if j as u64 == 1728 % q => StabLabel::Z4,
        (T::F2Prime, _) => StabLabel::Z2,
        (T::F1, L::CubeTwist(_)) => StabLabel::Z3,
        (T::F1, _) => StabLabel::Trivial,
        _ => return None,
    })
}

// ---------------------------------------------------------------------------
// J sets.

/// Partition of `F_q \ {0, 1728}` by the number of rational roots of
/// `Z^3 - 4 Z^2 + 256/27 (1 - 1728/r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JSets {
    pub j1: Vec<u32>,
    pub j2: Vec<u32>,
    pub j4: Vec<u32>,
}

impl JSets {
    pub fn contains(&self, i: u8, r: u32) -> bool {
        let v = match i {
            1 => &self.j1,
            2 => &self.j2,
            _ => &self.j4,
        };
        v.binary_search(&r).is_ok()
    }

    /// Which set `r` lies in, if any.
    pub fn class_of(&self, r: u32) -> Option<u8> {
        [1u8, 2, 4].into_iter().find(|&i| self.contains(i, r))
    }
}

/// The resolvent-type cubic whose root count defines the J sets.
fn j_cubic<'a>(r: Fq<'a>) -> Poly<Fq<'a>> {
    let s = |n: i64| r.int_like(n);
    let k = s(256) / s(27) * (s(1) - s(1728) / r);
    Poly::new(vec![k, s(0), s(-4), s(1)])
}

/// The sets `J_1`, `J_2`, `J_4`.
pub fn j_sets(f: &FieldCtx) -> Result<JSets> {
    require_classifiable(f.zero())?;
    let mut out = JSets {
        j1: Vec::new(),
        j2: Vec::new(),
        j4: Vec::new(),
    };
    let k1728 = f.int(1728);
    for r in f.elements() {
        if r.is_zero() || r == k1728 {
            continue;
        }
        match j_cubic(r).distinct_roots().len() {
            0 => out.j1.push(r.value()),
            1 => out.j2.push(r.value()),
            3 => out.j4.push(r.value()),
            n => unreachable!("{n} distinct roots for j = {r}"),
        }
    }
    Ok(out)
}

/// Membership test for the `+` subsets: `r/(r - 1728)` is a square.
/// Agrees with `1 - 1728/r` being a square, the reciprocal quantity.
pub fn in_j_plus(r: Fq<'_>) -> bool {
    let k = r.int_like(1728);
    let a = (r / (r - k)).is_square();
    debug_assert_eq!(a, (r.one_like() - k / r).is_square());
    a
}

/// The subsets `J_i^+` of `J_i`.
pub fn j_plus_sets(f: &FieldCtx) -> Result<JSets> {
    let j = j_sets(f)?;
    let keep = |v: &[u32]| -> Vec<u32> {
        v.iter()
            .copied()
            .filter(|&r| in_j_plus(f.elem(r as u64).unwrap()))
            .collect()
    };
    Ok(JSets {
        j1: keep(&j.j1),
        j2: keep(&j.j2),
        j4: keep(&j.j4),
    })
}

// ---------------------------------------------------------------------------
// Named families and canonical representatives.

fn quartic_from_bin<'a>(c: &[Fq<'a>]) -> QuarticForm<'a> {
    QuarticForm::from_plain([c[0], c[1], c[2], c[3], c[4]]).expect("nonzero family member")
}

fn lin<'a>(ycoef: Fq<'a>, xcoef: Fq<'a>) -> Vec<Fq<'a>> {
    vec![ycoef, xcoef]
}

/// `X (256/27 (1 - 1728/r) Y^3 - 4 Y X^2 + X^3)`.
pub fn e_r<'a>(r: Fq<'a>) -> Result<QuarticForm<'a>> {
    if r.is_zero() || r == r.int_like(1728) {
        return Err(Error::InvalidLabel(format!("E({r})")));
    }
    let s = |n: i64| r.int_like(n);
    let k = s(256) / s(27) * (s(1) - s(1728) / r);
    Ok(quartic_from_bin(&[s(0), k, s(0), s(-4), s(1)]))
}

/// `XY(Y - X)(Y - lambda X)`.
pub fn psi<'a>(l: Fq<'a>) -> QuarticForm<'a> {
    let (z, o) = (l.zero_like(), l.one_like());
    let c = bmul(
        &bmul(&lin(z, o), &lin(o, z)),
        &bmul(&lin(o, -o), &lin(o, -l)),
    );
    quartic_from_bin(&c)
}

/// `XY((Y - rX)^2 - eps X^2)`.
pub fn upsilon<'a>(r: Fq<'a>) -> QuarticForm<'a> {
    let (z, o) = (r.zero_like(), r.one_like());
    let eps = r.eps().expect("odd characteristic");
    let sq = bmul(&lin(o, -r), &lin(o, -r));
    let quad = badd(&sq, &[z, z, -eps]);
    quartic_from_bin(&bmul(&bmul(&lin(z, o), &lin(o, z)), &quad))
}

/// `(Ys - tX)(Y - theta X)(Y - phi(theta) X)(Y - phi^2(theta) X)` with
/// `theta` the canonical generator of the cubic extension.
pub fn eta<'a>(s: Fq<'a>, t: Fq<'a>) -> Result<QuarticForm<'a>> {
    if s.is_zero() && t.is_zero() {
        return Err(Error::ZeroInput);
    }
    let m = s.tower(3).modulus();
    // X^3 m(Y/X): coefficient of X^k Y^(3-k) is m[3-k]
    let cubic: Vec<Fq<'a>> = (0..4).map(|k| s.decode_like(m[3 - k] as u128)).collect();
    Ok(quartic_from_bin(&bmul(&lin(s, -t), &cubic)))
}

/// `(Y^2 - eps X^2)(Y - alpha X)(Y - phi(alpha) X)`.
pub fn psi_prime<'a>(alpha: Ext<'a>) -> QuarticForm<'a> {
    let ctx = alpha.ctx();
    let tr = (alpha + alpha.frobenius()).to_base().expect("trace in F_q");
    let n = ctx.norm_to_base(alpha);
    let (z, o) = (n.zero_like(), n.one_like());
    let eps = n.eps().unwrap();
    quartic_from_bin(&bmul(&[o, z, -eps], &[o, -tr, n]))
}

/// `N((alpha - sqrt eps)/(alpha + sqrt eps))`.
pub fn chi1<'a>(alpha: Ext<'a>) -> Fq<'a> {
    let ctx = alpha.ctx();
    let se = ctx.gen();
    ctx.norm_to_base((alpha - se) / (alpha + se))
}

/// Least `alpha` in `F_{q^2} \ (F_q u {+-sqrt eps})` with `chi1(alpha)` in
/// `{lambda, 1/lambda}`.
pub fn alpha_for<'a>(lambda: Fq<'a>) -> Option<Ext<'a>> {
    let e2 = lambda.tower(2);
    let li = lambda.inv()?;
    let se = e2.gen();
    e2.elements()
        .filter(|a| a.to_base().is_none() && *a != se && *a != -se)
        .find(|&a| {
            let c = chi1(a);
            c == lambda || c == li
        })
}

/// The constants `(i, theta^2)` for `q = 1 mod 4`, or `(i, theta0, theta1)`
/// for `q = 3 mod 4`, used by the F2' representatives.
fn upsilon_prime_t<'a>(lambda: Ext<'a>) -> Fq<'a> {
    let e2 = lambda.ctx();
    let s = lambda.to_base().map(|b| b).unwrap_or_else(|| lambda.coeffs()[0]);
    let q = s.q();
    let one = e2.one();
    let two = e2.int(2);
    if q % 4 == 1 {
        let i = s.int_like(-1).sqrt().unwrap();
        let gamma = s.gamma();
        let eps = s.eps().unwrap();
        let c = (gamma / eps).sqrt().unwrap();
        let theta2 = e2.gen() * e2.embed(c);
        if lambda == -one {
            return s.zero_like();
        }
        let t = e2.embed(i) * theta2 * (one + lambda) / (two * (one - lambda));
        t.to_base().expect("t in F_q")
    } else {
        let (theta0, _) = theta_pair(s);
        let i = e2.int(-1).sqrt().unwrap();
        let base = -theta0 / s.int_like(2);
        if lambda == -one {
            return base;
        }
        let t = e2.embed(base) + i * (lambda + one) / (two * (lambda - one));
        t.to_base().expect("t in F_q")
    }
}

/// For `q = 3 mod 4`: least non-square `theta0` with `-1 - theta0^2` a
/// square, and `theta1` its canonical root.
pub fn theta_pair<'a>(s: Fq<'a>) -> (Fq<'a>, Fq<'a>) {
    let o = s.one_like();
    let t0 = s
        .all()
        .find(|&t| !t.is_square() && (-o - t * t).is_square())
        .expect("theta0 exists");
    (t0, (-o - t0 * t0).sqrt().unwrap())
}

/// The F2' family member with parameter `t` in `F_q`.
pub fn upsilon_prime<'a>(t: Fq<'a>) -> QuarticForm<'a> {
    let q = t.q();
    let (z, o) = (t.zero_like(), t.one_like());
    let s = |n: i64| t.int_like(n);
    if q % 4 == 1 {
        let gamma = t.gamma();
        let eps = t.eps().unwrap();
        // X^4, X^3 Y terms in the plain basis: index k is X^k Y^(4-k)
        if (eps * t).is_square() {
            let sq = bmul(&[o, z, -t], &[o, z, -t]);
            let r = (gamma * t).sqrt().unwrap();
            quartic_from_bin(&badd(&sq, &[z, z, z, s(-4) * r, -gamma]))
        } else {
            let g3 = gamma * gamma * gamma;
            let sq = bmul(&[o, z, -gamma * t], &[o, z, -gamma * t]);
            let r = t.sqrt().unwrap();
            quartic_from_bin(&badd(&sq, &[z, z, z, s(-4) * gamma * gamma * r, -g3]))
        }
    } else {
        let (t0, t1) = theta_pair(t);
        if (-t).is_square() {
            // (Y^2 - tX^2)^2 - X^4 + 2X^2((Y^2 + tX^2) t0 + 2XY sqrt(-t) t1)
            let sq = bmul(&[o, z, -t], &[o, z, -t]);
            let r = (-t).sqrt().unwrap();
            let inner = [t0, s(2) * r * t1, t * t0];
            let extra = bscale(&bmul(&[z, z, o], &inner), s(2));
            quartic_from_bin(&badd(&badd(&sq, &[z, z, z, z, -o]), &extra))
        } else {
            // (Y^2 + tX^2)^2 - X^4 - 2X^2((Y^2 - tX^2) t0 - 2XY sqrt(t) t1)
            let sq = bmul(&[o, z, t], &[o, z, t]);
            let r = t.sqrt().unwrap();
            let inner = [t0, s(-2) * r * t1, -t * t0];
            let extra = bscale(&bmul(&[z, z, o], &inner), s(-2));
            quartic_from_bin(&badd(&badd(&sq, &[z, z, z, z, -o]), &extra))
        }
    }
}

/// Least `lambda` of norm one in `F_{q^2}`, `lambda != 1`, with
/// `j(lambda) = j`.
fn norm_one_lambda<'a>(j: Fq<'a>) -> Option<Ext<'a>> {
    let e2 = j.tower(2);
    let target = e2.embed(j);
    e2.elements().find(|&l| {
        !l.is_zero() && l != e2.one() && e2.norm_to_base(l).is_one() && j_of_lambda(l).ok() == Some(target)
    })
}

/// Checks that a label names an orbit for this field.
pub fn validate_label(f: &FieldCtx, label: QuarticLabel) -> Result<()> {
    require_classifiable(f.zero())?;
    let q = f.q();
    let bad = || Err(Error::InvalidLabel(label.to_string()));
    let k1728 = f.int(1728).value();
    match label {
        QuarticLabel::Degenerate(n) if (1..=6).contains(&n) => Ok(()),
        QuarticLabel::Degenerate(_) => bad(),
        QuarticLabel::E(r) if (r as u64) < q && r != 0 && r != k1728 => Ok(()),
        QuarticLabel::E(_) => bad(),
        QuarticLabel::Psi1728 | QuarticLabel::Cusp | QuarticLabel::Ups0 => Ok(()),
        QuarticLabel::CubeTwist(i) if f.mu() == 1 && (i == 1 || i == 2) => Ok(()),
        QuarticLabel::CubeTwist(_) => bad(),
        QuarticLabel::PsiPrime(l) => {
            if l as u64 >= q || l <= 1 {
                return bad();
            }
            let x = f.elem(l as u64)?;
            if x.inv().unwrap().value() < l {
                return bad();
            }
            Ok(())
        }
        QuarticLabel::UpsPrime(j) => {
            if j == k1728 || (j == 0 && f.mu() == -1) {
                return Ok(());
            }
            if (j as u64) < q && j_sets(f)?.contains(2, j) {
                return Ok(());
            }
            bad()
        }
    }
}

/// Canonical representative of an orbit label.
pub fn representative(f: &FieldCtx, label: QuarticLabel) -> Result<QuarticForm<'_>> {
    validate_label(f, label)?;
    let (z, o) = (f.zero(), f.one());
    let eps = f.epsilon().unwrap();
    let x = lin(z, o);
    let y = lin(o, z);
    let form = match label {
        QuarticLabel::Degenerate(n) => {
            let c = match n {
                1 => bmul(&bmul(&x, &x), &bmul(&x, &x)),
                2 => bmul(&bmul(&x, &x), &bmul(&x, &y)),
                3 => bmul(&bmul(&x, &x), &bmul(&y, &y)),
                4 => {
                    // X^2 - eps Y^2 has coefficients (-eps, 0, 1) in X^k Y^(2-k)
                    let qd = vec![-eps, z, o];
                    bmul(&qd, &qd)
                }
                5 => bmul(&bmul(&x, &x), &bmul(&y, &lin(o, -o))),
                _ => bmul(&bmul(&x, &x), &[-eps, z, o]),
            };
            quartic_from_bin(&c)
        }
        QuarticLabel::E(r) => e_r(f.elem(r as u64)?)?,
        QuarticLabel::Psi1728 => psi(f.int(-1)),
        QuarticLabel::Cusp => quartic_from_bin(&[z, o, z, z, -o]),
        QuarticLabel::Ups0 => upsilon(z),
        QuarticLabel::CubeTwist(i) => {
            let g = f.generator().pow(i as u128);
            quartic_from_bin(&[z, o, z, z, -g])
        }
        QuarticLabel::PsiPrime(l) => {
            let alpha = alpha_for(f.elem(l as u64)?).ok_or(Error::InvalidLabel(label.to_string()))?;
            psi_prime(alpha)
        }
        QuarticLabel::UpsPrime(j) => {
            let lambda = norm_one_lambda(f.elem(j as u64)?).ok_or(Error::InvalidLabel(label.to_string()))?;
            upsilon_prime(upsilon_prime_t(lambda))
        }
    };
    Ok(form.normalized())
}

/// Every orbit label valid for the field, nonzero discriminant first.
pub fn all_labels(f: &FieldCtx) -> Result<Vec<QuarticLabel>> {
    require_classifiable(f.zero())?;
    let js = j_sets(f)?;
    let mut out = Vec::new();
    let k1728 = f.int(1728).value();
    for &r in js.j1.iter().chain(&js.j2).chain(&js.j4) {
        out.push(QuarticLabel::E(r));
    }
    out.push(QuarticLabel::Psi1728);
    out.push(QuarticLabel::Cusp);
    out.push(QuarticLabel::Ups0);
    if f.mu() == 1 {
        out.push(QuarticLabel::CubeTwist(1));
        out.push(QuarticLabel::CubeTwist(2));
    }
    for l in f.elements().skip(2) {
        if l.inv().unwrap().value() >= l.value() {
            out.push(QuarticLabel::PsiPrime(l.value()));
        }
    }
    out.push(QuarticLabel::UpsPrime(k1728));
    if f.mu() == -1 {
        out.push(QuarticLabel::UpsPrime(0));
    }
    for &r in &js.j2 {
        out.push(QuarticLabel::UpsPrime(r));
    }
    for n in 1..=6 {
        out.push(QuarticLabel::Degenerate(n));
    }
    out.sort();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Cubic forms.

/// A binary cubic `y0 Y^3 - 3 y1 Y^2 X + 3 y2 Y X^2 - y3 X^3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CubicForm<'a> {
    y: [Fq<'a>; 4],
}

/// The five orbits of nonzero binary cubics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum CubicLabel {
    /// A triple root, like `X^3`.
    Triple = 1,
    /// A double and a simple root, like `X^2 Y`.
    DoubleSimple = 2,
    /// Three distinct rational roots.
    ThreeRational = 3,
    /// One rational root and a conjugate pair.
    OneRational = 4,
    /// Three conjugate roots.
    Irreducible = 5,
}

impl CubicLabel {
    pub fn orbit_size(&self, q: u64) -> u64 {
        match self {
            CubicLabel::Triple => q + 1,
            CubicLabel::DoubleSimple => q * (q + 1),
            CubicLabel::ThreeRational => (q * q * q - q) / 6,
            CubicLabel::OneRational => q * (q * q - 1) / 2,
            CubicLabel::Irreducible => (q * q * q - q) / 3,
        }
    }
}

impl<'a> CubicForm<'a> {
    pub fn new(y: [Fq<'a>; 4]) -> Result<Self> {
        check_char(y[0])?;
        if y.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroInput);
        }
        Ok(CubicForm { y })
    }

    /// From plain coefficients of `X^k Y^(3-k)`.
    pub fn from_plain(c: [Fq<'a>; 4]) -> Result<Self> {
        check_char(c[0])?;
        let i3 = c[0].int_like(3).inv().unwrap();
        Self::new([c[0], -c[1] * i3, c[2] * i3, -c[3]])
    }

    pub fn y(&self) -> [Fq<'a>; 4] {
        self.y
    }

    pub fn plain(&self) -> [Fq<'a>; 4] {
        let [y0, y1, y2, y3] = self.y;
        let s = |n: i64| y0.int_like(n);
        [y0, s(-3) * y1, s(3) * y2, -y3]
    }

    /// `X` times the cubic.
    pub fn times_x(&self) -> QuarticForm<'a> {
        let c = self.plain();
        let z = c[0].zero_like();
        quartic_from_bin(&[z, c[0], c[1], c[2], c[3]])
    }

    pub fn classify(&self) -> CubicLabel {
        let c = self.plain();
        let g = Poly::new((0..4).map(|i| c[3 - i]).collect());
        let mut mults: Vec<usize> = g.roots().iter().map(|(_, m)| *m).collect();
        let deg = g.degree().unwrap_or(0);
        if deg < 3 {
            mults.push(3 - deg);
        }
        mults.sort_unstable_by(|a, b| b.cmp(a));
        match mults.as_slice() {
            [3] => CubicLabel::Triple,
            [2, 1] => CubicLabel::DoubleSimple,
            [1, 1, 1] => CubicLabel::ThreeRational,
            [1] => CubicLabel::OneRational,
            _ => CubicLabel::Irreducible,
        }
    }
}

/// Resultant of two binary quadratics given by plain coefficients of
/// `X^k Y^(2-k)`, as the Sylvester determinant in `Y/X`.
pub fn resultant_quadratics<'a>(f1: [Fq<'a>; 3], f2: [Fq<'a>; 3]) -> Result<Fq<'a>> {
    if f1.iter().all(|x| x.is_zero()) || f2.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroInput);
    }
    let z = f1[0].zero_like();
    let m = vec![
        vec![f1[0], f1[1], f1[2], z],
        vec![z, f1[0], f1[1], f1[2]],
        vec![f2[0], f2[1], f2[2], z],
        vec![z, f2[0], f2[1], f2[2]],
    ];
    Ok(linalg::det(&m))
}

/// Product of two quadratics as a quartic.
pub fn quadratic_product<'a>(f1: [Fq<'a>; 3], f2: [Fq<'a>; 3]) -> Result<QuarticForm<'a>> {
    let c = bmul(&f1, &f2);
    QuarticForm::from_plain([c[0], c[1], c[2], c[3], c[4]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::make_field;

    fn f(q: u64) -> FieldCtx {
        make_field(q, 1).unwrap()
    }

    #[test]
    fn invariant_examples() {
        let k = f(13);
        let l = k.int(5);
        let i = psi(l).invariant_i();
        assert_eq!(i, (l * l - l + k.one()) / k.int(36));
        let x4 = quartic_from_bin(&[k.zero(), k.zero(), k.zero(), k.zero(), k.one()]);
        assert!(x4.invariant_i().is_zero());
        assert!(x4.invariant_j().is_zero());
        let x2y2 = quartic_from_bin(&[k.zero(), k.zero(), k.one(), k.zero(), k.zero()]);
        assert_eq!(x2y2.invariant_j(), -k.one() / k.int(216));
        assert!(x2y2.discriminant().is_zero());
        let nu = k.int(4);
        let form = quartic_from_bin(&[nu, k.zero(), k.one() - k.int(3) * nu, k.zero(), k.one()]);
        let r = (k.int(3) * nu + k.one()) / k.int(6);
        assert_eq!(form.invariant_i(), r * r);
    }

    #[test]
    fn j_examples() {
        let k = f(13);
        assert_eq!(psi(k.int(-1)).j_invariant().unwrap(), k.int(1728));
        let cusp = representative(&k, QuarticLabel::Cusp).unwrap();
        assert!(cusp.j_invariant().unwrap().is_zero());
        for r in k.elements().skip(1) {
            if r == k.int(1728) {
                continue;
            }
            assert_eq!(e_r(r).unwrap().j_invariant().unwrap(), r);
        }
    }

    #[test]
    fn roots_of_monomials() {
        let k = f(7);
        let x3y = quartic_from_bin(&[k.zero(), k.zero(), k.zero(), k.one(), k.zero()]);
        let rm = x3y.roots();
        let v: Vec<(String, usize)> = rm.roots.iter().map(|(p, m)| (format!("{p:?}"), *m)).collect();
        assert_eq!(v, vec![("(1,0)".to_string(), 1), ("(0,1)".to_string(), 3)]);
        let eps = k.epsilon().unwrap();
        let sq = quartic_from_bin(&bmul(&[-eps, k.zero(), k.one()], &[-eps, k.zero(), k.one()]));
        let rm = sq.roots();
        assert_eq!(rm.splitting_degree(), 2);
        assert_eq!(rm.roots.len(), 2);
        assert!(rm.roots.iter().all(|(_, m)| *m == 2));
    }

    #[test]
    fn index_roundtrip() {
        let k = f(5);
        let n = QuarticForm::count(5);
        for idx in 0..n {
            let form = QuarticForm::from_index(k.zero(), idx);
            assert_eq!(form.index(), idx);
        }
    }

    #[test]
    fn table_examples() {
        let k = f(7);
        let c = representative(&k, QuarticLabel::Ups0).unwrap().classify().unwrap();
        assert_eq!(c.kind, QuarticType::F2);
        assert_eq!(c.j, Some(k.int(1728).value()));
        let c = representative(&k, QuarticLabel::CubeTwist(1)).unwrap().classify().unwrap();
        assert_eq!(c.kind, QuarticType::F1);
        assert_eq!(c.stabilizer, Some(StabLabel::Z3));
        let c = representative(&k, QuarticLabel::Degenerate(5)).unwrap().classify().unwrap();
        assert_eq!(c.orbit_size, (343 - 7) / 2);
        let c = psi(k.int(-1)).classify().unwrap();
        assert_eq!(c.stabilizer, Some(StabLabel::D4));
    }

    #[test]
    fn resultant_example() {
        let k = f(11);
        let l = k.int(7);
        let (z, o) = (k.zero(), k.one());
        // XY and (Y - X)(Y - lX) = Y^2 - (1+l) XY + l X^2
        let r = resultant_quadratics([z, o, z], [o, -(o + l), l]).unwrap();
        assert_eq!(r, l);
        assert!(resultant_quadratics([o, o, z], [o, o, z]).unwrap().is_zero());
    }

    #[test]
    fn perm_display() {
        assert_eq!(Perm([2, 3, 1, 0]).to_string(), "(1324)");
        assert_eq!(Perm([0, 2, 3, 1]).to_string(), "(234)");
        assert_eq!(Perm::ID.to_string(), "e");
    }
}
