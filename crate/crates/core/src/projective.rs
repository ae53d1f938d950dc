//! The projective line, `PGL2` and the cross-ratio.

use std::fmt;

use crate::error::{Error, Result};
use crate::field_tower::{Ext, ExtCtx, FieldCtx, FieldElem, Fq};

/// A point `(s, t)` of the projective line, identified with `t/s`.
///
/// Normalized so that `s = 1` when `s != 0`; infinity is `(0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjPoint<E> {
    s: E,
    t: E,
}

impl<E: FieldElem> ProjPoint<E> {
    pub fn new(s: E, t: E) -> Result<Self> {
        if s.is_zero() && t.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(Self::norm(s, t))
    }

    fn norm(s: E, t: E) -> Self {
        if s.is_zero() {
            ProjPoint {
                s,
                t: t.one_like(),
            }
        } else {
            ProjPoint {
                s: s.one_like(),
                t: t / s,
            }
        }
    }

    /// The point `(1, t)`.
    pub fn affine(t: E) -> Self {
        ProjPoint { s: t.one_like(), t }
    }

    pub fn infinity(sample: E) -> Self {
        ProjPoint {
            s: sample.zero_like(),
            t: sample.one_like(),
        }
    }

    pub fn s(&self) -> E {
        self.s
    }

    pub fn t(&self) -> E {
        self.t
    }

    pub fn is_infinity(&self) -> bool {
        self.s.is_zero()
    }

    /// Affine coordinate `t/s`, `None` at infinity.
    pub fn value(&self) -> Option<E> {
        (!self.is_infinity()).then_some(self.t)
    }

    /// Sort key: affine points by the encoding of `t`, infinity last.
    pub fn encode(&self) -> u128 {
        if self.is_infinity() {
            self.t.field_size()
        } else {
            self.t.encode()
        }
    }

    /// Determinant `t_self s_o - t_o s_self`; zero iff the points coincide.
    pub fn bracket(&self, o: &Self) -> E {
        self.t * o.s - o.t * self.s
    }
}

impl<E: FieldElem> fmt::Debug for ProjPoint<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.s, self.t)
    }
}

impl<E: FieldElem> fmt::Display for ProjPoint<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.t)
        }
    }
}

/// All `q + 1` points of `P^1(F_q)`: affine points in encoding order, then
/// infinity.
pub fn points(f: &FieldCtx) -> Vec<ProjPoint<Fq<'_>>> {
    let mut v: Vec<_> = f.elements().map(ProjPoint::affine).collect();
    v.push(ProjPoint::infinity(f.zero()));
    v
}

/// An element of `PGL2`, normalized so the first nonzero entry in
/// row-major order is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pgl2<E> {
    m: [E; 4],
    det: E,
}

impl<E: FieldElem> Pgl2<E> {
    /// The class of `(a b; c d)`.
    pub fn new(a: E, b: E, c: E, d: E) -> Result<Self> {
        let det = a * d - b * c;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let lead = [a, b, c, d].into_iter().find(|x| !x.is_zero()).unwrap();
        let inv = lead.inv().unwrap();
        Ok(Pgl2 {
            m: [a * inv, b * inv, c * inv, d * inv],
            det: det * inv * inv,
        })
    }

    pub fn identity(sample: E) -> Self {
        let o = sample.one_like();
        let z = sample.zero_like();
        Pgl2 {
            m: [o, z, z, o],
            det: o,
        }
    }

    /// Entries `[a, b, c, d]` of the normalized matrix.
    pub fn entries(&self) -> [E; 4] {
        self.m
    }

    /// Determinant of the normalized matrix.
    pub fn det(&self) -> E {
        self.det
    }

    /// Matrix product, so that `(g*h).act(P) == g.act(h.act(P))`.
    pub fn compose(&self, h: &Self) -> Self {
        let [a, b, c, d] = self.m;
        let [e, f, g, k] = h.m;
        Pgl2::new(a * e + b * g, a * f + b * k, c * e + d * g, c * f + d * k)
            .expect("product of invertible matrices")
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        Pgl2::new(d, -b, -c, a).expect("invertible")
    }

    /// `(s, t) -> (as + bt, cs + dt)`.
    pub fn act(&self, p: &ProjPoint<E>) -> ProjPoint<E> {
        let [a, b, c, d] = self.m;
        ProjPoint::norm(a * p.s + b * p.t, c * p.s + d * p.t)
    }

    pub fn is_identity(&self) -> bool {
        let [a, b, c, d] = self.m;
        b.is_zero() && c.is_zero() && a == d
    }

    /// Order in the group; loops at most `q + 1` times.
    pub fn order(&self) -> usize {
        let mut g = *self;
        let mut n = 1;
        while !g.is_identity() {
            g = g.compose(self);
            n += 1;
        }
        n
    }
}

impl<'a> Pgl2<Fq<'a>> {
    /// The same element acting on points of an extension.
    pub fn embed<'b>(&self, e: ExtCtx<'b>) -> Pgl2<Ext<'b>> {
        let m = self.m.map(|x| e.embed(x));
        Pgl2 {
            m,
            det: e.embed(self.det),
        }
    }
}

impl<E: FieldElem> fmt::Debug for Pgl2<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[{a},{b};{c},{d}]")
    }
}

impl<E: FieldElem> fmt::Display for Pgl2<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The generating set `t -> t+1`, `t -> gamma t`, `t -> 1/t`.
pub fn generators(f: &FieldCtx) -> Vec<Pgl2<Fq<'_>>> {
    generators_like(f.zero())
}

/// [`generators`] for the field of `sample`.
pub fn generators_like(sample: Fq<'_>) -> Vec<Pgl2<Fq<'_>>> {
    let (z, o) = (sample.zero_like(), sample.one_like());
    vec![
        Pgl2::new(o, z, o, o).unwrap(),
        Pgl2::new(o, z, z, sample.gamma()).unwrap(),
        Pgl2::new(z, o, o, z).unwrap(),
    ]
}

/// Every element of `PGL2(q)`, `q^3 - q` in all.
pub fn pgl2_elements(f: &FieldCtx) -> Vec<Pgl2<Fq<'_>>> {
    pgl2_elements_like(f.zero())
}

/// [`pgl2_elements`] for the field of `sample`.
pub fn pgl2_elements_like(sample: Fq<'_>) -> Vec<Pgl2<Fq<'_>>> {
    let q = sample.q();
    let mut out = Vec::with_capacity((q * q * q - q) as usize);
    let (z, o) = (sample.zero_like(), sample.one_like());
    for b in sample.all() {
        for c in sample.all() {
            for d in sample.all() {
                let det = d - b * c;
                if !det.is_zero() {
                    out.push(Pgl2 { m: [o, b, c, d], det });
                }
            }
        }
    }
    for c in sample.all().filter(|c| !c.is_zero()) {
        for d in sample.all() {
            out.push(Pgl2 {
                m: [z, o, c, d],
                det: -c,
            });
        }
    }
    out
}

/// `(P1, P2; P3, P4) = (P3-P1)(P4-P2) / ((P3-P2)(P4-P1))`, with infinity
/// handled through homogeneous brackets.
pub fn cross_ratio<E: FieldElem>(p: [ProjPoint<E>; 4]) -> Result<E> {
    for i in 0..4 {
        for j in (i + 1)..4 {
            if p[i] == p[j] {
                return Err(Error::RepeatedPoints);
            }
        }
    }
    let num = p[2].bracket(&p[0]) * p[3].bracket(&p[1]);
    let den = p[2].bracket(&p[1]) * p[3].bracket(&p[0]);
    Ok(num / den)
}

fn check_lambda<E: FieldElem>(l: E) -> Result<()> {
    if l.is_zero() || l.is_one() {
        return Err(Error::DegenerateLambda);
    }
    Ok(())
}

/// `256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2)`.
pub fn j_of_lambda<E: FieldElem>(l: E) -> Result<E> {
    check_lambda(l)?;
    let o = l.one_like();
    let a = l * l - l + o;
    let b = l * (l - o);
    Ok(l.int_like(256) * a * a * a / (b * b))
}

/// The orbit of `l` under the six anharmonic maps, sorted by encoding.
pub fn anharmonic_orbit<E: FieldElem>(l: E) -> Result<Vec<E>> {
    check_lambda(l)?;
    let o = l.one_like();
    let li = o / l;
    let mut v = vec![
        l,
        li,
        o - l,
        o / (o - l),
        l / (l - o),
        (l - o) / l,
    ];
    v.sort_by_key(|x| x.encode());
    v.dedup();
    Ok(v)
}

/// Matrix sending `inf, 0, 1` to `p, q, r`.
fn frame<E: FieldElem>(p: ProjPoint<E>, q: ProjPoint<E>, r: ProjPoint<E>) -> Result<Pgl2<E>> {
    let d = q.s * p.t - p.s * q.t;
    if d.is_zero() {
        return Err(Error::RepeatedPoints);
    }
    let alpha = (r.s * p.t - p.s * r.t) / d;
    let beta = (q.s * r.t - r.s * q.t) / d;
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::RepeatedPoints);
    }
    Pgl2::new(alpha * q.s, beta * p.s, alpha * q.t, beta * p.t)
}

/// The unique element carrying `from[i]` to `to[i]` for `i = 0, 1, 2`.
pub fn unique_map<E: FieldElem>(from: [ProjPoint<E>; 3], to: [ProjPoint<E>; 3]) -> Result<Pgl2<E>> {
    let a = frame(from[0], from[1], from[2])?;
    let b = frame(to[0], to[1], to[2])?;
    Ok(b.compose(&a.inverse()))
}
