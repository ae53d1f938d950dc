//! Lines of `PG(3,q)` relative to the twisted cubic `C`.
//!
//! A line is stored by normalized Plücker coordinates
//! `(p01, p02, p03, p12, p13, p23)` in the basis `B0..B3` of the divided
//! power `D3 V`. The derived `z`-coordinates satisfy
//! `p = (z0, 2 z1, 3(z2 + z5), z2 - z5, 2 z3, z4)`; `(z0..z4)` is the
//! quartic `pi(L)` and `z5` changes sign under the polarity of `C`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field_tower::{Ext, FieldCtx, FieldElem, Fq};
use crate::linalg;
use crate::projective::{generators_like, pgl2_elements_like, Pgl2};
use crate::quartic::{
    alpha_for, chi1, representative, theta_pair, CubicForm, CubicLabel, QuarticForm, QuarticLabel,
    QuarticType,
};

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// The matrix `g^[m]` of the action on `D_m V`: entry `(i, j)` is the
/// coefficient of `s^(m-j) t^j` in `(as + bt)^(m-i) (cs + dt)^i`, so that
/// `nu_m(g v) = g^[m] nu_m(v)`.
pub fn g_bracket<E: FieldElem>(m: usize, g: [E; 4]) -> Vec<Vec<E>> {
    let [a, b, c, d] = g;
    let z = a.zero_like();
    (0..=m)
        .map(|i| {
            // polynomial in t (s-degree implied), index j = power of t
            let mut row = vec![a.one_like()];
            for _ in 0..(m - i) {
                row = mul_lin(&row, a, b);
            }
            for _ in 0..i {
                row = mul_lin(&row, c, d);
            }
            row.resize(m + 1, z);
            row
        })
        .collect()
}

fn mul_lin<E: FieldElem>(p: &[E], x: E, y: E) -> Vec<E> {
    let mut out = vec![x.zero_like(); p.len() + 1];
    for (k, &c) in p.iter().enumerate() {
        out[k] = out[k] + c * x;
        out[k + 1] = out[k + 1] + c * y;
    }
    out
}

/// `wedge^2` of a 4x4 matrix in the basis `B01, B02, B03, B12, B13, B23`.
pub fn wedge2<E: FieldElem>(m: &[Vec<E>]) -> [[E; 6]; 6] {
    let z = m[0][0].zero_like();
    let mut out = [[z; 6]; 6];
    for (r, &(i, j)) in PAIRS.iter().enumerate() {
        for (c, &(k, l)) in PAIRS.iter().enumerate() {
            out[r][c] = m[i][k] * m[j][l] - m[i][l] * m[j][k];
        }
    }
    out
}

/// A point of `PG(3,q)`, normalized with first nonzero coordinate 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Point3<'a> {
    c: [Fq<'a>; 4],
}

impl<'a> Point3<'a> {
    pub fn new(c: [Fq<'a>; 4]) -> Result<Self> {
        let Some(lead) = c.iter().find(|x| !x.is_zero()) else {
            return Err(Error::ZeroInput);
        };
        let inv = lead.inv().unwrap();
        Ok(Point3 { c: c.map(|x| x * inv) })
    }

    pub fn coords(&self) -> [Fq<'a>; 4] {
        self.c
    }

    /// The cubic form `sum (-1)^k C(3,k) P_k X^k Y^(3-k)` paired with this
    /// point by the polarity of `C`.
    pub fn cubic(&self) -> CubicForm<'a> {
        let s = |n: i64| self.c[0].int_like(n);
        let signs = [s(1), s(-3), s(3), s(-1)];
        let plain: [Fq<'a>; 4] = std::array::from_fn(|k| signs[k] * self.c[k]);
        CubicForm::from_plain(plain).expect("nonzero point")
    }

    /// Orbit of the point, via the cubic form it corresponds to.
    pub fn orbit(&self) -> CubicLabel {
        self.cubic().classify()
    }
}

impl fmt::Display for Point3<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.c;
        write!(f, "{},{},{},{}", c[0], c[1], c[2], c[3])
    }
}

/// `nu_3(s, t) = (s^3, s^2 t, s t^2, t^3)`.
pub fn twisted_cubic<E: FieldElem>(s: E, t: E) -> [E; 4] {
    [s * s * s, s * s * t, s * t * t, t * t * t]
}

/// Coefficients `u` of the osculating plane `sum u_i x_i = 0` at
/// `nu_3(s, t)`: `u_i = (-1)^i C(3,i) t^(3-i) s^i`.
pub fn osculating_plane<E: FieldElem>(s: E, t: E) -> [E; 4] {
    let n = |k: i64| s.int_like(k);
    [t * t * t, n(-3) * t * t * s, n(3) * t * s * s, -(s * s * s)]
}

fn point_on<E: FieldElem>(p: &[E; 6], x: &[E; 4]) -> bool {
    let pij = |i: usize, j: usize| -> E {
        let k = PAIRS.iter().position(|&(a, b)| a == i && b == j).unwrap();
        p[k]
    };
    for i in 0..4 {
        for j in (i + 1)..4 {
            for k in (j + 1)..4 {
                let v = pij(i, j) * x[k] - pij(i, k) * x[j] + pij(j, k) * x[i];
                if !v.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

fn in_plane<E: FieldElem>(p: &[E; 6], u: &[E; 4]) -> bool {
    let z = u[0].zero_like();
    let pij = |i: usize, j: usize| -> E {
        if i == j {
            return z;
        }
        let (a, b, sgn) = if i < j { (i, j, false) } else { (j, i, true) };
        let k = PAIRS.iter().position(|&(x, y)| x == a && y == b).unwrap();
        if sgn {
            -p[k]
        } else {
            p[k]
        }
    };
    (0..4).all(|i| (0..4).fold(z, |acc, j| acc + pij(i, j) * u[j]).is_zero())
}

/// A line of `PG(3,q)` as a normalized point of the Klein quadric.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Line<'a> {
    p: [Fq<'a>; 6],
}

impl<'a> Line<'a> {
    /// The line through two points.
    pub fn from_points(a: [Fq<'a>; 4], b: [Fq<'a>; 4]) -> Result<Self> {
        let p: [Fq<'a>; 6] = std::array::from_fn(|k| {
            let (i, j) = PAIRS[k];
            a[i] * b[j] - a[j] * b[i]
        });
        if p.iter().all(|x| x.is_zero()) {
            return Err(Error::DependentPoints);
        }
        Ok(Self::normalize(p))
    }

    /// From raw Plücker coordinates, validated against the quadric.
    pub fn from_plucker(p: [Fq<'a>; 6]) -> Result<Self> {
        if p.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroInput);
        }
        if !(p[0] * p[5] - p[1] * p[4] + p[2] * p[3]).is_zero() {
            return Err(Error::NotOnKleinQuadric);
        }
        Ok(Self::normalize(p))
    }

    /// From `z`-coordinates.
    pub fn from_z(z: [Fq<'a>; 6]) -> Result<Self> {
        let n = |k: i64| z[0].int_like(k);
        Self::from_plucker([
            z[0],
            n(2) * z[1],
            n(3) * (z[2] + z[5]),
            z[2] - z[5],
            n(2) * z[3],
            z[4],
        ])
    }

    fn normalize(p: [Fq<'a>; 6]) -> Self {
        let lead = p.iter().find(|x| !x.is_zero()).unwrap();
        let inv = lead.inv().unwrap();
        Line { p: p.map(|x| x * inv) }
    }

    pub fn plucker(&self) -> [Fq<'a>; 6] {
        self.p
    }

    /// `z`-coordinates, scaled consistently with the Plücker vector.
    pub fn z(&self) -> [Fq<'a>; 6] {
        let p = self.p;
        let n = |k: i64| p[0].int_like(k);
        let i2 = n(2).inv().unwrap();
        let i6 = n(6).inv().unwrap();
        // p03 = 3(z2 + z5), p12 = z2 - z5
        let z2 = (p[2] + n(3) * p[3]) * i6;
        let z5 = (p[2] - n(3) * p[3]) * i6;
        [p[0], p[1] * i2, z2, p[4] * i2, p[5], z5]
    }

    fn sample(&self) -> Fq<'a> {
        self.p[0]
    }

    /// The polar line: negates `z5`.
    pub fn hodge_star(&self) -> Self {
        let mut z = self.z();
        z[5] = -z[5];
        Self::from_z(z).expect("the polarity preserves the quadric")
    }

    pub fn polar_dual(&self) -> Self {
        self.hodge_star()
    }

    pub fn is_self_dual(&self) -> bool {
        self.z()[5].is_zero()
    }

    /// The quartic `z0 Y^4 - 4 z1 Y^3 X + 6 z2 Y^2 X^2 - 4 z3 Y X^3 + z4 X^4`.
    pub fn pi(&self) -> QuarticForm<'a> {
        let z = self.z();
        QuarticForm::new([z[0], z[1], z[2], z[3], z[4]])
            .expect("a line on the quadric has nonzero projection")
    }

    /// Action by `wedge^2 g^[3]`.
    pub fn act(&self, g: &Pgl2<Fq<'a>>) -> Self {
        self.act_with(&wedge2(&g_bracket(3, g.entries())))
    }

    /// Action by a precomputed `wedge^2` matrix.
    pub fn act_with(&self, w: &[[Fq<'a>; 6]; 6]) -> Self {
        let z = self.sample().zero_like();
        let p: [Fq<'a>; 6] =
            std::array::from_fn(|r| (0..6).fold(z, |acc, c| acc + w[r][c] * self.p[c]));
        Self::normalize(p)
    }

    /// Integer key; lexicographic order of keys is that of the Plücker
    /// encodings.
    pub fn key(&self) -> u64 {
        let q = self.sample().q();
        self.p.iter().fold(0u64, |acc, x| acc * q + x.value() as u64)
    }

    pub fn from_key(sample: Fq<'a>, mut key: u64) -> Self {
        let q = sample.q();
        let mut p = [sample.zero_like(); 6];
        for slot in p.iter_mut().rev() {
            *slot = sample.decode_like((key % q) as u128);
            key /= q;
        }
        Line { p }
    }

    /// Reduced echelon generator matrix.
    pub fn generators(&self) -> [[Fq<'a>; 4]; 2] {
        let z = self.sample().zero_like();
        // the dual Plücker vector, read as a skew matrix, has the planes
        // through the line as its rows
        let dual = [self.p[5], -self.p[4], self.p[3], self.p[2], -self.p[1], self.p[0]];
        let dual_pij = |i: usize, j: usize| -> Fq<'a> {
            if i == j {
                return z;
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            let k = PAIRS.iter().position(|&(x, y)| x == a && y == b).unwrap();
            if i < j {
                dual[k]
            } else {
                -dual[k]
            }
        };
        let planes: Vec<Vec<Fq<'a>>> = (0..4).map(|i| (0..4).map(|j| dual_pij(i, j)).collect()).collect();
        let ker = linalg::kernel(&planes, 4, z);
        debug_assert_eq!(ker.len(), 2);
        let mut m = vec![ker[0].clone(), ker[1].clone()];
        linalg::rref(&mut m);
        [
            std::array::from_fn(|k| m[0][k]),
            std::array::from_fn(|k| m[1][k]),
        ]
    }

    /// The `q + 1` rational points of the line.
    pub fn points(&self) -> Vec<Point3<'a>> {
        let [a, b] = self.generators();
        let s = self.sample();
        let mut out = vec![Point3::new(b).unwrap()];
        for x in s.all() {
            let c: [Fq<'a>; 4] = std::array::from_fn(|k| a[k] + x * b[k]);
            out.push(Point3::new(c).unwrap());
        }
        out
    }

    pub fn contains(&self, x: &Point3<'a>) -> bool {
        point_on(&self.p, &x.c)
    }

    /// Whether the line lies in the plane `sum u_i x_i = 0`.
    pub fn in_plane(&self, u: [Fq<'a>; 4]) -> bool {
        in_plane(&self.p, &u)
    }

    /// Whether the line meets the tangent to `C` at `nu_3(s, t)`.
    pub fn meets_tangent(&self, s: Fq<'a>, t: Fq<'a>) -> bool {
        let p = self.p;
        let n = |k: i64| s.int_like(k);
        let v = t.pow(4) * p[0] - n(2) * s * t.pow(3) * p[1]
            + s * s * t * t * (p[2] + n(3) * p[3])
            - n(2) * s.pow(3) * t * p[4]
            + s.pow(4) * p[5];
        v.is_zero()
    }

    /// Counts of the line's rational points in each of the five point
    /// orbits.
    pub fn point_profile(&self) -> [usize; 5] {
        let mut out = [0; 5];
        for x in self.points() {
            out[x.orbit() as usize - 1] += 1;
        }
        out
    }

    /// Orbit under `PGL2(q)` by closure under the three generators.
    pub fn orbit(&self) -> Vec<Line<'a>> {
        let gens: Vec<_> = generators_like(self.sample())
            .iter()
            .map(|g| wedge2(&g_bracket(3, g.entries())))
            .collect();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(*self);
        queue.push_back(*self);
        let mut out = Vec::new();
        while let Some(l) = queue.pop_front() {
            out.push(l);
            for w in &gens {
                let m = l.act_with(w);
                if seen.insert(m) {
                    queue.push_back(m);
                }
            }
        }
        out
    }

    /// `{g : g.L = L}` by exhaustive scan.
    pub fn stabilizer(&self) -> Vec<Pgl2<Fq<'a>>> {
        pgl2_elements_like(self.sample())
            .into_iter()
            .filter(|g| self.act(g) == *self)
            .collect()
    }

    /// Whether the line is generic: it misses `C` and lies in no
    /// osculating plane. Equivalent to `pi(L)` having four distinct roots.
    pub fn is_generic(&self) -> bool {
        !self.pi().discriminant().is_zero()
    }

    /// Full classification.
    pub fn classify(&self) -> Result<LineClass> {
        let f = self.pi();
        let (kind, qlabel) = f.orbit_label()?;
        let q = self.sample().q();
        let group = q * q * q - q;
        if kind == QuarticType::F0 {
            let QuarticLabel::Degenerate(n) = qlabel else {
                unreachable!()
            };
            let label = self.nongeneric_label(n);
            let size = label.orbit_size(q);
            return Ok(LineClass {
                label: LineLabel::Nongeneric(label),
                quartic: qlabel,
                kind,
                orbit_size: size,
                stabilizer_order: group / size,
            });
        }
        let orbit = self.orbit();
        let size = orbit.len() as u64;
        let star = self.hodge_star();
        let branch = if orbit.contains(&star) {
            Branch::SelfDual
        } else {
            let mine = orbit.iter().map(|l| l.key()).min().unwrap();
            let theirs = star.orbit().iter().map(|l| l.key()).min().unwrap();
            if mine < theirs {
                Branch::Plus
            } else {
                Branch::Minus
            }
        };
        Ok(LineClass {
            label: LineLabel::Generic(qlabel, branch),
            quartic: qlabel,
            kind,
            orbit_size: size,
            stabilizer_order: group / size,
        })
    }

    /// Label of a line with `pi(L)` on the discriminant locus, decided by
    /// incidence with `C` at a repeated root of `pi(L)`.
    fn nongeneric_label(&self, n: u8) -> NongenericLabel {
        use NongenericLabel as N;
        if n == 1 {
            return N::O2;
        }
        if n == 2 {
            return N::O4;
        }
        let rm = self.pi().roots();
        let (r, _) = *rm.roots.iter().find(|(_, m)| *m >= 2).unwrap();
        let p: [Ext<'a>; 6] = self.p.map(|x| rm.ext.embed(x));
        let through = point_on(&p, &twisted_cubic(r.s(), r.t()));
        let inside = in_plane(&p, &osculating_plane(r.s(), r.t()));
        debug_assert!(through != inside, "exactly one incidence holds");
        match (n, through) {
            (3, true) => N::O1,
            (3, false) => N::O1Perp,
            (4, true) => N::O3,
            (4, false) => N::O3Perp,
            (5, true) => N::O51,
            (5, false) => N::O51Perp,
            (6, true) => N::O52,
            _ => N::O52Perp,
        }
    }

    /// Total number of lines, `(q^2 + 1)(q^2 + q + 1)`.
    pub fn count(q: u64) -> u64 {
        (q * q + 1) * (q * q + q + 1)
    }

    /// Every line, sorted by key.
    pub fn all(f: &FieldCtx) -> Vec<Line<'_>> {
        let els: Vec<Fq<'_>> = f.elements().collect();
        let (z, o) = (f.zero(), f.one());
        let mut out = Vec::with_capacity(Self::count(f.q()) as usize);
        // reduced echelon generator matrices by pivot pattern
        for a in &els {
            for b in &els {
                for c in &els {
                    for d in &els {
                        out.push(Line::from_points([o, z, *a, *b], [z, o, *c, *d]).unwrap());
                    }
                }
            }
        }
        for a in &els {
            for b in &els {
                for c in &els {
                    out.push(Line::from_points([o, *a, z, *b], [z, z, o, *c]).unwrap());
                }
            }
        }
        for a in &els {
            for b in &els {
                out.push(Line::from_points([o, *a, *b, z], [z, z, z, o]).unwrap());
            }
        }
        for a in &els {
            for b in &els {
                out.push(Line::from_points([z, o, z, *a], [z, z, o, *b]).unwrap());
            }
        }
        for a in &els {
            out.push(Line::from_points([z, o, *a, z], [z, z, z, o]).unwrap());
        }
        out.push(Line::from_points([z, z, o, z], [z, z, z, o]).unwrap());
        out.sort_by_key(|l| l.key());
        out
    }
}

impl fmt::Display for Line<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        write!(f, "[{},{},{},{},{},{}]", p[0], p[1], p[2], p[3], p[4], p[5])
    }
}

/// The tangent line to `C` at `nu_3(s, t)`.
pub fn tangent_line<'a>(s: Fq<'a>, t: Fq<'a>) -> Result<Line<'a>> {
    if s.is_zero() && t.is_zero() {
        return Err(Error::ZeroInput);
    }
    let z = s.zero_like();
    Line::from_z([s.pow(4), s.pow(3) * t, s * s * t * t, s * t.pow(3), t.pow(4), z])
}

/// The lines over a quartic `f` with `I(f)` a square: one self-dual line
/// when `I(f) = 0`, otherwise a polar pair.
pub fn lift<'a>(f: &QuarticForm<'a>) -> Result<Vec<Line<'a>>> {
    let i = f.invariant_i();
    let Some(r) = i.try_sqrt()? else {
        return Err(Error::NotInFPlus);
    };
    let z = f.z();
    let l1 = Line::from_z([z[0], z[1], z[2], z[3], z[4], r])?;
    if r.is_zero() {
        return Ok(vec![l1]);
    }
    let l2 = Line::from_z([z[0], z[1], z[2], z[3], z[4], -r])?;
    Ok(vec![l1, l2])
}

/// Duality branch of a generic line orbit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Branch {
    /// The orbit contains the polar of each of its lines.
    SelfDual,
    /// Of a polar pair of orbits, the one containing the least key.
    Plus,
    Minus,
}

/// The ten orbits of non-generic lines.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum NongenericLabel {
    /// Tangents.
    O2,
    /// Non-tangent unisecants in osculating planes.
    O4,
    /// Real chords.
    O1,
    /// Real axes.
    O1Perp,
    /// Imaginary chords.
    O3,
    /// Imaginary axes.
    O3Perp,
    O51,
    O51Perp,
    O52,
    O52Perp,
}

impl NongenericLabel {
    pub const ALL: [NongenericLabel; 10] = [
        NongenericLabel::O2,
        NongenericLabel::O4,
        NongenericLabel::O1,
        NongenericLabel::O1Perp,
        NongenericLabel::O3,
        NongenericLabel::O3Perp,
        NongenericLabel::O51,
        NongenericLabel::O51Perp,
        NongenericLabel::O52,
        NongenericLabel::O52Perp,
    ];

    pub fn orbit_size(&self, q: u64) -> u64 {
        use NongenericLabel as N;
        match self {
            N::O2 => q + 1,
            N::O4 => q * (q + 1),
            N::O1 | N::O1Perp => (q * q + q) / 2,
            N::O3 | N::O3Perp => (q * q - q) / 2,
            _ => (q * q * q - q) / 2,
        }
    }

    /// Index of the discriminant-zero quartic orbit below this one.
    pub fn quartic(&self) -> u8 {
        use NongenericLabel as N;
        match self {
            N::O2 => 1,
            N::O4 => 2,
            N::O1 | N::O1Perp => 3,
            N::O3 | N::O3Perp => 4,
            N::O51 | N::O51Perp => 5,
            N::O52 | N::O52Perp => 6,
        }
    }
}

impl fmt::Display for NongenericLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NongenericLabel as N;
        f.write_str(match self {
            N::O2 => "O2",
            N::O4 => "O4",
            N::O1 => "O1",
            N::O1Perp => "O1perp",
            N::O3 => "O3",
            N::O3Perp => "O3perp",
            N::O51 => "O51",
            N::O51Perp => "O51perp",
            N::O52 => "O52",
            N::O52Perp => "O52perp",
        })
    }
}

/// Orbit label of a line.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum LineLabel {
    Nongeneric(NongenericLabel),
    Generic(QuarticLabel, Branch),
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineLabel::Nongeneric(n) => write!(f, "{n}"),
            LineLabel::Generic(q, b) => {
                let tag = match b {
                    Branch::SelfDual => "sd",
                    Branch::Plus => "+",
                    Branch::Minus => "-",
                };
                write!(f, "{q}/{tag}")
            }
        }
    }
}

impl FromStr for LineLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(n) = NongenericLabel::ALL.iter().find(|n| n.to_string() == s) {
            return Ok(LineLabel::Nongeneric(*n));
        }
        let bad = || Error::InvalidLabel(s.to_string());
        let (q, tag) = s.rsplit_once('/').ok_or_else(bad)?;
        let branch = match tag {
            "sd" => Branch::SelfDual,
            "+" => Branch::Plus,
            "-" => Branch::Minus,
            _ => return Err(bad()),
        };
        Ok(LineLabel::Generic(q.parse()?, branch))
    }
}

/// Classification record for a line.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LineClass {
    pub label: LineLabel,
    pub quartic: QuarticLabel,
    pub kind: QuarticType,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
}

// ---------------------------------------------------------------------------
// Generator matrices for generic orbits.

type Gens<'a> = [[Fq<'a>; 4]; 2];

fn gens_line<'a>(m: Gens<'a>) -> Option<Line<'a>> {
    Line::from_points(m[0], m[1]).ok()
}

/// Candidate generator matrices for the generic orbits lying over a quartic
/// label, in the closed forms of the standard tables. Both signs are
/// returned where the closed form carries a `+-`. Returns an empty list
/// when no closed form applies at this `q`.
pub fn table_generators(f: &FieldCtx, label: QuarticLabel) -> Result<Vec<Gens<'_>>> {
    let q = f.q();
    let (z, o) = (f.zero(), f.one());
    let n = |k: i64| f.int(k);
    let eps = f.epsilon().unwrap();
    let gamma = f.generator();
    let mut out = Vec::new();
    match label {
        QuarticLabel::E(r) => {
            let r = f.elem(r as u64)?;
            if let Some(s0) = (o - n(1728) / r).sqrt() {
                for s in pm(s0) {
                    out.push([
                        [n(16) * s / n(3), n(2), o, z],
                        [n(128) * s * s / n(27), n(16) * s / n(9), z, o],
                    ]);
                }
            }
        }
        QuarticLabel::Psi1728 => {
            if let Some(s) = n(3).sqrt() {
                out.push([[o, -o / s, z, z], [z, z, o, s]]);
            }
        }
        QuarticLabel::Cusp => match f.omega() {
            Some(w) => out.push([[o, (o - w) / n(3), z, z], [z, z, o, o - w]]),
            None => out.push([[o, z, z, n(-2)], [z, z, o, z]]),
        },
        QuarticLabel::Ups0 => {
            if let Some(s) = (n(3) * eps).sqrt() {
                out.push([[o, -s / n(3), z, z], [z, z, o, s]]);
            }
        }
        QuarticLabel::CubeTwist(i) => {
            let r = gamma.pow(i as u128);
            out.push([[o, z, z, n(-2) * r], [z, z, o, z]]);
        }
        QuarticLabel::PsiPrime(l) => {
            let lam = f.elem(l as u64)?;
            let Some(alpha) = alpha_for(lam) else {
                return Ok(out);
            };
            let c = alpha.coeffs();
            let (x, y) = (c[0], c[1]);
            // the closed form reads lambda as 1/chi1(alpha); it covers the
            // special values -1 and -omega as well
            let lam = o / chi1(alpha);
            if let Some(sq) = (lam * lam - lam + o).sqrt() {
                let base = eps * y * (o + lam) / (o - lam);
                for s in pm(n(2) * eps * y * sq / (n(3) * (o - lam))) {
                    out.push([[o, z, -base / n(3) + s, eps * x], [z, o, x, base + n(3) * s]]);
                }
            }
        }
        QuarticLabel::UpsPrime(j) => {
            let j = f.elem(j as u64)?;
            if q % 4 == 1 {
                ups_prime_1(f, j, &mut out);
            } else {
                ups_prime_3(f, j, &mut out);
            }
        }
        QuarticLabel::Degenerate(_) => return Err(Error::InvalidLabel(label.to_string())),
    }
    Ok(out)
}

fn pm(x: Fq<'_>) -> Vec<Fq<'_>> {
    if x.is_zero() {
        vec![x]
    } else {
        vec![x, -x]
    }
}

fn ups_prime_1<'a>(f: &'a FieldCtx, j: Fq<'a>, out: &mut Vec<Gens<'a>>) {
    let q = f.q();
    let (z, o) = (f.zero(), f.one());
    let n = |k: i64| f.int(k);
    let gamma = f.generator();
    let k1728 = n(1728);
    if j == k1728 {
        if let Some(s) = (n(-3) * gamma).sqrt() {
            out.push([[o, z, s / n(3), z], [z, o, z, s]]);
        }
        return;
    }
    if j.is_zero() && q % 12 == 5 {
        let Some(r) = (n(3) * gamma).sqrt() else {
            return;
        };
        let t = -r / n(2);
        if !t.is_square() {
            if let Some(sq) = (t * gamma).sqrt() {
                out.push([[o, z, t / n(3), n(-2) * sq], [z, o, z, -t]]);
            }
        } else {
            let sq = t.sqrt().unwrap();
            out.push([[o, z, gamma * t / n(3), n(-2) * gamma * gamma * sq], [z, o, z, -gamma * t]]);
        }
        return;
    }
    let e2 = f.tower(2);
    let Some(lam) = norm_one_lambda(j) else {
        return;
    };
    let i = e2.embed(n(-1).sqrt().unwrap());
    let theta2 = e2.embed(gamma).sqrt().unwrap();
    let one = e2.one();
    let two = e2.int(2);
    let Some(t) = (i * theta2 * (one + lam) / (two * (one - lam))).to_base() else {
        return;
    };
    let Some(sq) = (lam * lam - lam + one).sqrt() else {
        return;
    };
    let s0 = two * i * theta2 * sq / (one - lam);
    for sign in [1i64, -1] {
        let Some(s) = (s0 * e2.int(sign)).to_base() else {
            continue;
        };
        let eps = f.epsilon().unwrap();
        if (eps * t).is_square() {
            let r = (t * gamma).sqrt().unwrap();
            out.push([[o, z, (t + s) / n(3), n(-2) * r], [z, o, z, s - t]]);
        } else if let Some(r) = t.sqrt() {
            out.push([
                [o, z, gamma * (t + s) / n(3), n(-2) * gamma * gamma * r],
                [z, o, z, gamma * (s - t)],
            ]);
        }
    }
}

fn ups_prime_3<'a>(f: &'a FieldCtx, j: Fq<'a>, out: &mut Vec<Gens<'a>>) {
    let q = f.q();
    let (z, o) = (f.zero(), f.one());
    let n = |k: i64| f.int(k);
    let (t0, t1) = theta_pair(o);
    if j == n(1728) {
        let Some(s) = n(-3).sqrt() else {
            return;
        };
        // the general closed form at lambda = -1
        for s in pm(s) {
            push_ups3(-t0 / n(2), t0, t1, s, out);
        }
        return;
    }
    if j.is_zero() && q % 12 == 11 {
        let Some(r3) = n(3).sqrt() else {
            return;
        };
        let t = (r3 - t0) / n(2);
        push_ups3(t, t0, t1, z, out);
        return;
    }
    let e2 = f.tower(2);
    let Some(lam) = norm_one_lambda(j) else {
        return;
    };
    let one = e2.one();
    let two = e2.int(2);
    let i = e2.int(-1).sqrt().unwrap();
    let Some(t) = (e2.embed(-t0 / n(2)) + i * (lam + one) / (two * (lam - one))).to_base() else {
        return;
    };
    let Some(sq) = (-(lam * lam) + lam - one).sqrt() else {
        return;
    };
    for sign in [1i64, -1] {
        let Some(s) = (two * sq / (one - lam) * e2.int(sign)).to_base() else {
            continue;
        };
        push_ups3(t, t0, t1, s, out);
    }
}

fn push_ups3<'a>(t: Fq<'a>, t0: Fq<'a>, t1: Fq<'a>, s: Fq<'a>, out: &mut Vec<Gens<'a>>) {
    let (z, o) = (t.zero_like(), t.one_like());
    let n = |k: i64| t.int_like(k);
    if let Some(r) = (-t).sqrt() {
        out.push([[o, z, (t - t0 + s) / n(3), n(2) * t1 * r], [z, o, z, s + t0 - t]]);
    } else {
        let r = t.sqrt().unwrap();
        out.push([[o, z, (-t + t0 + s) / n(3), n(2) * t1 * r], [z, o, z, s - t0 + t]]);
    }
}

fn norm_one_lambda<'a>(j: Fq<'a>) -> Option<Ext<'a>> {
    use crate::projective::j_of_lambda;
    let e2 = j.tower(2);
    let target = e2.embed(j);
    e2.elements().find(|&l| {
        !l.is_zero()
            && l != e2.one()
            && e2.norm_to_base(l).is_one()
            && j_of_lambda(l).ok() == Some(target)
    })
}

/// Generic line labels for the field, with the lifts of each quartic
/// orbit in `F+`.
pub fn generic_labels(f: &FieldCtx) -> Result<Vec<LineLabel>> {
    let mut out = Vec::new();
    for ql in crate::quartic::all_labels(f)? {
        if matches!(ql, QuarticLabel::Degenerate(_)) {
            continue;
        }
        let rep = representative(f, ql)?;
        let Ok(lines) = lift(&rep) else {
            continue;
        };
        if lines.len() == 1 || lines[0].orbit().contains(&lines[1]) {
            out.push(LineLabel::Generic(ql, Branch::SelfDual));
        } else {
            out.push(LineLabel::Generic(ql, Branch::Plus));
            out.push(LineLabel::Generic(ql, Branch::Minus));
        }
    }
    Ok(out)
}

/// A representative of a line orbit.
///
/// Generic orbits use the closed-form generator matrices when one of them
/// lands in the requested orbit; otherwise the line is lifted from the
/// quartic representative. Non-generic orbits use explicit incidences.
pub fn line_representative(f: &FieldCtx, label: LineLabel) -> Result<Line<'_>> {
    f.require_classifiable()?;
    match label {
        LineLabel::Nongeneric(n) => nongeneric_representative(f, n),
        LineLabel::Generic(ql, _) => {
            for m in table_generators(f, ql)? {
                if let Some(l) = gens_line(m) {
                    if l.is_generic() && l.classify()?.label == label {
                        return Ok(l);
                    }
                }
            }
            lifted_representative(f, label)
        }
    }
}

/// Representative obtained by lifting the quartic representative.
pub fn lifted_representative(f: &FieldCtx, label: LineLabel) -> Result<Line<'_>> {
    let LineLabel::Generic(ql, _) = label else {
        return Err(Error::InvalidLabel(label.to_string()));
    };
    let rep = representative(f, ql)?;
    for l in lift(&rep)? {
        if l.classify()?.label == label {
            return Ok(l);
        }
    }
    Err(Error::InvalidLabel(label.to_string()))
}

fn nongeneric_representative(f: &FieldCtx, n: NongenericLabel) -> Result<Line<'_>> {
    let rep = representative(f, QuarticLabel::Degenerate(n.quartic()))?;
    let lines = lift(&rep)?;
    for l in lines {
        if l.classify()?.label == LineLabel::Nongeneric(n) {
            return Ok(l);
        }
    }
    Err(Error::InvalidLabel(n.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::make_field;

    #[test]
    fn bracket_matches_displayed_matrix() {
        let f = make_field(13, 1).unwrap();
        let (a, b, c, d) = (f.int(2), f.int(3), f.int(5), f.int(7));
        let m = g_bracket(3, [a, b, c, d]);
        let n = |k: i64| f.int(k);
        assert_eq!(m[0], vec![a * a * a, n(3) * a * a * b, n(3) * a * b * b, b * b * b]);
        assert_eq!(
            m[1],
            vec![a * a * c, a * (a * d + n(2) * b * c), b * (b * c + n(2) * a * d), b * b * d]
        );
    }

    #[test]
    fn plucker_examples() {
        let f = make_field(7, 1).unwrap();
        let (z, o) = (f.zero(), f.one());
        let l = Line::from_points([o, z, z, z], [z, o, z, z]).unwrap();
        assert_eq!(l.plucker(), [o, z, z, z, z, z]);
        let l2 = Line::from_points([z, o, z, z], [o, z, z, z]).unwrap();
        assert_eq!(l, l2);
        assert!(Line::from_points([o, z, z, z], [f.int(2), z, z, z]).is_err());
    }

    #[test]
    fn secant_axis_duality() {
        let f = make_field(11, 1).unwrap();
        let (z, o) = (f.zero(), f.one());
        let t = f.int(4);
        // chord through nu(1,0) and nu(1,t)
        let chord = Line::from_points([o, z, z, z], [o, t, t * t, t * t * t]).unwrap();
        let axis = Line::from_plucker([o, t, z, t * t / f.int(3), z, z]).unwrap();
        assert_eq!(chord.hodge_star(), axis);
    }

    #[test]
    fn ell_nu_projection() {
        let f = make_field(13, 1).unwrap();
        let (z, o) = (f.zero(), f.one());
        let nu = f.int(5);
        let l = Line::from_points([z, nu, z, o], [o, z, o, z]).unwrap();
        let want = QuarticForm::new([nu, z, (o - f.int(3) * nu) / f.int(6), z, o]).unwrap();
        assert!(l.pi().same_projective(&want));
    }

    #[test]
    fn enumeration_is_complete() {
        let f = make_field(5, 1).unwrap();
        let all = Line::all(&f);
        assert_eq!(all.len() as u64, Line::count(5));
        let set: HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        for l in all.iter().take(50) {
            let [a, b] = l.generators();
            assert_eq!(Line::from_points(a, b).unwrap(), *l);
        }
    }

    #[test]
    fn tangent_lines() {
        let f = make_field(7, 1).unwrap();
        let (z, o) = (f.zero(), f.one());
        let t = tangent_line(o, z).unwrap();
        assert_eq!(t.plucker(), [o, z, z, z, z, z]);
        assert_eq!(t.classify().unwrap().label, LineLabel::Nongeneric(NongenericLabel::O2));
        let tl = tangent_line(f.int(2), f.int(3)).unwrap();
        assert!(tl.is_self_dual());
        assert!(tl.meets_tangent(f.int(2), f.int(3)));
    }
}
