//! Exact arithmetic in `F_q = F_{p^k}` and in relative extensions `F_{q^d}`.
//!
//! Elements of `F_q` are stored by their canonical integer encoding: the
//! coefficient vector over `F_p` read as a little-endian base-`p` number.
//! Multiplication and, for `k > 1`, addition go through discrete-log and
//! Zech-log tables built once per context.
//!
//! Extensions `F_{q^d}` are polynomials over `F_q` modulo a canonical monic
//! irreducible, so the relative Frobenius `x -> x^q` and relative norms are
//! single-step operations.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Default bound on `q = p^k`.
pub const DEFAULT_BOUND: u64 = 1 << 20;

const NONE: u32 = u32::MAX;

/// Operations shared by base-field and extension-field elements.
pub trait FieldElem:
    Copy
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Div<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// Number of elements of the field this element lives in.
    fn field_size(&self) -> u128;
    fn characteristic(&self) -> u64;
    /// Canonical integer encoding.
    fn encode(&self) -> u128;
    /// The element with the given canonical encoding.
    fn decode_like(&self, n: u128) -> Self;
    /// Image of an integer.
    fn int_like(&self, n: i64) -> Self;
    /// The least non-square of the field (odd characteristic only).
    fn non_square(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut e: u128) -> Self {
        let mut base = *self;
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Euler criterion; zero counts as a square.
    fn is_square(&self) -> bool {
        if self.is_zero() || self.characteristic() == 2 {
            return true;
        }
        self.pow((self.field_size() - 1) / 2).is_one()
    }

    /// Canonical square root: of the two roots, the one with the smaller
    /// encoding. Odd characteristic only.
    fn sqrt(&self) -> Option<Self> {
        let r = sqrt_raw(*self)?;
        let s = -r;
        Some(if s.encode() < r.encode() { s } else { r })
    }

    /// Square root that reports characteristic 2 as an error.
    fn try_sqrt(&self) -> Result<Option<Self>> {
        if self.characteristic() == 2 {
            return Err(Error::UnsupportedCharacteristic(2));
        }
        Ok(self.sqrt())
    }
}

/// Some square root of `x`, using the `(Q+1)/4` exponent when `Q = 3 mod 4`
/// and Tonelli-Shanks otherwise.
fn sqrt_raw<E: FieldElem>(x: E) -> Option<E> {
    assert!(x.characteristic() != 2, "sqrt needs odd characteristic");
    if x.is_zero() {
        return Some(x);
    }
    if !x.is_square() {
        return None;
    }
    let qq = x.field_size();
    if qq % 4 == 3 {
        return Some(x.pow((qq + 1) / 4));
    }
    let mut s = 0u32;
    let mut odd = qq - 1;
    while odd % 2 == 0 {
        odd /= 2;
        s += 1;
    }
    let z = x.non_square();
    let mut m = s;
    let mut c = z.pow(odd);
    let mut t = x.pow(odd);
    let mut r = x.pow((odd + 1) / 2);
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t;
        while !t2.is_one() {
            t2 = t2 * t2;
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = b * b;
        }
        m = i;
        c = b * b;
        t = t * c;
        r = r * b;
    }
    Some(r)
}

// ---------------------------------------------------------------------------
// Prime-field helpers used only while building contexts.

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomials over `F_p` as little-endian `u64` vectors, for context setup.
mod fp {
    pub fn trim(a: &mut Vec<u64>) {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
    }

    fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        if dm == 0 {
            return vec![0];
        }
        let lead_inv = inv(m[dm], p);
        while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            for j in 0..=dm {
                let idx = top - dm + j;
                r[idx] = (r[idx] + p * p - c * m[j] % p) % p;
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn powmod(b: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = rem(b, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !(b.len() == 1 && b[0] == 0) {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin-style irreducibility test for a monic `m` of degree `k`.
    pub fn irreducible(m: &[u64], p: u64) -> bool {
        let k = m.len() - 1;
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 0..k / 2 {
            xp = powmod(&xp, p, m, p);
            let mut diff = xp.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            let g = gcd(m, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    pub fn encode(a: &[u64], p: u64, k: usize) -> u64 {
        let mut n = 0;
        for i in (0..k).rev() {
            n = n * p + a.get(i).copied().unwrap_or(0);
        }
        n
    }

    pub fn decode(mut n: u64, p: u64, k: usize) -> Vec<u64> {
        let mut v = Vec::with_capacity(k);
        for _ in 0..k {
            v.push(n % p);
            n /= p;
        }
        v
    }

    pub fn least_non_residue(p: u64) -> u64 {
        (2..p).find(|&a| pow(a, (p - 1) / 2, p) == p - 1).unwrap_or(0)
    }
}

// ---------------------------------------------------------------------------
// Base field.

pub(crate) struct FieldData {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    gamma: u32,
    eps: Option<u32>,
    omega: Option<u32>,
    tower: [OnceLock<ExtData>; MAX_DEG],
}

/// An immutable context for `F_q`, cheap to clone and shareable across threads.
#[derive(Clone)]
pub struct FieldCtx {
    d: Arc<FieldData>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx(p={}, k={})", self.d.p, self.d.k)
    }
}

/// Constructs `F_{p^k}` with the default size bound.
pub fn make_field(p: u64, k: u32) -> Result<FieldCtx> {
    FieldCtx::new(p, k)
}

/// Canonical modulus of degree `k` over `F_p`: `x^2 - e` with `e` the least
/// non-residue for quadratic extensions in odd characteristic, otherwise the
/// monic irreducible of least encoding. Degree 1 uses `x`.
fn canonical_prime_modulus(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    if k == 1 {
        return vec![0, 1];
    }
    if k == 2 && p != 2 {
        let e = fp::least_non_residue(p);
        return vec![p - e, 0, 1];
    }
    let count = p.pow(k as u32);
    for n in 0..count {
        let mut m = fp::decode(n, p, k);
        m.push(1);
        if m[0] != 0 && fp::irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl FieldCtx {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        Self::with_bound(p, k, DEFAULT_BOUND)
    }

    pub fn with_bound(p: u64, k: u32, bound: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::BadDegree(k));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= bound)
            .ok_or(Error::FieldTooLarge { p, k, bound })?;
        let ku = k as usize;
        let modulus = canonical_prime_modulus(p, k);
        let mul_codes = |a: u64, b: u64| -> u64 {
            if ku == 1 {
                return a * b % p;
            }
            let r = fp::mulmod(&fp::decode(a, p, ku), &fp::decode(b, p, ku), &modulus, p);
            fp::encode(&r, p, ku)
        };
        let pow_code = |a: u64, mut e: u64| -> u64 {
            let mut acc = 1;
            let mut b = a;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_codes(acc, b);
                }
                b = mul_codes(b, b);
                e >>= 1;
            }
            acc
        };
        let factors = prime_factors(q - 1);
        let gamma = (1..q)
            .find(|&c| q == 2 || factors.iter().all(|&l| pow_code(c, (q - 1) / l) != 1))
            .expect("multiplicative group is cyclic");
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; n.max(1)];
        let mut log = vec![NONE; q as usize];
        let mut cur = 1u64;
        for i in 0..n {
            exp[i] = cur as u32;
            log[cur as usize] = i as u32;
            cur = mul_codes(cur, gamma);
        }
        let add_codes = |a: u64, b: u64| -> u64 {
            let da = fp::decode(a, p, ku);
            let db = fp::decode(b, p, ku);
            let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            fp::encode(&s, p, ku)
        };
        let zech = if ku > 1 {
            (0..n)
                .map(|i| {
                    let s = add_codes(1, exp[i] as u64);
                    if s == 0 {
                        NONE
                    } else {
                        log[s as usize]
                    }
                })
                .collect()
        } else {
            Vec::new()
        };
        let mut data = FieldData {
            p: p as u32,
            k,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            exp,
            log,
            zech,
            gamma: gamma as u32,
            eps: None,
            omega: None,
            tower: Default::default(),
        };
        if p != 2 {
            // with gamma a generator, the non-squares are the odd powers
            data.eps = (1..q as u32).find(|&c| data.log[c as usize] % 2 == 1);
        }
        if q % 3 == 1 {
            let ctx = FieldCtx { d: Arc::new(data) };
            let omega = (2..q as u32).find(|&c| {
                let w = ctx.elem_unchecked(c);
                (w * w * w).is_one()
            });
            let mut data = Arc::try_unwrap(ctx.d).ok().expect("sole owner");
            data.omega = omega;
            return Ok(FieldCtx { d: Arc::new(data) });
        }
        Ok(FieldCtx { d: Arc::new(data) })
    }

    pub fn p(&self) -> u64 {
        self.d.p as u64
    }

    pub fn k(&self) -> u32 {
        self.d.k
    }

    pub fn q(&self) -> u64 {
        self.d.q as u64
    }

    /// Monic modulus over `F_p`, little-endian.
    pub fn modulus(&self) -> &[u32] {
        &self.d.modulus
    }

    /// `mu` in `{1, -1}` with `q = mu mod 3`; zero in characteristic 3.
    pub fn mu(&self) -> i64 {
        match self.q() % 3 {
            1 => 1,
            2 => -1,
            _ => 0,
        }
    }

    pub fn same(&self, other: &FieldCtx) -> bool {
        Arc::ptr_eq(&self.d, &other.d)
    }

    fn elem_unchecked(&self, v: u32) -> Fq<'_> {
        Fq { f: &self.d, v }
    }

    /// Element with canonical encoding `v`.
    pub fn elem(&self, v: u64) -> Result<Fq<'_>> {
        if v >= self.q() {
            return Err(Error::BadElement(v));
        }
        Ok(self.elem_unchecked(v as u32))
    }

    pub fn zero(&self) -> Fq<'_> {
        self.elem_unchecked(0)
    }

    pub fn one(&self) -> Fq<'_> {
        self.elem_unchecked(1)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn int(&self, n: i64) -> Fq<'_> {
        self.elem_unchecked(n.rem_euclid(self.d.p as i64) as u32)
    }

    /// Generator of the multiplicative group (least encoding).
    pub fn generator(&self) -> Fq<'_> {
        self.elem_unchecked(self.d.gamma)
    }

    /// Least non-square; `None` in characteristic 2.
    pub fn epsilon(&self) -> Option<Fq<'_>> {
        self.d.eps.map(|v| self.elem_unchecked(v))
    }

    /// Least primitive cube root of unity, present iff `q = 1 mod 3`.
    pub fn omega(&self) -> Option<Fq<'_>> {
        self.d.omega.map(|v| self.elem_unchecked(v))
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fq<'_>> + '_ {
        (0..self.d.q).map(move |v| self.elem_unchecked(v))
    }

    /// Rejects characteristic 2 and 3 and `q <= 4`, which the
    /// classification machinery does not cover.
    pub fn require_classifiable(&self) -> Result<()> {
        if self.p() == 2 || self.p() == 3 {
            return Err(Error::UnsupportedCharacteristic(self.p()));
        }
        if self.q() <= 4 {
            return Err(Error::FieldTooSmall(self.q()));
        }
        Ok(())
    }

    /// Human-readable modulus, e.g. `x^2+3`.
    pub fn modulus_string(&self) -> String {
        poly_string(&self.d.modulus)
    }
}

fn poly_string(m: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in m.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// An element of `F_q`, tied to its context by reference.
#[derive(Clone, Copy)]
pub struct Fq<'a> {
    f: &'a FieldData,
    v: u32,
}

impl<'a> Fq<'a> {
    /// Canonical encoding.
    pub fn value(&self) -> u32 {
        self.v
    }

    pub(crate) fn with(&self, v: u32) -> Fq<'a> {
        Fq { f: self.f, v }
    }

    pub fn q(&self) -> u64 {
        self.f.q as u64
    }

    pub fn p(&self) -> u64 {
        self.f.p as u64
    }

    /// The generator of `F_q^*` of this element's field.
    pub fn gamma(&self) -> Fq<'a> {
        self.with(self.f.gamma)
    }

    /// The least non-square of this element's field.
    pub fn eps(&self) -> Option<Fq<'a>> {
        self.f.eps.map(|v| self.with(v))
    }

    pub fn omega(&self) -> Option<Fq<'a>> {
        self.f.omega.map(|v| self.with(v))
    }

    /// All elements of this element's field, in encoding order.
    pub fn all(&self) -> impl Iterator<Item = Fq<'a>> + 'a {
        let f = self.f;
        (0..f.q).map(move |v| Fq { f, v })
    }

    /// The cached extension of degree `d` of this element's field.
    pub fn tower(&self, d: usize) -> ExtCtx<'a> {
        assert!((1..=MAX_DEG).contains(&d), "tower degree out of range");
        let f = self.f;
        ExtCtx {
            f,
            e: f.tower[d - 1].get_or_init(|| build_ext(f, d)),
        }
    }

    /// Discrete log to base `gamma`; `None` for zero.
    pub fn log(&self) -> Option<u32> {
        (self.v != 0).then(|| self.f.log[self.v as usize])
    }

    #[inline]
    fn check(&self, o: &Fq<'_>) {
        debug_assert!(std::ptr::eq(self.f, o.f), "mixed field contexts");
    }
}

impl PartialEq for Fq<'_> {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v
    }
}
impl Eq for Fq<'_> {}

impl Hash for Fq<'_> {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.v.hash(h)
    }
}

impl PartialOrd for Fq<'_> {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Fq<'_> {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.v.cmp(&o.v)
    }
}

impl fmt::Debug for Fq<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}
impl fmt::Display for Fq<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl<'a> Add for Fq<'a> {
    type Output = Fq<'a>;
    #[inline]
    fn add(self, o: Fq<'a>) -> Fq<'a> {
        self.check(&o);
        let f = self.f;
        if f.k == 1 {
            let s = self.v + o.v;
            return self.with(if s >= f.p { s - f.p } else { s });
        }
        if self.v == 0 {
            return o;
        }
        if o.v == 0 {
            return self;
        }
        let n = f.q - 1;
        let la = f.log[self.v as usize];
        let lb = f.log[o.v as usize];
        let diff = if lb >= la { lb - la } else { lb + n - la };
        let z = f.zech[diff as usize];
        if z == NONE {
            return self.with(0);
        }
        self.with(f.exp[((la as u64 + z as u64) % n as u64) as usize])
    }
}

impl<'a> Neg for Fq<'a> {
    type Output = Fq<'a>;
    #[inline]
    fn neg(self) -> Fq<'a> {
        let f = self.f;
        if self.v == 0 || f.p == 2 {
            return self;
        }
        if f.k == 1 {
            return self.with(f.p - self.v);
        }
        let n = f.q - 1;
        let l = f.log[self.v as usize];
        self.with(f.exp[((l + n / 2) % n) as usize])
    }
}

impl<'a> Sub for Fq<'a> {
    type Output = Fq<'a>;
    #[inline]
    fn sub(self, o: Fq<'a>) -> Fq<'a> {
        self + (-o)
    }
}

impl<'a> Mul for Fq<'a> {
    type Output = Fq<'a>;
    #[inline]
    fn mul(self, o: Fq<'a>) -> Fq<'a> {
        self.check(&o);
        let f = self.f;
        if self.v == 0 || o.v == 0 {
            return self.with(0);
        }
        if f.k == 1 {
            return self.with(((self.v as u64 * o.v as u64) % f.p as u64) as u32);
        }
        let n = f.q - 1;
        let s = f.log[self.v as usize] + f.log[o.v as usize];
        self.with(f.exp[(if s >= n { s - n } else { s }) as usize])
    }
}

impl<'a> Div for Fq<'a> {
    type Output = Fq<'a>;
    fn div(self, o: Fq<'a>) -> Fq<'a> {
        self * o.inv().expect("division by zero in F_q")
    }
}

impl<'a> AddAssign for Fq<'a> {
    fn add_assign(&mut self, o: Fq<'a>) {
        *self = *self + o;
    }
}
impl<'a> SubAssign for Fq<'a> {
    fn sub_assign(&mut self, o: Fq<'a>) {
        *self = *self - o;
    }
}
impl<'a> MulAssign for Fq<'a> {
    fn mul_assign(&mut self, o: Fq<'a>) {
        *self = *self * o;
    }
}

impl<'a> FieldElem for Fq<'a> {
    fn zero_like(&self) -> Self {
        self.with(0)
    }
    fn one_like(&self) -> Self {
        self.with(1)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        let n = self.f.q - 1;
        let l = self.f.log[self.v as usize];
        Some(self.with(self.f.exp[((n - l) % n) as usize]))
    }
    fn field_size(&self) -> u128 {
        self.f.q as u128
    }
    fn characteristic(&self) -> u64 {
        self.f.p as u64
    }
    fn encode(&self) -> u128 {
        self.v as u128
    }
    fn decode_like(&self, n: u128) -> Self {
        assert!(n < self.f.q as u128);
        self.with(n as u32)
    }
    fn int_like(&self, n: i64) -> Self {
        self.with(n.rem_euclid(self.f.p as i64) as u32)
    }
    fn non_square(&self) -> Self {
        self.with(self.f.eps.expect("odd characteristic"))
    }
    fn pow(&self, e: u128) -> Self {
        if self.v == 0 {
            return if e == 0 { self.with(1) } else { *self };
        }
        let n = (self.f.q - 1) as u128;
        let l = self.f.log[self.v as usize] as u128;
        self.with(self.f.exp[((l * (e % n)) % n) as usize])
    }
    fn is_square(&self) -> bool {
        self.v == 0 || self.f.p == 2 || self.f.log[self.v as usize] % 2 == 0
    }
}

// ---------------------------------------------------------------------------
// Relative extensions.

/// Maximum relative degree.
pub const MAX_DEG: usize = 4;

pub(crate) struct ExtData {
    d: usize,
    /// Monic relative modulus over `F_q`, little-endian, length `d + 1`.
    modulus: Vec<u32>,
    /// `frob[i]` holds the coefficients of `x^{iq}` reduced.
    frob: [[u32; MAX_DEG]; MAX_DEG],
    size: u128,
    nonsq: [u32; MAX_DEG],
}

fn build_ext(f: &FieldData, d: usize) -> ExtData {
    let q = f.q as u128;
    let modulus: Vec<u32> = match d {
        1 => vec![0, 1],
        2 if f.p != 2 => {
            let eps = Fq { f, v: f.eps.unwrap() };
            vec![(-eps).v, 0, 1]
        }
        _ => least_irreducible(f, d),
    };
    let mut e = ExtData {
        d,
        modulus,
        frob: [[0; MAX_DEG]; MAX_DEG],
        size: q.pow(d as u32),
        nonsq: [0; MAX_DEG],
    };
    let frob = {
        let ctx = ExtCtx { f, e: &e };
        let xq = ctx.gen().pow(q);
        let mut out = [[0; MAX_DEG]; MAX_DEG];
        let mut cur = ctx.one();
        for row in out.iter_mut().take(d) {
            *row = cur.c;
            cur = cur * xq;
        }
        out
    };
    e.frob = frob;
    if f.p != 2 {
        let ctx = ExtCtx { f, e: &e };
        let ns = (1..e.size)
            .map(|n| ctx.one().decode_like(n))
            .find(|z| !z.is_square())
            .expect("odd field has non-squares")
            .c;
        e.nonsq = ns;
    }
    e
}

fn least_irreducible(f: &FieldData, d: usize) -> Vec<u32> {
    let q = f.q as u128;
    let one = Fq { f, v: 1 };
    for n in 0..q.pow(d as u32) {
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut m = n;
        for _ in 0..d {
            coeffs.push(one.decode_like(m % q));
            m /= q;
        }
        if coeffs[0].is_zero() {
            continue;
        }
        coeffs.push(one);
        if Poly::new(coeffs.clone()).is_irreducible() {
            return coeffs.iter().map(|c| c.v).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    /// Relative extension of degree `d` in `{2, 3, 4}`.
    pub fn extend(&self, d: u32) -> Result<ExtCtx<'_>> {
        if !(2..=4).contains(&d) {
            return Err(Error::BadExtensionDegree(d));
        }
        Ok(self.tower(d as usize))
    }

    /// Cached extension of degree `d` in `1..=4`. Degree one is `F_q`
    /// itself, which keeps root computations uniform across splitting
    /// degrees.
    pub fn tower(&self, d: usize) -> ExtCtx<'_> {
        self.zero().tower(d)
    }
}

/// Handle on `F_{q^d}` over `F_q`, borrowed from its base [`FieldCtx`].
#[derive(Clone, Copy)]
pub struct ExtCtx<'a> {
    f: &'a FieldData,
    e: &'a ExtData,
}

impl fmt::Debug for ExtCtx<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtCtx(q={}, d={})", self.f.q, self.e.d)
    }
}

impl<'a> ExtCtx<'a> {
    pub fn degree(&self) -> u32 {
        self.e.d as u32
    }

    pub fn size(&self) -> u128 {
        self.e.size
    }

    /// Relative modulus coefficients (encodings in `F_q`), little-endian.
    pub fn modulus(&self) -> &'a [u32] {
        &self.e.modulus
    }

    pub fn modulus_string(&self) -> String {
        poly_string(&self.e.modulus)
    }

    fn raw(&self, c: [u32; MAX_DEG]) -> Ext<'a> {
        Ext {
            f: self.f,
            e: self.e,
            c,
        }
    }

    pub fn zero(&self) -> Ext<'a> {
        self.raw([0; MAX_DEG])
    }

    pub fn one(&self) -> Ext<'a> {
        let mut c = [0; MAX_DEG];
        c[0] = 1;
        self.raw(c)
    }

    /// The adjoined root of the relative modulus.
    pub fn gen(&self) -> Ext<'a> {
        let mut c = [0; MAX_DEG];
        if self.e.d > 1 {
            c[1] = 1;
        }
        self.raw(c)
    }

    /// Canonical embedding of `F_q`.
    pub fn embed(&self, x: Fq<'_>) -> Ext<'a> {
        debug_assert!(std::ptr::eq(x.f, self.f), "mixed field contexts");
        let mut c = [0; MAX_DEG];
        c[0] = x.v;
        self.raw(c)
    }

    pub fn int(&self, n: i64) -> Ext<'a> {
        self.one().int_like(n)
    }

    /// Element from coefficients over `F_q` (little-endian).
    pub fn from_coeffs(&self, cs: &[Fq<'_>]) -> Ext<'a> {
        assert!(cs.len() <= self.e.d);
        let mut c = [0; MAX_DEG];
        for (slot, x) in c.iter_mut().zip(cs) {
            *slot = x.v;
        }
        self.raw(c)
    }

    /// Element with canonical encoding `n`.
    pub fn elem(&self, n: u128) -> Result<Ext<'a>> {
        if n >= self.e.size {
            return Err(Error::BadElement(n as u64));
        }
        Ok(self.one().decode_like(n))
    }

    /// All elements in encoding order; only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = Ext<'a>> + 'a {
        let one = self.one();
        (0..self.e.size).map(move |n| one.decode_like(n))
    }

    /// Relative norm down to the subfield of relative degree `to`, which
    /// must divide `d`. The result stays in this context.
    pub fn norm(&self, x: Ext<'a>, to: u32) -> Result<Ext<'a>> {
        let d = self.e.d as u32;
        if to == 0 || d % to != 0 {
            return Err(Error::NotSubfield);
        }
        let mut acc = x;
        let mut cur = x;
        for _ in 1..(d / to) {
            cur = cur.frobenius_pow(to as usize);
            acc = acc * cur;
        }
        Ok(acc)
    }

    /// Norm to `F_q`.
    pub fn norm_to_base(&self, x: Ext<'a>) -> Fq<'a> {
        self.norm(x, 1)
            .expect("1 divides d")
            .to_base()
            .expect("norm lands in F_q")
    }
}

/// An element of `F_{q^d}`.
#[derive(Clone, Copy)]
pub struct Ext<'a> {
    f: &'a FieldData,
    e: &'a ExtData,
    c: [u32; MAX_DEG],
}

impl<'a> Ext<'a> {
    fn with(&self, c: [u32; MAX_DEG]) -> Ext<'a> {
        Ext {
            f: self.f,
            e: self.e,
            c,
        }
    }

    #[inline]
    fn b(&self, v: u32) -> Fq<'a> {
        Fq { f: self.f, v }
    }

    pub fn ctx(&self) -> ExtCtx<'a> {
        ExtCtx {
            f: self.f,
            e: self.e,
        }
    }

    /// Coefficients over `F_q`, little-endian, length `d`.
    pub fn coeffs(&self) -> Vec<Fq<'a>> {
        (0..self.e.d).map(|i| self.b(self.c[i])).collect()
    }

    /// The element as a member of `F_q`, if it lies there.
    pub fn to_base(&self) -> Option<Fq<'a>> {
        self.c[1..].iter().all(|&v| v == 0).then(|| self.b(self.c[0]))
    }

    /// Embeds a base element into the same extension.
    pub fn lift(&self, x: Fq<'_>) -> Ext<'a> {
        let mut c = [0; MAX_DEG];
        c[0] = x.v;
        self.with(c)
    }

    /// Relative Frobenius `x -> x^q`.
    pub fn frobenius(&self) -> Ext<'a> {
        let d = self.e.d;
        let mut acc = [self.b(0); MAX_DEG];
        for i in 0..d {
            let a = self.b(self.c[i]);
            if a.is_zero() {
                continue;
            }
            for (j, slot) in acc.iter_mut().enumerate().take(d) {
                *slot += a * self.b(self.e.frob[i][j]);
            }
        }
        let mut c = [0; MAX_DEG];
        for j in 0..d {
            c[j] = acc[j].v;
        }
        self.with(c)
    }

    /// `k`-fold Frobenius.
    pub fn frobenius_pow(&self, k: usize) -> Ext<'a> {
        let mut x = *self;
        for _ in 0..(k % self.e.d) {
            x = x.frobenius();
        }
        x
    }
}

impl PartialEq for Ext<'_> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}
impl Eq for Ext<'_> {}

impl Hash for Ext<'_> {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.c.hash(h)
    }
}

impl fmt::Debug for Ext<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Ext<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(b) = self.to_base() {
            return write!(f, "{}", b.v);
        }
        let parts: Vec<String> = self.c[..self.e.d].iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl<'a> Add for Ext<'a> {
    type Output = Ext<'a>;
    fn add(self, o: Ext<'a>) -> Ext<'a> {
        let mut c = [0; MAX_DEG];
        for (i, slot) in c.iter_mut().enumerate().take(self.e.d) {
            *slot = (self.b(self.c[i]) + self.b(o.c[i])).v;
        }
        self.with(c)
    }
}

impl<'a> Neg for Ext<'a> {
    type Output = Ext<'a>;
    fn neg(self) -> Ext<'a> {
        let mut c = [0; MAX_DEG];
        for (i, slot) in c.iter_mut().enumerate().take(self.e.d) {
            *slot = (-self.b(self.c[i])).v;
        }
        self.with(c)
    }
}

impl<'a> Sub for Ext<'a> {
    type Output = Ext<'a>;
    fn sub(self, o: Ext<'a>) -> Ext<'a> {
        self + (-o)
    }
}

impl<'a> Mul for Ext<'a> {
    type Output = Ext<'a>;
    fn mul(self, o: Ext<'a>) -> Ext<'a> {
        let d = self.e.d;
        let mut c = [0; MAX_DEG];
        if d == 1 {
            c[0] = (self.b(self.c[0]) * self.b(o.c[0])).v;
            return self.with(c);
        }
        let mut prod = [self.b(0); 2 * MAX_DEG - 1];
        for i in 0..d {
            let a = self.b(self.c[i]);
            if a.is_zero() {
                continue;
            }
            for j in 0..d {
                prod[i + j] += a * self.b(o.c[j]);
            }
        }
        let m = &self.e.modulus;
        for top in (d..(2 * d - 1)).rev() {
            let t = prod[top];
            if t.is_zero() {
                continue;
            }
            for j in 0..d {
                prod[top - d + j] -= t * self.b(m[j]);
            }
        }
        for i in 0..d {
            c[i] = prod[i].v;
        }
        self.with(c)
    }
}

impl<'a> Div for Ext<'a> {
    type Output = Ext<'a>;
    fn div(self, o: Ext<'a>) -> Ext<'a> {
        self * o.inv().expect("division by zero in extension")
    }
}

impl<'a> AddAssign for Ext<'a> {
    fn add_assign(&mut self, o: Ext<'a>) {
        *self = *self + o;
    }
}
impl<'a> SubAssign for Ext<'a> {
    fn sub_assign(&mut self, o: Ext<'a>) {
        *self = *self - o;
    }
}
impl<'a> MulAssign for Ext<'a> {
    fn mul_assign(&mut self, o: Ext<'a>) {
        *self = *self * o;
    }
}

impl<'a> FieldElem for Ext<'a> {
    fn zero_like(&self) -> Self {
        self.with([0; MAX_DEG])
    }
    fn one_like(&self) -> Self {
        let mut c = [0; MAX_DEG];
        c[0] = 1;
        self.with(c)
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // x^{-1} is the product of the other conjugates over N(x)
        let mut conj = self.one_like();
        let mut cur = *self;
        for _ in 1..self.e.d {
            cur = cur.frobenius();
            conj = conj * cur;
        }
        let n = (*self * conj).to_base().expect("norm lies in F_q");
        Some(conj * self.lift(n.inv()?))
    }
    fn field_size(&self) -> u128 {
        self.e.size
    }
    fn characteristic(&self) -> u64 {
        self.f.p as u64
    }
    fn encode(&self) -> u128 {
        let q = self.f.q as u128;
        let mut n = 0u128;
        for i in (0..self.e.d).rev() {
            n = n * q + self.c[i] as u128;
        }
        n
    }
    fn decode_like(&self, mut n: u128) -> Self {
        let q = self.f.q as u128;
        let mut c = [0; MAX_DEG];
        for slot in c.iter_mut().take(self.e.d) {
            *slot = (n % q) as u32;
            n /= q;
        }
        self.with(c)
    }
    fn int_like(&self, n: i64) -> Self {
        let mut c = [0; MAX_DEG];
        c[0] = n.rem_euclid(self.f.p as i64) as u32;
        self.with(c)
    }
    fn non_square(&self) -> Self {
        self.with(self.e.nonsq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_field_constants() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.generator().value(), 2);
        assert_eq!(f5.epsilon().unwrap().value(), 2);
        assert!(f5.omega().is_none());
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.omega().unwrap().value(), 2);
        let f25 = make_field(5, 2).unwrap();
        let w = f25.omega().unwrap();
        assert!((w * w + w + f25.one()).is_zero());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(6, 1).unwrap_err(), Error::NotPrime(6));
        assert!(matches!(
            make_field(2, 21).unwrap_err(),
            Error::FieldTooLarge { .. }
        ));
        assert!(make_field(3, 2).unwrap().require_classifiable().is_err());
        assert!(make_field(2, 3).is_ok());
    }

    #[test]
    fn prime_power_tables_agree_with_polynomial_arithmetic() {
        let f = make_field(3, 3).unwrap();
        // x^3 = -(m0 + m1 x + m2 x^2) by the modulus, checked via encodings
        let x = f.elem(3).unwrap();
        let m = f.modulus();
        let lower = f.elem(m[0] as u64).unwrap()
            + f.elem(m[1] as u64).unwrap() * x
            + f.elem(m[2] as u64).unwrap() * x * x;
        assert!((x * x * x + lower).is_zero());
    }

    #[test]
    fn quadratic_moduli_use_least_non_residue() {
        let f5 = make_field(5, 1).unwrap();
        let e = f5.extend(2).unwrap();
        // x^2 - 2 over F_5
        assert_eq!(e.modulus(), &[3, 0, 1]);
        let f25 = make_field(5, 2).unwrap();
        assert_eq!(f25.modulus(), &[3, 0, 1]);
    }

    #[test]
    fn sqrt_examples() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.int(4).sqrt().unwrap().value(), 2);
        assert!(f5.int(2).sqrt().is_none());
        assert_eq!(f5.zero().sqrt().unwrap().value(), 0);
        let f2 = make_field(2, 2).unwrap();
        assert!(f2.one().try_sqrt().is_err());
    }
}
