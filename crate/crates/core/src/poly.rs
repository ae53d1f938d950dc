//! Univariate polynomials over any [`FieldElem`] field, with root finding.

use crate::field_tower::FieldElem;

/// Dense polynomial, little-endian coefficients, never empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<E: FieldElem> {
    c: Vec<E>,
}

impl<E: FieldElem> Poly<E> {
    /// Builds from little-endian coefficients; `cs` must be non-empty.
    pub fn new(mut cs: Vec<E>) -> Self {
        assert!(!cs.is_empty(), "polynomial needs a sample coefficient");
        while cs.len() > 1 && cs.last().unwrap().is_zero() {
            cs.pop();
        }
        Poly { c: cs }
    }

    pub fn constant(x: E) -> Self {
        Poly { c: vec![x] }
    }

    /// The monomial `x`.
    pub fn x(sample: E) -> Self {
        Poly {
            c: vec![sample.zero_like(), sample.one_like()],
        }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_zero()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        (!self.is_zero()).then(|| self.c.len() - 1)
    }

    fn sample(&self) -> E {
        self.c[0]
    }

    pub fn lead(&self) -> E {
        *self.c.last().unwrap()
    }

    pub fn eval(&self, x: E) -> E {
        let mut acc = self.sample().zero_like();
        for &a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().unwrap();
        Poly::new(self.c.iter().map(|&a| a * inv).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = self.sample().zero_like();
        Poly::new(
            (0..n)
                .map(|i| *self.c.get(i).unwrap_or(&z) + *o.c.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = self.sample().zero_like();
        Poly::new(
            (0..n)
                .map(|i| *self.c.get(i).unwrap_or(&z) - *o.c.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        let z = self.sample().zero_like();
        let mut out = vec![z; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: E) -> Self {
        Poly::new(self.c.iter().map(|&a| a * s).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let z = self.sample().zero_like();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::constant(z), self.clone());
        }
        let inv = d.lead().inv().unwrap();
        let mut quot = vec![z; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let t = r[top] * inv;
            if t.is_zero() {
                continue;
            }
            quot[top - dd] = t;
            for j in 0..=dd {
                r[top - dd + j] = r[top - dd + j] - t * d.c[j];
            }
        }
        r.truncate(dd.max(1));
        (Poly::new(quot), Poly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u128, m: &Self) -> Self {
        let mut acc = Poly::constant(self.sample().one_like()).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Rabin test: no factor of degree at most `deg/2`.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        let x = Poly::x(self.sample());
        let qq = self.sample().field_size();
        let mut xp = x.clone();
        for _ in 0..n / 2 {
            xp = xp.powmod(qq, self);
            if xp.sub(&x).gcd(self).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Distinct roots in the coefficient field, sorted by encoding.
    pub fn distinct_roots(&self) -> Vec<E> {
        let Some(n) = self.degree() else {
            return Vec::new();
        };
        if n == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let x = Poly::x(f.sample());
        let xq = x.powmod(f.sample().field_size(), &f);
        let h = xq.sub(&x).gcd(&f);
        let mut out = Vec::new();
        split(&h, &mut out);
        out.sort_by_key(|r| r.encode());
        out
    }

    /// Roots with multiplicities, sorted by encoding.
    pub fn roots(&self) -> Vec<(E, usize)> {
        let mut out = Vec::new();
        for r in self.distinct_roots() {
            let lin = Poly::new(vec![-r, r.one_like()]);
            let mut g = self.clone();
            let mut m = 0;
            loop {
                let (qt, rm) = g.divrem(&lin);
                if !rm.is_zero() {
                    break;
                }
                m += 1;
                g = qt;
            }
            out.push((r, m));
        }
        out
    }
}

/// Cantor-Zassenhaus equal-degree splitting of a squarefree product of
/// distinct linear factors, with shifts tried in encoding order so the
/// result is deterministic.
fn split<E: FieldElem>(h: &Poly<E>, out: &mut Vec<E>) {
    match h.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-h.c[0] / h.c[1]),
        Some(n) => {
            let s = h.sample();
            let qq = s.field_size();
            if s.characteristic() == 2 {
                // brute force is fine for the tiny even fields we support
                for a in 0..qq {
                    let r = s.decode_like(a);
                    if h.eval(r).is_zero() {
                        out.push(r);
                    }
                }
                return;
            }
            for a in 0..qq {
                let shift = Poly::new(vec![s.decode_like(a), s.one_like()]);
                let w = shift
                    .powmod((qq - 1) / 2, h)
                    .sub(&Poly::constant(s.one_like()));
                let g = w.gcd(h);
                match g.degree() {
                    Some(d) if d > 0 && d < n => {
                        let (other, _) = h.divrem(&g);
                        split(&g, out);
                        split(&other.monic(), out);
                        return;
                    }
                    _ => {}
                }
            }
            unreachable!("splitting succeeds for some shift");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::make_field;

    #[test]
    fn roots_with_multiplicity() {
        let f = make_field(7, 1).unwrap();
        let one = f.one();
        let lin = |r: i64| Poly::new(vec![-f.int(r), one]);
        let p = lin(1).mul(&lin(1)).mul(&lin(3)).mul(&lin(6));
        let r: Vec<(u32, usize)> = p.roots().iter().map(|(x, m)| (x.value(), *m)).collect();
        assert_eq!(r, vec![(1, 2), (3, 1), (6, 1)]);
    }

    #[test]
    fn irreducibility() {
        let f = make_field(5, 1).unwrap();
        // x^2 - 2 is irreducible over F_5, x^2 - 4 is not
        assert!(Poly::new(vec![-f.int(2), f.zero(), f.one()]).is_irreducible());
        assert!(!Poly::new(vec![-f.int(4), f.zero(), f.one()]).is_irreducible());
    }

    #[test]
    fn roots_in_extension() {
        let f = make_field(5, 1).unwrap();
        let e = f.extend(2).unwrap();
        let p = Poly::new(vec![-e.int(2), e.zero(), e.one()]);
        let roots = p.distinct_roots();
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert_eq!(r * r, e.int(2));
        }
    }
}
