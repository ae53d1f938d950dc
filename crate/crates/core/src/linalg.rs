//! Small dense linear algebra over any field: echelon form, rank, kernel,
//! determinant.

use crate::field_tower::FieldElem;

/// Row-reduced echelon form in place; returns the pivot columns.
pub fn rref<E: FieldElem>(m: &mut [Vec<E>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for x in m[r].iter_mut() {
            *x = *x * inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let v = m[r][j];
                    m[i][j] = m[i][j] - f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<E: FieldElem>(m: &[Vec<E>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of `{x : M x = 0}`; `cols` is the number of unknowns.
pub fn kernel<E: FieldElem>(m: &[Vec<E>], cols: usize, sample: E) -> Vec<Vec<E>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![sample.zero_like(); cols];
            v[f] = sample.one_like();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f];
            }
            v
        })
        .collect()
}

/// Determinant of a square matrix.
pub fn det<E: FieldElem>(m: &[Vec<E>]) -> E {
    let n = m.len();
    let mut a = m.to_vec();
    let mut acc = a[0][0].one_like();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return acc.zero_like();
        };
        if p != c {
            a.swap(p, c);
            acc = -acc;
        }
        let piv = a[c][c];
        acc = acc * piv;
        let inv = piv.inv().unwrap();
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c] * inv;
            for j in c..n {
                let v = a[c][j];
                a[i][j] = a[i][j] - f * v;
            }
        }
    }
    acc
}

/// Matrix product.
pub fn matmul<E: FieldElem>(a: &[Vec<E>], b: &[Vec<E>]) -> Vec<Vec<E>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(row[0].zero_like(), |acc, (&x, br)| acc + x * br[j])
                })
                .collect()
        })
        .collect()
}

pub fn transpose<E: FieldElem>(a: &[Vec<E>]) -> Vec<Vec<E>> {
    let n = a.first().map_or(0, |r| r.len());
    (0..n).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::make_field;

    #[test]
    fn det_and_kernel() {
        let f = make_field(7, 1).unwrap();
        let e = |n| f.int(n);
        let m = vec![vec![e(1), e(2)], vec![e(2), e(4)]];
        assert!(det(&m).is_zero());
        assert_eq!(rank(&m), 1);
        let k = kernel(&m, 2, f.zero());
        assert_eq!(k.len(), 1);
        assert!((e(1) * k[0][0] + e(2) * k[0][1]).is_zero());
        let m2 = vec![vec![e(0), e(1)], vec![e(1), e(0)]];
        assert_eq!(det(&m2), e(-1));
    }
}
