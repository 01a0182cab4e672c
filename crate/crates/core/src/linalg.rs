//! Dense matrices over exact or floating fields.
//!
//! Pivot selection uses the largest magnitude entry so the same routines serve
//! both rationals (tolerance 0) and binary64 (small positive tolerance).

use crate::scalar::{Field, Scalar};

pub type Mat<T> = Vec<Vec<T>>;

pub fn zeros<T: Scalar>(rows: usize, cols: usize) -> Mat<T> {
    vec![vec![T::zero(); cols]; rows]
}

pub fn identity<T: Scalar>(n: usize) -> Mat<T> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn transpose<T: Scalar>(m: &Mat<T>) -> Mat<T> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn matmul<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(T::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn matvec<T: Scalar>(a: &Mat<T>, v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub_mat<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() - y.clone()).collect())
        .collect()
}

pub fn add_mat<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() + y.clone()).collect())
        .collect()
}

pub fn scale_mat<T: Scalar>(a: &Mat<T>, c: &T) -> Mat<T> {
    a.iter()
        .map(|r| r.iter().map(|x| x.clone() * c.clone()).collect())
        .collect()
}

pub fn is_zero_mat<T: Scalar>(a: &Mat<T>, tol: f64) -> bool {
    a.iter().flatten().all(|x| x.magnitude() <= tol)
}

/// Determinant by elimination with magnitude pivoting.
pub fn det<T: Field>(m: &Mat<T>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut a = m.clone();
    let mut d = T::one();
    for col in 0..n {
        let piv = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| a[r][col].magnitude().total_cmp(&a[s][col].magnitude()));
        let Some(p) = piv else {
            return T::zero();
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        let pv = a[col][col].clone();
        d = d * pv.clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / pv.clone();
            for c in col..n {
                let t = a[col][c].clone() * f.clone();
                a[r][c] = a[r][c].clone() - t;
            }
        }
    }
    d
}

/// Reduced row echelon form; returns the matrix and pivot columns.
pub fn rref<T: Field>(m: &Mat<T>, tol: f64) -> (Mat<T>, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let piv = (r..rows)
            .filter(|&i| a[i][c].magnitude() > tol && !a[i][c].is_zero())
            .max_by(|&i, &j| a[i][c].magnitude().total_cmp(&a[j][c].magnitude()));
        let Some(p) = piv else {
            for row in a.iter_mut().skip(r) {
                row[c] = T::zero();
            }
            continue;
        };
        a.swap(p, r);
        let pv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() / pv.clone();
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..cols {
                let t = a[r][j].clone() * f.clone();
                a[i][j] = a[i][j].clone() - t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<T: Field>(m: &Mat<T>, tol: f64) -> usize {
    rref(m, tol).1.len()
}

/// Basis of the right nullspace {x : m x = 0}.
pub fn nullspace<T: Field>(m: &Mat<T>, cols: usize, tol: f64) -> Vec<Vec<T>> {
    if m.is_empty() {
        return (0..cols)
            .map(|i| {
                let mut v = vec![T::zero(); cols];
                v[i] = T::one();
                v
            })
            .collect();
    }
    let (r, pivots) = rref(m, tol);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn inverse<T: Field>(m: &Mat<T>) -> Option<Mat<T>> {
    let n = m.len();
    let aug: Mat<T> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let (r, piv) = rref(&aug, 0.0);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves m x = b when m is square and invertible.
pub fn solve<T: Field>(m: &Mat<T>, b: &[T]) -> Option<Vec<T>> {
    inverse(m).map(|inv| matvec(&inv, b))
}

/// Orthogonal projector onto the span of the given (independent) column vectors.
pub fn projector<T: Field>(basis: &[Vec<T>]) -> Mat<T> {
    let n = basis.first().map_or(0, |v| v.len());
    if basis.is_empty() {
        return zeros(n, n);
    }
    let b = transpose(&basis.to_vec());
    let gram = matmul(&basis.to_vec(), &b);
    let gi = inverse(&gram).expect("independent basis");
    matmul(&matmul(&b, &gi), &basis.to_vec())
}

/// Basis of the orthogonal complement of the span of `vectors` in dimension n.
pub fn orthogonal_complement<T: Field>(vectors: &[Vec<T>], n: usize) -> Vec<Vec<T>> {
    nullspace(&vectors.to_vec(), n, 0.0)
}

/// Basis of the intersection of two subspaces given by spanning sets.
pub fn intersect<T: Field>(a: &[Vec<T>], b: &[Vec<T>], n: usize) -> Vec<Vec<T>> {
    // x ⊥ complement(a) and x ⊥ complement(b)
    let mut constraints = orthogonal_complement(a, n);
    constraints.extend(orthogonal_complement(b, n));
    nullspace(&constraints, n, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};

    fn m(rows: &[&[i64]]) -> Mat<Q> {
        rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(det(&a), qi(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(matmul(&a, &inv), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn nullspace_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&a, 0.0), 1);
        let ns = nullspace(&a, 3, 0.0);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(matvec(&a, &v).iter().all(|x| *x == qi(0)));
        }
    }

    #[test]
    fn projector_idempotent() {
        let p = projector(&[vec![qi(1), qi(1), qi(0)]]);
        assert_eq!(matmul(&p, &p), p);
    }

    #[test]
    fn float_rank_with_tolerance() {
        let a: Mat<f64> = vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-14]];
        assert_eq!(rank(&a, 1e-10), 1);
    }
}
