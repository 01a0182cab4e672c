use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::{Field, Scalar, Q};

/// q⁰ + q¹i + q²j + q³k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quaternion<T = Q>(pub [T; 4]);

impl<T: Scalar> Quaternion<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self([a, b, c, d])
    }

    pub fn zero() -> Self {
        Self::basis(4)
    }

    /// Basis element e_n of (1, i, j, k); n ≥ 4 gives zero.
    pub fn basis(n: usize) -> Self {
        let mut c = [T::zero(), T::zero(), T::zero(), T::zero()];
        if n < 4 {
            c[n] = T::one();
        }
        Self(c)
    }

    pub fn one() -> Self {
        Self::basis(0)
    }

    pub fn i() -> Self {
        Self::basis(1)
    }

    pub fn j() -> Self {
        Self::basis(2)
    }

    pub fn k() -> Self {
        Self::basis(3)
    }

    pub fn from_slice(v: &[T]) -> Self {
        Self([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.0.to_vec()
    }

    pub fn re(&self) -> &T {
        &self.0[0]
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = self.0.clone();
        Self([a, -b, -c, -d])
    }

    /// Euclidean inner product on R⁴.
    pub fn dot(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(&other.0)
            .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self(self.0.clone().map(|x| x * c.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Quaternion<U> {
        Quaternion([f(&self.0[0]), f(&self.0[1]), f(&self.0[2]), f(&self.0[3])])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }
}

impl<T: Field> Quaternion<T> {
    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        Some(Self(self.conj().0.map(|x| x / n.clone())))
    }
}

impl<T: Scalar> Add for Quaternion<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Self([a + e, b + f, c + g, d + h])
    }
}

impl<T: Scalar> Sub for Quaternion<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl<T: Scalar> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = rhs.0;
        let m = |x: &T, y: &T| x.clone() * y.clone();
        Self([
            m(&a0, &b0) - m(&a1, &b1) - m(&a2, &b2) - m(&a3, &b3),
            m(&a0, &b1) + m(&a1, &b0) + m(&a2, &b3) - m(&a3, &b2),
            m(&a0, &b2) - m(&a1, &b3) + m(&a2, &b0) + m(&a3, &b1),
            m(&a0, &b3) + m(&a1, &b2) - m(&a2, &b1) + m(&a3, &b0),
        ])
    }
}

fn det3<T: Scalar>(m: [[T; 3]; 3]) -> T {
    let p = |a: &T, b: &T, c: &T| a.clone() * b.clone() * c.clone();
    p(&m[0][0], &m[1][1], &m[2][2]) + p(&m[0][1], &m[1][2], &m[2][0]) + p(&m[0][2], &m[1][0], &m[2][1])
        - p(&m[0][2], &m[1][1], &m[2][0])
        - p(&m[0][0], &m[1][2], &m[2][1])
        - p(&m[0][1], &m[1][0], &m[2][2])
}

/// Formal determinant det(I, u, v, w) with I = (1, i, j, k) as first column,
/// expanded along that column.
pub fn triple_cross<T: Scalar>(u: &Quaternion<T>, v: &Quaternion<T>, w: &Quaternion<T>) -> Quaternion<T> {
    let cols = [&u.0, &v.0, &w.0];
    let mut out = [T::zero(), T::zero(), T::zero(), T::zero()];
    for (row, slot) in out.iter_mut().enumerate() {
        let rows: Vec<usize> = (0..4).filter(|&r| r != row).collect();
        let minor = [0, 1, 2].map(|a| [0, 1, 2].map(|b| cols[b][rows[a]].clone()));
        let d = det3(minor);
        *slot = if row % 2 == 0 { d } else { -d };
    }
    Quaternion(out)
}

/// (u(v̄w) − w(v̄u))/2, the quaternionic form of the triple cross product.
pub fn triple_cross_quaternionic<T: Field>(u: &Quaternion<T>, v: &Quaternion<T>, w: &Quaternion<T>) -> Quaternion<T> {
    let vb = v.conj();
    let a = u.clone() * (vb.clone() * w.clone());
    let b = w.clone() * (vb * u.clone());
    let half = T::from_q(&crate::scalar::q(1, 2));
    (a - b).scale(&half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    type H = Quaternion<Q>;

    #[test]
    fn units() {
        let (i, j, k) = (H::i(), H::j(), H::k());
        let m1 = -H::one();
        assert_eq!(i.clone() * i.clone(), m1);
        assert_eq!(j.clone() * j.clone(), m1);
        assert_eq!(k.clone() * k.clone(), m1);
        assert_eq!(i.clone() * j.clone() * k.clone(), m1);
        assert_eq!(i * j, k);
    }

    #[test]
    fn triple_of_ijk_is_one() {
        assert_eq!(triple_cross(&H::i(), &H::j(), &H::k()), H::one());
        assert_eq!(triple_cross(&H::j(), &H::i(), &H::k()), -H::one());
        let u = H::new(qi(1), qi(2), qi(0), qi(-1));
        assert!(triple_cross(&u, &u, &H::k()).is_zero());
    }

    #[test]
    fn inverse() {
        let u = H::new(qi(1), qi(2), qi(0), qi(-1));
        assert_eq!(u.clone() * u.inverse().unwrap(), H::one());
        assert!(H::zero().inverse().is_none());
    }
}
