use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::exalg::blade::{self, Blade};
use crate::exalg::frame::CoordFrame;
use crate::linalg;
use crate::scalar::{Field, Scalar, Q};

/// Homogeneous constant-coefficient exterior form on a coordinate frame.
///
/// Terms are keyed by bitmask blades; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct Form<T = Q> {
    frame: Arc<CoordFrame>,
    degree: usize,
    terms: BTreeMap<Blade, T>,
}

impl<T: Scalar> Form<T> {
    pub fn zero(frame: &Arc<CoordFrame>, degree: usize) -> Self {
        Self {
            frame: frame.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(frame: &Arc<CoordFrame>, c: T) -> Self {
        Self::zero(frame, 0).with_term(0, c)
    }

    /// c · dx^{i0} ∧ dx^{i1} ∧ … (indices in any order; repeated indices give zero).
    pub fn monomial(frame: &Arc<CoordFrame>, idx: &[usize], c: T) -> Self {
        assert!(
            idx.iter().all(|&i| i < frame.dim()),
            "index out of range for frame {}",
            frame.name()
        );
        let mut f = Self::zero(frame, idx.len());
        if let Some((s, b)) = blade::blade_of(idx) {
            f.push(b, if s < 0 { -c } else { c });
        }
        f
    }

    pub fn from_terms<I>(frame: &Arc<CoordFrame>, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, T)>,
    {
        let mut f = Self::zero(frame, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(GeomError::WrongDegree {
                    expected: degree,
                    got: idx.len(),
                });
            }
            if idx.iter().any(|&i| i >= frame.dim()) {
                return Err(GeomError::InvalidFrame(format!(
                    "index out of range for frame {}",
                    frame.name()
                )));
            }
            if let Some((s, b)) = blade::blade_of(&idx) {
                f.push(b, if s < 0 { -c } else { c });
            }
        }
        Ok(f)
    }

    /// Oriented volume form of the frame (no covolume factor).
    pub fn volume(frame: &Arc<CoordFrame>) -> Self {
        Self::monomial(frame, frame.orientation(), T::one())
    }

    fn with_term(mut self, b: Blade, c: T) -> Self {
        self.push(b, c);
        self
    }

    fn push(&mut self, b: Blade, c: T) {
        debug_assert_eq!(blade::grade(b), self.degree);
        let entry = self.terms.remove(&b);
        let v = match entry {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(b, v);
        }
    }

    pub fn frame(&self) -> &Arc<CoordFrame> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Blade, T> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &T)> {
        self.terms.iter().map(|(b, c)| (blade::indices(*b), c))
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: &[usize]) -> T {
        match blade::blade_of(idx) {
            Some((s, b)) if idx.len() == self.degree => match self.terms.get(&b) {
                Some(c) if s < 0 => -c.clone(),
                Some(c) => c.clone(),
                None => T::zero(),
            },
            _ => T::zero(),
        }
    }

    pub fn coeff_blade(&self, b: Blade) -> T {
        self.terms.get(&b).cloned().unwrap_or_else(T::zero)
    }

    pub fn same_frame(&self, other: &Self) -> Result<()> {
        if self.frame.name() != other.frame.name() || self.frame.dim() != other.frame.dim() {
            return Err(GeomError::FrameMismatch(
                self.frame.name().to_string(),
                other.frame.name().to_string(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        if self.degree != other.degree && !(self.is_zero() || other.is_zero()) {
            return Err(GeomError::WrongDegree {
                expected: self.degree,
                got: other.degree,
            });
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.push(*b, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(&self.frame, self.degree);
        for (b, v) in &self.terms {
            out.push(*b, v.clone() * c.clone());
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Form<U> {
        let mut out = Form::<U>::zero(&self.frame, self.degree);
        for (b, v) in &self.terms {
            out.push(*b, f(v));
        }
        out
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        let mut out = Self::zero(&self.frame, self.degree + other.degree);
        if out.degree > self.dim() {
            return Ok(out);
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((s, m)) = blade::wedge_blades(*a, *b) {
                    let v = ca.clone() * cb.clone();
                    out.push(m, if s < 0 { -v } else { v });
                }
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("wedge")
    }

    /// Hodge star with α ∧ ⋆β = ⟨α, β⟩ vol for the frame orientation.
    pub fn hodge(&self) -> Self {
        let n = self.dim();
        let full: Blade = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let osign = self.frame.orientation_sign();
        let mut out = Self::zero(&self.frame, n - self.degree);
        for (b, c) in &self.terms {
            let comp = full & !b;
            let (s, _) = blade::wedge_blades(*b, comp).expect("complement");
            let v = c.clone();
            out.push(comp, if s * osign < 0 { -v } else { v });
        }
        out
    }

    /// Interior product with the vector `v` (components in frame coordinates).
    pub fn interior(&self, v: &[T]) -> Self {
        assert_eq!(v.len(), self.dim(), "vector length");
        if self.degree == 0 {
            return Self::zero(&self.frame, 0);
        }
        let mut out = Self::zero(&self.frame, self.degree - 1);
        for (b, c) in &self.terms {
            for (pos, i) in blade::indices(*b).into_iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let val = c.clone() * v[i].clone();
                out.push(b & !(1 << i), if pos % 2 == 1 { -val } else { val });
            }
        }
        out
    }

    /// Interior product with a basis vector.
    pub fn interior_basis(&self, i: usize) -> Self {
        let mut v = vec![T::zero(); self.dim()];
        v[i] = T::one();
        self.interior(&v)
    }

    /// Euclidean pairing of same-degree forms in the orthonormal monomial basis.
    pub fn inner(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for (b, c) in &self.terms {
            if let Some(d) = other.terms.get(b) {
                acc = acc + c.clone() * d.clone();
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> T {
        self.inner(self)
    }

    /// Coefficients in the ordering of `blades_of_grade(dim, degree)`.
    pub fn to_vector(&self) -> Vec<T> {
        blade::blades_of_grade(self.dim(), self.degree)
            .into_iter()
            .map(|b| self.coeff_blade(b))
            .collect()
    }

    pub fn from_vector(frame: &Arc<CoordFrame>, degree: usize, v: &[T]) -> Self {
        let blades = blade::blades_of_grade(frame.dim(), degree);
        assert_eq!(blades.len(), v.len(), "vector length");
        let mut out = Self::zero(frame, degree);
        for (b, c) in blades.into_iter().zip(v) {
            out.push(b, c.clone());
        }
        out
    }

    /// Moves the form to another frame, sending coordinate i to `map[i]`.
    pub fn reindex(&self, target: &Arc<CoordFrame>, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.dim(), "map length");
        let mut out = Self::zero(target, self.degree);
        for (b, c) in &self.terms {
            let idx: Vec<usize> = blade::indices(*b).into_iter().map(|i| map[i]).collect();
            if let Some((s, nb)) = blade::blade_of(&idx) {
                out.push(nb, if s < 0 { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// Integral over the torus of the frame: top coefficient times orientation sign and covolume.
    pub fn integrate(&self) -> T {
        if self.degree != self.dim() {
            return T::zero();
        }
        let top = self.coeff_blade(self.full_blade());
        let vol = T::from_q(&self.frame.total_covolume());
        let v = top * vol;
        if self.frame.orientation_sign() < 0 {
            -v
        } else {
            v
        }
    }

    fn full_blade(&self) -> Blade {
        let n = self.dim();
        if n == 32 {
            u32::MAX
        } else {
            (1u32 << n) - 1
        }
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

impl<T: Field> Form<T> {
    /// Value on `vectors`: Σ_I c_I det(v_j[i_m]).
    pub fn evaluate(&self, vectors: &[Vec<T>]) -> Result<T> {
        if vectors.len() != self.degree {
            return Err(GeomError::Arity {
                expected: self.degree,
                got: vectors.len(),
            });
        }
        let mut acc = T::zero();
        for (b, c) in &self.terms {
            let idx = blade::indices(*b);
            let m: Vec<Vec<T>> = idx
                .iter()
                .map(|&i| vectors.iter().map(|v| v[i].clone()).collect())
                .collect();
            acc = acc + c.clone() * linalg::det(&m);
        }
        Ok(acc)
    }
}

impl Form<Q> {
    pub fn to_f64(&self) -> Form<f64> {
        self.map(crate::scalar::to_f64)
    }
}

impl<T: Scalar> Add for &Form<T> {
    type Output = Form<T>;
    fn add(self, rhs: &Form<T>) -> Form<T> {
        self.try_add(rhs).expect("form addition")
    }
}

impl<T: Scalar> Sub for &Form<T> {
    type Output = Form<T>;
    fn sub(self, rhs: &Form<T>) -> Form<T> {
        self.try_add(&-rhs).expect("form subtraction")
    }
}

impl<T: Scalar> Neg for &Form<T> {
    type Output = Form<T>;
    fn neg(self) -> Form<T> {
        self.map(|c| -c.clone())
    }
}

impl<T: Scalar> Mul for &Form<T> {
    type Output = Form<T>;
    fn mul(self, rhs: &Form<T>) -> Form<T> {
        self.wedge(rhs)
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Form<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let labels: Vec<&str> = blade::indices(*b)
                .into_iter()
                .map(|i| self.frame.label(i))
                .collect();
            if labels.is_empty() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c}) d{}", labels.join("^d"))?;
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for Form<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.iter().collect();
        f.debug_struct("Form")
            .field("frame", &self.frame.name())
            .field("degree", &self.degree)
            .field("terms", &terms)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn frame3() -> Arc<CoordFrame> {
        CoordFrame::standard("r3", &["x1", "x2", "x3"])
    }

    #[test]
    fn wedge_basis_and_anticommute() {
        let f = frame3();
        let a = Form::monomial(&f, &[0], qi(1));
        let b = Form::monomial(&f, &[1], qi(1));
        assert_eq!(a.wedge(&b), Form::monomial(&f, &[0, 1], qi(1)));
        assert!((&a.wedge(&b) + &b.wedge(&a)).is_zero());
        assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn hodge_in_three_dims() {
        let f = frame3();
        let one = Form::constant(&f, qi(1));
        assert_eq!(one.hodge(), Form::monomial(&f, &[0, 1, 2], qi(1)));
        let dx2 = Form::monomial(&f, &[1], qi(1));
        assert_eq!(dx2.hodge(), Form::monomial(&f, &[2, 0], qi(1)));
    }

    #[test]
    fn interior_examples() {
        let f = frame3();
        let dx12 = Form::monomial(&f, &[0, 1], qi(1));
        assert_eq!(dx12.interior_basis(0), Form::monomial(&f, &[1], qi(1)));
        assert_eq!(dx12.interior_basis(1), Form::monomial(&f, &[0], qi(-1)));
        assert!(dx12.interior(&[qi(0), qi(0), qi(0)]).is_zero());
    }

    #[test]
    fn evaluate_and_arity() {
        let f = frame3();
        let vol = Form::monomial(&f, &[0, 1, 2], qi(1));
        let e = |i: usize| {
            let mut v = vec![qi(0); 3];
            v[i] = qi(1);
            v
        };
        assert_eq!(vol.evaluate(&[e(0), e(1), e(2)]).unwrap(), qi(1));
        assert_eq!(vol.evaluate(&[e(1), e(0), e(2)]).unwrap(), qi(-1));
        assert!(vol.evaluate(&[e(0)]).is_err());
    }

    #[test]
    fn frame_mismatch() {
        let a = Form::monomial(&frame3(), &[0], qi(1));
        let g = CoordFrame::standard("other", &["u", "v", "w"]);
        let b = Form::monomial(&g, &[0], qi(1));
        assert!(a.try_wedge(&b).is_err());
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn integrate_uses_covolume_and_orientation() {
        let f = frame3().with_covolumes(vec![q(1, 2), qi(3), qi(1)]).unwrap();
        let vol = Form::monomial(&f, &[0, 1, 2], qi(2));
        assert_eq!(vol.integrate(), qi(3));
    }
}
