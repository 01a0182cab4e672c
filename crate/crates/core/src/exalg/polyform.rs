use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::exalg::form::Form;
use crate::exalg::frame::CoordFrame;
use crate::scalar::{factorial, Scalar, Q};

/// Mixed-degree form with at most one component per degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyform<T: Scalar = Q> {
    frame: Arc<CoordFrame>,
    parts: BTreeMap<usize, Form<T>>,
}

impl<T: Scalar> Polyform<T> {
    pub fn zero(frame: &Arc<CoordFrame>) -> Self {
        Self {
            frame: frame.clone(),
            parts: BTreeMap::new(),
        }
    }

    pub fn one(frame: &Arc<CoordFrame>) -> Self {
        Self::from_form(Form::constant(frame, T::one()))
    }

    pub fn from_form(f: Form<T>) -> Self {
        let mut p = Self::zero(f.frame());
        p.add_form(&f).expect("same frame");
        p
    }

    pub fn from_forms(frame: &Arc<CoordFrame>, forms: &[Form<T>]) -> Result<Self> {
        let mut p = Self::zero(frame);
        for f in forms {
            p.add_form(f)?;
        }
        Ok(p)
    }

    pub fn frame(&self) -> &Arc<CoordFrame> {
        &self.frame
    }

    pub fn add_form(&mut self, f: &Form<T>) -> Result<()> {
        if f.frame().name() != self.frame.name() {
            return Err(GeomError::FrameMismatch(
                self.frame.name().to_string(),
                f.frame().name().to_string(),
            ));
        }
        if f.is_zero() {
            return Ok(());
        }
        let d = f.degree();
        let sum = match self.parts.remove(&d) {
            Some(old) => old.try_add(f)?,
            None => f.clone(),
        };
        if !sum.is_zero() {
            self.parts.insert(d, sum);
        }
        Ok(())
    }

    /// Component of degree `d` (zero form if absent).
    pub fn part(&self, d: usize) -> Form<T> {
        self.parts
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Form::zero(&self.frame, d))
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.parts.keys().copied()
    }

    pub fn parts(&self) -> impl Iterator<Item = &Form<T>> {
        self.parts.values()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for f in other.parts.values() {
            out.add_form(f)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(&self.frame);
        for f in self.parts.values() {
            out.add_form(&f.scale(c)).expect("same frame");
        }
        out
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(&self.frame);
        for a in self.parts.values() {
            for b in other.parts.values() {
                out.add_form(&a.try_wedge(b)?)?;
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("wedge")
    }

    pub fn hodge(&self) -> Self {
        let mut out = Self::zero(&self.frame);
        for f in self.parts.values() {
            out.add_form(&f.hodge()).expect("same frame");
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> Polyform<U> {
        let mut out = Polyform::<U>::zero(&self.frame);
        for p in self.parts.values() {
            out.add_form(&p.map(f)).expect("same frame");
        }
        out
    }

    /// Drops every component above `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        let mut out = self.clone();
        out.parts.retain(|d, _| *d <= max_degree);
        out
    }
}

/// Σ aⁿ/n! up to `max_degree`; every component of `a` must have even positive degree.
pub fn exp_trunc<T: Scalar>(a: &Polyform<T>, max_degree: usize) -> Result<Polyform<T>> {
    for d in a.degrees() {
        if d % 2 == 1 || d == 0 {
            return Err(GeomError::OddDegree(d));
        }
    }
    let mut out = Polyform::one(a.frame());
    let mut power = Polyform::one(a.frame());
    let mut n = 1;
    loop {
        power = power.wedge(a).truncate(max_degree);
        if power.is_zero() {
            break;
        }
        let inv = T::from_q(&(Q::from_integer(1.into()) / factorial(n)));
        out = out.try_add(&power.scale(&inv))?;
        n += 1;
    }
    Ok(out)
}
