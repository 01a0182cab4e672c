//! Coefficient functions of cycles and connections: exact polynomials or
//! samples on periodic uniform grids.
//!
//! Variables are ambient coordinate indices, so a function of (x1, x2) on the
//! G2 frame uses variables 0 and 1 in either representation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::poly::{Poly, PolyJson};
use crate::scalar::Scalar;

/// Periodic samples: node (n₀, n₁, …) sits at coordinates (nₐ·periodₐ/shapeₐ), last axis fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub axes: Vec<usize>,
    pub shape: Vec<usize>,
    pub period: Vec<f64>,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn new(axes: Vec<usize>, shape: Vec<usize>, period: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if axes.len() != shape.len() || axes.len() != period.len() {
            return Err(GeomError::Grid("axes, shape and period lengths differ".into()));
        }
        if shape.iter().any(|&n| n < 3) {
            return Err(GeomError::Grid("periodic grids need at least 3 nodes per axis".into()));
        }
        if period.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(GeomError::Grid("periods must be positive".into()));
        }
        let n: usize = shape.iter().product();
        if values.len() != n {
            return Err(GeomError::Grid(format!("expected {n} samples, got {}", values.len())));
        }
        Ok(Self {
            axes,
            shape,
            period,
            values,
        })
    }

    /// Samples `f` at every node; `f` receives the full point indexed by ambient coordinate.
    pub fn sample(axes: &[usize], shape: &[usize], period: &[f64], dim: usize, f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Self> {
        let probe = Self {
            axes: axes.to_vec(),
            shape: shape.to_vec(),
            period: period.to_vec(),
            values: Vec::new(),
        };
        let n: usize = shape.iter().product();
        let values = (0..n)
            .into_par_iter()
            .map(|flat| f(&probe.point(flat, dim)))
            .collect();
        Self::new(axes.to_vec(), shape.to_vec(), period.to_vec(), values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.period[axis] / self.shape[axis] as f64
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.shape.len()];
        for a in (0..self.shape.len().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.shape[a + 1];
        }
        s
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        for a in (0..self.shape.len()).rev() {
            idx[a] = flat % self.shape[a];
            flat /= self.shape[a];
        }
        idx
    }

    /// Ambient point of a node (coordinates off the grid axes are 0).
    pub fn point(&self, flat: usize, dim: usize) -> Vec<f64> {
        let mut p = vec![0.0; dim];
        for (a, i) in self.multi_index(flat).into_iter().enumerate() {
            p[self.axes[a]] = i as f64 * self.spacing(a);
        }
        p
    }

    pub fn same_layout(&self, other: &Grid) -> bool {
        self.axes == other.axes && self.shape == other.shape && self.period == other.period
    }

    fn zeros_like(&self) -> Self {
        Self {
            values: vec![0.0; self.values.len()],
            ..self.clone()
        }
    }

    /// Second-order periodic central difference along ambient coordinate `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let Some(axis) = self.axes.iter().position(|&a| a == var) else {
            return self.zeros_like();
        };
        let stride = self.strides()[axis];
        let n = self.shape[axis];
        let h2 = 2.0 * self.spacing(axis);
        let values = (0..self.values.len())
            .into_par_iter()
            .map(|flat| {
                let i = (flat / stride) % n;
                let base = flat - i * stride;
                let up = base + ((i + 1) % n) * stride;
                let down = base + ((i + n - 1) % n) * stride;
                (self.values[up] - self.values[down]) / h2
            })
            .collect();
        Self {
            values,
            ..self.clone()
        }
    }

    fn zip(&self, other: &Grid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.same_layout(other) {
            return Err(GeomError::Grid("grid layouts differ".into()));
        }
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect(),
            ..self.clone()
        })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Root-mean-square times the square root of the cell volume product, i.e. the discrete L² norm.
    pub fn l2_norm(&self) -> f64 {
        let cell: f64 = (0..self.shape.len()).map(|a| self.spacing(a)).product();
        (pairwise_sum(&self.values.iter().map(|v| v * v).collect::<Vec<_>>()) * cell).sqrt()
    }

    /// Periodic trapezoid rule (every node weighted by the cell volume).
    pub fn integrate(&self) -> f64 {
        let cell: f64 = (0..self.shape.len()).map(|a| self.spacing(a)).product();
        pairwise_sum(&self.values) * cell
    }
}

/// Order-independent (fixed tree) summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

#[derive(Clone, Debug, PartialEq)]
pub enum Func {
    Poly(Poly),
    Grid(Grid),
}

impl Func {
    pub fn zero_like(&self) -> Self {
        match self {
            Func::Poly(_) => Func::Poly(Poly::default()),
            Func::Grid(g) => Func::Grid(g.zeros_like()),
        }
    }

    pub fn is_poly(&self) -> bool {
        matches!(self, Func::Poly(_))
    }

    pub fn derivative(&self, var: usize) -> Self {
        match self {
            Func::Poly(p) => Func::Poly(p.derivative(var)),
            Func::Grid(g) => Func::Grid(g.derivative(var)),
        }
    }

    fn combine(&self, other: &Func, fp: impl Fn(Poly, Poly) -> Poly, fg: impl Fn(f64, f64) -> f64) -> Result<Func> {
        match (self, other) {
            (Func::Poly(a), Func::Poly(b)) => Ok(Func::Poly(fp(a.clone(), b.clone()))),
            (Func::Grid(a), Func::Grid(b)) => Ok(Func::Grid(a.zip(b, fg)?)),
            _ => Err(GeomError::Grid("cannot mix polynomial and grid data".into())),
        }
    }

    pub fn try_add(&self, other: &Func) -> Result<Func> {
        self.combine(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Func) -> Result<Func> {
        self.combine(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &Func) -> Result<Func> {
        self.combine(other, |a, b| a * b, |a, b| a * b)
    }

    pub fn neg(&self) -> Func {
        match self {
            Func::Poly(p) => Func::Poly(-p.clone()),
            Func::Grid(g) => Func::Grid(Grid {
                values: g.values.iter().map(|v| -v).collect(),
                ..g.clone()
            }),
        }
    }

    pub fn scale(&self, c: f64) -> Func {
        match self {
            Func::Poly(p) => Func::Poly(
                p.clone() * Poly::constant(crate::scalar::q_from_f64(c).expect("finite scale")),
            ),
            Func::Grid(g) => Func::Grid(Grid {
                values: g.values.iter().map(|v| v * c).collect(),
                ..g.clone()
            }),
        }
    }

    /// Exactly zero for polynomials; every sample zero for grids.
    pub fn is_zero(&self) -> bool {
        match self {
            Func::Poly(p) => num_traits::Zero::is_zero(p),
            Func::Grid(g) => g.values.iter().all(|v| *v == 0.0),
        }
    }

    /// Sup norm over grid samples; for polynomials, the largest coefficient magnitude.
    pub fn sup_norm(&self) -> f64 {
        match self {
            Func::Poly(p) => p.magnitude(),
            Func::Grid(g) => g.sup_norm(),
        }
    }

    /// Discrete L² norm for grids; coefficient ℓ² norm for polynomials.
    pub fn l2_norm(&self) -> f64 {
        match self {
            Func::Poly(p) => p.terms().map(|(_, c)| crate::scalar::to_f64(c).powi(2)).sum::<f64>().sqrt(),
            Func::Grid(g) => g.l2_norm(),
        }
    }

    /// Value at an ambient point (grids: nearest node is not interpolated, the point must be a node).
    pub fn eval(&self, point: &[f64]) -> f64 {
        match self {
            Func::Poly(p) => p.eval(point),
            Func::Grid(g) => {
                let mut flat = 0;
                for (a, &ax) in g.axes.iter().enumerate() {
                    let i = (point[ax] / g.spacing(a)).round() as i64;
                    let i = i.rem_euclid(g.shape[a] as i64) as usize;
                    flat = flat * g.shape[a] + i;
                }
                g.values[flat]
            }
        }
    }

    /// Grid layout shared by all grid functions in `funcs`, or None if all are polynomials.
    pub fn common_layout<'a>(funcs: impl IntoIterator<Item = &'a Func>) -> Result<Option<Grid>> {
        let mut layout: Option<Grid> = None;
        let mut saw_poly = false;
        for f in funcs {
            match f {
                Func::Poly(_) => saw_poly = true,
                Func::Grid(g) => match &layout {
                    None => layout = Some(g.zeros_like()),
                    Some(l) if l.same_layout(g) => {}
                    Some(_) => return Err(GeomError::Grid("grid sizes differ between functions".into())),
                },
            }
        }
        if saw_poly && layout.is_some() {
            return Err(GeomError::Grid("cannot mix polynomial and grid data".into()));
        }
        Ok(layout)
    }
}

/// JSON: `{"poly": {...}}` or `{"grid": {...}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum FuncJson {
    Poly(PolyJson),
    Grid(Grid),
}

impl FuncJson {
    pub fn from_func(f: &Func) -> Self {
        match f {
            Func::Poly(p) => FuncJson::Poly(PolyJson::from_poly(p)),
            Func::Grid(g) => FuncJson::Grid(g.clone()),
        }
    }

    pub fn to_func(&self) -> Result<Func> {
        match self {
            FuncJson::Poly(p) => Ok(Func::Poly(p.to_poly()?)),
            FuncJson::Grid(g) => Ok(Func::Grid(Grid::new(
                g.axes.clone(),
                g.shape.clone(),
                g.period.clone(),
                g.values.clone(),
            )?)),
        }
    }
}
