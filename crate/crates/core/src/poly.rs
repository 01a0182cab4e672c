//! Sparse multivariate polynomials with rational coefficients.
//!
//! Variables are coordinate indices of the ambient frame, so a `Form<Poly>`
//! is a form with polynomial coefficient functions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::scalar::{format_q, parse_q, qi, to_f64, Scalar, Q};

/// Exponent vector with trailing zeros trimmed.
type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn constant(c: Q) -> Self {
        let mut p = Self::default();
        p.push(Vec::new(), c);
        p
    }

    /// The coordinate function x_var.
    pub fn var(var: usize) -> Self {
        Self::monomial(&[(var, 1)], qi(1))
    }

    pub fn monomial(powers: &[(usize, u32)], c: Q) -> Self {
        let len = powers.iter().map(|(v, _)| v + 1).max().unwrap_or(0);
        let mut m = vec![0; len];
        for &(v, e) in powers {
            m[v] += e;
        }
        let mut p = Self::default();
        p.push(trim(m), c);
        p
    }

    fn push(&mut self, m: Monomial, c: Q) {
        let v = match self.terms.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(m, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Q)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            let e = m.get(var).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm[var] -= 1;
            out.push(trim(nm), c.clone() * qi(e as i64));
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval_q(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= point.get(v).cloned().unwrap_or_else(Q::zero);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .enumerate()
                    .fold(to_f64(c), |t, (v, &e)| t * point.get(v).copied().unwrap_or(0.0).powi(e as i32))
            })
            .sum()
    }

    /// Renames variables: variable v becomes `map[v]`.
    pub fn rename(&self, map: &[usize]) -> Self {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            let powers: Vec<(usize, u32)> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| (map[v], e))
                .collect();
            out = out + Self::monomial(&powers, c.clone());
        }
        out
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Self::constant(qi(1))
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.push(m, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for Poly {
    type Output = Poly;
    // exponents add
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Poly) -> Poly {
        let mut out = Poly::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let len = a.len().max(b.len());
                let m: Monomial = (0..len)
                    .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
                    .collect();
                out.push(trim(m), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl Scalar for Poly {
    fn from_q(x: &Q) -> Self {
        Poly::constant(x.clone())
    }

    fn magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.get(var).copied().unwrap_or(0) > 0)
    }

    fn rename_vars(&self, map: &[usize]) -> Self {
        self.rename(map)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| if e == 1 { format!("v{v}") } else { format!("v{v}^{e}") })
                    .collect();
                if vars.is_empty() {
                    format_q(c)
                } else {
                    format!("{}*{}", format_q(c), vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON form: `{"terms": [{"pow": [1, 0], "coeff": "1/2"}]}`; `pow[i]` is the exponent of variable i.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PolyJson {
    pub terms: Vec<PolyTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PolyTermJson {
    pub pow: Vec<u32>,
    pub coeff: String,
}

impl PolyJson {
    pub fn from_poly(p: &Poly) -> Self {
        Self {
            terms: p
                .terms
                .iter()
                .map(|(m, c)| PolyTermJson {
                    pow: m.clone(),
                    coeff: format_q(c),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<Poly> {
        let mut p = Poly::default();
        for t in &self.terms {
            let c = parse_q(&t.coeff).map_err(|e| GeomError::Parse(e.to_string()))?;
            p.push(trim(t.pow.clone()), c);
        }
        Ok(p)
    }
}

/// Exterior derivative of a form with polynomial coefficients (variable i = coordinate i).
pub fn exterior_derivative(f: &crate::exalg::Form<Poly>) -> crate::exalg::Form<Poly> {
    use crate::exalg::Form;
    let frame = f.frame();
    let mut out = Form::zero(frame, f.degree() + 1);
    for (idx, c) in f.iter() {
        for j in 0..frame.dim() {
            let dc = c.derivative(j);
            if dc.is_zero() {
                continue;
            }
            let mut k = vec![j];
            k.extend(idx.iter().copied());
            out = &out + &Form::monomial(frame, &k, dc);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn arithmetic_and_derivative() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let p = x.clone() * x.clone() * y.clone() + Poly::constant(q(1, 2));
        assert_eq!(p.derivative(0), Poly::constant(qi(2)) * x.clone() * y.clone());
        assert_eq!(p.derivative(1), x.clone() * x.clone());
        assert!(p.derivative(2).is_zero());
        assert!((x.clone() - x.clone()).is_zero());
        assert_eq!(p.eval_q(&[qi(2), qi(3)]), q(25, 2));
        assert!(p.depends_on(1) && !p.depends_on(2));
    }

    #[test]
    fn rename_moves_variables() {
        let p = Poly::var(0) * Poly::var(1);
        let r = p.rename(&[3, 1]);
        assert_eq!(r, Poly::var(3) * Poly::var(1));
    }

    #[test]
    fn json_roundtrip() {
        let p = Poly::monomial(&[(0, 2), (1, 1)], q(-3, 4)) + Poly::constant(qi(1));
        let j = PolyJson::from_poly(&p);
        assert_eq!(j.to_poly().unwrap(), p);
    }
}
