//! Cycles invariant under fiber translations, with abelian connections.
//!
//! Both kinds come in two layouts. The primal layout lives on M with fiber
//! coordinates y⁰..y³; the dual layout lives on W with dual fiber coordinates
//! y_0..y_3, stored at the same frame indices 3..6. The fiberwise transform
//! exchanges graph functions and fiber connection coefficients and flips the
//! layout.

use serde::{Deserialize, Serialize};

use crate::cycles::func::Func;
use crate::error::{GeomError, Result};
use crate::g2::{Plane, X1, X2, Y0, Y1, Y2, Y3};
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    Primal,
    Dual,
}

impl Layout {
    pub fn flip(self) -> Self {
        match self {
            Layout::Primal => Layout::Dual,
            Layout::Dual => Layout::Primal,
        }
    }
}

/// A named residual field with its norms.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub group: &'static str,
    pub name: String,
    pub field: Func,
    pub sup: f64,
    pub l2: f64,
}

impl Channel {
    fn new(group: &'static str, name: impl Into<String>, field: Func) -> Self {
        Self {
            group,
            name: name.into(),
            sup: field.sup_norm(),
            l2: field.l2_norm(),
            field,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub channels: Vec<Channel>,
}

impl ResidualReport {
    pub fn group_sup(&self, group: &str) -> f64 {
        self.channels
            .iter()
            .filter(|c| c.group == group)
            .map(|c| c.sup)
            .fold(0.0, f64::max)
    }

    /// Every channel of the group is exactly zero (polynomials) or within `tol` (grids).
    pub fn group_vanishes(&self, group: &str, tol: f64) -> bool {
        self.channels
            .iter()
            .filter(|c| c.group == group)
            .all(|c| if c.field.is_poly() { c.field.is_zero() } else { c.sup <= tol })
    }

    pub fn sup(&self) -> f64 {
        self.channels.iter().map(|c| c.sup).fold(0.0, f64::max)
    }
}

pub const COASSOCIATIVITY: &str = "coassociativity";
pub const ASSOCIATIVITY: &str = "associativity";
pub const FLATNESS: &str = "flatness";
pub const SELF_DUALITY: &str = "self-duality";

/// Coassociative 4-cycle over the (x1, x2) plane, two fiber directions free.
///
/// Primal: graph y⁰ = B⁰, y³ = B³; connection d + a₁dx¹ + a₂dx² + D₁dy¹ + D₂dy².
/// Dual: graph y_1 = D₁, y_2 = D₂; connection d + a₁dx¹ + a₂dx² + B⁰dy_0 + B³dy_3.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiFlatCoassocCycle {
    pub layout: Layout,
    pub graph: [Func; 2],
    pub base_connection: [Func; 2],
    pub fiber_connection: [Func; 2],
}

impl SemiFlatCoassocCycle {
    /// Primal cycle from (B⁰, B³, a₁, a₂, D₁, D₂).
    pub fn primal(b0: Func, b3: Func, a1: Func, a2: Func, d1: Func, d2: Func) -> Self {
        Self {
            layout: Layout::Primal,
            graph: [b0, b3],
            base_connection: [a1, a2],
            fiber_connection: [d1, d2],
        }
    }

    /// Frame indices of the graph coordinates and of the free fiber coordinates.
    pub fn coordinates(&self) -> ([usize; 2], [usize; 2]) {
        match self.layout {
            Layout::Primal => ([Y0, Y3], [Y1, Y2]),
            Layout::Dual => ([Y1, Y2], [Y0, Y3]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        Func::common_layout(self.graph.iter().chain(&self.base_connection).chain(&self.fiber_connection))?;
        Ok(())
    }

    pub fn residual(&self) -> Result<ResidualReport> {
        self.validate()?;
        let d = |f: &Func, v: usize| f.derivative(v);
        let [g0, g1] = &self.graph;
        let [c0, c1] = &self.fiber_connection;
        let [a1, a2] = &self.base_connection;
        let curl = d(a1, X2).try_sub(&d(a2, X1))?;
        let (co, sd) = match self.layout {
            Layout::Primal => (
                [
                    d(g0, X1).try_sub(&d(g1, X2))?,
                    d(g1, X1).try_add(&d(g0, X2))?,
                ],
                [
                    d(c1, X1).try_sub(&d(c0, X2))?,
                    d(c0, X1).try_add(&d(c1, X2))?,
                ],
            ),
            Layout::Dual => (
                [
                    d(g1, X1).try_sub(&d(g0, X2))?,
                    d(g0, X1).try_add(&d(g1, X2))?.neg(),
                ],
                [
                    d(c0, X1).try_sub(&d(c1, X2))?,
                    d(c0, X2).try_add(&d(c1, X1))?,
                ],
            ),
        };
        let [co0, co1] = co;
        let [sd0, sd1] = sd;
        Ok(ResidualReport {
            channels: vec![
                Channel::new(COASSOCIATIVITY, "coassociativity-1", co0),
                Channel::new(COASSOCIATIVITY, "coassociativity-2", co1),
                Channel::new(FLATNESS, "curl", curl),
                Channel::new(SELF_DUALITY, "self-duality-1", sd0),
                Channel::new(SELF_DUALITY, "self-duality-2", sd1),
            ],
        })
    }

    /// Tangent 4-plane of the graph at a point where the base derivatives of the
    /// graph functions are `dg[k][i]` = ∂g_k/∂x^{i+1}.
    pub fn tangent_plane<T: Field>(&self, dg: [[T; 2]; 2]) -> Plane<T> {
        let (graph, free) = self.coordinates();
        let mut vectors = Vec::new();
        for i in 0..2 {
            let mut v = vec![T::zero(); 7];
            v[X1 + i] = T::one();
            for k in 0..2 {
                v[graph[k]] = dg[k][i].clone();
            }
            vectors.push(v);
        }
        for f in free {
            let mut v = vec![T::zero(); 7];
            v[f] = T::one();
            vectors.push(v);
        }
        Plane::new(vectors)
    }
}

/// Associative 3-cycle over the x1 line, two fiber directions free.
///
/// Primal: graph y² = B², y³ = B³; connection d + a dx¹ + D⁰dy⁰ + D¹dy¹.
/// Dual: graph y_0 = D⁰, y_1 = D¹; connection d + a dx¹ + B²dy_2 + B³dy_3.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiFlatAssocCycle {
    pub layout: Layout,
    pub graph: [Func; 2],
    pub base_connection: Func,
    pub fiber_connection: [Func; 2],
}

impl SemiFlatAssocCycle {
    /// Primal cycle from (B², B³, a, D⁰, D¹).
    pub fn primal(b2: Func, b3: Func, a: Func, d0: Func, d1: Func) -> Self {
        Self {
            layout: Layout::Primal,
            graph: [b2, b3],
            base_connection: a,
            fiber_connection: [d0, d1],
        }
    }

    /// Frame indices of graph coordinates and of the free fiber coordinates
    /// (the latter in the order carrying the fiber connection coefficients).
    pub fn coordinates(&self) -> ([usize; 2], [usize; 2]) {
        match self.layout {
            Layout::Primal => ([Y2, Y3], [Y0, Y1]),
            Layout::Dual => ([Y0, Y1], [Y2, Y3]),
        }
    }

    /// Free fiber coordinates in the order that makes (x1, u, v) calibrated.
    pub fn oriented_free(&self) -> [usize; 2] {
        match self.layout {
            Layout::Primal => [Y0, Y1],
            Layout::Dual => [Y3, Y2],
        }
    }

    pub fn validate(&self) -> Result<()> {
        Func::common_layout(
            self.graph
                .iter()
                .chain(std::iter::once(&self.base_connection))
                .chain(&self.fiber_connection),
        )?;
        Ok(())
    }

    pub fn residual(&self) -> Result<ResidualReport> {
        self.validate()?;
        let names = match self.layout {
            Layout::Primal => ["B2", "B3", "a", "D0", "D1"],
            Layout::Dual => ["D0", "D1", "a", "B2", "B3"],
        };
        let funcs = [
            &self.graph[0],
            &self.graph[1],
            &self.base_connection,
            &self.fiber_connection[0],
            &self.fiber_connection[1],
        ];
        let channels = funcs
            .iter()
            .zip(names)
            .enumerate()
            .map(|(n, (f, name))| {
                let group = if n < 2 { ASSOCIATIVITY } else { FLATNESS };
                Channel::new(group, format!("d{name}/dx1"), f.derivative(X1))
            })
            .collect();
        Ok(ResidualReport { channels })
    }
}

/// Rejects data that is not fiber-invariant, i.e. depends on a fiber coordinate.
pub(crate) fn check_base_only(funcs: &[&Func], base: &[usize]) -> Result<()> {
    for f in funcs {
        let bad = match f {
            Func::Poly(p) => (0..7).any(|v| !base.contains(&v) && crate::scalar::Scalar::depends_on(p, v)),
            Func::Grid(g) => g.axes.iter().any(|a| !base.contains(a)),
        };
        if bad {
            return Err(GeomError::NotSemiFlat("function depends on a fiber coordinate".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2::{calibrate_plane, G2Structure, PlaneKind};
    use crate::poly::Poly;
    use crate::scalar::{qi, Q};

    fn p(x: Poly) -> Func {
        Func::Poly(x)
    }

    fn zero() -> Func {
        p(Poly::default())
    }

    #[test]
    fn constants_have_zero_residual() {
        let c = |n| p(Poly::constant(qi(n)));
        let cyc = SemiFlatCoassocCycle::primal(c(1), c(2), c(3), c(-1), c(0), c(5));
        assert_eq!(cyc.residual().unwrap().sup(), 0.0);
    }

    #[test]
    fn linear_coassociative_graph() {
        let cyc = SemiFlatCoassocCycle::primal(p(Poly::var(X1)), p(Poly::var(X2)), zero(), zero(), zero(), zero());
        assert!(cyc.residual().unwrap().group_vanishes(COASSOCIATIVITY, 0.0));
        let plane = cyc.tangent_plane([[qi(1), qi(0)], [qi(0), qi(1)]]);
        let v = calibrate_plane(&G2Structure::standard(), &plane, 0.0).unwrap();
        assert!(v.calibrated_by_residual);
    }

    #[test]
    fn non_coassociative_graph() {
        let cyc = SemiFlatCoassocCycle::primal(p(Poly::var(X2)), zero(), zero(), zero(), zero(), zero());
        let r = cyc.residual().unwrap();
        assert_eq!(r.channels[0].field, zero());
        assert_eq!(r.channels[1].field, p(Poly::constant(qi(1))));
        let plane = cyc.tangent_plane::<Q>([[qi(0), qi(1)], [qi(0), qi(0)]]);
        let v = calibrate_plane(&G2Structure::standard(), &plane, 0.0).unwrap();
        assert_eq!(v.kind, PlaneKind::Neither);
    }

    #[test]
    fn dual_layout_planes_follow_residual() {
        let g = G2Structure::standard();
        let mut cyc = SemiFlatCoassocCycle::primal(zero(), zero(), zero(), zero(), zero(), zero());
        cyc.layout = Layout::Dual;
        // y_1 = x2, y_2 = x1 solves the dual system
        let plane = cyc.tangent_plane([[qi(0), qi(1)], [qi(1), qi(0)]]);
        assert!(calibrate_plane(&g, &plane, 0.0).unwrap().calibrated_by_residual);
        let plane = cyc.tangent_plane([[qi(0), qi(1)], [qi(-1), qi(0)]]);
        assert!(!calibrate_plane(&g, &plane, 0.0).unwrap().calibrated_by_residual);
        cyc.graph = [p(Poly::var(X2)), p(Poly::var(X1))];
        assert!(cyc.residual().unwrap().group_vanishes(COASSOCIATIVITY, 0.0));
    }

    #[test]
    fn associative_channels() {
        let cyc = SemiFlatAssocCycle::primal(p(Poly::var(X1)), zero(), zero(), zero(), zero());
        let r = cyc.residual().unwrap();
        assert_eq!(r.channels[0].field, p(Poly::constant(qi(1))));
        assert!(!r.group_vanishes(ASSOCIATIVITY, 0.0));
        assert!(r.group_vanishes(FLATNESS, 0.0));
    }

    #[test]
    fn fiber_dependence_detected() {
        let f = p(Poly::var(Y1));
        assert!(check_base_only(&[&f], &[X1, X2]).is_err());
        assert!(check_base_only(&[&p(Poly::var(X2))], &[X1, X2]).is_ok());
    }
}
