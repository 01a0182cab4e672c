//! JSON wire format for cycles, sections, flat torus data and transformed
//! connections, shared by the command line tool and the Python module.
//!
//! Every object carries a `"kind"` tag. Functions use the `FuncJson` format
//! (`{"poly": ...}` or `{"grid": ...}`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cycles::semiflat::{ASSOCIATIVITY, COASSOCIATIVITY, FLATNESS, SELF_DUALITY};
use crate::cycles::{Func, FuncJson, Layout, SectionCycle, SectionKind, SemiFlatAssocCycle, SemiFlatCoassocCycle};
use crate::error::{GeomError, Result};
use crate::fourier::{
    transform_flat_torus, transform_section, transform_semiflat_assoc, transform_semiflat_coassoc, ConnectionOnW,
    DualFrames, Fibration, FlatConnection, FlatTorusObject, TorusPoint,
};
use crate::g2::deformed_dt_residual;

fn primal() -> Layout {
    Layout::Primal
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObjectJson {
    /// Graph (B⁰, B³), base connection (a₁, a₂), fiber connection (D₁, D₂) in the primal layout.
    CoassocSemiflat {
        #[serde(default = "primal")]
        layout: Layout,
        graph: [FuncJson; 2],
        base_connection: [FuncJson; 2],
        fiber_connection: [FuncJson; 2],
    },
    /// Graph (B², B³), base connection a, fiber connection (D⁰, D¹) in the primal layout.
    AssocSemiflat {
        #[serde(default = "primal")]
        layout: Layout,
        graph: [FuncJson; 2],
        base_connection: FuncJson,
        fiber_connection: [FuncJson; 2],
    },
    /// f⁰..f³ over (x1, x2, x3) and a₁..a₃.
    AssocSection {
        components: Vec<FuncJson>,
        connection: Vec<FuncJson>,
    },
    /// g¹..g³ over (y0..y3) and a₀..a₃.
    CoassocSection {
        components: Vec<FuncJson>,
        connection: Vec<FuncJson>,
    },
    TorusPoint(TorusPoint),
    FlatConnection(FlatConnection),
    /// One coefficient per coordinate of W, in frame order.
    ConnectionOnW {
        fibration: Fibration,
        coordinates: Vec<String>,
        coefficients: Vec<FuncJson>,
    },
}

/// A decoded object.
#[derive(Clone, Debug, PartialEq)]
pub enum Object {
    CoassocSemiflat(SemiFlatCoassocCycle),
    AssocSemiflat(SemiFlatAssocCycle),
    Section(SectionCycle),
    Torus(FlatTorusObject),
    Connection { fibration: Fibration, connection: ConnectionOnW },
}

fn funcs<const N: usize>(fs: &[FuncJson; N]) -> Result<[Func; N]> {
    let v: Vec<Func> = fs.iter().map(FuncJson::to_func).collect::<Result<_>>()?;
    Ok(v.try_into().expect("length preserved"))
}

fn func_list(fs: &[FuncJson]) -> Result<Vec<Func>> {
    fs.iter().map(FuncJson::to_func).collect()
}

fn encode<const N: usize>(fs: &[Func; N]) -> [FuncJson; N] {
    fs.each_ref().map(FuncJson::from_func)
}

impl ObjectJson {
    /// The `kind` tag.
    pub fn kind(&self) -> &'static str {
        match self {
            ObjectJson::CoassocSemiflat { .. } => "coassoc-semiflat",
            ObjectJson::AssocSemiflat { .. } => "assoc-semiflat",
            ObjectJson::AssocSection { .. } => "assoc-section",
            ObjectJson::CoassocSection { .. } => "coassoc-section",
            ObjectJson::TorusPoint(_) => "torus-point",
            ObjectJson::FlatConnection(_) => "flat-connection",
            ObjectJson::ConnectionOnW { .. } => "connection-on-w",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| GeomError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("objects serialize")
    }

    pub fn decode(&self) -> Result<Object> {
        Ok(match self {
            ObjectJson::CoassocSemiflat {
                layout,
                graph,
                base_connection,
                fiber_connection,
            } => {
                let c = SemiFlatCoassocCycle {
                    layout: *layout,
                    graph: funcs(graph)?,
                    base_connection: funcs(base_connection)?,
                    fiber_connection: funcs(fiber_connection)?,
                };
                c.validate()?;
                Object::CoassocSemiflat(c)
            }
            ObjectJson::AssocSemiflat {
                layout,
                graph,
                base_connection,
                fiber_connection,
            } => {
                let c = SemiFlatAssocCycle {
                    layout: *layout,
                    graph: funcs(graph)?,
                    base_connection: base_connection.to_func()?,
                    fiber_connection: funcs(fiber_connection)?,
                };
                c.validate()?;
                Object::AssocSemiflat(c)
            }
            ObjectJson::AssocSection { components, connection } => {
                section(SectionKind::AssociativeSection, components, connection)?
            }
            ObjectJson::CoassocSection { components, connection } => {
                section(SectionKind::CoassociativeSection, components, connection)?
            }
            ObjectJson::TorusPoint(p) => Object::Torus(FlatTorusObject::Point(TorusPoint::new(
                p.coords.clone(),
                p.lattice.clone(),
            )?)),
            ObjectJson::FlatConnection(a) => Object::Torus(FlatTorusObject::Connection(FlatConnection::new(
                a.angles.clone(),
                a.lattice.clone(),
            )?)),
            ObjectJson::ConnectionOnW {
                fibration,
                coordinates,
                coefficients,
            } => {
                let w = DualFrames::unit(*fibration).w;
                if coordinates != w.labels() {
                    return Err(GeomError::Mismatch(format!(
                        "coordinates {coordinates:?} do not match W {:?}",
                        w.labels()
                    )));
                }
                Object::Connection {
                    fibration: *fibration,
                    connection: ConnectionOnW::new(&w, func_list(coefficients)?)?,
                }
            }
        })
    }

    pub fn encode(obj: &Object) -> Self {
        match obj {
            Object::CoassocSemiflat(c) => ObjectJson::CoassocSemiflat {
                layout: c.layout,
                graph: encode(&c.graph),
                base_connection: encode(&c.base_connection),
                fiber_connection: encode(&c.fiber_connection),
            },
            Object::AssocSemiflat(c) => ObjectJson::AssocSemiflat {
                layout: c.layout,
                graph: encode(&c.graph),
                base_connection: FuncJson::from_func(&c.base_connection),
                fiber_connection: encode(&c.fiber_connection),
            },
            Object::Section(s) => {
                let components = s.components.iter().map(FuncJson::from_func).collect();
                let connection = s.connection.iter().map(FuncJson::from_func).collect();
                match s.kind {
                    SectionKind::AssociativeSection => ObjectJson::AssocSection { components, connection },
                    SectionKind::CoassociativeSection => ObjectJson::CoassocSection { components, connection },
                }
            }
            Object::Torus(FlatTorusObject::Point(p)) => ObjectJson::TorusPoint(p.clone()),
            Object::Torus(FlatTorusObject::Connection(a)) => ObjectJson::FlatConnection(a.clone()),
            Object::Connection { fibration, connection } => ObjectJson::ConnectionOnW {
                fibration: *fibration,
                coordinates: connection.frame.labels().to_vec(),
                coefficients: connection.coeffs.iter().map(FuncJson::from_func).collect(),
            },
        }
    }
}

fn section(kind: SectionKind, components: &[FuncJson], connection: &[FuncJson]) -> Result<Object> {
    let s = SectionCycle {
        kind,
        components: func_list(components)?,
        connection: func_list(connection)?,
    };
    s.validate()?;
    Ok(Object::Section(s))
}

/// Fibration an object is transformed along, if it belongs to exactly one.
pub fn native_fibration(obj: &Object) -> Option<Fibration> {
    match obj {
        Object::CoassocSemiflat(_) | Object::AssocSemiflat(_) => Some(Fibration::CoassociativeT4),
        Object::Section(s) => Some(match s.kind {
            SectionKind::AssociativeSection => Fibration::CoassociativeT4,
            SectionKind::CoassociativeSection => Fibration::AssociativeT3,
        }),
        Object::Torus(_) => None,
        Object::Connection { fibration, .. } => Some(*fibration),
    }
}

/// Fiberwise transform along `fibration`. Flat torus data transforms along either.
pub fn transform(fibration: Fibration, obj: &Object) -> Result<Object> {
    if let Some(f) = native_fibration(obj) {
        if f != fibration {
            return Err(GeomError::Mismatch(format!(
                "this object is transformed along {f:?}, not {fibration:?}"
            )));
        }
    }
    Ok(match obj {
        Object::CoassocSemiflat(c) => Object::CoassocSemiflat(transform_semiflat_coassoc(c)?),
        Object::AssocSemiflat(c) => Object::AssocSemiflat(transform_semiflat_assoc(c)?),
        Object::Section(s) => Object::Connection {
            fibration,
            connection: transform_section(s)?,
        },
        Object::Torus(t) => Object::Torus(transform_flat_torus(t)?),
        Object::Connection { .. } => {
            return Err(GeomError::Mismatch("transformed connections cannot be transformed back".into()))
        }
    })
}

/// Sup norms of the residual groups of an object; flat torus data has none.
pub fn residual_norms(obj: &Object) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    match obj {
        Object::CoassocSemiflat(c) => {
            let r = c.residual()?;
            for g in [COASSOCIATIVITY, FLATNESS, SELF_DUALITY] {
                out.insert(g.to_string(), r.group_sup(g));
            }
        }
        Object::AssocSemiflat(c) => {
            let r = c.residual()?;
            for g in [ASSOCIATIVITY, FLATNESS] {
                out.insert(g.to_string(), r.group_sup(g));
            }
        }
        Object::Section(s) => {
            let r = s.residual()?;
            out.insert("section".into(), r.section_sup());
            out.insert(FLATNESS.into(), r.flatness_sup());
        }
        Object::Torus(_) => {}
        Object::Connection { connection, .. } => {
            let g = crate::g2::G2Structure::on_frame(&connection.frame);
            let sup = match (connection.exact_curvature(), connection.sampled_curvature()) {
                (Some(f), _) => deformed_dt_residual(&g, f)?.max_abs(),
                (None, Some((_, forms))) => {
                    let mut worst = 0.0f64;
                    for f in forms {
                        worst = worst.max(deformed_dt_residual(&g, f)?.max_abs());
                    }
                    worst
                }
                (None, None) => unreachable!("a connection has curvature"),
            };
            out.insert("deformed-dt".into(), sup);
        }
    }
    Ok(out)
}

/// Whether every residual field vanishes: exactly for polynomial data, within
/// `tol` for grids.
pub fn residuals_vanish(obj: &Object, tol: f64) -> Result<bool> {
    let all_poly = |fs: Vec<&Func>| fs.into_iter().all(Func::is_poly);
    let poly = match obj {
        Object::CoassocSemiflat(c) => all_poly(c.graph.iter().chain(&c.base_connection).chain(&c.fiber_connection).collect()),
        Object::AssocSemiflat(c) => all_poly(
            c.graph
                .iter()
                .chain(std::iter::once(&c.base_connection))
                .chain(&c.fiber_connection)
                .collect(),
        ),
        Object::Section(s) => all_poly(s.components.iter().chain(&s.connection).collect()),
        Object::Torus(_) => true,
        Object::Connection { connection, .. } => connection.exact_curvature().is_some(),
    };
    let bound = if poly { 0.0 } else { tol };
    Ok(residual_norms(obj)?.values().all(|v| *v <= bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SEMIFLAT: &str = r#"{
        "kind": "coassoc-semiflat",
        "graph": [{"poly": {"terms": [{"pow": [1], "coeff": "1"}]}}, {"poly": {"terms": [{"pow": [0, 1], "coeff": "-1"}]}}],
        "base_connection": [{"poly": {"terms": []}}, {"poly": {"terms": []}}],
        "fiber_connection": [{"poly": {"terms": []}}, {"poly": {"terms": []}}]
    }"#;

    #[test]
    fn semiflat_round_trip_and_transform() {
        let j = ObjectJson::parse(SEMIFLAT).unwrap();
        let obj = j.decode().unwrap();
        assert_eq!(ObjectJson::encode(&obj), j);
        let t = transform(Fibration::CoassociativeT4, &obj).unwrap();
        assert!(matches!(&t, Object::CoassocSemiflat(c) if c.layout == Layout::Dual));
        assert_eq!(transform(Fibration::CoassociativeT4, &t).unwrap(), obj);
        assert!(transform(Fibration::AssociativeT3, &obj).is_err());
    }

    #[test]
    fn torus_point_goes_either_way() {
        let j = ObjectJson::parse(r#"{"kind": "torus-point", "coords": ["1/2", "0", "0"], "lattice": ["1", "2", "1"]}"#)
            .unwrap();
        let obj = j.decode().unwrap();
        for f in [Fibration::CoassociativeT4, Fibration::AssociativeT3] {
            assert!(matches!(transform(f, &obj).unwrap(), Object::Torus(FlatTorusObject::Connection(_))));
        }
        assert!(residual_norms(&obj).unwrap().is_empty());
    }

    #[test]
    fn zero_section_gives_flat_connection() {
        let zero = r#"{"poly": {"terms": []}}"#;
        let s = format!(
            r#"{{"kind": "assoc-section", "components": [{zero}, {zero}, {zero}, {zero}], "connection": [{zero}, {zero}, {zero}]}}"#
        );
        let obj = ObjectJson::parse(&s).unwrap().decode().unwrap();
        assert!(residuals_vanish(&obj, 0.0).unwrap());
        let t = transform(Fibration::CoassociativeT4, &obj).unwrap();
        assert_eq!(residual_norms(&t).unwrap()["deformed-dt"], 0.0);
        let back = ObjectJson::encode(&t);
        assert_eq!(back.decode().unwrap(), t);
    }

    #[test]
    fn rejects_unknown_kind_and_fields() {
        assert!(ObjectJson::parse(r#"{"kind": "spiral"}"#).is_err());
        assert!(ObjectJson::parse(r#"{"kind": "torus-point", "coords": [], "lattice": [], "x": 1}"#).is_err());
    }
}
