use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::scalar::{qi, Q};

fn reduce(x: &Q, period: &Q) -> Q {
    let r = x / period;
    let frac = &r - r.floor();
    frac * period
}

fn check_lattice(l: &[Q]) -> Result<()> {
    if l.is_empty() {
        return Err(GeomError::InvalidFrame("torus of dimension zero".into()));
    }
    if l.iter().any(|c| !c.is_positive()) {
        return Err(GeomError::InvalidFrame("covolumes must be positive".into()));
    }
    Ok(())
}

/// A point of R^n / ⊕ c_j Z, coordinates reduced to [0, c_j).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusPoint {
    #[serde(with = "crate::scalar::q_list")]
    pub coords: Vec<Q>,
    #[serde(with = "crate::scalar::q_list")]
    pub lattice: Vec<Q>,
}

impl TorusPoint {
    pub fn new(coords: Vec<Q>, lattice: Vec<Q>) -> Result<Self> {
        check_lattice(&lattice)?;
        if coords.len() != lattice.len() {
            return Err(GeomError::Arity {
                expected: lattice.len(),
                got: coords.len(),
            });
        }
        let coords = coords.iter().zip(&lattice).map(|(x, c)| reduce(x, c)).collect();
        Ok(Self { coords, lattice })
    }
}

/// A flat U(1) connection on the torus with the given lattice, recorded by its
/// holonomy angles in turns, reduced to [0, 1). The holonomy around the j-th
/// circle is exp(2πi·angles[j]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatConnection {
    #[serde(with = "crate::scalar::q_list")]
    pub angles: Vec<Q>,
    #[serde(with = "crate::scalar::q_list")]
    pub lattice: Vec<Q>,
}

impl FlatConnection {
    pub fn new(angles: Vec<Q>, lattice: Vec<Q>) -> Result<Self> {
        check_lattice(&lattice)?;
        if angles.len() != lattice.len() {
            return Err(GeomError::Arity {
                expected: lattice.len(),
                got: angles.len(),
            });
        }
        let angles = angles.iter().map(|a| reduce(a, &qi(1))).collect();
        Ok(Self { angles, lattice })
    }

    pub fn is_trivial(&self) -> bool {
        self.angles.iter().all(Zero::is_zero)
    }

    /// Holonomy around each circle as (cos, sin) of 2π·angle.
    pub fn holonomy(&self) -> Vec<(f64, f64)> {
        self.angles
            .iter()
            .map(|a| {
                // exact on the quarter lattice, where sin/cos rounding would leak
                let four = a * qi(4);
                if four.is_integer() {
                    return match four.to_integer().mod_floor(&4.into()).to_u8() {
                        Some(0) => (1.0, 0.0),
                        Some(1) => (0.0, 1.0),
                        Some(2) => (-1.0, 0.0),
                        _ => (0.0, -1.0),
                    };
                }
                let t = std::f64::consts::TAU * crate::scalar::Field::approx(a);
                (t.cos(), t.sin())
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum FlatTorusObject {
    Point(TorusPoint),
    Connection(FlatConnection),
}

/// A point x of T = R^n/⊕c_jZ goes to the flat connection on the dual torus
/// (covolumes 1/c_j) with angles x_j/c_j; a flat connection goes back to the
/// point of the torus dual to its own.
pub fn transform_flat_torus(x: &FlatTorusObject) -> Result<FlatTorusObject> {
    match x {
        FlatTorusObject::Point(p) => {
            let angles = p.coords.iter().zip(&p.lattice).map(|(x, c)| x / c).collect();
            let dual = p.lattice.iter().map(|c| qi(1) / c).collect();
            Ok(FlatTorusObject::Connection(FlatConnection::new(angles, dual)?))
        }
        FlatTorusObject::Connection(a) => {
            let lattice: Vec<Q> = a.lattice.iter().map(|c| qi(1) / c).collect();
            let coords = a.angles.iter().zip(&lattice).map(|(t, c)| t * c).collect();
            Ok(FlatTorusObject::Point(TorusPoint::new(coords, lattice)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn origin_goes_to_trivial_connection() {
        let p = TorusPoint::new(vec![qi(0); 7], vec![qi(1); 7]).unwrap();
        match transform_flat_torus(&FlatTorusObject::Point(p)).unwrap() {
            FlatTorusObject::Connection(c) => assert!(c.is_trivial()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn half_lattice_point_has_holonomy_minus_one() {
        let lattice = vec![qi(2), q(1, 3), qi(1), qi(5)];
        let coords = lattice.iter().map(|c| c / qi(2)).collect();
        let p = TorusPoint::new(coords, lattice).unwrap();
        let FlatTorusObject::Connection(c) = transform_flat_torus(&FlatTorusObject::Point(p)).unwrap() else {
            panic!()
        };
        assert!(c.holonomy().iter().all(|&h| h == (-1.0, 0.0)));
        assert_eq!(c.lattice[0], q(1, 2));
    }

    #[test]
    fn coordinates_are_reduced() {
        let p = TorusPoint::new(vec![q(7, 2), q(-1, 4)], vec![qi(1), qi(2)]).unwrap();
        assert_eq!(p.coords, vec![q(1, 2), q(7, 4)]);
    }

    #[test]
    fn double_transform_is_identity() {
        let p = FlatTorusObject::Point(TorusPoint::new(vec![q(3, 7), q(5, 4)], vec![qi(1), q(3, 2)]).unwrap());
        let back = transform_flat_torus(&transform_flat_torus(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
