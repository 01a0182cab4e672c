//! Chern–Simons functional of an associative semi-flat pair relative to a
//! reference pair, along the straight-line path between them.

use rayon::prelude::*;

use crate::cycles::func::{pairwise_sum, Func, Grid};
use crate::cycles::semiflat::SemiFlatAssocCycle;
use crate::error::{GeomError, Result};
use crate::exalg::{CoordFrame, Form};
use crate::g2::{G2Structure, X1};

/// Same base line and layout, zero graph and trivial connection.
pub fn zero_reference(like: &SemiFlatAssocCycle) -> SemiFlatAssocCycle {
    let z = like.base_connection.zero_like();
    SemiFlatAssocCycle {
        layout: like.layout,
        graph: [z.clone(), z.clone()],
        base_connection: z.clone(),
        fiber_connection: [z.clone(), z],
    }
}

fn grid_of(f: &Func) -> Result<&Grid> {
    match f {
        Func::Grid(g) if g.axes == [X1] => Ok(g),
        Func::Grid(_) => Err(GeomError::Grid("Chern-Simons data must be sampled along x1 only".into())),
        Func::Poly(_) => Err(GeomError::Grid("Chern-Simons needs periodic grid data".into())),
    }
}

fn funcs(c: &SemiFlatAssocCycle) -> [&Func; 5] {
    [
        &c.graph[0],
        &c.graph[1],
        &c.base_connection,
        &c.fiber_connection[0],
        &c.fiber_connection[1],
    ]
}

/// ∫ over A × [0, 1] of Θ pulled back along the path plus F̃∧F̃/2, with A oriented
/// by (x1, u, v) calibrated and the time direction last. The x1 integral uses the
/// periodic trapezoid rule with central differences; the time integral uses the
/// trapezoid rule on `time_steps` intervals.
pub fn chern_simons(pair: &SemiFlatAssocCycle, reference: &SemiFlatAssocCycle, time_steps: usize) -> Result<f64> {
    if pair.layout != reference.layout {
        return Err(GeomError::Mismatch("pair and reference lie over different base planes".into()));
    }
    if time_steps == 0 {
        return Err(GeomError::Grid("need at least one time step".into()));
    }
    pair.validate()?;
    reference.validate()?;
    let p: Vec<&Grid> = funcs(pair).into_iter().map(grid_of).collect::<Result<_>>()?;
    let r: Vec<&Grid> = funcs(reference).into_iter().map(grid_of).collect::<Result<_>>()?;
    if !p[0].same_layout(r[0]) {
        return Err(GeomError::Grid("pair and reference grids differ".into()));
    }
    let n = p[0].len();
    let delta: Vec<Vec<f64>> = (0..5)
        .map(|k| (0..n).map(|i| p[k].values[i] - r[k].values[i]).collect())
        .collect();
    let d_ref: Vec<Vec<f64>> = r.iter().map(|g| g.derivative(X1).values).collect();
    let d_delta: Vec<Vec<f64>> = (0..5)
        .map(|k| {
            Grid {
                values: delta[k].clone(),
                ..p[0].clone()
            }
            .derivative(X1)
            .values
        })
        .collect();

    let theta = G2Structure::standard().theta.to_f64();
    let (graph, free) = pair.coordinates();
    let oriented = pair.oriented_free();
    // local frame (x1, u, v, t) on A × [0, 1]
    let local = CoordFrame::standard("cs-local", &["x1", "u", "v", "t"]);
    let slot = |c: usize| 1 + oriented.iter().position(|&o| o == c).expect("free coordinate");
    let unit = |i: usize| {
        let mut v = vec![0.0; 7];
        v[i] = 1.0;
        v
    };
    let h = p[0].spacing(0);

    let per_time: Vec<f64> = (0..=time_steps)
        .into_par_iter()
        .map(|step| -> Result<f64> {
            let t = step as f64 / time_steps as f64;
            let w = if step == 0 || step == time_steps { 0.5 } else { 1.0 } / time_steps as f64;
            let mut vals = Vec::with_capacity(n);
            for i in 0..n {
                let mut x = unit(X1);
                let mut tv = vec![0.0; 7];
                for k in 0..2 {
                    x[graph[k]] = d_ref[k][i] + t * d_delta[k][i];
                    tv[graph[k]] = delta[k][i];
                }
                let pulled = theta.evaluate(&[x, unit(oriented[0]), unit(oriented[1]), tv])?;
                let mut f = Form::<f64>::zero(&local, 2);
                for m in 0..2 {
                    let s = slot(free[m]);
                    f = &f + &Form::monomial(&local, &[0, s], d_ref[3 + m][i] + t * d_delta[3 + m][i]);
                    f = &f + &Form::monomial(&local, &[3, s], delta[3 + m][i]);
                }
                f = &f + &Form::monomial(&local, &[3, 0], delta[2][i]);
                let ff = f.wedge(&f).coeff(&[0, 1, 2, 3]) / 2.0;
                vals.push(pulled + ff);
            }
            Ok(w * pairwise_sum(&vals) * h)
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&per_time))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn sample(n: usize, f: impl Fn(f64) -> f64 + Sync) -> Func {
        Func::Grid(Grid::sample(&[X1], &[n], &[1.0], 7, |p| f(p[0])).unwrap())
    }

    fn pair(n: usize) -> SemiFlatAssocCycle {
        SemiFlatAssocCycle::primal(
            sample(n, |x| (TAU * x).sin()),
            sample(n, |x| 0.5 + (TAU * x).cos() + 0.3 * (2.0 * TAU * x).sin()),
            sample(n, |x| 0.2 * (TAU * x).cos()),
            sample(n, |x| (2.0 * TAU * x).cos()),
            sample(n, |x| 0.7 * (TAU * x).sin() - 0.1),
        )
    }

    /// ½∫[(D⁰D¹′ − D¹D⁰′) − (B²B³′ − B²′B³)] with exact derivatives.
    fn closed_form() -> f64 {
        let n = 4096;
        let h = 1.0 / n as f64;
        (0..n)
            .map(|i| {
                let x = i as f64 * h;
                let (b2, b2p) = ((TAU * x).sin(), TAU * (TAU * x).cos());
                let b3 = 0.5 + (TAU * x).cos() + 0.3 * (2.0 * TAU * x).sin();
                let b3p = -TAU * (TAU * x).sin() + 0.6 * TAU * (2.0 * TAU * x).cos();
                let (d0, d0p) = ((2.0 * TAU * x).cos(), -2.0 * TAU * (2.0 * TAU * x).sin());
                let (d1, d1p) = (0.7 * (TAU * x).sin() - 0.1, 0.7 * TAU * (TAU * x).cos());
                0.5 * ((d0 * d1p - d1 * d0p) - (b2 * b3p - b2p * b3)) * h
            })
            .sum()
    }

    #[test]
    fn reference_against_itself_is_zero() {
        let c = pair(16);
        assert_eq!(chern_simons(&c, &c, 4).unwrap(), 0.0);
    }

    #[test]
    fn converges_at_second_order_to_closed_form() {
        let exact = closed_form();
        let err = |n| (chern_simons(&pair(n), &zero_reference(&pair(n)), 8).unwrap() - exact).abs();
        let (e1, e2) = (err(32), err(64));
        assert!(e1 / e2 > 3.5, "{e1} {e2}");
        assert!(e2 < 1e-2);
    }

    #[test]
    fn polynomial_data_rejected() {
        let z = Func::Poly(crate::poly::Poly::default());
        let c = SemiFlatAssocCycle::primal(z.clone(), z.clone(), z.clone(), z.clone(), z);
        assert!(chern_simons(&c, &zero_reference(&c), 4).is_err());
    }
}
