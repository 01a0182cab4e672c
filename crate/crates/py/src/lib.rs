//! Python module `g2geom`. Structured data crosses the boundary as JSON strings in
//! the same formats the command line tool reads and writes; rationals are strings
//! such as "-3/4".

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use g2geom::exalg::json::FormJson;
use g2geom::fourier::Fibration;
use g2geom::g2::{calibrate_plane, g2_frame, standard_decomposition, G2Structure, Plane};
use g2geom::io::{residual_norms, transform, ObjectJson};
use g2geom::scalar::{format_q, parse_q};
use g2geom::spin7::{spin7_decomposition, spin7_frame, theta_z};
use g2geom::verify::{run_suite, SuiteConfig};
use g2geom::{GeomError, Q};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rationals(v: &[String]) -> PyResult<Vec<Q>> {
    v.iter().map(|s| parse_q(s).map_err(err)).collect()
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Runs the verification suites. `config` is a JSON suite configuration; the
/// defaults are used when it is omitted. Returns the JSON report.
#[pyfunction]
#[pyo3(signature = (config=None))]
fn verify(config: Option<&str>) -> PyResult<String> {
    let cfg = match config {
        Some(s) => SuiteConfig::from_json(s).map_err(err)?,
        None => SuiteConfig::default(),
    };
    Ok(run_suite(&cfg).map_err(err)?.to_json())
}

/// Fiberwise transform along "coassociative-t4" or "associative-t3".
#[pyfunction]
fn fourier_transform(fibration: &str, object: &str) -> PyResult<String> {
    let f: Fibration = serde_json::from_value(serde_json::Value::from(fibration)).map_err(err)?;
    let obj = ObjectJson::parse(object).map_err(err)?.decode().map_err(err)?;
    Ok(ObjectJson::encode(&transform(f, &obj).map_err(err)?).to_json())
}

/// Sup norms of the residual groups of a cycle, section or connection.
#[pyfunction]
fn residuals(object: &str) -> PyResult<std::collections::BTreeMap<String, f64>> {
    let obj = ObjectJson::parse(object).map_err(err)?.decode().map_err(err)?;
    residual_norms(&obj).map_err(err)
}

/// Irreducible components of a form as a list of (label, form JSON).
#[pyfunction]
fn decompose(space: &str, form: &str) -> PyResult<Vec<(String, String)>> {
    let fj: FormJson = serde_json::from_str(form).map_err(err)?;
    let (frame, split) = match space {
        "g2" => (g2_frame(), standard_decomposition(fj.degree)),
        "spin7" => (spin7_frame(), spin7_decomposition(fj.degree)),
        other => return Err(err(GeomError::Unknown { kind: "space", name: other.into() })),
    };
    let a = fj.to_form(|n| (n == frame.name()).then(|| frame.clone())).map_err(err)?;
    let parts = split.and_then(|d| d.split(&a)).map_err(err)?;
    Ok(parts
        .into_iter()
        .map(|c| (c.label, to_json(&FormJson::from_form(&c.form))))
        .collect())
}

/// The G2 3-form Ω as form JSON.
#[pyfunction]
fn omega() -> String {
    to_json(&FormJson::from_form(&G2Structure::standard().omega))
}

/// The Spin(7) 4-form Θ_Z as form JSON.
#[pyfunction]
fn theta_z_form() -> String {
    to_json(&FormJson::from_form(&theta_z()))
}

/// Exact cross product u × v on R⁷.
#[pyfunction]
fn cross(u: Vec<String>, v: Vec<String>) -> PyResult<Vec<String>> {
    let (u, v) = (rationals(&u)?, rationals(&v)?);
    if u.len() != 7 || v.len() != 7 {
        return Err(err("cross product needs two vectors of length 7"));
    }
    Ok(G2Structure::standard().cross(&u, &v).iter().map(format_q).collect())
}

/// Calibration verdict for the plane spanned by 3 or 4 rational vectors, as JSON.
#[pyfunction]
#[pyo3(signature = (vectors, tol=0.0))]
fn calibrate(vectors: Vec<Vec<String>>, tol: f64) -> PyResult<String> {
    let vs = vectors.iter().map(|v| rationals(v)).collect::<PyResult<Vec<_>>>()?;
    let verdict = calibrate_plane(&G2Structure::standard(), &Plane::new(vs), tol).map_err(err)?;
    Ok(to_json(&verdict))
}

#[pymodule]
fn g2geom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_transform, m)?)?;
    m.add_function(wrap_pyfunction!(residuals, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(theta_z_form, m)?)?;
    m.add_function(wrap_pyfunction!(cross, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate, m)?)?;
    Ok(())
}
