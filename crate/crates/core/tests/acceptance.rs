//! Acceptance criteria, one line each. Every criterion runs the verification
//! harness with a pinned configuration and requires a fixed set of checks to pass.

use std::io::Write;

use g2geom::verify::{run_suite, CheckRecord, Status, SuiteConfig};

/// Absolute tolerance for the floating point section checks.
const TOL_SECTIONS: f64 = 1e-9;
/// Tolerance for the √3 family.
const TOL_DIAGONAL: f64 = 1e-12;
/// Relative spread allowed in CS_M − CS_W.
const TOL_CS_SPREAD: f64 = 1e-6;
/// Grid resolutions for the Chern-Simons checks; the finest is 64.
const CS_GRIDS: [usize; 2] = [32, 64];

struct Criterion {
    number: u32,
    title: &'static str,
    config: SuiteConfig,
    /// Check ids that must pass, with the minimum sample count each must report.
    checks: Vec<(&'static str, usize)>,
}

fn config(suites: &[&str], samples: usize) -> SuiteConfig {
    SuiteConfig {
        suites: suites.iter().map(|s| s.to_string()).collect(),
        samples,
        ..SuiteConfig::default()
    }
}

fn exact(ids: &[&'static str]) -> Vec<(&'static str, usize)> {
    ids.iter().map(|id| (*id, 0)).collect()
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            number: 1,
            title: "structure constants",
            config: config(&["g2-identities", "spin7-identities"], 1),
            checks: exact(&[
                "g2-identities/hodge-omega",
                "g2-identities/omega-wedge-theta",
                "spin7-identities/theta-z-self-dual",
                "spin7-identities/theta-z-square",
            ]),
        },
        Criterion {
            number: 2,
            title: "stabilizer dimensions 14 and 21",
            config: config(&["g2-identities", "spin7-identities"], 1),
            checks: exact(&["g2-identities/stabilizer", "spin7-identities/stabilizer"]),
        },
        Criterion {
            number: 3,
            title: "decompositions and projectors",
            config: config(&["decompositions"], 50),
            checks: vec![
                ("decompositions/g2-lambda2-dims", 0),
                ("decompositions/g2-lambda2-projectors", 0),
                ("decompositions/g2-lambda3-dims", 0),
                ("decompositions/g2-lambda3-projectors", 0),
                ("decompositions/spin7-lambda2-dims", 0),
                ("decompositions/spin7-lambda2-projectors", 0),
                ("decompositions/spin7-lambda4-dims", 0),
                ("decompositions/spin7-lambda4-projectors", 0),
                ("decompositions/fourteen-wedge-theta", 50),
            ],
        },
        Criterion {
            number: 4,
            title: "cross product laws",
            config: config(&["g2-identities"], 1000),
            checks: vec![("g2-identities/cross-product-basis", 0), ("g2-identities/cross-product-norm", 1000)],
        },
        Criterion {
            number: 5,
            title: "Fourier transform of e^Θ and ⋆e^Θ",
            config: config(&["fourier"], 1),
            checks: exact(&["fourier/t4-exp-theta", "fourier/t3-exp-theta"]),
        },
        Criterion {
            number: 6,
            title: "section transform over random jets",
            config: SuiteConfig {
                tol_abs: TOL_SECTIONS,
                ..config(&["sections"], 500)
            },
            checks: vec![("sections/section-transform", 500)],
        },
        Criterion {
            number: 6,
            title: "section transform on the √3 family",
            config: SuiteConfig {
                tol_abs: TOL_DIAGONAL,
                ..config(&["sections"], 1)
            },
            checks: exact(&["sections/diagonal-family"]),
        },
        Criterion {
            number: 7,
            title: "coassociative section transform",
            config: SuiteConfig {
                tol_abs: TOL_SECTIONS,
                ..config(&["sections"], 100)
            },
            checks: vec![("sections/coassoc-section-transform", 100)],
        },
        Criterion {
            number: 8,
            title: "semi-flat condition swap",
            config: config(&["fourier"], 200),
            checks: vec![("fourier/semiflat-condition-swap", 200)],
        },
        Criterion {
            number: 9,
            title: "flat moduli identifications",
            config: config(&["moduli-flat"], 1),
            checks: exact(&[
                "moduli-flat/bdl-t7-omega",
                "moduli-flat/bdl-t7-theta",
                "moduli-flat/ass-t3xt4-omega",
                "moduli-flat/ass-t3xt4-theta",
                "moduli-flat/coa-t3xt4-omega",
                "moduli-flat/coa-t3xt4-theta",
            ]),
        },
        Criterion {
            number: 10,
            title: "Yukawa proportionality and symmetry",
            config: config(&["yukawa"], 100),
            checks: vec![
                ("yukawa/ratio-constant", 100),
                ("yukawa/cubic-symmetry", 5),
                ("yukawa/quartic-vanishes-on-27", 8),
            ],
        },
        Criterion {
            number: 11,
            title: "Chern-Simons difference",
            config: SuiteConfig {
                grid: CS_GRIDS.to_vec(),
                tol_rel: TOL_CS_SPREAD,
                ..config(&["chern-simons"], 20)
            },
            checks: vec![
                ("chern-simons/difference-constant", 20),
                ("chern-simons/second-order-convergence", 0),
            ],
        },
        Criterion {
            number: 12,
            title: "involution and symbol complexes",
            config: config(&["fourier", "g2-identities", "spin7-identities"], 100),
            checks: vec![
                ("fourier/flat-torus-involution", 100),
                ("g2-identities/dt-symbol-complex", 100),
                ("spin7-identities/symbol-complex", 100),
            ],
        },
        Criterion {
            number: 13,
            title: "reductions and fiber index",
            config: config(&["spin7-identities"], 1),
            checks: exact(&[
                "spin7-identities/g2-circle-reduction",
                "spin7-identities/cy4-reduction",
                "spin7-identities/fiber-index",
            ]),
        },
    ]
}

/// Reason a required check does not count, if any.
fn shortfall(found: Option<&CheckRecord>, min_samples: usize) -> Option<String> {
    let Some(c) = found else {
        return Some("missing".into());
    };
    if c.status == Status::Fail {
        return Some(c.detail.clone().unwrap_or_else(|| "failed".into()));
    }
    match c.samples {
        Some(n) if n < min_samples => Some(format!("only {n} samples")),
        None if min_samples > 0 => Some("no sample count".into()),
        _ => None,
    }
}

fn evaluate(c: &Criterion) -> (bool, String) {
    let report = match run_suite(&c.config) {
        Ok(r) => r,
        Err(e) => return (false, format!("harness error: {e}")),
    };
    let mut notes = Vec::new();
    let mut worst = 0.0f64;
    for (id, min_samples) in &c.checks {
        let found = report.checks.iter().find(|r| r.id == *id);
        if let Some(r) = found {
            // the convergence order is a rate, not a residual
            let res = r.residuals.iter().filter(|(k, _)| *k != "order");
            worst = res.map(|(_, v)| *v).fold(worst, f64::max);
        }
        if let Some(why) = shortfall(found, *min_samples) {
            notes.push(format!("{id}: {why}"));
        }
    }
    let pass = notes.is_empty();
    let mut line = format!("{} checks, worst residual {worst:.2e}", c.checks.len());
    if !pass {
        line = format!("{line}; {}", notes.join("; "));
    }
    (pass, line)
}

#[test]
fn acceptance_criteria() {
    // written past the test harness capture so the lines show on success too
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for c in criteria() {
        let (pass, line) = evaluate(&c);
        let status = if pass { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {:>2} {status} {}: {line}", c.number, c.title).unwrap();
        if !pass {
            failed.push(c.number);
        }
    }
    out.flush().unwrap();
    failed.dedup();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
