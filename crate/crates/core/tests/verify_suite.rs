use g2geom::verify::{run_suite, Fault, Status, SuiteConfig, SUITES};

fn failed(cfg: &SuiteConfig) -> Vec<String> {
    let r = run_suite(cfg).unwrap();
    assert_eq!(r.passed, r.summary.failed == 0);
    r.failures().map(|c| c.id.clone()).collect()
}

#[test]
fn default_run_fails_only_on_the_t3xt4_four_forms() {
    let cfg = SuiteConfig::default();
    let r = run_suite(&cfg).unwrap();
    assert_eq!(r.summary.suites.len(), SUITES.len());
    let f: Vec<&str> = r.failures().map(|c| c.id.as_str()).collect();
    assert_eq!(f, ["moduli-flat/ass-t3xt4-theta", "moduli-flat/coa-t3xt4-theta"]);
    assert!(!r.passed);
}

#[test]
fn suites_without_the_flat_models_pass() {
    let cfg = SuiteConfig {
        suites: SUITES.iter().filter(|s| **s != "moduli-flat").map(|s| s.to_string()).collect(),
        samples: 8,
        ..SuiteConfig::default()
    };
    assert!(failed(&cfg).is_empty());
}

#[test]
fn every_flipped_term_breaks_the_hodge_identity() {
    for k in 0..7 {
        let cfg = SuiteConfig {
            suites: vec!["g2-identities".into()],
            samples: 2,
            fault: Fault { flip_omega_term: Some(k) },
            ..SuiteConfig::default()
        };
        assert!(failed(&cfg).contains(&"g2-identities/hodge-omega".to_string()), "term {k}");
    }
}

#[test]
fn identical_config_gives_identical_json() {
    let cfg = SuiteConfig {
        samples: 5,
        seed: 99,
        ..SuiteConfig::default()
    };
    assert_eq!(run_suite(&cfg).unwrap().to_json(), run_suite(&cfg).unwrap().to_json());
}

#[test]
fn suite_order_in_config_does_not_matter() {
    let a = SuiteConfig {
        suites: vec!["fourier".into(), "yukawa".into(), "sections".into()],
        samples: 3,
        ..SuiteConfig::default()
    };
    let b = SuiteConfig {
        suites: vec!["sections".into(), "fourier".into(), "yukawa".into()],
        ..a.clone()
    };
    let (ra, rb) = (run_suite(&a).unwrap(), run_suite(&b).unwrap());
    assert_eq!(ra.checks, rb.checks);
    assert_eq!(ra.summary, rb.summary);
}

#[test]
fn nontrivial_lattice() {
    let cfg = SuiteConfig::from_json(
        r#"{"suites": ["g2-identities", "fourier", "moduli-flat"], "lattice": ["2", "1/3", "1", "5/2", "1", "3", "1/2"], "samples": 3}"#,
    )
    .unwrap();
    let r = run_suite(&cfg).unwrap();
    for c in &r.checks {
        if !c.id.ends_with("-theta") || c.id.starts_with("moduli-flat/bdl") {
            assert_eq!(c.status, Status::Pass, "{}", c.id);
        }
    }
}
