//! The JSON files under `fixtures/` must match the in-code builders.
//! Regenerate them with `KOSZUL_BLESS=1 cargo test -p koszul-core --test fixtures`.

use std::path::PathBuf;

use koszul_core::certificates::bound_report;
use koszul_core::hb_model::{compose_to_gamma, default_max_degree, fixtures, lift_alpha, verify_beta, ComplexMap};
use koszul_core::{Char, ComplexDescriptor, RankOptions};

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn shipped() -> Vec<(&'static str, ComplexMap, u32)> {
    let k = |ch| ComplexDescriptor::new(3, 1, ch).unwrap();
    vec![
        ("one_variable_m1_char0.json", fixtures::one_variable_beta(1, Char::Zero), 1),
        ("twisted_char0.json", fixtures::twisted_beta(Char::Zero), fixtures::TWISTED_LEVEL),
        ("twisted_char2.json", fixtures::twisted_beta(Char::Two), fixtures::TWISTED_LEVEL),
        ("koszul_n3_m1_char0.json", fixtures::koszul_beta(k(Char::Zero)), 1),
        ("koszul_n3_m1_char2.json", fixtures::koszul_beta(k(Char::Two)), 1),
    ]
}

#[test]
fn shipped_files_match_builders() {
    let bless = std::env::var_os("KOSZUL_BLESS").is_some();
    for (name, beta, _) in shipped() {
        if bless {
            std::fs::write(path(name), beta.to_json() + "\n").unwrap();
        }
        let text = std::fs::read_to_string(path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(ComplexMap::from_json(&text).unwrap(), beta, "{name}");
    }
}

#[test]
fn shipped_models_compose_to_maps_meeting_the_bound() {
    for (name, _, m) in shipped() {
        let beta = ComplexMap::from_json(&std::fs::read_to_string(path(name)).unwrap()).unwrap();
        let c = beta.source();
        assert!(verify_beta(&beta).passes(), "{name}");
        let alpha = lift_alpha(c, m, default_max_degree(c.nvars(), m, c.char())).unwrap();
        let gamma = compose_to_gamma(&alpha, &beta).unwrap();
        assert!(gamma.verify().passes(), "{name}");
        let report = bound_report(&gamma, &RankOptions::default()).unwrap();
        assert!(report.satisfies_a, "{name}: {report:?}");
        assert!(report.rank <= c.len());
    }
}
