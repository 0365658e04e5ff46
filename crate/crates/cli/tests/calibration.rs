//! Regenerates the bundled calibration. Run with
//! `cargo test --release -p boussinesq-cli --test calibration -- --ignored`.

use std::path::Path;

use boussinesq_cli::calibration::{self, Calibration};

#[test]
#[ignore = "slow; rewrites data/calibration.json"]
fn regenerate_bundled_calibration() {
    let calibration = calibration::generate(4).expect("reference run succeeds");
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/calibration.json");
    let text = serde_json::to_string_pretty(&calibration).unwrap();
    std::fs::write(&path, text + "\n").unwrap();
}

#[test]
fn bundled_calibration_matches_reference_config() {
    let bundled = Calibration::bundled();
    assert_eq!(bundled.reference_hash, calibration::reference_config().hash());
    assert!(bundled.commutator.constant > 0.0);
    for (id, c) in &bundled.constants {
        assert!(c.is_finite() && *c >= 0.0, "{id} = {c}");
    }
}
