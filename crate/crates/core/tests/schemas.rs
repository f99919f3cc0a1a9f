mod common;

use common::schema::{assert_valid, validator};
use qauth::auth::AuthFamily;
use qauth::codes::rm_css;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[test]
fn family_descriptors_validate() {
    let v = validator("family.v1.json");
    for f in [
        AuthFamily::trap_rm(1).unwrap(),
        AuthFamily::strong_trap_rm(2).unwrap(),
        AuthFamily::clifford(1, 6).unwrap(),
    ] {
        assert_valid(&v, &serde_json::to_value(f.descriptor()).unwrap());
    }
    assert!(!v.is_valid(&json!({"kind": "clifford", "inner_code_ref": "rm-css:1", "n": 7, "m": 1, "t": 6})));
    assert!(!v.is_valid(&json!({"kind": "trap", "inner_code_ref": null, "n": 7, "m": 1, "t": 20})));
}

#[test]
fn key_descriptors_validate() {
    let v = validator("key.v1.json");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for f in [AuthFamily::trap_rm(1).unwrap(), AuthFamily::clifford(2, 3).unwrap()] {
        let n = f.total_qubits();
        let bare = f.sample_key(&mut rng);
        let padded = bare.clone().with_otp(n, &mut rng);
        for k in [bare, padded] {
            let d = k.descriptor();
            let value = serde_json::to_value(&d).unwrap();
            assert_valid(&v, &value);
            assert_eq!(qauth::auth::Key::from_descriptor(&d).unwrap().descriptor(), d);
        }
    }
    assert!(!v.is_valid(&json!({"kind": "clifford", "n": 2, "gates": [{"t": 0}], "otp": null})));
}

#[test]
fn code_descriptors_validate() {
    let v = validator("code.v1.json");
    for i in [1, 2] {
        assert_valid(&v, &serde_json::to_value(rm_css(i).unwrap().descriptor(Some(i))).unwrap());
    }
}
