#![no_main]

use libfuzzer_sys::fuzz_target;
use skyrmag::snapshot::{self, Snapshot};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = snapshot::decode(data) {
        let again = match &s {
            Snapshot::Vector(f) => snapshot::encode_vector(f),
            Snapshot::Scalar(f) => snapshot::encode_scalar(f),
        };
        assert_eq!(again, data);
    }
});
