#![no_main]

use libfuzzer_sys::fuzz_target;
use skyrmag_cli::checkpoint::Checkpoint;

fuzz_target!(|data: &[u8]| {
    if let Ok(c) = Checkpoint::decode(data) {
        assert_eq!(c.encode(), data);
    }
});
