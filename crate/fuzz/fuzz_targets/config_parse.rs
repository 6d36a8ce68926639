#![no_main]

use libfuzzer_sys::fuzz_target;
use skyrmag_cli::config::ScenarioConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = ScenarioConfig::parse(text) {
        let _ = cfg.physics_hash();
        let _ = cfg.grid();
        if let Ok((p, _)) = cfg.params() {
            let _ = cfg.drive_spec(&p);
        }
    }
});
