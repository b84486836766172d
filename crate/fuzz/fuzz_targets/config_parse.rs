#![no_main]

use libfuzzer_sys::fuzz_target;
use planckbound::config::{ConfigOverrides, RunConfig};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(overrides) = ConfigOverrides::parse(text) {
            if let Ok(config) = RunConfig::resolve(&overrides) {
                let _ = config.cosmology();
                let _ = config.scenarios();
            }
        }
    }
});
