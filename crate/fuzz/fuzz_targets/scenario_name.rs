#![no_main]

use libfuzzer_sys::fuzz_target;
use planckbound::bounds::ScenarioKind;

fuzz_target!(|data: &[u8]| {
    if let Ok(name) = std::str::from_utf8(data) {
        if let Ok(kind) = name.parse::<ScenarioKind>() {
            // canonical names parse back to themselves
            assert_eq!(kind.as_str().parse::<ScenarioKind>().unwrap(), kind);
        }
    }
});
