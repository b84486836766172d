#![no_main]

use libfuzzer_sys::fuzz_target;
use planckbound::figure::{read_json, render_json};

fuzz_target!(|data: &[u8]| {
    if let Ok(file) = read_json(data) {
        let text = render_json(&file.series, &file.annotations, &file.metadata).unwrap();
        let again = read_json(text.as_bytes()).unwrap();
        assert_eq!(again.series, file.series);
    }
});
