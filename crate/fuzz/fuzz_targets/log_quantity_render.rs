#![no_main]

use libfuzzer_sys::fuzz_target;
use planckbound::quantities::LogQuantity;

fn mantissa(rendered: &str) -> f64 {
    rendered.split(' ').next().unwrap().parse().unwrap()
}

fuzz_target!(|data: &[u8]| {
    let Ok(bytes) = <[u8; 8]>::try_from(data) else {
        return;
    };
    let Ok(q) = LogQuantity::from_log2(f64::from_le_bytes(bytes)) else {
        return;
    };
    let m = mantissa(&q.to_decimal_string());
    assert!((1.0..10.0).contains(&m), "{q:?}");
    let m = mantissa(&q.to_binary_string());
    assert!((1.0..2.0).contains(&m), "{q:?}");
    let _ = q.to_string();
});
