#![no_main]

use libfuzzer_sys::fuzz_target;
use rds_sync::config::parse_lift_expr;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if text.len() > 4096 {
        return;
    }
    let _ = parse_lift_expr(text);
});
