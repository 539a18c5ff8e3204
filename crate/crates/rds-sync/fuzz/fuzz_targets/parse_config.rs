#![no_main]

use libfuzzer_sys::fuzz_target;
use rds_sync::config::parse_config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if text.len() > 1 << 16 {
        return;
    }
    // Beyond "never panics": any accepted config must survive a
    // render/reparse round trip unchanged.
    if let Ok(cfg) = parse_config(text) {
        let rendered = cfg.to_config_string();
        let again = parse_config(&rendered).expect("rendered config must reparse");
        assert_eq!(again, cfg);
    }
});
