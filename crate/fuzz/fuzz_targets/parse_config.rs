#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk_cli::{parse_config_text, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(pairs) = parse_config_text(text) else { return };
    if let Ok(config) = RunConfig::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str()))) {
        if config.validate().is_ok() {
            let (lo, hi) = config.fit_range();
            assert!(lo <= hi);
        }
    }
});
