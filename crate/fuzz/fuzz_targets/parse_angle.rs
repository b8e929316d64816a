#![no_main]

use libfuzzer_sys::fuzz_target;
use qwalk_cli::parse_angle;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(angle) = parse_angle(text) {
            assert!(angle.is_finite());
        }
    }
});
