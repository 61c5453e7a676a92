#![no_main]

use libfuzzer_sys::fuzz_target;
use swkb_core::scenario::parse_scenario;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = parse_scenario(text) {
        let _ = s.validate();
    }
});
