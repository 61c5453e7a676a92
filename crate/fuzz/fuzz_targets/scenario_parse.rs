#![no_main]

use libfuzzer_sys::fuzz_target;
use swkb_core::scenario::{parse, ScenarioFile};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ScenarioFile::Single(s)) = parse(text) {
        let again = parse(&s.to_text()).expect("canonical text must parse");
        assert_eq!(again, ScenarioFile::Single(s));
    }
});
