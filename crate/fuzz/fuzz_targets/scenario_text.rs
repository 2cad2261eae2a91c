#![no_main]

use libfuzzer_sys::fuzz_target;
use mdw_core::io::{parse_scenario, scenario_to_text};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(s) = parse_scenario(text) {
        let again = parse_scenario(&scenario_to_text(&s)).expect("emitted scenario parses");
        assert_eq!(again, s);
    }
});
