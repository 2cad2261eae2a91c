#![no_main]

use libfuzzer_sys::fuzz_target;
use mdw_core::io::{parse_plan, plan_to_text};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse_plan(text) {
        assert_eq!(parse_plan(&plan_to_text(&p)).expect("emitted plan parses"), p);
    }
});
