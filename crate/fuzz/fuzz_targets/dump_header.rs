#![no_main]

use libfuzzer_sys::fuzz_target;
use mdw_core::io::parse_dump_header;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(h) = parse_dump_header(text) {
        assert_eq!(parse_dump_header(&h.to_text()).expect("emitted header parses"), h);
    }
});
