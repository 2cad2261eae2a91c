#![no_main]

//! Input is a header, a NUL byte, then the binary payload.

use libfuzzer_sys::fuzz_target;
use mdw_core::io::{parse_dump_header, read_dump_values};

fuzz_target!(|data: &[u8]| {
    let Some(split) = data.iter().position(|b| *b == 0) else {
        return;
    };
    let Ok(text) = std::str::from_utf8(&data[..split]) else {
        return;
    };
    let Ok(header) = parse_dump_header(text) else {
        return;
    };
    if let Ok(values) = read_dump_values(&header, &data[split + 1..]) {
        assert_eq!(values.len(), header.variables.len());
    }
});
