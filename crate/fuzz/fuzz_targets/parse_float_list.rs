#![no_main]

use helson_lab_core::parse::parse_float_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_float_list(s);
    }
});
