#![no_main]

use helson_lab_core::parse::parse_signed_measure_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = parse_signed_measure_json(data);
});
