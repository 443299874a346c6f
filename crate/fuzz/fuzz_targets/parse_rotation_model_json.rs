#![no_main]

use helson_lab_core::parse::parse_rotation_model_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = parse_rotation_model_json(data);
});
