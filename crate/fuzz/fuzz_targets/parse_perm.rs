#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| permpat_fuzz::check_parse_perm(data));
