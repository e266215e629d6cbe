#![no_main]

use blockcat::{condense, parse_layout, serialize_layout};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_layout(text) {
        assert_eq!(parse_layout(&serialize_layout(&f)).unwrap(), f);
        assert_eq!(condense(&f).order(), f.order());
    }
});
