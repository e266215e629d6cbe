#![no_main]

use blockcat::gadgets::{parse_schedule, parse_tasks};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_schedule(text) {
        assert_eq!(parse_schedule(&s.to_string()).unwrap(), s);
    }
    let _ = parse_tasks(text);
});
