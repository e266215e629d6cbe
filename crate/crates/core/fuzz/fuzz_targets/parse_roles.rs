#![no_main]

use blockcat::gadgets::{Metadata, RoleMap};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = RoleMap::parse(text) {
        assert_eq!(RoleMap::parse(&r.serialize()).unwrap(), r);
    }
    if let Ok(m) = Metadata::parse(text) {
        assert_eq!(Metadata::parse(&m.serialize()).unwrap(), m);
    }
});
