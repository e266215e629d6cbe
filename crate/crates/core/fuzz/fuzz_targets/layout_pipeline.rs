#![no_main]

use blockcat::{optimal_layout, parse_graph, verify_layout, LayoutError};
use libfuzzer_sys::fuzz_target;

// Any accepted graph must get a layout whose width matches the claim.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(g) = parse_graph(text) else { return };
    if g.vertex_count() > 2000 {
        return;
    }
    match optimal_layout(&g) {
        Ok((f, b)) => assert_eq!(verify_layout(&g, &f).unwrap(), b as u64),
        Err(LayoutError::Rejected(_)) => {}
        Err(e) => panic!("{e}"),
    }
});
