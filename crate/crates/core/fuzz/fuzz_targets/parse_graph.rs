#![no_main]

use blockcat::{parse_graph, serialize_graph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_graph(text) {
        let again = parse_graph(&serialize_graph(&g)).expect("canonical form parses");
        assert_eq!(again.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }
});
