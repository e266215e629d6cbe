//! Optimal bandwidth layouts for block caterpillars, an exact oracle for
//! small graphs, and the gadget constructions around the bandwidth versus
//! local density question.

pub mod density;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod layout;
pub mod oracle;
pub mod recognition;

pub use density::{local_density_bruteforce, local_density_structured, DensityReport};
pub use error::{DensityError, GadgetError, GraphError, LayoutError, Rejection};
pub use graph::{condense, parse_graph, parse_layout, serialize_graph, serialize_layout, verify_layout, Graph, Layout, Vertex};
pub use layout::{
    check_left_justified, layout_block_caterpillar, layout_clique_star, optimal_layout, repair_faithful,
    JustifiedLayout,
};
pub use oracle::{decide_bandwidth, enumerate_optimal, exact_bandwidth, Decision, Enumeration, OracleError, SearchBudget};
pub use recognition::{anchor_and_augment, recognize_block_caterpillar, CaterpillarStructure};
