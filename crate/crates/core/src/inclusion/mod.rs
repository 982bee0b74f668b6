//! Digraphs of tensors and the disk-type and circuit-type inclusion sets for
//! the spectrum of a product `AB`.

pub mod circuits;
pub mod digraph;
pub mod regions;
pub mod svg;

pub use circuits::{enumerate_circuits, Circuit, DEFAULT_CIRCUIT_CAP};
pub use digraph::{
    build_digraph, product_digraph, weakly_irreducible_paper, weakly_irreducible_standard,
    ProductDigraph, TensorDigraph, SUBSET_SEARCH_LIMIT,
};
pub use regions::{
    brualdi_regions, check_containment_b_in_g, gershgorin_regions, product_diagonal,
    region_contains, regions_to_value, BoundingBox, BrualdiOptions, CircuitRegion,
    ContainmentReport, Disk, Region, RegionKind, Violation, MEMBERSHIP_SLACK,
};
pub use svg::{render_svg, SvgScene};
