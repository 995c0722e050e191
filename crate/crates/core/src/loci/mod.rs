//! Sections of model bundles and the loci where they vanish or drop rank:
//! zero finding with signed indices, degeneracy scans with dimension and
//! transversality checks, and pairing checks against characteristic forms.

pub mod degeneracy;
pub mod dual;
pub mod examples;
pub mod section;
pub mod zeros;

pub use degeneracy::{
    degeneracy_scan, fitted_dimension, genericity_check, DegeneracyPoint, DegeneracySample,
    GenericityPoint, GenericityReport,
};
pub use dual::{poincare_dual_check, slice_zero_count, DualCheck, LocusSide, SliceCount};
pub use examples::{
    degree_sum_curve, line_roots_section, mixed_line_model, mixed_point_section,
    mixed_product_chart, pinned_first_section, point_sphere_locus, product_line_model,
    product_polar_chart, product_root_section, pulled_line_model, slice_embedding,
    sphere_area_form, sphere_rotation_caps,
};
pub use section::SectionField;
pub use zeros::{
    find_zeros, index_sum, index_vs_integral, local_index, IndexComparison, ZeroRecord,
};
