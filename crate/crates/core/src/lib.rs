//! Uniform cover cones of log projection-volume vectors.
//!
//! For a compact body `T` in `R^n` and a nonempty `A ⊆ [n]`, `|T_A|` is the
//! `|A|`-dimensional volume of the projection of `T` onto the coordinate
//! subspace spanned by `A`. The crate works with the vector of logarithms of
//! these volumes and with the cone cut out by the uniform cover inequalities
//! `Σ x_{Y_i} ≥ k·x_Y`.
//!
//! * [`subset`], [`rational`], [`vector`]: indexing, exact scalars and the
//!   vector file format.
//! * [`covers`]: enumeration and decomposition of `k`-uniform covers.
//! * [`cone`]: the finite generator system and exact membership.
//! * [`farkas`]: implication of linear inequalities with certificates.
//! * [`boxgeom`]: bodies that are finite unions of axis-aligned boxes.
//! * [`realize`]: construction of a body with a prescribed scaled vector.
//! * [`witness`]: the four-dimensional non-closedness witness and the
//!   discrete product theorem.

pub mod boxgeom;
pub mod cone;
pub mod covers;
pub mod error;
pub mod farkas;
mod format;
pub mod precise;
pub mod rational;
pub mod realize;
pub mod simplex;
pub mod subset;
pub mod vector;
pub mod witness;

pub use boxgeom::{
    disjoint_offset, log_projection_vector, projection_volume, read_body, thicken, write_body,
    AxisBox, BoxUnionBody, LogProjection, ProjectionVolumes,
};
pub use cone::{
    build_bt_system, default_system, membership, ConeSystem, CoverInequality, MembershipReport,
};
pub use covers::{
    decompose, enumerate_covers, irreducible_covers, read_cover, write_cover, UniformCover,
};
pub use error::{Error, Result};
pub use farkas::{
    check_implication, read_inequality, violating_body, write_inequality, CertificateEntry,
    FarkasCertificate, Implication, LinearInequality, ViolatingBody,
};
pub use rational::Rational;
pub use realize::{
    find_lambda, interior_shift, realize_vector, solve_box_system, BoxSystem, RealizationReport,
    RealizationResult,
};
pub use subset::{canonical_subset_order, SubsetMask, MAX_DIMENSION};
pub use vector::{read_vector, write_vector, ProjectionVector};
pub use witness::{
    analyze_witness, nearest_sample_distance, read_cover_sets, read_family, shearer_check,
    witness_vector, SetFamily, ShearerReport, WitnessReport,
};
