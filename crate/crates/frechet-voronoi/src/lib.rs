//! Lower-bound machinery for Voronoi diagrams of polygonal curves under
//! the discrete Fréchet distance.
//!
//! A set of n curves with k vertices each in R^d induces a Voronoi diagram
//! whose regions are maximal sets of query curves sharing one set of
//! nearest neighbors. This crate builds explicit curve families realizing
//! ⌊n/k⌋^k distinct regions for d = 1 and ⌊n/(d(k−1)+2)⌋^(d(k−1)+2)
//! regions for d ≥ 2, then machine-certifies the count: for every index
//! tuple it synthesizes a query curve, computes its actual nearest-neighbor
//! set under the discrete Fréchet distance, and checks it against the
//! predicted set with an explicit separation margin. The 1-dimensional
//! families have rational coordinates and are certified in exact
//! arithmetic.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! examples/
//! ├── dfd_basics.rs        # distance, decision variant, oracle, embedding
//! ├── build_family.rs      # construct a family and print its layout
//! ├── synthesize_query.rs  # per-tuple query synthesis and distances
//! ├── certify_1d_exact.rs  # exact rational certification, d = 1
//! ├── certify_2d.rs        # full 729-tuple certification, d = 2
//! ├── certify_highd.rs     # exhaustive + sampled certification, d = 3
//! ├── grid_oracle.rs       # synthesis-free region counting on a grid
//! └── export_svg.rs        # figures of the constructions
//! ```
//!
//! Run one with:
//!
//! ```bash
//! cargo run -p frechet-voronoi --example certify_2d
//! ```
//!
//! # Library sketch
//!
//! ```
//! use frechet_voronoi::constructions::{build_family, ConstructionParams, IndexTuple};
//! use frechet_voronoi::verifier::{verify_all, TolerancePolicy, TupleSampler};
//!
//! let params = ConstructionParams::one_dim(3, 2); // d = 1, k = 3, m = 2
//! let family = build_family(&params).unwrap();
//! let report = verify_all(&family, &TolerancePolicy::default(), TupleSampler::All).unwrap();
//! assert_eq!(report.distinct_region_count, 8); // m^k = 2^3
//! ```
//!
//! A thin binary exposes the same flows as subcommands
//! (`generate`, `verify`, `oracle`, `export`); see the README.

pub mod cli;
pub mod constructions;
pub mod dfd;
pub mod family_file;
pub mod geometry;
pub mod scalar;
pub mod svg;
pub mod verifier;

pub use constructions::{
    build_family, build_family_exact, predicted_neighbors, synthesize_query,
    synthesize_query_exact, ConstructionParams, CurveFamily, IndexTuple, SynthesizedQuery,
};
pub use dfd::{
    discrete_frechet, discrete_frechet_bruteforce, discrete_frechet_decision,
    discrete_frechet_exact, embed, Curve, Label,
};
pub use geometry::{Point, Sphere};
pub use verifier::{
    exact_verify_1d, exact_verify_all, nearest_neighbor_set, oracle_region_count, verify_all,
    verify_tuple, GridSpec, NeighborSet, TolerancePolicy, TupleSampler, VerificationReport,
};
