//! Function-field lattices L_P built from elliptic curves y^2 = f(x) over
//! odd prime fields, with exact checks of their structure: minimum
//! distance, minimal vectors, generation, determinant and covering radius.
//!
//! ```
//! use fflattice::{basis, minimal_vectors, CurveSpec};
//!
//! let spec: CurveSpec = "5:1,0,1,1".parse().unwrap();
//! let places = spec.build().unwrap().enumerate_places();
//! assert_eq!(places.n(), 9);
//! assert_eq!(basis(&places).unwrap().gram_det(), 729);
//! assert_eq!(minimal_vectors(&places).unwrap().count(), 108);
//! ```

pub mod analysis;
pub mod curve;
pub mod decoder;
pub mod error;
pub mod export;
pub mod field;
pub mod function_field;
pub mod geometry;
pub mod hnf;
pub mod lattice;
pub mod membership;

pub use analysis::{analyze, analyze_table, scan, scan_curves, AnalysisOptions, AnalysisReport, Verdict};
pub use curve::{Curve, CurvePoint, CurveSpec, GroupStructure, PlaceTable};
pub use decoder::{covering_bound, covering_report, decode, CoveringReport, DecodeTrace};
pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
pub use function_field::{DivisorVector, FFunction, FWord, FunctionField};
pub use geometry::{minimal_count_formula, minimal_vectors, minimum_distance, MinimalVectorSet};
pub use lattice::{basis, contains, generators, LatticeBasis};
