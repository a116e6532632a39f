//! Numerical Plancherel theory on concrete group grids.
//!
//! This crate realizes, at desk scale, the machinery connecting continuous
//! wavelet transforms with the Plancherel decomposition of a locally
//! compact group: Haar quadrature on three group models (real line, cyclic
//! Z_N, affine `ax+b`), operator-valued Fourier transforms, Duflo-Moore
//! diagonals, admissibility criteria for subrepresentations of the regular
//! representation, and the dyadic-slicing construction that produces
//! admissible vectors for the nonunimodular regular representation.
//!
//! The layering is bottom-up:
//!
//! * [`group`] - group models, Haar grids, grid functions, translations;
//! * [`opfield`] - Hilbert-Schmidt matrices, Duflo-Moore diagonals,
//!   operator fields with direct-integral norms;
//! * [`plancherel`] - per-model Plancherel transforms and pointwise
//!   inversion;
//! * [`wavelet`] - direct quadrature wavelet analysis/synthesis, the
//!   ground-truth oracle for everything predicted on the transform side;
//! * [`admissibility`] - multiplier criteria, band-limited subspaces,
//!   finite-measure criteria and the no-go evidence for unimodular groups;
//! * [`construction`] - the dyadic-slice construction of admissible
//!   vectors, with per-sigma certificates;
//! * [`battery`] - seeded, reproducible test batteries;
//! * [`report`] - machine-readable verdicts with canonical JSON output.

pub mod admissibility;
pub mod battery;
pub mod construction;
pub mod error;
pub mod group;
pub mod opfield;
pub mod plancherel;
pub mod report;
pub mod wavelet;

pub use error::{CoreError, Result};
pub use group::{
    convolve, haar_integral, left_translate, right_translate, GridFunction, GridKind, GroupModel,
    GroupPoint, HaarGrid, Translated, GRID_TOL_CONTINUUM, GRID_TOL_CYCLIC,
};
pub use opfield::{
    apply_duflo, field_norm, hs_norm, operator_norm_bound, singular_values, trace_norm,
    DufloMooreOperator, DufloPower, DufloSide, FieldEntry, HsMatrix, OperatorField, SigmaLabel,
};
pub use plancherel::{AffineDualSpec, AffineGridSpec, PlancherelModel};
