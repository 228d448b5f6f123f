//! Block kernels over finite actions and finite-type operator specs.

mod block;
mod kernel;
mod spec;
mod symbolic;

pub use kernel::{BlockKernel, MAX_STORED_ENTRIES};
pub use spec::{FiniteTypeOperatorSpec, SpecEntry, TypeSelector};
pub use symbolic::{
    analytic_trace, approximation_defect, recenter, spec_adjoint, spec_product, DefectReport, SpecOp, TypeUniverse,
};
