//! Quaternions, cycles in flat G2 space and their residual operators.

pub mod cs;
pub mod func;
pub mod quaternion;
pub mod section;
pub mod semiflat;

pub use cs::{chern_simons, zero_reference};
pub use func::{Func, FuncJson, Grid};
pub use quaternion::{triple_cross, triple_cross_quaternionic, Quaternion};
pub use section::{
    assoc_section_residual, coassoc_section_residual, graph_plane, linear_part, linear_part_expanded,
    solve_first_partial, JetPoint, SectionCycle, SectionKind, SectionResidual,
};
pub use semiflat::{Layout, ResidualReport, SemiFlatAssocCycle, SemiFlatCoassocCycle};
