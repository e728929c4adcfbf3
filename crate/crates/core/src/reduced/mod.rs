//! End-point reductions: Model A's Laplace phase equation and Model B's
//! SU(1,1) field equation.

pub mod chiral;
pub mod modes;
pub mod phase;

pub use chiral::{
    b_limit_consistency, pcf_operator, pcf_residual, su11_field_operator, su11_field_residual, BLimitRow,
    ReducedConnection, SymbolField,
};
pub use modes::{
    asymptotic_decay_check, decaying_profile, fd_weights, mode_separate, radial_coefficient, radial_ode_residual,
    solve_modes, Annulus, BoundaryData, ModeSet, ModeSolution, RadialMode, RadialProfile, SolvedMode,
};
pub use phase::{
    laplace_map, laplace_profile, laplace_residual, symbol_ttstar_oracle, to_coupling_frame, to_laplace_frame,
    OracleReport, PhaseField, LAPLACE_FRAME_SCALE,
};
