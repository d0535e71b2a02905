//! Steam boiler case study: constants and their in-equations, the
//! discrete physics of water, steam and pumps, the controller decision,
//! and an emitter producing the FSP model in explicit-timer and
//! implicit-timer form.

pub mod emit;
pub mod laws;
pub mod params;

pub use emit::{emit_fsp, emit_with, EmitError, EmitOptions, Mode, Mutation, ProgressVariant};
pub use laws::{controller_decide, BoilerState, PumpOrder};
pub use params::{BoilerParams, ParamsError, Violation, NPUMPS};
