//! Construction, classification, gauge transformation and degeneration of
//! three-term q-difference equations of Heun type.

pub mod symkernel;
pub mod qdiff;
pub mod gauge;
pub mod lax;
pub mod local;
pub mod climit;
pub mod odeheun;
