//! Finite categories, functors, comma constructions, limits and equivalences.

pub mod cat;
pub mod functor;

pub use cat::*;
pub use functor::*;
pub mod comma;
pub use comma::*;
pub mod equiv;
pub mod limits;
pub mod pseudo;
pub use equiv::*;
pub use limits::*;
pub use pseudo::*;
