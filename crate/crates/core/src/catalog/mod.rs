//! Builders for the standard finite fixtures.

pub mod finstar;
pub mod gsets;
pub mod operads;

pub use finstar::{delta_op, fin_star, Flavor};
pub use gsets::{check_f_class, FiniteGroup, GSetCaps, GSetCat};
pub use operads::{cut_functor, operad_of_operators, OperadKind};
pub mod gfix;
pub use gfix::{g_fixtures, pointed_to_spans, span_fin, span_fin_injective, span_fin_restricted, ForwardClass, GFixtures};
