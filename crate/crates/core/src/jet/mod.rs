//! Jet space coordinates, multi-indices, contact structure.

mod chart;
mod contact;
mod field;
mod integral;
mod multiindex;

pub use chart::Chart;
pub use contact::{contact_field, contact_form_value, contact_map_at, contact_two_form_value, formal_derivative, vertical_field, TangentVector};
pub use field::VectorField;
pub use integral::{is_integral_element, IntegralCheck, IntegralError, PointFrame};
pub use multiindex::{class, rank_compare, JetVar, MultiIndex};
