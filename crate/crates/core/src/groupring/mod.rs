//! Integral and mod-p group rings of finite groups.

mod element;
mod filtration;
mod fox;

pub use element::{gr_multiply, Coefficients, GroupRingElement};
pub use filtration::{
    delta_dimensions, delta_power_basis, dimension_series, dimension_subgroup, jennings_series,
};
pub use fox::{fox_boundary, fox_row, fox_rows};
