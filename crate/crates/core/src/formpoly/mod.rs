//! Polynomial functions of exterior-form components and their restrictions
//! to lines.

mod function;
mod line;
mod polynomial;
mod search;

pub use function::{FunctionSpec, Signature};
pub use line::{
    restrict_line, star_component, symbolic_direction, symbolic_form, symbolic_pairing,
    symbolic_power, LineMode, LinePolynomial, PowerBase,
};
pub use polynomial::{Family, Monomial, Polynomial, Var};
pub use search::{find_nonvanishing_point, search_order};
