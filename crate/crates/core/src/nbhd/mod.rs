//! Finite sets with a distinguished element, their constraint systems, and
//! arithmetic maps on them.

pub mod constraints;
pub mod map;
pub mod set;

pub use constraints::{ConstraintSystem, Op, Triple};
pub use map::{is_arithmetic, is_arithmetic_on, moves, ArithmeticMap, Violation};
pub use set::Neighborhood;
