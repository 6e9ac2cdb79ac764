//! Exact arithmetic over Q and number fields, and univariate root machinery.

pub mod domain;
pub mod field;
pub mod poly;
pub mod rational;
pub mod roots;
pub mod sturm;
pub mod wire;

pub use domain::RingDomain;
pub use field::{Elem, Embedding, FieldDescriptor};
pub use poly::Poly;
pub use rational::Rational;
pub use roots::{adjoin_root, rational_roots, roots_in_field, FieldRoots};
pub use sturm::{real_root_count, Bound};
