//! Multiplicative systems 𝒜, the algebra V(𝒜) and the unipotent groups
//! U(𝒜), Ū(𝒜).

mod catalog;
mod element;
mod system;
mod ugroup;

pub use catalog::{random_system, Catalog};
pub use element::{
    enumerate_u, u_comm, u_inv, u_mul, u_pow, v_add, v_mul, v_neg, UElement, VElement,
    ENUMERATION_BOUND,
};
pub use system::{Embedding, MultSystem};
pub use ugroup::UGroup;
