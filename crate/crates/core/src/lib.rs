pub mod bimodule;
pub mod category;
pub mod error;
pub mod fock;
pub mod gjs;
pub mod json;
pub mod linalg;
pub mod planar;
pub mod sampling;
pub mod scalar;
pub mod verify;
