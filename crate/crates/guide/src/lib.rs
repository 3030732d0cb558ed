//! The listings of the book under `book/src` compiled as doc-tests, one
//! module per chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/diagrams.md")]
pub mod diagrams {}
#[doc = include_str!("../../../book/src/category.md")]
pub mod category {}
#[doc = include_str!("../../../book/src/graded.md")]
pub mod graded {}
#[doc = include_str!("../../../book/src/traces.md")]
pub mod traces {}
#[doc = include_str!("../../../book/src/fock.md")]
pub mod fock {}
#[doc = include_str!("../../../book/src/bimodules.md")]
pub mod bimodules {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
