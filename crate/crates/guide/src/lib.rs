//! The chapters of the book under `book/src`, compiled as doc-tests so that
//! every snippet in the book stays in sync with the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/formulas.md")]
pub mod formulas {}
#[doc = include_str!("../../../book/src/logics.md")]
pub mod logics {}
#[doc = include_str!("../../../book/src/partitions.md")]
pub mod partitions {}
#[doc = include_str!("../../../book/src/sequent-calculus.md")]
pub mod sequent_calculus {}
#[doc = include_str!("../../../book/src/original-logics.md")]
pub mod original_logics {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}
#[doc = include_str!("../../../book/src/sat.md")]
pub mod sat {}
#[doc = include_str!("../../../book/src/modal.md")]
pub mod modal {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
