//! Entailment in input/output logics: the four families OUT1 to OUT4 and
//! their causal variants.
//!
//! A query is an [`IOSequent`]: premise pairs `(A, X)`, a goal pair and a
//! logic. [`decide`] answers it with one of three procedures (see [`Mode`])
//! and returns a certificate: a sequent proof with its native expansion, or a
//! countermodel.
//!
//! ```
//! use iolog::{decide, IOSequent, Mode, SatEngine};
//!
//! let s = IOSequent::new(
//!     ["a => x".parse()?, "b => x".parse()?],
//!     "a | b => x".parse()?,
//!     "out2".parse()?,
//! );
//! let sat = SatEngine::new();
//! assert!(decide(&sat, &s, Mode::Sat)?.derivable);
//! assert!(!decide(&sat, &s.with_logic("out1".parse()?), Mode::Sat)?.derivable);
//! # Ok::<(), iolog::Error>(())
//! ```

pub mod battery;
pub mod calculus;
pub mod engine;
pub mod error;
pub mod formula;
pub mod modal;
pub mod oracle;
pub mod reduction;
pub mod sat;
pub mod selfcheck;
pub mod semantics;
pub mod theory;

pub use engine::{decide, Certificate, Decision, Mode};
pub use error::{CheckError, Error, Result};
pub use formula::{parse, Atom, Formula, Valuation};
pub use sat::SatEngine;
pub use semantics::IOModel;
pub use theory::{IOPair, IOSequent, LogicId};
