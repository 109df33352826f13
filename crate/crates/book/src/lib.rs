//! The chapters of the guide in `book/src`, one module each, so that
//! `cargo test` runs every code block in them as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/lorentz.md")]
pub mod lorentz {}
#[doc = include_str!("../../../book/src/cone.md")]
pub mod cone {}
#[doc = include_str!("../../../book/src/krein.md")]
pub mod krein {}
#[doc = include_str!("../../../book/src/representations.md")]
pub mod representations {}
#[doc = include_str!("../../../book/src/transversal.md")]
pub mod transversal {}
#[doc = include_str!("../../../book/src/packets.md")]
pub mod packets {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
