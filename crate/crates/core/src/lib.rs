//! Exact computation with finitely generated abelian groups carrying an
//! action of a finite group, and the surjectivity criterion for the
//! localization of abelianized Galois cohomology that such data encodes.
//!
//! Everything here is pure and exact: integer matrices with
//! arbitrary-precision entries, Smith/Hermite normal forms, coinvariants,
//! Tate `H^{-1}`, the per-place image subgroups, the obstruction group, and
//! the six-term exact sequence attached to a short exact sequence of
//! modules. No floating point, no modular shortcuts.
//!
//! The crate is `no_std` (with `alloc`); all types are immutable after
//! construction and safe to share across threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod matrix;
pub mod fgab;
pub mod group;
pub mod gmodule;
pub mod localization;
pub mod sixterm;
pub mod presets;
pub mod random;
pub mod selftest;

pub use error::{Error, Result};
pub use fgab::{CanonicalForm, Element, FgAbGroup, Homomorphism, Subgroup};
pub use gmodule::{CoinvariantData, GModule};
pub use group::{FiniteGroup, GroupHom, SubgroupOfG};
pub use localization::{LocalizationProblem, PlaceKind, PlaceSpec, Side, TailSpec, Verdict};
pub use matrix::IntMatrix;
pub use presets::RadicalData;
pub use sixterm::{ShortExactSequence, SixTermSequence};

#[cfg(test)]
mod thread_safety {
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn shared_types_are_send_and_sync() {
        assert_send_sync::<crate::IntMatrix>();
        assert_send_sync::<crate::FgAbGroup>();
        assert_send_sync::<crate::Element>();
        assert_send_sync::<crate::Subgroup>();
        assert_send_sync::<crate::Homomorphism>();
        assert_send_sync::<crate::FiniteGroup>();
        assert_send_sync::<crate::SubgroupOfG>();
        assert_send_sync::<crate::GModule>();
        assert_send_sync::<crate::LocalizationProblem>();
        assert_send_sync::<crate::ShortExactSequence>();
        assert_send_sync::<crate::SixTermSequence>();
        assert_send_sync::<crate::RadicalData>();
    }
}
