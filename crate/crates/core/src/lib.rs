//! Symmetries of discrete subgroups of the three-dimensional solvable Lie
//! group S₂.
//!
//! A matrix θ ∈ SL₂(ℤ) with trace in {−2, −1, 0, 1} determines a discrete
//! group `D(θ)` of words `A^Q B^M C^N` sitting inside a family of continuous
//! groups `S₂(θ, k)`. This crate decides which changes of generators of `D`
//! are symmetries, which symmetries are automorphisms of `D`, and lifts each
//! automorphism to the matching automorphism of `S₂`.
//!
//! Module map:
//!
//! - [`intmat`]: exact 2×2 integer matrices, hcf, powers, admissible θ.
//! - [`liegroup`]: the group law, exponential map, brackets and dislocation
//!   density of `S₂`.
//! - [`autos`]: automorphisms of the Lie algebra and of the Lie group.
//! - [`discrete`]: word arithmetic in `D`, its matrix representation and the
//!   generating-set test.
//! - [`symmetry`]: centralizer and reversing symmetry groups of θ, and the
//!   elastic/inelastic classification.
//! - [`extension`]: lifting automorphisms of `D` to `S₂` and checking the
//!   lift on the lattice.
//!
//! ```
//! use s2sym::{classify_symmetry, Classification, DElement, GeneratorTriple, Theta};
//!
//! let theta = Theta::from_entries(0, 1, -1, 0).unwrap();
//! let standard = GeneratorTriple::new([DElement::A, DElement::B, DElement::C]);
//! assert!(matches!(
//!     classify_symmetry(&theta, &standard).unwrap(),
//!     Classification::Elastic(_)
//! ));
//! ```

pub mod autos;
pub mod discrete;
pub mod error;
pub mod extension;
pub mod intmat;
pub mod liegroup;
pub mod symmetry;

pub use autos::{GroupAutoParams, LieAlgebraAuto};
pub use discrete::{DElement, Generation, GeneratorTriple, ReducedTriple};
pub use error::{Error, Result};
pub use extension::{extend, verify_extension, ExtensionReport};
pub use intmat::{Mat2Z, Sign, Theta, Vec2Z};
pub use liegroup::{make_group, Basis, GroupPoint, S2Group};
pub use symmetry::{classify_symmetry, Classification, DAutomorphism, SymmetryGroup};

/// The guide chapters, compiled as doctests so their snippets stay in sync
/// with the library.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/theta.md")]
    pub mod theta {}
    #[doc = include_str!("../../../book/src/group.md")]
    pub mod group {}
    #[doc = include_str!("../../../book/src/automorphisms.md")]
    pub mod automorphisms {}
    #[doc = include_str!("../../../book/src/discrete.md")]
    pub mod discrete {}
    #[doc = include_str!("../../../book/src/symmetries.md")]
    pub mod symmetries {}
    #[doc = include_str!("../../../book/src/extension.md")]
    pub mod extension {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
}
