//! Sumsets of letter positions in fixed points of substitutions.
//!
//! For a fixed point `x` of a substitution on `{0,1}` (or a morphic word coded
//! to `{0,1}`), let `A` and `B` be the positions of `0` and `1`. A number `n`
//! lies in `A+A` exactly when the pair letter `(0,0)` occurs on the
//! anti-diagonal `k+ℓ=n` of the two-dimensional fixed point `x×x`; likewise
//! `(1,1)` for `B+B` and `(0,1)`/`(1,0)` for `A+B`. This crate builds those
//! product substitutions, scans diagonals, checks the results against a
//! brute-force oracle, and searches for finite certificates that a sumset
//! complement is exactly a given finite set.

pub mod beatty;
pub mod certifier;
pub mod dsl;
pub mod error;
pub mod factors;
pub mod product2d;
pub mod render;
pub mod substitution;
pub mod sumset;
pub mod system;
pub mod tm;

pub use beatty::beatty_golden;
pub use certifier::{search_certificate, verify_certificate, CertFailure, CertVerdict, SearchOutcome, ShiftCertificate};
pub use error::{Error, Result};
pub use factors::{factors_upto, left_extensions, FactorSet, LeftExtensions};
pub use substitution::{Letter, Substitution, Word};
pub use system::{IndexBase, IndexedWord, MorphicSystem};
pub use product2d::{block_diagonal_profile, cell, diagonal, expand2d, product, Block2D, DiagonalWord, PairLetter, ProductSubstitution};
pub use sumset::{complement_upto, cross_check, membership, oracle_complement, SumsetKind, SumsetQuery, SumsetReport};
pub use render::{diagonal_overlays, render_svg, Overlay, Palette, RenderSpec};
