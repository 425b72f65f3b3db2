//! Doc-tests for the guide in `book/`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}
#[doc = include_str!("../../../book/src/affine.md")]
pub mod affine {}
#[doc = include_str!("../../../book/src/algebras.md")]
pub mod algebras {}
#[doc = include_str!("../../../book/src/correspondence.md")]
pub mod correspondence {}
#[doc = include_str!("../../../book/src/conjugacy.md")]
pub mod conjugacy {}
#[doc = include_str!("../../../book/src/census.md")]
pub mod census {}
#[doc = include_str!("../../../book/src/gallery.md")]
pub mod gallery {}
#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
