#![allow(clippy::needless_range_loop)]

pub mod category;
pub mod chains;
pub mod complex;
pub mod error;
pub mod format;
pub mod homology;
pub mod ktheory;
pub mod linalg;
pub mod module;
pub mod pi;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/categories.md")]
    mod categories {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/fundamental-category.md")]
    mod fundamental_category {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/torsion.md")]
    mod torsion {}
    #[doc = include_str!("../../../book/src/finiteness.md")]
    mod finiteness {}
}
