//! Exact integer linear algebra: Smith normal form, kernels, images,
//! presented abelian groups and homology with tracked bases.

mod group;
mod homology;
mod matrix;
mod smith;

pub use group::{AbGroup, PresentedGroup};
pub use homology::{
    homology_of_pair, homology_presented, induced_map, is_isomorphism, map_cokernel, map_kernel,
    reduce_columns, HomologyGroup,
};
pub use matrix::IntMatrix;
pub use smith::{
    in_column_span, kernel, lattice_basis, smith_normal_form, solve, solve_matrix, solve_with,
    Smith,
};
