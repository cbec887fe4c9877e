//! Exact integer linear algebra for finitely generated abelian groups.

mod group;
mod int;
mod matrix;
mod smith;

pub use group::{
    hom_cokernel, hom_cokernel_with_section, hom_image, hom_kernel, invariant_chain, solve_image_membership,
    subgroup_generated, AbGroupError, FgAbelianGroup, GroupElement, GroupHom, NotInImage,
};
pub use int::{add_mul, Int};
pub use matrix::{ints, vec_add, vec_is_zero, vec_neg, vec_scale, vec_sub, IntMatrix};
pub use smith::{congruence_kernel, smith_normal_form, LinearSolver, SmithForm};
