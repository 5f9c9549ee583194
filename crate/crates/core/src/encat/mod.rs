//! Categories, functors and modules enriched over the base.

pub mod category;
pub mod examples;
pub mod generate;
pub mod module;

pub use category::{check_category, check_functor, opposite_functor, LawReport, VCat, VFunctor, Violation};
pub use module::{
    check_action, check_natural, coequalizer_module, constant, corepresentable, ext_tensor, fix_leg,
    free_copresheaf, hom_bimodule, hom_module, permute_legs, product_modules, representable,
    restrict_along, restrict_leg, restrict_presheaf, tensor_by, zero_module, Bimodule, Copresheaf,
    Module, Presheaf, Shape, TriModule, VNat,
};
pub use generate::{
    enumerate_nats, flatten_nat, free_extension, generate_copresheaf, generate_nat, nat_basis, nat_basis_matrix,
    nat_space_size, unflatten_nat, CopresheafSpec, NatSpaceSize,
};
