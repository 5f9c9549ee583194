//! Coends, ends, the coYoneda expansion and left Kan extensions.

pub mod coend;
pub mod lan;
pub mod nyoneda;
pub mod yoneda;

pub use coend::{
    check_cowedge, check_wedge, coend, coend_map, coend_over, end, end_over, interchange_can, CoendResult, EndMode,
    EndResult,
};
pub use lan::{adjunction_check, counit, hom_along, lan, lan_map, transpose, AdjunctionReport, LanResult};
pub use yoneda::{coyoneda_expand, functor_hom_object, hom_object_size, CoYoneda, HomObject};
pub use nyoneda::{
    cayley, cayley_map, dagger_map, family_member, l_functor, l_map, l_unit, monoid_promonoidal, n_yoneda, representable_family, LResult,
    YResult,
};
