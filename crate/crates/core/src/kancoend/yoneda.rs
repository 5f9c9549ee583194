//! The coYoneda expansion `fb ≅ ∫^a A(a,b) ⊗ fa` and hom-objects of
//! functor categories as ends.

use crate::encat::{corepresentable, ext_tensor, hom_module, Copresheaf, Module, Shape, VNat};
use crate::error::{KanError, Result};
use crate::vbase::{BaseCtx, VMap, VObj};

use super::coend::{coend, end, CoendResult, EndMode, EndResult};

#[derive(Clone, Debug)]
pub struct CoYoneda {
    /// The bimodule `(a, a') -> A(a,b) ⊗ f a'`.
    pub integrand: Module,
    pub coend: CoendResult,
    /// `fb -> ∫^a A(a,b) ⊗ fa`, i.e. `ω_b . (ident_b ⊗ 1)`.
    pub to_coend: VMap,
    /// The factorization of the action cowedge through the coend.
    pub from_coend: VMap,
}

pub fn coyoneda_expand(f: &Copresheaf, b: usize) -> Result<CoYoneda> {
    if f.shape() != Shape::Copresheaf {
        return Err(KanError::SourceMismatch("coyoneda_expand needs a copresheaf".into()));
    }
    let a = f.base();
    let v = f.ctx();
    let integrand = ext_tensor(&corepresentable(a, b)?, f)?;
    let c = coend(&integrand)?;
    let to_coend = v.compose(&c.cowedge[b], &v.tensor(a.ident(b), &v.identity(f.val(b)))?)?;
    let actions: Vec<VMap> = (0..a.n()).map(|x| f.act(x, b).clone()).collect();
    let from_coend = c.factor(v, f.val(b), &actions).map_err(|e| KanError::FactorizationFailure(e.to_string()))?;
    if v.compose(&from_coend, &to_coend)? != v.identity(f.val(b)) || v.compose(&to_coend, &from_coend)? != v.identity(c.apex) {
        return Err(KanError::FactorizationFailure(format!("coYoneda maps at {} are not inverse", a.name(b))));
    }
    Ok(CoYoneda { integrand, coend: c, to_coend, from_coend })
}

/// `[C,V](F, G)` as the end of `[F c, G c]`.
#[derive(Clone, Debug)]
pub struct HomObject {
    pub integrand: Module,
    pub end: EndResult,
    f: Copresheaf,
    g: Copresheaf,
}

impl HomObject {
    pub fn apex(&self) -> VObj {
        self.end.apex
    }

    /// The transformation named by a global element `I -> apex`.
    pub fn to_nat(&self, element: &VMap) -> Result<VNat> {
        let v = self.f.ctx();
        let components = (0..self.f.base().n())
            .map(|c| v.unname(&v.compose(&self.end.wedge[c], element)?, self.f.val(c), self.g.val(c)))
            .collect::<Result<_>>()?;
        Ok(VNat { components })
    }

    /// The global element naming a natural transformation.
    pub fn from_nat(&self, alpha: &VNat) -> Result<VMap> {
        let v = self.f.ctx();
        let names: Vec<VMap> = alpha.components.iter().map(|a| v.name_of(a)).collect::<Result<_>>()?;
        self.end.factor(v, v.unit_obj(), &names)
    }

    /// Basis vectors (FinVect) or all elements (FinSet) of the apex, as
    /// global elements.
    pub fn elements(&self) -> Vec<VMap> {
        let v = self.f.ctx();
        (0..self.apex().0).map(|i| v.point(self.apex(), i)).collect()
    }
}

pub fn functor_hom_object(f: &Copresheaf, g: &Copresheaf) -> Result<HomObject> {
    let integrand = hom_module(f, g)?;
    if integrand.shape() != Shape::Bimodule {
        return Err(KanError::SourceMismatch("hom object needs copresheaves on one category".into()));
    }
    let e = end(&integrand, EndMode::End)?;
    Ok(HomObject { integrand, end: e, f: f.clone(), g: g.clone() })
}

/// Size of the hom object in the same units as `nat_space_size`.
pub fn hom_object_size(h: &HomObject) -> crate::encat::NatSpaceSize {
    match h.f.ctx() {
        BaseCtx::FinSet => crate::encat::NatSpaceSize::Cardinality(h.apex().0),
        BaseCtx::FinVect(_) => crate::encat::NatSpaceSize::Dimension(h.apex().0),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::encat::examples::{discrete, group_algebra, indiscrete, terminal};
    use crate::encat::{check_natural, constant, generate_copresheaf, nat_space_size, representable, CopresheafSpec};
    use crate::groups::FiniteGroup;
    use crate::vbase::Field;

    #[test]
    fn coyoneda_on_free_rank_one_is_two_dimensional() {
        let a = Arc::new(group_algebra(&FiniteGroup::cyclic(2), Field::Rationals).unwrap());
        let f = representable(&a, 0).unwrap();
        let c = coyoneda_expand(&f, 0).unwrap();
        assert_eq!(c.coend.apex, VObj(2));
    }

    #[test]
    fn coyoneda_on_terminal_is_the_unitor() {
        let a = Arc::new(terminal(BaseCtx::FinSet));
        let f = representable(&a, 0).unwrap();
        let c = coyoneda_expand(&f, 0).unwrap();
        assert_eq!(c.to_coend, BaseCtx::FinSet.identity(VObj(1)));
    }

    #[test]
    fn coyoneda_on_quotients_over_indiscrete() {
        let a = Arc::new(indiscrete(3, Field::Rationals).unwrap());
        let f = generate_copresheaf(&a, &CopresheafSpec::QuotientOfFree { gens: vec![1, 2, 0], relations: vec![1, 0, 0], seed: 3 })
            .unwrap();
        for b in 0..3 {
            coyoneda_expand(&f, b).unwrap();
        }
    }

    #[test]
    fn hom_object_matches_nat_solver() {
        let a = Arc::new(group_algebra(&FiniteGroup::cyclic(3), Field::Rationals).unwrap());
        let r = representable(&a, 0).unwrap();
        let h = functor_hom_object(&r, &r).unwrap();
        assert_eq!(h.apex(), VObj(3));
        assert_eq!(hom_object_size(&h), nat_space_size(&r, &r).unwrap());
        for e in h.elements() {
            let n = h.to_nat(&e).unwrap();
            assert!(check_natural(&r, &r, &n).unwrap().is_lawful());
            assert_eq!(h.from_nat(&n).unwrap(), e);
        }
    }

    #[test]
    fn constant_on_discrete_has_two_dimensional_endomorphisms() {
        let a = Arc::new(discrete(2, BaseCtx::FinVect(Field::Rationals), None).unwrap());
        let k = constant(Shape::Copresheaf, a, VObj(1)).unwrap();
        assert_eq!(functor_hom_object(&k, &k).unwrap().apex(), VObj(2));
    }

    #[test]
    fn yoneda_lemma_for_hom_objects() {
        let a = Arc::new(group_algebra(&FiniteGroup::symmetric3(), Field::Rationals).unwrap());
        let g = generate_copresheaf(&a, &CopresheafSpec::QuotientOfFree { gens: vec![1], relations: vec![1], seed: 8 }).unwrap();
        let h = functor_hom_object(&representable(&a, 0).unwrap(), &g).unwrap();
        assert_eq!(h.apex(), g.val(0));
    }
}
