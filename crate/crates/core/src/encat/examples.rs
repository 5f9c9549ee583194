//! Concrete categories and functors used throughout the test batteries.

use std::sync::Arc;

use crate::error::{KanError, Result};
use crate::groups::{FiniteGroup, FiniteMonoid};
use crate::vbase::{BaseCtx, Field, VObj};

use super::category::{VCat, VFunctor};

/// One object, hom = the unit.
pub fn terminal(ctx: BaseCtx) -> VCat {
    VCat::new(
        ctx,
        vec!["*".into()],
        |_, _| ctx.unit_obj(),
        |_, _, _| Ok(ctx.identity(ctx.unit_obj())),
        |_| Ok(ctx.identity(ctx.unit_obj())),
    )
    .expect("terminal category")
}

/// One object with hom the group algebra `k[G]`; composition is the
/// group product on basis elements.
pub fn group_algebra(g: &FiniteGroup, field: Field) -> Result<VCat> {
    let ctx = BaseCtx::FinVect(field);
    let n = g.order();
    VCat::new(
        ctx,
        vec!["*".into()],
        |_, _| VObj(n),
        |_, _, _| Ok(ctx.index_map(VObj(n * n), VObj(n), |i| g.mul(i / n, i % n))),
        |_| Ok(ctx.point(VObj(n), g.unit())),
    )
}

/// `n` objects, every hom one-dimensional, composition scalar multiplication.
pub fn indiscrete(n: usize, field: Field) -> Result<VCat> {
    if n == 0 {
        return Err(KanError::Boundary("indiscrete category needs an object".into()));
    }
    let ctx = BaseCtx::FinVect(field);
    VCat::new(
        ctx,
        (0..n).map(|i| i.to_string()).collect(),
        |_, _| VObj(1),
        |_, _, _| Ok(ctx.identity(VObj(1))),
        |_| Ok(ctx.identity(VObj(1))),
    )
}

/// `n` objects, `A(a,a) = I` and `A(a,b) = 0` (empty set / zero space) otherwise.
pub fn discrete(n: usize, ctx: BaseCtx, names: Option<Vec<String>>) -> Result<VCat> {
    let names = names.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
    let hom = |a: usize, b: usize| if a == b { VObj(1) } else { VObj(0) };
    VCat::new(
        ctx,
        names,
        hom,
        |a, c, b| {
            let dom = ctx.tensor_obj(hom(c, b), hom(a, c));
            Ok(ctx.index_map(dom, hom(a, b), |_| 0))
        },
        |_| Ok(ctx.identity(VObj(1))),
    )
}

/// The discrete FinSet category on the elements of a monoid.
pub fn monoid_discrete(m: &FiniteMonoid) -> VCat {
    discrete(m.order(), BaseCtx::FinSet, Some(m.names.clone())).expect("discrete category")
}

/// One object whose hom is the zero space (identity = 0).
pub fn zero_category(field: Field) -> VCat {
    let ctx = BaseCtx::FinVect(field);
    VCat::new(
        ctx,
        vec!["*".into()],
        |_, _| VObj(0),
        |_, _, _| Ok(ctx.index_map(VObj(0), VObj(0), |i| i)),
        |_| ctx.zero_map(VObj(1), VObj(0)),
    )
    .expect("zero category")
}

/// The functor `k[H] -> k[G]` induced by a group homomorphism.
pub fn group_algebra_map(
    source: Arc<VCat>,
    target: Arc<VCat>,
    h: &FiniteGroup,
    g: &FiniteGroup,
    images: &[usize],
) -> Result<VFunctor> {
    h.check_hom(g, images)?;
    let ctx = source.ctx();
    VFunctor::new(source, target, vec![0], |_, _| {
        Ok(ctx.index_map(VObj(h.order()), VObj(g.order()), |i| images[i]))
    })
}

/// Inclusion of indiscrete categories along an injective object map.
pub fn indiscrete_inclusion(source: Arc<VCat>, target: Arc<VCat>, objects: Vec<usize>) -> Result<VFunctor> {
    let ctx = source.ctx();
    VFunctor::new(source, target, objects, |_, _| Ok(ctx.identity(VObj(1))))
}

/// Subgroup `Z/3 -> S3` onto the even permutations.
pub fn z3_into_s3() -> (FiniteGroup, FiniteGroup, Vec<usize>) {
    let z3 = FiniteGroup::cyclic(3);
    let s3 = FiniteGroup::symmetric3();
    // a 3-cycle and its powers
    let c = (0..6)
        .find(|x| *x != s3.unit() && s3.mul(*x, s3.mul(*x, *x)) == s3.unit())
        .expect("3-cycle");
    let images = vec![s3.unit(), c, s3.mul(c, c)];
    (z3, s3, images)
}

/// Subgroup `Z/2 -> Z/4` onto `{0, 2}`.
pub fn z2_into_z4() -> (FiniteGroup, FiniteGroup, Vec<usize>) {
    (FiniteGroup::cyclic(2), FiniteGroup::cyclic(4), vec![0, 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encat::category::{check_category, check_functor};

    #[test]
    fn shipped_categories_are_lawful() {
        let q = Field::Rationals;
        let f3 = Field::prime(3).unwrap();
        let cats = vec![
            terminal(BaseCtx::FinSet),
            terminal(BaseCtx::FinVect(q)),
            group_algebra(&FiniteGroup::cyclic(3), f3).unwrap(),
            group_algebra(&FiniteGroup::symmetric3(), q).unwrap(),
            indiscrete(3, Field::prime(5).unwrap()).unwrap(),
            discrete(2, BaseCtx::FinVect(q), None).unwrap(),
            discrete(2, BaseCtx::FinSet, None).unwrap(),
            monoid_discrete(&FiniteMonoid::left_zero_with_unit()),
            zero_category(q),
        ];
        for c in cats {
            assert!(check_category(&c).unwrap().is_lawful(), "{c:?}");
        }
    }

    #[test]
    fn subgroup_inclusions_are_functors() {
        let (h, g, img) = z3_into_s3();
        let a = Arc::new(group_algebra(&h, Field::Rationals).unwrap());
        let c = Arc::new(group_algebra(&g, Field::Rationals).unwrap());
        let n = group_algebra_map(a, c, &h, &g, &img).unwrap();
        assert!(check_functor(&n).unwrap().is_lawful());

        let a = Arc::new(indiscrete(2, Field::Rationals).unwrap());
        let c = Arc::new(indiscrete(3, Field::Rationals).unwrap());
        let n = indiscrete_inclusion(a, c, vec![0, 2]).unwrap();
        assert!(check_functor(&n).unwrap().is_lawful());
    }
}
