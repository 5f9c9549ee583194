//! The adjunction `L ⊣ Y : [C,V] -> [B^op,V]` induced by a functor
//! `N̂ : B -> [C,V]`, the canonical map `X ⊗ E(N̂b, N̂a) -> E(N̂b, X ⊗ N̂a)`,
//! and the Cayley functor of a promonoidal structure.
//!
//! `N̂` is a module on legs `[B, C]`: `N̂(b)(c)`, covariant in both.

use std::sync::Arc;

use crate::encat::{
    ext_tensor, fix_leg, hom_module, representable, tensor_by, Copresheaf, Module, Presheaf, Shape, VCat, VFunctor,
    VNat,
};
use crate::error::{KanError, Result};
use crate::groups::FiniteMonoid;
use crate::vbase::{classify_map, MapClass, VMap, VObj};

use super::coend::{coend_map, coend_over, end_over, CoendResult, EndMode, EndResult};
use super::lan::hom_along;
use super::yoneda::functor_hom_object;

#[derive(Clone, Debug)]
pub struct LResult {
    /// `L f` on `C`.
    pub value: Copresheaf,
    /// `(b, b', c) -> f b ⊗ N̂(b')(c)`.
    pub integrand: Module,
    pub coends: Vec<CoendResult>,
}

#[derive(Clone, Debug)]
pub struct YResult {
    /// `Y e` on `B^op`.
    pub value: Presheaf,
    pub integrand: Module,
    pub ends: Vec<EndResult>,
}

fn check_family(nhat: &Module) -> Result<()> {
    if nhat.arity() != 2 {
        return Err(KanError::Boundary("N̂ must be a module on legs [B, C]".into()));
    }
    Ok(())
}

/// `N̂(a) = C(Na, -)`, the family recovering ordinary extension along `N`
/// (with `B = A^op`).
pub fn representable_family(n: &VFunctor) -> Result<Module> {
    hom_along(n)
}

/// `N̂(b)` as a copresheaf on `C`.
pub fn family_member(nhat: &Module, b: usize) -> Result<Copresheaf> {
    check_family(nhat)?;
    fix_leg(nhat, 0, b)?.as_shape(Shape::Copresheaf, nhat.legs()[1].clone())
}

/// `L f = ∫^b f b ⊗ N̂ b` for `f` on `B^op`.
pub fn l_functor(nhat: &Module, f: &Module) -> Result<LResult> {
    check_family(nhat)?;
    if f.arity() != 1 || *f.legs()[0] != nhat.legs()[0].opposite() {
        return Err(KanError::SourceMismatch("L needs a presheaf on the family's index category".into()));
    }
    let integrand = ext_tensor(f, nhat)?;
    let (coends, module) = coend_over(&integrand, 0, 1)?;
    let value = module.expect("one leg remains").as_shape(Shape::Copresheaf, nhat.legs()[1].clone())?;
    Ok(LResult { value, integrand, coends })
}

/// `L α` for `α : f -> g`.
pub fn l_map(nhat: &Module, lf: &LResult, lg: &LResult, alpha: &VNat) -> Result<VNat> {
    let v = nhat.ctx();
    let components = (0..nhat.legs()[1].n())
        .map(|c| {
            let phi: Vec<VMap> = (0..nhat.legs()[0].n())
                .map(|b| v.tensor(&alpha.components[b], &v.identity(nhat.value(&[b, c]))))
                .collect::<Result<_>>()?;
            coend_map(v, &lf.coends[c], &lg.coends[c], &phi)
        })
        .collect::<Result<_>>()?;
    Ok(VNat { components })
}

/// `Y e (b) = [C,V](N̂ b, e)`.
pub fn n_yoneda(nhat: &Module, e: &Copresheaf) -> Result<YResult> {
    check_family(nhat)?;
    let integrand = hom_module(nhat, e)?;
    let (ends, module) = end_over(&integrand, 1, 2, EndMode::End)?;
    let value = module.expect("one leg remains");
    Ok(YResult { value, integrand, ends })
}

/// Unit `η_b : f b -> Y(L f)(b)`: the cowedge leg `f b ⊗ N̂(b)(c) -> L f (c)`,
/// curried and assembled into the end.
pub fn l_unit(nhat: &Module, f: &Module, l: &LResult, y: &YResult) -> Result<VNat> {
    let v = f.ctx();
    let c = &nhat.legs()[1];
    let components = (0..f.tuple_count())
        .map(|b| {
            let wedge: Vec<VMap> = (0..c.n())
                .map(|x| v.curry(&l.coends[x].cowedge[b], f.value_at(b), nhat.value(&[b, x])))
                .collect::<Result<_>>()?;
            y.ends[b].factor(v, f.value_at(b), &wedge)
        })
        .collect::<Result<_>>()?;
    Ok(VNat { components })
}

/// The canonical map `X ⊗ E(N̂b, N̂a) -> E(N̂b, X ⊗ N̂a)` and its classification.
pub fn dagger_map(nhat: &Module, x: VObj, a: usize, b: usize) -> Result<(VMap, MapClass)> {
    let v = nhat.ctx();
    let na = family_member(nhat, a)?;
    let nb = family_member(nhat, b)?;
    let xa = tensor_by(x, &na)?;
    let source = functor_hom_object(&nb, &na)?;
    let target = functor_hom_object(&nb, &xa)?;
    let dom = v.tensor_obj(x, source.apex());
    let wedge: Vec<VMap> = (0..nb.base().n())
        .map(|c| {
            let (p, q) = (nb.val(c), na.val(c));
            let body = v.compose(
                &v.tensor(&v.identity(x), &v.eval(p, q)?)?,
                &v.tensor_all(&[&v.identity(x), &source.end.wedge[c], &v.identity(p)])?,
            )?;
            v.curry(&body, dom, p)
        })
        .collect::<Result<_>>()?;
    let map = target.end.factor(v, dom, &wedge)?;
    let class = classify_map(v, &map)?;
    Ok((map, class))
}

/// The discrete FinSet category on a monoid, `P(a,b,c) = [a·b = c]`, and
/// the unit `J = A(e, -)`.
pub fn monoid_promonoidal(m: &FiniteMonoid) -> Result<(Arc<VCat>, Module, Copresheaf)> {
    let a = Arc::new(crate::encat::examples::monoid_discrete(m));
    let v = a.ctx();
    let p = Module::with_shape(
        Shape::TriModule,
        a.clone(),
        |t| VObj(usize::from(m.mul[t[0]][t[1]] == t[2])),
        |t, u| {
            let value = VObj(usize::from(m.mul[t[0]][t[1]] == t[2]));
            let moves = t != u;
            let dom = if moves { VObj(0) } else { value };
            Ok(v.index_map(dom, VObj(usize::from(m.mul[u[0]][u[1]] == u[2])), |i| i))
        },
    )?;
    let j = representable(&a, m.unit)?;
    Ok((a, p, j))
}

/// `∃_P f (b, c) = ∫^a f a ⊗ P(a, b, c)` for `P` on legs `[A^op, A^op, A]`.
pub fn cayley(p: &Module, f: &Copresheaf) -> Result<(Module, Vec<CoendResult>)> {
    if p.shape() != Shape::TriModule || **p.base() != **f.base() {
        return Err(KanError::SourceMismatch("cayley needs a trimodule and a copresheaf on one category".into()));
    }
    let integrand = ext_tensor(f, p)?;
    let (coends, module) = coend_over(&integrand, 1, 0)?;
    let value = module.expect("two legs remain").as_shape(Shape::Bimodule, f.base().clone())?;
    Ok((value, coends))
}

/// `∃_P α` for `α : f -> g`, given the coends of `cayley` at `f` and `g`.
pub fn cayley_map(p: &Module, cf: &[CoendResult], cg: &[CoendResult], alpha: &VNat) -> Result<VNat> {
    let v = p.ctx();
    let n = p.base().n();
    let components = (0..n * n)
        .map(|bc| {
            let (b, c) = (bc / n, bc % n);
            let phi: Vec<VMap> = (0..n)
                .map(|a| v.tensor(&alpha.components[a], &v.identity(p.value(&[a, b, c]))))
                .collect::<Result<_>>()?;
            coend_map(v, &cf[bc], &cg[bc], &phi)
        })
        .collect::<Result<_>>()?;
    Ok(VNat { components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encat::examples::{group_algebra, group_algebra_map, terminal, z3_into_s3};
    use crate::encat::{check_natural, generate_copresheaf, zero_module, CopresheafSpec};
    use crate::groups::FiniteGroup;
    use crate::vbase::{BaseCtx, Field};

    fn s3_family() -> (VFunctor, Module) {
        let (h, g, img) = z3_into_s3();
        let a = Arc::new(group_algebra(&h, Field::Rationals).unwrap());
        let c = Arc::new(group_algebra(&g, Field::Rationals).unwrap());
        let n = group_algebra_map(a, c, &h, &g, &img).unwrap();
        let nhat = representable_family(&n).unwrap();
        (n, nhat)
    }

    #[test]
    fn recovery_matches_left_kan_extension() {
        let (n, nhat) = s3_family();
        let f = generate_copresheaf(n.source(), &CopresheafSpec::Free { gens: vec![1] }).unwrap();
        let l = l_functor(&nhat, &f).unwrap();
        let lan = crate::kancoend::lan(&n, &f).unwrap();
        assert_eq!(l.value.values(), lan.value.values());
        let y = n_yoneda(&nhat, &l.value).unwrap();
        assert!(y.value.check().unwrap().is_lawful());
        let eta = l_unit(&nhat, &f, &l, &y).unwrap();
        assert!(check_natural(&f, &y.value, &eta).unwrap().is_lawful());
        assert!(crate::vbase::is_mono(f.ctx(), &eta.components[0]));
    }

    #[test]
    fn dagger_is_iso_for_representables() {
        let (_, nhat) = s3_family();
        for x in [1, 2] {
            let (_, class) = dagger_map(&nhat, VObj(x), 0, 0).unwrap();
            assert!(class.iso);
        }
    }

    #[test]
    fn dagger_on_zero_family_is_iso() {
        let a = Arc::new(terminal(BaseCtx::FinVect(Field::Rationals)));
        let c = Arc::new(group_algebra(&FiniteGroup::cyclic(2), Field::Rationals).unwrap());
        let z = zero_module(vec![a, c]).unwrap();
        let (m, class) = dagger_map(&z, VObj(2), 0, 0).unwrap();
        assert!(class.iso);
        assert_eq!(m.dom(), VObj(0));
    }

    #[test]
    fn cayley_on_z2_shifts() {
        let m = FiniteMonoid::cyclic(2);
        let (a, p, _) = monoid_promonoidal(&m).unwrap();
        assert!(p.check().unwrap().is_lawful());
        let f = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![2, 3] }).unwrap();
        let (e, _) = cayley(&p, &f).unwrap();
        // the unique a with a·b = c is c - b
        for b in 0..2 {
            for c in 0..2 {
                assert_eq!(e.value(&[b, c]), f.val((c + 2 - b) % 2));
            }
        }
    }
}
