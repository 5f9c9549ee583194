//! The left Kan extension `∃_N f = ∫^a C(Na,-) ⊗ fa`, its unit and
//! counit, and an exact check of the adjunction `∃_N ⊣ [N,1]`.

use std::sync::Arc;

use crate::encat::{
    check_natural, enumerate_nats, ext_tensor, flatten_nat, hom_bimodule, nat_basis, nat_space_size, permute_legs,
    restrict_along, restrict_leg, Copresheaf, LawReport, Module, NatSpaceSize, Shape, VCat, VFunctor, VNat,
};
use crate::error::{KanError, Result};
use crate::vbase::matrix::{rank, Mat};
use crate::vbase::{BaseCtx, VMap};

use super::coend::{coend_map, coend_over, CoendResult};
use super::yoneda::coyoneda_expand;

#[derive(Clone, Debug)]
pub struct LanResult {
    pub functor: VFunctor,
    pub source: Copresheaf,
    /// `∃_N f` on `C`.
    pub value: Copresheaf,
    /// `(a, a', c) -> C(Na, c) ⊗ f a'` on legs `[A^op, A, C]`.
    pub integrand: Module,
    /// The coend at each object of `C`.
    pub coends: Vec<CoendResult>,
    /// `η_b : fb -> ∃_N f (Nb)`.
    pub unit: VNat,
}

/// `(a, c) -> C(Na, c)` on legs `[A^op, C]`.
pub fn hom_along(n: &VFunctor) -> Result<Module> {
    let hom = hom_bimodule(n.target())?;
    let nop = n.opposite().with_categories(Arc::new(n.source().opposite()), hom.legs()[0].clone())?;
    restrict_leg(&hom, 0, &nop)
}

pub fn lan(n: &VFunctor, f: &Copresheaf) -> Result<LanResult> {
    if f.shape() != Shape::Copresheaf || **f.base() != **n.source() {
        return Err(KanError::SourceMismatch("lan needs a copresheaf on the functor's source".into()));
    }
    let v = f.ctx();
    let c = n.target();
    let integrand = permute_legs(&ext_tensor(&hom_along(n)?, f)?, &[0, 2, 1])?;
    let (coends, module) = coend_over(&integrand, 0, 1)?;
    let value = module.expect("one leg remains").as_shape(Shape::Copresheaf, c.clone())?;
    let a = n.source();
    let components = (0..a.n())
        .map(|b| {
            let coyo = coyoneda_expand(f, b)?;
            let phi: Vec<VMap> =
                (0..a.n()).map(|x| v.tensor(n.map(x, b), &v.identity(f.val(x)))).collect::<Result<_>>()?;
            let induced = coend_map(v, &coyo.coend, &coends[n.obj(b)], &phi)?;
            v.compose(&induced, &coyo.to_coend)
        })
        .collect::<Result<_>>()?;
    Ok(LanResult { functor: n.clone(), source: f.clone(), value, integrand, coends, unit: VNat { components } })
}

/// `∃_N α : ∃_N f -> ∃_N g` between two computed extensions.
pub fn lan_map(lf: &LanResult, lg: &LanResult, alpha: &VNat) -> Result<VNat> {
    let v = lf.value.ctx();
    let n = &lf.functor;
    let a = n.source();
    let components = (0..n.target().n())
        .map(|c| {
            let phi: Vec<VMap> = (0..a.n())
                .map(|x| v.tensor(&v.identity(n.target().hom(n.obj(x), c)), &alpha.components[x]))
                .collect::<Result<_>>()?;
            coend_map(v, &lf.coends[c], &lg.coends[c], &phi)
        })
        .collect::<Result<_>>()?;
    Ok(VNat { components })
}

/// Counit `∃_N [N,1] g -> g`, given the extension of `[N,1] g`.
pub fn counit(restricted: &LanResult, g: &Copresheaf) -> Result<VNat> {
    let v = g.ctx();
    let n = &restricted.functor;
    let components = (0..n.target().n())
        .map(|c| {
            let cowedge: Vec<VMap> = (0..n.source().n()).map(|x| g.act(n.obj(x), c).clone()).collect();
            restricted.coends[c].factor(v, g.val(c), &cowedge)
        })
        .collect::<Result<_>>()?;
    Ok(VNat { components })
}

#[derive(Clone, Debug)]
pub struct AdjunctionReport {
    pub laws: LawReport,
    /// Size of `Nat(∃_N f, g)`.
    pub lan_side: NatSpaceSize,
    /// Size of `Nat(f, [N,1] g)`.
    pub restriction_side: NatSpaceSize,
}

/// Transpose `φ : ∃_N f -> g` to `[N,1]φ . η_f`.
pub fn transpose(lf: &LanResult, phi: &VNat) -> Result<VNat> {
    lf.unit.then(lf.value.ctx(), &phi.restrict_along(&lf.functor))
}

pub fn adjunction_check(n: &VFunctor, f: &Copresheaf, g: &Copresheaf) -> Result<AdjunctionReport> {
    let v = f.ctx();
    let mut laws = LawReport::new("lan adjunction");
    let lf = lan(n, f)?;
    let rf = restrict_along(n, &lf.value)?;
    laws.absorb(check_natural(f, &rf, &lf.unit)?);

    // ε_{∃f} . ∃η = 1
    let l2 = lan(n, &rf)?;
    let lifted = lan_map(&lf, &l2, &lf.unit)?;
    let eps = counit(&l2, &lf.value)?;
    let tri1 = lifted.then(v, &eps)?;
    for (c, m) in tri1.components.iter().enumerate() {
        laws.expect_eq("triangle ε∃ . ∃η", || n.target().name(c).to_string(), m.clone(), v.identity(lf.value.val(c)));
    }

    // [N,1]ε . η_{[N,1]g} = 1
    let rg = restrict_along(n, g)?;
    let lrg = lan(n, &rg)?;
    let eps_g = counit(&lrg, g)?;
    laws.absorb(check_natural(&lrg.value, g, &eps_g)?);
    let tri2 = lrg.unit.then(v, &eps_g.restrict_along(n))?;
    for (a, m) in tri2.components.iter().enumerate() {
        laws.expect_eq("triangle [N,1]ε . η", || n.source().name(a).to_string(), m.clone(), v.identity(rg.val(a)));
    }

    let lan_side = nat_space_size(&lf.value, g)?;
    let restriction_side = nat_space_size(f, &rg)?;
    laws.expect("hom sizes agree", || "Nat(∃f, g) vs Nat(f, [N,1]g)".into(), lan_side == restriction_side, || {
        format!("{lan_side:?} vs {restriction_side:?}")
    });
    match v {
        BaseCtx::FinVect(field) => {
            let basis = nat_basis(&lf.value, g)?;
            let cols: Vec<Vec<_>> = basis
                .iter()
                .map(|phi| {
                    let t = transpose(&lf, phi)?;
                    Ok(flatten_nat(f, &rg, &t).into_iter().enumerate().filter(|(_, s)| !num_traits::Zero::is_zero(s)).collect())
                })
                .collect::<Result<_>>()?;
            let len = (0..f.tuple_count()).map(|i| f.value_at(i).0 * rg.value_at(i).0).sum();
            let m = Mat::from_columns(len, cols);
            laws.expect("transpose injective", || "basis of Nat(∃f, g)".into(), rank(field, &m) == basis.len(), || {
                "transposes are linearly dependent".into()
            });
        }
        BaseCtx::FinSet => {
            let (left, _) = enumerate_nats(&lf.value, g, crate::encat::generate::ENUMERATION_CAP)?;
            let (right, _) = enumerate_nats(f, &rg, crate::encat::generate::ENUMERATION_CAP)?;
            let images: Vec<VNat> = left.iter().map(|phi| transpose(&lf, phi)).collect::<Result<_>>()?;
            let all_natural = images.iter().all(|t| right.contains(t));
            let distinct = {
                let mut seen: Vec<&VNat> = Vec::new();
                images.iter().all(|t| {
                    let fresh = !seen.contains(&t);
                    seen.push(t);
                    fresh
                })
            };
            laws.expect("transpose bijective", || "Nat(∃f, g) -> Nat(f, [N,1]g)".into(), all_natural && distinct && images.len() == right.len(), || {
                format!("{} transposes onto {} transformations", images.len(), right.len())
            });
        }
    }
    Ok(AdjunctionReport { laws, lan_side, restriction_side })
}

/// The extension along the identity, for comparisons.
pub fn identity_lan(a: &Arc<VCat>, f: &Copresheaf) -> Result<LanResult> {
    lan(&VFunctor::identity(a.clone()), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encat::examples::{discrete, group_algebra, group_algebra_map, indiscrete, indiscrete_inclusion, terminal, z2_into_z4, z3_into_s3};
    use crate::encat::{constant, generate_copresheaf, representable, CopresheafSpec};
    use crate::groups::FiniteGroup;
    use crate::vbase::{is_iso, is_mono, Field, VObj};

    fn subgroup(pair: (FiniteGroup, FiniteGroup, Vec<usize>), field: Field) -> VFunctor {
        let (h, g, img) = pair;
        let a = Arc::new(group_algebra(&h, field).unwrap());
        let c = Arc::new(group_algebra(&g, field).unwrap());
        group_algebra_map(a, c, &h, &g, &img).unwrap()
    }

    #[test]
    fn identity_extension_is_iso_to_f() {
        let a = Arc::new(group_algebra(&FiniteGroup::cyclic(3), Field::Rationals).unwrap());
        let f = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![2] }).unwrap();
        let l = identity_lan(&a, &f).unwrap();
        assert_eq!(l.value.val(0), f.val(0));
        assert!(is_iso(a.ctx(), &l.unit.components[0]));
        assert!(l.value.check().unwrap().is_lawful());
    }

    #[test]
    fn induction_from_z2_to_z4_doubles_dimension() {
        let n = subgroup(z2_into_z4(), Field::Rationals);
        let f = representable(n.source(), 0).unwrap();
        let l = lan(&n, &f).unwrap();
        assert_eq!(l.value.val(0), VObj(4));
        assert!(is_mono(f.ctx(), &l.unit.components[0]));
        assert!(l.value.check().unwrap().is_lawful());
    }

    #[test]
    fn unit_agrees_with_direct_cowedge_formula() {
        let n = subgroup(z3_into_s3(), Field::Rationals);
        let v = n.source().ctx();
        let f = generate_copresheaf(n.source(), &CopresheafSpec::Free { gens: vec![2] }).unwrap();
        let l = lan(&n, &f).unwrap();
        let direct = v
            .compose(&l.coends[0].cowedge[0], &v.tensor(n.target().ident(0), &v.identity(f.val(0))).unwrap())
            .unwrap();
        assert_eq!(l.unit.components[0], direct);
        assert_eq!(l.value.val(0), VObj(12));
    }

    #[test]
    fn lan_map_is_functorial() {
        let n = subgroup(z2_into_z4(), Field::Rationals);
        let f = representable(n.source(), 0).unwrap();
        let l = lan(&n, &f).unwrap();
        assert_eq!(lan_map(&l, &l, &VNat::identity(&f)).unwrap(), VNat::identity(&l.value));
    }

    #[test]
    fn adjunction_for_subgroup_inclusion() {
        let n = subgroup(z2_into_z4(), Field::Rationals);
        let f = representable(n.source(), 0).unwrap();
        let g = representable(n.target(), 0).unwrap();
        let rep = adjunction_check(&n, &f, &g).unwrap();
        assert!(rep.laws.is_lawful(), "{:?}", rep.laws.violations);
        assert_eq!(rep.lan_side, NatSpaceSize::Dimension(4));
    }

    #[test]
    fn adjunction_for_identity_and_indiscrete() {
        let a = Arc::new(indiscrete(2, Field::Rationals).unwrap());
        let c = Arc::new(indiscrete(3, Field::Rationals).unwrap());
        let n = indiscrete_inclusion(a.clone(), c.clone(), vec![0, 2]).unwrap();
        let f = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![1, 1] }).unwrap();
        let g = generate_copresheaf(&c, &CopresheafSpec::Free { gens: vec![0, 1, 1] }).unwrap();
        assert!(adjunction_check(&n, &f, &g).unwrap().laws.is_lawful());
        let id = VFunctor::identity(a.clone());
        assert!(adjunction_check(&id, &f, &f).unwrap().laws.is_lawful());
    }

    #[test]
    fn finset_adjunction_from_terminal() {
        let a = Arc::new(terminal(BaseCtx::FinSet));
        let c = Arc::new(discrete(2, BaseCtx::FinSet, None).unwrap());
        let n = VFunctor::new(a.clone(), c.clone(), vec![1], |_, _| Ok(BaseCtx::FinSet.identity(VObj(1)))).unwrap();
        let f = constant(Shape::Copresheaf, a, VObj(1)).unwrap();
        let g = generate_copresheaf(&c, &CopresheafSpec::Free { gens: vec![2, 3] }).unwrap();
        let rep = adjunction_check(&n, &f, &g).unwrap();
        assert!(rep.laws.is_lawful(), "{:?}", rep.laws.violations);
        assert_eq!(rep.lan_side, NatSpaceSize::Cardinality(3));
    }
}
