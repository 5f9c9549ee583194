//! Coends and ends as explicit coequalizers and equalizers, optionally
//! parametrized by the remaining legs of a module.

use std::sync::Arc;

use crate::encat::{LawReport, Module, Shape};
use crate::error::{KanError, Result};
use crate::vbase::{BaseCtx, ColimitCocone, LimitCone, VMap, VObj};

/// `∫^a S(a,a)` with its cowedge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoendResult {
    pub apex: VObj,
    /// `ω_a : S(a,a) -> apex`.
    pub cowedge: Vec<VMap>,
    /// `⊕_a S(a,a)` with its injections.
    pub sum: ColimitCocone,
    /// Coequalizer of the two action maps out of `⊕_{a,b} A(a,b) ⊗ S(b,a)`.
    pub coequalizer: ColimitCocone,
}

impl CoendResult {
    /// The canonical epi `⊕_a S(a,a) -> ∫^a S(a,a)`.
    pub fn canonical_epi(&self) -> &VMap {
        self.coequalizer.quotient()
    }

    /// The chosen section of the canonical epi.
    pub fn section(&self) -> &VMap {
        self.coequalizer.section().expect("coequalizer section")
    }

    /// Factor a cowedge `k_a : S(a,a) -> Y` through the coend.
    pub fn factor(&self, ctx: BaseCtx, cod: VObj, cowedge: &[VMap]) -> Result<VMap> {
        let total = ctx.copair_into(cod, cowedge)?;
        self.coequalizer.factor(ctx, &[total])
    }
}

/// `∫_x S(x,x)` (or the bare product) with its wedge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndResult {
    pub apex: VObj,
    /// `π_x : apex -> S(x,x)`.
    pub wedge: Vec<VMap>,
    /// True for the end, false for the bare product.
    pub is_end: bool,
    pub product: LimitCone,
    /// `apex -> ∏_x S(x,x)`.
    pub inclusion: VMap,
    pub equalizer: Option<LimitCone>,
}

impl EndResult {
    /// Factor a wedge `k_x : W -> S(x,x)` through the end.
    pub fn factor(&self, ctx: BaseCtx, dom: VObj, wedge: &[VMap]) -> Result<VMap> {
        let total = ctx.pair_from(dom, wedge)?;
        match &self.equalizer {
            Some(eq) => eq.factor(ctx, &[total]),
            None => Ok(total),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndMode {
    End,
    Product,
}

fn check_pairing(m: &Module, i: usize, j: usize) -> Result<()> {
    if i == j || i >= m.arity() || j >= m.arity() {
        return Err(KanError::Boundary("coend legs must be two distinct legs".into()));
    }
    if *m.legs()[i] != m.legs()[j].opposite() {
        return Err(KanError::SourceMismatch("contravariant leg is not the opposite of the covariant leg".into()));
    }
    Ok(())
}

struct Legs {
    k: usize,
    i: usize,
    j: usize,
}

impl Legs {
    fn full(&self, p: &[usize], ai: usize, aj: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.k);
        let mut rest = p.iter();
        for l in 0..self.k {
            if l == self.i {
                out.push(ai);
            } else if l == self.j {
                out.push(aj);
            } else {
                out.push(*rest.next().expect("parameter"));
            }
        }
        out
    }
}

fn remaining_module(m: &Module, i: usize, j: usize, value: impl Fn(&[usize]) -> VObj, action: impl Fn(&[usize], &[usize]) -> Result<VMap>) -> Result<Option<Module>> {
    let legs: Vec<Arc<_>> = m.legs().iter().enumerate().filter(|(l, _)| *l != i && *l != j).map(|(_, c)| c.clone()).collect();
    if legs.is_empty() {
        return Ok(None);
    }
    Module::new(legs, value, action).map(Some)
}

fn param_tuples(m: &Module, i: usize, j: usize) -> Vec<Vec<usize>> {
    let radices: Vec<usize> = m.legs().iter().enumerate().filter(|(l, _)| *l != i && *l != j).map(|(_, c)| c.n()).collect();
    let count: usize = radices.iter().product();
    (0..count).map(|x| crate::vbase::map::decode(x, &radices)).collect()
}

fn param_index(m: &Module, i: usize, j: usize, p: &[usize]) -> usize {
    let radices: Vec<usize> = m.legs().iter().enumerate().filter(|(l, _)| *l != i && *l != j).map(|(_, c)| c.n()).collect();
    crate::vbase::map::encode(p, &radices)
}

fn coend_at(m: &Module, legs: &Legs, p: &[usize]) -> Result<CoendResult> {
    let v = m.ctx();
    let a = &m.legs()[legs.j];
    let n = a.n();
    let diag: Vec<VObj> = (0..n).map(|x| m.value(&legs.full(p, x, x))).collect();
    let sum = v.coproduct(&diag);
    let mut lefts = Vec::with_capacity(n * n);
    let mut rights = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            // A(x,y) ⊗ S(y,x): covariant leg x -> y lands in S(y,y),
            // contravariant leg y -> x lands in S(x,x)
            let t = legs.full(p, y, x);
            lefts.push(v.compose(&sum.legs[y], &m.leg_action(legs.j, &t, y)?)?);
            rights.push(v.compose(&sum.legs[x], &m.leg_action(legs.i, &t, x)?)?);
        }
    }
    let left = v.copair_into(sum.apex, &lefts)?;
    let right = v.copair_into(sum.apex, &rights)?;
    let coequalizer = v.coequalizer(&left, &right)?;
    let cowedge = sum.legs.iter().map(|inj| v.compose(coequalizer.quotient(), inj)).collect::<Result<_>>()?;
    Ok(CoendResult { apex: coequalizer.apex, cowedge, sum, coequalizer })
}

/// Coend over legs `i` (contravariant, `A^op`) and `j` (covariant, `A`),
/// one per tuple of the remaining legs, plus the induced module on those
/// legs (none when no legs remain).
pub fn coend_over(m: &Module, i: usize, j: usize) -> Result<(Vec<CoendResult>, Option<Module>)> {
    check_pairing(m, i, j)?;
    let v = m.ctx();
    let legs = Legs { k: m.arity(), i, j };
    let n = m.legs()[j].n();
    let coends: Vec<CoendResult> = param_tuples(m, i, j).iter().map(|p| coend_at(m, &legs, p)).collect::<Result<_>>()?;
    let module = remaining_module(
        m,
        i,
        j,
        |p| coends[param_index(m, i, j, p)].apex,
        |p, q| {
            let (src, tgt) = (&coends[param_index(m, i, j, p)], &coends[param_index(m, i, j, q)]);
            let h = hom_rest(m, &legs, p, q);
            let diag: Vec<VObj> = (0..n).map(|x| m.value(&legs.full(p, x, x))).collect();
            let spread = v.distribute(h, &diag);
            let acts: Vec<VMap> = (0..n)
                .map(|x| m.action_with_idents(&legs.full(p, x, x), &legs.full(q, x, x), &[i, j]))
                .collect::<Result<_>>()?;
            let candidate = v.chain(&[&spread, &v.coproduct_map(&acts)?, tgt.canonical_epi()])?;
            let idh = v.identity(h);
            v.factor_through_split_epi(&candidate, &v.tensor(&idh, src.canonical_epi())?, &v.tensor(&idh, src.section())?)
        },
    )?;
    Ok((coends, module))
}

fn hom_rest(m: &Module, legs: &Legs, p: &[usize], q: &[usize]) -> VObj {
    let (t, u) = (legs.full(p, 0, 0), legs.full(q, 0, 0));
    let factors: Vec<VObj> = (0..m.arity())
        .rev()
        .filter(|l| *l != legs.i && *l != legs.j)
        .map(|l| m.legs()[l].hom(t[l], u[l]))
        .collect();
    m.ctx().tensor_objs(&factors)
}

/// `∫^a S(a,a)` for a bimodule.
pub fn coend(s: &Module) -> Result<CoendResult> {
    if s.arity() != 2 {
        return Err(KanError::Boundary("coend needs a two-leg module".into()));
    }
    Ok(coend_over(s, 0, 1)?.0.remove(0))
}

fn end_at(m: &Module, legs: &Legs, p: &[usize], mode: EndMode) -> Result<EndResult> {
    let v = m.ctx();
    let a = &m.legs()[legs.j];
    let n = a.n();
    let diag: Vec<VObj> = (0..n).map(|x| m.value(&legs.full(p, x, x))).collect();
    let product = v.product(&diag)?;
    if mode == EndMode::Product {
        return Ok(EndResult {
            apex: product.apex,
            wedge: product.legs.clone(),
            is_end: false,
            inclusion: v.identity(product.apex),
            product,
            equalizer: None,
        });
    }
    let mut homs = Vec::with_capacity(n * n);
    let mut firsts = Vec::with_capacity(n * n);
    let mut seconds = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            // [A(x,y), S(x,y)] receives S(x,x) covariantly and S(y,y) contravariantly
            let target = legs.full(p, x, y);
            let hxy = a.hom(x, y);
            homs.push(v.internal_hom(hxy, m.value(&target))?);
            let cov = m.leg_action(legs.j, &legs.full(p, x, x), y)?;
            let contra = m.leg_action(legs.i, &legs.full(p, y, y), x)?;
            let swap = v.symmetry(product.apex, hxy);
            let one = v.chain(&[&swap, &v.tensor(&v.identity(hxy), &product.legs[x])?, &cov])?;
            let two = v.chain(&[&swap, &v.tensor(&v.identity(hxy), &product.legs[y])?, &contra])?;
            firsts.push(v.curry(&one, product.apex, hxy)?);
            seconds.push(v.curry(&two, product.apex, hxy)?);
        }
    }
    let left = v.pair_from(product.apex, &firsts)?;
    let right = v.pair_from(product.apex, &seconds)?;
    let equalizer = v.equalizer(&left, &right)?;
    let inclusion = equalizer.inclusion().clone();
    let wedge = product.legs.iter().map(|pr| v.compose(pr, &inclusion)).collect::<Result<_>>()?;
    Ok(EndResult { apex: equalizer.apex, wedge, is_end: true, product, inclusion, equalizer: Some(equalizer) })
}

/// End (or product) over legs `i`, `j`, parametrized like [`coend_over`].
pub fn end_over(m: &Module, i: usize, j: usize, mode: EndMode) -> Result<(Vec<EndResult>, Option<Module>)> {
    check_pairing(m, i, j)?;
    let v = m.ctx();
    let legs = Legs { k: m.arity(), i, j };
    let n = m.legs()[j].n();
    let ends: Vec<EndResult> = param_tuples(m, i, j).iter().map(|p| end_at(m, &legs, p, mode)).collect::<Result<_>>()?;
    let module = remaining_module(
        m,
        i,
        j,
        |p| ends[param_index(m, i, j, p)].apex,
        |p, q| {
            let (src, tgt) = (&ends[param_index(m, i, j, p)], &ends[param_index(m, i, j, q)]);
            let h = hom_rest(m, &legs, p, q);
            let dom = v.tensor_obj(h, src.apex);
            let wedge: Vec<VMap> = (0..n)
                .map(|x| {
                    let act = m.action_with_idents(&legs.full(p, x, x), &legs.full(q, x, x), &[i, j])?;
                    v.compose(&act, &v.tensor(&v.identity(h), &src.wedge[x])?)
                })
                .collect::<Result<_>>()?;
            tgt.factor(v, dom, &wedge)
        },
    )?;
    Ok((ends, module))
}

/// `∫_x S(x,x)` or `∏_x S(x,x)` for a bimodule.
pub fn end(s: &Module, mode: EndMode) -> Result<EndResult> {
    if s.arity() != 2 {
        return Err(KanError::Boundary("end needs a two-leg module".into()));
    }
    Ok(end_over(s, 0, 1, mode)?.0.remove(0))
}

/// The map `∫^a S(a,a) -> ∫^a T(a,a)` induced by `phi_a : S(a,a) -> T(a,a)`.
pub fn coend_map(ctx: BaseCtx, src: &CoendResult, tgt: &CoendResult, phi: &[VMap]) -> Result<VMap> {
    let cowedge: Vec<VMap> = phi.iter().zip(&tgt.cowedge).map(|(p, w)| ctx.compose(w, p)).collect::<Result<_>>()?;
    src.factor(ctx, tgt.apex, &cowedge)
}

/// Cowedge identities of a computed coend against its bimodule.
pub fn check_cowedge(s: &Module, c: &CoendResult) -> Result<LawReport> {
    let v = s.ctx();
    let a = &s.legs()[1];
    let mut rep = LawReport::new("cowedge");
    for x in 0..a.n() {
        for y in 0..a.n() {
            let lhs = v.compose(&c.cowedge[y], &s.leg_action(1, &[y, x], y)?)?;
            let rhs = v.compose(&c.cowedge[x], &s.leg_action(0, &[y, x], x)?)?;
            rep.expect_eq("cowedge", || format!("({},{})", a.name(x), a.name(y)), lhs, rhs);
        }
    }
    Ok(rep)
}

/// Wedge identities of a computed end (always hold for ends, generally not for products).
pub fn check_wedge(s: &Module, e: &EndResult) -> Result<LawReport> {
    let v = s.ctx();
    let a = &s.legs()[1];
    let mut rep = LawReport::new("wedge");
    for x in 0..a.n() {
        for y in 0..a.n() {
            let hxy = a.hom(x, y);
            let one = v.compose(&s.leg_action(1, &[x, x], y)?, &v.tensor(&v.identity(hxy), &e.wedge[x])?)?;
            let two = v.compose(&s.leg_action(0, &[y, y], x)?, &v.tensor(&v.identity(hxy), &e.wedge[y])?)?;
            rep.expect_eq("wedge", || format!("({},{})", a.name(x), a.name(y)), one, two);
        }
    }
    Ok(rep)
}

/// The interchange `∫^a ∏_x T_x(a,a) -> ∏_x ∫^a T_x(a,a)` for bimodules
/// `T_x` on one category. Returns the map with the coends it connects.
pub fn interchange_can(family: &[Module]) -> Result<(VMap, CoendResult, Vec<CoendResult>)> {
    let (prod, projections) = crate::encat::product_modules(family)?;
    let prod = match prod.shape() {
        Shape::Bimodule => prod,
        _ => return Err(KanError::Boundary("interchange needs bimodules".into())),
    };
    let v = prod.ctx();
    let whole = coend(&prod)?;
    let parts: Vec<CoendResult> = family.iter().map(coend).collect::<Result<_>>()?;
    let n = prod.legs()[1].n();
    let components: Vec<VMap> = parts
        .iter()
        .zip(&projections)
        .map(|(c, pr)| {
            let phi: Vec<VMap> = (0..n).map(|a| pr.components[prod.index(&[a, a])].clone()).collect();
            coend_map(v, &whole, c, &phi)
        })
        .collect::<Result<_>>()?;
    let map = v.pair_from(whole.apex, &components)?;
    Ok((map, whole, parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encat::examples::{group_algebra, indiscrete, terminal};
    use crate::encat::{ext_tensor, hom_bimodule, representable, corepresentable};
    use crate::groups::FiniteGroup;
    use crate::vbase::Field;

    fn ga(g: FiniteGroup, f: Field) -> Arc<crate::encat::VCat> {
        Arc::new(group_algebra(&g, f).unwrap())
    }

    #[test]
    fn coend_of_regular_bimodule_counts_conjugacy_classes() {
        for (g, classes) in [(FiniteGroup::cyclic(2), 2), (FiniteGroup::cyclic(3), 3), (FiniteGroup::symmetric3(), 3)] {
            let a = ga(g, Field::Rationals);
            let s = hom_bimodule(&a).unwrap();
            let c = coend(&s).unwrap();
            assert_eq!(c.apex, VObj(classes));
            assert!(check_cowedge(&s, &c).unwrap().is_lawful());
        }
    }

    #[test]
    fn end_of_regular_bimodule_is_the_center() {
        for (g, center) in [(FiniteGroup::cyclic(2), 2), (FiniteGroup::symmetric3(), 3)] {
            let a = ga(g, Field::Rationals);
            let s = hom_bimodule(&a).unwrap();
            let e = end(&s, EndMode::End).unwrap();
            assert_eq!(e.apex, VObj(center));
            assert!(check_wedge(&s, &e).unwrap().is_lawful());
            assert_eq!(end(&s, EndMode::Product).unwrap().apex, VObj(a.hom(0, 0).0));
        }
    }

    #[test]
    fn terminal_coend_and_end_are_the_value() {
        let a = Arc::new(terminal(BaseCtx::FinVect(Field::Rationals)));
        let s = hom_bimodule(&a).unwrap();
        let c = coend(&s).unwrap();
        assert_eq!(c.cowedge[0], BaseCtx::FinVect(Field::Rationals).identity(VObj(1)));
        assert_eq!(end(&s, EndMode::End).unwrap().apex, VObj(1));
    }

    #[test]
    fn factorizer_rejects_non_cowedges() {
        let a = ga(FiniteGroup::symmetric3(), Field::Rationals);
        let v = a.ctx();
        let s = hom_bimodule(&a).unwrap();
        let c = coend(&s).unwrap();
        assert!(matches!(c.factor(v, VObj(6), &[v.identity(VObj(6))]), Err(KanError::IncompatibleCandidate(_))));
    }

    #[test]
    fn parametrized_coend_gives_a_lawful_module() {
        let a = Arc::new(indiscrete(2, Field::Rationals).unwrap());
        let p = corepresentable(&a, 1).unwrap();
        let hom = hom_bimodule(&a).unwrap();
        // legs [A^op, A^op, A]: A(a,1) ⊗ A(b,c)
        let t = ext_tensor(&p, &hom).unwrap();
        let (coends, m) = coend_over(&t, 0, 2).unwrap();
        assert_eq!(coends.len(), 2);
        let m = m.unwrap();
        assert!(m.check().unwrap().is_lawful());
        assert_eq!(m.values(), representable(&a, 0).unwrap().values());
    }

    #[test]
    fn interchange_for_one_factor_is_identity() {
        let a = ga(FiniteGroup::cyclic(2), Field::Rationals);
        let s = hom_bimodule(&a).unwrap();
        let (map, whole, _) = interchange_can(&[s]).unwrap();
        assert_eq!(map, a.ctx().identity(whole.apex));
    }
}
