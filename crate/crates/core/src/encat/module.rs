//! V-valued functors of several variables.
//!
//! A [`Module`] is a functor `L_0 ⊗ ... ⊗ L_{k-1} -> V` on a list of leg
//! categories, presented by one joint action per pair of object tuples:
//!
//! ```text
//! act(t, t') : L_{k-1}(t_{k-1}, t'_{k-1}) ⊗ ... ⊗ L_0(t_0, t'_0) ⊗ M(t) -> M(t')
//! ```
//!
//! Copresheaves have legs `[A]`, presheaves `[A^op]`, bimodules
//! `[A^op, A]` and trimodules `[A^op, A^op, A]`, so a copresheaf action is
//! `A(a,b) ⊗ fa -> fb` and a bimodule action is
//! `A(b,b') ⊗ A(a',a) ⊗ S(a,b) -> S(a',b')`.

use std::sync::Arc;

use crate::error::{KanError, Result};
use crate::vbase::map::{decode, encode};
use crate::vbase::{BaseCtx, VMap, VObj};

use super::category::{LawReport, VCat, VFunctor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Copresheaf,
    Presheaf,
    Bimodule,
    TriModule,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module {
    ctx: BaseCtx,
    shape: Shape,
    base: Arc<VCat>,
    legs: Vec<Arc<VCat>>,
    radices: Vec<usize>,
    values: Vec<VObj>,
    action: Vec<VMap>,
}

pub type Copresheaf = Module;
pub type Presheaf = Module;
pub type Bimodule = Module;
pub type TriModule = Module;

fn legs_for(shape: Shape, base: &Arc<VCat>) -> Option<Vec<Arc<VCat>>> {
    let op = || Arc::new(base.opposite());
    match shape {
        Shape::Copresheaf => Some(vec![base.clone()]),
        Shape::Presheaf => Some(vec![op()]),
        Shape::Bimodule => Some(vec![op(), base.clone()]),
        Shape::TriModule => {
            let o = op();
            Some(vec![o.clone(), o, base.clone()])
        }
        Shape::General => None,
    }
}

impl Module {
    /// Build a module on explicit legs, checking every map's type.
    pub fn new(
        legs: Vec<Arc<VCat>>,
        value: impl Fn(&[usize]) -> VObj,
        action: impl Fn(&[usize], &[usize]) -> Result<VMap>,
    ) -> Result<Module> {
        let ctx = legs
            .first()
            .map(|l| l.ctx())
            .ok_or_else(|| KanError::Boundary("module needs at least one leg".into()))?;
        if legs.iter().any(|l| l.ctx() != ctx) {
            return Err(KanError::CtxMismatch("legs over different bases".into()));
        }
        let radices: Vec<usize> = legs.iter().map(|l| l.n()).collect();
        let count: usize = radices.iter().product();
        let values: Vec<VObj> = (0..count).map(|i| value(&decode(i, &radices))).collect();
        let mut module = Module {
            ctx,
            shape: Shape::General,
            base: legs[0].clone(),
            legs,
            radices,
            values,
            action: Vec::with_capacity(count * count),
        };
        for i in 0..count {
            let t = decode(i, &module.radices);
            for j in 0..count {
                let u = decode(j, &module.radices);
                let m = action(&t, &u)?;
                ctx.ensure(&m)?;
                let dom = ctx.tensor_obj(module.hom_block(&t, &u), module.values[i]);
                if m.dom() != dom || m.cod() != module.values[j] {
                    return Err(KanError::Boundary(format!(
                        "action {:?} -> {:?} has type {} -> {}, expected {} -> {}",
                        t,
                        u,
                        m.dom(),
                        m.cod(),
                        dom,
                        module.values[j]
                    )));
                }
                module.action.push(m);
            }
        }
        Ok(module)
    }

    /// Build a module of a named shape over `base`.
    pub fn with_shape(
        shape: Shape,
        base: Arc<VCat>,
        value: impl Fn(&[usize]) -> VObj,
        action: impl Fn(&[usize], &[usize]) -> Result<VMap>,
    ) -> Result<Module> {
        let legs = legs_for(shape, &base)
            .ok_or_else(|| KanError::Boundary("general modules need explicit legs".into()))?;
        let mut m = Module::new(legs, value, action)?;
        m.shape = shape;
        m.base = base;
        Ok(m)
    }

    /// Re-label a general module as a named shape over `base` when its legs fit.
    pub fn as_shape(mut self, shape: Shape, base: Arc<VCat>) -> Result<Module> {
        let legs = legs_for(shape, &base)
            .ok_or_else(|| KanError::Boundary("cannot relabel as general".into()))?;
        if legs.len() != self.legs.len() || legs.iter().zip(&self.legs).any(|(a, b)| **a != **b) {
            return Err(KanError::SourceMismatch(format!("legs do not have shape {shape:?}")));
        }
        self.legs = legs;
        self.shape = shape;
        self.base = base;
        Ok(self)
    }

    pub fn ctx(&self) -> BaseCtx {
        self.ctx
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn base(&self) -> &Arc<VCat> {
        &self.base
    }

    pub fn legs(&self) -> &[Arc<VCat>] {
        &self.legs
    }

    pub fn arity(&self) -> usize {
        self.legs.len()
    }

    pub fn tuple_count(&self) -> usize {
        self.values.len()
    }

    pub fn tuple(&self, i: usize) -> Vec<usize> {
        decode(i, &self.radices)
    }

    pub fn index(&self, t: &[usize]) -> usize {
        encode(t, &self.radices)
    }

    pub fn value(&self, t: &[usize]) -> VObj {
        self.values[self.index(t)]
    }

    pub fn value_at(&self, i: usize) -> VObj {
        self.values[i]
    }

    pub fn values(&self) -> &[VObj] {
        &self.values
    }

    pub fn action(&self, t: &[usize], u: &[usize]) -> &VMap {
        self.action_at(self.index(t), self.index(u))
    }

    pub fn action_at(&self, i: usize, j: usize) -> &VMap {
        &self.action[i * self.values.len() + j]
    }

    /// Hom factors of the action domain, in order (last leg first).
    pub fn hom_factors(&self, t: &[usize], u: &[usize]) -> Vec<VObj> {
        (0..self.legs.len()).rev().map(|i| self.legs[i].hom(t[i], u[i])).collect()
    }

    pub fn hom_block(&self, t: &[usize], u: &[usize]) -> VObj {
        self.ctx.tensor_objs(&self.hom_factors(t, u))
    }

    /// Copresheaf value `f a`.
    pub fn val(&self, a: usize) -> VObj {
        self.values[a]
    }

    /// Single-leg action `act(a, b)`.
    pub fn act(&self, a: usize, b: usize) -> &VMap {
        self.action_at(a, b)
    }

    pub fn same_legs(&self, other: &Module) -> bool {
        self.legs.len() == other.legs.len()
            && self.legs.iter().zip(&other.legs).all(|(a, b)| Arc::ptr_eq(a, b) || **a == **b)
    }

    /// The map `H ⊗ M(t) -> H' ⊗ M(t)` inserting identities: `I ⊗ M(t) -> act domain at (t, t)`.
    pub fn identity_insertion(&self, t: &[usize]) -> Result<VMap> {
        let v = self.ctx;
        let mut parts: Vec<&VMap> = (0..self.legs.len()).rev().map(|i| self.legs[i].ident(t[i])).collect();
        let idv = v.identity(self.value(t));
        parts.push(&idv);
        v.tensor_all(&parts)
    }

    pub fn check(&self) -> Result<LawReport> {
        check_action(self)
    }

    /// The action `t -> u` with identities inserted on the legs in `fixed`
    /// (where `t` and `u` agree). Its domain is the tensor of the remaining
    /// hom factors (last leg first) with `M(t)`.
    pub fn action_with_idents(&self, t: &[usize], u: &[usize], fixed: &[usize]) -> Result<VMap> {
        let v = self.ctx;
        let mut parts: Vec<VMap> = Vec::with_capacity(self.legs.len() + 1);
        for l in (0..self.legs.len()).rev() {
            if fixed.contains(&l) {
                if t[l] != u[l] {
                    return Err(KanError::Boundary(format!("leg {l} is fixed but moves")));
                }
                parts.push(self.legs[l].ident(t[l]).clone());
            } else {
                parts.push(v.identity(self.legs[l].hom(t[l], u[l])));
            }
        }
        parts.push(v.identity(self.value(t)));
        let refs: Vec<&VMap> = parts.iter().collect();
        v.compose(self.action(t, u), &v.tensor_all(&refs)?)
    }

    /// One-sided action on `leg`: `L(t_leg, to) ⊗ M(t) -> M(t[leg := to])`.
    pub fn leg_action(&self, leg: usize, t: &[usize], to: usize) -> Result<VMap> {
        let mut u = t.to_vec();
        u[leg] = to;
        let fixed: Vec<usize> = (0..self.legs.len()).filter(|l| *l != leg).collect();
        self.action_with_idents(t, &u, &fixed)
    }
}

/// Unit and composition laws of the joint action.
pub fn check_action(m: &Module) -> Result<LawReport> {
    let v = m.ctx;
    let k = m.arity();
    let count = m.tuple_count();
    let mut rep = LawReport::new(format!("{:?}", m.shape));
    for i in 0..count {
        let t = m.tuple(i);
        let lhs = v.compose(m.action_at(i, i), &m.identity_insertion(&t)?)?;
        rep.expect_eq("unit", || format!("{t:?}"), lhs, v.identity(m.value_at(i)));
    }
    for i in 0..count {
        let t = m.tuple(i);
        for j in 0..count {
            let u = m.tuple(j);
            let h1 = m.hom_factors(&t, &u);
            let step1 = m.action_at(i, j);
            for l in 0..count {
                let w = m.tuple(l);
                let h2 = m.hom_factors(&u, &w);
                let lhs = v.compose(
                    m.action_at(j, l),
                    &v.tensor(&v.identity(v.tensor_objs(&h2)), step1)?,
                )?;
                // interleave [h2..., h1..., M] -> [h2_0, h1_0, h2_1, h1_1, ..., M]
                let mut objs = h2.clone();
                objs.extend(h1.iter().copied());
                objs.push(m.value_at(i));
                let mut perm = Vec::with_capacity(2 * k + 1);
                for p in 0..k {
                    perm.push(p);
                    perm.push(k + p);
                }
                perm.push(2 * k);
                let shuffle = v.permute(&objs, &perm);
                let mut comps: Vec<&VMap> = (0..k)
                    .rev()
                    .map(|leg| m.legs[leg].comp(t[leg], u[leg], w[leg]))
                    .collect();
                let idm = v.identity(m.value_at(i));
                comps.push(&idm);
                let rhs = v.chain(&[&shuffle, &v.tensor_all(&comps)?, m.action_at(i, l)])?;
                rep.expect_eq("composition", || format!("{t:?}->{u:?}->{w:?}"), lhs, rhs);
            }
        }
    }
    Ok(rep)
}

/// `A(b, -)`, with action given by composition.
pub fn representable(a: &Arc<VCat>, b: usize) -> Result<Copresheaf> {
    if b >= a.n() {
        return Err(KanError::UnknownObject(b.to_string()));
    }
    Module::with_shape(Shape::Copresheaf, a.clone(), |t| a.hom(b, t[0]), |t, u| Ok(a.comp(b, t[0], u[0]).clone()))
}

/// `A(-, b)` as a presheaf: `A(a', a) ⊗ A(a, b) -> A(a', b)`.
pub fn corepresentable(a: &Arc<VCat>, b: usize) -> Result<Presheaf> {
    if b >= a.n() {
        return Err(KanError::UnknownObject(b.to_string()));
    }
    let v = a.ctx();
    Module::with_shape(
        Shape::Presheaf,
        a.clone(),
        |t| a.hom(t[0], b),
        |t, u| {
            let (x, y) = (t[0], u[0]);
            v.compose(a.comp(y, x, b), &v.symmetry(a.hom(y, x), a.hom(x, b)))
        },
    )
}

/// The hom bimodule `A(-, -)`.
pub fn hom_bimodule(a: &Arc<VCat>) -> Result<Bimodule> {
    let v = a.ctx();
    Module::with_shape(
        Shape::Bimodule,
        a.clone(),
        |t| a.hom(t[0], t[1]),
        |t, u| {
            let (x, y, x2, y2) = (t[0], t[1], u[0], u[1]);
            // A(y,y2) ⊗ A(x2,x) ⊗ A(x,y) -> A(y,y2) ⊗ A(x,y) ⊗ A(x2,x) -> A(y,y2) ⊗ A(x2,y) -> A(x2,y2)
            let objs = [a.hom(y, y2), a.hom(x2, x), a.hom(x, y)];
            let swap = v.permute(&objs, &[0, 2, 1]);
            let inner = v.tensor(&v.identity(a.hom(y, y2)), a.comp(x2, x, y))?;
            v.chain(&[&swap, &inner, a.comp(x2, y, y2)])
        },
    )
}

/// The zero module (empty sets / zero spaces) on the given legs.
pub fn zero_module(legs: Vec<Arc<VCat>>) -> Result<Module> {
    let v = legs[0].ctx();
    Module::new(legs, |_| v.initial(), |_, _| Ok(v.from_initial(v.initial())))
}

/// Constant functor at `x`: every hom basis element (or set element) acts
/// as the identity. Fails as unlawful when the homs admit no such augmentation.
pub fn constant(shape: Shape, base: Arc<VCat>, x: VObj) -> Result<Module> {
    let v = base.ctx();
    let legs = legs_for(shape, &base)
        .ok_or_else(|| KanError::Boundary("constant modules need a named shape".into()))?;
    let block = |t: &[usize], u: &[usize]| {
        v.tensor_objs(&(0..legs.len()).rev().map(|i| legs[i].hom(t[i], u[i])).collect::<Vec<_>>())
    };
    let m = Module::with_shape(shape, base, |_| x, |t, u| {
        let dom = v.tensor_obj(block(t, u), x);
        Ok(v.index_map(dom, x, |i| i % x.0.max(1)))
    })?;
    check_action(&m)?.into_result()?;
    Ok(m)
}

/// `M ⊠ M'`: legs concatenated, value `M(t) ⊗ M'(t')`.
pub fn ext_tensor(m1: &Module, m2: &Module) -> Result<Module> {
    let v = m1.ctx;
    let k1 = m1.arity();
    let mut legs = m1.legs.clone();
    legs.extend(m2.legs.iter().cloned());
    let out = Module::new(
        legs,
        |t| v.tensor_obj(m1.value(&t[..k1]), m2.value(&t[k1..])),
        |t, u| {
            let (t1, t2) = (&t[..k1], &t[k1..]);
            let (u1, u2) = (&u[..k1], &u[k1..]);
            let objs = [m2.hom_block(t2, u2), m1.hom_block(t1, u1), m1.value(t1), m2.value(t2)];
            let shuffle = v.permute(&objs, &[1, 2, 0, 3]);
            let acts = v.tensor(m1.action(t1, u1), m2.action(t2, u2))?;
            v.compose(&acts, &shuffle)
        },
    )?;
    // presheaf ⊠ copresheaf over the same base is a bimodule
    if m1.shape == Shape::Presheaf && m2.shape == Shape::Copresheaf && *m1.base == *m2.base {
        return out.as_shape(Shape::Bimodule, m2.base.clone());
    }
    Ok(out)
}

/// Reorder legs: new leg `j` is old leg `perm[j]`.
pub fn permute_legs(m: &Module, perm: &[usize]) -> Result<Module> {
    let v = m.ctx;
    let k = m.arity();
    let mut inv = vec![0; k];
    for (j, p) in perm.iter().enumerate() {
        inv[*p] = j;
    }
    let legs: Vec<Arc<VCat>> = perm.iter().map(|p| m.legs[*p].clone()).collect();
    let old = |t: &[usize]| -> Vec<usize> { (0..k).map(|l| t[inv[l]]).collect() };
    Module::new(
        legs,
        |t| m.value(&old(t)),
        |t, u| {
            let (ot, ou) = (old(t), old(u));
            // new reversed factor list position p holds new leg k-1-p
            let mut objs: Vec<VObj> = (0..k).rev().map(|j| m.legs[perm[j]].hom(t[j], u[j])).collect();
            objs.push(m.value(&ot));
            let mut sigma: Vec<usize> = (0..k).map(|q| k - 1 - inv[k - 1 - q]).collect();
            sigma.push(k);
            let shuffle = v.permute(&objs, &sigma);
            v.compose(m.action(&ot, &ou), &shuffle)
        },
    )
}

/// Restrict leg `i` along `f : B -> L_i`.
pub fn restrict_leg(m: &Module, i: usize, f: &VFunctor) -> Result<Module> {
    if **f.target() != *m.legs[i] {
        return Err(KanError::SourceMismatch("functor target is not the leg category".into()));
    }
    let v = m.ctx;
    let k = m.arity();
    let mut legs = m.legs.clone();
    legs[i] = f.source().clone();
    let push = |t: &[usize]| -> Vec<usize> {
        let mut s = t.to_vec();
        s[i] = f.obj(t[i]);
        s
    };
    Module::new(
        legs,
        |t| m.value(&push(t)),
        |t, u| {
            let (pt, pu) = (push(t), push(u));
            let mut parts: Vec<VMap> = (0..k)
                .rev()
                .map(|l| if l == i { f.map(t[l], u[l]).clone() } else { v.identity(m.legs[l].hom(t[l], u[l])) })
                .collect();
            parts.push(v.identity(m.value(&pt)));
            let refs: Vec<&VMap> = parts.iter().collect();
            v.compose(m.action(&pt, &pu), &v.tensor_all(&refs)?)
        },
    )
}

/// `[N, 1] g`: restrict a copresheaf on `C` along `N : A -> C`.
pub fn restrict_along(n: &VFunctor, g: &Copresheaf) -> Result<Copresheaf> {
    if g.shape != Shape::Copresheaf || **n.target() != *g.base {
        return Err(KanError::SourceMismatch("restrict_along needs a copresheaf on the target".into()));
    }
    restrict_leg(g, 0, n)?.as_shape(Shape::Copresheaf, n.source().clone())
}

/// Restrict a presheaf on `C` along `N : A -> C` (via `N^op`).
pub fn restrict_presheaf(n: &VFunctor, g: &Presheaf) -> Result<Presheaf> {
    if g.shape != Shape::Presheaf || **n.target() != *g.base {
        return Err(KanError::SourceMismatch("restrict_presheaf needs a presheaf on the target".into()));
    }
    let nop = n.opposite().with_categories(Arc::new(n.source().opposite()), g.legs[0].clone())?;
    restrict_leg(g, 0, &nop)?.as_shape(Shape::Presheaf, n.source().clone())
}

/// Fix leg `i` at object `x`.
pub fn fix_leg(m: &Module, i: usize, x: usize) -> Result<Module> {
    let legs: Vec<Arc<VCat>> = m.legs.iter().enumerate().filter(|(l, _)| *l != i).map(|(_, c)| c.clone()).collect();
    let ins = |t: &[usize]| -> Vec<usize> {
        let mut s = t.to_vec();
        s.insert(i, x);
        s
    };
    Module::new(legs, |t| m.value(&ins(t)), |t, u| m.action_with_idents(&ins(t), &ins(u), &[i]))
}

/// `X ⊗ M`, acting on the second factor.
pub fn tensor_by(x: VObj, m: &Module) -> Result<Module> {
    let v = m.ctx;
    let out = Module::new(
        m.legs.clone(),
        |t| v.tensor_obj(x, m.value(t)),
        |t, u| {
            let objs = [m.hom_block(t, u), x, m.value(t)];
            let shuffle = v.permute(&objs, &[1, 0, 2]);
            v.compose(&v.tensor(&v.identity(x), m.action(t, u))?, &shuffle)
        },
    )?;
    relabel_like(out, m)
}

fn relabel_like(out: Module, like: &Module) -> Result<Module> {
    match like.shape {
        Shape::General => Ok(out),
        s => out.as_shape(s, like.base.clone()),
    }
}

/// Pointwise product of modules on the same legs, with its projections.
pub fn product_modules(ms: &[Module]) -> Result<(Module, Vec<VNat>)> {
    let first = ms.first().ok_or_else(|| KanError::Boundary("empty product".into()))?;
    if ms.iter().any(|m| !m.same_legs(first)) {
        return Err(KanError::SourceMismatch("product of modules on different legs".into()));
    }
    let v = first.ctx;
    let cone = |t: &[usize]| v.product(&ms.iter().map(|m| m.value(t)).collect::<Vec<_>>());
    let out = Module::new(
        first.legs.clone(),
        |t| cone(t).expect("product").apex,
        |t, u| {
            let src = cone(t)?;
            let h = first.hom_block(t, u);
            let legs: Vec<VMap> = ms
                .iter()
                .zip(&src.legs)
                .map(|(m, p)| v.compose(m.action(t, u), &v.tensor(&v.identity(h), p)?))
                .collect::<Result<_>>()?;
            v.pair_from(v.tensor_obj(h, src.apex), &legs)
        },
    )?;
    let out = relabel_like(out, first)?;
    let projections = (0..ms.len())
        .map(|j| VNat {
            components: (0..first.tuple_count())
                .map(|i| cone(&first.tuple(i)).map(|c| c.legs[j].clone()))
                .collect::<Result<_>>()
                .expect("product"),
        })
        .collect();
    Ok((out, projections))
}

/// `(s, t) -> [F s, G t]` on legs `[L_0^op, ..., K_0, ...]` for `F` on legs
/// `L` and `G` on legs `K`. For copresheaves on one category this is the
/// bimodule `(c, d) -> [F c, G d]`.
pub fn hom_module(f: &Module, g: &Module) -> Result<Module> {
    let v = f.ctx;
    let kf = f.arity();
    let mut legs: Vec<Arc<VCat>> = f.legs.iter().map(|l| Arc::new(l.opposite())).collect();
    legs.extend(g.legs.iter().cloned());
    let split = |t: &[usize]| (t[..kf].to_vec(), t[kf..].to_vec());
    let obj = |t: &[usize]| {
        let (s, r) = split(t);
        v.internal_hom(f.value(&s), g.value(&r))
    };
    let radices: Vec<usize> = legs.iter().map(|l| l.n()).collect();
    let count: usize = radices.iter().product();
    for i in 0..count {
        obj(&decode(i, &radices))?;
    }
    let out = Module::new(
        legs,
        |t| obj(t).expect("checked"),
        |t, u| {
            let ((s, r), (s2, r2)) = (split(t), split(u));
            let h = obj(t)?;
            let hg = g.hom_block(&r, &r2);
            let hf = f.hom_block(&s2, &s);
            let objs = [hg, hf, h, f.value(&s2)];
            let shuffle = v.permute(&objs, &[0, 2, 1, 3]);
            let act_f = v.tensor_all(&[&v.identity(hg), &v.identity(h), f.action(&s2, &s)])?;
            let ev = v.tensor(&v.identity(hg), &v.eval(f.value(&s), g.value(&r))?)?;
            let body = v.chain(&[&shuffle, &act_f, &ev, g.action(&r, &r2)])?;
            v.curry(&body, v.tensor_objs(&[hg, hf, h]), f.value(&s2))
        },
    )?;
    if f.shape == Shape::Copresheaf && g.shape == Shape::Copresheaf && *f.base == *g.base {
        return out.as_shape(Shape::Bimodule, f.base.clone());
    }
    Ok(out)
}

/// The free copresheaf `b -> ⊕_a A(a,b) ⊗ X_a` on generators `X_a`, with
/// the generator inclusions `X_a -> F a`.
pub fn free_copresheaf(a: &Arc<VCat>, gens: &[VObj]) -> Result<(Copresheaf, Vec<VMap>)> {
    if gens.len() != a.n() {
        return Err(KanError::Boundary(format!("expected {} generator objects", a.n())));
    }
    let v = a.ctx();
    let summands = |b: usize| -> Vec<VObj> { (0..a.n()).map(|x| v.tensor_obj(a.hom(x, b), gens[x])).collect() };
    let f = Module::with_shape(
        Shape::Copresheaf,
        a.clone(),
        |t| v.coproduct(&summands(t[0])).apex,
        |t, u| {
            let (b, c) = (t[0], u[0]);
            let spread = v.distribute(a.hom(b, c), &summands(b));
            let parts: Vec<VMap> = (0..a.n())
                .map(|x| v.tensor(a.comp(x, b, c), &v.identity(gens[x])))
                .collect::<Result<_>>()?;
            v.compose(&v.coproduct_map(&parts)?, &spread)
        },
    )?;
    let inclusions = (0..a.n())
        .map(|x| {
            let inj = &v.coproduct(&summands(x)).legs[x];
            v.compose(inj, &v.tensor(a.ident(x), &v.identity(gens[x]))?)
        })
        .collect::<Result<_>>()?;
    Ok((f, inclusions))
}

/// Pointwise coequalizer of `phi, psi : F1 -> F0`, with its quotient.
pub fn coequalizer_module(f0: &Module, f1: &Module, phi: &VNat, psi: &VNat) -> Result<(Module, VNat)> {
    if !f0.same_legs(f1) {
        return Err(KanError::SourceMismatch("coequalizer of modules on different legs".into()));
    }
    let v = f0.ctx;
    let cocones = (0..f0.tuple_count())
        .map(|i| v.coequalizer(&phi.components[i], &psi.components[i]))
        .collect::<Result<Vec<_>>>()?;
    let out = Module::new(
        f0.legs.clone(),
        |t| cocones[f0.index(t)].apex,
        |t, u| {
            let (i, j) = (f0.index(t), f0.index(u));
            let idh = v.identity(f0.hom_block(t, u));
            let q = cocones[i].quotient();
            let s = cocones[i].section().expect("coequalizer section");
            v.factor_through_split_epi(
                &v.compose(cocones[j].quotient(), f0.action_at(i, j))?,
                &v.tensor(&idh, q)?,
                &v.tensor(&idh, s)?,
            )
        },
    )?;
    let out = relabel_like(out, f0)?;
    let quotient = VNat { components: cocones.iter().map(|c| c.quotient().clone()).collect() };
    Ok((out, quotient))
}

/// A natural transformation, one component per object tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VNat {
    pub components: Vec<VMap>,
}

impl VNat {
    pub fn identity(f: &Module) -> VNat {
        VNat { components: f.values.iter().map(|x| f.ctx.identity(*x)).collect() }
    }

    pub fn component(&self, i: usize) -> &VMap {
        &self.components[i]
    }

    /// `β . α`.
    pub fn then(&self, ctx: BaseCtx, beta: &VNat) -> Result<VNat> {
        Ok(VNat {
            components: self
                .components
                .iter()
                .zip(&beta.components)
                .map(|(a, b)| ctx.compose(b, a))
                .collect::<Result<_>>()?,
        })
    }

    /// Components of `[N, 1] α`.
    pub fn restrict_along(&self, n: &VFunctor) -> VNat {
        VNat { components: n.obj_map().iter().map(|c| self.components[*c].clone()).collect() }
    }
}

pub fn check_natural(f: &Module, g: &Module, alpha: &VNat) -> Result<LawReport> {
    let v = f.ctx;
    let mut rep = LawReport::new("natural transformation");
    if !f.same_legs(g) || alpha.components.len() != f.tuple_count() {
        return Err(KanError::SourceMismatch("transformation between incompatible modules".into()));
    }
    for (i, a) in alpha.components.iter().enumerate() {
        if a.dom() != f.value_at(i) || a.cod() != g.value_at(i) {
            return Err(KanError::Boundary(format!("component {i} has the wrong type")));
        }
    }
    for i in 0..f.tuple_count() {
        for j in 0..f.tuple_count() {
            let (t, u) = (f.tuple(i), f.tuple(j));
            let lhs = v.compose(&alpha.components[j], f.action_at(i, j))?;
            let rhs = v.compose(
                g.action_at(i, j),
                &v.tensor(&v.identity(f.hom_block(&t, &u)), &alpha.components[i])?,
            )?;
            rep.expect_eq("naturality", || format!("{t:?}->{u:?}"), lhs, rhs);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encat::category::VFunctor;
    use crate::encat::examples::{group_algebra, group_algebra_map, indiscrete, terminal, z2_into_z4};
    use crate::groups::FiniteGroup;
    use crate::vbase::Field;

    fn qz(n: usize) -> Arc<VCat> {
        Arc::new(group_algebra(&FiniteGroup::cyclic(n), Field::Rationals).unwrap())
    }

    #[test]
    fn representable_of_group_algebra() {
        let a = qz(2);
        let r = representable(&a, 0).unwrap();
        assert_eq!(r.val(0), VObj(2));
        assert!(check_action(&r).unwrap().is_lawful());
        assert_eq!(r.act(0, 0), a.comp(0, 0, 0));
    }

    #[test]
    fn representables_on_indiscrete_are_lines() {
        let a = Arc::new(indiscrete(2, Field::Rationals).unwrap());
        let r = representable(&a, 1).unwrap();
        assert!(r.values().iter().all(|x| *x == VObj(1)));
        assert!(check_action(&r).unwrap().is_lawful());
        let p = corepresentable(&a, 0).unwrap();
        assert!(check_action(&p).unwrap().is_lawful());
    }

    #[test]
    fn terminal_representable_is_constant_unit() {
        let a = Arc::new(terminal(BaseCtx::FinSet));
        let r = representable(&a, 0).unwrap();
        assert_eq!(r.val(0), VObj(1));
    }

    #[test]
    fn hom_bimodule_on_s3_is_lawful() {
        let a = Arc::new(group_algebra(&FiniteGroup::symmetric3(), Field::Rationals).unwrap());
        let s = hom_bimodule(&a).unwrap();
        assert!(check_action(&s).unwrap().is_lawful());
        let p = corepresentable(&a, 0).unwrap();
        assert!(check_action(&p).unwrap().is_lawful());
        let e = ext_tensor(&p, &representable(&a, 0).unwrap()).unwrap();
        assert_eq!(e.shape(), Shape::Bimodule);
        assert!(check_action(&e).unwrap().is_lawful());
    }

    #[test]
    fn restriction_along_identity_is_identity() {
        let a = qz(2);
        let g = representable(&a, 0).unwrap();
        let id = VFunctor::identity(a.clone());
        assert_eq!(restrict_along(&id, &g).unwrap(), g);
    }

    #[test]
    fn restriction_of_regular_z4() {
        let (h, g, img) = z2_into_z4();
        let a = Arc::new(group_algebra(&h, Field::Rationals).unwrap());
        let c = Arc::new(group_algebra(&g, Field::Rationals).unwrap());
        let n = group_algebra_map(a, c.clone(), &h, &g, &img).unwrap();
        let r = restrict_along(&n, &representable(&c, 0).unwrap()).unwrap();
        assert_eq!(r.val(0), VObj(4));
        assert!(check_action(&r).unwrap().is_lawful());
        // t in Z/2 acts as +2 on Z/4
        let v = r.ctx();
        let t_act = v.compose(r.act(0, 0), &v.tensor(&v.point(VObj(2), 1), &v.identity(VObj(4))).unwrap()).unwrap();
        assert_eq!(t_act, v.index_map(VObj(4), VObj(4), |i| (i + 2) % 4));
    }

    #[test]
    fn permute_legs_twice_is_identity() {
        let a = Arc::new(indiscrete(2, Field::Rationals).unwrap());
        let s = hom_bimodule(&a).unwrap();
        let p = permute_legs(&s, &[1, 0]).unwrap();
        assert!(check_action(&p).unwrap().is_lawful());
        let back = permute_legs(&p, &[1, 0]).unwrap();
        assert_eq!(back.values(), s.values());
        assert_eq!(back.action_at(1, 2), s.action_at(1, 2));
    }

    #[test]
    fn fixing_a_leg_of_the_hom_bimodule_gives_representables() {
        let a = qz(3);
        let s = hom_bimodule(&a).unwrap();
        let fixed = fix_leg(&s, 0, 0).unwrap();
        assert_eq!(fixed.action_at(0, 0), representable(&a, 0).unwrap().act(0, 0));
    }

    #[test]
    fn hom_module_is_lawful() {
        let a = qz(2);
        let r = representable(&a, 0).unwrap();
        let h = hom_module(&r, &r).unwrap();
        assert!(check_action(&h).unwrap().is_lawful());
    }

    #[test]
    fn product_and_tensor_by_are_lawful() {
        let a = Arc::new(indiscrete(2, Field::Rationals).unwrap());
        let r0 = representable(&a, 0).unwrap();
        let r1 = representable(&a, 1).unwrap();
        let (p, proj) = product_modules(&[r0.clone(), r1]).unwrap();
        assert!(check_action(&p).unwrap().is_lawful());
        assert!(check_natural(&p, &r0, &proj[0]).unwrap().is_lawful());
        let t = tensor_by(VObj(2), &r0).unwrap();
        assert!(check_action(&t).unwrap().is_lawful());
    }
}
