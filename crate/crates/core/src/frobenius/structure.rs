use std::sync::Arc;

use crate::encat::{corepresentable, ext_tensor, Copresheaf, LawReport, Shape, VCat};
use crate::error::{KanError, Result};
use crate::kancoend::{coyoneda_expand, end, EndMode, EndResult};
use crate::vbase::VMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NaturalityLevel {
    /// `δ` natural in `a` and `b` only.
    Frobenius,
    /// `δ` natural in `a`, `b`, `c` and `ε` natural.
    FullOpcat,
}

impl std::fmt::Display for NaturalityLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NaturalityLevel::Frobenius => "Frobenius",
            NaturalityLevel::FullOpcat => "full opcategory",
        })
    }
}

/// `"none"` or the level.
pub fn level_label(level: Option<NaturalityLevel>) -> String {
    level.map_or_else(|| "none".to_string(), |l| l.to_string())
}

/// Comultiplication `δ_{a,b,c} : A(a,b) -> A(c,b) ⊗ A(a,c)` and counit
/// `ε_a : A(a,a) -> I` on a V-category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpcatStructure {
    base: Arc<VCat>,
    delta: Vec<VMap>,
    epsilon: Vec<VMap>,
    /// Declared level; certify it with `check_delta_naturality`.
    pub level: NaturalityLevel,
}

impl OpcatStructure {
    pub fn new(
        base: Arc<VCat>,
        mut delta: impl FnMut(usize, usize, usize) -> Result<VMap>,
        mut epsilon: impl FnMut(usize) -> Result<VMap>,
        level: NaturalityLevel,
    ) -> Result<OpcatStructure> {
        let n = base.n();
        let v = base.ctx();
        let mut ds = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let d = delta(a, b, c)?;
                    let cod = v.tensor_obj(base.hom(c, b), base.hom(a, c));
                    if d.ctx() != v || d.dom() != base.hom(a, b) || d.cod() != cod {
                        return Err(KanError::Boundary(format!("δ at ({a},{b},{c}) has the wrong type")));
                    }
                    ds.push(d);
                }
            }
        }
        let es = (0..n)
            .map(|a| {
                let e = epsilon(a)?;
                if e.ctx() != v || e.dom() != base.hom(a, a) || e.cod() != v.unit_obj() {
                    return Err(KanError::Boundary(format!("ε at {a} has the wrong type")));
                }
                Ok(e)
            })
            .collect::<Result<_>>()?;
        Ok(OpcatStructure { base, delta: ds, epsilon: es, level })
    }

    pub fn base(&self) -> &Arc<VCat> {
        &self.base
    }

    pub fn delta(&self, a: usize, b: usize, c: usize) -> &VMap {
        let n = self.base.n();
        &self.delta[(a * n + b) * n + c]
    }

    pub fn epsilon(&self, a: usize) -> &VMap {
        &self.epsilon[a]
    }

    /// Replace one component of `δ`.
    pub fn with_delta(mut self, a: usize, b: usize, c: usize, d: VMap) -> Result<OpcatStructure> {
        let n = self.base.n();
        let old = &self.delta[(a * n + b) * n + c];
        if d.dom() != old.dom() || d.cod() != old.cod() {
            return Err(KanError::Boundary("replacement δ has the wrong type".into()));
        }
        self.delta[(a * n + b) * n + c] = d;
        Ok(self)
    }

    pub fn with_epsilon(mut self, a: usize, e: VMap) -> Result<OpcatStructure> {
        if e.dom() != self.epsilon[a].dom() || e.cod() != self.epsilon[a].cod() {
            return Err(KanError::Boundary("replacement ε has the wrong type".into()));
        }
        self.epsilon[a] = e;
        Ok(self)
    }

    /// The opposite structure on `A^op`: `δ^op_{a,b,c} = σ ∘ δ_{b,a,c}`.
    pub fn opposite(&self) -> Result<OpcatStructure> {
        let v = self.base.ctx();
        let op = Arc::new(self.base.opposite());
        OpcatStructure::new(
            op,
            |a, b, c| {
                // A(b,a) -> A(c,a) ⊗ A(b,c), swapped to A^op(c,b) ⊗ A^op(a,c)
                let d = self.delta(b, a, c);
                v.compose(&v.symmetry(self.base.hom(c, a), self.base.hom(b, c)), d)
            },
            |a| Ok(self.epsilon(a).clone()),
            self.level,
        )
    }
}

fn name(op: &OpcatStructure, xs: &[usize]) -> String {
    let names: Vec<&str> = xs.iter().map(|x| op.base.name(*x)).collect();
    format!("({})", names.join(","))
}

/// `unitor ∘ (ε_b ⊗ 1) ∘ δ_{a,b,b} = 1` on every `A(a,b)`.
pub fn check_counit(op: &OpcatStructure) -> Result<LawReport> {
    let a_cat = &op.base;
    let v = a_cat.ctx();
    let mut rep = LawReport::new("counit");
    for a in 0..a_cat.n() {
        for b in 0..a_cat.n() {
            let h = a_cat.hom(a, b);
            let lhs = v.chain(&[op.delta(a, b, b), &v.tensor(op.epsilon(b), &v.identity(h))?, &v.unitor(h)])?;
            rep.expect_eq("counit", || name(op, &[a, b]), lhs, v.identity(h));
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct NaturalityReport {
    pub in_a: LawReport,
    pub in_b: LawReport,
    pub in_c: LawReport,
    pub epsilon: LawReport,
    /// Strongest level passed, if any.
    pub level: Option<NaturalityLevel>,
}

impl NaturalityReport {
    /// Whether the declared level of the structure is certified.
    pub fn certifies(&self, declared: NaturalityLevel) -> bool {
        self.level.is_some_and(|l| l >= declared)
    }
}

pub fn check_delta_naturality(op: &OpcatStructure) -> Result<NaturalityReport> {
    let c_ = &op.base;
    let v = c_.ctx();
    let n = c_.n();
    let h = |x: usize, y: usize| c_.hom(x, y);
    let mut in_a = LawReport::new("δ natural in a");
    let mut in_b = LawReport::new("δ natural in b");
    let mut in_c = LawReport::new("δ natural in c");
    let mut epsilon = LawReport::new("ε natural");
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for a2 in 0..n {
                    // A(a,b) ⊗ A(a2,a) -> A(c,b) ⊗ A(a2,c)
                    let lhs = v.compose(op.delta(a2, b, c), c_.comp(a2, a, b))?;
                    let rhs = v.compose(
                        &v.tensor(&v.identity(h(c, b)), c_.comp(a2, a, c))?,
                        &v.tensor(op.delta(a, b, c), &v.identity(h(a2, a)))?,
                    )?;
                    in_a.expect_eq("naturality", || name(op, &[a2, a, b, c]), lhs, rhs);
                }
                for b2 in 0..n {
                    // A(b,b2) ⊗ A(a,b) -> A(c,b2) ⊗ A(a,c)
                    let lhs = v.compose(op.delta(a, b2, c), c_.comp(a, b, b2))?;
                    let rhs = v.compose(
                        &v.tensor(c_.comp(c, b, b2), &v.identity(h(a, c)))?,
                        &v.tensor(&v.identity(h(b, b2)), op.delta(a, b, c))?,
                    )?;
                    in_b.expect_eq("naturality", || name(op, &[a, b, b2, c]), lhs, rhs);
                }
                for c2 in 0..n {
                    // A(a,b) ⊗ A(c,c2) -> A(c,b) ⊗ A(a,c2), through either end of the arrow c -> c2
                    let via_c2 = v.chain(&[
                        &v.tensor(op.delta(a, b, c2), &v.identity(h(c, c2)))?,
                        &v.permute(&[h(c2, b), h(a, c2), h(c, c2)], &[0, 2, 1]),
                        &v.tensor(c_.comp(c, c2, b), &v.identity(h(a, c2)))?,
                    ])?;
                    let via_c = v.chain(&[
                        &v.tensor(op.delta(a, b, c), &v.identity(h(c, c2)))?,
                        &v.permute(&[h(c, b), h(a, c), h(c, c2)], &[0, 2, 1]),
                        &v.tensor(&v.identity(h(c, b)), c_.comp(a, c, c2))?,
                    ])?;
                    in_c.expect_eq("extranaturality", || name(op, &[a, b, c, c2]), via_c2, via_c);
                }
            }
            // A(b,a) ⊗ A(a,b): ε_a(u∘w) = ε_b(w∘u)
            let lhs = v.compose(op.epsilon(a), c_.comp(a, b, a))?;
            let rhs = v.chain(&[&v.symmetry(h(b, a), h(a, b)), c_.comp(b, a, b), op.epsilon(b)])?;
            epsilon.expect_eq("extranaturality", || name(op, &[a, b]), lhs, rhs);
        }
    }
    let ab = in_a.is_lawful() && in_b.is_lawful();
    let level = match (ab, in_c.is_lawful() && epsilon.is_lawful()) {
        (true, true) => Some(NaturalityLevel::FullOpcat),
        (true, false) => Some(NaturalityLevel::Frobenius),
        _ => None,
    };
    Ok(NaturalityReport { in_a, in_b, in_c, epsilon, level })
}

/// `(δ_{c,b,d} ⊗ 1) ∘ δ_{a,b,c} = (1 ⊗ δ_{a,d,c}) ∘ δ_{a,b,d}`. Not required
/// by any of the constructions here.
pub fn check_coassociativity(op: &OpcatStructure) -> Result<LawReport> {
    let c_ = &op.base;
    let v = c_.ctx();
    let n = c_.n();
    let mut rep = LawReport::new("coassociativity");
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let lhs = v.compose(&v.tensor(op.delta(c, b, d), &v.identity(c_.hom(a, c)))?, op.delta(a, b, c))?;
                    let rhs = v.compose(&v.tensor(&v.identity(c_.hom(d, b)), op.delta(a, d, c))?, op.delta(a, b, d))?;
                    rep.expect_eq("coassociativity", || name(op, &[a, b, c, d]), lhs, rhs);
                }
            }
        }
    }
    Ok(rep)
}

/// `fb -> ∏_x A(x,b) ⊗ fx` built from `δ` through the coYoneda expansion.
#[derive(Clone, Debug)]
pub struct OpcatMap {
    /// Component `fb -> A(x,b) ⊗ fx` for each `x`.
    pub components: Vec<VMap>,
    /// The bare product `∏_x A(x,b) ⊗ fx`.
    pub product: EndResult,
    pub into_product: VMap,
    /// The end `∫_x A(x,b) ⊗ fx`.
    pub end: EndResult,
    /// Factorization through the end, present when the components form a wedge.
    pub into_end: Option<VMap>,
}

pub fn opcat_map(op: &OpcatStructure, f: &Copresheaf, b: usize) -> Result<OpcatMap> {
    if f.shape() != Shape::Copresheaf || **f.base() != *op.base {
        return Err(KanError::SourceMismatch("opcat map needs a copresheaf on the structure's category".into()));
    }
    let a_cat = f.base();
    let v = f.ctx();
    let expansion = coyoneda_expand(f, b)?;
    let components = (0..a_cat.n())
        .map(|x| {
            let cod = v.tensor_obj(a_cat.hom(x, b), f.val(x));
            // A(a,b) ⊗ fa -> A(x,b) ⊗ A(a,x) ⊗ fa -> A(x,b) ⊗ fx
            let cowedge: Vec<VMap> = (0..a_cat.n())
                .map(|a| {
                    v.compose(
                        &v.tensor(&v.identity(a_cat.hom(x, b)), f.act(a, x))?,
                        &v.tensor(op.delta(a, b, x), &v.identity(f.val(a)))?,
                    )
                })
                .collect::<Result<_>>()?;
            let out = expansion
                .coend
                .factor(v, cod, &cowedge)
                .map_err(|e| KanError::FactorizationFailure(format!("δ cowedge at x = {}: {e}", a_cat.name(x))))?;
            v.compose(&out, &expansion.to_coend)
        })
        .collect::<Result<Vec<VMap>>>()?;
    let integrand = ext_tensor(&corepresentable(a_cat, b)?, f)?;
    let product = end(&integrand, EndMode::Product)?;
    let into_product = product.factor(v, f.val(b), &components)?;
    let end_ = end(&integrand, EndMode::End)?;
    let into_end = end_.factor(v, f.val(b), &components).ok();
    Ok(OpcatMap { components, product, into_product, end: end_, into_end })
}

/// `unitor ∘ (ε_b ⊗ 1) ∘ proj_b ∘ opcat = 1_{fb}`.
pub fn coretraction_check(op: &OpcatStructure, f: &Copresheaf, b: usize, m: &OpcatMap) -> Result<LawReport> {
    let v = f.ctx();
    let mut rep = LawReport::new("coretraction");
    let left = left_inverse(op, f, b, m)?;
    let lhs = v.compose(&left, &m.into_product)?;
    rep.expect_eq("left inverse", || f.base().name(b).to_string(), lhs, v.identity(f.val(b)));
    Ok(rep)
}

/// `unitor ∘ (ε_b ⊗ 1) ∘ proj_b : ∏_x A(x,b) ⊗ fx -> fb`.
pub fn left_inverse(op: &OpcatStructure, f: &Copresheaf, b: usize, m: &OpcatMap) -> Result<VMap> {
    let v = f.ctx();
    v.chain(&[&m.product.wedge[b], &v.tensor(op.epsilon(b), &v.identity(f.val(b)))?, &v.unitor(f.val(b))])
}
