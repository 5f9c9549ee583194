use std::fmt;
use std::sync::Arc;

use crate::error::{KanError, Result};
use crate::vbase::{BaseCtx, VMap, VObj};

/// One failed law: the equation, where it failed, and both sides when
/// the law is an equation of maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub at: String,
    pub witness: Option<(VMap, VMap)>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some((lhs, rhs)) => write!(f, "{} at {}: {} != {}", self.law, self.at, lhs, rhs),
            None => write!(f, "{} at {}: {}", self.law, self.at, self.detail),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub subject: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub fn new(subject: impl Into<String>) -> LawReport {
        LawReport { subject: subject.into(), checked: 0, violations: Vec::new() }
    }

    pub fn is_lawful(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn expect_eq(&mut self, law: &str, at: impl FnOnce() -> String, lhs: VMap, rhs: VMap) {
        self.checked += 1;
        if lhs != rhs {
            self.violations.push(Violation { law: law.to_string(), at: at(), witness: Some((lhs, rhs)), detail: String::new() });
        }
    }

    pub fn expect(&mut self, law: &str, at: impl FnOnce() -> String, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(Violation { law: law.to_string(), at: at(), witness: None, detail: detail() });
        }
    }

    pub fn absorb(&mut self, other: LawReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(KanError::Unlawful(format!("{}: {}", self.subject, v))),
        }
    }
}

/// A finite V-category. Composition is `comp(a, c, b) : A(c,b) ⊗ A(a,c) -> A(a,b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VCat {
    ctx: BaseCtx,
    names: Vec<String>,
    hom: Vec<VObj>,
    comp: Vec<VMap>,
    ident: Vec<VMap>,
}

impl VCat {
    pub fn new(
        ctx: BaseCtx,
        names: Vec<String>,
        hom: impl Fn(usize, usize) -> VObj,
        comp: impl Fn(usize, usize, usize) -> Result<VMap>,
        ident: impl Fn(usize) -> Result<VMap>,
    ) -> Result<VCat> {
        let n = names.len();
        let hom: Vec<VObj> = (0..n * n).map(|i| hom(i / n, i % n)).collect();
        let mut comps = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for c in 0..n {
                for b in 0..n {
                    let m = comp(a, c, b)?;
                    ctx.ensure(&m)?;
                    let dom = ctx.tensor_obj(hom[c * n + b], hom[a * n + c]);
                    if m.dom() != dom || m.cod() != hom[a * n + b] {
                        return Err(KanError::Boundary(format!(
                            "composition at ({},{},{}) has the wrong type",
                            names[a], names[c], names[b]
                        )));
                    }
                    comps.push(m);
                }
            }
        }
        let ident = (0..n)
            .map(|a| {
                let m = ident(a)?;
                ctx.ensure(&m)?;
                if m.dom() != ctx.unit_obj() || m.cod() != hom[a * n + a] {
                    return Err(KanError::Boundary(format!("identity at {} has the wrong type", names[a])));
                }
                Ok(m)
            })
            .collect::<Result<_>>()?;
        Ok(VCat { ctx, names, hom, comp: comps, ident })
    }

    pub fn ctx(&self) -> BaseCtx {
        self.ctx
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn object(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| KanError::UnknownObject(name.to_string()))
    }

    pub fn hom(&self, a: usize, b: usize) -> VObj {
        self.hom[a * self.n() + b]
    }

    pub fn comp(&self, a: usize, c: usize, b: usize) -> &VMap {
        let n = self.n();
        &self.comp[(a * n + c) * n + b]
    }

    pub fn ident(&self, a: usize) -> &VMap {
        &self.ident[a]
    }

    /// `A^op`: homs swapped, composition conjugated by the symmetry.
    pub fn opposite(&self) -> VCat {
        let v = self.ctx;
        let n = self.n();
        let hom: Vec<VObj> = (0..n * n).map(|i| self.hom(i % n, i / n)).collect();
        let mut comp = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for c in 0..n {
                for b in 0..n {
                    let sym = v.symmetry(self.hom(b, c), self.hom(c, a));
                    comp.push(v.compose(self.comp(b, c, a), &sym).expect("typed"));
                }
            }
        }
        VCat { ctx: v, names: self.names.clone(), hom, comp, ident: self.ident.clone() }
    }

    pub fn check(&self) -> Result<LawReport> {
        check_category(self)
    }
}

pub fn check_category(a: &VCat) -> Result<LawReport> {
    let v = a.ctx;
    let n = a.n();
    let mut rep = LawReport::new("category");
    let name = |i: usize| a.name(i).to_string();
    for x in 0..n {
        for y in 0..n {
            let hxy = a.hom(x, y);
            let left = v.compose(a.comp(x, y, y), &v.tensor(a.ident(y), &v.identity(hxy))?)?;
            rep.expect_eq("left unit", || format!("({},{})", name(x), name(y)), left, v.identity(hxy));
            let right = v.compose(a.comp(x, x, y), &v.tensor(&v.identity(hxy), a.ident(x))?)?;
            rep.expect_eq("right unit", || format!("({},{})", name(x), name(y)), right, v.identity(hxy));
        }
    }
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    // A(y,z) ⊗ A(x,y) ⊗ A(w,x) -> A(w,z)
                    let lhs = v.compose(
                        a.comp(w, y, z),
                        &v.tensor(&v.identity(a.hom(y, z)), a.comp(w, x, y))?,
                    )?;
                    let rhs = v.compose(
                        a.comp(w, x, z),
                        &v.tensor(a.comp(x, y, z), &v.identity(a.hom(w, x)))?,
                    )?;
                    rep.expect_eq(
                        "associativity",
                        || format!("({},{},{},{})", name(w), name(x), name(y), name(z)),
                        lhs,
                        rhs,
                    );
                }
            }
        }
    }
    Ok(rep)
}

/// A V-functor; `map(a, b) : A(a,b) -> C(Na, Nb)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VFunctor {
    source: Arc<VCat>,
    target: Arc<VCat>,
    obj_map: Vec<usize>,
    maps: Vec<VMap>,
}

impl VFunctor {
    pub fn new(
        source: Arc<VCat>,
        target: Arc<VCat>,
        obj_map: Vec<usize>,
        map: impl Fn(usize, usize) -> Result<VMap>,
    ) -> Result<VFunctor> {
        let n = source.n();
        if obj_map.len() != n || obj_map.iter().any(|o| *o >= target.n()) {
            return Err(KanError::Boundary("object map does not fit the categories".into()));
        }
        if source.ctx() != target.ctx() {
            return Err(KanError::CtxMismatch("functor between different bases".into()));
        }
        let mut maps = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let m = map(a, b)?;
                source.ctx().ensure(&m)?;
                if m.dom() != source.hom(a, b) || m.cod() != target.hom(obj_map[a], obj_map[b]) {
                    return Err(KanError::Boundary(format!(
                        "functor component at ({},{}) has the wrong type",
                        source.name(a),
                        source.name(b)
                    )));
                }
                maps.push(m);
            }
        }
        Ok(VFunctor { source, target, obj_map, maps })
    }

    pub fn identity(a: Arc<VCat>) -> VFunctor {
        let v = a.ctx();
        let n = a.n();
        let maps = (0..n * n).map(|i| v.identity(a.hom(i / n, i % n))).collect();
        VFunctor { source: a.clone(), target: a, obj_map: (0..n).collect(), maps }
    }

    pub fn source(&self) -> &Arc<VCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VCat> {
        &self.target
    }

    pub fn obj(&self, a: usize) -> usize {
        self.obj_map[a]
    }

    pub fn obj_map(&self) -> &[usize] {
        &self.obj_map
    }

    pub fn map(&self, a: usize, b: usize) -> &VMap {
        &self.maps[a * self.source.n() + b]
    }

    /// `N^op : A^op -> C^op`.
    pub fn opposite(&self) -> VFunctor {
        let n = self.source.n();
        let maps = (0..n * n).map(|i| self.map(i % n, i / n).clone()).collect();
        VFunctor {
            source: Arc::new(self.source.opposite()),
            target: Arc::new(self.target.opposite()),
            obj_map: self.obj_map.clone(),
            maps,
        }
    }

    /// Rebase onto equal copies of the source/target (e.g. opposite of an opposite).
    pub fn with_categories(&self, source: Arc<VCat>, target: Arc<VCat>) -> Result<VFunctor> {
        if *source != *self.source || *target != *self.target {
            return Err(KanError::SourceMismatch("categories differ".into()));
        }
        Ok(VFunctor { source, target, obj_map: self.obj_map.clone(), maps: self.maps.clone() })
    }

    pub fn check(&self) -> Result<LawReport> {
        check_functor(self)
    }
}

pub fn opposite_functor(n: &VFunctor) -> VFunctor {
    n.opposite()
}

pub fn check_functor(f: &VFunctor) -> Result<LawReport> {
    let a = &f.source;
    let c = &f.target;
    let v = a.ctx();
    let mut rep = LawReport::new("functor");
    for x in 0..a.n() {
        let lhs = v.compose(f.map(x, x), a.ident(x))?;
        rep.expect_eq("identity", || a.name(x).to_string(), lhs, c.ident(f.obj(x)).clone());
    }
    for x in 0..a.n() {
        for y in 0..a.n() {
            for z in 0..a.n() {
                let lhs = v.compose(f.map(x, z), a.comp(x, y, z))?;
                let rhs = v.compose(
                    c.comp(f.obj(x), f.obj(y), f.obj(z)),
                    &v.tensor(f.map(y, z), f.map(x, y))?,
                )?;
                rep.expect_eq(
                    "composition",
                    || format!("({},{},{})", a.name(x), a.name(y), a.name(z)),
                    lhs,
                    rhs,
                );
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encat::examples::{group_algebra, indiscrete, terminal};
    use crate::groups::FiniteGroup;
    use crate::vbase::Field;

    #[test]
    fn group_algebra_is_lawful() {
        let a = group_algebra(&FiniteGroup::cyclic(2), Field::Rationals).unwrap();
        assert!(check_category(&a).unwrap().is_lawful());
    }

    #[test]
    fn perturbed_composition_reports_associativity() {
        let a = group_algebra(&FiniteGroup::cyclic(3), Field::Rationals).unwrap();
        let v = a.ctx();
        // send g1*g1 to g1 instead of g2
        let bad = VCat::new(
            v,
            a.names().to_vec(),
            |x, y| a.hom(x, y),
            |_, _, _| Ok(v.index_map(VObj(9), VObj(3), |i| if i == 4 { 1 } else { (i / 3 + i % 3) % 3 })),
            |x| Ok(a.ident(x).clone()),
        )
        .unwrap();
        let rep = check_category(&bad).unwrap();
        assert!(rep.violations.iter().any(|v| v.law == "associativity" && v.at == "(*,*,*,*)"));
    }

    #[test]
    fn identity_functor_is_lawful() {
        let a = Arc::new(indiscrete(3, Field::Rationals).unwrap());
        assert!(check_functor(&VFunctor::identity(a)).unwrap().is_lawful());
    }

    #[test]
    fn opposite_is_involutive_on_s3() {
        let a = group_algebra(&FiniteGroup::symmetric3(), Field::Rationals).unwrap();
        assert_eq!(a.opposite().opposite(), a);
        assert!(check_category(&a.opposite()).unwrap().is_lawful());
        assert_ne!(a.opposite(), a);
    }

    #[test]
    fn opposite_of_commutative_algebra_is_itself() {
        let a = group_algebra(&FiniteGroup::cyclic(2), Field::Rationals).unwrap();
        assert_eq!(a.opposite(), a);
        let i = indiscrete(2, Field::Rationals).unwrap();
        assert_eq!(i.opposite(), i);
        let t = terminal(BaseCtx::FinSet);
        assert_eq!(t.opposite(), t);
    }
}
