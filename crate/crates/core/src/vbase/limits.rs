//! Finite limits and colimits in both bases, each with a factorizer that
//! re-verifies the mediating equations before returning.

use super::map::{decode, encode, BaseCtx, VMap, VObj, MAX_SIZE};
use super::matrix::{cokernel, kernel, solve, Mat};
use crate::error::{KanError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum ColimitKind {
    Coproduct,
    /// `section` is a right inverse of the quotient leg.
    Coequalizer { f: VMap, g: VMap, section: VMap },
    Pushout { f: VMap, g: VMap, coproduct_apex: VObj, section: VMap },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColimitCocone {
    pub apex: VObj,
    pub legs: Vec<VMap>,
    kind: ColimitKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum LimitKind {
    Product { factors: Vec<VObj> },
    Equalizer { f: VMap, g: VMap },
    Pullback { f: VMap, g: VMap },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitCone {
    pub apex: VObj,
    pub legs: Vec<VMap>,
    kind: LimitKind,
}

fn parallel(f: &VMap, g: &VMap) -> Result<()> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(KanError::Boundary(format!(
            "not a parallel pair: {} -> {} and {} -> {}",
            f.dom(),
            f.cod(),
            g.dom(),
            g.cod()
        )));
    }
    Ok(())
}

impl ColimitCocone {
    /// The quotient leg of a coequalizer (the only leg).
    pub fn quotient(&self) -> &VMap {
        &self.legs[0]
    }

    /// Right inverse of the quotient leg, when this is a coequalizer.
    pub fn section(&self) -> Option<&VMap> {
        match &self.kind {
            ColimitKind::Coequalizer { section, .. } => Some(section),
            _ => None,
        }
    }

    /// The unique mediating map for a compatible cocone `candidate`.
    pub fn factor(&self, ctx: BaseCtx, candidate: &[VMap]) -> Result<VMap> {
        match &self.kind {
            ColimitKind::Coproduct => {
                if candidate.len() != self.legs.len() {
                    return Err(KanError::IncompatibleCandidate("wrong number of legs".into()));
                }
                ctx.copair(candidate)
            }
            ColimitKind::Coequalizer { f, g, section } => {
                let [h] = candidate else {
                    return Err(KanError::IncompatibleCandidate("expected one leg".into()));
                };
                if ctx.compose(h, f)? != ctx.compose(h, g)? {
                    return Err(KanError::IncompatibleCandidate("h.f != h.g".into()));
                }
                let med = ctx.compose(h, section)?;
                if &ctx.compose(&med, &self.legs[0])? != h {
                    return Err(KanError::IncompatibleCandidate("mediating equation fails".into()));
                }
                Ok(med)
            }
            ColimitKind::Pushout { f, g, coproduct_apex, section } => {
                let [h1, h2] = candidate else {
                    return Err(KanError::IncompatibleCandidate("expected two legs".into()));
                };
                if ctx.compose(h1, f)? != ctx.compose(h2, g)? {
                    return Err(KanError::IncompatibleCandidate("h1.f != h2.g".into()));
                }
                let both = ctx.copair(&[h1.clone(), h2.clone()])?;
                debug_assert_eq!(both.dom(), *coproduct_apex);
                let med = ctx.compose(&both, section)?;
                for (leg, h) in self.legs.iter().zip([h1, h2]) {
                    if &ctx.compose(&med, leg)? != h {
                        return Err(KanError::IncompatibleCandidate(
                            "mediating equation fails".into(),
                        ));
                    }
                }
                Ok(med)
            }
        }
    }
}

impl LimitCone {
    pub fn inclusion(&self) -> &VMap {
        &self.legs[0]
    }

    pub fn factor(&self, ctx: BaseCtx, candidate: &[VMap]) -> Result<VMap> {
        match &self.kind {
            LimitKind::Product { factors } => {
                if candidate.len() != factors.len() {
                    return Err(KanError::IncompatibleCandidate("wrong number of legs".into()));
                }
                ctx.pair(candidate)
            }
            LimitKind::Equalizer { f, g } => {
                let [h] = candidate else {
                    return Err(KanError::IncompatibleCandidate("expected one leg".into()));
                };
                if ctx.compose(f, h)? != ctx.compose(g, h)? {
                    return Err(KanError::IncompatibleCandidate("f.h != g.h".into()));
                }
                ctx.lift_through_mono(&self.legs[0], h)
            }
            LimitKind::Pullback { f, g } => {
                let [h1, h2] = candidate else {
                    return Err(KanError::IncompatibleCandidate("expected two legs".into()));
                };
                if ctx.compose(f, h1)? != ctx.compose(g, h2)? {
                    return Err(KanError::IncompatibleCandidate("f.h1 != g.h2".into()));
                }
                let both = ctx.pair(&[h1.clone(), h2.clone()])?;
                let incl = ctx.pair(&self.legs)?;
                ctx.lift_through_mono(&incl, &both)
            }
        }
    }
}

impl BaseCtx {
    pub fn coproduct(&self, objs: &[VObj]) -> ColimitCocone {
        let total: usize = objs.iter().map(|o| o.0).sum();
        let mut offset = 0;
        let legs = objs
            .iter()
            .map(|o| {
                let off = offset;
                offset += o.0;
                self.index_map(*o, VObj(total), move |i| i + off)
            })
            .collect();
        ColimitCocone { apex: VObj(total), legs, kind: ColimitKind::Coproduct }
    }

    /// `[h_0, ..., h_n] : ⊕ X_i -> Y`.
    pub fn copair(&self, maps: &[VMap]) -> Result<VMap> {
        for m in maps {
            self.ensure(m)?;
        }
        let cod = match maps.first() {
            Some(m) => m.cod(),
            None => {
                return Err(KanError::Boundary(
                    "copair of no maps needs an explicit codomain".into(),
                ))
            }
        };
        self.copair_into(cod, maps)
    }

    pub fn copair_into(&self, cod: VObj, maps: &[VMap]) -> Result<VMap> {
        if maps.iter().any(|m| m.cod() != cod) {
            return Err(KanError::Boundary("copair legs have different codomains".into()));
        }
        let dom = VObj(maps.iter().map(|m| m.dom().0).sum());
        match self {
            BaseCtx::FinSet => {
                let table = maps.iter().flat_map(|m| m.table().unwrap().iter().copied()).collect();
                VMap::from_table(dom, cod, table)
            }
            BaseCtx::FinVect(_) => {
                let parts: Vec<&Mat> = maps.iter().map(|m| m.matrix().unwrap()).collect();
                self.matrix_map(Mat::hstack(cod.0, &parts))
            }
        }
    }

    /// `H ⊗ (⊕ Y_i) -> ⊕ (H ⊗ Y_i)`.
    pub fn distribute(&self, h: VObj, ys: &[VObj]) -> VMap {
        let total: usize = ys.iter().map(|y| y.0).sum();
        let mut starts = Vec::with_capacity(ys.len());
        let (mut off, mut off2) = (0, 0);
        for y in ys {
            starts.push((off, off2, y.0));
            off += y.0;
            off2 += h.0 * y.0;
        }
        let block_of: Vec<usize> = ys.iter().enumerate().flat_map(|(i, y)| std::iter::repeat(i).take(y.0)).collect();
        self.index_map(VObj(h.0 * total), VObj(off2), |i| {
            let (hh, r) = (i / total, i % total);
            let (start, start2, len) = starts[block_of[r]];
            start2 + hh * len + (r - start)
        })
    }

    /// `⊕ f_i : ⊕ X_i -> ⊕ Y_i`.
    pub fn coproduct_map(&self, maps: &[VMap]) -> Result<VMap> {
        let target = self.coproduct(&maps.iter().map(|m| m.cod()).collect::<Vec<_>>());
        let legs: Vec<VMap> = maps
            .iter()
            .zip(&target.legs)
            .map(|(m, inj)| self.compose(inj, m))
            .collect::<Result<_>>()?;
        self.copair_into(target.apex, &legs)
    }

    pub fn product(&self, objs: &[VObj]) -> Result<LimitCone> {
        let radices: Vec<usize> = objs.iter().map(|o| o.0).collect();
        let apex = match self {
            BaseCtx::FinSet => {
                let mut acc: usize = 1;
                for r in &radices {
                    acc = acc
                        .checked_mul(*r)
                        .filter(|v| *v <= MAX_SIZE)
                        .ok_or_else(|| KanError::TooLarge("product".into()))?;
                }
                VObj(acc)
            }
            BaseCtx::FinVect(_) => VObj(radices.iter().sum()),
        };
        let legs = match self {
            BaseCtx::FinSet => (0..objs.len())
                .map(|k| {
                    let radices = radices.clone();
                    self.index_map(apex, objs[k], move |i| decode(i, &radices)[k])
                })
                .collect(),
            BaseCtx::FinVect(_) => {
                let mut offset = 0;
                objs.iter()
                    .map(|o| {
                        let off = offset;
                        offset += o.0;
                        let cols = (0..apex.0)
                            .map(|j| {
                                if j >= off && j < off + o.0 {
                                    vec![(j - off, num_rational::BigRational::from_integer(1.into()))]
                                } else {
                                    Vec::new()
                                }
                            })
                            .collect();
                        self.matrix_map(Mat::from_columns(o.0, cols)).expect("canonical")
                    })
                    .collect()
            }
        };
        Ok(LimitCone { apex, legs, kind: LimitKind::Product { factors: objs.to_vec() } })
    }

    /// `<h_0, ..., h_n> : W -> ∏ Y_i`; all legs share the domain `w`.
    pub fn pair_from(&self, w: VObj, maps: &[VMap]) -> Result<VMap> {
        for m in maps {
            self.ensure(m)?;
            if m.dom() != w {
                return Err(KanError::Boundary("pair legs have different domains".into()));
            }
        }
        let objs: Vec<VObj> = maps.iter().map(|m| m.cod()).collect();
        let apex = self.product(&objs)?.apex;
        match self {
            BaseCtx::FinSet => {
                let radices: Vec<usize> = objs.iter().map(|o| o.0).collect();
                Ok(self.index_map(w, apex, |i| {
                    let digits: Vec<usize> = maps.iter().map(|m| m.apply(i)).collect();
                    encode(&digits, &radices)
                }))
            }
            BaseCtx::FinVect(_) => {
                let parts: Vec<&Mat> = maps.iter().map(|m| m.matrix().unwrap()).collect();
                self.matrix_map(Mat::vstack(w.0, &parts))
            }
        }
    }

    pub fn pair(&self, maps: &[VMap]) -> Result<VMap> {
        let w = maps
            .first()
            .map(|m| m.dom())
            .ok_or_else(|| KanError::Boundary("pair of no maps needs an explicit domain".into()))?;
        self.pair_from(w, maps)
    }

    /// `∏ f_i : ∏ X_i -> ∏ Y_i`.
    pub fn product_map(&self, maps: &[VMap]) -> Result<VMap> {
        let source = self.product(&maps.iter().map(|m| m.dom()).collect::<Vec<_>>())?;
        let legs: Vec<VMap> = maps
            .iter()
            .zip(&source.legs)
            .map(|(m, p)| self.compose(m, p))
            .collect::<Result<_>>()?;
        self.pair_from(source.apex, &legs)
    }

    pub fn coequalizer(&self, f: &VMap, g: &VMap) -> Result<ColimitCocone> {
        self.ensure(f)?;
        self.ensure(g)?;
        parallel(f, g)?;
        let y = f.cod();
        let (q, section) = match self {
            BaseCtx::FinSet => {
                let mut parent: Vec<usize> = (0..y.0).collect();
                fn find(parent: &mut [usize], x: usize) -> usize {
                    let mut r = x;
                    while parent[r] != r {
                        r = parent[r];
                    }
                    let mut c = x;
                    while parent[c] != r {
                        let next = parent[c];
                        parent[c] = r;
                        c = next;
                    }
                    r
                }
                for x in 0..f.dom().0 {
                    let (a, b) = (find(&mut parent, f.apply(x)), find(&mut parent, g.apply(x)));
                    // the smaller root wins so roots are class minima
                    if a < b {
                        parent[b] = a;
                    } else if b < a {
                        parent[a] = b;
                    }
                }
                let mut class_of = vec![usize::MAX; y.0];
                let mut reps = Vec::new();
                for v in 0..y.0 {
                    let r = find(&mut parent, v);
                    if r == v {
                        class_of[v] = reps.len();
                        reps.push(v);
                    }
                }
                for v in 0..y.0 {
                    let r = find(&mut parent, v);
                    class_of[v] = class_of[r];
                }
                let apex = VObj(reps.len());
                let q = VMap::from_table(y, apex, class_of)?;
                let s = VMap::from_table(apex, y, reps)?;
                (q, s)
            }
            BaseCtx::FinVect(field) => {
                let d = Mat::sub(*field, f.matrix().unwrap(), g.matrix().unwrap());
                let (q, s) = cokernel(*field, &d);
                (self.matrix_map(q)?, self.matrix_map(s)?)
            }
        };
        Ok(ColimitCocone {
            apex: q.cod(),
            legs: vec![q],
            kind: ColimitKind::Coequalizer { f: f.clone(), g: g.clone(), section },
        })
    }

    /// Pushout of `f : Z -> X` and `g : Z -> Y`; legs `X -> P`, `Y -> P`.
    pub fn pushout(&self, f: &VMap, g: &VMap) -> Result<ColimitCocone> {
        if f.dom() != g.dom() {
            return Err(KanError::Boundary("pushout needs a common domain".into()));
        }
        let sum = self.coproduct(&[f.cod(), g.cod()]);
        let a = self.compose(&sum.legs[0], f)?;
        let b = self.compose(&sum.legs[1], g)?;
        let coeq = self.coequalizer(&a, &b)?;
        let q = coeq.quotient();
        let legs = vec![self.compose(q, &sum.legs[0])?, self.compose(q, &sum.legs[1])?];
        Ok(ColimitCocone {
            apex: coeq.apex,
            legs,
            kind: ColimitKind::Pushout {
                f: f.clone(),
                g: g.clone(),
                coproduct_apex: sum.apex,
                section: coeq.section().unwrap().clone(),
            },
        })
    }

    pub fn equalizer(&self, f: &VMap, g: &VMap) -> Result<LimitCone> {
        self.ensure(f)?;
        self.ensure(g)?;
        parallel(f, g)?;
        let incl = match self {
            BaseCtx::FinSet => {
                let keep: Vec<usize> = (0..f.dom().0).filter(|x| f.apply(*x) == g.apply(*x)).collect();
                VMap::from_table(VObj(keep.len()), f.dom(), keep)?
            }
            BaseCtx::FinVect(field) => {
                let d = Mat::sub(*field, f.matrix().unwrap(), g.matrix().unwrap());
                self.matrix_map(kernel(*field, &d))?
            }
        };
        Ok(LimitCone {
            apex: incl.dom(),
            legs: vec![incl],
            kind: LimitKind::Equalizer { f: f.clone(), g: g.clone() },
        })
    }

    /// Pullback of `f : X -> Z` and `g : Y -> Z`; legs `P -> X`, `P -> Y`.
    pub fn pullback(&self, f: &VMap, g: &VMap) -> Result<LimitCone> {
        if f.cod() != g.cod() {
            return Err(KanError::Boundary("pullback needs a common codomain".into()));
        }
        let prod = self.product(&[f.dom(), g.dom()])?;
        let a = self.compose(f, &prod.legs[0])?;
        let b = self.compose(g, &prod.legs[1])?;
        let eq = self.equalizer(&a, &b)?;
        let legs = vec![
            self.compose(&prod.legs[0], eq.inclusion())?,
            self.compose(&prod.legs[1], eq.inclusion())?,
        ];
        Ok(LimitCone {
            apex: eq.apex,
            legs,
            kind: LimitKind::Pullback { f: f.clone(), g: g.clone() },
        })
    }

    /// Given a mono `m : A -> X` and `h : W -> X` landing in its image,
    /// the unique `k` with `m . k = h`.
    pub fn lift_through_mono(&self, m: &VMap, h: &VMap) -> Result<VMap> {
        if m.cod() != h.cod() {
            return Err(KanError::Boundary("lift: codomains differ".into()));
        }
        let k = match self {
            BaseCtx::FinSet => {
                let mut pre = vec![None; m.cod().0];
                for a in 0..m.dom().0 {
                    pre[m.apply(a)].get_or_insert(a);
                }
                let table = (0..h.dom().0)
                    .map(|w| {
                        pre[h.apply(w)].ok_or_else(|| {
                            KanError::IncompatibleCandidate("value outside the image".into())
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                VMap::from_table(h.dom(), m.dom(), table)?
            }
            BaseCtx::FinVect(field) => {
                let x = solve(*field, m.matrix().unwrap(), h.matrix().unwrap()).ok_or_else(|| {
                    KanError::IncompatibleCandidate("value outside the image".into())
                })?;
                self.matrix_map(x)?
            }
        };
        if &self.compose(m, &k)? != h {
            return Err(KanError::IncompatibleCandidate("lift does not factor".into()));
        }
        Ok(k)
    }

    /// Factor `h` through a split epi `e` with chosen section `s`: returns
    /// `h . s` after verifying `(h . s) . e = h`.
    pub fn factor_through_split_epi(&self, h: &VMap, e: &VMap, s: &VMap) -> Result<VMap> {
        let k = self.compose(h, s)?;
        if self.compose(&k, e)? != *h {
            return Err(KanError::FactorizationFailure(
                "map does not respect the quotient".into(),
            ));
        }
        Ok(k)
    }
}

/// Realizes every induced map: factors a candidate through a (co)limit.
pub fn factor_universal(ctx: BaseCtx, universal: Universal<'_>, candidate: &[VMap]) -> Result<VMap> {
    match universal {
        Universal::Colimit(c) => c.factor(ctx, candidate),
        Universal::Limit(l) => l.factor(ctx, candidate),
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Universal<'a> {
    Colimit(&'a ColimitCocone),
    Limit(&'a LimitCone),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbase::field::Field;
    use num_rational::BigRational;

    fn q() -> BaseCtx {
        BaseCtx::FinVect(Field::Rationals)
    }

    fn qmat(rows: &[&[i64]]) -> VMap {
        let e: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|v| BigRational::from_integer((*v).into())).collect())
            .collect();
        q().matrix_map(Mat::from_dense(rows.len(), rows[0].len(), &e)).unwrap()
    }

    #[test]
    fn coequalizer_collapses_chain() {
        let v = BaseCtx::FinSet;
        let f = VMap::from_table(VObj(2), VObj(3), vec![0, 1]).unwrap();
        let g = VMap::from_table(VObj(2), VObj(3), vec![1, 2]).unwrap();
        let c = v.coequalizer(&f, &g).unwrap();
        assert_eq!(c.apex, VObj(1));
        assert_eq!(c.quotient().table().unwrap(), &[0, 0, 0]);
    }

    #[test]
    fn coequalizer_of_equal_pair_is_identity() {
        for v in [BaseCtx::FinSet, q()] {
            let f = v.index_map(VObj(2), VObj(3), |i| 2 - i);
            let c = v.coequalizer(&f, &f).unwrap();
            assert_eq!(c.apex, VObj(3));
            assert_eq!(c.quotient(), &v.identity(VObj(3)));
        }
    }

    #[test]
    fn cokernel_dimension() {
        let c = q().coequalizer(&qmat(&[&[1, 0], &[0, 1]]), &qmat(&[&[1, 0], &[0, 0]])).unwrap();
        assert_eq!(c.apex, VObj(1));
    }

    #[test]
    fn equalizer_kernel() {
        let e = q().equalizer(&qmat(&[&[1, 0], &[0, 1]]), &qmat(&[&[1, 0], &[0, 0]])).unwrap();
        assert_eq!(e.apex, VObj(1));
        assert_eq!(e.inclusion(), &qmat(&[&[1], &[0]]));
        let same = q().equalizer(&qmat(&[&[1, 2]]), &qmat(&[&[1, 2]])).unwrap();
        assert_eq!(same.inclusion(), &q().identity(VObj(2)));
    }

    #[test]
    fn pullback_of_surjections_counts_pairs() {
        let v = BaseCtx::FinSet;
        let f = VMap::from_table(VObj(3), VObj(2), vec![0, 0, 1]).unwrap();
        let g = VMap::from_table(VObj(3), VObj(2), vec![1, 0, 1]).unwrap();
        let p = v.pullback(&f, &g).unwrap();
        let brute = (0..3).flat_map(|x| (0..3).map(move |y| (x, y))).filter(|(x, y)| f.apply(*x) == g.apply(*y)).count();
        assert_eq!(p.apex.0, brute);
    }

    #[test]
    fn factorizer_rejects_incompatible() {
        let v = BaseCtx::FinSet;
        let f = VMap::from_table(VObj(1), VObj(2), vec![0]).unwrap();
        let g = VMap::from_table(VObj(1), VObj(2), vec![1]).unwrap();
        let c = v.coequalizer(&f, &g).unwrap();
        let good = VMap::from_table(VObj(2), VObj(1), vec![0, 0]).unwrap();
        let med = factor_universal(v, Universal::Colimit(&c), &[good.clone()]).unwrap();
        assert_eq!(v.compose(&med, c.quotient()).unwrap(), good);
        let bad = VMap::from_table(VObj(2), VObj(2), vec![0, 1]).unwrap();
        assert!(matches!(
            factor_universal(v, Universal::Colimit(&c), &[bad]),
            Err(KanError::IncompatibleCandidate(_))
        ));
    }

    #[test]
    fn factor_through_equalizer() {
        let v = BaseCtx::FinSet;
        let f = VMap::from_table(VObj(3), VObj(2), vec![0, 1, 1]).unwrap();
        let g = VMap::from_table(VObj(3), VObj(2), vec![0, 0, 1]).unwrap();
        let e = v.equalizer(&f, &g).unwrap();
        let h = VMap::from_table(VObj(2), VObj(3), vec![2, 0]).unwrap();
        let k = e.factor(v, &[h.clone()]).unwrap();
        assert_eq!(v.compose(e.inclusion(), &k).unwrap(), h);
    }
}
