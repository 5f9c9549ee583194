use super::map::{BaseCtx, VMap};
use super::matrix::{rank, solve, Mat};
use crate::error::Result;

/// Exact classification of a map, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapClass {
    pub mono: bool,
    pub epi: bool,
    pub iso: bool,
    pub inverse: Option<VMap>,
    pub split_epi: bool,
    pub section: Option<VMap>,
    pub regular_mono: bool,
    /// Cokernel pair `(u, v)` whose equalizer is the map.
    pub witness: Option<(VMap, VMap)>,
}

impl MapClass {
    /// Re-check every witness by composition.
    pub fn verify(&self, ctx: BaseCtx, m: &VMap) -> Result<bool> {
        if let Some(inv) = &self.inverse {
            if ctx.compose(inv, m)? != ctx.identity(m.dom()) || ctx.compose(m, inv)? != ctx.identity(m.cod()) {
                return Ok(false);
            }
        }
        if let Some(s) = &self.section {
            if ctx.compose(m, s)? != ctx.identity(m.cod()) {
                return Ok(false);
            }
        }
        if let Some((u, v)) = &self.witness {
            if ctx.compose(u, m)? != ctx.compose(v, m)? {
                return Ok(false);
            }
            let eq = ctx.equalizer(u, v)?;
            if eq.apex != m.dom() {
                return Ok(false);
            }
            let k = ctx.lift_through_mono(eq.inclusion(), m)?;
            if !is_iso_shape(ctx, &k) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn injective(t: &[usize], cod: usize) -> bool {
    let mut seen = vec![false; cod];
    t.iter().all(|v| !std::mem::replace(&mut seen[*v], true))
}

fn surjective(t: &[usize], cod: usize) -> bool {
    let mut seen = vec![false; cod];
    for v in t {
        seen[*v] = true;
    }
    seen.into_iter().all(|b| b)
}

fn is_iso_shape(ctx: BaseCtx, m: &VMap) -> bool {
    let (d, c) = (m.dom().0, m.cod().0);
    match ctx {
        BaseCtx::FinSet => {
            let t = m.table().unwrap();
            d == c && injective(t, c)
        }
        BaseCtx::FinVect(f) => d == c && rank(f, m.matrix().unwrap()) == d,
    }
}

pub fn is_mono(ctx: BaseCtx, m: &VMap) -> bool {
    match ctx {
        BaseCtx::FinSet => injective(m.table().unwrap(), m.cod().0),
        BaseCtx::FinVect(f) => rank(f, m.matrix().unwrap()) == m.dom().0,
    }
}

pub fn is_epi(ctx: BaseCtx, m: &VMap) -> bool {
    match ctx {
        BaseCtx::FinSet => surjective(m.table().unwrap(), m.cod().0),
        BaseCtx::FinVect(f) => rank(f, m.matrix().unwrap()) == m.cod().0,
    }
}

pub fn is_iso(ctx: BaseCtx, m: &VMap) -> bool {
    is_iso_shape(ctx, m)
}

pub fn classify_map(ctx: BaseCtx, m: &VMap) -> Result<MapClass> {
    ctx.ensure(m)?;
    let mono = is_mono(ctx, m);
    let epi = is_epi(ctx, m);
    let section = if epi {
        Some(match ctx {
            BaseCtx::FinSet => {
                let mut pre = vec![usize::MAX; m.cod().0];
                for (x, y) in m.table().unwrap().iter().enumerate().rev() {
                    pre[*y] = x;
                }
                VMap::from_table(m.cod(), m.dom(), pre)?
            }
            BaseCtx::FinVect(f) => {
                let s = solve(f, m.matrix().unwrap(), &Mat::identity(m.cod().0))
                    .expect("full row rank has a right inverse");
                ctx.matrix_map(s)?
            }
        })
    } else {
        None
    };
    let iso = mono && epi;
    let inverse = if iso { section.clone() } else { None };
    let (regular_mono, witness) = regular_mono_witness(ctx, m)?;
    Ok(MapClass {
        mono,
        epi,
        iso,
        inverse,
        split_epi: epi,
        section,
        regular_mono,
        witness,
    })
}

/// Build the cokernel pair and test whether `m` is its equalizer.
fn regular_mono_witness(ctx: BaseCtx, m: &VMap) -> Result<(bool, Option<(VMap, VMap)>)> {
    let po = ctx.pushout(m, m)?;
    let (u, v) = (po.legs[0].clone(), po.legs[1].clone());
    let eq = ctx.equalizer(&u, &v)?;
    if eq.apex != m.dom() {
        return Ok((false, None));
    }
    let k = match ctx.lift_through_mono(eq.inclusion(), m) {
        Ok(k) => k,
        Err(_) => return Ok((false, None)),
    };
    if is_iso_shape(ctx, &k) {
        Ok((true, Some((u, v))))
    } else {
        Ok((false, None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbase::field::Field;
    use crate::vbase::map::VObj;
    use num_rational::BigRational;

    #[test]
    fn finset_injection_is_regular() {
        let v = BaseCtx::FinSet;
        let m = VMap::from_table(VObj(2), VObj(3), vec![0, 2]).unwrap();
        let c = classify_map(v, &m).unwrap();
        assert!(c.mono && c.regular_mono && !c.epi);
        assert!(c.verify(v, &m).unwrap());
    }

    #[test]
    fn finset_collapse_is_not_mono() {
        let v = BaseCtx::FinSet;
        let m = VMap::from_table(VObj(2), VObj(2), vec![0, 0]).unwrap();
        let c = classify_map(v, &m).unwrap();
        assert!(!c.mono && !c.regular_mono && c.witness.is_none());
    }

    #[test]
    fn column_vector_is_regular_mono() {
        let v = BaseCtx::FinVect(Field::Rationals);
        let one = BigRational::from_integer(1.into());
        let m = v.vector(VObj(2), vec![(0, one)]).unwrap();
        let c = classify_map(v, &m).unwrap();
        assert!(c.mono && c.regular_mono);
        assert!(c.verify(v, &m).unwrap());
    }

    #[test]
    fn iso_has_inverse() {
        let v = BaseCtx::FinSet;
        let m = VMap::from_table(VObj(3), VObj(3), vec![2, 0, 1]).unwrap();
        let c = classify_map(v, &m).unwrap();
        assert!(c.iso && c.split_epi && c.regular_mono);
        let inv = c.inverse.clone().unwrap();
        assert_eq!(v.compose(&inv, &m).unwrap(), v.identity(VObj(3)));
    }
}
