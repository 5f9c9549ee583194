use std::sync::Arc;

use crate::encat::examples::{discrete, group_algebra, indiscrete};
use crate::encat::VCat;
use crate::error::Result;
use crate::groups::FiniteGroup;
use crate::vbase::{BaseCtx, Field, Mat, VObj};

use super::structure::{NaturalityLevel, OpcatStructure};

/// `k[G]` with `δ(g) = Σ_h gh⁻¹ ⊗ h` and `ε(g) = [g = e]`.
pub fn group_algebra_frobenius(g: &FiniteGroup, field: Field) -> Result<(Arc<VCat>, OpcatStructure)> {
    let a = Arc::new(group_algebra(g, field)?);
    let v = a.ctx();
    let n = g.order();
    let one = field.one();
    let delta = Mat::from_columns(
        n * n,
        (0..n)
            .map(|x| {
                let mut col: Vec<_> = (0..n).map(|h| (g.mul(x, g.inv[h]) * n + h, one.clone())).collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect(),
    );
    let delta = v.matrix_map(delta)?;
    let epsilon = v.matrix_map(Mat::from_columns(
        1,
        (0..n).map(|x| if x == g.unit() { vec![(0, one.clone())] } else { vec![] }).collect(),
    ))?;
    let op = OpcatStructure::new(a.clone(), |_, _, _| Ok(delta.clone()), |_| Ok(epsilon.clone()), NaturalityLevel::FullOpcat)?;
    Ok((a, op))
}

/// `n` objects with one-dimensional homs, `δ(1) = 1 ⊗ 1`, `ε = 1`.
pub fn indiscrete_frobenius(n: usize, field: Field) -> Result<(Arc<VCat>, OpcatStructure)> {
    let a = Arc::new(indiscrete(n, field)?);
    let v = a.ctx();
    let op = OpcatStructure::new(
        a.clone(),
        |_, _, _| Ok(v.identity(VObj(1))),
        |_| Ok(v.identity(VObj(1))),
        NaturalityLevel::FullOpcat,
    )?;
    Ok((a, op))
}

/// The discrete linear category; `δ` is `1 ↦ 1 ⊗ 1` on the diagonal and zero elsewhere.
pub fn discrete_frobenius(n: usize, field: Field) -> Result<(Arc<VCat>, OpcatStructure)> {
    let v = BaseCtx::FinVect(field);
    let a = Arc::new(discrete(n, v, None)?);
    let op = OpcatStructure::new(
        a.clone(),
        |x, y, z| {
            let cod = v.tensor_obj(a.hom(z, y), a.hom(x, z));
            if x == y && y == z {
                Ok(v.identity(VObj(1)))
            } else {
                v.zero_map(a.hom(x, y), cod)
            }
        },
        |_| Ok(v.identity(VObj(1))),
        NaturalityLevel::FullOpcat,
    )?;
    Ok((a, op))
}
