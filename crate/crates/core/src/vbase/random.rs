//! Seeded random maps for test batteries.

use rand::seq::SliceRandom;
use rand::Rng;

use super::map::{BaseCtx, VMap, VObj};
use super::matrix::{rank, Mat};
use crate::error::{KanError, Result};

fn random_matrix(ctx: BaseCtx, dom: VObj, cod: VObj, rng: &mut impl Rng) -> Result<VMap> {
    let field = ctx.field().expect("FinVect");
    let cols = (0..dom.0)
        .map(|_| {
            (0..cod.0)
                .filter_map(|r| {
                    let v = field.from_int(rng.gen_range(-2..=2));
                    (!num_traits::Zero::is_zero(&v)).then_some((r, v))
                })
                .collect()
        })
        .collect();
    ctx.matrix_map(Mat::from_columns(cod.0, cols))
}

/// A uniformly random table, or a matrix with entries in `-2..=2`.
pub fn random_map(ctx: BaseCtx, dom: VObj, cod: VObj, rng: &mut impl Rng) -> Result<VMap> {
    match ctx {
        BaseCtx::FinSet => {
            if cod.0 == 0 && dom.0 > 0 {
                return Err(KanError::EmptySolution);
            }
            VMap::from_table(dom, cod, (0..dom.0).map(|_| rng.gen_range(0..cod.0)).collect())
        }
        BaseCtx::FinVect(_) => random_matrix(ctx, dom, cod, rng),
    }
}

/// A random injective table / full-column-rank matrix.
pub fn random_mono(ctx: BaseCtx, dom: VObj, cod: VObj, rng: &mut impl Rng) -> Result<VMap> {
    if dom.0 > cod.0 {
        return Err(KanError::EmptySolution);
    }
    match ctx {
        BaseCtx::FinSet => {
            let mut pool: Vec<usize> = (0..cod.0).collect();
            pool.shuffle(rng);
            pool.truncate(dom.0);
            VMap::from_table(dom, cod, pool)
        }
        BaseCtx::FinVect(f) => loop {
            let m = random_matrix(ctx, dom, cod, rng)?;
            if rank(f, m.matrix().unwrap()) == dom.0 {
                return Ok(m);
            }
        },
    }
}

/// A random surjective table / full-row-rank matrix.
pub fn random_epi(ctx: BaseCtx, dom: VObj, cod: VObj, rng: &mut impl Rng) -> Result<VMap> {
    if cod.0 > dom.0 || (cod.0 == 0 && dom.0 > 0 && ctx.is_finset()) {
        return Err(KanError::EmptySolution);
    }
    match ctx {
        BaseCtx::FinSet => {
            let mut table: Vec<usize> = (0..dom.0).map(|i| if i < cod.0 { i } else { rng.gen_range(0..cod.0) }).collect();
            table.shuffle(rng);
            VMap::from_table(dom, cod, table)
        }
        BaseCtx::FinVect(f) => loop {
            let m = random_matrix(ctx, dom, cod, rng)?;
            if rank(f, m.matrix().unwrap()) == cod.0 {
                return Ok(m);
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::task_rng;
    use crate::vbase::{is_epi, is_mono, Field};

    #[test]
    fn random_monos_and_epis_are_what_they_claim() {
        let mut rng = task_rng(1, "random");
        for ctx in [BaseCtx::FinSet, BaseCtx::FinVect(Field::Rationals), BaseCtx::FinVect(Field::Prime(5))] {
            for d in 0..4 {
                for c in d..4 {
                    assert!(is_mono(ctx, &random_mono(ctx, VObj(d), VObj(c), &mut rng).unwrap()));
                    if d > 0 || c == 0 || !ctx.is_finset() {
                        assert!(is_epi(ctx, &random_epi(ctx, VObj(c), VObj(d), &mut rng).unwrap()));
                    }
                }
            }
        }
    }
}
