//! Battery construction: free and quotient-of-free copresheaves, and
//! natural transformations found by solving the naturality equations.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{KanError, Result};
use crate::rng::task_rng;
use crate::vbase::matrix::{kernel, Mat};
use crate::vbase::random::random_map;
use crate::vbase::{BaseCtx, Scalar, VMap, VObj};

use super::category::VCat;
use super::module::{coequalizer_module, free_copresheaf, Copresheaf, Module, VNat};

/// Enumeration of FinSet transformations stops here.
pub const ENUMERATION_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CopresheafSpec {
    /// `⊕_a A(a,-) ⊗ X_a` with `|X_a| = gens[a]`.
    Free { gens: Vec<usize> },
    /// Coequalizer of two random maps from the free copresheaf on
    /// `relations` into the free copresheaf on `gens` (one of them zero in FinVect).
    QuotientOfFree { gens: Vec<usize>, relations: Vec<usize>, seed: u64 },
}

/// The unique transformation `F(X) -> g` out of a free copresheaf that
/// restricts to `maps[a] : X_a -> g a` on generators.
pub fn free_extension(a: &Arc<VCat>, g: &Copresheaf, maps: &[VMap]) -> Result<VNat> {
    let v = a.ctx();
    let components = (0..a.n())
        .map(|b| {
            let parts: Vec<VMap> = (0..a.n())
                .map(|x| v.compose(g.act(x, b), &v.tensor(&v.identity(a.hom(x, b)), &maps[x])?))
                .collect::<Result<_>>()?;
            v.copair_into(g.val(b), &parts)
        })
        .collect::<Result<_>>()?;
    Ok(VNat { components })
}

pub fn generate_copresheaf(a: &Arc<VCat>, spec: &CopresheafSpec) -> Result<Copresheaf> {
    let v = a.ctx();
    match spec {
        CopresheafSpec::Free { gens } => {
            let gens: Vec<VObj> = gens.iter().map(|n| VObj(*n)).collect();
            Ok(free_copresheaf(a, &gens)?.0)
        }
        CopresheafSpec::QuotientOfFree { gens, relations, seed } => {
            let gens: Vec<VObj> = gens.iter().map(|n| VObj(*n)).collect();
            let rels: Vec<VObj> = relations.iter().map(|n| VObj(*n)).collect();
            let (f0, _) = free_copresheaf(a, &gens)?;
            let (f1, _) = free_copresheaf(a, &rels)?;
            let mut rng = task_rng(*seed, "quotient-of-free");
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<Vec<VMap>> {
                (0..a.n()).map(|x| random_map(v, rels[x], f0.val(x), rng)).collect()
            };
            let phi = free_extension(a, &f0, &pick(&mut rng)?)?;
            let psi = match v {
                BaseCtx::FinSet => free_extension(a, &f0, &pick(&mut rng)?)?,
                BaseCtx::FinVect(_) => VNat {
                    components: (0..a.n()).map(|x| v.zero_map(f1.val(x), f0.val(x))).collect::<Result<_>>()?,
                },
            };
            Ok(coequalizer_module(&f0, &f1, &phi, &psi)?.0)
        }
    }
}

fn compatible(f: &Module, g: &Module) -> Result<()> {
    if !f.same_legs(g) {
        return Err(KanError::SourceMismatch("transformations between modules on different legs".into()));
    }
    Ok(())
}

/// Offsets of each component block in the flattened coordinate vector;
/// component `t` entry `(r, c)` sits at `offset[t] + r * |f t| + c`.
fn offsets(f: &Module, g: &Module) -> (Vec<usize>, usize) {
    let mut off = Vec::with_capacity(f.tuple_count());
    let mut total = 0;
    for i in 0..f.tuple_count() {
        off.push(total);
        total += f.value_at(i).0 * g.value_at(i).0;
    }
    (off, total)
}

/// Coordinates of a linear transformation, component blocks row-major.
pub fn flatten_nat(f: &Module, g: &Module, alpha: &VNat) -> Vec<Scalar> {
    let v = f.ctx();
    let mut out = Vec::new();
    for (i, a) in alpha.components.iter().enumerate() {
        for r in 0..g.value_at(i).0 {
            for c in 0..f.value_at(i).0 {
                out.push(v.entry(a, r, c));
            }
        }
    }
    out
}

fn unflatten_sparse(f: &Module, g: &Module, coords: &[(usize, Scalar)]) -> Result<VNat> {
    let v = f.ctx();
    let (off, _) = offsets(f, g);
    let components = (0..f.tuple_count())
        .map(|i| {
            let (fr, gr) = (f.value_at(i).0, g.value_at(i).0);
            let mut cols = vec![Vec::new(); fr];
            for (idx, val) in coords {
                if *idx >= off[i] && *idx < off[i] + fr * gr {
                    let k = idx - off[i];
                    cols[k % fr].push((k / fr, val.clone()));
                }
            }
            v.matrix_map(Mat::from_columns(gr, cols))
        })
        .collect::<Result<_>>()?;
    Ok(VNat { components })
}

pub fn unflatten_nat(f: &Module, g: &Module, coords: &[Scalar]) -> Result<VNat> {
    let sparse: Vec<(usize, Scalar)> = coords
        .iter()
        .enumerate()
        .filter(|(_, s)| !num_traits::Zero::is_zero(*s))
        .map(|(i, s)| (i, s.clone()))
        .collect();
    unflatten_sparse(f, g, &sparse)
}

/// Basis of the space of linear natural transformations `f -> g`, as the
/// columns of a `coordinates x dimension` matrix.
pub fn nat_basis_matrix(f: &Module, g: &Module) -> Result<Mat> {
    compatible(f, g)?;
    let v = f.ctx();
    let field = v.field().ok_or_else(|| KanError::CtxMismatch("nat_basis needs FinVect".into()))?;
    let (off, total) = offsets(f, g);
    let mut basis = Mat::identity(total);
    let count = f.tuple_count();
    for i in 0..count {
        for j in 0..count {
            if basis.ncols() == 0 {
                return Ok(basis);
            }
            let (t, u) = (f.tuple(i), f.tuple(j));
            let h = f.hom_block(&t, &u);
            if h.0 == 0 {
                continue;
            }
            let (ft, fu, gt, gu) = (f.value_at(i).0, f.value_at(j).0, g.value_at(i).0, g.value_at(j).0);
            let af = f.action_at(i, j).matrix().unwrap();
            let ag = g.action_at(i, j).matrix().unwrap();
            let idh = Mat::identity(h.0);
            let block = |col: &[(usize, Scalar)], at: usize, rows: usize, cols: usize| {
                let mut cs = vec![Vec::new(); cols];
                for (idx, val) in col {
                    if *idx >= off[at] && *idx < off[at] + rows * cols {
                        let k = idx - off[at];
                        cs[k % cols].push((k / cols, val.clone()));
                    }
                }
                Mat::from_columns(rows, cs)
            };
            let width = h.0 * ft;
            let residuals = (0..basis.ncols())
                .map(|k| {
                    let col = basis.column(k);
                    let a_t = block(col, i, gt, ft);
                    let a_u = block(col, j, gu, fu);
                    let lhs = Mat::mul(field, &a_u, af);
                    let rhs = Mat::mul(field, ag, &Mat::kron(field, &idh, &a_t));
                    let r = Mat::sub(field, &lhs, &rhs);
                    let mut flat = Vec::new();
                    for c in 0..width {
                        for (row, val) in r.column(c) {
                            flat.push((row * width + c, val.clone()));
                        }
                    }
                    flat.sort_by_key(|e| e.0);
                    flat
                })
                .collect();
            let m = Mat::from_columns(gu * width, residuals);
            if m.nnz() == 0 {
                continue;
            }
            basis = Mat::mul(field, &basis, &kernel(field, &m));
        }
    }
    Ok(basis)
}

/// Basis of linear natural transformations `f -> g`.
pub fn nat_basis(f: &Module, g: &Module) -> Result<Vec<VNat>> {
    let b = nat_basis_matrix(f, g)?;
    (0..b.ncols()).map(|k| unflatten_sparse(f, g, b.column(k))).collect()
}

/// All FinSet natural transformations `f -> g` in canonical order (by
/// component tables), up to `limit`. The flag reports completeness.
pub fn enumerate_nats(f: &Module, g: &Module, limit: usize) -> Result<(Vec<VNat>, bool)> {
    compatible(f, g)?;
    if !f.ctx().is_finset() {
        return Err(KanError::CtxMismatch("enumeration needs FinSet".into()));
    }
    let count = f.tuple_count();
    let state: Vec<Vec<Option<usize>>> = (0..count).map(|i| vec![None; f.value_at(i).0]).collect();
    let mut out = Vec::new();
    let complete = search(f, g, state, limit, &mut out);
    let nats = out
        .into_iter()
        .map(|tables| {
            Ok(VNat {
                components: tables
                    .into_iter()
                    .enumerate()
                    .map(|(i, t)| VMap::from_table(f.value_at(i), g.value_at(i), t))
                    .collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    Ok((nats, complete))
}

fn propagate(f: &Module, g: &Module, state: &mut [Vec<Option<usize>>], start: (usize, usize)) -> bool {
    let mut queue = vec![start];
    while let Some((i, x)) = queue.pop() {
        let y = state[i][x].expect("assigned");
        let (ft, gt) = (f.value_at(i).0, g.value_at(i).0);
        for j in 0..f.tuple_count() {
            let (af, ag) = (f.action_at(i, j), g.action_at(i, j));
            let h = af.dom().0 / ft.max(1);
            for hh in 0..h {
                let x2 = af.apply(hh * ft + x);
                let y2 = ag.apply(hh * gt + y);
                match state[j][x2] {
                    None => {
                        state[j][x2] = Some(y2);
                        queue.push((j, x2));
                    }
                    Some(z) if z != y2 => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

fn search(f: &Module, g: &Module, state: Vec<Vec<Option<usize>>>, limit: usize, out: &mut Vec<Vec<Vec<usize>>>) -> bool {
    let next = state
        .iter()
        .enumerate()
        .find_map(|(i, c)| c.iter().position(|v| v.is_none()).map(|x| (i, x)));
    let Some((i, x)) = next else {
        if out.len() >= limit {
            return false;
        }
        out.push(state.into_iter().map(|c| c.into_iter().map(|v| v.unwrap()).collect()).collect());
        return true;
    };
    for y in 0..g.value_at(i).0 {
        let mut s = state.clone();
        s[i][x] = Some(y);
        if propagate(f, g, &mut s, (i, x)) && !search(f, g, s, limit, out) {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NatSpaceSize {
    Dimension(usize),
    Cardinality(usize),
}

pub fn nat_space_size(f: &Module, g: &Module) -> Result<NatSpaceSize> {
    match f.ctx() {
        BaseCtx::FinVect(_) => Ok(NatSpaceSize::Dimension(nat_basis_matrix(f, g)?.ncols())),
        BaseCtx::FinSet => {
            let (all, complete) = enumerate_nats(f, g, ENUMERATION_CAP)?;
            if !complete {
                return Err(KanError::TooLarge(format!("more than {ENUMERATION_CAP} transformations")));
            }
            Ok(NatSpaceSize::Cardinality(all.len()))
        }
    }
}

/// Up to `samples` natural transformations `f -> g`, deterministic in
/// `seed`. Starts with the identity when `f = g`; in FinVect continues with
/// a basis and then random integer combinations of it.
pub fn generate_nat(f: &Module, g: &Module, seed: u64, samples: usize) -> Result<Vec<VNat>> {
    compatible(f, g)?;
    let v = f.ctx();
    let mut rng = task_rng(seed, "generate_nat");
    let mut out: Vec<VNat> = Vec::new();
    if f == g {
        out.push(VNat::identity(f));
    }
    match v {
        BaseCtx::FinVect(field) => {
            let basis = nat_basis_matrix(f, g)?;
            let d = basis.ncols();
            for k in 0..d {
                let n = unflatten_sparse(f, g, basis.column(k))?;
                if !out.contains(&n) {
                    out.push(n);
                }
            }
            if d == 0 {
                let zero = unflatten_sparse(f, g, &[])?;
                if !out.contains(&zero) {
                    out.push(zero);
                }
            }
            let mut attempts = 0;
            while d > 0 && out.len() < samples && attempts < 20 * samples {
                attempts += 1;
                let coeffs: Vec<(usize, Scalar)> = (0..d)
                    .map(|k| (k, field.from_int(rng.gen_range(-3..=3))))
                    .filter(|(_, s)| !num_traits::Zero::is_zero(s))
                    .collect();
                let combo = Mat::mul(field, &basis, &Mat::from_columns(d, vec![coeffs]));
                let n = unflatten_sparse(f, g, combo.column(0))?;
                if !out.contains(&n) {
                    out.push(n);
                }
            }
        }
        BaseCtx::FinSet => {
            let (mut all, _) = enumerate_nats(f, g, ENUMERATION_CAP)?;
            if all.is_empty() {
                return Err(KanError::EmptySolution);
            }
            if all.len() > samples {
                all.shuffle(&mut rng);
            }
            for n in all {
                if !out.contains(&n) {
                    out.push(n);
                }
            }
        }
    }
    out.truncate(samples.max(1));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encat::examples::{discrete, group_algebra, indiscrete};
    use crate::encat::module::{check_action, check_natural, constant, representable, Shape};
    use crate::groups::FiniteGroup;
    use crate::vbase::Field;

    fn ga(g: FiniteGroup) -> Arc<VCat> {
        Arc::new(group_algebra(&g, Field::Rationals).unwrap())
    }

    #[test]
    fn free_on_unit_is_the_representable() {
        let a = ga(FiniteGroup::cyclic(2));
        let f = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![1] }).unwrap();
        assert_eq!(f, representable(&a, 0).unwrap());
    }

    #[test]
    fn endomorphisms_of_regular_module_have_group_order_dimension() {
        for g in [FiniteGroup::trivial(), FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
            let n = g.order();
            let a = ga(g);
            let f = representable(&a, 0).unwrap();
            assert_eq!(nat_space_size(&f, &f).unwrap(), NatSpaceSize::Dimension(n));
        }
    }

    #[test]
    fn generated_nats_are_natural_and_reproducible() {
        let a = ga(FiniteGroup::cyclic(3));
        let f = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![2] }).unwrap();
        let g = generate_copresheaf(&a, &CopresheafSpec::QuotientOfFree { gens: vec![2], relations: vec![1], seed: 4 }).unwrap();
        assert!(check_action(&g).unwrap().is_lawful());
        let ns = generate_nat(&f, &g, 9, 12).unwrap();
        assert_eq!(ns, generate_nat(&f, &g, 9, 12).unwrap());
        for n in &ns {
            assert!(check_natural(&f, &g, n).unwrap().is_lawful());
        }
        let ids = generate_nat(&f, &f, 1, 5).unwrap();
        assert_eq!(ids[0], VNat::identity(&f));
    }

    #[test]
    fn coordinates_round_trip() {
        let a = Arc::new(indiscrete(2, Field::Rationals).unwrap());
        let f = representable(&a, 0).unwrap();
        for n in nat_basis(&f, &f).unwrap() {
            assert_eq!(unflatten_nat(&f, &f, &flatten_nat(&f, &f, &n)).unwrap(), n);
        }
    }

    #[test]
    fn finset_enumeration_counts_functions_on_discrete() {
        let a = Arc::new(discrete(2, BaseCtx::FinSet, None).unwrap());
        let f = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![2, 1] }).unwrap();
        let g = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![3, 2] }).unwrap();
        // componentwise arbitrary: 3^2 * 2^1
        assert_eq!(nat_space_size(&f, &g).unwrap(), NatSpaceSize::Cardinality(18));
        let empty = generate_copresheaf(&a, &CopresheafSpec::Free { gens: vec![0, 1] }).unwrap();
        assert!(matches!(generate_nat(&f, &empty, 0, 3), Err(KanError::EmptySolution)));
    }

    #[test]
    fn constant_functors_on_discrete_categories() {
        let a = Arc::new(discrete(2, BaseCtx::FinVect(Field::Rationals), None).unwrap());
        let k = constant(Shape::Copresheaf, a, VObj(1)).unwrap();
        assert_eq!(nat_space_size(&k, &k).unwrap(), NatSpaceSize::Dimension(2));
    }

    #[test]
    fn finset_quotients_are_lawful() {
        let a = Arc::new(crate::encat::examples::monoid_discrete(&crate::groups::FiniteMonoid::cyclic(2)));
        let q = generate_copresheaf(&a, &CopresheafSpec::QuotientOfFree { gens: vec![3, 2], relations: vec![1, 1], seed: 2 })
            .unwrap();
        assert!(check_action(&q).unwrap().is_lawful());
    }
}
