//! Sparse exact matrices, stored one column per domain basis vector.

use num_traits::Zero;

use super::field::{Field, Scalar};

/// A `rows x cols` matrix. Column `j` lists its nonzero entries as
/// `(row, value)` pairs sorted by row; zeros are never stored, so
/// structural equality is matrix equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: Vec<Vec<(usize, Scalar)>>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Mat {
        Mat::from_index_fn(n, n, |j| j)
    }

    /// The 0/1 matrix sending basis vector `j` to basis vector `f(j)`.
    pub fn from_index_fn(rows: usize, cols: usize, f: impl Fn(usize) -> usize) -> Mat {
        let cols = (0..cols)
            .map(|j| {
                let r = f(j);
                debug_assert!(r < rows);
                vec![(r, Scalar::from_integer(1.into()))]
            })
            .collect();
        Mat { rows, cols }
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<(usize, Scalar)>>) -> Mat {
        let cols = cols
            .into_iter()
            .map(|mut c| {
                c.retain(|(_, v)| !v.is_zero());
                c.sort_by_key(|(r, _)| *r);
                c
            })
            .collect();
        Mat { rows, cols }
    }

    /// Row-major dense entries.
    pub fn from_dense(rows: usize, cols: usize, entries: &[Vec<Scalar>]) -> Mat {
        let mut out = Mat::zero(rows, cols);
        for (r, row) in entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    out.cols[c].push((r, v.clone()));
                }
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, Scalar)] {
        &self.cols[j]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.cols[c]
            .binary_search_by_key(&r, |(row, _)| *row)
            .map(|i| self.cols[c][i].1.clone())
            .unwrap_or_else(|_| Scalar::zero())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.ncols()]; self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                out[*r][c] = v.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut cols = vec![Vec::new(); self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                cols[*r].push((c, v.clone()));
            }
        }
        Mat { rows: self.ncols(), cols }
    }

    /// Column `j` as a single-entry column whose value is one, if it is one.
    pub fn as_index_map(&self) -> Option<Vec<usize>> {
        self.cols
            .iter()
            .map(|c| match c.as_slice() {
                [(r, v)] if *v == Scalar::from_integer(1.into()) => Some(*r),
                _ => None,
            })
            .collect()
    }

    pub fn mul(field: Field, a: &Mat, b: &Mat) -> Mat {
        debug_assert_eq!(a.ncols(), b.rows);
        let mut acc: Vec<Option<Scalar>> = vec![None; a.rows];
        let mut touched: Vec<usize> = Vec::new();
        let cols = b
            .cols
            .iter()
            .map(|bcol| {
                for (k, bv) in bcol {
                    for (i, av) in &a.cols[*k] {
                        let term = field.mul(av, bv);
                        match &mut acc[*i] {
                            Some(x) => *x = field.add(x, &term),
                            slot @ None => {
                                *slot = Some(term);
                                touched.push(*i);
                            }
                        }
                    }
                }
                touched.sort_unstable();
                let col: Vec<(usize, Scalar)> = touched
                    .drain(..)
                    .filter_map(|i| acc[i].take().filter(|v| !v.is_zero()).map(|v| (i, v)))
                    .collect();
                col
            })
            .collect();
        Mat { rows: a.rows, cols }
    }

    /// Kronecker product with left-major indices: `(i1, i2) -> i1 * rows(b) + i2`.
    pub fn kron(field: Field, a: &Mat, b: &Mat) -> Mat {
        let mut cols = Vec::with_capacity(a.ncols() * b.ncols());
        for acol in &a.cols {
            for bcol in &b.cols {
                let mut col = Vec::with_capacity(acol.len() * bcol.len());
                for (i1, av) in acol {
                    for (i2, bv) in bcol {
                        col.push((i1 * b.rows + i2, field.mul(av, bv)));
                    }
                }
                cols.push(col);
            }
        }
        Mat { rows: a.rows * b.rows, cols }
    }

    pub fn add(field: Field, a: &Mat, b: &Mat) -> Mat {
        Mat::combine(field, a, b, false)
    }

    pub fn sub(field: Field, a: &Mat, b: &Mat) -> Mat {
        Mat::combine(field, a, b, true)
    }

    fn combine(field: Field, a: &Mat, b: &Mat, negate: bool) -> Mat {
        debug_assert_eq!((a.rows, a.ncols()), (b.rows, b.ncols()));
        let cols = a
            .cols
            .iter()
            .zip(&b.cols)
            .map(|(ac, bc)| {
                let mut out = Vec::with_capacity(ac.len() + bc.len());
                let (mut i, mut j) = (0, 0);
                while i < ac.len() || j < bc.len() {
                    let take_a = j >= bc.len() || (i < ac.len() && ac[i].0 < bc[j].0);
                    let take_b = i >= ac.len() || (j < bc.len() && bc[j].0 < ac[i].0);
                    if take_a {
                        out.push(ac[i].clone());
                        i += 1;
                    } else if take_b {
                        let v = if negate { field.neg(&bc[j].1) } else { bc[j].1.clone() };
                        out.push((bc[j].0, v));
                        j += 1;
                    } else {
                        let v = if negate {
                            field.sub(&ac[i].1, &bc[j].1)
                        } else {
                            field.add(&ac[i].1, &bc[j].1)
                        };
                        if !v.is_zero() {
                            out.push((ac[i].0, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
                out
            })
            .collect();
        Mat { rows: a.rows, cols }
    }

    pub fn scale(field: Field, s: &Scalar, a: &Mat) -> Mat {
        if s.is_zero() {
            return Mat::zero(a.rows, a.ncols());
        }
        let cols = a
            .cols
            .iter()
            .map(|c| c.iter().map(|(r, v)| (*r, field.mul(s, v))).collect())
            .collect();
        Mat { rows: a.rows, cols }
    }

    /// `[a | b | ...]`, all with the same row count.
    pub fn hstack(rows: usize, parts: &[&Mat]) -> Mat {
        let mut cols = Vec::new();
        for p in parts {
            debug_assert_eq!(p.rows, rows);
            cols.extend(p.cols.iter().cloned());
        }
        Mat { rows, cols }
    }

    /// Stack blocks vertically; all blocks share the column count.
    pub fn vstack(ncols: usize, parts: &[&Mat]) -> Mat {
        let mut cols = vec![Vec::new(); ncols];
        let mut offset = 0;
        for p in parts {
            debug_assert_eq!(p.ncols(), ncols);
            for (c, col) in p.cols.iter().enumerate() {
                cols[c].extend(col.iter().map(|(r, v)| (r + offset, v.clone())));
            }
            offset += p.rows;
        }
        Mat { rows: offset, cols }
    }
}

/// Row-reduced echelon form of a dense matrix. Returns the nonzero rows
/// (each normalized to a leading one) and the pivot column of each.
pub fn rref(field: Field, mut m: Vec<Vec<Scalar>>, ncols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = field.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = field.mul(x, &inv);
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (k, pv) in pivot_row.iter().enumerate().skip(c) {
                if !pv.is_zero() {
                    row[k] = field.sub(&row[k], &field.mul(&factor, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(field: Field, a: &Mat) -> usize {
    // eliminate along the shorter side
    if a.ncols() <= a.rows() {
        rref(field, a.transpose().to_dense(), a.rows()).1.len()
    } else {
        rref(field, a.to_dense(), a.ncols()).1.len()
    }
}

/// Basis of the null space as columns of an `ncols x nullity` matrix.
/// Basis vector `i` has a one at the `i`-th free column and zeros at the
/// other free columns.
pub fn kernel(field: Field, a: &Mat) -> Mat {
    let n = a.ncols();
    let (r, pivots) = rref(field, a.to_dense(), n);
    let mut is_pivot = vec![None; n];
    for (i, p) in pivots.iter().enumerate() {
        is_pivot[*p] = Some(i);
    }
    let cols = (0..n)
        .filter(|c| is_pivot[*c].is_none())
        .map(|free| {
            let mut col = vec![(free, Scalar::from_integer(1.into()))];
            for (i, p) in pivots.iter().enumerate() {
                if !r[i][free].is_zero() {
                    col.push((*p, field.neg(&r[i][free])));
                }
            }
            col
        })
        .collect();
    Mat::from_columns(n, cols)
}

/// Cokernel of `a : k^n -> k^m`: the projection `q : k^m -> k^(m - rank)`
/// and the section picking the non-pivot basis vectors of the reduced
/// column space.
pub fn cokernel(field: Field, a: &Mat) -> (Mat, Mat) {
    let m = a.rows();
    let (w, pivots) = rref(field, a.transpose().to_dense(), m);
    let mut pivot_row = vec![None; m];
    for (i, p) in pivots.iter().enumerate() {
        pivot_row[*p] = Some(i);
    }
    let free: Vec<usize> = (0..m).filter(|j| pivot_row[*j].is_none()).collect();
    let mut free_index = vec![usize::MAX; m];
    for (i, f) in free.iter().enumerate() {
        free_index[*f] = i;
    }
    let q_cols = (0..m)
        .map(|j| match pivot_row[j] {
            None => vec![(free_index[j], Scalar::from_integer(1.into()))],
            Some(i) => free
                .iter()
                .filter(|l| !w[i][**l].is_zero())
                .map(|l| (free_index[*l], field.neg(&w[i][*l])))
                .collect(),
        })
        .collect();
    let q = Mat::from_columns(free.len(), q_cols);
    let s = Mat::from_index_fn(m, free.len(), |i| free[i]);
    (q, s)
}

/// Solve `a x = b` for `x`, column by column. `None` if some column of
/// `b` is outside the image of `a`.
pub fn solve(field: Field, a: &Mat, b: &Mat) -> Option<Mat> {
    let n = a.ncols();
    let m = a.rows();
    let mut aug = a.to_dense();
    let bd = b.to_dense();
    for (row, brow) in aug.iter_mut().zip(bd) {
        row.extend(brow);
    }
    if m == 0 {
        return Some(Mat::zero(n, b.ncols()));
    }
    let (r, pivots) = rref(field, aug, n + b.ncols());
    if pivots.iter().any(|p| *p >= n) {
        return None;
    }
    let cols = (0..b.ncols())
        .map(|j| {
            pivots
                .iter()
                .enumerate()
                .map(|(i, p)| (*p, r[i][n + j].clone()))
                .collect()
        })
        .collect();
    Some(Mat::from_columns(n, cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from_integer(v.into())
    }

    fn dense(rows: &[&[i64]]) -> Mat {
        let entries: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|v| q(*v)).collect()).collect();
        Mat::from_dense(rows.len(), rows[0].len(), &entries)
    }

    #[test]
    fn multiply_and_kron() {
        let f = Field::Rationals;
        let a = dense(&[&[1, 2], &[0, 1]]);
        let b = dense(&[&[1, -2], &[0, 1]]);
        assert_eq!(Mat::mul(f, &a, &b), Mat::identity(2));
        let k = Mat::kron(f, &Mat::identity(2), &dense(&[&[0, 1], &[1, 0]]));
        assert_eq!(k.get(1, 0), q(1));
        assert_eq!(k.get(2, 3), q(1));
        assert_eq!(k.nnz(), 4);
    }

    #[test]
    fn kernel_of_rank_one() {
        let f = Field::Rationals;
        // id - diag(1, 0)
        let d = dense(&[&[0, 0], &[0, 1]]);
        let k = kernel(f, &d);
        assert_eq!(k, dense(&[&[1], &[0]]));
        let (c, s) = cokernel(f, &d);
        assert_eq!(c.rows(), 1);
        assert_eq!(Mat::mul(f, &c, &s), Mat::identity(1));
        assert!(Mat::mul(f, &c, &d).nnz() == 0);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let f = Field::Rationals;
        let a = dense(&[&[1], &[0]]);
        assert!(solve(f, &a, &dense(&[&[0], &[1]])).is_none());
        assert_eq!(solve(f, &a, &dense(&[&[3], &[0]])).unwrap(), dense(&[&[3]]));
    }

    #[test]
    fn rank_mod_p() {
        let f = Field::prime(3).unwrap();
        let a = Mat::from_dense(2, 2, &[vec![q(1), q(2)], vec![q(2), q(1)]]);
        // det = 1 - 4 = -3 = 0 mod 3
        assert_eq!(rank(f, &a), 1);
        assert_eq!(rank(Field::Rationals, &a), 2);
    }
}
