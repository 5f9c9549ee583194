use std::fmt;

use num_traits::Zero;

use super::field::{Field, Scalar};
use super::matrix::Mat;
use crate::error::{KanError, Result};

/// Largest object the engine will enumerate (FinSet internal homs).
pub const MAX_SIZE: usize = 1 << 22;

/// The ambient monoidal closed base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseCtx {
    FinSet,
    FinVect(Field),
}

/// An object of the base: a finite cardinality or a dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VObj(pub usize);

impl VObj {
    pub fn size(self) -> usize {
        self.0
    }
}

impl fmt::Display for VObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Body {
    Table(Vec<usize>),
    Matrix(Mat),
}

/// A morphism of the base. FinSet maps are total function tables;
/// FinVect maps are matrices with one column per domain basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VMap {
    ctx: BaseCtx,
    dom: VObj,
    cod: VObj,
    body: Body,
}

impl fmt::Display for VMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Table(t) => write!(f, "{}->{} {:?}", self.dom, self.cod, t),
            Body::Matrix(m) => {
                let field = self.field().expect("matrix in FinVect");
                let rows: Vec<String> = m
                    .to_dense()
                    .iter()
                    .map(|r| {
                        let cells: Vec<String> = r.iter().map(|v| field.render(v)).collect();
                        format!("[{}]", cells.join(","))
                    })
                    .collect();
                write!(f, "{}->{} [{}]", self.dom, self.cod, rows.join(","))
            }
        }
    }
}

fn check_ctx(a: BaseCtx, b: BaseCtx) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(KanError::CtxMismatch(format!("{a:?} vs {b:?}")))
    }
}

/// Decode a left-major mixed-radix index.
pub fn decode(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        let r = radices[i];
        out[i] = idx % r;
        idx /= r;
    }
    out
}

pub fn encode(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (d, r)| acc * r + d)
}

fn checked_product(sizes: impl IntoIterator<Item = usize>) -> Result<usize> {
    let mut acc: usize = 1;
    for s in sizes {
        acc = acc
            .checked_mul(s)
            .filter(|v| *v <= MAX_SIZE)
            .ok_or_else(|| KanError::TooLarge("tensor product".into()))?;
    }
    Ok(acc)
}

impl VMap {
    pub fn ctx(&self) -> BaseCtx {
        self.ctx
    }

    pub fn dom(&self) -> VObj {
        self.dom
    }

    pub fn cod(&self) -> VObj {
        self.cod
    }

    pub fn field(&self) -> Option<Field> {
        match self.ctx {
            BaseCtx::FinSet => None,
            BaseCtx::FinVect(f) => Some(f),
        }
    }

    pub fn table(&self) -> Option<&[usize]> {
        match &self.body {
            Body::Table(t) => Some(t),
            Body::Matrix(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<&Mat> {
        match &self.body {
            Body::Matrix(m) => Some(m),
            Body::Table(_) => None,
        }
    }

    pub fn is_endo(&self) -> bool {
        self.dom == self.cod
    }

    pub fn from_table(dom: VObj, cod: VObj, table: Vec<usize>) -> Result<VMap> {
        if table.len() != dom.0 || table.iter().any(|v| *v >= cod.0) {
            return Err(KanError::Boundary(format!(
                "table {table:?} does not describe a map {dom} -> {cod}"
            )));
        }
        Ok(VMap { ctx: BaseCtx::FinSet, dom, cod, body: Body::Table(table) })
    }

    pub fn from_matrix(field: Field, mat: Mat) -> Result<VMap> {
        for j in 0..mat.ncols() {
            if let Some((_, v)) = mat.column(j).iter().find(|(_, v)| !field.is_canonical(v)) {
                return Err(KanError::InvalidField(format!("entry {v} not canonical in {field}")));
            }
        }
        Ok(VMap {
            ctx: BaseCtx::FinVect(field),
            dom: VObj(mat.ncols()),
            cod: VObj(mat.rows()),
            body: Body::Matrix(mat),
        })
    }

    /// Evaluate a FinSet map at an element.
    pub fn apply(&self, x: usize) -> usize {
        self.table().expect("FinSet map")[x]
    }
}

impl BaseCtx {
    pub fn field(&self) -> Option<Field> {
        match self {
            BaseCtx::FinSet => None,
            BaseCtx::FinVect(f) => Some(*f),
        }
    }

    pub fn is_finset(&self) -> bool {
        matches!(self, BaseCtx::FinSet)
    }

    /// The map sending basis element / point `j` to `f(j)`.
    pub fn index_map(&self, dom: VObj, cod: VObj, f: impl Fn(usize) -> usize) -> VMap {
        let body = match self {
            BaseCtx::FinSet => Body::Table((0..dom.0).map(&f).collect()),
            BaseCtx::FinVect(_) => Body::Matrix(Mat::from_index_fn(cod.0, dom.0, f)),
        };
        VMap { ctx: *self, dom, cod, body }
    }

    pub fn matrix_map(&self, mat: Mat) -> Result<VMap> {
        match self {
            BaseCtx::FinVect(f) => VMap::from_matrix(*f, mat),
            BaseCtx::FinSet => Err(KanError::CtxMismatch("matrix map in FinSet".into())),
        }
    }

    pub fn identity(&self, x: VObj) -> VMap {
        self.index_map(x, x, |i| i)
    }

    pub fn unit_obj(&self) -> VObj {
        VObj(1)
    }

    /// The initial object: empty set or zero space.
    pub fn initial(&self) -> VObj {
        VObj(0)
    }

    /// The map out of the initial object.
    pub fn from_initial(&self, x: VObj) -> VMap {
        self.index_map(VObj(0), x, |_| 0)
    }

    pub fn ensure(&self, m: &VMap) -> Result<()> {
        check_ctx(*self, m.ctx)
    }

    pub fn compose(&self, g: &VMap, f: &VMap) -> Result<VMap> {
        check_ctx(*self, g.ctx)?;
        check_ctx(*self, f.ctx)?;
        if f.cod != g.dom {
            return Err(KanError::Boundary(format!(
                "cannot compose {} -> {} after {} -> {}",
                g.dom, g.cod, f.dom, f.cod
            )));
        }
        let body = match (&g.body, &f.body) {
            (Body::Table(gt), Body::Table(ft)) => Body::Table(ft.iter().map(|x| gt[*x]).collect()),
            (Body::Matrix(gm), Body::Matrix(fm)) => {
                Body::Matrix(Mat::mul(self.field().expect("FinVect"), gm, fm))
            }
            _ => unreachable!("ctx checked"),
        };
        Ok(VMap { ctx: *self, dom: f.dom, cod: g.cod, body })
    }

    /// Compose a chain given in application order: `chain(&[f, g, h]) = h . g . f`.
    pub fn chain(&self, maps: &[&VMap]) -> Result<VMap> {
        let (first, rest) = maps
            .split_first()
            .ok_or_else(|| KanError::Boundary("empty chain".into()))?;
        let mut acc = (*first).clone();
        for m in rest {
            acc = self.compose(m, &acc)?;
        }
        Ok(acc)
    }

    pub fn tensor_obj(&self, x: VObj, y: VObj) -> VObj {
        VObj(x.0 * y.0)
    }

    pub fn tensor_objs(&self, xs: &[VObj]) -> VObj {
        VObj(xs.iter().map(|x| x.0).product())
    }

    pub fn tensor(&self, f: &VMap, g: &VMap) -> Result<VMap> {
        check_ctx(*self, f.ctx)?;
        check_ctx(*self, g.ctx)?;
        let dom = VObj(checked_product([f.dom.0, g.dom.0])?);
        let cod = VObj(checked_product([f.cod.0, g.cod.0])?);
        let body = match (&f.body, &g.body) {
            (Body::Table(ft), Body::Table(gt)) => {
                let dy = g.dom.0;
                let cy = g.cod.0;
                Body::Table((0..dom.0).map(|i| ft[i / dy] * cy + gt[i % dy]).collect())
            }
            (Body::Matrix(fm), Body::Matrix(gm)) => {
                Body::Matrix(Mat::kron(self.field().expect("FinVect"), fm, gm))
            }
            _ => unreachable!("ctx checked"),
        };
        Ok(VMap { ctx: *self, dom, cod, body })
    }

    /// Tensor of several maps, left-associated (associators are identities
    /// under the left-major index convention).
    pub fn tensor_all(&self, maps: &[&VMap]) -> Result<VMap> {
        let mut acc = self.identity(self.unit_obj());
        for m in maps {
            acc = self.tensor(&acc, m)?;
        }
        Ok(acc)
    }

    /// `(X ⊗ Y) ⊗ Z -> X ⊗ (Y ⊗ Z)`; the identity on indices.
    pub fn associator(&self, x: VObj, y: VObj, z: VObj) -> VMap {
        self.identity(VObj(x.0 * y.0 * z.0))
    }

    /// `I ⊗ X -> X` (and `X ⊗ I -> X`); the identity on indices.
    pub fn unitor(&self, x: VObj) -> VMap {
        self.identity(x)
    }

    pub fn symmetry(&self, x: VObj, y: VObj) -> VMap {
        self.index_map(VObj(x.0 * y.0), VObj(x.0 * y.0), |i| (i % y.0) * x.0 + i / y.0)
    }

    /// Reorder tensor factors: `X_0 ⊗ ... ⊗ X_{n-1} -> X_{p[0]} ⊗ ... ⊗ X_{p[n-1]}`.
    pub fn permute(&self, objs: &[VObj], perm: &[usize]) -> VMap {
        debug_assert_eq!(objs.len(), perm.len());
        let radices: Vec<usize> = objs.iter().map(|o| o.0).collect();
        let out_radices: Vec<usize> = perm.iter().map(|p| radices[*p]).collect();
        let n: usize = radices.iter().product();
        self.index_map(VObj(n), VObj(n), |i| {
            let d = decode(i, &radices);
            let nd: Vec<usize> = perm.iter().map(|p| d[*p]).collect();
            encode(&nd, &out_radices)
        })
    }

    pub fn internal_hom(&self, x: VObj, y: VObj) -> Result<VObj> {
        match self {
            BaseCtx::FinSet => {
                let exp = u32::try_from(x.0).map_err(|_| KanError::TooLarge("exponent".into()))?;
                y.0.checked_pow(exp)
                    .filter(|v| *v <= MAX_SIZE)
                    .map(VObj)
                    .ok_or_else(|| KanError::TooLarge(format!("[{x}, {y}]")))
            }
            BaseCtx::FinVect(_) => Ok(VObj(checked_product([x.0, y.0])?)),
        }
    }

    /// `eval : [X, Y] ⊗ X -> Y`.
    pub fn eval(&self, x: VObj, y: VObj) -> Result<VMap> {
        let h = self.internal_hom(x, y)?;
        let dom = VObj(checked_product([h.0, x.0])?);
        Ok(match self {
            BaseCtx::FinSet => {
                let radices = vec![y.0; x.0];
                self.index_map(dom, y, |i| decode(i / x.0, &radices)[i % x.0])
            }
            BaseCtx::FinVect(_) => {
                // basis e_(a, b) of [X, Y] sits at a * |Y| + b
                let cols = (0..dom.0)
                    .map(|i| {
                        let (e, xi) = (i / x.0, i % x.0);
                        let (a, b) = (e / y.0, e % y.0);
                        if a == xi {
                            vec![(b, Scalar::from_integer(1.into()))]
                        } else {
                            Vec::new()
                        }
                    })
                    .collect();
                VMap {
                    ctx: *self,
                    dom,
                    cod: y,
                    body: Body::Matrix(Mat::from_columns(y.0, cols)),
                }
            }
        })
    }

    /// `Hom(Z ⊗ X, Y) -> Hom(Z, [X, Y])`.
    pub fn curry(&self, f: &VMap, z: VObj, x: VObj) -> Result<VMap> {
        check_ctx(*self, f.ctx)?;
        if f.dom.0 != z.0 * x.0 {
            return Err(KanError::Boundary(format!("curry: {} is not {z} ⊗ {x}", f.dom)));
        }
        let y = f.cod;
        let h = self.internal_hom(x, y)?;
        Ok(match &f.body {
            Body::Table(t) => {
                let radices = vec![y.0; x.0];
                self.index_map(z, h, |zi| {
                    let digits: Vec<usize> = (0..x.0).map(|xi| t[zi * x.0 + xi]).collect();
                    encode(&digits, &radices)
                })
            }
            Body::Matrix(m) => {
                let cols = (0..z.0)
                    .map(|zi| {
                        let mut col = Vec::new();
                        for xi in 0..x.0 {
                            for (yi, v) in m.column(zi * x.0 + xi) {
                                col.push((xi * y.0 + yi, v.clone()));
                            }
                        }
                        col
                    })
                    .collect();
                VMap { ctx: *self, dom: z, cod: h, body: Body::Matrix(Mat::from_columns(h.0, cols)) }
            }
        })
    }

    /// `Hom(Z, [X, Y]) -> Hom(Z ⊗ X, Y)`.
    pub fn uncurry(&self, g: &VMap, x: VObj, y: VObj) -> Result<VMap> {
        let ev = self.eval(x, y)?;
        let gx = self.tensor(g, &self.identity(x))?;
        self.compose(&ev, &gx)
    }

    /// The element `I -> X` picking point / vector `v`.
    pub fn point(&self, x: VObj, i: usize) -> VMap {
        self.index_map(self.unit_obj(), x, |_| i)
    }

    /// Elements of a FinVect object as maps from the unit.
    pub fn vector(&self, x: VObj, entries: Vec<(usize, Scalar)>) -> Result<VMap> {
        self.matrix_map(Mat::from_columns(x.0, vec![entries]))
    }

    /// Name of a map `X -> Y` as an element `I -> [X, Y]`.
    pub fn name_of(&self, f: &VMap) -> Result<VMap> {
        self.curry(f, self.unit_obj(), f.dom)
    }

    /// Inverse of [`BaseCtx::name_of`].
    pub fn unname(&self, e: &VMap, x: VObj, y: VObj) -> Result<VMap> {
        self.uncurry(e, x, y)
    }

    /// The unique map to the terminal object (FinSet only has one).
    pub fn zero_map(&self, dom: VObj, cod: VObj) -> Result<VMap> {
        match self {
            BaseCtx::FinVect(_) => self.matrix_map(Mat::zero(cod.0, dom.0)),
            BaseCtx::FinSet => Err(KanError::CtxMismatch("no zero maps in FinSet".into())),
        }
    }

    pub fn add(&self, f: &VMap, g: &VMap) -> Result<VMap> {
        self.linear_combine(f, g, false)
    }

    pub fn sub(&self, f: &VMap, g: &VMap) -> Result<VMap> {
        self.linear_combine(f, g, true)
    }

    fn linear_combine(&self, f: &VMap, g: &VMap, negate: bool) -> Result<VMap> {
        check_ctx(*self, f.ctx)?;
        check_ctx(*self, g.ctx)?;
        if f.dom != g.dom || f.cod != g.cod {
            return Err(KanError::Boundary("sum of maps with different boundaries".into()));
        }
        let field = self
            .field()
            .ok_or_else(|| KanError::CtxMismatch("linear operations need FinVect".into()))?;
        let (fm, gm) = (f.matrix().unwrap(), g.matrix().unwrap());
        let m = if negate { Mat::sub(field, fm, gm) } else { Mat::add(field, fm, gm) };
        self.matrix_map(m)
    }

    pub fn scale(&self, s: &Scalar, f: &VMap) -> Result<VMap> {
        let field = self
            .field()
            .ok_or_else(|| KanError::CtxMismatch("linear operations need FinVect".into()))?;
        self.matrix_map(Mat::scale(field, s, f.matrix().unwrap()))
    }

    pub fn is_zero_map(&self, f: &VMap) -> bool {
        match &f.body {
            Body::Matrix(m) => m.nnz() == 0,
            Body::Table(_) => f.dom.0 == 0,
        }
    }

    /// Entry `(r, c)` of a FinVect map.
    pub fn entry(&self, f: &VMap, r: usize, c: usize) -> Scalar {
        f.matrix().map(|m| m.get(r, c)).unwrap_or_else(Scalar::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finset_compose_by_lookup() {
        let v = BaseCtx::FinSet;
        let f = VMap::from_table(VObj(2), VObj(2), vec![1, 1]).unwrap();
        let g = VMap::from_table(VObj(2), VObj(3), vec![2, 0]).unwrap();
        assert_eq!(v.compose(&g, &f).unwrap().table().unwrap(), &[0, 0]);
        assert!(v.compose(&f, &g).is_err());
    }

    #[test]
    fn f5_scalar_composition() {
        let f5 = Field::prime(5).unwrap();
        let v = BaseCtx::FinVect(f5);
        let a = v.matrix_map(Mat::from_dense(1, 1, &[vec![f5.from_int(2)]])).unwrap();
        let b = v.matrix_map(Mat::from_dense(1, 1, &[vec![f5.from_int(3)]])).unwrap();
        let c = v.compose(&a, &b).unwrap();
        assert_eq!(v.entry(&c, 0, 0), f5.from_int(1));
    }

    #[test]
    fn identity_matrix_over_q() {
        let v = BaseCtx::FinVect(Field::Rationals);
        let id = v.identity(VObj(3));
        assert_eq!(id.matrix().unwrap(), &Mat::identity(3));
    }

    #[test]
    fn ctx_mixing_rejected() {
        let a = BaseCtx::FinVect(Field::Rationals).identity(VObj(1));
        let b = BaseCtx::FinVect(Field::Prime(5)).identity(VObj(1));
        assert!(matches!(
            BaseCtx::FinVect(Field::Rationals).compose(&a, &b),
            Err(KanError::CtxMismatch(_))
        ));
    }

    #[test]
    fn tensor_sizes_and_symmetry() {
        for v in [BaseCtx::FinSet, BaseCtx::FinVect(Field::Rationals)] {
            assert_eq!(v.tensor_obj(VObj(2), VObj(3)), VObj(6));
            let s = v.symmetry(VObj(2), VObj(3));
            let t = v.symmetry(VObj(3), VObj(2));
            assert_eq!(v.compose(&t, &s).unwrap(), v.identity(VObj(6)));
            let x = VObj(4);
            let right_unit = v.tensor(&v.identity(x), &v.identity(v.unit_obj())).unwrap();
            assert_eq!(right_unit, v.unitor(x));
        }
    }

    #[test]
    fn internal_hom_sizes() {
        assert_eq!(BaseCtx::FinSet.internal_hom(VObj(2), VObj(3)).unwrap(), VObj(9));
        let q = BaseCtx::FinVect(Field::Rationals);
        assert_eq!(q.internal_hom(VObj(2), VObj(3)).unwrap(), VObj(6));
        assert!(BaseCtx::FinSet.internal_hom(VObj(40), VObj(40)).is_err());
    }

    #[test]
    fn permute_matches_symmetry() {
        let v = BaseCtx::FinSet;
        assert_eq!(v.permute(&[VObj(2), VObj(3)], &[1, 0]), v.symmetry(VObj(2), VObj(3)));
    }
}
