//! Finite groups and monoids given by multiplication tables.

use crate::error::{KanError, Result};

/// A finite monoid; `mul[x][y] = x·y`, elements `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    pub names: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    pub unit: usize,
}

impl FiniteMonoid {
    pub fn new(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<FiniteMonoid> {
        let n = mul.len();
        if names.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|v| *v >= n)) {
            return Err(KanError::InvalidTable("table is not square over its elements".into()));
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if mul[mul[x][y]][z] != mul[x][mul[y][z]] {
                        return Err(KanError::InvalidTable(format!("not associative at ({x},{y},{z})")));
                    }
                }
            }
        }
        let unit = (0..n)
            .find(|e| (0..n).all(|x| mul[*e][x] == x && mul[x][*e] == x))
            .ok_or_else(|| KanError::InvalidTable("no two-sided unit".into()))?;
        Ok(FiniteMonoid { names, mul, unit })
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn trivial() -> FiniteMonoid {
        FiniteMonoid::new(vec!["e".into()], vec![vec![0]]).expect("valid")
    }

    /// `{e, x, y}` with `x·z = x`, `y·z = y` for every `z`.
    pub fn left_zero_with_unit() -> FiniteMonoid {
        FiniteMonoid::new(
            vec!["e".into(), "x".into(), "y".into()],
            vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]],
        )
        .expect("valid")
    }

    pub fn cyclic(n: usize) -> FiniteMonoid {
        FiniteGroup::cyclic(n).monoid
    }
}

/// A finite group; a monoid in which every element is invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub monoid: FiniteMonoid,
    pub inv: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let monoid = FiniteMonoid::new(names, mul)?;
        let n = monoid.order();
        let inv = (0..n)
            .map(|x| {
                (0..n)
                    .find(|y| monoid.mul[x][*y] == monoid.unit && monoid.mul[*y][x] == monoid.unit)
                    .ok_or_else(|| KanError::InvalidTable(format!("element {x} has no inverse")))
            })
            .collect::<Result<_>>()?;
        Ok(FiniteGroup { monoid, inv })
    }

    pub fn order(&self) -> usize {
        self.monoid.order()
    }

    pub fn unit(&self) -> usize {
        self.monoid.unit
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.monoid.mul[x][y]
    }

    pub fn names(&self) -> &[String] {
        &self.monoid.names
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let names = (0..n).map(|i| format!("g{i}")).collect();
        let mul = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        FiniteGroup::new(names, mul).expect("cyclic group")
    }

    /// Permutations of three points in lexicographic order, `(σ·τ)(i) = σ(τ(i))`.
    pub fn symmetric3() -> FiniteGroup {
        let mut perms: Vec<[usize; 3]> = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    if a != b && b != c && a != c {
                        perms.push([a, b, c]);
                    }
                }
            }
        }
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mul = perms
            .iter()
            .map(|s| perms.iter().map(|t| index([s[t[0]], s[t[1]], s[t[2]]])).collect())
            .collect();
        let names = perms.iter().map(|p| format!("{}{}{}", p[0], p[1], p[2])).collect();
        FiniteGroup::new(names, mul).expect("S3")
    }

    /// Subgroup inclusion given by images of elements, checked to be a homomorphism.
    pub fn check_hom(&self, target: &FiniteGroup, images: &[usize]) -> Result<()> {
        for x in 0..self.order() {
            for y in 0..self.order() {
                if images[self.mul(x, y)] != target.mul(images[x], images[y]) {
                    return Err(KanError::InvalidTable("not a homomorphism".into()));
                }
            }
        }
        Ok(())
    }

    /// Number of conjugacy classes.
    pub fn class_count(&self) -> usize {
        let n = self.order();
        let mut class = vec![usize::MAX; n];
        let mut count = 0;
        for x in 0..n {
            if class[x] != usize::MAX {
                continue;
            }
            for g in 0..n {
                class[self.mul(self.mul(g, x), self.inv[g])] = count;
            }
            count += 1;
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_is_a_nonabelian_group() {
        let g = FiniteGroup::symmetric3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.class_count(), 3);
        assert!((0..6).any(|x| (0..6).any(|y| g.mul(x, y) != g.mul(y, x))));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteMonoid::new(vec!["a".into(), "b".into()], vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(FiniteGroup::new(
            vec!["e".into(), "z".into()],
            vec![vec![0, 1], vec![1, 1]]
        )
        .is_err());
    }

    #[test]
    fn left_zero_monoid_unit() {
        let m = FiniteMonoid::left_zero_with_unit();
        assert_eq!(m.unit, 0);
        assert_eq!(m.mul[1][2], 1);
    }
}
