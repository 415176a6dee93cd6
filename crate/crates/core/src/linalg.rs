//! Dense exact linear algebra over a field scalar.
//!
//! The matrix type is generic over any exact field implementing the
//! num-traits bounds in [`Scalar`]; the library instantiates it at the
//! crate-root alias `Rat`. Null spaces over `Rat` are computed by
//! fraction-free (Bareiss) elimination on a denominator-cleared integer
//! matrix and returned as primitive integer vectors with positive leading
//! sign, so kernel bases are reproducible across runs. A plain field-RREF
//! route is kept alongside as an independent cross-check.

use std::fmt::Debug;

use num::traits::NumAssign;
use num::{Integer, Signed, Zero};

use crate::{Int, Rat};

/// Field bounds needed by the generic elimination routines.
pub trait Scalar: NumAssign + Signed + Clone + PartialEq + Debug {}
impl<T: NumAssign + Signed + Clone + PartialEq + Debug> Scalar for T {}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let term = a.clone() * other.at(k, c).clone();
                    *out.at_mut(r, c) += term;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for c in 0..self.cols {
                    if !self.at(r, c).is_zero() && !v[c].is_zero() {
                        acc += self.at(r, c).clone() * v[c].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Stack matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[&Mat<T>]) -> Self {
        assert!(!parts.is_empty());
        let cols = parts[0].cols;
        assert!(parts.iter().all(|m| m.cols == cols), "shape mismatch");
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in parts {
            data.extend(m.data.iter().cloned());
        }
        Mat { rows, cols, data }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            for c in 0..self.cols {
                self.data.swap(row * self.cols + c, pr * self.cols + c);
            }
            let inv = T::one() / self.at(row, col).clone();
            for c in col..self.cols {
                let v = self.at(row, c).clone() * inv.clone();
                *self.at_mut(row, c) = v;
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for c in col..self.cols {
                        let sub = factor.clone() * self.at(row, c).clone();
                        *self.at_mut(r, c) -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Kernel basis by plain field elimination: one vector per free column,
    /// with that free coordinate set to one. Kept as the independent route
    /// against the fraction-free kernel.
    pub fn null_space_rref(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![T::zero(); self.cols];
            v[f] = T::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = T::zero() - m.at(prow, f).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One particular solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.rows, b.len(), "shape mismatch");
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, self.cols) = b[r].clone();
        }
        let pivots = aug.rref_in_place();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = aug.at(prow, self.cols).clone();
        }
        Some(x)
    }
}

/// Whether `target` lies in the span of `vectors`.
pub fn in_span<T: Scalar>(vectors: &[Vec<T>], target: &[T]) -> bool {
    if target.iter().all(Zero::is_zero) {
        return true;
    }
    if vectors.is_empty() {
        return false;
    }
    let cols = Mat::from_rows(vectors.to_vec()).transpose();
    cols.solve(target).is_some()
}

/// Kernel basis of a rational matrix by fraction-free elimination.
///
/// Each row is cleared of denominators, the integer matrix is brought to
/// echelon form with Bareiss' exact-division pivoting, and back-substitution
/// produces one kernel vector per free column. Vectors are normalized to
/// integer entries with content one and positive leading coefficient.
pub fn null_space(m: &Mat<Rat>) -> Vec<Vec<Rat>> {
    let int_rows: Vec<Vec<Int>> = (0..m.rows()).map(|r| clear_denominators(m.row(r))).collect();
    let (echelon, pivots) = bareiss_echelon(int_rows, m.cols());
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rat::zero(); m.cols()];
        v[f] = Rat::from_integer(Int::from(1));
        // Echelon rows are solved bottom-up; row i has its pivot at pivots[i].
        for i in (0..pivots.len()).rev() {
            let row = &echelon[i];
            let mut acc = Rat::zero();
            for c in (pivots[i] + 1)..m.cols() {
                if !row[c].is_zero() && !v[c].is_zero() {
                    acc += Rat::from_integer(row[c].clone()) * v[c].clone();
                }
            }
            v[pivots[i]] = -acc / Rat::from_integer(row[pivots[i]].clone());
        }
        basis.push(normalize_primitive(&v));
    }
    basis
}

/// Scale a rational vector to primitive integer form: common denominator
/// cleared, content divided out, first nonzero entry positive.
pub fn normalize_primitive(v: &[Rat]) -> Vec<Rat> {
    let mut denom_lcm = Int::from(1);
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<Int> = v.iter().map(|x| (x * Rat::from_integer(denom_lcm.clone())).to_integer()).collect();
    let mut content = Int::zero();
    for x in &ints {
        content = content.gcd(x);
    }
    if content.is_zero() {
        return v.to_vec();
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| if x.is_negative() { Int::from(-1) } else { Int::from(1) })
        .unwrap_or_else(|| Int::from(1));
    let scale = content * sign;
    ints.iter().map(|x| Rat::from_integer(x / &scale)).collect()
}

fn clear_denominators(row: &[Rat]) -> Vec<Int> {
    let mut l = Int::from(1);
    for x in row {
        l = l.lcm(x.denom());
    }
    row.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
}

/// Fraction-free forward elimination (Bareiss). Returns the echelon rows
/// that carry pivots, together with their pivot columns.
fn bareiss_echelon(mut rows: Vec<Vec<Int>>, cols: usize) -> (Vec<Vec<Int>>, Vec<usize>) {
    let n = rows.len();
    let mut pivots = Vec::new();
    let mut prev = Int::from(1);
    let mut rank = 0;
    for col in 0..cols {
        if rank == n {
            break;
        }
        let Some(pr) = (rank..n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let pivot = rows[rank][col].clone();
        for r in (rank + 1)..n {
            let lead = rows[r][col].clone();
            for c in col..cols {
                let num = &pivot * &rows[r][c] - &lead * &rows[rank][c];
                // Exact by the Bareiss identity.
                rows[r][c] = num / &prev;
            }
        }
        prev = pivot;
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    (rows, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rint};
    use proptest::prelude::*;

    fn rmat(rows: Vec<Vec<i64>>) -> Mat<Rat> {
        Mat::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rint).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_identity_pivots() {
        let m = rmat(vec![vec![2, 0], vec![0, 3]]);
        let mut r = m.clone();
        assert_eq!(r.rref_in_place(), vec![0, 1]);
        assert_eq!(r, Mat::identity(2));
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = rmat(vec![vec![1, 2, 3], vec![2, 4, 6]]);
        let basis = null_space(&m);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        // Primitive, positive leading sign.
        assert_eq!(basis[0], vec![rint(2), rint(-1), rint(0)]);
        assert_eq!(basis[1], vec![rint(3), rint(0), rint(-1)]);
    }

    #[test]
    fn solve_affine() {
        let m = rmat(vec![vec![1, 1], vec![1, -1]]);
        let x = m.solve(&[rint(3), rint(1)]).unwrap();
        assert_eq!(x, vec![rint(2), rint(1)]);
        let none = rmat(vec![vec![1, 1], vec![1, 1]]).solve(&[rint(0), rint(1)]);
        assert!(none.is_none());
    }

    #[test]
    fn span_membership() {
        let vs = vec![vec![rint(1), rint(0)], vec![rint(1), rint(1)]];
        assert!(in_span(&vs, &[rint(3), rint(2)]));
        assert!(!in_span(&vs[..1].to_vec(), &[rint(0), rint(1)]));
    }

    #[test]
    fn normalize_primitive_sign_and_content() {
        let v = vec![rat(-2, 3), rat(4, 3), Rat::zero()];
        assert_eq!(normalize_primitive(&v), vec![rint(1), rint(-2), rint(0)]);
    }

    proptest! {
        // The fraction-free kernel and the field-RREF kernel agree after
        // normalization, and both annihilate the matrix.
        #[test]
        fn kernels_agree(entries in proptest::collection::vec(-6i64..6, 12)) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let m = rmat(rows);
            let ff = null_space(&m);
            let rr: Vec<Vec<Rat>> = m.null_space_rref().iter().map(|v| normalize_primitive(v)).collect();
            prop_assert_eq!(ff.clone(), rr);
            for v in &ff {
                prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn rank_matches_kernel_dim(entries in proptest::collection::vec(-5i64..5, 9)) {
            let rows: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
            let m = rmat(rows);
            prop_assert_eq!(m.rank() + null_space(&m).len(), m.cols());
        }
    }
}
