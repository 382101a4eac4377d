//! Exact integer linear algebra: Hermite and Smith normal forms, cokernels,
//! and small fixed-width helpers (determinants, ranks, hyperplane normals)
//! used by the geometry modules.
//!
//! Normal-form computations run on arbitrary-precision integers since
//! intermediate entries of unimodular transforms grow quickly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::vector::IntVector;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntMatrix {
            nrows,
            ncols,
            data: vec![BigInt::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have the
    /// same length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { nrows, ncols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[IntVector]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, |c| c.rank());
        let mut m = Self::zeros(nrows, ncols);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..nrows {
                m.data[i * ncols + j] = BigInt::from(c[i]);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t.data[j * self.nrows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch in product");
        let mut out = Self::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    out.data[i * rhs.ncols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    /// Entries as machine integers, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self.get(i, j).to_i64()).collect())
            .collect()
    }

    pub fn row_i64(&self, i: usize) -> Option<Vec<i64>> {
        (0..self.ncols).map(|j| self.get(i, j).to_i64()).collect()
    }

    /// Determinant of a square matrix (fraction-free Bareiss elimination).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.nrows, self.ncols, "determinant of a non-square matrix");
        let n = self.nrows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.nrows == self.ncols && self.det().abs().is_one()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.nrows {
            self.data.swap(i * self.ncols + a, i * self.ncols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.ncols {
            let v = self.get(src, j) * k;
            self.data[dst * self.ncols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.nrows {
            let v = self.get(i, src) * k;
            self.data[i * self.ncols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.ncols {
            let v = -self.get(r, j);
            self.data[r * self.ncols + j] = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.nrows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.ncols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U * A = H`.
///
/// `H` is in row echelon form, every pivot is positive and every entry above
/// a pivot lies in `[0, pivot)`. Zero rows sit at the bottom.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let m = a.nrows;
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..a.ncols {
        if r == m {
            break;
        }
        // Euclid down the column until a single nonzero entry remains at r.
        loop {
            let pivot = (r..m)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&x, &y| h.get(x, c).abs().cmp(&h.get(y, c).abs()));
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -h.get(i, c).div_floor(h.get(r, c));
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h.get(i, c).div_floor(h.get(r, c));
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `S`: nonnegative, each dividing the next, zeros at the tail.
    pub invariant_factors: Vec<BigInt>,
}

pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.nrows, a.ncols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let k = m.min(n);
    for t in 0..k {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = s.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -s.get(i, t).div_floor(s.get(t, t));
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= s.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -s.get(t, j).div_floor(s.get(t, t));
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // Pivot must divide the whole trailing block.
            let p = s.get(t, t).clone();
            let offender =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !s.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    let invariant_factors = (0..k).map(|i| s.get(i, i).clone()).collect();
    SmithDecomposition {
        u,
        s,
        v,
        invariant_factors,
    }
}

/// The primitive vector on the ray through `v`.
pub fn primitive(v: &IntVector) -> Result<IntVector> {
    v.primitive()
}

/// Structure of `Z^m / colspan(A)` for an `m x n` matrix `A`: free rank and
/// torsion invariant factors (all `> 1`, each dividing the next).
pub fn cokernel_invariants(a: &IntMatrix) -> (usize, Vec<BigInt>) {
    let d = snf(a);
    let nonzero: Vec<BigInt> = d
        .invariant_factors
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect();
    let rank = a.nrows - nonzero.len();
    let torsion = nonzero.into_iter().filter(|x| !x.is_one()).collect();
    (rank, torsion)
}

/// Cokernel of the map whose columns are `cols`, with torsion as `i64`.
pub fn cokernel_of_columns(cols: &[IntVector], rank: usize) -> Result<(usize, Vec<i64>)> {
    let a = if cols.is_empty() {
        IntMatrix::zeros(rank, 0)
    } else {
        IntMatrix::from_columns(cols)
    };
    let (free, torsion) = cokernel_invariants(&a);
    let torsion = torsion
        .iter()
        .map(|x| {
            x.to_i64()
                .ok_or(Error::Overflow("cokernel invariant factor"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((free, torsion))
}

/// Fixed-width helpers for the small matrices that show up in geometry
/// (dimension at most 5). Intermediates are widened to `i128`.
pub mod small {
    use crate::vector::IntVector;

    /// Determinant of a square matrix given by rows.
    pub fn det(rows: &[&[i64]]) -> i64 {
        let n = rows.len();
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflows i64")
    }

    pub fn det_vectors(vs: &[&IntVector]) -> i64 {
        let rows: Vec<&[i64]> = vs.iter().map(|v| v.coords()).collect();
        det(&rows)
    }

    /// Rank of a list of vectors.
    pub fn rank(vs: &[&IntVector]) -> usize {
        let Some(first) = vs.first() else { return 0 };
        let ncols = first.rank();
        let mut a: Vec<Vec<i128>> = vs
            .iter()
            .map(|v| v.coords().iter().map(|&x| x as i128).collect())
            .collect();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..a.len() {
                if a[i][c] == 0 {
                    continue;
                }
                let (x, y) = (a[r][c], a[i][c]);
                for j in c..ncols {
                    a[i][j] = a[i][j] * x - a[r][j] * y;
                }
                let g = a[i].iter().fold(0i128, |g, &v| gcd128(g, v));
                if g > 1 {
                    a[i].iter_mut().for_each(|v| *v /= g);
                }
            }
            r += 1;
            if r == a.len() {
                break;
            }
        }
        r
    }

    fn gcd128(a: i128, b: i128) -> i128 {
        let (mut a, mut b) = (a.abs(), b.abs());
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }

    /// Normal vector of the hyperplane spanned by `d - 1` vectors in `Z^d`,
    /// by cofactor expansion: `<n, x> = det(rows, x)`. Zero iff the vectors
    /// are dependent.
    pub fn cofactor_normal(rows: &[IntVector], d: usize) -> IntVector {
        debug_assert_eq!(rows.len() + 1, d);
        let mut n = Vec::with_capacity(d);
        let mut minor: Vec<Vec<i64>> = vec![Vec::with_capacity(d - 1); d - 1];
        for skip in 0..d {
            for (i, r) in rows.iter().enumerate() {
                minor[i].clear();
                minor[i].extend((0..d).filter(|&j| j != skip).map(|j| r[j]));
            }
            let refs: Vec<&[i64]> = minor.iter().map(|r| r.as_slice()).collect();
            let m = det(&refs);
            // Expansion along the last row of [rows; x].
            let sign = if (d - 1 + skip).is_multiple_of(2) { 1 } else { -1 };
            n.push(sign * m);
        }
        IntVector::new(n)
    }

    /// Solves `B x = v` for square nonsingular `B` (given by columns) as
    /// `x = num / den` with `den > 0`.
    pub fn solve_columns(cols: &[&IntVector], v: &IntVector) -> Option<(Vec<i64>, i64)> {
        let d = cols.len();
        let rows_of = |replace: Option<usize>| -> Vec<Vec<i64>> {
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| if Some(j) == replace { v[i] } else { cols[j][i] })
                        .collect()
                })
                .collect()
        };
        let base = rows_of(None);
        let den = det(&base.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
        if den == 0 {
            return None;
        }
        let mut num: Vec<i64> = (0..d)
            .map(|j| {
                let m = rows_of(Some(j));
                det(&m.iter().map(|r| r.as_slice()).collect::<Vec<_>>())
            })
            .collect();
        let mut den = den;
        if den < 0 {
            den = -den;
            num.iter_mut().for_each(|x| *x = -*x);
        }
        Some((num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn factors(a: &IntMatrix) -> Vec<i64> {
        snf(a)
            .invariant_factors
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn hnf_examples() {
        let id = IntMatrix::identity(3);
        assert_eq!(hnf(&id), (id.clone(), id.clone()));

        let (h, u) = hnf(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(h, m(&[&[2, 0], &[0, 4]]));
        assert_eq!(u.mul(&m(&[&[2, 4], &[6, 8]])), h);
        assert!(u.is_unimodular());

        let z = IntMatrix::zeros(2, 2);
        assert_eq!(hnf(&z), (z.clone(), IntMatrix::identity(2)));
    }

    #[test]
    fn snf_examples() {
        assert_eq!(factors(&m(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(factors(&IntMatrix::identity(4)), vec![1, 1, 1, 1]);
        assert_eq!(factors(&m(&[&[2, 4], &[6, 8]])), vec![2, 4]);
    }

    #[test]
    fn snf_rectangular_and_zero() {
        let a = m(&[&[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(factors(&a), vec![0, 0]);
        let a = m(&[&[4, 6, 0], &[0, 0, 0]]);
        let d = snf(&a);
        assert_eq!(d.u.mul(&a).mul(&d.v), d.s);
        assert_eq!(factors(&a), vec![2, 0]);
    }

    #[test]
    fn cokernel_examples() {
        let (r, t) = cokernel_invariants(&m(&[&[5, 0, 0], &[0, 5, 0], &[0, 0, 5]]));
        assert_eq!((r, t), (0, vec![BigInt::from(5); 3]));
        assert_eq!(cokernel_invariants(&IntMatrix::identity(3)), (0, vec![]));
        assert_eq!(
            cokernel_invariants(&m(&[&[1, 0], &[0, 1], &[0, 0]])),
            (1, vec![])
        );
    }

    #[test]
    fn small_helpers() {
        assert_eq!(small::det(&[&[1, 2], &[3, 4]]), -2);
        assert_eq!(small::det(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 4]]), 24);
        let a = IntVector::from([1, 0, 0]);
        let b = IntVector::from([0, 1, 0]);
        let n = small::cofactor_normal(&[a.clone(), b.clone()], 3);
        assert_eq!(n.dot(&a), 0);
        assert_eq!(n.dot(&b), 0);
        assert!(!n.is_zero());
        assert_eq!(small::rank(&[&a, &b, &(&a + &b)]), 2);
        let (num, den) = small::solve_columns(
            &[&a, &b, &IntVector::from([1, 1, 2])],
            &IntVector::from([1, 1, 1]),
        )
        .unwrap();
        assert_eq!((num, den), (vec![1, 1, 1], 2));
    }
}
