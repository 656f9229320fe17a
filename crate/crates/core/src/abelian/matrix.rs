use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn scalar(n: usize, k: &BigInt) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = k.clone();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors; `rows` is needed
    /// when the list is empty.
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &self[(i, j)] * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out[(r, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (c, &j) in idx.iter().enumerate() {
                out[(i, c)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn top_rows(&self, n: usize) -> IntMatrix {
        self.select_rows(&(0..n).collect::<Vec<_>>())
    }

    pub fn pow(&self, e: usize) -> IntMatrix {
        assert_eq!(self.rows, self.cols);
        let mut result = Self::identity(self.rows);
        for _ in 0..e {
            result = result.mul(self);
        }
        result
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `d = u * m * v` together with `u⁻¹`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Snf {
    /// The diagonal `d_0 | d_1 | …` (length `min(rows, cols)`, zeros last).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

struct SnfState {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl SnfState {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        for r in 0..self.u_inv.rows() {
            let v = -&self.u_inv[(r, i)];
            self.u_inv[(r, i)] = v;
        }
    }

    /// Position of the smallest nonzero entry in the lower-right block.
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

/// Exact Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let mut st = SnfState {
        a: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
    };
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = st.min_entry(t) else {
            break;
        };
        st.swap_rows(t, pi);
        st.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..r {
                if st.a[(i, t)].is_zero() {
                    continue;
                }
                let q = st.a[(i, t)].div_floor(&st.a[(t, t)]);
                st.add_row(i, t, &-q);
                if !st.a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if st.a[(t, j)].is_zero() {
                    continue;
                }
                let q = st.a[(t, j)].div_floor(&st.a[(t, t)]);
                st.add_col(j, t, &-q);
                if !st.a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // bring the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..r {
                    let x = &st.a[(i, t)];
                    if !x.is_zero() && x.abs() < st.a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    let x = &st.a[(t, j)];
                    if !x.is_zero() && x.abs() < st.a[best].abs() {
                        best = (t, j);
                    }
                }
                st.swap_rows(t, best.0);
                st.swap_cols(t, best.1);
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = st.a[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !st.a[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => st.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if st.a[(t, t)].is_negative() {
            st.negate_row(t);
        }
        t += 1;
    }
    Snf {
        u: st.u,
        u_inv: st.u_inv,
        d: st.a,
        v: st.v,
        rank: t,
    }
}

/// Basis (as columns) of the integer kernel `{x : m x = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let idx: Vec<usize> = (snf.rank..m.cols()).collect();
    snf.v.select_cols(&idx)
}

/// One integer solution of `m x = b`, if any exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    solve_with_snf(&snf, m.cols(), b)
}

pub fn solve_with_snf(snf: &Snf, ncols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ub = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); ncols];
    for (i, x) in ub.iter().enumerate() {
        if i < snf.rank {
            let d = &snf.d[(i, i)];
            let (q, rem) = x.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !x.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Hermite basis of a full-rank lattice spanned by the columns of `gens`:
/// an `n × n` upper-triangular matrix with positive diagonal whose
/// above-diagonal entries are reduced into `[0, h_ii)`.
pub fn hnf_upper(gens: &IntMatrix) -> Option<IntMatrix> {
    let n = gens.rows();
    let mut cols: Vec<Vec<BigInt>> = gens.columns();
    let mut basis: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    for i in (0..n).rev() {
        loop {
            let nonzero: Vec<usize> = (0..cols.len()).filter(|&k| !cols[k][i].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let piv = *nonzero
                .iter()
                .min_by(|&&x, &&y| cols[x][i].abs().cmp(&cols[y][i].abs()))
                .unwrap();
            for &k in &nonzero {
                if k == piv {
                    continue;
                }
                let q = cols[k][i].div_floor(&cols[piv][i]);
                let pivot = cols[piv].clone();
                for (x, p) in cols[k].iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
            }
        }
        let pos = (0..cols.len()).find(|&k| !cols[k][i].is_zero())?;
        let mut piv = cols.swap_remove(pos);
        if piv[i].is_negative() {
            for x in piv.iter_mut() {
                *x = -&*x;
            }
        }
        basis[i] = piv;
    }
    let mut h = IntMatrix::from_columns(n, &basis);
    for j in 0..n {
        for i in (0..j).rev() {
            let q = h[(i, j)].div_floor(&h[(i, i)]);
            if !q.is_zero() {
                h.add_col_multiple(j, i, &-q);
            }
        }
    }
    Some(h)
}

/// A basis (as columns) of the lattice spanned by the columns of `gens`,
/// of any rank.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(&gens.transpose());
    // rows of u * gensᵀ = d * v⁻¹ ; the first `rank` rows span the row lattice of gensᵀ
    let rows = snf.u.mul(&gens.transpose());
    let idx: Vec<usize> = (0..snf.rank).collect();
    rows.select_rows(&idx).transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn check_snf(a: &IntMatrix) -> Vec<BigInt> {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "d != u m v");
        assert!(s.u.mul(&s.u_inv) == IntMatrix::identity(a.rows()));
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        let diag = s.diagonal();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero(), "zero before nonzero: {diag:?}");
            } else {
                assert!(w[1].is_multiple_of(&w[0]), "divisibility chain broken: {diag:?}");
            }
        }
        diag
    }

    #[test]
    fn snf_examples() {
        let d = check_snf(&m(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(4)]);
        let d = check_snf(&IntMatrix::identity(3));
        assert_eq!(d, vec![BigInt::one(); 3]);
        let d = check_snf(&IntMatrix::zeros(2, 3));
        assert!(d.iter().all(Zero::is_zero));
    }

    #[test]
    fn snf_rectangular_and_singular() {
        check_snf(&m(&[vec![2, 0, 0], vec![0, 3, 0]]));
        let d = check_snf(&m(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]));
        assert_eq!(d[2], BigInt::zero());
        check_snf(&m(&[vec![6, 10], vec![15, 21], vec![0, 35]]));
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[vec![1, 2, 3], vec![4, 5, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        let b = vec![BigInt::from(6), BigInt::from(15)];
        let x = solve_integer(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(solve_integer(&m(&[vec![2]]), &[BigInt::from(3)]).is_none());
    }

    #[test]
    fn hnf_of_ideal_lattice() {
        // (2,0),(1,1),(0,2) span an index-2 sublattice of Z^2
        let h = hnf_upper(&m(&[vec![2, 1, 0], vec![0, 1, 2]])).unwrap();
        assert_eq!(h.determinant(), BigInt::from(2));
        assert_eq!(h[(1, 0)], BigInt::zero());
        assert!(h[(0, 1)] >= BigInt::zero() && h[(0, 1)] < h[(0, 0)]);
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(m(&[vec![2, 1], vec![7, 4]]).determinant(), BigInt::from(1));
        assert_eq!(m(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]).determinant(), BigInt::from(-2));
    }
}
