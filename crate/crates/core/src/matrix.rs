//! Dense integer matrices with arbitrary-precision entries, and the two
//! normal forms everything else is built on.
//!
//! `smith_normal_form` returns `U * A * V = D` with `U`, `V` unimodular and
//! `D` diagonal satisfying the divisibility chain `d1 | d2 | ...` with
//! nonnegative entries. The inverses of `U` and `V` are accumulated
//! alongside, so callers get change-of-basis witnesses in both directions
//! for free.
//!
//! `column_hermite` returns the canonical column-style Hermite form of the
//! column span: pivots positive, pivot rows strictly increasing, entries
//! left of a pivot reduced into `[0, pivot)`, zero columns dropped. Two
//! matrices have equal column span iff their Hermite forms are identical,
//! which is what makes coset representatives and subgroup comparison
//! canonical.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A `rows x cols` integer matrix, row-major, exact entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds from row slices of machine integers; handy in tests and
    /// presets.
    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// Builds a matrix whose columns are the given vectors, each of length
    /// `rows`. An empty list yields a `rows x 0` matrix.
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        assert!(cols.iter().all(|v| v.len() == rows), "column length mismatch");
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<BigInt>> + '_ {
        (0..self.cols).map(|j| self.column(j))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Horizontal concatenation; all blocks must share the row count.
    pub fn hstack(blocks: &[&IntMatrix]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows), "row count mismatch");
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zero(rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    m[(i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.cols;
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(alloc::format!(
                "{}x{} * {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("add shape mismatch".to_string()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            &self[(i, j)] + &other[(i, j)]
        }))
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("sub shape mismatch".to_string()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            &self[(i, j)] - &other[(i, j)]
        }))
    }

    pub fn neg(&self) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
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

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

    /// row[dst] += q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = q * &self[(src, j)];
            self[(dst, j)] += t;
        }
    }

    /// col[dst] += q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = q * &self[(i, src)];
            self[(i, dst)] += t;
        }
    }

    fn drop_cols_from(&mut self, keep: usize) {
        let mut data = Vec::with_capacity(self.rows * keep);
        for i in 0..self.rows {
            for j in 0..keep {
                data.push(self[(i, j)].clone());
            }
        }
        self.cols = keep;
        self.data = data;
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Smith decomposition `U * A * V = D` with both inverse witnesses.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithNormalForm {
    /// The nonzero diagonal entries `d1 | d2 | ... | d_rank`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Pivot choice: minimal absolute value among nonzero entries of the
/// trailing submatrix, ties broken by row then column order. Deterministic,
/// and keeps coefficient growth modest in practice.
fn min_abs_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            if a[(i, j)].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some(b) => {
                    if a[(i, j)].abs() < a[b].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithNormalForm {
    let (n, m) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(n);
    let mut u_inv = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(m);
    let mut v_inv = IntMatrix::identity(m);

    // Row op on D mirrors onto U; the inverse op accumulates on U_inv so
    // that U * U_inv = I is maintained. Same for columns with V.
    macro_rules! rswap {
        ($i:expr, $j:expr) => {{
            d.swap_rows($i, $j);
            u.swap_rows($i, $j);
            u_inv.swap_cols($i, $j);
        }};
    }
    macro_rules! cswap {
        ($i:expr, $j:expr) => {{
            d.swap_cols($i, $j);
            v.swap_cols($i, $j);
            v_inv.swap_rows($i, $j);
        }};
    }
    macro_rules! rneg {
        ($i:expr) => {{
            d.negate_row($i);
            u.negate_row($i);
            u_inv.negate_col($i);
        }};
    }
    macro_rules! raxpy {
        // row[dst] += q * row[src]
        ($dst:expr, $src:expr, $q:expr) => {{
            let q: BigInt = $q;
            d.row_axpy($dst, $src, &q);
            u.row_axpy($dst, $src, &q);
            u_inv.col_axpy($src, $dst, &(-&q));
        }};
    }
    macro_rules! caxpy {
        // col[dst] += q * col[src]
        ($dst:expr, $src:expr, $q:expr) => {{
            let q: BigInt = $q;
            d.col_axpy($dst, $src, &q);
            v.col_axpy($dst, $src, &q);
            v_inv.row_axpy($src, $dst, &(-&q));
        }};
    }

    let mut k = 0;
    while k < n.min(m) {
        let Some((pi, pj)) = min_abs_pivot(&d, k) else {
            break;
        };
        rswap!(k, pi);
        cswap!(k, pj);
        if d[(k, k)].is_negative() {
            rneg!(k);
        }
        loop {
            // Clear column k below the pivot and row k right of it. With a
            // min-abs pivot the floor-division remainders strictly shrink,
            // so re-picking the pivot terminates.
            let mut dirty = false;
            for i in k + 1..n {
                if !d[(i, k)].is_zero() {
                    let q = d[(i, k)].div_floor(&d[(k, k)]);
                    raxpy!(i, k, -q);
                    dirty = dirty || !d[(i, k)].is_zero();
                }
            }
            for j in k + 1..m {
                if !d[(k, j)].is_zero() {
                    let q = d[(k, j)].div_floor(&d[(k, k)]);
                    caxpy!(j, k, -q);
                    dirty = dirty || !d[(k, j)].is_zero();
                }
            }
            if dirty {
                let (pi, pj) = min_abs_pivot(&d, k).expect("nonzero residue exists");
                rswap!(k, pi);
                cswap!(k, pj);
                if d[(k, k)].is_negative() {
                    rneg!(k);
                }
                continue;
            }
            // Row and column are clear; enforce that the pivot divides the
            // whole trailing submatrix before moving on.
            let mut offender = None;
            'scan: for i in k + 1..n {
                for j in k + 1..m {
                    if !d[(i, j)].mod_floor(&d[(k, k)]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    raxpy!(k, i, BigInt::one());
                    let (pi, pj) = min_abs_pivot(&d, k).expect("pivot persists");
                    rswap!(k, pi);
                    cswap!(k, pj);
                    if d[(k, k)].is_negative() {
                        rneg!(k);
                    }
                }
                None => break,
            }
        }
        k += 1;
    }

    SmithNormalForm {
        u,
        u_inv,
        d,
        v,
        v_inv,
        rank: k,
    }
}

/// Canonical column-style Hermite form of the column span of `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    /// Echelon matrix; zero columns dropped.
    pub h: IntMatrix,
    /// `(row, col)` of each pivot, columns in order, pivot rows strictly
    /// increasing.
    pub pivots: Vec<(usize, usize)>,
}

pub fn column_hermite(a: &IntMatrix) -> HermiteForm {
    let n = a.rows();
    let mut h = a.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next = 0usize; // next pivot column slot

    for r in 0..n {
        if next == h.cols() {
            break;
        }
        loop {
            // Minimal |entry| in row r among active columns.
            let mut best: Option<usize> = None;
            for c in next..h.cols() {
                if h[(r, c)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(c),
                    Some(b) => {
                        if h[(r, c)].abs() < h[(r, b)].abs() {
                            best = Some(c);
                        }
                    }
                }
            }
            let Some(cm) = best else {
                break; // row r has no pivot; move on
            };
            let mut dirty = false;
            for c in next..h.cols() {
                if c == cm || h[(r, c)].is_zero() {
                    continue;
                }
                let q = h[(r, c)].div_floor(&h[(r, cm)]);
                h.col_axpy(c, cm, &-q);
                dirty = dirty || !h[(r, c)].is_zero();
            }
            if dirty {
                continue;
            }
            h.swap_cols(next, cm);
            if h[(r, next)].is_negative() {
                h.negate_col(next);
            }
            // Canonical reduction of already-placed columns at this pivot
            // row: entries land in [0, pivot).
            for c in 0..next {
                let q = h[(r, c)].div_floor(&h[(r, next)]);
                h.col_axpy(c, next, &-q);
            }
            pivots.push((r, next));
            next += 1;
            break;
        }
    }
    h.drop_cols_from(next);
    HermiteForm { h, pivots }
}

impl HermiteForm {
    /// Reduces `v` to the canonical representative of `v + colspan`.
    /// Membership in the column span is `reduce(v) == 0`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.h.rows(), "vector length mismatch");
        let mut w = v.to_vec();
        for &(r, c) in &self.pivots {
            let q = w[r].div_floor(&self.h[(r, c)]);
            if q.is_zero() {
                continue;
            }
            for i in 0..w.len() {
                let t = &q * &self.h[(i, c)];
                w[i] -= t;
            }
        }
        w
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }
}

/// Solves `A x = b` over the integers; `None` when no integral solution
/// exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_with(&smith_normal_form(a), b)
}

/// Same as [`solve`] but reusing a precomputed decomposition of `A`.
pub fn solve_with(snf: &SmithNormalForm, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = snf.d.rows();
    let m = snf.d.cols();
    assert_eq!(b.len(), n, "rhs length mismatch");
    let c = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); m];
    for i in 0..n {
        if i < snf.rank {
            let (q, r) = c[i].div_rem(&snf.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// A basis (as matrix columns) of the lattice `{ x : A x = 0 }`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    kernel_basis_with(&snf)
}

pub fn kernel_basis_with(snf: &SmithNormalForm) -> IntMatrix {
    let m = snf.d.cols();
    let cols: Vec<Vec<BigInt>> = (snf.rank..m).map(|j| snf.v.column(j)).collect();
    IntMatrix::from_columns(m, &cols)
}

pub fn rank(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank
}

/// Fraction-free (Bareiss) determinant; independent of the normal-form
/// code, which makes it a usable cross-check on unimodularity.
pub fn det_bareiss(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows(), a.cols(), "determinant of non-square matrix");
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                m[(i, j)] = t / &prev;
            }
        }
        for i in k + 1..n {
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    sign * m[(n - 1, n - 1)].clone()
}
