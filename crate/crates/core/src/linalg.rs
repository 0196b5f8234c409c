//! Dense matrices over arbitrary-precision rationals.
//!
//! Vectors are columns; a linear map `V -> W` is a `dim W x dim V` matrix.
//! Everything here is exact. Ranks are computed with fraction-free (Bareiss)
//! elimination over the integers, bases with Gauss-Jordan reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// The coefficient field.
pub type Q = BigRational;

/// Shorthand for an integral rational.
pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational as `p/q`, or `p` when integral.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or `p`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Row-major integer entries.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        Matrix { rows, cols, data: entries.iter().map(|&x| q(x)).collect() }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Vec<Q>>) -> Option<Self> {
        if data.len() != rows || data.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Matrix { rows, cols, data: data.into_iter().flatten().collect() })
    }

    /// A single column.
    pub fn column_vector(v: Vec<Q>) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v }
    }

    /// Columns given as vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Q) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Self::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    /// Rectangular sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Side-by-side concatenation; all parts share a row count.
    pub fn hstack(rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        out
    }

    /// Vertical concatenation; all parts share a column count.
    pub fn vstack(cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            out.set_block(r0, 0, p);
            r0 += p.rows;
        }
        out
    }

    pub fn block_diag(parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.set_block(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pr = m.get(r, j);
                    if pr.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &f * pr;
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank by fraction-free Gaussian elimination over the integers.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows).map(|i| integral_row(self.row(i))).collect();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for i in rank + 1..self.rows {
                for j in c + 1..self.cols {
                    let v = &a[i][j] * &a[rank][c] - &a[i][c] * &a[rank][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[rank][c].clone();
            rank += 1;
        }
        rank
    }

    /// Canonical basis of the null space, as columns.
    pub fn nullspace(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vectors: Vec<Vec<Q>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect();
        Subspace::span(&Matrix::from_columns(self.cols, &vectors)).basis
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let aug = Matrix::hstack(n, &[self, &Matrix::identity(n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }
}

fn integral_row(row: &[Q]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i).iter().map(format_q).collect::<Vec<_>>().join(" ")))
            .finish()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_q).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A subspace of `Q^n` held by its reduced echelon basis.
///
/// Basis vector `j` has a 1 in coordinate `pivots[j]` and every other basis
/// vector vanishes there, so coordinates of a member are read off the pivot
/// entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the columns of `vectors`.
    pub fn span(vectors: &Matrix) -> Subspace {
        let ambient = vectors.rows();
        let (r, pivots) = vectors.transpose().rref();
        let basis = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>()).transpose();
        Subspace { ambient, basis, pivots }
    }

    pub fn kernel_of(m: &Matrix) -> Subspace {
        Subspace::span(&m.nullspace())
    }

    pub fn image_of(m: &Matrix) -> Subspace {
        Subspace::span(m)
    }

    pub fn whole(n: usize) -> Subspace {
        Subspace { ambient: n, basis: Matrix::identity(n), pivots: (0..n).collect() }
    }

    pub fn zero(n: usize) -> Subspace {
        Subspace { ambient: n, basis: Matrix::zeros(n, 0), pivots: Vec::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// The inclusion map into the ambient space (`ambient x dim`).
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        let c: Vec<Q> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        if self.basis.mul_vec(&c) == v {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coords(v).is_some()
    }

    /// Coordinates of every column of `m`, or `None` if some column leaves the subspace.
    pub fn coords_matrix(&self, m: &Matrix) -> Option<Matrix> {
        let c = m.select_rows(&self.pivots);
        if self.basis.mul(&c) == *m {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.coords_matrix(other.basis()).is_some()
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // v = B x = C y  <=>  [B | -C] (x, y) = 0
        let stacked = Matrix::hstack(self.ambient, &[&self.basis, &other.basis.neg()]);
        let null = stacked.nullspace();
        let xs = null.block(0, 0, self.dim(), null.cols());
        Subspace::span(&self.basis.mul(&xs))
    }
}

/// The quotient `Q^n / S` with coordinates on the non-pivot positions of `S`.
#[derive(Clone, Debug)]
pub struct Quotient {
    sub: Subspace,
    free: Vec<usize>,
    projection: Matrix,
}

impl Quotient {
    pub fn new(sub: Subspace) -> Quotient {
        let n = sub.ambient();
        let free: Vec<usize> = (0..n).filter(|c| !sub.pivots.contains(c)).collect();
        let select_pivots = Matrix::identity(n).select_rows(&sub.pivots);
        let reduce = Matrix::identity(n).sub(&sub.basis.mul(&select_pivots));
        let projection = reduce.select_rows(&free);
        Quotient { sub, free, projection }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.sub
    }

    /// `dim x ambient`, kernel exactly the subspace.
    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    /// A right inverse of the projection (`ambient x dim`).
    pub fn section(&self) -> Matrix {
        Matrix::identity(self.sub.ambient()).select_cols(&self.free)
    }

    /// Matrix of the endomorphism induced on the quotient by `a`, which must preserve the subspace.
    pub fn induced(&self, a: &Matrix) -> Matrix {
        self.projection.mul(&a.mul(&self.section()))
    }
}

/// Homogeneous linear systems whose unknowns are matrix blocks.
///
/// Each constraint reads `sum_t L_t * X_{b_t} * R_t = 0`. Blocks that never
/// share a constraint are solved independently.
#[derive(Clone, Debug, Default)]
pub struct BlockSystem {
    shapes: Vec<(usize, usize)>,
    constraints: Vec<Vec<(usize, Matrix, Matrix)>>,
}

impl BlockSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers an unknown `rows x cols` block and returns its id.
    pub fn add_block(&mut self, rows: usize, cols: usize) -> usize {
        self.shapes.push((rows, cols));
        self.shapes.len() - 1
    }

    pub fn block_shape(&self, b: usize) -> (usize, usize) {
        self.shapes[b]
    }

    /// Adds `sum_t left_t * X_{block_t} * right_t = 0`.
    pub fn add_constraint(&mut self, terms: Vec<(usize, Matrix, Matrix)>) {
        if let Some((_, l, r)) = terms.first() {
            let (rows, cols) = (l.rows(), r.cols());
            for (b, l2, r2) in &terms {
                assert_eq!((l2.cols(), r2.rows()), self.shapes[*b], "constraint term shape mismatch");
                assert_eq!((l2.rows(), r2.cols()), (rows, cols), "constraint terms disagree");
            }
            self.constraints.push(terms);
        }
    }

    /// Convenience for the common `A X_i - X_j B = 0`.
    pub fn add_commutation(&mut self, left: Matrix, i: usize, j: usize, right: Matrix) {
        let ci = self.shapes[i].1;
        let rj = self.shapes[j].0;
        self.add_constraint(vec![(i, left, Matrix::identity(ci)), (j, Matrix::identity(rj).neg(), right)]);
    }

    /// A basis of the solution space; each element lists every block.
    pub fn solve(&self) -> Vec<Vec<Matrix>> {
        let nb = self.shapes.len();
        let mut parent: Vec<usize> = (0..nb).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        for c in &self.constraints {
            let r0 = find(&mut parent, c[0].0);
            for (b, _, _) in c.iter().skip(1) {
                let rb = find(&mut parent, *b);
                if rb != r0 {
                    parent[rb] = r0;
                }
            }
        }
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut comp_of = vec![usize::MAX; nb];
        for b in 0..nb {
            let r = find(&mut parent, b);
            if comp_of[r] == usize::MAX {
                comp_of[r] = components.len();
                components.push(Vec::new());
            }
            let c = comp_of[r];
            comp_of[b] = c;
            components[c].push(b);
        }
        let mut constraints_of: Vec<Vec<usize>> = vec![Vec::new(); components.len()];
        for (i, c) in self.constraints.iter().enumerate() {
            constraints_of[comp_of[c[0].0]].push(i);
        }

        let mut basis = Vec::new();
        for (ci, blocks) in components.iter().enumerate() {
            let mut offset = vec![usize::MAX; nb];
            let mut n = 0;
            for &b in blocks {
                offset[b] = n;
                n += self.shapes[b].0 * self.shapes[b].1;
            }
            if n == 0 {
                continue;
            }
            let mut reducer = RowReducer::new(n);
            for &k in &constraints_of[ci] {
                let terms = &self.constraints[k];
                let (rows, cols) = (terms[0].1.rows(), terms[0].2.cols());
                for a in 0..rows {
                    for bcol in 0..cols {
                        let mut eq = vec![Q::zero(); n];
                        let mut nonzero = false;
                        for (blk, l, r) in terms {
                            let bc = self.shapes[*blk].1;
                            for p in 0..l.cols() {
                                let lp = l.get(a, p);
                                if lp.is_zero() {
                                    continue;
                                }
                                for qq in 0..r.rows() {
                                    let rq = r.get(qq, bcol);
                                    if rq.is_zero() {
                                        continue;
                                    }
                                    eq[offset[*blk] + p * bc + qq] += lp * rq;
                                    nonzero = true;
                                }
                            }
                        }
                        if nonzero {
                            reducer.push(eq);
                        }
                    }
                }
            }
            for v in reducer.nullspace() {
                let mut sol: Vec<Matrix> = self.shapes.iter().map(|&(r, c)| Matrix::zeros(r, c)).collect();
                for &b in blocks {
                    let (r, c) = self.shapes[b];
                    sol[b] = Matrix::from_fn(r, c, |i, j| v[offset[b] + i * c + j].clone());
                }
                basis.push(sol);
            }
        }
        basis
    }

    /// Dimension of the solution space.
    pub fn solution_dim(&self) -> usize {
        self.solve().len()
    }
}

/// Incremental Gauss-Jordan elimination keeping a fully reduced row set.
struct RowReducer {
    n: usize,
    rows: Vec<(usize, Vec<Q>)>,
}

impl RowReducer {
    fn new(n: usize) -> Self {
        RowReducer { n, rows: Vec::new() }
    }

    fn push(&mut self, mut eq: Vec<Q>) {
        for (p, row) in &self.rows {
            if eq[*p].is_zero() {
                continue;
            }
            let f = eq[*p].clone();
            for (e, r) in eq.iter_mut().zip(row) {
                if !r.is_zero() {
                    *e -= &f * r;
                }
            }
        }
        let Some(p) = eq.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let inv = eq[p].recip();
        for e in eq.iter_mut() {
            if !e.is_zero() {
                *e *= &inv;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (r, e) in row.iter_mut().zip(&eq) {
                if !e.is_zero() {
                    *r -= &f * e;
                }
            }
        }
        self.rows.push((p, eq));
    }

    fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut is_pivot = vec![false; self.n];
        for (p, _) in &self.rows {
            is_pivot[*p] = true;
        }
        (0..self.n)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Q::zero(); self.n];
                v[f] = Q::one();
                for (p, row) in &self.rows {
                    if !row[f].is_zero() {
                        v[*p] = -row[f].clone();
                    }
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_singular_and_regular() {
        let a = Matrix::from_i64(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.rref().1.len(), 2);
        assert_eq!(Matrix::identity(4).rank(), 4);
        assert_eq!(Matrix::zeros(2, 5).rank(), 0);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = Matrix::from_i64(2, 4, &[1, 1, 0, 2, 0, 1, 1, -1]);
        let n = a.nullspace();
        assert_eq!(n.cols(), 2);
        assert!(a.mul(&n).is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let a = Matrix::from_i64(2, 2, &[2, 1, 1, 1]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(Matrix::from_i64(2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }

    #[test]
    fn subspace_coordinates_and_quotient() {
        let s = Subspace::span(&Matrix::from_i64(3, 1, &[1, 1, 1]));
        assert_eq!(s.dim(), 1);
        assert_eq!(s.coords(&[q(2), q(2), q(2)]), Some(vec![q(2)]));
        assert!(!s.contains(&[q(1), q(0), q(0)]));
        let quo = Quotient::new(s.clone());
        assert_eq!(quo.dim(), 2);
        assert!(quo.projection().mul(s.basis()).is_zero());
        assert!(quo.projection().mul(&quo.section()).is_identity());
    }

    #[test]
    fn parse_and_format_rationals() {
        let x = parse_q("-3/6").unwrap();
        assert_eq!(format_q(&x), "-1/2");
        assert_eq!(format_q(&parse_q("4").unwrap()), "4");
        assert!(parse_q("1/0").is_none());
    }

    #[test]
    fn block_system_commutant_of_swap() {
        // X commuting with the swap matrix on Q^2: 2-dimensional.
        let swap = Matrix::from_i64(2, 2, &[0, 1, 1, 0]);
        let mut sys = BlockSystem::new();
        let x = sys.add_block(2, 2);
        sys.add_commutation(swap.clone(), x, x, swap);
        assert_eq!(sys.solution_dim(), 2);
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span(&Matrix::from_i64(3, 2, &[1, 0, 0, 1, 0, 0]));
        let b = Subspace::span(&Matrix::from_i64(3, 2, &[0, 0, 1, 0, 0, 1]));
        assert_eq!(a.intersection(&b).dim(), 1);
    }
}
