//! Integer matrices and lattice computations: Hermite and Smith normal
//! forms, finite quotients ℤⁿ/Mℤⁿ, and enumeration of finite-index
//! sublattices.
//!
//! Entries are `i64`; all inputs in this crate are small (n ≤ 4, indices in
//! the dozens), and debug builds trap on any overflow.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// 2x2 convenience constructor, row major.
    pub fn mat2(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::from_rows(vec![vec![a, b], vec![c, d]])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        assert!(self.is_square());
        let mut out = IntMatrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| self[(i, j)] as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let swap = (k + 1..n).find(|&i| a[i][k] != 0);
                match swap {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
    }

    /// Adjugate matrix: `self * adjugate = det * I`.
    pub fn adjugate(&self) -> IntMatrix {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return IntMatrix::zeros(0, 0);
        }
        if n == 1 {
            return IntMatrix::from_rows(vec![vec![1]]);
        }
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor_rows: Vec<Vec<i64>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (0..n).filter(|&c| c != j).map(|c| self[(r, c)]).collect())
                    .collect();
                let minor = IntMatrix::from_rows(minor_rows);
                let cof = if (i + j) % 2 == 0 { minor.det() } else { -minor.det() };
                adj[(j, i)] = cof;
            }
        }
        adj
    }

    /// Inverse of a unimodular matrix (det = ±1).
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let d = self.det();
        if d != 1 && d != -1 {
            return Err(Error::NotUnimodular { det: d });
        }
        let mut adj = self.adjugate();
        if d == -1 {
            for e in &mut adj.data {
                *e = -*e;
            }
        }
        Ok(adj)
    }

    pub fn scale_int(&self, k: i64) -> IntMatrix {
        let mut out = self.clone();
        for e in &mut out.data {
            *e *= k;
        }
        out
    }

    pub fn neg(&self) -> IntMatrix {
        self.scale_int(-1)
    }

    /// True when every column of `other` lies in the column span of `self`
    /// over ℤ (both square nonsingular, same size).
    pub fn contains_lattice(&self, other: &IntMatrix) -> bool {
        assert!(self.is_square() && other.is_square() && self.rows == other.rows);
        let d = self.det();
        assert!(d != 0, "containment test against a singular lattice basis");
        let prod = self.adjugate().mul(other);
        prod.data.iter().all(|&e| e % d == 0)
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// col_a -= q * col_b
    fn col_sub(&mut self, a: usize, b: usize, q: i64) {
        for i in 0..self.rows {
            let v = self[(i, b)];
            self[(i, a)] -= q * v;
        }
    }

    /// row_a -= q * row_b
    fn row_sub(&mut self, a: usize, b: usize, q: i64) {
        for j in 0..self.cols {
            let v = self[(b, j)];
            self[(a, j)] -= q * v;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            self[(i, a)] = -self[(i, a)];
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            self[(a, j)] = -self[(a, j)];
        }
    }

    /// Column-style Hermite normal form of a square nonsingular matrix.
    ///
    /// Returns `(H, U)` with `H = self * U`, `U` unimodular, `H` lower
    /// triangular with positive diagonal and `0 <= H[i][j] < H[i][i]` for
    /// `j < i`.
    pub fn hnf(&self) -> Result<(IntMatrix, IntMatrix)> {
        assert!(self.is_square(), "HNF restricted to square lattice bases");
        let n = self.rows;
        let mut h = self.clone();
        let mut u = IntMatrix::identity(n);
        for i in 0..n {
            // Clear row i to the right of the diagonal by gcd column ops.
            loop {
                let pivot = (i..n)
                    .filter(|&j| h[(i, j)] != 0)
                    .min_by_key(|&j| (h[(i, j)].abs(), j));
                let Some(p) = pivot else {
                    return Err(Error::SingularMatrix);
                };
                if p != i {
                    h.swap_cols(i, p);
                    u.swap_cols(i, p);
                }
                let mut done = true;
                for j in i + 1..n {
                    if h[(i, j)] != 0 {
                        let q = h[(i, j)].div_euclid(h[(i, i)]);
                        h.col_sub(j, i, q);
                        u.col_sub(j, i, q);
                        if h[(i, j)] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if h[(i, i)] < 0 {
                h.negate_col(i);
                u.negate_col(i);
            }
            for j in 0..i {
                let q = h[(i, j)].div_euclid(h[(i, i)]);
                if q != 0 {
                    h.col_sub(j, i, q);
                    u.col_sub(j, i, q);
                }
            }
        }
        debug_assert_eq!(self.mul(&u), h);
        Ok((h, u))
    }

    /// Smith normal form of an arbitrary rectangular matrix.
    ///
    /// Returns `(D, U, V)` with `U * self * V = D`, `U`/`V` unimodular, `D`
    /// diagonal with nonnegative entries in a divisibility chain
    /// `d_1 | d_2 | ...`.
    pub fn snf(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut u = IntMatrix::identity(r);
        let mut v = IntMatrix::identity(c);
        let mut t = 0usize;
        while t < r.min(c) {
            // Pick the entry of least magnitude in the trailing block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if a[(i, j)] != 0
                        && pivot.map(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs()).unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break;
            };
            if pi != t {
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
            }
            if pj != t {
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
            }
            // Clear row t and column t; restart if a remainder becomes the
            // new (smaller) pivot.
            loop {
                let mut clean = true;
                for i in t + 1..r {
                    if a[(i, t)] != 0 {
                        let q = a[(i, t)].div_euclid(a[(t, t)]);
                        a.row_sub(i, t, q);
                        u.row_sub(i, t, q);
                        if a[(i, t)] != 0 {
                            a.swap_rows(t, i);
                            u.swap_rows(t, i);
                            clean = false;
                        }
                    }
                }
                for j in t + 1..c {
                    if a[(t, j)] != 0 {
                        let q = a[(t, j)].div_euclid(a[(t, t)]);
                        a.col_sub(j, t, q);
                        v.col_sub(j, t, q);
                        if a[(t, j)] != 0 {
                            a.swap_cols(t, j);
                            v.swap_cols(t, j);
                            clean = false;
                        }
                    }
                }
                if clean {
                    break;
                }
            }
            // Enforce divisibility of the trailing block by the pivot.
            let p = a[(t, t)];
            let offender = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| a[(i, j)] % p != 0);
            if let Some((i, _)) = offender {
                a.row_sub(t, i, -1);
                u.row_sub(t, i, -1);
                continue; // redo pivot t with the new row content
            }
            t += 1;
        }
        for i in 0..r.min(c) {
            if a[(i, i)] < 0 {
                a.negate_row(i);
                u.negate_row(i);
            }
        }
        debug_assert_eq!(u.mul(self).mul(&v), a);
        (a, u, v)
    }

    /// Solve `self * x = b` over the integers.
    pub fn solve_integer(&self, b: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(self.rows, b.len());
        let (d, u, v) = self.snf();
        let ub = u.mul_vec(b);
        let mut y = vec![0i64; self.cols];
        for i in 0..self.rows {
            let di = if i < self.cols { d[(i, i)] } else { 0 };
            if di == 0 {
                if ub[i] != 0 {
                    return None;
                }
            } else {
                if ub[i] % di != 0 {
                    return None;
                }
                y[i] = ub[i] / di;
            }
        }
        Some(v.mul_vec(&y))
    }
}

/// The finite abelian group ℤⁿ/Mℤⁿ for a nonsingular integer matrix M,
/// with a fixed transversal (the Hermite box) for coset representatives.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    basis: IntMatrix,
    hnf: IntMatrix,
    index: i64,
    invariant_factors: Vec<i64>,
}

impl QuotientGroup {
    pub fn new(basis: &IntMatrix) -> Result<Self> {
        assert!(basis.is_square());
        let det = basis.det();
        if det == 0 {
            return Err(Error::SingularMatrix);
        }
        let (h, _) = basis.hnf()?;
        let (d, _, _) = basis.snf();
        let n = basis.rows();
        let invariant_factors: Vec<i64> = (0..n).map(|i| d[(i, i)]).filter(|&f| f > 1).collect();
        Ok(QuotientGroup { basis: basis.clone(), hnf: h, index: det.abs(), invariant_factors })
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn hermite_basis(&self) -> &IntMatrix {
        &self.hnf
    }

    pub fn index(&self) -> i64 {
        self.index
    }

    /// Invariant factors > 1, in divisibility order.
    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    /// Canonical representative of `v + Mℤⁿ` inside the Hermite box
    /// `{x : 0 <= x_i < H[i][i]}`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let n = self.basis.rows();
        assert_eq!(v.len(), n);
        let mut x = v.to_vec();
        for i in 0..n {
            let q = x[i].div_euclid(self.hnf[(i, i)]);
            if q != 0 {
                for r in i..n {
                    x[r] -= q * self.hnf[(r, i)];
                }
            }
        }
        x
    }

    /// All coset representatives, in lexicographic box order.
    pub fn representatives(&self) -> Vec<Vec<i64>> {
        let n = self.basis.rows();
        let mut reps = vec![vec![]];
        for i in 0..n {
            let bound = self.hnf[(i, i)];
            let mut next = Vec::with_capacity(reps.len() * bound as usize);
            for rep in reps {
                for x in 0..bound {
                    let mut r = rep.clone();
                    r.push(x);
                    next.push(r);
                }
            }
            reps = next;
        }
        reps
    }
}

/// All finite-index sublattices of ℤⁿ with index at most `max_index`,
/// one Hermite-form basis per sublattice, sorted by (index, entries).
pub fn enumerate_sublattices(n: usize, max_index: i64) -> Vec<IntMatrix> {
    assert!(n >= 1 && max_index >= 1);
    let mut out = Vec::new();
    let mut current = IntMatrix::zeros(n, n);
    fill_rows(&mut current, 0, 1, max_index, &mut out);
    out.sort_by_key(|h| (h.det().abs(), h.entries().to_vec()));
    out
}

fn fill_rows(h: &mut IntMatrix, row: usize, index_so_far: i64, max_index: i64, out: &mut Vec<IntMatrix>) {
    let n = h.rows();
    if row == n {
        out.push(h.clone());
        return;
    }
    let mut d = 1;
    while index_so_far * d <= max_index {
        h[(row, row)] = d;
        // Off-diagonal entries to the left of the diagonal, each in [0, d).
        let mut offs = vec![0i64; row];
        loop {
            for (j, &v) in offs.iter().enumerate() {
                h[(row, j)] = v;
            }
            fill_rows(h, row + 1, index_so_far * d, max_index, out);
            // Odometer increment over the off-diagonal box.
            let mut carry = 0usize;
            while carry < row {
                offs[carry] += 1;
                if offs[carry] < d {
                    break;
                }
                offs[carry] = 0;
                carry += 1;
            }
            if row == 0 || carry == row {
                break;
            }
        }
        for j in 0..row {
            h[(row, j)] = 0;
        }
        d += 1;
    }
    h[(row, row)] = 0;
}

/// Rank over ℚ of a list of rational row vectors.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut rank = 0usize;
    let mut pivot_col = 0usize;
    while rank < m.len() && pivot_col < cols {
        let pivot = (rank..m.len()).find(|&i| !m[i][pivot_col].is_zero());
        let Some(p) = pivot else {
            pivot_col += 1;
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][pivot_col].recip();
        for j in pivot_col..cols {
            let v = &m[rank][j] * &inv;
            m[rank][j] = v;
        }
        for i in 0..m.len() {
            if i != rank && !m[i][pivot_col].is_zero() {
                let f = m[i][pivot_col].clone();
                for j in pivot_col..cols {
                    let v = &m[i][j] - &(&f * &m[rank][j]);
                    m[i][j] = v;
                }
            }
        }
        rank += 1;
        pivot_col += 1;
    }
    rank
}

/// Convenience: BigRational from an i64 pair.
pub fn big_rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Convenience: BigRational from an i64.
pub fn big_int_rat(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

pub fn vec_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

pub fn vec_is_zero(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}
