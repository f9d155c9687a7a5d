use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T: Clone> Matrix<T> {
    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { rows: nrows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    let cell = &mut out[(i, j)];
                    *cell = std::mem::replace(cell, T::zero()) + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> =
                (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn dot<T>(a: &[T], b: &[T]) -> T
where
    T: Zero,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x * y)
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

pub fn to_rat_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(to_rat).collect()
}

impl IntMatrix {
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(), cols)
    }

    pub fn to_rat(&self) -> RatMatrix {
        self.map(to_rat)
    }
}

impl RatMatrix {
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), cols)
    }
}

/// Smallest positive integer multiple of `v` with integer entries, divided by the gcd
/// of those entries. Zero vectors map to zero vectors.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|x| x / &g).collect()
}

/// Rank of an integer matrix by Bareiss fraction-free elimination.
pub fn integer_rank(m: &IntMatrix) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[(r, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(rank, p);
        let pivot = a[(rank, c)].clone();
        for r in rank + 1..rows {
            let factor = a[(r, c)].clone();
            for k in c..cols {
                let v = (&pivot * &a[(r, k)] - &factor * &a[(rank, k)]) / &prev;
                a[(r, k)] = v;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Exact rank over the rationals. Rows are scaled to integers first.
pub fn rational_rank(m: &RatMatrix) -> usize {
    let rows = (0..m.rows()).map(|i| primitive_integer(m.row(i))).collect();
    integer_rank(&IntMatrix::from_rows(rows, m.cols()))
}

/// Reduced row echelon form over the rationals; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for k in c..cols {
            m[(r, k)] = &m[(r, k)] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for k in c..cols {
                    let v = &m[(r, k)] * &f;
                    m[(i, k)] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{x : m x = 0}`, one vector per free column.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<BigRational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); a.cols()];
            x[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -a[(r, f)].clone();
            }
            x
        })
        .collect()
}

/// Solves the square system `m x = b`; `None` when `m` is singular.
pub fn solve_square(m: &RatMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    assert_eq!(n, b.len());
    let mut aug = RatMatrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some((0..n).map(|i| aug[(i, n)].clone()).collect())
}

/// Inverse of a square rational matrix, if it exists.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut aug = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = BigRational::one();
    }
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = aug[(i, n + j)].clone();
        }
    }
    Some(inv)
}

/// Determinant of a square rational matrix by elimination.
pub fn determinant(m: &RatMatrix) -> BigRational {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a = m.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap_rows(p, c);
            det = -det;
        }
        let pivot = a[(c, c)].clone();
        det *= &pivot;
        for r in c + 1..n {
            if a[(r, c)].is_zero() {
                continue;
            }
            let f = &a[(r, c)] / &pivot;
            for k in c..n {
                let v = &a[(c, k)] * &f;
                a[(r, k)] -= v;
            }
        }
    }
    det
}

/// Integer determinant via the rational routine.
pub fn int_determinant(m: &IntMatrix) -> BigInt {
    determinant(&m.to_rat()).to_integer()
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.rows() == m.cols() && int_determinant(m).abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rational_rank(&RatMatrix::zeros(3, 4)), 0);
        assert_eq!(rational_rank(&RatMatrix::identity(5)), 5);
        let m = RatMatrix::from_i64(&[vec![1, 1, 0], vec![2, 2, 0]]);
        assert_eq!(rational_rank(&m), 1);
    }

    #[test]
    fn rank_with_fractions() {
        let m = RatMatrix::from_rows(
            vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(3, 2), rat(1)]],
            2,
        );
        assert_eq!(rational_rank(&m), 1);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = RatMatrix::from_i64(&[vec![1, 0, 1, -1], vec![0, 1, 1, -1]]);
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(m.mul_vec(k).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_and_determinant() {
        let m = RatMatrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(determinant(&m), rat(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
        assert!(inverse(&RatMatrix::from_i64(&[vec![1, 2], vec![2, 4]])).is_none());
        assert_eq!(solve_square(&m, &[rat(3), rat(2)]).unwrap(), vec![rat(1), rat(1)]);
    }

    #[test]
    fn primitive_scaling() {
        let v = primitive_integer(&[ratio(2, 3), ratio(-4, 3), rat(0)]);
        assert_eq!(v, vec![int(1), int(-2), int(0)]);
    }
}
