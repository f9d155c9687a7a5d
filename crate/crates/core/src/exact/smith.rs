//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Result of [`smith_normal_form`]: `u * m * v == s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries of `s`, in order.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    // row[target] += k * row[src]
    fn add_row(&mut self, target: usize, src: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols() {
                let d = k * &m[(src, c)];
                m[(target, c)] += d;
            }
        }
    }

    // col[target] += k * col[src]
    fn add_col(&mut self, target: usize, src: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for r in 0..m.rows() {
                let d = k * &m[(r, src)];
                m[(r, target)] += d;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m.cols() {
                let x = -m[(i, c)].clone();
                m[(i, c)] = x;
            }
        }
    }

    /// Position of the smallest nonzero |entry| in the trailing block, if any.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Smith normal form by elementary moves with minimal-|entry| pivots.
///
/// Returns unimodular `u`, `v` and diagonal `s` with `u * m * v == s` and each
/// diagonal entry dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer { a: m.clone(), u: IntMatrix::identity(rows), v: IntMatrix::identity(cols) };

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = r.min_pivot(t) else {
                return SmithForm { u: r.u, s: r.a, v: r.v };
            };
            r.swap_rows(t, pi);
            r.swap_cols(t, pj);
            let pivot = r.a[(t, t)].clone();

            let mut dirty = false;
            for i in t + 1..rows {
                if r.a[(i, t)].is_zero() {
                    continue;
                }
                let q = r.a[(i, t)].div_floor(&pivot);
                r.add_row(i, t, &-q);
                dirty |= !r.a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if r.a[(t, j)].is_zero() {
                    continue;
                }
                let q = r.a[(t, j)].div_floor(&pivot);
                r.add_col(j, t, &-q);
                dirty |= !r.a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }

            // Divisibility: fold an offending row into row t and go again.
            let offending = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !r.a[(i, j)].is_multiple_of(&pivot))
            });
            match offending {
                Some(i) => r.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if r.a[(t, t)].is_negative() {
            r.negate_row(t);
        }
    }
    SmithForm { u: r.u, s: r.a, v: r.v }
}
