//! Bounded polyhedra `{x : a·x + b ≥ 0}`: vertices and exact volume.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::lp::{maximize, Constraint, LpOutcome};
use crate::exact::matrix::{determinant, rational_rank, solve_square, RatMatrix};

/// Closed polyhedron given by affine inequalities. Strict flags are ignored;
/// the polyhedron is the closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

impl Polyhedron {
    pub fn new(dim: usize, constraints: Vec<Constraint>) -> Self {
        assert!(constraints.iter().all(|c| c.normal.len() == dim), "constraint dimension mismatch");
        Polyhedron { dim, constraints }
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.constraints.iter().all(|c| !c.value_at(x).is_negative())
    }

    /// Whether the recession cone `{x : a·x ≥ 0}` is `{0}`.
    pub fn recession_cone_is_trivial(&self) -> bool {
        let homogeneous: Vec<Constraint> =
            self.constraints.iter().map(|c| Constraint::closed(c.normal.clone(), BigRational::zero())).collect();
        (0..self.dim).all(|j| {
            [1i64, -1].iter().all(|&s| {
                let mut obj = vec![BigRational::zero(); self.dim];
                obj[j] = BigRational::from_integer(s.into());
                matches!(maximize(self.dim, &homogeneous, &obj), LpOutcome::Optimal { .. })
            })
        })
    }

    fn check_bounded(&self) -> Result<()> {
        if self.recession_cone_is_trivial() {
            Ok(())
        } else {
            Err(Error::Unbounded)
        }
    }

    /// Vertices by basis enumeration over `dim`-subsets of constraints, sorted.
    pub fn vertices(&self) -> Result<Vec<Vec<BigRational>>> {
        self.check_bounded()?;
        Ok(self.vertices_unchecked())
    }

    fn vertices_unchecked(&self) -> Vec<Vec<BigRational>> {
        let n = self.dim;
        let m = self.constraints.len();
        let mut found = BTreeSet::new();
        if m < n {
            return Vec::new();
        }
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let rows: Vec<Vec<BigRational>> = idx.iter().map(|&i| self.constraints[i].normal.clone()).collect();
            let rhs: Vec<BigRational> = idx.iter().map(|&i| -self.constraints[i].offset.clone()).collect();
            if let Some(x) = solve_square(&RatMatrix::from_rows(rows, n), &rhs) {
                if self.contains(&x) {
                    found.insert(x);
                }
            }
            // next combination
            let mut k = n;
            loop {
                if k == 0 {
                    return found.into_iter().collect();
                }
                k -= 1;
                if idx[k] < m - n + k {
                    idx[k] += 1;
                    for j in k + 1..n {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Exact volume via a pulling triangulation: pick a vertex, triangulate
    /// each facet not containing it recursively, and cone over it.
    pub fn volume(&self) -> Result<BigRational> {
        self.check_bounded()?;
        let verts = self.vertices_unchecked();
        if verts.is_empty() || affine_dim(&verts, &(0..verts.len()).collect::<Vec<_>>()) < self.dim {
            return Ok(BigRational::zero());
        }
        let tight: Vec<BTreeSet<usize>> = verts
            .iter()
            .map(|v| {
                (0..self.constraints.len()).filter(|&j| self.constraints[j].value_at(v).is_zero()).collect()
            })
            .collect();
        let all: Vec<usize> = (0..verts.len()).collect();
        let simplices = triangulate(&verts, &tight, &all, self.dim);
        let mut total = BigRational::zero();
        let mut factorial = BigRational::from_integer(1.into());
        for k in 2..=self.dim {
            factorial *= BigRational::from_integer((k as i64).into());
        }
        for s in simplices {
            let rows: Vec<Vec<BigRational>> =
                s[1..].iter().map(|&i| verts[i].iter().zip(&verts[s[0]]).map(|(a, b)| a - b).collect()).collect();
            total += determinant(&RatMatrix::from_rows(rows, self.dim)).abs();
        }
        Ok(total / factorial)
    }
}

fn affine_dim(verts: &[Vec<BigRational>], ids: &[usize]) -> usize {
    if ids.len() <= 1 {
        return 0;
    }
    let base = &verts[ids[0]];
    let rows: Vec<Vec<BigRational>> =
        ids[1..].iter().map(|&i| verts[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    let cols = base.len();
    rational_rank(&RatMatrix::from_rows(rows, cols))
}

/// Simplices (as vertex-id lists of length `face_dim + 1`) triangulating the
/// face spanned by `face`.
fn triangulate(
    verts: &[Vec<BigRational>],
    tight: &[BTreeSet<usize>],
    face: &[usize],
    face_dim: usize,
) -> Vec<Vec<usize>> {
    if face_dim == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let constraint_ids: BTreeSet<usize> = face.iter().flat_map(|&v| tight[v].iter().copied()).collect();
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for j in constraint_ids {
        let sub: Vec<usize> = face.iter().copied().filter(|&v| tight[v].contains(&j)).collect();
        if sub.contains(&apex) || sub.len() < face_dim || sub.len() == face.len() {
            continue;
        }
        if affine_dim(verts, &sub) == face_dim - 1 {
            facets.insert(sub);
        }
    }
    let mut out = Vec::new();
    for f in facets {
        for mut s in triangulate(verts, tight, &f, face_dim - 1) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}
