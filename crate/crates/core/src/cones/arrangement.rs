//! Cells of a central hyperplane arrangement, found by depth-first sign
//! extension with an LP feasibility check at each node.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{HalfSpace, POCone};
use crate::exact::lp::{lp_feasible, Constraint, StrictSystem};
use crate::exact::matrix::{rational_rank, to_rat_vec, RatMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(v: &BigRational) -> Sign {
        if v.is_positive() {
            Sign::Pos
        } else if v.is_negative() {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }
}

/// One relatively open cell: a realizable sign vector with a witness point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementCell {
    pub signs: Vec<Sign>,
    pub witness: Vec<BigRational>,
}

impl ArrangementCell {
    /// The cell as a cone; zero signs become a pair of opposite closed
    /// half-spaces.
    pub fn to_cone(&self, hyperplanes: &[Vec<BigInt>]) -> POCone {
        let dim = self.witness.len();
        let mut hs = Vec::new();
        for (s, n) in self.signs.iter().zip(hyperplanes) {
            let neg: Vec<BigInt> = n.iter().map(|x| -x).collect();
            match s {
                Sign::Pos => hs.push(HalfSpace::new(n.clone(), true)),
                Sign::Neg => hs.push(HalfSpace::new(neg, true)),
                Sign::Zero => {
                    hs.push(HalfSpace::new(n.clone(), false));
                    hs.push(HalfSpace::new(neg, false));
                }
            }
        }
        POCone::new(dim, hs)
    }
}

/// Dimension of the cell: ambient dimension minus the rank of its zero rows.
pub fn cell_dimension(cell: &ArrangementCell, hyperplanes: &[Vec<BigInt>]) -> usize {
    let dim = cell.witness.len();
    let zero_rows: Vec<Vec<BigRational>> = cell
        .signs
        .iter()
        .zip(hyperplanes)
        .filter(|(s, _)| **s == Sign::Zero)
        .map(|(_, n)| to_rat_vec(n))
        .collect();
    if zero_rows.is_empty() {
        return dim;
    }
    dim - rational_rank(&RatMatrix::from_rows(zero_rows, dim))
}

fn sign_constraints(n: &[BigInt], s: Sign) -> Vec<Constraint> {
    let pos = to_rat_vec(n);
    let neg: Vec<BigRational> = pos.iter().map(|x| -x.clone()).collect();
    match s {
        Sign::Pos => vec![Constraint::new(pos, BigRational::zero(), true)],
        Sign::Neg => vec![Constraint::new(neg, BigRational::zero(), true)],
        Sign::Zero => vec![Constraint::closed(pos, BigRational::zero()), Constraint::closed(neg, BigRational::zero())],
    }
}

/// All nonempty cells of the central arrangement in `ℝ^dim`, including the
/// lower-dimensional equality strata. Ordered by sign vector (`−` < `0` < `+`).
pub fn arrangement_cells(dim: usize, hyperplanes: &[Vec<BigInt>]) -> Vec<ArrangementCell> {
    let mut out = Vec::new();
    let mut signs = Vec::with_capacity(hyperplanes.len());
    let origin = vec![BigRational::zero(); dim];
    extend(hyperplanes, &mut signs, &StrictSystem::new(dim), origin, &mut out);
    out
}

fn extend(
    hyperplanes: &[Vec<BigInt>],
    signs: &mut Vec<Sign>,
    sys: &StrictSystem,
    witness: Vec<BigRational>,
    out: &mut Vec<ArrangementCell>,
) {
    let depth = signs.len();
    if depth == hyperplanes.len() {
        out.push(ArrangementCell { signs: signs.clone(), witness });
        return;
    }
    for s in [Sign::Neg, Sign::Zero, Sign::Pos] {
        let mut next = sys.clone();
        for c in sign_constraints(&hyperplanes[depth], s) {
            next.push(c);
        }
        let f = lp_feasible(&next);
        if let Some(w) = f.witness {
            signs.push(s);
            extend(hyperplanes, signs, &next, w, out);
            signs.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn coordinate_axes_in_the_plane() {
        let h = hp(&[&[1, 0], &[0, 1]]);
        let cells = arrangement_cells(2, &h);
        // 4 quadrants, 4 half-axes, origin
        assert_eq!(cells.len(), 9);
        let dims: Vec<usize> = cells.iter().map(|c| cell_dimension(c, &h)).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 2).count(), 4);
        assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 4);
        assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 1);
        for c in &cells {
            let realized: Vec<Sign> = h
                .iter()
                .map(|n| Sign::of(&crate::exact::matrix::dot(&to_rat_vec(n), &c.witness)))
                .collect();
            assert_eq!(realized, c.signs);
            assert!(c.to_cone(&h).contains(&c.witness));
        }
    }

    #[test]
    fn three_lines_through_origin() {
        let h = hp(&[&[0, 1], &[1, 1], &[1, 0]]);
        let cells = arrangement_cells(2, &h);
        // 6 sectors + 6 rays + origin
        assert_eq!(cells.len(), 13);
    }

    #[test]
    fn empty_arrangement() {
        let cells = arrangement_cells(3, &[]);
        assert_eq!(cells.len(), 1);
        assert!(cells[0].signs.is_empty());
    }
}
