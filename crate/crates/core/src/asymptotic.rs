//! Asymptotic cohomological functions `ĥ^i` and the vanishing criterion for
//! q-ampleness.
//!
//! The weights contributing to `H^i(X, O(kD))` with pattern `α` are the lattice
//! points of `k · chamber_α(D)`, so their number grows like `kⁿ vol(chamber_α)`
//! and
//!
//! `ĥ^i(D) = n! Σ_{α ∈ J_{i−1}} dim H̃^{i−1}(Z_α) · vol(chamber_α(D))`.
//!
//! Chambers are closed here; their boundary has measure zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cohomology::{chamber, chamber_is_bounded};
use crate::cones::{arrangement_cells, collect_hyperplanes_of, Polyhedron, Sign};
use crate::error::{Error, Result};
use crate::exact::lp::lp_feasible;
use crate::exact::matrix::{dot, to_rat_vec};
use crate::fan::ClassVector;
use crate::qample::{is_q_ample, lift_meets_orthant, obstruction_region};
use crate::ToricVariety;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticValue {
    pub degree: usize,
    pub value: BigRational,
}

fn factorial(n: usize) -> BigRational {
    (1..=n).fold(BigRational::one(), |acc, k| acc * BigRational::from_integer(BigInt::from(k)))
}

/// `ĥ^i` at a divisor with rational coefficients.
pub fn hhat(tv: &ToricVariety, d: &[BigRational], i: i64) -> Result<AsymptoticValue> {
    let n = tv.dim();
    if i < 0 || i as usize > n {
        return Err(Error::InvalidDegree { degree: i, dim: n });
    }
    assert_eq!(d.len(), tv.fan.num_rays(), "divisor length must equal ray count");
    let terms: Vec<(crate::RaySubset, usize)> = tv
        .table
        .nonzero()
        .filter(|&(_, deg, _)| deg == i - 1)
        .map(|(a, _, dim)| (a, dim))
        .collect();
    let parts: Vec<BigRational> = terms
        .par_iter()
        .map(|&(alpha, mult)| {
            let sys = chamber(&tv.fan, d, alpha);
            if !lp_feasible(&sys).feasible {
                return Ok(BigRational::zero());
            }
            if !chamber_is_bounded(&tv.fan, alpha) {
                return Err(Error::UnboundedContribution { alpha: alpha.one_based() });
            }
            let vol = Polyhedron::new(n, sys.closure().constraints).volume()?;
            Ok(vol * BigRational::from_integer(BigInt::from(mult)))
        })
        .collect::<Result<_>>()?;
    let total: BigRational = parts.into_iter().sum();
    Ok(AsymptoticValue { degree: i as usize, value: total * factorial(n) })
}

/// `ĥ^i` at a class point, through the fixed section of the class map.
pub fn hhat_class(tv: &ToricVariety, c: &ClassVector, i: i64) -> Result<AsymptoticValue> {
    hhat(tv, &tv.lattice.lift(c), i)
}

/// `ĥ^i(s·d) = sⁿ ĥ^i(d)`.
pub fn hhat_homogeneity_check(tv: &ToricVariety, d: &[BigRational], i: i64, s: &BigRational) -> Result<bool> {
    assert!(s.is_positive(), "scale must be positive");
    let scaled: Vec<BigRational> = d.iter().map(|x| x * s).collect();
    let lhs = hhat(tv, &scaled, i)?.value;
    let rhs = hhat(tv, d, i)?.value * num_traits::pow(s.clone(), tv.dim());
    Ok(lhs == rhs)
}

/// Outcome of comparing q-ampleness with the vanishing of `ĥ^i`, `i > q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    pub q: usize,
    pub q_ample: bool,
    /// `ĥ^i = 0` for all `i > q` at `c` and every perturbed point.
    pub sampled_zero: bool,
    /// `c ∉ [Ō_α]` for every `α ∈ J_{i−1}`, `i > q`.
    pub structural_zero: bool,
    /// `c` or a perturbed point lies off `c`'s open cell of the arrangement
    /// cut out by the obstruction region, so samples need not reflect a
    /// neighbourhood.
    pub inconclusive: bool,
}

impl VanishingReport {
    /// Flags that must agree do agree (always true when inconclusive).
    pub fn consistent(&self) -> bool {
        self.inconclusive || (self.q_ample == self.sampled_zero && self.sampled_zero == self.structural_zero)
    }
}

/// `±e_j / 64` and all their signed sums: every nonzero vector of
/// `{−1, 0, 1}^ρ / 64`.
pub fn default_perturbations(rank: usize) -> Vec<ClassVector> {
    let step = BigRational::new(BigInt::one(), BigInt::from(64));
    let mut out = Vec::new();
    let total = 3usize.pow(rank as u32);
    for code in 0..total {
        let mut k = code;
        let coords: Vec<BigRational> = (0..rank)
            .map(|_| {
                let digit = (k % 3) as i64 - 1;
                k /= 3;
                &step * BigRational::from_integer(BigInt::from(digit))
            })
            .collect();
        if coords.iter().any(|x| !x.is_zero()) {
            out.push(ClassVector::new(coords));
        }
    }
    out
}

pub fn vanishing_equivalence_check(
    tv: &ToricVariety,
    c: &ClassVector,
    q: i64,
    perturbations: &[ClassVector],
) -> Result<VanishingReport> {
    let q_ample = is_q_ample(tv, c, q)?;
    let region = obstruction_region(tv, q)?;
    let n = tv.dim() as i64;
    let q = region.q;

    let structural_zero = !region.alphas.par_iter().any(|&(_, a)| lift_meets_orthant(tv, c, a));

    let points: Vec<ClassVector> = std::iter::once(c.clone())
        .chain(perturbations.iter().map(|p| {
            ClassVector::new(c.coords.iter().zip(&p.coords).map(|(a, b)| a + b).collect())
        }))
        .collect();

    let hyperplanes = collect_hyperplanes_of(&region.closed_images);
    let signs = |x: &ClassVector| -> Vec<Sign> {
        hyperplanes.iter().map(|h| Sign::of(&dot(&to_rat_vec(h), &x.coords))).collect()
    };
    let base = signs(c);
    let inconclusive = base.contains(&Sign::Zero) || points.iter().any(|p| signs(p) != base);

    let mut sampled_zero = true;
    'outer: for p in &points {
        for i in (q as i64 + 1)..=n {
            if !hhat_class(tv, p, i)?.value.is_zero() {
                sampled_zero = false;
                break 'outer;
            }
        }
    }
    Ok(VanishingReport { q, q_ample, sampled_zero, structural_zero, inconclusive })
}

/// Number of open cells of the obstruction arrangement for `q`; a point is
/// conclusive for the check when it lies in one of them.
pub fn open_cell_count(tv: &ToricVariety, q: i64) -> Result<usize> {
    let region = obstruction_region(tv, q)?;
    let hyperplanes = collect_hyperplanes_of(&region.closed_images);
    Ok(arrangement_cells(tv.picard_rank(), &hyperplanes)
        .iter()
        .filter(|c| !c.signs.contains(&Sign::Zero))
        .count())
}
