//! Cohomology of torus-invariant Cartier divisors, weight by weight.
//!
//! `H^p(X, O(D))_m = H̃^{p−1}(Z_α)` with `α = {i : ⟨m, v_i⟩ + d_i < 0}`. The
//! weights with a given pattern `α` are the lattice points of the chamber
//! `{u : ⟨u, v_i⟩ + d_i < 0 (i ∈ α), ≥ 0 (i ∉ α)}`, so only chambers of subsets
//! with nonzero reduced cohomology need to be visited.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cones::Polyhedron;
use crate::error::{Error, Result};
use crate::exact::lp::{lp_feasible, minimize, Constraint, LpOutcome, StrictSystem};
use crate::exact::matrix::{integer_rank, rat, to_rat, IntMatrix};
use crate::fan::{Fan, TorusDivisor};
use crate::nerve::{induced, reduced_cohomology, RaySubset};
use crate::ToricVariety;

/// Degree `p` ↦ `(m, multiplicity)` pairs, sorted by `m`.
pub type WeightMap = BTreeMap<usize, Vec<(Vec<BigInt>, usize)>>;

/// `h^0..h^n` of a divisor, optionally with the contributing weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    pub divisor: TorusDivisor,
    pub dims: Vec<usize>,
    pub weights: Option<WeightMap>,
}

/// Inclusive integer box `lo ≤ m ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBox {
    pub lo: Vec<BigInt>,
    pub hi: Vec<BigInt>,
}

impl LatticeBox {
    pub fn cube(dim: usize, radius: i64) -> Self {
        LatticeBox { lo: vec![BigInt::from(-radius); dim], hi: vec![BigInt::from(radius); dim] }
    }

    pub fn enlarged(&self, by: i64) -> Self {
        LatticeBox {
            lo: self.lo.iter().map(|x| x - by).collect(),
            hi: self.hi.iter().map(|x| x + by).collect(),
        }
    }

    fn hull(&self, other: &LatticeBox) -> Self {
        LatticeBox {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a.min(b).clone()).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a.max(b).clone()).collect(),
        }
    }

    /// All points, last coordinate fastest.
    pub fn points(&self) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
        for (lo, hi) in self.lo.iter().zip(&self.hi) {
            let mut next = Vec::new();
            for prefix in &out {
                let mut x = lo.clone();
                while &x <= hi {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    next.push(p);
                    x += 1;
                }
            }
            out = next;
        }
        out
    }
}

fn pair_int(ray: &[i64], m: &[BigInt]) -> BigInt {
    ray.iter().zip(m).map(|(&v, x)| x * v).sum()
}

/// `α = {i : ⟨m, v_i⟩ + d_i < 0}`.
pub fn support_pattern(fan: &Fan, d: &TorusDivisor, m: &[BigInt]) -> RaySubset {
    let idx: Vec<usize> = (0..fan.num_rays())
        .filter(|&i| (pair_int(fan.ray(i), m) + &d.coeffs[i]).is_negative())
        .collect();
    RaySubset::from_indices(&idx)
}

fn require_cartier(fan: &Fan, d: &TorusDivisor) -> Result<()> {
    fan.require_cartier(d).map(|_| ())
}

/// `(p, dim H^p(X, O(D))_m)` for the nonzero degrees at weight `m`.
pub fn weight_cohomology(tv: &ToricVariety, d: &TorusDivisor, m: &[BigInt]) -> Result<Vec<(usize, usize)>> {
    require_cartier(&tv.fan, d)?;
    let alpha = support_pattern(&tv.fan, d, m);
    Ok(reduced_cohomology(&induced(&tv.complex, alpha))
        .into_iter()
        .map(|(deg, dim)| ((deg + 1) as usize, dim))
        .collect())
}

/// The chamber of weights with pattern `α` for rational coefficients:
/// `⟨u, v_i⟩ + d_i < 0` on `α`, `≥ 0` elsewhere.
pub fn chamber(fan: &Fan, coeffs: &[BigRational], alpha: RaySubset) -> StrictSystem {
    let mut sys = StrictSystem::new(fan.dim());
    for i in 0..fan.num_rays() {
        let v: Vec<BigRational> = fan.ray(i).iter().map(|&x| rat(x)).collect();
        if alpha.contains(i) {
            sys.push(Constraint::new(v.iter().map(|x| -x.clone()).collect(), -coeffs[i].clone(), true));
        } else {
            sys.push(Constraint::closed(v, coeffs[i].clone()));
        }
    }
    sys
}

/// Recession cone `{u : ⟨u, v_i⟩ ≤ 0 (i ∈ α), ≥ 0 (i ∉ α)}` is `{0}`.
pub fn chamber_is_bounded(fan: &Fan, alpha: RaySubset) -> bool {
    let zero = vec![BigRational::zero(); fan.num_rays()];
    Polyhedron::new(fan.dim(), chamber(fan, &zero, alpha).closure().constraints).recession_cone_is_trivial()
}

/// Closed system with the same integer points as the chamber of an integral
/// divisor: strict `< 0` becomes `≤ −1`.
fn integral_chamber(fan: &Fan, d: &TorusDivisor, alpha: RaySubset) -> Vec<Constraint> {
    let coeffs = d.to_rat();
    chamber(fan, &coeffs, alpha)
        .constraints
        .into_iter()
        .map(|c| {
            if c.strict {
                Constraint::closed(c.normal, c.offset - BigRational::one())
            } else {
                c
            }
        })
        .collect()
}

/// Integer bounding box of a closed system by `2n` exact LPs; `None` if empty.
fn bounding_box(dim: usize, rows: &[Constraint]) -> Result<Option<LatticeBox>> {
    let mut lo = Vec::with_capacity(dim);
    let mut hi = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut obj = vec![BigRational::zero(); dim];
        obj[j] = BigRational::one();
        let min = match minimize(dim, rows, &obj) {
            LpOutcome::Optimal { value, .. } => value,
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => return Err(Error::Unbounded),
        };
        obj[j] = -BigRational::one();
        let max = match minimize(dim, rows, &obj) {
            LpOutcome::Optimal { value, .. } => -value,
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => return Err(Error::Unbounded),
        };
        lo.push(min.ceil().to_integer());
        hi.push(max.floor().to_integer());
    }
    Ok(Some(LatticeBox { lo, hi }))
}

struct ChamberCount {
    degree: usize,
    multiplicity: usize,
    points: Vec<Vec<BigInt>>,
    bbox: Option<LatticeBox>,
}

fn count_chamber(fan: &Fan, d: &TorusDivisor, alpha: RaySubset, degree: usize, multiplicity: usize) -> Result<ChamberCount> {
    let empty = ChamberCount { degree, multiplicity, points: Vec::new(), bbox: None };
    if !lp_feasible(&chamber(fan, &d.to_rat(), alpha)).feasible {
        return Ok(empty);
    }
    if !chamber_is_bounded(fan, alpha) {
        return Err(Error::UnboundedContribution { alpha: alpha.one_based() });
    }
    let rows = integral_chamber(fan, d, alpha);
    let Some(bbox) = bounding_box(fan.dim(), &rows)? else {
        return Ok(empty);
    };
    let points = bbox
        .points()
        .into_iter()
        .filter(|m| {
            let mr: Vec<BigRational> = m.iter().map(to_rat).collect();
            rows.iter().all(|c| !c.value_at(&mr).is_negative())
        })
        .collect();
    Ok(ChamberCount { degree, multiplicity, points, bbox: Some(bbox) })
}

fn chamber_counts(tv: &ToricVariety, d: &TorusDivisor) -> Result<Vec<ChamberCount>> {
    require_cartier(&tv.fan, d)?;
    let jobs: Vec<(RaySubset, usize, usize)> = tv
        .table
        .nonzero()
        .map(|(alpha, deg, dim)| (alpha, (deg + 1) as usize, dim))
        .collect();
    jobs.into_par_iter()
        .map(|(alpha, p, dim)| count_chamber(&tv.fan, d, alpha, p, dim))
        .collect()
}

/// `h^p(X, O(D))` for all `p`, by chamber enumeration.
pub fn cohomology(tv: &ToricVariety, d: &TorusDivisor, keep_weights: bool) -> Result<CohomologyTable> {
    let n = tv.dim();
    let counts = chamber_counts(tv, d)?;
    let mut dims = vec![0usize; n + 1];
    let mut weights = WeightMap::new();
    for c in counts {
        dims[c.degree] += c.points.len() * c.multiplicity;
        if keep_weights && !c.points.is_empty() {
            weights.entry(c.degree).or_default().extend(c.points.into_iter().map(|m| (m, c.multiplicity)));
        }
    }
    for list in weights.values_mut() {
        list.sort();
    }
    Ok(CohomologyTable { divisor: d.clone(), dims, weights: keep_weights.then_some(weights) })
}

/// Box containing every weight that contributes to some `h^p(D)`; the unit
/// cube around the origin when nothing contributes.
pub fn contributing_box(tv: &ToricVariety, d: &TorusDivisor) -> Result<LatticeBox> {
    let counts = chamber_counts(tv, d)?;
    let mut acc: Option<LatticeBox> = None;
    for c in counts.into_iter().filter(|c| !c.points.is_empty()) {
        let b = c.bbox.expect("nonempty chamber has a box");
        acc = Some(match acc {
            None => b,
            Some(a) => a.hull(&b),
        });
    }
    Ok(acc.unwrap_or_else(|| LatticeBox::cube(tv.dim(), 0)))
}

/// Čech cohomology of `O(D)` on the affine cover by maximal cones, computed
/// independently for each weight in `bbox`.
///
/// At weight `m` the summand for a set `S` of maximal cones is one-dimensional
/// when `⟨m, v_i⟩ + d_i ≥ 0` for every ray common to all cones of `S`, and zero
/// otherwise.
pub fn cech_oracle(fan: &Fan, d: &TorusDivisor, bbox: &LatticeBox) -> Result<CohomologyTable> {
    require_cartier(fan, d)?;
    let n = fan.dim();
    let cones = fan.max_cones();
    let k = cones.len();
    assert!(k < 64, "too many maximal cones for the Čech oracle");
    let cone_masks: Vec<u64> = cones.iter().map(|c| RaySubset::from_indices(c).0).collect();
    // subsets of cones grouped by size, with the rays common to all of them
    let mut by_size: Vec<Vec<(u64, u64)>> = vec![Vec::new(); k + 1];
    for s in 1u64..(1u64 << k) {
        let common = (0..k).filter(|&j| s & (1 << j) != 0).fold(u64::MAX, |acc, j| acc & cone_masks[j]);
        by_size[s.count_ones() as usize].push((s, common));
    }

    let mut dims = vec![0usize; n + 1];
    let mut weights = WeightMap::new();
    for m in bbox.points() {
        let ok = (0..fan.num_rays())
            .filter(|&i| !(pair_int(fan.ray(i), &m) + &d.coeffs[i]).is_negative())
            .fold(0u64, |acc, i| acc | (1 << i));
        let valid: Vec<Vec<u64>> = by_size
            .iter()
            .map(|sets| sets.iter().filter(|(_, common)| common & !ok == 0).map(|&(s, _)| s).collect())
            .collect();
        // rank of δ: C^{p} → C^{p+1}, where C^p lives on (p+1)-subsets
        let mut ranks = vec![0usize; k + 1];
        for size in 1..k {
            let (lower, upper) = (&valid[size], &valid[size + 1]);
            if lower.is_empty() || upper.is_empty() {
                continue;
            }
            let index: BTreeMap<u64, usize> = lower.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let mut mat = IntMatrix::zeros(upper.len(), lower.len());
            for (r, &s) in upper.iter().enumerate() {
                for (pos, j) in (0..k).filter(|&j| s & (1 << j) != 0).enumerate() {
                    if let Some(&c) = index.get(&(s & !(1 << j))) {
                        mat[(r, c)] = BigInt::from(if pos % 2 == 0 { 1 } else { -1 });
                    }
                }
            }
            ranks[size] = integer_rank(&mat);
        }
        for p in 0..=n.min(k - 1) {
            let size = p + 1;
            let h = valid[size].len() - ranks[size] - ranks[size - 1];
            if h > 0 {
                dims[p] += h;
                weights.entry(p).or_default().push((m.clone(), h));
            }
        }
    }
    for list in weights.values_mut() {
        list.sort();
    }
    Ok(CohomologyTable { divisor: d.clone(), dims, weights: Some(weights) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn tv(fan: Fan) -> ToricVariety {
        ToricVariety::new(fan).unwrap()
    }

    fn d(c: &[i64]) -> TorusDivisor {
        TorusDivisor::from_i64(c)
    }

    fn m(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn oracle(tv: &ToricVariety, div: &TorusDivisor) -> Vec<usize> {
        let b = contributing_box(tv, div).unwrap().enlarged(1);
        cech_oracle(&tv.fan, div, &b).unwrap().dims
    }

    #[test]
    fn support_patterns() {
        let bl = catalog::blowup_projective_space(2);
        assert_eq!(support_pattern(&bl, &d(&[0, 0, 0, -1]), &m(&[0, 0])), RaySubset::from_one_based(&[4]));
        assert_eq!(support_pattern(&bl, &d(&[0, 0, 0, 0]), &m(&[0, 0])), RaySubset::empty());
        let p2 = catalog::projective_space(2);
        assert_eq!(support_pattern(&p2, &d(&[-1, -1, -1]), &m(&[0, 0])), RaySubset::full(3));
    }

    #[test]
    fn weight_pieces() {
        let p2 = tv(catalog::projective_space(2));
        assert_eq!(weight_cohomology(&p2, &d(&[0, 0, 0]), &m(&[0, 0])).unwrap(), vec![(0, 1)]);
        assert_eq!(weight_cohomology(&p2, &d(&[-1, -1, -1]), &m(&[0, 0])).unwrap(), vec![(2, 1)]);
        let bl = tv(catalog::blowup_projective_space(2));
        assert!(weight_cohomology(&bl, &d(&[0, 0, 0, -1]), &m(&[0, 0])).unwrap().is_empty());
    }

    #[test]
    fn projective_plane_line_bundles() {
        let p2 = tv(catalog::projective_space(2));
        assert_eq!(cohomology(&p2, &d(&[2, 0, 0]), false).unwrap().dims, vec![6, 0, 0]);
        assert_eq!(cohomology(&p2, &d(&[-3, 0, 0]), false).unwrap().dims, vec![0, 0, 1]);
        assert_eq!(cohomology(&p2, &d(&[1, 0, 0]), false).unwrap().dims, vec![3, 0, 0]);
        assert_eq!(oracle(&p2, &d(&[1, 0, 0])), vec![3, 0, 0]);
        assert_eq!(oracle(&p2, &d(&[-3, 0, 0])), vec![0, 0, 1]);
        assert_eq!(oracle(&p2, &d(&[2, 0, 0])), vec![6, 0, 0]);
    }

    #[test]
    fn blowup_h_minus_e() {
        let bl = tv(catalog::blowup_projective_space(2));
        let t = cohomology(&bl, &d(&[0, 0, 1, -1]), true).unwrap();
        assert_eq!(t.dims, vec![2, 0, 0]);
        assert_eq!(t.weights.unwrap()[&0].len(), 2);
        assert_eq!(oracle(&bl, &d(&[0, 0, 1, -1])), vec![2, 0, 0]);
    }

    #[test]
    fn weights_sum_to_dims() {
        let bl = tv(catalog::blowup_projective_space(2));
        let t = cohomology(&bl, &d(&[-2, 1, -3, 2]), true).unwrap();
        let w = t.weights.unwrap();
        for (p, &h) in t.dims.iter().enumerate() {
            let s: usize = w.get(&p).map_or(0, |l| l.iter().map(|(_, k)| k).sum());
            assert_eq!(s, h);
        }
    }

    #[test]
    fn non_cartier_rejected() {
        let w = tv(catalog::weighted_projective_plane_112());
        assert!(matches!(cohomology(&w, &d(&[0, 0, 1]), false), Err(Error::NotCartier { .. })));
        assert!(matches!(
            cech_oracle(&w.fan, &d(&[0, 0, 1]), &LatticeBox::cube(2, 1)),
            Err(Error::NotCartier { .. })
        ));
    }

    #[test]
    fn contributing_chambers_are_bounded() {
        for fan in catalog::standard_fans() {
            let t = tv(fan);
            for (alpha, _, _) in t.table.nonzero() {
                assert!(chamber_is_bounded(&t.fan, alpha));
            }
        }
    }

    #[test]
    fn box_points_order() {
        let b = LatticeBox { lo: m(&[0, -1]), hi: m(&[1, 0]) };
        assert_eq!(b.points(), vec![m(&[0, -1]), m(&[0, 0]), m(&[1, -1]), m(&[1, 0])]);
    }
}
