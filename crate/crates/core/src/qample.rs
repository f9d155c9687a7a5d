//! The obstruction region `K` and the q-ample cones `Amp_q = K̄^c`.
//!
//! `K` is the union of the classes of the orthants `O_α` over `α ∈ J_i`,
//! `i ≥ q`. Images of closed polyhedral cones are closed, so `K̄` is the union
//! of the closed images `[Ō_α]`, and membership in `Amp_q` reduces to closed LP
//! infeasibility on a lift of the class to `ℝ^I`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cones::{arrangement_cells, ArrangementCell, ConeUnion, HalfSpace, POCone, Sign};
use crate::error::{Error, Result};
use crate::exact::lp::{lp_feasible, Constraint, StrictSystem};
use crate::exact::matrix::rat;
use crate::fan::ClassVector;
use crate::nerve::RaySubset;
use crate::ToricVariety;

/// `K = ∪_{i ≥ q, α ∈ J_i} [O_α]` through its closed pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionRegion {
    pub q: usize,
    /// `(i, α)` pairs, by degree then bitmask.
    pub alphas: Vec<(usize, RaySubset)>,
    /// `[Ō_α]`, parallel to `alphas`.
    pub closed_images: Vec<POCone>,
}

impl ObstructionRegion {
    /// `K̄` as a union.
    pub fn closure(&self, rank: usize) -> ConeUnion {
        ConeUnion::new(rank, self.closed_images.clone())
    }
}

/// `Amp_q` in three forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QAmpleCone {
    pub q: usize,
    /// Arrangement cells outside `K̄`; they partition `Amp_q`.
    pub cells: ConeUnion,
    /// Open stars of those cells: open convex cones with union `Amp_q`.
    pub open_cover: ConeUnion,
    /// Closures of the full-dimensional cells.
    pub closed_pieces: Vec<POCone>,
    /// One witness per entry of `cells`.
    pub witnesses: Vec<Vec<BigRational>>,
}

fn check_q(tv: &ToricVariety, q: i64) -> Result<usize> {
    let n = tv.dim();
    if q < 0 || q as usize > n {
        return Err(Error::InvalidQ { q, dim: n });
    }
    Ok(q as usize)
}

/// `[Ō_α] = [−](Ō_α)`.
pub fn closed_image(tv: &ToricVariety, alpha: RaySubset) -> POCone {
    POCone::orthant(tv.fan.num_rays(), alpha).closure().project(&tv.lattice.projection)
}

pub fn obstruction_region(tv: &ToricVariety, q: i64) -> Result<ObstructionRegion> {
    let q = check_q(tv, q)?;
    let alphas: Vec<(usize, RaySubset)> = (q..tv.dim())
        .flat_map(|i| tv.table.j_set(i as i64).into_iter().map(move |a| (i, a)))
        .collect();
    let closed_images = alphas.par_iter().map(|&(_, a)| closed_image(tv, a)).collect();
    Ok(ObstructionRegion { q, alphas, closed_images })
}

/// Whether `d + div(χ^u) ∈ Ō_α` for some `u`, with `d` any lift of `c`.
pub fn lift_meets_orthant(tv: &ToricVariety, c: &ClassVector, alpha: RaySubset) -> bool {
    let d = tv.lattice.lift(c);
    lp_feasible(&lift_system(tv, &d, alpha)).feasible
}

fn lift_system(tv: &ToricVariety, d: &[BigRational], alpha: RaySubset) -> StrictSystem {
    let mut sys = StrictSystem::new(tv.dim());
    for (j, dj) in d.iter().enumerate() {
        let v: Vec<BigRational> = tv.fan.ray(j).iter().map(|&x| rat(x)).collect();
        if alpha.contains(j) {
            sys.push(Constraint::closed(v.iter().map(|x| -x.clone()).collect(), -dj.clone()));
        } else {
            sys.push(Constraint::closed(v, dj.clone()));
        }
    }
    sys
}

/// `c ∈ Amp_q`.
pub fn is_q_ample(tv: &ToricVariety, c: &ClassVector, q: i64) -> Result<bool> {
    let q = check_q(tv, q)?;
    let alphas: Vec<RaySubset> = (q..tv.dim()).flat_map(|i| tv.table.j_set(i as i64)).collect();
    Ok(!alphas.par_iter().any(|&a| lift_meets_orthant(tv, c, a)))
}

/// Least `q` with `c ∈ Amp_q`.
pub fn ampleness_level(tv: &ToricVariety, c: &ClassVector) -> usize {
    (0..tv.dim())
        .find(|&q| is_q_ample(tv, c, q as i64).expect("q in range"))
        .unwrap_or(tv.dim())
}

/// Closed cone spanned by the classes `[E_i]`.
pub fn effective_cone(tv: &ToricVariety) -> POCone {
    closed_image(tv, RaySubset::empty())
}

/// `{y : sign_h(y) = sign_h(cell)` whenever that sign is nonzero`}`: the union
/// of the cells whose closure contains `cell`. Open and convex.
fn open_star(cell: &ArrangementCell, hyperplanes: &[Vec<BigInt>]) -> POCone {
    let dim = cell.witness.len();
    let hs = cell
        .signs
        .iter()
        .zip(hyperplanes)
        .filter_map(|(s, n)| match s {
            Sign::Pos => Some(HalfSpace::new(n.clone(), true)),
            Sign::Neg => Some(HalfSpace::new(n.iter().map(|x| -x).collect(), true)),
            Sign::Zero => None,
        })
        .collect();
    POCone::new(dim, hs)
}

/// `star(a) ⊆ star(b)` iff the signs of `b` are those of `a` with some zeroed.
fn star_within(a: &[Sign], b: &[Sign]) -> bool {
    a.iter().zip(b).all(|(x, y)| *y == Sign::Zero || x == y)
}

pub fn q_ample_cone(tv: &ToricVariety, q: i64) -> Result<QAmpleCone> {
    let region = obstruction_region(tv, q)?;
    let rank = tv.picard_rank();
    let k_bar = region.closure(rank);
    let hyperplanes = k_bar.hyperplanes();
    let cells: Vec<ArrangementCell> =
        arrangement_cells(rank, &hyperplanes).into_iter().filter(|c| !k_bar.contains(&c.witness)).collect();

    for c in &cells {
        let member = is_q_ample(tv, &ClassVector::new(c.witness.clone()), q)?;
        assert!(member, "arrangement cell outside the obstruction region fails the membership test");
    }

    let stars: Vec<POCone> = cells
        .iter()
        .filter(|a| !cells.iter().any(|b| b.signs != a.signs && star_within(&a.signs, &b.signs)))
        .map(|c| open_star(c, &hyperplanes).irredundant())
        .collect();
    let closed_pieces = cells
        .iter()
        .filter(|c| c.signs.iter().all(|s| *s != Sign::Zero))
        .map(|c| c.to_cone(&hyperplanes).closure().irredundant())
        .collect();
    Ok(QAmpleCone {
        q: region.q,
        cells: ConeUnion::new(rank, cells.iter().map(|c| c.to_cone(&hyperplanes).irredundant()).collect()),
        open_cover: ConeUnion::new(rank, stars),
        closed_pieces,
        witnesses: cells.into_iter().map(|c| c.witness).collect(),
    })
}

/// Deterministic rational class points: numerators in `[−20, 20]`,
/// denominators in `[1, 7]`.
pub fn sample_classes(rank: usize, count: usize, seed: u64) -> Vec<ClassVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            ClassVector::new(
                (0..rank)
                    .map(|_| {
                        BigRational::new(BigInt::from(rng.gen_range(-20i64..=20)), BigInt::from(rng.gen_range(1i64..=7)))
                    })
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::exact::matrix::ratio;

    fn tv(fan: crate::Fan) -> ToricVariety {
        ToricVariety::new(fan).unwrap()
    }

    fn cv(c: &[i64]) -> ClassVector {
        ClassVector::from_i64(c)
    }

    fn cone(rows: &[(&[i64], bool)]) -> POCone {
        POCone::new(2, rows.iter().map(|(n, s)| HalfSpace::from_i64(n, *s)).collect())
    }

    #[test]
    fn figure_one_images() {
        let bl = tv(catalog::blowup_projective_space(2));
        let r1 = obstruction_region(&bl, 1).unwrap();
        assert_eq!(r1.alphas, vec![(1, RaySubset::full(4))]);
        let want = ConeUnion::new(2, vec![cone(&[(&[-1, 0], false), (&[-1, -1], false)])]);
        assert!(r1.closure(2).same_set(&want));
        let r0 = obstruction_region(&bl, 0).unwrap();
        assert_eq!(r0.closed_images.len(), 3);
    }

    #[test]
    fn top_degree_region_is_empty() {
        for fan in catalog::standard_fans() {
            let t = tv(fan);
            let n = t.dim() as i64;
            assert!(obstruction_region(&t, n).unwrap().alphas.is_empty());
            assert!(is_q_ample(&t, &ClassVector::new(vec![rat(0); t.picard_rank()]), n).unwrap());
        }
    }

    #[test]
    fn invalid_q() {
        let p2 = tv(catalog::projective_space(2));
        assert_eq!(is_q_ample(&p2, &cv(&[1]), 3), Err(Error::InvalidQ { q: 3, dim: 2 }));
        assert_eq!(is_q_ample(&p2, &cv(&[1]), -1), Err(Error::InvalidQ { q: -1, dim: 2 }));
    }

    #[test]
    fn blowup_p3_membership() {
        let bl = tv(catalog::blowup_projective_space(3));
        assert!(is_q_ample(&bl, &cv(&[2, -1]), 0).unwrap());
        assert!(is_q_ample(&bl, &cv(&[1, -2]), 1).unwrap());
        assert!(!is_q_ample(&bl, &cv(&[1, -2]), 0).unwrap());
        assert!(!is_q_ample(&bl, &cv(&[0, -1]), 2).unwrap());
        assert_eq!(ampleness_level(&bl, &cv(&[2, -1])), 0);
        assert_eq!(ampleness_level(&bl, &cv(&[0, 1])), 2);
        assert_eq!(ampleness_level(&bl, &cv(&[-1, 0])), 3);
    }

    #[test]
    fn blowup_p3_cones() {
        let bl = tv(catalog::blowup_projective_space(3));
        let amp0 = ConeUnion::new(2, vec![cone(&[(&[0, -1], true), (&[1, 1], true)])]);
        let amp1 = ConeUnion::new(2, vec![cone(&[(&[1, 0], true), (&[0, -1], true)])]);
        let neg_eff = ConeUnion::new(2, vec![cone(&[(&[-1, 0], false), (&[-1, -1], false)])]);
        assert!(q_ample_cone(&bl, 0).unwrap().cells.same_set(&amp0));
        assert!(q_ample_cone(&bl, 1).unwrap().cells.same_set(&amp1));
        let amp2 = q_ample_cone(&bl, 2).unwrap();
        assert!(amp2.cells.same_set(&neg_eff.complement()));
        assert!(amp2.open_cover.same_set(&amp2.cells));
        let whole = q_ample_cone(&bl, 3).unwrap();
        assert!(whole.cells.same_set(&ConeUnion::new(2, vec![POCone::whole(2)])));
    }

    #[test]
    fn open_cover_is_open() {
        for fan in catalog::standard_fans() {
            let t = tv(fan);
            for q in 0..=t.dim() as i64 {
                let amp = q_ample_cone(&t, q).unwrap();
                assert!(amp.open_cover.same_set(&amp.cells));
                for c in amp.open_cover.cones() {
                    assert!(c.constraints().iter().all(|h| h.strict));
                }
            }
        }
    }

    #[test]
    fn effective_cones() {
        let bl = tv(catalog::blowup_projective_space(2));
        let want = ConeUnion::new(2, vec![cone(&[(&[1, 0], false), (&[1, 1], false)])]);
        assert!(ConeUnion::new(2, vec![effective_cone(&bl)]).same_set(&want));
        let p2 = tv(catalog::projective_space(2));
        let eff = effective_cone(&p2);
        assert!(eff.contains(&[rat(5)]) && !eff.contains(&[rat(-1)]));
        let pp = tv(catalog::p1_times_p1());
        let quad = ConeUnion::new(2, vec![cone(&[(&[1, 0], false), (&[0, 1], false)])]);
        assert!(ConeUnion::new(2, vec![effective_cone(&pp)]).same_set(&quad));
    }

    #[test]
    fn nesting_on_samples() {
        for fan in catalog::standard_fans() {
            let t = tv(fan);
            for c in sample_classes(t.picard_rank(), 40, 7) {
                let flags: Vec<bool> = (0..=t.dim() as i64).map(|q| is_q_ample(&t, &c, q).unwrap()).collect();
                assert!(flags.windows(2).all(|w| !w[0] || w[1]));
            }
        }
    }

    #[test]
    fn samples_are_deterministic() {
        assert_eq!(sample_classes(2, 5, 1), sample_classes(2, 5, 1));
        assert_ne!(sample_classes(2, 5, 1), sample_classes(2, 5, 2));
        assert!(sample_classes(1, 50, 0).iter().all(|c| c.coords[0] <= ratio(20, 1)));
    }
}
