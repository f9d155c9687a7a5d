//! The boundary complex of a fan and the reduced cohomology of unions of facets.
//!
//! For a union `Z_α` of closed facets of the polytope, all nonempty
//! intersections of the facets are faces of the polytope and hence
//! contractible, so `Z_α` is homotopy equivalent to the nerve of the cover.
//! That nerve is the subcomplex of the fan's cone complex induced on `α`: a set
//! of rays spans a cone exactly when the corresponding facets meet.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::matrix::{integer_rank, IntMatrix};
use crate::fan::Fan;

/// Default cap on `|I|` for the `2^|I|` subset sweep.
pub const DEFAULT_RAY_CAP: usize = 20;

/// A subset of ray indices as a bitmask (bit `i` = ray `i`, 0-based).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RaySubset(pub u64);

impl RaySubset {
    pub fn empty() -> Self {
        RaySubset(0)
    }

    pub fn full(count: usize) -> Self {
        assert!(count <= 64, "at most 64 rays supported in subsets");
        if count == 64 {
            RaySubset(u64::MAX)
        } else {
            RaySubset((1u64 << count) - 1)
        }
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        RaySubset(indices.iter().fold(0u64, |acc, &i| acc | (1u64 << i)))
    }

    /// From 1-based indices, as used in files and on the command line.
    pub fn from_one_based(indices: &[usize]) -> Self {
        RaySubset(indices.iter().fold(0u64, |acc, &i| acc | (1u64 << (i - 1))))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn is_subset_of(self, other: RaySubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    pub fn one_based(self) -> Vec<usize> {
        self.indices().into_iter().map(|i| i + 1).collect()
    }
}

impl fmt::Debug for RaySubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_based())
    }
}

/// Abstract simplicial complex on ray indices. Faces are sorted index lists;
/// the empty face is always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<usize>,
    faces: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    /// Closure under subsets of the given faces.
    pub fn from_maximal_faces(maximal: &[Vec<usize>]) -> Self {
        let mut faces = BTreeSet::new();
        faces.insert(Vec::new());
        for face in maximal {
            let mut sorted = face.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let k = sorted.len();
            for mask in 1u64..(1u64 << k) {
                let sub: Vec<usize> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| sorted[b]).collect();
                faces.insert(sub);
            }
        }
        let vertices = faces.iter().filter(|f| f.len() == 1).map(|f| f[0]).collect();
        SimplicialComplex { vertices, faces }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn faces(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter()
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        self.faces.contains(face)
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Largest face size minus one; `-1` for the complex with only `∅`.
    pub fn dimension(&self) -> i64 {
        self.faces.iter().map(|f| f.len() as i64).max().unwrap_or(0) - 1
    }

    /// Reduced Euler characteristic `Σ_{faces} (−1)^{|F|−1}`, empty face included.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.faces.iter().map(|f| if f.len() % 2 == 1 { 1 } else { -1 }).sum()
    }
}

/// The cone complex of the fan: all ray sets contained in a maximal cone.
pub fn boundary_complex(fan: &Fan) -> SimplicialComplex {
    SimplicialComplex::from_maximal_faces(fan.max_cones())
}

/// Faces of `sc` whose vertices all lie in `alpha`.
pub fn induced(sc: &SimplicialComplex, alpha: RaySubset) -> SimplicialComplex {
    let faces: BTreeSet<Vec<usize>> =
        sc.faces.iter().filter(|f| f.iter().all(|&i| alpha.contains(i))).cloned().collect();
    let vertices = sc.vertices.iter().copied().filter(|&i| alpha.contains(i)).collect();
    SimplicialComplex { vertices, faces }
}

/// Nonzero reduced cohomology dimensions over ℚ as `(degree, dim)` pairs.
///
/// The empty face sits in degree −1, so the complex `{∅}` has `H̃^{-1} = ℚ` and
/// every nonempty complex has `H̃^{-1} = 0`.
pub fn reduced_cohomology(sc: &SimplicialComplex) -> Vec<(i64, usize)> {
    let max_size = sc.faces.iter().map(Vec::len).max().unwrap_or(0);
    // by_size[k] = faces with k vertices = basis of C^{k-1}
    let mut by_size: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); max_size + 1];
    for f in &sc.faces {
        by_size[f.len()].push(f);
    }
    let index: Vec<BTreeMap<&Vec<usize>, usize>> = by_size
        .iter()
        .map(|faces| faces.iter().enumerate().map(|(i, &f)| (f, i)).collect())
        .collect();

    // rank[k] = rank of δ: C^{k-1} → C^k, i.e. faces of size k to size k+1.
    let mut ranks = vec![0usize; max_size + 1];
    for k in 0..max_size {
        let (lower, upper) = (&by_size[k], &by_size[k + 1]);
        if lower.is_empty() || upper.is_empty() {
            continue;
        }
        let mut m = IntMatrix::zeros(upper.len(), lower.len());
        for (r, face) in upper.iter().enumerate() {
            for pos in 0..face.len() {
                let mut boundary = (*face).clone();
                boundary.remove(pos);
                if let Some(&c) = index[k].get(&boundary) {
                    m[(r, c)] = BigInt::from(if pos % 2 == 0 { 1 } else { -1 });
                }
            }
        }
        ranks[k] = integer_rank(&m);
    }

    let mut out = Vec::new();
    for k in 0..=max_size {
        let incoming = if k == 0 { 0 } else { ranks[k - 1] };
        let dim = by_size[k].len() - ranks[k] - incoming;
        if dim > 0 {
            out.push((k as i64 - 1, dim));
        }
    }
    out
}

/// Nonzero reduced cohomology of `Z_α` for every `α ⊆ I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionTable {
    pub num_rays: usize,
    pub dim: usize,
    pub entries: BTreeMap<RaySubset, Vec<(i64, usize)>>,
}

impl ObstructionTable {
    /// Sweeps all `2^|I|` subsets in increasing bitmask order.
    pub fn compute(fan: &Fan, cap: usize) -> Result<Self> {
        let count = fan.num_rays();
        if count > cap || count > 63 {
            return Err(Error::TooManyRays { rays: count, cap: cap.min(63) });
        }
        let complex = boundary_complex(fan);
        let entries: BTreeMap<RaySubset, Vec<(i64, usize)>> = (0..(1u64 << count))
            .into_par_iter()
            .filter_map(|mask| {
                let alpha = RaySubset(mask);
                let h = reduced_cohomology(&induced(&complex, alpha));
                (!h.is_empty()).then_some((alpha, h))
            })
            .collect();
        Ok(ObstructionTable { num_rays: count, dim: fan.dim(), entries })
    }

    /// Dimension of `H̃^degree(Z_α)`.
    pub fn dimension(&self, alpha: RaySubset, degree: i64) -> usize {
        self.entries
            .get(&alpha)
            .and_then(|h| h.iter().find(|&&(d, _)| d == degree))
            .map_or(0, |&(_, dim)| dim)
    }

    /// `J_i = {α : H̃^i(Z_α) ≠ 0}`, sorted by bitmask.
    pub fn j_set(&self, degree: i64) -> Vec<RaySubset> {
        self.entries
            .iter()
            .filter(|(_, h)| h.iter().any(|&(d, _)| d == degree))
            .map(|(&a, _)| a)
            .collect()
    }

    /// All `(α, degree, dim)` with nonzero cohomology.
    pub fn nonzero(&self) -> impl Iterator<Item = (RaySubset, i64, usize)> + '_ {
        self.entries.iter().flat_map(|(&a, h)| h.iter().map(move |&(d, dim)| (a, d, dim)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn s(one_based: &[usize]) -> RaySubset {
        RaySubset::from_one_based(one_based)
    }

    #[test]
    fn projective_plane_boundary() {
        let sc = boundary_complex(&catalog::projective_space(2));
        assert_eq!(sc.num_faces(), 7);
        assert!(sc.faces().all(|f| f.len() <= 2));
        assert!(!sc.contains_face(&[0, 1, 2]));
    }

    #[test]
    fn blowup_plane_boundary() {
        let sc = boundary_complex(&catalog::blowup_projective_space(2));
        assert_eq!(sc.vertices(), &[0, 1, 2, 3]);
        for edge in [[0, 3], [1, 3], [0, 2], [1, 2]] {
            assert!(sc.contains_face(&edge));
        }
        assert!(!sc.contains_face(&[2, 3]));
        assert!(!sc.contains_face(&[0, 1]));
    }

    #[test]
    fn blowup_space_boundary_and_induced() {
        let sc = boundary_complex(&catalog::blowup_projective_space(3));
        assert!(!sc.contains_face(&[3, 4]));
        // {1,2,3} is the subdivided cone: its edges are faces, the triangle is not
        assert!(sc.contains_face(&[0, 1]) && sc.contains_face(&[1, 2]) && sc.contains_face(&[0, 2]));
        assert!(!sc.contains_face(&[0, 1, 2]));
        assert!(sc.contains_face(&[0, 1, 4]));

        let pair = induced(&sc, s(&[4, 5]));
        assert_eq!(pair.vertices(), &[3, 4]);
        assert_eq!(pair.num_faces(), 3);
        assert_eq!(reduced_cohomology(&pair), vec![(0, 1)]);

        let empty = induced(&sc, RaySubset::empty());
        assert_eq!(empty.num_faces(), 1);
        assert_eq!(reduced_cohomology(&empty), vec![(-1, 1)]);

        let full = induced(&sc, RaySubset::full(5));
        assert_eq!(full, sc);
        assert_eq!(reduced_cohomology(&full), vec![(2, 1)]);
    }

    #[test]
    fn projective_plane_table() {
        let t = ObstructionTable::compute(&catalog::projective_space(2), DEFAULT_RAY_CAP).unwrap();
        assert_eq!(t.j_set(-1), vec![RaySubset::empty()]);
        assert!(t.j_set(0).is_empty());
        assert_eq!(t.j_set(1), vec![s(&[1, 2, 3])]);
        assert_eq!(t.entries.len(), 2);
    }

    #[test]
    fn blowup_tables() {
        let t = ObstructionTable::compute(&catalog::blowup_projective_space(2), DEFAULT_RAY_CAP).unwrap();
        assert_eq!(t.j_set(0), vec![s(&[1, 2]), s(&[3, 4])]);
        assert_eq!(t.j_set(1), vec![s(&[1, 2, 3, 4])]);

        let t = ObstructionTable::compute(&catalog::blowup_projective_space(3), DEFAULT_RAY_CAP).unwrap();
        assert_eq!(t.j_set(0), vec![s(&[4, 5])]);
        assert_eq!(t.j_set(1), vec![s(&[1, 2, 3])]);
        assert_eq!(t.j_set(2), vec![s(&[1, 2, 3, 4, 5])]);
    }

    #[test]
    fn too_many_rays() {
        let fan = catalog::blowup_projective_space(3);
        assert!(matches!(ObstructionTable::compute(&fan, 4), Err(Error::TooManyRays { rays: 5, cap: 4 })));
    }

    #[test]
    fn euler_characteristic_and_dimension_bound() {
        let mut fans = catalog::standard_fans();
        fans.push(catalog::blowup_projective_space(4));
        fans.push(catalog::projective_space(3));
        for fan in fans {
            let sc = boundary_complex(&fan);
            let n = fan.dim() as i64;
            for mask in 0..(1u64 << fan.num_rays()) {
                let sub = induced(&sc, RaySubset(mask));
                let h = reduced_cohomology(&sub);
                let chi: i64 = h.iter().map(|&(d, dim)| if d % 2 == 0 { dim as i64 } else { -(dim as i64) }).sum();
                assert_eq!(chi, sub.reduced_euler_characteristic());
                assert!(h.iter().all(|&(d, _)| d < n));
            }
            let top = reduced_cohomology(&sc);
            assert_eq!(top, vec![(n - 1, 1)]);
        }
    }

    #[test]
    fn hollow_tetrahedron_and_circle() {
        let circle = SimplicialComplex::from_maximal_faces(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(reduced_cohomology(&circle), vec![(1, 1)]);
        let disk = SimplicialComplex::from_maximal_faces(&[vec![0, 1, 2]]);
        assert!(reduced_cohomology(&disk).is_empty());
        let two_circles = SimplicialComplex::from_maximal_faces(&[
            vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5],
        ]);
        assert_eq!(reduced_cohomology(&two_circles), vec![(0, 1), (1, 2)]);
    }
}
