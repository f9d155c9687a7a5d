//! Complete simplicial fans, their divisors and the class map `ℝ^I → N¹(X)`.
//!
//! Rays are indexed `0..|I|` internally; all serialized forms use 1-based
//! indices.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact::lp::{minimize, Constraint, LpOutcome};
use crate::exact::matrix::{int, inverse, rat, to_rat, IntMatrix, RatMatrix};
use crate::exact::smith::smith_normal_form;
use crate::nerve;

/// JSON shape of a fan: `{"dim": n, "rays": [[..]..], "max_cones": [[1-based]..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSpec {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

/// A simplicial fan with full-dimensional maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    /// Sorted 0-based ray indices of each maximal cone.
    max_cones: Vec<Vec<usize>>,
    /// Inverse of the matrix whose rows are the rays of each maximal cone.
    cone_inverses: Vec<RatMatrix>,
}

/// Two maximal cones sharing a ridge; `opposite` is the ray of `to` not in `from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub from: usize,
    pub to: usize,
    pub opposite: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub simplicial: bool,
    pub ridges: usize,
    pub top_cohomology: usize,
    pub located_points: usize,
    pub ample_witness: Vec<String>,
}

impl Fan {
    /// Builds a fan, checking structural well-formedness and simpliciality.
    /// `max_cones` uses 1-based indices as in the file format.
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        if dim == 0 {
            return Err(Error::Malformed("dimension must be positive".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::Malformed(format!("ray {} has length {}", i + 1, r.len())));
            }
            let g = r.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            if g != 1 {
                return Err(Error::Malformed(format!("ray {} is not primitive", i + 1)));
            }
        }
        let distinct: BTreeSet<&Vec<i64>> = rays.iter().collect();
        if distinct.len() != rays.len() {
            return Err(Error::Malformed("duplicate rays".into()));
        }

        let mut cones = Vec::with_capacity(max_cones.len());
        for cone in &max_cones {
            let set: BTreeSet<usize> = cone.iter().copied().collect();
            if set.len() != cone.len() || set.iter().any(|&i| i == 0 || i > rays.len()) {
                return Err(Error::Malformed(format!("bad ray indices in cone {cone:?}")));
            }
            if set.len() != dim {
                return Err(Error::NotSimplicial(format!(
                    "cone {cone:?} has {} rays in dimension {dim}",
                    set.len()
                )));
            }
            cones.push(set.into_iter().map(|i| i - 1).collect::<Vec<_>>());
        }
        let unique: BTreeSet<&Vec<usize>> = cones.iter().collect();
        if unique.len() != cones.len() {
            return Err(Error::Malformed("duplicate maximal cones".into()));
        }
        if let Some(i) = (0..rays.len()).find(|i| !cones.iter().any(|c| c.contains(i))) {
            return Err(Error::Malformed(format!("ray {} lies in no maximal cone", i + 1)));
        }

        let mut cone_inverses = Vec::with_capacity(cones.len());
        for cone in &cones {
            let m = RatMatrix::from_i64(&cone.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>());
            match inverse(&m) {
                Some(inv) => cone_inverses.push(inv),
                None => {
                    let one_based: Vec<usize> = cone.iter().map(|i| i + 1).collect();
                    return Err(Error::NotSimplicial(format!(
                        "rays of cone {one_based:?} are linearly dependent"
                    )));
                }
            }
        }
        Ok(Fan { dim, rays, max_cones: cones, cone_inverses })
    }

    pub fn from_spec(spec: &FanSpec) -> Result<Fan> {
        Fan::new(spec.dim, spec.rays.clone(), spec.max_cones.clone())
    }

    pub fn from_json(text: &str) -> Result<Fan> {
        let spec: FanSpec =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        Fan::from_spec(&spec)
    }

    pub fn to_spec(&self) -> FanSpec {
        FanSpec {
            dim: self.dim,
            rays: self.rays.clone(),
            max_cones: self.max_cones.iter().map(|c| c.iter().map(|i| i + 1).collect()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Stable SHA-256 of the canonical JSON form.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_string(&self.to_spec()).expect("fan spec serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// The `|I| × n` matrix with rows `v_i`; as a map it sends `m ∈ M` to
    /// `(⟨m, v_i⟩)_i`.
    pub fn pairing_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64(&self.rays)
    }

    pub fn pairing(&self, m: &[BigRational], i: usize) -> BigRational {
        self.rays[i].iter().zip(m).fold(BigRational::zero(), |acc, (&v, x)| acc + x * rat(v))
    }

    /// Divisor of the character `m`: coefficients `⟨m, v_i⟩`.
    pub fn principal_divisor(&self, m: &[i64]) -> TorusDivisor {
        TorusDivisor::new(
            self.rays.iter().map(|v| int(v.iter().zip(m).map(|(a, b)| a * b).sum())).collect(),
        )
    }

    /// Pairs of maximal cones sharing a ridge, with the opposite ray.
    pub fn walls(&self) -> Vec<Wall> {
        let mut walls = Vec::new();
        for (a, ca) in self.max_cones.iter().enumerate() {
            for (b, cb) in self.max_cones.iter().enumerate() {
                if a == b {
                    continue;
                }
                let outside: Vec<usize> = cb.iter().copied().filter(|j| !ca.contains(j)).collect();
                if outside.len() == 1 {
                    walls.push(Wall { from: a, to: b, opposite: outside[0] });
                }
            }
        }
        walls
    }

    /// Coefficients `c` with `v_target = Σ_k c_k v_{cone[k]}`.
    pub fn coordinates_in_cone(&self, cone: usize, target: &[BigRational]) -> Vec<BigRational> {
        self.cone_inverses[cone].transpose().mul_vec(target)
    }

    /// Rational local characters `m_σ` with `⟨m_σ, v_i⟩ = −d_i` on the rays of σ.
    pub fn local_character(&self, cone: usize, coeffs: &[BigRational]) -> Vec<BigRational> {
        let rhs: Vec<BigRational> = self.max_cones[cone].iter().map(|&i| -coeffs[i].clone()).collect();
        self.cone_inverses[cone].mul_vec(&rhs)
    }

    /// Whether `p` lies in the closed maximal cone `cone`.
    pub fn cone_contains(&self, cone: usize, p: &[BigRational]) -> bool {
        self.coordinates_in_cone(cone, p).iter().all(|x| !x.is_negative())
    }

    /// Every ridge lies in exactly two maximal cones.
    pub fn check_ridges(&self) -> Result<usize> {
        let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for cone in &self.max_cones {
            for skip in 0..cone.len() {
                let ridge: Vec<usize> =
                    cone.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
                *count.entry(ridge).or_default() += 1;
            }
        }
        for (ridge, n) in &count {
            if *n != 2 {
                let one_based: Vec<usize> = ridge.iter().map(|i| i + 1).collect();
                return Err(Error::NotComplete(format!(
                    "ridge {one_based:?} lies in {n} maximal cone(s)"
                )));
            }
        }
        Ok(count.len())
    }

    /// Full validation: simplicial, ridge condition, sphere cohomology,
    /// point location and projectivity.
    pub fn validate(&self) -> Result<ValidationReport> {
        let ridges = self.check_ridges()?;

        let complex = nerve::boundary_complex(self);
        let top = nerve::reduced_cohomology(&complex)
            .into_iter()
            .find(|&(deg, _)| deg == self.dim as i64 - 1)
            .map_or(0, |(_, d)| d);
        if top != 1 {
            return Err(Error::NotComplete(format!(
                "boundary complex has H^{} of dimension {top}, expected 1",
                self.dim - 1
            )));
        }

        let located = self.locate_random_points(100, 0)?;
        let ample = self.find_ample()?;
        Ok(ValidationReport {
            simplicial: true,
            ridges,
            top_cohomology: top,
            located_points: located,
            ample_witness: ample.coeffs.iter().map(|c| c.to_string()).collect(),
        })
    }

    /// Checks that `count` seeded pseudo-random rational points each lie in some
    /// maximal cone.
    pub fn locate_random_points(&self, count: usize, seed: u64) -> Result<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            let p: Vec<BigRational> = (0..self.dim)
                .map(|_| {
                    BigRational::new(int(rng.gen_range(-1000..=1000)), int(rng.gen_range(1..=97)))
                })
                .collect();
            if !(0..self.max_cones.len()).any(|c| self.cone_contains(c, &p)) {
                let shown: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                return Err(Error::NotComplete(format!(
                    "point ({}) lies in no maximal cone",
                    shown.join(", ")
                )));
            }
        }
        Ok(count)
    }

    /// The class lattice and projection `ℝ^I → N¹(X)`.
    ///
    /// Coordinates: let `B` be the lexicographically first set of `n` linearly
    /// independent rays. The classes `[E_j]`, `j ∉ B`, form a basis of `N¹(X)`;
    /// a divisor's coordinates are the coefficients of the unique linearly
    /// equivalent ℚ-divisor supported off `B`.
    pub fn class_lattice(&self) -> ClassLattice {
        let n = self.dim;
        let count = self.num_rays();
        let eliminated = first_independent_subset(&self.rays, n);
        let basis_rays: Vec<usize> = (0..count).filter(|i| !eliminated.contains(i)).collect();
        let rho = basis_rays.len();

        let vb = RatMatrix::from_i64(&eliminated.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>());
        let vb_inv_t = inverse(&vb).expect("independent rays").transpose();

        let mut projection = RatMatrix::zeros(rho, count);
        for (row, &j) in basis_rays.iter().enumerate() {
            projection[(row, j)] = BigRational::one();
            // v_j = Σ c_i v_i over i ∈ B; subtract the character fixing B.
            let vj: Vec<BigRational> = self.rays[j].iter().map(|&x| rat(x)).collect();
            let c = vb_inv_t.mul_vec(&vj);
            for (k, &i) in eliminated.iter().enumerate() {
                projection[(row, i)] = -c[k].clone();
            }
        }
        let mut section = RatMatrix::zeros(count, rho);
        for (col, &j) in basis_rays.iter().enumerate() {
            section[(j, col)] = BigRational::one();
        }

        let smith = smith_normal_form(&self.pairing_matrix());
        let torsion = smith.invariants().into_iter().filter(|d| !d.is_one()).collect();

        ClassLattice { rank: rho, basis_rays, eliminated, projection, section, torsion }
    }

    /// Cartier test with per-cone local characters.
    pub fn is_cartier(&self, d: &TorusDivisor) -> CartierCheck {
        let coeffs = d.to_rat();
        let mut failing = None;
        let characters: Vec<Vec<BigRational>> = (0..self.max_cones.len())
            .map(|c| {
                let m = self.local_character(c, &coeffs);
                if failing.is_none() && !m.iter().all(|x| x.is_integer()) {
                    failing = Some(c);
                }
                m
            })
            .collect();
        CartierCheck { cartier: failing.is_none(), failing_cone: failing, characters }
    }

    pub(crate) fn require_cartier(&self, d: &TorusDivisor) -> Result<CartierCheck> {
        assert_eq!(d.len(), self.num_rays(), "divisor length must equal ray count");
        let check = self.is_cartier(d);
        match check.failing_cone {
            Some(c) => Err(Error::NotCartier { cone: self.max_cones[c].iter().map(|i| i + 1).collect() }),
            None => Ok(check),
        }
    }

    /// Strict convexity of the support function across every wall.
    pub fn is_ample(&self, d: &TorusDivisor) -> Result<bool> {
        let check = self.require_cartier(d)?;
        let coeffs = d.to_rat();
        Ok(self.walls().iter().all(|w| {
            (self.pairing(&check.characters[w.from], w.opposite) + &coeffs[w.opposite]).is_positive()
        }))
    }

    /// Wall functional `a ↦ a_j + ⟨m_σ(a), v_j⟩` as a vector over `I`.
    fn wall_functional(&self, w: &Wall) -> Vec<BigRational> {
        let vj: Vec<BigRational> = self.rays[w.opposite].iter().map(|&x| rat(x)).collect();
        let c = self.coordinates_in_cone(w.from, &vj);
        let mut f = vec![BigRational::zero(); self.num_rays()];
        f[w.opposite] = BigRational::one();
        for (k, &i) in self.max_cones[w.from].iter().enumerate() {
            f[i] -= &c[k];
        }
        f
    }

    /// An integral Cartier ample divisor, found by an exact LP over the wall
    /// inequalities.
    pub fn find_ample(&self) -> Result<TorusDivisor> {
        let count = self.num_rays();
        let mut rows: Vec<Constraint> = self
            .walls()
            .iter()
            .map(|w| Constraint::closed(self.wall_functional(w), -BigRational::one()))
            .collect();
        for i in 0..count {
            let mut e = vec![BigRational::zero(); count];
            e[i] = BigRational::one();
            rows.push(Constraint::closed(e, BigRational::zero()));
        }
        let objective = vec![BigRational::one(); count];
        let LpOutcome::Optimal { point, .. } = minimize(count, &rows, &objective) else {
            return Err(Error::NotProjective);
        };
        // Clear denominators of the coefficients and of every local character.
        let mut scale = point.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for c in 0..self.max_cones.len() {
            for x in self.local_character(c, &point) {
                scale = scale.lcm(x.denom());
            }
        }
        let coeffs = point.iter().map(|x| (x * to_rat(&scale)).to_integer()).collect();
        Ok(TorusDivisor::new(coeffs))
    }
}

/// Lexicographically first `n`-subset of rows that is linearly independent.
fn first_independent_subset(rays: &[Vec<i64>], n: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    // Greedy selection yields the lexicographically first independent subset.
    for i in 0..rays.len() {
        let mut trial = chosen.clone();
        trial.push(i);
        let m = RatMatrix::from_i64(&trial.iter().map(|&k| rays[k].clone()).collect::<Vec<_>>());
        if crate::exact::rational_rank(&m) == trial.len() {
            chosen = trial;
            if chosen.len() == n {
                break;
            }
        }
    }
    chosen
}

/// Torus-invariant divisor `Σ d_i E_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusDivisor {
    pub coeffs: Vec<BigInt>,
}

/// JSON shape of a divisor: `{"coeffs": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorSpec {
    pub coeffs: Vec<i64>,
}

impl TorusDivisor {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        TorusDivisor { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        TorusDivisor { coeffs: coeffs.iter().map(|&c| int(c)).collect() }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_rat(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(to_rat).collect()
    }

    pub fn scaled(&self, k: i64) -> Self {
        TorusDivisor { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn add(&self, other: &TorusDivisor) -> Self {
        TorusDivisor { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierCheck {
    pub cartier: bool,
    pub failing_cone: Option<usize>,
    /// Rational solution `m_σ` per maximal cone; integral iff Cartier there.
    pub characters: Vec<Vec<BigRational>>,
}

/// A point of `N¹(X)` in the lattice's coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassVector {
    pub coords: Vec<BigRational>,
}

impl ClassVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        ClassVector { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        ClassVector { coords: coords.iter().map(|&c| rat(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Cokernel data of `M → ℤ^I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLattice {
    pub rank: usize,
    /// Rays whose classes are the coordinate basis of `N¹(X)`.
    pub basis_rays: Vec<usize>,
    /// The complementary independent rays whose coefficients are eliminated.
    pub eliminated: Vec<usize>,
    /// `ρ × |I|` matrix of `[−]`.
    pub projection: RatMatrix,
    /// `|I| × ρ` right inverse of `projection`.
    pub section: RatMatrix,
    /// Invariant factors > 1 of `Cl(X)`.
    pub torsion: Vec<BigInt>,
}

impl ClassLattice {
    pub fn class_of(&self, d: &TorusDivisor) -> ClassVector {
        ClassVector::new(self.projection.mul_vec(&d.to_rat()))
    }

    pub fn class_of_rational(&self, coeffs: &[BigRational]) -> ClassVector {
        ClassVector::new(self.projection.mul_vec(coeffs))
    }

    /// A divisor (rational coefficients) whose class is `c`.
    pub fn lift(&self, c: &ClassVector) -> Vec<BigRational> {
        self.section.mul_vec(&c.coords)
    }

    /// Classes `[E_i]` of the prime divisors, in ray order.
    pub fn ray_classes(&self) -> Vec<ClassVector> {
        (0..self.projection.cols()).map(|j| ClassVector::new(self.projection.column(j))).collect()
    }
}
