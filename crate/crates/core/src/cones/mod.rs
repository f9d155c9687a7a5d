//! Partially open rational polyhedral cones and finite unions of them.

mod arrangement;
mod polytope;

pub use arrangement::{arrangement_cells, cell_dimension, ArrangementCell, Sign};
pub use polytope::Polyhedron;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::lp::{lp_feasible, Constraint, StrictSystem};
use crate::exact::matrix::{dot, inverse, kernel_basis, primitive_integer, to_rat, to_rat_vec, RatMatrix};
use crate::nerve::RaySubset;

/// Homogeneous half-space `normal·x ≥ 0`, or `> 0` when strict.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    pub normal: Vec<BigInt>,
    pub strict: bool,
}

impl HalfSpace {
    pub fn new(normal: Vec<BigInt>, strict: bool) -> Self {
        HalfSpace { normal, strict }
    }

    pub fn from_i64(normal: &[i64], strict: bool) -> Self {
        HalfSpace { normal: normal.iter().map(|&x| BigInt::from(x)).collect(), strict }
    }

    pub fn value_at(&self, x: &[BigRational]) -> BigRational {
        dot(&to_rat_vec(&self.normal), x)
    }

    pub fn holds_at(&self, x: &[BigRational]) -> bool {
        let v = self.value_at(x);
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }

    fn as_constraint(&self) -> Constraint {
        Constraint::new(to_rat_vec(&self.normal), BigRational::zero(), self.strict)
    }

    fn negated_complement(&self) -> Constraint {
        // ¬(a·x ≥ 0) is (−a)·x > 0, ¬(a·x > 0) is (−a)·x ≥ 0
        let neg: Vec<BigRational> = self.normal.iter().map(|x| to_rat(&-x)).collect();
        Constraint::new(neg, BigRational::zero(), !self.strict)
    }
}

/// Intersection of finitely many homogeneous half-spaces, some open.
///
/// Normals are kept primitive, lexicographically sorted, and deduplicated with
/// the stricter flag winning.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct POCone {
    dim: usize,
    constraints: Vec<HalfSpace>,
}

impl POCone {
    /// Canonicalizes the given half-spaces. Zero normals are dropped when
    /// closed; a strict zero normal makes the cone empty.
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>) -> Self {
        let mut by_normal: BTreeMap<Vec<BigInt>, bool> = BTreeMap::new();
        for h in halfspaces {
            assert_eq!(h.normal.len(), dim, "half-space dimension mismatch");
            let normal = primitive_integer(&to_rat_vec(&h.normal));
            if normal.iter().all(Zero::is_zero) {
                if h.strict {
                    return POCone::empty(dim);
                }
                continue;
            }
            let e = by_normal.entry(normal).or_insert(false);
            *e |= h.strict;
        }
        let constraints = by_normal.into_iter().map(|(normal, strict)| HalfSpace { normal, strict }).collect();
        POCone { dim, constraints }
    }

    /// From rational normals, scaled to primitive integers.
    pub fn from_rational(dim: usize, rows: Vec<(Vec<BigRational>, bool)>) -> Self {
        let hs = rows.into_iter().map(|(n, strict)| HalfSpace::new(primitive_integer(&n), strict)).collect();
        POCone::new(dim, hs)
    }

    /// The whole ambient space.
    pub fn whole(dim: usize) -> Self {
        POCone { dim, constraints: Vec::new() }
    }

    /// Canonical empty cone `{x₁ > 0, −x₁ > 0}`.
    pub fn empty(dim: usize) -> Self {
        assert!(dim > 0, "empty cone needs a positive dimension");
        let mut e = vec![BigInt::zero(); dim];
        e[0] = BigInt::one();
        let neg: Vec<BigInt> = e.iter().map(|x| -x).collect();
        POCone::new(dim, vec![HalfSpace::new(e, true), HalfSpace::new(neg, true)])
    }

    /// `O_α = {d : d_i < 0 (i ∈ α), d_i ≥ 0 (i ∉ α)}` in `ℝ^size`.
    pub fn orthant(size: usize, alpha: RaySubset) -> Self {
        let hs = (0..size)
            .map(|i| {
                let mut n = vec![BigInt::zero(); size];
                if alpha.contains(i) {
                    n[i] = -BigInt::one();
                    HalfSpace::new(n, true)
                } else {
                    n[i] = BigInt::one();
                    HalfSpace::new(n, false)
                }
            })
            .collect();
        POCone::new(size, hs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[HalfSpace] {
        &self.constraints
    }

    pub fn is_closed(&self) -> bool {
        self.constraints.iter().all(|h| !h.strict)
    }

    pub fn system(&self) -> StrictSystem {
        StrictSystem { dim: self.dim, constraints: self.constraints.iter().map(HalfSpace::as_constraint).collect() }
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        assert_eq!(x.len(), self.dim, "point dimension mismatch");
        self.constraints.iter().all(|h| h.holds_at(x))
    }

    pub fn is_empty(&self) -> bool {
        !lp_feasible(&self.system()).feasible
    }

    /// A point of the cone, preferring one in its relative interior of the
    /// strict part; `None` if empty.
    pub fn witness(&self) -> Option<Vec<BigRational>> {
        lp_feasible(&self.system()).witness
    }

    pub fn closure(&self) -> POCone {
        if self.is_empty() {
            return POCone::empty(self.dim);
        }
        let hs = self.constraints.iter().map(|h| HalfSpace::new(h.normal.clone(), false)).collect();
        POCone::new(self.dim, hs)
    }

    /// Removes constraints implied by the others, one at a time.
    pub fn irredundant(&self) -> POCone {
        if self.is_empty() {
            return POCone::empty(self.dim);
        }
        let mut kept: Vec<HalfSpace> = self.constraints.clone();
        let mut i = 0;
        while i < kept.len() {
            let mut sys = StrictSystem::new(self.dim);
            for (k, h) in kept.iter().enumerate() {
                if k != i {
                    sys.push(h.as_constraint());
                }
            }
            sys.push(kept[i].negated_complement());
            if lp_feasible(&sys).feasible {
                i += 1;
            } else {
                kept.remove(i);
            }
        }
        POCone { dim: self.dim, constraints: kept }
    }

    /// Whether some closed constraint holds with equality on the whole cone.
    pub fn has_implicit_equality(&self) -> bool {
        let base = self.system();
        self.constraints.iter().filter(|h| !h.strict).any(|h| {
            let mut sys = base.clone();
            sys.push(HalfSpace::new(h.normal.clone(), true).as_constraint());
            !lp_feasible(&sys).feasible
        })
    }

    pub fn is_full_dimensional(&self) -> bool {
        !self.is_empty() && !self.closure().has_implicit_equality()
    }

    /// Topological interior: empty unless full-dimensional, otherwise the
    /// irredundant description with every constraint strict.
    pub fn interior(&self) -> POCone {
        let irr = self.irredundant();
        if irr.is_empty() || irr.closure().has_implicit_equality() {
            return POCone::empty(self.dim);
        }
        let hs = irr.constraints.iter().map(|h| HalfSpace::new(h.normal.clone(), true)).collect();
        POCone::new(self.dim, hs)
    }

    pub fn intersect(&self, other: &POCone) -> POCone {
        assert_eq!(self.dim, other.dim);
        let mut hs = self.constraints.clone();
        hs.extend(other.constraints.iter().cloned());
        POCone::new(self.dim, hs)
    }

    /// `{−x : x ∈ self}`.
    pub fn negated(&self) -> POCone {
        let hs = self.constraints.iter().map(|h| HalfSpace::new(h.normal.iter().map(|x| -x).collect(), h.strict)).collect();
        POCone::new(self.dim, hs)
    }

    /// Image under a surjective linear map (`map` has `target dim` rows).
    ///
    /// Points are written `x = L y + K z` with `L` a right inverse of `map`
    /// and `K` a kernel basis; the `z` coordinates are then eliminated by
    /// Fourier–Motzkin. A combined inequality is strict iff one of its parents
    /// is: `a·x > 0` and `b·x ≥ 0` give `(a+b)·x > 0`.
    pub fn project(&self, map: &RatMatrix) -> POCone {
        assert_eq!(map.cols(), self.dim, "map does not act on the cone's space");
        let target = map.rows();
        if self.is_empty() {
            return POCone::empty(target);
        }
        let gram = map.mul(&map.transpose());
        let right_inv = map.transpose().mul(&inverse(&gram).expect("projection map must be surjective"));
        let kernel = kernel_basis(map);
        let k = kernel.len();

        // Rows over (y, z).
        let mut rows: Vec<(Vec<BigRational>, bool)> = self
            .constraints
            .iter()
            .map(|h| {
                let a = to_rat_vec(&h.normal);
                let mut row: Vec<BigRational> = (0..target).map(|c| dot(&a, &right_inv.column(c))).collect();
                row.extend(kernel.iter().map(|kv| dot(&a, kv)));
                (row, h.strict)
            })
            .collect();

        let mut width = target + k;
        while width > target {
            let col = width - 1;
            let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
            for (row, strict) in rows {
                let c = row[col].clone();
                if c.is_positive() {
                    pos.push((row, strict, c));
                } else if c.is_negative() {
                    neg.push((row, strict, c));
                } else {
                    zero.push((row, strict));
                }
            }
            let mut next: Vec<(Vec<BigRational>, bool)> = zero.into_iter().map(|(mut r, s)| {
                r.truncate(col);
                (r, s)
            }).collect();
            for (p, ps, pc) in &pos {
                for (q, qs, qc) in &neg {
                    let qa = -qc.clone();
                    let combined: Vec<BigRational> = (0..col).map(|j| &p[j] * &qa + &q[j] * pc).collect();
                    next.push((combined, *ps || *qs));
                }
            }
            width = col;
            let pruned = POCone::from_rational(width, next).irredundant();
            rows = pruned.constraints.iter().map(|h| (to_rat_vec(&h.normal), h.strict)).collect();
            if pruned.is_empty() {
                return POCone::empty(target);
            }
        }
        POCone::from_rational(target, rows).irredundant()
    }

    /// `{"constraints": [{"normal": [..], "strict": bool}, ..]}`
    pub fn to_json(&self) -> Value {
        let cs: Vec<Value> = self
            .constraints
            .iter()
            .map(|h| json!({ "normal": h.normal.iter().map(bigint_json).collect::<Vec<_>>(), "strict": h.strict }))
            .collect();
        json!({ "constraints": cs })
    }

    pub fn from_json(dim: usize, v: &Value) -> Result<POCone> {
        let bad = |m: &str| Error::Malformed(format!("cone JSON: {m}"));
        let cs = v.get("constraints").and_then(Value::as_array).ok_or_else(|| bad("missing constraints"))?;
        let mut hs = Vec::with_capacity(cs.len());
        for c in cs {
            let normal = c.get("normal").and_then(Value::as_array).ok_or_else(|| bad("missing normal"))?;
            let normal: Vec<BigInt> = normal
                .iter()
                .map(|x| match x {
                    Value::Number(n) => n.as_i64().map(BigInt::from),
                    Value::String(s) => s.parse().ok(),
                    _ => None,
                })
                .collect::<Option<_>>()
                .ok_or_else(|| bad("normal entries must be integers"))?;
            if normal.len() != dim {
                return Err(bad("normal has wrong dimension"));
            }
            let strict = c.get("strict").and_then(Value::as_bool).ok_or_else(|| bad("missing strict"))?;
            hs.push(HalfSpace::new(normal, strict));
        }
        Ok(POCone::new(dim, hs))
    }
}

fn bigint_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

/// A finite union of cones in one ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeUnion {
    dim: usize,
    cones: Vec<POCone>,
}

impl ConeUnion {
    pub fn new(dim: usize, cones: Vec<POCone>) -> Self {
        assert!(cones.iter().all(|c| c.dim == dim), "cones must share the ambient space");
        ConeUnion { dim, cones }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cones(&self) -> &[POCone] {
        &self.cones
    }

    pub fn is_empty_union(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.cones.iter().any(|c| c.contains(x))
    }

    /// Distinct hyperplanes of all constraints, oriented so the first nonzero
    /// entry is positive.
    pub fn hyperplanes(&self) -> Vec<Vec<BigInt>> {
        collect_hyperplanes(self.cones.iter())
    }

    /// Cells of the arrangement of this union's hyperplanes lying outside it.
    pub fn complement_cells(&self) -> Vec<ArrangementCell> {
        arrangement_cells(self.dim, &self.hyperplanes())
            .into_iter()
            .filter(|cell| !self.contains(&cell.witness))
            .collect()
    }

    /// The complement as a union of (partially open) cells.
    pub fn complement(&self) -> ConeUnion {
        let hyperplanes = self.hyperplanes();
        let cones = self.complement_cells().iter().map(|c| c.to_cone(&hyperplanes)).collect();
        ConeUnion::new(self.dim, cones)
    }

    pub fn closure(&self) -> ConeUnion {
        ConeUnion::new(
            self.dim,
            self.cones.iter().filter(|c| !c.is_empty()).map(POCone::closure).collect(),
        )
    }

    pub fn negated(&self) -> ConeUnion {
        ConeUnion::new(self.dim, self.cones.iter().map(POCone::negated).collect())
    }

    /// A point in exactly one of the two unions, if any. Both are unions of
    /// cells of the joint arrangement, so testing one witness per cell decides
    /// equality.
    pub fn difference_witness(&self, other: &ConeUnion) -> Option<Vec<BigRational>> {
        assert_eq!(self.dim, other.dim);
        let hyperplanes = collect_hyperplanes(self.cones.iter().chain(other.cones.iter()));
        arrangement_cells(self.dim, &hyperplanes)
            .into_iter()
            .map(|c| c.witness)
            .find(|w| self.contains(w) != other.contains(w))
    }

    pub fn same_set(&self, other: &ConeUnion) -> bool {
        self.difference_witness(other).is_none()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.cones.iter().map(POCone::to_json).collect())
    }

    pub fn from_json(dim: usize, v: &Value) -> Result<ConeUnion> {
        let arr = v.as_array().ok_or_else(|| Error::Malformed("cone union must be a list".into()))?;
        let cones = arr.iter().map(|c| POCone::from_json(dim, c)).collect::<Result<_>>()?;
        Ok(ConeUnion::new(dim, cones))
    }
}

/// Distinct oriented hyperplanes of a list of cones.
pub fn collect_hyperplanes_of(cones: &[POCone]) -> Vec<Vec<BigInt>> {
    collect_hyperplanes(cones.iter())
}

pub(crate) fn collect_hyperplanes<'a>(cones: impl Iterator<Item = &'a POCone>) -> Vec<Vec<BigInt>> {
    let mut set = std::collections::BTreeSet::new();
    for c in cones {
        for h in &c.constraints {
            set.insert(orient(&h.normal));
        }
    }
    set.into_iter().collect()
}

fn orient(n: &[BigInt]) -> Vec<BigInt> {
    match n.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => n.iter().map(|v| -v).collect(),
        _ => n.to_vec(),
    }
}
