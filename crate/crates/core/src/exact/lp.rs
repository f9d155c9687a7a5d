//! Exact rational linear programming.
//!
//! Dense two-phase tableau simplex with Bland's rule. Variables are free; every
//! constraint has the form `normal·x + offset ≥ 0` (or `> 0` when strict).

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::dot;

/// One affine constraint `normal·x + offset ≥ 0`, or `> 0` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub normal: Vec<BigRational>,
    pub offset: BigRational,
    pub strict: bool,
}

impl Constraint {
    pub fn new(normal: Vec<BigRational>, offset: BigRational, strict: bool) -> Self {
        Constraint { normal, offset, strict }
    }

    pub fn closed(normal: Vec<BigRational>, offset: BigRational) -> Self {
        Self::new(normal, offset, false)
    }

    pub fn value_at(&self, x: &[BigRational]) -> BigRational {
        dot(&self.normal, x) + &self.offset
    }

    pub fn holds_at(&self, x: &[BigRational]) -> bool {
        let v = self.value_at(x);
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }
}

/// A conjunction of constraints over a common dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrictSystem {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

impl StrictSystem {
    pub fn new(dim: usize) -> Self {
        StrictSystem { dim, constraints: Vec::new() }
    }

    pub fn push(&mut self, c: Constraint) {
        assert_eq!(c.normal.len(), self.dim, "constraint dimension mismatch");
        self.constraints.push(c);
    }

    pub fn with(mut self, c: Constraint) -> Self {
        self.push(c);
        self
    }

    pub fn is_satisfied_by(&self, x: &[BigRational]) -> bool {
        x.len() == self.dim && self.constraints.iter().all(|c| c.holds_at(x))
    }

    /// Same constraints with every strict flag dropped.
    pub fn closure(&self) -> Self {
        StrictSystem {
            dim: self.dim,
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint { strict: false, ..c.clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { point: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    pub witness: Option<Vec<BigRational>>,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= p * &f;
                }
            }
            self.rhs[i] -= &pivot_rhs * &f;
        }
        self.basis[r] = c;
    }

    fn objective_value(&self, obj: &[BigRational]) -> BigRational {
        self.basis.iter().zip(&self.rhs).fold(BigRational::zero(), |acc, (&b, v)| acc + &obj[b] * v)
    }

    /// Maximizes `obj` over the current basis. `Err(())` means unbounded.
    fn optimize(&mut self, obj: &[BigRational], allowed: &[bool]) -> Result<(), ()> {
        loop {
            // Bland: lowest-index column with positive reduced cost enters.
            let entering = (0..self.ncols).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let z = self
                    .basis
                    .iter()
                    .zip(&self.rows)
                    .fold(BigRational::zero(), |acc, (&b, row)| acc + &obj[b] * &row[j]);
                (&obj[j] - z).is_positive()
            });
            let Some(c) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(());
            };
            self.pivot(r, c);
        }
    }
}

/// Maximizes `objective·x` subject to `normal·x + offset ≥ 0` for every row.
/// Strict flags are ignored here; see [`lp_feasible`].
pub fn maximize(dim: usize, constraints: &[Constraint], objective: &[BigRational]) -> LpOutcome {
    assert_eq!(objective.len(), dim);
    let m = constraints.len();
    // Columns: x+ (dim), x- (dim), slack (m), artificial (one per negative-rhs row).
    let needs_art: Vec<bool> = constraints.iter().map(|c| c.offset.is_negative()).collect();
    let n_art = needs_art.iter().filter(|&&b| b).count();
    let slack0 = 2 * dim;
    let art0 = slack0 + m;
    let ncols = art0 + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = art0;
    for (i, c) in constraints.iter().enumerate() {
        assert_eq!(c.normal.len(), dim, "constraint dimension mismatch");
        // -normal·x + s = offset
        let mut row = vec![BigRational::zero(); ncols];
        for j in 0..dim {
            row[j] = -c.normal[j].clone();
            row[dim + j] = c.normal[j].clone();
        }
        row[slack0 + i] = BigRational::one();
        let mut b = c.offset.clone();
        if needs_art[i] {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
            row[next_art] = BigRational::one();
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(slack0 + i);
        }
        rows.push(row);
        rhs.push(b);
    }
    let mut t = Tableau { rows, rhs, basis, ncols };

    if n_art > 0 {
        let mut phase1 = vec![BigRational::zero(); ncols];
        for x in phase1.iter_mut().skip(art0) {
            *x = -BigRational::one();
        }
        let all = vec![true; ncols];
        t.optimize(&phase1, &all).expect("phase one is bounded");
        if t.objective_value(&phase1).is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art0 {
                match (0..art0).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut obj = vec![BigRational::zero(); ncols];
    for j in 0..dim {
        obj[j] = objective[j].clone();
        obj[dim + j] = -objective[j].clone();
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| j < art0).collect();
    if t.optimize(&obj, &allowed).is_err() {
        return LpOutcome::Unbounded;
    }
    let mut y = vec![BigRational::zero(); ncols];
    for (&b, v) in t.basis.iter().zip(&t.rhs) {
        y[b] = v.clone();
    }
    let point: Vec<BigRational> = (0..dim).map(|j| &y[j] - &y[dim + j]).collect();
    let value = dot(objective, &point);
    LpOutcome::Optimal { point, value }
}

/// Minimizes `objective·x`; the reported value is the minimum.
pub fn minimize(dim: usize, constraints: &[Constraint], objective: &[BigRational]) -> LpOutcome {
    let neg: Vec<BigRational> = objective.iter().map(|x| -x.clone()).collect();
    match maximize(dim, constraints, &neg) {
        LpOutcome::Optimal { point, value } => LpOutcome::Optimal { point, value: -value },
        other => other,
    }
}

/// Decides whether some rational point satisfies every constraint, honouring
/// strictness, and returns such a point.
///
/// Strict rows are relaxed to `normal·x + offset ≥ t` with a slack `t ≤ 1`; the
/// system is strictly feasible iff the maximal `t` is positive.
pub fn lp_feasible(sys: &StrictSystem) -> Feasibility {
    let dim = sys.dim;
    let infeasible = Feasibility { feasible: false, witness: None };
    if !sys.constraints.iter().any(|c| c.strict) {
        return match maximize(dim, &sys.constraints, &vec![BigRational::zero(); dim]) {
            LpOutcome::Optimal { point, .. } => Feasibility { feasible: true, witness: Some(point) },
            _ => infeasible,
        };
    }
    let mut rows: Vec<Constraint> = sys
        .constraints
        .iter()
        .map(|c| {
            let mut normal = c.normal.clone();
            normal.push(if c.strict { -BigRational::one() } else { BigRational::zero() });
            Constraint::closed(normal, c.offset.clone())
        })
        .collect();
    let mut cap = vec![BigRational::zero(); dim + 1];
    cap[dim] = -BigRational::one();
    rows.push(Constraint::closed(cap, BigRational::one()));
    let mut objective = vec![BigRational::zero(); dim + 1];
    objective[dim] = BigRational::one();
    match maximize(dim + 1, &rows, &objective) {
        LpOutcome::Optimal { mut point, value } if value.is_positive() => {
            point.truncate(dim);
            Feasibility { feasible: true, witness: Some(point) }
        }
        _ => infeasible,
    }
}
