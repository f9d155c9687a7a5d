//! Standard fans used throughout the tests and the CLI fixtures.

use crate::fan::Fan;

/// `n`-subsets of `0..m`, lexicographic.
fn subsets(m: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    if m < n {
        return vec![];
    }
    let mut out = subsets(m - 1, n);
    for mut s in subsets(m - 1, n - 1) {
        s.push(m - 1);
        out.push(s);
    }
    out.sort();
    out
}

/// Projective space `Pⁿ`: rays `e_1..e_n, −Σe_i`.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    rays.push(vec![-1; n]);
    let cones = subsets(n + 1, n).into_iter().map(|s| s.into_iter().map(|i| i + 1).collect()).collect();
    Fan::new(n, rays, cones).expect("projective space fan")
}

/// Blowup of `Pⁿ` in the torus-fixed point of the cone `{e_1..e_n}`.
///
/// Rays `e_1..e_n`, `−Σe_i` (index `n+1`), `Σe_i` (index `n+2`).
pub fn blowup_projective_space(n: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    rays.push(vec![-1; n]);
    rays.push(vec![1; n]);
    let mut cones = Vec::new();
    for apex in [n + 2, n + 1] {
        for skip in (1..=n).rev() {
            let mut c: Vec<usize> = (1..=n).filter(|&i| i != skip).collect();
            c.push(apex);
            cones.push(c);
        }
    }
    Fan::new(n, rays, cones).expect("blowup fan")
}

/// `P¹ × P¹` with rays `(1,0), (−1,0), (0,1), (0,−1)`.
pub fn p1_times_p1() -> Fan {
    Fan::new(
        2,
        vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
        vec![vec![1, 3], vec![2, 3], vec![2, 4], vec![1, 4]],
    )
    .expect("P1xP1 fan")
}

/// Weighted projective plane `P(1,1,2)`: rays `(1,0), (0,1), (−1,−2)`.
pub fn weighted_projective_plane_112() -> Fan {
    Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -2]], vec![vec![1, 2], vec![2, 3], vec![1, 3]])
        .expect("P(1,1,2) fan")
}

/// `P², Bl_pt P², Bl_pt P³, P¹×P¹, P(1,1,2)`.
pub fn standard_fans() -> Vec<Fan> {
    vec![
        projective_space(2),
        blowup_projective_space(2),
        blowup_projective_space(3),
        p1_times_p1(),
        weighted_projective_plane_112(),
    ]
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}
