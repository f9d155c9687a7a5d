use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qamp::asymptotic::hhat;
use qamp::catalog;
use qamp::cohomology::{cech_oracle, chamber, cohomology, contributing_box};
use qamp::cones::{arrangement_cells, Polyhedron};
use qamp::qample::{is_q_ample, obstruction_region};
use qamp::{ClassVector, Fan, RaySubset, TorusDivisor, ToricVariety};

fn tv(fan: Fan) -> ToricVariety {
    ToricVariety::new(fan).unwrap()
}

fn all_divisors(rays: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..rays {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (lo..=hi).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

fn agrees_with_oracle(t: &ToricVariety, d: &TorusDivisor) -> bool {
    let fast = cohomology(t, d, false).unwrap().dims;
    let bbox = contributing_box(t, d).unwrap().enlarged(1);
    fast == cech_oracle(&t.fan, d, &bbox).unwrap().dims
}

#[test]
fn weighted_plane_cartier_divisors_match_oracle() {
    let t = tv(catalog::weighted_projective_plane_112());
    let mut cartier = 0;
    for c in all_divisors(3, -3, 3) {
        let d = TorusDivisor::from_i64(&c);
        if !t.fan.is_cartier(&d).cartier {
            continue;
        }
        cartier += 1;
        assert!(agrees_with_oracle(&t, &d), "{c:?}");
    }
    assert!(cartier > 0);
}

#[test]
fn threefold_divisors_match_oracle() {
    let t = tv(catalog::blowup_projective_space(3));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let c: Vec<i64> = (0..5).map(|_| rng.gen_range(-2..=2)).collect();
        assert!(agrees_with_oracle(&t, &TorusDivisor::from_i64(&c)), "{c:?}");
    }
}

/// A positive multiple of the lift of `c` that is an integral Cartier
/// divisor.
fn cartier_multiple(t: &ToricVariety, c: &ClassVector) -> TorusDivisor {
    let lift = t.lattice.lift(c);
    let mut k = lift.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    for cone in 0..t.fan.max_cones().len() {
        for x in t.fan.local_character(cone, &lift) {
            k = k.lcm(x.denom());
        }
    }
    let k = BigRational::from_integer(k);
    let d = TorusDivisor::new(lift.iter().map(|x| (x * &k).to_integer()).collect());
    assert!(t.fan.is_cartier(&d).cartier);
    d
}

#[test]
fn zero_ample_cone_is_the_ample_cone() {
    for fan in catalog::standard_fans() {
        let t = tv(fan);
        if t.picard_rank() > 2 {
            continue;
        }
        let range: Vec<i64> = (-4..=4).collect();
        let points: Vec<Vec<i64>> = if t.picard_rank() == 1 {
            range.iter().map(|&a| vec![a]).collect()
        } else {
            range.iter().flat_map(|&a| range.iter().map(move |&b| vec![a, b])).collect()
        };
        for p in points {
            let c = ClassVector::from_i64(&p);
            let d = cartier_multiple(&t, &c);
            assert_eq!(is_q_ample(&t, &c, 0).unwrap(), t.fan.is_ample(&d).unwrap(), "{p:?}");
        }
    }
}

#[test]
fn obstruction_cells_are_not_q_ample() {
    for fan in catalog::standard_fans() {
        let t = tv(fan);
        for q in 0..t.dim() as i64 {
            let k_bar = obstruction_region(&t, q).unwrap().closure(t.picard_rank());
            for cell in arrangement_cells(t.picard_rank(), &k_bar.hyperplanes()) {
                let member = is_q_ample(&t, &ClassVector::new(cell.witness.clone()), q).unwrap();
                assert_eq!(member, !k_bar.contains(&cell.witness));
            }
        }
    }
}

#[test]
fn h0_hat_is_scaled_polytope_volume() {
    let t = tv(catalog::blowup_projective_space(2));
    for c in all_divisors(4, -2, 2) {
        let d = TorusDivisor::from_i64(&c).to_rat();
        let poly = Polyhedron::new(2, chamber(&t.fan, &d, RaySubset::empty()).constraints);
        let vol = poly.volume().unwrap() * BigRational::from_integer(BigInt::from(2));
        assert_eq!(hhat(&t, &d, 0).unwrap().value, vol, "{c:?}");
    }
}

#[test]
fn hhat_depends_only_on_the_class() {
    let t = tv(catalog::blowup_projective_space(3));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let d: Vec<i64> = (0..5).map(|_| rng.gen_range(-3..=3)).collect();
        let m: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
        let shifted: Vec<i64> = d.iter().zip(&t.fan.principal_divisor(&m).coeffs).map(|(a, b)| a + i64::try_from(b).unwrap()).collect();
        for i in 0..=3 {
            assert_eq!(
                hhat(&t, &TorusDivisor::from_i64(&d).to_rat(), i).unwrap(),
                hhat(&t, &TorusDivisor::from_i64(&shifted).to_rat(), i).unwrap()
            );
        }
    }
}
