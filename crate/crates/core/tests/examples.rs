//! Worked values pinned through the public API. Each expected value comes
//! from a closed form or an independent hand expansion, noted inline.

use num_bigint::{BigInt, BigUint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weylhull::absorption::*;
use weylhull::arrangement::*;
use weylhull::asymptotics::*;
use weylhull::combinatorics::*;
use weylhull::conic::*;
use weylhull::simulate::*;
use weylhull::{ExactRational, ExactVolumes};

fn q(a: i64, b: i64) -> ExactRational {
    ExactRational::new(a.into(), b.into())
}

fn big(xs: &[u64]) -> Vec<BigUint> {
    xs.iter().map(|&x| BigUint::from(x)).collect()
}

fn chi(kind: ReflectionType, n: usize) -> CharacteristicPolynomial {
    reflection_characteristic_polynomial(kind, n).unwrap()
}

#[test]
fn linear_factor_rows() {
    assert_eq!(expand_linear_factors(&[1, 3, 5, 7]).coeffs(), big(&[105, 176, 86, 16, 1]));
    assert_eq!(expand_linear_factors(&[]).coeffs(), big(&[1]));
    assert_eq!(stirling_unsigned(4, 2).unwrap(), BigUint::from(11u32));
    assert_eq!(stirling_unsigned(5, 0).unwrap(), BigUint::from(0u32));
    assert_eq!(b_coefficient(3, 1).unwrap(), BigUint::from(23u32));
    // 19!! = 654729075
    assert_eq!(b_coefficient(10, 0).unwrap(), BigUint::from(654_729_075u64));
    // (t+1)(t+3)(t+2), and 2 B(2,1) + B(2,0) = 8 + 3
    assert_eq!(d_coefficient(3, 1).unwrap(), BigUint::from(11u32));
    assert_eq!(d_coefficient(3, 4).unwrap(), BigUint::from(0u32));
    // (t^2 + 4t + 3)(t + 1)
    assert_eq!(product_coefficients(&[2, 1]).unwrap().coeffs(), big(&[3, 7, 5, 1]));
}

#[test]
fn bernoulli_laws_match_rows() {
    let p = poisson_binomial_pmf(&[0.5f64, 0.25]).unwrap();
    assert!((p.pmf[1] - 0.5).abs() < 1e-15);

    let n = 20;
    let probs: Vec<f64> = (1..=n).map(|i| 1.0 / (2 * i) as f64).collect();
    let pmf = poisson_binomial_pmf(&probs).unwrap().pmf;
    let total = Family::B.row_total(n);
    for (k, &got) in pmf.iter().enumerate() {
        let exact = weylhull::scalar::ratio_to_f64(&ExactRational::new(
            BigInt::from(b_coefficient(n, k as i64).unwrap()),
            BigInt::from(total.clone()),
        ));
        assert!((got - exact).abs() <= 1e-12 * exact, "k = {k}: {got} vs {exact}");
    }
}

#[test]
fn absorption_examples() {
    let absorb = |f: WalkFamily| absorption_probability(&f).unwrap().absorb;
    let non = |f: WalkFamily| non_absorption_probability(&f).unwrap();
    assert_eq!(absorb(WalkFamily::walk_b(2, 1).unwrap()), q(1, 4));
    assert_eq!(absorb(WalkFamily::bridge_a(3, 1).unwrap()), q(1, 3));
    // 2 B(4,1) / 384 with B(4,1) = 176
    assert_eq!(non(WalkFamily::walk_b(4, 2).unwrap()), q(11, 12));
    assert_eq!(absorb(WalkFamily::walk_d(2, 1).unwrap()), q(1, 2));
    assert_eq!(non(WalkFamily::joint_b(vec![1, 1, 1], 2).unwrap()), q(3, 4));
    assert_eq!(non(WalkFamily::walk_b(3, 1).unwrap()), q(5, 8));
    // (2/24)(s(4,2) + s(4,0))
    assert_eq!(non(WalkFamily::bridge_a(4, 2).unwrap()), q(11, 12));
    assert_eq!(non(WalkFamily::bridge_a(3, 1).unwrap()), q(2, 3));
}

#[test]
fn wendel_and_one_dimensional_references() {
    assert_eq!(wendel_probability(3, 2).unwrap(), q(3, 4));
    assert_eq!(wendel_probability(6, 3).unwrap(), q(1, 2));
    assert_eq!(one_dimensional_reference(OneDimensional::SparrePositive, 2).unwrap(), q(3, 8));
    assert_eq!(one_dimensional_reference(OneDimensional::SimpleWalkPositive, 3).unwrap(), q(1, 4));
    assert_eq!(one_dimensional_reference(OneDimensional::SimpleBridgeSign, 4).unwrap(), q(1, 3));
    for n in 1..=25 {
        let walk = non_absorption_probability(&WalkFamily::walk_b(n, 1).unwrap()).unwrap();
        let sparre = one_dimensional_reference(OneDimensional::SparrePositive, n).unwrap();
        assert_eq!(walk, sparre * ExactRational::from_integer(2.into()));
    }
}

#[test]
fn float_mode_examples() {
    let f = WalkFamily::walk_b(10, 2).unwrap();
    let exact = weylhull::scalar::ratio_to_f64(&absorption_probability(&f).unwrap().absorb);
    assert!((absorption_probability_float(&f).unwrap().absorb - exact).abs() <= 1e-12);
    let big = absorption_probability_float(&WalkFamily::walk_b(1_000_000, 7).unwrap()).unwrap();
    assert!(big.absorb > 0.0 && big.absorb < 1.0);
    assert!((big.absorb + big.non_absorb - 1.0).abs() < 1e-12);
}

#[test]
fn characteristic_polynomials() {
    // the braid arrangement of A_2 sits in R^3
    let a2 = Arrangement::reflection(ReflectionType::A, 3).unwrap();
    assert_eq!(whitney_characteristic_polynomial(&a2).unwrap().coefficients(), big(&[0, 2, 3, 1]));
    let b2 = Arrangement::reflection(ReflectionType::B, 2).unwrap();
    assert_eq!(whitney_characteristic_polynomial(&b2).unwrap().coefficients(), big(&[3, 4, 1]));
    let generic = Arrangement::from_normals(2, &[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]).unwrap();
    assert_eq!(whitney_characteristic_polynomial(&generic).unwrap().coefficients(), big(&[3, 4, 1]));

    assert_eq!(chi(ReflectionType::B, 3).coefficients(), big(&[15, 23, 9, 1]));
    assert_eq!(chi(ReflectionType::A, 3).coefficients(), big(&[0, 2, 3, 1]));
    assert_eq!(chi(ReflectionType::D, 3).coefficients(), big(&[6, 11, 6, 1]));

    assert_eq!(zaslavsky_region_count(&chi(ReflectionType::B, 2)), BigUint::from(8u32));
    assert_eq!(zaslavsky_region_count(&chi(ReflectionType::A, 3)), BigUint::from(6u32));
    for n in 1..=8 {
        assert_eq!(zaslavsky_region_count(&chi(ReflectionType::B, n)), ReflectionType::B.group_order(n));
    }
}

#[test]
fn restrictions_and_intersections() {
    let r = restrict_characteristic_polynomial(&chi(ReflectionType::B, 3), 1).unwrap();
    assert_eq!(r.coefficients(), big(&[8, 9, 1]));
    let r = restrict_characteristic_polynomial(&chi(ReflectionType::A, 3), 1).unwrap();
    assert_eq!(r.coefficients(), big(&[2, 3, 1]));
    for (kind, n) in [(ReflectionType::B, 4), (ReflectionType::D, 5), (ReflectionType::A, 5)] {
        let r = restrict_characteristic_polynomial(&chi(kind, n), n - 1).unwrap();
        assert_eq!(r.coefficients(), big(&[1, 1]));
    }
    assert_eq!(intersected_region_count(&chi(ReflectionType::B, 2), 1).unwrap(), BigUint::from(2u32));
    assert_eq!(intersected_region_count(&chi(ReflectionType::B, 3), 1).unwrap(), BigUint::from(18u32));
    assert_eq!(intersected_region_count(&chi(ReflectionType::A, 4), 2).unwrap(), BigUint::from(12u32));
    assert_eq!(schlafli_count(4, 2).unwrap(), BigUint::from(8u32));
}

#[test]
fn region_enumeration_examples() {
    let b2 = Arrangement::reflection(ReflectionType::B, 2).unwrap();
    assert_eq!(enumerate_regions(&b2).unwrap().len(), 8);
    let a3 = Arrangement::reflection(ReflectionType::A, 4).unwrap();
    assert_eq!(enumerate_regions(&a3).unwrap().len(), 24);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let line = Subspace::random_gaussian(&mut rng, 2, 1).unwrap();
    let c = count_regions_meeting_subspace(&b2, &line, MeetMode::Open).unwrap();
    assert!(c.general_position);
    assert_eq!(c.count, 2);

    let diagonal = Subspace::from_i64(2, &[vec![1, 1]]).unwrap();
    let closed = count_regions_meeting_subspace(&b2, &diagonal, MeetMode::Closed).unwrap();
    let open = count_regions_meeting_subspace(&b2, &diagonal, MeetMode::Open).unwrap();
    assert!(!closed.general_position);
    assert_eq!((closed.count, open.count), (4, 0));
}

#[test]
fn intrinsic_volume_examples() {
    let b2 = weyl_intrinsic_volumes::<ExactRational>(ReflectionType::B, 2).unwrap();
    assert_eq!(b2.v, [q(3, 8), q(1, 2), q(1, 8)]);
    let a3 = weyl_intrinsic_volumes::<ExactRational>(ReflectionType::A, 3).unwrap();
    assert_eq!(a3.v, [q(0, 1), q(1, 3), q(1, 2), q(1, 6)]);
    for (kind, n) in [(ReflectionType::A, 5), (ReflectionType::B, 6), (ReflectionType::D, 5)] {
        let v: ExactVolumes = weyl_intrinsic_volumes(kind, n).unwrap();
        assert_eq!(v.sum(), q(1, 1));
        assert_eq!(v.half_tail(0).unwrap().value, q(1, 2));
        assert_eq!(v.half_tail(1).unwrap().value, q(1, 2));
    }
    assert_eq!(b2.half_tail(1).unwrap().value, q(1, 2));
    let b3 = weyl_intrinsic_volumes::<ExactRational>(ReflectionType::B, 3).unwrap();
    assert_eq!(b3.half_tail(2).unwrap().value, q(3, 16));

    assert_eq!(schlafli_expected_volumes(4, 2).unwrap().v, [q(3, 8), q(1, 2), q(1, 8)]);
    // m = n: the orthant, binomial over 2^n
    assert_eq!(schlafli_expected_volumes(3, 3).unwrap().v, [q(1, 8), q(3, 8), q(3, 8), q(1, 8)]);

    for (kind, n) in [(ReflectionType::B, 3), (ReflectionType::A, 4), (ReflectionType::D, 3)] {
        assert!(klivans_swartz_check(kind, n).unwrap());
    }
}

#[test]
fn projection_example() {
    let c = WeylChamber::new(ReflectionType::B, 3).unwrap();
    let (p, d2) = project_onto_weyl_chamber(&c, &[3.0, 1.0, 2.0]).unwrap();
    for (x, y) in p.iter().zip([2.0, 2.0, 2.0]) {
        assert!((x - y).abs() < 1e-12);
    }
    assert!((d2 - 2.0).abs() < 1e-12);
}

#[test]
fn steiner_cdf_example() {
    let v = weyl_intrinsic_volumes::<f64>(ReflectionType::B, 2).unwrap();
    let at_half = steiner_tail_cdf(&v, 0.5).unwrap();
    assert!(at_half > v.v[2] && at_half < 1.0);
    // empirical CDF from sphere samples projected onto the chamber
    let c = WeylChamber::new(ReflectionType::B, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples = 100_000;
    let hits = (0..samples).filter(|_| sample_dist_sq(&mut rng, &c).unwrap() <= 0.5).count();
    assert!((hits as f64 / samples as f64 - at_half).abs() < 0.01);
    assert_eq!(steiner_tail_cdf(&v, 0.0).unwrap(), v.v[2]);
}

#[test]
fn crofton_examples() {
    let b2 = WeylChamber::new(ReflectionType::B, 2).unwrap();
    let e = crofton_mc_estimate(&b2, 1, 100_000, 3).unwrap();
    assert!(e.z_score(0.125).abs() < 4.0, "{e:?}");
    let b3 = WeylChamber::new(ReflectionType::B, 3).unwrap();
    let e = crofton_mc_estimate(&b3, 1, 100_000, 4).unwrap();
    assert!(e.z_score(3.0 / 16.0).abs() < 4.0, "{e:?}");
    let e = crofton_mc_estimate(&b3, 0, 1000, 4).unwrap();
    assert_eq!(e.p_hat, 0.5);
}

#[test]
fn chamber_counts_on_gaussian_draws() {
    for seed in 0..5 {
        let inc = sample_increments(&IncrementModel::Gaussian { d: 1 }, 3, seed).unwrap();
        assert_eq!(chamber_intersection_count(&inc, ReflectionType::B).unwrap(), 18);
        let bridge = center_columns(&inc);
        assert_eq!(chamber_intersection_count(&bridge, ReflectionType::A).unwrap(), 2);
        let inc = sample_increments(&IncrementModel::Gaussian { d: 2 }, 4, seed).unwrap();
        assert_eq!(chamber_intersection_count(&inc, ReflectionType::B).unwrap(), 32);
    }
    assert_eq!(predicted_chamber_count(ReflectionType::B, 3, 1).unwrap(), 18);
    assert_eq!(predicted_chamber_count(ReflectionType::B, 4, 2).unwrap(), 32);
}

#[test]
fn simulation_examples() {
    let tol = weylhull::hull::DEFAULT_TOL;
    let e = estimate_absorption(&IncrementModel::Gaussian { d: 1 }, &WalkFamily::walk_b(3, 1).unwrap(), 100_000, 1, tol).unwrap();
    assert!(e.z_score(0.375).abs() < 4.0, "{e:?}");
    let e = estimate_absorption(&IncrementModel::UniformSphere { d: 2 }, &WalkFamily::walk_b(4, 2).unwrap(), 100_000, 2, tol)
        .unwrap();
    assert!(e.z_score(1.0 / 12.0).abs() < 4.0, "{e:?}");
    let family = WalkFamily::bridge_a(10, 2).unwrap();
    let exact = weylhull::scalar::ratio_to_f64(&absorption_probability(&family).unwrap().absorb);
    let e = estimate_absorption(&IncrementModel::Gaussian { d: 2 }, &family, 100_000, 3, tol).unwrap();
    assert!(e.z_score(exact).abs() < 4.0, "{e:?} vs {exact}");
    // lattice steps can only make absorption more likely
    let family = WalkFamily::walk_b(10, 2).unwrap();
    let generic = weylhull::scalar::ratio_to_f64(&absorption_probability(&family).unwrap().absorb);
    let e = estimate_absorption(&IncrementModel::LatticeSimple { d: 2 }, &family, 100_000, 4, tol).unwrap();
    assert!(e.p_hat >= generic - 4.0 * e.stderr);
}

#[test]
fn asymptotic_examples() {
    let n = 10f64.exp();
    let v = fixed_dimension_asymptotic(ReflectionType::A, n, 2).unwrap();
    assert!((v / (20.0 / n) - 1.0).abs() < 1e-12);
    let v = fixed_dimension_asymptotic(ReflectionType::B, 100.0, 2).unwrap();
    let expect = 100f64.ln() / (100.0 * std::f64::consts::PI).sqrt();
    assert!((v - expect).abs() < 1e-12 && (v - 0.2598).abs() < 1e-4);

    assert!((mod_poisson_limit_real(2f64.ln()) - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
    for z in [-1.0, 1.0] {
        let gaps: Vec<f64> =
            [1_000, 10_000, 100_000].iter().map(|&n| (mod_poisson_ratio(n, z) - mod_poisson_limit_real(z)).abs()).collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "z = {z}: {gaps:?}");
    }

    let rows = fixed_dimension_table(ReflectionType::B, 2, &[1_000, 10_000, 100_000, 1_000_000]).unwrap();
    let gaps: Vec<f64> = rows.iter().map(|r| (r.ratio - 1.0).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");

    let ns = phase_boundary(ReflectionType::B, 4);
    let above = absorption_probability_float(&WalkFamily::walk_b((4.0 * ns).round() as usize, 4).unwrap()).unwrap();
    let below = absorption_probability_float(&WalkFamily::walk_b((ns / 4.0).round() as usize, 4).unwrap()).unwrap();
    assert!(above.absorb > 0.5 && below.absorb < 0.5);
}

#[test]
fn large_deviation_example() {
    let rows = large_deviation_table(ReflectionType::B, 0.5, &[10_000, 100_000, 1_000_000], LdPrefactor::Corrected).unwrap();
    let last = rows.last().unwrap().ratio;
    assert!((0.6..=1.6).contains(&last), "{rows:?}");
}
