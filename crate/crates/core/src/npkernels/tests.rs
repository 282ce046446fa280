use approx::assert_relative_eq;

use super::*;
use crate::kernels::Kernel;

fn reals(xs: &[f64]) -> Vec<Point> {
    xs.iter().map(|&x| Point::real(x)).collect()
}

#[test]
fn np_test_separates_bergman_from_hardy() {
    let bergman = np_test(&Kernel::dhb(2.0).unwrap(), &reals(&[-0.5, 0.5])).unwrap();
    assert!(!bergman.is_psd);
    assert_relative_eq!(bergman.min_eigenvalue, -0.125, max_relative = 1e-12);
    let w = bergman.witness.unwrap();
    let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum();
    assert_relative_eq!(norm, 1.0, max_relative = 1e-12);

    let hardy = np_test(
        &Kernel::hardy(),
        &[
            Point::new(0.1, 0.3),
            Point::real(-0.6),
            Point::new(0.2, -0.7),
        ],
    )
    .unwrap();
    assert!(hardy.is_psd);
    assert!(hardy.witness.is_none());
}

#[test]
fn np_test_rejects_duplicates() {
    let err = np_test(&Kernel::hardy(), &reals(&[0.1, 0.2, 0.1])).unwrap_err();
    assert_eq!(err, Error::DuplicatePoint(0, 2));
}

#[test]
fn maximal_multiplier_on_hardy_space() {
    let k = Kernel::hardy();
    let g = maximal_multiplier(&k, &Point::real(0.5), &Point::real(0.0)).unwrap();
    assert_relative_eq!(g.delta, 0.5, max_relative = 1e-15);
    assert_relative_eq!(g.value_at_base().unwrap().re, 0.5, max_relative = 1e-15);
    assert!(g.eval(&Point::real(0.5)).unwrap().norm() < 1e-15);
    // on the Hardy space G is the Blaschke factor (z - 1/2) / (z/2 - 1) up to sign
    let z = Point::new(0.3, -0.4);
    let w = C64::new(0.3, -0.4);
    let factor = (w - 0.5) / (0.5 * w - 1.0);
    assert_relative_eq!(
        g.eval(&z).unwrap().norm(),
        factor.norm(),
        max_relative = 1e-13
    );
}

#[test]
fn maximal_multiplier_on_dirichlet_space() {
    let k = Kernel::dhb(0.0).unwrap();
    let (x, y) = (Point::new(0.4, 0.2), Point::real(0.0));
    let g = maximal_multiplier(&k, &x, &y).unwrap();
    let kxx = k.eval(&x, &x).unwrap().re;
    assert_relative_eq!(g.delta, (1.0 - 1.0 / kxx).sqrt(), max_relative = 1e-13);
    let zeta = Point::new(-0.3, 0.5);
    let expected = (C64::new(1.0, 0.0) - k.eval(&zeta, &x).unwrap() / kxx) / g.delta;
    let got = g.eval(&zeta).unwrap();
    assert!((got - expected).norm() < 1e-13);
}

#[test]
fn maximal_multiplier_requires_pick_kernel() {
    let k = Kernel::dhb(2.0).unwrap();
    assert!(matches!(
        maximal_multiplier(&k, &Point::real(0.5), &Point::real(0.0)),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn single_zero_blaschke_product() {
    let k = Kernel::hardy();
    let zeros = ZeroSetGenerator::Explicit(alloc::vec![C64::new(0.5, 0.0)]);
    let r = blaschke_product(&k, &zeros, &Point::real(0.0), DEFAULT_PREFIX).unwrap();
    assert_relative_eq!(r.product_at_basepoint(), 0.25, max_relative = 1e-14);
    assert_eq!(r.classification, Classification::Converges);
    let (v, used) =
        blaschke_values(&k, &zeros, &Point::real(0.0), 10, &reals(&[0.0, 0.5])).unwrap();
    assert_eq!(used, 1);
    assert_relative_eq!(v[0].re, 0.5, max_relative = 1e-14);
    assert!(v[1].norm() < 1e-15);
}

#[test]
fn empty_zero_set_gives_one() {
    let k = Kernel::dhb(0.5).unwrap();
    let zeros = ZeroSetGenerator::Explicit(Vec::new());
    let r = blaschke_product(&k, &zeros, &Point::real(0.2), 10).unwrap();
    assert_eq!(r.product_at_basepoint(), 1.0);
    let (v, used) = blaschke_values(&k, &zeros, &Point::real(0.2), 10, &reals(&[0.7])).unwrap();
    assert_eq!(used, 0);
    assert_eq!(v[0], C64::new(1.0, 0.0));
}

#[test]
fn geometric_zeros_in_hardy_space() {
    let k = Kernel::hardy();
    let zeros = ZeroSetGenerator::Geometric { ratio: 0.5 };
    let r = blaschke_product(&k, &zeros, &Point::real(0.0), 20).unwrap();
    assert_eq!(r.classification, Classification::Converges);
    assert_relative_eq!(
        r.product_at_basepoint(),
        0.08339872293406227,
        max_relative = 1e-13
    );
    let full = blaschke_product(&k, &zeros, &Point::real(0.0), DEFAULT_PREFIX).unwrap();
    assert_relative_eq!(
        full.product_at_basepoint(),
        0.08339872293406227,
        max_relative = 1e-5
    );
    let ns: Vec<usize> = full.partial_products.iter().map(|p| p.0).collect();
    assert_eq!(&ns[..4], &[1, 2, 4, 8]);
    assert_eq!(*ns.last().unwrap(), DEFAULT_PREFIX);
}

#[test]
fn geometric_zeros_in_dirichlet_space_diverge() {
    let k = Kernel::dhb(0.0).unwrap();
    let zeros = ZeroSetGenerator::Geometric { ratio: 0.5 };
    let r = blaschke_product(&k, &zeros, &Point::real(0.0), DEFAULT_PREFIX).unwrap();
    assert_eq!(r.classification, Classification::DivergesToZero);
    let p = &r.partial_products;
    assert!(p.windows(2).all(|w| w[1].1 <= w[0].1));
    assert!(r.criterion_sum > 5.0);
}

#[test]
fn power_zeros_follow_the_exponent() {
    let hardy = Kernel::hardy();
    let basepoint = Point::real(0.0);
    let converging = blaschke_product(
        &hardy,
        &ZeroSetGenerator::Power { exponent: 2.0 },
        &basepoint,
        1000,
    )
    .unwrap();
    assert_eq!(converging.classification, Classification::Converges);
    let diverging = blaschke_product(
        &hardy,
        &ZeroSetGenerator::Power { exponent: 0.5 },
        &basepoint,
        1000,
    )
    .unwrap();
    assert_eq!(diverging.classification, Classification::DivergesToZero);
}

#[test]
fn product_vanishes_on_zero_set() {
    let k = Kernel::dhb(0.5).unwrap();
    let zeros = ZeroSetGenerator::Geometric { ratio: 0.5 };
    let queries = reals(&[0.5, 0.75, 0.875]);
    let (v, used) = blaschke_values(&k, &zeros, &Point::real(0.1), 30, &queries).unwrap();
    assert!(used >= 30);
    for z in v {
        assert!(z.norm() < 1e-12);
    }
}

#[test]
fn zero_set_criteria_verdicts() {
    let geometric = ZeroSetGenerator::Geometric { ratio: 0.5 };
    let h = zero_set_criteria(CriteriaSpace::Hardy, &geometric, 100).unwrap();
    assert!(h.blaschke_converges);
    assert_eq!(h.verdict, ZeroSetVerdict::ZeroSet);
    let d = zero_set_criteria(CriteriaSpace::Dirichlet, &geometric, 100).unwrap();
    assert!(!d.shapiro_shields_converges);
    assert_eq!(d.verdict, ZeroSetVerdict::Inconclusive);

    let slow = ZeroSetGenerator::Power { exponent: 1.0 };
    assert_eq!(
        zero_set_criteria(CriteriaSpace::Hardy, &slow, 100)
            .unwrap()
            .verdict,
        ZeroSetVerdict::NotZeroSet
    );
    let finite = ZeroSetGenerator::Explicit(alloc::vec![C64::new(0.5, 0.0), C64::new(0.0, 0.9)]);
    let f = zero_set_criteria(CriteriaSpace::Dirichlet, &finite, 100).unwrap();
    assert_eq!(f.verdict, ZeroSetVerdict::ZeroSet);
    assert_relative_eq!(f.blaschke_sum, 0.75 + 0.19, max_relative = 1e-14);
}

#[test]
fn invalid_generators_are_rejected() {
    assert!(ZeroSetGenerator::Geometric { ratio: 1.0 }
        .validate()
        .is_err());
    assert!(ZeroSetGenerator::Power { exponent: 0.0 }
        .validate()
        .is_err());
    assert!(ZeroSetGenerator::Explicit(alloc::vec![C64::new(1.0, 0.0)])
        .validate()
        .is_err());
}

#[test]
fn drury_arveson_embedding_of_the_ball() {
    let k = Kernel::drury_arveson(2).unwrap();
    let pts = alloc::vec![
        Point::vector(alloc::vec![C64::new(0.1, 0.2), C64::new(-0.3, 0.0)]),
        Point::vector(alloc::vec![C64::new(0.5, 0.0), C64::new(0.0, 0.4)]),
        Point::vector(alloc::vec![C64::new(-0.2, -0.6), C64::new(0.1, 0.1)]),
    ];
    let exact = da_embedding_check(&k, |_| C64::new(1.0, 0.0), |p| p.clone(), &pts).unwrap();
    assert!(exact.kernel_defect < 1e-13);
    assert!(exact.delta_defect < 1e-13);
    let shrunk = da_embedding_check(
        &k,
        |_| C64::new(1.0, 0.0),
        |p| Point::vector(p.coords().iter().map(|z| z * 0.9).collect()),
        &pts,
    )
    .unwrap();
    assert!(shrunk.kernel_defect > 0.01);
}
