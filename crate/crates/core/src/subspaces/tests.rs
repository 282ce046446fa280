use approx::assert_relative_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::psd_report;

fn disk_point(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    C64::from_polar(r, rng.gen_range(0.0..core::f64::consts::TAU))
}

fn vanish(k: Kernel, pts: &[f64], orders: &[usize]) -> SubspaceSpec {
    SubspaceSpec::vanish_on(
        k,
        pts.iter().map(|&x| Point::real(x)).collect(),
        orders.to_vec(),
    )
    .unwrap()
}

#[test]
fn hardy_vanishing_at_origin() {
    let sub = vanish(Kernel::hardy(), &[0.0], &[1]);
    let (x, y) = (Point::new(0.2, -0.1), Point::new(-0.5, 0.3));
    let (j, perp) = subspace_kernels(&sub, &x, &y).unwrap();
    let k = Kernel::hardy().eval(&x, &y).unwrap();
    assert!((perp - C64::new(1.0, 0.0)).norm() < 1e-15);
    assert!((j - (k - 1.0)).norm() < 1e-15);
    let d = delta_sub(&sub, Part::J, &Point::real(0.3), &Point::real(0.6)).unwrap();
    assert_relative_eq!(d, 0.36585365853658536, max_relative = 1e-13);
    assert_eq!(delta_sub(&sub, Part::J, &x, &x).unwrap(), 0.0);
    assert_eq!(
        subspace_kernels(&sub, &Point::real(0.0), &y).unwrap().0,
        C64::new(0.0, 0.0)
    );
    assert_eq!(
        delta_sub(&sub, Part::J, &Point::real(0.0), &y),
        Err(Error::UndefinedDistance)
    );
}

#[test]
fn bergman_vanishing_at_origin() {
    let k = Kernel::dhb(2.0).unwrap();
    let sub = vanish(k.clone(), &[0.0], &[1]);
    let (x, y) = (Point::real(0.5), Point::real(-0.5));
    let (j, _) = subspace_kernels(&sub, &x, &y).unwrap();
    assert_relative_eq!(j.re, 0.64 - 1.0, max_relative = 1e-14);
    let dj = delta_sub(&sub, Part::J, &x, &y).unwrap();
    let dh = crate::metrics::delta(&k, &x, &y).unwrap();
    assert_relative_eq!(dj, 0.8864328882132716, max_relative = 1e-12);
    assert_relative_eq!(dh, 0.9329523031752481, max_relative = 1e-12);
}

#[test]
fn second_order_vanishing_in_bergman_space() {
    let sub = vanish(Kernel::dhb(2.0).unwrap(), &[0.0], &[2]);
    let (x, y) = (C64::new(0.3, 0.4), C64::new(-0.2, 0.6));
    let (_, perp) = subspace_kernels(&sub, &Point::scalar(x), &Point::scalar(y)).unwrap();
    let expected = C64::new(1.0, 0.0) + 2.0 * x * y.conj();
    assert!((perp - expected).norm() < 1e-14);
    for t in [0.1, 0.9] {
        let (a, b) = (Point::real(t), Point::real(-t));
        let dp = delta_sub(&sub, Part::JPerp, &a, &b).unwrap();
        let s = t_series_check(t).unwrap();
        assert_relative_eq!(1.0 - dp * dp, s.lhs, max_relative = 1e-12);
        let dh = crate::metrics::delta(sub.parent(), &a, &b).unwrap();
        assert_relative_eq!(1.0 - dh * dh, s.rhs, max_relative = 1e-10);
    }
}

#[test]
fn second_order_requires_disk() {
    let err = SubspaceSpec::vanish_on(
        Kernel::fock(1.0).unwrap(),
        alloc::vec![Point::real(0.0)],
        alloc::vec![2],
    );
    assert!(matches!(err, Err(Error::Unsupported(_))));
    let err = SubspaceSpec::vanish_on(
        Kernel::hardy(),
        alloc::vec![Point::real(0.0)],
        alloc::vec![3],
    );
    assert!(matches!(err, Err(Error::InvalidParameter(_))));
}

#[test]
fn kernel_splitting_is_exact_and_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let k = Kernel::dhb(1.5).unwrap();
    let sub = SubspaceSpec::vanish_on(
        k.clone(),
        alloc::vec![Point::real(0.1), Point::new(-0.3, 0.4)],
        alloc::vec![2, 1],
    )
    .unwrap();
    let pts: Vec<Point> = (0..8)
        .map(|_| Point::scalar(disk_point(&mut rng, 0.9)))
        .collect();
    let n = pts.len();
    let (mut mj, mut mp) = (CMatrix::zeros(n, n), CMatrix::zeros(n, n));
    for i in 0..n {
        for j in 0..n {
            let (a, b) = subspace_kernels(&sub, &pts[i], &pts[j]).unwrap();
            assert!(
                (a + b - k.eval(&pts[i], &pts[j]).unwrap()).norm()
                    < 1e-14 * k.eval(&pts[i], &pts[j]).unwrap().norm().max(1.0)
            );
            mj[(i, j)] = a;
            mp[(i, j)] = b;
        }
    }
    assert!(psd_report(&mj).is_psd);
    assert!(psd_report(&mp).is_psd);
}

#[test]
fn hardy_inner_closed_form_matches_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let nz = rng.gen_range(1..=3);
        let zeros: Vec<C64> = (0..nz).map(|_| disk_point(&mut rng, 0.8)).collect();
        let c = C64::from_polar(1.0, rng.gen_range(0.0..6.0));
        let inner = SubspaceSpec::hardy_inner(Kernel::hardy(), zeros.clone(), c).unwrap();
        let gram = SubspaceSpec::vanish_on(
            Kernel::hardy(),
            zeros.iter().map(|z| Point::scalar(*z)).collect(),
            alloc::vec![1; nz],
        )
        .unwrap();
        let x = Point::scalar(disk_point(&mut rng, 0.9));
        let y = Point::scalar(disk_point(&mut rng, 0.9));
        let (dj, dp) = hardy_inner_delta(&zeros, c, &x, &y).unwrap();
        let rho = rho_disk(&x, &y).unwrap();
        assert!((dj.unwrap() - rho).abs() < 1e-10);
        assert!(dp <= rho + 1e-12);
        assert!((delta_sub(&inner, Part::J, &x, &y).unwrap() - rho).abs() < 1e-10);
        assert!((delta_sub(&inner, Part::JPerp, &x, &y).unwrap() - dp).abs() < 1e-10);
        let g = delta_sub(&gram, Part::JPerp, &x, &y).unwrap();
        assert!(
            (g - dp).abs() < 1e-10,
            "{zeros:?} {x:?} {y:?} {g} {dp} {}",
            gram.is_jittered()
        );
        assert!((delta_sub(&gram, Part::J, &x, &y).unwrap() - rho).abs() < 1e-10);
    }
}

#[test]
fn hardy_inner_special_cases() {
    let one = C64::new(1.0, 0.0);
    let (x, y) = (Point::real(0.3), Point::real(0.6));
    let (dj, dp) = hardy_inner_delta(&[C64::new(0.0, 0.0)], one, &x, &y).unwrap();
    assert_relative_eq!(dj.unwrap(), 0.36585365853658536, max_relative = 1e-14);
    assert!(dp < 1e-8);
    let zeros = [C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let (_, dp) = hardy_inner_delta(&zeros, one, &Point::real(0.4), &Point::real(-0.4)).unwrap();
    assert_relative_eq!(
        dp,
        rho_disk(&Point::real(0.4), &Point::real(-0.4)).unwrap(),
        max_relative = 1e-14
    );
    let (dj, _) = hardy_inner_delta(&[C64::new(0.3, 0.0)], one, &x, &y).unwrap();
    assert!(dj.is_none());
}

#[test]
fn shape_invariant_of_radial_triple() {
    let s = shape_invariant(
        &Kernel::hardy(),
        &Point::real(0.0),
        &Point::real(0.3),
        &Point::real(0.6),
    )
    .unwrap();
    assert_relative_eq!(s.upsilon, 0.7102439024390244, max_relative = 1e-12);
    assert!(s.triple_product.im.abs() < 1e-15);
    let cosines: f64 = s.delta_sq.iter().map(|d| (1.0 - d).sqrt()).product();
    assert_relative_eq!(s.upsilon, cosines, max_relative = 1e-14);
}

#[test]
fn shape_formula_matches_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut symmetric_hits = 0;
    for (k, radius) in [
        (Kernel::hardy(), 0.9),
        (Kernel::dhb(2.0).unwrap(), 0.9),
        (Kernel::fock(1.0).unwrap(), 2.0),
    ] {
        for _ in 0..50 {
            let p: Vec<Point> = (0..3)
                .map(|_| Point::scalar(disk_point(&mut rng, radius)))
                .collect();
            let s = shape_invariant(&k, &p[0], &p[1], &p[2]).unwrap();
            assert!((s.delta_j_sq - s.delta_j_sq_projection).abs() < 1e-10);
            assert!(
                s.upsilon.abs()
                    <= s.delta_sq.iter().map(|d| (1.0 - d).sqrt()).product::<f64>() + 1e-15
            );
            let c1 = shape_invariant(&k, &p[1], &p[2], &p[0]).unwrap();
            let c2 = shape_invariant(&k, &p[2], &p[0], &p[1]).unwrap();
            assert!(
                (c1.upsilon - s.upsilon).abs() < 1e-15 && (c2.upsilon - s.upsilon).abs() < 1e-15
            );
            if s.symmetric_form_matches(1e-10) {
                symmetric_hits += 1;
            }
        }
    }
    assert!(symmetric_hits < 150);
}

#[test]
fn shape_rejects_repeated_points() {
    let k = Kernel::hardy();
    assert!(matches!(
        shape_invariant(&k, &Point::real(0.1), &Point::real(0.1), &Point::real(0.5)),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn pick_ordering_in_hardy_and_dirichlet() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in [
        Kernel::hardy(),
        Kernel::dhb(0.0).unwrap(),
        Kernel::dhb(0.5).unwrap(),
    ] {
        let sub = SubspaceSpec::vanish_on(
            k,
            alloc::vec![Point::real(0.5), Point::new(-0.2, 0.3)],
            alloc::vec![1, 1],
        )
        .unwrap();
        let pairs: Vec<(Point, Point)> = (0..50)
            .map(|_| {
                (
                    Point::scalar(disk_point(&mut rng, 0.95)),
                    Point::scalar(disk_point(&mut rng, 0.95)),
                )
            })
            .collect();
        let r = monotonicity_report(&sub, &pairs).unwrap();
        assert!(r.checks_pick);
        assert!(
            r.all_hold,
            "{:?}",
            r.rows.iter().find(|row| row.pick_ordering == Some(false))
        );
    }
}

#[test]
fn bergman_reverse_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sub = vanish(Kernel::dhb(2.0).unwrap(), &[0.0], &[1]);
    let pairs: Vec<(Point, Point)> = (0..200)
        .map(|_| {
            (
                Point::scalar(disk_point(&mut rng, 0.95)),
                Point::scalar(disk_point(&mut rng, 0.95)),
            )
        })
        .collect();
    let r = monotonicity_report(&sub, &pairs).unwrap();
    assert!(!r.checks_pick && r.checks_bergman);
    assert!(r.all_hold);

    let fock = vanish(Kernel::fock(1.0).unwrap(), &[0.0], &[1]);
    assert!(matches!(
        monotonicity_report(&fock, &pairs),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn complement_exceeds_bergman_distance_near_origin() {
    let sub = vanish(Kernel::dhb(2.0).unwrap(), &[0.0], &[2]);
    let r = monotonicity_report(
        &sub,
        &[
            (Point::real(0.1), Point::real(-0.1)),
            (Point::real(0.9), Point::real(-0.9)),
        ],
    )
    .unwrap();
    assert!(r.rows[0].delta_jperp.unwrap() > r.rows[0].delta_h);
    assert!(r.rows[1].delta_jperp.unwrap() < r.rows[1].delta_h);
}

#[test]
fn t_series_orderings_and_coefficients() {
    let small = t_series_check(0.1).unwrap();
    assert!(small.lhs < small.rhs);
    assert_relative_eq!(small.lhs, 0.9231064975009612, max_relative = 1e-12);
    assert_relative_eq!(small.rhs, 0.9231138845986188, max_relative = 1e-12);
    let large = t_series_check(0.9).unwrap();
    assert!(large.lhs > large.rhs);
    assert!((small.lhs_t6 + 96.0).abs() < 0.02 * 96.0);
    assert!((small.rhs_t6 + 88.0).abs() < 0.02 * 88.0);
    assert_relative_eq!(
        small.leading_difference,
        -small.difference,
        max_relative = 0.1
    );
    assert!(t_series_check(1.0).is_err());
}
