use approx::assert_relative_eq;

use super::*;
use crate::kernels::Kernel;
use crate::Side;

fn basis(k: Kernel, pts: &[f64]) -> Arc<SpanBasis<Kernel>> {
    let pts: Vec<Point> = pts.iter().map(|&x| Point::real(x)).collect();
    SpanBasis::new(k, &pts).unwrap()
}

#[test]
fn projection_is_idempotent_and_self_adjoint() {
    let b = SpanBasis::new(
        Kernel::dhb(0.0).unwrap(),
        &[
            Point::new(0.1, 0.2),
            Point::new(-0.4, 0.3),
            Point::real(0.7),
        ],
    )
    .unwrap();
    let p = projection(&b, 1).unwrap();
    let pp = p.compose(&p).unwrap();
    let diff = (pp.coeffs() - p.coeffs())
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    assert!(diff < 1e-13);
    assert!(p.is_self_adjoint());
    assert_relative_eq!(
        p.berezin(&Point::new(-0.4, 0.3)).unwrap().re,
        1.0,
        max_relative = 1e-14
    );
    assert_relative_eq!(p.trace().re, 1.0, max_relative = 1e-12);
}

#[test]
fn projection_applied_to_kernel_function() {
    let b = basis(Kernel::hardy(), &[0.0, 0.5]);
    let p = projection(&b, 0).unwrap();
    let out = p.apply(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
    assert_relative_eq!(out[0].re, 1.0, max_relative = 1e-15);
    assert_eq!(out[1], C64::new(0.0, 0.0));
}

#[test]
fn projection_differences_recover_delta() {
    let b = basis(Kernel::hardy(), &[0.0, 0.6]);
    let d = projection(&b, 0)
        .unwrap()
        .sub(&projection(&b, 1).unwrap())
        .unwrap();
    assert!((d.schatten_norm(f64::INFINITY).unwrap() - 0.6).abs() < 1e-12);
    assert!((d.schatten_norm(1.0).unwrap() - 1.2).abs() < 1e-12);
    assert!((d.schatten_norm(2.0).unwrap() - 0.848528137423857).abs() < 1e-12);
    assert!(d.trace().norm() < 1e-12);
    assert!(d.schatten_norm(0.5).is_err());
}

#[test]
fn commutator_examples() {
    let b = basis(Kernel::hardy(), &[0.0, 0.5]);
    assert!((commutator_norm(&b, 0, 1).unwrap() - 0.4330127018922193).abs() < 1e-12);
    assert!(commutator_norm(&b, 1, 1).unwrap() < 1e-14);
    let s = Kernel::direct_sum(Kernel::hardy(), Kernel::hardy());
    let b = SpanBasis::new(
        s,
        &[
            Point::real(0.2).on(Side::Left),
            Point::real(0.2).on(Side::Right),
        ],
    )
    .unwrap();
    assert!(commutator_norm(&b, 0, 1).unwrap() < 1e-14);
}

#[test]
fn hankel_gap_examples() {
    let b = basis(Kernel::hardy(), &[0.0, 0.6]);
    let h = hankel_gap_norm(&b, 0, 1).unwrap();
    assert!((h.norm - 0.6).abs() < 1e-10);
    assert!((h.trace_norm - 1.2).abs() < 1e-10);
    assert!(hankel_gap_norm(&b, 0, 0).unwrap().norm < 1e-7);
    let s = Kernel::direct_sum(Kernel::hardy(), Kernel::hardy());
    let b = SpanBasis::new(
        s,
        &[
            Point::real(0.2).on(Side::Left),
            Point::real(0.3).on(Side::Right),
        ],
    )
    .unwrap();
    assert!((hankel_gap_norm(&b, 0, 1).unwrap().norm - 1.0).abs() < 1e-12);
}

#[test]
fn berezin_examples() {
    let b = basis(Kernel::hardy(), &[0.0]);
    let p = projection(&b, 0).unwrap();
    assert_relative_eq!(
        p.berezin(&Point::real(0.6)).unwrap().re,
        0.64,
        max_relative = 1e-14
    );
    let one = basis(Kernel::dhb(2.0).unwrap(), &[0.3]);
    assert_relative_eq!(
        SpanOperator::identity(one)
            .berezin(&Point::real(0.3))
            .unwrap()
            .re,
        1.0,
        max_relative = 1e-14
    );
}

#[test]
fn berezin_of_multiplier_products() {
    let b = basis(Kernel::hardy(), &[0.0, 0.5, -0.3]);
    let sym: Vec<C64> = b.points().iter().map(|p| p.coords()[0]).collect();
    let n_star = multiplier_adjoint_action(&b, &sym).unwrap();
    let m = n_star.adjoint();
    let mn = m.compose(&n_star).unwrap();
    assert_relative_eq!(
        mn.berezin(&Point::real(0.5)).unwrap().re,
        0.25,
        max_relative = 1e-12
    );
}

#[test]
fn multiplier_adjoint_is_diagonal_on_kernels() {
    let b = basis(Kernel::hardy(), &[0.0, 0.5]);
    let sym = [C64::new(0.0, 0.0), C64::new(0.5, 0.0)];
    let a = multiplier_adjoint_action(&b, &sym).unwrap();
    let out = a.apply(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
    assert!(out[0].norm() < 1e-14);
    assert_relative_eq!(out[1].re, 0.5, max_relative = 1e-14);
    let ones = [C64::new(1.0, 0.0); 2];
    let id = multiplier_adjoint_action(&b, &ones).unwrap();
    let diff = (id.orthonormal_matrix() - CMatrix::identity(2, 2))
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    assert!(diff < 1e-13);
    assert!(multiplier_adjoint_action(&b, &ones[..1]).is_err());
}

#[test]
fn extremal_examples() {
    let h = Kernel::hardy();
    let e = extremal_function(&h, &Point::real(0.0), &Point::real(0.6)).unwrap();
    assert_relative_eq!(e.value_at_w, 0.75, max_relative = 1e-14);
    assert!((e.norm - 1.0).abs() < 1e-12);
    assert!(e.eval(&Point::real(0.0)).unwrap().norm() < 1e-12);
    assert_relative_eq!(
        e.eval(&Point::real(0.6)).unwrap().re,
        0.75,
        max_relative = 1e-13
    );
    let f = Kernel::fock(1.0).unwrap();
    let e = extremal_function(&f, &Point::real(0.0), &Point::real(1.0)).unwrap();
    assert_relative_eq!(e.value_at_w, 1.3108324944320861, max_relative = 1e-13);
    assert!(matches!(
        extremal_function(&h, &Point::real(0.2), &Point::real(0.2)),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn max_point_value_is_kernel_norm() {
    let b = basis(Kernel::dhb(1.5).unwrap(), &[0.1, -0.5, 0.8]);
    let y = Point::real(-0.5);
    let expected = Kernel::dhb(1.5).unwrap().eval(&y, &y).unwrap().re.sqrt();
    assert_relative_eq!(
        b.max_point_value(&y).unwrap(),
        expected,
        max_relative = 1e-10
    );
}

#[test]
fn variation_examples() {
    let b = basis(Kernel::hardy(), &[0.0]);
    let p = projection(&b, 0).unwrap();
    let v =
        variation_along_curve(&p, &Curve::segment(C64::new(0.0, 0.0), C64::new(0.9, 0.0))).unwrap();
    assert!((v.variation.value - 0.81).abs() < 1e-8);
    let v = variation_along_curve(&p, &Curve::new(|_| Point::real(0.4))).unwrap();
    assert_eq!(v.variation.value, 0.0);
    let b = basis(Kernel::hardy(), &[0.0, 0.6]);
    let a = projection(&b, 0)
        .unwrap()
        .sub(&projection(&b, 1).unwrap())
        .unwrap();
    let jump =
        (a.berezin(&Point::real(0.0)).unwrap() - a.berezin(&Point::real(0.6)).unwrap()).norm();
    assert!((jump - 0.72).abs() < 1e-12);
    assert!((jump - 2.0 * a.norm() * 0.6).abs() < 1e-12);
}

#[test]
fn operators_on_different_bases_do_not_mix() {
    let a = projection(&basis(Kernel::hardy(), &[0.0]), 0).unwrap();
    let b = projection(&basis(Kernel::hardy(), &[0.0]), 0).unwrap();
    assert!(a.compose(&b).is_err());
}
