use proptest::prelude::*;
use rkhs_core::kernels::{gram, Kernel, Rescaling};
use rkhs_core::linalg::psd_report;
use rkhs_core::metrics::{delta, delta_check, delta_hat, rho_disk};
use rkhs_core::{Point, C64};

fn disk_point(r_max: f64) -> impl Strategy<Value = Point> {
    (0.0..r_max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Point::scalar(C64::from_polar(r, t)))
}

fn plane_point() -> impl Strategy<Value = Point> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Point::new(a, b))
}

fn disk_kernel() -> impl Strategy<Value = Kernel> {
    prop_oneof![
        Just(Kernel::hardy()),
        Just(Kernel::dhb(0.0).unwrap()),
        Just(Kernel::dhb(0.5).unwrap()),
        Just(Kernel::dhb(2.0).unwrap()),
        Just(Kernel::finite_length_example()),
    ]
}

proptest! {
    #[test]
    fn hardy_delta_is_pseudohyperbolic(x in disk_point(0.99), y in disk_point(0.99)) {
        let d = delta(&Kernel::hardy(), &x, &y).unwrap();
        prop_assert!((d - rho_disk(&x, &y).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn delta_is_a_metric(k in disk_kernel(), x in disk_point(0.95), y in disk_point(0.95), z in disk_point(0.95)) {
        let dxy = delta(&k, &x, &y).unwrap();
        let dyx = delta(&k, &y, &x).unwrap();
        prop_assert!((0.0..=1.0).contains(&dxy));
        prop_assert!((dxy - dyx).abs() < 1e-14);
        prop_assert_eq!(delta(&k, &x, &x).unwrap(), 0.0);
        let via = delta(&k, &x, &z).unwrap() + delta(&k, &z, &y).unwrap();
        prop_assert!(dxy <= via + 1e-12);
    }

    #[test]
    fn three_distances_are_ordered(k in disk_kernel(), x in disk_point(0.95), y in disk_point(0.95)) {
        let d = delta(&k, &x, &y).unwrap();
        let h = delta_hat(&k, &x, &y).unwrap();
        let c = delta_check(&k, &x, &y).unwrap();
        prop_assert!(d <= h + 1e-14 && h <= c + 1e-14);
    }

    #[test]
    fn product_law(x in disk_point(0.9), y in disk_point(0.9), a in 0.1..2.0f64, b in 0.1..2.0f64) {
        let (k1, k2) = (Kernel::dhb(a).unwrap(), Kernel::dhb(b).unwrap());
        let (d1, d2) = (delta(&k1, &x, &y).unwrap(), delta(&k2, &x, &y).unwrap());
        let d12 = delta(&Kernel::product(k1, k2).unwrap(), &x, &y).unwrap();
        let (s1, s2) = (d1 * d1, d2 * d2);
        prop_assert!((d12 * d12 - (s1 + s2 - s1 * s2)).abs() < 1e-12);
        prop_assert!(d1.max(d2) <= d12 + 1e-12 && d12 <= d1 + d2 + 1e-12);
    }

    #[test]
    fn power_is_monotone(x in disk_point(0.9), y in disk_point(0.9)) {
        let mut last = 0.0;
        for alpha in [0.5, 1.0, 1.5, 2.0, 3.0] {
            let d = delta(&Kernel::power(Kernel::hardy(), alpha).unwrap(), &x, &y).unwrap();
            prop_assert!(d >= last - 1e-12);
            last = d;
        }
    }

    #[test]
    fn rescaling_leaves_delta_unchanged(x in plane_point(), y in plane_point(), c in -1.0..1.0f64, q in -0.5..0.5f64) {
        let fock = Kernel::fock(1.0).unwrap();
        let g = Rescaling::ExpPolynomial { scale: C64::new(2.0, -1.0), coeffs: vec![C64::new(0.0, 0.0), C64::new(c, 0.3), C64::new(q, 0.0)] };
        let scaled = Kernel::rescale(fock.clone(), g).unwrap();
        prop_assert!((delta(&fock, &x, &y).unwrap() - delta(&scaled, &x, &y).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn gram_matrices_are_psd(k in disk_kernel(), pts in prop::collection::vec(disk_point(0.95), 1..6)) {
        let mut distinct: Vec<Point> = Vec::new();
        for p in pts {
            if !distinct.contains(&p) {
                distinct.push(p);
            }
        }
        let g = gram(&k, &distinct).unwrap();
        prop_assert!(psd_report(&g.matrix).is_psd);
    }
}
