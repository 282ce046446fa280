use rkhs_core::kernels::Kernel;
use rkhs_core::metrics::{bs_length, curve_length, Curve, KernelMetric, MetricKind};
use rkhs_core::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn polyline_is_arc_length_parametrized() {
    let curve = Curve::polyline(vec![c(-0.5, 0.0), c(0.0, 0.0), c(0.0, 0.5)]).unwrap();
    assert_eq!(curve.breaks(), &[0.5]);
    assert_eq!(curve.at(0.5).as_scalar(), Some(c(0.0, 0.0)));
    assert!((curve.tangent(0.25).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    assert!((curve.tangent(0.75).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn radial_corner_lengths() {
    let h = Kernel::hardy();
    let curve = Curve::polyline(vec![c(-0.5, 0.0), c(0.0, 0.0), c(0.0, 0.5)]).unwrap();
    let exact = 2.0 * 0.5f64.atanh();
    let bs = bs_length(&h, &curve).unwrap();
    assert!(bs.converged);
    assert!((bs.value - exact).abs() < 1e-9, "{}", bs.value);
    let ld = curve_length(&KernelMetric::new(MetricKind::Delta, &h), &curve).unwrap();
    assert!(ld.converged);
    assert!((ld.value - exact).abs() < 1e-6, "{}", ld.value);
}

#[test]
fn polyline_length_is_sum_of_segments() {
    let k = Kernel::dhb(2.0).unwrap();
    let vs = [c(0.1, 0.2), c(-0.5, 0.3), c(-0.3, 0.1), c(0.5, -0.5)];
    let whole = bs_length(&k, &Curve::polyline(vs.to_vec()).unwrap())
        .unwrap()
        .value;
    let parts: f64 = vs
        .windows(2)
        .map(|w| bs_length(&k, &Curve::segment(w[0], w[1])).unwrap().value)
        .sum();
    assert!((whole - parts).abs() < 1e-9, "{whole} vs {parts}");
}
