use std::path::Path;

use rkhs_core::kernels::ReproducingKernel;
use rkhs_core::{Point, C64};
use rkhs_geometry::spec::{
    kernel_from_spec, parse_kernel, parse_subspace, BuiltinScaling, KernelExpr, SubspaceExpr,
};

fn p(x: f64) -> Point {
    Point::scalar(C64::new(x, 0.0))
}

#[test]
fn leaf_kernels() {
    assert_eq!(
        parse_kernel("dhb:alpha=1").unwrap(),
        KernelExpr::Dhb { alpha: 1.0 }
    );
    assert_eq!(
        parse_kernel("fock:beta=0.5").unwrap(),
        KernelExpr::Fock { beta: 0.5 }
    );
    assert_eq!(
        parse_kernel("da:n=3").unwrap(),
        KernelExpr::DruryArveson { n: 3 }
    );
    assert_eq!(
        parse_kernel("finite-length-example").unwrap(),
        KernelExpr::FiniteLength
    );
}

#[test]
fn composites_ignore_whitespace() {
    let a = parse_kernel("product(dhb:alpha=1,power(fock:beta=2,0.5))").unwrap();
    let b = parse_kernel("  product ( dhb : alpha = 1 ,\n power( fock:beta=2 , 0.5 ) ) ").unwrap();
    assert_eq!(a, b);
    assert_eq!(
        parse_kernel("rescale(dhb:alpha=0.5,exp-square)").unwrap(),
        KernelExpr::Rescale(
            Box::new(KernelExpr::Dhb { alpha: 0.5 }),
            BuiltinScaling::ExpSquare
        )
    );
    assert!(matches!(
        parse_kernel("direct-sum(dhb:alpha=1,dhb:alpha=2)").unwrap(),
        KernelExpr::DirectSum(_, _)
    ));
}

#[test]
fn keys_are_case_sensitive() {
    assert!(parse_kernel("dhb:Alpha=1").is_err());
    assert!(parse_kernel("DHB:alpha=1").is_err());
}

#[test]
fn errors_carry_position() {
    let e = parse_kernel("product(dhb:alpha=1,fock:beta=)").unwrap_err();
    assert_eq!(e.position, 30);
    let shown = e.to_string();
    assert!(shown.contains("column 31"), "{shown}");
    let caret = shown.lines().last().unwrap();
    assert_eq!(caret.find('^'), Some(2 + 30));

    let e = parse_kernel("dhb:alpha=1) ").unwrap_err();
    assert_eq!(e.position, 11);
    let e = parse_kernel("rescale(dhb:alpha=1,nope)").unwrap_err();
    assert_eq!(e.position, 20);
}

#[test]
fn subspaces() {
    match parse_subspace("vanish:points=[0, [0.2, 0.1]];orders=[2, 1]").unwrap() {
        SubspaceExpr::VanishOn { points, orders } => {
            assert_eq!(points.len(), 2);
            assert_eq!(points[1].as_scalar().unwrap(), C64::new(0.2, 0.1));
            assert_eq!(orders, Some(vec![2, 1]));
        }
        other => panic!("{other:?}"),
    }
    match parse_subspace("hardy-inner:zeros=[0.5]").unwrap() {
        SubspaceExpr::HardyInner { zeros, constant } => {
            assert_eq!(zeros, vec![C64::new(0.5, 0.0)]);
            assert_eq!(constant, C64::new(1.0, 0.0));
        }
        other => panic!("{other:?}"),
    }
    assert!(parse_subspace("vanish:orders=[1]").is_err());
}

#[test]
fn built_kernels_evaluate() {
    let base = Path::new(".");
    let k = kernel_from_spec("product(dhb:alpha=1,dhb:alpha=1)", base).unwrap();
    let v = k.eval(&p(0.5), &p(0.5)).unwrap();
    assert!((v.re - 1.0 / (0.75 * 0.75)).abs() < 1e-12);
    let k = kernel_from_spec("rescale(dhb:alpha=1,one)", base).unwrap();
    assert!((k.eval(&p(0.3), &p(-0.2)).unwrap().re - 1.0 / 1.06).abs() < 1e-12);
}

#[test]
fn file_kernels_resolve_relative_to_base() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("m.json"),
        r#"{"moments": [1, 0.5, 0.3333333333333333]}"#,
    )
    .unwrap();
    std::fs::write(
        dir.path().join("g.json"),
        r#"{"points": [0, 0.5], "matrix": [[1, 1], [1, 1.3333333333333333]]}"#,
    )
    .unwrap();
    assert!(kernel_from_spec("radial-bergman:file=m.json", dir.path()).is_ok());
    let k = kernel_from_spec("custom:file=g.json", dir.path()).unwrap();
    assert!((k.eval(&p(0.5), &p(0.5)).unwrap().re - 4.0 / 3.0).abs() < 1e-15);
    assert!(kernel_from_spec("custom:file=missing.json", dir.path()).is_err());
}
