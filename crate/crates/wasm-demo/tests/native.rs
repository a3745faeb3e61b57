use powfrac_wasm::{certificate_curve_native, mlf_curve_native, solve_example_native, ALPHA_MAX};

#[test]
fn example1_curve_carries_exact_solution() {
    let c = solve_example_native("example1", 0.1, 0.2, 1.1, "paper", 0.1).unwrap();
    assert_eq!(c.t().len(), 101);
    assert_eq!(c.y().len(), 101);
    assert_eq!(c.exact().len(), 101);
    assert!(c.max_error().is_finite());
    assert_eq!(c.t()[100], 10.0);
}

#[test]
fn example2_curve_has_no_exact_solution() {
    let c = solve_example_native("example2", 0.5, 1.0, std::f64::consts::E, "one", 0.01).unwrap();
    assert_eq!(c.y().len(), 401);
    assert!(c.exact().is_empty());
    assert!(c.max_error().is_nan());
    assert!(c.y().iter().all(|v| v.is_finite()));
}

#[test]
fn bad_inputs_are_errors() {
    assert!(solve_example_native("example9", 0.1, 0.2, 1.1, "one", 0.1).is_err());
    assert!(solve_example_native("example1", 0.1, 0.2, 1.1, "two", 0.1).is_err());
    assert!(solve_example_native("example1", 0.1, 0.2, 1.1, "one", 1e-6).is_err());
    assert!(mlf_curve_native(1.0, 1.0, 2.0, 1.0, 0.0, 10).is_err());
}

#[test]
fn mlf_curve_reduces_to_power() {
    let v = mlf_curve_native(1.0, 1.0, 2.0, -2.0, 2.0, 5).unwrap();
    for (i, x) in v.iter().enumerate() {
        let s = -2.0 + i as f64;
        assert!((x - 2f64.powf(s)).abs() < 1e-13);
    }
}

#[test]
fn certificate_curve_is_linear_in_alpha_for_classical_kernel() {
    let v = certificate_curve_native(1.0 / 15.0, 1.0, std::f64::consts::E, "one", 4.0, 12).unwrap();
    for (i, c) in v.iter().enumerate() {
        let alpha = ALPHA_MAX * i as f64 / 11.0;
        assert!((c - (1.0 + 3.0 * alpha) / 15.0).abs() < 1e-12);
    }
}
