use lbesync::dynamics::StateVector;
use lbesync::integrator::{integrate, IntegrationConfig};

/// Error at t = 1 of x' = x, x(0) = 1.
fn global_error(h: f64) -> f64 {
    let n = (1.0 / h).round() as usize;
    let cfg = IntegrationConfig::new(h, n);
    let orbit = integrate(|_, x, dx| dx[0] = x[0], &StateVector::at_origin(vec![1.0]), &cfg).unwrap();
    (orbit.last().unwrap()[0] - std::f64::consts::E).abs()
}

#[test]
fn error_ratio_per_halving_down_to_a_thousandth() {
    let errors: Vec<f64> = [8e-3, 4e-3, 2e-3, 1e-3].iter().map(|&h| global_error(h)).collect();
    for w in errors.windows(2) {
        assert!((14.0..=18.0).contains(&(w[0] / w[1])), "errors {errors:?}");
    }
}

#[test]
fn empirical_order_between_a_hundredth_and_a_thousandth() {
    let order = (global_error(1e-2) / global_error(1e-3)).log10();
    assert!((3.9..=4.1).contains(&order), "order {order}");
}
