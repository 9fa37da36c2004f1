//! Small special-function helpers.

/// Bessel function of the first kind, order zero, by its power series
/// `J0(x) = sum_k (-1)^k (x^2/4)^k / (k!)^2`.
///
/// The series is used only for moderate arguments (manufactured solutions
/// and eigenvalue oracles, |x| < 10), where it converges to full double
/// precision in well under 40 terms.
pub fn bessel_j0(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= q / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

/// First positive zero of `J0`, found by bisection on the series.
pub fn bessel_j0_first_zero() -> f64 {
    let (mut lo, mut hi) = (2.0, 3.0);
    debug_assert!(bessel_j0(lo) > 0.0 && bessel_j0(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bessel_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
