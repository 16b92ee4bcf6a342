//! Shared oracles for unit tests; compiled only for the test harness.

/// Smallest positive root of cos(2k) cosh(2k) = 1 by bisection. The clamped
/// beam u'''' = mu u on (-1, 1) has principal eigenvalue k^4.
pub(crate) fn beam_characteristic_root() -> f64 {
    let f = |k: f64| (2.0 * k).cos() * (2.0 * k).cosh() - 1.0;
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    assert!(f(lo) < 0.0 && f(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
