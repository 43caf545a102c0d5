#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// `x * ln(x / (a * b))` with the `0 · log 0 = 0` convention.
#[inline]
pub(crate) fn mi_term(joint: f64, a: f64, b: f64) -> f64 {
    if joint > 0.0 {
        joint * ln(joint / (a * b))
    } else {
        0.0
    }
}

pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let s: f64 = xs.iter().map(|&x| exp(x - max)).sum();
    max + ln(s)
}
