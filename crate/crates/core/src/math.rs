use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::Float;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Maps an angle into `[0, 2π)`.
pub fn wrap_angle(angle: f64) -> f64 {
    let wrapped = angle - TAU * (angle / TAU).floor();
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Maps an angle into `(-π, π]`.
pub(crate) fn wrap_signed(angle: f64) -> f64 {
    let w = wrap_angle(angle);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

#[inline]
pub(crate) fn cis(angle: f64) -> Complex64 {
    Complex64::new(angle.cos(), angle.sin())
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
