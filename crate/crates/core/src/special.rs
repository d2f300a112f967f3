//! Elementary functions with removable singularities and overflow guards.

use num_complex::Complex64;

/// Above this |Re z| hyperbolic functions switch to their exponential tails.
pub const OVERFLOW_ARG: f64 = 350.0;

const XCOTH_SERIES_RADIUS: f64 = 0.1;

/// `exp(z) - 1` without cancellation for small |z|.
pub fn expm1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let half = (0.5 * y).sin();
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin())
}

/// `ln(1 + z)` without cancellation for small |z| (principal branch).
pub fn log1p(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let re = 0.5 * (x * (2.0 + x) + y * y).ln_1p();
    Complex64::new(re, y.atan2(1.0 + x))
}

/// Real `coth`, with the large-argument tail `±(1 + 2e^{-2|x|})`.
pub fn coth(x: f64) -> f64 {
    if x.abs() > OVERFLOW_ARG {
        x.signum() * (1.0 + 2.0 * (-2.0 * x.abs()).exp())
    } else {
        1.0 / x.tanh()
    }
}

/// Complex `coth`. Infinite at the poles `iπk`.
pub fn coth_c(z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        return -coth_c(-z);
    }
    if z.re > OVERFLOW_ARG {
        return 1.0 + 2.0 * (-2.0 * z).exp();
    }
    let m = expm1(-2.0 * z);
    (2.0 + m) / (-m)
}

/// `x coth x - 1`, accurate down to `x = 0` where it vanishes like `x²/3`.
pub fn xcothm1(x: f64) -> f64 {
    if x.abs() < XCOTH_SERIES_RADIUS {
        let u = x * x;
        u * (1.0 / 3.0
            + u * (-1.0 / 45.0
                + u * (2.0 / 945.0
                    + u * (-1.0 / 4725.0 + u * (2.0 / 93555.0 - u * 1382.0 / 638512875.0)))))
    } else {
        x * coth(x) - 1.0
    }
}

pub fn xcothm1_c(z: Complex64) -> Complex64 {
    if z.norm() < XCOTH_SERIES_RADIUS {
        let u = z * z;
        u * (1.0 / 3.0
            + u * (-1.0 / 45.0
                + u * (2.0 / 945.0
                    + u * (-1.0 / 4725.0 + u * (2.0 / 93555.0 - u * 1382.0 / 638512875.0)))))
    } else {
        z * coth_c(z) - 1.0
    }
}

/// `cosh(r a) / sinh(a)` for `r` in `[0, 1]`, overflow free.
pub fn cosh_ratio(a: Complex64, r: f64) -> Complex64 {
    if a.re < 0.0 {
        return -cosh_ratio(-a, r);
    }
    let lead = ((r - 1.0) * a).exp();
    lead * (2.0 + expm1(-2.0 * r * a)) / (-expm1(-2.0 * a))
}

/// `sinh(r a) / sinh(a)` for `r` in `[0, 1]`, overflow free.
pub fn sinh_ratio(a: Complex64, r: f64) -> Complex64 {
    if a.re < 0.0 {
        return sinh_ratio(-a, r);
    }
    let lead = ((r - 1.0) * a).exp();
    lead * expm1(-2.0 * r * a) / expm1(-2.0 * a)
}
