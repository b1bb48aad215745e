//! Bessel function of the first kind, order one.
//!
//! `|x| < 3` uses the power series. Above that, Miller's backward
//! recurrence normalized with `J0 + 2ΣJ_{2k} = 1` is used up to
//! `|x| = 25`, and the Hankel asymptotic expansion beyond.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Argument where the power series hands over to the large-argument branch.
pub const SERIES_LIMIT: f64 = 3.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// First positive zero of J1.
pub const J1_FIRST_ZERO: f64 = 3.831_705_970_207_512_3;

pub fn j1(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT {
        j1_series(ax)
    } else if ax < ASYMPTOTIC_LIMIT {
        j1_miller(ax)
    } else {
        j1_asymptotic(ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `J1(x)/x`, finite at `x = 0` where it equals 1/2.
pub fn j1_over_x(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let h = x * x / 4.0;
        0.5 * (1.0 - h / 2.0 + h * h / 12.0)
    } else {
        j1(x) / x
    }
}

pub(crate) fn j1_series(x: f64) -> f64 {
    let h = x / 2.0;
    let q = -h * h;
    let mut term = h;
    let mut sum = h;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) || k > 200.0 {
            return sum;
        }
    }
}

pub(crate) fn j1_miller(x: f64) -> f64 {
    let start = 2 * ((x + 20.0 + 6.0 * x.sqrt()) as usize / 2 + 1);
    let two_over_x = 2.0 / x;
    let (mut j_next, mut j) = (0.0f64, 1e-30f64);
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for m in (1..=start).rev() {
        // j_{m-1} = (2m/x) j_m − j_{m+1}
        let j_prev = m as f64 * two_over_x * j - j_next;
        j_next = j;
        j = j_prev;
        let order = m - 1;
        if order == 1 {
            j1 = j;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            j_next *= 1e-250;
            j1 *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += j; // J0
    j1 / norm
}

pub(crate) fn j1_asymptotic(x: f64) -> f64 {
    const MU: f64 = 4.0;
    let z = 8.0 * x;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kk = (2 * k - 1) as f64;
        term *= (MU - kk * kk) / (k as f64 * z);
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        // term_k = Π_{j≤k}(μ − (2j−1)²) / (k! z^k); signs alternate in pairs
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    // χ = x − 3π/4
    let cos_chi = (s - c) * FRAC_1_SQRT_2;
    let sin_chi = -(s + c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}
