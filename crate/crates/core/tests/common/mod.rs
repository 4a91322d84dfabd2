//! Trace analysis shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

pub fn contrast(p: &[f64]) -> f64 {
    let hi = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = p.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Period of the strongest sinusoidal component of the mean-removed trace,
/// from a dense periodogram scan over `[p_min, p_max]` refined by golden section.
pub fn dominant_period(x: &[f64], y: &[f64], p_min: f64, p_max: f64) -> f64 {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let power = |period: f64| {
        let w = 2.0 * PI / period;
        let (mut c, mut s) = (0.0, 0.0);
        for (xi, yi) in x.iter().zip(y) {
            let t = w * (xi - x[0]);
            c += (yi - mean) * t.cos();
            s += (yi - mean) * t.sin();
        }
        c * c + s * s
    };
    let n = 4000;
    let (best, _) = (0..=n)
        .map(|i| p_min * (p_max / p_min).powf(i as f64 / n as f64))
        .map(|p| (p, power(p)))
        .fold((p_min, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc });
    let step = (p_max / p_min).powf(1.0 / n as f64);
    golden_max(power, best / step, best * step)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// Best RMS residual of `y ≈ sin²(ω x + φ)` over ω (scanned through periods
/// in `[p_min, p_max]` of the sin² curve) and φ.
pub fn sin2_fit_residual(x: &[f64], y: &[f64], p_min: f64, p_max: f64) -> (f64, f64) {
    // sin²(θ) = ½ − ½ cos 2θ; for fixed period fit the phase of the cosine
    let resid = |period: f64| {
        let w = 2.0 * PI / period;
        let (mut c, mut s) = (0.0, 0.0);
        for (xi, yi) in x.iter().zip(y) {
            let t = w * (xi - x[0]);
            c += (yi - 0.5) * t.cos();
            s += (yi - 0.5) * t.sin();
        }
        let phase = s.atan2(c);
        let ss: f64 = x
            .iter()
            .zip(y)
            .map(|(xi, yi)| {
                let model = 0.5 + 0.5 * (w * (xi - x[0]) - phase).cos();
                (yi - model).powi(2)
            })
            .sum();
        (ss / x.len() as f64).sqrt()
    };
    let n = 4000;
    let (best, _) = (0..=n)
        .map(|i| p_min * (p_max / p_min).powf(i as f64 / n as f64))
        .map(|p| (p, resid(p)))
        .fold((p_min, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
    let step = (p_max / p_min).powf(1.0 / n as f64);
    let p = golden_max(|p| -resid(p), best / step, best * step);
    (resid(p), p)
}
