//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cx(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Naive DFT coefficient `f_k = (1/M) Σ f(θ_m) e^{-2πikθ_m}`.
pub fn dft_coefficient(samples: &[C], k: i64) -> C {
    let m = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(j, &v)| v * C::from_polar(1.0, -TAU * k as f64 * j as f64 / m))
        .sum::<C>()
        / m
}

/// Trigonometric polynomial `Σ_k a_k e^{2πikθ}` with keys `k`.
#[derive(Debug, Clone)]
pub struct Trig {
    pub terms: Vec<(i64, C)>,
}

impl Trig {
    pub fn eval(&self, th: f64) -> C {
        self.terms
            .iter()
            .map(|&(k, a)| a * C::from_polar(1.0, TAU * k as f64 * th))
            .sum()
    }

    pub fn derivative(&self, th: f64) -> C {
        self.terms
            .iter()
            .map(|&(k, a)| a * cx(0.0, TAU * k as f64) * C::from_polar(1.0, TAU * k as f64 * th))
            .sum()
    }

    /// `1 + Σ_{0<|k|<=band} a_k e^{2πikθ}` with `Σ|a_k| = amplitude`.
    pub fn near_one(rng: &mut ChaCha8Rng, band: i64, amplitude: f64) -> Self {
        let mut terms: Vec<(i64, C)> = (-band..=band)
            .filter(|&k| k != 0)
            .map(|k| (k, C::from_polar(rng.gen_range(0.1..1.0), rng.gen_range(0.0..TAU))))
            .collect();
        let total: f64 = terms.iter().map(|t| t.1.norm()).sum();
        terms.iter_mut().for_each(|t| t.1 *= amplitude / total);
        terms.push((0, cx(1.0, 0.0)));
        Trig { terms }
    }

    /// Real trigonometric polynomial of degree `band` with coefficients up to `scale`.
    pub fn real(rng: &mut ChaCha8Rng, band: i64, scale: f64) -> Self {
        let mut terms = vec![(0, cx(rng.gen_range(-scale..scale), 0.0))];
        for k in 1..=band {
            let a = C::from_polar(rng.gen_range(0.0..scale), rng.gen_range(0.0..TAU)) * 0.5;
            terms.push((k, a));
            terms.push((-k, a.conj()));
        }
        Trig { terms }
    }
}

/// `K_ν(z) = ∫₀^∞ e^{-z cosh u} cosh(νu) du` by the trapezoid rule, which
/// converges geometrically for this smooth, doubly decaying integrand.
pub fn bessel_k(nu: f64, z: f64) -> f64 {
    let upper = (50.0 / z + 1.0).acosh() + 1.0;
    let h = 0.01;
    let n = (upper / h).ceil() as usize;
    let f = |u: f64| (-z * u.cosh()).exp() * (nu * u).cosh();
    let mut s = 0.5 * f(0.0);
    for i in 1..=n {
        s += f(i as f64 * h);
    }
    s * h
}

/// Adaptive Runge-Kutta-Fehlberg 4(5) for `y' = f(r, y)` with `y ∈ R²`.
pub fn rkf45(f: impl Fn(f64, [f64; 2]) -> [f64; 2], mut r: f64, mut y: [f64; 2], r_end: f64, tol: f64) -> [f64; 2] {
    let mut h = (r_end - r) / 100.0;
    const A: [[f64; 5]; 6] = [
        [0.0; 5],
        [0.25, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 32.0, 9.0 / 32.0, 0.0, 0.0, 0.0],
        [1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0, 0.0, 0.0],
        [439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0, 0.0],
        [-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0],
    ];
    const CN: [f64; 6] = [0.0, 0.25, 3.0 / 8.0, 12.0 / 13.0, 1.0, 0.5];
    const B5: [f64; 6] = [
        16.0 / 135.0,
        0.0,
        6656.0 / 12825.0,
        28561.0 / 56430.0,
        -9.0 / 50.0,
        2.0 / 55.0,
    ];
    const B4: [f64; 6] = [25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -0.2, 0.0];
    while (r_end - r) * h.signum() > 1e-14 {
        if (r + h - r_end) * h.signum() > 0.0 {
            h = r_end - r;
        }
        let mut k = [[0.0; 2]; 6];
        for s in 0..6 {
            let mut ys = y;
            for (p, row) in k.iter().enumerate().take(s) {
                ys[0] += h * A[s][p] * row[0];
                ys[1] += h * A[s][p] * row[1];
            }
            k[s] = f(r + CN[s] * h, ys);
        }
        let mut y5 = y;
        let mut err: f64 = 0.0;
        for d in 0..2 {
            let (mut a, mut b) = (0.0, 0.0);
            for s in 0..6 {
                a += B5[s] * k[s][d];
                b += B4[s] * k[s][d];
            }
            y5[d] += h * a;
            err = err.max((h * (a - b)).abs() / (1.0 + y5[d].abs()));
        }
        if err <= tol {
            r += h;
            y = y5;
        }
        let factor = if err == 0.0 { 2.0 } else { 0.9 * (tol / err).powf(0.2) };
        h *= factor.clamp(0.2, 2.0);
    }
    y
}

/// Log-derivative of the decaying `(k, n)` radial solution at `r`, by inward
/// RKF45 integration from a far radius seeded with Bessel-K asymptotics.
pub fn decaying_log_derivative(k: i64, n: i64, r: f64) -> f64 {
    let kappa = TAU * k.abs() as f64;
    let far = r + 30.0 / kappa;
    let q = |s: f64| kappa * kappa + (n * n) as f64 / (s * s);
    let f = |s: f64, y: [f64; 2]| [y[1], -y[1] / s + q(s) * y[0]];
    let y = rkf45(f, far, [1.0, -(kappa + 0.5 / far)], r, 1e-12);
    y[1] / y[0]
}

pub fn pi() -> f64 {
    PI
}
