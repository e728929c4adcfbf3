//! Separation of the Laplace phase equation into radial problems.
//!
//! In polar coordinates `x = r e^{iϑ}` of the Laplace frame, the mode
//! `h(r) e^{inϑ} e^{2πikθ}` solves `Δ₃φ = 0` iff
//! `h'' + h'/r - ((2πk)² + n²/r²) h = 0`, a modified Bessel equation whose
//! decaying solution is `K_n(2π|k| r)`.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::ThetaGrid;
use crate::grid::PlaneGrid;
use crate::reduced::phase::PhaseField;
use crate::scalar::{two_pi, Real};

const STENCIL: usize = 7;
const INTERP: usize = 6;
const MIN_RADIAL_NODES: usize = 8;

/// Finite-difference weights for derivatives `0..=order` at `z` on nodes `xs`
/// (Fornberg's recursion). Returned as `[derivative][node]`.
pub fn fd_weights<T: Real>(z: T, xs: &[T], order: usize) -> Vec<Vec<T>> {
    let n = xs.len();
    let mut w = vec![vec![T::zero(); n]; order + 1];
    if n == 0 {
        return w;
    }
    let mut c1 = T::one();
    let mut c4 = xs[0] - z;
    w[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kf = T::from_index(k);
                    w[k][i] = c1 * (kf * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                let kf = T::from_index(k);
                w[k][j] = (c4 * w[k][j] - kf * w[k - 1][j]) / c3;
            }
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    w
}

/// Start of a `width`-point stencil around `idx` clamped into `0..len`.
fn stencil_start(idx: usize, width: usize, len: usize) -> usize {
    idx.saturating_sub(width / 2).min(len - width)
}

/// Sampling annulus `r₀ <= r <= r₁` in the Laplace frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus<T> {
    pub r0: T,
    pub r1: T,
    pub radial_nodes: usize,
    /// Samples in `arg x`; a power of two.
    pub angular_samples: usize,
}

impl<T: Real> Annulus<T> {
    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < MIN_RADIAL_NODES {
            return Err(Error::AnnulusTooThin(self.radial_nodes));
        }
        if !(self.r0 > T::zero() && self.r1 > self.r0) {
            return Err(Error::InvalidInput(format!(
                "annulus needs 0 < r0 < r1, got [{}, {}]",
                self.r0, self.r1
            )));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<T> {
        uniform(self.r0, self.r1, self.radial_nodes)
    }
}

fn uniform<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    let step = (b - a) / T::from_index(n - 1);
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + step * T::from_index(i) })
        .collect()
}

/// `(2πk)² + n²/r²`.
pub fn radial_coefficient<T: Real>(k: i64, n: i64, r: T) -> T {
    let kk = two_pi::<T>() * T::from_int(k);
    let nn = T::from_int(n);
    kk * kk + nn * nn / (r * r)
}

/// Amplitudes `c_{k,n}(r)` of one `(θ-mode, angular mode)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMode<T> {
    pub k: i64,
    pub n: i64,
    pub amplitudes: Vec<Complex<T>>,
}

/// Output of [`mode_separate`].
#[derive(Debug, Clone)]
pub struct ModeSet<T> {
    pub radii: Vec<T>,
    /// Ordered by signed `k`, then signed `n`.
    pub modes: Vec<RadialMode<T>>,
}

impl<T: Real> ModeSet<T> {
    pub fn mode(&self, k: i64, n: i64) -> Option<&RadialMode<T>> {
        self.modes.iter().find(|m| m.k == k && m.n == n)
    }

    /// Scaled residual of the radial ODE on one mode's sampled amplitude.
    pub fn ode_residual(&self, mode: &RadialMode<T>) -> T {
        radial_ode_residual(mode.k, mode.n, &self.radii, &mode.amplitudes)
    }
}

/// Max over interior nodes of `|h'' + h'/r - q h|`, divided by the largest
/// `|h''| + |h'/r| + |q h|` on the same nodes. Derivatives use centred
/// 7-point stencils; nodes within 3 of either end are skipped.
pub fn radial_ode_residual<T: Real>(k: i64, n: i64, radii: &[T], h: &[Complex<T>]) -> T {
    let len = radii.len();
    if len < STENCIL || h.len() != len {
        return T::infinity();
    }
    let half = STENCIL / 2;
    let mut worst = T::zero();
    let mut scale = T::zero();
    for i in half..len - half {
        let xs = &radii[i - half..=i + half];
        let w = fd_weights(radii[i], xs, 2);
        let (mut d1, mut d2) = (Complex::<T>::zero(), Complex::<T>::zero());
        for (s, &v) in h[i - half..=i + half].iter().enumerate() {
            d1 = d1 + v * w[1][s];
            d2 = d2 + v * w[2][s];
        }
        let r = radii[i];
        let qh = h[i] * radial_coefficient(k, n, r);
        worst = worst.max((d2 + d1 / r - qh).norm());
        scale = scale.max(d2.norm() + d1.norm() / r + qh.norm());
    }
    if scale > T::zero() {
        worst / scale
    } else {
        worst
    }
}

/// Interpolates `φ(·, ·, θ_m)` at `(x₁, x₂)` with a 6x6 Lagrange stencil.
fn interpolate<T: Real>(phi: &PhaseField<T>, x1: T, x2: T, out: &mut [T]) -> Result<()> {
    let g = phi.grid();
    let u = (x1 - g.origin.0) / g.spacing;
    let v = (x2 - g.origin.1) / g.spacing;
    let hi1 = T::from_index(g.n1 - 1);
    let hi2 = T::from_index(g.n2 - 1);
    if !(u >= T::zero() && v >= T::zero() && u <= hi1 && v <= hi2) {
        return Err(Error::InvalidInput(format!(
            "point ({x1}, {x2}) lies outside the phase grid"
        )));
    }
    let start = |t: T, len: usize| {
        let base = t.floor().to_usize().unwrap_or(0);
        (base + 1).saturating_sub(INTERP / 2).min(len - INTERP)
    };
    let (s1, s2) = (start(u, g.n1), start(v, g.n2));
    let nodes1: Vec<T> = (s1..s1 + INTERP).map(T::from_index).collect();
    let nodes2: Vec<T> = (s2..s2 + INTERP).map(T::from_index).collect();
    let w1 = &fd_weights(u, &nodes1, 0)[0];
    let w2 = &fd_weights(v, &nodes2, 0)[0];
    out.iter_mut().for_each(|o| *o = T::zero());
    for (a, &wa) in w1.iter().enumerate() {
        for (b, &wb) in w2.iter().enumerate() {
            let w = wa * wb;
            for (o, &p) in out.iter_mut().zip(phi.column(s1 + a, s2 + b)) {
                *o = *o + w * p;
            }
        }
    }
    Ok(())
}

/// Resamples `φ` on the annulus and splits it into `(k, n)` modes.
pub fn mode_separate<T: Real>(phi: &PhaseField<T>, annulus: &Annulus<T>) -> Result<ModeSet<T>> {
    annulus.validate()?;
    let g = phi.grid();
    if g.n1 < INTERP || g.n2 < INTERP {
        return Err(Error::InvalidInput(format!(
            "phase grid needs at least {INTERP} nodes per axis"
        )));
    }
    let ang = ThetaGrid::<T>::new(annulus.angular_samples)?;
    let m = phi.theta_len();
    let na = ang.len();
    let radii = annulus.radii();

    // coefficients per radius, indexed [k_bin * na + n_bin]
    let per_radius: Vec<Vec<Complex<T>>> = radii
        .par_iter()
        .map(|&r| {
            let mut rows = Vec::with_capacity(na);
            let mut buf = vec![T::zero(); m];
            for a in 0..na {
                let vt = two_pi::<T>() * ang.theta(a);
                interpolate(phi, r * vt.cos(), r * vt.sin(), &mut buf)?;
                let col: Vec<Complex<T>> = buf.iter().map(|&x| Complex::new(x, T::zero())).collect();
                rows.push(phi.theta_grid().forward(&col));
            }
            let mut out = vec![Complex::zero(); m * na];
            for kb in 0..m {
                let across: Vec<Complex<T>> = rows.iter().map(|row| row[kb]).collect();
                for (nb, z) in ang.forward(&across).into_iter().enumerate() {
                    out[kb * na + nb] = z;
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let tg = phi.theta_grid();
    let mut order: Vec<(i64, i64, usize)> = Vec::with_capacity(m * na);
    for kb in 0..m {
        for nb in 0..na {
            order.push((tg.wavenumber(kb), ang.wavenumber(nb), kb * na + nb));
        }
    }
    order.sort_unstable();
    let modes = order
        .into_iter()
        .map(|(k, n, idx)| RadialMode {
            k,
            n,
            amplitudes: per_radius.iter().map(|c| c[idx]).collect(),
        })
        .collect();
    Ok(ModeSet { radii, modes })
}

/// Decaying solution of the `(k, n)` radial equation on given radii,
/// normalized to `h(r₀) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile<T> {
    pub k: i64,
    pub n: i64,
    pub radii: Vec<T>,
    pub values: Vec<T>,
    pub slopes: Vec<T>,
}

impl<T: Real> RadialProfile<T> {
    /// `h'/h` at the outer radius, from the integrated state.
    pub fn outer_log_derivative(&self) -> T {
        let last = self.values.len() - 1;
        self.slopes[last] / self.values[last]
    }

    /// Lagrange interpolation of `h` at `r` inside the sampled range.
    pub fn eval(&self, r: T) -> Option<T> {
        let (lo, hi) = (self.radii[0], *self.radii.last()?);
        if !(r >= lo && r <= hi) {
            return None;
        }
        let len = self.radii.len();
        let width = INTERP.min(len);
        let step = (hi - lo) / T::from_index(len - 1);
        let idx = ((r - lo) / step).floor().to_usize().unwrap_or(0).min(len - 1);
        let s = stencil_start(idx + 1, width, len);
        let w = &fd_weights(r, &self.radii[s..s + width], 0)[0];
        Some(
            w.iter()
                .zip(&self.values[s..s + width])
                .fold(T::zero(), |acc, (&a, &b)| acc + a * b),
        )
    }
}

/// Classical RK4 for `y = (h, h')` with `h'' = -h'/r + q(r) h`, from `r_a` to
/// `r_b` in `steps` equal steps.
fn rk4<T: Real>(k: i64, n: i64, y: (T, T), r_a: T, r_b: T, steps: usize) -> (T, T) {
    let f = |r: T, h: T, p: T| (p, -p / r + radial_coefficient(k, n, r) * h);
    let dr = (r_b - r_a) / T::from_index(steps);
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let two = T::lit(2.0);
    let (mut h, mut p) = y;
    for s in 0..steps {
        let r = r_a + dr * T::from_index(s);
        let k1 = f(r, h, p);
        let k2 = f(r + dr * half, h + dr * half * k1.0, p + dr * half * k1.1);
        let k3 = f(r + dr * half, h + dr * half * k2.0, p + dr * half * k2.1);
        let k4 = f(r + dr, h + dr * k3.0, p + dr * k3.1);
        h = h + dr * sixth * (k1.0 + two * k2.0 + two * k3.0 + k4.0);
        p = p + dr * sixth * (k1.1 + two * k2.1 + two * k3.1 + k4.1);
    }
    (h, p)
}

/// One inward integration at a fixed step; returns `(h, h', log-scale)` per radius.
fn integrate_inward<T: Real>(k: i64, n: i64, radii: &[T], step: T) -> Vec<(T, T, T)> {
    let kappa = two_pi::<T>() * T::from_int(k.abs());
    let outer = *radii.last().unwrap();
    let far = outer + T::lit(40.0) / kappa;
    // K_ν(z) ~ e^{-z} / sqrt(z)
    let mut y = (T::one(), -(kappa + T::lit(0.5) / far));
    let steps = |a: T, b: T| ((a - b) / step).ceil().to_usize().unwrap_or(1).max(1);
    y = rk4(k, n, y, far, outer, steps(far, outer));
    let mut log_scale = T::zero();
    let mut out = vec![(T::zero(), T::zero(), T::zero()); radii.len()];
    let last = radii.len() - 1;
    out[last] = (y.0, y.1, log_scale);
    for i in (0..last).rev() {
        y = rk4(k, n, y, radii[i + 1], radii[i], steps(radii[i + 1], radii[i]));
        let mag = y.0.abs();
        if mag > T::lit(1e8) {
            y = (y.0 / mag, y.1 / mag);
            log_scale = log_scale + mag.ln();
        }
        out[i] = (y.0, y.1, log_scale);
    }
    out
}

/// Decaying solution on increasing `radii`, by RK4 integrated inward from
/// `r₁ + 40/(2π|k|)` with step halving until no log-derivative on `radii`
/// changes by more than `1e-6`. `k = 0` uses the exact profiles `1` and `r^{-|n|}`.
pub fn decaying_profile<T: Real>(k: i64, n: i64, radii: &[T]) -> Result<RadialProfile<T>> {
    if radii.len() < MIN_RADIAL_NODES {
        return Err(Error::AnnulusTooThin(radii.len()));
    }
    if !(radii[0] > T::zero()) || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("radii must be positive and increasing".into()));
    }
    let r0 = radii[0];
    if k == 0 {
        let nn = T::from_int(n.abs());
        let values: Vec<T> = radii.iter().map(|&r| (r / r0).powf(-nn)).collect();
        let slopes = radii.iter().zip(&values).map(|(&r, &v)| -nn / r * v).collect();
        return Ok(RadialProfile {
            k,
            n,
            radii: radii.to_vec(),
            values,
            slopes,
        });
    }
    let kappa = two_pi::<T>() * T::from_int(k.abs());
    let spacing = radii[1] - radii[0];
    let mut step = spacing.min(T::one() / kappa) * T::lit(0.5);
    let mut prev = integrate_inward(k, n, radii, step);
    let tol = T::lit(1e-6);
    for _ in 0..24 {
        step = step * T::lit(0.5);
        let next = integrate_inward(k, n, radii, step);
        let change = prev
            .iter()
            .zip(&next)
            .fold(T::zero(), |w, (a, b)| w.max((a.1 / a.0 - b.1 / b.0).abs()));
        prev = next;
        if change < tol {
            let (h0, _, s0) = prev[0];
            let values = prev.iter().map(|&(h, _, s)| h / h0 * (s - s0).exp()).collect();
            let slopes = prev.iter().map(|&(_, p, s)| p / h0 * (s - s0).exp()).collect();
            return Ok(RadialProfile {
                k,
                n,
                radii: radii.to_vec(),
                values,
                slopes,
            });
        }
    }
    Err(Error::NoConvergence)
}

/// `d(log h)/dr` at the outer radius from samples on increasing radii
/// (one-sided 7-point stencil on `log|h|`). Fails with [`Error::NonDecaying`] when `h`
/// grows there.
pub fn asymptotic_decay_check<T: Real>(radii: &[T], h: &[T]) -> Result<T> {
    let len = radii.len();
    if h.len() != len {
        return Err(Error::Shape(format!("{} radii, {} samples", len, h.len())));
    }
    if len < STENCIL {
        return Err(Error::AnnulusTooThin(len));
    }
    let last = len - 1;
    if h[last] == T::zero() {
        return Err(Error::InvalidInput("profile vanishes at the outer radius".into()));
    }
    let xs = &radii[len - STENCIL..];
    let w = &fd_weights(radii[last], xs, 1)[1];
    let tail = &h[len - STENCIL..];
    let dot = |vals: &mut dyn Iterator<Item = T>| w.iter().zip(vals).fold(T::zero(), |acc, (&a, b)| acc + a * b);
    // log|h| is close to linear for exponential tails; fall back to h itself across sign changes
    let logd = if tail.iter().all(|&v| v * h[last] > T::zero()) {
        dot(&mut tail.iter().map(|v| v.abs().ln()))
    } else {
        dot(&mut tail.iter().copied()) / h[last]
    };
    let span = radii[last] - radii[0];
    if logd * span > T::lit(1e-6) {
        return Err(Error::NonDecaying);
    }
    Ok(logd)
}

/// Dirichlet data `φ(r₀, ϑ_a, θ_m)`, angle-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData<T> {
    pub r0: T,
    pub angular_samples: usize,
    pub theta_samples: usize,
    pub values: Vec<T>,
}

/// One solved mode: `c_{k,n} h(r) / h(r₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvedMode<T> {
    pub k: i64,
    pub n: i64,
    pub coefficient: Complex<T>,
    pub profile: RadialProfile<T>,
    /// `d(log h)/dr` at `r₁`.
    pub decay_rate: T,
}

/// Solution of the exterior problem on `r₀ <= r <= r₁` with decay selection.
#[derive(Debug, Clone)]
pub struct ModeSolution<T> {
    pub r0: T,
    pub r1: T,
    pub radii: Vec<T>,
    pub modes: Vec<SolvedMode<T>>,
}

/// Expands boundary data in modes and attaches the decaying radial profile to
/// each. Coefficients below `1e-14` of the largest are dropped.
pub fn solve_modes<T: Real>(data: &BoundaryData<T>, r1: T, radial_nodes: usize) -> Result<ModeSolution<T>> {
    if data.values.is_empty() {
        return Err(Error::InvalidInput("boundary data is empty".into()));
    }
    let annulus = Annulus {
        r0: data.r0,
        r1,
        radial_nodes,
        angular_samples: data.angular_samples,
    };
    annulus.validate()?;
    let (na, m) = (data.angular_samples, data.theta_samples);
    if data.values.len() != na * m {
        return Err(Error::Shape(format!(
            "{} boundary values for {na} angles x {m} θ-samples",
            data.values.len()
        )));
    }
    if data.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("boundary values must be finite".into()));
    }
    let ang = ThetaGrid::<T>::new(na)?;
    let tg = ThetaGrid::<T>::new(m)?;
    let rows: Vec<Vec<Complex<T>>> = data
        .values
        .chunks(m)
        .map(|row| tg.forward(&row.iter().map(|&v| Complex::new(v, T::zero())).collect::<Vec<_>>()))
        .collect();
    let mut coeffs = Vec::with_capacity(m * na);
    for kb in 0..m {
        let across: Vec<Complex<T>> = rows.iter().map(|r| r[kb]).collect();
        for (nb, z) in ang.forward(&across).into_iter().enumerate() {
            coeffs.push((tg.wavenumber(kb), ang.wavenumber(nb), z));
        }
    }
    coeffs.sort_by_key(|&(k, n, _)| (k, n));
    let biggest = coeffs.iter().fold(T::zero(), |w, c| w.max(c.2.norm()));
    let cutoff = biggest * T::lit(1e-14);
    coeffs.retain(|c| c.2.norm() > cutoff);

    let radii = annulus.radii();
    let keys: Vec<(i64, i64)> = {
        let mut set: BTreeMap<(i64, i64), ()> = BTreeMap::new();
        coeffs.iter().for_each(|&(k, n, _)| {
            set.insert((k.abs(), n.abs()), ());
        });
        set.into_keys().collect()
    };
    let solved: Vec<RadialProfile<T>> = keys
        .par_iter()
        .map(|&(k, n)| decaying_profile(k, n, &radii))
        .collect::<Result<_>>()?;
    let profiles: BTreeMap<(i64, i64), RadialProfile<T>> = keys.into_iter().zip(solved).collect();

    let modes = coeffs
        .into_iter()
        .map(|(k, n, coefficient)| {
            let profile = profiles[&(k.abs(), n.abs())].clone();
            asymptotic_decay_check(&profile.radii, &profile.values)?;
            let decay_rate = profile.outer_log_derivative();
            Ok(SolvedMode {
                k,
                n,
                coefficient,
                profile: RadialProfile { k, n, ..profile },
                decay_rate,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ModeSolution {
        r0: data.r0,
        r1,
        radii,
        modes,
    })
}

impl<T: Real> ModeSolution<T> {
    /// `φ(x₁, x₂, θ)` for `r₀ <= r <= r₁`.
    pub fn evaluate(&self, x1: T, x2: T, theta: T) -> Option<T> {
        let r = x1.hypot(x2);
        let vt = x2.atan2(x1);
        let mut sum = T::zero();
        for mode in &self.modes {
            let h = mode.profile.eval(r)?;
            let phase = T::from_int(mode.n) * vt + two_pi::<T>() * T::from_int(mode.k) * theta;
            sum = sum + h * (mode.coefficient * Complex::from_polar(T::one(), phase)).re;
        }
        Some(sum)
    }

    /// Samples the solution on `grid`. Nodes outside the annulus are set to
    /// zero; the returned list holds the nodes whose 5-point stencil lies in
    /// the annulus.
    pub fn reconstruct(&self, grid: PlaneGrid<T>, m: usize) -> Result<(PhaseField<T>, Vec<(usize, usize)>)> {
        let field = PhaseField::from_fn(grid, m, |x1, x2, th| self.evaluate(x1, x2, th).unwrap_or(T::zero()))?;
        let inside = |i: usize, j: usize| {
            let (x1, x2) = grid.point(i, j);
            let r = x1.hypot(x2);
            r >= self.r0 && r <= self.r1
        };
        let nodes = grid
            .interior_nodes()
            .into_iter()
            .filter(|&(i, j)| {
                inside(i, j) && inside(i + 1, j) && inside(i - 1, j) && inside(i, j + 1) && inside(i, j - 1)
            })
            .collect();
        Ok((field, nodes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_weights_match_textbook() {
        let xs = [-1.0, 0.0, 1.0];
        let w = fd_weights(0.0, &xs, 2);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
        let w = fd_weights(0.5, &xs, 0);
        assert!((w[0].iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_profile_has_zero_log_derivative() {
        let r: Vec<f64> = (0..10).map(|i| 1.0 + 0.1 * i as f64).collect();
        let h = vec![3.0; 10];
        assert!(asymptotic_decay_check(&r, &h).unwrap().abs() < 1e-12);
    }

    #[test]
    fn growing_profile_rejected() {
        let r: Vec<f64> = (0..10).map(|i| 1.0 + 0.1 * i as f64).collect();
        let h: Vec<f64> = r.iter().map(|x| x.exp()).collect();
        assert_eq!(asymptotic_decay_check(&r, &h), Err(Error::NonDecaying));
    }

    #[test]
    fn thin_annulus() {
        let r: Vec<f64> = (0..7).map(|i| 1.0 + i as f64).collect();
        assert_eq!(decaying_profile(1, 0, &r), Err(Error::AnnulusTooThin(7)));
        let a = Annulus {
            r0: 0.5,
            r1: 1.0,
            radial_nodes: 5,
            angular_samples: 8,
        };
        assert_eq!(a.validate(), Err(Error::AnnulusTooThin(5)));
    }

    #[test]
    fn power_law_profiles() {
        let r: Vec<f64> = (0..40).map(|i| 1.0 + 0.05 * i as f64).collect();
        let p = decaying_profile(0, 2, &r).unwrap();
        assert!((p.values[5] - r[5].powi(-2)).abs() < 1e-15);
        assert!(
            radial_ode_residual(
                0,
                2,
                &r,
                &p.values.iter().map(|&v| Complex::new(v, 0.0)).collect::<Vec<_>>()
            ) < 1e-6
        );
    }

    #[test]
    fn decaying_profile_satisfies_ode() {
        let r: Vec<f64> = (0..40).map(|i| 0.5 + 0.025 * i as f64).collect();
        let p = decaying_profile(1, 1, &r).unwrap();
        let h: Vec<_> = p.values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        assert!(radial_ode_residual(1, 1, &r, &h) < 1e-7);
        assert!(p.values.windows(2).all(|w| w[1] < w[0]));
    }
}
