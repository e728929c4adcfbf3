//! Model A: the 3D Laplace equation for the phase of `f = e^{iφ} / |t|`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::ThetaGrid;
use crate::grid::PlaneGrid;
use crate::linalg::CMatrix;
use crate::reduction::{fourier_expand_periodic, interior_max_norm, MetricSymbol};
use crate::ring::{coupling_matrix, find_critical_chains, ExpPolynomial};
use crate::scalar::{c, re, Real};
use crate::ttstar::{zero_curvature_operator, MetricField};

/// Ratio `x / t` between Laplace-frame and coupling coordinates.
///
/// With `∂ = ½(∂₁ - i∂₂)` one has `∂̄∂ = ¼Δ_t`, so `∂̄∂φ + φ_θθ` is the unit
/// Laplacian `Δ₃` in `(x₁, x₂, θ)` with `x = 2t`. Every reduced field lives on
/// a grid in `x`; this constant is the only place the factor appears.
pub const LAPLACE_FRAME_SCALE: f64 = 2.0;

/// `x = 2t`.
pub fn to_laplace_frame<T: Real>(t: Complex<T>) -> Complex<T> {
    t * T::lit(LAPLACE_FRAME_SCALE)
}

/// `t = x / 2`.
pub fn to_coupling_frame<T: Real>(x: Complex<T>) -> Complex<T> {
    x / T::lit(LAPLACE_FRAME_SCALE)
}

/// Real phase `φ(x₁, x₂, θ)` on a Laplace-frame grid times `M` θ-samples.
#[derive(Debug, Clone)]
pub struct PhaseField<T: Real> {
    grid: PlaneGrid<T>,
    theta: ThetaGrid<T>,
    values: Vec<T>,
}

impl<T: Real> PhaseField<T> {
    /// `values` are node-major: index `grid.index(i, j) * M + m`.
    pub fn new(grid: PlaneGrid<T>, m: usize, values: Vec<T>) -> Result<Self> {
        let theta = ThetaGrid::new(m)?;
        if values.len() != grid.len() * m {
            return Err(Error::Shape(format!(
                "{} phase values for {} nodes x {m} θ-samples",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("phase values must be finite".into()));
        }
        Ok(Self { grid, theta, values })
    }

    pub fn from_fn(grid: PlaneGrid<T>, m: usize, f: impl Fn(T, T, T) -> T + Sync) -> Result<Self> {
        let theta = ThetaGrid::<T>::new(m)?;
        let values = (0..grid.len())
            .into_par_iter()
            .flat_map_iter(|idx| {
                let (x1, x2) = grid.point(idx / grid.n2, idx % grid.n2);
                let theta = &theta;
                let f = &f;
                (0..m).map(move |k| f(x1, x2, theta.theta(k)))
            })
            .collect();
        Self::new(grid, m, values)
    }

    pub fn grid(&self) -> &PlaneGrid<T> {
        &self.grid
    }

    pub fn theta_grid(&self) -> &ThetaGrid<T> {
        &self.theta
    }

    pub fn theta_len(&self) -> usize {
        self.theta.len()
    }

    /// Largest θ-mode resolved without Nyquist ambiguity.
    pub fn mode_cutoff(&self) -> usize {
        self.theta.len() / 2 - 1
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize, m: usize) -> T {
        self.values[self.grid.index(i, j) * self.theta.len() + m]
    }

    /// θ-profile at a node.
    pub fn column(&self, i: usize, j: usize) -> &[T] {
        let m = self.theta.len();
        let start = self.grid.index(i, j) * m;
        &self.values[start..start + m]
    }

    /// Symbol `e^{iφ} / |t|` at a node, with `t = x / 2`.
    pub fn model_a_symbol(&self, i: usize, j: usize) -> Result<MetricSymbol<T>> {
        let (x1, x2) = self.grid.point(i, j);
        let t = to_coupling_frame(c(x1, x2));
        if t.norm() == T::zero() {
            return Err(Error::ZeroCoupling);
        }
        let inv_abs = T::one() / t.norm();
        let samples = self
            .column(i, j)
            .iter()
            .map(|&phi| CMatrix::from_diag(&[Complex::from_polar(inv_abs, phi)]))
            .collect();
        MetricSymbol::on_grid(self.theta.clone(), 1, samples)
    }
}

/// `Δ₃φ` over the whole θ-profile at an interior node.
pub fn laplace_profile<T: Real>(phi: &PhaseField<T>, node: (usize, usize)) -> Result<Vec<T>> {
    let (i, j) = node;
    phi.grid.require_interior(i, j)?;
    let h = phi.grid.spacing;
    let inv_h2 = T::one() / (h * h);
    let col: Vec<Complex<T>> = phi.column(i, j).iter().map(|&v| re(v)).collect();
    let d2 = phi.theta.derivative(&col, 2);
    let four = T::lit(4.0);
    Ok((0..phi.theta_len())
        .map(|m| {
            let plane =
                phi.value(i + 1, j, m) + phi.value(i - 1, j, m) + phi.value(i, j + 1, m) + phi.value(i, j - 1, m)
                    - four * phi.value(i, j, m);
            plane * inv_h2 + d2[m].re
        })
        .collect())
}

/// `Δ₃φ` at node `(i, j, m)`: central differences in `x`, spectral in θ.
pub fn laplace_residual<T: Real>(phi: &PhaseField<T>, node: (usize, usize, usize)) -> Result<T> {
    if node.2 >= phi.theta_len() {
        return Err(Error::InvalidInput(format!("θ index {} out of range", node.2)));
    }
    Ok(laplace_profile(phi, (node.0, node.1))?[node.2])
}

/// Laplace residual profiles at every interior node, in grid order.
pub fn laplace_map<T: Real>(phi: &PhaseField<T>) -> Result<Vec<((usize, usize), Vec<T>)>> {
    phi.grid
        .interior_nodes()
        .into_par_iter()
        .map(|node| laplace_profile(phi, node).map(|p| (node, p)))
        .collect()
}

/// Outcome of [`symbol_ttstar_oracle`] at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport<T> {
    /// Interior max-norm of the matrix tt* residual.
    pub matrix_residual: T,
    /// `max_θ |∂̄∂φ + φ_θθ|`.
    pub scalar_residual: T,
    /// Interior max-norm of `matrix residual - T(-i (∂̄∂φ + φ_θθ))`.
    pub gap: T,
}

/// Compares the truncated-matrix tt* residual of Model A with the scalar
/// phase equation at one interior node.
///
/// For `f = e^{iφ}/|t|` symbol calculus gives
/// `∂̄(G∂G⁻¹) - [C, G C^† G⁻¹] = T(-i (∂̄∂φ + φ_θθ))` for `G = T(f)`, up to
/// band-edge effects. Both sides are evaluated on the interior window.
pub fn symbol_ttstar_oracle<T: Real>(
    phi: &PhaseField<T>,
    node: (usize, usize),
    truncation: usize,
) -> Result<OracleReport<T>> {
    let (i, j) = node;
    phi.grid.require_interior(i, j)?;
    let (x1, x2) = phi.grid.point(i, j);
    let t = to_coupling_frame(c(x1, x2));
    let chains = find_critical_chains(&ExpPolynomial::model_a(t)?, truncation)?;
    let cmat = coupling_matrix(&chains);

    let scale = T::one() / T::lit(LAPLACE_FRAME_SCALE);
    let (o1, o2) = phi.grid.point(i - 1, j - 1);
    let local = PlaneGrid::new((o1 * scale, o2 * scale), phi.grid.spacing * scale, 3, 3)?;
    let mut samples = Vec::with_capacity(9);
    for a in 0..3 {
        for b in 0..3 {
            let s = phi.model_a_symbol(i + a - 1, j + b - 1)?;
            samples.push(fourier_expand_periodic(&s, truncation).into_matrix());
        }
    }
    let field = MetricField::general(local, samples, CMatrix::identity(chains.dim()))?;
    let op = zero_curvature_operator(&field, &cmat, (1, 1))?;

    let s = laplace_profile(phi, node)?;
    let scalar_residual = s.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let target_samples = s.iter().map(|&v| CMatrix::from_diag(&[c(T::zero(), -v)])).collect();
    let target = MetricSymbol::on_grid(phi.theta.clone(), 1, target_samples)?;
    let target = fourier_expand_periodic(&target, truncation).into_matrix();

    Ok(OracleReport {
        matrix_residual: interior_max_norm(&op, truncation, 1),
        scalar_residual,
        gap: interior_max_norm(&(&op - &target), truncation, 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn field(h: f64, f: impl Fn(f64, f64, f64) -> f64 + Sync) -> PhaseField<f64> {
        let grid = PlaneGrid::centered((0.3, -0.2), h, 5).unwrap();
        PhaseField::from_fn(grid, 16, f).unwrap()
    }

    #[test]
    fn linear_and_quadratic() {
        let lin = field(0.1, |x, _, _| x);
        assert!(laplace_residual(&lin, (2, 2, 3)).unwrap().abs() < 1e-12);
        let quad = field(0.1, |x, _, _| x * x);
        assert!((laplace_residual(&quad, (2, 2, 0)).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn harmonic_decays_quadratically() {
        let res = |h: f64| {
            let phi = field(h, |x, _, th| (TAU * x).exp() * (TAU * th).cos());
            laplace_residual(&phi, (2, 2, 0)).unwrap().abs()
        };
        let ratio = res(0.02) / res(0.01);
        assert!((ratio - 4.0).abs() < 0.8, "ratio {ratio}");
    }

    #[test]
    fn boundary_rejected() {
        let phi = field(0.1, |_, _, _| 0.0);
        assert_eq!(laplace_residual(&phi, (0, 2, 0)), Err(Error::BoundaryNode(0, 2)));
    }

    #[test]
    fn frame_round_trip() {
        let t = c(0.3, -1.2);
        assert_eq!(to_coupling_frame(to_laplace_frame(t)), t);
    }
}
