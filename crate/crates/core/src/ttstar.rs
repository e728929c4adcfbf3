//! Reality constraint and tt* zero-curvature equations as numerical residuals.
//!
//! Derivatives in the coupling plane use the Wirtinger convention
//! `∂ = ½(∂₁ - i∂₂)`, `∂̄ = ½(∂₁ + i∂₂)` with `t = t₁ + i t₂`, discretised by
//! second-order central differences. Only nodes with a full 5-point stencil
//! are evaluable.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::PlaneGrid;
use crate::linalg::CMatrix;
use crate::scalar::{i_unit, Real};

/// Truncated vacuum metric sampled on a coupling-plane grid.
#[derive(Debug, Clone)]
pub struct MetricField<T: Real> {
    grid: PlaneGrid<T>,
    samples: Vec<CMatrix<T>>,
    eta: CMatrix<T>,
}

impl<T: Real> MetricField<T> {
    /// Field of Hermitian positive-definite metrics. Samples are replaced by
    /// their Hermitian part; corrections above `1e-12` are logged.
    pub fn hermitian(grid: PlaneGrid<T>, samples: Vec<CMatrix<T>>, eta: CMatrix<T>) -> Result<Self> {
        let mut field = Self::general(grid, samples, eta)?;
        for (idx, g) in field.samples.iter_mut().enumerate() {
            let defect = g.hermiticity_defect();
            if defect > T::lit(1e-12) {
                log::warn!("metric sample {idx} symmetrised (defect {defect:e})");
            }
            *g = g.hermitian_part();
            if !g.is_hermitian_positive_definite(T::zero()) {
                return Err(Error::InvalidInput(format!(
                    "metric sample {idx} is not positive definite"
                )));
            }
        }
        Ok(field)
    }

    /// Field of invertible metrics with no Hermiticity requirement. Toeplitz
    /// truncations of complex symbols such as `e^{iφ}/|t|` land here.
    pub fn general(grid: PlaneGrid<T>, samples: Vec<CMatrix<T>>, eta: CMatrix<T>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} samples for a grid of {} nodes",
                samples.len(),
                grid.len()
            )));
        }
        let dim = eta.rows();
        if !eta.is_square() {
            return Err(Error::Shape("eta must be square".into()));
        }
        if let Some(bad) = samples.iter().position(|g| g.rows() != dim || g.cols() != dim) {
            return Err(Error::Shape(format!("sample {bad} is not {dim}x{dim}")));
        }
        Ok(Self { grid, samples, eta })
    }

    pub fn grid(&self) -> &PlaneGrid<T> {
        &self.grid
    }

    pub fn eta(&self) -> &CMatrix<T> {
        &self.eta
    }

    pub fn dim(&self) -> usize {
        self.eta.rows()
    }

    pub fn samples(&self) -> &[CMatrix<T>] {
        &self.samples
    }

    pub fn at(&self, i: usize, j: usize) -> &CMatrix<T> {
        &self.samples[self.grid.index(i, j)]
    }
}

/// Max-norm of `η⁻¹ g (η⁻¹ g)^* - I` (`*` is entrywise conjugation).
pub fn reality_residual<T: Real>(g: &CMatrix<T>, eta: &CMatrix<T>) -> Result<T> {
    if !g.is_square() || g.rows() != eta.rows() || !eta.is_square() {
        return Err(Error::Shape("g and eta must be square of equal size".into()));
    }
    let eta_inv = eta.inverse().map_err(|_| Error::SingularEta)?;
    let x = &eta_inv * g;
    Ok((&x * &x.conj()).sub_identity().max_norm())
}

/// Central-difference data around one node.
struct Stencil<T: Real> {
    g: [CMatrix<T>; 5],
    g_inv: [CMatrix<T>; 5],
    h: T,
}

// order: centre, +1, -1, +2, -2
impl<T: Real> Stencil<T> {
    fn gather(field: &MetricField<T>, i: usize, j: usize) -> Result<Self> {
        field.grid.require_interior(i, j)?;
        let nodes = [(i, j), (i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)];
        let g = nodes.map(|(a, b)| field.at(a, b).clone());
        let mut inv = Vec::with_capacity(5);
        for m in &g {
            inv.push(m.inverse()?);
        }
        let g_inv: [CMatrix<T>; 5] = inv.try_into().unwrap_or_else(|_| unreachable!());
        Ok(Self {
            g,
            g_inv,
            h: field.grid.spacing,
        })
    }

    fn d1(m: &[CMatrix<T>; 5], h: T) -> CMatrix<T> {
        (&m[1] - &m[2]).scale_real(T::lit(0.5) / h)
    }

    fn d2(m: &[CMatrix<T>; 5], h: T) -> CMatrix<T> {
        (&m[3] - &m[4]).scale_real(T::lit(0.5) / h)
    }

    fn laplacian(m: &[CMatrix<T>; 5], h: T) -> CMatrix<T> {
        let sum = &(&(&m[1] + &m[2]) + &m[3]) + &m[4];
        (&sum - &m[0].scale_real(T::lit(4.0))).scale_real(T::one() / (h * h))
    }

    /// `½ (D₁ ± i D₂)`.
    fn wirtinger(m: &[CMatrix<T>; 5], h: T, bar: bool) -> CMatrix<T> {
        let i = if bar { i_unit::<T>() } else { -i_unit::<T>() };
        (&Self::d1(m, h) + &Self::d2(m, h).scale(i)).scale_real(T::lit(0.5))
    }

    /// `g ∂ g⁻¹` at the centre.
    fn current(&self) -> CMatrix<T> {
        &self.g[0] * &Self::wirtinger(&self.g_inv, self.h, false)
    }

    /// `∂̄(g ∂g⁻¹) = ∂̄g ∂g⁻¹ + g ∂̄∂g⁻¹` with `∂̄∂ = ¼Δ`.
    fn dbar_current(&self) -> CMatrix<T> {
        let dbar_g = Self::wirtinger(&self.g, self.h, true);
        let d_ginv = Self::wirtinger(&self.g_inv, self.h, false);
        let lap = Self::laplacian(&self.g_inv, self.h).scale_real(T::lit(0.25));
        &(&dbar_g * &d_ginv) + &(&self.g[0] * &lap)
    }
}

/// Left side of `∂̄(g ∂g⁻¹) - [C, g C^† g⁻¹]` at an interior node.
pub fn zero_curvature_operator<T: Real>(
    field: &MetricField<T>,
    c: &CMatrix<T>,
    node: (usize, usize),
) -> Result<CMatrix<T>> {
    if c.rows() != field.dim() || !c.is_square() {
        return Err(Error::Shape(format!(
            "C is {}x{}, metric is {}",
            c.rows(),
            c.cols(),
            field.dim()
        )));
    }
    let st = Stencil::gather(field, node.0, node.1)?;
    let conj = &(&st.g[0] * &c.adjoint()) * &st.g_inv[0];
    Ok(&st.dbar_current() - &c.commutator(&conj))
}

pub fn zero_curvature_residual<T: Real>(field: &MetricField<T>, c: &CMatrix<T>, node: (usize, usize)) -> Result<T> {
    Ok(zero_curvature_operator(field, c, node)?.max_norm())
}

/// Residual at every interior node, in grid order.
pub fn zero_curvature_map<T: Real>(field: &MetricField<T>, c: &CMatrix<T>) -> Result<Vec<((usize, usize), T)>> {
    field
        .grid
        .interior_nodes()
        .into_par_iter()
        .map(|node| zero_curvature_residual(field, c, node).map(|r| (node, r)))
        .collect()
}

/// Second flatness condition `∂_i C_j - ∂_j C_i + [g ∂_i g⁻¹, C_j] - [g ∂_j g⁻¹, C_i]`
/// for the single-coupling slot `i = j = t`, with `C` constant in `t`.
///
/// Each pair of terms is formed separately and subtracted, so the result is
/// an exact floating-point zero.
pub fn single_coupling_flatness_residual<T: Real>(
    field: &MetricField<T>,
    c: &CMatrix<T>,
    node: (usize, usize),
) -> Result<T> {
    let st = Stencil::gather(field, node.0, node.1)?;
    let dc_i = CMatrix::zeros(c.rows(), c.cols());
    let dc_j = dc_i.clone();
    let cur_i = st.current();
    let cur_j = cur_i.clone();
    let derivative_part = &dc_i - &dc_j;
    let bracket_part = &cur_i.commutator(c) - &cur_j.commutator(c);
    Ok((&derivative_part + &bracket_part).max_norm())
}
