//! Model B: the B-deformed SU(1,1) field equation and its principal chiral
//! limit.
//!
//! Fields live on the Laplace frame `x = 2t` (see
//! [`LAPLACE_FRAME_SCALE`](super::phase::LAPLACE_FRAME_SCALE)), where
//! `∂_t = ∂₁ - i∂₂` and `∂̄_t = ∂₁ + i∂₂`. Plane currents are link variables
//! `J_a(n + ½) = log(g(n) g(n + e_a)⁻¹) / h`; their divergence reduces to the
//! 5-point Laplacian for abelian fields.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::ThetaGrid;
use crate::grid::PlaneGrid;
use crate::linalg::CMatrix;
use crate::reduction::MetricSymbol;
use crate::ring::deformation_b;
use crate::scalar::{i_unit, Real};

/// 2x2 symbol `g̃(x₁, x₂, θ)` over a Laplace-frame grid.
#[derive(Debug, Clone)]
pub struct SymbolField<T: Real> {
    grid: PlaneGrid<T>,
    theta: ThetaGrid<T>,
    samples: Vec<CMatrix<T>>,
}

impl<T: Real> SymbolField<T> {
    /// `samples` are node-major: index `grid.index(i, j) * M + m`.
    pub fn new(grid: PlaneGrid<T>, m: usize, samples: Vec<CMatrix<T>>) -> Result<Self> {
        let theta = ThetaGrid::new(m)?;
        if samples.len() != grid.len() * m {
            return Err(Error::Shape(format!(
                "{} samples for {} nodes x {m} θ-samples",
                samples.len(),
                grid.len()
            )));
        }
        if let Some(bad) = samples.iter().position(|s| s.rows() != 2 || s.cols() != 2) {
            return Err(Error::Shape(format!("sample {bad} is not 2x2")));
        }
        Ok(Self { grid, theta, samples })
    }

    pub fn from_fn(grid: PlaneGrid<T>, m: usize, f: impl Fn(T, T, T) -> CMatrix<T> + Sync) -> Result<Self> {
        let theta = ThetaGrid::<T>::new(m)?;
        let samples = (0..grid.len())
            .into_par_iter()
            .flat_map_iter(|idx| {
                let (x1, x2) = grid.point(idx / grid.n2, idx % grid.n2);
                let theta = &theta;
                let f = &f;
                (0..m).map(move |k| f(x1, x2, theta.theta(k)))
            })
            .collect();
        Self::new(grid, m, samples)
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

    pub fn samples(&self) -> &[CMatrix<T>] {
        &self.samples
    }

    pub fn at(&self, i: usize, j: usize, m: usize) -> &CMatrix<T> {
        &self.samples[self.grid.index(i, j) * self.theta.len() + m]
    }

    pub fn symbol_at(&self, i: usize, j: usize) -> Result<MetricSymbol<T>> {
        let m = self.theta.len();
        let start = self.grid.index(i, j) * m;
        MetricSymbol::on_grid(self.theta.clone(), 2, self.samples[start..start + m].to_vec())
    }

    /// `A_θ = g̃ (d/dθ g̃⁻¹)` over the θ-profile at a node.
    pub fn theta_current(&self, i: usize, j: usize) -> Result<Vec<CMatrix<T>>> {
        let s = self.symbol_at(i, j)?;
        let d_inv = s.pointwise_inverse()?.derivative(1);
        Ok(s.samples().iter().zip(d_inv.samples()).map(|(g, d)| g * d).collect())
    }

    fn link(&self, from: (usize, usize), to: (usize, usize), m: usize) -> Result<CMatrix<T>> {
        let prod = self.at(from.0, from.1, m) * &self.at(to.0, to.1, m).inverse()?;
        Ok(prod.log2x2()?.scale_real(T::one() / self.grid.spacing))
    }
}

/// Divergence and node-centred currents of the plane part at one θ-sample.
struct PlaneTerms<T: Real> {
    div: CMatrix<T>,
    a1: CMatrix<T>,
    a2: CMatrix<T>,
}

fn plane_terms<T: Real>(f: &SymbolField<T>, i: usize, j: usize, m: usize) -> Result<PlaneTerms<T>> {
    let h = f.grid.spacing;
    let half = T::lit(0.5);
    let mut div = CMatrix::zeros(2, 2);
    let mut centred = Vec::with_capacity(2);
    for (plus, minus) in [((i + 1, j), (i - 1, j)), ((i, j + 1), (i, j - 1))] {
        let forward = f.link((i, j), plus, m)?;
        let backward = f.link(minus, (i, j), m)?;
        div = &div + &(&forward - &backward).scale_real(T::one() / h);
        centred.push((&forward + &backward).scale_real(half));
    }
    let a2 = centred.pop().unwrap();
    let a1 = centred.pop().unwrap();
    Ok(PlaneTerms { div, a1, a2 })
}

/// Shared principal-chiral part `Σ_a ∂_a J_a + ∂_θ A_θ` plus the pieces the
/// deformed equation adds on top, for every θ-sample at a node.
struct Decomposition<T: Real> {
    pcf: Vec<CMatrix<T>>,
    curl: Vec<CMatrix<T>>,
    b_linear: Vec<CMatrix<T>>,
    b_quadratic: Vec<CMatrix<T>>,
}

fn decompose<T: Real>(f: &SymbolField<T>, node: (usize, usize), a_theta: &[CMatrix<T>]) -> Result<Decomposition<T>> {
    let (i, j) = node;
    f.grid.require_interior(i, j)?;
    let m_len = f.theta_len();
    let n = 4;
    let entries: Vec<Vec<Complex<T>>> = (0..n)
        .map(|e| a_theta.iter().map(|a| a.as_slice()[e]).collect())
        .collect();
    let d_entries: Vec<Vec<Complex<T>>> = entries.iter().map(|e| f.theta.derivative(e, 1)).collect();

    let s3 = CMatrix::sigma3();
    let mut out = Decomposition {
        pcf: Vec::with_capacity(m_len),
        curl: Vec::with_capacity(m_len),
        b_linear: Vec::with_capacity(m_len),
        b_quadratic: Vec::with_capacity(m_len),
    };
    for m in 0..m_len {
        let plane = plane_terms(f, i, j, m)?;
        let d_a_theta = CMatrix::from_fn(2, 2, |r, s| d_entries[r * 2 + s][m]);
        out.pcf.push(&plane.div + &d_a_theta);
        out.curl.push(plane.a1.commutator(&plane.a2).scale(i_unit()));

        let g = f.at(i, j, m);
        let rotated = &(g * &s3) * &g.inverse()?;
        out.b_linear.push((&rotated - &s3).commutator(&a_theta[m]));
        out.b_quadratic.push(s3.commutator(&rotated));
    }
    Ok(out)
}

/// `g̃` together with the reduced connection `A_t = g̃ ∂_t g̃⁻¹`,
/// `A_θ = g̃ d/dθ g̃⁻¹` and the deformation constant `B`.
#[derive(Debug, Clone)]
pub struct ReducedConnection<T: Real> {
    field: SymbolField<T>,
    b: T,
    a_t: Vec<CMatrix<T>>,
    a_theta: Vec<CMatrix<T>>,
}

impl<T: Real> ReducedConnection<T> {
    /// Computes the connection from the field. `A_t` is stored at interior
    /// nodes only, in [`PlaneGrid::interior_nodes`] order.
    pub fn new(field: SymbolField<T>, b: T) -> Result<Self> {
        let (a_t, a_theta) = currents(&field)?;
        Ok(Self { field, b, a_t, a_theta })
    }

    /// `B = ½ sinh 2γ - γ`.
    pub fn for_gamma(field: SymbolField<T>, gamma: T) -> Result<Self> {
        Self::new(field, deformation_b(gamma))
    }

    /// Accepts externally supplied currents after checking them against the
    /// field; deviations above `tol` are rejected.
    pub fn from_parts(
        field: SymbolField<T>,
        b: T,
        a_t: Vec<CMatrix<T>>,
        a_theta: Vec<CMatrix<T>>,
        tol: T,
    ) -> Result<Self> {
        let (ref_t, ref_theta) = currents(&field)?;
        if a_t.len() != ref_t.len() || a_theta.len() != ref_theta.len() {
            return Err(Error::Shape("connection arrays do not match the field".into()));
        }
        let worst = a_t
            .iter()
            .zip(&ref_t)
            .chain(a_theta.iter().zip(&ref_theta))
            .fold(T::zero(), |w, (a, b)| w.max((a - b).max_norm()));
        if !(worst <= tol) {
            return Err(Error::InconsistentConnection(worst.to_f64().unwrap_or(f64::INFINITY)));
        }
        Ok(Self { field, b, a_t, a_theta })
    }

    pub fn field(&self) -> &SymbolField<T> {
        &self.field
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// `A_t` at an interior node.
    pub fn a_t(&self, i: usize, j: usize, m: usize) -> Result<&CMatrix<T>> {
        let g = self.field.grid();
        g.require_interior(i, j)?;
        let pos = (i - 1) * (g.n2 - 2) + (j - 1);
        Ok(&self.a_t[pos * self.field.theta_len() + m])
    }

    pub fn a_theta(&self, i: usize, j: usize, m: usize) -> &CMatrix<T> {
        &self.a_theta[self.field.grid().index(i, j) * self.field.theta_len() + m]
    }

    fn a_theta_column(&self, i: usize, j: usize) -> &[CMatrix<T>] {
        let m = self.field.theta_len();
        let start = self.field.grid().index(i, j) * m;
        &self.a_theta[start..start + m]
    }
}

#[allow(clippy::type_complexity)]
fn currents<T: Real>(field: &SymbolField<T>) -> Result<(Vec<CMatrix<T>>, Vec<CMatrix<T>>)> {
    let nodes = field.grid.len();
    let a_theta: Vec<Vec<CMatrix<T>>> = (0..nodes)
        .into_par_iter()
        .map(|idx| field.theta_current(idx / field.grid.n2, idx % field.grid.n2))
        .collect::<Result<_>>()?;
    let a_t: Vec<Vec<CMatrix<T>>> = field
        .grid
        .interior_nodes()
        .into_par_iter()
        .map(|(i, j)| {
            (0..field.theta_len())
                .map(|m| {
                    let p = plane_terms(field, i, j, m)?;
                    Ok(&p.a1 - &p.a2.scale(i_unit()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok((
        a_t.into_iter().flatten().collect(),
        a_theta.into_iter().flatten().collect(),
    ))
}

/// Left side of the reduced two-chain equation
/// `∂̄A_t + d/dθ A_θ - B[(g̃Σ₃g̃⁻¹ - Σ₃), A_θ] - B²[Σ₃, g̃Σ₃g̃⁻¹]` per θ-sample.
///
/// `∂̄A_t` is split as `Σ_a ∂_a J_a + i[A₁, A₂]` using flatness of `A`.
pub fn su11_field_operator<T: Real>(conn: &ReducedConnection<T>, node: (usize, usize)) -> Result<Vec<CMatrix<T>>> {
    let d = decompose(&conn.field, node, conn.a_theta_column(node.0, node.1))?;
    let b = conn.b;
    Ok((0..d.pcf.len())
        .map(|m| {
            let base = &d.pcf[m] + &d.curl[m];
            let lin = d.b_linear[m].scale_real(b);
            let quad = d.b_quadratic[m].scale_real(b * b);
            &(&base - &lin) - &quad
        })
        .collect())
}

pub fn su11_field_residual<T: Real>(conn: &ReducedConnection<T>, node: (usize, usize)) -> Result<T> {
    Ok(su11_field_operator(conn, node)?
        .iter()
        .fold(T::zero(), |w, m| w.max(m.max_norm())))
}

/// Divergence form `Σ_μ ∂_μ(g̃ ∂_μ g̃⁻¹)` in `(x₁, x₂, θ)` per θ-sample.
pub fn pcf_operator<T: Real>(field: &SymbolField<T>, node: (usize, usize)) -> Result<Vec<CMatrix<T>>> {
    field.grid.require_interior(node.0, node.1)?;
    let a_theta = field.theta_current(node.0, node.1)?;
    Ok(decompose(field, node, &a_theta)?.pcf)
}

pub fn pcf_residual<T: Real>(field: &SymbolField<T>, node: (usize, usize)) -> Result<T> {
    Ok(pcf_operator(field, node)?
        .iter()
        .fold(T::zero(), |w, m| w.max(m.max_norm())))
}

/// One row of [`b_limit_consistency`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BLimitRow<T> {
    pub gamma: T,
    pub b: T,
    /// Max over interior nodes and θ of `‖E₆₂ - E_pcf‖`.
    pub gap: T,
}

/// Gap between the deformed equation and the principal chiral field for each
/// `γ`, as a matrix difference. The `B`-independent part of the gap is
/// `i[A₁, A₂]`, which vanishes for fields depending on one plane direction.
pub fn b_limit_consistency<T: Real>(field: &SymbolField<T>, gammas: &[T]) -> Result<Vec<BLimitRow<T>>> {
    let parts: Vec<Decomposition<T>> = field
        .grid
        .interior_nodes()
        .into_par_iter()
        .map(|(i, j)| {
            let a_theta = field.theta_current(i, j)?;
            decompose(field, (i, j), &a_theta)
        })
        .collect::<Result<_>>()?;
    Ok(gammas
        .iter()
        .map(|&gamma| {
            let b = deformation_b(gamma);
            let gap = parts.iter().fold(T::zero(), |w, d| {
                (0..d.curl.len()).fold(w, |w, m| {
                    let extra = &(&d.curl[m] - &d.b_linear[m].scale_real(b)) - &d.b_quadratic[m].scale_real(b * b);
                    w.max(extra.max_norm())
                })
            });
            BLimitRow { gamma, b, gap }
        })
        .collect())
}
