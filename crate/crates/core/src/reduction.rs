//! Translation-invariance reduction of chain metrics.
//!
//! A metric invariant under `x -> x + 2πi` is constant along the diagonals of
//! each chain block, so it is the Toeplitz matrix of a matrix-valued symbol
//! `g(θ) = Σ_k g_k e^{2πikθ}` on `θ ∈ [0, 1)`: block `(r, s)` has entry
//! `g^{rs}_{j-l}` at `(j, l)`. In that basis multiplication by `2πik` on the
//! diagonal acts as `d/dθ`, which is what turns the tt* equations into
//! differential equations in θ.
//!
//! Toeplitz matrices are stored chain-major, matching [`CriticalChainSet`].

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fourier::ThetaGrid;
use crate::linalg::CMatrix;
use crate::ring::{coupling_matrix, CriticalChainSet};
use crate::scalar::{re, Real};

/// Matrix-valued symbol sampled at `θ_m = m / M`.
#[derive(Debug, Clone)]
pub struct MetricSymbol<T: Real> {
    grid: ThetaGrid<T>,
    chains: usize,
    samples: Vec<CMatrix<T>>,
}

impl<T: Real> MetricSymbol<T> {
    pub fn new(m: usize, chains: usize, samples: Vec<CMatrix<T>>) -> Result<Self> {
        Self::on_grid(ThetaGrid::new(m)?, chains, samples)
    }

    pub fn on_grid(grid: ThetaGrid<T>, chains: usize, samples: Vec<CMatrix<T>>) -> Result<Self> {
        if !(1..=2).contains(&chains) {
            return Err(Error::InvalidInput(format!(
                "{chains} chains; only 1 or 2 are supported"
            )));
        }
        if samples.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} samples for M = {}",
                samples.len(),
                grid.len()
            )));
        }
        if let Some(bad) = samples.iter().position(|s| s.rows() != chains || s.cols() != chains) {
            return Err(Error::Shape(format!("sample {bad} is not {chains}x{chains}")));
        }
        Ok(Self { grid, chains, samples })
    }

    pub fn from_fn(m: usize, chains: usize, f: impl Fn(T) -> CMatrix<T>) -> Result<Self> {
        let grid = ThetaGrid::new(m)?;
        let samples = (0..m).map(|i| f(grid.theta(i))).collect();
        Self::on_grid(grid, chains, samples)
    }

    /// Single-chain symbol from a scalar function.
    pub fn scalar_fn(m: usize, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        Self::from_fn(m, 1, |th| CMatrix::from_diag(&[f(th)]))
    }

    pub fn grid(&self) -> &ThetaGrid<T> {
        &self.grid
    }

    pub fn grid_size(&self) -> usize {
        self.grid.len()
    }

    pub fn chain_count(&self) -> usize {
        self.chains
    }

    pub fn samples(&self) -> &[CMatrix<T>] {
        &self.samples
    }

    pub fn theta(&self, idx: usize) -> T {
        self.grid.theta(idx)
    }

    pub fn map(&self, f: impl Fn(&CMatrix<T>) -> CMatrix<T>) -> Self {
        Self {
            grid: self.grid.clone(),
            chains: self.chains,
            samples: self.samples.iter().map(f).collect(),
        }
    }

    fn zip_map(&self, other: &Self, f: impl Fn(&CMatrix<T>, &CMatrix<T>) -> CMatrix<T>) -> Result<Self> {
        self.check_compatible(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| f(a, b)).collect();
        Ok(Self {
            grid: self.grid.clone(),
            chains: self.chains,
            samples,
        })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid_size() != other.grid_size() || self.chains != other.chains {
            return Err(Error::Shape(format!(
                "symbols on (M={}, R={}) and (M={}, R={})",
                self.grid_size(),
                self.chains,
                other.grid_size(),
                other.chains
            )));
        }
        Ok(())
    }

    /// Pointwise product `f(θ) g(θ)`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn pointwise_inverse(&self) -> Result<Self> {
        let mut samples = Vec::with_capacity(self.samples.len());
        for (idx, s) in self.samples.iter().enumerate() {
            samples.push(s.inverse().map_err(|_| Error::SingularSymbol(idx))?);
        }
        Ok(Self {
            grid: self.grid.clone(),
            chains: self.chains,
            samples,
        })
    }

    /// Entry `(r, s)` as a periodic sample vector.
    pub fn entry_samples(&self, r: usize, s: usize) -> Vec<Complex<T>> {
        self.samples.iter().map(|m| m[(r, s)]).collect()
    }

    fn with_entries(&self, entries: Vec<Vec<Complex<T>>>) -> Self {
        let n = self.chains;
        let samples = (0..self.grid_size())
            .map(|m| CMatrix::from_fn(n, n, |r, s| entries[r * n + s][m]))
            .collect();
        Self {
            grid: self.grid.clone(),
            chains: n,
            samples,
        }
    }

    /// Spectral θ-derivative of every entry.
    pub fn derivative(&self, order: u32) -> Self {
        let n = self.chains;
        let entries = (0..n * n)
            .map(|idx| self.grid.derivative(&self.entry_samples(idx / n, idx % n), order))
            .collect();
        self.with_entries(entries)
    }

    /// FFT coefficients of every entry, indexed `[r * R + s][bin]`.
    pub fn coefficients(&self) -> Vec<Vec<Complex<T>>> {
        let n = self.chains;
        (0..n * n)
            .map(|idx| self.grid.forward(&self.entry_samples(idx / n, idx % n)))
            .collect()
    }

    /// `g(-θ)` by sample reflection `m -> (M - m) mod M`.
    pub fn reflected(&self) -> Self {
        let samples = (0..self.grid_size())
            .map(|m| self.samples[self.grid.reflect(m)].clone())
            .collect();
        Self {
            grid: self.grid.clone(),
            chains: self.chains,
            samples,
        }
    }

    /// `g(θ + shift / M)`.
    pub fn shifted(&self, shift: usize) -> Self {
        let m = self.grid_size();
        let samples = (0..m).map(|i| self.samples[(i + shift) % m].clone()).collect();
        Self {
            grid: self.grid.clone(),
            chains: self.chains,
            samples,
        }
    }

    pub fn max_deviation(&self, other: &Self) -> Result<T> {
        self.check_compatible(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).max_norm())))
    }
}

/// Dense truncation `N` of a symbol's Toeplitz operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzTruncation<T: Real> {
    truncation: usize,
    chains: usize,
    matrix: CMatrix<T>,
}

impl<T: Real> ToeplitzTruncation<T> {
    pub fn new(truncation: usize, chains: usize, matrix: CMatrix<T>) -> Result<Self> {
        let dim = (2 * truncation + 1) * chains;
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::Shape(format!(
                "Toeplitz truncation N={truncation}, R={chains} needs {dim}x{dim}"
            )));
        }
        Ok(Self {
            truncation,
            chains,
            matrix,
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn chain_count(&self) -> usize {
        self.chains
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }
}

fn assemble<T: Real>(s: &MetricSymbol<T>, truncation: usize) -> ToeplitzTruncation<T> {
    let coeffs = s.coefficients();
    let r = s.chain_count();
    let len = 2 * truncation + 1;
    let n = truncation as i64;
    let grid = s.grid();
    let matrix = CMatrix::from_fn(len * r, len * r, |row, col| {
        let (a, j) = (row / len, row % len);
        let (b, l) = (col / len, col % len);
        let k = (j as i64 - n) - (l as i64 - n);
        grid.coefficient(&coeffs[a * r + b], k)
    });
    ToeplitzTruncation {
        truncation,
        chains: r,
        matrix,
    }
}

/// Toeplitz truncation from the symbol's Fourier coefficients `|k| <= 2N`.
///
/// Fails with [`Error::AliasRisk`] unless `M >= 4N + 2`.
pub fn fourier_expand<T: Real>(s: &MetricSymbol<T>, truncation: usize) -> Result<ToeplitzTruncation<T>> {
    let min = 4 * truncation + 2;
    if s.grid_size() < min {
        return Err(Error::AliasRisk {
            m: s.grid_size(),
            needed: 2 * truncation,
            min,
        });
    }
    Ok(assemble(s, truncation))
}

/// Toeplitz truncation without the alias guard: wavenumbers beyond `M/2` wrap
/// periodically and the Nyquist bin is split between `±M/2`. Entries with
/// `|j - l| < M/2` are exact; use only where comparisons stay inside that band.
pub fn fourier_expand_periodic<T: Real>(s: &MetricSymbol<T>, truncation: usize) -> ToeplitzTruncation<T> {
    assemble(s, truncation)
}

/// Symbol on an `M`-point grid from the diagonals of a Toeplitz truncation.
pub fn fourier_reduce<T: Real>(t: &ToeplitzTruncation<T>, m: usize) -> Result<MetricSymbol<T>> {
    let min = 4 * t.truncation + 2;
    if m < min {
        return Err(Error::AliasRisk {
            m,
            needed: 2 * t.truncation,
            min,
        });
    }
    let grid = ThetaGrid::new(m)?;
    let r = t.chains;
    let len = 2 * t.truncation + 1;
    let n = t.truncation as i64;
    let mut entries = Vec::with_capacity(r * r);
    for a in 0..r {
        for b in 0..r {
            let mut coeffs = vec![Complex::zero(); m];
            for k in -2 * n..=2 * n {
                // first column for k >= 0, first row for k < 0
                let (j, l) = if k >= 0 { (k as usize, 0) } else { (0, (-k) as usize) };
                coeffs[grid.bin(k)] = t.matrix[(a * len + j, b * len + l)];
            }
            entries.push(grid.inverse(&coeffs));
        }
    }
    let samples = (0..m)
        .map(|i| CMatrix::from_fn(r, r, |a, b| entries[a * r + b][i]))
        .collect();
    MetricSymbol::on_grid(grid, r, samples)
}

/// Largest `|g_{j,l} - g_{j+1,l+1}|` over all chain blocks.
pub fn invariance_check<T: Real>(g: &CMatrix<T>, chains: usize) -> Result<T> {
    if !g.is_square() || chains == 0 || !g.rows().is_multiple_of(chains) {
        return Err(Error::Shape(format!(
            "{}x{} matrix with {chains} chains",
            g.rows(),
            g.cols()
        )));
    }
    let len = g.rows() / chains;
    let mut worst = T::zero();
    for a in 0..chains {
        for b in 0..chains {
            for j in 0..len.saturating_sub(1) {
                for l in 0..len - 1 {
                    let d = g[(a * len + j, b * len + l)] - g[(a * len + j + 1, b * len + l + 1)];
                    worst = worst.max(d.norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Flat indices of the interior window `|j| <= N/2` in every chain block.
pub fn interior_indices(truncation: usize, chains: usize) -> Vec<usize> {
    let len = 2 * truncation + 1;
    let half = (truncation / 2) as i64;
    let n = truncation as i64;
    (0..chains)
        .flat_map(|r| (-half..=half).map(move |j| r * len + (j + n) as usize))
        .collect()
}

/// Max-norm over the interior-window rows and columns.
pub fn interior_max_norm<T: Real>(m: &CMatrix<T>, truncation: usize, chains: usize) -> T {
    let idx = interior_indices(truncation, chains);
    let mut worst = T::zero();
    for &i in &idx {
        for &j in &idx {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

/// Checks `[C^†, T(s⁻¹)]` against the symbol-calculus prediction.
///
/// With `C = diag(c_r) + λ d/dθ` in the chain basis, the commutator with a
/// Toeplitz operator is `[diag(c̄_r), T(h)] - λ̄ T(h')`. For one chain the
/// constant part drops out and, for `λ = -1`, this is `T(d/dθ s⁻¹)`; for two
/// chains the surviving constant part is `B [Σ₃, T(s⁻¹)]`. The comparison uses
/// the interior window `|j|, |l| <= N/2`, so only `M >= 2N` is required.
pub fn commutator_identity_residual<T: Real>(s: &MetricSymbol<T>, chains: &CriticalChainSet<T>) -> Result<T> {
    let n = chains.truncation();
    let r = chains.chain_count();
    if s.chain_count() != r {
        return Err(Error::Shape(format!(
            "symbol has {} chains, ring has {r}",
            s.chain_count()
        )));
    }
    if s.grid_size() < 2 * n {
        return Err(Error::AliasRisk {
            m: s.grid_size(),
            needed: n,
            min: 2 * n,
        });
    }
    let inv = s.pointwise_inverse()?;
    let t_inv = fourier_expand_periodic(&inv, n).into_matrix();
    let t_dinv = fourier_expand_periodic(&inv.derivative(1), n).into_matrix();

    let c_adj = coupling_matrix(chains).adjoint();
    let lhs = c_adj.commutator(&t_inv);

    let len = chains.chain_len();
    let base: Vec<Complex<T>> = (0..r * len)
        .map(|i| chains.chains()[i / len].dwdt_base.conj())
        .collect();
    let constant_part = CMatrix::from_diag(&base).commutator(&t_inv);
    let lambda = chains.potential().linear_coeff().conj();
    let rhs = &constant_part - &t_dinv.scale(lambda);

    Ok(interior_max_norm(&(&lhs - &rhs), n, r))
}

/// `D = diag(e^{-γ/2}, e^{γ/2})`.
pub fn d_matrix<T: Real>(gamma: T) -> CMatrix<T> {
    let h = gamma * T::lit(0.5);
    CMatrix::from_diag(&[re((-h).exp()), re(h.exp())])
}

/// `g̃ = D⁻¹ g D⁻¹`.
pub fn rescale_d<T: Real>(g: &MetricSymbol<T>, gamma: T) -> Result<MetricSymbol<T>> {
    if g.chain_count() != 2 {
        return Err(Error::InvalidInput("D-rescaling needs two chains".into()));
    }
    let d_inv = d_matrix(-gamma);
    Ok(g.map(|s| &(&d_inv * s) * &d_inv))
}

/// Inverse of [`rescale_d`]: `g = D g̃ D`.
pub fn unrescale_d<T: Real>(g_tilde: &MetricSymbol<T>, gamma: T) -> Result<MetricSymbol<T>> {
    rescale_d(g_tilde, -gamma)
}

/// `1 / (2 |t| sinh γ)`, the scalar factor of the two-chain η.
pub fn model_b_normalization<T: Real>(t: Complex<T>, gamma: T) -> T {
    T::one() / (T::lit(2.0) * t.norm() * gamma.sinh())
}

/// Reality constraint in symbol form.
///
/// One chain (`gamma = None`): `max_θ ||t|² |f(θ)|² - 1|`.
/// Two chains: `g` is rescaled to `g̃ = D⁻¹ g D⁻¹` and the residual is
/// `max_θ ‖(η₀⁻¹ g̃(θ))(η₀⁻¹ g̃(-θ))^* - I‖` with `η₀ = -Σ₃ / (2t sinh γ)`.
pub fn symbol_reality_residual<T: Real>(s: &MetricSymbol<T>, t: Complex<T>, gamma: Option<T>) -> Result<T> {
    if t == Complex::zero() {
        return Err(Error::ZeroCoupling);
    }
    match (s.chain_count(), gamma) {
        (1, None) => {
            let t2 = t.norm_sqr();
            Ok(s.samples()
                .iter()
                .fold(T::zero(), |m, f| m.max((t2 * f[(0, 0)].norm_sqr() - T::one()).abs())))
        }
        (2, Some(gamma)) => {
            if !(gamma > T::zero()) {
                return Err(Error::InvalidInput("two-chain reality needs γ > 0".into()));
            }
            let g_tilde = rescale_d(s, gamma)?;
            let kappa = t * T::lit(2.0) * gamma.sinh();
            // η₀⁻¹ = -2t sinh γ Σ₃
            let eta0_inv = CMatrix::sigma3().scale(-kappa);
            let mut worst = T::zero();
            for m in 0..s.grid_size() {
                let a = &eta0_inv * &g_tilde.samples()[m];
                let b = &eta0_inv * &g_tilde.samples()[s.grid().reflect(m)];
                if a.determinant()? == Complex::zero() {
                    return Err(Error::SingularSymbol(m));
                }
                worst = worst.max((&a * &b.conj()).sub_identity().max_norm());
            }
            Ok(worst)
        }
        (r, g) => Err(Error::InvalidInput(format!(
            "reality check needs γ exactly for two chains (R = {r}, γ given: {})",
            g.is_some()
        ))),
    }
}

/// Distance of `g̃ / scale` from SU(1,1): the larger of
/// `max_θ ‖ĝ^† Σ₃ ĝ - Σ₃‖` and `max_θ |det ĝ - 1|`.
pub fn su11_residual<T: Real>(g_tilde: &MetricSymbol<T>, scale: T) -> Result<T> {
    if g_tilde.chain_count() != 2 {
        return Err(Error::InvalidInput("SU(1,1) check needs two chains".into()));
    }
    if !(scale > T::zero()) {
        return Err(Error::InvalidInput("normalization scale must be positive".into()));
    }
    let s3 = CMatrix::sigma3();
    let mut worst = T::zero();
    for (m, g) in g_tilde.samples().iter().enumerate() {
        let u = g.scale_real(T::one() / scale);
        let det = u.determinant()?;
        if det == Complex::zero() {
            return Err(Error::SingularSymbol(m));
        }
        let metric = &(&u.adjoint() * &s3) * &u;
        worst = worst.max((&metric - &s3).max_norm()).max((det - Complex::one()).norm());
    }
    Ok(worst)
}

/// SU(1,1) element `[[α, β], [β̄, ᾱ]]` with `α = cosh(s) e^{iψ}`, `β = sinh(s) e^{iχ}`.
pub fn su11_element<T: Real>(s: T, psi: T, chi: T) -> CMatrix<T> {
    let alpha = Complex::from_polar(s.cosh(), psi);
    let beta = Complex::from_polar(s.sinh(), chi);
    CMatrix::mat2(alpha, beta, beta.conj(), alpha.conj())
}
