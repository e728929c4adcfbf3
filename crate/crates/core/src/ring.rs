//! Critical chains, the componentwise chiral ring, residue pairing and the
//! coupling multiplication matrix for exponential superpotentials
//!
//! `w(x) = t [Σ_k c_k e^{kx} + λ x]`.
//!
//! Since `e^{kx}` is `2πi`-periodic, every critical point `x_r` comes with the
//! whole chain `x_r + 2πij`, along which `w''` is constant and `∂_t w` shifts
//! by `2πiλj`. Ring elements are arrays of values on the truncated chains
//! `j ∈ [-N, N]`, stored chain-major.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hessenberg_eigenvalues, CMatrix};
use crate::scalar::{finite, i_unit, re, two_pi, Real};

/// `w(x) = t [Σ_k c_k e^{kx} + λ x]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpPolynomial<T: Real> {
    exp_terms: Vec<(u32, Complex<T>)>,
    linear_coeff: Complex<T>,
    coupling: Complex<T>,
}

impl<T: Real> ExpPolynomial<T> {
    pub fn new(mut exp_terms: Vec<(u32, Complex<T>)>, linear_coeff: Complex<T>, coupling: Complex<T>) -> Result<Self> {
        if coupling == Complex::zero() {
            return Err(Error::ZeroCoupling);
        }
        if exp_terms.is_empty() {
            return Err(Error::InvalidPotential("no exponential terms".into()));
        }
        exp_terms.sort_by_key(|&(k, _)| k);
        for w in exp_terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidPotential(format!("frequency {} repeated", w[0].0)));
            }
        }
        for &(k, ck) in &exp_terms {
            if k == 0 {
                return Err(Error::InvalidPotential("frequencies must be >= 1".into()));
            }
            if ck == Complex::zero() || !finite(ck) {
                return Err(Error::InvalidPotential(format!(
                    "coefficient of e^{{{k}x}} must be finite and nonzero"
                )));
            }
        }
        if !finite(linear_coeff) || !finite(coupling) {
            return Err(Error::InvalidPotential("non-finite coefficient".into()));
        }
        Ok(Self {
            exp_terms,
            linear_coeff,
            coupling,
        })
    }

    /// `w = t (e^x - x)`.
    pub fn model_a(t: Complex<T>) -> Result<Self> {
        Self::new(vec![(1, Complex::one())], -Complex::<T>::one(), t)
    }

    /// `w = t (½ e^{2x} - 2c e^x + x)`. `c = 1` is accepted as the degenerate
    /// one-chain limit; chain finding rejects it.
    pub fn model_b(c_param: T, t: Complex<T>) -> Result<Self> {
        if !(c_param >= T::one()) {
            return Err(Error::InvalidPotential(format!("model B needs c >= 1, got {c_param}")));
        }
        Self::new(
            vec![(1, re(-T::lit(2.0) * c_param)), (2, re(T::lit(0.5)))],
            Complex::one(),
            t,
        )
    }

    /// Model B parametrised by `c = cosh γ`.
    pub fn model_b_gamma(gamma: T, t: Complex<T>) -> Result<Self> {
        if !(gamma >= T::zero()) {
            return Err(Error::InvalidPotential(format!("model B needs γ >= 0, got {gamma}")));
        }
        Self::model_b(gamma.cosh(), t)
    }

    pub fn exp_terms(&self) -> &[(u32, Complex<T>)] {
        &self.exp_terms
    }

    pub fn linear_coeff(&self) -> Complex<T> {
        self.linear_coeff
    }

    pub fn coupling(&self) -> Complex<T> {
        self.coupling
    }

    pub fn with_coupling(&self, t: Complex<T>) -> Result<Self> {
        Self::new(self.exp_terms.clone(), self.linear_coeff, t)
    }

    /// The bracket `Σ c_k e^{kx} + λx`, which is also `∂_t w`.
    pub fn shape(&self, x: Complex<T>) -> Complex<T> {
        self.exp_sum(x, 0) + self.linear_coeff * x
    }

    pub fn value(&self, x: Complex<T>) -> Complex<T> {
        self.coupling * self.shape(x)
    }

    pub fn first_derivative(&self, x: Complex<T>) -> Complex<T> {
        self.coupling * (self.exp_sum(x, 1) + self.linear_coeff)
    }

    pub fn second_derivative(&self, x: Complex<T>) -> Complex<T> {
        self.coupling * self.exp_sum(x, 2)
    }

    pub fn dw_dt(&self, x: Complex<T>) -> Complex<T> {
        self.shape(x)
    }

    fn exp_sum(&self, x: Complex<T>, power: i32) -> Complex<T> {
        self.exp_terms.iter().fold(Complex::zero(), |acc, &(k, ck)| {
            let kf = T::from_index(k as usize);
            acc + ck * kf.powi(power) * (x * kf).exp()
        })
    }

    /// Coefficients of `P(u)` with `w'(x) = t P(e^x)`, lowest power first.
    pub fn derivative_polynomial(&self) -> Vec<Complex<T>> {
        let deg = self.exp_terms.last().map(|&(k, _)| k as usize).unwrap_or(0);
        let mut p = vec![Complex::zero(); deg + 1];
        p[0] = self.linear_coeff;
        for &(k, ck) in &self.exp_terms {
            p[k as usize] = ck * T::from_index(k as usize);
        }
        p
    }

    fn magnitude_scale(&self, x: Complex<T>) -> T {
        let s = self.exp_terms.iter().fold(self.linear_coeff.norm(), |acc, &(k, ck)| {
            let kf = T::from_index(k as usize);
            acc + (ck * kf * kf).norm() * (x.re * kf).exp()
        });
        s.max(T::one())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalChain<T: Real> {
    /// Base point with imaginary part in `(-π, π]`.
    pub base_point: Complex<T>,
    /// `w''` at every point of the chain.
    pub hessian: Complex<T>,
    /// `∂_t w` at the base point.
    pub dwdt_base: Complex<T>,
}

/// Chains `{x_r + 2πij : j ∈ [-N, N]}` of critical points.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalChainSet<T: Real> {
    potential: ExpPolynomial<T>,
    chains: Vec<CriticalChain<T>>,
    truncation: usize,
}

impl<T: Real> CriticalChainSet<T> {
    pub fn chains(&self) -> &[CriticalChain<T>] {
        &self.chains
    }

    pub fn chain_count(&self) -> usize {
        self.chains.len()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn potential(&self) -> &ExpPolynomial<T> {
        &self.potential
    }

    /// Points per chain, `2N + 1`.
    pub fn chain_len(&self) -> usize {
        2 * self.truncation + 1
    }

    /// Dimension of the truncated ring, `(2N + 1) R`.
    pub fn dim(&self) -> usize {
        self.chain_len() * self.chains.len()
    }

    /// Flat index of `(chain, j)`.
    pub fn flat_index(&self, chain: usize, j: i64) -> usize {
        let n = self.truncation as i64;
        assert!(
            chain < self.chains.len() && (-n..=n).contains(&j),
            "index ({chain}, {j}) outside truncation"
        );
        chain * self.chain_len() + (j + n) as usize
    }

    pub fn point(&self, chain: usize, j: i64) -> Complex<T> {
        self.chains[chain].base_point + i_unit::<T>() * (two_pi::<T>() * T::from_int(j))
    }

    /// All `(chain, j)` labels in storage order.
    pub fn labels(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        let n = self.truncation as i64;
        (0..self.chains.len()).flat_map(move |r| (-n..=n).map(move |j| (r, j)))
    }

    /// Same chains at another truncation.
    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::InvalidInput("truncation N must be >= 1".into()));
        }
        Ok(Self {
            truncation,
            ..self.clone()
        })
    }
}

/// Finds every critical chain of `w` via the roots of `P(u)`, `u = e^x`.
pub fn find_critical_chains<T: Real>(w: &ExpPolynomial<T>, truncation: usize) -> Result<CriticalChainSet<T>> {
    if truncation == 0 {
        return Err(Error::InvalidInput("truncation N must be >= 1".into()));
    }
    let mut p = w.derivative_polynomial();
    // factor out u^m
    let lowest = p
        .iter()
        .position(|z| *z != Complex::zero())
        .ok_or(Error::NoCriticalPoints)?;
    p.drain(..lowest);
    while p.len() > 1 && *p.last().unwrap() == Complex::zero() {
        p.pop();
    }
    if p.len() <= 1 {
        return Err(Error::NoCriticalPoints);
    }
    let roots = polynomial_roots(&p)?;

    let scale = p.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let merge = T::root_merge_tol();
    for (i, a) in roots.iter().enumerate() {
        let deriv = poly_derivative_eval(&p, *a);
        let size = T::one().max(a.norm());
        let clustered = roots.iter().skip(i + 1).any(|b| (a - b).norm() < merge * size);
        if clustered || deriv.norm() < T::lit(1e-8) * scale * size.powi(p.len() as i32 - 2) {
            return Err(Error::DegenerateCritical(format!("{a}")));
        }
    }

    let mut roots = roots;
    let ang_tol = T::lit(1e-9);
    roots.sort_by(|a, b| {
        let (aa, ab) = (principal_arg(*a), principal_arg(*b));
        if (aa - ab).abs() > ang_tol {
            aa.partial_cmp(&ab).unwrap_or(Ordering::Equal)
        } else {
            a.norm().partial_cmp(&b.norm()).unwrap_or(Ordering::Equal)
        }
    });

    let tol = T::algebraic_tol();
    let mut chains = Vec::with_capacity(roots.len());
    for u in roots {
        let base = Complex::new(u.norm().ln(), principal_arg(u));
        let hessian = w.second_derivative(base);
        let local = w.magnitude_scale(base) * w.coupling().norm();
        if w.first_derivative(base).norm() > tol * local {
            return Err(Error::InvalidInput(format!("root refinement failed at x = {base}")));
        }
        if hessian.norm() <= tol * local {
            return Err(Error::DegenerateCritical(format!("{u}")));
        }
        for shift in [-1i64, 1] {
            let x = base + i_unit::<T>() * (two_pi::<T>() * T::from_int(shift));
            let h = w.second_derivative(x);
            if (h - hessian).norm() > tol * local {
                return Err(Error::InvalidInput(format!("w'' not periodic along chain at {base}")));
            }
        }
        chains.push(CriticalChain {
            base_point: base,
            hessian,
            dwdt_base: w.dw_dt(base),
        });
    }
    Ok(CriticalChainSet {
        potential: w.clone(),
        chains,
        truncation,
    })
}

/// Argument in `(-π, π]`, snapping values within rounding of `-π` to `π`.
fn principal_arg<T: Real>(u: Complex<T>) -> T {
    let a = u.arg();
    if a <= -T::PI() + T::lit(1e-12) {
        a + two_pi::<T>()
    } else {
        a
    }
}

fn poly_eval<T: Real>(p: &[Complex<T>], u: Complex<T>) -> Complex<T> {
    p.iter().rev().fold(Complex::zero(), |acc, &a| acc * u + a)
}

fn poly_derivative_eval<T: Real>(p: &[Complex<T>], u: Complex<T>) -> Complex<T> {
    p.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex::zero(), |acc, (k, &a)| acc * u + a * T::from_index(k))
}

/// Roots of `Σ p_k u^k` (lowest power first) from the companion matrix,
/// polished by a few Newton steps.
pub fn polynomial_roots<T: Real>(p: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let deg = p.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = p[deg];
    if lead == Complex::zero() {
        return Err(Error::InvalidInput("leading coefficient is zero".into()));
    }
    let mut comp = CMatrix::zeros(deg, deg);
    for j in 0..deg {
        comp[(0, j)] = -p[deg - 1 - j] / lead;
    }
    for i in 1..deg {
        comp[(i, i - 1)] = Complex::one();
    }
    let mut roots = hessenberg_eigenvalues(&comp)?;
    for u in roots.iter_mut() {
        for _ in 0..3 {
            let d = poly_derivative_eval(p, *u);
            if d.norm() <= T::epsilon() * lead.norm() {
                break;
            }
            let step = poly_eval(p, *u) / d;
            if !finite(step) {
                break;
            }
            *u = *u - step;
        }
    }
    Ok(roots)
}

/// Values of a ring element on the truncated chains.
#[derive(Debug, Clone, PartialEq)]
pub struct RingElement<T: Real> {
    chain_count: usize,
    truncation: usize,
    values: Vec<Complex<T>>,
}

impl<T: Real> RingElement<T> {
    pub fn from_values(chains: &CriticalChainSet<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != chains.dim() {
            return Err(Error::Shape(format!(
                "{} values for a ring of dimension {}",
                values.len(),
                chains.dim()
            )));
        }
        Ok(Self {
            chain_count: chains.chain_count(),
            truncation: chains.truncation(),
            values,
        })
    }

    /// Evaluates a function on every chain point.
    pub fn from_fn(chains: &CriticalChainSet<T>, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        let values = chains.labels().map(|(r, j)| f(chains.point(r, j))).collect();
        Self {
            chain_count: chains.chain_count(),
            truncation: chains.truncation(),
            values,
        }
    }

    pub fn identity(chains: &CriticalChainSet<T>) -> Self {
        Self::constant(chains, Complex::one())
    }

    pub fn zero(chains: &CriticalChainSet<T>) -> Self {
        Self::constant(chains, Complex::zero())
    }

    pub fn constant(chains: &CriticalChainSet<T>, v: Complex<T>) -> Self {
        Self {
            chain_count: chains.chain_count(),
            truncation: chains.truncation(),
            values: vec![v; chains.dim()],
        }
    }

    /// Point-basis element: 1 at `(chain, j)`, 0 elsewhere.
    pub fn basis(chains: &CriticalChainSet<T>, chain: usize, j: i64) -> Self {
        let mut e = Self::zero(chains);
        e.values[chains.flat_index(chain, j)] = Complex::one();
        e
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn chain_count(&self) -> usize {
        self.chain_count
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::TruncationMismatch {
                left: self.truncation,
                right: other.truncation,
            });
        }
        if self.chain_count != other.chain_count {
            return Err(Error::Shape(format!(
                "{} vs {} chains",
                self.chain_count, other.chain_count
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a * b).collect();
        Ok(Self { values, ..self.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect();
        Ok(Self { values, ..self.clone() })
    }

    /// Diagonal matrix of multiplication by this element.
    pub fn multiplication_matrix(&self) -> CMatrix<T> {
        CMatrix::from_diag(&self.values)
    }
}

fn check_chains<T: Real>(phi: &RingElement<T>, chains: &CriticalChainSet<T>) -> Result<()> {
    if phi.truncation != chains.truncation() {
        return Err(Error::TruncationMismatch {
            left: phi.truncation,
            right: chains.truncation(),
        });
    }
    if phi.chain_count != chains.chain_count() {
        return Err(Error::Shape(format!(
            "{} vs {} chains",
            phi.chain_count,
            chains.chain_count()
        )));
    }
    Ok(())
}

/// Truncated residue `Σ_{r,j} φ_{r,j} / w''(x_r)`.
pub fn residue<T: Real>(phi: &RingElement<T>, chains: &CriticalChainSet<T>) -> Result<Complex<T>> {
    check_chains(phi, chains)?;
    let len = chains.chain_len();
    let mut total = Complex::zero();
    for (r, chain) in chains.chains().iter().enumerate() {
        let sum = phi.values[r * len..(r + 1) * len]
            .iter()
            .fold(Complex::<T>::zero(), |a, &b| a + b);
        total = total + sum / chain.hessian;
    }
    Ok(total)
}

/// `η(φ, ψ) = Res[φ ψ]`.
pub fn eta_pairing<T: Real>(
    phi: &RingElement<T>,
    psi: &RingElement<T>,
    chains: &CriticalChainSet<T>,
) -> Result<Complex<T>> {
    residue(&phi.multiply(psi)?, chains)
}

/// η in the point basis: diagonal with entries `1 / w''(x_r)`.
pub fn eta_matrix<T: Real>(chains: &CriticalChainSet<T>) -> CMatrix<T> {
    let diag: Vec<_> = chains.labels().map(|(r, _)| chains.chains()[r].hessian.inv()).collect();
    CMatrix::from_diag(&diag)
}

/// Diagonal of multiplication by `∂_t w`: `∂_t w(x_r) + 2πiλj`.
pub fn coupling_diagonal<T: Real>(chains: &CriticalChainSet<T>) -> Vec<Complex<T>> {
    let lambda = chains.potential().linear_coeff();
    chains
        .labels()
        .map(|(r, j)| chains.chains()[r].dwdt_base + lambda * i_unit::<T>() * (two_pi::<T>() * T::from_int(j)))
        .collect()
}

pub fn coupling_matrix<T: Real>(chains: &CriticalChainSet<T>) -> CMatrix<T> {
    CMatrix::from_diag(&coupling_diagonal(chains))
}

/// `A = -(1 + ½ cosh 2γ)` and `B = ½ sinh 2γ - γ` of the two-chain model.
pub fn model_b_constants<T: Real>(gamma: T) -> (T, T) {
    let two_g = gamma * T::lit(2.0);
    let a = -(T::one() + T::lit(0.5) * two_g.cosh());
    let b = T::lit(0.5) * two_g.sinh() - gamma;
    (a, b)
}

/// Model B B-constant alone.
pub fn deformation_b<T: Real>(gamma: T) -> T {
    model_b_constants(gamma).1
}
