use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform rectangular grid in a real plane, indexed `(i, j)` with node
/// coordinates `(x0 + i h, y0 + j h)`. Storage order is `i`-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneGrid<T: Real> {
    pub origin: (T, T),
    pub spacing: T,
    pub n1: usize,
    pub n2: usize,
}

impl<T: Real> PlaneGrid<T> {
    pub fn new(origin: (T, T), spacing: T, n1: usize, n2: usize) -> Result<Self> {
        if !(spacing > T::zero()) {
            return Err(Error::InvalidInput("grid spacing must be positive".into()));
        }
        if n1 < 3 || n2 < 3 {
            return Err(Error::InvalidInput(format!(
                "grid {n1}x{n2} needs at least 3 nodes per axis"
            )));
        }
        Ok(Self {
            origin,
            spacing,
            n1,
            n2,
        })
    }

    /// Grid of `n x n` nodes centred on `center`.
    pub fn centered(center: (T, T), spacing: T, n: usize) -> Result<Self> {
        let half = spacing * T::from_index(n.saturating_sub(1)) * T::lit(0.5);
        Self::new((center.0 - half, center.1 - half), spacing, n, n)
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n2 + j
    }

    pub fn point(&self, i: usize, j: usize) -> (T, T) {
        (
            self.origin.0 + T::from_index(i) * self.spacing,
            self.origin.1 + T::from_index(j) * self.spacing,
        )
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        i >= 1 && j >= 1 && i + 1 < self.n1 && j + 1 < self.n2
    }

    pub fn require_interior(&self, i: usize, j: usize) -> Result<()> {
        if self.is_interior(i, j) {
            Ok(())
        } else {
            Err(Error::BoundaryNode(i, j))
        }
    }

    pub fn interior_nodes(&self) -> Vec<(usize, usize)> {
        (1..self.n1.saturating_sub(1))
            .flat_map(|i| (1..self.n2.saturating_sub(1)).map(move |j| (i, j)))
            .collect()
    }

    /// Grid with origin and spacing multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            origin: (self.origin.0 * factor, self.origin.1 * factor),
            spacing: self.spacing * factor,
            n1: self.n1,
            n2: self.n2,
        }
    }
}
