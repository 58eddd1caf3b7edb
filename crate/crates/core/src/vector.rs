//! Dense configuration-space vectors.
//!
//! A [`StateVector`] is a point in an n-dimensional configuration space:
//! n = 2 for the analytic test surfaces, 3N for particle clusters, N² for
//! discretized fields. Arithmetic helpers are written for the access
//! patterns of the walkers (axpy-style updates, norms, projections).

use std::fmt;
use std::ops::{Add, Index, Sub};

use thiserror::Error;

use crate::num::Scalar;

/// Invariant violations when constructing a [`StateVector`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VectorError {
    /// Vectors must have at least one component.
    #[error("state vector must have dimension >= 1")]
    Empty,
    /// All components must be finite.
    #[error("non-finite component at index {0}")]
    NonFinite(usize),
}

/// A point in configuration space: an ordered list of real coordinates.
#[derive(Clone, PartialEq)]
pub struct StateVector<F> {
    components: Vec<F>,
}

impl<F: Scalar> StateVector<F> {
    /// Builds a vector, checking the dimension and finiteness invariants.
    pub fn new(components: Vec<F>) -> Result<Self, VectorError> {
        if components.is_empty() {
            return Err(VectorError::Empty);
        }
        if let Some(i) = components.iter().position(|c| !c.is_finite()) {
            return Err(VectorError::NonFinite(i));
        }
        Ok(Self { components })
    }

    /// Zero vector of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        Self {
            components: vec![F::zero(); dim],
        }
    }

    /// Builds a vector component-by-component.
    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> F) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        Self {
            components: (0..dim).map(f).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn as_slice(&self) -> &[F] {
        &self.components
    }

    pub fn as_mut_slice(&mut self) -> &mut [F] {
        &mut self.components
    }

    pub fn into_vec(self) -> Vec<F> {
        self.components
    }

    pub fn iter(&self) -> std::slice::Iter<'_, F> {
        self.components.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &Self) -> F {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot");
        self.components
            .iter()
            .zip(&other.components)
            .map(|(&a, &b)| a * b)
            .sum()
    }

    pub fn norm_squared(&self) -> F {
        self.dot(self)
    }

    pub fn norm(&self) -> F {
        self.norm_squared().sqrt()
    }

    pub fn distance(&self, other: &Self) -> F {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in distance");
        self.components
            .iter()
            .zip(&other.components)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<F>()
            .sqrt()
    }

    pub fn scaled(&self, s: F) -> Self {
        Self {
            components: self.components.iter().map(|&c| c * s).collect(),
        }
    }

    /// `self + s * other`, the workhorse of every Euler update.
    pub fn add_scaled(&self, s: F, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in add_scaled");
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(&a, &b)| a + s * b)
                .collect(),
        }
    }

    /// In-place `self += s * other`.
    pub fn add_scaled_assign(&mut self, s: F, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in add_scaled");
        for (a, &b) in self.components.iter_mut().zip(&other.components) {
            *a += s * b;
        }
    }

    /// Unit vector in the direction of `self`; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n == F::zero() {
            None
        } else {
            Some(self.scaled(F::one() / n))
        }
    }

    pub fn mean(&self) -> F {
        let sum: F = self.components.iter().copied().sum();
        sum / F::from(self.dim()).unwrap()
    }

    /// Subtracts the mean from every component (used by mass-conserving fields).
    pub fn project_zero_mean(&self) -> Self {
        let m = self.mean();
        Self {
            components: self.components.iter().map(|&c| c - m).collect(),
        }
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> F {
        self.components
            .iter()
            .fold(F::zero(), |acc, &c| acc.max(c.abs()))
    }
}

impl<F: Scalar> Index<usize> for StateVector<F> {
    type Output = F;

    fn index(&self, i: usize) -> &F {
        &self.components[i]
    }
}

impl<F: Scalar> Add for &StateVector<F> {
    type Output = StateVector<F>;

    fn add(self, rhs: &StateVector<F>) -> StateVector<F> {
        self.add_scaled(F::one(), rhs)
    }
}

impl<F: Scalar> Sub for &StateVector<F> {
    type Output = StateVector<F>;

    fn sub(self, rhs: &StateVector<F>) -> StateVector<F> {
        self.add_scaled(-F::one(), rhs)
    }
}

impl<F: fmt::Debug> fmt::Debug for StateVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.len() <= 8 {
            write!(f, "StateVector({:?})", self.components)
        } else {
            write!(
                f,
                "StateVector(dim={}, [{:?}, {:?}, ...])",
                self.components.len(),
                self.components[0],
                self.components[1]
            )
        }
    }
}

/// Convenience constructor for small literal vectors in tests and drivers.
pub fn vec2<F: Scalar>(a: F, b: F) -> StateVector<F> {
    StateVector::new(vec![a, b]).expect("finite literals")
}
