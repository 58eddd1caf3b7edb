//! The potential-energy-surface interface shared by all walkers.

use thiserror::Error;

use crate::num::Scalar;
use crate::vector::StateVector;

/// Errors raised by surface evaluations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PesError {
    /// Evaluation requested inside the guard radius of a known singularity.
    #[error("evaluation at a singular point (within guard radius {guard:e})")]
    SingularPoint { guard: f64 },
    /// Two cluster particles closer than the overlap guard.
    #[error("particles {i} and {j} overlap (distance {distance:e})")]
    OverlappingParticles { i: usize, j: usize, distance: f64 },
    /// A mass-conserving field was handed in with a non-zero mean.
    #[error("field mean {mean:e} violates the zero-mean constraint")]
    NonZeroMean { mean: f64 },
    /// Input dimension does not match the surface.
    #[error("dimension mismatch: surface expects {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// A potential energy surface: scalar energy and its gradient over an
/// n-dimensional configuration space.
///
/// Implementations must be safe for concurrent read-only evaluation; all
/// surfaces in this crate are immutable after construction.
pub trait PotentialSurface<F: Scalar>: Send + Sync {
    fn dimension(&self) -> usize;

    fn energy(&self, x: &StateVector<F>) -> Result<F, PesError>;

    /// Analytic gradient ∇E; must agree with central finite differences of
    /// [`energy`](Self::energy) (see [`crate::fd::fd_gradient`]).
    fn gradient(&self, x: &StateVector<F>) -> Result<StateVector<F>, PesError>;

    /// Negative gradient F = −∇E, the force driving all dynamics.
    fn force(&self, x: &StateVector<F>) -> Result<StateVector<F>, PesError> {
        Ok(self.gradient(x)?.scaled(-F::one()))
    }

    fn check_dimension(&self, x: &StateVector<F>) -> Result<(), PesError> {
        if x.dim() != self.dimension() {
            Err(PesError::Dimension {
                expected: self.dimension(),
                got: x.dim(),
            })
        } else {
            Ok(())
        }
    }
}

impl<F: Scalar, P: PotentialSurface<F> + ?Sized> PotentialSurface<F> for &P {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn energy(&self, x: &StateVector<F>) -> Result<F, PesError> {
        (**self).energy(x)
    }

    fn gradient(&self, x: &StateVector<F>) -> Result<StateVector<F>, PesError> {
        (**self).gradient(x)
    }
}

/// Linear map applied to forces before they enter walker dynamics.
///
/// A positive-definite preconditioner changes the metric of the flow but not
/// its stationary points, which is what makes stiff spectral surfaces
/// tractable under explicit stepping. Convergence metrics are always taken
/// on the raw force.
pub trait Preconditioner<F: Scalar>: Send + Sync {
    fn apply(&self, force: &StateVector<F>) -> StateVector<F>;
}

/// The do-nothing preconditioner: dynamics see the raw force.
pub struct IdentityPreconditioner;

impl<F: Scalar> Preconditioner<F> for IdentityPreconditioner {
    fn apply(&self, force: &StateVector<F>) -> StateVector<F> {
        force.clone()
    }
}
