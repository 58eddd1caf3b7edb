//! Baseline min-mode walkers: the dimer method and gentlest ascent dynamics.
//!
//! Both ascend along the local lowest-curvature direction rather than the
//! minimum-energy-path tangent, which is exactly the behavior the spring
//! pair comparisons probe: the min-mode can deviate from the path tangent
//! and drag the walker into irrelevant regions.
//!
//! Results come back as [`SaddleResult`](crate::spm::SaddleResult) so traces
//! and downstream tooling are shared; the `drift_steps` column is fixed at 0.

pub mod dimer;
pub mod gad;

use thiserror::Error;

use crate::num::{cast, Scalar};
use crate::pes::{PesError, PotentialSurface};
use crate::spm::CycleRecord;
use crate::vector::StateVector;

pub use dimer::{dimer_run, DimerState};
pub use gad::{gad_run, GadState};

/// Shared parameters for both baseline walkers. Step sizes default to the
/// spring pair's climb relaxation so comparisons are fair.
#[derive(Clone, Debug)]
pub struct BaselineParams<F> {
    /// Translation step size.
    pub step: F,
    /// Trust radius: per-step displacement is rescaled to this norm when the
    /// raw step exceeds it. Keeps the walker bounded where forces diverge.
    pub max_displacement: F,
    /// Convergence threshold on |∇E| at the walker position.
    pub force_tol: F,
    /// Hard iteration cap.
    pub max_steps: usize,
    /// Rotation sub-iterations per translation (dimer only).
    pub rotations_per_step: usize,
    /// Rotation force threshold below which the orientation is converged.
    pub rotation_tol: F,
    /// Relaxation rate of the mode vector (GAD only).
    pub mode_relax: F,
    /// Finite-difference step for Hessian-vector products (GAD only).
    pub mode_fd_step: F,
    /// Steps without relative improvement of the best force norm before the
    /// walker is declared trapped.
    pub stagnation_window: usize,
    /// Relative improvement that resets the stagnation window.
    pub stagnation_rtol: F,
    /// Finite-difference step for the final index-1 curvature check.
    pub curvature_step: F,
    /// Keep per-step positions in the trace.
    pub record_positions: bool,
}

impl<F: Scalar> Default for BaselineParams<F> {
    fn default() -> Self {
        Self {
            step: cast(5e-2),
            max_displacement: cast(5e-2),
            force_tol: cast(1e-7),
            max_steps: 200_000,
            rotations_per_step: 1,
            rotation_tol: cast(1e-8),
            mode_relax: cast(5e-2),
            mode_fd_step: cast(1e-4),
            stagnation_window: 300,
            stagnation_rtol: cast(1e-10),
            curvature_step: cast(1e-4),
            record_positions: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error(transparent)]
    Pes(#[from] PesError),
    #[error("non-finite walker state at step {0}")]
    NonFiniteState(usize),
    #[error("initial mode vector must be nonzero")]
    ZeroMode,
}

/// Tracks the running best force norm; the walker is trapped when no
/// relative improvement arrives within the window. A bouncing walker near a
/// singularity never satisfies a literal "force norm unchanged" test, so
/// stagnation is measured against the best value seen.
pub(crate) struct StagnationDetector<F> {
    best: F,
    since_best: usize,
    window: usize,
    rtol: F,
}

impl<F: Scalar> StagnationDetector<F> {
    pub fn new(window: usize, rtol: F) -> Self {
        Self {
            best: F::infinity(),
            since_best: 0,
            window,
            rtol,
        }
    }

    /// Feeds one force norm; true when the walker should give up.
    pub fn stagnated(&mut self, force_norm: F) -> bool {
        if force_norm < self.best * (F::one() - self.rtol) {
            self.best = force_norm;
            self.since_best = 0;
            false
        } else {
            self.since_best += 1;
            self.since_best >= self.window
        }
    }
}

/// Applies `x += step * direction`, rescaling to the trust radius when the
/// raw displacement exceeds it.
pub(crate) fn capped_step<F: Scalar>(
    x: &mut StateVector<F>,
    step: F,
    direction: &StateVector<F>,
    max_displacement: F,
) {
    let raw = direction.norm() * step;
    let scale = if raw > max_displacement {
        max_displacement / raw
    } else {
        F::one()
    };
    x.add_scaled_assign(step * scale, direction);
}

pub(crate) fn record<F: Scalar>(
    trace: &mut Vec<CycleRecord<F>>,
    step: usize,
    position: &StateVector<F>,
    energy: F,
    force_norm: F,
    record_positions: bool,
) {
    trace.push(CycleRecord {
        cycle_index: step,
        drift_steps_taken: 0,
        e1: force_norm,
        e2: None,
        energy_r1: energy,
        energy_r2: energy,
        positions: record_positions.then(|| (position.clone(), position.clone())),
    });
}

/// The trace point of maximum energy and that energy.
///
/// For a walker that truly follows the minimum energy path this coincides
/// with the saddle; for min-mode walkers it often does not.
pub fn path_max_energy<F: Scalar>(
    trace: &[StateVector<F>],
    pes: &dyn PotentialSurface<F>,
) -> Result<(StateVector<F>, F), PesError> {
    assert!(!trace.is_empty(), "path_max_energy needs a nonempty trace");
    let mut best_idx = 0;
    let mut best = F::neg_infinity();
    for (i, p) in trace.iter().enumerate() {
        let e = pes.energy(p)?;
        if e > best {
            best = e;
            best_idx = i;
        }
    }
    Ok((trace[best_idx].clone(), best))
}
