//! Gentlest ascent dynamics: forward-Euler integration of
//!
//! ```text
//! ẋ = −∇E + 2 (∇E · v) v
//! v̇ = −(I − v vᵀ) H v      (relaxed toward the minimum mode)
//! ```
//!
//! with Hessian-vector products taken by central finite differences of the
//! gradient; no Hessian is ever assembled.

use crate::fd::directional_curvature;
use crate::num::Scalar;
use crate::pes::PotentialSurface;
use crate::spm::{RunStatus, SaddleResult};
use crate::vector::StateVector;

use super::{capped_step, record, BaselineError, BaselineParams, StagnationDetector};

/// GAD walker state: a position and the current approximation of the
/// minimum-curvature eigenvector.
#[derive(Clone, Debug)]
pub struct GadState<F> {
    pub position: StateVector<F>,
    pub mode: StateVector<F>,
}

impl<F: Scalar> GadState<F> {
    pub fn new(position: StateVector<F>, mode: StateVector<F>) -> Result<Self, BaselineError> {
        let mode = mode.normalized().ok_or(BaselineError::ZeroMode)?;
        Ok(Self { position, mode })
    }
}

/// Hessian-vector product by central differences of the gradient.
fn hessian_vec<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    x: &StateVector<F>,
    v: &StateVector<F>,
    h: F,
) -> Result<StateVector<F>, BaselineError> {
    let gp = pes.gradient(&x.add_scaled(h, v))?;
    let gm = pes.gradient(&x.add_scaled(-h, v))?;
    Ok((&gp - &gm).scaled(F::one() / (h + h)))
}

/// Runs gentlest ascent dynamics from `initial`; same stopping and trapping
/// contract as [`dimer_run`](super::dimer_run).
pub fn gad_run<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    initial: GadState<F>,
    params: &BaselineParams<F>,
) -> Result<SaddleResult<F>, BaselineError> {
    let mut x = initial.position;
    let mut v = initial.mode.normalized().ok_or(BaselineError::ZeroMode)?;

    let mut detector = StagnationDetector::new(params.stagnation_window, params.stagnation_rtol);
    let mut trace = Vec::new();
    let mut status = RunStatus::MaxCyclesExceeded;
    let mut steps = 0;
    let two = F::one() + F::one();

    for step in 0..params.max_steps {
        steps = step + 1;

        let grad = pes.gradient(&x)?;
        let force_norm = grad.norm();
        let energy = pes.energy(&x)?;
        record(
            &mut trace,
            step,
            &x,
            energy,
            force_norm,
            params.record_positions,
        );

        if force_norm < params.force_tol {
            status = RunStatus::Converged;
            break;
        }
        if detector.stagnated(force_norm) {
            status = RunStatus::TrappedNonSaddle;
            break;
        }

        // Translation: invert the gradient component along the mode.
        let mut velocity = grad.scaled(-F::one());
        velocity.add_scaled_assign(two * grad.dot(&v), &v);
        capped_step(&mut x, params.step, &velocity, params.max_displacement);
        if !x.is_finite() {
            return Err(BaselineError::NonFiniteState(step));
        }

        // Mode relaxation toward the minimum-curvature eigenvector,
        // renormalized every step.
        let hv = hessian_vec(pes, &x, &v, params.mode_fd_step)?;
        let rayleigh = v.dot(&hv);
        let residual = hv.add_scaled(-rayleigh, &v);
        let w = v.add_scaled(-params.mode_relax, &residual);
        v = w.normalized().unwrap_or(v);
    }

    let energy = pes.energy(&x)?;
    let force_norm = pes.force(&x)?.norm();
    let curvature = directional_curvature(pes, &x, &v, params.curvature_step)?;
    Ok(SaddleResult {
        status,
        position: x,
        energy,
        unstable_mode: v,
        residual_e1: force_norm,
        cycles_used: steps,
        verified_index1: curvature < F::zero(),
        mode_curvature: curvature,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pes::PesError;
    use crate::vector::vec2;

    struct QuadSaddle;

    impl PotentialSurface<f64> for QuadSaddle {
        fn dimension(&self) -> usize {
            2
        }

        fn energy(&self, x: &StateVector<f64>) -> Result<f64, PesError> {
            Ok(0.5 * x[0] * x[0] - 0.5 * x[1] * x[1])
        }

        fn gradient(&self, x: &StateVector<f64>) -> Result<StateVector<f64>, PesError> {
            Ok(vec2(x[0], -x[1]))
        }
    }

    #[test]
    fn quadratic_saddle_from_offset() {
        let initial = GadState::new(vec2(0.5f64, 0.1), vec2(1.0, 0.3)).unwrap();
        let r = gad_run(&QuadSaddle, initial, &BaselineParams::default()).unwrap();
        assert_eq!(r.status, RunStatus::Converged);
        assert!(r.position.norm() < 1e-6, "position {:?}", r.position);
        assert!(r.verified_index1);
    }

    #[test]
    fn mode_stays_unit_norm() {
        let initial = GadState::new(vec2(0.4f64, 0.2), vec2(0.7, 0.7)).unwrap();
        let r = gad_run(&QuadSaddle, initial, &BaselineParams::default()).unwrap();
        assert!((r.unstable_mode.norm() - 1.0).abs() < 1e-10);
    }
}
