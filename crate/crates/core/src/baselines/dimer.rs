//! The dimer method: a two-point walker that rotates toward the lowest
//! curvature mode using force differences only, then translates with the
//! parallel force component inverted.

use crate::fd::directional_curvature;
use crate::num::Scalar;
use crate::pair::decompose_force;
use crate::pes::PotentialSurface;
use crate::spm::{RunStatus, SaddleResult};
use crate::vector::StateVector;

use super::{capped_step, record, BaselineError, BaselineParams, StagnationDetector};

/// Dimer walker state: a center, a unit orientation, and the half-length of
/// the two image points.
#[derive(Clone, Debug)]
pub struct DimerState<F> {
    pub center: StateVector<F>,
    pub orientation: StateVector<F>,
    pub half_length: F,
}

impl<F: Scalar> DimerState<F> {
    pub fn new(
        center: StateVector<F>,
        orientation: StateVector<F>,
        half_length: F,
    ) -> Result<Self, BaselineError> {
        let orientation = orientation.normalized().ok_or(BaselineError::ZeroMode)?;
        Ok(Self {
            center,
            orientation,
            half_length,
        })
    }
}

/// Curvature estimate along the dimer axis from its three energies.
fn dimer_curvature<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    center: &StateVector<F>,
    v: &StateVector<F>,
    half_length: F,
) -> Result<F, BaselineError> {
    Ok(directional_curvature(pes, center, v, half_length)?)
}

/// One rotation line step: rotate in the plane spanned by the orientation and
/// the perpendicular force difference, backtracking the angle until the
/// curvature estimate does not increase. Returns the new orientation, its
/// curvature, and the rotational force magnitude before the step.
fn rotate_once<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    center: &StateVector<F>,
    v: &StateVector<F>,
    curvature: F,
    half_length: F,
) -> Result<(StateVector<F>, F, F), BaselineError> {
    let f_plus = pes.force(&center.add_scaled(half_length, v))?;
    let f_minus = pes.force(&center.add_scaled(-half_length, v))?;
    let df = &f_plus - &f_minus;
    // Rotational force: the component of the force difference perpendicular
    // to the axis drives the rotation toward lower curvature.
    let df_perp = df.add_scaled(-df.dot(v), v);
    let rot_norm = df_perp.norm();
    let Some(u) = df_perp.normalized() else {
        return Ok((v.clone(), curvature, F::zero()));
    };

    let mut theta: F = F::from(0.5).unwrap();
    let min_theta: F = F::from(1e-8).unwrap();
    while theta > min_theta {
        let rotated = v
            .scaled(theta.cos())
            .add_scaled(theta.sin(), &u)
            .normalized()
            .expect("rotation preserves magnitude");
        let c = dimer_curvature(pes, center, &rotated, half_length)?;
        if c <= curvature {
            return Ok((rotated, c, rot_norm));
        }
        theta *= F::from(0.5).expect("half");
    }
    Ok((v.clone(), curvature, rot_norm))
}

/// Runs the dimer method from `initial`.
///
/// Each step rotates the dimer toward the minimum curvature mode (no Hessian,
/// only force differences), then translates: along `F − 2F_par` when the
/// curvature along the axis is negative, along `−F_par` otherwise. Stops at
/// `|∇E| < force_tol` (Converged), on stagnation of the force norm
/// (TrappedNonSaddle), or at the step cap (MaxCyclesExceeded).
pub fn dimer_run<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    initial: DimerState<F>,
    params: &BaselineParams<F>,
) -> Result<SaddleResult<F>, BaselineError> {
    let mut center = initial.center;
    let mut v = initial
        .orientation
        .normalized()
        .ok_or(BaselineError::ZeroMode)?;
    let half = initial.half_length;

    let mut detector = StagnationDetector::new(params.stagnation_window, params.stagnation_rtol);
    let mut trace = Vec::new();
    let mut status = RunStatus::MaxCyclesExceeded;
    let mut steps = 0;

    for step in 0..params.max_steps {
        steps = step + 1;

        // Rotate toward the minimum mode.
        let mut curvature = dimer_curvature(pes, &center, &v, half)?;
        for _ in 0..params.rotations_per_step {
            let (nv, nc, rot_norm) = rotate_once(pes, &center, &v, curvature, half)?;
            v = nv;
            curvature = nc;
            if rot_norm < params.rotation_tol {
                break;
            }
        }

        // Translate.
        let force = pes.force(&center)?;
        let force_norm = force.norm();
        let energy = pes.energy(&center)?;
        record(
            &mut trace,
            step,
            &center,
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

        let split = decompose_force(&force, &v).expect("orientation is unit");
        let translation = if curvature < F::zero() {
            // Invert the parallel component: descend perpendicular, ascend along v.
            force.add_scaled(-(F::one() + F::one()), &split.parallel)
        } else {
            // Convex region: move against the parallel force only.
            split.parallel.scaled(-F::one())
        };
        capped_step(&mut center, params.step, &translation, params.max_displacement);
        if !center.is_finite() {
            return Err(BaselineError::NonFiniteState(step));
        }
    }

    let energy = pes.energy(&center)?;
    let force_norm = pes.force(&center)?.norm();
    let curvature = directional_curvature(pes, &center, &v, params.curvature_step)?;
    Ok(SaddleResult {
        status,
        position: center,
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

    /// E = x1²/2 − x2²/2.
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
        let initial = DimerState::new(vec2(0.5f64, 0.1), vec2(1.0, 0.3), 0.005).unwrap();
        let r = dimer_run(&QuadSaddle, initial, &BaselineParams::default()).unwrap();
        assert_eq!(r.status, RunStatus::Converged);
        assert!(r.position.norm() < 1e-6, "position {:?}", r.position);
        // Min mode is the x2 axis.
        assert!(r.unstable_mode[1].abs() > 0.99);
        assert!(r.verified_index1);
    }

    #[test]
    fn rotation_is_monotone_in_curvature() {
        let pes = QuadSaddle;
        let center = vec2(0.3f64, 0.2);
        let mut v = vec2(1.0f64, 0.1).normalized().unwrap();
        let mut c = dimer_curvature(&pes, &center, &v, 0.005).unwrap();
        for _ in 0..20 {
            let (nv, nc, _) = rotate_once(&pes, &center, &v, c, 0.005).unwrap();
            assert!(nc <= c + 1e-10, "curvature rose: {nc} > {c}");
            v = nv;
            c = nc;
        }
        // Fully rotated: curvature estimate reaches the smallest eigenvalue.
        assert!((c - (-1.0)).abs() < 1e-3, "final curvature {c}");
    }
}
