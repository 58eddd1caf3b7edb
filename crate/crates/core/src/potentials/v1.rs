//! The circular-valley test surface
//!
//! ```text
//! V1(x1, x2) = (1 − x1² − x2²)² + x1² / (x1² + x2²)
//! ```
//!
//! Minima at (0, ±1) with energy 0, index-1 saddles at (±1, 0) with energy 1.
//! The minimum energy path is the unit circle. The origin is a singularity;
//! evaluation inside a guard radius of 1e-8 is rejected, the smallest radius
//! keeping 64-bit evaluation finite.

use crate::num::{cast, Scalar};
use crate::pes::{PesError, PotentialSurface};
use crate::vector::{vec2, StateVector};

const GUARD_RADIUS: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default)]
pub struct V1Surface;

impl V1Surface {
    pub fn minima<F: Scalar>() -> [StateVector<F>; 2] {
        [vec2(F::zero(), F::one()), vec2(F::zero(), -F::one())]
    }

    pub fn saddles<F: Scalar>() -> [StateVector<F>; 2] {
        [vec2(F::one(), F::zero()), vec2(-F::one(), F::zero())]
    }

    fn check<F: Scalar>(&self, x: &StateVector<F>) -> Result<(F, F, F), PesError> {
        self.check_dimension(x)?;
        let (x1, x2) = (x[0], x[1]);
        let r2 = x1 * x1 + x2 * x2;
        let guard: F = cast(GUARD_RADIUS * GUARD_RADIUS);
        if r2 < guard {
            return Err(PesError::SingularPoint {
                guard: GUARD_RADIUS,
            });
        }
        Ok((x1, x2, r2))
    }
}

impl<F: Scalar> PotentialSurface<F> for V1Surface {
    fn dimension(&self) -> usize {
        2
    }

    fn energy(&self, x: &StateVector<F>) -> Result<F, PesError> {
        let (x1, _, r2) = self.check(x)?;
        let well = F::one() - r2;
        Ok(well * well + x1 * x1 / r2)
    }

    fn gradient(&self, x: &StateVector<F>) -> Result<StateVector<F>, PesError> {
        let (x1, x2, r2) = self.check(x)?;
        let four: F = cast(4.0);
        let two: F = cast(2.0);
        let well = F::one() - r2;
        let r4 = r2 * r2;
        // d/dx1 [x1²/r²] = 2 x1 x2² / r⁴ ; d/dx2 [x1²/r²] = −2 x1² x2 / r⁴
        let g1 = -four * x1 * well + two * x1 * x2 * x2 / r4;
        let g2 = -four * x2 * well - two * x1 * x1 * x2 / r4;
        Ok(vec2(g1, g2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimum_has_zero_energy_and_gradient() {
        let pes = V1Surface;
        let m = vec2(0.0f64, 1.0);
        assert_eq!(pes.energy(&m).unwrap(), 0.0);
        assert!(pes.gradient(&m).unwrap().norm() < 1e-15);
    }

    #[test]
    fn saddle_energy_is_one() {
        let pes = V1Surface;
        assert!((pes.energy(&vec2(1.0f64, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(pes.gradient(&vec2(1.0f64, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn gradient_at_half_half() {
        // Analytic differentiation gives (0, -2) at (0.5, 0.5):
        //   g1 = -4·0.5·0.5 + 2·0.5·0.25/0.25 = -1 + 1 = 0
        //   g2 = -4·0.5·0.5 - 2·0.25·0.5/0.25 = -1 - 1 = -2
        let g = V1Surface.gradient(&vec2(0.5f64, 0.5)).unwrap();
        assert!(g[0].abs() < 1e-14);
        assert!((g[1] - (-2.0)).abs() < 1e-14);
    }

    #[test]
    fn singular_guard() {
        let pes = V1Surface;
        assert!(matches!(
            pes.energy(&vec2(0.0f64, 0.0)),
            Err(PesError::SingularPoint { .. })
        ));
        assert!(matches!(
            pes.energy(&vec2(5e-9f64, 5e-9)),
            Err(PesError::SingularPoint { .. })
        ));
        // Just outside the guard evaluates fine.
        assert!(pes.energy(&vec2(2e-8f64, 0.0)).is_ok());
    }

    #[test]
    fn gradient_is_tangential_on_the_circle() {
        // On the unit circle the radial derivative vanishes: the circle is the
        // MEP, so the gradient has no component perpendicular to the path.
        let pes = V1Surface;
        for k in 0..36 {
            let th = k as f64 * std::f64::consts::PI / 18.0;
            let p = vec2(th.cos(), th.sin());
            let g = pes.gradient(&p).unwrap();
            let radial = g.dot(&p);
            assert!(radial.abs() < 1e-10, "radial residual {radial:e} at {th}");
        }
    }
}
