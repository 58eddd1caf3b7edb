//! The spring pair and the force decomposition it induces.
//!
//! Two configuration-space points joined by a fictitious spring of natural
//! length `l_s` form the walker's entire state. The spring direction splits
//! forces into parallel and perpendicular parts; drifting consumes the
//! perpendicular part, climbing the parallel one.

use thiserror::Error;

use crate::num::{adaptive_tol, Scalar};
use crate::vector::StateVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    /// The two particles coincide; the spring direction is undefined.
    /// Drivers respond by re-perturbing the second particle.
    #[error("degenerate spring: particles coincide, direction undefined")]
    DegenerateSpring,
    /// A decomposition was requested against a non-unit direction.
    #[error("direction is not unit norm")]
    NonUnitDirection,
    /// The two particles live in different configuration spaces.
    #[error("spring pair dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    /// The natural length must be strictly positive.
    #[error("natural spring length must be > 0")]
    NonPositiveLength,
}

/// Two particles joined by a spring of natural length `l_s`.
#[derive(Clone, Debug)]
pub struct SpringPair<F> {
    pub r1: StateVector<F>,
    pub r2: StateVector<F>,
    pub natural_length: F,
}

impl<F: Scalar> SpringPair<F> {
    pub fn new(
        r1: StateVector<F>,
        r2: StateVector<F>,
        natural_length: F,
    ) -> Result<Self, PairError> {
        if r1.dim() != r2.dim() {
            return Err(PairError::DimensionMismatch(r1.dim(), r2.dim()));
        }
        if natural_length <= F::zero() {
            return Err(PairError::NonPositiveLength);
        }
        Ok(Self {
            r1,
            r2,
            natural_length,
        })
    }

    /// Canonical initial pair: `r2 = r1 + size * direction/|direction|`, so
    /// `size` is the true separation regardless of how `direction` is scaled.
    pub fn from_perturbation(
        r1: StateVector<F>,
        direction: &StateVector<F>,
        size: F,
        natural_length: F,
    ) -> Result<Self, PairError> {
        let unit = direction.normalized().ok_or(PairError::DegenerateSpring)?;
        let r2 = r1.add_scaled(size, &unit);
        Self::new(r1, r2, natural_length)
    }

    /// Current spring length `d_s = |r1 − r2|`.
    pub fn separation(&self) -> F {
        self.r1.distance(&self.r2)
    }

    /// Unit spring direction `v = (r2 − r1)/|r2 − r1|`.
    pub fn direction(&self) -> Result<StateVector<F>, PairError> {
        (&self.r2 - &self.r1)
            .normalized()
            .ok_or(PairError::DegenerateSpring)
    }

    /// Spring force on each particle:
    ///
    /// ```text
    /// F_s(r1) = (d_s − l_s)(r2 − r1),    F_s(r2) = (d_s − l_s)(r1 − r2).
    /// ```
    ///
    /// The multiplier acts on the unnormalized difference vector, so the force
    /// magnitude is `(d_s − l_s)·d_s`, not the Hookean `(d_s − l_s)`. A
    /// compressed spring (`d_s < l_s`) separates the particles, a stretched
    /// one pulls them together; a zero-length spring yields zero force.
    pub fn spring_force(&self) -> (StateVector<F>, StateVector<F>) {
        let diff = &self.r2 - &self.r1;
        let stretch = diff.norm() - self.natural_length;
        let on_r1 = diff.scaled(stretch);
        let on_r2 = on_r1.scaled(-F::one());
        (on_r1, on_r2)
    }
}

/// A force split into components parallel and perpendicular to a direction.
#[derive(Clone, Debug)]
pub struct ForceSplit<F> {
    pub parallel: StateVector<F>,
    pub perpendicular: StateVector<F>,
}

/// Projects `force` onto a unit `direction`:
///
/// ```text
/// F_par  = (F · v) v,    F_perp = F − F_par.
/// ```
///
/// Fails with [`PairError::NonUnitDirection`] if `|v|` deviates from 1 by
/// more than 1e-8.
pub fn decompose_force<F: Scalar>(
    force: &StateVector<F>,
    direction: &StateVector<F>,
) -> Result<ForceSplit<F>, PairError> {
    let tol: F = adaptive_tol(1e-8);
    if (direction.norm() - F::one()).abs() > tol {
        return Err(PairError::NonUnitDirection);
    }
    let along = force.dot(direction);
    let parallel = direction.scaled(along);
    let perpendicular = force.add_scaled(-F::one(), &parallel);
    Ok(ForceSplit {
        parallel,
        perpendicular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::vec2;

    #[test]
    fn direction_axis_aligned() {
        let pair = SpringPair::new(vec2(0.0f64, 0.0), vec2(0.02, 0.0), 0.01).unwrap();
        let v = pair.direction().unwrap();
        assert!((v[0] - 1.0).abs() < 1e-12);
        assert!(v[1].abs() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn direction_diagonal() {
        let pair = SpringPair::new(vec2(1.0f64, 1.0), vec2(2.0, 2.0), 0.01).unwrap();
        let v = pair.direction().unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert!((v[0] - s).abs() < 1e-12);
        assert!((v[1] - s).abs() < 1e-12);
    }

    #[test]
    fn direction_degenerate() {
        let pair = SpringPair::new(vec2(0.0f64, 0.0), vec2(0.0, 0.0), 0.01).unwrap();
        assert_eq!(pair.direction(), Err(PairError::DegenerateSpring));
    }

    #[test]
    fn spring_force_stretched() {
        // d_s = 0.02, l_s = 0.01: magnitude (d_s - l_s) * d_s = 2e-4, pulling together.
        let pair = SpringPair::new(vec2(0.0f64, 0.0), vec2(0.02, 0.0), 0.01).unwrap();
        let (f1, f2) = pair.spring_force();
        assert!((f1[0] - 2e-4).abs() < 1e-18);
        assert_eq!(f1[1], 0.0);
        // Exact negation, bitwise.
        assert_eq!(f1.scaled(-1.0).as_slice(), f2.as_slice());
    }

    #[test]
    fn spring_force_relaxed_is_zero() {
        let pair = SpringPair::new(vec2(0.0f64, 0.0), vec2(0.01, 0.0), 0.01).unwrap();
        let (f1, f2) = pair.spring_force();
        assert!(f1.norm() < 1e-18);
        assert!(f2.norm() < 1e-18);
    }

    #[test]
    fn spring_force_compressed_separates() {
        // d_s = 0.005 < l_s: force on r1 points away from r2.
        let pair = SpringPair::new(vec2(0.0f64, 0.0), vec2(0.005, 0.0), 0.01).unwrap();
        let (f1, _) = pair.spring_force();
        assert!((f1[0] - (-2.5e-5)).abs() < 1e-18);
    }

    #[test]
    fn decompose_axis() {
        let split = decompose_force(&vec2(1.0f64, 1.0), &vec2(1.0, 0.0)).unwrap();
        assert_eq!(split.parallel.as_slice(), &[1.0, 0.0]);
        assert_eq!(split.perpendicular.as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn decompose_parallel_force() {
        let v = vec2(0.6f64, 0.8);
        let split = decompose_force(&v.scaled(3.0), &v).unwrap();
        assert!(split.perpendicular.norm() < 1e-12);
    }

    #[test]
    fn decompose_diagonal_projection() {
        // Pure projection arithmetic: F = (0, -2) against v = (1,1)/sqrt(2).
        let s = 1.0 / 2.0f64.sqrt();
        let split = decompose_force(&vec2(0.0, -2.0), &vec2(s, s)).unwrap();
        assert!((split.parallel[0] - (-1.0)).abs() < 1e-12);
        assert!((split.parallel[1] - (-1.0)).abs() < 1e-12);
        assert!((split.perpendicular[0] - 1.0).abs() < 1e-12);
        assert!((split.perpendicular[1] - (-1.0)).abs() < 1e-12);
    }

    #[test]
    fn decompose_rejects_non_unit() {
        assert_eq!(
            decompose_force(&vec2(1.0f64, 0.0), &vec2(1.0, 1.0)).err(),
            Some(PairError::NonUnitDirection)
        );
    }

    #[test]
    fn perturbation_constructor_normalizes() {
        let pair = SpringPair::from_perturbation(vec2(0.0f64, -1.0), &vec2(0.4, 1.0), 0.3, 0.01)
            .unwrap();
        assert!((pair.separation() - 0.3).abs() < 1e-12);
    }
}
