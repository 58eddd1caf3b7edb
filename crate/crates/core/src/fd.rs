//! Finite-difference probes of a surface: the gradient oracle used to verify
//! every analytic gradient in the crate, and the directional curvature
//! estimate behind index-1 verification.

use crate::num::Scalar;
use crate::pes::{PesError, PotentialSurface};
use crate::vector::StateVector;

/// Central-difference gradient: component i is
/// `[E(x + h e_i) − E(x − h e_i)] / (2h)`.
///
/// Exact for quadratics; `h = 1e-6` is the default for gradient checks.
pub fn fd_gradient<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    x: &StateVector<F>,
    h: F,
) -> Result<StateVector<F>, PesError> {
    assert!(h > F::zero(), "finite-difference step must be > 0");
    let mut probe = x.clone();
    let mut grad = Vec::with_capacity(x.dim());
    let two_h = h + h;
    for i in 0..x.dim() {
        let orig = x[i];
        probe.as_mut_slice()[i] = orig + h;
        let plus = pes.energy(&probe)?;
        probe.as_mut_slice()[i] = orig - h;
        let minus = pes.energy(&probe)?;
        probe.as_mut_slice()[i] = orig;
        grad.push((plus - minus) / two_h);
    }
    Ok(StateVector::new(grad).expect("finite energies produce finite differences"))
}

/// Second directional derivative estimate along a unit direction `v`:
/// `[E(x + h v) − 2 E(x) + E(x − h v)] / h²`.
///
/// Negative curvature along the converged spring direction is the index-1
/// necessary condition checked on every reported saddle. Curvature loses
/// more precision to cancellation than the gradient, so `h = 1e-4` is the
/// default here.
pub fn directional_curvature<F: Scalar>(
    pes: &dyn PotentialSurface<F>,
    x: &StateVector<F>,
    v: &StateVector<F>,
    h: F,
) -> Result<F, PesError> {
    assert!(h > F::zero(), "finite-difference step must be > 0");
    let plus = pes.energy(&x.add_scaled(h, v))?;
    let center = pes.energy(x)?;
    let minus = pes.energy(&x.add_scaled(-h, v))?;
    Ok((plus - (center + center) + minus) / (h * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::vec2;

    /// E(x) = |x|^2 / 2, the exact-for-quadratics reference surface.
    struct Bowl {
        dim: usize,
    }

    impl PotentialSurface<f64> for Bowl {
        fn dimension(&self) -> usize {
            self.dim
        }

        fn energy(&self, x: &StateVector<f64>) -> Result<f64, PesError> {
            Ok(0.5 * x.norm_squared())
        }

        fn gradient(&self, x: &StateVector<f64>) -> Result<StateVector<f64>, PesError> {
            Ok(x.clone())
        }
    }

    #[test]
    fn quadratic_gradient_is_exact() {
        // No truncation error on a quadratic; h large enough that roundoff
        // in the energy difference stays below the assertion.
        let bowl = Bowl { dim: 4 };
        let x = StateVector::new(vec![0.3, -1.2, 2.0, 0.7]).unwrap();
        let g = fd_gradient(&bowl, &x, 1e-4).unwrap();
        for i in 0..4 {
            assert!((g[i] - x[i]).abs() < 1e-10, "component {i}");
        }
    }

    #[test]
    fn quadratic_curvature_is_one() {
        let bowl = Bowl { dim: 2 };
        let x = vec2(0.4, -0.9);
        let v = vec2(0.6, 0.8);
        let c = directional_curvature(&bowl, &x, &v, 1e-4).unwrap();
        assert!((c - 1.0).abs() < 1e-6);
    }
}
