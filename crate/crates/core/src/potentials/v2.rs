//! Modified Neria–Fischer–Karplus surface
//!
//! ```text
//! V2(x1, x2) = 0.06 (x1² + x2²)² + x1 x2
//!              − 9 exp(−(x1−3)² − x2²) − 9 exp(−(x1+3)² − x2²)
//! ```
//!
//! Two Gaussian wells near (±3, ∓δ) joined through an index-1 saddle near the
//! origin; the minimum energy path takes two sharp right-angle turns, which
//! makes this surface a stress test for walkers that follow local curvature.
//! Smooth everywhere and bounded below; invariant under (x1, x2) → (−x1, −x2).

use crate::num::{cast, Scalar};
use crate::pes::{PesError, PotentialSurface};
use crate::vector::{vec2, StateVector};

#[derive(Clone, Copy, Debug, Default)]
pub struct V2Surface;

impl<F: Scalar> PotentialSurface<F> for V2Surface {
    fn dimension(&self) -> usize {
        2
    }

    fn energy(&self, x: &StateVector<F>) -> Result<F, PesError> {
        self.check_dimension(x)?;
        let (x1, x2) = (x[0], x[1]);
        let r2 = x1 * x1 + x2 * x2;
        let quart: F = cast::<F>(0.06) * r2 * r2;
        let three: F = cast(3.0);
        let nine: F = cast(9.0);
        let gm = (-(x1 - three) * (x1 - three) - x2 * x2).exp();
        let gp = (-(x1 + three) * (x1 + three) - x2 * x2).exp();
        Ok(quart + x1 * x2 - nine * gm - nine * gp)
    }

    fn gradient(&self, x: &StateVector<F>) -> Result<StateVector<F>, PesError> {
        self.check_dimension(x)?;
        let (x1, x2) = (x[0], x[1]);
        let r2 = x1 * x1 + x2 * x2;
        let c: F = cast(0.24);
        let three: F = cast(3.0);
        let eighteen: F = cast(18.0);
        let gm = (-(x1 - three) * (x1 - three) - x2 * x2).exp();
        let gp = (-(x1 + three) * (x1 + three) - x2 * x2).exp();
        let g1 = c * x1 * r2 + x2 + eighteen * ((x1 - three) * gm + (x1 + three) * gp);
        let g2 = c * x2 * r2 + x1 + eighteen * x2 * (gm + gp);
        Ok(vec2(g1, g2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::fd_gradient;

    #[test]
    fn energy_at_origin() {
        // 0 + 0 - 9 e^-9 - 9 e^-9
        let e = V2Surface.energy(&vec2(0.0f64, 0.0)).unwrap();
        let expected = -18.0 * (-9.0f64).exp();
        assert!((e - expected).abs() < 1e-15);
        assert!((e - (-0.002222)).abs() < 1e-6);
    }

    #[test]
    fn origin_is_stationary() {
        let g = V2Surface.gradient(&vec2(0.0f64, 0.0)).unwrap();
        assert!(g.norm() < 1e-15);
    }

    #[test]
    fn inversion_symmetry() {
        let pes = V2Surface;
        let mut state = 88172645463325252u64;
        let mut next = || {
            // xorshift, plenty for test point scattering
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 8.0 - 4.0
        };
        for _ in 0..100 {
            let (a, b) = (next(), next());
            let e1 = pes.energy(&vec2(a, b)).unwrap();
            let e2 = pes.energy(&vec2(-a, -b)).unwrap();
            assert!((e1 - e2).abs() <= 1e-12 * e1.abs().max(1.0));
        }
    }

    #[test]
    fn gradient_matches_fd_at_well() {
        let pes = V2Surface;
        let p = vec2(2.7f64, -0.3);
        let g = pes.gradient(&p).unwrap();
        let fd = fd_gradient(&pes, &p, 1e-6).unwrap();
        assert!((&g - &fd).norm() < 1e-6 * g.norm().max(1.0));
    }
}
