//! Shared helpers for the integration suites: seeded random quadratic forms
//! used as smooth reference surfaces.

// Each test binary uses a different subset of these helpers.
#![allow(dead_code)]

use spm_core::spm::{ChaCha8Rng, SeedableRng};
use spm_core::{PesError, PotentialSurface, StateVector};

/// Quadratic form E(x) = ½ Σ λ_i (x · b_i)² over a seeded random orthonormal
/// basis. The analytic gradient is exact, which makes it the reference
/// surface for walker and decomposition checks.
pub struct RandomQuadratic {
    pub basis: Vec<StateVector<f64>>,
    pub eigenvalues: Vec<f64>,
}

impl RandomQuadratic {
    pub fn new(dim: usize, eigenvalues: Vec<f64>, seed: u64) -> Self {
        assert_eq!(dim, eigenvalues.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut basis: Vec<StateVector<f64>> = Vec::with_capacity(dim);
        while basis.len() < dim {
            let mut v = spm_core::spm::random_unit_vector::<f64>(dim, &mut rng);
            for b in &basis {
                let overlap = v.dot(b);
                v = v.add_scaled(-overlap, b);
            }
            if v.norm() > 1e-6 {
                basis.push(v.normalized().unwrap());
            }
        }
        Self { basis, eigenvalues }
    }

    /// Index-1 saddle: one random negative eigenvalue, the rest positive.
    pub fn saddle(dim: usize, seed: u64) -> Self {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5add1e);
        let mut eigenvalues: Vec<f64> = (0..dim).map(|_| rng.random_range(0.5..2.0)).collect();
        eigenvalues[0] = -rng.random_range(0.5..2.0f64);
        Self::new(dim, eigenvalues, seed)
    }

    pub fn unstable_mode(&self) -> &StateVector<f64> {
        &self.basis[0]
    }
}

impl PotentialSurface<f64> for RandomQuadratic {
    fn dimension(&self) -> usize {
        self.basis.len()
    }

    fn energy(&self, x: &StateVector<f64>) -> Result<f64, PesError> {
        Ok(self
            .basis
            .iter()
            .zip(&self.eigenvalues)
            .map(|(b, &lam)| {
                let c = x.dot(b);
                0.5 * lam * c * c
            })
            .sum())
    }

    fn gradient(&self, x: &StateVector<f64>) -> Result<StateVector<f64>, PesError> {
        let mut g = StateVector::zeros(x.dim());
        for (b, &lam) in self.basis.iter().zip(&self.eigenvalues) {
            g.add_scaled_assign(lam * x.dot(b), b);
        }
        Ok(g)
    }
}
